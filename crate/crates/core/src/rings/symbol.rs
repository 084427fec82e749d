use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The fixed symbol universe of the polynomial ring.
///
/// Variant order is the monomial order: Mellin coefficients by index,
/// then the logarithms, the polynomial variable and the couplings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// `c_n`, the Laurent coefficients of the Mellin transform (`n >= -1`).
    Mellin(i32),
    /// `ln s`.
    LogS,
    /// `ln mu`.
    LogMu,
    /// `L = ln(s/mu)`.
    LogRatio,
    /// The variable of the polynomial Hopf algebra.
    X,
    /// The Dyson-Schwinger coupling.
    Alpha,
    /// Free parameters (`a0`, `a1`, ...) for symbolic functional values.
    Param(u32),
}

impl Symbol {
    pub fn mellin(n: i32) -> Symbol {
        assert!(n >= -1, "Mellin coefficient index must be >= -1");
        Symbol::Mellin(n)
    }

    pub fn is_log(self) -> bool {
        matches!(self, Symbol::LogS | Symbol::LogMu | Symbol::LogRatio)
    }

    pub fn latex(self) -> String {
        match self {
            Symbol::Mellin(n) => format!("c_{{{n}}}"),
            Symbol::LogS => "\\ln s".into(),
            Symbol::LogMu => "\\ln\\mu".into(),
            Symbol::LogRatio => "L".into(),
            Symbol::X => "x".into(),
            Symbol::Alpha => "\\alpha".into(),
            Symbol::Param(i) => format!("a_{{{i}}}"),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Mellin(n) => write!(f, "c{n}"),
            Symbol::LogS => f.write_str("Ls"),
            Symbol::LogMu => f.write_str("Lmu"),
            Symbol::LogRatio => f.write_str("L"),
            Symbol::X => f.write_str("x"),
            Symbol::Alpha => f.write_str("alpha"),
            Symbol::Param(i) => write!(f, "a{i}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("unknown symbol `{s}`"));
        match s {
            "Ls" => Ok(Symbol::LogS),
            "Lmu" => Ok(Symbol::LogMu),
            "L" => Ok(Symbol::LogRatio),
            "x" => Ok(Symbol::X),
            "alpha" => Ok(Symbol::Alpha),
            _ => {
                if let Some(rest) = s.strip_prefix('c') {
                    let n: i32 = rest.parse().map_err(|_| bad())?;
                    if n < -1 || (rest.starts_with('+')) {
                        return Err(bad());
                    }
                    Ok(Symbol::Mellin(n))
                } else if let Some(rest) = s.strip_prefix('a') {
                    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(bad());
                    }
                    Ok(Symbol::Param(rest.parse().map_err(|_| bad())?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}
