use std::fmt;

use num_traits::One;
use serde_json::{json, Value};

use super::{int, Polynomial, Rational, Symbol};
use crate::error::{Error, Result};

/// Truncated Laurent series in the regulator `z` with polynomial
/// coefficients: `sum_k coeffs[k - min_order] z^k + O(z^trunc)`.
///
/// Invariants: no leading or trailing zero coefficients, and no stored
/// coefficient at order `>= trunc`. `trunc == None` means the series is exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    min_order: i64,
    trunc: Option<i64>,
    coeffs: Vec<Polynomial>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

impl LaurentSeries {
    pub fn new(min_order: i64, coeffs: Vec<Polynomial>, trunc: Option<i64>) -> LaurentSeries {
        let mut s = LaurentSeries { min_order, trunc, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(t) = self.trunc {
            let keep = (t - self.min_order).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Polynomial::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_order += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_order = 0;
        }
    }

    pub fn zero() -> LaurentSeries {
        LaurentSeries::new(0, Vec::new(), None)
    }

    pub fn one() -> LaurentSeries {
        LaurentSeries::constant(Polynomial::one())
    }

    pub fn constant(p: Polynomial) -> LaurentSeries {
        LaurentSeries::new(0, vec![p], None)
    }

    /// The exact series `p * z^k`.
    pub fn monomial(p: Polynomial, k: i64) -> LaurentSeries {
        LaurentSeries::new(k, vec![p], None)
    }

    /// `O(z^t)`: the zero series known only below order `t`.
    pub fn big_o(t: i64) -> LaurentSeries {
        LaurentSeries::new(0, Vec::new(), Some(t))
    }

    /// `exp(a z) + O(z^trunc)`.
    pub fn exp_linear(a: &Polynomial, trunc: i64) -> LaurentSeries {
        let mut coeffs = Vec::new();
        let mut term = Polynomial::one();
        for n in 0..trunc.max(0) {
            coeffs.push(term.clone());
            term = (&term * a).scale(&Rational::new(One::one(), (n + 1).into()));
        }
        LaurentSeries::new(0, coeffs, Some(trunc))
    }

    /// `s^{-k z} = exp(-k z ln s) + O(z^trunc)`.
    pub fn scale_power(k: i64, log: Symbol, trunc: i64) -> LaurentSeries {
        LaurentSeries::exp_linear(&Polynomial::var(log).scale(&int(-k)), trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.trunc.is_none()
    }

    /// True when no coefficient below the truncation order is nonzero.
    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn trunc_order(&self) -> Option<i64> {
        self.trunc
    }

    pub fn min_order(&self) -> i64 {
        self.min_order
    }

    /// Order of the first nonzero coefficient; for a truncated zero this is
    /// the truncation order, for the exact zero `None`.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            self.trunc
        } else {
            Some(self.min_order)
        }
    }

    /// Highest order with a stored coefficient.
    pub fn max_order(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.min_order + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Polynomial)> {
        let m = self.min_order;
        self.coeffs.iter().enumerate().map(move |(i, c)| (m + i as i64, c))
    }

    /// Coefficient of `z^k`; fails when `k` lies at or beyond the truncation.
    pub fn coeff(&self, k: i64) -> Result<Polynomial> {
        if let Some(t) = self.trunc {
            if k >= t {
                return Err(Error::OutOfRange { k, trunc: t });
            }
        }
        Ok(self.coeff_unchecked(k))
    }

    fn coeff_unchecked(&self, k: i64) -> Polynomial {
        let i = k - self.min_order;
        if i < 0 || i as usize >= self.coeffs.len() {
            Polynomial::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let trunc = min_opt(self.trunc, other.trunc);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return LaurentSeries::new(0, Vec::new(), trunc);
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.min_order,
            (_, true) => self.min_order,
            _ => self.min_order.min(other.min_order),
        };
        let hi = self.max_order().into_iter().chain(other.max_order()).max().unwrap_or(lo);
        let coeffs = (lo..=hi)
            .map(|k| &self.coeff_unchecked(k) + &other.coeff_unchecked(k))
            .collect();
        LaurentSeries::new(lo, coeffs, trunc)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries {
            min_order: self.min_order,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        self.add(&other.neg())
    }

    /// Product; the result is known up to `min(t_a + v_b, t_b + v_a)`.
    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() || other.is_zero() {
            return LaurentSeries::zero();
        }
        let trunc = min_opt(
            add_opt(self.trunc, other.valuation()),
            add_opt(other.trunc, self.valuation()),
        );
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentSeries::new(0, Vec::new(), trunc);
        }
        let min_order = self.min_order + other.min_order;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let len = match trunc {
            Some(t) => len.min((t - min_order).max(0) as usize),
            None => len,
        };
        let mut coeffs = vec![Polynomial::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        LaurentSeries::new(min_order, coeffs, trunc)
    }

    pub fn scale_poly(&self, p: &Polynomial) -> LaurentSeries {
        self.mul(&LaurentSeries::constant(p.clone()))
    }

    pub fn scale(&self, q: &Rational) -> LaurentSeries {
        self.map_coeffs(|c| c.scale(q))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries::new(self.min_order + k, self.coeffs.clone(), self.trunc.map(|t| t + k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Polynomial) -> Polynomial) -> LaurentSeries {
        LaurentSeries::new(
            self.min_order,
            self.coeffs.iter().map(f).collect(),
            self.trunc,
        )
    }

    pub fn substitute(&self, s: Symbol, value: &Polynomial) -> LaurentSeries {
        self.map_coeffs(|c| c.substitute(s, value))
    }

    /// Lowers the truncation order to `t` (never raises it).
    pub fn truncate(&self, t: i64) -> LaurentSeries {
        LaurentSeries::new(
            self.min_order,
            self.coeffs.clone(),
            min_opt(self.trunc, Some(t)),
        )
    }

    /// `d/dz`; the truncation order drops by one.
    pub fn derivative(&self) -> LaurentSeries {
        let coeffs = self.coeffs().map(|(k, c)| c.scale(&int(k))).collect();
        LaurentSeries::new(self.min_order - 1, coeffs, self.trunc.map(|t| t - 1))
    }

    /// Equality on every order both operands determine.
    pub fn agrees_with(&self, other: &LaurentSeries) -> bool {
        match min_opt(self.trunc, other.trunc) {
            Some(t) => self.truncate(t) == other.truncate(t),
            None => self == other,
        }
    }

    /// The exact principal part `sum_{k<0}`; requires `trunc >= 0`.
    pub fn pole_part(&self) -> Result<LaurentSeries> {
        if let Some(t) = self.trunc {
            if t < 0 {
                return Err(Error::OutOfRange { k: -1, trunc: t });
            }
        }
        let coeffs = self
            .coeffs()
            .filter(|&(k, _)| k < 0)
            .map(|(_, c)| c.clone())
            .collect();
        Ok(LaurentSeries::new(self.min_order, coeffs, None))
    }

    /// Everything of order `>= 0`, keeping the truncation.
    pub fn regular_part(&self) -> LaurentSeries {
        let lo = self.min_order.max(0);
        let coeffs = self
            .coeffs()
            .filter(|&(k, _)| k >= 0)
            .map(|(_, c)| c.clone())
            .collect();
        LaurentSeries::new(lo, coeffs, self.trunc)
    }

    /// Largest `n` with a nonzero `z^{-n}` coefficient (0 if none).
    pub fn pole_order(&self) -> u32 {
        if self.coeffs.is_empty() || self.min_order >= 0 {
            0
        } else {
            (-self.min_order) as u32
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "min_order": self.min_order,
            "trunc_order": self.trunc,
            "coeffs": self.coeffs.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<LaurentSeries> {
        let bad = |m: &str| Error::Parse(format!("series JSON: {m}"));
        let min_order = v["min_order"].as_i64().ok_or_else(|| bad("missing min_order"))?;
        let trunc = match &v["trunc_order"] {
            Value::Null => None,
            t => Some(t.as_i64().ok_or_else(|| bad("bad trunc_order"))?),
        };
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(Polynomial::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentSeries::new(min_order, coeffs, trunc))
    }

    pub fn latex(&self) -> String {
        let mut parts: Vec<String> = self
            .coeffs()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let body = if c.len() > 1 {
                    format!("\\left({}\\right)", c.latex())
                } else {
                    c.latex()
                };
                match k {
                    0 => body,
                    1 => format!("{body} z"),
                    _ => format!("{body} z^{{{k}}}"),
                }
            })
            .collect();
        if let Some(t) = self.trunc {
            parts.push(format!("O(z^{{{t}}})"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.grouped(),
                1 => format!("{}*z", c.grouped()),
                _ => format!("{}*z^{k}", c.grouped()),
            })
            .collect();
        if let Some(t) = self.trunc {
            parts.push(format!("O(z^{t})"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
