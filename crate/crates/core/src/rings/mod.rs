//! Exact coefficient arithmetic.
//!
//! Everything downstream is generic over [`Ring`], a commutative
//! Q-algebra with exact equality. Three carriers are provided:
//! arbitrary-precision [`Rational`]s, multivariate [`Polynomial`]s over a
//! fixed [`Symbol`] universe, and truncated [`LaurentSeries`] in the
//! regulator `z`.

mod polynomial;
mod rational;
mod series;
mod symbol;

pub use polynomial::{Monomial, Polynomial};
pub use rational::{int, parse_rational, rat, rational_to_json, Rational};
pub use series::LaurentSeries;
pub use symbol::Symbol;

use std::fmt;

/// A commutative ring containing the rationals, with exact equality.
///
/// The methods are named to stay clear of the `std::ops` traits, which
/// some implementors also provide for convenience.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn scale(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(q))
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.times(self);
        }
        acc
    }

    /// Sign and magnitude for printing `self` as a multiplier: the
    /// magnitude is parenthesized when it is a compound expression.
    fn display_parts(&self) -> (bool, String);

    /// As [`Ring::display_parts`], in LaTeX.
    fn latex_parts(&self) -> (bool, String);
}

/// Coefficient rings with a text form.
pub trait ParseCoeff: Sized {
    fn parse_coeff(text: &str) -> crate::error::Result<Self>;
}

impl ParseCoeff for Rational {
    fn parse_coeff(text: &str) -> crate::error::Result<Self> {
        parse_rational(text)
    }
}

impl ParseCoeff for Polynomial {
    fn parse_coeff(text: &str) -> crate::error::Result<Self> {
        text.parse()
    }
}

/// Joins `(coefficient, basis text)` pairs as `a*b + c*d - ...`, omitting
/// unit multipliers; `basis == None` stands for the unit element.
pub(crate) fn format_sum<C: Ring>(
    terms: impl IntoIterator<Item = (C, Option<String>)>,
    latex: bool,
) -> String {
    let mut out = String::new();
    for (i, (c, basis)) in terms.into_iter().enumerate() {
        let (neg, mag) = if latex { c.latex_parts() } else { c.display_parts() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        match basis {
            None => out.push_str(&mag),
            Some(b) if mag == "1" => out.push_str(&b),
            Some(b) if latex => {
                out.push_str(&mag);
                out.push_str(" \\, ");
                out.push_str(&b);
            }
            Some(b) => {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&b);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Ring for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negate(&self) -> Self {
        -self
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn display_parts(&self) -> (bool, String) {
        (num_traits::Signed::is_negative(self), num_traits::Signed::abs(self).to_string())
    }

    fn latex_parts(&self) -> (bool, String) {
        let a = num_traits::Signed::abs(self);
        let text = if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
        };
        (num_traits::Signed::is_negative(self), text)
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }

    fn one() -> Self {
        Polynomial::one()
    }

    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negate(&self) -> Self {
        -self
    }

    fn from_rational(q: &Rational) -> Self {
        Polynomial::constant(q.clone())
    }

    fn display_parts(&self) -> (bool, String) {
        match self.single_term_sign() {
            Some(true) => (true, (-self).to_string()),
            Some(false) => (false, self.to_string()),
            None => (false, format!("({self})")),
        }
    }

    fn latex_parts(&self) -> (bool, String) {
        match self.single_term_sign() {
            Some(true) => (true, (-self).latex()),
            Some(false) => (false, self.latex()),
            None => (false, format!("\\left({}\\right)", self.latex())),
        }
    }
}

impl Ring for LaurentSeries {
    fn zero() -> Self {
        LaurentSeries::zero()
    }

    fn one() -> Self {
        LaurentSeries::one()
    }

    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn negate(&self) -> Self {
        self.neg()
    }

    fn from_rational(q: &Rational) -> Self {
        LaurentSeries::constant(Polynomial::constant(q.clone()))
    }

    fn display_parts(&self) -> (bool, String) {
        (false, format!("({self})"))
    }

    fn latex_parts(&self) -> (bool, String) {
        (false, format!("\\left({}\\right)", self.latex()))
    }
}
