//! The polynomial Hopf algebra `K[x]`, with `x` primitive.
//!
//! Elements are [`Polynomial`]s in which [`Symbol::X`] is the variable and
//! every other symbol belongs to the coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::rings::{rat, Polynomial, Rational, Symbol};

const X: Symbol = Symbol::X;

fn binom(n: u32, k: u32) -> Rational {
    Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

fn x_pow(n: u32) -> Polynomial {
    Polynomial::var(X).pow(n)
}

/// Element of `K[x] ⊗ K[x]`: coefficient of `x^i ⊗ x^j` at key `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyTensor {
    terms: BTreeMap<(u32, u32), Polynomial>,
}

impl PolyTensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Polynomial) {
        let e = self.terms.entry((i, j)).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// `a ⊗ b`.
    pub fn pure(a: &Polynomial, b: &Polynomial) -> Self {
        let mut t = Self::zero();
        for (i, ca) in a.powers_of(X).into_iter().enumerate() {
            for (j, cb) in b.powers_of(X).iter().enumerate() {
                t.add_term(i as u32, j as u32, &ca * cb);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn coefficient(&self, i: u32, j: u32) -> Polynomial {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Polynomial)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    /// `(id ⊗ g)` applied termwise.
    pub fn map_right(&self, g: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let right = &g(&x_pow(j))? * c;
            out = out.add(&PolyTensor::pure(&x_pow(i), &right));
        }
        Ok(out)
    }

    /// `(f ⊗ g)` into the coefficients, then multiplication.
    pub fn contract(
        &self,
        f: impl Fn(&Polynomial) -> Result<Polynomial>,
        g: impl Fn(&Polynomial) -> Result<Polynomial>,
    ) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (&(i, j), c) in &self.terms {
            acc = &acc + &(&(&f(&x_pow(i))? * &g(&x_pow(j))?) * c);
        }
        Ok(acc)
    }
}

impl fmt::Display for PolyTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let show = |n: u32| match n {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{n}"),
        };
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|a, b| b.0 .0.cmp(&a.0 .0).then(a.0 .1.cmp(&b.0 .1)));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|(&(i, j), c)| {
                let basis = format!("{}⊗{}", show(i), show(j));
                if *c == Polynomial::one() {
                    basis
                } else {
                    format!("{}*{basis}", c.grouped())
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Δ(x^n) = Σ_i C(n,i) x^i ⊗ x^{n-i}`, extended linearly.
pub fn poly_coproduct(p: &Polynomial) -> PolyTensor {
    let mut t = PolyTensor::zero();
    for (n, c) in p.powers_of(X).into_iter().enumerate() {
        let n = n as u32;
        for i in 0..=n {
            t.add_term(i, n - i, c.scale(&binom(n, i)));
        }
    }
    t
}

/// `x^n ↦ x^{n+1}/(n+1)`.
pub fn int0(p: &Polynomial) -> Polynomial {
    let parts = p.powers_of(X);
    let mut shifted = vec![Polynomial::zero()];
    for (n, c) in parts.into_iter().enumerate() {
        shifted.push(c.scale(&rat(1, n as i64 + 1)));
    }
    Polynomial::from_powers(X, &shifted)
}

/// A functional on `K[x]` given by its values on `1, x, ..., x^N`.
/// Queries beyond `N` are errors.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFunctional {
    values: Vec<Polynomial>,
}

impl PolyFunctional {
    /// Values `α(x^n)` for `n = 0 .. values.len() - 1`.
    pub fn new(values: Vec<Polynomial>) -> Self {
        PolyFunctional { values }
    }

    pub fn from_rationals(values: &[Rational]) -> Self {
        Self::new(values.iter().cloned().map(Polynomial::constant).collect())
    }

    pub fn zero(certified: usize) -> Self {
        Self::new(vec![Polynomial::zero(); certified + 1])
    }

    /// Free parameters `a0, a1, ...` as values, certified to `certified`.
    pub fn symbolic(certified: usize) -> Self {
        Self::new((0..=certified as u32).map(|i| Polynomial::var(Symbol::Param(i))).collect())
    }

    /// Highest certified degree; `None` when no value is known.
    pub fn certified(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    pub fn at(&self, n: usize) -> Result<&Polynomial> {
        self.values.get(n).ok_or(Error::DegreeExceeded {
            needed: n,
            certified: self.values.len().saturating_sub(1),
        })
    }

    /// Linear extension in `x`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut acc = Polynomial::zero();
        for (n, c) in p.powers_of(X).into_iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&c * self.at(n)?);
            }
        }
        Ok(acc)
    }
}

/// `∂α(x^n) = Σ_{k<n} C(n,k) α(x^k) x^{n-k}`, extended linearly.
pub fn coboundary(alpha: &PolyFunctional, p: &Polynomial) -> Result<Polynomial> {
    let mut acc = Polynomial::zero();
    for (n, c) in p.powers_of(X).into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let n = n as u32;
        for k in 0..n {
            let term = &(alpha.at(k as usize)? * &x_pow(n - k)).scale(&binom(n, k)) * &c;
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

/// `ev_a(p) = p(a)`.
pub fn ev(a: &Polynomial, p: &Polynomial) -> Polynomial {
    p.substitute(X, a)
}

/// The coefficient of `x^1`.
pub fn d0(p: &Polynomial) -> Polynomial {
    p.coefficient_of(X, 1)
}

/// `(f ⋆ g)(p)` for functionals on `K[x]`.
pub fn poly_convolve(
    f: impl Fn(&Polynomial) -> Result<Polynomial>,
    g: impl Fn(&Polynomial) -> Result<Polynomial>,
    p: &Polynomial,
) -> Result<Polynomial> {
    poly_coproduct(p).contract(f, g)
}

/// First `n <= max_n` where `Δ∘L = L⊗1 + (id⊗L)∘Δ` fails on `x^n`.
pub fn cocycle_defect(
    l: impl Fn(&Polynomial) -> Result<Polynomial>,
    max_n: u32,
) -> Result<Option<u32>> {
    for n in 0..=max_n {
        let xn = x_pow(n);
        let ln = l(&xn)?;
        let lhs = poly_coproduct(&ln);
        let rhs = PolyTensor::pure(&ln, &Polynomial::one()).add(&poly_coproduct(&xn).map_right(&l)?);
        if lhs != rhs {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Splits a cocycle as `L = λ∫₀ + ∂α` with `α` certified to degree
/// `max_n - 1`, following the inductive construction: at each step the
/// primitive remainder `λ'x` of `(L - λ∫₀ - ∂α)(x^{N+1})` is absorbed by
/// adding `λ'/(N+1)` to `α(x^N)`.
pub fn decompose_cocycle(
    l: impl Fn(&Polynomial) -> Result<Polynomial>,
    max_n: u32,
) -> Result<(Polynomial, PolyFunctional)> {
    let l1 = l(&Polynomial::one())?;
    let lambda = l1.coefficient_of(X, 1);
    if l1 != &lambda * &Polynomial::var(X) {
        return Err(Error::Invalid(format!("L(1) = {l1} is not primitive")));
    }
    let mut alpha = PolyFunctional::zero(max_n.saturating_sub(1) as usize);
    for n in 0..max_n {
        let xn1 = x_pow(n + 1);
        let rest = &(&l(&xn1)? - &(&int0(&xn1) * &lambda)) - &coboundary(&alpha, &xn1)?;
        let step = rest.coefficient_of(X, 1);
        if rest != &step * &Polynomial::var(X) {
            return Err(Error::Invalid(format!(
                "not a cocycle: remainder {rest} at x^{} is not primitive",
                n + 1
            )));
        }
        let slot = &mut alpha.values[n as usize];
        *slot = &*slot + &step.scale(&rat(1, n as i64 + 1));
    }
    Ok((lambda, alpha))
}
