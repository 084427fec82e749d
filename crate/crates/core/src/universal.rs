//! The universal property of rooted trees: for a cocycle `L` on `K[x]`
//! there is a unique algebra morphism `ρ_L` with `ρ_L∘B₊ = L∘ρ_L`.
//! Also the automorphisms `χ_α = ρ_{B₊+∂α}` of the tree algebra itself.

use std::fmt;
use std::sync::Arc;

use crate::conv::{LinMap, MapKind};
use crate::error::{Error, Result};
use crate::forests::Forest;
use crate::hopf::{basis_coproduct, HElem};
use crate::polyhopf::{coboundary, int0, PolyFunctional};
use crate::rings::{int, Polynomial, Rational, Ring, Symbol};

/// The operator `scale·∫₀ + ∂alpha` on `K[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleSpec {
    pub scale: Polynomial,
    /// `None` is the zero functional, valid in every degree.
    pub alpha: Option<PolyFunctional>,
}

impl CocycleSpec {
    pub fn new(scale: Polynomial, alpha: PolyFunctional) -> Self {
        CocycleSpec {
            scale,
            alpha: Some(alpha),
        }
    }

    /// Plain `∫₀`.
    pub fn integral() -> Self {
        CocycleSpec {
            scale: Polynomial::one(),
            alpha: None,
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let base = &int0(p) * &self.scale;
        match &self.alpha {
            Some(alpha) => Ok(&base + &coboundary(alpha, p)?),
            None => Ok(base),
        }
    }

    /// `self + ∂beta`, with values added degree by degree.
    pub fn twisted(&self, beta: &PolyFunctional) -> Self {
        let Some(own) = &self.alpha else {
            return Self::new(self.scale.clone(), beta.clone());
        };
        let n = own.values().len().min(beta.values().len());
        let values = (0..n)
            .map(|i| {
                let a = own.values()[i].clone();
                let b = beta.values()[i].clone();
                &a + &b
            })
            .collect();
        Self::new(self.scale.clone(), PolyFunctional::new(values))
    }
}

/// `ρ_L` as a memoized character into `K[x]`.
pub fn rho_map(spec: &CocycleSpec) -> LinMap<Polynomial> {
    let spec = spec.clone();
    LinMap::recursive("ρ", MapKind::Character, move |me, f| match f.trees() {
        [] => Ok(Polynomial::one()),
        [t] => spec.apply(&me.value(&t.branches())?),
        trees => trees
            .iter()
            .try_fold(Polynomial::one(), |acc, t| Ok(&acc * &me.value(&t.to_forest())?)),
    })
}

pub fn rho(spec: &CocycleSpec, f: &Forest) -> Result<Polynomial> {
    rho_map(spec).value(f)
}

/// The rules `φˣ(f) = x^{|f|}/f!`, i.e. `ρ_{∫₀}` in closed form.
pub fn int_rules() -> LinMap<Polynomial> {
    LinMap::character("φˣ", |t| {
        Ok(Polynomial::var(Symbol::X)
            .pow(t.size() as u32)
            .scale(&(int(1) / t.factorial())))
    })
}

/// `φˣ` evaluated at `x = a`: `a^{|f|}/f!`.
pub fn int_rules_at(a: Rational) -> LinMap<Rational> {
    LinMap::character(format!("φˣ[{a}]"), move |t| {
        let mut v = int(1);
        for _ in 0..t.size() {
            v *= &a;
        }
        Ok(v / t.factorial())
    })
}

type Eval<C> = dyn Fn(&Forest) -> Result<C> + Send + Sync;

/// A linear functional on the tree algebra, certified up to a node count.
pub struct HFunctional<C: Ring> {
    eval: Arc<Eval<C>>,
    certified: usize,
}

impl<C: Ring> Clone for HFunctional<C> {
    fn clone(&self) -> Self {
        HFunctional {
            eval: self.eval.clone(),
            certified: self.certified,
        }
    }
}

impl<C: Ring> fmt::Debug for HFunctional<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HFunctional(certified {})", self.certified)
    }
}

impl<C: Ring> HFunctional<C> {
    pub fn from_fn(certified: usize, eval: impl Fn(&Forest) -> Result<C> + Send + Sync + 'static) -> Self {
        HFunctional {
            eval: Arc::new(eval),
            certified,
        }
    }

    /// Listed values; every other forest within the certified degree maps to 0.
    pub fn from_table(entries: impl IntoIterator<Item = (Forest, C)>, certified: usize) -> Self {
        let table: std::collections::HashMap<Forest, C> = entries.into_iter().collect();
        Self::from_fn(certified, move |f| Ok(table.get(f).cloned().unwrap_or_else(C::zero)))
    }

    pub fn zero(certified: usize) -> Self {
        Self::from_fn(certified, |_| Ok(C::zero()))
    }

    pub fn certified(&self) -> usize {
        self.certified
    }

    pub fn value(&self, f: &Forest) -> Result<C> {
        if f.nodes() > self.certified {
            return Err(Error::DegreeExceeded {
                needed: f.nodes(),
                certified: self.certified,
            });
        }
        (self.eval)(f)
    }

    pub fn apply(&self, x: &HElem<C>) -> Result<C> {
        x.terms()
            .try_fold(C::zero(), |acc, (f, c)| Ok(acc.plus(&self.value(f)?.times(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::from_fn(self.certified.min(other.certified), move |f| {
            Ok(a.value(f)?.plus(&b.value(f)?))
        })
    }

    pub fn neg(&self) -> Self {
        let a = self.clone();
        Self::from_fn(self.certified, move |f| Ok(a.value(f)?.negate()))
    }

    /// `self ∘ m` for a linear map `m` of the tree algebra.
    pub fn compose(&self, m: &LinMap<HElem<C>>) -> Self {
        let (a, m) = (self.clone(), m.clone());
        Self::from_fn(self.certified, move |f| a.apply(&m.value(f)?))
    }
}

/// `∂α(y) = Σ_{P≠1} P·α(R)` over the cuts of every term of `y`.
pub fn coboundary_hr<C: Ring>(alpha: &HFunctional<C>, y: &HElem<C>) -> Result<HElem<C>> {
    let mut out = HElem::zero();
    for (g, c) in y.terms() {
        for (p, r, m) in basis_coproduct(g).iter() {
            if !p.is_one() {
                out.add_term(p.clone(), alpha.value(r)?.times(c).scale(&int(*m as i64)));
            }
        }
    }
    Ok(out)
}

/// `χ_α`: the algebra endomorphism with `χ_α∘B₊ = (B₊ + ∂α)∘χ_α`.
pub fn chi_map<C: Ring>(alpha: &HFunctional<C>) -> LinMap<HElem<C>> {
    let alpha = alpha.clone();
    LinMap::recursive("χ", MapKind::Character, move |me, f| match f.trees() {
        [] => Ok(HElem::one()),
        [t] => {
            let y = me.value(&t.branches())?;
            Ok(y.b_plus().add(&coboundary_hr(&alpha, &y)?))
        }
        trees => trees
            .iter()
            .try_fold(HElem::one(), |acc, t| Ok(acc.mul(&me.value(&t.to_forest())?))),
    })
}

pub fn chi<C: Ring>(alpha: &HFunctional<C>, x: &HElem<C>) -> Result<HElem<C>> {
    let m = chi_map(alpha);
    m.apply(x, |c| HElem::term(Forest::one(), c.clone()))
}

/// `α^{⊛-1} = -α∘χ_α`.
pub fn auto_inverse<C: Ring>(alpha: &HFunctional<C>) -> HFunctional<C> {
    alpha.compose(&chi_map(alpha)).neg()
}

/// `χ_α⁻¹ = χ_{α^{⊛-1}}`.
pub fn chi_inverse_map<C: Ring>(alpha: &HFunctional<C>) -> LinMap<HElem<C>> {
    chi_map(&auto_inverse(alpha))
}

/// `α⊛β = α + β∘χ_α⁻¹`, so that `χ_{α⊛β} = χ_α∘χ_β`.
pub fn auto_compose<C: Ring>(alpha: &HFunctional<C>, beta: &HFunctional<C>) -> HFunctional<C> {
    alpha.add(&beta.compose(&chi_inverse_map(alpha)))
}

/// The pullback `α∘ρ_L` of a functional on `K[x]`.
pub fn pullback(alpha: &PolyFunctional, rho: &LinMap<Polynomial>) -> HFunctional<Polynomial> {
    let (a, r) = (alpha.clone(), rho.clone());
    let certified = alpha.certified().unwrap_or(0);
    HFunctional::from_fn(certified, move |f| a.apply(&r.value(f)?))
}
