//! The convolution algebra `Hom(H, A)` for a commutative target ring `A`.
//!
//! Maps are given on the forest basis and memoized. Maps derived by
//! convolution are evaluated through the coproduct on every forest, never
//! through a character shortcut, so character checks on them are genuine.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::forests::{forests_up_to, Forest, Tree};
use crate::hopf::{antipode_basis, basis_coproduct, HElem};
use crate::rings::{int, Rational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Multiplicative with value 1 on the empty forest.
    Character,
    /// Vanishes on the empty forest and on every proper product.
    Infinitesimal,
    General,
}

type Eval<A> = dyn Fn(&LinMap<A>, &Forest) -> Result<A> + Send + Sync;

struct Inner<A: Ring> {
    name: String,
    kind: MapKind,
    eval: Box<Eval<A>>,
    memo: Mutex<HashMap<Forest, A>>,
}

/// A memoizing linear map from the Hopf algebra into `A`.
pub struct LinMap<A: Ring> {
    inner: Arc<Inner<A>>,
}

impl<A: Ring> Clone for LinMap<A> {
    fn clone(&self) -> Self {
        LinMap {
            inner: self.inner.clone(),
        }
    }
}

impl<A: Ring> fmt::Debug for LinMap<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap({}, {:?})", self.inner.name, self.inner.kind)
    }
}

impl<A: Ring> LinMap<A> {
    /// A map whose evaluator may call back into the map itself.
    pub fn recursive(
        name: impl Into<String>,
        kind: MapKind,
        eval: impl Fn(&LinMap<A>, &Forest) -> Result<A> + Send + Sync + 'static,
    ) -> Self {
        LinMap {
            inner: Arc::new(Inner {
                name: name.into(),
                kind,
                eval: Box::new(eval),
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    pub fn new(
        name: impl Into<String>,
        kind: MapKind,
        eval: impl Fn(&Forest) -> Result<A> + Send + Sync + 'static,
    ) -> Self {
        Self::recursive(name, kind, move |_, f| eval(f))
    }

    /// The character extending `on_tree` multiplicatively.
    pub fn character(
        name: impl Into<String>,
        on_tree: impl Fn(&Tree) -> Result<A> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, MapKind::Character, move |f| {
            f.trees()
                .iter()
                .try_fold(A::one(), |acc, t| Ok(acc.times(&on_tree(t)?)))
        })
    }

    /// The infinitesimal character with the given values on trees.
    pub fn infinitesimal(
        name: impl Into<String>,
        on_tree: impl Fn(&Tree) -> Result<A> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, MapKind::Infinitesimal, move |f| match f.as_tree() {
            Some(t) => on_tree(t),
            None => Ok(A::zero()),
        })
    }

    /// The convolution unit `e = u∘ε`.
    pub fn unit() -> Self {
        Self::new("e", MapKind::Character, |f| {
            Ok(if f.is_one() { A::one() } else { A::zero() })
        })
    }

    /// The zero map.
    pub fn zero() -> Self {
        Self::new("0", MapKind::Infinitesimal, |_| Ok(A::zero()))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn kind(&self) -> MapKind {
        self.inner.kind
    }

    pub fn is_character(&self) -> bool {
        self.inner.kind == MapKind::Character
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.inner.kind == MapKind::Infinitesimal
    }

    pub fn value(&self, f: &Forest) -> Result<A> {
        if let Some(v) = self.lock().get(f) {
            return Ok(v.clone());
        }
        // the lock is released while evaluating so recursive maps can re-enter
        let v = (self.inner.eval)(self, f)?;
        self.lock().insert(f.clone(), v.clone());
        Ok(v)
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<Forest, A>> {
        self.inner.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Linear extension to a combination of forests.
    pub fn apply<C: Ring>(&self, x: &HElem<C>, lift: impl Fn(&C) -> A) -> Result<A> {
        x.terms()
            .try_fold(A::zero(), |acc, (f, c)| Ok(acc.plus(&self.value(f)?.times(&lift(c)))))
    }

    pub fn apply_rational(&self, x: &HElem<Rational>) -> Result<A> {
        self.apply(x, A::from_rational)
    }

    pub fn with_name(&self, name: impl Into<String>, kind: MapKind) -> Self {
        let me = self.clone();
        Self::new(name, kind, move |f| me.value(f))
    }

    /// Post-composition with a ring map `A -> B`.
    pub fn map_values<B: Ring>(
        &self,
        name: impl Into<String>,
        kind: MapKind,
        g: impl Fn(&A) -> B + Send + Sync + 'static,
    ) -> LinMap<B> {
        let me = self.clone();
        LinMap::new(name, kind, move |f| Ok(g(&me.value(f)?)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("({} + {})", self.name(), other.name()),
            MapKind::General,
            move |f| Ok(a.value(f)?.plus(&b.value(f)?)),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("({} - {})", self.name(), other.name()),
            MapKind::General,
            move |f| Ok(a.value(f)?.minus(&b.value(f)?)),
        )
    }

    /// Pointwise multiple; infinitesimal characters stay infinitesimal.
    pub fn scale(&self, c: &A) -> Self {
        let (a, c) = (self.clone(), c.clone());
        let kind = if self.is_infinitesimal() {
            MapKind::Infinitesimal
        } else {
            MapKind::General
        };
        Self::new(format!("{c}·{}", self.name()), kind, move |f| Ok(a.value(f)?.times(&c)))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&A::from_rational(q))
    }

    /// Precomposition with the antipode.
    pub fn compose_antipode(&self) -> Self {
        let a = self.clone();
        let kind = if self.is_character() {
            MapKind::Character
        } else {
            MapKind::General
        };
        Self::new(format!("{}∘S", self.name()), kind, move |f| {
            a.apply_rational(&antipode_basis(f))
        })
    }

    fn require_normalized(&self) -> Result<()> {
        if self.value(&Forest::one())?.is_one() {
            Ok(())
        } else {
            Err(Error::NotNormalized { expected: "1" })
        }
    }

    fn require_augmented(&self) -> Result<()> {
        if self.value(&Forest::one())?.is_zero() {
            Ok(())
        } else {
            Err(Error::NotNormalized { expected: "0" })
        }
    }
}

/// `(f⋆g)(x) = Σ f(P) g(R)` over the cuts of `x`.
pub fn convolve<A: Ring>(f: &LinMap<A>, g: &LinMap<A>) -> LinMap<A> {
    let (a, b) = (f.clone(), g.clone());
    LinMap::new(
        format!("{}⋆{}", f.name(), g.name()),
        MapKind::General,
        move |x| {
            basis_coproduct(x).iter().try_fold(A::zero(), |acc, (p, r, m)| {
                let t = a.value(p)?.times(&b.value(r)?);
                Ok(acc.plus(&t.scale(&int(*m as i64))))
            })
        },
    )
}

/// `φ⁻¹(x) = -φ(x) - Σ φ⁻¹(P) φ(R)` over the reduced coproduct.
pub fn conv_inverse<A: Ring>(f: &LinMap<A>) -> Result<LinMap<A>> {
    f.require_normalized()?;
    let a = f.clone();
    Ok(LinMap::recursive(
        format!("{}⁻¹", f.name()),
        MapKind::General,
        move |me, x| {
            if x.is_one() {
                return Ok(A::one());
            }
            let mut v = a.value(x)?.negate();
            for (p, r, m) in basis_coproduct(x).iter() {
                if p.is_one() || r.is_one() {
                    continue;
                }
                let t = me.value(p)?.times(&a.value(r)?);
                v = v.minus(&t.scale(&int(*m as i64)));
            }
            Ok(v)
        },
    ))
}

/// Convolution powers `g^{⋆0} = e, g^{⋆1}, ...`, built lazily and shared.
pub struct ConvPowers<A: Ring> {
    base: LinMap<A>,
    powers: Mutex<Vec<LinMap<A>>>,
}

impl<A: Ring> ConvPowers<A> {
    pub fn new(base: &LinMap<A>) -> Self {
        ConvPowers {
            base: base.clone(),
            powers: Mutex::new(vec![LinMap::unit()]),
        }
    }

    pub fn power(&self, n: usize) -> LinMap<A> {
        let mut p = self.powers.lock().unwrap_or_else(|e| e.into_inner());
        while p.len() <= n {
            let next = convolve(p.last().expect("starts with e"), &self.base);
            p.push(next);
        }
        p[n].clone()
    }
}

/// `f^{⋆n}` for a non-negative integer `n`.
pub fn conv_pow_int<A: Ring>(f: &LinMap<A>, n: usize) -> LinMap<A> {
    ConvPowers::new(f).power(n)
}

/// `Σ_n (e - f)^{⋆n}`, summed up to the node count of the argument.
pub fn von_neumann_inverse<A: Ring>(f: &LinMap<A>) -> Result<LinMap<A>> {
    f.require_normalized()?;
    let powers = Arc::new(ConvPowers::new(&LinMap::unit().sub(f)));
    Ok(LinMap::new(
        format!("vn({})", f.name()),
        MapKind::General,
        move |x| {
            (0..=x.nodes()).try_fold(A::zero(), |acc, n| Ok(acc.plus(&powers.power(n).value(x)?)))
        },
    ))
}

fn inv_factorial(n: usize) -> Rational {
    Rational::new(1.into(), (1..=n as i64).product::<i64>().into())
}

/// `exp⋆(v) = Σ v^{⋆n}/n!`; requires `v(1) = 0`.
pub fn conv_exp<A: Ring>(v: &LinMap<A>) -> Result<LinMap<A>> {
    v.require_augmented()?;
    let powers = Arc::new(ConvPowers::new(v));
    Ok(LinMap::new(
        format!("exp⋆({})", v.name()),
        MapKind::General,
        move |x| {
            (0..=x.nodes()).try_fold(A::zero(), |acc, n| {
                Ok(acc.plus(&powers.power(n).value(x)?.scale(&inv_factorial(n))))
            })
        },
    ))
}

/// `log⋆(g) = Σ_{n≥1} (-1)^{n+1} (g - e)^{⋆n}/n`; requires `g(1) = 1`.
pub fn conv_log<A: Ring>(g: &LinMap<A>) -> Result<LinMap<A>> {
    g.require_normalized()?;
    let powers = Arc::new(ConvPowers::new(&g.sub(&LinMap::unit())));
    Ok(LinMap::new(
        format!("log⋆({})", g.name()),
        MapKind::General,
        move |x| {
            (1..=x.nodes()).try_fold(A::zero(), |acc, n| {
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let q = Rational::new(sign.into(), (n as i64).into());
                Ok(acc.plus(&powers.power(n).value(x)?.scale(&q)))
            })
        },
    ))
}

/// `g^{⋆μ} = exp⋆(μ log⋆ g)`.
pub fn conv_pow<A: Ring>(g: &LinMap<A>, mu: &Rational) -> Result<LinMap<A>> {
    conv_exp(&conv_log(g)?.scale_rational(mu))
}

/// First violation of multiplicativity among products of forests with at
/// most `max_nodes` nodes in total, or of `f(1) = 1`.
pub fn character_defect<A: Ring>(f: &LinMap<A>, max_nodes: usize) -> Result<Option<(Forest, Forest)>> {
    let one = Forest::one();
    if !f.value(&one)?.is_one() {
        return Ok(Some((one.clone(), one)));
    }
    let all = forests_up_to(max_nodes);
    for a in all.iter().filter(|a| !a.is_one()) {
        for b in all.iter().filter(|b| !b.is_one() && a.nodes() + b.nodes() <= max_nodes) {
            if f.value(&a.mul(b))? != f.value(a)?.times(&f.value(b)?) {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

/// First forest (unit or proper product, at most `max_nodes` nodes) on
/// which an infinitesimal character should vanish but does not.
pub fn infinitesimal_defect<A: Ring>(f: &LinMap<A>, max_nodes: usize) -> Result<Option<Forest>> {
    for x in forests_up_to(max_nodes) {
        if !x.is_tree() && !f.value(&x)?.is_zero() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// The identity of the Hopf algebra as a map into itself.
pub fn identity_map() -> LinMap<HElem<Rational>> {
    LinMap::new("id", MapKind::Character, |f| Ok(HElem::basis(f.clone())))
}

/// The antipode as a map into the Hopf algebra.
pub fn antipode_map() -> LinMap<HElem<Rational>> {
    LinMap::new("S", MapKind::Character, |f| Ok(antipode_basis(f)))
}

/// First forest among those with at most `max_nodes` nodes where two maps
/// disagree.
pub fn first_difference<A: Ring>(f: &LinMap<A>, g: &LinMap<A>, max_nodes: usize) -> Result<Option<Forest>> {
    for x in forests_up_to(max_nodes) {
        if f.value(&x)? != g.value(&x)? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
