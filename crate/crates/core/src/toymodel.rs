//! Regularized Feynman rules of the toy model,
//! `φ_s(f) = s^{-z|f|} ∏_v F(z|f_v|)`, and their renormalization.
//!
//! Truncation: a request for forest `f` at absolute order `T` evaluates every
//! subforest `g` to order `T + |f| - |g|`. Poles have depth at most the node
//! count, so each Bogoliubov product then determines exactly the orders below
//! `T + |f| - |g|` again, and the top level lands on `T`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde_json::Value;

use crate::conv::{LinMap, MapKind};
use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};
use crate::hopf::basis_coproduct;
use crate::polyhopf::PolyFunctional;
use crate::rings::{int, LaurentSeries, Polynomial, Rational, Symbol};
use crate::universal::{rho, CocycleSpec};

/// Default absolute truncation: `z⁰` plus one guard coefficient.
pub const DEFAULT_TRUNC: i64 = 2;

/// The Laurent coefficients `c₋₁, c₀, …` of the Mellin transform `F`.
#[derive(Clone, Debug, PartialEq)]
pub enum MellinData {
    /// Free symbols `c_n` in every order.
    Symbolic,
    /// Explicit values `c₋₁ … c_K`.
    Table(Vec<Polynomial>),
}

impl MellinData {
    pub fn table(coeffs: Vec<Polynomial>) -> Result<Self> {
        match coeffs.first() {
            Some(c) if !c.is_zero() => Ok(MellinData::Table(coeffs)),
            _ => Err(Error::InvalidMellin),
        }
    }

    pub fn from_rationals(coeffs: &[Rational]) -> Result<Self> {
        Self::table(coeffs.iter().cloned().map(Polynomial::constant).collect())
    }

    /// `{"coeffs": ["n/d", …]}` starting at `c₋₁`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let items = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("Mellin data needs a \"coeffs\" array".into()))?;
        let coeffs = items
            .iter()
            .map(|c| match c {
                Value::String(s) => Polynomial::from_str(s),
                Value::Number(n) => Polynomial::from_str(&n.to_string()),
                other => Err(Error::Parse(format!("bad Mellin coefficient {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::table(coeffs)
    }

    /// Highest known index, `None` when unbounded.
    pub fn available(&self) -> Option<i64> {
        match self {
            MellinData::Symbolic => None,
            MellinData::Table(c) => Some(c.len() as i64 - 2),
        }
    }

    pub fn coeff(&self, n: i64) -> Result<Polynomial> {
        match self {
            MellinData::Symbolic => Ok(Polynomial::var(Symbol::mellin(n as i32))),
            MellinData::Table(c) => c.get((n + 1) as usize).cloned().ok_or(
                Error::InsufficientMellinOrder {
                    needed: n,
                    available: c.len() as i64 - 2,
                },
            ),
        }
    }

    /// `F(kz) + O(z^trunc)`.
    pub fn series(&self, k: u32, trunc: i64) -> Result<LaurentSeries> {
        let k = int(k as i64);
        let mut power = int(1) / &k;
        let mut coeffs = Vec::new();
        for n in -1..trunc {
            coeffs.push(self.coeff(n)?.scale(&power));
            power *= &k;
        }
        Ok(LaurentSeries::new(-1, coeffs, Some(trunc)))
    }

    /// `η` with `η(xⁿ) = n!(-1)ⁿcₙ`, certified to degree `n_max`.
    pub fn eta(&self, n_max: usize) -> Result<PolyFunctional> {
        let mut fact = int(1);
        let mut values = Vec::new();
        for n in 0..=n_max {
            if n > 0 {
                fact *= int(n as i64);
            }
            let sign = if n % 2 == 0 { fact.clone() } else { -fact.clone() };
            values.push(self.coeff(n as i64)?.scale(&sign));
        }
        Ok(PolyFunctional::new(values))
    }
}

impl fmt::Display for MellinData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MellinData::Symbolic => write!(f, "symbolic"),
            MellinData::Table(c) => {
                let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// `φ_s(t)` for a single tree, to absolute order `trunc`.
fn phi_tree(mellin: &MellinData, t: &Tree, trunc: i64) -> Result<LaurentSeries> {
    let n = t.size() as i64;
    // the Mellin part has valuation -n
    let scale = LaurentSeries::scale_power(n, Symbol::LogS, trunc + n);
    Ok(scale.mul(&mellin_part(mellin, t, trunc)?).truncate(trunc))
}

/// The regularized rules `φ_s(f)`, known below `z^trunc`.
pub fn phi_reg(mellin: &MellinData, f: &Forest, trunc: i64) -> Result<LaurentSeries> {
    let n = f.nodes() as i64;
    f.trees().iter().try_fold(LaurentSeries::one(), |acc, t| {
        Ok(acc.mul(&phi_tree(mellin, t, trunc + n - t.size() as i64)?))
    })
}

/// The leading pole `c₋₁^{|f|}/f!` of `φ_s(f)` at `z^{-|f|}`.
pub fn leading_pole(mellin: &MellinData, f: &Forest) -> Result<Polynomial> {
    Ok(mellin
        .coeff(-1)?
        .pow(f.nodes() as u32)
        .scale(&(int(1) / f.factorial())))
}

/// The leading log `(-c₋₁L)^{|f|}/f!` of the physical limit.
pub fn leading_log(mellin: &MellinData, f: &Forest) -> Result<Polynomial> {
    let base = mellin.coeff(-1)?.scale(&int(-1));
    Ok((&base * &Polynomial::var(Symbol::LogRatio))
        .pow(f.nodes() as u32)
        .scale(&(int(1) / f.factorial())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Minimal subtraction: `R` projects onto the pole part.
    Ms,
    /// Momentum scheme: `R` evaluates at `s = μ`, i.e. `ln s → ln μ`.
    Mom,
}

impl Scheme {
    pub fn project(self, x: &LaurentSeries) -> Result<LaurentSeries> {
        match self {
            Scheme::Ms => x.pole_part(),
            Scheme::Mom => Ok(x.map_coeffs(|c| c.rename(Symbol::LogS, Symbol::LogMu))),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms" => Ok(Scheme::Ms),
            "mom" => Ok(Scheme::Mom),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// The four maps of a Birkhoff decomposition at one evaluation budget.
#[derive(Clone)]
pub struct BirkhoffMaps {
    pub phi: LinMap<LaurentSeries>,
    pub bar: LinMap<LaurentSeries>,
    pub minus: LinMap<LaurentSeries>,
    pub plus: LinMap<LaurentSeries>,
}

/// `φ̄(f) = φ(f) + Σ φ₋(P)φ(R)` over the reduced coproduct.
fn bar_value(
    minus: &LinMap<LaurentSeries>,
    phi: &LinMap<LaurentSeries>,
    f: &Forest,
) -> Result<LaurentSeries> {
    let mut v = phi.value(f)?;
    for (p, r, m) in basis_coproduct(f).iter() {
        if p.is_one() || r.is_one() {
            continue;
        }
        let t = minus.value(p)?.mul(&phi.value(r)?);
        v = v.add(&t.scale(&int(*m as i64)));
    }
    Ok(v)
}

impl BirkhoffMaps {
    /// Every forest `g` is evaluated to order `budget - |g|`.
    fn new(mellin: &MellinData, scheme: Scheme, budget: i64) -> Self {
        let m = mellin.clone();
        let phi = LinMap::new("φ", MapKind::Character, move |f| {
            phi_reg(&m, f, budget - f.nodes() as i64)
        });
        let p = phi.clone();
        let minus = LinMap::recursive("φ₋", MapKind::General, move |me, f| {
            if f.is_one() {
                return Ok(LaurentSeries::one());
            }
            Ok(scheme.project(&bar_value(me, &p, f)?)?.neg())
        });
        let (p, mi) = (phi.clone(), minus.clone());
        let bar = LinMap::new("φ̄", MapKind::General, move |f| {
            if f.is_one() {
                return Ok(LaurentSeries::one());
            }
            bar_value(&mi, &p, f)
        });
        let (b, mi) = (bar.clone(), minus.clone());
        let plus = LinMap::new("φ₊", MapKind::General, move |f| {
            if f.is_one() {
                return Ok(LaurentSeries::one());
            }
            Ok(b.value(f)?.add(&mi.value(f)?))
        });
        BirkhoffMaps {
            phi,
            bar,
            minus,
            plus,
        }
    }
}

/// Birkhoff decomposition of the toy-model rules, memoized per budget.
pub struct Renormalizer {
    mellin: MellinData,
    scheme: Scheme,
    trunc: i64,
    maps: Mutex<HashMap<i64, BirkhoffMaps>>,
}

impl Renormalizer {
    pub fn new(mellin: MellinData, scheme: Scheme) -> Self {
        Self::with_trunc(mellin, scheme, DEFAULT_TRUNC).expect("default truncation is valid")
    }

    /// Results are known below `z^trunc`; `trunc >= 1` so `z⁰` is determined.
    pub fn with_trunc(mellin: MellinData, scheme: Scheme, trunc: i64) -> Result<Self> {
        if trunc < 1 {
            return Err(Error::Invalid(format!(
                "truncation order {trunc} does not determine z^0"
            )));
        }
        if let MellinData::Table(c) = &mellin {
            if c.first().is_none_or(Polynomial::is_zero) {
                return Err(Error::InvalidMellin);
            }
        }
        Ok(Renormalizer {
            mellin,
            scheme,
            trunc,
            maps: Mutex::new(HashMap::new()),
        })
    }

    pub fn mellin(&self) -> &MellinData {
        &self.mellin
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// The maps evaluated so that forests of `nodes` nodes reach `trunc`.
    pub fn maps(&self, nodes: usize) -> BirkhoffMaps {
        let budget = self.trunc + nodes as i64;
        let mut maps = self.maps.lock().unwrap_or_else(|e| e.into_inner());
        maps.entry(budget)
            .or_insert_with(|| BirkhoffMaps::new(&self.mellin, self.scheme, budget))
            .clone()
    }

    fn at(&self, f: &Forest, pick: impl Fn(&BirkhoffMaps) -> &LinMap<LaurentSeries>) -> Result<LaurentSeries> {
        let maps = self.maps(f.nodes());
        Ok(pick(&maps).value(f)?.truncate(self.trunc))
    }

    pub fn phi(&self, f: &Forest) -> Result<LaurentSeries> {
        self.at(f, |m| &m.phi)
    }

    pub fn bar(&self, f: &Forest) -> Result<LaurentSeries> {
        self.at(f, |m| &m.bar)
    }

    pub fn counterterm(&self, f: &Forest) -> Result<LaurentSeries> {
        self.at(f, |m| &m.minus)
    }

    pub fn renormalized(&self, f: &Forest) -> Result<LaurentSeries> {
        self.at(f, |m| &m.plus)
    }

    /// `(φ₋(f), φ₊(f))`.
    pub fn birkhoff(&self, f: &Forest) -> Result<(LaurentSeries, LaurentSeries)> {
        Ok((self.counterterm(f)?, self.renormalized(f)?))
    }

    /// `lim_{z→0} φ₊(f)` in `ln s` and `ln μ`, after checking that no pole survived.
    pub fn finite_part(&self, f: &Forest) -> Result<Polynomial> {
        let plus = self.renormalized(f)?;
        if let Some((k, _)) = plus.coeffs().find(|(k, c)| *k < 0 && !c.is_zero()) {
            return Err(Error::PoleNotCancelled {
                order: (-k) as u32,
                forest: f.to_string(),
            });
        }
        plus.coeff(0)
    }

    /// The physical limit. Under MOM it is rewritten in `L = ln s - ln μ`,
    /// and any leftover `ln μ` is reported as an error.
    pub fn physical_limit(&self, f: &Forest) -> Result<Polynomial> {
        let p = self.finite_part(f)?;
        match self.scheme {
            Scheme::Ms => Ok(p),
            Scheme::Mom => {
                let shifted = &Polynomial::var(Symbol::LogRatio) + &Polynomial::var(Symbol::LogMu);
                let q = p.substitute(Symbol::LogS, &shifted);
                if q.contains(Symbol::LogMu) {
                    return Err(Error::Invalid(format!(
                        "physical limit of {f} depends on ln mu beyond ln(s/mu)"
                    )));
                }
                Ok(q)
            }
        }
    }

    /// `φ_phys` as a character into `K[x]` with `x = ln(s/μ)`; MOM only.
    pub fn physical_map(self: &Arc<Self>) -> Result<LinMap<Polynomial>> {
        if self.scheme != Scheme::Mom {
            return Err(Error::Invalid("the physical map needs the momentum scheme".into()));
        }
        let me = self.clone();
        Ok(LinMap::character("φ_phys", move |t| {
            Ok(me.physical_limit(&t.to_forest())?.rename(Symbol::LogRatio, Symbol::X))
        }))
    }
}

/// `ρ_L(f)` with `L = -c₋₁∫₀ + ∂η`; equals the MOM physical limit at `x = L`.
pub fn renormalized_via_universal(mellin: &MellinData, f: &Forest) -> Result<Polynomial> {
    let scale = mellin.coeff(-1)?.scale(&int(-1));
    let eta = mellin.eta(f.nodes().saturating_sub(1))?;
    rho(&CocycleSpec::new(scale, eta), f)
}

/// Keeps the monomials of `x`-degree at most `s`; `T_s = 0` for `s < 0`.
pub fn taylor_truncate(s: i64, p: &Polynomial) -> Polynomial {
    if s < 0 {
        Polynomial::zero()
    } else {
        p.truncate_in(Symbol::X, s as u32)
    }
}

/// Birkhoff decomposition with `R = T_{ω(|x|)}` on homogeneous elements:
/// returns `(φ₋, φ₊)` as maps into `K[x]`.
pub fn indexed_birkhoff(
    phi: &LinMap<Polynomial>,
    degree: impl Fn(usize) -> i64 + Send + Sync + 'static,
) -> (LinMap<Polynomial>, LinMap<Polynomial>) {
    let degree = Arc::new(degree);
    let bar = {
        let phi = phi.clone();
        move |minus: &LinMap<Polynomial>, f: &Forest| -> Result<Polynomial> {
            let mut v = phi.value(f)?;
            for (p, r, m) in basis_coproduct(f).iter() {
                if p.is_one() || r.is_one() {
                    continue;
                }
                v = &v + &(&minus.value(p)? * &phi.value(r)?).scale(&int(*m as i64));
            }
            Ok(v)
        }
    };
    let bar = Arc::new(bar);
    let (b, d) = (bar.clone(), degree.clone());
    let minus = LinMap::recursive("φ₋", MapKind::General, move |me, f| {
        if f.is_one() {
            return Ok(Polynomial::one());
        }
        Ok(-&taylor_truncate(d(f.nodes()), &b(me, f)?))
    });
    let (b, d, mi) = (bar, degree, minus.clone());
    let plus = LinMap::new("φ₊", MapKind::General, move |f| {
        if f.is_one() {
            return Ok(Polynomial::one());
        }
        let v = b(&mi, f)?;
        Ok(&v - &taylor_truncate(d(f.nodes()), &v))
    });
    (minus, plus)
}

/// `Σ_k s^{-kz} A_k(z)` with every `A_k` free of `ln s`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScaleSum {
    parts: BTreeMap<u32, LaurentSeries>,
}

impl ScaleSum {
    pub fn term(k: u32, a: LaurentSeries) -> Self {
        let mut parts = BTreeMap::new();
        parts.insert(k, a);
        ScaleSum { parts }
    }

    pub fn parts(&self) -> &BTreeMap<u32, LaurentSeries> {
        &self.parts
    }

    pub fn add(&self, other: &ScaleSum) -> ScaleSum {
        let mut parts = self.parts.clone();
        for (k, a) in &other.parts {
            let v = match parts.get(k) {
                Some(b) => b.add(a),
                None => a.clone(),
            };
            parts.insert(*k, v);
        }
        ScaleSum { parts }
    }

    pub fn mul(&self, other: &ScaleSum) -> ScaleSum {
        let mut out = ScaleSum::default();
        for (i, a) in &self.parts {
            for (j, b) in &other.parts {
                out = out.add(&ScaleSum::term(i + j, a.mul(b)));
            }
        }
        out
    }

    /// Multiplies every part by a series that does not depend on `s`.
    pub fn scale_series(&self, c: &LaurentSeries) -> ScaleSum {
        ScaleSum {
            parts: self.parts.iter().map(|(k, a)| (*k, a.mul(c))).collect(),
        }
    }

    /// Expands every `s^{-kz}` in `ln s`, keeping the truncation of its part.
    pub fn expand(&self) -> LaurentSeries {
        self.parts.iter().fold(LaurentSeries::zero(), |acc, (k, a)| {
            let t = a.trunc_order().unwrap_or(0) - a.min_order().min(0);
            acc.add(&LaurentSeries::scale_power(*k as i64, Symbol::LogS, t).mul(a))
        })
    }

    /// The single-node integral `∫ K(ζ/s) ζ^{-z} g(ζ) dζ/s`:
    /// `s^{-kz}` becomes `s^{-(k+1)z} F((k+1)z)`.
    pub fn dress(&self, mellin: &MellinData) -> Result<ScaleSum> {
        let mut out = ScaleSum::default();
        for (k, a) in &self.parts {
            // F has a simple pole, so one order of `a` is consumed
            let t = a.trunc_order().unwrap_or(0) - a.min_order().min(0) + 1;
            let f = mellin.series(k + 1, t)?;
            out = out.add(&ScaleSum::term(k + 1, a.mul(&f)));
        }
        Ok(out)
    }
}

/// `∏_v F(z|t_v|)`: the `s`-free part of `φ_s(t)`, known below `z^trunc`.
fn mellin_part(mellin: &MellinData, t: &Tree, trunc: i64) -> Result<LaurentSeries> {
    let factor_trunc = trunc + t.size() as i64 - 1;
    let mut v = LaurentSeries::one();
    for sub in t.subtrees() {
        v = v.mul(&mellin.series(sub.size() as u32, factor_trunc)?);
    }
    Ok(v.truncate(trunc))
}

impl Renormalizer {
    /// `φ_s(f)` as the single scale term `s^{-|f|z}`, at the same orders as `maps(nodes)`.
    fn phi_scaled(&self, f: &Forest, nodes: usize) -> Result<ScaleSum> {
        let budget = self.trunc + nodes as i64;
        let a = f.trees().iter().try_fold(LaurentSeries::one(), |acc, t| {
            Ok::<_, Error>(acc.mul(&mellin_part(&self.mellin, t, budget - t.size() as i64)?))
        })?;
        Ok(ScaleSum::term(f.nodes() as u32, a))
    }

    /// `φ̄(f)` resolved by scale, with counterterms from `maps(nodes)`.
    pub fn bar_scaled(&self, f: &Forest, nodes: usize) -> Result<ScaleSum> {
        let maps = self.maps(nodes);
        let mut v = self.phi_scaled(f, nodes)?;
        for (p, r, m) in basis_coproduct(f).iter() {
            if p.is_one() || r.is_one() {
                continue;
            }
            let c = maps.minus.value(p)?.scale(&int(*m as i64));
            v = v.add(&self.phi_scaled(r, nodes)?.scale_series(&c));
        }
        Ok(v)
    }

    /// `φ₊(f) = φ̄(f) + φ₋(f)` resolved by scale.
    pub fn plus_scaled(&self, f: &Forest, nodes: usize) -> Result<ScaleSum> {
        let minus = self.maps(nodes).minus.value(f)?;
        Ok(self.bar_scaled(f, nodes)?.add(&ScaleSum::term(0, minus)))
    }

    /// `φ̄(B₊t)` against the dressing of `φ₊(t)`, both resolved by scale.
    pub fn subdivergence_holds(&self, t: &Tree) -> Result<bool> {
        let grafted = Tree::new(vec![t.clone()]).to_forest();
        let n = grafted.nodes();
        let lhs = self.bar_scaled(&grafted, n)?;
        let rhs = self.plus_scaled(&t.to_forest(), n)?.dress(&self.mellin)?;
        let parts_agree = lhs.parts().len() == rhs.parts().len()
            && lhs
                .parts()
                .iter()
                .zip(rhs.parts())
                .all(|((i, a), (j, b))| i == j && a.agrees_with(b));
        let expanded = self.maps(n).bar.value(&grafted)?;
        Ok(parts_agree && expanded.agrees_with(&lhs.expand()))
    }
}
