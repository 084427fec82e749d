//! The Hopf algebra of rooted trees: linear combinations of forests with
//! the cut coproduct, counit and antipode.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forests::{forests_with_nodes, Forest, Tree};
use crate::rings::{format_sum, rational_to_json, ParseCoeff, Rational, Ring};

/// Finite linear combination of forests. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct HElem<C: Ring = Rational> {
    terms: BTreeMap<Forest, C>,
}

impl<C: Ring> Default for HElem<C> {
    fn default() -> Self {
        HElem {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Ring> HElem<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(Forest::one())
    }

    pub fn basis(f: Forest) -> Self {
        Self::term(f, C::one())
    }

    pub fn term(f: Forest, c: C) -> Self {
        let mut x = Self::zero();
        x.add_term(f, c);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Forest, C)>) -> Self {
        let mut x = Self::zero();
        for (f, c) in terms {
            x.add_term(f, c);
        }
        x
    }

    pub fn add_term(&mut self, f: Forest, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(f) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, f: &Forest) -> C {
        self.terms.get(f).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.negate());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(C::negate)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.times(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map_coeffs(|x| x.scale(q))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), f(c))))
    }

    /// Changes the coefficient ring.
    pub fn convert<D: Ring>(&self, f: impl Fn(&C) -> D) -> HElem<D> {
        HElem::from_terms(self.terms.iter().map(|(k, c)| (k.clone(), f(c))))
    }

    /// Algebra product (disjoint union of forests).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (fa, ca) in &self.terms {
            for (fb, cb) in &other.terms {
                out.add_term(fa.mul(fb), ca.times(cb));
            }
        }
        out
    }

    /// Extends a basis map linearly.
    pub fn apply(&self, f: impl Fn(&Forest) -> Self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            for (g, d) in f(k).terms {
                out.add_term(g, d.times(c));
            }
        }
        out
    }

    /// Extends a basis functional linearly.
    pub fn evaluate<D: Ring>(&self, f: impl Fn(&Forest) -> D, lift: impl Fn(&C) -> D) -> D {
        self.terms
            .iter()
            .fold(D::zero(), |acc, (k, c)| acc.plus(&f(k).times(&lift(c))))
    }

    pub fn counit(&self) -> C {
        self.coefficient(&Forest::one())
    }

    /// The homogeneous component with `n` nodes.
    pub fn grade(&self, n: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(f, _)| f.nodes() == n)
                .map(|(f, c)| (f.clone(), c.clone())),
        )
    }

    /// Largest node count present (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Forest::nodes).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Forest::nodes);
        match it.next() {
            None => true,
            Some(n) => it.all(|m| m == n),
        }
    }

    /// Keeps only single-tree terms.
    pub fn project_trees(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(f, _)| f.is_tree())
                .map(|(f, c)| (f.clone(), c.clone())),
        )
    }

    /// Linear extension of grafting.
    pub fn b_plus(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(f, c)| (Forest::from(f.b_plus()), c.clone())),
        )
    }

    fn display_terms(&self) -> Vec<(C, Option<String>)> {
        let mut v: Vec<(&Forest, &C)> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.nodes().cmp(&a.0.nodes()).then_with(|| a.0.cmp(b.0)));
        v.into_iter()
            .map(|(f, c)| (c.clone(), (!f.is_one()).then(|| f.to_string())))
            .collect()
    }

    pub fn latex(&self) -> String {
        let mut v: Vec<(&Forest, &C)> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.nodes().cmp(&a.0.nodes()).then_with(|| a.0.cmp(b.0)));
        format_sum(
            v.into_iter()
                .map(|(f, c)| (c.clone(), (!f.is_one()).then(|| f.latex()))),
            true,
        )
    }

    /// Parses `c*forest + c*forest - ...`; a term without brackets is a
    /// multiple of the unit.
    pub fn parse_with(text: &str, coeff: impl Fn(&str) -> Result<C>) -> Result<Self> {
        let mut out = Self::zero();
        for (neg, term) in split_terms(text)? {
            let term = term.trim();
            let (c, f) = match term.find('[') {
                Some(i) => {
                    let head = term[..i].trim_end();
                    let c = match head.strip_suffix('*') {
                        Some(h) => coeff(h.trim())?,
                        None if head.is_empty() => C::one(),
                        None => return Err(Error::Parse(format!("expected `*` before forest in `{term}`"))),
                    };
                    (c, term[i..].parse::<Forest>()?)
                }
                None => match term.strip_suffix("*1") {
                    Some(h) => (coeff(h.trim())?, Forest::one()),
                    None => (coeff(term)?, Forest::one()),
                },
            };
            out.add_term(f, if neg { c.negate() } else { c });
        }
        Ok(out)
    }
}

/// Splits at top-level `+`/`-` (outside brackets and parentheses).
fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev_sig: Option<char> = None;
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let is_sep = depth == 0
            && (ch == '+' || ch == '-')
            // `c-1` is a symbol, and a sign after `*` or `^` belongs to the factor
            && !matches!(prev_sig, Some('c') | Some('*') | Some('^') | Some('/'));
        if is_sep {
            if !cur.trim().is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            } else if !out.is_empty() || cur.contains(|c: char| !c.is_whitespace()) {
                return Err(Error::Parse(format!("dangling sign in `{text}`")));
            }
            cur.clear();
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_sig = Some(ch);
        }
    }
    if cur.trim().is_empty() {
        if out.is_empty() && !neg {
            return Err(Error::Parse("empty expression".into()));
        }
        if !out.is_empty() || neg {
            return Err(Error::Parse(format!("dangling sign in `{text}`")));
        }
    }
    out.push((neg, cur));
    Ok(out)
}

impl<C: Ring + ParseCoeff> HElem<C> {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, C::parse_coeff)
    }
}

impl<C: Ring> From<Forest> for HElem<C> {
    fn from(f: Forest) -> Self {
        Self::basis(f)
    }
}

impl<C: Ring> From<Tree> for HElem<C> {
    fn from(t: Tree) -> Self {
        Self::basis(t.into())
    }
}

impl<C: Ring> fmt::Display for HElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sum(self.display_terms(), false))
    }
}

impl<C: Ring> fmt::Debug for HElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HElem({self})")
    }
}

impl<C: Ring> Ring for HElem<C> {
    fn zero() -> Self {
        HElem::zero()
    }

    fn one() -> Self {
        HElem::one()
    }

    fn is_zero(&self) -> bool {
        HElem::is_zero(self)
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
        HElem::term(Forest::one(), C::from_rational(q))
    }

    fn display_parts(&self) -> (bool, String) {
        (false, format!("({self})"))
    }

    fn latex_parts(&self) -> (bool, String) {
        (false, format!("\\left({}\\right)", self.latex()))
    }
}

/// Element of the tensor square, keyed by (left, right) forests.
#[derive(Clone, PartialEq)]
pub struct TensorElem<C: Ring = Rational> {
    terms: BTreeMap<(Forest, Forest), C>,
}

impl<C: Ring> Default for TensorElem<C> {
    fn default() -> Self {
        TensorElem {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Ring> TensorElem<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, left: Forest, right: Forest, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Forest, Forest, C)>) -> Self {
        let mut t = Self::zero();
        for (l, r, c) in terms {
            t.add_term(l, r, c);
        }
        t
    }

    /// `a ⊗ b`.
    pub fn pure(a: &HElem<C>, b: &HElem<C>) -> Self {
        let mut t = Self::zero();
        for (fa, ca) in a.terms() {
            for (fb, cb) in b.terms() {
                t.add_term(fa.clone(), fb.clone(), ca.times(cb));
            }
        }
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Forest, &C)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, left: &Forest, right: &Forest) -> C {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.negate());
        }
        out
    }

    /// Componentwise product in `H ⊗ H`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((la, ra), ca) in &self.terms {
            for ((lb, rb), cb) in &other.terms {
                out.add_term(la.mul(lb), ra.mul(rb), ca.times(cb));
            }
        }
        out
    }

    /// `(f ⊗ g)` applied to every term.
    pub fn map(&self, f: impl Fn(&Forest) -> HElem<C>, g: impl Fn(&Forest) -> HElem<C>) -> Self {
        let mut out = Self::zero();
        for ((l, r), c) in &self.terms {
            let (fl, gr) = (f(l), g(r));
            for (a, ca) in fl.terms() {
                for (b, cb) in gr.terms() {
                    out.add_term(a.clone(), b.clone(), c.times(ca).times(cb));
                }
            }
        }
        out
    }

    /// The multiplication map `m: H ⊗ H -> H`.
    pub fn multiply(&self) -> HElem<C> {
        HElem::from_terms(self.terms.iter().map(|((l, r), c)| (l.mul(r), c.clone())))
    }

    /// `(f ⊗ g)` into a ring, followed by multiplication.
    pub fn contract<D: Ring>(
        &self,
        f: impl Fn(&Forest) -> D,
        g: impl Fn(&Forest) -> D,
        lift: impl Fn(&C) -> D,
    ) -> D {
        self.terms.iter().fold(D::zero(), |acc, ((l, r), c)| {
            acc.plus(&f(l).times(&g(r)).times(&lift(c)))
        })
    }

    fn sorted(&self) -> Vec<(&Forest, &Forest, &C)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|a, b| {
            b.0.nodes()
                .cmp(&a.0.nodes())
                .then_with(|| a.0.cmp(b.0))
                .then_with(|| a.1.cmp(b.1))
        });
        v
    }

    pub fn latex(&self) -> String {
        format_sum(
            self.sorted()
                .into_iter()
                .map(|(l, r, c)| (c.clone(), Some(format!("{} \\otimes {}", l.latex(), r.latex())))),
            true,
        )
    }
}

impl<C: Ring> HElem<C> {
    /// `[{forest, coeff}]` in display order.
    pub fn to_json_with(&self, coeff: impl Fn(&C) -> Value) -> Value {
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| b.0.nodes().cmp(&a.0.nodes()).then_with(|| a.0.cmp(b.0)));
        Value::Array(
            terms
                .into_iter()
                .map(|(f, c)| json!({"forest": f.to_string(), "coeff": coeff(c)}))
                .collect(),
        )
    }
}

impl HElem<Rational> {
    pub fn to_json(&self) -> Value {
        self.to_json_with(|c| Value::String(rational_to_json(c)))
    }
}

impl TensorElem<Rational> {
    /// `[{left, right, coeff}]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.sorted()
                .into_iter()
                .map(|(l, r, c)| {
                    json!({"left": l.to_string(), "right": r.to_string(), "coeff": rational_to_json(c)})
                })
                .collect(),
        )
    }
}

impl<C: Ring> fmt::Display for TensorElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sum(
            self.sorted()
                .into_iter()
                .map(|(l, r, c)| (c.clone(), Some(format!("{l}⊗{r}")))),
            false,
        ))
    }
}

impl<C: Ring> fmt::Debug for TensorElem<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElem({self})")
    }
}

/// One term `P ⊗ R` of a basis coproduct, with its multiplicity.
pub type Cut = (Forest, Forest, u64);

type CutCache = Mutex<HashMap<Forest, Arc<Vec<Cut>>>>;

fn cut_cache() -> &'static CutCache {
    static CACHE: OnceLock<CutCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The coproduct of a basis forest as `(pruned, root part, multiplicity)`,
/// summing over all antichains of nodes. Sorted by (pruned, root part).
pub fn basis_coproduct(f: &Forest) -> Arc<Vec<Cut>> {
    if let Some(hit) = cut_cache().lock().unwrap_or_else(|e| e.into_inner()).get(f) {
        return hit.clone();
    }
    let result = Arc::new(compute_coproduct(f));
    cut_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(f.clone(), result.clone());
    result
}

fn compute_coproduct(f: &Forest) -> Vec<Cut> {
    let mut acc: BTreeMap<(Forest, Forest), u64> = BTreeMap::new();
    match f.trees() {
        [] => {
            acc.insert((Forest::one(), Forest::one()), 1);
        }
        [t] => {
            for (pruned, root) in tree_cuts(t) {
                let root = root.map(Forest::from).unwrap_or_else(Forest::one);
                *acc.entry((Forest::new(pruned), root)).or_default() += 1;
            }
        }
        [first, rest @ ..] => {
            let a = basis_coproduct(&first.to_forest());
            let b = basis_coproduct(&Forest::new(rest.to_vec()));
            for (pa, ra, ma) in a.iter() {
                for (pb, rb, mb) in b.iter() {
                    *acc.entry((pa.mul(pb), ra.mul(rb))).or_default() += ma * mb;
                }
            }
        }
    }
    acc.into_iter().map(|((p, r), m)| (p, r, m)).collect()
}

/// Every antichain of `t`: either the root is cut off whole, or the root
/// stays and each child contributes one of its own antichains.
fn tree_cuts(t: &Tree) -> Vec<(Vec<Tree>, Option<Tree>)> {
    let mut partial: Vec<(Vec<Tree>, Vec<Tree>)> = vec![(Vec::new(), Vec::new())];
    for c in t.children() {
        let child = tree_cuts(c);
        let mut next = Vec::with_capacity(partial.len() * child.len());
        for (pruned, kept) in &partial {
            for (cp, cr) in &child {
                let mut p = pruned.clone();
                p.extend(cp.iter().cloned());
                let mut k = kept.clone();
                k.extend(cr.iter().cloned());
                next.push((p, k));
            }
        }
        partial = next;
    }
    let mut out: Vec<(Vec<Tree>, Option<Tree>)> = partial
        .into_iter()
        .map(|(p, k)| (p, Some(Tree::new(k))))
        .collect();
    out.push((vec![t.clone()], None));
    out
}

pub fn coproduct<C: Ring>(x: &HElem<C>) -> TensorElem<C> {
    let mut out = TensorElem::zero();
    for (f, c) in x.terms() {
        for (p, r, m) in basis_coproduct(f).iter() {
            out.add_term(p.clone(), r.clone(), c.scale(&Rational::from_integer((*m).into())));
        }
    }
    out
}

/// The cuts of a basis forest with `1 ⊗ f` and `f ⊗ 1` removed.
pub fn reduced_basis_coproduct(f: &Forest) -> Vec<Cut> {
    basis_coproduct(f)
        .iter()
        .filter(|(p, r, _)| !p.is_one() && !r.is_one())
        .cloned()
        .collect()
}

/// `Δ - 1⊗id - id⊗1`, extended so that `Δ̃(1) = -1⊗1`.
pub fn reduced_coproduct<C: Ring>(x: &HElem<C>) -> TensorElem<C> {
    let full = coproduct(x);
    let one = HElem::one();
    full.sub(&TensorElem::pure(&one, x)).sub(&TensorElem::pure(x, &one))
}

/// Terms of `Δ^{(k)}`, the `k`-fold iterated coproduct into `H^{⊗(k+1)}`.
pub type MultiTensor<C> = BTreeMap<Vec<Forest>, C>;

fn multi_add<C: Ring>(m: &mut MultiTensor<C>, key: Vec<Forest>, c: C) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(key).or_insert_with(C::zero);
    *e = e.plus(&c);
    if e.is_zero() {
        m.retain(|_, v| !v.is_zero());
    }
}

/// Applies `Δ` to tensor slot `slot` of every term.
pub fn coproduct_at<C: Ring>(x: &MultiTensor<C>, slot: usize) -> MultiTensor<C> {
    let mut out = MultiTensor::new();
    for (key, c) in x {
        for (p, r, m) in basis_coproduct(&key[slot]).iter() {
            let mut k = key[..slot].to_vec();
            k.push(p.clone());
            k.push(r.clone());
            k.extend_from_slice(&key[slot + 1..]);
            multi_add(&mut out, k, c.scale(&Rational::from_integer((*m).into())));
        }
    }
    out
}

pub fn to_multi<C: Ring>(t: &TensorElem<C>) -> MultiTensor<C> {
    t.terms()
        .map(|(l, r, c)| (vec![l.clone(), r.clone()], c.clone()))
        .collect()
}

type AntipodeCache = Mutex<HashMap<Tree, Arc<HElem<Rational>>>>;

fn antipode_cache() -> &'static AntipodeCache {
    static CACHE: OnceLock<AntipodeCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `S(t) = -t - Σ S(P)·R` over the reduced coproduct, memoized per tree.
pub fn antipode_tree(t: &Tree) -> Arc<HElem<Rational>> {
    if let Some(hit) = antipode_cache().lock().unwrap_or_else(|e| e.into_inner()).get(t) {
        return hit.clone();
    }
    let f = t.to_forest();
    let mut s = HElem::<Rational>::basis(f.clone()).neg();
    for (p, r, m) in reduced_basis_coproduct(&f) {
        let sp = antipode_basis(&p);
        let term = sp
            .mul(&HElem::basis(r))
            .scale_rational(&Rational::from_integer(m.into()));
        s = s.sub(&term);
    }
    let s = Arc::new(s);
    antipode_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(t.clone(), s.clone());
    s
}

/// The antipode on a basis forest: the product of the tree antipodes.
pub fn antipode_basis(f: &Forest) -> HElem<Rational> {
    f.trees()
        .iter()
        .fold(HElem::one(), |acc, t| acc.mul(&antipode_tree(t)))
}

pub fn antipode<C: Ring>(x: &HElem<C>) -> HElem<C> {
    let mut out = HElem::zero();
    for (f, c) in x.terms() {
        for (g, q) in antipode_basis(f).terms() {
            out.add_term(g.clone(), c.scale(q));
        }
    }
    out
}

pub fn counit<C: Ring>(x: &HElem<C>) -> C {
    x.counit()
}

/// Outcome of checking `Δ∘L = (id⊗L)∘Δ + L⊗1` on basis forests.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub holds: bool,
    pub checked: usize,
    pub counterexample: Option<Forest>,
}

/// Checks the 1-cocycle identity on every nonempty forest with at most
/// `max_degree` nodes, in increasing node count.
pub fn verify_cocycle<C: Ring>(l: impl Fn(&Forest) -> HElem<C>, max_degree: usize) -> CocycleReport {
    let mut checked = 0;
    for n in 1..=max_degree {
        for f in forests_with_nodes(n) {
            checked += 1;
            let lf = l(&f);
            let lhs = coproduct(&lf);
            let id_l = coproduct(&HElem::<C>::basis(f.clone())).map(|p| HElem::basis(p.clone()), &l);
            let rhs = id_l.add(&TensorElem::pure(&lf, &HElem::one()));
            if lhs != rhs {
                return CocycleReport {
                    holds: false,
                    checked,
                    counterexample: Some(f),
                };
            }
        }
    }
    CocycleReport {
        holds: true,
        checked,
        counterexample: None,
    }
}

/// `∂α(f) = (id⊗α)Δf - α(f)·1`, i.e. `Σ_{P≠1} P·α(R)` over the cuts of `f`.
pub fn coboundary_basis<C: Ring>(alpha: impl Fn(&Forest) -> C, f: &Forest) -> HElem<C> {
    let mut out = HElem::zero();
    for (p, r, m) in basis_coproduct(f).iter() {
        if !p.is_one() {
            out.add_term(p.clone(), alpha(r).scale(&Rational::from_integer((*m).into())));
        }
    }
    out
}
