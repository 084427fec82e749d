//! Invariant suites run by `hopfren check`. Every suite is exhaustive over
//! the stated forest sizes or uses a fixed seed, so results are reproducible.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conv::{character_defect, conv_exp, conv_inverse, convolve, first_difference, infinitesimal_defect, ConvPowers, LinMap};
use crate::dse::{catalan_coefficient, correlation, dse_closed_form, dse_solve, gamma, rg_identities};
use crate::error::Result;
use crate::forests::{forests_up_to, leaf_addresses, leaves_and_prune, sigma_count, trees_up_to, trees_with_nodes, Forest};
use crate::hopf::{antipode_basis, basis_coproduct, coproduct, coproduct_at, to_multi, HElem};
use crate::oracle::{compare_symbolic, NumericKernel};
use crate::polyhopf::{poly_coproduct, PolyFunctional, PolyTensor};
use crate::rings::{int, LaurentSeries, Polynomial, Rational, Symbol};
use crate::toymodel::{leading_log, leading_pole, phi_reg, renormalized_via_universal, taylor_truncate, MellinData, Renormalizer, Scheme};
use crate::universal::{auto_compose, chi, chi_map, int_rules, int_rules_at, pullback, rho, rho_map, CocycleSpec, HFunctional};

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker {
    name: &'static str,
    checked: usize,
    failures: Vec<String>,
}

impl Checker {
    fn new(name: &'static str) -> Self {
        Checker {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    /// An evaluation error counts as a failure of the check.
    fn check_result(&mut self, r: Result<bool>, label: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, label),
            Err(e) => self.check(false, || format!("{}: {e}", label())),
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            checked: self.checked,
            failures: self.failures,
        }
    }
}

type Suite = fn() -> SuiteReport;

/// Every suite, in dependency order.
pub const SUITES: &[(&str, Suite)] = &[
    ("hopf-axioms", hopf_axioms),
    ("reference-values", reference_values),
    ("convolution", convolution),
    ("birkhoff", birkhoff),
    ("physical-limits", physical_limits),
    ("universal", universal),
    ("leading-terms", leading_terms),
    ("automorphisms", automorphisms),
    ("dyson-schwinger", dyson_schwinger),
    ("renormalization-group", renormalization_group),
    ("tree-factorials", tree_factorials),
    ("rota-baxter", rota_baxter),
    ("numeric-oracle", numeric_oracle),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs one suite by name, or all of them for `"all"`.
pub fn run(name: &str) -> Option<Vec<SuiteReport>> {
    if name == "all" {
        return Some(SUITES.iter().map(|(_, s)| s()).collect());
    }
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, s)| vec![s()])
}

fn f(s: &str) -> Forest {
    s.parse().expect("valid forest literal")
}

fn p(s: &str) -> Polynomial {
    s.parse().expect("valid polynomial literal")
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=4).into())
}

fn basis(g: &Forest) -> HElem<Rational> {
    HElem::basis(g.clone())
}

fn unit_value(g: &Forest) -> HElem<Rational> {
    if g.is_one() {
        HElem::one()
    } else {
        HElem::zero()
    }
}

/// Coassociativity, counit and antipode on all forests of at most 6 nodes.
pub fn hopf_axioms() -> SuiteReport {
    let mut c = Checker::new("hopf-axioms");
    for g in forests_up_to(6) {
        let d = coproduct(&HElem::<Rational>::basis(g.clone()));
        let m = to_multi(&d);
        c.check(coproduct_at(&m, 0) == coproduct_at(&m, 1), || format!("coassociativity at {g}"));
        let left = d.map(unit_value, basis).multiply();
        let right = d.map(basis, unit_value).multiply();
        let id = HElem::basis(g.clone());
        c.check(left == id && right == id, || format!("counit at {g}"));
        let eps = unit_value(&g);
        let s_left = d.map(antipode_basis, basis).multiply();
        let s_right = d.map(basis, antipode_basis).multiply();
        c.check(s_left == eps && s_right == eps, || format!("antipode at {g}"));
    }
    c.finish()
}

/// Coproduct and antipode of the small trees in canonical text form.
pub fn reference_values() -> SuiteReport {
    let mut c = Checker::new("reference-values");
    let cases = [
        ("[[]]", "[[]]⊗1 + []⊗[] + 1⊗[[]]"),
        ("[[][]]", "[[][]]⊗1 + [][]⊗[] + 2*[]⊗[[]] + 1⊗[[][]]"),
        ("[[[]]]", "[[[]]]⊗1 + [[]]⊗[] + []⊗[[]] + 1⊗[[[]]]"),
    ];
    for (g, want) in cases {
        let got = coproduct(&HElem::<Rational>::basis(f(g))).to_string();
        c.check(got == want, || format!("coproduct of {g}: {got}"));
    }
    let cases = [
        ("[]", "-[]"),
        ("[[]]", "-[[]] + [][]"),
        ("[[][]]", "-[[][]] + 2*[[]][] - [][][]"),
        ("[[[]]]", "-[[[]]] + 2*[[]][] - [][][]"),
    ];
    for (g, want) in cases {
        let got = antipode_basis(&f(g)).to_string();
        c.check(got == want, || format!("antipode of {g}: {got}"));
    }
    c.finish()
}

fn twisted_rules(rng: &mut ChaCha8Rng) -> LinMap<Polynomial> {
    let alpha: Vec<Rational> = (0..=5).map(|_| random_rational(rng)).collect();
    rho_map(&CocycleSpec::integral().twisted(&PolyFunctional::from_rationals(&alpha)))
}

/// Nilpotency, character closure, inverse by antipode and the group law of `φˣ`.
pub fn convolution() -> SuiteReport {
    let mut c = Checker::new("convolution");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi = int_rules();
    let psi = twisted_rules(&mut rng);
    for rules in [&phi, &psi] {
        let shifted = rules.sub(&LinMap::unit());
        let powers = ConvPowers::new(&shifted);
        for g in forests_up_to(5) {
            let v = powers.power(g.nodes() + 1).value(&g);
            c.check_result(v.map(|v| v.is_zero()), || format!("nilpotency of {} at {g}", rules.name()));
        }
        c.check_result(
            conv_inverse(rules).and_then(|inv| first_difference(&inv, &rules.compose_antipode(), 5)).map(|d| d.is_none()),
            || format!("inverse of {} is precomposition with S", rules.name()),
        );
    }
    let prod = convolve(&phi, &psi);
    c.check_result(character_defect(&prod, 4).map(|d| d.is_none()), || "product of characters is a character".into());
    for (a, b) in [(int(1), int(2)), (Rational::new(1.into(), 2.into()), Rational::new((-3).into(), 4.into()))] {
        let sum = &a + &b;
        let lhs = convolve(&int_rules_at(a.clone()), &int_rules_at(b.clone()));
        let want = &sum * &sum * &sum / int(3);
        c.check_result(lhs.value(&f("[[][]]")).map(|v| v == want), || format!("group law at [[][]] for {a}, {b}"));
        c.check_result(
            first_difference(&lhs, &int_rules_at(sum.clone()), 5).map(|d| d.is_none()),
            || format!("group law on forests for {a}, {b}"),
        );
    }
    c.finish()
}

fn mom() -> Renormalizer {
    Renormalizer::new(MellinData::Symbolic, Scheme::Mom)
}

/// Counterterm closed form, finiteness, multiplicativity, the Bogoliubov
/// identity, subdivergences, scale invariance and the Hopf morphism property.
pub fn birkhoff() -> SuiteReport {
    let mut c = Checker::new("birkhoff");
    let r = mom();
    for t in trees_up_to(5) {
        let g = t.to_forest();
        let maps = r.maps(g.nodes());
        let closed = antipode_basis(&g).terms().try_fold(LaurentSeries::zero(), |acc, (h, k)| {
            let v = Scheme::Mom.project(&maps.phi.value(h)?)?;
            Ok::<_, crate::Error>(acc.add(&v.scale(k)))
        });
        c.check_result(
            closed.and_then(|cl| Ok(maps.minus.value(&g)?.agrees_with(&cl))),
            || format!("counterterm closed form at {g}"),
        );
    }
    for scheme in [Scheme::Mom, Scheme::Ms] {
        let r = Renormalizer::new(MellinData::Symbolic, scheme);
        for g in forests_up_to(5) {
            c.check_result(r.finite_part(&g).map(|_| true), || format!("{scheme:?} finiteness at {g}"));
            let maps = r.maps(g.nodes());
            let bogoliubov = (|| {
                let lhs = maps.bar.value(&g)?;
                Ok(lhs.agrees_with(&maps.plus.value(&g)?.sub(&maps.minus.value(&g)?)))
            })();
            // φ̄(1) = 1 while φ₊(1) - φ₋(1) = 0: the identity lives on ker ε
            if !g.is_one() {
                c.check_result(bogoliubov, || format!("{scheme:?} Bogoliubov identity at {g}"));
            }
            if g.trees().len() > 1 {
                for m in [&maps.minus, &maps.plus] {
                    let product = g.trees().iter().try_fold(LaurentSeries::one(), |acc, t| {
                        Ok::<_, crate::Error>(acc.mul(&m.value(&t.to_forest())?))
                    });
                    c.check_result(
                        product.and_then(|pr| Ok(m.value(&g)?.agrees_with(&pr))),
                        || format!("{scheme:?} {} multiplicative at {g}", m.name()),
                    );
                }
            }
        }
        for t in trees_up_to(3) {
            c.check_result(r.subdivergence_holds(&t), || format!("{scheme:?} subdivergence at {t}"));
        }
    }
    let h = Polynomial::var(Symbol::Alpha);
    let phys = std::sync::Arc::new(mom());
    let phys_map = phys.physical_map();
    for g in forests_up_to(5) {
        let shift = r.finite_part(&g).map(|v| {
            let shifted = v
                .substitute(Symbol::LogS, &(&Polynomial::var(Symbol::LogS) + &h))
                .substitute(Symbol::LogMu, &(&Polynomial::var(Symbol::LogMu) + &h));
            shifted == v
        });
        c.check_result(shift, || format!("scale invariance at {g}"));
        let morphism = phys_map.as_ref().map_err(Clone::clone).and_then(|m| {
            let lhs = poly_coproduct(&m.value(&g)?);
            let rhs = basis_coproduct(&g).iter().try_fold(PolyTensor::zero(), |acc, (a, b, k)| {
                let t = PolyTensor::pure(&m.value(a)?, &m.value(b)?.scale(&int(*k as i64)));
                Ok::<_, crate::Error>(acc.add(&t))
            })?;
            Ok(lhs == rhs)
        });
        c.check_result(morphism, || format!("physical limit is a Hopf morphism at {g}"));
    }
    let fresh = mom();
    let mut order = forests_up_to(5);
    order.reverse();
    for g in order {
        let same = fresh.physical_limit(&g).and_then(|a| Ok(a == r.physical_limit(&g)?));
        c.check_result(same, || format!("evaluation order independence at {g}"));
    }
    c.finish()
}

/// The closed-form physical limits of the trees up to 3 nodes.
pub fn physical_limits() -> SuiteReport {
    let mut c = Checker::new("physical-limits");
    let r = mom();
    let cases = [
        ("[]", "-c-1*L"),
        ("[[]]", "1/2*c-1^2*L^2 - c-1*c0*L"),
        ("[[[]]]", "-1/6*c-1^3*L^3 + c-1^2*c0*L^2 - c-1*(c0^2 + c-1*c1)*L"),
        ("[[][]]", "-1/3*c-1^3*L^3 + c-1^2*c0*L^2 - 2*c-1^2*c1*L"),
    ];
    for (g, want) in cases {
        c.check_result(r.physical_limit(&f(g)).map(|v| v == p(want)), || format!("MOM limit of {g}"));
    }
    let ms = Renormalizer::new(MellinData::Symbolic, Scheme::Ms);
    c.check_result(ms.physical_limit(&f("[]")).map(|v| v == p("c0 - c-1*Ls")), || "MS limit of []".into());
    c.finish()
}

/// `ρ_{-c₋₁∫₀+∂η}` against the MOM physical limit.
pub fn universal() -> SuiteReport {
    let mut c = Checker::new("universal");
    let r = mom();
    for g in forests_up_to(5) {
        let same = renormalized_via_universal(&MellinData::Symbolic, &g)
            .and_then(|u| Ok(u.rename(Symbol::X, Symbol::LogRatio) == r.physical_limit(&g)?));
        c.check_result(same, || format!("universal reconstruction at {g}"));
    }
    c.finish()
}

/// Leading poles of the regularized rules and leading logs of the limit.
pub fn leading_terms() -> SuiteReport {
    let mut c = Checker::new("leading-terms");
    let m = MellinData::Symbolic;
    let r = mom();
    for t in trees_up_to(5) {
        let g = t.to_forest();
        let n = g.nodes() as i64;
        let pole = phi_reg(&m, &g, 1).and_then(|v| Ok(v.min_order() == -n && v.coeff(-n)? == leading_pole(&m, &g)?));
        c.check_result(pole, || format!("leading pole at {g}"));
        let log = r.physical_limit(&g).and_then(|v| {
            let top = &v.coefficient_of(Symbol::LogRatio, n as u32) * &Polynomial::var(Symbol::LogRatio).pow(n as u32);
            Ok(v.degree_in(Symbol::LogRatio) == n as u32 && top == leading_log(&m, &g)?)
        });
        c.check_result(log, || format!("leading log at {g}"));
    }
    c.finish()
}

fn random_functional(rng: &mut ChaCha8Rng, certified: usize) -> HFunctional<Rational> {
    let table: Vec<(Forest, Rational)> = forests_up_to(certified)
        .into_iter()
        .map(|g| (g, random_rational(rng)))
        .collect();
    HFunctional::from_table(table, certified)
}

/// `χ_α` examples, the twist theorem and the group law.
pub fn automorphisms() -> SuiteReport {
    let mut c = Checker::new("automorphisms");
    let alpha = HFunctional::from_table(
        [
            (Forest::one(), p("a0")),
            (f("[]"), p("a1")),
            (f("[][]"), p("a2")),
            (f("[[]]"), p("a3")),
        ],
        3,
    );
    let cases = [
        ("[]", "[]"),
        ("[[]]", "[[]] + a0*[]"),
        ("[[][]]", "[[][]] + 2*a1*[] + a0*[][]"),
        ("[[[]]]", "[[[]]] + 2*a0*[[]] + (a0^2 + a1)*[]"),
    ];
    for (g, want) in cases {
        let got = HElem::parse(want).and_then(|w| Ok(chi(&alpha, &HElem::basis(f(g)))? == w));
        c.check_result(got, || format!("chi at {g}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..3 {
        let values: Vec<Rational> = (0..=4).map(|_| random_rational(&mut rng)).collect();
        let a = PolyFunctional::from_rationals(&values);
        let l = CocycleSpec::integral();
        let rho_l = rho_map(&l);
        let pulled = pullback(&a, &rho_l);
        let chi_pulled = chi_map(&pulled);
        let twisted = l.twisted(&a);
        for g in forests_up_to(4) {
            let ok = (|| {
                let rhs = rho_l.apply(&chi_pulled.value(&g)?, |q| q.clone())?;
                Ok(rho(&twisted, &g)? == rhs)
            })();
            c.check_result(ok, || format!("twist theorem at {g}"));
        }
        let (x, y) = (random_functional(&mut rng, 4), random_functional(&mut rng, 4));
        let composed = chi_map(&auto_compose(&x, &y));
        let (cx, cy) = (chi_map(&x), chi_map(&y));
        for g in forests_up_to(4) {
            let ok = (|| {
                let rhs = cx.apply(&cy.value(&g)?, |q| HElem::term(Forest::one(), q.clone()))?;
                Ok(composed.value(&g)? == rhs)
            })();
            c.check_result(ok, || format!("group law at {g}"));
        }
    }
    c.finish()
}

/// DSE coefficients, the Catalan correlation function and `Σσ`.
pub fn dyson_schwinger() -> SuiteReport {
    let mut c = Checker::new("dyson-schwinger");
    let x = dse_solve(8);
    let cases = [
        "[]",
        "[[]]",
        "[[[]]] + [[][]]",
        "[[[[]]]] + [[[][]]] + 2*[[[]][]] + [[][][]]",
    ];
    for (n, want) in cases.iter().enumerate() {
        let ok = HElem::parse(want).map(|w| x.coeff(n + 1) == &w);
        c.check_result(ok, || format!("a{}", n + 1));
    }
    for n in 1..=8 {
        c.check(x.coeff(n) == &dse_closed_form(n), || format!("a{n} equals its sigma closed form"));
    }
    let xv = Polynomial::var(Symbol::X);
    match correlation(&int_rules(), &x) {
        Ok(g) => {
            for (n, value) in g.iter().enumerate() {
                let want = xv.pow(n as u32 + 1).scale(&catalan_coefficient(n));
                c.check(*value == want, || format!("Catalan coefficient at order {}", n + 1));
            }
            let first = ["1", "1/2", "1/2", "5/8", "7/8"];
            for (n, w) in first.iter().enumerate() {
                let want = xv.pow(n as u32 + 1).scale(&w.parse::<Rational>().expect("literal"));
                c.check(g[n] == want, || format!("correlation coefficient {}", n + 1));
            }
        }
        Err(e) => c.check(false, || format!("correlation: {e}")),
    }
    c.finish()
}

/// `γ` values, the RG identities and the reconstruction `exp⋆(xγ) = φ_phys`.
pub fn renormalization_group() -> SuiteReport {
    let mut c = Checker::new("renormalization-group");
    let phys = match std::sync::Arc::new(mom()).physical_map() {
        Ok(m) => m,
        Err(e) => {
            c.check(false, || format!("physical map: {e}"));
            return c.finish();
        }
    };
    let g = gamma(&phys);
    let cases = [
        ("[]", "-c-1"),
        ("[[]]", "-c-1*c0"),
        ("[[[]]]", "-c-1*c0^2 - c-1^2*c1"),
        ("[[][]]", "-2*c-1^2*c1"),
        ("[][[]]", "0"),
    ];
    for (t, want) in cases {
        c.check_result(g.value(&f(t)).map(|v| v == p(want)), || format!("gamma at {t}"));
    }
    c.check_result(infinitesimal_defect(&g, 5).map(|d| d.is_none()), || "gamma is infinitesimal".into());
    match rg_identities(&g, 5, 3) {
        Ok(report) => {
            for (label, ok) in report.checks {
                c.check(ok, || label);
            }
        }
        Err(e) => c.check(false, || format!("RG identities: {e}")),
    }
    c.check_result(
        conv_exp(&g.scale(&Polynomial::var(Symbol::X))).and_then(|e| first_difference(&e, &phys, 5)).map(|d| d.is_none()),
        || "exp of x gamma reproduces the physical limit".into(),
    );
    c.finish()
}

/// The feet identity for tree factorials and `Σσ = C_{n-1}`.
pub fn tree_factorials() -> SuiteReport {
    let mut c = Checker::new("tree-factorials");
    for t in trees_up_to(7) {
        let g = t.to_forest();
        let lhs = int(g.nodes() as i64) / g.factorial();
        let rhs = leaf_addresses(&g).into_iter().try_fold(int(0), |acc, v| {
            Ok::<_, crate::Error>(acc + int(1) / leaves_and_prune(&g, v)?.factorial())
        });
        c.check_result(rhs.map(|r| r == lhs), || format!("feet identity at {g}"));
    }
    let mut catalan = int(1);
    for n in 1..=7usize {
        let total: Rational = trees_with_nodes(n).iter().map(sigma_count).sum();
        c.check(total == catalan, || format!("sigma sum at {n} nodes"));
        // C_n = C_{n-1}·2(2n-1)/(n+1)
        catalan = catalan * int(2 * (2 * n as i64 - 1)) / int(n as i64 + 1);
    }
    c.finish()
}

fn random_series(rng: &mut ChaCha8Rng) -> LaurentSeries {
    let symbols = [Polynomial::one(), p("c-1"), p("c0"), p("Ls")];
    let min = rng.gen_range(-3..=0);
    let len = rng.gen_range(0..=5);
    let coeffs = (0..len)
        .map(|_| symbols[rng.gen_range(0..symbols.len())].scale(&random_rational(rng)))
        .collect();
    LaurentSeries::new(min, coeffs, Some(rng.gen_range(3..=5)))
}

fn random_poly(rng: &mut ChaCha8Rng) -> Polynomial {
    let coeffs: Vec<Polynomial> = (0..=rng.gen_range(0..=8))
        .map(|_| Polynomial::constant(random_rational(rng)))
        .collect();
    Polynomial::from_powers(Symbol::X, &coeffs)
}

/// Rota-Baxter identity of the pole part and the indexed Taylor identity.
pub fn rota_baxter() -> SuiteReport {
    let mut c = Checker::new("rota-baxter");
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..1000 {
        let (a, b) = (random_series(&mut rng), random_series(&mut rng));
        let ok = (|| {
            let (ra, rb) = (a.pole_part()?, b.pole_part()?);
            let lhs = ra.mul(&rb).add(&a.mul(&b).pole_part()?);
            let rhs = ra.mul(&b).add(&a.mul(&rb)).pole_part()?;
            Ok(lhs == rhs)
        })();
        c.check_result(ok, || format!("pole part Rota-Baxter identity, sample {i}"));
    }
    for i in 0..500 {
        let (fp, gp) = (random_poly(&mut rng), random_poly(&mut rng));
        let (s, t) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let (ts, tt) = (taylor_truncate(s, &fp), taylor_truncate(t, &gp));
        let lhs = &ts * &tt;
        let inner = &(&(&ts * &gp) + &(&fp * &tt)) - &(&fp * &gp);
        c.check(lhs == taylor_truncate(s + t, &inner), || format!("indexed Taylor identity, sample {i}"));
    }
    c.finish()
}

/// Quadrature against the instantiated symbolic limits, within 5 seconds.
pub fn numeric_oracle() -> SuiteReport {
    let mut c = Checker::new("numeric-oracle");
    let start = Instant::now();
    let k = NumericKernel::default();
    for (s, mu) in [(2.0, 1.0), (1.0, 3.0), (5.0, 2.0)] {
        for (t, tol) in [("[]", 1e-8), ("[[]]", 1e-6)] {
            let r = compare_symbolic(&k, &f(t), s, mu, tol);
            c.check_result(r.map(|_| true), || format!("oracle at {t}, s={s}, mu={mu}"));
        }
    }
    let control = NumericKernel::new(|z| 2.0 / (1.0 + z), k.mellin().to_vec());
    c.check(
        compare_symbolic(&control, &f("[]"), 2.0, 1.0, 1e-6).is_err(),
        || "mismatched kernel is rejected".into(),
    );
    let elapsed = start.elapsed().as_secs_f64();
    c.check(elapsed < 5.0, || format!("oracle runtime {elapsed:.2}s"));
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_resolvable() {
        let names = suite_names();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
        assert!(run("no-such-suite").is_none());
    }

    #[test]
    fn reference_values_pass() {
        let r = reference_values();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.checked, 7);
    }
}
