//! The combinatorial Dyson-Schwinger equation `X = αB₊(1/(1-X))`, its
//! correlation functions, the anomalous dimension `γ = ∂₀∘φ_phys` and the
//! renormalization group identities it satisfies.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::conv::{conv_exp, ConvPowers, LinMap, MapKind};
use crate::error::Result;
use crate::forests::{sigma_count, trees_with_nodes, Forest};
use crate::hopf::{coproduct, HElem, TensorElem};
use crate::polyhopf::d0;
use crate::rings::{int, Polynomial, Rational, Ring, Symbol};

/// `X(α) = Σ_{n≥1} a_n αⁿ`; `a_n` is homogeneous of degree `n` and a sum of trees.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesInAlpha {
    coeffs: Vec<HElem<Rational>>,
}

fn solved() -> &'static Mutex<Vec<HElem<Rational>>> {
    static SOLVED: OnceLock<Mutex<Vec<HElem<Rational>>>> = OnceLock::new();
    SOLVED.get_or_init(|| Mutex::new(Vec::new()))
}

/// `a_{n+1} = B₊(G_n)` with `G_0 = 1`, `G_n = Σ_{i=1}^n a_i G_{n-i}`,
/// i.e. `B₊` of the sum over all ordered products of degree `n`.
pub fn dse_solve(order: usize) -> SeriesInAlpha {
    let mut a = solved().lock().unwrap_or_else(|e| e.into_inner());
    while a.len() < order {
        let n = a.len();
        let mut g = vec![HElem::one()];
        for m in 1..=n {
            let mut gm = HElem::zero();
            for i in 1..=m {
                gm = gm.add(&a[i - 1].mul(&g[m - i]));
            }
            g.push(gm);
        }
        let next = g[n].b_plus();
        a.push(next);
    }
    SeriesInAlpha {
        coeffs: a[..order].to_vec(),
    }
}

/// `Σ_{t∈T_n} σ(t)·t`, the closed form of `a_n`.
pub fn dse_closed_form(n: usize) -> HElem<Rational> {
    HElem::from_terms(
        trees_with_nodes(n)
            .into_iter()
            .map(|t| (Forest::from(t.clone()), sigma_count(&t))),
    )
}

impl SeriesInAlpha {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_n` for `1 <= n <= order`.
    pub fn coeff(&self, n: usize) -> &HElem<Rational> {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[HElem<Rational>] {
        &self.coeffs
    }

    pub fn to_latex(&self) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| format!("a_{{{}}} = {}", i + 1, a.latex()))
            .collect::<Vec<_>>()
            .join(", \\quad ")
    }
}

impl fmt::Display for SeriesInAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| format!("a{} = {a}", i + 1))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `G(α) = φ(X(α))`: entry `n - 1` is `φ(a_n)`.
pub fn correlation<A: Ring>(rules: &LinMap<A>, x: &SeriesInAlpha) -> Result<Vec<A>> {
    x.coeffs().iter().map(|a| rules.apply_rational(a)).collect()
}

/// `γ = ∂₀∘φ`: the linear coefficient in `x`. Evaluated on every forest, so
/// infinitesimality is a checkable property rather than an assumption.
pub fn gamma(physical: &LinMap<Polynomial>) -> LinMap<Polynomial> {
    let phys = physical.clone();
    LinMap::new("γ", MapKind::Infinitesimal, move |f| Ok(d0(&phys.value(f)?)))
}

/// `exp⋆(x·γ)`, which reproduces a character into `K[x]` from its `γ`.
pub fn reconstruct(gamma: &LinMap<Polynomial>) -> Result<LinMap<Polynomial>> {
    conv_exp(&gamma.scale(&Polynomial::var(Symbol::X)))
}

/// `(P_lin⊗id)`: drops every left factor that is not a single tree.
pub fn project_left_trees(t: &TensorElem<Rational>) -> TensorElem<Rational> {
    TensorElem::from_terms(
        t.terms()
            .filter(|(l, _, _)| l.is_tree())
            .map(|(l, r, c)| (l.clone(), r.clone(), c.clone())),
    )
}

/// `(2α∂_α - 1)` at order `n`.
fn grading_factor(n: usize) -> Rational {
    int(2 * n as i64 - 1)
}

/// Outcome of the renormalization group checks.
#[derive(Clone, Debug, PartialEq)]
pub struct RgReport {
    /// `(label, holds)` per checked coefficient.
    pub checks: Vec<(String, bool)>,
}

impl RgReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(l, _)| l.as_str())
    }
}

/// Coefficient of `αⁿ` in `(P_lin⊗id)Δ(X) - X⊗1 - X⊗(2α∂_α-1)X`.
pub fn linear_coproduct_defect(x: &SeriesInAlpha, n: usize) -> TensorElem<Rational> {
    let lhs = project_left_trees(&coproduct(x.coeff(n)));
    let mut rhs = TensorElem::pure(x.coeff(n), &HElem::one());
    for j in 1..n {
        let right = x.coeff(j).scale_rational(&grading_factor(j));
        rhs = rhs.add(&TensorElem::pure(x.coeff(n - j), &right));
    }
    lhs.sub(&rhs)
}

/// Checks, coefficient-wise in `α` up to `order`:
/// (i) `(P_lin⊗id)Δ(X) = X⊗1 + X⊗(2α∂_α-1)X`;
/// (ii) `γ^{⋆n+1}(X) = γ(X)·(2α∂_α-1)γ^{⋆n}(X)` for `1 <= n <= n_max`;
/// (iii) `Z_•^{⋆n+1}(X) = α^{n+1}(2n)!/(2ⁿn!)` for `n + 1 <= order`.
pub fn rg_identities(gamma: &LinMap<Polynomial>, order: usize, n_max: usize) -> Result<RgReport> {
    let x = dse_solve(order);
    let mut checks = Vec::new();
    for n in 1..=order {
        checks.push((
            format!("linear coproduct at order {n}"),
            linear_coproduct_defect(&x, n).is_zero(),
        ));
    }
    let powers = ConvPowers::new(gamma);
    for k in 1..=n_max {
        let next = powers.power(k + 1);
        let cur = powers.power(k);
        for m in 1..=order {
            let lhs = next.apply_rational(x.coeff(m))?;
            let mut rhs = Polynomial::zero();
            for j in 1..m {
                let g = gamma.apply_rational(x.coeff(m - j))?;
                let c = cur.apply_rational(x.coeff(j))?.scale(&grading_factor(j));
                rhs = &rhs + &(&g * &c);
            }
            checks.push((format!("gamma power {} at order {m}", k + 1), lhs == rhs));
        }
    }
    let z = LinMap::<Rational>::infinitesimal("Z•", |t| {
        Ok(if t.size() == 1 { int(1) } else { int(0) })
    });
    let zp = ConvPowers::new(&z);
    for n in 0..order {
        let p = zp.power(n + 1);
        let mut double_fact = int(1);
        for k in 1..=n {
            double_fact *= int(2 * k as i64 - 1);
        }
        let ok = (1..=order).try_fold(true, |ok, m| {
            let want = if m == n + 1 { double_fact.clone() } else { int(0) };
            Ok::<_, crate::Error>(ok && p.apply_rational(x.coeff(m))? == want)
        })?;
        checks.push((format!("Z power {} closed form", n + 1), ok));
    }
    Ok(RgReport { checks })
}

/// `2^{-n} C_n`, the coefficient of `x^{n+1}` in `φˣ(a_{n+1})`.
pub fn catalan_coefficient(n: usize) -> Rational {
    let mut c = int(1);
    for k in 0..n {
        // C_{k+1} = C_k · 2(2k+1)/(k+2)
        c = c * int(2 * (2 * k as i64 + 1)) / int(k as i64 + 2);
    }
    c / int(2).pow(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::int_rules;

    fn h(s: &str) -> HElem<Rational> {
        HElem::parse(s).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let x = dse_solve(4);
        assert_eq!(x.coeff(1), &h("[]"));
        assert_eq!(x.coeff(2), &h("[[]]"));
        assert_eq!(x.coeff(3), &h("[[[]]] + [[][]]"));
        assert_eq!(x.coeff(4), &h("[[[[]]]] + [[[][]]] + 2*[[[]][]] + [[][][]]"));
        assert_eq!(dse_solve(3).to_string(), "a1 = []; a2 = [[]]; a3 = [[[]]] + [[][]]");
    }

    #[test]
    fn matches_sigma_closed_form() {
        let x = dse_solve(7);
        for n in 1..=7 {
            assert_eq!(x.coeff(n), &dse_closed_form(n), "order {n}");
        }
    }

    #[test]
    fn correlation_of_int_rules() {
        let x = dse_solve(5);
        let g = correlation(&int_rules(), &x).unwrap();
        let want = ["1", "1/2", "1/2", "5/8", "7/8"];
        for (n, (v, w)) in g.iter().zip(want).enumerate() {
            let expect = Polynomial::var(Symbol::X)
                .pow(n as u32 + 1)
                .scale(&crate::rings::parse_rational(w).unwrap());
            assert_eq!(v, &expect);
        }
        let unit = correlation(&LinMap::<Polynomial>::unit(), &x).unwrap();
        assert!(unit.iter().all(Polynomial::is_zero));
    }

    #[test]
    fn catalan_values() {
        let c: Vec<String> = (0..5).map(|n| catalan_coefficient(n).to_string()).collect();
        assert_eq!(c, ["1", "1/2", "1/2", "5/8", "7/8"]);
    }

    #[test]
    fn linear_coproduct_low_orders() {
        let x = dse_solve(3);
        for n in 1..=3 {
            assert!(linear_coproduct_defect(&x, n).is_zero());
        }
    }

    #[test]
    fn z_square_is_alpha_square() {
        let g = LinMap::<Polynomial>::infinitesimal("γ", |t| {
            Ok(Polynomial::var(Symbol::Param(t.size() as u32)))
        });
        let report = rg_identities(&g, 4, 2).unwrap();
        assert!(report.holds(), "{:?}", report.first_failure());
    }
}
