//! Numeric cross-check: BPHZ-subtracted integrals
//! `∫₀^∞ [K(ζ/s)/s - K(ζ/μ)/μ] φ_phys(child)(ζ) dζ` by adaptive quadrature,
//! against the symbolic momentum-scheme physical limit.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};
use crate::rings::{Polynomial, Symbol};
use crate::toymodel::{MellinData, Renormalizer, Scheme};

type Kernel = dyn Fn(f64) -> f64 + Send + Sync;

/// A kernel `K(ζ)` together with the Laurent coefficients `c₋₁, c₀, …` of
/// its Mellin transform. Consistency of the two is not checked.
#[derive(Clone)]
pub struct NumericKernel {
    kernel: Arc<Kernel>,
    mellin: Vec<f64>,
}

impl fmt::Debug for NumericKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumericKernel(mellin {:?})", self.mellin)
    }
}

impl Default for NumericKernel {
    /// `K(ζ) = 1/(1+ζ)`, whose Mellin transform is `π/sin(πz)`.
    fn default() -> Self {
        let pi2 = PI * PI;
        NumericKernel::new(
            |z| 1.0 / (1.0 + z),
            vec![1.0, 0.0, pi2 / 6.0, 0.0, 7.0 * pi2 * pi2 / 360.0],
        )
    }
}

impl NumericKernel {
    pub fn new(kernel: impl Fn(f64) -> f64 + Send + Sync + 'static, mellin: Vec<f64>) -> Self {
        NumericKernel {
            kernel: Arc::new(kernel),
            mellin,
        }
    }

    pub fn mellin(&self) -> &[f64] {
        &self.mellin
    }

    /// `K(ζ/s)/s - K(ζ/μ)/μ`.
    fn subtracted(&self, zeta: f64, s: f64, mu: f64) -> f64 {
        (self.kernel)(zeta / s) / s - (self.kernel)(zeta / mu) / mu
    }

    /// Evaluates a polynomial in `c_n` and `L`.
    fn instantiate(&self, p: &Polynomial, log_ratio: f64) -> Result<f64> {
        p.eval_f64(&|sym| match sym {
            Symbol::Mellin(n) => self.mellin.get((n + 1) as usize).copied(),
            Symbol::LogRatio => Some(log_ratio),
            _ => None,
        })
        .ok_or_else(|| Error::Invalid(format!("cannot evaluate {p} numerically")))
    }
}

// 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7/15 step: `(kronrod estimate, |kronrod - gauss|)`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Global adaptive refinement on `[a, b]`: the interval with the largest
/// error estimate is bisected until the summed estimate is within `tol`.
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, budget: &mut usize) -> Result<f64> {
    let mut intervals = vec![(a, b, gk15(f, a, b))];
    loop {
        let err: f64 = intervals.iter().map(|(_, _, (_, e))| e).sum();
        if err <= tol {
            return Ok(intervals.iter().map(|(_, _, (v, _))| v).sum());
        }
        if *budget < 2 {
            return Err(Error::QuadratureFailure(format!(
                "evaluation budget exhausted on [{a}, {b}] (error estimate {err:e})"
            )));
        }
        *budget -= 2;
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .expect("at least one interval");
        let (lo, hi, _) = intervals.swap_remove(worst);
        let m = 0.5 * (lo + hi);
        intervals.push((lo, m, gk15(f, lo, m)));
        intervals.push((m, hi, gk15(f, m, hi)));
    }
}

/// `∫₀^∞ g`, for `g = O(ζ^{-2} ln ζ)`: adaptive panels `[0, T]` with `T`
/// doubled until the tail estimate `2T|g(T)|` drops below `tol/10`.
pub fn integrate_half_line(g: &dyn Fn(f64) -> f64, scale: f64, tol: f64) -> Result<f64> {
    let mut budget = 20_000;
    let panel_tol = tol / 1000.0;
    let mut total = adaptive(g, 0.0, scale, panel_tol, &mut budget)?;
    let mut t = scale;
    for _ in 0..200 {
        total += adaptive(g, t, 2.0 * t, panel_tol, &mut budget)?;
        t *= 2.0;
        if 2.0 * t * g(t).abs() < tol / 10.0 {
            return Ok(total);
        }
    }
    Err(Error::QuadratureFailure("tail did not decay".into()))
}

fn check_small(f: &Forest) -> Result<()> {
    if f.trees().iter().any(|t| t.size() > 2) {
        return Err(Error::Invalid(format!(
            "numeric oracle supports trees of at most 2 nodes, got {f}"
        )));
    }
    Ok(())
}

fn tree_numeric(kernel: &NumericKernel, t: &Tree, s: f64, mu: f64, tol: f64) -> Result<f64> {
    let c_minus_1 = kernel.mellin.first().copied().unwrap_or(0.0);
    let g = |zeta: f64| {
        let outer = kernel.subtracted(zeta, s, mu);
        if t.size() == 1 {
            outer
        } else {
            // φ_phys(•)(ζ) = -c₋₁ ln(ζ/μ), exactly
            outer * (-c_minus_1 * (zeta / mu).ln())
        }
    };
    integrate_half_line(&g, s.max(mu), tol)
}

/// The subtracted integral for a forest whose trees have at most 2 nodes.
pub fn bphz_numeric(kernel: &NumericKernel, f: &Forest, s: f64, mu: f64, tol: f64) -> Result<f64> {
    check_small(f)?;
    if !(s > 0.0 && mu > 0.0) {
        return Err(Error::Invalid("scales must be positive".into()));
    }
    f.trees()
        .iter()
        .try_fold(1.0, |acc, t| Ok(acc * tree_numeric(kernel, t, s, mu, tol)?))
}

/// Numeric and symbolic values side by side.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub forest: String,
    pub s: f64,
    pub mu: f64,
    pub numeric: f64,
    pub symbolic: f64,
    pub tol: f64,
}

impl OracleReport {
    pub fn difference(&self) -> f64 {
        (self.numeric - self.symbolic).abs()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at s={}, mu={}: numeric {:.12} symbolic {:.12} |diff| {:.3e} (tol {:e})",
            self.forest,
            self.s,
            self.mu,
            self.numeric,
            self.symbolic,
            self.difference(),
            self.tol
        )
    }
}

/// The MOM physical limit in `c_n` and `L`, instantiated at the kernel's values.
pub fn symbolic_value(kernel: &NumericKernel, f: &Forest, s: f64, mu: f64) -> Result<f64> {
    let r = Renormalizer::new(MellinData::Symbolic, Scheme::Mom);
    let p = r.physical_limit(f)?;
    kernel.instantiate(&p, (s / mu).ln())
}

/// Fails with `ToleranceExceeded` unless both computations agree within `tol`.
pub fn compare_symbolic(kernel: &NumericKernel, f: &Forest, s: f64, mu: f64, tol: f64) -> Result<OracleReport> {
    check_small(f)?;
    let numeric = bphz_numeric(kernel, f, s, mu, tol / 10.0)?;
    let symbolic = symbolic_value(kernel, f, s, mu)?;
    let report = OracleReport {
        forest: f.to_string(),
        s,
        mu,
        numeric,
        symbolic,
        tol,
    };
    if report.difference() > tol {
        return Err(Error::ToleranceExceeded { numeric, symbolic, tol });
    }
    Ok(report)
}
