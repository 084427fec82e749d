//! `hopfren`: command-line access to the rooted-tree Hopf algebra and the
//! renormalized toy model.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hopfren::dse::{correlation, dse_solve};
use hopfren::forests::sigma_count;
use hopfren::hopf::{antipode, coproduct};
use hopfren::oracle::{compare_symbolic, NumericKernel};
use hopfren::polyhopf::PolyFunctional;
use hopfren::rings::{rational_to_json, LaurentSeries, Polynomial};
use hopfren::toymodel::{leading_log, MellinData, Renormalizer, Scheme, DEFAULT_TRUNC};
use hopfren::universal::{chi, int_rules, rho, CocycleSpec, HFunctional};
use hopfren::{verify, Error, Forest, HElem};

#[derive(Parser)]
#[command(name = "hopfren", version, about = "Hopf algebra of rooted trees and toy-model renormalization")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// The cut coproduct of a linear combination of forests.
    Coproduct {
        #[arg(value_parser = parse_elem)]
        element: HElem,
    },
    /// The antipode of a linear combination of forests.
    Antipode {
        #[arg(value_parser = parse_elem)]
        element: HElem,
    },
    /// The tree factorial of a forest.
    Factorial {
        #[arg(value_parser = parse_forest)]
        forest: Forest,
    },
    /// The number of plane embeddings of a tree.
    Sigma {
        #[arg(value_parser = parse_forest)]
        tree: Forest,
    },
    /// The morphism into K[x] fixed by `scale·∫₀ + ∂α`.
    Rho {
        /// Coefficient of the integral operator.
        #[arg(long, default_value = "1", value_parser = parse_poly)]
        scale: Polynomial,
        /// Values α(1), α(x), α(x²), …; omitted means α = 0.
        #[arg(long, value_delimiter = ',', value_parser = parse_poly)]
        alpha: Option<Vec<Polynomial>>,
        #[arg(value_parser = parse_forest)]
        forest: Forest,
    },
    /// The automorphism χ_α of the tree algebra.
    ///
    /// α is given as `v(forest)=value` pairs; forests within the certified
    /// degree that are not listed are taken to have value 0.
    Chi {
        #[arg(long = "alpha", value_parser = parse_pair)]
        alpha: Vec<(Forest, Polynomial)>,
        /// Largest node count on which α is certified.
        #[arg(long)]
        degree: usize,
        #[arg(value_parser = parse_forest)]
        forest: Forest,
    },
    /// Counterterm and renormalized value of the regularized rules.
    Renorm(RenormArgs),
    /// The limit z → 0 of the renormalized rules.
    PhysicalLimit(RenormArgs),
    /// The leading log (-c₋₁L)^|f|/f!.
    LeadingLog {
        #[arg(long, default_value = "symbolic", value_parser = parse_mellin)]
        mellin: MellinData,
        #[arg(long, value_parser = parse_forest)]
        forest: Forest,
    },
    /// Coefficients of the Dyson-Schwinger series X = αB₊(1/(1-X)).
    Dse {
        #[arg(long)]
        order: usize,
        /// Also list the embedding count of every tree that occurs.
        #[arg(long)]
        sigma: bool,
    },
    /// The correlation function G(α) = φ(X(α)).
    Correlation {
        #[arg(long, value_enum)]
        rules: Rules,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "symbolic", value_parser = parse_mellin)]
        mellin: MellinData,
    },
    /// Numeric quadrature of the subtracted integrals against the symbolic limit.
    Oracle {
        #[arg(long, value_parser = parse_forest)]
        tree: Forest,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Runs invariant suites; exits 1 if any fails.
    Check {
        /// A suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct RenormArgs {
    #[arg(long, value_enum, default_value_t = SchemeArg::Mom)]
    scheme: SchemeArg,
    /// `symbolic`, or a JSON file `{"coeffs": ["n/d", …]}` starting at c₋₁.
    #[arg(long, default_value = "symbolic", value_parser = parse_mellin)]
    mellin: MellinData,
    #[arg(long, value_parser = parse_forest)]
    forest: Forest,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Mom,
    Ms,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Mom => Scheme::Mom,
            SchemeArg::Ms => Scheme::Ms,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rules {
    /// φˣ(f) = x^|f|/f!.
    Intrules,
    /// The momentum-scheme physical limit with x = ln(s/μ).
    ToyMom,
}

fn parse_elem(s: &str) -> Result<HElem, String> {
    HElem::parse(s).map_err(|e| e.to_string())
}

fn parse_forest(s: &str) -> Result<Forest, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_poly(s: &str) -> Result<Polynomial, String> {
    s.trim().parse().map_err(|e: Error| e.to_string())
}

/// `v(forest)=value` or `forest=value`.
fn parse_pair(s: &str) -> Result<(Forest, Polynomial), String> {
    let (lhs, rhs) = s.split_once('=').ok_or("expected forest=value")?;
    let lhs = lhs.trim();
    let lhs = match lhs.strip_prefix("v(").and_then(|x| x.strip_suffix(')')) {
        Some(inner) => inner,
        None => lhs,
    };
    Ok((parse_forest(lhs)?, parse_poly(rhs)?))
}

fn parse_mellin(s: &str) -> Result<MellinData, String> {
    if s == "symbolic" {
        return Ok(MellinData::Symbolic);
    }
    let text = std::fs::read_to_string(s).map_err(|e| format!("{s}: {e}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{s}: {e}"))?;
    MellinData::from_json(&v).map_err(|e| format!("{s}: {e}"))
}

/// Truncation order from `HOPFREN_TRUNC`, else the default.
fn trunc_from_env() -> Result<i64, String> {
    match std::env::var("HOPFREN_TRUNC") {
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|t: &i64| *t >= 1)
            .ok_or_else(|| format!("HOPFREN_TRUNC: expected a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_TRUNC),
    }
}

enum Failure {
    Domain(Error),
    Usage(String),
    /// Already reported on standard output.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn renormalizer(scheme: Scheme, mellin: MellinData) -> Result<Renormalizer, Failure> {
    let trunc = trunc_from_env().map_err(Failure::Usage)?;
    Ok(Renormalizer::with_trunc(mellin, scheme, trunc)?)
}

fn poly_elem_json(x: &HElem<Polynomial>) -> Value {
    x.to_json_with(|c| Value::String(c.to_string()))
}

fn render(out: Output, text: String, json: impl FnOnce() -> Value, latex: impl FnOnce() -> String) -> String {
    match out {
        Output::Text => text,
        Output::Json => json().to_string(),
        Output::Latex => latex(),
    }
}

fn render_poly(out: Output, p: &Polynomial) -> String {
    render(out, p.to_string(), || json!({"text": p.to_string(), "terms": p.to_json()}), || p.latex())
}

fn render_series(out: Output, label: &str, s: &LaurentSeries) -> (String, Value, String) {
    let _ = out;
    (format!("{label}: {s}"), s.to_json(), s.latex())
}

fn run(cli: Cli) -> Result<String, Failure> {
    let out = cli.output;
    Ok(match cli.command {
        Command::Coproduct { element } => {
            let d = coproduct(&element);
            render(out, d.to_string(), || d.to_json(), || d.latex())
        }
        Command::Antipode { element } => {
            let s = antipode(&element);
            render(out, s.to_string(), || s.to_json(), || s.latex())
        }
        Command::Factorial { forest } => {
            let v = forest.factorial();
            render(out, v.to_string(), || json!(rational_to_json(&v)), || v.to_string())
        }
        Command::Sigma { tree } => {
            let t = tree
                .as_tree()
                .ok_or_else(|| Error::Invalid(format!("{tree} is not a single tree")))?;
            let v = sigma_count(t);
            render(out, v.to_string(), || json!(rational_to_json(&v)), || v.to_string())
        }
        Command::Rho { scale, alpha, forest } => {
            let spec = match alpha {
                Some(values) => CocycleSpec::new(scale, PolyFunctional::new(values)),
                None => CocycleSpec { scale, alpha: None },
            };
            render_poly(out, &rho(&spec, &forest)?)
        }
        Command::Chi { alpha, degree, forest } => {
            if let Some((f, _)) = alpha.iter().find(|(f, _)| f.nodes() > degree) {
                return Err(Failure::Usage(format!(
                    "--alpha lists {f}, beyond the certified degree {degree}"
                )));
            }
            let a = HFunctional::from_table(alpha, degree);
            let v = chi(&a, &HElem::basis(forest))?;
            render(out, v.to_string(), || poly_elem_json(&v), || v.latex())
        }
        Command::Renorm(args) => {
            let r = renormalizer(args.scheme.into(), args.mellin)?;
            let (minus, plus) = r.birkhoff(&args.forest)?;
            let (tm, jm, lm) = render_series(out, "counterterm", &minus);
            let (tp, jp, lp) = render_series(out, "renormalized", &plus);
            let f = args.forest.to_string();
            render(
                out,
                format!("{tm}\n{tp}"),
                || json!({"forest": f, "counterterm": jm, "renormalized": jp}),
                || format!("\\phi_-({}) = {lm} \\\\\n\\phi_+({}) = {lp}", args.forest.latex(), args.forest.latex()),
            )
        }
        Command::PhysicalLimit(args) => {
            let r = renormalizer(args.scheme.into(), args.mellin)?;
            render_poly(out, &r.physical_limit(&args.forest)?)
        }
        Command::LeadingLog { mellin, forest } => render_poly(out, &leading_log(&mellin, &forest)?),
        Command::Dse { order, sigma } => {
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let x = dse_solve(order);
            let mut text = x.to_string();
            if sigma {
                for a in x.coeffs() {
                    for (f, _) in a.terms() {
                        if let Some(t) = f.as_tree() {
                            text.push_str(&format!("\nsigma({f}) = {}", sigma_count(t)));
                        }
                    }
                }
            }
            render(
                out,
                text,
                || {
                    Value::Array(
                        x.coeffs()
                            .iter()
                            .enumerate()
                            .map(|(i, a)| json!({"order": i + 1, "terms": a.to_json()}))
                            .collect(),
                    )
                },
                || x.to_latex(),
            )
        }
        Command::Correlation { rules, order, mellin } => {
            if order == 0 {
                return Err(Failure::Usage("--order must be at least 1".into()));
            }
            let x = dse_solve(order);
            let map = match rules {
                Rules::Intrules => int_rules(),
                Rules::ToyMom => Arc::new(renormalizer(Scheme::Mom, mellin)?).physical_map()?,
            };
            let values = correlation(&map, &x)?;
            let text = values
                .iter()
                .enumerate()
                .map(|(i, v)| format!("G{} = {v}", i + 1))
                .collect::<Vec<_>>()
                .join("; ");
            render(
                out,
                text,
                || {
                    Value::Array(
                        values
                            .iter()
                            .enumerate()
                            .map(|(i, v)| json!({"order": i + 1, "text": v.to_string(), "terms": v.to_json()}))
                            .collect(),
                    )
                },
                || {
                    values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| format!("G_{{{}}} = {}", i + 1, v.latex()))
                        .collect::<Vec<_>>()
                        .join(", \\quad ")
                },
            )
        }
        Command::Oracle { tree, s, mu, tol } => {
            let r = compare_symbolic(&NumericKernel::default(), &tree, s, mu, tol)?;
            render(
                out,
                r.to_string(),
                || {
                    json!({"forest": r.forest, "s": r.s, "mu": r.mu, "numeric": r.numeric,
                           "symbolic": r.symbolic, "difference": r.difference(), "tol": r.tol})
                },
                || format!("{:.12} \\approx {:.12}", r.numeric, r.symbolic),
            )
        }
        Command::Check { suite } => {
            let reports = verify::run(&suite).ok_or_else(|| {
                Failure::Usage(format!(
                    "--suite: unknown suite {suite:?}; expected all or one of {}",
                    verify::suite_names().join(", ")
                ))
            })?;
            let passed = reports.iter().filter(|r| r.passed()).count();
            let text = match out {
                Output::Json => Value::Array(
                    reports
                        .iter()
                        .map(|r| json!({"suite": r.name, "checked": r.checked, "failures": r.failures}))
                        .collect(),
                )
                .to_string(),
                _ => {
                    let mut lines: Vec<String> = reports
                        .iter()
                        .map(|r| {
                            let status = if r.passed() { "PASS" } else { "FAIL" };
                            let mut line = format!("{status} {} ({} checks)", r.name, r.checked);
                            for f in r.failures.iter().take(5) {
                                line.push_str(&format!("\n    {f}"));
                            }
                            line
                        })
                        .collect();
                    lines.push(format!("{passed}/{} suites passed", reports.len()));
                    lines.join("\n")
                }
            };
            if passed != reports.len() {
                println!("{text}");
                return Err(Failure::Checks);
            }
            text
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_accept_both_spellings() {
        let (f, v) = parse_pair("v([[]])=1/2").unwrap();
        assert_eq!(f.to_string(), "[[]]");
        assert_eq!(v.to_string(), "1/2");
        let (f, v) = parse_pair("1 = a0").unwrap();
        assert!(f.is_one());
        assert_eq!(v.to_string(), "a0");
        assert!(parse_pair("[[]]").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
