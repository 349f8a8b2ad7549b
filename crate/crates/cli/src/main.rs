use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use laguerre_core::evolution::{evolve, stabilization_profile, InitialData};
use laguerre_core::integral::{exp_delta_integral, gauss_laguerre_rule, ExpIntegral};
use laguerre_core::norms::{
    norm_b, norm_b_form, norm_n_laguerre, operator_bound_check, sandwich_check, sandwich_constant, sequence_bound,
    SequenceParams,
};
use laguerre_core::operator::{apply_phi_of_delta, exp_delta_closed, laguerre_poly, laguerre_rodrigues, operation_rule, OperatorSpec};
use laguerre_core::verify::{run_all, run_suite, Suite, SuiteConfig, SuiteReport};
use laguerre_core::zeros::{
    classify_p_plus, exp_preservation_trial, phi_preservation_trial, preservation_trial, roots, DEFAULT_TOLERANCE,
};
use laguerre_core::{LaguerreForm, Poly, Rational, Scalar, ScalarMode};

/// Operator calculus for Laguerre entire functions. Results are printed as
/// JSON on standard output.
#[derive(Parser, Debug)]
#[command(name = "lagops", version)]
struct Cli {
    /// Exact rational arithmetic (integer theta only).
    #[arg(long, global = true)]
    exact: bool,

    /// Significant digits for floating output.
    #[arg(long, global = true, env = "LAGOPS_PRECISION", default_value_t = 17)]
    precision: usize,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Side file for CSV or JSON-lines output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// φ(Δθ)f for a polynomial symbol φ or φ(w) = e^{sw}.
    Apply {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        poly: String,
        /// Symbol as polynomial JSON.
        #[arg(long, conflicts_with = "phi_exp", required_unless_present = "phi_exp")]
        phi: Option<String>,
        /// Symbol e^{sw}; gives exp(sΔθ).
        #[arg(long, allow_hyphen_values = true)]
        phi_exp: Option<String>,
    },
    /// The semigroup exp(aΔθ).
    Exp {
        #[command(subcommand)]
        route: ExpRoute,
    },
    /// Laguerre polynomial exp(-Δθ)z^n.
    Laguerre {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        theta: String,
        #[arg(long, value_enum, default_value_t = LaguerreRoute::Semigroup)]
        route: LaguerreRoute,
    },
    /// Norms ‖f‖_b, N_b, the sandwich constant and sequence bounds.
    Norm {
        #[arg(long, value_enum)]
        kind: NormKind,
        #[arg(long)]
        b: String,
        #[arg(long)]
        poly: Option<String>,
        /// Laguerre form JSON {"C","l","alpha","betas"}.
        #[arg(long)]
        form: Option<String>,
        /// JSON array of forms (kind sequence).
        #[arg(long)]
        forms: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        /// Growth bound a (kind sequence).
        #[arg(long)]
        a: Option<f64>,
        /// Bound on |C_n| (kind sequence).
        #[arg(long)]
        c: Option<f64>,
        /// Bound on l_n (kind sequence).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Compare ‖φ(Δθ)f‖_c with (1-ab)^(-θ)‖φ‖_a‖f‖_b.
    BoundCheck {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        theta: f64,
    },
    /// Roots of a polynomial and membership in P+.
    Zeros {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// One zero-preservation trial.
    Preserve {
        #[arg(long, value_enum)]
        kind: PreserveKind,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Solution frame of the evolution problem with data e^{-εz}h(z).
    Evolve {
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        t: String,
        /// Points "re,im" at which to evaluate the solution.
        #[arg(long, allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// sup over |z| <= R of the solution across a time grid.
    Stabilize {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        h: String,
        #[arg(long)]
        theta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Run property and oracle suites.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Nodes and weights of the generalized Gauss-Laguerre rule.
    RuleDump {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 80)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExpRoute {
    /// Finite closed-form sum (any real a).
    Closed {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        poly: String,
    },
    /// Quadrature of the integral kernel representation (a > 0, θ > 0).
    Integral {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true, required = true)]
        z: Vec<String>,
        /// Fixed rule order; without it the order doubles from 80 to 320.
        #[arg(long)]
        order: Option<usize>,
    },
    /// exp(aΔθ)[e^{uz}g] in factored form (requires ua < 1).
    Rule {
        #[arg(long)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LaguerreRoute {
    Semigroup,
    Rodrigues,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NormKind {
    B,
    #[value(name = "N", alias = "n")]
    N,
    Sandwich,
    Sequence,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PreserveKind {
    Kappa,
    Phi,
    Exp,
}

/// How a failed command is reported.
enum Failure {
    /// Bad arguments, malformed JSON or a violated hypothesis: exit 2.
    Usage(String),
    /// A property suite found violations: exit 1.
    Suite(Value),
}

impl From<laguerre_core::Error> for Failure {
    fn from(e: laguerre_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_json(flag: &str, s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| usage(format!("--{flag}: malformed JSON at line {} column {}: {e}", e.line(), e.column())))
}

fn parse_poly<T: Scalar>(flag: &str, s: &str) -> Result<Poly<T>, Failure> {
    Poly::from_json(&parse_json(flag, s)?).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn parse_form(flag: &str, s: &str) -> Result<LaguerreForm<f64>, Failure> {
    LaguerreForm::from_json(&parse_json(flag, s)?).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn parse_scalar<T: Scalar>(flag: &str, s: &str) -> Result<T, Failure> {
    T::from_json(&Value::String(s.to_string())).ok_or_else(|| usage(format!("--{flag}: not a number: '{s}'")))
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let bad = || usage(format!("--z: expected 're' or 're,im', got '{s}'"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn check_theta<T: Scalar>(theta: &T) -> Result<(), Failure> {
    if T::EXACT {
        ScalarMode::ExactRational.validate_theta(theta.to_f64())?;
    }
    if *theta < T::zero() {
        return Err(usage("--theta must be nonnegative"));
    }
    Ok(())
}

fn write_side_file(path: &Option<PathBuf>, contents: &str) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, contents).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn apply<T: Scalar>(theta: &str, poly: &str, phi: Option<&str>, phi_exp: Option<&str>) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    check_theta(&theta)?;
    let f: Poly<T> = parse_poly("poly", poly)?;
    let spec = match (phi, phi_exp) {
        (Some(p), _) => OperatorSpec::polynomial(parse_poly("phi", p)?),
        (None, Some(s)) => OperatorSpec::exponential(parse_scalar("phi-exp", s)?),
        (None, None) => return Err(usage("one of --phi or --phi-exp is required")),
    };
    Ok(apply_phi_of_delta(&spec, &theta, &f).to_json())
}

fn exp_closed<T: Scalar>(a: &str, theta: &str, poly: &str) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    check_theta(&theta)?;
    let a: T = parse_scalar("a", a)?;
    Ok(exp_delta_closed(&a, &theta, &parse_poly::<T>("poly", poly)?).to_json())
}

fn exp_rule<T: Scalar>(a: &str, u: &str, theta: &str, poly: &str, zs: &[String]) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    check_theta(&theta)?;
    let r = operation_rule(&parse_scalar::<T>("a", a)?, &parse_scalar::<T>("u", u)?, &theta, &parse_poly::<T>("poly", poly)?)?;
    let values = zs
        .iter()
        .map(|s| parse_complex(s).map(|z| json!({"z": complex_json(z), "value": complex_json(r.eval(z))})))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "prefactor": r.prefactor.to_json(),
        "exp_coefficient": r.exp_coefficient.to_json(),
        "inner": r.inner.to_json(),
        "values": values,
    }))
}

fn laguerre<T: Scalar>(n: usize, theta: &str, route: LaguerreRoute) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    check_theta(&theta)?;
    let p = match route {
        LaguerreRoute::Semigroup => laguerre_poly(n, &theta),
        LaguerreRoute::Rodrigues => laguerre_rodrigues(n, &theta)?,
    };
    Ok(p.to_json())
}

fn norm_of_poly<T: Scalar>(b: &str, poly: &str) -> CmdResult {
    let r = norm_b(&parse_poly::<T>("poly", poly)?, &parse_scalar::<T>("b", b)?)?;
    Ok(json!({
        "b": r.b.to_json(),
        "value": r.value.to_json(),
        "truncation_degree": r.truncation_degree,
        "tail_bound": r.tail_bound.to_json(),
    }))
}

struct NormArgs<'a> {
    kind: NormKind,
    b: &'a str,
    poly: Option<&'a str>,
    form: Option<&'a str>,
    forms: Option<&'a str>,
    eps: Option<f64>,
    a: Option<f64>,
    c: Option<f64>,
    l: Option<usize>,
}

fn norm(args: NormArgs, exact: bool) -> CmdResult {
    let need = |x: Option<f64>, flag: &str| x.ok_or_else(|| usage(format!("--{flag} is required for this kind")));
    if exact && !(matches!(args.kind, NormKind::B) && args.poly.is_some()) {
        return Err(usage("--exact applies to --kind b with --poly only"));
    }
    match args.kind {
        NormKind::B => match (args.poly, args.form) {
            (Some(p), None) if exact => norm_of_poly::<Rational>(args.b, p),
            (Some(p), None) => norm_of_poly::<f64>(args.b, p),
            (None, Some(f)) => {
                let r = norm_b_form(&parse_form("form", f)?, parse_scalar("b", args.b)?)?;
                Ok(serde_json::to_value(r).expect("plain data"))
            }
            _ => Err(usage("give exactly one of --poly or --form")),
        },
        NormKind::N => {
            let form = parse_form("form", args.form.ok_or_else(|| usage("--form is required for kind N"))?)?;
            let b: f64 = parse_scalar("b", args.b)?;
            Ok(json!({"b": b, "value": norm_n_laguerre(&form, b)?}))
        }
        NormKind::Sandwich => {
            let b: f64 = parse_scalar("b", args.b)?;
            let eps = need(args.eps, "eps")?;
            match args.form {
                Some(f) => Ok(serde_json::to_value(sandwich_check(&parse_form("form", f)?, b, eps)?).expect("plain data")),
                None => Ok(json!({"b": b, "eps": eps, "constant": sandwich_constant(b, eps)?})),
            }
        }
        NormKind::Sequence => {
            let raw = parse_json("forms", args.forms.ok_or_else(|| usage("--forms is required for kind sequence"))?)?;
            let list = raw.as_array().ok_or_else(|| usage("--forms: expected a JSON array of forms"))?;
            let members = list
                .iter()
                .enumerate()
                .map(|(i, v)| LaguerreForm::from_json(v).map_err(|e| usage(format!("--forms[{i}]: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let l = args.l.ok_or_else(|| usage("--l is required for kind sequence"))?;
            let b: f64 = parse_scalar("b", args.b)?;
            let k = sequence_bound(&SequenceParams { members }, need(args.a, "a")?, need(args.c, "c")?, l, b)?;
            Ok(json!({"b": b, "bound": k}))
        }
    }
}

fn preserve<T: Scalar>(kind: PreserveKind, poly: &str, theta: &str, kappa: Option<&str>, phi: Option<&str>, a: Option<&str>, tol: f64) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    let f: Poly<T> = parse_poly("poly", poly)?;
    let report = match kind {
        PreserveKind::Kappa => {
            let k = kappa.ok_or_else(|| usage("--kappa is required for kind kappa"))?;
            preservation_trial(&f, &parse_scalar::<T>("kappa", k)?, &theta, tol)?
        }
        PreserveKind::Phi => {
            let p = phi.ok_or_else(|| usage("--phi is required for kind phi"))?;
            phi_preservation_trial(&parse_poly::<T>("phi", p)?, &f, &theta, tol)?
        }
        PreserveKind::Exp => {
            let a = a.ok_or_else(|| usage("--a is required for kind exp"))?;
            exp_preservation_trial(&parse_scalar::<T>("a", a)?, &theta, &f, tol)?
        }
    };
    Ok(report.to_json())
}

fn evolve_cmd<T: Scalar>(epsilon: &str, h: &str, theta: &str, t: &str, zs: &[String]) -> CmdResult {
    let theta: T = parse_scalar("theta", theta)?;
    check_theta(&theta)?;
    let data = InitialData {
        epsilon: parse_scalar::<T>("epsilon", epsilon)?,
        h: parse_poly::<T>("h", h)?,
    };
    let frame = evolve(&data, &theta, &parse_scalar::<T>("t", t)?)?;
    let values = zs
        .iter()
        .map(|s| parse_complex(s).map(|z| json!({"z": complex_json(z), "value": complex_json(frame.eval(z))})))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "t": frame.t.to_json(),
        "prefactor": frame.prefactor.to_json(),
        "exp_coefficient": frame.exp_coefficient.to_json(),
        "inner": frame.inner.to_json(),
        "values": values,
    }))
}

fn verify(cli: &Cli, suite: &str, trials: Option<usize>, tol: Option<f64>) -> CmdResult {
    let cfg = SuiteConfig {
        trials,
        seed: cli.seed,
        tolerance: tol,
        records: cli.output.is_some(),
    };
    let reports: Vec<SuiteReport> = if suite == "all" {
        run_all(&cfg)
    } else {
        vec![run_suite(suite.parse::<Suite>()?, &cfg)]
    };
    if cli.output.is_some() {
        let mut lines = String::new();
        for r in &reports {
            let recs = if r.records.is_empty() { vec![r.to_json()] } else { r.records.clone() };
            for rec in recs {
                lines.push_str(&rec.to_string());
                lines.push('\n');
            }
        }
        write_side_file(&cli.output, &lines)?;
    }
    let passed = reports.iter().all(SuiteReport::passed);
    let doc = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        json!({"passed": passed, "seed": cli.seed, "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>()})
    };
    if passed {
        Ok(doc)
    } else {
        Err(Failure::Suite(doc))
    }
}

fn run(cli: &Cli) -> CmdResult {
    let exact = cli.exact;
    let floating_only = |name: &str| -> Result<(), Failure> {
        if exact {
            Err(usage(format!("{name} has no exact-rational mode")))
        } else {
            Ok(())
        }
    };
    match &cli.command {
        Command::Apply { theta, poly, phi, phi_exp } => {
            if exact {
                apply::<Rational>(theta, poly, phi.as_deref(), phi_exp.as_deref())
            } else {
                apply::<f64>(theta, poly, phi.as_deref(), phi_exp.as_deref())
            }
        }
        Command::Exp { route } => match route {
            ExpRoute::Closed { a, theta, poly } => {
                if exact {
                    exp_closed::<Rational>(a, theta, poly)
                } else {
                    exp_closed::<f64>(a, theta, poly)
                }
            }
            ExpRoute::Rule { a, u, theta, poly, z } => {
                if exact {
                    exp_rule::<Rational>(a, u, theta, poly, z)
                } else {
                    exp_rule::<f64>(a, u, theta, poly, z)
                }
            }
            ExpRoute::Integral { a, theta, poly, z, order } => {
                floating_only("exp integral")?;
                let f: Poly<f64> = parse_poly("poly", poly)?;
                let zs = z.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>, _>>()?;
                let mut values = Vec::new();
                match order {
                    Some(q) => {
                        let rule = gauss_laguerre_rule(*theta, *q)?;
                        for z in zs {
                            let v = exp_delta_integral(*a, &f, z, &rule)?;
                            values.push(json!({"z": complex_json(z), "value": complex_json(v), "order": q}));
                        }
                    }
                    None => {
                        let t = ExpIntegral::new(*theta)?;
                        for z in zs {
                            let v = t.apply(*a, &f, z)?;
                            values.push(json!({"z": complex_json(z), "value": complex_json(v.value), "order": v.order, "converged": v.converged}));
                        }
                    }
                }
                Ok(json!({"values": values}))
            }
        },
        Command::Laguerre { n, theta, route } => {
            if exact {
                laguerre::<Rational>(*n, theta, *route)
            } else {
                laguerre::<f64>(*n, theta, *route)
            }
        }
        Command::Norm { kind, b, poly, form, forms, eps, a, c, l } => norm(
            NormArgs {
                kind: *kind,
                b,
                poly: poly.as_deref(),
                form: form.as_deref(),
                forms: forms.as_deref(),
                eps: *eps,
                a: *a,
                c: *c,
                l: *l,
            },
            exact,
        ),
        Command::BoundCheck { phi, poly, a, b, theta } => {
            floating_only("bound-check")?;
            let spec = OperatorSpec::polynomial(parse_poly("phi", phi)?);
            let r = operator_bound_check(&spec, &parse_poly("poly", poly)?, *a, *b, *theta)?;
            Ok(serde_json::to_value(r).expect("plain data"))
        }
        Command::Zeros { poly, tol } => {
            floating_only("zeros")?;
            let p: Poly<f64> = parse_poly("poly", poly)?;
            let rs = roots(&p)?;
            let clusters: Vec<Value> = rs.clusters().into_iter().map(|(z, m)| json!([z.re, z.im, m])).collect();
            let mut doc = rs.to_json();
            doc["clusters"] = json!(clusters);
            doc["p_plus"] = json!(classify_p_plus(&p, *tol)?);
            Ok(doc)
        }
        Command::Preserve { kind, poly, theta, kappa, phi, a, tol } => {
            if exact {
                preserve::<Rational>(*kind, poly, theta, kappa.as_deref(), phi.as_deref(), a.as_deref(), *tol)
            } else {
                preserve::<f64>(*kind, poly, theta, kappa.as_deref(), phi.as_deref(), a.as_deref(), *tol)
            }
        }
        Command::Evolve { epsilon, h, theta, t, z } => {
            if exact {
                evolve_cmd::<Rational>(epsilon, h, theta, t, z)
            } else {
                evolve_cmd::<f64>(epsilon, h, theta, t, z)
            }
        }
        Command::Stabilize { epsilon, h, theta, times, radius } => {
            floating_only("stabilize")?;
            let data = InitialData {
                epsilon: *epsilon,
                h: parse_poly("h", h)?,
            };
            let p = stabilization_profile(&data, *theta, times, *radius)?;
            write_side_file(&cli.output, &p.to_csv())?;
            Ok(serde_json::to_value(p).expect("plain data"))
        }
        Command::Verify { suite, trials, tol } => {
            floating_only("verify")?;
            verify(cli, suite, *trials, *tol)
        }
        Command::RuleDump { theta, order } => {
            floating_only("rule-dump")?;
            let rule = gauss_laguerre_rule(*theta, *order)?;
            write_side_file(&cli.output, &rule.to_csv())?;
            Ok(json!({"theta": theta, "order": order, "nodes": rule.nodes(), "weights": rule.weights()}))
        }
    }
}

/// Rounds every non-integer float to `digits` significant digits; integral
/// values are printed as integers.
fn round_floats(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
            *v = if r.fract() == 0.0 && r.abs() < 9.0e15 {
                json!(r as i64)
            } else {
                json!(r)
            };
        }
        Value::Array(a) => a.iter_mut().for_each(|x| round_floats(x, digits)),
        Value::Object(o) => o.values_mut().for_each(|x| round_floats(x, digits)),
        _ => {}
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = (ScalarMode::Floating { precision: cli.precision as u32 }).validate_theta(1.0) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let emit = |mut doc: Value| {
        round_floats(&mut doc, cli.precision);
        println!("{doc}");
    };
    match run(&cli) {
        Ok(doc) => {
            emit(doc);
            ExitCode::SUCCESS
        }
        Err(Failure::Suite(doc)) => {
            emit(doc);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
