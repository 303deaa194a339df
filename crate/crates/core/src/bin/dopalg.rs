//! Command-line front end: adjoints, compatibility conditions, resolutions,
//! parametrizability tests, ext zero-tests, symbol cohomology and the
//! built-in operator catalog, with optional JSON reports.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use dopalg::acceptance;
use dopalg::catalog::{self, MetricSpec, SystemDef};
use dopalg::error::EngineError;
use dopalg::groebner::Budget;
use dopalg::homology::{
    cc, duality_test, euler_characteristic, ext_zero, resolve, Verdict,
};
use dopalg::report::{
    BudgetJson, ExtJson, MatrixJson, ParamTestJson, Report, ResolveJson, SpencerJson,
};
use dopalg::spencer;
use dopalg::sysdsl;

#[derive(Parser)]
#[command(
    name = "dopalg",
    version,
    about = "Exact computations with linear systems of partial differential operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in system family (see `dopalg catalog` for names)
    #[arg(long)]
    catalog: Option<String>,
    /// Dimension for catalog families that take one
    #[arg(long)]
    n: Option<usize>,
    /// Metric signature for geometric families: euclidean | minkowski
    #[arg(long, default_value = "euclidean")]
    metric: String,
    /// Read systems from a .dop file instead
    #[arg(long)]
    file: Option<std::path::PathBuf>,
    /// Which system of the file (default: the first)
    #[arg(long)]
    system: Option<String>,
    /// Specialize a parameter, e.g. --param c=0 or --param l=3/2 (repeatable)
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Emit a JSON report instead of human-readable text
    #[arg(long)]
    json: bool,
    /// Maximum number of syzygy steps in resolutions
    #[arg(long, default_value_t = 8)]
    max_steps: usize,
    /// Degree budget for basis completion (default 12, env DOPALG_DEGREE_CAP)
    #[arg(long)]
    degree_cap: Option<u32>,
    /// Cooperative work budget: maximum number of basis elements
    #[arg(long)]
    timeout: Option<usize>,
}

impl RunArgs {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var("DOPALG_DEGREE_CAP") {
            if let Ok(v) = v.parse() {
                b.max_degree = v;
            }
        }
        if let Some(d) = self.degree_cap {
            b.max_degree = d;
        }
        if let Some(t) = self.timeout {
            b.max_basis = t;
        }
        b
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Formal adjoint of the system matrix
    Adjoint {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generating compatibility conditions (syzygies) of the system
    Cc {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Free resolution: iterated compatibility conditions
    Resolve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Double-duality parametrizability test with torsion extraction
    ParamTest {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Zero-test for the i-th extension module
    Ext {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Which extension module
        #[arg(long, default_value_t = 1)]
        i: usize,
    },
    /// Delta-cohomology of the first-order isometry/conformal symbol
    Spencer {
        /// Symbol family: killing | conformal
        #[arg(long, default_value = "killing")]
        symbol: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Euler characteristic of the full resolution
    Euler {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List catalog systems, or print one with --catalog
    Catalog {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the complete acceptance suite
    CheckAll {
        #[command(flatten)]
        run: RunArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                EngineError::ResourceBudgetExceeded(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, EngineError> {
    let bad = || EngineError::Input(format!("cannot parse rational number {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(EngineError::DivisionByZero);
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(p))
    }
}

fn metric(input: &InputArgs, n: usize) -> Result<MetricSpec, EngineError> {
    match input.metric.as_str() {
        "euclidean" => Ok(MetricSpec::euclidean(n)),
        "minkowski" => Ok(MetricSpec::minkowski(n)),
        other => Err(EngineError::Input(format!(
            "unknown metric {other:?} (euclidean | minkowski)"
        ))),
    }
}

const CATALOG_HELP: &[(&str, &str)] = &[
    ("killing", "first-order isometry operator (needs --n)"),
    ("conformal", "trace-free conformal operator (needs --n >= 3)"),
    ("cauchy", "divergence/stress equilibrium operator (needs --n)"),
    ("ricci", "linearized Ricci operator (needs --n)"),
    ("einstein", "linearized Einstein operator (needs --n)"),
    ("trace-flip", "algebraic trace flip (needs --n)"),
    ("riemann", "curvature operator = cc(killing) (needs --n)"),
    ("bianchi", "first-order identities = cc(riemann) (needs --n)"),
    ("airy", "plane stress-function parametrization"),
    ("beltrami", "spatial stress-function parametrization"),
    ("beltrami-weighted", "row-weighted self-adjoint variant"),
    ("pendulum", "two pendulums, distinct lengths l1, l2"),
    ("pendulum-equal", "two pendulums with equal length l"),
    ("pendulum-phi", "4th-order potential for the generic pendulum"),
    ("vessiot", "plane pseudogroup family with structure constant c"),
];

fn need_n(input: &InputArgs) -> Result<usize, EngineError> {
    input
        .n
        .ok_or_else(|| EngineError::Input("this catalog family needs --n".into()))
}

fn load_system(input: &InputArgs, budget: &Budget) -> Result<SystemDef, EngineError> {
    let mut sys = match (&input.catalog, &input.file) {
        (Some(name), None) => {
            let m = |input: &InputArgs| -> Result<MetricSpec, EngineError> {
                metric(input, need_n(input)?)
            };
            match name.as_str() {
                "killing" => catalog::killing(&m(input)?),
                "conformal" => catalog::conformal_killing(&m(input)?)?,
                "cauchy" => catalog::cauchy(&m(input)?),
                "ricci" => catalog::ricci(&m(input)?),
                "einstein" => catalog::einstein(&m(input)?),
                "trace-flip" => catalog::trace_flip(&m(input)?),
                "riemann" => catalog::riemann(&m(input)?, budget)?,
                "bianchi" => catalog::bianchi(&m(input)?, budget)?,
                "airy" => catalog::airy(),
                "beltrami" => catalog::beltrami(false),
                "beltrami-weighted" => catalog::beltrami(true),
                "pendulum" => catalog::double_pendulum(false),
                "pendulum-equal" => catalog::double_pendulum(true),
                "pendulum-phi" => catalog::pendulum_parametrization(),
                "vessiot" => catalog::vessiot(None),
                other => {
                    return Err(EngineError::Input(format!(
                        "unknown catalog system {other:?}; run `dopalg catalog` for the list"
                    )))
                }
            }
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| EngineError::Input(format!("cannot read {}: {e}", path.display())))?;
            let systems = sysdsl::parse(&text)?;
            match &input.system {
                Some(name) => systems
                    .into_iter()
                    .find(|s| &s.name == name)
                    .ok_or_else(|| EngineError::Input(format!("no system named {name:?}")))?,
                None => systems.into_iter().next().expect("parse yields a system"),
            }
        }
        (Some(_), Some(_)) => {
            return Err(EngineError::Input(
                "--catalog and --file are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(EngineError::Input(
                "need an input: --catalog NAME or --file F".into(),
            ))
        }
    };

    for spec in &input.params {
        let Some((name, value)) = spec.split_once('=') else {
            return Err(EngineError::Input(format!(
                "--param expects NAME=VALUE, got {spec:?}"
            )));
        };
        let idx = sys
            .ctx
            .index_of(name.trim())
            .filter(|&i| i >= sys.ctx.n())
            .ok_or_else(|| EngineError::Input(format!("no parameter named {name:?}")))?;
        let v = parse_rational(value)?;
        sys.matrix = sys.matrix.specialize(idx, &v)?;
        sys.name = format!("{}_{}{}", sys.name, name.trim(), v);
    }
    Ok(sys)
}

fn budget_json(b: &Budget, max_steps: usize) -> BudgetJson {
    BudgetJson {
        max_degree: b.max_degree,
        max_basis: b.max_basis,
        max_steps,
    }
}

fn emit(
    json: bool,
    command: &str,
    input: &str,
    budget: BudgetJson,
    results: serde_json::Value,
    human: String,
    started: Instant,
) {
    if json {
        let rep = Report::new(
            command,
            input,
            budget,
            results,
            started.elapsed().as_millis(),
        );
        println!("{}", serde_json::to_string_pretty(&rep).expect("serializable"));
    } else {
        println!("{human}");
    }
}

fn resolve_like(
    input: InputArgs,
    run: RunArgs,
    euler_only: bool,
    started: Instant,
) -> Result<(), EngineError> {
    let b = run.budget();
    let sys = load_system(&input, &b)?;
    let res = resolve(&sys.matrix, run.max_steps, &b)?;
    let euler = if res.terminated {
        Some(euler_characteristic(&res, sys.matrix.cols as i64)?)
    } else {
        None
    };
    let rj = ResolveJson::from_resolution(&res, sys.matrix.cols, euler);
    let human = if euler_only {
        match euler {
            Some(chi) => format!("{}: euler characteristic {chi}", sys.name),
            None => format!(
                "{}: resolution did not terminate within {} steps",
                sys.name, run.max_steps
            ),
        }
    } else {
        let mut h = format!(
            "{}: ranks {:?} orders {:?} ({})",
            sys.name,
            rj.ranks,
            res.orders(),
            if res.terminated {
                "terminated"
            } else {
                "not terminated"
            }
        );
        if let Some(chi) = euler {
            h.push_str(&format!("\neuler characteristic: {chi}"));
        }
        h
    };
    let results = serde_json::to_value(&rj).unwrap();
    emit(
        run.json,
        if euler_only { "euler" } else { "resolve" },
        &sysdsl::print_dsl(&sys),
        budget_json(&b, run.max_steps),
        results,
        human,
        started,
    );
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode, EngineError> {
    let started = Instant::now();
    match cli.cmd {
        Cmd::Adjoint { input, run } => {
            let b = run.budget();
            let sys = load_system(&input, &b)?;
            let ad = sys.matrix.adjoint();
            let results = serde_json::to_value(MatrixJson::from_matrix(&ad)).unwrap();
            emit(
                run.json,
                "adjoint",
                &sysdsl::print_dsl(&sys),
                budget_json(&b, run.max_steps),
                results,
                format!("adjoint of {} ({}x{}):\n{}", sys.name, ad.rows, ad.cols, ad),
                started,
            );
        }
        Cmd::Cc { input, run } => {
            let b = run.budget();
            let sys = load_system(&input, &b)?;
            let k = cc(&sys.matrix, &b)?;
            let results = serde_json::to_value(MatrixJson::from_matrix(&k)).unwrap();
            let human = if k.rows == 0 {
                format!("{}: no compatibility conditions (full row rank)", sys.name)
            } else {
                format!(
                    "{}: {} compatibility condition(s), order {}:\n{}",
                    sys.name,
                    k.rows,
                    k.order().unwrap_or(0),
                    k
                )
            };
            emit(
                run.json,
                "cc",
                &sysdsl::print_dsl(&sys),
                budget_json(&b, run.max_steps),
                results,
                human,
                started,
            );
        }
        Cmd::Resolve { input, run } => resolve_like(input, run, false, started)?,
        Cmd::Euler { input, run } => resolve_like(input, run, true, started)?,
        Cmd::ParamTest { input, run } => {
            let b = run.budget();
            let sys = load_system(&input, &b)?;
            let rep = duality_test(&sys.matrix, &b)?;
            let pj = ParamTestJson::from_report(&rep);
            let mut human = match rep.verdict {
                Verdict::Parametrizable => format!(
                    "{}: parametrizable; {}-potential parametrization:\n{}",
                    sys.name, rep.parametrization.cols, rep.parametrization
                ),
                Verdict::NotParametrizable => format!(
                    "{}: not parametrizable; recomputed system has {} generators",
                    sys.name, rep.cc_back.rows
                ),
            };
            let mut ann_lines: Vec<(String, usize)> = Vec::new();
            for t in &rep.torsion {
                let line = match &t.annihilator {
                    Some(a) => format!(
                        "torsion: annihilator {a} (searched to degree {})",
                        t.searched_degree
                    ),
                    None => format!(
                        "torsion row without annihilator up to degree {}",
                        t.searched_degree
                    ),
                };
                match ann_lines.iter_mut().find(|(l, _)| *l == line) {
                    Some((_, count)) => *count += 1,
                    None => ann_lines.push((line, 1)),
                }
            }
            for (line, count) in ann_lines {
                if count == 1 {
                    human.push_str(&format!("\n{line}"));
                } else {
                    human.push_str(&format!("\n{line} [x{count}]"));
                }
            }
            let results = serde_json::to_value(&pj).unwrap();
            emit(
                run.json,
                "param-test",
                &sysdsl::print_dsl(&sys),
                budget_json(&b, run.max_steps),
                results,
                human,
                started,
            );
        }
        Cmd::Ext { input, run, i } => {
            let b = run.budget();
            let sys = load_system(&input, &b)?;
            let rep = ext_zero(&sys.matrix, i, run.max_steps, &b)?;
            let ej = ExtJson::from_report(&rep);
            let human = if rep.is_zero {
                format!("{}: ext^{i} = 0", sys.name)
            } else {
                let w = rep
                    .witness
                    .as_ref()
                    .map(|w| {
                        w.iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" | ")
                    })
                    .unwrap_or_default();
                format!("{}: ext^{i} != 0, witness ({w})", sys.name)
            };
            let results = serde_json::to_value(&ej).unwrap();
            emit(
                run.json,
                "ext",
                &sysdsl::print_dsl(&sys),
                budget_json(&b, run.max_steps),
                results,
                human,
                started,
            );
        }
        Cmd::Spencer { symbol, n, json } => {
            let sig = vec![1i64; n];
            let g1 = match symbol.as_str() {
                "killing" => spencer::killing_symbol(n, &sig),
                "conformal" => spencer::conformal_symbol(n, &sig),
                other => {
                    return Err(EngineError::Input(format!(
                        "unknown symbol family {other:?} (killing | conformal)"
                    )))
                }
            };
            let rep = spencer::delta_complex(&g1, n.min(3));
            let sj = SpencerJson {
                n,
                symbol_dims: rep.dims.clone(),
                delta_ranks: rep.ranks.clone(),
                cohomology: rep.cohomology.clone(),
            };
            if json {
                let r = Report::new(
                    "spencer",
                    &format!("{symbol} n={n}"),
                    budget_json(&Budget::default(), 0),
                    serde_json::to_value(&sj).unwrap(),
                    started.elapsed().as_millis(),
                );
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            } else {
                println!(
                    "{symbol} symbol, n = {n}: dims {:?}, delta ranks {:?}, cohomology {:?}",
                    rep.dims, rep.ranks, rep.cohomology
                );
            }
        }
        Cmd::Catalog { input, json } => {
            if input.catalog.is_some() {
                let b = Budget::default();
                let sys = load_system(&input, &b)?;
                if json {
                    println!("{}", sysdsl::print(&sys, sysdsl::Format::Json));
                } else {
                    println!("{}", sysdsl::print(&sys, sysdsl::Format::Text));
                }
            } else if json {
                let list: Vec<serde_json::Value> = CATALOG_HELP
                    .iter()
                    .map(|(n, d)| serde_json::json!({"name": n, "description": d}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&list).unwrap());
            } else {
                println!("available systems:");
                for (name, desc) in CATALOG_HELP {
                    println!("  {name:<18} {desc}");
                }
            }
        }
        Cmd::CheckAll { run } => {
            let b = run.budget();
            let outcomes = acceptance::run_all(&b);
            let mut any_fail = false;
            let mut any_budget = false;
            for o in &outcomes {
                println!(
                    "criterion {:2} ({}): {} [{} ms] - {}",
                    o.index,
                    o.name,
                    if o.pass { "PASS" } else { "FAIL" },
                    o.elapsed_ms,
                    o.detail
                );
                any_fail |= !o.pass;
                any_budget |= o.budget_exceeded;
            }
            if run.json {
                let crits: Vec<serde_json::Value> = outcomes
                    .iter()
                    .map(|o| {
                        serde_json::json!({
                            "index": o.index,
                            "name": o.name,
                            "pass": o.pass,
                            "detail": o.detail,
                        })
                    })
                    .collect();
                let r = Report::new(
                    "check-all",
                    "acceptance suite",
                    budget_json(&b, run.max_steps),
                    serde_json::Value::Array(crits),
                    started.elapsed().as_millis(),
                );
                println!("{}", serde_json::to_string_pretty(&r).unwrap());
            }
            if any_budget {
                return Ok(ExitCode::from(2));
            }
            if any_fail {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
