//! `nctori` command-line front end.
//!
//! Every subcommand reads JSON from files (or `-` for stdin) and writes one
//! JSON document `{"status", "payload"}` to stdout. Exit codes: 0 ok,
//! 1 violated identity, 2 outside the domain of the action, 3 bad input.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nctori::exactmat::format_rational;
use nctori::group::{membership, sample_domain_report, GroupElementJson};
use nctori::grassmann::{intertwiner, projective_act, verify_annihilators};
use nctori::heisenberg::{build_embedding, dual_embedding, T32Mode};
use nctori::ktheory::{counterexample_search, det_identity_sample, morita_trace_check, trace_range};
use nctori::torus_rep::{rep_check, RationalTheta};
use nctori::{Error, GeneratorWord, GroupElement, RatMatrix, SkewMatrix};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nctori", version, about = "Exact checks for the SO(n,n|Z) action on noncommutative tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Group element `{"n","A","B","C","D"}` or word `{"tokens": [...]}`.
    #[arg(long)]
    g: String,
    /// Dimension for words made only of sigma letters.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ThetaArg {
    /// Antisymmetric matrix in the shared JSON matrix format.
    #[arg(long)]
    theta: String,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a group element or word to theta.
    Act {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        theta: ThetaArg,
    },
    /// Block equations and determinant of a candidate element.
    CheckGroup {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Heisenberg embedding, its dual, and the sigma_2p identity.
    SigmaDual {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Choice of T32: `upper` or `half`.
        #[arg(long, default_value = "half")]
        mode: String,
    },
    /// Projective action on the Grassmann algebra and the annihilator check.
    GrassmannAct {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        theta: ThetaArg,
    },
    /// Normalized Fock-space intertwiner of a group element.
    Intertwiner {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Generator of the trace range.
    TraceRange {
        #[command(flatten)]
        theta: ThetaArg,
    },
    /// Trace range before and after acting by g.
    MoritaTrace {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        theta: ThetaArg,
    },
    /// Pfaffian and determinant of theta.
    Pfaffian {
        #[command(flatten)]
        theta: ThetaArg,
    },
    /// Relations of the finite-dimensional representation of a rational theta.
    RepCheck {
        /// `{"q", "P"}` or a rational antisymmetric matrix.
        #[arg(long)]
        theta: String,
        /// Unimodular R for the rho isomorphism check.
        #[arg(long)]
        r: Option<String>,
        /// Integer antisymmetric N for the nu-shift check.
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        radius: Option<i64>,
    },
    /// Exhaustive search for A with A ^ A = diag(-1, 1, 1).
    WedgeCounterexample {
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random matrices for the det(A ^ A) = det(A)^2 sample.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
    /// Domain statistics for random words acting on theta.
    OrbitSample {
        #[command(flatten)]
        theta: ThetaArg,
        #[arg(long, default_value_t = 6)]
        max_word_len: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Violation(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn status(&self) -> (&'static str, u8) {
        match self {
            Failure::Violation(_) => ("violation", 1),
            Failure::Lib(e) if e.is_violation() => ("violation", 1),
            Failure::Lib(e) if e.is_domain() => ("domain-error", 2),
            _ => ("input-error", 3),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Violation(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read_source(path: &str) -> std::result::Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn load<T: serde::de::DeserializeOwned>(path: &str) -> std::result::Result<T, Failure> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn load_value(path: &str) -> std::result::Result<Value, Failure> {
    load(path)
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> std::result::Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn word_element(v: Value, n_hint: Option<usize>) -> std::result::Result<GroupElement, Failure> {
    let word: GeneratorWord = from_value(v, "word")?;
    let n = word
        .n
        .or_else(|| word.infer_n())
        .or(n_hint)
        .ok_or_else(|| Failure::Input("word needs \"n\" or --n".into()))?;
    Ok(word.evaluate(n)?)
}

fn load_group(arg: &GroupArg) -> std::result::Result<GroupElement, Failure> {
    let v = load_value(&arg.g)?;
    if v.get("tokens").is_some() {
        word_element(v, arg.n)
    } else {
        from_value(v, "group element")
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Outcome {
    serde_json::to_value(x).map_err(|e| Failure::Violation(format!("serialization: {e}")))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Act { g, theta } => {
            let g = load_group(&g)?;
            let theta: SkewMatrix = load(&theta.theta)?;
            Ok(json!({ "theta_prime": to_json(&g.act(&theta)?)? }))
        }
        Command::CheckGroup { g } => {
            let v = load_value(&g.g)?;
            let m = if v.get("tokens").is_some() {
                word_element(v, g.n)?.matrix().clone()
            } else if v.get("A").is_some() {
                from_value::<GroupElementJson>(v, "group element")?.to_matrix()?
            } else {
                from_value::<RatMatrix>(v, "matrix")?
            };
            to_json(&membership(&m)?)
        }
        Command::SigmaDual { theta, p, mode } => {
            let theta: SkewMatrix = load(&theta.theta)?;
            let mode: T32Mode = mode.parse()?;
            let e = build_embedding(&theta, p, mode)?;
            let sjs = &(&e.s.transpose() * &e.j) * &e.s;
            if sjs != *e.sigma_theta.inner() {
                return Err(Failure::Violation("S^t J S differs from sigma_2p(theta)".into()));
            }
            let dual = dual_embedding(&e)?;
            Ok(json!({ "embedding": to_json(&e)?, "dual_embedding": to_json(&dual)? }))
        }
        Command::GrassmannAct { g, theta } => {
            let g = load_group(&g)?;
            let theta: SkewMatrix = load(&theta.theta)?;
            let action = projective_act(&g, &theta)?;
            let report = verify_annihilators(&g, &theta)?;
            if !report.holds {
                return Err(Failure::Violation("annihilator identities fail".into()));
            }
            Ok(json!({ "action": to_json(&action)?, "annihilators": to_json(&report)? }))
        }
        Command::Intertwiner { g } => to_json(&intertwiner(&load_group(&g)?)?),
        Command::TraceRange { theta } => {
            let theta: SkewMatrix = load(&theta.theta)?;
            to_json(&trace_range(&theta))
        }
        Command::MoritaTrace { g, theta } => {
            let g = load_group(&g)?;
            let theta: SkewMatrix = load(&theta.theta)?;
            to_json(&morita_trace_check(&theta, &g)?)
        }
        Command::Pfaffian { theta } => {
            let theta: SkewMatrix = load(&theta.theta)?;
            let det = theta.inner().determinant()?;
            let pf = theta.pfaffian()?;
            if &pf * &pf != det {
                return Err(Failure::Violation("Pf^2 differs from det".into()));
            }
            Ok(json!({
                "n": theta.n(),
                "pfaffian": format_rational(&pf),
                "determinant": format_rational(&det),
            }))
        }
        Command::RepCheck { theta, r, nu, radius } => {
            let v = load_value(&theta)?;
            let rt = if v.get("q").is_some() {
                from_value::<RationalTheta>(v, "rational theta")?
            } else {
                RationalTheta::from_theta(&from_value::<SkewMatrix>(v, "theta")?)?
            };
            let r: Option<RatMatrix> = r.as_deref().map(load).transpose()?;
            let nu: Option<RatMatrix> = nu.as_deref().map(load).transpose()?;
            let report = rep_check(&rt, r.as_ref(), nu.as_ref(), radius)?;
            if !report.pass {
                return Err(Failure::Violation(format!(
                    "representation relation fails: {}",
                    serde_json::to_string(&report).unwrap_or_default()
                )));
            }
            to_json(&report)
        }
        Command::WedgeCounterexample { bound, seed, count } => {
            let search = counterexample_search(bound)?;
            let det = det_identity_sample(seed, count, 5);
            if !search.hits.is_empty() || !det.violations.is_empty() {
                return Err(Failure::Violation("det(A ^ A) = det(A)^2 contradicted".into()));
            }
            Ok(json!({ "search": to_json(&search)?, "det_identity": to_json(&det)? }))
        }
        Command::OrbitSample { theta, max_word_len, count, seed } => {
            let theta: SkewMatrix = load(&theta.theta)?;
            let report = sample_domain_report(&theta, max_word_len, count, seed)?;
            if report.action_law_violations > 0 {
                return Err(Failure::Violation("action law fails on a sampled pair".into()));
            }
            to_json(&report)
        }
    }
}

fn emit(status: &str, payload: Value) {
    let doc = json!({ "status": status, "payload": payload });
    println!("{}", serde_json::to_string_pretty(&doc).expect("JSON value serializes"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            emit("input-error", json!({ "error": e.kind().to_string() }));
            return ExitCode::from(3);
        }
    };
    let start = Instant::now();
    let outcome = run(cli.command);
    eprintln!("elapsed_ms: {}", start.elapsed().as_millis());
    match outcome {
        Ok(payload) => {
            emit("ok", payload);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (status, code) = f.status();
            eprintln!("{status}: {}", f.message());
            emit(status, json!({ "error": f.message() }));
            ExitCode::from(code)
        }
    }
}
