//! `rectdec`: generate, check and decompose finite grid modules.
//!
//! Data goes to stdout as JSON, diagnostics to stderr. Exit status is 0 on
//! success or a positive verdict, 1 on a negative verdict and 2 on usage or
//! input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rectdec_core::bimodule::{load, random_module, random_rectangle_decomposable, save};
use rectdec_core::decomposer::{
    decompose_rectangles, interval_decompose, local_condition_check, strong_exact,
    verify_certificate, weak_exact, DecomposeError,
};
use rectdec_core::filtration::t_skeleton;
use rectdec_core::gallery::{hook_counterexample, psi, HookSpec};
use rectdec_core::suites::{run_criterion, CRITERIA};
use rectdec_core::{FieldSpec, GridModule, GridPoint, GridShape, LocalClass};

#[derive(Parser)]
#[command(name = "rectdec", version, about = "Rectangle decomposition of finite grid modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Module JSON to read; stdin when absent.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Where to write the result; stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a module.
    Gen(GenArgs),
    /// Parse and validate a module.
    Validate {
        #[command(flatten)]
        io: Io,
    },
    /// Check exactness or a local decomposability condition.
    Check(CheckArgs),
    /// Decompose a weakly exact module into rectangles.
    Decompose {
        #[command(flatten)]
        io: Io,
        /// Build the isomorphism from the sum of rectangle modules and verify it.
        #[arg(long)]
        certify: bool,
    },
    /// Decide interval-decomposability by exhaustive peeling (small grids only).
    Oracle {
        #[command(flatten)]
        io: Io,
    },
    /// Print the skeleton of the module at a point.
    Skeleton {
        #[command(flatten)]
        io: Io,
        /// Node as `X,Y`.
        #[arg(long, value_parser = parse_point)]
        point: GridPoint,
    },
    /// Run the acceptance suites.
    Verify {
        /// Run every criterion.
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        /// Run a single criterion (1-7).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        criterion: Option<u8>,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Psi,
    Hook,
    Random,
    RectSum,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Size parameter of psi.
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Grid as `NXxNY` (random, rect-sum).
    #[arg(long, value_parser = parse_shape)]
    shape: Option<GridShape>,
    /// Number of rectangle summands (rect-sum).
    #[arg(long, default_value_t = 3)]
    count: usize,
    /// Dimension bound (random).
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Hook on the larger grid realizing every square case.
    #[arg(long)]
    rich: bool,
    /// Dual hook module.
    #[arg(long)]
    dual: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Ground truth file for rect-sum; defaults to `<out>.truth.json`, or
    /// `rect-sum-<seed>.truth.json` when writing to stdout.
    #[arg(long, value_name = "FILE")]
    truth: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true))]
struct CheckArgs {
    #[command(flatten)]
    io: Io,
    #[arg(long, group = "mode")]
    weak: bool,
    #[arg(long, group = "mode")]
    strong: bool,
    /// Every square restriction decomposes into the given class.
    #[arg(long, group = "mode", value_name = "CLASS", value_parser = LocalClass::from_str)]
    local: Option<LocalClass>,
}

/// Usage or input failure, reported with exit status 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn parse_shape(s: &str) -> Result<GridShape, String> {
    let (nx, ny) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NXxNY, got {s:?}"))?;
    let nx = nx.trim().parse().map_err(|e| format!("{e}"))?;
    let ny = ny.trim().parse().map_err(|e| format!("{e}"))?;
    GridShape::new(nx, ny).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<GridPoint, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let x = x.trim().parse().map_err(|e| format!("{e}"))?;
    let y = y.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(GridPoint::new(x, y))
}

fn read_module(path: Option<&Path>) -> Result<GridModule, Fail> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Fail(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(load(&text)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Fail(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<(), Fail> {
    emit(out, &serde_json::to_string_pretty(v).expect("json serializes"))
}

fn verdict(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn gen(a: &GenArgs) -> Result<ExitCode, Fail> {
    let field = FieldSpec::new(a.p)?;
    let need_seed = || a.seed.ok_or_else(|| Fail("--seed is required for random generators".into()));
    let need_shape = || a.shape.ok_or_else(|| Fail("--shape is required for random generators".into()));
    let module = match a.kind {
        GenKind::Psi => psi(a.m, field)?,
        GenKind::Hook => {
            let spec = HookSpec {
                dual: a.dual,
                ..if a.rich { HookSpec::rich() } else { HookSpec::minimal() }
            };
            hook_counterexample(&spec, field)?
        }
        GenKind::Random => random_module(need_shape()?, field, a.max_dim, need_seed()?),
        GenKind::RectSum => {
            let seed = need_seed()?;
            let (module, rects) = random_rectangle_decomposable(need_shape()?, field, a.count, seed);
            let truth_path = a.truth.clone().unwrap_or_else(|| match &a.out {
                Some(o) => PathBuf::from(format!("{}.truth.json", o.display())),
                None => PathBuf::from(format!("rect-sum-{seed}.truth.json")),
            });
            let truth = json!({
                "rectangles": rects.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            emit_json(Some(&truth_path), &truth)?;
            eprintln!("ground truth written to {}", truth_path.display());
            module
        }
    };
    emit(a.out.as_deref(), &save(&module))?;
    Ok(ExitCode::SUCCESS)
}

fn check(a: &CheckArgs) -> Result<ExitCode, Fail> {
    let m = read_module(a.io.input.as_deref())?;
    let (doc, ok) = if a.weak || a.strong {
        let r = if a.weak { weak_exact(&m) } else { strong_exact(&m) };
        let mut doc = r.to_json();
        doc["check"] = json!(if a.weak { "weak" } else { "strong" });
        if let Some(w) = &r.witness {
            eprintln!("witness: {w}");
        }
        (doc, r.verdict)
    } else {
        let class = a.local.expect("argument group requires a mode");
        let ok = local_condition_check(&m, class);
        (json!({ "check": "local", "class": class, "verdict": ok }), ok)
    };
    emit_json(a.io.out.as_deref(), &doc)?;
    Ok(verdict(ok))
}

fn decompose(io: &Io, certify: bool) -> Result<ExitCode, Fail> {
    let m = read_module(io.input.as_deref())?;
    match decompose_rectangles(&m, certify) {
        Ok(d) => {
            if certify && !verify_certificate(&m, &d) {
                return Err(Fail("certificate failed re-verification".into()));
            }
            let mut doc = d.to_json();
            doc["decomposable"] = json!(true);
            emit_json(io.out.as_deref(), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(DecomposeError::NotWeaklyExact(w)) => {
            eprintln!("not weakly exact: {w}");
            emit_json(io.out.as_deref(), &json!({ "decomposable": false, "witness": w.to_json() }))?;
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(e.into()),
    }
}

fn oracle(io: &Io) -> Result<ExitCode, Fail> {
    let m = read_module(io.input.as_deref())?;
    match interval_decompose(&m)? {
        Some(d) => {
            let mut doc = d.to_json();
            doc["interval_decomposable"] = json!(true);
            emit_json(io.out.as_deref(), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let doc = json!({ "interval_decomposable": false, "message": "NOT interval-decomposable" });
            emit_json(io.out.as_deref(), &doc)?;
            Ok(ExitCode::from(1))
        }
    }
}

fn skeleton(io: &Io, point: GridPoint) -> Result<ExitCode, Fail> {
    let m = read_module(io.input.as_deref())?;
    let sk = t_skeleton(&m, point)?;
    let doc = json!({
        "point": [point.x, point.y],
        "cols": sk.cols,
        "rows": sk.rows,
        "origin": [sk.origin.0 + 1, sk.origin.1 + 1],
    });
    emit_json(io.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn verify(all: bool, criterion: Option<u8>, seed: u64, out: Option<&Path>) -> Result<ExitCode, Fail> {
    let indices: Vec<usize> = match (all, criterion) {
        (_, Some(c)) => vec![usize::from(c)],
        (true, None) => (1..=CRITERIA.len()).collect(),
        (false, None) => return Err(Fail("pass --all or --criterion N".into())),
    };
    let runs = std::thread::scope(|scope| {
        let handles: Vec<_> = indices
            .iter()
            .map(|&i| scope.spawn(move || run_criterion(i, seed).expect("index in range")))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect::<Vec<_>>()
    });
    let mut ok = true;
    for run in &runs {
        let passed = run.report.passed();
        ok &= passed;
        eprintln!(
            "criterion {} [{}] {} ({:.1?})",
            run.index,
            run.name,
            if passed { "PASS" } else { "FAIL" },
            run.elapsed
        );
        for c in run.report.failures() {
            eprintln!("  FAIL {}: {}", c.name, c.detail);
        }
    }
    let doc = json!({
        "seed": seed,
        "passed": ok,
        "criteria": runs.iter().map(|r| json!({
            "index": r.index,
            "name": r.name,
            "passed": r.report.passed(),
            "seconds": r.elapsed.as_secs_f64(),
            "report": r.report.to_json(),
        })).collect::<Vec<_>>(),
    });
    emit_json(out, &doc)?;
    Ok(verdict(ok))
}

fn run(cli: Cli) -> Result<ExitCode, Fail> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Validate { io } => {
            let m = read_module(io.input.as_deref())?;
            let shape = m.shape();
            let doc = json!({
                "valid": true,
                "p": m.field().p(),
                "shape": shape.to_string(),
                "total_dim": m.total_dim(),
            });
            emit_json(io.out.as_deref(), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(a) => check(a),
        Command::Decompose { io, certify } => decompose(io, *certify),
        Command::Oracle { io } => oracle(io),
        Command::Skeleton { io, point } => skeleton(io, *point),
        Command::Verify { all, criterion, seed, out } => verify(*all, *criterion, *seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
