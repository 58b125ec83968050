mod commands;
mod fixtures;
mod report;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use report::{CliResult, Ctx, Failure, Outcome, Verdict, EXIT_INTERNAL, EXIT_OK, EXIT_REFUTED};
use suite::SuiteName;

/// Exact computations in homotopy categories of free complexes over local algebras.
#[derive(Parser)]
#[command(name = "homforge", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Degree window for graded rings, overriding the ring file.
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Resolution or truncation bound.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall-clock time in the report (the report is then not byte-stable).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check shapes, homogeneity and d^2 = 0.
    Validate {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Cohomology dimensions in every degree.
    Cohomology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Minimal model with comparison maps.
    Minimize {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Mapping cone of a chain map.
    Cone {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Hom_K(X, Y[shift]) with a basis of classes.
    Hom {
        #[arg(long)]
        complex: PathBuf,
        /// Defaults to the first complex.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Dual complex Hom_A(X, A).
    Dual {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Matlis dual Hom_A(X, E).
    Matlis {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Minimal free resolution of a module.
    Resolve {
        #[arg(long)]
        module: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Koszul complex on a list of ring elements.
    Koszul {
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated polynomials.
        #[arg(long)]
        elems: String,
    },
    /// Tate resolution of the residue field.
    Tate {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        emit_filtration: bool,
    },
    /// Check the good-filtration axioms for a filtration of the Tate resolution.
    FiltrationVerify {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        filtration: PathBuf,
    },
    /// Serre functor and the pairing Hom_K(X, X) x Hom_K(X, F X) -> k.
    Serre {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// AR triangle ending at an indecomposable complex.
    Ar {
        #[arg(long)]
        complex: PathBuf,
        /// JSON list of complexes for the factorization check.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Splitting test for the cone triangle of a map.
    Miyata {
        /// The map whose cone triangle is tested.
        #[arg(long)]
        triangle: PathBuf,
        /// Replace the triangle by an isomorphic one with scrambled bases.
        #[arg(long)]
        disguise: bool,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Cones of r^n u for n = 1..max-n, compared pairwise.
    ConeFamily {
        #[arg(long)]
        complex: PathBuf,
        /// Endomorphism u; defaults to the identity.
        #[arg(long)]
        endo: Option<PathBuf>,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Decide whether two complexes are homotopy equivalent.
    Iso {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        ring: Option<PathBuf>,
    },
    /// Run a bundled check suite.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Cohomology { .. } => "cohomology",
            Command::Minimize { .. } => "minimize",
            Command::Cone { .. } => "cone",
            Command::Hom { .. } => "hom",
            Command::Dual { .. } => "dual",
            Command::Matlis { .. } => "matlis",
            Command::Resolve { .. } => "resolve",
            Command::Koszul { .. } => "koszul",
            Command::Tate { .. } => "tate",
            Command::FiltrationVerify { .. } => "filtration-verify",
            Command::Serre { .. } => "serre",
            Command::Ar { .. } => "ar",
            Command::Miyata { .. } => "miyata",
            Command::ConeFamily { .. } => "cone-family",
            Command::Iso { .. } => "iso",
            Command::Suite { .. } => "suite",
        }
    }
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> CliResult<Outcome> {
    use commands::*;
    match cmd {
        Command::Validate { complex, ring } => validate(ctx, complex, ring.as_ref()),
        Command::Cohomology { complex, ring } => cohomology_cmd(ctx, complex, ring.as_ref()),
        Command::Minimize { complex, ring } => minimize_cmd(ctx, complex, ring.as_ref()),
        Command::Cone { map, ring } => cone_cmd(ctx, map, ring.as_ref()),
        Command::Hom { complex, target, shift, ring } => hom(ctx, complex, target.as_ref(), *shift, ring.as_ref()),
        Command::Dual { complex, ring } => dual_cmd(ctx, complex, ring.as_ref()),
        Command::Matlis { complex, ring } => matlis(ctx, complex, ring.as_ref()),
        Command::Resolve { module, ring } => resolve(ctx, module, ring.as_ref()),
        Command::Koszul { ring, elems } => koszul_cmd(ctx, ring, elems),
        Command::Tate { ring, emit_filtration } => tate(ctx, ring, *emit_filtration),
        Command::FiltrationVerify { ring, filtration } => filtration_verify(ctx, ring, filtration),
        Command::Serre { complex, ring } => serre(ctx, complex, ring.as_ref()),
        Command::Ar { complex, family, ring } => ar(ctx, complex, family.as_ref(), ring.as_ref()),
        Command::Miyata { triangle, disguise, ring } => miyata(ctx, triangle, *disguise, ring.as_ref()),
        Command::ConeFamily { complex, endo, r, max_n, ring } => {
            cone_family(ctx, complex, endo.as_ref(), r, *max_n, ring.as_ref())
        }
        Command::Iso { complex, other, ring } => iso(ctx, complex, other, ring.as_ref()),
        Command::Suite { name } => run_suite(*name),
    }
}

fn run_suite(name: SuiteName) -> CliResult<Outcome> {
    let results = suite::run(name);
    if let Some(r) = results.iter().find(|r| r.internal) {
        return Err(Failure::Internal(format!("item {}: {}", r.id, r.detail)));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let mut lines: Vec<String> = results
        .iter()
        .map(|r| format!("[{}] {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.detail))
        .collect();
    lines.push(format!("{passed}/{} passed", results.len()));
    let label = match name {
        SuiteName::PaperChecks => "paper-checks",
        SuiteName::Quick => "quick",
    };
    Ok(Outcome::with_verdict(
        passed == results.len(),
        json!({ "suite": label, "items": suite::to_value(&results), "passed": passed, "failed": results.len() - passed }),
        lines,
    ))
}

/// The command line minus the report destination.
fn echo_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = vec![];
    let mut skip = false;
    for a in args {
        if std::mem::take(&mut skip) || a.starts_with("--out=") {
            continue;
        }
        if a == "--out" {
            skip = true;
            continue;
        }
        out.push(a);
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv = echo_args(std::env::args().skip(1));
    let mut ctx = Ctx::new(cli.seed, cli.window, cli.bound);
    let start = Instant::now();
    let outcome = dispatch(&mut ctx, &cli.command);
    let elapsed = start.elapsed();

    let (code, status, body, lines) = match outcome {
        Ok(o) => {
            let (code, status) = match o.verdict {
                Verdict::Ok => (EXIT_OK, "ok"),
                Verdict::Refuted => (EXIT_REFUTED, "refuted"),
            };
            (code, status, ("result", o.result), o.summary)
        }
        Err(f) => (f.code(), f.status(), ("error", Value::String(f.to_string())), vec![]),
    };
    let mut report = json!({
        "command": cli.command.name(),
        "argv": argv,
        "inputs": ctx.inputs,
        "seed": ctx.seed,
        "status": status,
        "exit_code": code,
    });
    report[body.0] = body.1;
    if cli.timings {
        report["timings_ms"] = json!({ "total": elapsed.as_millis() as u64 });
    }
    let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes"));

    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(report::EXIT_USER as u8);
        }
    }
    let mut stdout = std::io::stdout().lock();
    match cli.format {
        Format::Json => {
            let _ = stdout.write_all(text.as_bytes());
        }
        Format::Text => {
            for l in &lines {
                let _ = writeln!(stdout, "{l}");
            }
        }
    }
    if let Some(Value::String(e)) = report.get("error") {
        let kind = if code == EXIT_INTERNAL { "internal error" } else { "error" };
        eprintln!("{kind}: {e}");
    }
    ExitCode::from(code as u8)
}
