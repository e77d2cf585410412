use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lonely_runner::bohr::{covering_union, sunflower_check};
use lonely_runner::constructions::{exhaustive_short_check, prop_short_certificate, validate_certificate};
use lonely_runner::progression::double_dilate_is_collision_free;
use lonely_runner::search::{run_search, FindingKind, Mode, RunOptions, VerificationReport};
use lonely_runner::{
    build_bohr, compute_delta, covering_check, is_t_proper, moments, multiplicity, BohrSpec, Progression, Rational,
    SearchSpec, VelocityTuple,
};

/// Exact computations for the lonely runner problem.
#[derive(Parser, Debug)]
#[command(name = "lonely", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Largest velocity considered by searches.
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Number of runners.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Gap threshold, as p/q (defaults to 1/(n+1)).
    #[arg(long, global = true)]
    threshold: Option<Rational>,
    /// Radius, as p/q.
    #[arg(long, global = true)]
    delta: Option<Rational>,
    /// Worker threads for searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// File receiving search findings as JSON lines.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Checkpoint file; an existing one is resumed.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gap of loneliness δ(v) with a witness time.
    Delta {
        #[arg(required = true, allow_negative_numbers = true)]
        velocities: Vec<i64>,
    },
    /// Whether the arcs ‖t vᵢ‖ <= δ cover the circle, i.e. δ >= δ(v) (needs --delta).
    Cover {
        #[arg(required = true, allow_negative_numbers = true)]
        velocities: Vec<i64>,
    },
    /// Bohr set {t : ‖t vᵢ‖ <= δ} as arcs, with its measure (needs --delta).
    Bohr {
        #[arg(required = true, allow_negative_numbers = true)]
        frequencies: Vec<i64>,
    },
    /// Multiplicity of a progression with the given generators.
    Mu {
        #[arg(required = true, allow_negative_numbers = true)]
        generators: Vec<i64>,
        /// Dimensions, one p/q per generator.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        dims: Vec<Rational>,
    },
    /// Whether tP is proper.
    Proper {
        #[arg(required = true, allow_negative_numbers = true)]
        generators: Vec<i64>,
        /// Dimensions, one p/q per generator.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        dims: Vec<Rational>,
        /// Scale t, as p/q.
        #[arg(long, default_value = "1")]
        t: Rational,
    },
    /// Moments of the multiplicity function (needs --delta).
    Moments {
        #[arg(required = true, allow_negative_numbers = true)]
        velocities: Vec<i64>,
    },
    /// Disjointness of prime petals and the union lower bound (needs --n).
    Sunflower,
    /// Exhaustive check that δ >= threshold for n runners up to --bound.
    Verify,
    /// All canonical tuples attaining the threshold (default 1/(n+1)).
    Extremisers,
    /// Certificate that short tuples are not counterexamples (needs --n).
    Certificate,
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Out = Vec<(String, String)>;

fn kv(out: &mut Out, key: &str, value: impl Display) {
    out.push((key.to_string(), value.to_string()));
}

fn list<T: Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| Failure(format!("--{flag} is required for this command")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new();
    match run(&cli, &mut out) {
        Ok(code) => {
            let mut stdout = std::io::stdout().lock();
            for (k, v) in &out {
                let _ = writeln!(stdout, "{k}={v}");
            }
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<u8, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Delta { velocities } => {
            let v = VelocityTuple::new(velocities.clone())?;
            kv(out, "command", "delta");
            kv(out, "velocities", list(velocities));
            let r = compute_delta(&v)?;
            kv(out, "delta", r.delta);
            kv(out, "witness", r.witness);
            kv(out, "candidates", r.candidates_examined);
        }
        Command::Cover { velocities } => {
            let v = VelocityTuple::new(velocities.clone())?;
            let delta = need(&g.delta, "delta")?;
            kv(out, "command", "cover");
            kv(out, "velocities", list(velocities));
            kv(out, "delta", &delta);
            let c = covering_check(&v, &delta)?;
            kv(out, "covered", c.covered);
            kv(out, "uncovered", c.uncovered.map_or("none".to_string(), |p| p.to_string()));
            kv(out, "union_measure", covering_union(&v, &delta)?.measure());
        }
        Command::Bohr { frequencies } => {
            let delta = need(&g.delta, "delta")?;
            let spec = BohrSpec::uniform(frequencies.clone(), &delta)?;
            kv(out, "command", "bohr");
            kv(out, "frequencies", list(frequencies));
            kv(out, "delta", &delta);
            let set = build_bohr(&spec);
            kv(out, "arcs", set.arcs().len());
            kv(out, "set", &set);
            kv(out, "measure", set.measure());
        }
        Command::Mu { generators, dims } => {
            let p = Progression::new(generators.clone(), dims.clone())?;
            kv(out, "command", "mu");
            kv(out, "generators", list(generators));
            kv(out, "dims", list(dims));
            kv(out, "mu", multiplicity(&p));
        }
        Command::Proper { generators, dims, t } => {
            let p = Progression::new(generators.clone(), dims.clone())?;
            kv(out, "command", "proper");
            kv(out, "generators", list(generators));
            kv(out, "dims", list(dims));
            kv(out, "t", t);
            kv(out, "proper", is_t_proper(&p, t)?);
            kv(out, "double_dilate_collision_free", double_dilate_is_collision_free(&p, t)?);
        }
        Command::Moments { velocities } => {
            let v = VelocityTuple::new(velocities.clone())?;
            let delta = need(&g.delta, "delta")?;
            kv(out, "command", "moments");
            kv(out, "velocities", list(velocities));
            kv(out, "delta", &delta);
            let m = moments(&v, &delta)?;
            kv(out, "m1", m.m1);
            kv(out, "m2", m.m2);
            kv(out, "m3", m.m3);
        }
        Command::Sunflower => {
            let n = need(&g.n, "n")? as u64;
            let delta = g.delta.clone().unwrap_or_else(|| Rational::new(1, n as i64 + 1));
            kv(out, "command", "sunflower");
            kv(out, "n", n);
            kv(out, "delta", &delta);
            let r = sunflower_check(n, &delta)?;
            kv(out, "primes", list(&r.primes));
            kv(out, "petals_disjoint", r.petals_disjoint);
            kv(out, "tangent_pairs", r.tangent_pairs);
            kv(out, "union_measure", &r.union_measure);
            kv(out, "sum_of_measures", &r.sum_of_measures);
            kv(out, "lower_bound", &r.lower_bound);
            kv(out, "inequality_holds", r.inequality_holds);
            return Ok(if r.passed() { 0 } else { 1 });
        }
        Command::Verify => return search(g, Mode::Verify, out),
        Command::Extremisers => return search(g, Mode::Extremisers, out),
        Command::Certificate => {
            let n = need(&g.n, "n")?;
            kv(out, "command", "certificate");
            kv(out, "n", n);
            if n < 5 {
                kv(out, "method", "exhaustive");
                kv(out, "tuples_checked", exhaustive_short_check(n)?);
                return Ok(0);
            }
            let c = prop_short_certificate(n as i64)?;
            let valid = validate_certificate(&c).is_ok();
            kv(out, "method", "certificate");
            kv(out, "bound", c.bound);
            kv(out, "constraints", c.constraints.len());
            kv(out, "representatives", list(&c.representatives));
            kv(out, "valid", valid);
            if let Some(path) = &g.out {
                std::fs::write(path, c.to_string()).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            }
            return Ok(if valid { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn search(g: &Global, mode: Mode, out: &mut Out) -> Result<u8, Failure> {
    let n = need(&g.n, "n")?;
    let bound = need(&g.bound, "bound")?;
    let spec = SearchSpec::new(n, bound, g.threshold.clone(), mode)?;
    eprintln!("workers={}", g.workers);
    let progress = |done: usize, total: usize| eprintln!("progress {done}/{total} partitions");
    let opts = RunOptions {
        workers: g.workers as usize,
        checkpoint: g.checkpoint.clone(),
        max_chunks: None,
        progress: Some(&progress),
    };
    let report = run_search(&spec, &opts)?;
    if let Some(path) = &g.out {
        std::fs::write(path, report.results_lines()).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    emit_report(&report, mode, g, out);
    let violated = mode == Mode::Verify && !report.tally.violations.is_empty();
    Ok(if violated { 1 } else { 0 })
}

fn emit_report(r: &VerificationReport, mode: Mode, g: &Global, out: &mut Out) {
    let t = &r.tally;
    kv(out, "command", if mode == Mode::Verify { "verify" } else { "extremisers" });
    kv(out, "n", r.spec.n);
    kv(out, "bound", r.spec.bound);
    kv(out, "threshold", &r.spec.threshold);
    if let Some(p) = &g.checkpoint {
        kv(out, "checkpoint", p.display());
    }
    if let Some(p) = &g.out {
        kv(out, "out", p.display());
    }
    kv(out, "partitions", r.partitions_total);
    kv(out, "complete", r.complete);
    kv(out, "tuples_examined", t.tuples_examined);
    kv(out, "corpus_min", t.corpus_min_delta.as_ref().map_or("none".to_string(), |d| d.to_string()));
    kv(out, "attaining", t.attaining_tuples.len());
    kv(out, "violations", t.violations.len());
    kv(out, "extremisers", t.extremisers.len());
    kv(out, "below_trivial_bound", t.below_trivial_bound.len());
    kv(out, "variant_bound_findings", t.variant_bound_findings.len());
    for f in t.violations.iter().chain(&t.extremisers) {
        let tag = match f.kind {
            FindingKind::Violation => "violation",
            FindingKind::Extremiser => "extremiser",
        };
        kv(out, tag, format!("{} delta={} witness={}", f.tuple, f.delta, f.witness));
    }
}
