use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polarineq::report::{to_json, write_csv, write_jsonl};
use polarineq::suite::{self, FuzzFamily, SharpKind};
use polarineq::sweep::Skipped;
use polarineq::verify::evaluate;
use polarineq::zeros::{SamplingOptions, ZeroPlacement, DEFAULT_MARGIN};
use polarineq::{
    classify, sample_instance, verify_instance, BoundId, OutputFormat, Polynomial, Regime, Status, SweepConfig,
    Tolerance, ZeroPattern,
};

#[derive(Parser)]
#[command(name = "polarineq", version, about = "Verify Bernstein-type inequalities for polar derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one bound on one polynomial.
    Verify(VerifyArgs),
    /// Sample a grid of instances and verify a set of bounds on each.
    Sweep(SweepArgs),
    /// Compare bounds with the extremal value on their equality families.
    Sharpness(SharpnessArgs),
    /// Run the proof-identity, limit-recovery or fuzz probes.
    Probe(ProbeArgs),
    /// Print a seeded random polynomial with a given zero pattern.
    Gen(GenArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Coefficients `[[re, im], ...]` in increasing degree, inline or a file path.
    #[arg(long)]
    poly: String,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    regime: Regime,
    /// Complex number such as `2`, `-3.5`, `1+2i`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Complex64,
    #[arg(long)]
    bound: BoundId,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Expected zero pattern (JSON, inline or a file path). Without it the
    /// pattern is read off the computed zeros.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value = "cli")]
    id: String,
    /// Print the bound breakdown and chain check along with the record.
    #[arg(long)]
    full: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    regime: Regime,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Multiplicity lists separated by `;`, each comma separated; `none` for
    /// no distinguished zeros. Example: `none;1;2,1`.
    #[arg(long, default_value = "none")]
    mults: String,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    mu: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "2")]
    alpha: Vec<Complex64>,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    bounds: Vec<BoundId>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record output file; records go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SharpnessArgs {
    #[arg(long)]
    family: SharpKind,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Largest accepted relative gap.
    #[arg(long, default_value_t = 1e-8)]
    threshold: f64,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(subcommand)]
    kind: Probe,
}

#[derive(Subcommand)]
enum Probe {
    /// Residuals of the conjugate-reciprocal identity and inequality on the unit circle.
    Identity {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Distance between bound(alpha)/|alpha| and the derivative bound as alpha grows.
    Limit {
        #[arg(long)]
        regime: Regime,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', default_value = "1e2,1e4,1e6")]
        alphas: Vec<f64>,
    },
    /// Random instances of one theorem family.
    Fuzz {
        #[arg(long)]
        family: FuzzFamily,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Zero pattern JSON, inline or a file path.
    #[arg(long)]
    pattern: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the pattern's distinguished zeros instead of drawing new ones.
    #[arg(long)]
    keep_zeros: bool,
    /// Print `{"poly": ..., "pattern": ...}` instead of the polynomial alone.
    #[arg(long)]
    with_pattern: bool,
}

/// Reads `arg` as JSON, or as a path to a JSON file when it is not JSON.
fn json_arg<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> anyhow::Result<T> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {what} from {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}

fn tolerance(tol: f64) -> anyhow::Result<Tolerance> {
    if !(tol >= 0.0 && tol.is_finite()) {
        bail!("tolerance must be finite and non-negative, got {tol}");
    }
    Ok(Tolerance { abs: tol, rel: tol })
}

fn exit_for(fail: bool) -> ExitCode {
    if fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<ExitCode> {
    let p: Polynomial = json_arg(&a.poly, "polynomial")?;
    let tol = tolerance(a.tol)?;
    let v = match &a.pattern {
        Some(s) => {
            let pattern: ZeroPattern = json_arg(s, "pattern")?;
            if pattern.k != a.k || pattern.regime != a.regime {
                bail!("--k/--regime disagree with the pattern");
            }
            verify_instance(&a.id, &p, &pattern, a.alpha, a.bound, tol)?
        }
        None => {
            let pattern = classify(&p, a.k, a.regime, DEFAULT_MARGIN)?;
            evaluate(&a.id, &p, &pattern, a.alpha, a.bound, tol)?
        }
    };
    if a.full {
        println!("{}", to_json(&v)?);
    } else {
        println!("{}", to_json(&v.record)?);
    }
    Ok(exit_for(v.record.status == Status::Fail))
}

fn parse_mults(s: &str) -> anyhow::Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|item| {
            let item = item.trim();
            if item.is_empty() || item == "none" {
                return Ok(vec![]);
            }
            item.split(',')
                .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad multiplicity {t:?}")))
                .collect()
        })
        .collect()
}

fn report_skipped(skipped: &[Skipped]) {
    for s in skipped {
        let bound = s.bound_id.map(|b| b.as_str()).unwrap_or("-");
        eprintln!("skipped {} {bound}: {}", s.id, s.reason);
    }
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<ExitCode> {
    let format = match a.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    let config = SweepConfig {
        regime: a.regime,
        n: a.n,
        mults: parse_mults(&a.mults)?,
        mu: a.mu,
        k: a.k,
        alpha: a.alpha,
        instances_per_cell: a.instances,
        base_seed: a.seed,
        bound_ids: a.bounds,
        tol: tolerance(a.tol)?,
        output_path: a.out,
        format,
    };
    let out = config.run()?;
    let records = out.records();
    let write = |w: &mut dyn Write| -> anyhow::Result<()> {
        match config.format {
            OutputFormat::Json => write_jsonl(&mut *w, &records)?,
            OutputFormat::Csv => write_csv(&mut *w, &records)?,
        }
        Ok(w.flush()?)
    };
    report_skipped(&out.skipped);
    let summary = to_json(&out.summary)?;
    match &config.output_path {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write(&mut BufWriter::new(file))?;
            println!("{summary}");
        }
        None => {
            write(&mut BufWriter::new(io::stdout().lock()))?;
            eprintln!("{summary}");
        }
    }
    Ok(exit_for(out.summary.fail > 0))
}

fn cmd_sharpness(a: SharpnessArgs) -> anyhow::Result<ExitCode> {
    let reports = suite::sharpness_suite(a.family, a.n_max)?;
    let mut max_gap = 0.0f64;
    let mut over = 0usize;
    let mut stdout = BufWriter::new(io::stdout().lock());
    for r in &reports {
        writeln!(stdout, "{}", to_json(r)?)?;
        max_gap = max_gap.max(r.gap);
        if !(r.gap <= a.threshold) {
            over += 1;
        }
    }
    let summary = serde_json::json!({ "count": reports.len(), "max_gap": max_gap, "over_threshold": over });
    writeln!(stdout, "{}", to_json(&summary)?)?;
    stdout.flush()?;
    Ok(exit_for(over > 0))
}

fn cmd_probe(a: ProbeArgs) -> anyhow::Result<ExitCode> {
    let mut stdout = BufWriter::new(io::stdout().lock());
    let bad = match a.kind {
        Probe::Identity { count, max_degree, samples, seed } => {
            let probes = suite::identity_suite(count, seed, max_degree, samples)?;
            let mut bad = 0;
            for p in &probes {
                writeln!(stdout, "{}", to_json(p)?)?;
                if p.identity > 1e-10 * p.scale || p.inequality > 1e-9 * p.scale {
                    bad += 1;
                }
            }
            writeln!(stdout, "{}", to_json(&serde_json::json!({ "count": probes.len(), "bad": bad }))?)?;
            bad
        }
        Probe::Limit { regime, count, seed, alphas } => {
            let results = suite::limit_suite(regime, count, seed, &alphas)?;
            let mut bad = 0;
            for r in &results {
                writeln!(stdout, "{}", to_json(r)?)?;
                if !r.strictly_decreasing() {
                    bad += 1;
                }
            }
            writeln!(stdout, "{}", to_json(&serde_json::json!({ "count": results.len(), "bad": bad }))?)?;
            bad
        }
        Probe::Fuzz { family, count, seed, tol } => {
            let out = suite::fuzz_suite(family, count, seed, tolerance(tol)?);
            report_skipped(&out.skipped);
            writeln!(stdout, "{}", to_json(&out.summary)?)?;
            out.summary.fail
        }
    };
    stdout.flush()?;
    Ok(exit_for(bad > 0))
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<ExitCode> {
    let pattern: ZeroPattern = json_arg(&a.pattern, "pattern")?;
    let placement = if a.keep_zeros { ZeroPlacement::Keep } else { ZeroPlacement::Resample };
    let inst = sample_instance(&pattern, a.seed, SamplingOptions { placement, ..SamplingOptions::default() })?;
    if a.with_pattern {
        println!("{}", to_json(&inst)?);
    } else {
        println!("{}", to_json(&inst.polynomial)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Sharpness(a) => cmd_sharpness(a),
        Command::Probe(a) => cmd_probe(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
