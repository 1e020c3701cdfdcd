//! Command-line front end: generate sequences as CSV, compute statistics
//! with reference-law overlays, and run the self-check suites.
//!
//! Exit codes: 0 on success, 1 when a verification or tolerance check
//! fails, 2 on usage or environment errors. Set `RAYON_NUM_THREADS` to
//! bound internal parallelism.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use modone::constants::{parse_mat2, parse_pair, parse_real};
use modone::io::{
    read_sequence, write_histogram, write_json, write_sequence, write_sequence_to, write_table,
    RunConfig, TableStyle,
};
use modone::lattice_space::Mat2;
use modone::reference_laws::{neighbor_spacing_cdf, poisson_pmf};
use modone::sequences::{
    gen_arithmetic, gen_directions, gen_iud, gen_sqrt, AffineLatticeSpec, ArithmeticKind,
    GeneratorDescriptor, TorusSequence,
};
use modone::statistics::{
    counting_distribution_exact, empirical_counting_distribution, k_neighbor_distribution, moments,
    moments_exact, pair_correlation_histogram, scaled_neighbor_gaps, HistogramReport, IntervalSet,
    Normalization,
};
use modone::verify::{run_suite, SuiteReport, SUITE_NAMES};
use modone::{Error, Result};

#[derive(Parser)]
#[command(
    name = "modone",
    version,
    about = "Fine-scale statistics of sequences modulo one",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sequence and write it as a table file
    Generate(GenerateArgs),
    /// Compute a statistic of a sequence, with reference-law overlay
    Stats(StatsArgs),
    /// Run named self-check suites
    Verify(VerifyArgs),
}

/// Flags describing a sequence generator. `--kind` selects the family and
/// the other flags fill in its parameters.
#[derive(Args, Clone)]
struct GeneratorFlags {
    /// sqrt | iud | directions | linear | quadratic | power | doubling | geometric
    #[arg(long)]
    kind: Option<String>,

    /// Largest n for sqrt sequences (perfect squares are dropped)
    #[arg(long)]
    tmax: Option<u64>,

    /// Point count (iud) or largest n (arithmetic kinds)
    #[arg(long)]
    n: Option<u64>,

    /// RNG seed for iud [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Direction radius T; symbolic expressions allowed
    #[arg(long = "T", value_name = "RADIUS")]
    t_radius: Option<String>,

    /// Lattice shift, two comma-separated symbolic expressions
    /// (e.g. cbrt(4),cbrt(2))
    #[arg(long)]
    xi: Option<String>,

    /// Row-major lattice basis a,b,c,d with determinant 1 [default: identity]
    #[arg(long)]
    m0: Option<String>,

    /// Alpha parameter for arithmetic kinds; symbolic expressions allowed
    #[arg(long)]
    alpha: Option<String>,

    /// Log-power beta for the power kind [default: 0]
    #[arg(long)]
    beta: Option<String>,
}

impl GeneratorFlags {
    fn require(&self, field: &str, kind: &str) -> Error {
        Error::InvalidParameter(format!("--kind {kind} requires --{field}"))
    }

    /// Turn the flags into a generator descriptor (which is what actually
    /// runs, and what gets written into output headers).
    fn descriptor(&self) -> Result<GeneratorDescriptor> {
        let kind = self
            .kind
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--kind is required".into()))?;
        match kind {
            "sqrt" => Ok(GeneratorDescriptor::Sqrt {
                t_max: self.tmax.ok_or_else(|| self.require("tmax", kind))?,
            }),
            "iud" => Ok(GeneratorDescriptor::Iud {
                n_count: self.n.ok_or_else(|| self.require("n", kind))?,
                seed: self.seed.unwrap_or(0),
            }),
            "directions" => {
                let xi = parse_pair(
                    self.xi
                        .as_deref()
                        .ok_or_else(|| self.require("xi", kind))?,
                )?;
                let t_radius = parse_real(
                    self.t_radius
                        .as_deref()
                        .ok_or_else(|| self.require("T", kind))?,
                )?;
                let m0 = match &self.m0 {
                    Some(text) => parse_mat2(text)?,
                    None => Mat2::IDENTITY,
                };
                // validates the determinant
                let spec = AffineLatticeSpec::new(m0, xi)?;
                Ok(GeneratorDescriptor::Directions {
                    m0: spec.m0,
                    xi: spec.xi,
                    t_radius,
                })
            }
            "linear" | "quadratic" | "power" | "doubling" | "geometric" => {
                let family: ArithmeticKind = kind.parse()?;
                let alpha = parse_real(
                    self.alpha
                        .as_deref()
                        .ok_or_else(|| self.require("alpha", kind))?,
                )?;
                let beta = match &self.beta {
                    Some(text) => parse_real(text)?,
                    None => 0.0,
                };
                Ok(GeneratorDescriptor::Arithmetic {
                    family,
                    alpha,
                    beta,
                    n_max: self.n.ok_or_else(|| self.require("n", kind))?,
                })
            }
            other => Err(Error::InvalidParameter(format!(
                "unknown kind {other:?}; expected sqrt, iud, directions, linear, quadratic, power, doubling or geometric"
            ))),
        }
    }
}

fn build(meta: &GeneratorDescriptor) -> Result<TorusSequence> {
    match meta {
        GeneratorDescriptor::Sqrt { t_max } => gen_sqrt(*t_max),
        GeneratorDescriptor::Iud { n_count, seed } => gen_iud(*n_count, *seed),
        GeneratorDescriptor::Directions { m0, xi, t_radius } => {
            gen_directions(&AffineLatticeSpec::new(*m0, *xi)?, *t_radius)
        }
        GeneratorDescriptor::Arithmetic {
            family,
            alpha,
            beta,
            n_max,
        } => gen_arithmetic(*family, *alpha, *beta, *n_max),
        GeneratorDescriptor::External { label } => Err(Error::InvalidParameter(format!(
            "descriptor {label:?} describes loaded points and cannot be regenerated"
        ))),
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    generator: GeneratorFlags,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv | gnuplot
    #[arg(long, default_value = "csv")]
    style: String,
}

#[derive(Args)]
struct StatsArgs {
    /// gaps | neighbors | paircorr | counts | moments
    #[arg(value_name = "STATISTIC")]
    statistic: String,

    /// Read the sequence from a table file instead of generating it
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,

    #[command(flatten)]
    generator: GeneratorFlags,

    /// Counting window lo,hi — repeat the flag for several windows
    /// (symbolic expressions allowed)
    #[arg(long)]
    interval: Vec<String>,

    /// Moment exponent — repeat to match the number of windows
    #[arg(long)]
    power: Vec<String>,

    /// Histogram bin count [defaults: 100 for gaps, 16 for paircorr]
    #[arg(long)]
    bins: Option<usize>,

    /// Quadrature x-grid size for counts/moments (exact sweep when omitted)
    #[arg(long)]
    grid: Option<usize>,

    /// Neighbor order for the neighbors statistic [default: 2]
    #[arg(long)]
    k: Option<usize>,

    /// Fail (exit 1) when the deviation from the reference law exceeds this
    #[arg(long)]
    tolerance: Option<f64>,

    /// Output CSV path; the JSON summary goes to stdout and, with --out,
    /// to the same path with a .json extension
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv | gnuplot
    #[arg(long, default_value = "csv")]
    style: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name — repeat for several; "all" (the default) runs everything
    #[arg(long)]
    suite: Vec<String>,

    /// Write the full per-check report as JSON
    #[arg(long)]
    out: Option<PathBuf>,

    /// List available suite names and exit
    #[arg(long)]
    list: bool,
}

fn parse_style(text: &str) -> Result<TableStyle> {
    match text {
        "csv" => Ok(TableStyle::Csv),
        "gnuplot" => Ok(TableStyle::Gnuplot),
        other => Err(Error::InvalidParameter(format!(
            "unknown style {other:?}; expected csv or gnuplot"
        ))),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<i32> {
    let style = parse_style(&args.style)?;
    let meta = args.generator.descriptor()?;
    let seq = build(&meta)?;
    match &args.out {
        Some(path) => {
            write_sequence(path, &seq, style)?;
            eprintln!("wrote {} points to {}", seq.n_count(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = std::io::BufWriter::new(stdout.lock());
            write_sequence_to(&mut lock, &seq, style)?;
        }
    }
    Ok(0)
}

/// What a statistic measured against its reference law.
struct Deviation {
    reference: &'static str,
    value: f64,
}

fn cmd_stats(args: StatsArgs) -> Result<i32> {
    let style = parse_style(&args.style)?;

    let (seq, generator, input) = match &args.input {
        Some(path) => {
            let seq = read_sequence(path)?;
            let meta = seq.meta().clone();
            (seq, Some(meta), Some(path.display().to_string()))
        }
        None => {
            let meta = args.generator.descriptor().map_err(|e| {
                Error::InvalidParameter(format!("need --input or generator flags: {e}"))
            })?;
            (build(&meta)?, Some(meta), None)
        }
    };

    let intervals: Vec<(f64, f64)> = args
        .interval
        .iter()
        .map(|text| {
            let p = parse_pair(text)?;
            Ok((p[0], p[1]))
        })
        .collect::<Result<_>>()?;
    let powers: Vec<f64> = args
        .power
        .iter()
        .map(|text| parse_real(text))
        .collect::<Result<_>>()?;

    let mut config = RunConfig::new("stats");
    config.statistic = Some(args.statistic.clone());
    config.generator = generator;
    config.input = input;
    config.intervals = if intervals.is_empty() {
        None
    } else {
        Some(intervals.clone())
    };
    config.powers = if powers.is_empty() {
        None
    } else {
        Some(powers.clone())
    };
    config.bins = args.bins;
    config.x_grid = args.grid;
    config.neighbor_order = args.k;
    config.tolerance = args.tolerance;
    config.out = args.out.as_ref().map(|p| p.display().to_string());
    config.style = Some(style);

    let mut extra = serde_json::Map::new();
    let deviation = match args.statistic.as_str() {
        "gaps" | "neighbors" => {
            reject_grid(&args, "gaps/neighbors")?;
            reject_powers(&powers, "gaps/neighbors")?;
            let k = if args.statistic == "gaps" {
                args.k.unwrap_or(1)
            } else {
                args.k.unwrap_or(2)
            };
            config.neighbor_order = Some(k);
            stat_gaps(
                &seq,
                k,
                &intervals,
                args.bins,
                style,
                args.out.as_deref(),
                &config,
                &mut extra,
            )?
        }
        "paircorr" => {
            reject_grid(&args, "paircorr")?;
            reject_powers(&powers, "paircorr")?;
            stat_paircorr(
                &seq,
                &intervals,
                args.bins,
                style,
                args.out.as_deref(),
                &config,
                &mut extra,
            )?
        }
        "counts" => {
            reject_powers(&powers, "counts")?;
            stat_counts(
                &seq,
                &intervals,
                args.grid,
                style,
                args.out.as_deref(),
                &config,
                &mut extra,
            )?
        }
        "moments" => stat_moments(
            &seq,
            &intervals,
            &powers,
            args.grid,
            style,
            args.out.as_deref(),
            &config,
            &mut extra,
        )?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown statistic {other:?}; expected gaps, neighbors, paircorr, counts or moments"
            )));
        }
    };

    let mut summary = serde_json::Map::new();
    summary.insert("config".into(), serde_json::to_value(&config).unwrap());
    summary.insert("n_points".into(), seq.n_count().into());
    for (k, v) in extra {
        summary.insert(k, v);
    }
    let mut code = 0;
    if let Some(dev) = &deviation {
        summary.insert("reference".into(), dev.reference.into());
        summary.insert("deviation".into(), dev.value.into());
        if let Some(tol) = args.tolerance {
            let ok = dev.value <= tol;
            summary.insert("within_tolerance".into(), ok.into());
            if !ok {
                code = 1;
            }
        }
    } else if args.tolerance.is_some() {
        return Err(Error::InvalidParameter(
            "--tolerance needs a statistic with a reference law (gaps, neighbors, paircorr, counts)".into(),
        ));
    }
    let summary = serde_json::Value::Object(summary);
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    if let Some(out) = &args.out {
        write_json(out.with_extension("json"), &summary)?;
    }
    Ok(code)
}

fn reject_grid(args: &StatsArgs, what: &str) -> Result<()> {
    if args.grid.is_some() {
        return Err(Error::InvalidParameter(format!(
            "--grid applies to counts and moments, not {what}"
        )));
    }
    Ok(())
}

fn reject_powers(powers: &[f64], what: &str) -> Result<()> {
    if !powers.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "--power applies to moments, not {what}"
        )));
    }
    Ok(())
}

/// The single window a range-style statistic uses, or its default.
fn single_window(intervals: &[(f64, f64)], default: (f64, f64), what: &str) -> Result<(f64, f64)> {
    match intervals {
        [] => Ok(default),
        [one] => Ok(*one),
        more => Err(Error::InvalidParameter(format!(
            "{what} takes at most one --interval, got {}",
            more.len()
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn stat_gaps(
    seq: &TorusSequence,
    k: usize,
    intervals: &[(f64, f64)],
    bins: Option<usize>,
    style: TableStyle,
    out: Option<&Path>,
    config: &RunConfig,
    extra: &mut serde_json::Map<String, serde_json::Value>,
) -> Result<Option<Deviation>> {
    let (lo, hi) = single_window(intervals, (0.0, 5.0), "gaps")?;
    if !(lo < hi) || lo < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gap range needs 0 <= lo < hi, got ({lo}, {hi})"
        )));
    }
    let bins = bins.unwrap_or(100);
    if bins == 0 {
        return Err(Error::InvalidParameter("--bins must be at least 1".into()));
    }
    let edges: Vec<f64> = (0..=bins)
        .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
        .collect();
    let gaps = scaled_neighbor_gaps(seq, k)?;
    let pdf = HistogramReport::from_samples(&gaps, lo, hi, bins, Normalization::Density)?;
    let cdf = k_neighbor_distribution(seq, k, &edges)?;

    let mut sup = 0.0f64;
    for (edge, value) in edges.iter().zip(&cdf.masses) {
        sup = sup.max((value - neighbor_spacing_cdf(k, *edge)?).abs());
    }

    if let Some(path) = out {
        match style {
            TableStyle::Csv => {
                let mut rows = Vec::with_capacity(bins);
                for i in 0..bins {
                    let (a, b) = (edges[i], edges[i + 1]);
                    let ref_lo = neighbor_spacing_cdf(k, a)?;
                    let ref_hi = neighbor_spacing_cdf(k, b)?;
                    rows.push(vec![
                        a,
                        b,
                        pdf.masses[i],
                        (ref_hi - ref_lo) / (b - a),
                        cdf.masses[i + 1],
                        ref_hi,
                    ]);
                }
                write_table(
                    path,
                    config,
                    &["lo", "hi", "pdf", "pdf_ref", "cdf", "cdf_ref"],
                    &rows,
                    style,
                )?;
            }
            TableStyle::Gnuplot => write_histogram(path, config, &pdf, style)?,
        }
    }
    extra.insert("gap_count".into(), gaps.len().into());
    Ok(Some(Deviation {
        reference: "k-th neighbor spacing law of a Poisson process",
        value: sup,
    }))
}

fn stat_paircorr(
    seq: &TorusSequence,
    intervals: &[(f64, f64)],
    bins: Option<usize>,
    style: TableStyle,
    out: Option<&Path>,
    config: &RunConfig,
    extra: &mut serde_json::Map<String, serde_json::Value>,
) -> Result<Option<Deviation>> {
    let (lo, hi) = single_window(intervals, (0.0, 4.0), "paircorr")?;
    let bins = bins.unwrap_or(16);
    let hist = pair_correlation_histogram(seq, lo, hi, bins)?;
    let hist = hist.with_overlay(vec![1.0; bins])?;
    let worst = hist.sup_distance_to_overlay().unwrap_or(0.0);
    if let Some(path) = out {
        write_histogram(path, config, &hist, style)?;
    }
    extra.insert(
        "bin_densities".into(),
        serde_json::to_value(&hist.masses).unwrap(),
    );
    Ok(Some(Deviation {
        reference: "flat pair-correlation density 1",
        value: worst,
    }))
}

fn boxes_from(intervals: &[(f64, f64)]) -> Result<Vec<IntervalSet>> {
    let list = if intervals.is_empty() {
        &[(0.0, 1.0)][..]
    } else {
        intervals
    };
    list.iter()
        .map(|&(lo, hi)| IntervalSet::interval(lo, hi))
        .collect()
}

fn stat_counts(
    seq: &TorusSequence,
    intervals: &[(f64, f64)],
    grid: Option<usize>,
    style: TableStyle,
    out: Option<&Path>,
    config: &RunConfig,
    extra: &mut serde_json::Map<String, serde_json::Value>,
) -> Result<Option<Deviation>> {
    let boxes = boxes_from(intervals)?;
    let dist = match grid {
        Some(g) => empirical_counting_distribution(seq, &boxes, g)?,
        None => counting_distribution_exact(seq, &boxes)?,
    };

    // reference: independent Poisson with intensity = window measure
    let mut tv = 0.0;
    let mut covered = 0.0;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dist.len());
    for (counts, mass) in &dist {
        let mut q = 1.0;
        for (r, iv) in counts.iter().zip(&boxes) {
            q *= poisson_pmf(*r, iv.measure())?;
        }
        tv += (mass - q).abs();
        covered += q;
        let mut row: Vec<f64> = counts.iter().map(|&r| r as f64).collect();
        row.push(*mass);
        row.push(q);
        rows.push(row);
    }
    let tv = 0.5 * (tv + (1.0 - covered).max(0.0));

    if let Some(path) = out {
        match style {
            TableStyle::Csv => {
                let mut columns: Vec<String> = (1..=boxes.len()).map(|i| format!("r{i}")).collect();
                columns.push("probability".into());
                columns.push("poisson".into());
                let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
                write_table(path, config, &cols, &rows, style)?;
            }
            TableStyle::Gnuplot => {
                // two columns: the first count coordinate and its mass
                let pairs: Vec<Vec<f64>> =
                    rows.iter().map(|r| vec![r[0], r[boxes.len()]]).collect();
                write_table(path, config, &["r", "probability"], &pairs, style)?;
            }
        }
    }
    extra.insert("distinct_count_vectors".into(), dist.len().into());
    Ok(Some(Deviation {
        reference: "independent Poisson counts with intensity |I|",
        value: tv,
    }))
}

#[allow(clippy::too_many_arguments)]
fn stat_moments(
    seq: &TorusSequence,
    intervals: &[(f64, f64)],
    powers: &[f64],
    grid: Option<usize>,
    style: TableStyle,
    out: Option<&Path>,
    config: &RunConfig,
    extra: &mut serde_json::Map<String, serde_json::Value>,
) -> Result<Option<Deviation>> {
    let boxes = boxes_from(intervals)?;
    let compute = |s: &[f64]| -> Result<f64> {
        match grid {
            Some(g) => moments(seq, &boxes, s, g),
            None => moments_exact(seq, &boxes, s),
        }
    };

    // one window: a row per exponent; several windows: one joint moment
    let mut rows: Vec<Vec<f64>> = Vec::new();
    if boxes.len() == 1 {
        let list: Vec<f64> = if powers.is_empty() {
            vec![1.0, 2.0]
        } else {
            powers.to_vec()
        };
        for &s in &list {
            rows.push(vec![s, compute(&[s])?]);
        }
    } else {
        let list: Vec<f64> = if powers.is_empty() {
            vec![1.0; boxes.len()]
        } else if powers.len() == boxes.len() {
            powers.to_vec()
        } else {
            return Err(Error::InvalidParameter(format!(
                "{} --power values for {} --interval windows",
                powers.len(),
                boxes.len()
            )));
        };
        let mut row = list.clone();
        row.push(compute(&list)?);
        rows.push(row);
    }

    if let Some(path) = out {
        let mut columns: Vec<String> = if boxes.len() == 1 {
            vec!["s".into()]
        } else {
            (1..=boxes.len()).map(|i| format!("s{i}")).collect()
        };
        columns.push("moment".into());
        let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
        write_table(path, config, &cols, &rows, style)?;
    }
    extra.insert("moments".into(), serde_json::to_value(&rows).unwrap());
    Ok(None)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    if args.list {
        for name in SUITE_NAMES {
            println!("{name}");
        }
        return Ok(0);
    }
    let names: Vec<&str> = if args.suite.is_empty() || args.suite.iter().any(|s| s == "all") {
        SUITE_NAMES.to_vec()
    } else {
        args.suite.iter().map(String::as_str).collect()
    };
    let mut reports: Vec<SuiteReport> = Vec::with_capacity(names.len());
    let mut all_ok = true;
    for name in names {
        let report = run_suite(name)?;
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!("[{verdict}] {} ({:.2} s)", report.suite, report.seconds);
        for c in &report.checks {
            let mark = if c.passed { "ok    " } else { "FAILED" };
            println!("    {mark} {}: {}", c.name, c.details);
        }
        all_ok &= report.passed();
        reports.push(report);
    }
    if let Some(out) = &args.out {
        let mut config = RunConfig::new("verify");
        config.suites = Some(reports.iter().map(|r| r.suite.clone()).collect());
        config.out = Some(out.display().to_string());
        let summary = serde_json::json!({
            "config": config,
            "passed": all_ok,
            "suites": reports,
        });
        write_json(out, &summary)?;
    }
    Ok(if all_ok { 0 } else { 1 })
}
