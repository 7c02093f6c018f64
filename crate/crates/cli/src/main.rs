use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unimodal::asymptotics::{alpha, asymptotic_count, romik_h, saddle_check, write_diagnostics_csv, Argument, DiagnosticRow};
use unimodal::bijection::{dm_to_overpartition, overpartition_to_dm, verify_exhaustive, BijectionCase};
use unimodal::counting::{count_family, family_series, peak_bounded_count, peak_bounded_series};
use unimodal::curves::{write_curve_csv, CurveFamily, LimitCurve};
use unimodal::enumerate::{enumerate_family, enumerate_overpartitions};
use unimodal::experiments::{self, ExperimentConfig, ExperimentReport, Statistic};
use unimodal::sampling::{write_jsonl, Mode, Sampled, Sampler, SamplerConfig, DEFAULT_EXACT_THRESHOLD};
use unimodal::svg::{overpartition_svg, sequence_svg};
use unimodal::{Error, Execution, Family, Overpartition, UnimodalSequence, VERSION};

#[derive(Parser)]
#[command(name = "unimodal", version, about = "Counts, samples and limit shapes of unimodal sequences and overpartitions")]
struct Cli {
    /// Run batches on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count of a family at size n.
    Count(CountArgs),
    /// List every member of a family at size n.
    Enumerate(EnumerateArgs),
    /// Uniform random members.
    Sample(SampleArgs),
    /// Monte Carlo containment in the ε-neighbourhood of the limit curve.
    VerifyShape(ShapeArgs),
    /// Monte Carlo summary of a normalized statistic.
    Stats(StatsArgs),
    /// Tabulate a limit curve.
    Curve(CurveArgs),
    /// Saddle-point and growth diagnostics.
    Saddle(SaddleArgs),
    /// The semi-strict ↔ overpartition correspondence.
    Bijection(BijectionArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(value_name = "FAMILY")]
    family_pos: Option<Family>,
    #[arg(value_name = "N")]
    n_pos: Option<usize>,
    /// s, d, dm or pbar.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// Only count members whose peak is at most this value.
    #[arg(long)]
    max_peak: Option<usize>,
    /// Emit every size from 0 to n as CSV.
    #[arg(long)]
    series: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct EnumerateArgs {
    /// s, d, dm or pbar.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// `json` for one record per line; plain text otherwise.
    #[arg(long)]
    format: Option<Format>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// s, d, dm or pbar.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_EXACT_THRESHOLD)]
    exact_threshold: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// s, d, dm or pbar.
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = experiments::DEFAULT_N)]
    n: usize,
    #[arg(long, default_value_t = experiments::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "exact")]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

impl ExperimentArgs {
    fn config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.family, self.n, self.seed);
        c.samples = self.samples;
        c.mode = self.mode;
        c
    }
}

#[derive(Args)]
struct ShapeArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    #[arg(long, default_value_t = experiments::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Exit with status 5 when the containment fraction is below this.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    #[arg(long)]
    statistic: Statistic,
}

#[derive(Args)]
struct CurveArgs {
    /// f_d, f_s, f_dm, f_p or f_pbar.
    curve: CurveFamily,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Where unbounded branches are cut off.
    #[arg(long, default_value_t = 5.0)]
    x_max: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SaddleArgs {
    /// s, d, dm or pbar.
    #[arg(long)]
    family: Family,
    /// Sizes to evaluate.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [100usize, 1000, 10000])]
    n: Vec<usize>,
    /// Also evaluate α(t) and H(t) at these points.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    t: Vec<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct BijectionArgs {
    #[command(subcommand)]
    op: BijectionOp,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    A,
    B,
}

#[derive(Subcommand)]
enum BijectionOp {
    /// Semi-strict sequence to overpartition, e.g. `map 1,2,1 --case a`.
    Map {
        sequence: UnimodalSequence,
        #[arg(long, value_enum)]
        case: CaseArg,
    },
    /// Overpartition to semi-strict sequence, e.g. `invert "2',1,1'"`.
    Invert { overpartition: Overpartition },
    /// Check the correspondence on every object of size n (n ≤ 12).
    VerifyExhaustive { n: usize },
}

enum CliError {
    Usage(String),
    Lib(Error),
    Io(io::Error),
    Threshold(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) if e.is_resource() || matches!(e, Error::Nonconvergence { .. }) => 4,
            CliError::Lib(_) => 3,
            CliError::Io(_) => 4,
            CliError::Threshold(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Threshold(m) => f.write_str(m),
            CliError::Lib(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Where a command writes, and the header that goes with a file.
struct Sink {
    path: Option<PathBuf>,
    args: Vec<String>,
}

impl Sink {
    fn new(out: &OutArgs) -> Self {
        Self {
            path: out.out.clone(),
            args: std::env::args().collect(),
        }
    }

    fn header(&self) -> String {
        format!("unimodal {VERSION} args: {}", self.args.join(" "))
    }

    fn open_path(path: &Path) -> CliResult<Box<dyn Write>> {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }

    /// A writer; files start with `# <header>`.
    fn text(&self) -> CliResult<Box<dyn Write>> {
        match &self.path {
            Some(p) => {
                let mut w = Self::open_path(p)?;
                writeln!(w, "# {}", self.header())?;
                Ok(w)
            }
            None => Ok(Box::new(io::stdout().lock())),
        }
    }

    /// A writer for JSON lines; files start with a header record.
    fn json(&self) -> CliResult<Box<dyn Write>> {
        match &self.path {
            Some(p) => {
                let mut w = Self::open_path(p)?;
                let header = serde_json::json!({ "tool": "unimodal", "version": VERSION, "args": self.args });
                writeln!(w, "{header}")?;
                Ok(w)
            }
            None => Ok(Box::new(io::stdout().lock())),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

fn count(a: CountArgs) -> CliResult {
    let family = a
        .family_pos
        .or(a.family)
        .ok_or_else(|| CliError::Usage("count needs a family".into()))?;
    let n = a.n_pos.or(a.n).ok_or_else(|| CliError::Usage("count needs n".into()))?;
    let sink = Sink::new(&a.out);
    let mut w = sink.text()?;
    if a.series {
        let exec = Execution::Parallel;
        let s = match a.max_peak {
            Some(k) => peak_bounded_series(family, n, k, exec)?,
            None => family_series(family, n, exec)?,
        };
        s.write_csv(&mut w)?;
    } else {
        let v = match a.max_peak {
            Some(k) => peak_bounded_count(family, n, k)?,
            None => count_family(family, n)?,
        };
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

fn enumerate(a: EnumerateArgs) -> CliResult {
    let sink = Sink::new(&a.out);
    let json = a.format == Some(Format::Json);
    let items: Vec<Sampled> = match a.family {
        Family::Overpartition => enumerate_overpartitions(a.n)?.into_iter().map(Sampled::Overpartition).collect(),
        f => enumerate_family(f, a.n)?.into_iter().map(Sampled::Sequence).collect(),
    };
    let mut w = if json { sink.json()? } else { sink.text()? };
    for item in &items {
        if json {
            writeln!(w, "{}", to_json(item))?;
        } else {
            writeln!(w, "{item}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn svg_path(base: &Path, index: usize, total: usize) -> PathBuf {
    if total == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("sample");
    base.with_file_name(format!("{stem}-{index}.svg"))
}

fn sample(a: SampleArgs, exec: Execution) -> CliResult {
    let mut cfg = SamplerConfig::new(a.family, a.n, a.seed).with_mode(a.mode);
    cfg.exact_threshold = a.exact_threshold;
    let sampler = Sampler::new(cfg)?;
    let samples = sampler.batch(a.samples, exec);
    let sink = Sink::new(&a.out);
    match a.format {
        Format::Json => {
            let mut header = sampler.header(samples.len());
            header.args = sink.args.clone();
            let mut w: Box<dyn Write> = match &sink.path {
                Some(p) => Sink::open_path(p)?,
                None => Box::new(io::stdout().lock()),
            };
            write_jsonl(&header, &samples, &mut w)?;
            w.flush()?;
        }
        Format::Svg => {
            let comment = sink.header();
            for (i, s) in samples.iter().enumerate() {
                let svg = match s {
                    Sampled::Sequence(q) => sequence_svg(q, Some(&comment)),
                    Sampled::Overpartition(o) => overpartition_svg(o, Some(&comment)),
                };
                match &sink.path {
                    Some(p) => std::fs::write(svg_path(p, i, samples.len()), svg)?,
                    None => print!("{svg}"),
                }
            }
        }
        Format::Csv => return Err(CliError::Usage("samples are written as json or svg".into())),
    }
    Ok(())
}

fn write_report(report: &ExperimentReport, format: Format, sink: &Sink) -> CliResult {
    match format {
        Format::Csv => {
            let mut w = sink.text()?;
            report.write_csv(&mut w)?;
            w.flush()?;
        }
        Format::Json => {
            let mut w = sink.json()?;
            writeln!(w, "{}", to_json(report))?;
            w.flush()?;
        }
        Format::Svg => return Err(CliError::Usage("reports are written as csv or json".into())),
    }
    Ok(())
}

fn verify_shape(a: ShapeArgs, exec: Execution) -> CliResult {
    let mut cfg = a.common.config();
    cfg.epsilon = a.epsilon;
    let report = experiments::verify_shape(cfg, exec)?;
    write_report(&report, a.common.format, &Sink::new(&a.common.out))?;
    let fraction = report.containment_fraction.unwrap_or(0.0);
    match a.threshold {
        Some(t) if fraction < t => Err(CliError::Threshold(format!(
            "containment fraction {fraction} is below the threshold {t}"
        ))),
        _ => Ok(()),
    }
}

fn stats(a: StatsArgs, exec: Execution) -> CliResult {
    let report = experiments::stats(a.common.config(), a.statistic, exec)?;
    write_report(&report, a.common.format, &Sink::new(&a.common.out))
}

fn curve(a: CurveArgs) -> CliResult {
    let points = LimitCurve::new(a.curve).tabulate(a.step, a.x_max)?;
    let mut w = Sink::new(&a.out).text()?;
    write_curve_csv(&points, &mut w)?;
    w.flush()?;
    Ok(())
}

fn saddle(a: SaddleArgs) -> CliResult {
    let mut rows: Vec<DiagnosticRow> = Vec::new();
    let fam = a.family.short_name().to_string();
    for &n in &a.n {
        let exact = if n <= DEFAULT_EXACT_THRESHOLD {
            Some(count_family(a.family, n)?)
        } else {
            None
        };
        let report = saddle_check(a.family, n as u64, exact.as_ref())?;
        if report.bound_holds == Some(false) {
            return Err(CliError::Threshold(format!("coefficient bound fails at n = {n}")));
        }
        rows.extend(report.rows());
        if let (Some(e), Ok(est)) = (&exact, asymptotic_count(a.family, n as u64)) {
            let quantity = if est.with_prefactor { "count_over_asymptotic" } else { "log_count_over_leading" };
            rows.push(DiagnosticRow {
                family: fam.clone(),
                argument: Argument::N(n as u64),
                quantity: quantity.into(),
                value: est.compare(e),
                reference: 1.0,
            });
        }
    }
    for &t in &a.t {
        let limit_a = std::f64::consts::PI / 6f64.sqrt();
        rows.push(DiagnosticRow {
            family: "romik".into(),
            argument: Argument::T(t),
            quantity: "alpha".into(),
            value: alpha(t)?,
            reference: limit_a,
        });
        rows.push(DiagnosticRow {
            family: "romik".into(),
            argument: Argument::T(t),
            quantity: "H".into(),
            value: romik_h(t)?,
            reference: 2.0 * limit_a,
        });
    }
    let mut w = Sink::new(&a.out).text()?;
    write_diagnostics_csv(&rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn bijection(a: BijectionArgs) -> CliResult {
    match a.op {
        BijectionOp::Map { sequence, case } => {
            let case = match case {
                CaseArg::A => BijectionCase::A,
                CaseArg::B => BijectionCase::B,
            };
            let op = dm_to_overpartition(&sequence, case)?;
            println!("{op}");
        }
        BijectionOp::Invert { overpartition } => {
            let (seq, case) = overpartition_to_dm(&overpartition);
            println!("{seq} case {case:?}");
        }
        BijectionOp::VerifyExhaustive { n } => {
            let r = verify_exhaustive(n)?;
            if r.is_ok() {
                println!("OK: p̄({n}) matched, round-trip clean");
            } else {
                return Err(CliError::Threshold(format!("bijection check failed: {}", to_json(&r))));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Count(a) => count(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Sample(a) => sample(a, exec),
        Command::VerifyShape(a) => verify_shape(a, exec),
        Command::Stats(a) => stats(a, exec),
        Command::Curve(a) => curve(a),
        Command::Saddle(a) => saddle(a),
        Command::Bijection(a) => bijection(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
