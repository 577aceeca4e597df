//! `eal` — batch experiments for Alamouti codes over the Gaussian and
//! Eisenstein integers: constellation export, shaping gain, Epstein zeta
//! sums, mutual information, channel dispersion, codeword error rate, and
//! the finite-blocklength ε–R table with an optional SVG plot.
//!
//! Every command is deterministic given its flag set; result-affecting
//! flags (seed included) are echoed as `# key = value` comments in the
//! emitted CSV, so outputs are self-describing. `--threads` and output
//! paths never change results and are not echoed.

mod plot;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eal_core::channel::{simulate_cer, SimConfig};
use eal_core::csvfmt::{fmt_f64, CsvTable};
use eal_core::infotheory::{dispersion, epsilon_rate_curve, mutual_information, CurveConfig};
use eal_core::lattice::{
    epstein_zeta, epstein_zeta_tail, second_moment_continuous, shaping_gain_db, CellKind,
    LatticeKind, Ring, VoronoiConstellation,
};
use eal_core::stbc::CodebookSpec;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

enum CliError {
    /// Exit code 2: bad arguments or domain validation failure.
    Invalid(String),
    /// Exit code 1: I/O or runtime failure.
    Runtime(String),
}

type CliResult<T> = Result<T, CliError>;

impl From<eal_core::Error> for CliError {
    fn from(e: eal_core::Error) -> Self {
        match e {
            eal_core::Error::InvalidArgument(m) => CliError::Invalid(m),
            eal_core::Error::Degenerate(m) => CliError::Runtime(m),
        }
    }
}

#[derive(Parser)]
#[command(name = "eal", version, about = "Alamouti-code experiments over Gaussian and Eisenstein integers")]
struct Cli {
    /// Worker threads for the Monte Carlo estimators (results do not
    /// depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// RNG seed; defaults to $EAL_DEFAULT_SEED, then 1729.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a Voronoi constellation as CSV.
    Constellation(ConstellationArgs),
    /// Continuous-cell shaping gain plus a finite-p sweep.
    ShapingGain(ShapingGainArgs),
    /// Epstein zeta box sum at s = 2.
    Zeta(ZetaArgs),
    /// Monte Carlo mutual information of the combined scalar channel.
    Mi(MiArgs),
    /// Monte Carlo channel dispersion (law-of-total-variance split).
    Dispersion(DispersionArgs),
    /// Monte Carlo codeword error rate with Wilson 95% CI.
    Cer(CerArgs),
    /// Normal-approximation ε–R table for both rings, optional SVG.
    Figure1(Figure1Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    Gaussian,
    Eisenstein,
    Both,
}

impl RingArg {
    fn rings(self) -> Vec<Ring> {
        match self {
            RingArg::Gaussian => vec![Ring::Gaussian],
            RingArg::Eisenstein => vec![Ring::Eisenstein],
            // Eisenstein first: it is the scheme under study.
            RingArg::Both => vec![Ring::Eisenstein, Ring::Gaussian],
        }
    }

    fn single(self) -> CliResult<Ring> {
        match self {
            RingArg::Gaussian => Ok(Ring::Gaussian),
            RingArg::Eisenstein => Ok(Ring::Eisenstein),
            RingArg::Both => Err(CliError::Invalid(
                "this command takes a single ring (gaussian or eisenstein)".into(),
            )),
        }
    }

    fn echo(self) -> &'static str {
        match self {
            RingArg::Gaussian => "gaussian",
            RingArg::Eisenstein => "eisenstein",
            RingArg::Both => "both",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Square,
    Hex,
}

/// Integer count that also accepts scientific notation (`2e6`).
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if !f.is_finite() || f < 0.0 || f > u64::MAX as f64 {
        return Err(format!("count `{s}` is out of range"));
    }
    if f.fract() != 0.0 {
        return Err(format!("count `{s}` is not an integer"));
    }
    Ok(f as u64)
}

fn parse_n_list(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let n: u32 = part.trim().parse().map_err(|_| format!("invalid blocklength `{part}`"))?;
        out.push(n);
    }
    if out.is_empty() {
        Err("empty blocklength list".into())
    } else {
        Ok(out)
    }
}

/// `LO:HI:STEP`, inclusive of HI when the grid lands on it.
fn parse_rate_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("rate grid `{s}` is not LO:HI:STEP"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid number `{p}` in rate grid")))
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(format!("rate grid `{s}` must satisfy LO <= HI, STEP > 0"));
    }
    let count = ((hi - lo) / step + 1e-6).floor() as u64;
    Ok((0..=count).map(|k| lo + step * k as f64).collect())
}

#[derive(Args)]
struct ConstellationArgs {
    /// Ring to carve the constellation from.
    #[arg(long, value_enum)]
    ring: RingArg,
    /// Coset modulus: the constellation has p² points.
    #[arg(long, default_value_t = 13)]
    p: u32,
    /// CSV output path (default: constellation.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShapingGainArgs {
    /// Optional CSV output path for the finite-p sweep.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZetaArgs {
    /// Lattice whose zeta box sum to evaluate.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Summation box radius.
    #[arg(long, default_value_t = 2000)]
    radius: u32,
    /// CSV output path (default: zeta.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MiArgs {
    #[arg(long, value_enum, default_value = "both")]
    ring: RingArg,
    #[arg(long, default_value_t = 13)]
    p: u32,
    #[arg(long = "snr-db", default_value_t = 22.0)]
    snr_db: f64,
    /// Monte Carlo samples (accepts scientific notation, e.g. 2e6).
    #[arg(long, value_parser = parse_count, default_value = "2000000")]
    samples: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DispersionArgs {
    #[arg(long, value_enum, default_value = "both")]
    ring: RingArg,
    #[arg(long, default_value_t = 13)]
    p: u32,
    #[arg(long = "snr-db", default_value_t = 22.0)]
    snr_db: f64,
    /// Outer fading draws.
    #[arg(long = "h-samples", value_parser = parse_count, default_value = "20000")]
    h_samples: u64,
    /// Inner samples per fading draw.
    #[arg(long = "per-h-samples", default_value_t = 200)]
    per_h_samples: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CerArgs {
    /// Single ring (the CER table has no ring column).
    #[arg(long, value_enum)]
    ring: RingArg,
    #[arg(long, default_value_t = 13)]
    p: u32,
    #[arg(long = "snr-db")]
    snr_db: f64,
    #[arg(long, value_parser = parse_count, default_value = "1000000")]
    trials: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Figure1Args {
    #[arg(long, default_value_t = 13)]
    p: u32,
    #[arg(long = "snr-db", default_value_t = 22.0)]
    snr_db: f64,
    /// Comma-separated blocklengths (complex symbols).
    #[arg(long, default_value = "128,256,512,1024")]
    n: String,
    /// Single target rate in bits/symbol.
    #[arg(long, conflicts_with = "rate_grid")]
    rate: Option<f64>,
    /// Rate grid LO:HI:STEP in bits/symbol.
    #[arg(long = "rate-grid", default_value = "6:7.4:0.02")]
    rate_grid: String,
    /// MI Monte Carlo samples.
    #[arg(long, value_parser = parse_count, default_value = "2e6")]
    samples: u64,
    /// Dispersion outer fading draws.
    #[arg(long = "h-samples", value_parser = parse_count, default_value = "20000")]
    h_samples: u64,
    /// Dispersion inner samples per fading draw.
    #[arg(long = "per-h-samples", default_value_t = 200)]
    per_h_samples: u32,
    /// CSV output path (default: figure1.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional SVG plot path.
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let seed = resolve_seed(cli.seed)?;
    match cli.command {
        Command::Constellation(a) => cmd_constellation(a, seed),
        Command::ShapingGain(a) => cmd_shaping_gain(a, seed),
        Command::Zeta(a) => cmd_zeta(a, seed),
        Command::Mi(a) => cmd_mi(a, seed),
        Command::Dispersion(a) => cmd_dispersion(a, seed),
        Command::Cer(a) => cmd_cer(a, seed),
        Command::Figure1(a) => cmd_figure1(a, seed),
    }
}

fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("EAL_DEFAULT_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("EAL_DEFAULT_SEED must be an integer, got `{v}`"))),
        Err(std::env::VarError::NotPresent) => Ok(1729),
        Err(e) => Err(CliError::Invalid(format!("EAL_DEFAULT_SEED: {e}"))),
    }
}

fn write_table(table: &CsvTable, out: Option<&Path>, default_name: &str) -> CliResult<PathBuf> {
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, table.render())
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

fn build_constellation(ring: Ring, p: u32) -> CliResult<VoronoiConstellation> {
    let c = VoronoiConstellation::build(ring, p)?;
    // Normalization sanity: average energy is 1 after equalization (the
    // single-point constellation is all-zero and exempt).
    if c.len() > 1 && (c.avg_energy() - 1.0).abs() > 1e-9 {
        return Err(CliError::Runtime(format!(
            "normalization check failed: E_s = {}",
            c.avg_energy()
        )));
    }
    Ok(c)
}

fn cmd_constellation(a: ConstellationArgs, seed: u64) -> CliResult<()> {
    let ring = a.ring.single()?;
    let c = build_constellation(ring, a.p)?;
    let mut t = CsvTable::new(&["label_u", "label_v", "re", "im"]);
    t.comment("command", "constellation")
        .comment("ring", ring.name())
        .comment("p", a.p)
        .comment("equalization", c.equalization().name())
        .comment("seed", seed);
    for pt in c.points() {
        t.row(vec![
            pt.label.0.to_string(),
            pt.label.1.to_string(),
            fmt_f64(pt.position.re),
            fmt_f64(pt.position.im),
        ]);
    }
    let path = write_table(&t, a.out.as_deref(), "constellation.csv")?;
    println!("points = {}", c.len());
    println!("raw_es = {}", c.raw_avg_energy());
    println!("scale = {}", c.scale());
    println!("d_min = {}", c.min_distance());
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_shaping_gain(a: ShapingGainArgs, seed: u64) -> CliResult<()> {
    let square = second_moment_continuous(CellKind::Square, 1.0)?;
    let hex = second_moment_continuous(CellKind::Hexagon, 1.0)?;
    let continuous = shaping_gain_db(square, hex)?;
    println!("continuous_gain_db = {continuous}");
    let mut t = CsvTable::new(&["p", "gain_db"]);
    t.comment("command", "shaping-gain")
        .comment("continuous_gain_db", fmt_f64(continuous))
        .comment("seed", seed);
    for p in [1u32, 7, 13, 31, 61] {
        let gau = VoronoiConstellation::build(Ring::Gaussian, p)?;
        let eis = VoronoiConstellation::build(Ring::Eisenstein, p)?;
        if gau.raw_avg_energy() <= 0.0 || eis.raw_avg_energy() <= 0.0 {
            println!("p = {p}: gain undefined (degenerate single-point constellation)");
            continue;
        }
        // Both rings sit at unit minimum distance before normalization, so
        // the raw energy ratio is the finite-p shaping gain.
        let gain = shaping_gain_db(gau.raw_avg_energy(), eis.raw_avg_energy())?;
        println!("p = {p}: gain_db = {gain}");
        t.row(vec![p.to_string(), fmt_f64(gain)]);
    }
    if let Some(out) = a.out.as_deref() {
        let path = write_table(&t, Some(out), "shaping-gain.csv")?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_zeta(a: ZetaArgs, seed: u64) -> CliResult<()> {
    let kind = match a.kind {
        KindArg::Square => LatticeKind::Square,
        KindArg::Hex => LatticeKind::Hex,
    };
    let value = epstein_zeta(kind, a.radius)?;
    let tail = epstein_zeta_tail(kind, a.radius);
    let kind_name = match a.kind {
        KindArg::Square => "square",
        KindArg::Hex => "hex",
    };
    let mut t = CsvTable::new(&["kind", "radius", "value", "tail_bound"]);
    t.comment("command", "zeta")
        .comment("kind", kind_name)
        .comment("radius", a.radius)
        .comment("seed", seed);
    t.row(vec![kind_name.into(), a.radius.to_string(), fmt_f64(value), fmt_f64(tail)]);
    let path = write_table(&t, a.out.as_deref(), "zeta.csv")?;
    println!("zeta = {value}");
    println!("tail_bound = {tail}");
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_mi(a: MiArgs, seed: u64) -> CliResult<()> {
    let mut t = CsvTable::new(&["ring", "snr_db", "samples", "i_bits", "stderr"]);
    t.comment("command", "mi")
        .comment("ring", a.ring.echo())
        .comment("p", a.p)
        .comment("snr_db", a.snr_db)
        .comment("samples", a.samples)
        .comment("seed", seed);
    for ring in a.ring.rings() {
        let c = build_constellation(ring, a.p)?;
        let mi = mutual_information(&c, a.snr_db, a.samples, seed)?;
        if !(mi.stderr.is_finite() && mi.stderr >= 0.0) {
            return Err(CliError::Runtime("sanity check failed: missing MI stderr".into()));
        }
        println!("{}: i_bits = {} (stderr {})", ring.name(), mi.mean, mi.stderr);
        t.row(vec![
            ring.name().into(),
            fmt_f64(a.snr_db),
            a.samples.to_string(),
            fmt_f64(mi.mean),
            fmt_f64(mi.stderr),
        ]);
    }
    let path = write_table(&t, a.out.as_deref(), "mi.csv")?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_dispersion(a: DispersionArgs, seed: u64) -> CliResult<()> {
    let mut t = CsvTable::new(&[
        "ring",
        "snr_db",
        "h_samples",
        "per_h_samples",
        "v_bits2",
        "stderr",
        "e_var_given_h",
        "var_e_given_h",
        "i_mean",
        "i_stderr",
    ]);
    t.comment("command", "dispersion")
        .comment("ring", a.ring.echo())
        .comment("p", a.p)
        .comment("snr_db", a.snr_db)
        .comment("h_samples", a.h_samples)
        .comment("per_h_samples", a.per_h_samples)
        .comment("seed", seed);
    for ring in a.ring.rings() {
        let c = build_constellation(ring, a.p)?;
        let d = dispersion(&c, a.snr_db, a.h_samples, a.per_h_samples, seed)?;
        if !(d.stderr.is_finite() && d.stderr >= 0.0) {
            return Err(CliError::Runtime("sanity check failed: missing dispersion stderr".into()));
        }
        println!("{}: v_bits2 = {} (stderr {})", ring.name(), d.v, d.stderr);
        t.row(vec![
            ring.name().into(),
            fmt_f64(a.snr_db),
            a.h_samples.to_string(),
            a.per_h_samples.to_string(),
            fmt_f64(d.v),
            fmt_f64(d.stderr),
            fmt_f64(d.e_var_given_h),
            fmt_f64(d.var_e_given_h),
            fmt_f64(d.i_mean),
            fmt_f64(d.i_stderr),
        ]);
    }
    let path = write_table(&t, a.out.as_deref(), "dispersion.csv")?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_cer(a: CerArgs, seed: u64) -> CliResult<()> {
    let ring = a.ring.single()?;
    let c = build_constellation(ring, a.p)?;
    let spec = CodebookSpec::new(c);
    let cfg = SimConfig::new(a.snr_db, a.trials, seed)?;
    let res = simulate_cer(&spec, &cfg)?;
    let mut t = CsvTable::new(&["snr_db", "trials", "errors", "cer", "ci_lo", "ci_hi"]);
    t.comment("command", "cer")
        .comment("ring", ring.name())
        .comment("p", a.p)
        .comment("snr_db", a.snr_db)
        .comment("trials", a.trials)
        .comment("seed", seed);
    t.row(vec![
        fmt_f64(a.snr_db),
        res.trials.to_string(),
        res.errors.to_string(),
        fmt_f64(res.cer),
        fmt_f64(res.wilson_ci95.0),
        fmt_f64(res.wilson_ci95.1),
    ]);
    let path = write_table(&t, a.out.as_deref(), "cer.csv")?;
    println!("cer = {} ({} errors / {} trials)", res.cer, res.errors, res.trials);
    println!("ci95 = [{}, {}]", res.wilson_ci95.0, res.wilson_ci95.1);
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_figure1(a: Figure1Args, seed: u64) -> CliResult<()> {
    let rate_grid = match a.rate {
        Some(r) => vec![r],
        None => parse_rate_grid(&a.rate_grid).map_err(CliError::Invalid)?,
    };
    let n_list = parse_n_list(&a.n).map_err(CliError::Invalid)?;
    let cfg = CurveConfig {
        snr_db: a.snr_db,
        n_list: n_list.clone(),
        rate_grid,
        mi_samples: a.samples,
        h_samples: a.h_samples,
        per_h_samples: a.per_h_samples,
        seed,
    };
    let mut t = CsvTable::new(&[
        "ring",
        "snr_db",
        "n",
        "rate_bits",
        "epsilon",
        "i_bits",
        "v_bits2",
        "mi_stderr",
        "v_stderr",
    ]);
    t.comment("command", "figure1")
        .comment("p", a.p)
        .comment("snr_db", a.snr_db)
        .comment("n", n_list.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    match a.rate {
        Some(r) => t.comment("rate", r),
        None => t.comment("rate_grid", &a.rate_grid),
    };
    t.comment("samples", a.samples)
        .comment("h_samples", a.h_samples)
        .comment("per_h_samples", a.per_h_samples)
        .comment("seed", seed);
    let mut curves = Vec::new();
    for ring in [Ring::Eisenstein, Ring::Gaussian] {
        let c = build_constellation(ring, a.p)?;
        let curve = epsilon_rate_curve(&c, &cfg)?;
        if !(curve.mi.stderr.is_finite()
            && curve.mi.stderr >= 0.0
            && curve.dispersion.stderr.is_finite()
            && curve.dispersion.stderr >= 0.0)
        {
            return Err(CliError::Runtime("sanity check failed: missing stderr".into()));
        }
        println!(
            "{}: i_bits = {} (stderr {}), v_bits2 = {} (stderr {})",
            ring.name(),
            curve.mi.mean,
            curve.mi.stderr,
            curve.dispersion.v,
            curve.dispersion.stderr
        );
        for pt in &curve.points {
            t.row(vec![
                ring.name().into(),
                fmt_f64(a.snr_db),
                pt.n.to_string(),
                fmt_f64(pt.rate),
                fmt_f64(pt.epsilon),
                fmt_f64(pt.i_used),
                fmt_f64(pt.v_used),
                fmt_f64(curve.mi.stderr),
                fmt_f64(curve.dispersion.stderr),
            ]);
        }
        curves.push(curve);
    }
    let path = write_table(&t, a.out.as_deref(), "figure1.csv")?;
    println!("wrote {}", path.display());
    if let Some(svg_path) = a.svg.as_deref() {
        let mut series = Vec::new();
        for curve in &curves {
            for &n in &n_list {
                let mut label = String::new();
                let _ = write!(label, "{} n={n}", curve.ring.name());
                series.push(plot::Series {
                    label,
                    dashed: curve.ring == Ring::Gaussian,
                    points: curve
                        .points
                        .iter()
                        .filter(|pt| pt.n == n)
                        .map(|pt| (pt.rate, pt.epsilon))
                        .collect(),
                });
            }
        }
        let svg = plot::line_plot(
            "Normal approximation at 22 dB",
            "rate (bits/symbol)",
            "epsilon",
            &series,
            true,
        );
        std::fs::write(svg_path, svg)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", svg_path.display())))?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}
