//! Command-line driver for the spacing-statistics toolkit.
//!
//! Subcommands: `surmise` (tabulate a law), `oracle` (2x2 Monte Carlo
//! samples plus KS report), `berry-tabor` (oscillator-ladder histogram),
//! `transition` (the full mixed-Hamiltonian sweep over `g`), and `fit`
//! (estimate `q` from a spacings file).
//!
//! Output files are plain CSV (or one-value-per-line text) with a
//! `#`-prefixed manifest header recording every parameter that affects the
//! data, so equal manifests imply byte-identical files. Wall-clock timing
//! goes only to the side file `manifest.txt`, never into data files.
//!
//! Exit codes: 0 success, 2 usage error, 3 data/validation error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsallis_rmt::ensembles::{sample_tsallis_2x2, Normalization, OracleConfig};
use tsallis_rmt::experiment::{
    berry_tabor_run, transition_sweep, TransitionConfig, UnfoldParams,
};
use tsallis_rmt::fitting::{fit_q_ls, fit_q_mle, ks_distance, FitMethod, FitResult};
use tsallis_rmt::spectral::{histogram, HistogramDensity, UnfoldedSpacings};
use tsallis_rmt::surmise::{EntropicIndex, SpacingLaw, SymmetryClass};

#[derive(Parser)]
#[command(
    name = "tsallis-rmt",
    version,
    about = "Nearest-neighbor spacing statistics across the regular-to-chaotic crossover"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a spacing law as CSV rows of (s, pdf, cdf).
    Surmise(SurmiseArgs),
    /// Draw Monte Carlo spacings from the 2x2 joint density and report the
    /// KS distance to the matching closed-form law.
    Oracle(OracleArgs),
    /// Unfolded spacing histogram of the two-dimensional oscillator ladder,
    /// with the q = 0 law overlay and a KS report.
    BerryTabor(BerryTaborArgs),
    /// Sweep the mixing weight g of the oscillator-plus-ensemble
    /// Hamiltonian and fit q at every point.
    Transition(TransitionArgs),
    /// Fit q to spacings read from a file (one value per line).
    Fit(FitArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    HistLs,
    Mle,
}

impl MethodArg {
    fn to_method(self) -> FitMethod {
        match self {
            Self::HistLs => FitMethod::HistLs,
            Self::Mle => FitMethod::Mle,
        }
    }

    fn name(self) -> &'static str {
        self.to_method().as_str()
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum NormalizationArg {
    Raw,
    UnitMean,
}

impl NormalizationArg {
    fn to_normalization(self) -> Normalization {
        match self {
            Self::Raw => Normalization::Raw,
            Self::UnitMean => Normalization::UnitMeanSpacing,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Raw => "raw",
            Self::UnitMean => "unit-mean",
        }
    }
}

#[derive(Args)]
struct SurmiseArgs {
    /// Symmetry class label: 1, 2 or 4.
    #[arg(long)]
    beta: u32,
    /// Entropic index in [0, 1]; 1 selects the classical surmise.
    #[arg(long)]
    q: f64,
    /// Upper end of the tabulation grid.
    #[arg(long, default_value_t = 3.0)]
    smax: f64,
    /// Grid step.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    /// Symmetry class label: 1 or 2.
    #[arg(long)]
    beta: u32,
    /// Entropic index, strictly below 1.
    #[arg(long)]
    q: f64,
    /// Number of accepted samples.
    #[arg(short, long)]
    n: usize,
    /// Scale of the joint density bracket; drops out after unit-mean
    /// rescaling.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct BerryTaborArgs {
    /// Frequency ratio, strictly inside (0, 1).
    #[arg(long)]
    alpha: f64,
    /// Number of ladder levels (at least 100).
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Histogram bin width.
    #[arg(long, default_value_t = 0.1)]
    bins: f64,
    /// Unfolding polynomial degree.
    #[arg(long, default_value_t = 7)]
    degree: usize,
    /// Trimmed fraction of levels per spectrum edge.
    #[arg(long, default_value_t = 0.05)]
    trim: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct TransitionArgs {
    /// Symmetry class of the perturbing ensemble: 1 (GOE) or 2 (GUE).
    #[arg(long)]
    beta: u32,
    /// Comma-separated mixing weights in [0, 1]; default is a log-like grid
    /// concentrated below 0.05.
    #[arg(long)]
    g_list: Option<String>,
    /// Matrix dimension.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Ensemble members per g.
    #[arg(long, default_value_t = 20)]
    members: usize,
    /// Oscillator frequency ratio.
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    alpha: f64,
    /// Off-diagonal variance of the perturbing ensemble.
    #[arg(long, default_value_t = 1.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Estimator used at every g.
    #[arg(long, value_enum, default_value_t = MethodArg::HistLs)]
    method: MethodArg,
    /// Scaling convention for the two mixing terms.
    #[arg(long, value_enum, default_value_t = NormalizationArg::Raw)]
    normalization: NormalizationArg,
    #[arg(long, default_value_t = 0.1)]
    bins: f64,
    #[arg(long, default_value_t = 7)]
    degree: usize,
    #[arg(long, default_value_t = 0.05)]
    trim: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Spacings file: one value per line, `#` comments allowed.
    #[arg(long)]
    input: PathBuf,
    /// Symmetry class label: 1, 2 or 4.
    #[arg(long)]
    beta: u32,
    #[arg(long, value_enum, default_value_t = MethodArg::HistLs)]
    method: MethodArg,
    /// Histogram bin width (hist-ls only).
    #[arg(long, default_value_t = 0.1)]
    bins: f64,
}

enum CliError {
    /// Bad parameter values: exit code 2.
    Usage(String),
    /// Bad data, file contents or runtime failure: exit code 3.
    Data(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }

    fn data(msg: impl Into<String>) -> Self {
        Self::Data(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits 2 on usage errors and 0 on --help/--version.
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Surmise(args) => cmd_surmise(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::BerryTabor(args) => cmd_berry_tabor(args),
        Command::Transition(args) => cmd_transition(args),
        Command::Fit(args) => cmd_fit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn parse_class(beta: u32) -> Result<SymmetryClass, CliError> {
    SymmetryClass::from_beta(beta).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_q(q: f64) -> Result<EntropicIndex, CliError> {
    EntropicIndex::new(q).map_err(|e| CliError::usage(e.to_string()))
}

/// Manifest lines embedded at the top of every data file. Only
/// output-determining parameters belong here.
type Manifest = Vec<(&'static str, String)>;

fn base_manifest(subcommand: &str) -> Manifest {
    vec![
        ("tool", "tsallis-rmt".to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("subcommand", subcommand.to_string()),
    ]
}

fn render_manifest(manifest: &Manifest) -> String {
    let mut s = String::new();
    for (k, v) in manifest {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s
}

fn write_data_file(
    dir: &Path,
    name: &str,
    manifest: &Manifest,
    header: Option<&str>,
    rows: &[String],
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut body = render_manifest(manifest);
    if let Some(h) = header {
        body.push_str(h);
        body.push('\n');
    }
    for row in rows {
        body.push_str(row);
        body.push('\n');
    }
    fs::write(&path, body)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// The side manifest: the data-file manifest plus report values and
/// wall-clock duration (which must stay out of the data files so reruns
/// stay byte-identical).
fn write_side_manifest(
    dir: &Path,
    manifest: &Manifest,
    extra: &[(&str, String)],
    started: Instant,
) -> Result<(), CliError> {
    let mut body = render_manifest(manifest);
    for (k, v) in extra {
        body.push_str(&format!("{k} = {v}\n"));
    }
    body.push_str(&format!(
        "duration_seconds = {:.3}\n",
        started.elapsed().as_secs_f64()
    ));
    let path = dir.join("manifest.txt");
    fs::write(&path, body)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn histogram_rows(hist: &HistogramDensity) -> Vec<String> {
    (0..hist.n_bins())
        .map(|k| {
            format!(
                "{},{},{}",
                hist.bin_edges()[k],
                hist.bin_edges()[k + 1],
                hist.density()[k]
            )
        })
        .collect()
}

/// Tabulate (s, pdf, cdf) on the uniform grid `0, step, ..., <= smax`.
fn law_rows(law: &SpacingLaw, smax: f64, step: f64) -> Vec<String> {
    let n_rows = (smax / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..n_rows).map(|k| k as f64 * step).collect();
    let cdf = law.cdf_sorted(&grid);
    grid.iter()
        .zip(&cdf)
        .map(|(s, c)| format!("{},{},{}", s, law.pdf(*s), c))
        .collect()
}

fn cmd_surmise(args: SurmiseArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let class = parse_class(args.beta)?;
    let q = parse_q(args.q)?;
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(CliError::usage(format!("step must be positive, got {}", args.step)));
    }
    if !(args.smax.is_finite() && args.smax > 0.0) {
        return Err(CliError::usage(format!("smax must be positive, got {}", args.smax)));
    }
    let law = SpacingLaw::new(class, q);
    let mut manifest = base_manifest("surmise");
    manifest.extend([
        ("beta", args.beta.to_string()),
        ("q", args.q.to_string()),
        ("smax", args.smax.to_string()),
        ("step", args.step.to_string()),
        ("a", law.a().to_string()),
        ("b", law.b().to_string()),
        ("s_max_support", law.s_max().to_string()),
    ]);
    let rows = law_rows(&law, args.smax, args.step);
    let path =
        write_data_file(&args.out, "surmise.csv", &manifest, Some("s,pdf,cdf"), &rows)?;
    write_side_manifest(&args.out, &manifest, &[("rows", rows.len().to_string())], started)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let class = parse_class(args.beta)?;
    let q = parse_q(args.q)?;
    let cfg = OracleConfig::with_scale(class, q, args.scale, args.n, args.seed)
        .map_err(|e| CliError::usage(e.to_string()))?;
    let spacings =
        sample_tsallis_2x2(&cfg).map_err(|e| CliError::data(e.to_string()))?;
    let law = SpacingLaw::new(class, q);
    let ks = ks_distance(&spacings, &law);

    let mut manifest = base_manifest("oracle");
    manifest.extend([
        ("beta", args.beta.to_string()),
        ("q", args.q.to_string()),
        ("n", args.n.to_string()),
        ("scale", args.scale.to_string()),
        ("seed", args.seed.to_string()),
        ("normalization", "unit-mean-sample".to_string()),
    ]);
    let rows: Vec<String> = spacings.values().iter().map(|v| v.to_string()).collect();
    let path = write_data_file(&args.out, "oracle_spacings.txt", &manifest, None, &rows)?;
    write_side_manifest(&args.out, &manifest, &[("ks_distance", ks.to_string())], started)?;
    println!("wrote {} ({} samples)", path.display(), spacings.len());
    println!("ks_distance = {ks}");
    Ok(())
}

fn cmd_berry_tabor(args: BerryTaborArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if !(args.alpha.is_finite() && args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::usage(format!(
            "alpha must lie strictly inside (0, 1), got {}",
            args.alpha
        )));
    }
    if args.count < 100 {
        return Err(CliError::usage(format!(
            "count must be at least 100, got {}",
            args.count
        )));
    }
    let params = UnfoldParams { degree: args.degree, trim: args.trim };
    let run = berry_tabor_run(args.alpha, args.count, args.bins, params)
        .map_err(|e| CliError::data(e.to_string()))?;

    let mut manifest = base_manifest("berry-tabor");
    manifest.extend([
        ("alpha", args.alpha.to_string()),
        ("count", args.count.to_string()),
        ("bins", args.bins.to_string()),
        ("degree", args.degree.to_string()),
        ("trim", args.trim.to_string()),
        ("pooling", "single-spectrum".to_string()),
        ("clipped_spacings", run.clipped.to_string()),
    ]);
    let hist_path = write_data_file(
        &args.out,
        "berry_tabor_hist.csv",
        &manifest,
        Some("bin_left,bin_right,density"),
        &histogram_rows(&run.histogram),
    )?;
    let law = SpacingLaw::new(
        SymmetryClass::Orthogonal,
        EntropicIndex::new(0.0).expect("0 is valid"),
    );
    let law_path = write_data_file(
        &args.out,
        "berry_tabor_law.csv",
        &manifest,
        Some("s,pdf,cdf"),
        &law_rows(&law, law.s_max().max(3.0), 0.01),
    )?;
    // Raw levels and unfolded spacings, one value per line, for external
    // consumers (including `fit`).
    let level_rows: Vec<String> = tsallis_rmt::ensembles::ho_spectrum(
        &tsallis_rmt::ensembles::OscillatorConfig::new(args.alpha, args.count)
            .map_err(|e| CliError::usage(e.to_string()))?,
    )
    .levels()
    .iter()
    .map(|v| v.to_string())
    .collect();
    write_data_file(&args.out, "berry_tabor_levels.txt", &manifest, None, &level_rows)?;
    let spacing_rows: Vec<String> =
        run.spacings.values().iter().map(|v| v.to_string()).collect();
    write_data_file(
        &args.out,
        "berry_tabor_spacings.txt",
        &manifest,
        None,
        &spacing_rows,
    )?;
    write_side_manifest(
        &args.out,
        &manifest,
        &[
            ("ks_vs_q0", run.ks_vs_q0.to_string()),
            ("peak_location", run.histogram.peak_location().to_string()),
        ],
        started,
    )?;
    println!("wrote {}", hist_path.display());
    println!("wrote {}", law_path.display());
    println!("ks_vs_q0 = {}", run.ks_vs_q0);
    Ok(())
}

fn parse_g_list(spec: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, token) in spec.split(',').enumerate() {
        let g: f64 = token
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("g-list entry {} is not a number: {token:?}", i + 1)))?;
        if !(g.is_finite() && (0.0..=1.0).contains(&g)) {
            return Err(CliError::usage(format!("g-list entry {g} outside [0, 1]")));
        }
        out.push(g);
    }
    if out.is_empty() {
        return Err(CliError::usage("g-list is empty"));
    }
    Ok(out)
}

fn cmd_transition(args: TransitionArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let class = parse_class(args.beta)?;
    if class == SymmetryClass::Symplectic {
        return Err(CliError::usage("transition supports beta = 1 or 2"));
    }
    let g_values = match &args.g_list {
        Some(spec) => parse_g_list(spec)?,
        None => tsallis_rmt::experiment::default_g_grid(),
    };
    let g_list_str: String =
        g_values.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");

    let mut manifest = base_manifest("transition");
    manifest.extend([
        ("beta", args.beta.to_string()),
        ("g_list", g_list_str.clone()),
        ("n", args.n.to_string()),
        ("members", args.members.to_string()),
        ("alpha", args.alpha.to_string()),
        ("sigma2", args.sigma2.to_string()),
        ("seed", args.seed.to_string()),
        ("method", args.method.name().to_string()),
        ("normalization", args.normalization.name().to_string()),
        ("bins", args.bins.to_string()),
        ("degree", args.degree.to_string()),
        ("trim", args.trim.to_string()),
        ("pooling", "spacings-pooled-across-members".to_string()),
    ]);

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", args.out.display())))?;
    let table_path = args.out.join("transition.csv");
    let mut table = fs::File::create(&table_path)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", table_path.display())))?;
    table
        .write_all(render_manifest(&manifest).as_bytes())
        .and_then(|_| table.write_all(b"g,q_hat,objective,at_boundary\n"))
        .map_err(|e| CliError::data(e.to_string()))?;

    let mut clip_warnings = Vec::new();
    // One g at a time so partial results land on disk as they are computed
    // (members still run in parallel inside the sweep).
    for (gi, &g) in g_values.iter().enumerate() {
        let cfg = TransitionConfig {
            class,
            dim: args.n,
            members: args.members,
            alpha: args.alpha,
            sigma2: args.sigma2,
            seed: args.seed,
            normalization: args.normalization.to_normalization(),
            g_values: vec![g],
            unfold: UnfoldParams { degree: args.degree, trim: args.trim },
            bin_width: args.bins,
            method: args.method.to_method(),
        };
        let point = transition_sweep(&cfg)
            .map_err(|e| CliError::data(format!("g = {g}: {e}")))?
            .pop()
            .expect("one g in, one point out");

        let mut hist_manifest = manifest.clone();
        hist_manifest.extend([
            ("g", g.to_string()),
            ("clipped_spacings", point.clipped.to_string()),
            ("n_spacings", point.pooled.len().to_string()),
        ]);
        write_data_file(
            &args.out,
            &format!("transition_hist_{gi:02}.csv"),
            &hist_manifest,
            Some("bin_left,bin_right,density"),
            &histogram_rows(&point.histogram),
        )?;

        if point.clipped_fraction() >= 1e-3 {
            clip_warnings.push(format!("g={g}"));
        }
        writeln!(
            table,
            "{},{},{},{}",
            g, point.fit.q_hat, point.fit.objective, point.fit.at_boundary
        )
        .and_then(|_| table.flush())
        .map_err(|e| CliError::data(e.to_string()))?;
        println!("g = {g}: q_hat = {}", point.fit.q_hat);
    }

    let clip_warning = if clip_warnings.is_empty() {
        "none".to_string()
    } else {
        clip_warnings.join(";")
    };
    let rerun = format!(
        "transition --beta {} --g-list {} --n {} --members {} --alpha {} --sigma2 {} \
         --seed {} --method {} --normalization {} --bins {} --degree {} --trim {}",
        args.beta,
        g_list_str,
        args.n,
        args.members,
        args.alpha,
        args.sigma2,
        args.seed,
        args.method.name(),
        args.normalization.name(),
        args.bins,
        args.degree,
        args.trim,
    );
    write_side_manifest(
        &args.out,
        &manifest,
        &[("clip_warning", clip_warning), ("rerun", rerun)],
        started,
    )?;
    println!("wrote {}", table_path.display());
    Ok(())
}

/// Read one spacing per line; `#` comments and blank lines are skipped.
/// Errors carry 1-based line numbers.
fn read_spacings(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::data(format!(
                "{}: line {}: not a number: {line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        if !v.is_finite() {
            return Err(CliError::data(format!(
                "{}: line {}: non-finite value",
                path.display(),
                idx + 1
            )));
        }
        if v < 0.0 {
            return Err(CliError::data(format!(
                "{}: line {}: negative spacing {v}",
                path.display(),
                idx + 1
            )));
        }
        values.push(v);
    }
    if values.len() < 2 {
        return Err(CliError::data(format!(
            "{}: need at least 2 spacings, found {}",
            path.display(),
            values.len()
        )));
    }
    Ok(values)
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let class = parse_class(args.beta)?;
    if args.method == MethodArg::HistLs && !(args.bins.is_finite() && args.bins > 0.0) {
        return Err(CliError::usage(format!("bins must be positive, got {}", args.bins)));
    }
    let raw = read_spacings(&args.input)?;
    // Spacings are analyzed in unit-mean normalization, the variable the
    // laws are expressed in. The support diagnostic survives this: a
    // far-outlying spacing stays far outlying relative to the mean.
    let spacings = UnfoldedSpacings::from_raw(raw)
        .map_err(|e| CliError::data(format!("{}: {e}", args.input.display())))?;
    let result: FitResult = match args.method.to_method() {
        FitMethod::HistLs => {
            let hist = histogram(&spacings, args.bins)
                .map_err(|e| CliError::data(e.to_string()))?;
            fit_q_ls(&hist, class)
        }
        FitMethod::Mle => fit_q_mle(spacings.values(), class)
            .map_err(|e| CliError::data(e.to_string()))?,
    };
    println!("{}", FitResult::CSV_HEADER);
    println!("{}", result.csv_row());
    Ok(())
}
