//! Command-line front end. Each subcommand runs one experiment and writes one
//! table per output quantity.

pub mod config;
pub mod table;
pub mod validate;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::analytic::saturation::critical_energy_literal;
use crate::analytic::{bulk_curves, saturation_prediction, CurveKind, SaturationCoefficients};
use crate::eig::{select_emin, spectrum_record, EminSource};
use crate::error::{Error, Result};
use crate::experiments::fit::FitWindow;
use crate::experiments::phase::DEFAULT_TUBE;
use crate::experiments::saturation::STALL_FRACTION;
use crate::experiments::*;
use crate::model::{ChainParams, SystemSize};
use config::RunConfig;
use table::{write_table, ColumnData, Format, TableArtifact};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ntos", version, about = "Spectra and size scaling of terminal-coupled nonreciprocal SSH chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    t2: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long = "lambda-l", default_value_t = 1e-7, allow_hyphen_values = true)]
    lambda_l: f64,
    #[arg(long = "lambda-r", default_value_t = 1e-7, allow_hyphen_values = true)]
    lambda_r: f64,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Output file; the table goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; defaults to the extension of --out.
    #[arg(long)]
    format: Option<String>,
    /// JSON run configuration whose values override the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full spectrum at each N of a range.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// N or a:b[:step].
        #[arg(long, default_value = "20")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// E_min against N with the linear-law prediction.
    Nsweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "2:60")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Raster of an analytic or topological quantity over (t1, t2).
    Phase {
        /// slope, intercept, winding, n_c or ln_e_c; repeat for several files.
        #[arg(long, default_value = "winding")]
        quantity: Vec<String>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long = "lambda-l", default_value_t = 1e-7, allow_hyphen_values = true)]
        lambda_l: f64,
        #[arg(long = "lambda-r", default_value_t = 1e-7, allow_hyphen_values = true)]
        lambda_r: f64,
        /// lo:hi:count.
        #[arg(long, default_value = "-4:4:161", allow_hyphen_values = true)]
        t1: String,
        #[arg(long, default_value = "-4:4:161", allow_hyphen_values = true)]
        t2: String,
        #[arg(long, default_value_t = DEFAULT_TUBE)]
        tube: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric saturation point next to the closed-form prediction.
    Saturation {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "2:80")]
        n: String,
        #[arg(long = "im-tol", default_value_t = DEFAULT_IM_TOL)]
        im_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// PBC and GBZ bulk spectra.
    Curves {
        #[command(flatten)]
        params: ParamArgs,
        /// pbc, gbz or both.
        #[arg(long, default_value = "both")]
        kind: String,
        /// Samples per branch.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweeps with only λL and with only λR.
    Unidir {
        #[command(flatten)]
        params: ParamArgs,
        /// Value of the single surviving terminal coupling.
        #[arg(long, default_value_t = 1e-5, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value = "2:60")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance criteria and print a pass/fail table.
    Validate {
        /// Subset of criteria, e.g. 3,7.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Runs one command with process stdout and stderr.
pub fn run_cli(argv: &[String]) -> i32 {
    run_cli_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_cli_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Config(_) => EXIT_USAGE,
                _ => EXIT_ERROR,
            }
        }
    }
}

/// Resolved output settings after applying the config file.
struct Output {
    path: Option<PathBuf>,
    format: Format,
}

fn load_config(output: &OutputArgs) -> Result<RunConfig> {
    match &output.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn resolve_output(output: &OutputArgs, cfg: &RunConfig) -> Result<Output> {
    let path = cfg.out.clone().or_else(|| output.out.clone());
    let format = match cfg.format.as_deref().or(output.format.as_deref()) {
        Some(f) => Format::parse(f)?,
        None => path.as_deref().map_or(Format::Csv, Format::from_path),
    };
    Ok(Output { path, format })
}

fn resolve_params(args: &ParamArgs, cfg: &RunConfig) -> Result<ChainParams> {
    let p = cfg.params.apply(ChainParams {
        t1: args.t1,
        t2: args.t2,
        gamma: args.gamma,
        lambda_l: args.lambda_l,
        lambda_r: args.lambda_r,
    });
    p.validate()?;
    Ok(p)
}

fn emit(table: &TableArtifact, out: &Output, stdout: &mut dyn Write) -> Result<()> {
    match &out.path {
        Some(path) => write_table(table, out.format, path),
        None => stdout
            .write_all(table.render(out.format)?.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn echo_params(t: &mut TableArtifact, p: &ChainParams) {
    t.meta_float("t1", p.t1)
        .meta_float("t2", p.t2)
        .meta_float("gamma", p.gamma)
        .meta_float("lambda_l", p.lambda_l)
        .meta_float("lambda_r", p.lambda_r);
}

fn sizes_from(text: &str) -> Result<Vec<usize>> {
    if text.contains(':') {
        parse_n_range(text)
    } else {
        text.trim()
            .parse()
            .map(|n| vec![n])
            .map_err(|_| Error::Config(format!("N must be an integer or a:b[:step], got {text:?}")))
    }
}

fn floats(v: impl IntoIterator<Item = f64>) -> ColumnData {
    ColumnData::Float(v.into_iter().map(Some).collect())
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Spectrum { params, n, output } => {
            let cfg = load_config(&output)?;
            let p = resolve_params(&params, &cfg)?;
            let sizes = sizes_from(cfg.n.as_deref().unwrap_or(&n))?;
            emit(&spectrum_table(&p, &sizes)?, &resolve_output(&output, &cfg)?, stdout)?;
        }
        Command::Nsweep { params, n, output } => {
            let cfg = load_config(&output)?;
            let p = resolve_params(&params, &cfg)?;
            let sizes = sizes_from(cfg.n.as_deref().unwrap_or(&n))?;
            emit(&nsweep_table(&nsweep_sizes(&p, &sizes)?), &resolve_output(&output, &cfg)?, stdout)?;
        }
        Command::Phase {
            quantity,
            gamma,
            lambda_l,
            lambda_r,
            t1,
            t2,
            tube,
            output,
        } => {
            let cfg = load_config(&output)?;
            let patch = &cfg.params;
            let quantities = cfg.quantity.clone().unwrap_or(quantity);
            let out = resolve_output(&output, &cfg)?;
            for q in &quantities {
                let spec = PhaseSpec {
                    t1: Axis::parse(cfg.t1_grid.as_deref().unwrap_or(&t1))?,
                    t2: Axis::parse(cfg.t2_grid.as_deref().unwrap_or(&t2))?,
                    gamma: patch.gamma.unwrap_or(gamma),
                    lambda_l: patch.lambda_l.unwrap_or(lambda_l),
                    lambda_r: patch.lambda_r.unwrap_or(lambda_r),
                    quantity: PhaseQuantity::parse(q)?,
                    tube: cfg.tube.unwrap_or(tube),
                };
                let table = phase_table(&phase_grid(&spec)?);
                let path = match (&out.path, quantities.len()) {
                    (Some(path), k) if k > 1 => Some(suffixed(path, q)),
                    (path, _) => path.clone(),
                };
                emit(&table, &Output { path, format: out.format }, stdout)?;
            }
        }
        Command::Saturation { params, n, im_tol, output } => {
            let cfg = load_config(&output)?;
            let p = resolve_params(&params, &cfg)?;
            let sizes = sizes_from(cfg.n.as_deref().unwrap_or(&n))?;
            let table = saturation_table(&p, &sizes, cfg.im_tol.unwrap_or(im_tol))?;
            emit(&table, &resolve_output(&output, &cfg)?, stdout)?;
        }
        Command::Curves {
            params,
            kind,
            samples,
            output,
        } => {
            let cfg = load_config(&output)?;
            let p = resolve_params(&params, &cfg)?;
            let kinds = match cfg.kind.as_deref().unwrap_or(&kind) {
                "pbc" => vec![CurveKind::Pbc],
                "gbz" => vec![CurveKind::Gbz],
                "both" => vec![CurveKind::Pbc, CurveKind::Gbz],
                k => return Err(Error::Config(format!("kind must be pbc, gbz or both, got {k:?}"))),
            };
            let table = curves_table(&p, &kinds, cfg.samples.unwrap_or(samples))?;
            emit(&table, &resolve_output(&output, &cfg)?, stdout)?;
        }
        Command::Unidir {
            params,
            lambda,
            n,
            output,
        } => {
            let cfg = load_config(&output)?;
            let p = resolve_params(&params, &cfg)?;
            let sizes = sizes_from(cfg.n.as_deref().unwrap_or(&n))?;
            let table = unidir_table(&p, cfg.lambda.unwrap_or(lambda), &sizes)?;
            emit(&table, &resolve_output(&output, &cfg)?, stdout)?;
        }
        Command::Validate { criteria, output } => {
            let cfg = load_config(&output)?;
            let mut ids = cfg.criteria.clone().unwrap_or(criteria);
            if ids.is_empty() {
                ids = validate::ALL_CRITERIA.to_vec();
            }
            let mut reports = Vec::new();
            for id in ids {
                let report = validate::run_criterion(id)?;
                let _ = write!(stdout, "{report}");
                reports.push(report);
            }
            let out = resolve_output(&output, &cfg)?;
            if out.path.is_some() {
                emit(&validate_table(&reports), &out, stdout)?;
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            let _ = writeln!(stdout, "{passed}/{} criteria passed", reports.len());
            return Ok(if passed == reports.len() { EXIT_OK } else { EXIT_VALIDATION });
        }
    }
    Ok(EXIT_OK)
}

fn suffixed(path: &Path, quantity: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("phase");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{quantity}.{ext}"),
        None => format!("{stem}_{quantity}"),
    };
    path.with_file_name(name)
}

pub fn spectrum_table(p: &ChainParams, sizes: &[usize]) -> Result<TableArtifact> {
    let mut t = TableArtifact::new("spectrum");
    echo_params(&mut t, p);
    t.meta_float("precision_floor", crate::eig::spectrum::PRECISION_FLOOR);
    let (mut ns, mut idx, mut is_min) = (Vec::new(), Vec::new(), Vec::new());
    let (mut re, mut im, mut abs) = (Vec::new(), Vec::new(), Vec::new());
    for &n in sizes {
        let rec = spectrum_record(p, SystemSize::new(n)?)?;
        let mut ev = rec.eigenvalues.clone();
        ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
        let dense_min = select_emin(&ev)?;
        for (i, e) in ev.iter().enumerate() {
            ns.push(n as i64);
            idx.push(i as i64);
            re.push(e.re);
            im.push(e.im);
            abs.push(e.norm());
            is_min.push(i64::from(*e == dense_min));
        }
        t.meta(&format!("n{n}_e_min_source"), rec.e_min_source.as_str())
            .meta(&format!("n{n}_e_min"), format!("{:.16e}{:+.16e}i", rec.e_min.re, rec.e_min.im))
            .meta_float(&format!("n{n}_max_residual"), rec.max_residual);
    }
    t.push("N", ColumnData::Int(ns))
        .push("index", ColumnData::Int(idx))
        .push("re", floats(re))
        .push("im", floats(im))
        .push("abs", floats(abs))
        .push("is_emin", ColumnData::Int(is_min));
    Ok(t)
}

pub fn nsweep_table(sweep: &SweepResult) -> TableArtifact {
    let mut t = TableArtifact::new("nsweep");
    echo_params(&mut t, &sweep.params);
    t.meta_float("precision_floor", crate::eig::spectrum::PRECISION_FLOOR);
    if let Some(law) = sweep.law {
        t.meta_float("law_slope", law.slope).meta_float("law_intercept", law.intercept);
    }
    let roots: Vec<String> = sweep
        .records
        .iter()
        .filter(|r| r.e_min_source == EminSource::ConsistencyRoot)
        .map(|r| r.n.to_string())
        .collect();
    t.meta("consistency_root_sizes", roots.join(" "));
    let failed: Vec<String> = sweep.failures.iter().map(|f| format!("{}={}", f.n, f.message.replace(',', ";"))).collect();
    t.meta("failed_sizes", failed.join(" | "));
    let r = &sweep.records;
    t.push("N", ColumnData::Int(r.iter().map(|x| x.n as i64).collect()))
        .push("re_emin", floats(r.iter().map(|x| x.e_min.re)))
        .push("im_emin", floats(r.iter().map(|x| x.e_min.im)))
        .push("ln_abs_emin", floats(r.iter().map(|x| x.e_min.norm().ln())))
        .push("pred_ln_abs", ColumnData::Float(sweep.predictions.clone()));
    t
}

pub fn phase_table(grid: &PhaseGrid) -> TableArtifact {
    let mut t = TableArtifact::new("phase");
    let s = &grid.spec;
    t.meta("quantity", s.quantity.as_str())
        .meta("t1_grid", format!("{}:{}:{}", s.t1.lo, s.t1.hi, s.t1.count))
        .meta("t2_grid", format!("{}:{}:{}", s.t2.lo, s.t2.hi, s.t2.count))
        .meta_float("gamma", s.gamma)
        .meta_float("lambda_l", s.lambda_l)
        .meta_float("lambda_r", s.lambda_r)
        .meta_float("tube", s.tube);
    let (mut t1, mut t2, mut v, mut m) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (a, b, value, mask) in grid.cells() {
        t1.push(a);
        t2.push(b);
        v.push(value);
        m.push(mask.map_or("none", |r| r.as_str()).to_string());
    }
    t.push("t1", floats(t1))
        .push("t2", floats(t2))
        .push("value", ColumnData::Float(v))
        .push("mask", ColumnData::Text(m));
    t
}

pub fn saturation_table(p: &ChainParams, sizes: &[usize], im_tol: f64) -> Result<TableArtifact> {
    let mut t = TableArtifact::new("saturation");
    echo_params(&mut t, p);
    t.meta_float("im_tol", im_tol).meta_float("stall_fraction", STALL_FRACTION);
    let mut names = Vec::new();
    let mut n_c = Vec::new();
    let mut e_c = Vec::new();
    let mut row = |name: &str, n: Option<f64>, e: Option<f64>| {
        names.push(name.to_string());
        n_c.push(n);
        e_c.push(e);
    };
    match saturation_prediction(p) {
        Ok(s) => {
            row("closed_form", Some(s.n_c), Some(s.e_c));
            t.meta("branch", s.branch.as_str()).meta_float("lambert_arg", s.lambert_arg);
        }
        Err(e) => {
            row("closed_form", None, None);
            t.meta("closed_form_error", e.to_string().replace('\n', " "));
        }
    }
    let literal = critical_energy_literal(p).ok().filter(|z: &Complex64| z.im == 0.0).map(|z| z.re);
    row("closed_form_literal", None, literal);
    match SaturationCoefficients::taylor(p).and_then(|c| c.turning_point()) {
        Ok(s) => row("taylor_expansion", Some(s.n_c), Some(s.e_c)),
        Err(_) => row("taylor_expansion", None, None),
    }
    let sweep = nsweep_sizes(p, sizes)?;
    match detect_saturation(&sweep, im_tol) {
        Ok(s) => {
            row("numeric", Some(s.n_c_num as f64), Some(s.e_c_num));
            row("numeric_fold_midpoint", Some(s.n_c_num as f64), Some(s.e_c_fold));
            t.meta("criterion", s.criterion.as_str());
        }
        Err(e) => {
            row("numeric", None, None);
            row("numeric_fold_midpoint", None, None);
            t.meta("criterion", e.to_string());
        }
    }
    let ln_e: Vec<Option<f64>> = e_c.iter().map(|e| e.map(f64::ln)).collect();
    t.push("estimate", ColumnData::Text(names))
        .push("n_c", ColumnData::Float(n_c))
        .push("e_c", ColumnData::Float(e_c))
        .push("ln_e_c", ColumnData::Float(ln_e));
    Ok(t)
}

pub fn curves_table(p: &ChainParams, kinds: &[CurveKind], samples: usize) -> Result<TableArtifact> {
    let mut t = TableArtifact::new("curves");
    echo_params(&mut t, p);
    t.meta("samples_per_branch", samples);
    let (mut curve, mut branch, mut phase, mut re, mut im) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &k in kinds {
        let c = bulk_curves(p, k, samples)?;
        for (i, (e, ph)) in c.samples.iter().zip(&c.phases).enumerate() {
            curve.push(k.as_str().to_string());
            branch.push((i / samples) as i64);
            phase.push(*ph);
            re.push(e.re);
            im.push(e.im);
        }
    }
    t.push("curve", ColumnData::Text(curve))
        .push("branch", ColumnData::Int(branch))
        .push("phase", floats(phase))
        .push("re", floats(re))
        .push("im", floats(im));
    Ok(t)
}

pub fn unidir_table(p: &ChainParams, lambda: f64, sizes: &[usize]) -> Result<TableArtifact> {
    let (left, right) = unidirectional_sweeps(p, lambda, sizes)?;
    let mut t = TableArtifact::new("unidir");
    echo_params(&mut t, p);
    t.meta_float("lambda", lambda);
    let w = FitWindow::default();
    t.meta_float("fit_min_abs", w.min_abs)
        .meta_float("fit_max_transient", w.max_transient)
        .meta_float("fit_max_shoulder", w.max_shoulder);
    for (side, s) in [("l", &left), ("r", &right)] {
        if let Some(law) = s.law {
            t.meta_float(&format!("law_slope_{side}"), law.slope);
        }
        if let Ok(fit) = fit_linear_regime(s) {
            t.meta_float(&format!("fit_slope_{side}"), fit.slope);
        }
    }
    let at = |s: &SweepResult, n: usize| s.records.iter().position(|r| r.n == n);
    let mut ns = Vec::new();
    let mut cols: [Vec<Option<f64>>; 4] = Default::default();
    for &n in sizes {
        let (il, ir) = (at(&left, n), at(&right, n));
        if il.is_none() && ir.is_none() {
            continue;
        }
        ns.push(n as i64);
        cols[0].push(il.map(|i| left.records[i].e_min.norm().ln()));
        cols[1].push(ir.map(|i| right.records[i].e_min.norm().ln()));
        cols[2].push(il.and_then(|i| left.predictions[i]));
        cols[3].push(ir.and_then(|i| right.predictions[i]));
    }
    let [a, b, c, d] = cols;
    t.push("N", ColumnData::Int(ns))
        .push("ln_abs_emin_l", ColumnData::Float(a))
        .push("ln_abs_emin_r", ColumnData::Float(b))
        .push("pred_ln_abs_l", ColumnData::Float(c))
        .push("pred_ln_abs_r", ColumnData::Float(d));
    Ok(t)
}

pub fn validate_table(reports: &[validate::CriterionReport]) -> TableArtifact {
    let mut t = TableArtifact::new("validate");
    let (mut id, mut label, mut status, mut detail) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for r in reports {
        for c in &r.checks {
            id.push(r.id as i64);
            label.push(c.label.replace(',', ";"));
            status.push(if c.passed { "pass" } else { "fail" }.to_string());
            detail.push(c.detail.replace(',', ";"));
        }
    }
    t.push("criterion", ColumnData::Int(id))
        .push("check", ColumnData::Text(label))
        .push("status", ColumnData::Text(status))
        .push("detail", ColumnData::Text(detail));
    t
}

/// Small runs of every artifact-producing subcommand, used by the
/// determinism criterion.
pub fn determinism_commands() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("spectrum", vec!["spectrum", "--t1", "2.5", "--t2", "2.8", "--n", "6:8"]),
        ("nsweep", vec!["nsweep", "--t1", "2", "--t2", "1.5", "--n", "2:24"]),
        ("phase", vec!["phase", "--quantity", "slope", "--t1", "-4:4:41", "--t2", "-4:4:41"]),
        ("phase_json", vec!["phase", "--quantity", "n_c", "--t1", "-4:4:21", "--t2", "-4:4:21", "--format", "json"]),
        ("saturation", vec!["saturation", "--t1", "2", "--t2", "1.5", "--n", "30:42"]),
        ("curves", vec!["curves", "--t1", "2.5", "--t2", "2.8", "--samples", "64"]),
        ("unidir", vec!["unidir", "--t1", "2.5", "--t2", "2.8", "--n", "2:20"]),
    ]
}
