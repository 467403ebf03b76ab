//! Batch command-line surface for the DS-MZI engine: single-point reports,
//! figure sweeps, working-point optimization, Wigner grids, and the
//! validation suite. Data goes to standard output (or `--out`), a run
//! manifest goes to standard error (or a `.manifest.json` sidecar next to
//! `--out`), so the data stream stays byte-deterministic.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dsmzi::numfmt::fmt_sig;
use dsmzi::optimize::{sweep, OptimizeOver, SweepSpec, SweepVariable};
use dsmzi::presets::Preset;
use dsmzi::sensitivity::{phase_sensitivity_noisy, SensitivityReport};
use dsmzi::{gaussian, optimize, presets, validate, Error, InterferometerConfig};

const USAGE_EXIT: u8 = 2;
const COMPUTE_EXIT: u8 = 1;

#[derive(Parser)]
#[command(name = "dsmzi", version, about = "Dual-squeezing Mach-Zehnder interferometer toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the data output to PATH (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Emit JSON where the command defaults to CSV.
    #[arg(long, global = true)]
    json: bool,

    /// Exit with status 1 when the requested point is diverged.
    #[arg(long, global = true)]
    strict: bool,

    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sensitivity report for a single configuration (JSON).
    Report(ReportArgs),
    /// Parameter sweep to CSV (figure presets or an explicit spec).
    Sweep(SweepArgs),
    /// Optimize the working point (and optionally the output squeezer).
    Optimize(OptimizeArgs),
    /// Phase-space density of one output mode on a rectangular grid (CSV).
    Wigner(WignerArgs),
    /// Run the validation checks and print a pass/fail table.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    r1: f64,
    /// Output squeezing (defaults to r1, the balanced configuration).
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// Figure preset: fig2, fig3, fig4a, fig4b or fig4c.
    #[arg(long, conflicts_with_all = ["var", "lo", "hi", "points"])]
    preset: Option<String>,

    /// Swept variable for an explicit sweep.
    #[arg(long, value_enum)]
    var: Option<VarArg>,
    #[arg(long, requires = "var", allow_negative_numbers = true)]
    lo: Option<f64>,
    #[arg(long, requires = "var", allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long, requires = "var")]
    points: Option<usize>,

    /// Fixed parameters for explicit sweeps.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    r1: f64,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,

    /// Re-optimize per point: "phi" or "phi,r2".
    #[arg(long)]
    optimize: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    R,
    R2,
    Phi,
    Alpha,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    r1: f64,
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Jointly optimize the output squeezing r2 together with phi.
    #[arg(long)]
    joint: bool,
}

#[derive(Args)]
struct WignerArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    r1: f64,
    #[arg(long)]
    r2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    /// Which output mode to evaluate.
    #[arg(long, value_enum, default_value_t = ModeArg::A)]
    mode: ModeArg,
    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pmax: Option<f64>,
    /// Grid points per axis.
    #[arg(long, default_value_t = 101)]
    resolution: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    A,
    B,
}

#[derive(Args)]
struct ValidateArgs {
    /// Small grids only (the default).
    #[arg(long, conflicts_with = "full")]
    quick: bool,
    /// Full acceptance-grade checks.
    #[arg(long)]
    full: bool,
}

struct Manifest {
    command: &'static str,
    parameters: Value,
    divergences: usize,
    extra: Value,
}

fn emit_manifest(m: &Manifest, started: Instant, out: Option<&Path>) {
    let doc = json!({
        "command": m.command,
        "version": env!("CARGO_PKG_VERSION"),
        "parameters": m.parameters,
        "duration_ms": started.elapsed().as_millis() as u64,
        "divergences": m.divergences,
        "extra": m.extra,
    });
    match out {
        Some(path) => {
            let side = manifest_path(path);
            if let Err(e) = write_atomic(&side, &format!("{doc:#}\n")) {
                eprintln!("warning: could not write manifest {}: {e}", side.display());
            }
        }
        None => eprintln!("{doc}"),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let mut tmp = path.file_name().unwrap_or_default().to_os_string();
    tmp.push(".tmp");
    let tmp_path = path.with_file_name(tmp);
    std::fs::write(&tmp_path, content)?;
    std::fs::rename(&tmp_path, path)
}

fn deliver(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// null for the infinity sentinel, plain number otherwise.
fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn report_json(rep: &SensitivityReport) -> Value {
    json!({
        "config": {
            "alpha": rep.config.alpha,
            "r1": rep.config.r1,
            "r2": rep.config.r2,
            "phi": rep.config.phi,
            "eta": rep.config.eta,
        },
        "delta_phi_detection": json_num(rep.delta_phi_detection),
        "delta_phi_bound": json_num(rep.delta_phi_bound),
        "scaled": json_num(rep.scaled),
        "saturability": rep.saturability,
        "n_bar": rep.n_bar,
        "diverged": rep.diverged,
    })
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter { .. }
        | Error::CutoffTooLarge { .. }
        | Error::TooFewPoints { .. } => USAGE_EXIT,
        _ => COMPUTE_EXIT,
    }
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    USAGE_EXIT
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            return ExitCode::from(usage_error("--threads must be at least 1"));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let started = Instant::now();
    let code = match &cli.command {
        Command::Report(args) => cmd_report(&cli, args, started),
        Command::Sweep(args) => cmd_sweep(&cli, args, started),
        Command::Optimize(args) => cmd_optimize(&cli, args, started),
        Command::Wigner(args) => cmd_wigner(&cli, args, started),
        Command::Validate(args) => cmd_validate(args),
    };
    ExitCode::from(code)
}

fn cmd_report(cli: &Cli, args: &ReportArgs, started: Instant) -> u8 {
    let r2 = args.r2.unwrap_or(args.r1);
    let cfg = match InterferometerConfig::new(args.alpha, args.r1, r2, args.phi, args.eta) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let rep = match phase_sensitivity_noisy(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let doc = report_json(&rep);
    if deliver(cli.out.as_deref(), &format!("{doc:#}\n")).is_err() {
        return COMPUTE_EXIT;
    }
    emit_manifest(
        &Manifest {
            command: "report",
            parameters: json!({
                "alpha": cfg.alpha, "r1": cfg.r1, "r2": cfg.r2,
                "phi": cfg.phi, "eta": cfg.eta,
            }),
            divergences: rep.diverged as usize,
            extra: Value::Null,
        },
        started,
        cli.out.as_deref(),
    );
    if cli.strict && rep.diverged {
        return COMPUTE_EXIT;
    }
    0
}

fn parse_optimize_list(raw: &str) -> Option<OptimizeOver> {
    let mut opt = OptimizeOver::default();
    for part in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part {
            "phi" => opt.phi = true,
            "r2" => opt.r2 = true,
            _ => return None,
        }
    }
    Some(opt)
}

fn table_to_json(table: &presets::Table) -> Value {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|cell| match cell.as_str() {
                        "inf" | "-inf" | "nan" => Value::Null,
                        s => s
                            .parse::<f64>()
                            .map(|v| json!(v))
                            .unwrap_or(Value::Null),
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "columns": table.columns, "rows": rows })
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs, started: Instant) -> u8 {
    let (table, label, params) = if let Some(name) = &args.preset {
        let Some(preset) = Preset::parse(name) else {
            return usage_error(&format!(
                "unknown preset `{name}` (expected fig2, fig3, fig4a, fig4b or fig4c)"
            ));
        };
        match presets::run(preset) {
            Ok(t) => (t, "sweep", json!({ "preset": preset.name() })),
            Err(e) => {
                eprintln!("error: {e}");
                return exit_for(&e);
            }
        }
    } else {
        let Some(var) = args.var else {
            return usage_error("either --preset or --var/--lo/--hi/--points is required");
        };
        let (Some(lo), Some(hi), Some(points)) = (args.lo, args.hi, args.points) else {
            return usage_error("--var requires --lo, --hi and --points");
        };
        let optimize_over = match args.optimize.as_deref().map(parse_optimize_list) {
            Some(Some(o)) => o,
            Some(None) => return usage_error("--optimize accepts a comma list of: phi, r2"),
            None => OptimizeOver::default(),
        };
        let variable = match var {
            VarArg::R => SweepVariable::R,
            VarArg::R2 => SweepVariable::R2,
            VarArg::Phi => SweepVariable::Phi,
            VarArg::Alpha => SweepVariable::Alpha,
        };
        if matches!(variable, SweepVariable::Phi) && optimize_over.phi {
            return usage_error("cannot both sweep and optimize phi");
        }
        if matches!(variable, SweepVariable::R2) && optimize_over.r2 {
            return usage_error("cannot both sweep and optimize r2");
        }
        let fixed = match InterferometerConfig::new(
            args.alpha,
            args.r1,
            args.r2.unwrap_or(args.r1),
            args.phi,
            args.eta,
        ) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_for(&e);
            }
        };
        let spec = SweepSpec {
            variable,
            lo,
            hi,
            points,
            fixed,
            optimize_over,
            pin_r2: args.r2.is_some(),
        };
        let points = match sweep(&spec) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_for(&e);
            }
        };
        let var_name = match variable {
            SweepVariable::R => "r",
            SweepVariable::R2 => "r2",
            SweepVariable::Phi => "phi",
            SweepVariable::Alpha => "alpha",
        };
        let mut columns = vec![
            var_name.to_string(),
            "delta_phi".into(),
            "delta_phi_bound".into(),
            "scaled".into(),
            "saturability".into(),
        ];
        if optimize_over.phi || optimize_over.r2 {
            columns.push("phi_opt".into());
        }
        if optimize_over.r2 {
            columns.push("r2_opt".into());
        }
        let mut divergences = 0;
        let rows: Vec<Vec<String>> = points
            .iter()
            .map(|p| {
                if p.report.diverged {
                    divergences += 1;
                }
                let mut row = vec![
                    fmt_sig(p.x),
                    fmt_sig(p.report.delta_phi_detection),
                    fmt_sig(p.report.delta_phi_bound),
                    fmt_sig(p.report.scaled),
                    fmt_sig(p.report.saturability),
                ];
                if let Some(phi) = p.phi_opt {
                    row.push(fmt_sig(phi));
                }
                if let Some(r2) = p.r2_opt {
                    row.push(fmt_sig(r2));
                }
                row
            })
            .collect();
        (
            presets::Table {
                columns,
                rows,
                divergences,
            },
            "sweep",
            json!({
                "var": var_name, "lo": lo, "hi": hi, "points": points.len(),
                "alpha": args.alpha, "r1": args.r1, "r2": args.r2,
                "phi": args.phi, "eta": args.eta,
                "optimize": args.optimize,
            }),
        )
    };
    let content = if cli.json {
        format!("{:#}\n", table_to_json(&table))
    } else {
        table.to_csv()
    };
    if deliver(cli.out.as_deref(), &content).is_err() {
        return COMPUTE_EXIT;
    }
    emit_manifest(
        &Manifest {
            command: label,
            parameters: params,
            divergences: table.divergences,
            extra: json!({ "rows": table.rows.len() }),
        },
        started,
        cli.out.as_deref(),
    );
    0
}

fn cmd_optimize(cli: &Cli, args: &OptimizeArgs, started: Instant) -> u8 {
    let result = if args.joint {
        optimize::optimal_r2(args.alpha, args.r1, args.eta)
            .map(|(r2, phi, rep)| (phi, Some(r2), rep))
    } else {
        optimize::optimal_phase(args.alpha, args.r1, args.r1, args.eta)
            .map(|(phi, rep)| (phi, None, rep))
    };
    let (phi_opt, r2_opt, rep) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let mut doc = json!({
        "phi_opt": phi_opt,
        "report": report_json(&rep),
    });
    if let Some(r2) = r2_opt {
        doc["r2_opt"] = json!(r2);
    }
    if deliver(cli.out.as_deref(), &format!("{doc:#}\n")).is_err() {
        return COMPUTE_EXIT;
    }
    emit_manifest(
        &Manifest {
            command: "optimize",
            parameters: json!({
                "alpha": args.alpha, "r1": args.r1, "eta": args.eta, "joint": args.joint,
            }),
            divergences: rep.diverged as usize,
            extra: Value::Null,
        },
        started,
        cli.out.as_deref(),
    );
    0
}

fn cmd_wigner(cli: &Cli, args: &WignerArgs, started: Instant) -> u8 {
    if args.resolution < 2 {
        return usage_error("--resolution must be at least 2");
    }
    let cfg = match InterferometerConfig::new(
        args.alpha,
        args.r1,
        args.r2.unwrap_or(args.r1),
        args.phi,
        1.0,
    ) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let state = match gaussian::ds_mzi_output(&cfg) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let mode = match args.mode {
        ModeArg::A => gaussian::Mode::A,
        ModeArg::B => gaussian::Mode::B,
    };
    let marginal = gaussian::mode_marginal(&state, mode);
    let (sx, sp) = (marginal.cov2[(0, 0)].sqrt(), marginal.cov2[(1, 1)].sqrt());
    let xmin = args.xmin.unwrap_or(marginal.mean2[0] - 5.0 * sx);
    let xmax = args.xmax.unwrap_or(marginal.mean2[0] + 5.0 * sx);
    let pmin = args.pmin.unwrap_or(marginal.mean2[1] - 5.0 * sp);
    let pmax = args.pmax.unwrap_or(marginal.mean2[1] + 5.0 * sp);
    if xmin >= xmax || pmin >= pmax || [xmin, xmax, pmin, pmax].iter().any(|v| v.is_nan()) {
        return usage_error("degenerate grid: require xmin < xmax and pmin < pmax");
    }
    let n = args.resolution;
    let (dx, dp) = ((xmax - xmin) / (n - 1) as f64, (pmax - pmin) / (n - 1) as f64);
    let mut rows = Vec::with_capacity(n * n);
    let mut peak = 0.0f64;
    for i in 0..n {
        let x = xmin + dx * i as f64;
        for j in 0..n {
            let p = pmin + dp * j as f64;
            let w = match gaussian::wigner_value(&marginal, x, p) {
                Ok(w) => w,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_for(&e);
                }
            };
            peak = peak.max(w);
            rows.push(vec![fmt_sig(x), fmt_sig(p), fmt_sig(w)]);
        }
    }
    let table = presets::Table {
        columns: vec!["x".into(), "p".into(), "w".into()],
        rows,
        divergences: 0,
    };
    let content = if cli.json {
        format!("{:#}\n", table_to_json(&table))
    } else {
        table.to_csv()
    };
    if deliver(cli.out.as_deref(), &content).is_err() {
        return COMPUTE_EXIT;
    }
    let ia = gaussian::mode_intensity(&gaussian::mode_marginal(&state, gaussian::Mode::A));
    let ib = gaussian::mode_intensity(&gaussian::mode_marginal(&state, gaussian::Mode::B));
    emit_manifest(
        &Manifest {
            command: "wigner",
            parameters: json!({
                "alpha": cfg.alpha, "r1": cfg.r1, "r2": cfg.r2, "phi": cfg.phi,
                "mode": match mode { gaussian::Mode::A => "a", gaussian::Mode::B => "b" },
                "xmin": xmin, "xmax": xmax, "pmin": pmin, "pmax": pmax,
                "resolution": n,
            }),
            divergences: 0,
            extra: json!({ "i_a": ia, "i_b": ib, "w_peak": peak }),
        },
        started,
        cli.out.as_deref(),
    );
    0
}

fn cmd_validate(args: &ValidateArgs) -> u8 {
    let full = args.full;
    let checks = if full {
        validate::run_full()
    } else {
        validate::run_quick()
    };
    let mut failures = 0;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<40} {}", check.name, check.detail);
        if !check.passed {
            failures += 1;
        }
    }
    println!(
        "{} of {} checks passed ({})",
        checks.len() - failures,
        checks.len(),
        if full { "full" } else { "quick" }
    );
    if failures > 0 {
        COMPUTE_EXIT
    } else {
        0
    }
}
