//! Command-line surface: point evaluation, grid sweeps, EP search and the
//! oracle equivalence check.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use waveqed::sweep::EpSliceSpec;
use waveqed::{
    find_eps, oracle_check, preset, run_sweep, s_eigenvalues, AmplitudeSet, EPRecord, EpTolerances,
    ExportFormat, Model, ParamField, ParamLink, SweepResult, SweepSlice, SystemParams,
    PRESET_NAMES,
};

#[derive(Parser)]
#[command(
    name = "waveqed",
    version,
    about = "Waveguide-coupled cavity/quantum-dot scattering simulator",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON sweep config mirroring the SweepGrid schema (axes, base, model, links)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Export format: csv or json
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Worker threads for grid evaluation (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for random draws
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// |r| below which the vanishing reflection classifies as zero
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_zero: f64,

    /// |r| above which the surviving reflection counts as nonzero
    #[arg(long, global = true, default_value_t = 1e-3)]
    tol_nonzero: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point and print amplitudes, observables and eigenvalues
    Point(PointArgs),
    /// Run a preset or config-defined grid sweep and export the table
    Sweep(SweepArgs),
    /// Locate exceptional points along a 1D parameter slice
    EpFind(EpFindArgs),
    /// Compare the closed forms against the linear-system oracle on seeded draws
    OracleCheck(OracleCheckArgs),
    /// List the built-in figure presets
    PresetList,
}

#[derive(Args, Clone, Copy, Default)]
struct ParamFlags {
    #[arg(long, allow_negative_numbers = true)]
    delta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    big_gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
}

impl ParamFlags {
    fn apply(&self, p: &mut SystemParams) {
        let pairs = [
            (ParamField::Delta1, self.delta1),
            (ParamField::Delta2, self.delta2),
            (ParamField::Delta3, self.delta3),
            (ParamField::Gamma1, self.gamma1),
            (ParamField::Gamma2, self.gamma2),
            (ParamField::Gamma3, self.gamma3),
            (ParamField::BigGamma, self.big_gamma),
            (ParamField::Lambda, self.lambda),
            (ParamField::Omega, self.omega),
            (ParamField::Theta, self.theta),
        ];
        for (field, value) in pairs {
            if let Some(v) = value {
                field.set(p, v);
            }
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// two-level or three-level
    #[arg(long, default_value = "three-level", value_parser = parse_model)]
    model: Model,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in preset name (see preset-list); mutually exclusive with --config
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct EpFindArgs {
    /// Run the EP slices shipped with a preset
    #[arg(long)]
    preset: Option<String>,
    /// Restrict --preset to one named slice
    #[arg(long)]
    slice: Option<String>,
    /// Swept parameter for a manual slice (delta1, delta2, theta, lambda, omega)
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    stop: Option<f64>,
    #[arg(long, default_value_t = 801)]
    points: usize,
    /// Derived link target:source:offset (repeatable), e.g. delta1:delta2:-1.0
    #[arg(long = "link")]
    links: Vec<String>,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long, default_value = "two-level", value_parser = parse_model)]
    model: Model,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Number of random draws
    #[arg(long, default_value_t = 10000)]
    n: usize,
    /// Maximum allowed closed-form/oracle deviation
    #[arg(long, default_value_t = 1e-10)]
    threshold: f64,
}

fn parse_model(s: &str) -> Result<Model, String> {
    match s {
        "two-level" => Ok(Model::TwoLevel),
        "three-level" => Ok(Model::ThreeLevel),
        other => Err(format!(
            "unknown model {other:?} (expected two-level or three-level)"
        )),
    }
}

fn parse_link(s: &str) -> Result<ParamLink, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("link {s:?} must be target:source:offset"));
    }
    Ok(ParamLink {
        target: ParamField::from_str(parts[0]).map_err(|e| e.to_string())?,
        source: ParamField::from_str(parts[1]).map_err(|e| e.to_string())?,
        offset: parts[2]
            .parse()
            .map_err(|e| format!("bad offset {:?}: {e}", parts[2]))?,
    })
}

fn print_point(p: &SystemParams, model: Model, amps: &AmplitudeSet) {
    println!("model = {model}");
    println!(
        "delta1 = {:.6} delta2 = {:.6} delta3 = {:.6} theta = {:.6}",
        p.delta1, p.delta2, p.delta3, p.theta
    );
    println!(
        "gamma1 = {:.6} gamma2 = {:.6} gamma3 = {:.6} big_gamma = {:.6} lambda = {:.6} omega = {:.6}",
        p.gamma1, p.gamma2, p.gamma3, p.big_gamma, p.lambda, p.omega
    );
    println!("t   = {:+.16e} {:+.16e}i", amps.t.re, amps.t.im);
    println!("r_f = {:+.16e} {:+.16e}i", amps.r_f.re, amps.r_f.im);
    println!("r_b = {:+.16e} {:+.16e}i", amps.r_b.re, amps.r_b.im);
    println!("T   = {:.16e}", amps.transmission);
    println!("R_f = {:.16e}", amps.reflection_fwd);
    println!("R_b = {:.16e}", amps.reflection_bwd);
    println!("A_f = {:.16e}", amps.absorption_fwd);
    println!("A_b = {:.16e}", amps.absorption_bwd);
    let s = s_eigenvalues(amps);
    println!("s_plus  = {:+.16e} {:+.16e}i", s.s_plus.re, s.s_plus.im);
    println!("s_minus = {:+.16e} {:+.16e}i", s.s_minus.re, s.s_minus.im);
    println!("gap = {:.16e}", s.gap);
}

fn print_ep_records(label: &str, records: &[EPRecord]) {
    if records.is_empty() {
        println!("{label}: no exceptional points found");
        return;
    }
    for r in records {
        println!(
            "{label}: EP at {} = {:+.12e}  vanishing = {}  |r_zero| = {:.3e}  |r_other| = {:.3e}  gap = {:.3e}",
            r.slice_param, r.location, r.vanishing_side, r.r_zero_mod, r.r_other_mod, r.gap
        );
    }
}

fn export_result(cli: &Cli, result: SweepResult) -> waveqed::Result<()> {
    let format = ExportFormat::from_str(&cli.format)?;
    match &cli.out {
        Some(path) => waveqed::export(&result, format, path)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let io_err = |source: std::io::Error| waveqed::Error::Io {
                path: "<stdout>".into(),
                source,
            };
            match format {
                ExportFormat::Csv => waveqed::write_csv(&result, &mut lock).map_err(io_err)?,
                ExportFormat::Json => waveqed::write_json(&result, &mut lock).map_err(io_err)?,
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, String> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    let tols = EpTolerances {
        tol_zero: cli.tol_zero,
        tol_nonzero: cli.tol_nonzero,
        ..Default::default()
    };

    match &cli.command {
        Command::Point(args) => {
            let mut base = match &cli.config {
                Some(path) => waveqed::load_grid(path).map_err(|e| e.to_string())?.base,
                None => SystemParams::default(),
            };
            args.params.apply(&mut base);
            let p = base.validate().map_err(|e| e.to_string())?;
            let amps = waveqed::amplitudes::eval_model(args.model, &p, 1e-300)
                .map_err(|e| e.to_string())?;
            print_point(&p, args.model, &amps);
            Ok(0)
        }
        Command::Sweep(args) => {
            let (grid, meta_preset, inferred) = match (&args.preset, &cli.config) {
                (Some(name), None) => {
                    let p = preset(name).map_err(|e| e.to_string())?;
                    (p.grid, Some(p.name.to_string()), p.inferred)
                }
                (None, Some(path)) => (
                    waveqed::load_grid(path).map_err(|e| e.to_string())?,
                    None,
                    Vec::new(),
                ),
                (Some(_), Some(_)) => {
                    return Err("pass either --preset or --config, not both".into())
                }
                (None, None) => return Err("sweep needs --preset or --config".into()),
            };
            let mut result = run_sweep(&grid).map_err(|e| e.to_string())?;
            result.meta.preset = meta_preset;
            result.meta.inferred = inferred;
            for note in &result.meta.inferred {
                eprintln!("preset-inferred: {note}");
            }
            export_result(cli, result).map_err(|e| e.to_string())?;
            Ok(0)
        }
        Command::EpFind(args) => {
            let mut slices: Vec<(String, SweepSlice, Model)> = Vec::new();
            if let Some(name) = &args.preset {
                let p = preset(name).map_err(|e| e.to_string())?;
                if p.ep_slices.is_empty() {
                    return Err(format!("preset {name} ships no EP slices"));
                }
                for EpSliceSpec { name, slice, model } in p.ep_slices {
                    if args.slice.as_deref().is_none_or(|want| want == name) {
                        slices.push((name, slice, model));
                    }
                }
                if slices.is_empty() {
                    return Err(format!(
                        "preset {name} has no slice named {:?}",
                        args.slice.as_deref().unwrap_or("")
                    ));
                }
            } else {
                let (Some(param), Some(start), Some(stop)) = (&args.param, args.start, args.stop)
                else {
                    return Err("ep-find needs --preset or --param/--start/--stop".into());
                };
                let mut base = match &cli.config {
                    Some(path) => waveqed::load_grid(path).map_err(|e| e.to_string())?.base,
                    None => SystemParams::default(),
                };
                args.params.apply(&mut base);
                let links = args
                    .links
                    .iter()
                    .map(|s| parse_link(s))
                    .collect::<Result<Vec<_>, _>>()?;
                slices.push((
                    format!("slice({param})"),
                    SweepSlice {
                        base,
                        param: ParamField::from_str(param).map_err(|e| e.to_string())?,
                        start,
                        stop,
                        points: args.points,
                        links,
                    },
                    args.model,
                ));
            }
            for (name, slice, model) in &slices {
                let records = find_eps(slice, *model, &tols).map_err(|e| e.to_string())?;
                print_ep_records(name, &records);
            }
            Ok(0)
        }
        Command::OracleCheck(args) => {
            let report = oracle_check(args.n, cli.seed).map_err(|e| e.to_string())?;
            println!(
                "oracle-check: draws = {}  seed = {}  max deviation = {:.6e}  ({})",
                report.draws, cli.seed, report.max_deviation, report.worst_component
            );
            if report.max_deviation >= args.threshold {
                println!(
                    "exceeds threshold {:.3e}; worst-case parameters:",
                    args.threshold
                );
                println!("{:#?}", report.worst_params);
                Ok(1)
            } else {
                println!("within threshold {:.3e}", args.threshold);
                Ok(0)
            }
        }
        Command::PresetList => {
            for name in PRESET_NAMES {
                let p = preset(name).map_err(|e| e.to_string())?;
                let axes: Vec<String> = p
                    .grid
                    .axes
                    .iter()
                    .map(|a| format!("{} in [{}, {}] x{}", a.param, a.start, a.stop, a.count))
                    .collect();
                println!("{:6} {} — {}", p.name, p.description, axes.join(", "));
                for s in &p.ep_slices {
                    println!(
                        "       slice {}: {} in [{}, {}]",
                        s.name, s.slice.param, s.slice.start, s.slice.stop
                    );
                }
                for note in &p.inferred {
                    println!("       inferred: {note}");
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
