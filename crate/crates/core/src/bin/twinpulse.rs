//! Command-line front end: rate tables, single points, sweeps, figure data and
//! the oracle comparison.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 physics-validity failure,
//! 3 oracle deviation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twinpulse::config::{parse_config_into, ConfigBuilder};
use twinpulse::model::{validate_regime, Verdict};
use twinpulse::oracle::{oracle_pipeline_with, OracleReport};
use twinpulse::protocol::{SecondPulse, Separation};
use twinpulse::report::{figure_summary, figure_tables, fmt_num, point_table, rates_table, sweep_table, Cell, Format, Table};
use twinpulse::sweep::{reproduce_figure, run_sweep, Policy, SweepBase, SweepParameter, SweepSpec};
use twinpulse::{derive_rates, ChiMode, Error, PhysicalParams, Timing, TmChoice};

#[derive(Parser, Debug)]
#[command(name = "twinpulse", version, about = "Entangled light pulses from a trapped atom in a cavity")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Parameter file (key = value, Hz and radians).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one parameter, same syntax as the file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// |Δ1| in Hz; combined with --delta1-sign.
    #[arg(long, global = true, value_name = "HZ")]
    delta1_magnitude: Option<f64>,
    #[arg(long, global = true, value_parser = ["negative", "positive"], default_value = "negative")]
    delta1_sign: String,
    #[arg(long, global = true, default_value = "csv")]
    format: Format,
    /// Output file; a directory for `figure`. Defaults to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Measurement window: `auto` or seconds.
    #[arg(long, global = true, default_value = "auto")]
    tm: TmChoice,
    /// Switch off optical loss, motional damping and heating.
    #[arg(long, global = true)]
    noiseless: bool,
    #[arg(long, global = true, default_value = "leading", value_parser = ["exact", "leading"])]
    chi: String,
    /// First-pulse length in seconds.
    #[arg(long, global = true, default_value_t = 40e-6)]
    t1: f64,
    /// Dark interval in seconds (overrides --separation-decays).
    #[arg(long, global = true)]
    separation: Option<f64>,
    /// Dark interval in cavity lifetimes 1/(κ+κ_L).
    #[arg(long, global = true, default_value_t = 2.0)]
    separation_decays: f64,
    /// Second-pulse length in seconds (overrides --ratio).
    #[arg(long, global = true)]
    second_pulse: Option<f64>,
    /// Second-pulse length over the optimal transfer time.
    #[arg(long, global = true, default_value_t = 1.0)]
    ratio: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived couplings, loss rates and shifts, with regime checks.
    Rates,
    /// One protocol run: entanglement report and output correlation matrix.
    Point,
    /// One-parameter sweep.
    Sweep(SweepArgs),
    /// Curve data for one of the reference figure families.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
        which: u8,
    },
    /// Compare the closed-form output matrix with direct moment integration.
    Oracle {
        #[arg(long, default_value_t = 1e-4)]
        threshold: f64,
        /// Negative control: flip the sign of the swap coupling in the oracle.
        #[arg(long, hide = true)]
        flip_drift_sign: bool,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// T1 | T_minus_T1 | T2_minus_T_ratio | kappa | kappa_h | Omega1 | eta
    #[arg(long)]
    parameter: SweepParameter,
    /// Start value (s, Hz, or dimensionless).
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 51)]
    steps: usize,
    /// fig3 | fig4 | fig5 | custom
    #[arg(long, default_value = "custom")]
    policy: Policy,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. } | Error::Io(_) | Error::InvalidParameter { .. } | Error::Schedule(_) => 1,
            Error::ZeroDetuning { .. }
            | Error::LambDicke(_)
            | Error::NoTransferOptimum { .. }
            | Error::OutputOverlap { .. }
            | Error::Integration(_) => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn load_params(g: &Global) -> Result<PhysicalParams, Failure> {
    let mut builder = ConfigBuilder::default();
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        parse_config_into(&text, &mut builder)?;
    }
    for kv in &g.overrides {
        let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        builder.set(k.trim(), v.trim()).map_err(usage)?;
    }
    if let Some(m) = g.delta1_magnitude {
        let sign = if g.delta1_sign == "negative" { -1.0 } else { 1.0 };
        builder.set("delta1", &(sign * m.abs()).to_string()).map_err(usage)?;
    }
    Ok(builder.build()?)
}

fn timing(g: &Global) -> Timing {
    Timing {
        t1: g.t1,
        separation: g.separation.map_or(Separation::CavityDecays(g.separation_decays), Separation::Seconds),
        second_pulse: g.second_pulse.map_or(SecondPulse::OptimalRatio(g.ratio), SecondPulse::Seconds),
    }
}

fn chi_mode(g: &Global) -> ChiMode {
    g.chi.parse().unwrap_or(ChiMode::Leading)
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_rates(g: &Global) -> Result<(), Failure> {
    let p = load_params(g)?;
    let mut rates = derive_rates(&p, chi_mode(g))?;
    if g.noiseless {
        rates = rates.noiseless();
    }
    let mut table = rates_table(&rates);
    let checks = validate_regime(&p, &rates, 0.0);
    for c in &checks {
        table.comments.push(format!("regime {}: ratio {} {:?}", c.name, fmt_num(c.ratio), c.verdict));
    }
    emit(g, &table.render(g.format))?;
    if let Some(c) = checks.iter().find(|c| c.verdict == Verdict::Fail) {
        return Err(Failure { code: 2, message: format!("regime check {} failed (ratio {:.3})", c.name, c.ratio) });
    }
    Ok(())
}

fn cmd_point(g: &Global) -> Result<(), Failure> {
    let p = load_params(g)?;
    let run = twinpulse::run_point(&p, chi_mode(g), g.noiseless, &timing(g), g.tm)?;
    emit(g, &point_table(&run).render(g.format))?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    if run.regime_failed() {
        return Err(Failure { code: 2, message: "regime check failed; see the report comments".into() });
    }
    Ok(())
}

fn cmd_sweep(g: &Global, a: &SweepArgs) -> Result<(), Failure> {
    let base = SweepBase { params: load_params(g)?, chi: chi_mode(g), noiseless: g.noiseless, timing: timing(g), tm: g.tm };
    let spec = SweepSpec { parameter: a.parameter, from: a.from, to: a.to, steps: a.steps, policy: a.policy };
    let rows = run_sweep(&base, &spec)?;
    let comments = vec![format!(
        "sweep {} from {} to {} in {} steps, policy {:?}",
        spec.parameter.column_name(),
        fmt_num(spec.from),
        fmt_num(spec.to),
        spec.steps,
        spec.policy
    )];
    emit(g, &sweep_table(spec.parameter.column_name(), &rows, comments).render(g.format))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_figure(g: &Global, which: u8) -> Result<(), Failure> {
    let base = SweepBase { params: load_params(g)?, chi: chi_mode(g), noiseless: false, timing: timing(g), tm: g.tm };
    let fig = reproduce_figure(which, &base)?;
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    let ext = match g.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for (stem, table) in figure_tables(&fig) {
        write_file(&dir.join(format!("{stem}.{ext}")), &table.render(g.format))?;
    }
    let summary = figure_summary(&fig).render(g.format);
    write_file(&dir.join(format!("fig{which}_summary.{ext}")), &summary)?;
    print!("{summary}");
    Ok(())
}

fn oracle_table(rep: &OracleReport, threshold: f64) -> Table {
    let mut rows = vec![
        vec![Cell::Text("max_rel_err".into()), Cell::Num(rep.max_rel_err)],
        vec![Cell::Text("worst_row".into()), Cell::Num((rep.worst.0 + 1) as f64)],
        vec![Cell::Text("worst_col".into()), Cell::Num((rep.worst.1 + 1) as f64)],
        vec![Cell::Text("intracavity_max_rel_err".into()), Cell::Num(rep.intracavity_max_rel_err)],
        vec![Cell::Text("commutator_defect".into()), Cell::Num(rep.commutator_defect)],
        vec![Cell::Text("output_commutator_defect".into()), Cell::Num(rep.output_commutator_defect)],
        vec![Cell::Text("aa_max".into()), Cell::Num(rep.aa_max)],
        vec![Cell::Text("threshold".into()), Cell::Num(threshold)],
    ];
    for (name, m) in [("analytic", &rep.analytic), ("numeric", &rep.numeric)] {
        for i in 0..4 {
            for j in 0..4 {
                rows.push(vec![Cell::Text(format!("{name}_{}{}", i + 1, j + 1)), Cell::Num(m.get(i, j))]);
            }
        }
    }
    Table {
        comments: vec!["closed-form output matrix against direct integration of the moment equations".into()],
        columns: vec!["quantity".into(), "value".into()],
        rows,
    }
}

fn cmd_oracle(g: &Global, threshold: f64, flip: bool) -> Result<(), Failure> {
    let p = load_params(g)?;
    let mut rates = derive_rates(&p, chi_mode(g))?;
    if g.noiseless {
        rates = rates.noiseless();
    }
    let (schedule, _) = timing(g).schedule(&rates)?;
    let window = twinpulse::output::choose_window(g.tm, &schedule, &rates)?;
    let rep = oracle_pipeline_with(&rates, &schedule, window.tm, |gens| {
        if flip {
            gens.pulse2.drift[(2, 0)] = -gens.pulse2.drift[(2, 0)];
            gens.pulse2.drift[(3, 1)] = -gens.pulse2.drift[(3, 1)];
        }
    })?;
    emit(g, &oracle_table(&rep, threshold).render(g.format))?;
    if !rep.passes(threshold) {
        let (i, j) = rep.worst;
        return Err(Failure {
            code: 3,
            message: format!(
                "oracle deviation {:.3e} exceeds {threshold:e} at element ({}, {}): analytic {} vs numeric {}",
                rep.max_rel_err,
                i + 1,
                j + 1,
                fmt_num(rep.analytic.get(i, j)),
                fmt_num(rep.numeric.get(i, j))
            ),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let g = &cli.global;
    let result = match &cli.command {
        Command::Rates => cmd_rates(g),
        Command::Point => cmd_point(g),
        Command::Sweep(a) => cmd_sweep(g, a),
        Command::Figure { which } => cmd_figure(g, *which),
        Command::Oracle { threshold, flip_drift_sign } => cmd_oracle(g, *threshold, *flip_drift_sign),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
