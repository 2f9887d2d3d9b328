use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ngi_core::sweep::{
    self, build_request, figure, figure_names, parse_config_text, render, write_table, Format,
    SpecSource, SweepRecord,
};
use ngi_core::{NgOperation, NgTmsv};

#[derive(Parser)]
#[command(
    name = "ngi",
    version,
    about = "Heralded non-Gaussian two-mode squeezed vacuum in a parity-detection interferometer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every reported quantity at a single point.
    Eval(EvalArgs),
    /// Evaluate one quantity over a (lambda, tau, phi) grid.
    Sweep(SweepArgs),
    /// Regenerate the data behind a named figure panel.
    Figure(FigureArgs),
}

#[derive(Args)]
struct OperationArgs {
    /// Named preset: tmsv or <asym|sym>-<ps|pa|pc>-<n>.
    #[arg(long, conflicts_with = "photons")]
    preset: Option<String>,
    /// Explicit photon numbers m1,m2,n1,n2.
    #[arg(long)]
    photons: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    op: OperationArgs,
    #[arg(long)]
    lambda: f64,
    /// Transmissivity t, or t1,t2 with --photons.
    #[arg(long)]
    tau: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    phi: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// probability, qfi, qcrb, parity, sensitivity, merit, weighted_merit or wigner.
    #[arg(long)]
    quantity: Option<String>,
    #[command(flatten)]
    op: OperationArgs,
    /// Value or start:stop:count.
    #[arg(long)]
    lambda: Option<String>,
    /// Value, start:stop:count, or t1,t2 with --photons.
    #[arg(long)]
    tau: Option<String>,
    /// Value or start:stop:count (default 0.01).
    #[arg(long)]
    phi: Option<String>,
    /// Phase-space point q1,p1,q2,p2 for wigner.
    #[arg(long)]
    point: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<String>,
    /// Exit successfully even when some points are degenerate or stationary.
    #[arg(long)]
    allow_partial: bool,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure panel, e.g. fig2a or fig8.
    #[arg(required_unless_present = "list")]
    name: Option<String>,
    /// Print the available figure names.
    #[arg(long)]
    list: bool,
    /// Only this curve (see --curves).
    #[arg(long)]
    curve: Option<String>,
    /// Print the curve labels of the figure.
    #[arg(long)]
    curves: bool,
    /// Directory for one file per curve; stdout when absent (single curve only).
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    allow_partial: bool,
}

fn operation(args: &OperationArgs, tau: Option<&str>) -> Result<NgOperation> {
    let spec = match (&args.preset, &args.photons) {
        (Some(p), None) => SpecSource::preset(p)?,
        (None, Some(ph)) => {
            let n: Vec<u32> = ph
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .with_context(|| format!("photons: cannot parse `{ph}`"))?;
            let [m1, m2, n1, n2] = n[..] else {
                bail!("photons: expected m1,m2,n1,n2, got `{ph}`");
            };
            let pair = match tau {
                Some(t) if t.contains(',') => {
                    let t: Vec<f64> = t
                        .split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<_, _>>()
                        .with_context(|| format!("tau: cannot parse `{t}`"))?;
                    let [t1, t2] = t[..] else {
                        bail!("tau: expected t1,t2");
                    };
                    Some((t1, t2))
                }
                _ => None,
            };
            SpecSource::Custom {
                m1,
                m2,
                n1,
                n2,
                tau: pair,
            }
        }
        _ => bail!("either --preset or --photons is required"),
    };
    let tau = match tau {
        Some(t) if !t.contains(',') => t
            .trim()
            .parse()
            .with_context(|| format!("tau: cannot parse `{t}`"))?,
        Some(_) => 1.0,
        None if spec.uses_tau_axis() => bail!("--tau is required for this operation"),
        None => 1.0,
    };
    Ok(spec.operation(tau)?)
}

fn eval(args: EvalArgs) -> Result<ExitCode> {
    let op = operation(&args.op, args.tau.as_deref())?;
    let state = NgTmsv::new(args.lambda, op)?;
    let report = state.report(args.phi)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn emit(records: &[SweepRecord], format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_table(records, format, p)?,
        None => {
            let text = render(records, format)?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn finish(records_ok: bool, allow_partial: bool) -> ExitCode {
    if records_ok {
        ExitCode::SUCCESS
    } else if allow_partial {
        eprintln!("warning: some grid points are degenerate or stationary");
        ExitCode::SUCCESS
    } else {
        eprintln!("error: some grid points are degenerate or stationary (use --allow-partial)");
        ExitCode::from(3)
    }
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            parse_config_text(&text)?
        }
        None => Vec::new(),
    };
    let flags: Vec<(String, String)> = [
        ("quantity", &args.quantity),
        ("preset", &args.op.preset),
        ("photons", &args.op.photons),
        ("lambda", &args.lambda),
        ("tau", &args.tau),
        ("phi", &args.phi),
        ("point", &args.point),
        ("format", &args.format),
        ("output", &args.output),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
    .collect();
    let req = build_request(&file, &flags)?;
    let records = sweep::run_sweep(&req)?;
    emit(&records, req.format, req.output.as_deref())?;
    Ok(finish(sweep::all_ok(&records), args.allow_partial))
}

fn run_figure(args: FigureArgs) -> Result<ExitCode> {
    if args.list {
        for name in figure_names() {
            let f = figure(&name)?;
            println!("{name}\t{}", f.description);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let name = args.name.as_deref().expect("clap requires a name");
    let preset = figure(name)?;
    if args.curves {
        for c in &preset.curves {
            println!("{}", c.label);
        }
        return Ok(ExitCode::SUCCESS);
    }
    let format: Format = args.format.parse()?;
    let curves: Vec<_> = match &args.curve {
        Some(label) => vec![preset
            .curve(label)
            .with_context(|| format!("{name} has no curve `{label}`"))?],
        None => preset.curves.iter().collect(),
    };
    let mut ok = true;
    match &args.output_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
            for c in curves {
                let records = sweep::run_sweep(&c.request)?;
                ok &= sweep::all_ok(&records);
                let path = dir.join(format!("{name}-{}.{}", c.label, format.extension()));
                emit(&records, format, Some(&path))?;
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let [c] = curves[..] else {
                bail!(
                    "{name} has {} curves; pick one with --curve or write them with --output-dir",
                    curves.len()
                );
            };
            let records = sweep::run_sweep(&c.request)?;
            ok = sweep::all_ok(&records);
            emit(&records, format, None)?;
        }
    }
    Ok(finish(ok, args.allow_partial))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = sweep::init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Figure(a) => run_figure(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
