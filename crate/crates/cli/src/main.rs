use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rcm_cli::{parse_pairs, replay, run, CliError, Config};

#[derive(Parser)]
#[command(name = "rcm", version, about = "Random connection model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one realization and write an RCM1 snapshot.
    Sample(Flags),
    /// Largest-cluster fraction and degrees over an intensity sweep.
    Percolate(Flags),
    /// Random walks, resistances and escape checks from the Palm origin.
    Walk(Flags),
    /// Effective resistance from the origin to box boundaries.
    ResistanceProfile(Flags),
    /// Cut-set conductances of the projected graph.
    Cutsets(Flags),
    /// Coarse-grain into boxes and compare with a lattice model.
    Renormalize(Flags),
    /// Long-range site-bond percolation on the lattice.
    Lrp(Flags),
    /// Kernel integrals and truncation convergence.
    Integrals(Flags),
    /// Bisection for the intensity at a target largest-cluster fraction.
    Threshold(Flags),
    /// Re-run a manifest and verify every artifact hash.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Every flag maps to the config key of the same name.
#[derive(Args, Default)]
struct Flags {
    /// key=value file; flags given here win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long = "trunc-M")]
    trunc_m: Option<String>,
    #[arg(long = "blob-R")]
    blob_r: Option<String>,
    #[arg(long)]
    norm: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    #[arg(long)]
    rhos: Option<String>,
    #[arg(long)]
    half_width: Option<String>,
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long)]
    radii: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    side: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    truncation: Option<String>,
    #[arg(long)]
    target: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Result<Vec<(String, String)>, CliError> {
        let named = [
            ("seed", &self.seed),
            ("replicas", &self.replicas),
            ("out", &self.out),
            ("d", &self.d),
            ("kernel", &self.kernel),
            ("alpha", &self.alpha),
            ("trunc-M", &self.trunc_m),
            ("blob-R", &self.blob_r),
            ("norm", &self.norm),
            ("rho", &self.rho),
            ("rhos", &self.rhos),
            ("half-width", &self.half_width),
            ("boundary", &self.boundary),
            ("sampler", &self.sampler),
            ("radii", &self.radii),
            ("horizon", &self.horizon),
            ("epsilon", &self.epsilon),
            ("beta", &self.beta),
            ("side", &self.side),
            ("lambda", &self.lambda),
            ("mu", &self.mu),
            ("truncation", &self.truncation),
            ("target", &self.target),
        ];
        let mut out: Vec<(String, String)> =
            named.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got {s:?}")))?;
            out.push((k.to_string(), v.to_string()));
        }
        Ok(out)
    }
}

fn resolve(name: &str, flags: &Flags) -> Result<Config, CliError> {
    let file = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_pairs(&text)?
        }
        None => Vec::new(),
    };
    Config::resolve(name, &file, &flags.overrides()?)
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    let (name, flags) = match cli.command {
        Command::Replay { manifest, out } => {
            let report = replay(&manifest, out.as_deref())?;
            println!("replayed into {}", report.run.out_dir.display());
            if report.mismatches.is_empty() {
                println!("all {} artifacts identical", report.run.hashes.len());
                return Ok(());
            }
            return Err(CliError::Check(format!("artifacts differ: {}", report.mismatches.join(", "))));
        }
        Command::Sample(f) => ("sample", f),
        Command::Percolate(f) => ("percolate", f),
        Command::Walk(f) => ("walk", f),
        Command::ResistanceProfile(f) => ("resistance-profile", f),
        Command::Cutsets(f) => ("cutsets", f),
        Command::Renormalize(f) => ("renormalize", f),
        Command::Lrp(f) => ("lrp", f),
        Command::Integrals(f) => ("integrals", f),
        Command::Threshold(f) => ("threshold", f),
    };
    let cfg = resolve(name, &flags)?;
    let report = run(&cfg)?;
    for (artifact, hash) in &report.hashes {
        println!("{}/{artifact} {hash}", report.out_dir.display());
    }
    match report.check {
        Some((false, detail)) => Err(CliError::Check(detail)),
        Some((true, detail)) => {
            println!("check passed: {detail}");
            Ok(())
        }
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rcm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
