use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use fflab_cli::{commands, error_exit_code, LabConfig};

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Parser)]
#[command(name = "fflab", about = "Exact checks for Khintchine-type approximation on affine hyperplanes over F_q((1/T))")]
struct Cli {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::COMMANDS))]
    command: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Adds wall time to the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let start = Instant::now();
    let result = LabConfig::load(&cli.config).and_then(|mut c| {
        if let Some(s) = cli.seed {
            c.seed = s;
        }
        let lab = c.validate()?;
        commands::run(&cli.command, &lab, c.seed)
    });
    let mut rep = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fflab: {e}");
            return ExitCode::from(error_exit_code(&e) as u8);
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    if cli.timing {
        rep.timing_ms = Some(ms);
    }
    let text = match cli.format {
        Format::Json => rep.to_json(),
        Format::Tsv => rep.to_tsv(),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("fflab: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("fflab {}: {} in {ms} ms", cli.command, if rep.pass { "PASS" } else { "FAIL" });
    ExitCode::from(rep.exit_code() as u8)
}
