use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhpush::suites::ToddSign;
use hhpush::Options;

#[derive(Parser)]
#[command(name = "hhpush", version, about = "Exact checks of the Hochschild pushforward along a divisor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a scene.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Compare both routes of the pushforward of the unit class on Y.
    Pushforward {
        #[command(flatten)]
        common: Common,
    },
    /// Windowed homology of the twisted de Rham complex and its companions.
    Homology {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Scene JSON file, or a built-in name (A1, A2, P1, A1C, A1T).
    #[arg(long)]
    scene: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hochschild truncation N (default: the scene's).
    #[arg(long)]
    trunc: Option<usize>,
    /// Homology window D (default: the scene's).
    #[arg(long)]
    window: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Sign of Td(-Y)^-1 in the Todd route.
    #[arg(long, value_enum, default_value = "plus")]
    todd_sign: ToddSign,
    /// Include suite timings (reports are then no longer byte-reproducible).
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn options(&self) -> Options {
        Options { scene: self.scene.clone(), seed: self.seed, trunc: self.trunc, window: self.window, todd: self.todd_sign, timings: self.timings }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Verify { common, suite } => (common, hhpush::verify(&common.options(), suite)),
        Command::Pushforward { common } => (common, hhpush::pushforward(&common.options())),
        Command::Homology { common } => (common, hhpush::homology(&common.options())),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {:#}", e);
            return ExitCode::from(2);
        }
    };
    let text = match common.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &common.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: writing {}: {}", path.display(), e);
                return ExitCode::from(2);
            }
        }
        None => print!("{}", text),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
