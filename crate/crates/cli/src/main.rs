//! `skinforge`: detect skin masks, adjust skin tones, and dump pipeline
//! stages from image files.
//!
//! Exit status is 0 on success, 1 for usage errors, 2 for I/O or parse
//! errors. Set `SKINFORGE_LOG=error|info|debug` for diagnostics.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "skinforge", version, about = "Skin-tone detection and adjustment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the black/white skin mask of an image.
    Detect {
        #[command(flatten)]
        common: Common,
        /// Mask output (.ppm, .pgm or .png).
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Shift detected skin along the I and Q axes.
    Adjust {
        #[command(flatten)]
        common: Common,
        #[arg(long = "out")]
        output: PathBuf,
        /// I range, e.g. "-18%" or "q15:-5898".
        #[arg(long, allow_hyphen_values = true)]
        i_range: String,
        /// Q range, e.g. "10%" or "q15:3277".
        #[arg(long, allow_hyphen_values = true)]
        q_range: String,
        /// Also write the skin mask here.
        #[arg(long)]
        mask_out: Option<PathBuf>,
    },
    /// Dump every intermediate stage into a directory.
    Stages {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "0%")]
        i_range: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0%")]
        q_range: String,
    },
    /// Print the Q15 register value and bit pattern for a range.
    EncodeRange {
        /// "-18%" or "q15:-5898".
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long = "in")]
    input: PathBuf,
    /// Overrides the model's gradient_threshold.
    #[arg(long)]
    gradient_threshold: Option<f64>,
    /// Skin model in key=value form.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Engine::FullFrame)]
    engine: Engine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    FullFrame,
    Streaming,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SKINFORGE_LOG", "error"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skinforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
