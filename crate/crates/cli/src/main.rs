use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use purederive_cli::{run, CliError, Command, Format, HarnessConfig, Workspace};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

/// Pure homological algebra over Z and Z/m.
///
/// Commands: profile X | resolve X [projective|injective] | pext X Y I [projective|injective|both]
/// | ppd X | pid X | criteria X N SIDE | roof R | tower T | cocycle C | probe N
/// | verify {thm45|thm46|prop34|thm47|wellknown} | emit
#[derive(Parser, Debug)]
#[command(name = "purederive", version)]
struct Args {
    /// command and its arguments
    #[arg(required = true, num_args = 1..)]
    command: Vec<String>,
    /// workspace JSON file
    #[arg(long)]
    workspace: Option<PathBuf>,
    /// harness seed (overrides the workspace)
    #[arg(long)]
    seed: Option<u64>,
    /// random instances per harness suite
    #[arg(long)]
    count: Option<usize>,
    /// tower truncation depth
    #[arg(long)]
    depth: Option<usize>,
    /// maximum number of test modules
    #[arg(long = "family-cap")]
    family_cap: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

fn fail(e: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("purederive: {e}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let ws = match &args.workspace {
        Some(p) => match Workspace::load(p) {
            Ok(w) => Some(w),
            Err(e) => return fail(e, 2),
        },
        None => None,
    };
    if args.command == ["emit"] {
        return match &ws {
            Some(w) => {
                print!("{}", w.emit());
                ExitCode::SUCCESS
            }
            None => fail(CliError::Input("emit needs --workspace".into()), 2),
        };
    }
    let command = match Command::parse(&args.command) {
        Ok(c) => c,
        Err(e) => return fail(&e, e.exit_code() as u8),
    };
    let mut cfg = ws.as_ref().map_or_else(HarnessConfig::default, |w| w.harness);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.count = args.count.unwrap_or(cfg.count);
    cfg.depth = args.depth.unwrap_or(cfg.depth);
    cfg.family_cap = args.family_cap.unwrap_or(cfg.family_cap);
    if cfg.count == 0 || cfg.depth == 0 || cfg.family_cap == 0 {
        return fail(CliError::Input("count, depth and family cap must be positive".into()), 2);
    }
    let format = match args.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    match run(ws.as_ref(), &cfg, &command, &args.command) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => fail(&e, e.exit_code() as u8),
    }
}
