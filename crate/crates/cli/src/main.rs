mod cli;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde::Deserialize;
use vdclab::{Error, Result};

use cli::{Cli, Command};
use output::{render, Provenance, Report};

#[derive(Debug, Deserialize)]
struct ConfigEntry {
    command: String,
    #[serde(default)]
    args: Vec<String>,
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) | Error::Invariant(_) => 3,
        _ => 2,
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    match cli.command.as_ref().expect("checked by caller") {
        Command::Gen(a) => commands::gen(c, a),
        Command::Analyze(a) => commands::analyze(c, a),
        Command::Scan(a) => commands::scan(c, a),
        Command::Vdc(cmd) => commands::vdc_cmd(c, cmd),
        Command::Besicovitch(cmd) => commands::besicovitch_cmd(c, cmd),
        Command::Adele(cmd) => commands::adele_cmd(c, cmd),
        Command::Katai(cmd) => commands::katai_cmd(c, cmd),
        Command::Pet(cmd) => commands::pet_cmd(cmd),
        Command::Ramsey(cmd) => commands::ramsey_cmd(c, cmd),
    }
}

fn run_parsed(cli: &Cli, argv: &[String]) -> u8 {
    let result = match cli.common.threads {
        Some(0) => Err(Error::Argument("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Err(Error::Resource(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(cli),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return error_code(&e);
        }
    };
    let c = &cli.common;
    match &c.output {
        Some(path) => {
            let prov = Provenance { argv, seed: c.seed };
            let text = render(&report, c.format, Some(&prov));
            if let Err(e) = output::write_file(path, text.as_bytes()) {
                eprintln!("error: {e}");
                return error_code(&e);
            }
        }
        None => {
            let text = render(&report, c.format, None);
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
        }
    }
    if c.strict && report.verdict == Some(false) {
        1
    } else {
        0
    }
}

fn run_config(path: &std::path::Path, program: &str) -> u8 {
    let entries: Vec<ConfigEntry> = match output::read_file(path)
        .and_then(|s| serde_json::from_str(&s).map_err(|e| Error::Parse(format!("config: {e}"))))
    {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return error_code(&e);
        }
    };
    let mut worst = 0;
    for entry in entries {
        let mut argv = vec![program.to_string()];
        argv.extend(entry.command.split_whitespace().map(String::from));
        argv.extend(entry.args);
        let code = run(&argv);
        worst = worst.max(code);
    }
    worst
}

fn run(argv: &[String]) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(path) = &cli.common.config {
        if cli.command.is_some() {
            eprintln!("error: --config cannot be combined with a subcommand");
            return 2;
        }
        return run_config(path, &argv[0]);
    }
    if cli.command.is_none() {
        eprintln!("error: no command given (see --help)");
        return 2;
    }
    run_parsed(&cli, argv)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    ExitCode::from(run(&argv))
}
