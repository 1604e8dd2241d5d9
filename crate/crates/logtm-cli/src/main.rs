mod commands;
mod config;
mod opts;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use logtm::Error;
use serde_json::{Map, Value};

use opts::{Cli, Command, Format, HardyCommand};
use output::Table;

const EXIT_INVALID: u8 = 2;
const EXIT_FAILED: u8 = 3;

fn dispatch(cmd: &Command) -> logtm::Result<commands::Outcome> {
    match cmd {
        Command::Constants(o) => commands::constants(o),
        Command::Eval(o) => commands::eval(o),
        Command::Sharpness(o) => commands::sharpness(o),
        Command::TransportCheck(o) => commands::transport_check(o),
        Command::Hardy(HardyCommand::Decide(o)) => commands::hardy_decide(o),
        Command::Hardy(HardyCommand::Verify(o)) => commands::hardy_verify(o),
        Command::Hardy(HardyCommand::Batch(b)) => commands::hardy_batch(&b.file),
        Command::Embed(o) => commands::embed(o),
        Command::Maximize(o) => commands::maximize_cmd(o),
        Command::Admissible(o) => commands::admissible(o),
        Command::Smooth(o) => commands::smooth_cmd(o),
        Command::Concentration(o) => commands::concentration(o),
    }
}

fn header(name: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), "1".into());
    m.insert("command".into(), name.into());
    m
}

fn emit(o: &opts::Opts, text: &str) -> Result<(), String> {
    match &o.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn usage_error(name: &str, msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n\nFor more information, run `logtm {name} --help`.");
    ExitCode::from(EXIT_INVALID)
}

fn run() -> ExitCode {
    let args = match config::merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cmd = &cli.command;
    let o = cmd.opts();
    let name = cmd.name();

    let out = match dispatch(cmd) {
        Ok(out) => out,
        Err(Error::Invalid(msg)) => return usage_error(name, &msg),
        // failures the library reports as errors still produce a record
        Err(e @ (Error::Divergent(_) | Error::NotConverged(_))) => {
            let status = if matches!(e, Error::Divergent(_)) { "DIVERGENT" } else { "NON_CONVERGED" };
            let mut m = header(name);
            m.insert("status".into(), status.into());
            m.insert("message".into(), e.to_string().into());
            if let Err(err) = emit(o, &output::json(&Value::Object(m))) {
                return usage_error(name, &err);
            }
            eprintln!("{name}: {e}");
            return ExitCode::from(if o.strict { EXIT_FAILED } else { 0 });
        }
    };

    let format = o.format.unwrap_or(out.default_format);
    let text = match format {
        Format::Json => {
            let mut m = header(name);
            m.extend(out.fields.clone());
            output::json(&Value::Object(m))
        }
        Format::Csv => {
            let table = out.table.clone().unwrap_or_else(|| Table::from_scalars(&out.fields));
            match table.csv() {
                Ok(s) => s,
                Err(e) => return usage_error(name, &e.to_string()),
            }
        }
    };
    if let Err(e) = emit(o, &text) {
        return usage_error(name, &e);
    }
    for (path, render) in
        [(&o.plot, output::Series::data_file as fn(&output::Series) -> String), (&o.svg, output::Series::svg)]
    {
        let Some(path) = path else { continue };
        let Some(series) = &out.series else {
            return usage_error(name, &format!("{name} has no curve to plot"));
        };
        if let Err(e) = std::fs::write(path, render(series)) {
            return usage_error(name, &format!("cannot write {}: {e}", path.display()));
        }
    }
    match out.failure {
        Some(f) if o.strict => {
            eprintln!("{name}: {f}");
            ExitCode::from(EXIT_FAILED)
        }
        _ => ExitCode::SUCCESS,
    }
}

fn main() -> ExitCode {
    run()
}
