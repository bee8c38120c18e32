mod args;
mod commands;
mod output;

use std::process::ExitCode;

use bernbound::Error;
use clap::Parser;

use args::{Cli, Command};
use commands::Status;
use output::Format;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Domain(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bits = cli.precision_bits;
    if let Command::Verify(v) = &cli.command {
        if let Some(jobs) = v.jobs {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let (result, default_format) = match &cli.command {
        Command::Bound(a) => (commands::bound(a, bits), Format::Csv),
        Command::Tail(a) => (commands::tail(a, bits), Format::Csv),
        Command::Decompose(a) => (commands::decompose(a, bits), Format::Csv),
        Command::Table1(a) => (commands::table1(a, bits), Format::Csv),
        Command::Table2(a) => (commands::table2(a, bits), Format::Csv),
        Command::FigureData(a) => (commands::figure_data(a, bits), Format::Csv),
        Command::Verify(a) => (commands::verify(a, bits), Format::Json),
        Command::Samplesize(a) => (commands::samplesize(a, bits), Format::Csv),
    };
    match result {
        Ok((record, status)) => {
            if let Err(e) = record.emit(cli.format.unwrap_or(default_format), cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
            match status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Failed => ExitCode::from(EXIT_FAIL),
                Status::Inconclusive => ExitCode::from(EXIT_INCONCLUSIVE),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
