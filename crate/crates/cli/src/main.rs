use clap::Parser;

fn main() {
    qdict_cli::exit_on_error(qdict_cli::dispatch(qdict_cli::Cli::parse()));
}
