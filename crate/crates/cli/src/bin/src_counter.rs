use clap::Parser;

fn main() {
    let args = qdict_cli::CounterArgs::parse();
    qdict_cli::exit_on_error(qdict_cli::run_counter(&args));
}
