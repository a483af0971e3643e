use clap::Parser;

fn main() {
    let args = qdict_cli::ScoreArgs::parse();
    qdict_cli::exit_on_error(qdict_cli::run_score(&args).map(|line| println!("{line}")));
}
