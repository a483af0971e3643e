use clap::Parser;

fn main() {
    let args = qdict_cli::LinkerArgs::parse();
    qdict_cli::exit_on_error(qdict_cli::run_linker_cmd(&args));
}
