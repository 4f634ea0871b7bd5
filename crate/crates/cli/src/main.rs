use clap::Parser;
use dirtyenc::args::Cli;

fn main() {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    if let Err(e) = dirtyenc::run(cli) {
        log::error!("{e}");
        std::process::exit(e.exit_code());
    }
}
