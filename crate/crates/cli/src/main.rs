use clap::Parser;
use thermolab_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    match thermolab_cli::run(&cli) {
        Ok(manifest) => {
            for o in &manifest.outputs {
                println!("{}  {}", o.sha256, o.file);
            }
        }
        Err(e) => {
            eprintln!("thermolab: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
