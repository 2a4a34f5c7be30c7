use beable_lab::{run, Cli};
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    let json_only = cli.json;
    match run(&cli) {
        Ok(outcome) => {
            if json_only {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.report)
                        .expect("report serializes")
                );
            } else {
                print!("{}", outcome.human);
            }
            std::process::exit(outcome.exit);
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
