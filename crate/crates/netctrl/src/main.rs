use clap::Parser;

fn main() {
    let cli = netctrl::cli::Cli::parse();
    match netctrl::cli::run(&cli) {
        Ok(report) => println!("{report}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
