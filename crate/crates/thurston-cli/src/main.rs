use clap::Parser;

use thurston_cli::commands::{run, Cli};

fn main() {
    let o = run(Cli::parse());
    print!("{}", o.out);
    std::process::exit(o.code);
}
