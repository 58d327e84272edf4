//! Drives the command line front end in-process: prints the level 5 table
//! and replays the acceptance checks.
//!
//!     cargo run --example golden_table

use fabius::cli::run;

fn main() {
    let table = run(["fabius", "table", "5"]);
    print!("{}", table.stdout);

    let check = run(["fabius", "selftest"]);
    print!("{}", check.stdout);
    std::process::exit(check.code);
}
