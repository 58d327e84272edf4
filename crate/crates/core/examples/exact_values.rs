//! Exact values of phi at a few dyadic points, plus theta and the level table.
//!
//!     cargo run --example exact_values

use fabius::dyadic_eval::level_table;
use fabius::numeric::{format_rational, Dyadic};
use fabius::{phi_exact, theta_exact};

fn main() {
    for s in ["0", "1/2", "-3/4", "31/32", "7/8", "12345/2^16"] {
        let t: Dyadic = s.parse().expect("valid dyadic");
        println!("phi({t}) = {}", format_rational(&phi_exact(&t)));
    }

    let t = Dyadic::new(3, 3);
    println!("theta({t}) = {}", format_rational(&theta_exact(&t)));

    let table = level_table(3);
    println!("level 3, common denominator {}", table.denominator);
    for q in 0..table.values.len() {
        println!("  q={q:<2} {}", table.scaled(q));
    }
}
