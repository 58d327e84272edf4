//! The rational coefficient sequences, their integer normalizations, and
//! the values near t = 1 they determine.
//!
//!     cargo run --example coefficient_tables

use fabius::numeric::format_rational;
use fabius::CoefficientTable;

fn main() -> fabius::Result<()> {
    let table = CoefficientTable::new(6)?;
    assert!(table.verify());

    for (k, (c, f)) in table.c().iter().zip(table.f()).enumerate() {
        println!("c_{k} = {:<24} F_{k} = {f}", format_rational(c));
    }
    for (n, (d, g)) in table.d().iter().zip(table.g()).enumerate().take(8) {
        println!("d_{n} = {:<24} G_{n} = {g}", format_rational(d));
    }
    for n in 1..=6 {
        if let Some(v) = table.phi_near_one(n) {
            println!("phi(1 - 2^-{n}) = {}", format_rational(v));
        }
    }
    Ok(())
}
