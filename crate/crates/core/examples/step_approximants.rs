//! Piecewise constant approximants built from the polynomials p_n, and how
//! closely they track the exact values.
//!
//!     cargo run --example step_approximants

use fabius::approximants::{degree_g, poly_p, step_function};
use fabius::selftest::step_deviation;
use num_traits::ToPrimitive;

fn main() {
    let p3 = poly_p(3);
    let coeffs: Vec<String> = p3.coeffs().iter().map(|c| c.to_string()).collect();
    println!("p_3 = [{}], degree {}", coeffs.join(", "), degree_g(3));

    let s = step_function(3);
    println!("step function m=3, {} plateaus, integral {}", s.values().len(), s.integral());
    for row in s.csv_rows().iter().take(5) {
        println!("  {row}");
    }

    for m in 3..=8 {
        let dev = step_deviation(m).to_f64().unwrap_or(f64::NAN);
        println!("m={m} max deviation on q/32: {dev:.3e}");
    }
}
