//! Derivatives at dyadic points and the Taylor polynomials they give.
//! At an odd q/2^n every derivative above order n vanishes.
//!
//!     cargo run --example derivatives_taylor

use fabius::numeric::{format_rational, Dyadic};
use fabius::{phi_derivative, taylor_at};

fn main() {
    let t = Dyadic::new(-1, 2);
    for k in 0..=5 {
        println!("phi^({k})({t}) = {}", format_rational(&phi_derivative(k, &t)));
    }

    let poly = taylor_at(&Dyadic::new(3, 3), 6);
    let coeffs: Vec<String> = poly.coeffs.iter().map(format_rational).collect();
    println!("Taylor at {}: [{}]", poly.center, coeffs.join(", "));
    println!("degree {:?}", poly.degree());
}
