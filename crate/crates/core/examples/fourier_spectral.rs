//! The Fourier transform as an infinite cosine product, the cosine series
//! for phi, and the partition of unity it satisfies.
//!
//!     cargo run --example fourier_spectral

use fabius::numeric::Dyadic;
use fabius::phi_exact;
use fabius::spectral::{fourier_coefficients, partition_of_unity, phi_fourier, phi_hat, DEFAULT_K, DEFAULT_M_MAX};
use num_traits::ToPrimitive;

fn main() {
    for x in [0.0, 0.5, 1.0, 2.5] {
        println!("phi_hat({x}) = {:.12e}", phi_hat(x));
    }

    let fc = fourier_coefficients(DEFAULT_K, DEFAULT_M_MAX);
    let head: Vec<String> = fc.a.iter().take(8).map(|a| format!("{a:+.3e}")).collect();
    println!("a_k: {}", head.join(" "));
    println!("Thue-Morse sign violations in the first 16: {:?}", fc.sign_violations().iter().filter(|&&k| k < 16).collect::<Vec<_>>());

    for q in [0i64, 5, 16, 27] {
        let t = Dyadic::new(q, 5);
        let exact = phi_exact(&t).to_f64().unwrap_or(f64::NAN);
        println!("t={t}: series {:.15} exact {:.15}", phi_fourier(t.to_f64(), &fc), exact);
    }

    for n in 1..=3 {
        println!("sum_k phi(0.3 + k/{n}) = {:.15}", partition_of_unity(0.3, n, &fc));
    }
}
