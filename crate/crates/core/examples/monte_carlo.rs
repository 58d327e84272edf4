//! phi on [-1, 0] is the distribution function of sum u_k 2^-k with u_k
//! uniform. Sampling that sum gives an independent check of the exact values.
//!
//!     cargo run --release --example monte_carlo

use fabius::numeric::Dyadic;
use fabius::phi_exact;
use fabius::stochastic::{mc_phi, McConfig};
use num_traits::ToPrimitive;

fn main() -> fabius::Result<()> {
    let cfg = McConfig::new(1_000_000, 7);
    for q in [-3i64, -2, -1] {
        let x = Dyadic::new(q, 2);
        let est = mc_phi(x.to_f64(), &cfg)?;
        let exact = phi_exact(&x).to_f64().unwrap_or(f64::NAN);
        println!(
            "x={:+.2} estimate {:.5} +- {:.5}  exact {:.5}",
            est.x, est.estimate, est.stderr, exact
        );
    }
    Ok(())
}
