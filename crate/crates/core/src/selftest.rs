//! The acceptance checks, runnable from the library, the `selftest`
//! subcommand and the `acceptance` test target.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::approximants::{poly_p, restricted_partitions, step_function};
use crate::cli::table_lines;
use crate::coefficients::{compute_c, compute_d, extract_f, phi_near_one, phi_near_one_odd_closed_form};
use crate::dyadic_eval::{phi_derivative, phi_exact, phi_exact_raw};
use crate::numeric::{choose2, pow2, thue_morse_sign, BigRational, Dyadic};
use crate::spectral::{fourier_coefficients, partition_of_unity, phi_fourier, poisson_check};
use crate::stochastic::{mc_phi, mc_phi_sequential, McConfig};

/// The level 5 table, one `q<TAB>D*phi<TAB>phi` row per line.
pub const GOLDEN_TABLE_N5: &str = include_str!("../fixtures/table_n5.golden");

pub const SPECTRAL_TOL: f64 = 1e-10;
pub const PARTITION_TOL: f64 = 1e-9;
pub const POISSON_TOL: f64 = 1e-8;
pub const MC_SIGMAS: f64 = 4.0;
pub const MC_SAMPLES: u64 = 1_000_000;
pub const MC_DEPTH: u32 = 40;
pub const MC_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {} ({:.3}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn timed(id: u32, name: &'static str, budget: Option<Duration>, check: impl FnOnce() -> (bool, String)) -> CriterionReport {
    let start = Instant::now();
    let (ok, mut detail) = check();
    let elapsed = start.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    if !in_budget {
        detail.push_str(&format!("; over time budget {:?}", budget.unwrap_or_default()));
    }
    CriterionReport {
        id,
        name,
        passed: ok && in_budget,
        detail,
        elapsed,
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Criterion 1: `table 5` reproduces the published level 5 table byte for byte.
pub fn golden_table() -> CriterionReport {
    timed(1, "golden table n=5", Some(Duration::from_secs(1)), || {
        let (den, lines) = table_lines(5);
        let mut rendered = lines.join("\n");
        rendered.push('\n');
        let same = rendered == GOLDEN_TABLE_N5;
        let den_ok = den == BigInt::from(33_177_600u64) && den == pow2(14) * 81 * 25;
        (same && den_ok, format!("D = {den}, byte-identical = {same}"))
    })
}

/// Criterion 2: `F_0..F_4 = 1, 1, 19, 2915, 2788989`.
pub fn f_integers() -> CriterionReport {
    timed(2, "F_k integers", Some(Duration::from_millis(100)), || match extract_f(&compute_c(4)) {
        Ok(f) => {
            let expected: Vec<BigInt> = [1i64, 1, 19, 2915, 2_788_989].iter().map(|&x| x.into()).collect();
            let text: Vec<String> = f.iter().map(|x| x.to_string()).collect();
            (f == expected, text.join(" "))
        }
        Err(e) => (false, e.to_string()),
    })
}

/// Criterion 3: `phi'(t) = 2 (phi(2t+1) - phi(2t-1))` exactly on `q/2^6`.
pub fn functional_equation() -> CriterionReport {
    timed(3, "functional equation on q/2^6", None, || {
        let one = Dyadic::one();
        let mut failures = Vec::new();
        for q in -64i64..=64 {
            let t = Dyadic::new(q, 6);
            let two_t = t.shl(1);
            let lhs = phi_derivative(1, &t);
            let rhs = (phi_exact(&(&two_t + &one)) - phi_exact(&(&two_t - &one))) * rat(2);
            if lhs != rhs {
                failures.push(t.to_string());
            }
        }
        (failures.is_empty(), format!("129 points, {} mismatches {:?}", failures.len(), failures))
    })
}

/// Criterion 4: Reflection `phi(t) + phi(t-1) = 1` and evenness on `q/2^10`, each
/// side of the identity computed through a different route.
pub fn reflection_and_evenness() -> CriterionReport {
    timed(4, "reflection and evenness on q/2^10", None, || {
        let one = Dyadic::one();
        let mut bad_reflection = 0;
        let mut bad_evenness = 0;
        for q in 0i64..=1024 {
            let t = Dyadic::new(q, 10);
            let value = phi_exact(&t);
            let shifted = phi_exact_raw(&(&t - &one)).expect("level 10 is within the raw limit");
            if &value + &shifted != BigRational::one() {
                bad_reflection += 1;
            }
            let mirrored = phi_exact_raw(&(-&t)).expect("level 10 is within the raw limit");
            if value != mirrored {
                bad_evenness += 1;
            }
        }
        (
            bad_reflection == 0 && bad_evenness == 0,
            format!("1025 points, reflection failures {bad_reflection}, evenness failures {bad_evenness}"),
        )
    })
}

/// Criterion 5: Even moments through `d` equal `c_m / 2`; `phi(7/8) = 1/288` by both routes.
pub fn moment_routes() -> CriterionReport {
    timed(5, "moment route equality", None, || {
        let c = compute_c(5);
        let d = compute_d(11);
        let mut ok = true;
        for n in (0..=10).step_by(2) {
            let via_d = &d[n + 1] / rat(n as i64 + 1);
            let via_c = &c[n / 2] / rat(2);
            ok &= via_d == via_c;
        }
        let f = extract_f(&c).unwrap_or_default();
        let via_moment = phi_near_one(3).unwrap_or_default();
        let via_f = f.get(1).map(|f1| phi_near_one_odd_closed_form(1, f1)).unwrap_or_default();
        let expected = BigRational::new(1.into(), 288.into());
        let table = rat(115_200) / rat(33_177_600);
        ok &= via_moment == expected && via_f == expected && table == expected;
        (ok, format!("phi(7/8): moments {via_moment}, closed form {via_f}"))
    })
}

/// Criterion 6: For odd `q`, `phi^(k)(q/2^n) = 0` for `n < k <= n+10` and `phi^(n)(q/2^n) = +-2^{C(n+1,2)}`.
pub fn derivative_cascade() -> CriterionReport {
    timed(6, "derivative cascade", None, || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for n in 1..=6u64 {
            let lim = 1i64 << n;
            let top = BigRational::from_integer(pow2(choose2(n + 1)));
            for q in (-lim + 1..lim).step_by(2) {
                let t = Dyadic::new(q, n);
                let lead = phi_derivative(n, &t);
                if lead.abs() != top {
                    failures.push(format!("phi^({n})({t}) = {lead}"));
                }
                for k in n + 1..=n + 10 {
                    if !phi_derivative(k, &t).is_zero() {
                        failures.push(format!("phi^({k})({t}) != 0"));
                    }
                }
                checked += 1;
            }
        }
        (failures.is_empty(), format!("{checked} centers, failures {failures:?}"))
    })
}

/// Criterion 7: The cosine series (K = 64, m_max = 60) matches exact values on `q/2^5`
/// to 1e-10 and its first 16 coefficients carry Thue-Morse signs.
pub fn spectral_agreement() -> CriterionReport {
    timed(7, "spectral agreement", None, || {
        let fc = fourier_coefficients(64, 60);
        let mut worst = 0.0f64;
        for q in -32i64..=32 {
            let t = Dyadic::new(q, 5);
            let exact = phi_exact(&t).to_f64().unwrap_or(f64::NAN);
            worst = worst.max((phi_fourier(t.to_f64(), &fc) - exact).abs());
        }
        let signs_ok = (0..16).all(|k| fc.a[k].signum() as i32 == thue_morse_sign(k as u64));
        (
            worst <= SPECTRAL_TOL && signs_ok,
            format!("max abs error {worst:.3e}, Thue-Morse signs {signs_ok}"),
        )
    })
}

/// Max over `q/2^5` of `|phi_m(t) - phi(t)|`, with `phi_m` averaged at plateau edges.
pub fn step_deviation(m: usize) -> BigRational {
    let s = step_function(m);
    (-32i64..=32)
        .map(|q| {
            let t = Dyadic::new(q, 5);
            (s.eval_normalized(&t) - phi_exact(&t)).abs()
        })
        .max()
        .unwrap_or_default()
}

/// Criterion 8: Step functions for m = 3..8: unimodal, integral one, deviation
/// non-increasing; `p_n` coefficients equal restricted partition counts for n <= 5.
pub fn step_convergence() -> CriterionReport {
    timed(8, "step function convergence", None, || {
        let mut ok = true;
        let mut devs = Vec::new();
        for m in 3..=8 {
            let s = step_function(m);
            ok &= s.is_unimodal() && s.integral() == BigRational::one();
            devs.push(step_deviation(m));
        }
        let monotone = devs.windows(2).all(|w| w[1] <= w[0]);
        let partitions = (0..=5).all(|n| {
            let p = poly_p(n);
            (0..=p.degree()).all(|r| p.coeff(r) == restricted_partitions(n, r))
        });
        let shown: Vec<String> = devs.iter().map(|d| format!("{:.3e}", d.to_f64().unwrap_or(f64::NAN))).collect();
        (
            ok && monotone && partitions,
            format!("deviations m=3..8 {shown:?}, monotone {monotone}, partitions {partitions}"),
        )
    })
}

/// Criterion 9: Monte Carlo estimates within 4 standard errors of the exact values,
/// bit-reproducible across parallel and sequential runs.
pub fn monte_carlo() -> CriterionReport {
    timed(9, "Monte Carlo oracle", Some(Duration::from_secs(30)), || {
        let cfg = McConfig {
            depth: MC_DEPTH,
            ..McConfig::new(MC_SAMPLES, MC_SEED)
        };
        let mut ok = true;
        let mut reproducible = true;
        let mut parts = Vec::new();
        for q in [-3i64, -2, -1] {
            let t = Dyadic::new(q, 2);
            let exact = phi_exact(&t).to_f64().unwrap_or(f64::NAN);
            match (mc_phi(t.to_f64(), &cfg), mc_phi_sequential(t.to_f64(), &cfg)) {
                (Ok(est), Ok(replay)) => {
                    let dev = (est.estimate - exact).abs();
                    ok &= dev <= MC_SIGMAS * est.stderr;
                    reproducible &= est == replay;
                    parts.push(format!("x={} est={:.5} exact={:.5} z={:.2}", t.to_f64(), est.estimate, exact, dev / est.stderr));
                }
                (Err(e), _) | (_, Err(e)) => {
                    ok = false;
                    parts.push(e.to_string());
                }
            }
        }
        (ok && reproducible, format!("{}; reproducible {reproducible}", parts.join(", ")))
    })
}

/// Sample points for the partition of unity check.
pub fn partition_sample_points() -> Vec<f64> {
    (0..20).map(|i| -0.95 + 0.1 * i as f64 + 0.0123).collect()
}

/// Criterion 10: `sum_k phi(t + k/n) = n` for n = 1, 2, 3 and the two-sided Poisson check at a = 1/2, 3/4, 1.
pub fn poisson_identities() -> CriterionReport {
    timed(10, "Poisson and partition identities", None, || {
        let fc = fourier_coefficients(64, 60);
        let mut worst_partition = 0.0f64;
        for n in 1..=3u32 {
            for t in partition_sample_points() {
                worst_partition = worst_partition.max((partition_of_unity(t, n, &fc) - n as f64).abs());
            }
        }
        let mut worst_poisson = 0.0f64;
        for q in [2i64, 3, 4] {
            let a = Dyadic::new(q, 2);
            let exact = phi_exact(&a);
            let check = poisson_check(a.to_f64(), Some(&exact), &fc, 60);
            worst_poisson = worst_poisson.max(check.gap());
        }
        (
            worst_partition <= PARTITION_TOL && worst_poisson <= POISSON_TOL,
            format!("partition max err {worst_partition:.3e}, Poisson max gap {worst_poisson:.3e}"),
        )
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        golden_table(),
        f_integers(),
        functional_equation(),
        reflection_and_evenness(),
        moment_routes(),
        derivative_cascade(),
        spectral_agreement(),
        step_convergence(),
        monte_carlo(),
        poisson_identities(),
    ]
}
