//! Period doubling in the logistic family, seen through the same scan used
//! for cubic families.
//!
//!     cargo run --release --example logistic_scan [GRID]

use std::f64::consts::LN_2;

use robust_chaos::attractors::{find_attractor_from, AttractorBudget};
use robust_chaos::scan::{hyperbolic_windows, lyapunov, scan_family, Family, ScanBudget};
use robust_chaos::QuadraticMap;

fn main() -> robust_chaos::Result<()> {
    let grid = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(401);
    let budget = AttractorBudget::default();

    for mu in [2.0, 3.2, 3.5, 3.83] {
        match find_attractor_from(&QuadraticMap::new(mu), 0.5, &budget)? {
            Some(orbit) => println!("mu = {mu}: period {} multiplier {:.12}", orbit.period, orbit.multiplier),
            None => println!("mu = {mu}: no attracting cycle"),
        }
    }
    println!("closed form at 3.2: {}", -3.2f64 * 3.2 + 2.0 * 3.2 + 4.0);

    let full = lyapunov(&QuadraticMap::new(4.0), 0.3, 1_000_000, 1000)?;
    println!("lyapunov at mu = 4: {:.5} (ln 2 = {:.5})", full.exponent, LN_2);

    let report = scan_family(&Family::Quadratic { mu0: 3.4, mu1: 4.0 }, grid, &ScanBudget::default())?;
    println!("mu in [3.4, 4]: {} of {} parameters hyperbolic", report.hyperbolic_count(), report.rows.len());
    for (t0, t1) in hyperbolic_windows(&report).into_iter().take(12) {
        println!("  window mu in [{:.4}, {:.4}]", 3.4 + 0.6 * t0, 3.4 + 0.6 * t1);
    }
    Ok(())
}
