//! Pushes the robust curve off itself along its normal. Hyperbolic windows
//! open up immediately, while the curve itself has none.
//!
//!     cargo run --release --example perturbation [GRID]

use robust_chaos::robustfamily::{find_seed, trace_curve, SeedBox, DEFAULT_SEED_GRID};
use robust_chaos::scan::{hyperbolic_windows, perturb_and_scan, ScanBudget};

fn main() -> robust_chaos::Result<()> {
    let grid = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(201);
    let seed = find_seed(&SeedBox::default(), DEFAULT_SEED_GRID)?;
    let curve = trace_curve((seed.a, seed.b), 1e-3, 2000)?;
    let budget = ScanBudget::default();

    for eps in [0.0, 1e-3, -1e-3, 1e-2, -1e-2] {
        let report = perturb_and_scan(&curve, eps, grid, &budget)?;
        println!("eps = {eps:+e}: {} hyperbolic of {}", report.hyperbolic_count(), report.rows.len());
        for row in report.rows.iter().filter(|r| r.hyperbolic).take(3) {
            println!(
                "  t = {:.3}  period {:?}  multiplier {:?}",
                row.t, row.attractor_period, row.multiplier
            );
        }
        println!("  windows {:?}", hyperbolic_windows(&report));
    }
    Ok(())
}
