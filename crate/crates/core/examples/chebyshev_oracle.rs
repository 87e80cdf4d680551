//! The cubic with `(a, b) = (9, -24)` is conjugate to angle tripling through
//! `x = (1 - cos θ) / 2`, so everything about it is known in closed form.
//!
//!     cargo run --release --example chebyshev_oracle

use std::f64::consts::PI;

use robust_chaos::attractors::{fixed_points, TOL_NEUTRAL};
use robust_chaos::kneading::kneading_invariant;
use robust_chaos::scan::lyapunov;
use robust_chaos::{CubicMap, IntervalMap};

fn main() -> robust_chaos::Result<()> {
    let m = CubicMap::CHEBYSHEV;
    let crit = m.critical_points()?;
    println!("critical points: c1 = {}, c2 = {}", crit.c1, crit.c2);

    let worst = (0..100)
        .map(|k| {
            let theta = PI * k as f64 / 99.0;
            let x = (1.0 - theta.cos()) / 2.0;
            (m.eval(x) - (1.0 - (3.0 * theta).cos()) / 2.0).abs()
        })
        .fold(0.0, f64::max);
    println!("conjugacy defect over 100 angles: {worst:e}");

    for fp in fixed_points(&m, TOL_NEUTRAL)? {
        println!("fixed point {:<4} multiplier {:>3} ({:?})", fp.point, fp.multiplier, fp.class);
    }

    let est = lyapunov(&m, 0.1234, 1_000_000, 1000)?;
    println!("lyapunov exponent {:.6} (ln 3 = {:.6})", est.exponent, 3f64.ln());
    println!("kneading invariant {}", kneading_invariant(&m, 12)?);
    Ok(())
}
