//! Finds a cubic whose second critical point lands on a repelling fixed point
//! after three steps, follows the curve of such cubics and checks each sample
//! for robust chaos. Writes the curve to `robust_curve.csv` in the working
//! directory.
//!
//!     cargo run --release --example robust_family

use std::fs::File;
use std::time::Instant;

use robust_chaos::attractors::AttractorBudget;
use robust_chaos::robustfamily::{find_seed, trace_curve, verify_robust, SeedBox, DEFAULT_SEED_GRID};

fn main() -> robust_chaos::Result<()> {
    let start = Instant::now();
    let seed = find_seed(&SeedBox::default(), DEFAULT_SEED_GRID)?;
    println!("seed a = {}, b = {}, residual {:e}", seed.a, seed.b, seed.residual);

    let curve = trace_curve((seed.a, seed.b), 1e-3, 2000)?;
    let (first, last) = (curve.samples[0], curve.samples[curve.len() - 1]);
    println!(
        "{} samples from ({:.4}, {:.4}) to ({:.4}, {:.4}); stopped by {:?}",
        curve.len(),
        first.a,
        first.b,
        last.a,
        last.b,
        curve.stops
    );
    curve.write_csv(File::create("robust_curve.csv")?)?;

    let cert = verify_robust(&curve, &AttractorBudget::default());
    println!("certificate overall = {} ({} failing samples)", cert.overall, cert.failing().count());
    for w in &cert.warnings {
        println!("warning: {w}");
    }
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
