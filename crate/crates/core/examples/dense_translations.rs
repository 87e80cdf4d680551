//! Translating a segment through a lattice of small balls: most random
//! translations leave a parameter set that is delta-dense, a covering ball
//! leaves none.
//!
//!     cargo run --release --example dense_translations

use robust_chaos::baire::{f_alpha, search_alpha, success_rate, OpenDenseTestSet, SampledCurve};

const LATTICE: &str = include_str!("../data/obstacles_default.json");
const COVERING: &str = include_str!("../data/obstacles_covering.json");

fn main() -> robust_chaos::Result<()> {
    let curve = SampledCurve::segment(&[0.0, 0.0], &[1.0, 0.0], 201)?;
    let lattice = OpenDenseTestSet::from_json(LATTICE, Some(2))?;
    let delta = 0.05;

    let untranslated = f_alpha(&curve, &lattice, &[0.0, 0.0])?;
    println!("alpha = 0 keeps {} of {} points", untranslated.len(), curve.len());

    match search_alpha(&curve, &lattice, delta, 10_000, 0.25, 0)? {
        Some(hit) => println!(
            "alpha = {:?} after {} trials, {:.3} of the curve kept",
            hit.alpha, hit.trials_used, hit.accepted_fraction
        ),
        None => println!("no translation found"),
    }
    let rate = success_rate(&curve, &lattice, delta, 2000, 0.25, 0)?;
    println!("fraction of good translations: {rate:.3}");

    let covering = OpenDenseTestSet::from_json(COVERING, Some(2))?;
    println!("covering ball: {:?}", search_alpha(&curve, &covering, delta, 1000, 0.25, 0)?);
    Ok(())
}
