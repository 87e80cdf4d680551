//! Kneading data along the robust family is not constant even though no
//! member has a periodic attractor.
//!
//!     cargo run --release --example kneading [PREFIX]

use robust_chaos::kneading::kneading_invariant;
use robust_chaos::robustfamily::{find_seed, kneading_varies, trace_curve, SeedBox, DEFAULT_SEED_GRID};

fn main() -> robust_chaos::Result<()> {
    let prefix = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let seed = find_seed(&SeedBox::default(), DEFAULT_SEED_GRID)?;
    let curve = trace_curve((seed.a, seed.b), 1e-3, 2000)?;

    for s in curve.samples.iter().step_by(curve.len() / 8 + 1) {
        println!("t = {:.3}  {}", s.t, kneading_invariant(&s.map(), prefix)?);
    }
    match kneading_varies(&curve, prefix) {
        Some(w) => {
            println!("first change between t = {} and t = {} at symbol {}", w.t1, w.t2, w.index);
            let at = |t: f64| curve.samples.iter().find(|s| s.t == t).map(|s| s.map());
            if let (Some(m1), Some(m2)) = (at(w.t1), at(w.t2)) {
                println!("  {}", kneading_invariant(&m1, w.index + 1)?);
                println!("  {}", kneading_invariant(&m2, w.index + 1)?);
            }
        }
        None => println!("kneading prefix of length {prefix} is constant along the curve"),
    }
    Ok(())
}
