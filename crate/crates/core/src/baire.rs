//! Translating a sampled curve into an open dense set. For a curve `c`
//! in `R^n` and an open dense set `X`, look for `alpha` such that
//! `F_alpha = { t : c(t) + alpha in X }` is `delta`-dense in `[0, 1]`.
//!
//! `X` is the complement of finitely many closed balls, so membership is
//! exact. Only individual members of the good set of translations are
//! certified; its density is not numerically checkable.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points of a curve on the uniform grid `t_i = i / (len - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    dimension: usize,
    points: Vec<Vec<f64>>,
}

impl SampledCurve {
    pub fn new(points: Vec<Vec<f64>>) -> Result<SampledCurve> {
        let dimension = points.first().map(Vec::len).unwrap_or(0);
        if points.is_empty() || dimension == 0 {
            return Err(Error::InvalidArgument("sampled curve needs at least one point".into()));
        }
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, actual: p.len() });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument("curve points must be finite".into()));
            }
        }
        Ok(SampledCurve { dimension, points })
    }

    /// `len` uniform samples of the segment from `start` to `end`.
    pub fn segment(start: &[f64], end: &[f64], len: usize) -> Result<SampledCurve> {
        if start.len() != end.len() {
            return Err(Error::DimensionMismatch { expected: start.len(), actual: end.len() });
        }
        if len < 2 {
            return Err(Error::InvalidGrid(len));
        }
        let points = (0..len)
            .map(|i| {
                let s = i as f64 / (len - 1) as f64;
                start.iter().zip(end).map(|(a, b)| a + s * (b - a)).collect()
            })
            .collect();
        SampledCurve::new(points)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.points.len();
        if n == 1 {
            return vec![0.0];
        }
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }

    pub fn translated(&self, alpha: &[f64]) -> Result<SampledCurve> {
        check_dim(self.dimension, alpha.len())?;
        let points = self.points.iter().map(|p| p.iter().zip(alpha).map(|(x, a)| x + a).collect()).collect();
        Ok(SampledCurve { dimension: self.dimension, points })
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstacle {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Obstacle {
    /// Closed-ball membership: distance `<= radius`.
    pub fn contains(&self, x: &[f64]) -> bool {
        let d2: f64 = self.center.iter().zip(x).map(|(c, y)| (c - y) * (c - y)).sum();
        d2.sqrt() <= self.radius
    }
}

/// `R^n` minus a finite union of closed balls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenDenseTestSet {
    dimension: usize,
    obstacles: Vec<Obstacle>,
}

impl OpenDenseTestSet {
    pub fn new(dimension: usize, obstacles: Vec<Obstacle>) -> Result<OpenDenseTestSet> {
        for o in &obstacles {
            check_dim(dimension, o.center.len())?;
            if !(o.radius > 0.0) || !o.radius.is_finite() {
                return Err(Error::InvalidArgument(format!("obstacle radius {} must be positive", o.radius)));
            }
        }
        Ok(OpenDenseTestSet { dimension, obstacles })
    }

    /// Reads a JSON array of `{center: [...], radius}` records. The dimension
    /// is taken from the first record; an empty array needs `dimension`.
    pub fn from_json(text: &str, dimension: Option<usize>) -> Result<OpenDenseTestSet> {
        let obstacles: Vec<Obstacle> = serde_json::from_str(text)?;
        let dim = match (obstacles.first(), dimension) {
            (Some(o), Some(d)) => {
                check_dim(d, o.center.len())?;
                d
            }
            (Some(o), None) => o.center.len(),
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::InvalidArgument("empty obstacle list needs a dimension".into()))
            }
        };
        OpenDenseTestSet::new(dim, obstacles)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn without(&self, index: usize) -> OpenDenseTestSet {
        let mut obstacles = self.obstacles.clone();
        obstacles.remove(index);
        OpenDenseTestSet { dimension: self.dimension, obstacles }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        !self.obstacles.iter().any(|o| o.contains(x))
    }
}

/// Grid indices `i` with `c(t_i) + alpha` in `X`.
pub fn f_alpha(curve: &SampledCurve, set: &OpenDenseTestSet, alpha: &[f64]) -> Result<BTreeSet<usize>> {
    check_dim(curve.dimension, set.dimension)?;
    check_dim(curve.dimension, alpha.len())?;
    let mut shifted = vec![0.0; curve.dimension];
    Ok(curve
        .points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            for (s, (x, a)) in shifted.iter_mut().zip(p.iter().zip(alpha)) {
                *s = x + a;
            }
            set.contains(&shifted).then_some(i)
        })
        .collect())
}

/// True iff every grid parameter has an accepted parameter closer than
/// `delta`.
pub fn is_delta_dense(indices: &BTreeSet<usize>, t_grid: &[f64], delta: f64) -> Result<bool> {
    let spacing = if t_grid.len() > 1 { t_grid[1] - t_grid[0] } else { 0.0 };
    if !(delta > spacing) {
        return Err(Error::DeltaTooSmall { delta, spacing });
    }
    if indices.is_empty() {
        return Ok(false);
    }
    let accepted: Vec<f64> = indices.iter().filter_map(|&i| t_grid.get(i).copied()).collect();
    Ok(t_grid.iter().all(|&t| {
        let pos = accepted.partition_point(|&s| s < t);
        let right = accepted.get(pos).map(|s| s - t);
        let left = pos.checked_sub(1).map(|j| t - accepted[j]);
        right.into_iter().chain(left).any(|d| d < delta)
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSearch {
    pub alpha: Vec<f64>,
    pub delta: f64,
    pub accepted_fraction: f64,
    /// 1-based index of the successful trial.
    pub trials_used: usize,
}

/// Per-trial generator: trial `i` of run `seed` always draws the same
/// `alpha`, whatever the thread count.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Uniform sample from the closed ball of `radius` about the origin.
pub fn sample_in_ball(rng: &mut impl Rng, dimension: usize, radius: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..dimension).map(|_| rng.sample(StandardNormal)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = radius * rng.gen::<f64>().powf(1.0 / dimension as f64);
    if norm == 0.0 {
        return vec![0.0; dimension];
    }
    dir.into_iter().map(|x| x / norm * r).collect()
}

/// Rejection sampling for a translation whose `F_alpha` is `delta`-dense.
/// Returns the lowest-index successful trial.
pub fn search_alpha(
    curve: &SampledCurve,
    set: &OpenDenseTestSet,
    delta: f64,
    trials: usize,
    radius: f64,
    rng_seed: u64,
) -> Result<Option<AlphaSearch>> {
    check_dim(curve.dimension, set.dimension)?;
    let t_grid = curve.t_grid();
    // surface DeltaTooSmall before sampling
    is_delta_dense(&BTreeSet::new(), &t_grid, delta)?;
    let found = (0..trials).into_par_iter().find_map_first(|trial| {
        let alpha = sample_in_ball(&mut trial_rng(rng_seed, trial), curve.dimension, radius);
        let accepted = f_alpha(curve, set, &alpha).ok()?;
        is_delta_dense(&accepted, &t_grid, delta).ok()?.then(|| AlphaSearch {
            accepted_fraction: accepted.len() as f64 / t_grid.len() as f64,
            alpha,
            delta,
            trials_used: trial + 1,
        })
    });
    Ok(found)
}

/// Fraction of `trials` sampled translations that succeed; used to report
/// how common good translations are.
pub fn success_rate(
    curve: &SampledCurve,
    set: &OpenDenseTestSet,
    delta: f64,
    trials: usize,
    radius: f64,
    rng_seed: u64,
) -> Result<f64> {
    check_dim(curve.dimension, set.dimension)?;
    let t_grid = curve.t_grid();
    is_delta_dense(&BTreeSet::new(), &t_grid, delta)?;
    let hits = (0..trials)
        .into_par_iter()
        .filter(|&trial| {
            let alpha = sample_in_ball(&mut trial_rng(rng_seed, trial), curve.dimension, radius);
            f_alpha(curve, set, &alpha)
                .ok()
                .and_then(|acc| is_delta_dense(&acc, &t_grid, delta).ok())
                .unwrap_or(false)
        })
        .count();
    Ok(hits as f64 / trials.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_segment() -> SampledCurve {
        SampledCurve::segment(&[0.0, 0.0], &[1.0, 0.0], 101).unwrap()
    }

    #[test]
    fn no_obstacles_accepts_everything() {
        let curve = unit_segment();
        let set = OpenDenseTestSet::new(2, vec![]).unwrap();
        let acc = f_alpha(&curve, &set, &[0.3, -0.7]).unwrap();
        assert_eq!(acc.len(), curve.len());
        let found = search_alpha(&curve, &set, 0.05, 10, 1.0, 0).unwrap().unwrap();
        assert_eq!(found.trials_used, 1);
        assert_eq!(found.accepted_fraction, 1.0);
    }

    #[test]
    fn constant_curve_inside_obstacle() {
        let curve = SampledCurve::new(vec![vec![0.0, 0.0]; 20]).unwrap();
        let alpha = [0.4, 0.1];
        let set = OpenDenseTestSet::new(2, vec![Obstacle { center: vec![0.4, 0.1], radius: 0.01 }]).unwrap();
        assert!(f_alpha(&curve, &set, &alpha).unwrap().is_empty());
    }

    #[test]
    fn segment_against_unit_ball_matches_geometry() {
        // c(t) = (4t - 2, 0), ball of radius 1 centred at its midpoint + alpha
        let curve = SampledCurve::segment(&[-2.0, 0.0], &[2.0, 0.0], 401).unwrap();
        let alpha = [0.3, 0.2];
        let set = OpenDenseTestSet::new(2, vec![Obstacle { center: vec![0.3, 0.2], radius: 1.0 }]).unwrap();
        let acc = f_alpha(&curve, &set, &alpha).unwrap();
        // brute force: point i is at x = -2 + 0.01 i, inside iff |x| <= 1
        let expected: BTreeSet<usize> = (0..401)
            .filter(|&i| {
                let x = -2.0 + 4.0 * i as f64 / 400.0;
                x.abs() > 1.0
            })
            .collect();
        assert_eq!(acc, expected);
        assert_eq!(acc.len(), 200);
    }

    #[test]
    fn delta_density_examples() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let spacing = 1.0 / 99.0;
        let all: BTreeSet<usize> = (0..100).collect();
        assert!(is_delta_dense(&all, &grid, 2.0 * spacing).unwrap());
        assert!(!is_delta_dense(&BTreeSet::new(), &grid, 2.0 * spacing).unwrap());
        let alternating: BTreeSet<usize> = (0..100).step_by(2).collect();
        assert!(is_delta_dense(&alternating, &grid, 3.0 * spacing).unwrap());
        assert!(matches!(is_delta_dense(&all, &grid, spacing), Err(Error::DeltaTooSmall { .. })));
        // a gap of 10 steps in the middle needs delta > 5 steps
        let gapped: BTreeSet<usize> = (0..100).filter(|i| !(45..55).contains(i)).collect();
        assert!(!is_delta_dense(&gapped, &grid, 4.9 * spacing).unwrap());
        assert!(is_delta_dense(&gapped, &grid, 5.5 * spacing).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let curve = unit_segment();
        let set3 = OpenDenseTestSet::new(3, vec![]).unwrap();
        assert!(matches!(f_alpha(&curve, &set3, &[0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
        let set2 = OpenDenseTestSet::new(2, vec![]).unwrap();
        assert!(matches!(f_alpha(&curve, &set2, &[0.0]), Err(Error::DimensionMismatch { .. })));
        assert!(OpenDenseTestSet::from_json(r#"[{"center":[0,0,0],"radius":1}]"#, Some(2)).is_err());
    }

    #[test]
    fn covering_ball_defeats_search() {
        let curve = unit_segment();
        let set = OpenDenseTestSet::new(2, vec![Obstacle { center: vec![0.5, 0.0], radius: 10.0 }]).unwrap();
        assert!(search_alpha(&curve, &set, 0.05, 200, 1.0, 0).unwrap().is_none());
    }

    #[test]
    fn ball_samples_stay_in_ball() {
        let mut rng = trial_rng(7, 3);
        for _ in 0..1000 {
            let v = sample_in_ball(&mut rng, 3, 0.5);
            assert!(v.iter().map(|x| x * x).sum::<f64>().sqrt() <= 0.5 + 1e-15);
        }
    }

    fn arb_set() -> impl Strategy<Value = OpenDenseTestSet> {
        prop::collection::vec(((-1.0f64..2.0, -1.0f64..1.0), 0.01f64..0.3), 0..8).prop_map(|balls| {
            let obstacles =
                balls.into_iter().map(|((x, y), radius)| Obstacle { center: vec![x, y], radius }).collect();
            OpenDenseTestSet::new(2, obstacles).unwrap()
        })
    }

    proptest! {
        #[test]
        fn removing_an_obstacle_never_shrinks(set in arb_set(), ax in -0.5f64..0.5, ay in -0.5f64..0.5) {
            prop_assume!(!set.obstacles().is_empty());
            let curve = unit_segment();
            let full = f_alpha(&curve, &set, &[ax, ay]).unwrap();
            let fewer = f_alpha(&curve, &set.without(0), &[ax, ay]).unwrap();
            prop_assert!(full.is_subset(&fewer));
        }

        #[test]
        fn translation_consistency(set in arb_set(), ax in -0.5f64..0.5, ay in -0.5f64..0.5) {
            let curve = unit_segment();
            let direct = f_alpha(&curve, &set, &[ax, ay]).unwrap();
            let moved = f_alpha(&curve.translated(&[ax, ay]).unwrap(), &set, &[0.0, 0.0]).unwrap();
            prop_assert_eq!(direct, moved);
        }

        #[test]
        fn acceptance_is_monotone_in_delta(set in arb_set(), ax in -0.5f64..0.5, ay in -0.5f64..0.5, d in 0.02f64..0.3, extra in 0.0f64..0.3) {
            let curve = unit_segment();
            let acc = f_alpha(&curve, &set, &[ax, ay]).unwrap();
            let grid = curve.t_grid();
            if is_delta_dense(&acc, &grid, d).unwrap() {
                prop_assert!(is_delta_dense(&acc, &grid, d + extra).unwrap());
            }
        }
    }
}
