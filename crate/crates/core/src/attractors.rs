//! Periodic orbit detection, multiplier classification, and the hyperbolicity
//! and no-cycle predicates.
//!
//! Attractors are only searched for from critical points: for maps with
//! negative Schwarzian every periodic attractor has a critical point in its
//! immediate basin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kneading::TOL_SYMBOL;
use crate::polymap::{check_in_domain, CubicMap, IntervalMap};

pub const TOL_CYCLE: f64 = 1e-10;
pub const TOL_NEUTRAL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AttractorBudget {
    /// Burn-in iterations before looking for a cycle.
    pub max_iter: usize,
    pub max_period: usize,
    pub tol_cycle: f64,
    pub tol_neutral: f64,
    /// Iterates checked by the no-cycle predicate.
    pub no_cycle_horizon: usize,
}

impl Default for AttractorBudget {
    fn default() -> Self {
        AttractorBudget {
            max_iter: 100_000,
            max_period: 64,
            tol_cycle: TOL_CYCLE,
            tol_neutral: TOL_NEUTRAL,
            no_cycle_horizon: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Attracting,
    Repelling,
    Neutral,
}

pub fn classify(multiplier: f64, tol_neutral: f64) -> Stability {
    let m = multiplier.abs();
    if m < 1.0 - tol_neutral {
        Stability::Attracting
    } else if m > 1.0 + tol_neutral {
        Stability::Repelling
    } else {
        Stability::Neutral
    }
}

/// One period of a cycle, starting at its smallest point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub points: Vec<f64>,
    pub period: usize,
    pub multiplier: f64,
    pub class: Stability,
}

impl PeriodicOrbit {
    pub fn is_attracting(&self) -> bool {
        self.class == Stability::Attracting
    }

    /// Largest `|f(x_k) - x_{k+1 mod p}|` over the cycle.
    pub fn closure_error<M: IntervalMap + ?Sized>(&self, map: &M) -> f64 {
        let p = self.points.len();
        (0..p).map(|k| (map.eval(self.points[k]) - self.points[(k + 1) % p]).abs()).fold(0.0, f64::max)
    }
}

/// `f^p(x)` together with `(f^p)'(x)` by the chain rule.
fn compose_with_derivative<M: IntervalMap + ?Sized>(map: &M, x: f64, p: usize) -> (f64, f64) {
    let mut y = x;
    let mut dy = 1.0;
    for _ in 0..p {
        dy *= map.derivative(y);
        y = map.eval(y);
    }
    (y, dy)
}

/// Damped Newton on `g(x) = f^p(x) - x`, falling back to bisection on a
/// bracketing sign change.
fn polish_cycle_point<M: IntervalMap + ?Sized>(map: &M, x0: f64, p: usize) -> f64 {
    let g = |x: f64| compose_with_derivative(map, x, p).0 - x;
    let mut x = x0;
    let mut gx = g(x);
    for _ in 0..50 {
        if gx == 0.0 {
            break;
        }
        let (fx, dfx) = compose_with_derivative(map, x, p);
        let slope = dfx - 1.0;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let step = -(fx - x) / slope;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = x + lambda * step;
            let g_trial = g(trial);
            if (0.0..=1.0).contains(&trial) && g_trial.abs() < gx.abs() {
                x = trial;
                gx = g_trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted || (lambda * step).abs() < 1e-17 {
            break;
        }
    }
    if gx.abs() < TOL_CYCLE * 1e-2 {
        return x;
    }
    bisect_cycle_point(&g, x0).filter(|xb| g(*xb).abs() < gx.abs()).unwrap_or(x)
}

fn bisect_cycle_point(g: &impl Fn(f64) -> f64, x0: f64) -> Option<f64> {
    let mut h = 1e-9;
    while h < 1e-3 {
        let (mut lo, mut hi) = ((x0 - h).max(0.0), (x0 + h).min(1.0));
        let (mut glo, ghi) = (g(lo), g(hi));
        if glo == 0.0 {
            return Some(lo);
        }
        if ghi == 0.0 {
            return Some(hi);
        }
        if glo.signum() != ghi.signum() {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    return Some(mid);
                }
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        h *= 10.0;
    }
    None
}

/// Builds the orbit record for a polished cycle point of period `p`.
fn cycle_from_point<M: IntervalMap + ?Sized>(map: &M, x: f64, p: usize, tol_neutral: f64) -> PeriodicOrbit {
    let mut points = Vec::with_capacity(p);
    let mut y = x;
    for _ in 0..p {
        points.push(y);
        y = map.eval(y);
    }
    let start = points.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    points.rotate_left(start);
    let multiplier = points.iter().map(|&q| map.derivative(q)).product();
    PeriodicOrbit { points, period: p, multiplier, class: classify(multiplier, tol_neutral) }
}

/// Iterates `x0` through the burn-in, then looks for the smallest period
/// `p <= max_period` that closes within `tol_cycle` across a window of
/// `2 * max_period` iterates. Returns the polished cycle whatever its
/// stability.
pub fn detect_cycle<M: IntervalMap + ?Sized>(
    map: &M,
    x0: f64,
    budget: &AttractorBudget,
) -> Result<Option<PeriodicOrbit>> {
    check_in_domain(0, x0)?;
    let mut x = x0;
    for step in 1..=budget.max_iter {
        x = map.eval(x);
        check_in_domain(step, x)?;
    }
    let len = 2 * budget.max_period + 1;
    let mut window = Vec::with_capacity(len);
    window.push(x);
    for step in 1..len {
        x = map.eval(x);
        check_in_domain(budget.max_iter + step, x)?;
        window.push(x);
    }
    let period = (1..=budget.max_period)
        .find(|&p| (0..len - p).all(|j| (window[j + p] - window[j]).abs() < budget.tol_cycle));
    let Some(p) = period else {
        return Ok(None);
    };
    let polished = polish_cycle_point(map, window[0], p);
    let orbit = cycle_from_point(map, polished, p, budget.tol_neutral);
    if orbit.closure_error(map) < budget.tol_cycle {
        Ok(Some(orbit))
    } else {
        Ok(None)
    }
}

/// Like [`detect_cycle`] but only reports cycles that are not repelling.
/// Neutral cycles are returned as such, never coerced.
pub fn find_attractor_from<M: IntervalMap + ?Sized>(
    map: &M,
    x0: f64,
    budget: &AttractorBudget,
) -> Result<Option<PeriodicOrbit>> {
    Ok(detect_cycle(map, x0, budget)?.filter(|o| o.class != Stability::Repelling))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: f64,
    pub multiplier: f64,
    pub class: Stability,
}

/// All fixed points in `[0, 1]`, ascending.
///
/// `f(x) - x = d x (x - 1) (x - r)` with `r = (a - 1) / d`, so the roots are
/// exact up to one division.
pub fn fixed_points(m: &CubicMap, tol_neutral: f64) -> Result<Vec<FixedPoint>> {
    if m.is_identity() {
        return Err(Error::DegenerateIdentity);
    }
    let mut roots = vec![0.0, 1.0];
    let d = m.d();
    if d != 0.0 {
        let r = (m.a - 1.0) / d;
        if r > 0.0 && r < 1.0 {
            roots.insert(1, r);
        }
    }
    Ok(roots
        .into_iter()
        .map(|x| {
            let multiplier = m.derivative(x);
            FixedPoint { point: x, multiplier, class: classify(multiplier, tol_neutral) }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalFate {
    /// Converged to an attracting cycle.
    Attracted,
    /// Converged to a cycle with `|multiplier|` within `tol_neutral` of 1.
    NeutralCycle,
    /// The orbit sits on a repelling cycle (e.g. lands on it exactly).
    RepellingCycle,
    /// No cycle closed within the budget; evidence, not proof.
    NotFoundWithinBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalOutcome {
    pub critical_point: f64,
    pub converged: bool,
    pub fate: CriticalFate,
    pub orbit: Option<PeriodicOrbit>,
    /// First iterate within `tol_cycle` of the cycle, when one was found.
    pub transient_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct HyperbolicityReport {
    pub outcomes: Vec<CriticalOutcome>,
    pub hyperbolic: bool,
    pub no_cycle: bool,
}

impl HyperbolicityReport {
    /// The first attracting orbit found from any critical point.
    pub fn attractor(&self) -> Option<&PeriodicOrbit> {
        self.outcomes.iter().filter(|o| o.converged).find_map(|o| o.orbit.as_ref())
    }

    pub fn any_attractor(&self) -> bool {
        self.outcomes.iter().any(|o| o.fate == CriticalFate::Attracted)
    }

    pub fn any_neutral(&self) -> bool {
        self.outcomes.iter().any(|o| o.fate == CriticalFate::NeutralCycle)
    }
}

impl Serialize for HyperbolicityReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            hyperbolic: bool,
            no_cycle: bool,
            orbits: Vec<Option<&'a PeriodicOrbit>>,
            transients: Vec<Option<usize>>,
        }
        View {
            hyperbolic: self.hyperbolic,
            no_cycle: self.no_cycle,
            orbits: self.outcomes.iter().map(|o| o.orbit.as_ref()).collect(),
            transients: self.outcomes.iter().map(|o| o.transient_length).collect(),
        }
        .serialize(serializer)
    }
}

fn transient_length<M: IntervalMap + ?Sized>(
    map: &M,
    x0: f64,
    orbit: &PeriodicOrbit,
    budget: &AttractorBudget,
) -> Option<usize> {
    let limit = budget.max_iter + 2 * budget.max_period;
    let mut x = x0;
    for k in 0..=limit {
        if orbit.points.iter().any(|&q| (x - q).abs() < budget.tol_cycle) {
            return Some(k);
        }
        x = map.eval(x);
    }
    None
}

pub fn critical_outcome<M: IntervalMap + ?Sized>(
    map: &M,
    c: f64,
    budget: &AttractorBudget,
) -> Result<CriticalOutcome> {
    let cycle = detect_cycle(map, c, budget)?;
    let fate = match cycle.as_ref().map(|o| o.class) {
        None => CriticalFate::NotFoundWithinBudget,
        Some(Stability::Attracting) => CriticalFate::Attracted,
        Some(Stability::Neutral) => CriticalFate::NeutralCycle,
        Some(Stability::Repelling) => CriticalFate::RepellingCycle,
    };
    let orbit = cycle.filter(|o| o.class != Stability::Repelling);
    let transient = orbit.as_ref().and_then(|o| transient_length(map, c, o, budget));
    Ok(CriticalOutcome {
        critical_point: c,
        converged: fate == CriticalFate::Attracted,
        fate,
        orbit,
        transient_length: transient,
    })
}

/// Runs the attractor search from every critical point.
pub fn is_hyperbolic<M: IntervalMap + ?Sized>(
    map: &M,
    budget: &AttractorBudget,
) -> Result<HyperbolicityReport> {
    let crit = map.criticals()?;
    let outcomes =
        crit.points().into_iter().map(|c| critical_outcome(map, c, budget)).collect::<Result<Vec<_>>>()?;
    let hyperbolic = outcomes.iter().all(|o| o.converged);
    let no_cycle = no_cycle_check(map, budget.no_cycle_horizon)?;
    Ok(HyperbolicityReport { outcomes, hyperbolic, no_cycle })
}

/// True iff no iterate `f^k(c_i)`, `1 <= k <= horizon`, comes within
/// [`TOL_SYMBOL`] of a critical point.
pub fn no_cycle_check<M: IntervalMap + ?Sized>(map: &M, horizon: usize) -> Result<bool> {
    let points = map.criticals()?.points();
    for &c in &points {
        let mut x = c;
        for step in 1..=horizon {
            x = map.eval(x);
            check_in_domain(step, x)?;
            if points.iter().any(|&cj| (x - cj).abs() <= TOL_SYMBOL) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
