//! The robustly chaotic cubic family.
//!
//! Admissible maps satisfy
//! `0 < c1 < f(c2) < f^3(c2) = f^4(c2) < c2 < f^2(c2) < f(c1) < 1`.
//! The equality cuts out a curve in the `(a, b)` plane; this module finds a
//! point on it, continues along it, and checks every ingredient of the
//! robust-chaos argument on each sample: the ordering chain, the trapping
//! interval `[f(c2), 1]`, the repelling fixed point that `c2` lands on,
//! negative Schwarzian, and absence of attractors.

use std::fmt;
use std::io;

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractors::{is_hyperbolic, AttractorBudget, CriticalFate};
use crate::error::{Error, Result};
use crate::kneading::{itinerary_with, Itinerary, KneadingWitness, TOL_SYMBOL};
use crate::polymap::{Criticals, CubicMap, IntervalMap, TOL_ESCAPE};
use crate::util::fmt_f64;

/// Residual accepted on traced samples.
pub const TOL_CURVE: f64 = 1e-10;
/// Strict margin applied to every inequality of the ordering chain.
pub const ORDERING_MARGIN: f64 = 1e-9;
/// Central-difference step for the residual gradient.
pub const FD_STEP: f64 = 1e-7;
/// Points at which the Schwarzian is sampled during verification.
pub const SCHWARZIAN_SAMPLES: usize = 100;

/// The critical points and the first iterates of `c2` used by the
/// admissibility conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalOrbit {
    pub c1: f64,
    pub c2: f64,
    pub f_c1: f64,
    pub f_c2: f64,
    pub f2_c2: f64,
    pub f3_c2: f64,
    pub f4_c2: f64,
}

impl CriticalOrbit {
    pub fn of(a: f64, b: f64) -> Result<CriticalOrbit> {
        let m = CubicMap::new(a, b);
        let pair = m.critical_points()?;
        let f_c2 = m.eval(pair.c2);
        let f2_c2 = m.eval(f_c2);
        let f3_c2 = m.eval(f2_c2);
        let f4_c2 = m.eval(f3_c2);
        Ok(CriticalOrbit { c1: pair.c1, c2: pair.c2, f_c1: m.eval(pair.c1), f_c2, f2_c2, f3_c2, f4_c2 })
    }

    pub fn residual(&self) -> f64 {
        self.f4_c2 - self.f3_c2
    }
}

/// `f^4(c2) - f^3(c2)`, with `c2` recomputed in closed form at `(a, b)`.
pub fn residual(a: f64, b: f64) -> Result<f64> {
    Ok(CriticalOrbit::of(a, b)?.residual())
}

/// The seven strict inequalities of the ordering chain (the equality
/// `f^3(c2) = f^4(c2)` is the residual's job).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inequality {
    ZeroLtC1,
    C1LtFc2,
    Fc2LtF3c2,
    F3c2LtC2,
    C2LtF2c2,
    F2c2LtFc1,
    Fc1LtOne,
}

impl Inequality {
    pub const ALL: [Inequality; 7] = [
        Inequality::ZeroLtC1,
        Inequality::C1LtFc2,
        Inequality::Fc2LtF3c2,
        Inequality::F3c2LtC2,
        Inequality::C2LtF2c2,
        Inequality::F2c2LtFc1,
        Inequality::Fc1LtOne,
    ];

    fn sides(self, o: &CriticalOrbit) -> (f64, f64) {
        match self {
            Inequality::ZeroLtC1 => (0.0, o.c1),
            Inequality::C1LtFc2 => (o.c1, o.f_c2),
            Inequality::Fc2LtF3c2 => (o.f_c2, o.f3_c2),
            Inequality::F3c2LtC2 => (o.f3_c2, o.c2),
            Inequality::C2LtF2c2 => (o.c2, o.f2_c2),
            Inequality::F2c2LtFc1 => (o.f2_c2, o.f_c1),
            Inequality::Fc1LtOne => (o.f_c1, 1.0),
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::ZeroLtC1 => "0 < c1",
            Inequality::C1LtFc2 => "c1 < f(c2)",
            Inequality::Fc2LtF3c2 => "f(c2) < f^3(c2)",
            Inequality::F3c2LtC2 => "f^3(c2) < c2",
            Inequality::C2LtF2c2 => "c2 < f^2(c2)",
            Inequality::F2c2LtFc1 => "f^2(c2) < f(c1)",
            Inequality::Fc1LtOne => "f(c1) < 1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub ok: bool,
    pub violated: Vec<Inequality>,
}

pub fn ordering_of(orbit: &CriticalOrbit) -> OrderingCheck {
    let violated: Vec<_> = Inequality::ALL
        .into_iter()
        .filter(|ineq| {
            let (lhs, rhs) = ineq.sides(orbit);
            !(lhs + ORDERING_MARGIN < rhs)
        })
        .collect();
    OrderingCheck { ok: violated.is_empty(), violated }
}

pub fn ordering_ok(a: f64, b: f64) -> Result<OrderingCheck> {
    Ok(ordering_of(&CriticalOrbit::of(a, b)?))
}

fn admissible(a: f64, b: f64) -> Option<f64> {
    let orbit = CriticalOrbit::of(a, b).ok()?;
    ordering_of(&orbit).ok.then(|| orbit.residual())
}

/// Axis-aligned rectangle in the `(a, b)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedBox {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
}

impl Default for SeedBox {
    fn default() -> Self {
        SeedBox { a_min: -4.0, a_max: 10.0, b_min: -30.0, b_max: 10.0 }
    }
}

pub const DEFAULT_SEED_GRID: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

/// Scans a `grid x grid` lattice over `bx` for an edge of constant `b` whose
/// endpoints are admissible and whose residuals change sign, then bisects
/// along that edge and polishes with Newton in `a`.
pub fn find_seed(bx: &SeedBox, grid: usize) -> Result<Seed> {
    if grid < 2 || !(bx.a_min < bx.a_max) || !(bx.b_min < bx.b_max) {
        return Err(Error::NoSeedFound);
    }
    let span = (grid - 1) as f64;
    let a_at = |i: usize| bx.a_min + (bx.a_max - bx.a_min) * i as f64 / span;
    for j in 0..grid {
        let b = bx.b_min + (bx.b_max - bx.b_min) * j as f64 / span;
        let row: Vec<Option<f64>> = (0..grid).map(|i| admissible(a_at(i), b)).collect();
        for i in 0..grid - 1 {
            let (Some(r0), Some(r1)) = (row[i], row[i + 1]) else {
                continue;
            };
            if r0.signum() == r1.signum() && r0 != 0.0 {
                continue;
            }
            if let Some(seed) = refine_seed(a_at(i), a_at(i + 1), b, r0) {
                debug!("seed edge at b = {b}, a in [{}, {}]", a_at(i), a_at(i + 1));
                return Ok(seed);
            }
        }
    }
    Err(Error::NoSeedFound)
}

fn refine_seed(mut lo: f64, mut hi: f64, b: f64, r_lo: f64) -> Option<Seed> {
    let r = |a: f64| residual(a, b).ok();
    let lo_sign = r_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let rm = r(mid)?;
        if rm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if rm.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut a = 0.5 * (lo + hi);
    let mut ra = r(a)?;
    for _ in 0..8 {
        if ra == 0.0 {
            break;
        }
        let slope = (r(a + FD_STEP)? - r(a - FD_STEP)?) / (2.0 * FD_STEP);
        let trial = a - ra / slope;
        match r(trial) {
            Some(rt) if rt.abs() < ra.abs() => {
                a = trial;
                ra = rt;
            }
            _ => break,
        }
    }
    let ok = ordering_ok(a, b).ok()?.ok;
    (ok && ra.abs() < 1e-12).then_some(Seed { a, b, residual: ra })
}

/// One point of a traced curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl CurveSample {
    pub fn map(&self) -> CubicMap {
        CubicMap::new(self.a, self.b)
    }
}

/// Why continuation stopped in one direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StopReason {
    MaxSamples,
    /// The corrected point left the admissible region.
    OrderingViolated(Vec<Inequality>),
    /// The critical points degenerated at the corrected point.
    Degenerate(String),
}

/// Samples `(t, a, b)` of the admissible curve, with `t` the normalized
/// cumulative chord length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FamilyCurve {
    pub samples: Vec<CurveSample>,
    /// Stop reasons for the backward and forward directions, when traced.
    pub stops: Vec<StopReason>,
}

impl FamilyCurve {
    pub fn from_points(points: &[(f64, f64)]) -> FamilyCurve {
        let mut samples: Vec<CurveSample> =
            points.iter().map(|&(a, b)| CurveSample { t: 0.0, a, b }).collect();
        normalize_chord_length(&mut samples);
        FamilyCurve { samples, stops: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest distance in `(a, b)` between consecutive samples.
    pub fn max_gap(&self) -> f64 {
        self.samples.windows(2).map(|w| (w[1].a - w[0].a).hypot(w[1].b - w[0].b)).fold(0.0, f64::max)
    }

    /// Writes `t,a,b,c1,c2,f_c1,f_c2,f2_c2,f3_c2,residual`.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t", "a", "b", "c1", "c2", "f_c1", "f_c2", "f2_c2", "f3_c2", "residual"])?;
        for s in &self.samples {
            let mut record = vec![fmt_f64(s.t), fmt_f64(s.a), fmt_f64(s.b)];
            match CriticalOrbit::of(s.a, s.b) {
                Ok(o) => {
                    record.extend([o.c1, o.c2, o.f_c1, o.f_c2, o.f2_c2, o.f3_c2, o.residual()].map(fmt_f64))
                }
                Err(_) => record.extend(std::iter::repeat_n(String::new(), 7)),
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the `t`, `a` and `b` columns; derived columns are recomputed on
    /// use.
    pub fn read_csv<R: io::Read>(reader: R) -> Result<FamilyCurve> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::InvalidArgument(format!("curve CSV lacks column '{name}'")))
        };
        let (it, ia, ib) = (col("t")?, col("a")?, col("b")?);
        let mut samples = Vec::new();
        for record in r.records() {
            let record = record?;
            let field = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("bad number in row {record:?}")))
            };
            samples.push(CurveSample { t: field(it)?, a: field(ia)?, b: field(ib)? });
        }
        Ok(FamilyCurve { samples, stops: Vec::new() })
    }
}

fn normalize_chord_length(samples: &mut [CurveSample]) {
    let mut acc = 0.0;
    let mut lengths = Vec::with_capacity(samples.len());
    lengths.push(0.0);
    for w in samples.windows(2) {
        acc += (w[1].a - w[0].a).hypot(w[1].b - w[0].b);
        lengths.push(acc);
    }
    for (s, len) in samples.iter_mut().zip(lengths) {
        s.t = if acc > 0.0 { len / acc } else { 0.0 };
    }
    if let Some(last) = samples.last_mut() {
        if acc > 0.0 {
            last.t = 1.0;
        }
    }
}

/// Gradient of the residual by central differences.
pub fn residual_gradient(a: f64, b: f64) -> Result<(f64, f64)> {
    let h = FD_STEP;
    let ra = (residual(a + h, b)? - residual(a - h, b)?) / (2.0 * h);
    let rb = (residual(a, b + h)? - residual(a, b - h)?) / (2.0 * h);
    Ok((ra, rb))
}

fn unit_tangent(a: f64, b: f64) -> Result<(f64, f64)> {
    let (ra, rb) = residual_gradient(a, b)?;
    let norm = ra.hypot(rb);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateCritical { discriminant: f64::NAN });
    }
    Ok((-rb / norm, ra / norm))
}

enum Correction {
    Converged(f64, f64),
    Diverged,
    Degenerate(Error),
}

/// Newton on `{residual = 0, tangent . (x - pred) = 0}`.
fn correct(pred: (f64, f64), tangent: (f64, f64)) -> Correction {
    let (mut a, mut b) = pred;
    for _ in 0..20 {
        let r = match residual(a, b) {
            Ok(r) => r,
            Err(e) => return Correction::Degenerate(e),
        };
        let constraint = tangent.0 * (a - pred.0) + tangent.1 * (b - pred.1);
        if r.abs() < TOL_CURVE * 1e-3 && constraint.abs() < 1e-14 {
            return Correction::Converged(a, b);
        }
        let (ra, rb) = match residual_gradient(a, b) {
            Ok(g) => g,
            Err(e) => return Correction::Degenerate(e),
        };
        let det = ra * tangent.1 - rb * tangent.0;
        if det == 0.0 || !det.is_finite() {
            return Correction::Diverged;
        }
        let da = (-r * tangent.1 + rb * constraint) / det;
        let db = (-ra * constraint + r * tangent.0) / det;
        a += da;
        b += db;
        if da.abs() + db.abs() < 1e-15 {
            break;
        }
    }
    match residual(a, b) {
        Ok(r) if r.abs() < TOL_CURVE => Correction::Converged(a, b),
        Ok(_) => Correction::Diverged,
        Err(e) => Correction::Degenerate(e),
    }
}

/// Pulls an arbitrary starting point onto the curve by minimum-norm Newton.
fn project_onto_curve(a0: f64, b0: f64) -> Option<(f64, f64)> {
    let (mut a, mut b) = (a0, b0);
    for _ in 0..30 {
        let r = residual(a, b).ok()?;
        if r.abs() < TOL_CURVE * 1e-3 {
            return Some((a, b));
        }
        let (ra, rb) = residual_gradient(a, b).ok()?;
        let g2 = ra * ra + rb * rb;
        if !(g2 > 0.0) {
            return None;
        }
        a -= r * ra / g2;
        b -= r * rb / g2;
    }
    let r = residual(a, b).ok()?;
    (r.abs() < TOL_CURVE).then_some((a, b))
}

/// Pseudo-arclength continuation of `residual(a, b) = 0` in both directions
/// from `seed`. Each direction stops when the corrected point leaves the
/// admissible region or its share of `max_samples` is used up.
pub fn trace_curve(seed: (f64, f64), step: f64, max_samples: usize) -> Result<FamilyCurve> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidStep(step));
    }
    let diverged_at_start = || Error::CorrectorDiverged { partial: Box::default() };
    let start = project_onto_curve(seed.0, seed.1).ok_or_else(diverged_at_start)?;
    if !ordering_ok(start.0, start.1).map(|c| c.ok).unwrap_or(false) {
        return Err(diverged_at_start());
    }
    let budget = max_samples.saturating_sub(1);
    let backward_cap = budget / 2;
    let forward_cap = budget - backward_cap;

    let t0 = unit_tangent(start.0, start.1).map_err(|_| diverged_at_start())?;
    let forward = continue_direction(start, t0, step, forward_cap);
    let backward = continue_direction(start, (-t0.0, -t0.1), step, backward_cap);

    let assemble = |fwd: &[(f64, f64)], bwd: &[(f64, f64)]| {
        let mut points: Vec<(f64, f64)> = bwd.iter().rev().copied().collect();
        points.push(start);
        points.extend_from_slice(fwd);
        FamilyCurve::from_points(&points)
    };
    match (forward, backward) {
        (Ok((fwd, fstop)), Ok((bwd, bstop))) => {
            let mut curve = assemble(&fwd, &bwd);
            curve.stops = vec![bstop, fstop];
            Ok(curve)
        }
        (Err(fwd), Ok((bwd, _))) | (Ok((fwd, _)), Err(bwd)) => {
            Err(Error::CorrectorDiverged { partial: Box::new(assemble(&fwd, &bwd)) })
        }
        (Err(fwd), Err(bwd)) => Err(Error::CorrectorDiverged { partial: Box::new(assemble(&fwd, &bwd)) }),
    }
}

type DirectionResult = std::result::Result<(Vec<(f64, f64)>, StopReason), Vec<(f64, f64)>>;

fn continue_direction(start: (f64, f64), tangent: (f64, f64), step: f64, cap: usize) -> DirectionResult {
    let mut points = Vec::new();
    let mut x = start;
    let mut tau = tangent;
    while points.len() < cap {
        let mut h = step;
        let mut accepted = None;
        for _attempt in 0..5 {
            let pred = (x.0 + h * tau.0, x.1 + h * tau.1);
            match correct(pred, tau) {
                Correction::Converged(a, b) => {
                    let jump = (a - x.0).hypot(b - x.1);
                    if jump <= 2.0 * h {
                        accepted = Some((a, b));
                        break;
                    }
                }
                Correction::Degenerate(e) => {
                    info!("continuation stopped at {x:?}: {e}");
                    return Ok((points, StopReason::Degenerate(e.to_string())));
                }
                Correction::Diverged => {}
            }
            h *= 0.5;
        }
        let Some(y) = accepted else {
            return Err(points);
        };
        match ordering_ok(y.0, y.1) {
            Ok(check) if check.ok => {}
            Ok(check) => {
                let names: Vec<String> = check.violated.iter().map(|v| v.to_string()).collect();
                info!("continuation left the admissible region at {y:?}: violated {}", names.join(", "));
                return Ok((points, StopReason::OrderingViolated(check.violated)));
            }
            Err(e) => return Ok((points, StopReason::Degenerate(e.to_string()))),
        }
        let next_tau = match unit_tangent(y.0, y.1) {
            Ok(t) => t,
            Err(e) => return Ok((points, StopReason::Degenerate(e.to_string()))),
        };
        tau =
            if next_tau.0 * tau.0 + next_tau.1 * tau.1 < 0.0 { (-next_tau.0, -next_tau.1) } else { next_tau };
        points.push(y);
        x = y;
    }
    Ok((points, StopReason::MaxSamples))
}

/// Per-sample verification flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleFlags {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub ordering: bool,
    pub trapping: bool,
    pub landing_fixed: bool,
    pub landing_repelling: bool,
    pub schwarzian_negative: bool,
    pub no_attractor_found: bool,
    pub no_cycle: bool,
}

impl SampleFlags {
    pub fn all(&self) -> bool {
        self.ordering
            && self.trapping
            && self.landing_fixed
            && self.landing_repelling
            && self.schwarzian_negative
            && self.no_attractor_found
            && self.no_cycle
    }

    fn failed(s: &CurveSample) -> SampleFlags {
        SampleFlags {
            t: s.t,
            a: s.a,
            b: s.b,
            ordering: false,
            trapping: false,
            landing_fixed: false,
            landing_repelling: false,
            schwarzian_negative: false,
            no_attractor_found: false,
            no_cycle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    pub samples: Vec<SampleFlags>,
    pub overall: bool,
    pub warnings: Vec<String>,
}

impl RobustnessCertificate {
    pub fn failing(&self) -> impl Iterator<Item = &SampleFlags> {
        self.samples.iter().filter(|s| !s.all())
    }
}

/// `f([f(c2), 1]) ⊆ [f(c2), 1]`, judged at the endpoints and at any critical
/// point inside the interval.
pub fn trapping_ok(m: &CubicMap, orbit: &CriticalOrbit, tol_cycle: f64) -> bool {
    let lo = orbit.f_c2;
    let mut candidates = vec![lo, 1.0];
    candidates.extend([orbit.c1, orbit.c2].into_iter().filter(|&c| c >= lo && c <= 1.0));
    candidates.iter().map(|&x| m.eval(x)).all(|y| y >= lo - tol_cycle && y <= 1.0 + TOL_ESCAPE)
}

fn schwarzian_negative(m: &CubicMap) -> bool {
    (0..SCHWARZIAN_SAMPLES)
        .map(|k| (k as f64 + 0.5) / SCHWARZIAN_SAMPLES as f64)
        .filter_map(|x| m.schwarzian(x).ok())
        .all(|s| s < 0.0)
}

pub fn verify_sample(s: &CurveSample, budget: &AttractorBudget) -> SampleFlags {
    let m = s.map();
    let Ok(orbit) = CriticalOrbit::of(s.a, s.b) else {
        return SampleFlags::failed(s);
    };
    let p = orbit.f3_c2;
    let report = is_hyperbolic(&m, budget).ok();
    SampleFlags {
        t: s.t,
        a: s.a,
        b: s.b,
        ordering: ordering_of(&orbit).ok,
        trapping: trapping_ok(&m, &orbit, budget.tol_cycle),
        landing_fixed: (m.eval(p) - p).abs() < budget.tol_cycle,
        landing_repelling: m.derivative(p).abs() > 1.0 + budget.tol_neutral,
        schwarzian_negative: schwarzian_negative(&m),
        no_attractor_found: report.as_ref().is_some_and(|r| {
            !r.hyperbolic
                && r.outcomes.iter().all(|o| {
                    matches!(o.fate, CriticalFate::NotFoundWithinBudget | CriticalFate::RepellingCycle)
                })
        }),
        no_cycle: report.as_ref().is_some_and(|r| r.no_cycle),
    }
}

/// Checks every sample; failures are recorded, never raised.
pub fn verify_robust(curve: &FamilyCurve, budget: &AttractorBudget) -> RobustnessCertificate {
    let samples: Vec<SampleFlags> = curve.samples.par_iter().map(|s| verify_sample(s, budget)).collect();
    let mut warnings = Vec::new();
    if samples.is_empty() {
        warnings.push("empty curve: certificate holds vacuously".to_string());
    }
    let overall = samples.iter().all(SampleFlags::all);
    RobustnessCertificate { samples, overall, warnings }
}

/// Itinerary of `f(c1)` to `len` symbols.
pub fn critical_value_itinerary(m: &CubicMap, len: usize) -> Result<Itinerary> {
    let pair = m.critical_points()?;
    itinerary_with(m, &Criticals::Bimodal(pair), m.eval(pair.c1), len, TOL_SYMBOL)
}

/// First pair of consecutive samples whose `f(c1)` itineraries differ within
/// `prefix_len` symbols.
pub fn kneading_varies(curve: &FamilyCurve, prefix_len: usize) -> Option<KneadingWitness> {
    let itineraries: Vec<_> =
        curve.samples.iter().map(|s| critical_value_itinerary(&s.map(), prefix_len).ok()).collect();
    curve.samples.windows(2).zip(itineraries.windows(2)).find_map(|(s, k)| match (&k[0], &k[1]) {
        (Some(x), Some(y)) => {
            x.first_difference(y, prefix_len).map(|index| KneadingWitness { t1: s[0].t, t2: s[1].t, index })
        }
        _ => None,
    })
}
