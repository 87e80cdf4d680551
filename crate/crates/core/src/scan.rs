//! One-parameter family scans: Lyapunov exponents, hyperbolic windows,
//! kneading constancy and perturbations of the robust curve.
//!
//! Density statements derived from a scan are finite-resolution evidence:
//! a non-hyperbolic row means "no attractor found within budget".

use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attractors::{is_hyperbolic, AttractorBudget, CriticalFate, PeriodicOrbit};
use crate::error::{Error, Result};
use crate::kneading::{first_kneading_difference, kneading_invariant, KneadingInvariant, KneadingWitness};
use crate::polymap::{check_in_domain, Criticals, CubicMap, IntervalMap, QuadraticMap, TOL_ROOT};
use crate::robustfamily::{CurveSample, FamilyCurve};
use crate::util::{fmt_f64, fmt_opt};

/// A map-valued function of `t` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// Piecewise-linear interpolation in `(a, b)` between curve samples.
    Curve(Vec<CurveSample>),
    /// Straight segment from `(a0, b0)` to `(a1, b1)`.
    Segment { a0: f64, b0: f64, a1: f64, b1: f64 },
    /// Logistic maps with `mu` affine in `t`.
    Quadratic { mu0: f64, mu1: f64 },
}

impl Family {
    pub fn curve(curve: &FamilyCurve) -> Result<Family> {
        if curve.is_empty() {
            return Err(Error::InvalidArgument("curve family needs at least one sample".into()));
        }
        Ok(Family::Curve(curve.samples.clone()))
    }

    /// `f_t` for every `t` is the same cubic.
    pub fn constant(m: CubicMap) -> Family {
        Family::Segment { a0: m.a, b0: m.b, a1: m.a, b1: m.b }
    }

    pub fn at(&self, t: f64) -> FamilyMember {
        match self {
            Family::Curve(samples) => {
                let (a, b) = interpolate(samples, t);
                FamilyMember::Cubic(CubicMap::new(a, b))
            }
            &Family::Segment { a0, b0, a1, b1 } => {
                FamilyMember::Cubic(CubicMap::new(a0 + t * (a1 - a0), b0 + t * (b1 - b0)))
            }
            &Family::Quadratic { mu0, mu1 } => {
                FamilyMember::Quadratic(QuadraticMap::new(mu0 + t * (mu1 - mu0)))
            }
        }
    }
}

fn interpolate(samples: &[CurveSample], t: f64) -> (f64, f64) {
    let idx = samples.partition_point(|s| s.t < t);
    if idx == 0 {
        return (samples[0].a, samples[0].b);
    }
    if idx == samples.len() {
        let last = samples[samples.len() - 1];
        return (last.a, last.b);
    }
    let (lo, hi) = (samples[idx - 1], samples[idx]);
    if t == hi.t || hi.t == lo.t {
        return (hi.a, hi.b);
    }
    let w = (t - lo.t) / (hi.t - lo.t);
    (lo.a + w * (hi.a - lo.a), lo.b + w * (hi.b - lo.b))
}

/// A member of a [`Family`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyMember {
    Cubic(CubicMap),
    Quadratic(QuadraticMap),
}

impl FamilyMember {
    /// `(a, b)` for cubics, `(mu, None)` for logistic maps.
    pub fn params(&self) -> (f64, Option<f64>) {
        match self {
            FamilyMember::Cubic(m) => (m.a, Some(m.b)),
            FamilyMember::Quadratic(q) => (q.mu, None),
        }
    }
}

impl IntervalMap for FamilyMember {
    fn eval(&self, x: f64) -> f64 {
        match self {
            FamilyMember::Cubic(m) => m.eval(x),
            FamilyMember::Quadratic(q) => q.eval(x),
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            FamilyMember::Cubic(m) => m.derivative(x),
            FamilyMember::Quadratic(q) => q.derivative(x),
        }
    }

    fn second_derivative(&self, x: f64) -> f64 {
        match self {
            FamilyMember::Cubic(m) => m.second_derivative(x),
            FamilyMember::Quadratic(q) => q.second_derivative(x),
        }
    }

    fn third_derivative(&self, x: f64) -> f64 {
        match self {
            FamilyMember::Cubic(m) => m.third_derivative(x),
            FamilyMember::Quadratic(q) => q.third_derivative(x),
        }
    }

    fn criticals(&self) -> Result<Criticals> {
        match self {
            FamilyMember::Cubic(m) => m.criticals(),
            FamilyMember::Quadratic(q) => q.criticals(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// `(1/n) sum log|f'(x_k)|` over the non-skipped terms.
    pub exponent: f64,
    pub n: usize,
    /// Terms with `|f'| < TOL_ROOT`, left out of the sum.
    pub skipped: usize,
    /// Set when most terms were critical hits, i.e. the orbit sits on a
    /// superstable cycle and the true exponent is `-inf`.
    pub attracting_dominated: bool,
}

pub fn lyapunov<M: IntervalMap + ?Sized>(
    map: &M,
    x0: f64,
    n: usize,
    burn_in: usize,
) -> Result<LyapunovEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("lyapunov needs n >= 1".into()));
    }
    check_in_domain(0, x0)?;
    let mut x = x0;
    for step in 1..=burn_in {
        x = map.eval(x);
        check_in_domain(step, x)?;
    }
    let mut sum = 0.0;
    let mut skipped = 0;
    for k in 0..n {
        let d = map.derivative(x).abs();
        if d < TOL_ROOT {
            skipped += 1;
        } else {
            sum += d.ln();
        }
        x = map.eval(x);
        check_in_domain(burn_in + k + 1, x)?;
    }
    Ok(LyapunovEstimate { exponent: sum / n as f64, n, skipped, attracting_dominated: 2 * skipped > n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanBudget {
    pub attractor: AttractorBudget,
    pub lyapunov_n: usize,
    pub lyapunov_burn_in: usize,
    pub kneading_len: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            attractor: AttractorBudget::default(),
            lyapunov_n: 100_000,
            lyapunov_burn_in: 1000,
            kneading_len: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t: f64,
    pub a: f64,
    pub b: Option<f64>,
    pub hyperbolic: bool,
    pub attractor_period: Option<usize>,
    pub multiplier: Option<f64>,
    pub lyapunov_c1: Option<f64>,
    pub lyapunov_c2: Option<f64>,
    pub kneading_prefix: String,
    pub no_cycle: bool,
    pub flags: Vec<String>,
}

impl ScanRow {
    pub fn is_degenerate(&self) -> bool {
        self.flags.iter().any(|f| f.starts_with("degenerate"))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

pub const SCAN_COLUMNS: [&str; 11] = [
    "t",
    "a",
    "b",
    "hyperbolic",
    "attractor_period",
    "multiplier",
    "lyapunov_c1",
    "lyapunov_c2",
    "kneading_prefix",
    "no_cycle",
    "flags",
];

impl ScanReport {
    pub fn hyperbolic_count(&self) -> usize {
        self.rows.iter().filter(|r| r.hyperbolic).count()
    }

    pub fn hyperbolic_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            0.0
        } else {
            self.hyperbolic_count() as f64 / self.rows.len() as f64
        }
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(SCAN_COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                fmt_f64(r.t),
                fmt_f64(r.a),
                fmt_opt(r.b),
                r.hyperbolic.to_string(),
                r.attractor_period.map(|p| p.to_string()).unwrap_or_default(),
                fmt_opt(r.multiplier),
                fmt_opt(r.lyapunov_c1),
                fmt_opt(r.lyapunov_c2),
                r.kneading_prefix.clone(),
                r.no_cycle.to_string(),
                r.flags.join(";"),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn degenerate_row(t: f64, params: (f64, Option<f64>), reason: &str) -> ScanRow {
    ScanRow {
        t,
        a: params.0,
        b: params.1,
        hyperbolic: false,
        attractor_period: None,
        multiplier: None,
        lyapunov_c1: None,
        lyapunov_c2: None,
        kneading_prefix: String::new(),
        no_cycle: false,
        flags: vec![format!("degenerate:{reason}")],
    }
}

pub fn scan_row(member: &FamilyMember, t: f64, budget: &ScanBudget) -> ScanRow {
    let params = member.params();
    let crit = match member.criticals() {
        Ok(c) => c,
        Err(e) => return degenerate_row(t, params, error_tag(&e)),
    };
    let mut flags = Vec::new();
    let (hyperbolic, attractor, no_cycle) = match is_hyperbolic(member, &budget.attractor) {
        Ok(report) => {
            if report.outcomes.iter().any(|o| o.fate == CriticalFate::NeutralCycle) {
                flags.push("neutral_cycle".to_string());
            }
            if !report.any_attractor() {
                flags.push("no_attractor_within_budget".to_string());
            }
            (report.hyperbolic, report.attractor().cloned(), report.no_cycle)
        }
        Err(e) => {
            flags.push(error_tag(&e).to_string());
            (false, None, false)
        }
    };
    let mut lyap = crit.points().into_iter().enumerate().map(|(i, c)| {
        match lyapunov(member, c, budget.lyapunov_n, budget.lyapunov_burn_in) {
            Ok(est) => {
                if est.attracting_dominated {
                    flags.push(format!("lyapunov_c{}_attracting_dominated", i + 1));
                }
                Some(est.exponent)
            }
            Err(e) => {
                flags.push(format!("lyapunov_c{}_{}", i + 1, error_tag(&e)));
                None
            }
        }
    });
    let lyapunov_c1 = lyap.next().flatten();
    let lyapunov_c2 = lyap.next().flatten();
    let kneading_prefix = match kneading_invariant(member, budget.kneading_len) {
        Ok(k) => k.to_string(),
        Err(e) => {
            flags.push(format!("kneading_{}", error_tag(&e)));
            String::new()
        }
    };
    ScanRow {
        t,
        a: params.0,
        b: params.1,
        hyperbolic,
        attractor_period: attractor.as_ref().map(|o| o.period),
        multiplier: attractor.as_ref().map(|o| o.multiplier),
        lyapunov_c1,
        lyapunov_c2,
        kneading_prefix,
        no_cycle,
        flags,
    }
}

fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::DegenerateCritical { .. } => "degenerate_critical",
        Error::OutOfRange { .. } => "critical_out_of_range",
        Error::EscapedDomain { .. } => "escaped",
        _ => "error",
    }
}

pub fn grid_points(grid: usize) -> Result<Vec<f64>> {
    if grid < 2 {
        return Err(Error::InvalidGrid(grid));
    }
    Ok((0..grid).map(|k| k as f64 / (grid - 1) as f64).collect())
}

/// Evaluates every `t = k / (grid - 1)`. Row failures are recorded in the
/// row's flags; rows come back sorted by `t` regardless of thread count.
pub fn scan_family(fam: &Family, grid: usize, budget: &ScanBudget) -> Result<ScanReport> {
    let ts = grid_points(grid)?;
    let rows = ts.par_iter().map(|&t| scan_row(&fam.at(t), t, budget)).collect();
    Ok(ScanReport { rows })
}

/// Maximal runs of consecutive hyperbolic rows, as closed `t` intervals.
pub fn hyperbolic_windows(report: &ScanReport) -> Vec<(f64, f64)> {
    let mut windows = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for row in &report.rows {
        match (&mut open, row.hyperbolic) {
            (Some(w), true) => w.1 = row.t,
            (None, true) => open = Some((row.t, row.t)),
            (Some(_), false) => windows.push(open.take().unwrap()),
            (None, false) => {}
        }
    }
    windows.extend(open);
    windows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneadingConstancy {
    pub constant: bool,
    pub witness: Option<KneadingWitness>,
}

/// Compares kneading prefixes of grid-adjacent parameters; the witness is the
/// first adjacent pair that differs.
pub fn kneading_constancy(fam: &Family, grid: usize, prefix_len: usize) -> Result<KneadingConstancy> {
    let ts = grid_points(grid)?;
    let invariants: Vec<KneadingInvariant> =
        ts.par_iter().map(|&t| kneading_invariant(&fam.at(t), prefix_len)).collect::<Result<_>>()?;
    let witness = ts.windows(2).zip(invariants.windows(2)).find_map(|(t, k)| {
        first_kneading_difference(&k[0], &k[1], prefix_len).map(|(_, index)| KneadingWitness {
            t1: t[0],
            t2: t[1],
            index,
        })
    });
    Ok(KneadingConstancy { constant: witness.is_none(), witness })
}

/// A parameter at which every critical point is attracted to a cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicParameter {
    pub t: f64,
    pub orbit: PeriodicOrbit,
}

/// Bisects between the parameters of a kneading witness down to the
/// parameter where the prefix changes, then looks for a hyperbolic map there.
///
/// For unimodal families the prefix only changes where the critical point
/// is periodic, and such a parameter carries a superstable cycle.
pub fn refine_kneading_witness(
    fam: &Family,
    witness: &KneadingWitness,
    prefix_len: usize,
    budget: &AttractorBudget,
) -> Result<Option<HyperbolicParameter>> {
    let reference = kneading_invariant(&fam.at(witness.t1), prefix_len)?;
    let differs = |t: f64| -> Result<bool> {
        let k = kneading_invariant(&fam.at(t), prefix_len)?;
        Ok(first_kneading_difference(&reference, &k, prefix_len).is_some())
    };
    let (mut lo, mut hi) = (witness.t1, witness.t2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if differs(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let width = (witness.t2 - witness.t1).abs();
    let mut candidates = vec![lo, hi];
    for k in 1..=20 {
        let offset = width * 2f64.powi(-30 - k);
        candidates.extend([lo - offset, hi + offset]);
    }
    for t in candidates {
        if !(witness.t1..=witness.t2).contains(&t) {
            continue;
        }
        let Ok(report) = is_hyperbolic(&fam.at(t), budget) else {
            continue;
        };
        if report.hyperbolic {
            if let Some(orbit) = report.attractor() {
                return Ok(Some(HyperbolicParameter { t, orbit: orbit.clone() }));
            }
        }
    }
    Ok(None)
}

/// Displaces every sample by `epsilon` along the unit normal of the sampled
/// curve in the `(a, b)` plane, keeping `t`.
pub fn displace_curve(curve: &FamilyCurve, epsilon: f64) -> FamilyCurve {
    let s = &curve.samples;
    let n = s.len();
    let samples = (0..n)
        .map(|i| {
            let (p, q) = (s[i.saturating_sub(1)], s[(i + 1).min(n - 1)]);
            let (da, db) = (q.a - p.a, q.b - p.b);
            let norm = da.hypot(db);
            let (na, nb) = if norm > 0.0 { (-db / norm, da / norm) } else { (0.0, 0.0) };
            CurveSample { t: s[i].t, a: s[i].a + epsilon * na, b: s[i].b + epsilon * nb }
        })
        .collect();
    FamilyCurve { samples, stops: Vec::new() }
}

pub fn perturb_and_scan(
    curve: &FamilyCurve,
    epsilon: f64,
    grid: usize,
    budget: &ScanBudget,
) -> Result<ScanReport> {
    scan_family(&Family::curve(&displace_curve(curve, epsilon))?, grid, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn identity_has_zero_exponent() {
        let est = lyapunov(&CubicMap::new(1.0, 0.0), 0.3, 1000, 10).unwrap();
        assert_eq!(est.exponent, 0.0);
        assert_eq!(est.skipped, 0);
    }

    #[test]
    fn superstable_exponent_is_flagged() {
        let est = lyapunov(&QuadraticMap::new(2.0), 0.3, 10_000, 1000).unwrap();
        assert!(est.attracting_dominated);
        assert!(est.exponent <= 0.0);
    }

    #[test]
    fn lyapunov_rejects_empty_sum() {
        assert!(lyapunov(&QuadraticMap::new(3.0), 0.3, 0, 10).is_err());
    }

    #[test]
    fn full_logistic_exponent() {
        let est = lyapunov(&QuadraticMap::new(4.0), 0.2137, 1_000_000, 1000).unwrap();
        assert!((est.exponent - LN_2).abs() < 5e-3, "{}", est.exponent);
    }

    #[test]
    fn invalid_grid() {
        let fam = Family::Quadratic { mu0: 2.0, mu1: 4.0 };
        assert!(matches!(scan_family(&fam, 1, &ScanBudget::default()), Err(Error::InvalidGrid(1))));
    }

    #[test]
    fn curve_interpolation() {
        let samples = vec![
            CurveSample { t: 0.0, a: 0.0, b: 0.0 },
            CurveSample { t: 0.5, a: 1.0, b: 2.0 },
            CurveSample { t: 1.0, a: 2.0, b: 2.0 },
        ];
        let fam = Family::Curve(samples);
        assert_eq!(fam.at(0.25).params(), (0.5, Some(1.0)));
        assert_eq!(fam.at(0.5).params(), (1.0, Some(2.0)));
        assert_eq!(fam.at(1.0).params(), (2.0, Some(2.0)));
        assert!(Family::curve(&FamilyCurve::default()).is_err());
    }

    #[test]
    fn windows_of_synthetic_reports() {
        let row = |t: f64, h: bool| ScanRow {
            t,
            a: 0.0,
            b: None,
            hyperbolic: h,
            attractor_period: None,
            multiplier: None,
            lyapunov_c1: None,
            lyapunov_c2: None,
            kneading_prefix: String::new(),
            no_cycle: true,
            flags: vec![],
        };
        let all = ScanReport { rows: vec![row(0.0, true), row(0.5, true), row(1.0, true)] };
        assert_eq!(hyperbolic_windows(&all), vec![(0.0, 1.0)]);
        let mixed = ScanReport {
            rows: vec![row(0.0, true), row(0.25, false), row(0.5, true), row(0.75, true), row(1.0, false)],
        };
        assert_eq!(hyperbolic_windows(&mixed), vec![(0.0, 0.0), (0.5, 0.75)]);
        assert!(hyperbolic_windows(&ScanReport::default()).is_empty());
    }

    #[test]
    fn constant_family_has_constant_kneading() {
        let fam = Family::constant(CubicMap::CHEBYSHEV);
        let res = kneading_constancy(&fam, 11, 10).unwrap();
        assert!(res.constant);
        assert!(res.witness.is_none());
    }

    #[test]
    fn degenerate_rows_are_flagged() {
        let fam = Family::Segment { a0: 1.0, b0: 0.0, a1: 1.0, b1: 0.0 };
        let report = scan_family(&fam, 3, &ScanBudget::default()).unwrap();
        assert!(report.rows.iter().all(|r| r.is_degenerate() && !r.hyperbolic));
    }

    #[test]
    fn csv_has_fixed_columns_and_empty_optionals() {
        let fam = Family::Quadratic { mu0: 3.2, mu1: 3.2 };
        let budget = ScanBudget { lyapunov_n: 1000, ..ScanBudget::default() };
        let report = scan_family(&fam, 2, &budget).unwrap();
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,a,b,hyperbolic,attractor_period,multiplier,lyapunov_c1,lyapunov_c2,kneading_prefix,no_cycle,flags"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(fields[2], "");
        assert_eq!(fields[3], "true");
        assert_eq!(fields[4], "2");
        assert_eq!(fields[7], "");
    }
}
