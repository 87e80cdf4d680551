//! Normalized cubic interval maps and their pointwise analysis.
//!
//! A [`CubicMap`] is `f(x) = a x + b x^2 + (1 - a - b) x^3`, so `f(0) = 0` and
//! `f(1) = 1` for every choice of `(a, b)`. The [`IntervalMap`] trait lets the
//! symbolic and attractor machinery run unchanged on the unimodal
//! [`QuadraticMap`] adapter `x -> mu x (1 - x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|f'(x)|` at or below this is treated as a critical point.
pub const TOL_ROOT: f64 = 1e-12;
/// How far an iterate may leave `[0, 1]` before the orbit counts as escaped.
pub const TOL_ESCAPE: f64 = 1e-9;

/// Critical points of an interval map, ordered left to right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Criticals {
    Unimodal(f64),
    Bimodal(CriticalPair),
}

impl Criticals {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            Criticals::Unimodal(c) => vec![c],
            Criticals::Bimodal(pair) => vec![pair.c1, pair.c2],
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Criticals::Unimodal(_) => 1,
            Criticals::Bimodal(_) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The two interior critical points `0 < c1 < c2 < 1` of a bimodal cubic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPair {
    pub c1: f64,
    pub c2: f64,
}

/// A smooth map of the unit interval with exact low-order derivatives.
pub trait IntervalMap: Send + Sync {
    fn eval(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    fn second_derivative(&self, x: f64) -> f64;
    fn third_derivative(&self, x: f64) -> f64;
    fn criticals(&self) -> Result<Criticals>;

    /// `Sf = f'''/f' - (3/2) (f''/f')^2`.
    fn schwarzian(&self, x: f64) -> Result<f64> {
        let d1 = self.derivative(x);
        if d1.abs() <= TOL_ROOT {
            return Err(Error::NearCriticalPoint { x, derivative: d1 });
        }
        let ratio = self.second_derivative(x) / d1;
        Ok(self.third_derivative(x) / d1 - 1.5 * ratio * ratio)
    }

    /// Returns `x0, f(x0), ..., f^n(x0)`, failing if an iterate leaves the
    /// unit interval by more than [`TOL_ESCAPE`].
    fn iterate(&self, x0: f64, n: usize) -> Result<Orbit> {
        check_in_domain(0, x0)?;
        let mut points = Vec::with_capacity(n + 1);
        points.push(x0);
        let mut x = x0;
        for step in 1..=n {
            x = self.eval(x);
            check_in_domain(step, x)?;
            points.push(x);
        }
        Ok(Orbit { origin: x0, points })
    }

    /// `f^n(x)`, with the same escape rule as [`IntervalMap::iterate`].
    fn iterate_n(&self, x0: f64, n: usize) -> Result<f64> {
        let mut x = x0;
        for step in 1..=n {
            x = self.eval(x);
            check_in_domain(step, x)?;
        }
        Ok(x)
    }
}

pub(crate) fn check_in_domain(step: usize, x: f64) -> Result<()> {
    if (-TOL_ESCAPE..=1.0 + TOL_ESCAPE).contains(&x) {
        Ok(())
    } else {
        Err(Error::EscapedDomain { step, value: x })
    }
}

/// A finite forward orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub origin: f64,
    pub points: Vec<f64>,
}

/// `f(x) = a x + b x^2 + (1 - a - b) x^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicMap {
    pub a: f64,
    pub b: f64,
}

impl CubicMap {
    /// The Chebyshev cubic `9x - 24x^2 + 16x^3`, conjugate to angle tripling.
    pub const CHEBYSHEV: CubicMap = CubicMap { a: 9.0, b: -24.0 };

    pub fn new(a: f64, b: f64) -> Self {
        CubicMap { a, b }
    }

    /// Cubic coefficient `1 - a - b`.
    pub fn d(&self) -> f64 {
        1.0 - self.a - self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1.0 && self.b == 0.0
    }

    /// Solves `f'(x) = a + 2b x + 3d x^2 = 0` without cancellation and
    /// returns the ordered pair if both roots lie in `(0, 1)`.
    pub fn critical_points(&self) -> Result<CriticalPair> {
        let (qa, qb, qc) = (3.0 * self.d(), 2.0 * self.b, self.a);
        let discriminant = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || !(discriminant > 0.0) {
            return Err(Error::DegenerateCritical { discriminant });
        }
        let sqrt_disc = discriminant.sqrt();
        // |q| >= sqrt_disc / 2 > 0
        let q = -0.5 * (qb + qb.signum() * sqrt_disc);
        let (r1, r2) = (q / qa, qc / q);
        let (c1, c2) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        for root in [c1, c2] {
            if !(root > 0.0 && root < 1.0) {
                return Err(Error::OutOfRange { root });
            }
        }
        Ok(CriticalPair { c1, c2 })
    }
}

impl IntervalMap for CubicMap {
    fn eval(&self, x: f64) -> f64 {
        // f(x) - x = x (x - 1) (d x + 1 - a); this nesting keeps f(0) = 0 and
        // f(1) = 1 exact in floating point.
        x + x * (x - 1.0) * (self.d() * x + (1.0 - self.a))
    }

    fn derivative(&self, x: f64) -> f64 {
        self.a + x * (2.0 * self.b + 3.0 * self.d() * x)
    }

    fn second_derivative(&self, x: f64) -> f64 {
        2.0 * self.b + 6.0 * self.d() * x
    }

    fn third_derivative(&self, _x: f64) -> f64 {
        6.0 * self.d()
    }

    fn criticals(&self) -> Result<Criticals> {
        self.critical_points().map(Criticals::Bimodal)
    }
}

/// The logistic map `x -> mu x (1 - x)`, the unimodal test bed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticMap {
    pub mu: f64,
}

impl QuadraticMap {
    pub fn new(mu: f64) -> Self {
        QuadraticMap { mu }
    }
}

impl IntervalMap for QuadraticMap {
    fn eval(&self, x: f64) -> f64 {
        self.mu * x * (1.0 - x)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.mu * (1.0 - 2.0 * x)
    }

    fn second_derivative(&self, _x: f64) -> f64 {
        -2.0 * self.mu
    }

    fn third_derivative(&self, _x: f64) -> f64 {
        0.0
    }

    fn criticals(&self) -> Result<Criticals> {
        if self.mu == 0.0 {
            return Err(Error::DegenerateCritical { discriminant: 0.0 });
        }
        Ok(Criticals::Unimodal(0.5))
    }
}
