//! Symbolic dynamics: lap symbols, itineraries and kneading invariants.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::Result;
use crate::polymap::{Criticals, IntervalMap};

/// Distance to a critical point at which a point is coded as a critical
/// symbol instead of a lap symbol.
pub const TOL_SYMBOL: f64 = 1e-9;

/// Lap and critical symbols. Bimodal maps use `L C1 M C2 R`, unimodal maps
/// use `L C R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    L,
    C1,
    M,
    C2,
    R,
    C,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::C1 => '1',
            Symbol::M => 'M',
            Symbol::C2 => '2',
            Symbol::R => 'R',
            Symbol::C => 'C',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        Some(match c {
            'L' => Symbol::L,
            '1' => Symbol::C1,
            'M' => Symbol::M,
            '2' => Symbol::C2,
            'R' => Symbol::R,
            'C' => Symbol::C,
            _ => return None,
        })
    }

    pub fn is_critical(self) -> bool {
        matches!(self, Symbol::C1 | Symbol::C2 | Symbol::C)
    }
}

pub fn symbol_of(x: f64, crit: &Criticals, tol_symbol: f64) -> Symbol {
    match *crit {
        Criticals::Unimodal(c) => {
            if (x - c).abs() <= tol_symbol {
                Symbol::C
            } else if x < c {
                Symbol::L
            } else {
                Symbol::R
            }
        }
        Criticals::Bimodal(pair) => {
            if (x - pair.c1).abs() <= tol_symbol {
                Symbol::C1
            } else if (x - pair.c2).abs() <= tol_symbol {
                Symbol::C2
            } else if x < pair.c1 {
                Symbol::L
            } else if x < pair.c2 {
                Symbol::M
            } else {
                Symbol::R
            }
        }
    }
}

/// Symbols of `x0, f(x0), ..., f^{n-1}(x0)`.
///
/// Coding continues through critical hits; `critical_hit` holds the index of
/// the first critical symbol, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub symbols: Vec<Symbol>,
    pub critical_hit: Option<usize>,
}

impl Itinerary {
    pub fn truncated_at_critical(&self) -> bool {
        self.critical_hit.is_some()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of the first differing symbol within the first `upto` symbols.
    pub fn first_difference(&self, other: &Itinerary, upto: usize) -> Option<usize> {
        self.symbols.iter().zip(&other.symbols).take(upto).position(|(a, b)| a != b)
    }
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Itinerary {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn itinerary<M: IntervalMap + ?Sized>(map: &M, x0: f64, n: usize) -> Result<Itinerary> {
    itinerary_with(map, &map.criticals()?, x0, n, TOL_SYMBOL)
}

pub fn itinerary_with<M: IntervalMap + ?Sized>(
    map: &M,
    crit: &Criticals,
    x0: f64,
    n: usize,
    tol_symbol: f64,
) -> Result<Itinerary> {
    let mut symbols = Vec::with_capacity(n);
    let mut critical_hit = None;
    if n == 0 {
        return Ok(Itinerary { symbols, critical_hit });
    }
    let orbit = map.iterate(x0, n - 1)?;
    for (k, &x) in orbit.points.iter().enumerate() {
        let s = symbol_of(x, crit, tol_symbol);
        if s.is_critical() && critical_hit.is_none() {
            critical_hit = Some(k);
        }
        symbols.push(s);
    }
    Ok(Itinerary { symbols, critical_hit })
}

/// Itineraries of the critical values, one per critical point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KneadingInvariant {
    pub itineraries: Vec<Itinerary>,
    pub length: usize,
}

impl KneadingInvariant {
    /// Itinerary of `f(c1)` (or of `f(c)` for unimodal maps).
    pub fn k1(&self) -> &Itinerary {
        &self.itineraries[0]
    }

    /// Itinerary of `f(c2)`; `None` for unimodal maps.
    pub fn k2(&self) -> Option<&Itinerary> {
        self.itineraries.get(1)
    }
}

impl fmt::Display for KneadingInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, it) in self.itineraries.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

pub fn kneading_invariant<M: IntervalMap + ?Sized>(map: &M, n: usize) -> Result<KneadingInvariant> {
    let crit = map.criticals()?;
    let itineraries = crit
        .points()
        .into_iter()
        .map(|c| itinerary_with(map, &crit, map.eval(c), n, TOL_SYMBOL))
        .collect::<Result<Vec<_>>>()?;
    Ok(KneadingInvariant { itineraries, length: n })
}

/// Symbolwise equality of the first `upto` symbols. Invariants of maps with
/// different numbers of critical points are never equal.
pub fn kneading_equal(k1: &KneadingInvariant, k2: &KneadingInvariant, upto: usize) -> bool {
    first_kneading_difference(k1, k2, upto).is_none()
}

/// First `(itinerary index, symbol index)` at which two invariants differ.
pub fn first_kneading_difference(
    k1: &KneadingInvariant,
    k2: &KneadingInvariant,
    upto: usize,
) -> Option<(usize, usize)> {
    if k1.itineraries.len() != k2.itineraries.len() {
        return Some((0, 0));
    }
    let upto = upto.min(k1.length).min(k2.length);
    k1.itineraries
        .iter()
        .zip(&k2.itineraries)
        .enumerate()
        .find_map(|(i, (a, b))| a.first_difference(b, upto).map(|j| (i, j)))
}

/// Two parameters whose kneading data first differ at symbol `index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KneadingWitness {
    pub t1: f64,
    pub t2: f64,
    pub index: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymap::{CriticalPair, CubicMap, QuadraticMap};
    use proptest::prelude::*;

    const CHEB: CubicMap = CubicMap::CHEBYSHEV;

    fn s(text: &str) -> Vec<Symbol> {
        text.chars().map(|c| Symbol::from_char(c).unwrap()).collect()
    }

    #[test]
    fn symbol_examples() {
        let crit = Criticals::Bimodal(CriticalPair { c1: 0.25, c2: 0.75 });
        assert_eq!(symbol_of(0.0, &crit, TOL_SYMBOL), Symbol::L);
        assert_eq!(symbol_of(0.25, &crit, TOL_SYMBOL), Symbol::C1);
        assert_eq!(symbol_of(0.5, &crit, TOL_SYMBOL), Symbol::M);
        assert_eq!(symbol_of(0.75 + 5e-10, &crit, TOL_SYMBOL), Symbol::C2);
        assert_eq!(symbol_of(0.9, &crit, TOL_SYMBOL), Symbol::R);
    }

    #[test]
    fn itinerary_examples() {
        assert_eq!(itinerary(&CHEB, 0.0, 4).unwrap().symbols, s("LLLL"));
        let it = itinerary(&CHEB, 0.25, 4).unwrap();
        assert_eq!(it.to_string(), "1RRR");
        assert_eq!(it.critical_hit, Some(0));
        assert_eq!(itinerary(&CHEB, 0.75, 4).unwrap().to_string(), "2LLL");
        assert!(itinerary(&CHEB, 0.0, 0).unwrap().is_empty());
    }

    #[test]
    fn kneading_of_chebyshev() {
        let k = kneading_invariant(&CHEB, 3).unwrap();
        assert_eq!(k.k1().to_string(), "RRR");
        assert_eq!(k.k2().unwrap().to_string(), "LLL");
        assert_eq!(k.to_string(), "RRR|LLL");
    }

    #[test]
    fn full_logistic_kneading() {
        let k = kneading_invariant(&QuadraticMap::new(4.0), 6).unwrap();
        assert_eq!(k.k1().to_string(), "RLLLLL");
        assert!(k.k2().is_none());
    }

    #[test]
    fn equality_is_reflexive_and_detects_differences() {
        let k = kneading_invariant(&CHEB, 10).unwrap();
        assert!(kneading_equal(&k, &k, 10));
        let other = kneading_invariant(&CubicMap::new(7.0, -17.5), 10).unwrap();
        assert!(!kneading_equal(&k, &other, 5));
        let uni = kneading_invariant(&QuadraticMap::new(4.0), 10).unwrap();
        assert!(!kneading_equal(&k, &uni, 10));
    }

    #[test]
    fn critical_symbol_only_equals_itself() {
        let a = KneadingInvariant {
            itineraries: vec![Itinerary { symbols: s("R1L"), critical_hit: Some(1) }],
            length: 3,
        };
        let b = KneadingInvariant {
            itineraries: vec![Itinerary { symbols: s("RML"), critical_hit: None }],
            length: 3,
        };
        assert_eq!(first_kneading_difference(&a, &b, 3), Some((0, 1)));
        assert!(kneading_equal(&a, &b, 1));
    }

    proptest! {
        #[test]
        fn fixed_points_have_constant_itineraries(mu in 1.5f64..3.9) {
            let q = QuadraticMap::new(mu);
            let p = 1.0 - 1.0 / mu;
            prop_assume!((p - 0.5).abs() > 1e-6);
            let it = itinerary(&q, p, 20).unwrap();
            let first = it.symbols[0];
            prop_assert!(it.symbols.iter().all(|&x| x == first));
        }

        #[test]
        fn prefixes_are_stable_under_extension(a in 5.5f64..8.0, b in -19.5f64..-14.0, n in 1usize..40) {
            let m = CubicMap::new(a, b);
            prop_assume!(m.critical_points().is_ok());
            if let (Ok(short), Ok(long)) = (kneading_invariant(&m, n), kneading_invariant(&m, n + 1)) {
                for (x, y) in short.itineraries.iter().zip(&long.itineraries) {
                    prop_assert_eq!(&x.symbols[..], &y.symbols[..n]);
                }
            }
        }
    }
}
