//! The gap of loneliness `δ(v₁,…,vₙ) = max_t min_i ‖t vᵢ‖` and the multiplicity
//! function `F(t) = #{i : ‖t vᵢ‖ ≤ δ}`.
//!
//! `t ↦ min_i ‖t vᵢ‖` is piecewise linear with slopes `±|vᵢ|`. A local maximum is
//! either the peak of a single `‖t vᵢ‖`, at some `a / (2|vᵢ|)`, or a crossing of
//! an increasing piece with a decreasing one, at some `a / (|vᵢ| + |vⱼ|)`.
//! [`compute_delta`] enumerates those candidate times (together with the
//! `a / ||vᵢ| − |vⱼ||` crossings) and evaluates every norm in exact integer
//! arithmetic over the candidate's denominator.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{norm_of, CirclePoint, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VelocityTuple {
    velocities: Vec<i64>,
}

impl VelocityTuple {
    pub fn new(velocities: Vec<i64>) -> Result<Self> {
        if velocities.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(i) = velocities.iter().position(|&v| v == 0) {
            return Err(Error::ZeroVelocity(i));
        }
        Ok(VelocityTuple { velocities })
    }

    pub fn velocities(&self) -> &[i64] {
        &self.velocities
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }

    pub fn max_abs(&self) -> u64 {
        self.velocities.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Positive, strictly increasing, with overall gcd one.
    pub fn is_canonical(&self) -> bool {
        self.velocities[0] > 0
            && self.velocities.windows(2).all(|w| w[0] < w[1])
            && self.gcd() == 1
    }

    pub fn has_duplicates(&self) -> bool {
        let set: BTreeSet<u64> = self.velocities.iter().map(|v| v.unsigned_abs()).collect();
        set.len() < self.velocities.len()
    }

    fn gcd(&self) -> u64 {
        self.velocities.iter().fold(0u64, |g, v| g.gcd(&v.unsigned_abs()))
    }

    /// Absolute values, sorted, divided by their gcd. Duplicates are kept.
    pub fn canonicalize(&self) -> VelocityTuple {
        let g = self.gcd();
        let mut out: Vec<i64> = self.velocities.iter().map(|v| (v.unsigned_abs() / g) as i64).collect();
        out.sort_unstable();
        VelocityTuple { velocities: out }
    }

    pub fn dedup(&self) -> VelocityTuple {
        let set: BTreeSet<i64> = self.velocities.iter().map(|v| v.abs()).collect();
        VelocityTuple { velocities: set.into_iter().collect() }
    }
}

impl fmt::Display for VelocityTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.velocities.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for VelocityTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<Vec<i64>> for VelocityTuple {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        VelocityTuple::new(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapResult {
    pub delta: Rational,
    pub witness: CirclePoint,
    pub candidates_examined: u64,
}

/// Best candidate seen so far: value `num/den` attained at time `a/den`.
#[derive(Clone, Copy, Debug)]
struct Best {
    num: u64,
    den: u64,
    a: u64,
}

impl Best {
    const NONE: Best = Best { num: 0, den: 1, a: 0 };

    fn cmp_value(&self, num: u64, den: u64) -> Ordering {
        (num as u128 * self.den as u128).cmp(&(self.num as u128 * den as u128))
    }

    /// Larger value wins; equal values prefer the smaller witness.
    fn better(self, other: Best) -> Best {
        match other.cmp_value(self.num, self.den) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                let lhs = self.a as u128 * other.den as u128;
                let rhs = other.a as u128 * self.den as u128;
                if lhs <= rhs {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn candidate_denominators(speeds: &[u64]) -> Vec<u64> {
    let mut set = BTreeSet::new();
    for (i, &u) in speeds.iter().enumerate() {
        set.insert(2 * u);
        for &w in &speeds[i + 1..] {
            set.insert(u + w);
            if u != w {
                set.insert(u.abs_diff(w));
            }
        }
    }
    set.into_iter().collect()
}

/// Scans `a/den` for `1 <= a <= den/2`, updating `best`. Returns the count scanned.
fn scan_denominator(speeds: &[u64], den: u64, best: &mut Best) -> u64 {
    let half = den / 2;
    for a in 1..=half {
        let mut lowest = u64::MAX;
        let mut pruned = false;
        for &u in speeds {
            let r = ((a as u128 * u as u128) % den as u128) as u64;
            let norm = r.min(den - r);
            if best.cmp_value(norm, den) == Ordering::Less {
                pruned = true;
                break;
            }
            lowest = lowest.min(norm);
        }
        if !pruned {
            *best = best.better(Best { num: lowest, den, a });
        }
    }
    half
}

fn finish(best: Best, examined: u64) -> GapResult {
    GapResult {
        delta: Rational::new(best.num as i64, best.den as i64),
        witness: CirclePoint::from_ratio(best.a as i64, best.den as i64),
        candidates_examined: examined,
    }
}

fn speeds_of(v: &VelocityTuple) -> Result<Vec<u64>> {
    if v.is_empty() {
        return Err(Error::EmptyTuple);
    }
    if let Some(i) = v.velocities().iter().position(|&x| x == 0) {
        return Err(Error::ZeroVelocity(i));
    }
    // duplicates never change the minimum
    let set: BTreeSet<u64> = v.velocities().iter().map(|x| x.unsigned_abs()).collect();
    // larger speeds tend to reach small norms first, which prunes sooner
    Ok(set.into_iter().rev().collect())
}

/// Exact `δ(v)` with the smallest witness time attaining it.
pub fn compute_delta(v: &VelocityTuple) -> Result<GapResult> {
    let speeds = speeds_of(v)?;
    let mut best = Best::NONE;
    let mut examined = 0;
    for den in candidate_denominators(&speeds) {
        examined += scan_denominator(&speeds, den, &mut best);
    }
    Ok(finish(best, examined))
}

/// Same result as [`compute_delta`], with denominators split across the rayon pool.
pub fn compute_delta_parallel(v: &VelocityTuple) -> Result<GapResult> {
    let speeds = speeds_of(v)?;
    let (best, examined) = candidate_denominators(&speeds)
        .into_par_iter()
        .map(|den| {
            let mut best = Best::NONE;
            let n = scan_denominator(&speeds, den, &mut best);
            (best, n)
        })
        .reduce(|| (Best::NONE, 0), |(a, n), (b, m)| (a.better(b), n + m));
    Ok(finish(best, examined))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub passes: bool,
    pub norms: Vec<Rational>,
}

/// Evaluates every `‖t vᵢ‖` and reports whether all of them reach `threshold`.
pub fn probe_time(v: &VelocityTuple, t: &CirclePoint, threshold: &Rational) -> Probe {
    let norms: Vec<Rational> = v
        .velocities()
        .iter()
        .map(|&x| norm_of(&(t.value() * Rational::integer(x))))
        .collect();
    let passes = norms.iter().all(|x| x >= threshold);
    Probe { passes, norms }
}

fn check_radius(delta: &Rational) -> Result<()> {
    if !delta.is_positive() || delta >= &Rational::half() {
        return Err(Error::RadiusOutOfRange(delta.clone()));
    }
    Ok(())
}

/// A non-negative integer step function on `[0, 1)`.
///
/// `piece_values[k]` is the value on the open piece `(breakpoints[k], breakpoints[k+1])`
/// (the last piece ends at `1`); `point_values[k]` is the value at `breakpoints[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    pub breakpoints: Vec<Rational>,
    pub piece_values: Vec<u32>,
    pub point_values: Vec<u32>,
}

impl StepFunction {
    pub fn eval(&self, t: &CirclePoint) -> u32 {
        match self.breakpoints.binary_search(t.value()) {
            Ok(k) => self.point_values[k],
            Err(k) => self.piece_values[k - 1],
        }
    }

    pub fn max_value(&self) -> u32 {
        self.piece_values.iter().chain(&self.point_values).copied().max().unwrap_or(0)
    }

    pub fn min_piece_value(&self) -> u32 {
        self.piece_values.iter().copied().min().unwrap_or(0)
    }

    fn piece_end(&self, k: usize) -> Rational {
        self.breakpoints.get(k + 1).cloned().unwrap_or_else(Rational::one)
    }

    /// `∫ F^power` over the circle.
    pub fn moment(&self, power: u32) -> Rational {
        (0..self.breakpoints.len())
            .map(|k| {
                let len = self.piece_end(k) - &self.breakpoints[k];
                len * Rational::integer((self.piece_values[k] as i64).pow(power))
            })
            .sum()
    }
}

/// `F(t) = Σᵢ 1[‖t vᵢ‖ ≤ δ]` as an exact step function.
pub fn multiplicity_f(v: &VelocityTuple, delta: &Rational) -> Result<StepFunction> {
    check_radius(delta)?;
    let mut points = BTreeSet::new();
    points.insert(Rational::zero());
    for &x in v.velocities() {
        let u = x.unsigned_abs() as i64;
        for a in 0..u {
            let center = Rational::new(a, u);
            let r = delta / &Rational::integer(u);
            points.insert((&center - &r).fract_floor());
            points.insert((&center + &r).fract_floor());
        }
    }
    let breakpoints: Vec<Rational> = points.into_iter().collect();
    let count = |t: &Rational| -> u32 {
        v.velocities()
            .iter()
            .filter(|&&x| &norm_of(&(t * Rational::integer(x))) <= delta)
            .count() as u32
    };
    let two = Rational::integer(2);
    let mut piece_values = Vec::with_capacity(breakpoints.len());
    let mut point_values = Vec::with_capacity(breakpoints.len());
    for (k, b) in breakpoints.iter().enumerate() {
        let end = breakpoints.get(k + 1).cloned().unwrap_or_else(Rational::one);
        let mid = (b + &end) / &two;
        point_values.push(count(b));
        piece_values.push(count(&mid));
    }
    Ok(StepFunction { breakpoints, piece_values, point_values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moments {
    pub m1: Rational,
    pub m2: Rational,
    pub m3: Rational,
}

/// `∫F`, `∫F²`, `∫F³` for the multiplicity function at radius `delta`.
pub fn moments(v: &VelocityTuple, delta: &Rational) -> Result<Moments> {
    let f = multiplicity_f(v, delta)?;
    Ok(Moments { m1: f.moment(1), m2: f.moment(2), m3: f.moment(3) })
}
