//! Generalised arithmetic progressions `P(w₁,…,w_r; N₁,…,N_r)`.
//!
//! A progression is kept as its presentation (generators and dimensions), since
//! dilation and properness depend on it and not only on the element set.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::bohr::{bohr_measure, BohrSpec};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct Progression {
    generators: Vec<i64>,
    dimensions: Vec<Rational>,
}

impl Progression {
    pub fn new(generators: Vec<i64>, dimensions: Vec<Rational>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyProgression);
        }
        if generators.len() != dimensions.len() {
            return Err(Error::RankMismatch {
                frequencies: generators.len(),
                radii: dimensions.len(),
            });
        }
        if let Some(d) = dimensions.iter().find(|d| d.is_negative()) {
            return Err(Error::NegativeDimension(d.clone()));
        }
        Ok(Progression { generators, dimensions })
    }

    pub fn with_integer_dims(generators: Vec<i64>, dims: &[i64]) -> Result<Self> {
        Self::new(generators, dims.iter().map(|&d| Rational::integer(d)).collect())
    }

    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    pub fn dimensions(&self) -> &[Rational] {
        &self.dimensions
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Largest admissible `|nᵢ|` per coordinate, `⌊Nᵢ⌋`.
    pub fn coefficient_bounds(&self) -> Vec<i64> {
        self.dimensions
            .iter()
            .map(|d| d.floor().to_i64().expect("dimension too large"))
            .collect()
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        let d: Vec<String> = self.dimensions.iter().map(|x| x.to_string()).collect();
        write!(f, "P({}; {})", g.join(","), d.join(","))
    }
}

impl fmt::Debug for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `tP`: same generators, dimensions scaled by `t > 0`.
pub fn dilate(p: &Progression, t: &Rational) -> Result<Progression> {
    if !t.is_positive() {
        return Err(Error::NonPositiveScale(t.clone()));
    }
    Ok(Progression {
        generators: p.generators.clone(),
        dimensions: p.dimensions.iter().map(|d| d * t).collect(),
    })
}

/// Number of coefficient vectors with `|nᵢ| <= bounds[i]` and `Σ nᵢ wᵢ = 0`.
fn zero_sum_count(generators: &[i64], bounds: &[i64]) -> u64 {
    match generators.len() {
        1 => {
            if generators[0] == 0 {
                (2 * bounds[0] + 1) as u64
            } else {
                1
            }
        }
        2 => rank_two_count(generators, bounds),
        _ => meet_in_the_middle_count(generators, bounds),
    }
}

fn rank_two_count(w: &[i64], b: &[i64]) -> u64 {
    let (w1, w2) = (w[0] as i128, w[1] as i128);
    let mut count = 0u64;
    for n1 in -b[0]..=b[0] {
        let s = n1 as i128 * w1;
        if w2 == 0 {
            if s == 0 {
                count += (2 * b[1] + 1) as u64;
            }
        } else if s % w2 == 0 && (s / w2).abs() <= b[1] as i128 {
            count += 1;
        }
    }
    count
}

/// Visits every partial sum `Σ nᵢ wᵢ` over the box.
fn for_each_sum(generators: &[i64], bounds: &[i64], mut visit: impl FnMut(i128)) {
    if generators.is_empty() {
        visit(0);
        return;
    }
    let mut coeffs: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    loop {
        let s: i128 = coeffs
            .iter()
            .zip(generators)
            .map(|(&n, &w)| n as i128 * w as i128)
            .sum();
        visit(s);
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return;
            }
            if coeffs[k] < bounds[k] {
                coeffs[k] += 1;
                break;
            }
            coeffs[k] = -bounds[k];
            k += 1;
        }
    }
}

fn meet_in_the_middle_count(generators: &[i64], bounds: &[i64]) -> u64 {
    let mid = generators.len() / 2;
    let mut left: HashMap<i128, u64> = HashMap::new();
    for_each_sum(&generators[..mid], &bounds[..mid], |s| *left.entry(s).or_insert(0) += 1);
    let mut count = 0;
    for_each_sum(&generators[mid..], &bounds[mid..], |s| {
        if let Some(c) = left.get(&-s) {
            count += c;
        }
    });
    count
}

/// `μ(P)`: the number of `(n₁,…,n_r)` with `|nᵢ| <= Nᵢ` and `Σ nᵢ wᵢ = 0`. Always `>= 1`.
pub fn multiplicity(p: &Progression) -> u64 {
    zero_sum_count(&p.generators, &p.coefficient_bounds())
}

/// Whether the sums `Σ nᵢ wᵢ`, `|nᵢ| <= t Nᵢ`, are pairwise distinct.
///
/// Two coefficient vectors collide exactly when their difference is a nonzero
/// zero-sum vector with `|dᵢ| <= 2⌊t Nᵢ⌋`, so this counts zero sums over that box.
/// When every `t Nᵢ` is an integer the box is that of `2tP` and the test reads `μ(2tP) = 1`.
pub fn is_t_proper(p: &Progression, t: &Rational) -> Result<bool> {
    let scaled = dilate(p, t)?;
    let bounds: Vec<i64> = scaled.coefficient_bounds().iter().map(|b| 2 * b).collect();
    Ok(zero_sum_count(&p.generators, &bounds) == 1)
}

/// The sufficient condition `μ(2tP) = 1`.
pub fn double_dilate_is_collision_free(p: &Progression, t: &Rational) -> Result<bool> {
    let two_t = t * &Rational::integer(2);
    Ok(multiplicity(&dilate(p, &two_t)?) == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LodRatio {
    pub measure: Rational,
    pub mu: u64,
    pub ratio: Rational,
}

/// Compares `m(B(v; δ))` against `μ(P(v; 1/δ)) Π δⱼ`.
pub fn lod_ratio(spec: &BohrSpec) -> Result<LodRatio> {
    let measure = bohr_measure(spec);
    let dual = Progression::new(
        spec.frequencies().to_vec(),
        spec.radii().iter().map(Rational::recip).collect(),
    )?;
    let mu = multiplicity(&dual);
    let volume = spec.radii().iter().fold(Rational::one(), |acc, d| acc * d);
    let ratio = &measure / &(Rational::integer(mu as i64) * volume);
    Ok(LodRatio { measure, mu, ratio })
}
