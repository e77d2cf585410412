//! Bohr sets `B(v₁,…,v_r; δ₁,…,δ_r) = {t : ‖t vᵢ‖ ≤ δᵢ for all i}` as exact
//! interval sets, plus covering queries and the prime "sunflower" example.

use serde::Serialize;

use crate::circle::CircleIntervalSet;
use crate::error::{Error, Result};
use crate::gap::VelocityTuple;
use crate::rational::{CirclePoint, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohrSpec {
    frequencies: Vec<i64>,
    radii: Vec<Rational>,
}

impl BohrSpec {
    pub fn new(frequencies: Vec<i64>, radii: Vec<Rational>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::InvalidParameter("Bohr set must have rank at least one".into()));
        }
        if frequencies.len() != radii.len() {
            return Err(Error::RankMismatch { frequencies: frequencies.len(), radii: radii.len() });
        }
        if let Some(i) = frequencies.iter().position(|&v| v == 0) {
            return Err(Error::ZeroFrequency(i));
        }
        for d in &radii {
            check_radius(d)?;
        }
        Ok(BohrSpec { frequencies, radii })
    }

    /// Rank-one set `B(v; δ)`.
    pub fn rank_one(v: i64, delta: Rational) -> Result<Self> {
        Self::new(vec![v], vec![delta])
    }

    /// All frequencies share the radius `delta`.
    pub fn uniform(frequencies: Vec<i64>, delta: &Rational) -> Result<Self> {
        let radii = vec![delta.clone(); frequencies.len()];
        Self::new(frequencies, radii)
    }

    pub fn frequencies(&self) -> &[i64] {
        &self.frequencies
    }

    pub fn radii(&self) -> &[Rational] {
        &self.radii
    }

    pub fn rank(&self) -> usize {
        self.frequencies.len()
    }
}

fn check_radius(delta: &Rational) -> Result<()> {
    if !delta.is_positive() || delta >= &Rational::half() {
        return Err(Error::RadiusOutOfRange(delta.clone()));
    }
    Ok(())
}

/// `|v|` arcs of half-width `δ/|v|` centred at `a/|v|`.
fn rank_one_set(v: i64, delta: &Rational) -> CircleIntervalSet {
    let u = v.unsigned_abs() as i64;
    let half_width = delta / &Rational::integer(u);
    CircleIntervalSet::from_real_intervals((0..u).map(|a| {
        let c = Rational::new(a, u);
        (&c - &half_width, &c + &half_width)
    }))
}

pub fn build_bohr(spec: &BohrSpec) -> CircleIntervalSet {
    spec.frequencies
        .iter()
        .zip(&spec.radii)
        .map(|(&v, d)| rank_one_set(v, d))
        .reduce(|acc, s| acc.intersection(&s))
        .expect("rank at least one")
}

pub fn bohr_measure(spec: &BohrSpec) -> Rational {
    build_bohr(spec).measure()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetalSplit {
    pub kernel: CircleIntervalSet,
    pub petal: CircleIntervalSet,
}

/// Separates the arc about `0` (the kernel) from the other `v - 1` arcs (the petal).
pub fn kernel_petal(v: i64, delta: &Rational) -> Result<PetalSplit> {
    if v < 1 {
        return Err(Error::InvalidParameter(format!("petal frequency must be positive, got {v}")));
    }
    check_radius(delta)?;
    let half_width = delta / &Rational::integer(v);
    let kernel = CircleIntervalSet::centered(&Rational::zero(), &half_width);
    let petal = CircleIntervalSet::from_real_intervals((1..v).map(|a| {
        let c = Rational::new(a, v);
        (&c - &half_width, &c + &half_width)
    }));
    Ok(PetalSplit { kernel, petal })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    pub covered: bool,
    pub uncovered: Option<CirclePoint>,
}

/// Whether `⋃ᵢ B(vᵢ; δ)` is the whole circle. Radii `≥ 1/2` cover trivially.
pub fn covering_union(v: &VelocityTuple, delta: &Rational) -> Result<CircleIntervalSet> {
    if !delta.is_positive() {
        return Err(Error::RadiusOutOfRange(delta.clone()));
    }
    if delta >= &Rational::half() {
        return Ok(CircleIntervalSet::full());
    }
    Ok(v.velocities()
        .iter()
        .map(|&x| rank_one_set(x, delta))
        .fold(CircleIntervalSet::empty(), |acc, s| acc.union(&s)))
}

pub fn covering_check(v: &VelocityTuple, delta: &Rational) -> Result<Covering> {
    let union = covering_union(v, delta)?;
    let uncovered = union.uncovered_point();
    Ok(Covering { covered: uncovered.is_none(), uncovered })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `p` with `n/4 < p <= n/2`.
pub fn sunflower_primes(n: u64) -> Vec<u64> {
    (1..=n / 2).filter(|&p| 4 * p > n && is_prime(p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetalPair {
    pub p: u64,
    pub q: u64,
    /// `δ (p + q) < 1`.
    pub hypothesis_holds: bool,
    /// Number of isolated contact points between the two petals.
    pub contact_points: usize,
    pub overlap_measure: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SunflowerReport {
    pub n: u64,
    pub delta: Rational,
    pub primes: Vec<u64>,
    pub pairs: Vec<PetalPair>,
    pub petals_disjoint: bool,
    pub tangent_pairs: usize,
    pub union_measure: Rational,
    /// `m(⋃ kernels) + Σ m(petals) − m(⋃ kernels ∩ ⋃ petals)`, valid when petals are disjoint.
    pub union_measure_by_petals: Rational,
    pub sum_of_measures: Rational,
    pub lower_bound: Rational,
    pub inequality_holds: bool,
}

/// Builds the sunflower for the primes in `(n/4, n/2]` at radius `delta` and
/// checks petal disjointness and `m(⋃B) ≥ (1 − 4/n) Σ m(B)`.
pub fn sunflower_check(n: u64, delta: &Rational) -> Result<SunflowerReport> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!("sunflower needs n >= 8, got {n}")));
    }
    check_radius(delta)?;
    if delta > &Rational::new(1, n as i64 + 1) {
        return Err(Error::InvalidParameter(format!("radius {delta} exceeds 1/(n+1)")));
    }
    let primes = sunflower_primes(n);
    let splits: Vec<PetalSplit> = primes
        .iter()
        .map(|&p| kernel_petal(p as i64, delta))
        .collect::<Result<_>>()?;

    let mut pairs = Vec::new();
    for i in 0..primes.len() {
        for j in i + 1..primes.len() {
            let meet = splits[i].petal.intersection(&splits[j].petal);
            let sum = Rational::integer((primes[i] + primes[j]) as i64);
            pairs.push(PetalPair {
                p: primes[i],
                q: primes[j],
                hypothesis_holds: delta * &sum < Rational::one(),
                contact_points: meet.arcs().iter().filter(|a| a.is_point()).count(),
                overlap_measure: meet.measure(),
            });
        }
    }
    let petals_disjoint = pairs.iter().all(|p| p.overlap_measure.is_zero());
    let tangent_pairs = pairs.iter().filter(|p| p.contact_points > 0).count();

    let union = primes
        .iter()
        .map(|&p| rank_one_set(p as i64, delta))
        .fold(CircleIntervalSet::empty(), |acc, s| acc.union(&s));
    let union_measure = union.measure();

    let kernels = splits.iter().fold(CircleIntervalSet::empty(), |acc, s| acc.union(&s.kernel));
    let petals = splits.iter().fold(CircleIntervalSet::empty(), |acc, s| acc.union(&s.petal));
    let petal_sum: Rational = splits.iter().map(|s| s.petal.measure()).sum();
    let union_measure_by_petals =
        kernels.measure() + petal_sum - kernels.intersection(&petals).measure();

    let sum_of_measures = Rational::integer(2 * primes.len() as i64) * delta;
    let lower_bound = (Rational::one() - Rational::new(4, n as i64)) * &sum_of_measures;
    let inequality_holds = union_measure >= lower_bound;

    Ok(SunflowerReport {
        n,
        delta: delta.clone(),
        primes,
        pairs,
        petals_disjoint,
        tangent_pairs,
        union_measure,
        union_measure_by_petals,
        sum_of_measures,
        lower_bound,
        inequality_holds,
    })
}

impl SunflowerReport {
    /// Disjoint petals, agreeing union measures and the measure inequality.
    pub fn passed(&self) -> bool {
        self.petals_disjoint
            && self.inequality_holds
            && self.union_measure == self.union_measure_by_petals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rank_one_shape() {
        let s = build_bohr(&BohrSpec::rank_one(5, r("1/10")).unwrap());
        // the arc about 0 is split in two
        assert_eq!(s.arcs().len(), 6);
        assert_eq!(s.measure(), r("1/5"));
        let eps = r("1/1000");
        let s = build_bohr(&BohrSpec::rank_one(1, Rational::half() - &eps).unwrap());
        assert_eq!(s.measure(), Rational::one() - Rational::integer(2) * eps);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(bohr_measure(&BohrSpec::rank_one(7, r("1/16")).unwrap()), r("1/8"));
        let spec = BohrSpec::uniform(vec![1, 2], &r("1/10")).unwrap();
        assert_eq!(bohr_measure(&spec), r("1/10"));
        let spec = BohrSpec::uniform(vec![1, 1], &r("1/8")).unwrap();
        assert_eq!(bohr_measure(&spec), r("1/4"));
        let spec = BohrSpec::uniform(vec![2, 3], &r("1/12")).unwrap();
        assert!(bohr_measure(&spec) >= r("1/144"));
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(BohrSpec::rank_one(0, r("1/4")).is_err());
        assert!(BohrSpec::rank_one(3, r("1/2")).is_err());
        assert!(BohrSpec::rank_one(3, r("0")).is_err());
        assert!(BohrSpec::new(vec![1, 2], vec![r("1/4")]).is_err());
        assert!(BohrSpec::new(vec![], vec![]).is_err());
    }

    #[test]
    fn negated_frequency_gives_same_set() {
        for v in 1..20 {
            let a = build_bohr(&BohrSpec::rank_one(v, r("2/9")).unwrap());
            let b = build_bohr(&BohrSpec::rank_one(-v, r("2/9")).unwrap());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kernel_petal_examples() {
        let s = kernel_petal(5, &r("1/12")).unwrap();
        assert_eq!(s.kernel.measure(), r("1/30"));
        assert_eq!(s.petal.measure(), r("2/15"));
        let s = kernel_petal(1, &r("1/5")).unwrap();
        assert!(s.petal.is_empty());
        let s = kernel_petal(3, &r("1/10")).unwrap();
        assert_eq!(s.petal.arcs().len(), 2);
        assert!(s.petal.contains(&CirclePoint::from_ratio(1, 3)));
        assert!(s.petal.contains(&CirclePoint::from_ratio(2, 3)));
        let whole = build_bohr(&BohrSpec::rank_one(3, r("1/10")).unwrap());
        assert_eq!(s.kernel.union(&s.petal), whole);
        assert!(kernel_petal(0, &r("1/10")).is_err());
    }

    #[test]
    fn covering_examples() {
        let v = VelocityTuple::new(vec![1, 2, 3]).unwrap();
        assert!(covering_check(&v, &r("1/4")).unwrap().covered);
        let c = covering_check(&v, &r("1/5")).unwrap();
        assert!(!c.covered);
        assert_eq!(c.uncovered, Some(CirclePoint::from_ratio(1, 4)));
        let one = VelocityTuple::new(vec![1]).unwrap();
        let c = covering_check(&one, &r("499/1000")).unwrap();
        assert!(!c.covered);
        assert_eq!(c.uncovered, Some(CirclePoint::from_ratio(1, 2)));
        assert!(covering_check(&one, &r("1/2")).unwrap().covered);
    }

    #[test]
    fn primes_in_sunflower_range() {
        assert_eq!(sunflower_primes(100), vec![29, 31, 37, 41, 43, 47]);
        assert_eq!(sunflower_primes(60), vec![17, 19, 23, 29]);
        assert_eq!(sunflower_primes(8), vec![3]);
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn sunflower_examples() {
        let rep = sunflower_check(8, &r("1/9")).unwrap();
        assert_eq!(rep.primes, vec![3]);
        assert!(rep.passed());
        let rep = sunflower_check(60, &r("1/61")).unwrap();
        assert_eq!(rep.primes, vec![17, 19, 23, 29]);
        assert!(rep.passed());
        assert_eq!(rep.union_measure, rep.union_measure_by_petals);
        assert!(sunflower_check(7, &r("1/8")).is_err());
        assert!(sunflower_check(10, &r("1/5")).is_err());
    }
}
