//! Known extremisers and a machine-checkable certificate that every tuple with
//! entries `<= 1.2n` has `δ >= 1/(n+1)`.
//!
//! The certificate collects, for each `j = 1..=n+1`, the set of values one of
//! which must occur among the velocities of a counterexample. A system of
//! `n + 1` distinct representatives then contradicts there being only `n`
//! velocities.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::{compute_delta, VelocityTuple};
use crate::rational::Rational;
use crate::search::{verify_bound, SearchSpec};

pub fn standard_extremiser(n: usize) -> Result<VelocityTuple> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    VelocityTuple::new((1..=n as i64).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    Accepted(VelocityTuple),
    /// `gcd(r, b) = 1` for this `b` in `[n-r+1, 2n-2r+1]`.
    Rejected { b: i64 },
}

/// `(1,…,n)` with `r` replaced by `2r`, provided `gcd(r, b) > 1` for every
/// `b` with `n - r + 1 <= b <= 2n - 2r + 1`.
pub fn gw_substitution(n: i64, r: i64) -> Result<Substitution> {
    if r < 2 || r > n - 1 {
        return Err(Error::InvalidParameter(format!("need 2 <= r <= n-1, got r={r}, n={n}")));
    }
    if let Some(b) = (n - r + 1..=2 * n - 2 * r + 1).find(|b| r.gcd(b) == 1) {
        return Ok(Substitution::Rejected { b });
    }
    let v = (1..=n).map(|x| if x == r { 2 * r } else { x }).collect();
    Ok(Substitution::Accepted(VelocityTuple::new(v)?.canonicalize()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RangeTag {
    /// `0.6n < j <= n+1`, clause (i).
    Upper,
    /// `1 <= j <= 0.4n+1`, clause (ii) with `k = 2, a = 1`.
    Lower,
    /// `(n+1)/2 < j <= 0.6n`, clause (ii) with `k = 3, a = 1`.
    Doubled,
    /// `0.4n+1 < j <= (n+1)/2`, clause (ii) with `k = 2, a = j-1`.
    Middle,
}

impl fmt::Display for RangeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RangeTag::Upper => "upper",
            RangeTag::Lower => "lower",
            RangeTag::Doubled => "doubled",
            RangeTag::Middle => "middle",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// Some velocity is a multiple of `j`.
    Multiple { j: i64 },
    /// Some velocity is `cj` with `c < k`, or is `a mod j` and exceeds `k(n+1-j)`.
    Residue { j: i64, a: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedConstraint {
    pub n: i64,
    pub k: i64,
    pub clause: Clause,
    /// Values one of which must occur among the velocities.
    pub options: BTreeSet<i64>,
}

/// Values forced into any tuple of `n` positive velocities `<= kn` with `δ < 1/(n+1)`.
///
/// With `a = Some(..)` this is clause (ii) (`1 <= j <= n`, `gcd(a, j) = 1`): the
/// multiples `cj`, `c < k`, together with `m <= kn`, `m ≡ a mod j`, `m > k(n+1-j)`.
/// With `a = None` it is clause (i) (`1 <= j <= n+1`): all multiples of `j` up to `kn`.
pub fn lemma_lo_forced(n: i64, k: i64, j: i64, a: Option<i64>) -> Result<ForcedConstraint> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter(format!("need n, k >= 1, got n={n}, k={k}")));
    }
    let cap = k * n;
    let (clause, options): (Clause, BTreeSet<i64>) = match a {
        None => {
            if j < 1 || j > n + 1 {
                return Err(Error::InvalidParameter(format!("clause (i) needs 1 <= j <= n+1, got {j}")));
            }
            (Clause::Multiple { j }, (1..=cap / j).map(|c| c * j).collect())
        }
        Some(a) => {
            if j < 1 || j > n {
                return Err(Error::InvalidParameter(format!("clause (ii) needs 1 <= j <= n, got {j}")));
            }
            if a.gcd(&j) != 1 {
                return Err(Error::InvalidParameter(format!("a={a} is not coprime to j={j}")));
            }
            let multiples = (1..k).map(|c| c * j);
            let floor = k * (n + 1 - j);
            let residues = (floor + 1..=cap).filter(|m| (m - a).rem_euclid(j) == 0);
            (Clause::Residue { j, a }, multiples.chain(residues).filter(|&m| m <= cap).collect())
        }
    };
    if options.is_empty() {
        return Err(Error::InvalidParameter(format!("clause for j={j} forces nothing")));
    }
    Ok(ForcedConstraint { n, k, clause, options })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedConstraint {
    pub range: RangeTag,
    pub j: i64,
    pub forced: ForcedConstraint,
    /// `forced.options` restricted to `1..=bound`.
    pub options: BTreeSet<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortCertificate {
    pub n: i64,
    /// `⌊1.2n⌋`, the velocity bound.
    pub bound: i64,
    pub constraints: Vec<CertifiedConstraint>,
    /// `representatives[i]` is the value chosen for `constraints[i]`.
    pub representatives: Vec<i64>,
}

// Integer j is in each range iff the corresponding exact inequality holds.
fn range_of(n: i64, j: i64) -> Vec<RangeTag> {
    let mut tags = Vec::new();
    if 5 * j > 3 * n && j <= n + 1 {
        tags.push(RangeTag::Upper);
    }
    if j >= 1 && 5 * j <= 2 * n + 5 {
        tags.push(RangeTag::Lower);
    }
    if 2 * j > n + 1 && 5 * j <= 3 * n {
        tags.push(RangeTag::Doubled);
    }
    if 5 * j > 2 * n + 5 && 2 * j <= n + 1 {
        tags.push(RangeTag::Middle);
    }
    tags
}

fn derive_constraint(n: i64, bound: i64, range: RangeTag, j: i64) -> Result<CertifiedConstraint> {
    let forced = match range {
        RangeTag::Upper => lemma_lo_forced(n, 2, j, None)?,
        RangeTag::Lower => lemma_lo_forced(n, 2, j, Some(1))?,
        RangeTag::Doubled => lemma_lo_forced(n, 3, j, Some(1))?,
        RangeTag::Middle => lemma_lo_forced(n, 2, j, Some(j - 1))?,
    };
    let options: BTreeSet<i64> = forced.options.iter().copied().filter(|&m| m <= bound).collect();
    Ok(CertifiedConstraint { range, j, forced, options })
}

/// Maximum bipartite matching between constraints and values (augmenting paths).
fn match_representatives(constraints: &[CertifiedConstraint]) -> Vec<Option<i64>> {
    use std::collections::HashMap;

    fn augment(
        i: usize,
        constraints: &[CertifiedConstraint],
        owner: &mut HashMap<i64, usize>,
        seen: &mut BTreeSet<i64>,
    ) -> bool {
        for &m in &constraints[i].options {
            if !seen.insert(m) {
                continue;
            }
            let free = match owner.get(&m).copied() {
                None => true,
                Some(other) => augment(other, constraints, owner, seen),
            };
            if free {
                owner.insert(m, i);
                return true;
            }
        }
        false
    }

    let mut owner: HashMap<i64, usize> = HashMap::new();
    for i in 0..constraints.len() {
        augment(i, constraints, &mut owner, &mut BTreeSet::new());
    }
    let mut out = vec![None; constraints.len()];
    for (m, i) in owner {
        out[i] = Some(m);
    }
    out
}

/// Builds the four-range certificate for `n >= 5`.
pub fn prop_short_certificate(n: i64) -> Result<ShortCertificate> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!(
            "the four-range argument needs n >= 5 (got {n}); use exhaustive_short_check"
        )));
    }
    let bound = 6 * n / 5;
    let mut constraints = Vec::new();
    for j in 1..=n + 1 {
        for tag in range_of(n, j) {
            constraints.push(derive_constraint(n, bound, tag, j)?);
        }
    }
    let matched = match_representatives(&constraints);
    let size = matched.iter().flatten().count();
    if size as i64 <= n {
        return Err(Error::InvalidParameter(format!(
            "only {size} distinct representatives for n={n}; the case analysis does not close"
        )));
    }
    // unmatched constraints cannot occur once size > n, since there are n+1 of them
    let representatives = matched.into_iter().map(|m| m.expect("perfect matching")).collect();
    Ok(ShortCertificate { n, bound, constraints, representatives })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateDefect {
    LengthMismatch { constraints: usize, representatives: usize },
    NotAnOption { index: usize, value: i64 },
    OutOfBound { index: usize, value: i64 },
    Repeated { value: i64 },
    TooFew { count: usize, needed: i64 },
}

impl fmt::Display for CertificateDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { constraints, representatives } => {
                write!(f, "{constraints} constraints but {representatives} representatives")
            }
            Self::NotAnOption { index, value } => {
                write!(f, "representative {value} of constraint {index} is not among its options")
            }
            Self::OutOfBound { index, value } => {
                write!(f, "representative {value} of constraint {index} exceeds the velocity bound")
            }
            Self::Repeated { value } => write!(f, "value {value} represents two constraints"),
            Self::TooFew { count, needed } => write!(f, "{count} representatives, need {needed}"),
        }
    }
}

/// Re-checks a certificate from its data alone.
pub fn validate_certificate(c: &ShortCertificate) -> std::result::Result<(), CertificateDefect> {
    if c.constraints.len() != c.representatives.len() {
        return Err(CertificateDefect::LengthMismatch {
            constraints: c.constraints.len(),
            representatives: c.representatives.len(),
        });
    }
    for (index, (con, &value)) in c.constraints.iter().zip(&c.representatives).enumerate() {
        if !con.options.contains(&value) {
            return Err(CertificateDefect::NotAnOption { index, value });
        }
        if value < 1 || value > c.bound {
            return Err(CertificateDefect::OutOfBound { index, value });
        }
    }
    let mut seen = BTreeSet::new();
    for &value in &c.representatives {
        if !seen.insert(value) {
            return Err(CertificateDefect::Repeated { value });
        }
    }
    if (seen.len() as i64) < c.n + 1 {
        return Err(CertificateDefect::TooFew { count: seen.len(), needed: c.n + 1 });
    }
    Ok(())
}

impl fmt::Display for ShortCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate n={} bound={}", self.n, self.bound)?;
        for c in &self.constraints {
            let opts: Vec<String> = c.options.iter().map(|m| m.to_string()).collect();
            writeln!(f, "constraint range={} j={} k={} options={{{}}}", c.range, c.j, c.forced.k, opts.join(","))?;
        }
        let reps: Vec<String> = self.representatives.iter().map(|m| m.to_string()).collect();
        writeln!(f, "representatives {}", reps.join(","))
    }
}

/// Direct check for small `n`: no canonical tuple with entries `<= ⌊1.2n⌋` has `δ < 1/(n+1)`.
///
/// Non-canonical tuples reduce to canonical ones with smaller entries, so the
/// canonical corpus suffices. Returns the number of tuples examined.
pub fn exhaustive_short_check(n: usize) -> Result<u64> {
    let bound = (6 * n as u64 / 5).max(n as u64);
    let report = verify_bound(&SearchSpec::verify(n, bound)?)?;
    if let Some(f) = report.violations().first() {
        return Err(Error::InvalidParameter(format!("{} has delta {} < 1/(n+1)", f.tuple, f.delta)));
    }
    Ok(report.tuples_examined())
}

/// Tuples with every `|vᵢ| <= C n` and `δ < (1 + c)/(2n)`.
pub fn short2_flags<'a, I>(tuples: I, big_c: &Rational, small_c: &Rational) -> Vec<VelocityTuple>
where
    I: IntoIterator<Item = &'a VelocityTuple>,
{
    tuples
        .into_iter()
        .filter(|t| {
            let n = Rational::integer(t.len() as i64);
            let cap = big_c * &n;
            if Rational::integer(t.max_abs() as i64) > cap {
                return false;
            }
            let delta = compute_delta(t).expect("valid tuple").delta;
            delta < (Rational::one() + small_c) / (Rational::integer(2) * n)
        })
        .cloned()
        .collect()
}
