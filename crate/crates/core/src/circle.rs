//! Finite unions of closed arcs on `R/Z`.
//!
//! Arcs are stored as `[start, end]` with `0 <= start <= end <= 1`; an arc
//! crossing the origin is split into a piece ending at `1` and a piece starting
//! at `0`. The stored arcs are sorted, pairwise disjoint and maximal. Degenerate
//! arcs (single points) are kept so that intersections of closed sets stay
//! exact as sets, even though they carry no measure.

use std::fmt;

use crate::rational::{CirclePoint, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: Rational,
    pub end: Rational,
}

impl Arc {
    pub fn length(&self) -> Rational {
        &self.end - &self.start
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    fn contains_linear(&self, x: &Rational) -> bool {
        &self.start <= x && x <= &self.end
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CircleIntervalSet {
    arcs: Vec<Arc>,
}

impl CircleIntervalSet {
    pub fn empty() -> Self {
        CircleIntervalSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        CircleIntervalSet {
            arcs: vec![Arc { start: Rational::zero(), end: Rational::one() }],
        }
    }

    /// Builds a normalized set from closed arcs `[lo, hi]` given as real
    /// intervals (any representatives, `lo <= hi`), projected onto the circle.
    pub fn from_real_intervals<I>(intervals: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let one = Rational::one();
        let mut pieces = Vec::new();
        for (lo, hi) in intervals {
            assert!(lo <= hi, "interval endpoints out of order");
            let len = &hi - &lo;
            if len >= one {
                return CircleIntervalSet::full();
            }
            let start = lo.fract_floor();
            let end = &start + &len;
            if end <= one {
                pieces.push(Arc { start, end });
            } else {
                pieces.push(Arc { start, end: one.clone() });
                pieces.push(Arc { start: Rational::zero(), end: end - &one });
            }
        }
        Self::normalize(pieces)
    }

    /// The closed arc of the given radius about `center`.
    pub fn centered(center: &Rational, radius: &Rational) -> Self {
        Self::from_real_intervals([(center - radius, center + radius)])
    }

    fn normalize(mut pieces: Vec<Arc>) -> Self {
        let one = Rational::one();
        for p in pieces.iter_mut() {
            if p.is_point() && p.start == one {
                p.start = Rational::zero();
                p.end = Rational::zero();
            }
        }
        pieces.sort_by(|a, b| a.start.cmp(&b.start).then_with(|| a.end.cmp(&b.end)));
        let mut arcs: Vec<Arc> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match arcs.last_mut() {
                Some(last) if p.start <= last.end => {
                    if p.end > last.end {
                        last.end = p.end;
                    }
                }
                _ => arcs.push(p),
            }
        }
        // the origin is also the point 1
        if arcs.len() > 1
            && arcs[0].is_point()
            && arcs[0].start.is_zero()
            && arcs.last().is_some_and(|a| a.end == one)
        {
            arcs.remove(0);
        }
        CircleIntervalSet { arcs }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].start.is_zero() && self.arcs[0].end == Rational::one()
    }

    pub fn contains(&self, t: &CirclePoint) -> bool {
        let x = t.value();
        if self.arcs.iter().any(|a| a.contains_linear(x)) {
            return true;
        }
        x.is_zero() && self.arcs.last().map(|a| a.end == Rational::one()).unwrap_or(false)
    }

    fn contains_origin(&self) -> bool {
        self.contains(&CirclePoint::zero())
    }

    pub fn measure(&self) -> Rational {
        self.arcs.iter().map(Arc::length).sum()
    }

    pub fn union(&self, other: &Self) -> Self {
        let pieces = self.arcs.iter().chain(other.arcs.iter()).cloned().collect();
        Self::normalize(pieces)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.arcs, &other.arcs);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = std::cmp::max(&a[i].start, &b[j].start);
            let hi = std::cmp::min(&a[i].end, &b[j].end);
            if lo <= hi {
                out.push(Arc { start: lo.clone(), end: hi.clone() });
            }
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        if self.contains_origin() && other.contains_origin() {
            out.push(Arc { start: Rational::zero(), end: Rational::zero() });
        }
        Self::normalize(out)
    }

    /// Maximal open gaps `(prev_end, next_start)` of positive length, in order.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let mut cursor = Rational::zero();
        for a in &self.arcs {
            if a.start > cursor {
                out.push((cursor.clone(), a.start.clone()));
            }
            cursor = a.end.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        out
    }

    /// A point outside the set, or `None` when the set is the whole circle.
    /// Returns the rational of smallest denominator inside the first gap.
    pub fn uncovered_point(&self) -> Option<CirclePoint> {
        match self.gaps().first() {
            Some((lo, hi)) => Some(CirclePoint::new(&simplest_between(lo, hi))),
            None if !self.contains_origin() => Some(CirclePoint::zero()),
            None => None,
        }
    }
}

impl fmt::Debug for CircleIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arcs.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.arcs.iter().map(|a| format!("{a:?}")).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl fmt::Display for CircleIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The fraction of least denominator strictly between `lo < hi`, both `>= 0`,
/// found by walking the Stern–Brocot tree.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi && !lo.is_negative());
    let (mut lp, mut lq) = (Rational::zero(), Rational::one());
    let (mut rp, mut rq) = (Rational::one(), Rational::zero());
    loop {
        let mp = &lp + &rp;
        let mq = &lq + &rq;
        let m = &mp / &mq;
        if &m <= lo {
            // step right as far as possible: largest k with (lp+k rp)/(lq+k rq) <= lo
            let k = steps(&lp, &lq, &rp, &rq, lo, true);
            lp = &lp + &(&rp * &k);
            lq = &lq + &(&rq * &k);
        } else if &m >= hi {
            let k = steps(&rp, &rq, &lp, &lq, hi, false);
            rp = &rp + &(&lp * &k);
            rq = &rq + &(&lq * &k);
        } else {
            return m;
        }
    }
}

// Number of repeated mediant steps towards `bound` that stay on the same side.
fn steps(
    base_p: &Rational,
    base_q: &Rational,
    step_p: &Rational,
    step_q: &Rational,
    bound: &Rational,
    moving_left_bound: bool,
) -> Rational {
    // left bound: (bp + k sp) <= bound (bq + k sq)  <=>  k (sp - bound sq) <= bound bq - bp
    // right bound: (bp + k sp) >= bound (bq + k sq) <=>  k (bound sq - sp) <= bp - bound bq
    let (coef, rhs) = if moving_left_bound {
        (step_p - &(bound * step_q), &(bound * base_q) - base_p)
    } else {
        (&(bound * step_q) - step_p, base_p - &(bound * base_q))
    };
    if !coef.is_positive() {
        return Rational::one();
    }
    let k = Rational::from_bigints((&rhs / &coef).floor(), 1.into());
    if k.is_positive() {
        k
    } else {
        Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn set(arcs: &[(&str, &str)]) -> CircleIntervalSet {
        CircleIntervalSet::from_real_intervals(arcs.iter().map(|(a, b)| (r(a), r(b))))
    }

    #[test]
    fn union_examples() {
        let u = set(&[("0", "1/4")]).union(&set(&[("1/8", "3/8")]));
        assert_eq!(u, set(&[("0", "3/8")]));
        let u = set(&[("0", "1/4")]).union(&CircleIntervalSet::empty());
        assert_eq!(u, set(&[("0", "1/4")]));
        let u = set(&[("0", "1/10")]).union(&set(&[("1/2", "6/10")]));
        assert_eq!(u.arcs().len(), 2);
        assert_eq!(u.measure(), r("1/5"));
    }

    #[test]
    fn intersection_examples() {
        let x = set(&[("0", "1/4")]).intersection(&set(&[("1/8", "3/8")]));
        assert_eq!(x, set(&[("1/8", "1/4")]));
        let a = set(&[("0", "1/10"), ("1/2", "3/5")]);
        assert_eq!(a.intersection(&CircleIntervalSet::full()), a);
        let x = a.intersection(&set(&[("1/20", "11/20")]));
        assert_eq!(x, set(&[("1/20", "1/10"), ("1/2", "11/20")]));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(CircleIntervalSet::empty().measure(), Rational::zero());
        assert_eq!(CircleIntervalSet::full().measure(), Rational::one());
        assert_eq!(set(&[("1/6", "1/3")]).measure(), r("1/6"));
    }

    #[test]
    fn wraparound_is_split_at_origin() {
        let s = CircleIntervalSet::centered(&Rational::zero(), &r("1/4"));
        assert_eq!(s.arcs().len(), 2);
        assert_eq!(s.arcs()[0], Arc { start: r("0"), end: r("1/4") });
        assert_eq!(s.arcs()[1], Arc { start: r("3/4"), end: r("1") });
        assert!(s.contains(&CirclePoint::zero()));
        assert_eq!(s.measure(), r("1/2"));
        let shifted = set(&[("-5/4", "-3/4")]);
        assert_eq!(shifted, s);
    }

    #[test]
    fn touching_arcs_meet_in_a_point() {
        let x = set(&[("0", "1/4")]).intersection(&set(&[("1/4", "1/2")]));
        assert_eq!(x.arcs(), &[Arc { start: r("1/4"), end: r("1/4") }]);
        assert_eq!(x.measure(), Rational::zero());
        let x = set(&[("0", "1/4")]).intersection(&set(&[("3/4", "1")]));
        assert!(x.contains(&CirclePoint::zero()));
        assert_eq!(x.measure(), Rational::zero());
    }

    #[test]
    fn long_interval_is_full_circle() {
        assert!(set(&[("-1/2", "1/2")]).is_full());
        assert!(set(&[("0", "1/2"), ("1/2", "1")]).is_full());
    }

    #[test]
    fn uncovered_point_prefers_small_denominators() {
        let s = set(&[("0", "1/5"), ("4/15", "11/15"), ("4/5", "1")]);
        assert_eq!(s.uncovered_point(), Some(CirclePoint::from_ratio(1, 4)));
        assert_eq!(CircleIntervalSet::full().uncovered_point(), None);
        assert_eq!(CircleIntervalSet::empty().uncovered_point(), Some(CirclePoint::from_ratio(1, 2)));
        let only_origin_missing = set(&[("1/1000", "999/1000")]);
        assert!(only_origin_missing.uncovered_point().is_some());
    }

    #[test]
    fn simplest_rational_search() {
        assert_eq!(simplest_between(&r("1/5"), &r("4/15")), r("1/4"));
        assert_eq!(simplest_between(&r("0"), &r("1")), r("1/2"));
        assert_eq!(simplest_between(&r("1/1000"), &r("1/999")), r("2/1999"));
        assert_eq!(simplest_between(&r("999/1000"), &r("1")), r("1000/1001"));
        assert_eq!(simplest_between(&r("0"), &r("1/1000000")), r("1/1000001"));
    }

    #[test]
    fn normalize_is_idempotent() {
        let s = set(&[("1/3", "1/2"), ("1/4", "2/5"), ("9/10", "11/10")]);
        let again = CircleIntervalSet::normalize(s.arcs().to_vec());
        assert_eq!(again, s);
    }
}
