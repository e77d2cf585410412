//! Acceptance suite. Prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p lonely-runner --test acceptance -- --nocapture
//! ```

use std::collections::HashSet;
use std::time::{Duration, Instant};

use lonely_runner::constructions::{exhaustive_short_check, prop_short_certificate, validate_certificate};
use lonely_runner::progression::double_dilate_is_collision_free;
use lonely_runner::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: u32, name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, mut detail) = f();
    let elapsed = start.elapsed();
    let in_time = limit.map_or(true, |l| elapsed <= l);
    if !in_time {
        detail.push_str(&format!("; exceeded time limit {:?}", limit.unwrap()));
    }
    Outcome { id, name, passed: ok && in_time, detail, elapsed }
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn tuple(v: Vec<i64>) -> VelocityTuple {
    VelocityTuple::new(v).unwrap()
}

fn criterion_1() -> (bool, String) {
    let mut bad = Vec::new();
    for n in 1..=20i64 {
        let g = compute_delta(&tuple((1..=n).collect())).unwrap();
        let witness = CirclePoint::from_ratio(1, n + 1);
        let at_witness = probe_time(&tuple((1..=n).collect()), &witness, &rat(1, n + 1));
        if g.delta != rat(1, n + 1) || !at_witness.passes {
            bad.push(format!("n={n}: {}", g.delta));
        }
    }
    (bad.is_empty(), format!("n=1..20 exact; mismatches: {bad:?}"))
}

fn criterion_2() -> (bool, String) {
    let g = compute_delta(&tuple(vec![1, 2, 3, 4, 5, 7, 12])).unwrap();
    (g.delta == rat(1, 8), format!("delta={} witness={}", g.delta, g.witness))
}

fn criterion_3() -> (bool, String) {
    let v: Vec<i64> = (1..=73)
        .map(|x| match x {
            70 => 140,
            72 => 144,
            x => x,
        })
        .collect();
    let g = compute_delta(&tuple(v)).unwrap();
    (
        g.delta == rat(1, 74),
        format!("delta={} witness={} candidates={}", g.delta, g.witness, g.candidates_examined),
    )
}

fn criterion_4_and_5() -> ((bool, String), (bool, String)) {
    let mut ok4 = true;
    let mut ok5 = true;
    let mut d4 = Vec::new();
    let mut d5 = Vec::new();
    for (n, bound) in [(3usize, 30u64), (4, 20)] {
        let spec = SearchSpec::verify(n, bound).unwrap();
        let start = Instant::now();
        let rep = verify_bound(&spec).unwrap();
        let took = start.elapsed();
        let expected = rat(1, n as i64 + 1);
        let good = rep.complete
            && rep.violations().is_empty()
            && rep.corpus_min_delta() == Some(&expected)
            && took <= Duration::from_secs(300);
        ok4 &= good;
        d4.push(format!(
            "n={n} bound={bound}: {} tuples, {} violations, corpus_min={} ({took:.2?})",
            rep.tuples_examined(),
            rep.violations().len(),
            rep.corpus_min_delta().unwrap()
        ));
        ok5 &= rep.tally.below_trivial_bound.is_empty();
        d5.push(format!("n={n}: {} below 1/(2n)", rep.tally.below_trivial_bound.len()));
    }
    ((ok4, d4.join("; ")), (ok5, d5.join("; ")))
}

fn criterion_6() -> (bool, String) {
    let mut bad = 0;
    let radii = [rat(1, 7), rat(1, 50), rat(12, 25)];
    for v in 1..=100 {
        for d in &radii {
            let m = bohr_measure(&BohrSpec::rank_one(v, d.clone()).unwrap());
            if m != d * &Rational::integer(2) {
                bad += 1;
            }
        }
    }
    (bad == 0, format!("300 sets, {bad} mismatches"))
}

fn criterion_7() -> (bool, String) {
    let rep = sunflower_check(100, &rat(1, 101)).unwrap();
    let ok = rep.primes == vec![29, 31, 37, 41, 43, 47] && rep.passed();
    (
        ok,
        format!(
            "primes={:?} disjoint={} union={} >= bound={} (tangent pairs {})",
            rep.primes, rep.petals_disjoint, rep.union_measure, rep.lower_bound, rep.tangent_pairs
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 200 {
        // n = 1 would put the radius 1/(n+1) at 1/2, outside the admissible range
        let n = rng.gen_range(2..=6usize);
        let mut v: Vec<i64> = sample(&mut rng, 40, n).into_iter().map(|x| x as i64 + 1).collect();
        v.sort_unstable();
        let t = tuple(v.clone());
        if !t.is_canonical() {
            continue;
        }
        done += 1;
        let delta = rat(1, n as i64 + 1);
        let m = moments(&t, &delta).unwrap();
        let m1_ok = m.m1 == Rational::integer(2 * n as i64) * &delta;
        let pairwise: Rational = v
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| (a, b)))
            .map(|(a, b)| bohr_measure(&BohrSpec::uniform(vec![a, b], &delta).unwrap()))
            .sum();
        if !m1_ok || m.m2 != pairwise {
            bad.push(format!("{t}"));
        }
    }
    (bad.is_empty(), format!("200 tuples, mismatches: {bad:?}"))
}

fn naive_mu(w: &[i64], b: &[i64], acc: i64) -> u64 {
    match w.split_first() {
        None => (acc == 0) as u64,
        Some((&x, rest)) => (-b[0]..=b[0]).map(|n| naive_mu(rest, &b[1..], acc + n * x)).sum(),
    }
}

fn sums_distinct(w: &[i64], b: &[i64], acc: i64, seen: &mut HashSet<i64>) -> bool {
    match w.split_first() {
        None => seen.insert(acc),
        Some((&x, rest)) => (-b[0]..=b[0]).all(|n| sums_distinct(rest, &b[1..], acc + n * x, seen)),
    }
}

fn generator_corpus(rank: usize) -> Vec<Vec<i64>> {
    // μ and properness are unchanged by negating one generator (the box is
    // symmetric), so rank three uses sorted non-negative generators.
    match rank {
        1 => (-12..=12).map(|w| vec![w]).collect(),
        2 => (-12..=12).flat_map(|a| (-12..=12).map(move |b| vec![a, b])).collect(),
        _ => {
            let mut out = Vec::new();
            for a in 0..=12 {
                for b in a..=12 {
                    for c in b..=12 {
                        out.push(vec![a, b, c]);
                    }
                }
            }
            out
        }
    }
}

fn dims_corpus(rank: usize) -> Vec<Vec<i64>> {
    (0..rank).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|d| (0..=5).map(move |x| [d.clone(), vec![x]].concat())).collect()
    })
}

fn criterion_9() -> (bool, String) {
    let mut instances = 0u64;
    let mut mu_bad = 0u64;
    let mut proper_bad = 0u64;
    let scales = [rat(1, 2), rat(1, 1)];
    for rank in 1..=3 {
        let dims = dims_corpus(rank);
        for w in generator_corpus(rank) {
            for d in &dims {
                instances += 1;
                let p = Progression::with_integer_dims(w.clone(), d).unwrap();
                if multiplicity(&p) != naive_mu(&w, d, 0) {
                    mu_bad += 1;
                }
                for t in &scales {
                    let box_ = dilate(&p, t).unwrap().coefficient_bounds();
                    let oracle = sums_distinct(&w, &box_, 0, &mut HashSet::new());
                    if is_t_proper(&p, t).unwrap() != oracle {
                        proper_bad += 1;
                    }
                    // μ(2tP) = 1 implies properness; with integral tNᵢ the two coincide
                    let criterion = double_dilate_is_collision_free(&p, t).unwrap();
                    let integral = t.is_integer();
                    if (criterion && !oracle) || (integral && criterion != oracle) {
                        proper_bad += 1;
                    }
                }
            }
        }
    }
    (
        mu_bad == 0 && proper_bad == 0,
        format!("{instances} progressions: {mu_bad} multiplicity and {proper_bad} properness discrepancies"),
    )
}

fn criterion_10() -> (bool, String) {
    let mut failed = Vec::new();
    for n in 5..=200 {
        match prop_short_certificate(n) {
            Ok(c) => {
                if let Err(e) = validate_certificate(&c) {
                    failed.push(format!("n={n}: {e}"));
                }
            }
            Err(e) => failed.push(format!("n={n}: {e}")),
        }
    }
    let mut examined = 0;
    for n in 1..=8 {
        match exhaustive_short_check(n) {
            Ok(k) => examined += k,
            Err(e) => failed.push(format!("search n={n}: {e}")),
        }
    }
    (
        failed.is_empty(),
        format!("196 certificates validated; {examined} tuples searched for n<=8; failures: {failed:?}"),
    )
}

fn criterion_11() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let step = rat(1, 1000);
    let mut bad = Vec::new();
    for _ in 0..500 {
        let n = rng.gen_range(1..=5usize);
        let v: Vec<i64> = sample(&mut rng, 30, n).into_iter().map(|x| x as i64 + 1).collect();
        let t = tuple(v);
        let d = compute_delta(&t).unwrap().delta;
        for r in [&d - &step, d.clone(), &d + &step] {
            let covered = covering_check(&t, &r).unwrap().covered;
            if covered != (r >= d) {
                bad.push(format!("{t} at {r}"));
            }
        }
    }
    (bad.is_empty(), format!("1500 checks, mismatches: {bad:?}"))
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let mut outcomes = vec![
        run(1, "extremiser regression (1..n), n<=20", Some(secs(10)), criterion_1),
        run(2, "tuple (1,2,3,4,5,7,12)", Some(secs(1)), criterion_2),
        run(3, "73-velocity extremiser", Some(secs(600)), criterion_3),
    ];
    let start = Instant::now();
    let (c4, c5) = criterion_4_and_5();
    let elapsed = start.elapsed();
    outcomes.push(Outcome { id: 4, name: "bounded verification n=3/30, n=4/20", passed: c4.0, detail: c4.1, elapsed });
    outcomes.push(Outcome { id: 5, name: "delta >= 1/(2n) over criterion 4 corpus", passed: c5.0, detail: c5.1, elapsed });
    outcomes.push(run(6, "m(B(v;d)) = 2d for v<=100", None, criterion_6));
    outcomes.push(run(7, "sunflower n=100, d=1/101", Some(secs(10)), criterion_7));
    outcomes.push(run(8, "moment identities on 200 tuples", None, criterion_8));
    outcomes.push(run(9, "multiplicity / properness oracles", None, criterion_9));
    outcomes.push(run(10, "certificates n=5..200 + search n<=8", Some(secs(120)), criterion_10));
    outcomes.push(run(11, "covering duality on 500 tuples", None, criterion_11));
    let covered = outcomes.iter().filter(|o| [5, 7, 8].contains(&o.id)).all(|o| o.passed);
    outcomes.push(Outcome {
        id: 12,
        name: "asymptotic statements (not reproducible at desk scale)",
        passed: covered,
        detail: "exact ingredients exercised by criteria 5, 7, 8".into(),
        elapsed: Duration::ZERO,
    });

    for o in &outcomes {
        println!(
            "[{}] criterion {:>2}: {} ({:.2?}) - {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed,
            o.detail
        );
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
