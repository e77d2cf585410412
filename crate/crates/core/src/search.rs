//! Exhaustive verification over canonical velocity tuples.
//!
//! Tuples `0 < v₁ < … < vₙ <= bound` with `gcd = 1` are grouped into partitions
//! by their first two coordinates. Partitions are evaluated in parallel in
//! fixed-size chunks and merged in partition order, so the report does not
//! depend on the worker count. After every chunk the accumulated state is
//! written to the checkpoint file, from which an interrupted run resumes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{compute_delta, VelocityTuple};
use crate::rational::{CirclePoint, Rational};

/// Partitions handed to the pool between two checkpoint writes.
pub const PARTITIONS_PER_CHUNK: usize = 64;

const CHECKPOINT_FORMAT: &str = "lonely-runner-checkpoint/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Verify,
    Extremisers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub bound: u64,
    pub threshold: Rational,
    pub mode: Mode,
}

impl SearchSpec {
    /// Verification at the default threshold `1/(n+1)`.
    pub fn verify(n: usize, bound: u64) -> Result<Self> {
        Self::new(n, bound, None, Mode::Verify)
    }

    pub fn extremisers(n: usize, bound: u64) -> Result<Self> {
        Self::new(n, bound, None, Mode::Extremisers)
    }

    /// Extremiser searches always use `1/(n+1)`; `threshold` is ignored for them.
    pub fn new(n: usize, bound: u64, threshold: Option<Rational>, mode: Mode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("runner count must be at least 1".into()));
        }
        if bound < n as u64 {
            return Err(Error::BoundTooSmall { n, bound });
        }
        let default = Rational::new(1, n as i64 + 1);
        let threshold = match (mode, threshold) {
            (Mode::Verify, Some(t)) => t,
            _ => default,
        };
        Ok(SearchSpec { n, bound, threshold, mode })
    }
}

/// First one or two coordinates shared by every tuple of a work unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub first: u64,
    pub second: Option<u64>,
}

impl Partition {
    fn prefix(&self) -> Vec<u64> {
        std::iter::once(self.first).chain(self.second).collect()
    }
}

pub fn partitions(n: usize, bound: u64) -> Vec<Partition> {
    let n64 = n as u64;
    let mut out = Vec::new();
    for first in 1..=bound + 1 - n64 {
        if n == 1 {
            out.push(Partition { first, second: None });
            continue;
        }
        for second in first + 1..=bound + 2 - n64 {
            out.push(Partition { first, second: Some(second) });
        }
    }
    out
}

/// Strictly increasing tuples extending a fixed prefix, in lexicographic order.
struct Completions {
    n: usize,
    bound: u64,
    fixed: usize,
    current: Option<Vec<u64>>,
}

impl Completions {
    fn new(prefix: Vec<u64>, n: usize, bound: u64) -> Self {
        let fixed = prefix.len();
        let mut start = prefix;
        let mut next = start.last().copied().unwrap_or(0) + 1;
        while start.len() < n {
            start.push(next);
            next += 1;
        }
        let fits = start.last().map(|&v| v <= bound).unwrap_or(false);
        Completions { n, bound, fixed, current: fits.then_some(start) }
    }

    fn advance(&mut self) {
        let Some(c) = self.current.as_mut() else { return };
        let n = self.n;
        let mut i = n;
        while i > self.fixed {
            i -= 1;
            let limit = self.bound - (n - 1 - i) as u64;
            if c[i] < limit {
                c[i] += 1;
                for k in i + 1..n {
                    c[k] = c[k - 1] + 1;
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Completions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

fn gcd_is_one(v: &[u64]) -> bool {
    v.iter().fold(0u64, |g, x| g.gcd(x)) == 1
}

fn to_tuple(v: Vec<u64>) -> VelocityTuple {
    VelocityTuple::new(v.into_iter().map(|x| x as i64).collect()).expect("positive entries")
}

fn partition_tuples(p: Partition, n: usize, bound: u64) -> impl Iterator<Item = VelocityTuple> {
    Completions::new(p.prefix(), n, bound).filter(|v| gcd_is_one(v)).map(to_tuple)
}

/// Every canonical tuple `0 < v₁ < … < vₙ <= bound`, `gcd = 1`, in lexicographic order.
pub fn enumerate_canonical(n: usize, bound: u64) -> Result<impl Iterator<Item = VelocityTuple>> {
    if n == 0 {
        return Err(Error::InvalidParameter("runner count must be at least 1".into()));
    }
    if bound < n as u64 {
        return Err(Error::BoundTooSmall { n, bound });
    }
    Ok(partitions(n, bound).into_iter().flat_map(move |p| partition_tuples(p, n, bound)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FindingKind {
    Violation,
    Extremiser,
}

/// One line of the results file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub n: usize,
    pub tuple: VelocityTuple,
    pub delta: Rational,
    pub witness: CirclePoint,
}

/// Accumulated search state; also the payload of a checkpoint.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub tuples_examined: u64,
    pub corpus_min_delta: Option<Rational>,
    pub attaining_tuples: Vec<VelocityTuple>,
    pub violations: Vec<Finding>,
    pub extremisers: Vec<Finding>,
    /// Tuples with `δ < 1/(2n)`; must stay empty.
    pub below_trivial_bound: Vec<VelocityTuple>,
    /// Tuples below `1/(2(n − Σ_{i>=2} 1/vᵢ))`, reported rather than asserted.
    pub variant_bound_findings: Vec<VelocityTuple>,
}

impl Tally {
    fn record(&mut self, spec: &SearchSpec, tuple: VelocityTuple) {
        let gap = compute_delta(&tuple).expect("canonical tuples are valid");
        self.tuples_examined += 1;
        let n = spec.n;
        if gap.delta < Rational::new(1, 2 * n as i64) {
            self.below_trivial_bound.push(tuple.clone());
        }
        if gap.delta < variant_bound(&tuple) {
            self.variant_bound_findings.push(tuple.clone());
        }
        let finding = |kind| Finding {
            kind,
            n,
            tuple: tuple.clone(),
            delta: gap.delta.clone(),
            witness: gap.witness.clone(),
        };
        if gap.delta < spec.threshold {
            self.violations.push(finding(FindingKind::Violation));
        } else if gap.delta == spec.threshold {
            self.extremisers.push(finding(FindingKind::Extremiser));
        }
        match &self.corpus_min_delta {
            Some(m) if &gap.delta > m => {}
            Some(m) if &gap.delta == m => self.attaining_tuples.push(tuple),
            _ => {
                self.corpus_min_delta = Some(gap.delta);
                self.attaining_tuples = vec![tuple];
            }
        }
    }

    /// Appends `later`, which covers partitions after all of `self`'s.
    fn merge(&mut self, later: Tally) {
        self.tuples_examined += later.tuples_examined;
        self.violations.extend(later.violations);
        self.extremisers.extend(later.extremisers);
        self.below_trivial_bound.extend(later.below_trivial_bound);
        self.variant_bound_findings.extend(later.variant_bound_findings);
        let Some(theirs) = later.corpus_min_delta else { return };
        match &self.corpus_min_delta {
            Some(m) if &theirs > m => {}
            Some(m) if &theirs == m => self.attaining_tuples.extend(later.attaining_tuples),
            _ => {
                self.corpus_min_delta = Some(theirs);
                self.attaining_tuples = later.attaining_tuples;
            }
        }
    }
}

/// `1/(2(n − Σ_{i=2}^n 1/vᵢ))` for a sorted tuple.
pub fn variant_bound(tuple: &VelocityTuple) -> Rational {
    let v = tuple.velocities();
    let n = Rational::integer(v.len() as i64);
    let tail: Rational = v.iter().skip(1).map(|&x| Rational::new(1, x)).sum();
    (Rational::integer(2) * (n - tail)).recip()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub spec: SearchSpec,
    pub partitions_total: usize,
    pub last_completed_partition: Option<Partition>,
    pub complete: bool,
    pub tally: Tally,
}

impl VerificationReport {
    pub fn tuples_examined(&self) -> u64 {
        self.tally.tuples_examined
    }

    pub fn corpus_min_delta(&self) -> Option<&Rational> {
        self.tally.corpus_min_delta.as_ref()
    }

    pub fn violations(&self) -> &[Finding] {
        &self.tally.violations
    }

    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.tally.violations.iter().chain(&self.tally.extremisers)
    }

    /// Findings as JSON lines, in tuple order.
    pub fn results_lines(&self) -> String {
        let mut all: Vec<&Finding> = self.findings().collect();
        all.sort_by(|a, b| a.tuple.velocities().cmp(b.tuple.velocities()));
        all.iter()
            .map(|f| serde_json::to_string(f).expect("finding serializes") + "\n")
            .collect()
    }
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    spec: SearchSpec,
    last_completed_partition: Option<Partition>,
    tuples_examined: u64,
    corpus_min_delta: Option<Rational>,
    state: Tally,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Writes `contents` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| io_err(&tmp, e))?;
    f.sync_all().map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

fn load_checkpoint(path: &Path, spec: &SearchSpec) -> Result<Option<Checkpoint>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(path, e)),
    };
    let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
    if cp.format != CHECKPOINT_FORMAT {
        return Err(Error::CheckpointMismatch(format!("unknown format {:?}", cp.format)));
    }
    if &cp.spec != spec {
        return Err(Error::CheckpointMismatch(format!(
            "checkpoint is for n={} bound={} threshold={}",
            cp.spec.n, cp.spec.bound, cp.spec.threshold
        )));
    }
    Ok(Some(cp))
}

#[derive(Default)]
pub struct RunOptions<'a> {
    /// Worker threads; `0` or `1` runs on a single thread.
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Stop after this many chunks, leaving a resumable checkpoint.
    pub max_chunks: Option<usize>,
    pub progress: Option<&'a (dyn Fn(usize, usize) + Sync)>,
}

/// Runs `spec` to completion (or until `max_chunks`), resuming from the checkpoint if present.
pub fn run_search(spec: &SearchSpec, opts: &RunOptions) -> Result<VerificationReport> {
    SearchSpec::new(spec.n, spec.bound, Some(spec.threshold.clone()), spec.mode)?;
    let all = partitions(spec.n, spec.bound);
    let (mut tally, mut last) = match &opts.checkpoint {
        Some(path) => match load_checkpoint(path, spec)? {
            Some(cp) => (cp.state, cp.last_completed_partition),
            None => (Tally::default(), None),
        },
        None => (Tally::default(), None),
    };
    let start = match last {
        Some(p) => all.iter().position(|q| *q > p).unwrap_or(all.len()),
        None => 0,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut chunks_done = 0;
    let mut cursor = start;
    while cursor < all.len() {
        if opts.max_chunks.is_some_and(|m| chunks_done >= m) {
            break;
        }
        let chunk = &all[cursor..(cursor + PARTITIONS_PER_CHUNK).min(all.len())];
        let parts: Vec<Tally> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&p| {
                    let mut t = Tally::default();
                    for tuple in partition_tuples(p, spec.n, spec.bound) {
                        t.record(spec, tuple);
                    }
                    t
                })
                .collect()
        });
        for t in parts {
            tally.merge(t);
        }
        cursor += chunk.len();
        last = chunk.last().copied();
        chunks_done += 1;
        if let Some(path) = &opts.checkpoint {
            let cp = Checkpoint {
                format: CHECKPOINT_FORMAT.to_string(),
                spec: spec.clone(),
                last_completed_partition: last,
                tuples_examined: tally.tuples_examined,
                corpus_min_delta: tally.corpus_min_delta.clone(),
                state: tally.clone(),
            };
            let text = serde_json::to_string_pretty(&cp).map_err(|e| Error::Format(e.to_string()))?;
            write_atomic(path, &text)?;
        }
        if let Some(progress) = opts.progress {
            progress(cursor, all.len());
        }
    }

    Ok(VerificationReport {
        spec: spec.clone(),
        partitions_total: all.len(),
        last_completed_partition: last,
        complete: cursor >= all.len(),
        tally,
    })
}

/// Single-threaded run without checkpointing.
pub fn verify_bound(spec: &SearchSpec) -> Result<VerificationReport> {
    run_search(spec, &RunOptions { workers: 1, ..Default::default() })
}

/// All canonical tuples with entries `<= bound` and `δ = 1/(n+1)` exactly.
pub fn find_extremisers(n: usize, bound: u64) -> Result<Vec<VelocityTuple>> {
    let report = verify_bound(&SearchSpec::extremisers(n, bound)?)?;
    Ok(report.tally.extremisers.into_iter().map(|f| f.tuple).collect())
}
