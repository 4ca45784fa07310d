//! Vertex boundaries of important-vertex sets in `B_k`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::arith::gamma;
use crate::error::{Error, Result};
use crate::subdivided::{binary_order, heap_children, heap_neighbors, SubdividedTree};

/// Largest height for exhaustive subset enumeration.
pub const EXHAUSTIVE_MAX_K: u32 = 3;

/// A set of important vertices, stored by `B_k` heap index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImportantSet {
    pub k: u32,
    pub members: Vec<bool>,
}

impl ImportantSet {
    pub fn empty(k: u32) -> Self {
        ImportantSet { k, members: vec![false; binary_order(k)] }
    }

    pub fn full(k: u32) -> Self {
        ImportantSet { k, members: vec![true; binary_order(k)] }
    }

    /// From heap indices.
    pub fn from_heap(k: u32, heap: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(k);
        for b in heap {
            s.members[b] = true;
        }
        s
    }

    /// The important vertices among `vertices` (ids of `T_k`).
    pub fn from_tk(host: &SubdividedTree, vertices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_heap(host.k, vertices.into_iter().filter_map(|v| host.b_map[v]))
    }

    /// The lowest `2^(k+1) - 1` bits of `mask` as a subset.
    pub fn from_mask(k: u32, mask: u64) -> Self {
        let m = binary_order(k);
        ImportantSet { k, members: (0..m).map(|b| mask >> b & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn heap_indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&b| self.members[b]).collect()
    }
}

/// Heap indices outside `x` adjacent in `B_k` to a member of `x`.
pub fn important_boundary(x: &ImportantSet) -> Vec<usize> {
    (0..x.members.len())
        .filter(|&b| !x.members[b] && heap_neighbors(b, x.k).any(|c| x.members[c]))
        .collect()
}

fn boundary_size(members: &[bool], k: u32) -> usize {
    (0..members.len())
        .filter(|&b| !members[b] && heap_neighbors(b, k).any(|c| members[c]))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CheckMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// Outcome of one boundary check over a family of subsets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub k: u32,
    pub mode: CheckMode,
    pub subsets: usize,
    pub violations: usize,
    /// Smallest `|boundary| - bound` seen.
    pub min_slack: f64,
    /// A subset attaining `min_slack`, by heap index.
    pub witness: Vec<usize>,
    /// Violations of `gamma(n) <= m + log2(max(m, 1)) + 4`, `m = |boundary|`.
    pub intermediate_violations: usize,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.intermediate_violations == 0
    }
}

/// `gamma(n) <= m + log2(max(m,1)) + 4`, evaluated without floats.
pub fn intermediate_bound_holds(gamma_n: u32, m: usize) -> bool {
    let excess = i64::from(gamma_n) - m as i64 - 4;
    if excess <= 0 {
        return true;
    }
    // need excess <= log2(max(m,1)), i.e. 2^excess <= max(m,1)
    excess < 63 && (1u64 << excess) <= m.max(1) as u64
}

/// Random subsets mixing three shapes: independent membership with a
/// random density, unions of random subtrees with random holes punched
/// out, and a random-density set restricted to one random subtree.
pub fn sample_subset(k: u32, rng: &mut impl Rng) -> ImportantSet {
    let m = binary_order(k);
    let mut s = ImportantSet::empty(k);
    match rng.gen_range(0..3) {
        0 => {
            let p: f64 = rng.gen();
            for b in 0..m {
                s.members[b] = rng.gen_bool(p);
            }
        }
        1 => {
            let toggles = rng.gen_range(1..=2 * k as usize + 2);
            for _ in 0..toggles {
                let root = rng.gen_range(0..m);
                let value = rng.gen_bool(0.5);
                let mut stack = vec![root];
                while let Some(b) = stack.pop() {
                    s.members[b] = value;
                    stack.extend(heap_children(b, k));
                }
            }
        }
        _ => {
            let root = rng.gen_range(0..m);
            let p: f64 = rng.gen();
            let mut stack = vec![root];
            while let Some(b) = stack.pop() {
                s.members[b] = rng.gen_bool(p);
                stack.extend(heap_children(b, k));
            }
        }
    }
    s
}

#[derive(Default)]
struct Tally {
    subsets: usize,
    violations: usize,
    min_slack: Option<f64>,
    witness: Vec<usize>,
    intermediate_violations: usize,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.subsets += other.subsets;
        self.violations += other.violations;
        self.intermediate_violations += other.intermediate_violations;
        if let Some(s) = other.min_slack {
            if self.min_slack.is_none_or(|cur| s < cur) {
                self.min_slack = Some(s);
                self.witness = other.witness;
            }
        }
        self
    }
}

/// Evaluates `slack(|boundary|, gamma(|X|))` on each subset; a negative
/// slack is a violation.
fn run_check(k: u32, mode: CheckMode, slack: impl Fn(usize, u32) -> f64 + Sync) -> Result<BoundaryReport> {
    let m = binary_order(k);
    let add = |mut tally: Tally, members: &[bool]| -> Tally {
        let n = members.iter().filter(|&&b| b).count();
        let bnd = boundary_size(members, k);
        let g = gamma(n as u64);
        let s = slack(bnd, g);
        tally.subsets += 1;
        tally.violations += usize::from(s < 0.0);
        tally.intermediate_violations += usize::from(!intermediate_bound_holds(g, bnd));
        if tally.min_slack.is_none_or(|cur| s < cur) {
            tally.min_slack = Some(s);
            tally.witness = (0..m).filter(|&b| members[b]).collect();
        }
        tally
    };
    let tally = match mode {
        CheckMode::Exhaustive => {
            if k > EXHAUSTIVE_MAX_K {
                return Err(Error::InvalidArgument(format!("exhaustive checks need k <= {EXHAUSTIVE_MAX_K}")));
            }
            (0..1u64 << m)
                .into_par_iter()
                .fold(Tally::default, |t, mask| add(t, &ImportantSet::from_mask(k, mask).members))
                .reduce(Tally::default, Tally::merge)
        }
        CheckMode::Sample { count, seed } => {
            const CHUNK: usize = 4096;
            (0..count.div_ceil(CHUNK))
                .into_par_iter()
                .map(|c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c as u64);
                    let len = CHUNK.min(count - c * CHUNK);
                    (0..len).fold(Tally::default(), |t, _| add(t, &sample_subset(k, &mut rng).members))
                })
                .reduce(Tally::default, Tally::merge)
        }
    };
    Ok(BoundaryReport {
        k,
        mode,
        subsets: tally.subsets,
        violations: tally.violations,
        min_slack: tally.min_slack.unwrap_or(0.0),
        witness: tally.witness,
        intermediate_violations: tally.intermediate_violations,
    })
}

/// Checks `|boundary(X)| >= (gamma(|X|) - 2) / 6`.
pub fn check_weak_boundary(k: u32, mode: CheckMode) -> Result<BoundaryReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    run_check(k, mode, |bnd, g| bnd as f64 - (f64::from(g) - 2.0) / 6.0)
}

/// Checks `|boundary(X)| >= gamma(|X|) - eps * k`.
pub fn check_eps_boundary(k: u32, eps: Ratio<i64>, mode: CheckMode) -> Result<BoundaryReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if eps <= Ratio::from_integer(0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let eps_k = {
        let ek = eps * i64::from(k);
        *ek.numer() as f64 / *ek.denom() as f64
    };
    run_check(k, mode, move |bnd, g| bnd as f64 - (f64::from(g) - eps_k))
}
