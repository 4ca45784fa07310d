//! Running cat schedules on `T_k` and auditing the counting argument that
//! keeps enough important vertices in every even-round position set.

use std::collections::VecDeque;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::arith::{corollary_budget, special_n, BudgetRule};
use crate::error::{Error, Result};
use crate::game::Schedule;
use crate::strategies::basic_strategy;
use crate::subdivided::{heap_neighbors, heap_parent, make_tk, SubdividedTree};

pub const DEFAULT_ROUNDS: usize = 32;

/// Per-component quantities of one audited step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentAudit {
    /// `|V(X_j)|`.
    pub vertices: usize,
    /// `|E_j|`: edges of the component whose subdividing vertex was shot on
    /// the odd round.
    pub edges_shot: usize,
    /// `|Y_j|`: vertices of the component shot on the even round.
    pub y: usize,
    /// `|R_j|`: vertices all of whose component edges are in `E_j`.
    pub r: usize,
    /// `w_j`: every component edge was shot.
    pub w: bool,
}

/// Audit of the step from round `round - 2` to `round`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRecord {
    pub round: usize,
    /// `|X|`, always the target count.
    pub x: usize,
    /// `|boundary(X)|`.
    pub boundary: usize,
    pub components: Vec<ComponentAudit>,
    /// Important vertices actually present after `round`.
    pub observed: usize,
    /// `sum_j (|V(X_j)| - |Y_j| - |R_j|)`.
    pub component_sum: i64,
    /// `n + |boundary| - c - sum_j (|E_j| + w_j)`.
    pub middle: i64,
    /// `n + |boundary| - 2c - sum_j w_j`.
    pub chain: i64,
    /// `|R_j| <= |E_j| + w_j` for every component.
    pub isolated_ok: bool,
    /// Every vertex of every component outside `Y_j` and `R_j` is present.
    pub containment: bool,
    /// Whether the chain alone already certifies the target count.
    pub chain_reaches_target: bool,
}

impl AuditRecord {
    /// The inequalities of the counting argument, checked on this step.
    pub fn passed(&self) -> bool {
        self.isolated_ok
            && self.observed as i64 >= self.component_sum
            && self.component_sum >= self.middle
            && self.middle >= self.chain
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SurvivalOutcome {
    Survives,
    /// The important count dropped below the target after this round.
    BelowTarget { round: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivalReport {
    pub k: u32,
    pub n_target: u64,
    /// Largest shot size in the schedule.
    pub cats: usize,
    pub rounds: usize,
    /// Important-vertex counts of `A_0, A_2, A_4, ...`.
    pub even_counts: Vec<usize>,
    pub audits: Vec<AuditRecord>,
    pub outcome: SurvivalOutcome,
}

/// `N(a)` on `T_k`, walking the heap layout instead of adjacency lists.
fn neighborhood(st: &SubdividedTree, a: &[bool]) -> Vec<bool> {
    let m = st.important_count();
    let mut out = vec![false; a.len()];
    for c in 1..m {
        let (p, v) = (st.vertex_of(heap_parent(c).unwrap()), st.vertex_of(c));
        let s = st.subdivider(c);
        out[s] = a[p] | a[v];
        if a[s] {
            out[p] = true;
            out[v] = true;
        }
    }
    out
}

/// Paper-rule dynamics on `T_k` over plain boolean vectors.
fn step(st: &SubdividedTree, a: &[bool], shot: &[bool]) -> Vec<bool> {
    let mut out = neighborhood(st, a);
    for (o, &s) in out.iter_mut().zip(shot) {
        *o &= !s;
    }
    out
}

fn shot_mask(n: usize, shot: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in shot {
        mask[v] = true;
    }
    mask
}

/// Position sets `A_0 .. A_len` starting from every vertex.
pub fn position_sets(st: &SubdividedTree, s: &Schedule) -> Vec<Vec<bool>> {
    let n = st.tree.order();
    let mut sets = vec![vec![true; n]];
    for shot in s.rounds() {
        let next = step(st, sets.last().unwrap(), &shot_mask(n, shot));
        sets.push(next);
    }
    sets
}

fn important_count(st: &SubdividedTree, a: &[bool]) -> usize {
    (0..st.important_count()).filter(|&b| a[st.vertex_of(b)]).count()
}

/// Runs `s` on `T_k` and records the important count after every even
/// round; the target is the number whose binary expansion repeats `10`
/// `floor(k/2)` times.
pub fn survival_run(st: &SubdividedTree, s: &Schedule, audit: bool) -> Result<SurvivalReport> {
    s.check_vertices(&st.tree)?;
    let n_target = special_n(st.k);
    let cats = s.cats_used();
    let sets = position_sets(st, s);
    let mut even_counts = Vec::new();
    let mut audits = Vec::new();
    let mut outcome = SurvivalOutcome::Survives;
    for i in (0..sets.len()).step_by(2) {
        let count = important_count(st, &sets[i]);
        even_counts.push(count);
        if (count as u64) < n_target && outcome == SurvivalOutcome::Survives {
            outcome = SurvivalOutcome::BelowTarget { round: i };
        }
        if audit && i >= 2 && important_count(st, &sets[i - 2]) as u64 >= n_target {
            audits.push(audit_step(st, &sets[i - 2], &sets[i], &s.rounds()[i - 2], &s.rounds()[i - 1], cats, i));
        }
    }
    Ok(SurvivalReport { k: st.k, n_target, cats, rounds: s.len(), even_counts, audits, outcome })
}

/// `odd_shot` and `even_shot` are the shots of rounds `round - 1` and
/// `round`.
fn audit_step(
    st: &SubdividedTree,
    before: &[bool],
    after: &[bool],
    odd_shot: &[usize],
    even_shot: &[usize],
    cats: usize,
    round: usize,
) -> AuditRecord {
    let k = st.k;
    let m = st.important_count();
    let target = special_n(k) as usize;
    let mut in_x = vec![false; m];
    for b in (0..m).filter(|&b| before[st.vertex_of(b)]).take(target) {
        in_x[b] = true;
    }
    let mut in_bar = in_x.clone();
    let mut boundary = 0;
    for b in 0..m {
        if !in_x[b] && heap_neighbors(b, k).any(|c| in_x[c]) {
            in_bar[b] = true;
            boundary += 1;
        }
    }
    // edge to the parent of heap index c is shot when its subdivider is
    let mut edge_shot = vec![false; m];
    for &v in odd_shot {
        if let Some(c) = st.edge_child(v) {
            edge_shot[c] = true;
        }
    }
    let mut y_shot = vec![false; m];
    for &v in even_shot {
        if let Some(b) = st.b_map[v] {
            y_shot[b] = true;
        }
    }

    let mut seen = vec![false; m];
    let mut components = Vec::new();
    let mut containment = true;
    for start in 0..m {
        if !in_bar[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut verts = Vec::new();
        while let Some(b) = queue.pop_front() {
            verts.push(b);
            for c in heap_neighbors(b, k) {
                if in_bar[c] && !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        let (mut edges_shot, mut y, mut r) = (0, 0, 0);
        for &b in &verts {
            if heap_parent(b).is_some_and(|p| in_bar[p]) && edge_shot[b] {
                edges_shot += 1;
            }
            // incident component edges: to the parent and to children in the bar set
            let all_shot = heap_neighbors(b, k)
                .filter(|&c| in_bar[c])
                .all(|c| if heap_parent(b) == Some(c) { edge_shot[b] } else { edge_shot[c] });
            y += usize::from(y_shot[b]);
            r += usize::from(all_shot);
            if !all_shot && !y_shot[b] && !after[st.vertex_of(b)] {
                containment = false;
            }
        }
        components.push(ComponentAudit {
            vertices: verts.len(),
            edges_shot,
            y,
            r,
            w: edges_shot + 1 == verts.len(),
        });
    }

    let x = in_x.iter().filter(|&&b| b).count();
    let c = cats as i64;
    let sum_w: i64 = components.iter().map(|j| i64::from(j.w)).sum();
    let sum_e: i64 = components.iter().map(|j| j.edges_shot as i64).sum();
    let component_sum = components.iter().map(|j| j.vertices as i64 - j.y as i64 - j.r as i64).sum();
    let middle = x as i64 + boundary as i64 - c - sum_e - sum_w;
    let chain = x as i64 + boundary as i64 - 2 * c - sum_w;
    AuditRecord {
        round,
        x,
        boundary,
        isolated_ok: components.iter().all(|j| j.r <= j.edges_shot + usize::from(j.w)),
        observed: important_count(st, after),
        component_sum,
        middle,
        chain,
        containment,
        chain_reaches_target: chain >= target as i64,
        components,
    }
}

/// Cat schedule generators used against the survival claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Adversary {
    /// `c` distinct uniformly random vertices per round.
    Random,
    /// Shoots the vertices whose removal shrinks the next position set
    /// most, ties broken at random.
    Greedy,
    /// Marches through the subdividing vertices from a random offset.
    Sweep,
    /// A random window of the centre-decomposition strategy, each shot cut
    /// down to `c` random vertices.
    Strategy,
}

pub const ADVERSARIES: [Adversary; 4] = [Adversary::Random, Adversary::Greedy, Adversary::Sweep, Adversary::Strategy];

pub fn random_schedule(st: &SubdividedTree, c: usize, rounds: usize, rng: &mut impl Rng) -> Schedule {
    let n = st.tree.order();
    let shots = (0..rounds).map(|_| rand::seq::index::sample(rng, n, c.min(n)).into_vec()).collect();
    Schedule::new(c.max(1), shots).expect("shots of size c")
}

pub fn greedy_schedule(st: &SubdividedTree, c: usize, rounds: usize, rng: &mut impl Rng) -> Schedule {
    let t = &st.tree;
    let n = t.order();
    let mut a = vec![true; n];
    let mut shots = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let pre = neighborhood(st, &a);
        let mut support = vec![0u32; n];
        for v in (0..n).filter(|&v| pre[v]) {
            for &w in t.neighbors(v) {
                support[w] += 1;
            }
        }
        // shooting u removes u now and every neighbour it alone supports next;
        // keep the c best (score, random tie-break) pairs
        let mut best: Vec<(usize, u32, usize)> = Vec::with_capacity(c + 1);
        for u in (0..n).filter(|&u| pre[u]) {
            let score = 1 + t.neighbors(u).iter().filter(|&&w| support[w] == 1).count();
            if best.len() == c && best.last().is_some_and(|&(s, _, _)| score < s) {
                continue;
            }
            let entry = (score, rng.gen(), u);
            let pos = best.partition_point(|&(s, tie, _)| (s, tie) > (entry.0, entry.1));
            best.insert(pos, entry);
            best.truncate(c);
        }
        let shot: Vec<usize> = best.into_iter().map(|(_, _, u)| u).collect();
        a = step(st, &a, &shot_mask(n, &shot));
        shots.push(shot);
    }
    Schedule::new(c.max(1), shots).expect("shots of size c")
}

pub fn sweep_schedule(st: &SubdividedTree, c: usize, rounds: usize, rng: &mut impl Rng) -> Schedule {
    let m = st.important_count();
    let edges = m - 1;
    let offset = rng.gen_range(0..edges);
    let reverse = rng.gen_bool(0.5);
    let shots = (0..rounds)
        .map(|i| {
            (0..c.min(edges))
                .map(|j| {
                    let e = (offset + i * c + j) % edges;
                    let child = if reverse { edges - e } else { e + 1 };
                    st.subdivider(child)
                })
                .collect()
        })
        .collect();
    Schedule::new(c.max(1), shots).expect("shots of size c")
}

pub fn strategy_schedule(base: &Schedule, c: usize, rounds: usize, rng: &mut impl Rng) -> Schedule {
    let total = base.len();
    let start = if total > rounds { rng.gen_range(0..=total - rounds) } else { 0 };
    let shots = (0..rounds)
        .map(|i| {
            let mut shot = base.rounds().get(start + i).cloned().unwrap_or_default();
            shot.shuffle(rng);
            shot.truncate(c);
            shot
        })
        .collect();
    Schedule::new(c.max(1), shots).expect("shots of size c")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub k: u32,
    pub eps: Ratio<i64>,
    pub schedules: usize,
    pub rounds: usize,
    pub seed: u64,
    pub audit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdversaryTally {
    pub adversary: Adversary,
    pub schedules: usize,
    pub survived: usize,
    pub min_even_count: usize,
}

/// Aggregate of many survival runs. The claim being tested quantifies
/// over all schedules, so a clean summary is sampled evidence only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurvivalSummary {
    pub k: u32,
    pub cats: usize,
    pub n_target: u64,
    pub rounds: usize,
    pub schedules: usize,
    pub evidence: &'static str,
    pub survived: usize,
    pub min_even_count: usize,
    pub by_adversary: Vec<AdversaryTally>,
    pub audited_steps: usize,
    pub audit_failures: usize,
    pub containment_failures: usize,
    pub chain_reaches_target: usize,
    /// `(schedule index, adversary, round)` of the first failed audit or
    /// survival, if any.
    pub first_failure: Option<(usize, Adversary, usize)>,
}

impl SurvivalSummary {
    pub fn passed(&self) -> bool {
        self.survived == self.schedules && self.audit_failures == 0
    }
}

/// Runs `schedules` generated schedules on `T_k` with the strong budget
/// `floor((1/4 - eps) k)`, cycling through the adversaries.
pub fn survival_suite(config: &SuiteConfig) -> Result<SurvivalSummary> {
    let cats = corollary_budget(config.k, BudgetRule::Strong, config.eps)?;
    if cats == 0 {
        return Err(Error::InvalidArgument(format!("the budget for k = {} is zero cats", config.k)));
    }
    let st = make_tk(config.k)?;
    let base = basic_strategy(&st.tree);
    let results: Vec<(Adversary, SurvivalReport)> = (0..config.schedules)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let adversary = ADVERSARIES[i % ADVERSARIES.len()];
            let s = match adversary {
                Adversary::Random => random_schedule(&st, cats, config.rounds, &mut rng),
                Adversary::Greedy => greedy_schedule(&st, cats, config.rounds, &mut rng),
                Adversary::Sweep => sweep_schedule(&st, cats, config.rounds, &mut rng),
                Adversary::Strategy => strategy_schedule(&base, cats, config.rounds, &mut rng),
            };
            let report = survival_run(&st, &s, config.audit).expect("generated shots are vertices of T_k");
            (adversary, report)
        })
        .collect();

    let mut by_adversary: Vec<AdversaryTally> = ADVERSARIES
        .iter()
        .map(|&adversary| AdversaryTally { adversary, schedules: 0, survived: 0, min_even_count: usize::MAX })
        .collect();
    let mut summary = SurvivalSummary {
        k: config.k,
        cats,
        n_target: special_n(config.k),
        rounds: config.rounds,
        schedules: config.schedules,
        evidence: "sampled",
        survived: 0,
        min_even_count: usize::MAX,
        by_adversary: Vec::new(),
        audited_steps: 0,
        audit_failures: 0,
        containment_failures: 0,
        chain_reaches_target: 0,
        first_failure: None,
    };
    for (i, (adversary, report)) in results.iter().enumerate() {
        let tally = by_adversary.iter_mut().find(|t| t.adversary == *adversary).unwrap();
        let low = report.even_counts.iter().copied().min().unwrap_or(usize::MAX);
        tally.schedules += 1;
        tally.min_even_count = tally.min_even_count.min(low);
        summary.min_even_count = summary.min_even_count.min(low);
        match report.outcome {
            SurvivalOutcome::Survives => {
                tally.survived += 1;
                summary.survived += 1;
            }
            SurvivalOutcome::BelowTarget { round } => {
                summary.first_failure.get_or_insert((i, *adversary, round));
            }
        }
        for a in &report.audits {
            summary.audited_steps += 1;
            summary.containment_failures += usize::from(!a.containment);
            summary.chain_reaches_target += usize::from(a.chain_reaches_target);
            if !a.passed() {
                summary.audit_failures += 1;
                summary.first_failure.get_or_insert((i, *adversary, a.round));
            }
        }
    }
    summary.by_adversary = by_adversary;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{run_schedule, GameSemantics};

    #[test]
    fn empty_schedule_on_t2_keeps_everything() {
        let st = make_tk(2).unwrap();
        let s = Schedule::new(1, vec![Vec::new(); 12]).unwrap();
        let report = survival_run(&st, &s, true).unwrap();
        assert_eq!(report.cats, 0);
        assert!(report.even_counts.iter().all(|&c| c == 7));
        assert_eq!(report.outcome, SurvivalOutcome::Survives);
        assert!(report.audits.iter().all(AuditRecord::passed));
    }

    #[test]
    fn dynamics_match_the_game_engine() {
        let st = make_tk(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let s = random_schedule(&st, 2, 16, &mut rng);
            let sets = position_sets(&st, &s);
            let trace = run_schedule(&st.tree, &s, GameSemantics::PAPER);
            for step in &trace.steps {
                let expect: Vec<usize> = (0..st.tree.order()).filter(|&v| sets[step.round][v]).collect();
                assert_eq!(step.set.to_vec(), expect);
            }
        }
    }

    #[test]
    fn one_cat_on_t8() {
        let st = make_tk(8).unwrap();
        let base = basic_strategy(&st.tree);
        for i in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(i);
            let s = match i % 4 {
                0 => random_schedule(&st, 1, 32, &mut rng),
                1 => greedy_schedule(&st, 1, 32, &mut rng),
                2 => sweep_schedule(&st, 1, 32, &mut rng),
                _ => strategy_schedule(&base, 1, 32, &mut rng),
            };
            let report = survival_run(&st, &s, true).unwrap();
            assert_eq!(report.n_target, 170);
            assert_eq!(report.outcome, SurvivalOutcome::Survives);
            assert_eq!(report.even_counts.len(), 17);
            assert_eq!(report.audits.len(), 16);
            for a in &report.audits {
                assert!(a.passed(), "{a:?}");
                assert_eq!(a.x, 170);
            }
        }
    }

    #[test]
    fn generators_respect_the_budget() {
        let st = make_tk(5).unwrap();
        let base = basic_strategy(&st.tree);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in [
            random_schedule(&st, 3, 10, &mut rng),
            greedy_schedule(&st, 3, 10, &mut rng),
            sweep_schedule(&st, 3, 10, &mut rng),
            strategy_schedule(&base, 3, 10, &mut rng),
        ] {
            assert_eq!(s.len(), 10);
            assert!(s.cats_used() <= 3);
            assert!(s.check_vertices(&st.tree).is_ok());
        }
    }

    #[test]
    fn small_suite() {
        let config = SuiteConfig { k: 8, eps: Ratio::new(1, 20), schedules: 24, rounds: 16, seed: 7, audit: true };
        let summary = survival_suite(&config).unwrap();
        assert_eq!(summary.cats, 1);
        assert_eq!(summary.by_adversary.iter().map(|t| t.schedules).sum::<usize>(), 24);
        assert!(summary.passed(), "{summary:?}");
        let zero = SuiteConfig { k: 4, ..config };
        assert!(survival_suite(&zero).is_err());
    }
}
