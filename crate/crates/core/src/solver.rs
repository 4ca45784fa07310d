//! Exact hunter number by breadth-first search over possible-position sets.
//!
//! The mouse is invisible, so the game is one-player reachability: from a
//! state `A` the cats may move to `step(A, C)` for any shot set `|C| <= r`,
//! and they win iff the empty set is reachable from the initial domain.
//! States are bitmasks, which caps the tree order at 64; the configured
//! guard is much lower.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{initial_set, GameSemantics, PositionSet, Rule, Schedule};
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest tree order accepted.
    pub max_order: usize,
    /// Largest cat count `hunter_number` will try.
    pub max_cats: usize,
    /// Only expand shot sets of maximal size. Never changes answers or
    /// witness lengths.
    pub dominance: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_order: 24, max_cats: 3, dominance: true }
    }
}

/// Outcome of one reachability search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search {
    pub witness: Option<Schedule>,
    pub explored_states: usize,
}

impl Search {
    pub fn wins(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub h: usize,
    pub witness: Schedule,
    pub explored_states: usize,
    /// `(r, win)` for every cat count tried, ascending.
    pub per_r_outcomes: Vec<(usize, bool)>,
    pub semantics: GameSemantics,
}

#[derive(Serialize)]
struct ROutcome {
    r: usize,
    win: bool,
}

#[derive(Serialize)]
struct SolveResultDoc {
    order: usize,
    h: usize,
    witness: crate::game::ScheduleDoc,
    explored_states: usize,
    per_r_outcomes: Vec<ROutcome>,
}

impl SolveResult {
    pub fn to_json(&self, order: usize) -> String {
        let doc = SolveResultDoc {
            order,
            h: self.h,
            witness: self.witness.to_doc(self.semantics),
            explored_states: self.explored_states,
            per_r_outcomes: self.per_r_outcomes.iter().map(|&(r, win)| ROutcome { r, win }).collect(),
        };
        serde_json::to_string(&doc).expect("solve results serialise")
    }
}

struct Board {
    nbr: Vec<u64>,
}

impl Board {
    fn new(t: &Tree) -> Self {
        let nbr = (0..t.order())
            .map(|v| t.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        Board { nbr }
    }

    fn expand(&self, a: u64) -> u64 {
        let mut out = 0;
        let mut bits = a;
        while bits != 0 {
            out |= self.nbr[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        out
    }

    /// Vertices where a shot can change the successor.
    fn candidates(&self, a: u64, rule: Rule) -> u64 {
        match rule {
            Rule::PaperRecurrence => self.expand(a),
            Rule::ShootThenMove => a,
        }
    }

    fn successor(&self, a: u64, shot: u64, rule: Rule) -> u64 {
        match rule {
            Rule::PaperRecurrence => self.expand(a) & !shot,
            Rule::ShootThenMove => self.expand(a & !shot),
        }
    }
}

fn bits_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut bits = mask;
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

/// Calls `f` on every subset of `items` with size in `sizes`, by size
/// then lexicographically.
fn for_each_combination(items: &[usize], sizes: std::ops::RangeInclusive<usize>, mut f: impl FnMut(u64)) {
    fn rec(items: &[usize], start: usize, left: usize, acc: u64, f: &mut impl FnMut(u64)) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=items.len() - left {
            rec(items, i + 1, left - 1, acc | 1 << items[i], f);
        }
    }
    for size in sizes {
        if size <= items.len() {
            rec(items, 0, size, 0, &mut f);
        }
    }
}

/// Shot sets worth considering from `a`: subsets of `N(a)` (paper rule) or
/// of `a` (shoot-then-move) with at most `r` vertices, smallest first.
pub fn pruned_shots(a: &PositionSet, t: &Tree, r: usize, rule: Rule) -> Vec<Vec<usize>> {
    let candidates = match rule {
        Rule::PaperRecurrence => a.neighborhood(t),
        Rule::ShootThenMove => a.clone(),
    }
    .to_vec();
    let mut out = Vec::new();
    let mut rec = Vec::new();
    fn go(items: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < left {
                break;
            }
            cur.push(items[i]);
            go(items, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    for size in 0..=r.min(candidates.len()) {
        go(&candidates, 0, size, &mut rec, &mut out);
    }
    out
}

fn check_capacity(t: &Tree, config: &SolverConfig) -> Result<()> {
    let limit = config.max_order.min(64);
    if t.order() > limit {
        return Err(Error::Capacity { n: t.order(), limit });
    }
    Ok(())
}

fn to_mask(s: &PositionSet) -> u64 {
    s.iter().fold(0u64, |m, v| m | 1 << v)
}

/// Can `r` cats clean `t` starting from the semantics' initial domain?
pub fn cats_win(t: &Tree, r: usize, sem: GameSemantics, config: &SolverConfig) -> Result<Search> {
    cats_win_from(t, r, sem, &initial_set(t, sem), config)
}

/// As [`cats_win`], from an arbitrary possible-position set.
pub fn cats_win_from(
    t: &Tree,
    r: usize,
    sem: GameSemantics,
    start: &PositionSet,
    config: &SolverConfig,
) -> Result<Search> {
    if r == 0 {
        return Err(Error::InvalidArgument("cats_win needs r >= 1".into()));
    }
    check_capacity(t, config)?;
    let board = Board::new(t);
    let rule = sem.rule;
    let start = to_mask(start);
    if start == 0 {
        return Ok(Search { witness: Some(Schedule::new(r, Vec::new())?), explored_states: 1 });
    }
    // state -> (predecessor, shot)
    let mut parent: HashMap<u64, (u64, u64)> = HashMap::new();
    parent.insert(start, (start, 0));
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        let candidates = bits_of(board.candidates(a, rule));
        let sizes = if config.dominance {
            let k = r.min(candidates.len());
            k..=k
        } else {
            0..=r.min(candidates.len())
        };
        let mut found = false;
        for_each_combination(&candidates, sizes, |shot| {
            if found {
                return;
            }
            let b = board.successor(a, shot, rule);
            if let Entry::Vacant(e) = parent.entry(b) {
                e.insert((a, shot));
                if b == 0 {
                    found = true;
                } else {
                    queue.push_back(b);
                }
            }
        });
        if found {
            let mut rounds = Vec::new();
            let mut cur = 0u64;
            while cur != start {
                let (prev, shot) = parent[&cur];
                rounds.push(bits_of(shot));
                cur = prev;
            }
            rounds.reverse();
            return Ok(Search { witness: Some(Schedule::new(r, rounds)?), explored_states: parent.len() });
        }
    }
    Ok(Search { witness: None, explored_states: parent.len() })
}

/// Least `r` for which the cats win, with a shortest witness.
pub fn hunter_number(t: &Tree, sem: GameSemantics, config: &SolverConfig) -> Result<SolveResult> {
    check_capacity(t, config)?;
    let mut per_r_outcomes = Vec::new();
    let mut explored_states = 0;
    for r in 1..=config.max_cats {
        let search = cats_win(t, r, sem, config)?;
        explored_states += search.explored_states;
        per_r_outcomes.push((r, search.wins()));
        if let Some(witness) = search.witness {
            return Ok(SolveResult { h: r, witness, explored_states, per_r_outcomes, semantics: sem });
        }
    }
    Err(Error::CatLimit { max_cats: config.max_cats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::verify_winning;

    #[test]
    fn single_vertex_needs_one_cat() {
        let k1 = Tree::single_vertex();
        let cfg = SolverConfig::default();
        for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE] {
            let res = hunter_number(&k1, sem, &cfg).unwrap();
            assert_eq!(res.h, 1);
            assert!(verify_winning(&k1, &res.witness, sem));
        }
    }

    #[test]
    fn paths_are_one_cat_wins() {
        let p10 = Tree::path(10).unwrap();
        let s = cats_win(&p10, 1, GameSemantics::PAPER, &SolverConfig::default()).unwrap();
        assert!(s.wins());
        assert!(verify_winning(&p10, s.witness.as_ref().unwrap(), GameSemantics::PAPER));
    }

    #[test]
    fn h_tree_needs_two() {
        let h = Tree::h_tree();
        let cfg = SolverConfig::default();
        assert!(!cats_win(&h, 1, GameSemantics::PAPER, &cfg).unwrap().wins());
        let res = hunter_number(&h, GameSemantics::PAPER, &cfg).unwrap();
        assert_eq!(res.h, 2);
        assert_eq!(res.per_r_outcomes, vec![(1, false), (2, true)]);
        assert!(verify_winning(&h, &res.witness, GameSemantics::PAPER));
    }

    #[test]
    fn p2_witness_has_two_rounds() {
        let p2 = Tree::path(2).unwrap();
        let res = hunter_number(&p2, GameSemantics::PAPER, &SolverConfig::default()).unwrap();
        assert_eq!(res.h, 1);
        assert_eq!(res.witness.len(), 2);
        assert_eq!(res.witness.rounds(), &[vec![0], vec![0]]);
    }

    #[test]
    fn capacity_guard() {
        let big = Tree::path(30).unwrap();
        assert!(matches!(
            hunter_number(&big, GameSemantics::PAPER, &SolverConfig::default()),
            Err(Error::Capacity { n: 30, limit: 24 })
        ));
    }

    #[test]
    fn pruned_shot_examples() {
        let p3 = Tree::path(3).unwrap();
        let mid = PositionSet::from_vertices(3, [1]);
        assert_eq!(pruned_shots(&mid, &p3, 1, Rule::PaperRecurrence), vec![vec![], vec![0], vec![2]]);
        assert_eq!(pruned_shots(&PositionSet::empty(3), &p3, 2, Rule::PaperRecurrence), vec![Vec::<usize>::new()]);
        assert_eq!(pruned_shots(&mid, &p3, 2, Rule::ShootThenMove), vec![vec![], vec![1]]);
    }

    #[test]
    fn dominance_does_not_change_answers() {
        let on = SolverConfig::default();
        let off = SolverConfig { dominance: false, ..on };
        for seed in 0..20 {
            let t = crate::tree::random_tree(9 + (seed as usize % 4), seed);
            for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE, GameSemantics::PAPER_CLASS_ONE] {
                for r in 1..=2 {
                    let a = cats_win(&t, r, sem, &on).unwrap();
                    let b = cats_win(&t, r, sem, &off).unwrap();
                    assert_eq!(a.wins(), b.wins());
                    if let (Some(x), Some(y)) = (&a.witness, &b.witness) {
                        assert_eq!(x.len(), y.len());
                    }
                }
            }
        }
    }

    #[test]
    fn solve_json_is_stable() {
        let p2 = Tree::path(2).unwrap();
        let res = hunter_number(&p2, GameSemantics::PAPER, &SolverConfig::default()).unwrap();
        assert_eq!(
            res.to_json(2),
            r#"{"order":2,"h":1,"witness":{"r":1,"semantics":"paper","initial_domain":"all","rounds":[[0],[0]]},"explored_states":4,"per_r_outcomes":[{"r":1,"win":true}]}"#
        );
    }
}
