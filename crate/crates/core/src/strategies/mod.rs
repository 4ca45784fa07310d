//! Constructive cat strategies.
//!
//! Every generator returns a plain [`Schedule`]; correctness is not taken
//! on trust but certified by replaying the schedule through
//! [`crate::game::verify_winning`].

mod basic;
mod improved;

use std::collections::HashMap;

use crate::enumerate::{canonical_order, graph_centres, rooted_code};
use crate::game::{GameSemantics, Schedule};
use crate::solver::{cats_win, SolverConfig};
use crate::tree::Tree;

pub use improved::{decompose, BigComponent, CaseKind, DecompositionPlan, StageRecord, VariantSchedule};

/// Trees up to this order are handled by a one-cat solver witness.
pub const BASE_CASE_ORDER: usize = 9;

type Rounds = Vec<Vec<usize>>;

/// Generates strategies, caching one-cat witnesses for small trees by
/// rooted canonical form.
#[derive(Default)]
pub struct StrategyBuilder {
    base: HashMap<String, Rounds>,
}

impl StrategyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Standard-game one-cat witness for a tree of order at most 9.
    fn base_witness(&mut self, t: &Tree) -> Rounds {
        let n = t.order();
        assert!(n <= BASE_CASE_ORDER, "base case called on order {n}");
        if n == 1 {
            return vec![vec![0]];
        }
        let root = graph_centres(t)[0];
        let key = rooted_code(t, root);
        let order = canonical_order(t, root);
        let canonical_rounds = self.base.entry(key).or_insert_with(|| {
            let mut relabel = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                relabel[v] = i;
            }
            let edges: Vec<_> = t.edges().into_iter().map(|(a, b)| (relabel[a], relabel[b])).collect();
            let canon = Tree::from_edges(n, &edges).expect("relabelled tree");
            let search = cats_win(&canon, 1, GameSemantics::PAPER, &SolverConfig::default())
                .expect("base case fits the solver");
            search
                .witness
                .expect("trees of order at most 9 are one-cat wins")
                .rounds()
                .to_vec()
        });
        canonical_rounds
            .iter()
            .map(|shot| shot.iter().map(|&i| order[i]).collect())
            .collect()
    }

    /// Schedule with at most `ceil(log2 n)` cats (and at least one).
    pub fn basic(&mut self, t: &Tree) -> Schedule {
        Schedule::tight(self.basic_rounds(t))
    }

    /// Schedule for the class-one variant with at most `ceil(log2(n)/2)`
    /// cats (and at least one).
    pub fn improved(&mut self, t: &Tree) -> VariantSchedule {
        improved::improved_variant(self, t)
    }

    /// The improved variant schedule converted to the standard game.
    pub fn improved_standard(&mut self, t: &Tree) -> Schedule {
        let vs = self.improved(t);
        variant_to_standard(&vs, t)
    }
}

/// Convenience wrapper around [`StrategyBuilder::basic`].
pub fn basic_strategy(t: &Tree) -> Schedule {
    StrategyBuilder::new().basic(t)
}

/// Convenience wrapper around [`StrategyBuilder::improved`].
pub fn improved_strategy(t: &Tree) -> VariantSchedule {
    StrategyBuilder::new().improved(t)
}

/// Turns a winning class-one strategy `S` into a standard-game strategy:
/// `S S` when `|S|` is odd, `S, wait, S` when it is even.
pub fn variant_to_standard(vs: &VariantSchedule, _t: &Tree) -> Schedule {
    repeat_for_standard(&vs.schedule)
}

pub(crate) fn repeat_for_standard(s: &Schedule) -> Schedule {
    let once = s.rounds();
    let mut rounds = Vec::with_capacity(2 * once.len() + 1);
    rounds.extend_from_slice(once);
    if once.len().is_multiple_of(2) {
        rounds.push(Vec::new());
    }
    rounds.extend_from_slice(once);
    Schedule::new(s.r(), rounds).expect("same rounds, same cat count")
}

/// Pads to even length with one idle round.
fn pad_even(mut rounds: Rounds) -> Rounds {
    if rounds.len() % 2 == 1 {
        rounds.push(Vec::new());
    }
    rounds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::verify_winning;

    #[test]
    fn base_witnesses_certify_and_cache() {
        let mut b = StrategyBuilder::new();
        for n in 1..=9 {
            for t in crate::enumerate::enumerate_trees(n).unwrap() {
                let s = Schedule::new(1, b.base_witness(&t)).unwrap();
                assert!(verify_winning(&t, &s, GameSemantics::PAPER), "order {n}");
            }
        }
        let before = b.base.len();
        let t = crate::tree::random_tree(9, 77);
        let _ = b.base_witness(&t);
        let _ = b.base_witness(&t);
        assert!(b.base.len() <= before + 1);
    }

    #[test]
    fn odd_and_even_lengths_convert() {
        let p2 = Tree::path(2).unwrap();
        // class one of P2 is {0}; after the mouse's first move it sits on 1
        let odd = VariantSchedule::from_schedule(Schedule::new(1, vec![vec![1]]).unwrap());
        assert!(verify_winning(&p2, &odd.schedule, GameSemantics::PAPER_CLASS_ONE));
        let std_odd = variant_to_standard(&odd, &p2);
        assert_eq!(std_odd.len(), 2);
        assert!(verify_winning(&p2, &std_odd, GameSemantics::PAPER));

        let even = VariantSchedule::from_schedule(Schedule::new(1, vec![vec![1], vec![]]).unwrap());
        let std_even = variant_to_standard(&even, &p2);
        assert_eq!(std_even.len(), 5);
        assert!(verify_winning(&p2, &std_even, GameSemantics::PAPER));
    }
}
