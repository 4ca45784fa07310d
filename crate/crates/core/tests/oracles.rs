//! Library results checked against brute-force oracles that share no code
//! with the implementation.

use std::collections::{BTreeSet, HashMap, VecDeque};

use catmouse::enumerate::{canonical_form, enumerate_trees};
use catmouse::game::{initial_set, run_schedule, step, verify_winning};
use catmouse::solver::{hunter_number, SolverConfig};
use catmouse::strategies::StrategyBuilder;
use catmouse::tree::{bipartition, contains_h, find_centre, prufer_decode, random_tree};
use catmouse::{GameSemantics, Outcome, PositionSet, Schedule, Tree};
use proptest::prelude::*;

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn distances(adj: &[Vec<usize>], from: usize, allowed: &[bool]) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if allowed[w] && dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Lexicographically least sorted edge list over all relabellings.
fn brute_canonical(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<_> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best.unwrap()
}

/// Scans every 10-vertex subset for a connected spider with three legs of
/// length 3.
fn brute_contains_h(t: &Tree) -> bool {
    let n = t.order();
    let adj = adjacency(n, &t.edges());
    if n < 10 {
        return false;
    }
    let mut chosen = vec![false; n];
    fn rec(adj: &[Vec<usize>], chosen: &mut Vec<bool>, start: usize, left: usize) -> bool {
        if left == 0 {
            return is_h(adj, chosen);
        }
        for v in start..adj.len() {
            chosen[v] = true;
            if rec(adj, chosen, v + 1, left - 1) {
                return true;
            }
            chosen[v] = false;
        }
        false
    }
    rec(&adj, &mut chosen, 0, 10)
}

fn is_h(adj: &[Vec<usize>], chosen: &[bool]) -> bool {
    let members: Vec<usize> = (0..adj.len()).filter(|&v| chosen[v]).collect();
    let deg = |v: usize| adj[v].iter().filter(|&&w| chosen[w]).count();
    let dist = distances(adj, members[0], chosen);
    if members.iter().any(|&v| dist[v].is_none()) {
        return false;
    }
    let hubs: Vec<usize> = members.iter().copied().filter(|&v| deg(v) == 3).collect();
    let leaves: Vec<usize> = members.iter().copied().filter(|&v| deg(v) == 1).collect();
    if hubs.len() != 1 || leaves.len() != 3 || members.iter().any(|&v| deg(v) > 3) {
        return false;
    }
    let from_hub = distances(adj, hubs[0], chosen);
    leaves.iter().all(|&l| from_hub[l] == Some(3))
}

#[test]
fn tree_counts_match_known_sequence() {
    let known = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];
    for (i, &count) in known.iter().enumerate() {
        let n = i + 1;
        let trees = enumerate_trees(n).unwrap();
        assert_eq!(trees.len(), count, "order {n}");
        let forms: BTreeSet<String> = trees.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), count, "duplicate trees at order {n}");
    }
}

#[test]
fn canonical_form_agrees_with_permutation_minimum() {
    for n in 2..=6usize {
        let mut classes: HashMap<Vec<(usize, usize)>, String> = HashMap::new();
        let total = n.pow(n as u32 - 2);
        for code_index in 0..total {
            let mut code = Vec::with_capacity(n - 2);
            let mut x = code_index;
            for _ in 0..n - 2 {
                code.push(x % n);
                x /= n;
            }
            let edges = prufer_decode(n, &code);
            let tree = Tree::from_edges(n, &edges).unwrap();
            let brute = brute_canonical(n, &edges);
            let form = canonical_form(&tree);
            let seen = classes.entry(brute).or_insert_with(|| form.clone());
            assert_eq!(*seen, form, "order {n}, code {code:?}");
        }
        let distinct: BTreeSet<&String> = classes.values().collect();
        assert_eq!(distinct.len(), classes.len(), "order {n}: two classes share a form");
        assert_eq!(classes.len(), enumerate_trees(n).unwrap().len());
    }
}

#[test]
fn h_detection_matches_subset_scan() {
    for n in 1..=11 {
        for t in enumerate_trees(n).unwrap() {
            assert_eq!(contains_h(&t), brute_contains_h(&t), "{}", canonical_form(&t));
        }
    }
    for seed in 0..40 {
        let t = random_tree(12 + (seed as usize % 3), seed);
        assert_eq!(contains_h(&t), brute_contains_h(&t), "seed {seed}");
    }
}

#[test]
fn centre_leaves_small_components() {
    for n in 1..=12 {
        for t in enumerate_trees(n).unwrap() {
            let c = find_centre(&t);
            let adj = adjacency(n, &t.edges());
            let mut allowed = vec![true; n];
            allowed[c] = false;
            let mut seen = vec![false; n];
            for &w in &adj[c] {
                let d = distances(&adj, w, &allowed);
                let size = d.iter().filter(|x| x.is_some()).count();
                assert!(2 * size <= n, "order {n}: component of size {size}");
                for v in 0..n {
                    seen[v] |= d[v].is_some();
                }
            }
            assert_eq!(seen.iter().filter(|&&s| s).count(), n - 1);
        }
    }
}

#[test]
fn solver_never_beats_the_strategies_upward() {
    let config = SolverConfig::default();
    let mut builder = StrategyBuilder::new();
    let check = |t: &Tree, builder: &mut StrategyBuilder| {
        let h = hunter_number(t, GameSemantics::PAPER, &config).unwrap().h;
        let basic = builder.basic(t);
        let improved = builder.improved_standard(t);
        assert!(verify_winning(t, &basic, GameSemantics::PAPER));
        assert!(verify_winning(t, &improved, GameSemantics::PAPER));
        assert!(h <= improved.r() && h <= basic.r(), "{}", canonical_form(t));
    };
    for n in 1..=10 {
        for t in enumerate_trees(n).unwrap() {
            check(&t, &mut builder);
        }
    }
    for seed in 0..12 {
        check(&random_tree(11 + (seed as usize % 2), seed), &mut builder);
    }
}

fn tree_strategy() -> impl Strategy<Value = Tree> {
    (2usize..40, any::<u64>()).prop_map(|(n, seed)| random_tree(n, seed))
}

fn subset(n: usize, bits: &[bool]) -> PositionSet {
    PositionSet::from_vertices(n, (0..n).filter(|&v| bits[v % bits.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn step_is_monotone_in_the_position_set(
        t in tree_strategy(),
        a in prop::collection::vec(any::<bool>(), 1..40),
        extra in prop::collection::vec(any::<bool>(), 1..40),
        shot in prop::collection::vec(any::<bool>(), 1..40),
    ) {
        let n = t.order();
        let small = subset(n, &a);
        let big = small.union(&subset(n, &extra));
        let c = subset(n, &shot);
        for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE] {
            prop_assert!(step(&small, &c, &t, sem).is_subset(&step(&big, &c, &t, sem)));
        }
    }

    #[test]
    fn more_shots_never_enlarge_the_set(
        t in tree_strategy(),
        a in prop::collection::vec(any::<bool>(), 1..40),
        shot in prop::collection::vec(any::<bool>(), 1..40),
        extra in prop::collection::vec(any::<bool>(), 1..40),
    ) {
        let n = t.order();
        let a = subset(n, &a);
        let few = subset(n, &shot);
        let many = few.union(&subset(n, &extra));
        for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE] {
            prop_assert!(step(&a, &many, &t, sem).is_subset(&step(&a, &few, &t, sem)));
        }
    }

    /// With the same shots, shoot-then-move sets are the neighbourhoods of
    /// the paper-rule sets, so both rules end on the same round.
    #[test]
    fn shoot_then_move_tracks_paper_neighbourhoods(
        t in tree_strategy(),
        shots in prop::collection::vec(prop::collection::vec(0usize..40, 0..3), 1..30),
    ) {
        let n = t.order();
        let rounds: Vec<Vec<usize>> = shots.iter().map(|s| s.iter().map(|&v| v % n).collect()).collect();
        let s = Schedule::new(2, rounds).unwrap();
        let mut paper = initial_set(&t, GameSemantics::PAPER);
        let mut stm = initial_set(&t, GameSemantics::SHOOT_THEN_MOVE);
        for shot in s.rounds() {
            let c = PositionSet::from_vertices(n, shot.iter().copied());
            paper = step(&paper, &c, &t, GameSemantics::PAPER);
            stm = step(&stm, &c, &t, GameSemantics::SHOOT_THEN_MOVE);
            prop_assert_eq!(&stm, &paper.neighborhood(&t));
        }
        let end = |o: Outcome| match o {
            Outcome::CatsWin { round } => Some(round),
            Outcome::MouseSurvives => None,
        };
        prop_assert_eq!(
            end(run_schedule(&t, &s, GameSemantics::PAPER).outcome),
            end(run_schedule(&t, &s, GameSemantics::SHOOT_THEN_MOVE).outcome)
        );
    }

    #[test]
    fn class_one_sets_alternate_classes(
        t in tree_strategy(),
        shots in prop::collection::vec(prop::collection::vec(0usize..40, 0..3), 1..30),
    ) {
        let n = t.order();
        let classes = bipartition(&t);
        let sem = GameSemantics::PAPER_CLASS_ONE;
        let mut a = initial_set(&t, sem);
        for (i, shot) in shots.iter().enumerate() {
            let expected = if i % 2 == 0 { 1 } else { 2 };
            prop_assert!(a.iter().all(|v| classes.class(v) == expected), "round {}", i);
            let c = PositionSet::from_vertices(n, shot.iter().map(|&v| v % n));
            a = step(&a, &c, &t, sem);
        }
    }
}
