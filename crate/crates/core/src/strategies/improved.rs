//! Guard-and-soldiers strategy for the class-one variant.
//!
//! Conventions: turns are numbered from 1 and every stage has even length,
//! so within each stage the mouse sits in the same class before every odd
//! turn. The centre `v` is chosen in that class ("class X"). A guard that
//! shoots a class-X vertex on odd turns and a class-Y vertex on even turns
//! keeps both vertices out of the possible-position set for as long as it
//! alternates. The remaining cats ("soldiers") replay standard-game
//! strategies on forests whose components have order at most `n/4`.

use super::{pad_even, repeat_for_standard, Rounds, StrategyBuilder, BASE_CASE_ORDER};
use crate::game::Schedule;
use crate::tree::{bipartition, find_centre, remove_vertex, Tree};

/// A component of `T - v` of order more than `n/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComponent {
    pub vertices: Vec<usize>,
    /// Centre `b` of the component.
    pub centre: usize,
    /// The neighbour of `v` inside the component.
    pub entry: usize,
    /// Whether `b` lies in the class of `v`.
    pub same_class: bool,
    /// Component of `B - b` containing `entry`; empty when `b == entry`.
    pub plus: Vec<usize>,
    /// The other components of `B - b`.
    pub minus: Vec<usize>,
    /// `b'`: for same-class components either the neighbour of `b` in
    /// `plus`, or (for the component cleaned last) `entry`.
    pub link: Option<usize>,
    /// `B*`: `plus` without `link`.
    pub starred: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// No component of order more than `n/4`.
    NoBig,
    /// Every big centre is in the opposite class to `v`.
    OppositeOnly,
    /// Every big centre is in the class of `v`.
    SameOnly,
    /// Both kinds occur.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPlan {
    pub centre: usize,
    /// Big components, same-class ones first, each group by smallest id.
    pub big: Vec<BigComponent>,
    /// Union of the components of order at most `n/4`.
    pub small: Vec<usize>,
    pub case: CaseKind,
}

impl DecompositionPlan {
    fn same(&self) -> Vec<&BigComponent> {
        self.big.iter().filter(|b| b.same_class).collect()
    }

    fn opposite(&self) -> Vec<&BigComponent> {
        self.big.iter().filter(|b| !b.same_class).collect()
    }
}

/// Splits `t` around its centre for the guard-and-soldiers strategy.
pub fn decompose(t: &Tree) -> DecompositionPlan {
    let n = t.order();
    let bip = bipartition(t);
    let v = find_centre(t);
    let mut big = Vec::new();
    let mut small = Vec::new();
    for comp in remove_vertex(t, v).components {
        if 4 * comp.tree.order() <= n {
            small.extend_from_slice(&comp.original);
            continue;
        }
        let b = comp.original[find_centre(&comp.tree)];
        let entry = *comp
            .original
            .iter()
            .find(|&&u| t.neighbors(v).contains(&u))
            .expect("components of T - v touch v");
        let (mut plus, mut minus) = (Vec::new(), Vec::new());
        let rest: Vec<usize> = comp.original.iter().copied().filter(|&u| u != b).collect();
        for part in t.induced(&rest).components {
            if part.original.contains(&entry) {
                plus = part.original;
            } else {
                minus.extend(part.original);
            }
        }
        minus.sort_unstable();
        big.push(BigComponent {
            same_class: bip.class(b) == bip.class(v),
            vertices: comp.original,
            centre: b,
            entry,
            plus,
            minus,
            link: None,
            starred: Vec::new(),
        });
    }
    small.sort_unstable();
    big.sort_by_key(|c| !c.same_class);

    let same_count = big.iter().filter(|c| c.same_class).count();
    for (seen_same, comp) in big.iter_mut().filter(|c| c.same_class).enumerate() {
        let last = same_count >= 2 && seen_same == same_count - 1;
        let link = if last {
            comp.entry
        } else {
            *comp
                .plus
                .iter()
                .find(|&&u| t.neighbors(comp.centre).contains(&u))
                .expect("a same-class centre is not adjacent to v, so plus is nonempty")
        };
        comp.link = Some(link);
        comp.starred = comp.plus.iter().copied().filter(|&u| u != link).collect();
    }
    let case = match (same_count, big.len() - same_count) {
        (0, 0) => CaseKind::NoBig,
        (0, _) => CaseKind::OppositeOnly,
        (_, 0) => CaseKind::SameOnly,
        _ => CaseKind::Mixed,
    };
    DecompositionPlan { centre: v, big, small, case }
}

/// Metadata for one stage of a variant schedule. Turn parity is global:
/// `odd_guard` is shot on odd-numbered turns, `even_guard` on even ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub label: &'static str,
    /// 0-based index of the stage's first round.
    pub start: usize,
    pub len: usize,
    pub odd_guard: Option<usize>,
    pub even_guard: Option<usize>,
}

/// A schedule for the class-one variant (paper rule).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantSchedule {
    pub schedule: Schedule,
    /// Declared length; even for generated schedules.
    pub parity_certificate: usize,
    /// Idle rounds placed before the first stage to put the centre's class
    /// in front of the mouse on the first staged turn (0 or 1).
    pub lead: usize,
    pub stages: Vec<StageRecord>,
    pub plan: Option<DecompositionPlan>,
}

impl VariantSchedule {
    /// Wraps an arbitrary class-one schedule without stage metadata.
    pub fn from_schedule(schedule: Schedule) -> Self {
        VariantSchedule { parity_certificate: schedule.len(), schedule, lead: 0, stages: Vec::new(), plan: None }
    }

    pub fn is_even(&self) -> bool {
        self.schedule.len().is_multiple_of(2)
    }
}

enum Stage<'a> {
    /// Guard alternates (odd, even); soldiers clean the forests in order.
    Guarded { label: &'static str, odd: usize, even: usize, forests: Vec<&'a [usize]> },
    Fixed { label: &'static str, rounds: Rounds },
}

fn stage_list(plan: &DecompositionPlan) -> Vec<Stage<'_>> {
    use Stage::*;
    let v = plan.centre;
    let same = plan.same();
    let link = |c: &BigComponent| c.link.expect("same-class components carry a link");
    let mut stages = Vec::new();
    if let Some(a) = same.first() {
        stages.push(Guarded { label: "seal-first-minus", odd: a.centre, even: a.centre, forests: vec![&a.minus] });
        stages.push(Fixed { label: "first-handover", rounds: vec![vec![a.centre], vec![link(a)]] });
        stages.push(Guarded { label: "first-starred", odd: v, even: link(a), forests: vec![&a.starred] });
    }
    for c in plan.opposite() {
        stages.push(Guarded { label: "opposite", odd: v, even: c.centre, forests: vec![&c.plus, &c.minus] });
    }
    match same.len() {
        0 | 1 => stages.push(Guarded { label: "small", odd: v, even: v, forests: vec![&plan.small] }),
        2 => {
            let b = same[1];
            stages.push(Guarded { label: "small", odd: v, even: link(b), forests: vec![&plan.small] });
            stages.push(Guarded { label: "last", odd: b.centre, even: link(b), forests: vec![&b.starred, &b.minus] });
        }
        3 => {
            let (b, c) = (same[1], same[2]);
            stages.push(Guarded { label: "middle-starred", odd: v, even: link(b), forests: vec![&b.starred] });
            stages.push(Guarded { label: "small", odd: v, even: link(b), forests: vec![&plan.small] });
            stages.push(Fixed { label: "middle-handover", rounds: vec![vec![v], vec![link(b), link(c)]] });
            stages.push(Guarded { label: "middle-minus", odd: b.centre, even: link(c), forests: vec![&b.minus] });
            stages.push(Guarded { label: "last", odd: c.centre, even: link(c), forests: vec![&c.starred, &c.minus] });
        }
        k => unreachable!("{k} components of order > n/4"),
    }
    stages
}

impl StrategyBuilder {
    /// Standard-game schedule on the forest induced by `vertices` (host
    /// ids): components one after another, each padded to even length.
    fn standard_forest(&mut self, t: &Tree, vertices: &[usize]) -> Rounds {
        let mut rounds = Vec::new();
        for comp in t.induced(vertices).components {
            for shot in pad_even(self.standard_rounds(&comp.tree)) {
                rounds.push(shot.iter().map(|&i| comp.original[i]).collect());
            }
        }
        rounds
    }

    /// Standard-game schedule from the improved construction.
    fn standard_rounds(&mut self, t: &Tree) -> Rounds {
        if t.order() <= BASE_CASE_ORDER {
            return self.base_witness(t);
        }
        let plan = decompose(t);
        let (rounds, _) = self.staged_rounds(t, &plan);
        repeat_for_standard(&Schedule::tight(rounds)).rounds().to_vec()
    }

    /// Rounds winning whenever the mouse is in the class of the plan's
    /// centre before the first turn.
    fn staged_rounds(&mut self, t: &Tree, plan: &DecompositionPlan) -> (Rounds, Vec<StageRecord>) {
        let mut rounds: Rounds = Vec::new();
        let mut records = Vec::new();
        for stage in stage_list(plan) {
            let start = rounds.len();
            match stage {
                Stage::Fixed { label, rounds: fixed } => {
                    records.push(StageRecord {
                        label,
                        start,
                        len: fixed.len(),
                        odd_guard: fixed[0].first().copied(),
                        even_guard: fixed[1].first().copied(),
                    });
                    rounds.extend(fixed);
                }
                Stage::Guarded { label, odd, even, forests } => {
                    let mut soldiers = Vec::new();
                    for f in forests {
                        soldiers.extend(self.standard_forest(t, f));
                    }
                    if soldiers.is_empty() {
                        // the guard still has to hold for one odd and one even turn
                        soldiers = vec![Vec::new(), Vec::new()];
                    }
                    debug_assert!(soldiers.len() % 2 == 0);
                    for (i, mut shot) in soldiers.into_iter().enumerate() {
                        shot.push(if i % 2 == 0 { odd } else { even });
                        rounds.push(shot);
                    }
                    records.push(StageRecord {
                        label,
                        start,
                        len: rounds.len() - start,
                        odd_guard: Some(odd),
                        even_guard: Some(even),
                    });
                }
            }
        }
        (rounds, records)
    }
}

/// The class the mouse occupies before odd turns of a class-one game under
/// the paper rule: class 1 moves to class 2 before the first shot.
const ODD_TURN_CLASS: u8 = 2;

pub(super) fn improved_variant(builder: &mut StrategyBuilder, t: &Tree) -> VariantSchedule {
    let n = t.order();
    if n <= BASE_CASE_ORDER {
        let rounds = pad_even(builder.base_witness(t));
        let len = rounds.len();
        let schedule = Schedule::tight(rounds);
        return VariantSchedule {
            schedule,
            parity_certificate: len,
            lead: 0,
            stages: vec![StageRecord { label: "base", start: 0, len, odd_guard: None, even_guard: None }],
            plan: None,
        };
    }
    let bip = bipartition(t);
    let plan = decompose(t);
    let (core, mut stages) = builder.staged_rounds(t, &plan);
    let lead = usize::from(bip.class(plan.centre) != ODD_TURN_CLASS);
    let mut rounds = Vec::with_capacity(core.len() + 2 * lead);
    if lead == 1 {
        rounds.push(Vec::new());
        for s in &mut stages {
            s.start += 1;
        }
    }
    rounds.extend(core);
    let rounds = pad_even(rounds);
    VariantSchedule {
        parity_certificate: rounds.len(),
        schedule: Schedule::tight(rounds),
        lead,
        stages,
        plan: Some(plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{verify_winning, GameSemantics};
    use crate::strategies::{improved_strategy, variant_to_standard};
    use crate::tree::random_tree;
    use crate::{ceil_half_log2, make_tk};

    fn check_plan(t: &Tree, plan: &DecompositionPlan) {
        let n = t.order();
        assert!(plan.big.len() <= 3);
        for b in &plan.big {
            assert!(4 * b.vertices.len() > n);
            let mut parts: Vec<usize> = b.plus.iter().chain(&b.minus).copied().collect();
            parts.push(b.centre);
            parts.sort_unstable();
            assert_eq!(parts, b.vertices);
        }
        for comp in t.induced(&plan.small).components {
            assert!(4 * comp.tree.order() <= n);
        }
    }

    #[test]
    fn decompose_examples() {
        let p12 = Tree::path(12).unwrap();
        let plan = decompose(&p12);
        assert_eq!(plan.centre, 5);
        assert_eq!(plan.big.len(), 2);
        check_plan(&p12, &plan);

        let star = Tree::star(9);
        let plan = decompose(&star);
        assert_eq!((plan.centre, plan.big.len(), plan.small.len()), (0, 0, 9));
        assert_eq!(plan.case, CaseKind::NoBig);

        let t3 = make_tk(3).unwrap().tree;
        let plan = decompose(&t3);
        check_plan(&t3, &plan);
        assert!(plan.big.iter().all(|b| 4 * b.vertices.len() > 29));
    }

    #[test]
    fn single_vertex_and_h() {
        let k1 = Tree::single_vertex();
        let vs = improved_strategy(&k1);
        assert_eq!(vs.schedule.r(), 1);
        assert!(verify_winning(&k1, &vs.schedule, GameSemantics::PAPER_CLASS_ONE));

        let h = Tree::h_tree();
        let vs = improved_strategy(&h);
        assert!(vs.schedule.r() <= 2);
        assert!(verify_winning(&h, &vs.schedule, GameSemantics::PAPER_CLASS_ONE));
        assert!(verify_winning(&h, &variant_to_standard(&vs, &h), GameSemantics::PAPER));
    }

    #[test]
    fn p4_pipeline() {
        let p4 = Tree::path(4).unwrap();
        let vs = improved_strategy(&p4);
        assert!(vs.is_even());
        let std = variant_to_standard(&vs, &p4);
        assert_eq!(std.len(), 2 * vs.schedule.len() + 1);
        assert!(verify_winning(&p4, &std, GameSemantics::PAPER));
    }

    #[test]
    fn t5_with_four_cats() {
        let t5 = make_tk(5).unwrap().tree;
        assert_eq!(t5.order(), 125);
        let vs = improved_strategy(&t5);
        assert!(vs.schedule.r() <= ceil_half_log2(125));
        assert!(verify_winning(&t5, &vs.schedule, GameSemantics::PAPER_CLASS_ONE));
        assert!(verify_winning(&t5, &variant_to_standard(&vs, &t5), GameSemantics::PAPER));
    }

    #[test]
    fn stages_start_on_even_offsets_and_guards_respect_parity() {
        for seed in 0..40 {
            let t = random_tree(30 + seed as usize * 7, seed);
            let bip = bipartition(&t);
            let vs = improved_strategy(&t);
            assert!(vs.is_even());
            let plan = vs.plan.as_ref().unwrap();
            check_plan(&t, plan);
            let x = bip.class(plan.centre);
            for s in &vs.stages {
                assert_eq!((s.start - vs.lead) % 2, 0, "stage {} starts at {}", s.label, s.start);
                assert_eq!(s.len % 2, 0);
                for turn in s.start..s.start + s.len {
                    let odd = (turn - vs.lead).is_multiple_of(2);
                    let guard = if odd { s.odd_guard } else { s.even_guard };
                    if let Some(g) = guard {
                        assert!(vs.schedule.rounds()[turn].contains(&g));
                        if odd {
                            assert_eq!(bip.class(g), x, "stage {} turn {turn}", s.label);
                        } else if s.odd_guard != s.even_guard {
                            assert_ne!(bip.class(g), x, "stage {} turn {turn}", s.label);
                        }
                    }
                }
                if s.label == "opposite" {
                    assert_eq!(s.odd_guard, Some(plan.centre));
                }
            }
            assert!(verify_winning(&t, &vs.schedule, GameSemantics::PAPER_CLASS_ONE), "seed {seed}");
        }
    }
}
