//! The invisible-mouse game as deterministic dynamics on the set of
//! possible mouse positions.
//!
//! A cat strategy gets no feedback, so it is just a schedule of shot sets.
//! Under [`Rule::PaperRecurrence`] the mouse moves and then the cats
//! shoot: `A' = N(A) \ C`. Under [`Rule::ShootThenMove`] the shot lands
//! first: `A' = N(A \ C)`. The cats win once the set is empty.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{bipartition, Tree};

/// A subset of the vertices of a host tree, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PositionSet {
    n: usize,
    words: Vec<u64>,
}

impl PositionSet {
    pub fn empty(n: usize) -> Self {
        PositionSet { n, words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let bits = (n - 64 * i).min(64);
            *w = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} outside 0..{}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(64 * i + b)
            })
        })
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "position sets over different trees");
        PositionSet { n: self.n, words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect() }
    }

    /// Vertices adjacent to at least one member.
    pub fn neighborhood(&self, t: &Tree) -> Self {
        let mut out = Self::empty(self.n);
        for v in self.iter() {
            for &w in t.neighbors(v) {
                out.words[w / 64] |= 1 << (w % 64);
            }
        }
        out
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "paper")]
    PaperRecurrence,
    #[serde(rename = "shoot_then_move")]
    ShootThenMove,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialDomain {
    #[serde(rename = "all")]
    AllVertices,
    /// The mouse starts in class 1 of the bipartition (vertex 0's class).
    #[serde(rename = "class1")]
    ClassOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GameSemantics {
    pub rule: Rule,
    pub initial_domain: InitialDomain,
}

impl GameSemantics {
    pub const PAPER: GameSemantics = GameSemantics { rule: Rule::PaperRecurrence, initial_domain: InitialDomain::AllVertices };
    pub const SHOOT_THEN_MOVE: GameSemantics =
        GameSemantics { rule: Rule::ShootThenMove, initial_domain: InitialDomain::AllVertices };
    pub const PAPER_CLASS_ONE: GameSemantics =
        GameSemantics { rule: Rule::PaperRecurrence, initial_domain: InitialDomain::ClassOne };

    pub fn with_domain(self, initial_domain: InitialDomain) -> Self {
        GameSemantics { initial_domain, ..self }
    }
}

impl Default for GameSemantics {
    fn default() -> Self {
        GameSemantics::PAPER
    }
}

/// The set `A_0` the game starts from.
pub fn initial_set(t: &Tree, sem: GameSemantics) -> PositionSet {
    match sem.initial_domain {
        InitialDomain::AllVertices => PositionSet::full(t.order()),
        InitialDomain::ClassOne => PositionSet::from_vertices(t.order(), bipartition(t).members(1)),
    }
}

/// One round of the dynamics.
pub fn step(a: &PositionSet, shot: &PositionSet, t: &Tree, sem: GameSemantics) -> PositionSet {
    match sem.rule {
        Rule::PaperRecurrence => a.neighborhood(t).difference(shot),
        Rule::ShootThenMove => a.difference(shot).neighborhood(t),
    }
}

/// A cat strategy: `rounds[i]` is the set of vertices shot in round `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    r: usize,
    rounds: Vec<Vec<usize>>,
}

impl Schedule {
    /// Shot sets are sorted and deduplicated; each may hold at most `r`
    /// vertices.
    pub fn new(r: usize, rounds: Vec<Vec<usize>>) -> Result<Schedule> {
        if r == 0 {
            return Err(Error::InvalidSchedule("at least one cat is required".into()));
        }
        let mut clean = Vec::with_capacity(rounds.len());
        for (i, mut shot) in rounds.into_iter().enumerate() {
            shot.sort_unstable();
            shot.dedup();
            if shot.len() > r {
                return Err(Error::InvalidSchedule(format!(
                    "round {} shoots {} vertices with only {r} cats",
                    i + 1,
                    shot.len()
                )));
            }
            clean.push(shot);
        }
        Ok(Schedule { r, rounds: clean })
    }

    /// A schedule whose cat count is the largest shot set (at least one).
    pub fn tight(rounds: Vec<Vec<usize>>) -> Schedule {
        let r = rounds.iter().map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s.len()
        });
        let r = r.max().unwrap_or(0).max(1);
        Schedule::new(r, rounds).expect("cat count covers every round")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rounds(&self) -> &[Vec<usize>] {
        &self.rounds
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Largest number of vertices actually shot in one round.
    pub fn cats_used(&self) -> usize {
        self.rounds.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_vertices(&self, t: &Tree) -> Result<()> {
        for (i, shot) in self.rounds.iter().enumerate() {
            if let Some(&v) = shot.iter().find(|&&v| v >= t.order()) {
                return Err(Error::InvalidSchedule(format!(
                    "round {} shoots vertex {v} outside 0..{}",
                    i + 1,
                    t.order()
                )));
            }
        }
        Ok(())
    }

    pub fn to_doc(&self, sem: GameSemantics) -> ScheduleDoc {
        ScheduleDoc { r: self.r, semantics: sem.rule, initial_domain: sem.initial_domain, rounds: self.rounds.clone() }
    }
}

/// On-disk form of a schedule together with the semantics it targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub r: usize,
    pub semantics: Rule,
    pub initial_domain: InitialDomain,
    pub rounds: Vec<Vec<usize>>,
}

impl ScheduleDoc {
    pub fn into_parts(self) -> Result<(Schedule, GameSemantics)> {
        let sem = GameSemantics { rule: self.semantics, initial_domain: self.initial_domain };
        Ok((Schedule::new(self.r, self.rounds)?, sem))
    }

    pub fn from_json(text: &str) -> Result<ScheduleDoc> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule documents serialise")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    CatsWin { round: usize },
    MouseSurvives,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub round: usize,
    pub shot: Vec<usize>,
    pub set: PositionSet,
}

/// Every intermediate possible-position set of a run, `A_0` first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameTrace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

impl GameTrace {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let _ = writeln!(
                out,
                "round {}: shot={} A={} (|A|={})",
                s.round,
                fmt_set(&s.shot),
                fmt_set(&s.set.to_vec()),
                s.set.len()
            );
        }
        let _ = match self.outcome {
            Outcome::CatsWin { round } => writeln!(out, "outcome: cats win at round {round}"),
            Outcome::MouseSurvives => writeln!(out, "outcome: mouse survives"),
        };
        out
    }
}

fn fmt_set(v: &[usize]) -> String {
    let inner: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn run_schedule(t: &Tree, s: &Schedule, sem: GameSemantics) -> GameTrace {
    let n = t.order();
    let mut a = initial_set(t, sem);
    let mut steps = vec![TraceStep { round: 0, shot: Vec::new(), set: a.clone() }];
    for (i, shot) in s.rounds().iter().enumerate() {
        a = step(&a, &PositionSet::from_vertices(n, shot.iter().copied()), t, sem);
        steps.push(TraceStep { round: i + 1, shot: shot.clone(), set: a.clone() });
        if a.is_empty() {
            return GameTrace { steps, outcome: Outcome::CatsWin { round: i + 1 } };
        }
    }
    GameTrace { steps, outcome: Outcome::MouseSurvives }
}

/// Like [`run_schedule`] but keeps only the final set; the round at
/// which the set emptied, if it did.
pub fn first_empty_round(t: &Tree, s: &Schedule, sem: GameSemantics) -> Option<usize> {
    let n = t.order();
    let mut a = initial_set(t, sem);
    let mut shot = PositionSet::empty(n);
    for (i, round) in s.rounds().iter().enumerate() {
        for &v in round {
            shot.insert(v);
        }
        a = step(&a, &shot, t, sem);
        for &v in round {
            shot.remove(v);
        }
        if a.is_empty() {
            return Some(i + 1);
        }
    }
    None
}

pub fn verify_winning(t: &Tree, s: &Schedule, sem: GameSemantics) -> bool {
    s.check_vertices(t).is_ok() && first_empty_round(t, s, sem).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> PositionSet {
        PositionSet::from_vertices(n, v.iter().copied())
    }

    #[test]
    fn step_examples() {
        let p2 = Tree::path(2).unwrap();
        let a = set(2, &[0, 1]);
        assert_eq!(step(&a, &set(2, &[0]), &p2, GameSemantics::PAPER), set(2, &[1]));
        let none = PositionSet::empty(2);
        assert!(step(&none, &set(2, &[1]), &p2, GameSemantics::PAPER).is_empty());
        let k1 = Tree::single_vertex();
        for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE] {
            assert!(step(&set(1, &[0]), &PositionSet::empty(1), &k1, sem).is_empty());
        }
    }

    #[test]
    fn run_schedule_examples() {
        let p2 = Tree::path(2).unwrap();
        let s = Schedule::new(1, vec![vec![0], vec![0]]).unwrap();
        let trace = run_schedule(&p2, &s, GameSemantics::PAPER);
        assert_eq!(trace.outcome, Outcome::CatsWin { round: 2 });
        assert_eq!(trace.steps[1].set, set(2, &[1]));
        assert!(trace.steps[2].set.is_empty());

        let empty = Schedule::new(1, vec![]).unwrap();
        assert_eq!(run_schedule(&p2, &empty, GameSemantics::PAPER).outcome, Outcome::MouseSurvives);

        let p4 = Tree::path(4).unwrap();
        let idle = Schedule::new(1, vec![vec![]; 5]).unwrap();
        let trace = run_schedule(&p4, &idle, GameSemantics::PAPER);
        assert_eq!(trace.outcome, Outcome::MouseSurvives);
        assert_eq!(trace.steps.len(), 6);
        assert!(trace.steps.iter().all(|s| !s.set.is_empty()));
    }

    #[test]
    fn verify_examples() {
        let p2 = Tree::path(2).unwrap();
        assert!(verify_winning(&p2, &Schedule::new(1, vec![vec![0], vec![0]]).unwrap(), GameSemantics::PAPER));
        assert!(!verify_winning(&p2, &Schedule::new(1, vec![vec![0]]).unwrap(), GameSemantics::PAPER));
        let k1 = Tree::single_vertex();
        for sem in [GameSemantics::PAPER, GameSemantics::SHOOT_THEN_MOVE] {
            assert!(verify_winning(&k1, &Schedule::new(1, vec![vec![0]]).unwrap(), sem));
        }
        // out-of-range shots never certify
        assert!(!verify_winning(&p2, &Schedule::new(1, vec![vec![5], vec![0], vec![0]]).unwrap(), GameSemantics::PAPER));
    }

    #[test]
    fn schedule_rejects_oversized_rounds() {
        assert!(Schedule::new(1, vec![vec![0, 1]]).is_err());
        assert!(Schedule::new(0, vec![]).is_err());
        assert_eq!(Schedule::new(2, vec![vec![3, 1, 3]]).unwrap().rounds(), &[vec![1, 3]]);
        assert_eq!(Schedule::tight(vec![vec![], vec![4, 2]]).r(), 2);
    }

    #[test]
    fn schedule_json_layout() {
        let s = Schedule::new(2, vec![vec![0], vec![1, 2]]).unwrap();
        let json = s.to_doc(GameSemantics::PAPER_CLASS_ONE).to_json();
        assert_eq!(json, r#"{"r":2,"semantics":"paper","initial_domain":"class1","rounds":[[0],[1,2]]}"#);
        let (back, sem) = ScheduleDoc::from_json(&json).unwrap().into_parts().unwrap();
        assert_eq!((back, sem), (s, GameSemantics::PAPER_CLASS_ONE));
        let stm = Schedule::new(1, vec![]).unwrap().to_doc(GameSemantics::SHOOT_THEN_MOVE).to_json();
        assert!(stm.contains(r#""semantics":"shoot_then_move","initial_domain":"all""#));
    }

    #[test]
    fn trace_rendering() {
        let p2 = Tree::path(2).unwrap();
        let s = Schedule::new(1, vec![vec![0], vec![0]]).unwrap();
        let text = run_schedule(&p2, &s, GameSemantics::PAPER).render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "round 0: shot={} A={0,1} (|A|=2)");
        assert_eq!(lines[1], "round 1: shot={0} A={1} (|A|=1)");
        assert_eq!(lines[2], "round 2: shot={0} A={} (|A|=0)");
        assert_eq!(lines[3], "outcome: cats win at round 2");
    }

    #[test]
    fn bitset_basics() {
        let full = PositionSet::full(130);
        assert_eq!(full.len(), 130);
        assert!(full.contains(129) && !full.contains(130));
        let s = set(130, &[0, 64, 129]);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.is_subset(&full));
        assert_eq!(full.difference(&s).len(), 127);
        assert_eq!(s.intersection(&set(130, &[64, 5])).to_vec(), vec![64]);
    }
}
