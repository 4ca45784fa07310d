use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use catmouse::enumerate::{canonical_form, enumerate_trees, MAX_ENUMERATION_ORDER};
use catmouse::evasion::{
    check_approximate_lemma, check_arithmetic_lemma, check_beta_oracle, check_eps_boundary, check_weak_boundary,
    parse_ratio, survival_suite, CheckMode, SuiteConfig, EXHAUSTIVE_MAX_K,
};
use catmouse::game::{run_schedule, verify_winning, ScheduleDoc};
use catmouse::solver::{hunter_number, SolverConfig};
use catmouse::strategies::{variant_to_standard, StrategyBuilder};
use catmouse::tree::{contains_h, random_tree};
use catmouse::{ceil_half_log2, ceil_log2, make_tk, GameSemantics, Outcome, Tree};
use serde::Serialize;

use crate::{Algo, ArithCheck, Family, Format, SemanticsArg};

pub struct Output {
    pub payload: String,
    /// False when a checked property failed.
    pub ok: bool,
}

impl Output {
    fn json(value: &impl Serialize, ok: bool) -> Result<Output> {
        Ok(Output { payload: serde_json::to_string(value)?, ok })
    }
}

fn read_tree(path: &Path) -> Result<Tree> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Tree::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn solve(tree: &Path, max_cats: usize, semantics: SemanticsArg) -> Result<Output> {
    let t = read_tree(tree)?;
    let sem = match semantics {
        SemanticsArg::Paper => GameSemantics::PAPER,
        SemanticsArg::Stm => GameSemantics::SHOOT_THEN_MOVE,
    };
    let config = SolverConfig { max_cats, ..SolverConfig::default() };
    let result = hunter_number(&t, sem, &config)?;
    Ok(Output { payload: result.to_json(t.order()), ok: true })
}

#[derive(Serialize)]
pub struct SurveyRow {
    pub id: String,
    pub n: usize,
    pub contains_h: bool,
    pub h: usize,
    pub basic_cats: usize,
    pub improved_cats: usize,
    pub log2_bound: usize,
    pub half_log2_bound: usize,
    pub certified: bool,
}

#[derive(Serialize)]
struct SurveyDoc<'a> {
    max_order: usize,
    trees: usize,
    violations: Vec<String>,
    rows: &'a [SurveyRow],
}

fn row_violations(row: &SurveyRow) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |cond: bool, what: &str| {
        if !cond {
            out.push(format!("{}: {what}", row.id));
        }
    };
    check(row.certified, "a generated schedule does not win");
    check(row.h <= row.improved_cats, "solver needs more cats than the improved strategy");
    check(row.improved_cats <= row.half_log2_bound, "improved strategy exceeds ceil(log2(n)/2)");
    check(row.basic_cats <= row.log2_bound, "basic strategy exceeds ceil(log2 n)");
    check((row.h == 1) == !row.contains_h, "one-cat win does not match H-freeness");
    out
}

pub fn survey(max_order: usize, emit: Option<&Path>) -> Result<Output> {
    if max_order == 0 || max_order > MAX_ENUMERATION_ORDER {
        bail!("--max-order must lie in 1..={MAX_ENUMERATION_ORDER}");
    }
    let mut builder = StrategyBuilder::new();
    let config = SolverConfig::default();
    let mut rows = Vec::new();
    for n in 1..=max_order {
        for t in enumerate_trees(n)? {
            let h = hunter_number(&t, GameSemantics::PAPER, &config)?.h;
            let basic = builder.basic(&t);
            let improved = builder.improved_standard(&t);
            let certified =
                verify_winning(&t, &basic, GameSemantics::PAPER) && verify_winning(&t, &improved, GameSemantics::PAPER);
            rows.push(SurveyRow {
                id: canonical_form(&t),
                n,
                contains_h: contains_h(&t),
                h,
                basic_cats: basic.r(),
                improved_cats: improved.r(),
                log2_bound: ceil_log2(n).max(1),
                half_log2_bound: ceil_half_log2(n).max(1),
                certified,
            });
        }
    }
    let violations: Vec<String> = rows.iter().flat_map(row_violations).collect();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    if let Some(path) = emit {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    let ok = violations.is_empty();
    Output::json(&SurveyDoc { max_order, trees: rows.len(), violations, rows: &rows }, ok)
}

#[derive(Serialize)]
struct StrategySummary {
    algo: &'static str,
    n: usize,
    r: usize,
    rounds: usize,
    certified: Option<bool>,
}

pub fn strategy(algo: Algo, tree: &Path, standard: bool, certify: bool, emit: Option<&Path>) -> Result<Output> {
    let t = read_tree(tree)?;
    let mut builder = StrategyBuilder::new();
    let (schedule, sem) = match algo {
        Algo::Basic => (builder.basic(&t), GameSemantics::PAPER),
        Algo::Improved => {
            let vs = builder.improved(&t);
            if standard {
                (variant_to_standard(&vs, &t), GameSemantics::PAPER)
            } else {
                (vs.schedule, GameSemantics::PAPER_CLASS_ONE)
            }
        }
    };
    let certified = certify.then(|| verify_winning(&t, &schedule, sem));
    if certified == Some(false) {
        eprintln!("the generated schedule does not win");
    }
    let ok = certified != Some(false);
    let doc = schedule.to_doc(sem).to_json();
    match emit {
        Some(path) => {
            write_file(path, &doc)?;
            let algo = match algo {
                Algo::Basic => "basic",
                Algo::Improved => "improved",
            };
            let summary = StrategySummary { algo, n: t.order(), r: schedule.r(), rounds: schedule.len(), certified };
            Output::json(&summary, ok)
        }
        None => Ok(Output { payload: doc, ok }),
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    outcome: &'static str,
    round: Option<usize>,
    r: usize,
    rounds: usize,
    semantics: catmouse::Rule,
    initial_domain: catmouse::InitialDomain,
}

pub fn verify(tree: &Path, schedule: &Path, emit: Option<&Path>) -> Result<Output> {
    let t = read_tree(tree)?;
    let text = fs::read_to_string(schedule).with_context(|| format!("reading {}", schedule.display()))?;
    let (s, sem) = ScheduleDoc::from_json(&text)?.into_parts()?;
    s.check_vertices(&t)?;
    let trace = run_schedule(&t, &s, sem);
    if let Some(path) = emit {
        write_file(path, &trace.render())?;
    }
    let (outcome, round) = match trace.outcome {
        Outcome::CatsWin { round } => ("CatsWin", Some(round)),
        Outcome::MouseSurvives => ("MouseSurvives", None),
    };
    let doc = VerifyDoc {
        outcome,
        round,
        r: s.r(),
        rounds: s.len(),
        semantics: sem.rule,
        initial_domain: sem.initial_domain,
    };
    Output::json(&doc, round.is_some())
}

pub fn gen(
    family: Family,
    n: Option<usize>,
    k: Option<u32>,
    legs: &[usize],
    seed: u64,
    format: Format,
    emit: Option<&Path>,
) -> Result<Output> {
    let need_n = || n.context("--n is required for this family");
    let mut subdivided = None;
    let t = match family {
        Family::Path => Tree::path(need_n()?)?,
        Family::Star => {
            let n = need_n()?;
            if n == 0 {
                bail!("--n must be positive");
            }
            Tree::star(n - 1)
        }
        Family::Spider => {
            if legs.is_empty() {
                bail!("--legs is required for spiders");
            }
            Tree::spider(legs)
        }
        Family::Tk => {
            let st = make_tk(k.context("--k is required for tk")?)?;
            let t = st.tree.clone();
            subdivided = Some(st);
            t
        }
        Family::Random => {
            let n = need_n()?;
            if n == 0 {
                bail!("--n must be positive");
            }
            random_tree(n, seed)
        }
    };
    let text = match format {
        Format::Text => t.to_text(),
        Format::Dot => t.to_dot(),
        Format::Json => match &subdivided {
            Some(st) => serde_json::to_string(st)?,
            None => serde_json::to_string(&t)?,
        },
    };
    match emit {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Output { payload: String::new(), ok: true })
        }
        None => Ok(Output { payload: text.trim_end().to_string(), ok: true }),
    }
}

pub fn lowerbound(k: u32, eps: &str, schedules: usize, rounds: usize, seed: u64, audit: bool) -> Result<Output> {
    let config = SuiteConfig { k, eps: parse_ratio(eps)?, schedules, rounds, seed, audit };
    let summary = survival_suite(&config)?;
    Output::json(&summary, summary.passed())
}

#[derive(Serialize)]
struct BoundaryDoc {
    weak: catmouse::evasion::BoundaryReport,
    /// The refined bound is only claimed for large k; its violations are
    /// reported but do not fail the check. The intermediate bound does.
    eps: catmouse::evasion::BoundaryReport,
}

pub fn arith(check: ArithCheck, limit: u64, k: u32, eps: &str, seed: u64) -> Result<Output> {
    match check {
        ArithCheck::Arithmetic => {
            let r = check_arithmetic_lemma(limit)?;
            Output::json(&r, r.passed())
        }
        ArithCheck::Approximate => {
            let r = check_approximate_lemma(limit as usize, seed);
            Output::json(&r, r.passed())
        }
        ArithCheck::Oracle => {
            let r = check_beta_oracle(limit)?;
            Output::json(&r, r.mismatches.is_empty())
        }
        ArithCheck::Boundary => {
            let mode = if k <= EXHAUSTIVE_MAX_K {
                CheckMode::Exhaustive
            } else {
                CheckMode::Sample { count: limit as usize, seed }
            };
            let weak = check_weak_boundary(k, mode)?;
            let eps = check_eps_boundary(k, parse_ratio(eps)?, mode)?;
            let ok = weak.passed() && eps.intermediate_violations == 0;
            Output::json(&BoundaryDoc { weak, eps }, ok)
        }
    }
}
