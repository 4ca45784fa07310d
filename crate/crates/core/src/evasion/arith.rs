//! Binary-pattern counts and signed binary weights.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`beta_bruteforce`].
pub const BRUTEFORCE_MAX_N: u64 = 1 << 12;
/// Largest term count accepted by [`beta_bruteforce`]. Some `n <= 2^12`
/// need 7 terms (3277 is the first), so 6 would not cover the range.
pub const BRUTEFORCE_MAX_TERMS: u32 = 8;
/// Exponents used by the brute force are at most this.
pub const BRUTEFORCE_MAX_EXPONENT: u32 = 14;
pub const ARITHMETIC_LIMIT: u64 = 1 << 20;
pub const APPROXIMATE_MAX_VALUE: u64 = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryExpansion {
    pub n: u64,
    /// Most significant digit first; `[0]` for zero.
    pub digits: Vec<u8>,
}

impl BinaryExpansion {
    pub fn new(n: u64) -> Self {
        if n == 0 {
            return BinaryExpansion { n, digits: vec![0] };
        }
        let len = 64 - n.leading_zeros();
        let digits = (0..len).rev().map(|i| ((n >> i) & 1) as u8).collect();
        BinaryExpansion { n, digits }
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() || digits.len() > 64 || digits.iter().any(|&d| d > 1) {
            return Err(Error::InvalidArgument("not a binary digit string".into()));
        }
        if digits.len() > 1 && digits[0] == 0 {
            return Err(Error::InvalidArgument("leading zero".into()));
        }
        let n = digits.iter().fold(0u64, |acc, &d| (acc << 1) | u64::from(d));
        Ok(BinaryExpansion { n, digits: digits.to_vec() })
    }
}

/// `n = sum of sign * 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedRepresentation {
    pub terms: Vec<(i8, u32)>,
}

impl SignedRepresentation {
    pub fn value(&self) -> i128 {
        self.terms.iter().map(|&(s, e)| i128::from(s) << e).sum()
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }
}

/// Number of places where a one is immediately followed (towards the
/// least significant end) by a zero.
pub fn gamma(n: u64) -> u32 {
    let digits = BinaryExpansion::new(n).digits;
    digits.windows(2).filter(|w| w[0] == 1 && w[1] == 0).count() as u32
}

/// Non-adjacent form, least significant term first.
pub fn naf(n: u64) -> SignedRepresentation {
    let mut terms = Vec::new();
    let mut x = u128::from(n);
    let mut e = 0;
    while x > 0 {
        if x & 1 == 1 {
            if x & 3 == 3 {
                terms.push((-1, e));
                x += 1;
            } else {
                terms.push((1, e));
                x -= 1;
            }
        }
        x >>= 1;
        e += 1;
    }
    SignedRepresentation { terms }
}

/// Fewest powers of two, added or subtracted, summing to `n`.
pub fn beta(n: u64) -> u32 {
    naf(n).weight() as u32
}

/// Minimal weights for `0..=limit` by exhaustive search: level `w` holds
/// every value reachable as a signed sum of exactly `w` powers of two with
/// exponents up to 14.
pub fn beta_bruteforce_table(limit: u64, max_terms: u32) -> Result<Vec<u32>> {
    if limit > BRUTEFORCE_MAX_N {
        return Err(Error::InvalidArgument(format!("brute force is limited to n <= {BRUTEFORCE_MAX_N}")));
    }
    if max_terms > BRUTEFORCE_MAX_TERMS {
        return Err(Error::InvalidArgument(format!("brute force is limited to {BRUTEFORCE_MAX_TERMS} terms")));
    }
    // partial sums of at most max_terms terms stay within this radius
    let radius = i64::from(max_terms.max(1)) << BRUTEFORCE_MAX_EXPONENT;
    let width = (2 * radius + 1) as usize;
    let idx = |x: i64| (x + radius) as usize;
    let mut best = vec![u32::MAX; width];
    best[idx(0)] = 0;
    let mut level = vec![0i64];
    for w in 1..=max_terms {
        let mut next = Vec::new();
        for &x in &level {
            for e in 0..=BRUTEFORCE_MAX_EXPONENT {
                for y in [x + (1 << e), x - (1 << e)] {
                    if y.abs() <= radius && best[idx(y)] == u32::MAX {
                        best[idx(y)] = w;
                        next.push(y);
                    }
                }
            }
        }
        level = next;
    }
    (0..=limit)
        .map(|n| match best[idx(n as i64)] {
            u32::MAX => Err(Error::InvalidArgument(format!("{n} needs more than {max_terms} terms"))),
            w => Ok(w),
        })
        .collect()
}

pub fn beta_bruteforce(n: u64, max_terms: u32) -> Result<u32> {
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::InvalidArgument(format!("brute force is limited to n <= {BRUTEFORCE_MAX_N}")));
    }
    Ok(beta_bruteforce_table(n, max_terms)?[n as usize])
}

/// The number whose binary expansion is `10` repeated `floor(k/2)` times.
pub fn special_n(k: u32) -> u64 {
    let reps = (k / 2) as usize;
    if reps == 0 {
        return 0;
    }
    let digits: Vec<u8> = std::iter::repeat_n([1, 0], reps).flatten().collect();
    BinaryExpansion::from_digits(&digits).expect("at most 64 digits for k <= 65").n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetRule {
    /// `floor(k/40)`.
    Weak,
    /// `floor((1/4 - eps) k)`.
    Strong,
}

/// Parses `a/b`, an integer, or a decimal such as `0.05`.
pub fn parse_ratio(text: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    let text = text.trim();
    if text.contains('/') {
        return text.parse::<Ratio<i64>>().map_err(|_| bad());
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let negative = int.starts_with('-');
    let whole: i64 = match int.trim_start_matches('-') {
        "" if !frac.is_empty() => 0,
        digits => digits.parse().map_err(|_| bad())?,
    };
    let denom = 10i64.pow(frac.len() as u32);
    let numer = whole * denom + if frac.is_empty() { 0 } else { frac.parse::<i64>().map_err(|_| bad())? };
    Ok(Ratio::new(if negative { -numer } else { numer }, denom))
}

/// Cat budget under which the mouse is claimed to survive on `T_k`.
pub fn corollary_budget(k: u32, rule: BudgetRule, eps: Ratio<i64>) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    match rule {
        BudgetRule::Weak => Ok((k / 40) as usize),
        BudgetRule::Strong => {
            let quarter = Ratio::new(1, 4);
            if eps <= Ratio::from_integer(0) || eps >= quarter {
                return Err(Error::InvalidArgument("eps must lie strictly between 0 and 1/4".into()));
            }
            Ok(((quarter - eps) * i64::from(k)).floor().to_integer() as usize)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArithmeticReport {
    pub limit: u64,
    pub checked: u64,
    /// Values with `beta(n) < gamma(n)`.
    pub violations: Vec<u64>,
    /// Smallest `beta(n) - gamma(n)` seen.
    pub min_slack: i64,
}

impl ArithmeticReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `beta(n) >= gamma(n)` for every `0 <= n <= limit`.
pub fn check_arithmetic_lemma(limit: u64) -> Result<ArithmeticReport> {
    if limit > ARITHMETIC_LIMIT {
        return Err(Error::InvalidArgument(format!("limit is capped at {ARITHMETIC_LIMIT}")));
    }
    let (violations, min_slack) = (0..=limit)
        .into_par_iter()
        .map(|n| {
            let slack = i64::from(beta(n)) - i64::from(gamma(n));
            (if slack < 0 { vec![n] } else { Vec::new() }, slack)
        })
        .reduce(
            || (Vec::new(), i64::MAX),
            |(mut va, sa), (vb, sb)| {
                va.extend(vb);
                (va, sa.min(sb))
            },
        );
    let mut violations = violations;
    violations.sort_unstable();
    Ok(ArithmeticReport { limit, checked: limit + 1, violations, min_slack })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub limit: u64,
    pub checked: u64,
    /// `(n, beta, brute force)` for every disagreement.
    pub mismatches: Vec<(u64, u32, u32)>,
    pub max_weight: u32,
}

/// Compares [`beta`] with the exhaustive search on `0..=limit`.
pub fn check_beta_oracle(limit: u64) -> Result<OracleReport> {
    let table = beta_bruteforce_table(limit, BRUTEFORCE_MAX_TERMS)?;
    let mismatches = (0..=limit)
        .filter_map(|n| {
            let (fast, slow) = (beta(n), table[n as usize]);
            (fast != slow).then_some((n, fast, slow))
        })
        .collect();
    let max_weight = table.iter().copied().max().unwrap_or(0);
    Ok(OracleReport { limit, checked: limit + 1, mismatches, max_weight })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproximateReport {
    pub samples: usize,
    pub seed: u64,
    /// `(m, n, k)` triples with `|beta(m) - beta(n)| > k`.
    pub violations: Vec<(u64, u64, u32)>,
    /// Largest `|beta(m) - beta(n)|` seen, with the `k` it was checked against.
    pub tightest: (u32, u32),
}

impl ApproximateReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The least positive `k` with `|m - n| <= 2^k`.
pub fn approximate_k(m: u64, n: u64) -> u32 {
    let d = m.abs_diff(n);
    if d <= 2 {
        1
    } else {
        64 - (d - 1).leading_zeros()
    }
}

/// Samples pairs `m, n <= 2^18` and checks `|beta(m) - beta(n)| <= k`
/// with `k` the least positive integer such that `|m - n| <= 2^k`.
///
/// Half of the pairs have `n` uniform and a gap `|m - n|` drawn from a
/// random power-of-two scale, the rest are independent uniform pairs.
pub fn check_approximate_lemma(samples: usize, seed: u64) -> ApproximateReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut tightest = (0, 0);
    let mut best_gap = i64::MIN;
    for i in 0..samples {
        let n = rng.gen_range(1..=APPROXIMATE_MAX_VALUE);
        let m = if i % 2 == 0 {
            let scale = rng.gen_range(0..=18u32);
            let gap = rng.gen_range(0..=1u64 << scale);
            if rng.gen_bool(0.5) {
                (n + gap).min(APPROXIMATE_MAX_VALUE)
            } else {
                n.saturating_sub(gap).max(1)
            }
        } else {
            rng.gen_range(1..=APPROXIMATE_MAX_VALUE)
        };
        let k = approximate_k(m, n);
        let diff = beta(m).abs_diff(beta(n));
        if diff > k {
            violations.push((m, n, k));
        }
        let gap = i64::from(diff) - i64::from(k);
        if gap > best_gap {
            best_gap = gap;
            tightest = (diff, k);
        }
    }
    ApproximateReport { samples, seed, violations, tightest }
}
