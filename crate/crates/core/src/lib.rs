//! Cats hunting an invisible mouse on trees.
//!
//! The crate is organised around the possible-position dynamics of the game
//! ([`game`]): an exact subset-search solver for the hunter number
//! ([`solver`]), constructive cat strategies certified against those
//! dynamics ([`strategies`]), and falsification harnesses for the
//! lower-bound arithmetic on subdivided binary trees ([`evasion`]).

pub mod enumerate;
pub mod error;
pub mod evasion;
pub mod game;
pub mod solver;
pub mod strategies;
pub mod subdivided;
pub mod tree;

pub use error::{Error, Result};
pub use game::{GameSemantics, GameTrace, InitialDomain, Outcome, PositionSet, Rule, Schedule};
pub use subdivided::{make_tk, SubdividedTree};
pub use tree::{Bipartition, Forest, Tree};

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// `ceil(log2(n) / 2)` for `n >= 1`, computed exactly: the least `c` with
/// `4^c >= n`.
pub fn ceil_half_log2(n: usize) -> usize {
    assert!(n >= 1);
    let mut c = 0;
    while (1u128 << (2 * c)) < n as u128 {
        c += 1;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_bounds() {
        assert_eq!((1..=9).map(ceil_log2).collect::<Vec<_>>(), vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
        assert_eq!(ceil_log2(100), 7);
        assert_eq!(ceil_half_log2(1), 0);
        assert_eq!(ceil_half_log2(2), 1);
        assert_eq!(ceil_half_log2(4), 1);
        assert_eq!(ceil_half_log2(5), 2);
        assert_eq!(ceil_half_log2(10), 2);
        assert_eq!(ceil_half_log2(13), 2);
        assert_eq!(ceil_half_log2(16), 2);
        assert_eq!(ceil_half_log2(17), 3);
        assert_eq!(ceil_half_log2(125), 4);
        assert_eq!(ceil_half_log2(2000), 6);
    }
}
