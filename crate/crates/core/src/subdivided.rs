//! The complete binary tree `B_k` and its 1-subdivision `T_k`.
//!
//! `B_k` is stored in heap order: root `0`, children of `i` at `2i+1` and
//! `2i+2`. In `T_k` the important vertex for heap index `i` has id `i`, and
//! the vertex subdividing the edge from heap index `c` to its parent has id
//! `|B_k| + c - 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::Tree;

/// Number of vertices of `B_k`.
pub fn binary_order(k: u32) -> usize {
    (1usize << (k + 1)) - 1
}

pub fn heap_parent(i: usize) -> Option<usize> {
    if i == 0 {
        None
    } else {
        Some((i - 1) / 2)
    }
}

/// Children of heap index `i` in `B_k` (empty for leaves).
pub fn heap_children(i: usize, k: u32) -> impl Iterator<Item = usize> {
    let m = binary_order(k);
    [2 * i + 1, 2 * i + 2].into_iter().filter(move |&c| c < m)
}

/// Neighbours of heap index `i` in `B_k`.
pub fn heap_neighbors(i: usize, k: u32) -> impl Iterator<Item = usize> {
    heap_parent(i).into_iter().chain(heap_children(i, k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdividedTree {
    pub tree: Tree,
    pub k: u32,
    pub important: Vec<bool>,
    /// `b_map[v]` is the `B_k` heap index of important vertex `v`.
    pub b_map: Vec<Option<usize>>,
    #[serde(skip)]
    t_of_b: Vec<usize>,
}

pub fn make_tk(k: u32) -> Result<SubdividedTree> {
    if k == 0 {
        return Err(Error::InvalidArgument("T_k is defined for k >= 1".into()));
    }
    if k > 24 {
        return Err(Error::InvalidArgument(format!("k = {k} is too large to materialise")));
    }
    let m = binary_order(k);
    let n = 2 * m - 1;
    let mut edges = Vec::with_capacity(n - 1);
    for c in 1..m {
        let s = m + c - 1;
        edges.push((heap_parent(c).unwrap(), s));
        edges.push((s, c));
    }
    let tree = Tree::from_edges(n, &edges)?;
    let important = (0..n).map(|v| v < m).collect();
    let b_map = (0..n).map(|v| (v < m).then_some(v)).collect();
    Ok(SubdividedTree { tree, k, important, b_map, t_of_b: (0..m).collect() })
}

impl SubdividedTree {
    pub fn important_count(&self) -> usize {
        self.t_of_b.len()
    }

    /// `T_k` id of the important vertex at heap index `b`.
    pub fn vertex_of(&self, b: usize) -> usize {
        self.t_of_b[b]
    }

    /// `T_k` id of the vertex subdividing the edge between heap index
    /// `child` and its parent.
    pub fn subdivider(&self, child: usize) -> usize {
        debug_assert!(child >= 1);
        self.important_count() + child - 1
    }

    /// For a subdividing vertex, the heap index of the lower endpoint of
    /// its edge.
    pub fn edge_child(&self, v: usize) -> Option<usize> {
        let m = self.important_count();
        (v >= m && v < self.tree.order()).then(|| v - m + 1)
    }

    /// Checks the structural invariants of `T_k`.
    pub fn validate(&self) -> Result<()> {
        let m = binary_order(self.k);
        let n = self.tree.order();
        let fail = |msg: String| Err(Error::InvalidTree(msg));
        if n != (1usize << (self.k + 2)) - 3 {
            return fail(format!("|T_k| = {n}"));
        }
        if self.important.iter().filter(|&&b| b).count() != m {
            return fail("wrong number of important vertices".into());
        }
        let mut hit = vec![false; m];
        for v in 0..n {
            match (self.important[v], self.b_map[v]) {
                (true, Some(b)) if b < m && !hit[b] => hit[b] = true,
                (false, None) => {
                    let nb = self.tree.neighbors(v);
                    if nb.len() != 2 || !nb.iter().all(|&w| self.important[w]) {
                        return fail(format!("subdividing vertex {v} is not between two important vertices"));
                    }
                }
                _ => return fail(format!("b_map inconsistent at {v}")),
            }
        }
        // contracting the subdividing vertices must give B_k exactly
        let mut contracted = Vec::new();
        for v in (0..n).filter(|&v| !self.important[v]) {
            let nb = self.tree.neighbors(v);
            let (a, b) = (self.b_map[nb[0]].unwrap(), self.b_map[nb[1]].unwrap());
            contracted.push((a.min(b), a.max(b)));
        }
        contracted.sort_unstable();
        let mut expected: Vec<_> = (1..m).map(|c| (heap_parent(c).unwrap(), c)).collect();
        expected.sort_unstable();
        if contracted != expected {
            return fail("contraction is not B_k".into());
        }
        Ok(())
    }
}
