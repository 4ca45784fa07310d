//! Canonical forms and exhaustive enumeration of free trees.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::tree::Tree;

pub const MAX_ENUMERATION_ORDER: usize = 12;

/// Parenthesis encoding of `t` rooted at `root`, children sorted.
pub fn rooted_code(t: &Tree, root: usize) -> String {
    let (order, parent) = t.bfs_order(root);
    let mut codes: Vec<String> = vec![String::new(); t.order()];
    for &u in order.iter().rev() {
        let mut kids: Vec<String> = t
            .neighbors(u)
            .iter()
            .filter(|&&w| w != parent[u])
            .map(|&w| std::mem::take(&mut codes[w]))
            .collect();
        kids.sort_unstable();
        let mut code = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        code.push('(');
        for k in kids {
            code.push_str(&k);
        }
        code.push(')');
        codes[u] = code;
    }
    std::mem::take(&mut codes[root])
}

/// The one or two vertices of minimum eccentricity.
pub fn graph_centres(t: &Tree) -> Vec<usize> {
    let n = t.order();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in t.neighbors(leaf) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Isomorphism-invariant code of a free tree.
pub fn canonical_form(t: &Tree) -> String {
    graph_centres(t)
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .expect("nonempty tree")
}

/// Rebuilds a tree from a parenthesis code; vertices are numbered in
/// preorder, root `0`.
pub fn tree_from_code(code: &str) -> Result<Tree> {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for ch in code.chars() {
        match ch {
            '(' => {
                if let Some(&p) = stack.last() {
                    edges.push((p, next));
                } else if next > 0 {
                    return Err(Error::InvalidArgument("code has more than one root".into()));
                }
                stack.push(next);
                next += 1;
            }
            ')' => {
                stack.pop().ok_or(Error::InvalidArgument("unbalanced code".into()))?;
            }
            _ => return Err(Error::InvalidArgument(format!("bad character {ch:?} in code"))),
        }
    }
    if !stack.is_empty() {
        return Err(Error::InvalidArgument("unbalanced code".into()));
    }
    Tree::from_edges(next, &edges)
}

/// Preorder relabelling along the sorted rooted code: `order[i]` is the
/// original vertex given canonical id `i`. Two trees with equal
/// `rooted_code` at their roots get isomorphic relabellings.
pub fn canonical_order(t: &Tree, root: usize) -> Vec<usize> {
    let (bfs, parent) = t.bfs_order(root);
    let mut codes: Vec<String> = vec![String::new(); t.order()];
    for &u in bfs.iter().rev() {
        let mut kids: Vec<&str> = t
            .neighbors(u)
            .iter()
            .filter(|&&w| w != parent[u])
            .map(|&w| codes[w].as_str())
            .collect();
        kids.sort_unstable();
        codes[u] = format!("({})", kids.concat());
    }
    let mut out = Vec::with_capacity(t.order());
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        out.push(u);
        let mut kids: Vec<usize> = t.neighbors(u).iter().copied().filter(|&w| w != parent[u]).collect();
        // reverse so the smallest code is visited first
        kids.sort_by(|&a, &b| codes[b].cmp(&codes[a]));
        stack.extend(kids);
    }
    out
}

/// One representative per isomorphism class of free trees of order `n`,
/// sorted by canonical form.
pub fn enumerate_trees(n: usize) -> Result<Vec<Tree>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(Error::InvalidArgument(format!(
            "tree enumeration supports 1 <= n <= {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let mut level: BTreeSet<String> = BTreeSet::from([canonical_form(&Tree::single_vertex())]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for code in &level {
            let t = tree_from_code(code)?;
            let mut edges = t.edges();
            for v in 0..size - 1 {
                edges.push((v, size - 1));
                next.insert(canonical_form(&Tree::from_edges(size, &edges)?));
                edges.pop();
            }
        }
        level = next;
    }
    level.iter().map(|c| tree_from_code(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn order_four_is_path_and_claw() {
        let trees = enumerate_trees(4).unwrap();
        let mut max_degrees: Vec<usize> =
            trees.iter().map(|t| (0..4).map(|v| t.degree(v)).max().unwrap()).collect();
        max_degrees.sort_unstable();
        assert_eq!(max_degrees, vec![2, 3]);
    }

    #[test]
    fn range_guard() {
        assert!(enumerate_trees(0).is_err());
        assert!(enumerate_trees(13).is_err());
    }

    #[test]
    fn code_round_trip() {
        let h = Tree::h_tree();
        let code = canonical_form(&h);
        assert_eq!(canonical_form(&tree_from_code(&code).unwrap()), code);
        assert_eq!(graph_centres(&h), vec![0]);
        assert_eq!(graph_centres(&Tree::path(4).unwrap()), vec![1, 2]);
    }

    #[test]
    fn canonical_order_is_a_relabelling() {
        let t = crate::tree::random_tree(15, 3);
        let mut order = canonical_order(&t, 4);
        assert_eq!(order[0], 4);
        order.sort_unstable();
        assert_eq!(order, (0..15).collect::<Vec<_>>());
    }
}
