//! Trees, forests and the structural queries the game needs.
//!
//! Vertex ids are dense integers in `[0, n)`. Every deterministic choice
//! (centre, component order, local relabelling) resolves ties by the
//! smallest id.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// An immutable tree on the vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tree {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Tree {
    /// Builds a tree from an edge list, rejecting anything that is not a
    /// spanning tree of `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree> {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges given, a tree on {} vertices has {}",
                edges.len(),
                n,
                n - 1
            )));
        }
        let mut dsu = DisjointSets::new(n);
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!("edge {u}-{v} leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("self-loop at {u}")));
            }
            if !dsu.union(u, v) {
                return Err(Error::InvalidTree(format!("edge {u}-{v} closes a cycle")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Tree { n, adjacency, labels: None })
    }

    pub fn single_vertex() -> Tree {
        Tree { n: 1, adjacency: vec![Vec::new()], labels: None }
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Tree> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::from_edges(n, &edges)
    }

    /// The star with hub `0` and `leaves` leaves.
    pub fn star(leaves: usize) -> Tree {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Tree::from_edges(leaves + 1, &edges).expect("stars are trees")
    }

    /// A spider: hub `0` with one pendant path per entry of `legs`.
    /// Legs are numbered consecutively, outward from the hub.
    pub fn spider(legs: &[usize]) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).expect("spiders are trees")
    }

    /// The obstruction for a single cat: three legs of length three.
    pub fn h_tree() -> Tree {
        Tree::spider(&[3, 3, 3])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Tree> {
        if labels.len() != self.n {
            return Err(Error::InvalidTree(format!("{} labels for {} vertices", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n.saturating_sub(1));
        for u in 0..self.n {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Vertices in breadth-first order from `root`, with parent pointers
    /// (`usize::MAX` for the root).
    pub fn bfs_order(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        (order, parent)
    }

    /// Components of the subgraph induced by `vertices`, ordered by their
    /// smallest original id. Local ids follow increasing original id.
    pub fn induced(&self, vertices: &[usize]) -> Forest {
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if !inside[start] || seen[start] {
                continue;
            }
            let mut members = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &w in &self.adjacency[u] {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(self.component_from(members));
        }
        Forest { components }
    }

    fn component_from(&self, original: Vec<usize>) -> Component {
        let mut local = std::collections::HashMap::with_capacity(original.len());
        for (i, &v) in original.iter().enumerate() {
            local.insert(v, i);
        }
        let mut adjacency = vec![Vec::new(); original.len()];
        for (i, &v) in original.iter().enumerate() {
            for &w in &self.adjacency[v] {
                if let Some(&j) = local.get(&w) {
                    adjacency[i].push(j);
                }
            }
            adjacency[i].sort_unstable();
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| original.iter().map(|&v| l[v].clone()).collect());
        Component {
            tree: Tree { n: original.len(), adjacency, labels },
            original,
        }
    }

    /// Text format: the order on the first line, then one `u v` per edge.
    pub fn parse(text: &str) -> Result<Tree> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("expected vertex count, found {first:?}") })?;
        if n == 0 {
            return Err(Error::Parse { line, msg: "vertex count must be positive".into() });
        }
        let mut dsu = DisjointSets::new(n);
        let mut edges = Vec::with_capacity(n - 1);
        for (line, text) in lines {
            let mut parts = text.split_whitespace();
            let mut field = |what: &str| -> Result<usize> {
                let tok = parts.next().ok_or(Error::Parse { line, msg: format!("missing {what} endpoint") })?;
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse { line, msg: format!("bad vertex id {tok:?}") })?;
                if v >= n {
                    return Err(Error::Parse { line, msg: format!("vertex {v} outside 0..{n}") });
                }
                Ok(v)
            };
            let u = field("first")?;
            let v = field("second")?;
            if parts.next().is_some() {
                return Err(Error::Parse { line, msg: "trailing tokens after edge".into() });
            }
            if u == v {
                return Err(Error::Parse { line, msg: format!("self-loop at {u}") });
            }
            if !dsu.union(u, v) {
                return Err(Error::Parse { line, msg: format!("edge {u} {v} closes a cycle") });
            }
            edges.push((u, v));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "graph is disconnected: {} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        Tree::from_edges(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph T {\n");
        for v in 0..self.n {
            match &self.labels {
                Some(l) => {
                    let _ = writeln!(out, "  {v} [label=\"{}\"];", l[v].replace('"', "\\\""));
                }
                None => {
                    let _ = writeln!(out, "  {v};");
                }
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// One component of an induced forest, with the map back to the host ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub tree: Tree,
    /// `original[local]` is the host id of local vertex `local`.
    pub original: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Forest {
    pub components: Vec<Component>,
}

impl Forest {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.tree.order()).collect()
    }
}

pub fn remove_vertex(t: &Tree, v: usize) -> Forest {
    let rest: Vec<usize> = (0..t.order()).filter(|&u| u != v).collect();
    t.induced(&rest)
}

/// Smallest vertex whose removal leaves components of order at most
/// `ceil((n-1)/2)`.
pub fn find_centre(t: &Tree) -> usize {
    let n = t.order();
    let limit = n / 2; // == ceil((n-1)/2)
    let (order, parent) = t.bfs_order(0);
    let mut size = vec![1usize; n];
    for &u in order.iter().rev() {
        if parent[u] != usize::MAX {
            size[parent[u]] += size[u];
        }
    }
    (0..n)
        .find(|&v| {
            let mut worst = n - size[v];
            for &w in t.neighbors(v) {
                if w != parent[v] {
                    worst = worst.max(size[w]);
                }
            }
            worst <= limit
        })
        .expect("every tree has a centre")
}

/// Two-colouring of a tree; vertex 0 is always in class 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub class_of: Vec<u8>,
}

impl Bipartition {
    pub fn class(&self, v: usize) -> u8 {
        self.class_of[v]
    }

    pub fn members(&self, class: u8) -> Vec<usize> {
        (0..self.class_of.len()).filter(|&v| self.class_of[v] == class).collect()
    }
}

pub fn bipartition(t: &Tree) -> Bipartition {
    let (order, parent) = t.bfs_order(0);
    let mut class_of = vec![1u8; t.order()];
    for &u in &order[1..] {
        class_of[u] = 3 - class_of[parent[u]];
    }
    Bipartition { class_of }
}

/// Whether `t` contains the 10-vertex spider with three legs of length 3.
///
/// Equivalent to: some vertex has three branches each reaching distance 3.
pub fn contains_h(t: &Tree) -> bool {
    let n = t.order();
    if n < 10 {
        return false;
    }
    let (order, parent) = t.bfs_order(0);
    // down[v]: height of v's subtree (rooted at 0)
    let mut down = vec![0usize; n];
    for &u in order.iter().rev() {
        let p = parent[u];
        if p != usize::MAX {
            down[p] = down[p].max(down[u] + 1);
        }
    }
    // up[v]: longest path leaving v through its parent (0 for the root)
    let mut up = vec![0usize; n];
    for &p in &order {
        let (mut best, mut second) = (0usize, 0usize);
        let mut best_child = usize::MAX;
        for &c in t.neighbors(p) {
            if c == parent[p] {
                continue;
            }
            let len = down[c] + 1;
            if len > best {
                second = best;
                best = len;
                best_child = c;
            } else if len > second {
                second = len;
            }
        }
        for &c in t.neighbors(p) {
            if c == parent[p] {
                continue;
            }
            let sibling = if c == best_child { second } else { best };
            up[c] = 1 + up[p].max(sibling);
        }
    }
    (0..n).any(|c| {
        if t.degree(c) < 3 {
            return false;
        }
        let mut long = 0;
        for &w in t.neighbors(c) {
            let len = if w == parent[c] { up[c] } else { down[w] + 1 };
            if len >= 3 {
                long += 1;
            }
        }
        long >= 3
    })
}

/// Uniform random labelled tree decoded from a seeded Prüfer sequence.
pub fn random_tree(n: usize, seed: u64) -> Tree {
    assert!(n >= 1, "random_tree needs n >= 1");
    if n == 1 {
        return Tree::single_vertex();
    }
    if n == 2 {
        return Tree::from_edges(2, &[(0, 1)]).expect("edge");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Tree::from_edges(n, &prufer_decode(n, &code)).expect("Prüfer codes decode to trees")
}

/// Standard Prüfer decoding; `code.len() == n - 2`.
pub fn prufer_decode(n: usize, code: &[usize]) -> Vec<(usize, usize)> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    edges
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
