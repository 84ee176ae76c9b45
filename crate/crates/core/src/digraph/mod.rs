//! Multidigraphs stored as adjacency-multiplicity matrices.
//!
//! Parallel arcs are never individually identified: a [`Digraph`] only knows
//! how many arcs run from `i` to `j`. The arc operations follow the matrix
//! rules exactly. Contracting `(i, j)` swaps rows `i` and `j` and then drops
//! row and column `j`, so the merged vertex keeps index `i` (shifted down by
//! one when `j < i`).

mod canon;
mod io;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use canon::CanonicalKey;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigraphError {
    #[error("arc ({tail}, {head}) has multiplicity zero")]
    ZeroMultiplicity { tail: usize, head: usize },
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex contraction is not defined at vertex {vertex}, which carries a loop")]
    LoopAtVertex { vertex: usize },
    #[error("adjacency matrix is not square")]
    NotSquare,
    #[error("undirected graph must be simple: {0}")]
    NotSimple(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = DigraphError> = std::result::Result<T, E>;

/// A multiplicity slot `(tail, head)`; `tail == head` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
}

impl Arc {
    pub fn new(tail: usize, head: usize) -> Self {
        Arc { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    adj: Vec<u32>,
}

impl Digraph {
    /// The arc-less digraph `E_n`.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            adj: vec![0; n * n],
        }
    }

    pub fn from_matrix(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(DigraphError::NotSquare);
        }
        Ok(Digraph {
            n,
            adj: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds a digraph from `(tail, head)` pairs; repeated pairs accumulate.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Self::empty(n);
        for &(t, h) in arcs {
            d.check_vertex(t)?;
            d.check_vertex(h)?;
            d.adj[t * n + h] += 1;
        }
        Ok(d)
    }

    /// Directed cycle `0 -> 1 -> ... -> k-1 -> 0`; `cycle(1)` is a single loop.
    pub fn cycle(k: usize) -> Self {
        let mut d = Self::empty(k);
        for i in 0..k {
            d.adj[i * k + (i + 1) % k] += 1;
        }
        d
    }

    /// Directed path `0 -> 1 -> ... -> k-1` on `k` vertices.
    pub fn path(k: usize) -> Self {
        let mut d = Self::empty(k);
        for i in 1..k {
            d.adj[(i - 1) * k + i] = 1;
        }
        d
    }

    /// Complete digraph on `k` vertices: every ordered pair of distinct
    /// vertices joined by one arc, no loops.
    pub fn complete(k: usize) -> Self {
        let mut d = Self::empty(k);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    d.adj[i * k + j] = 1;
                }
            }
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mult(&self, tail: usize, head: usize) -> u32 {
        self.adj[tail * self.n + head]
    }

    pub fn set_mult(&mut self, tail: usize, head: usize, m: u32) {
        self.adj[tail * self.n + head] = m;
    }

    /// Row-major multiplicity matrix.
    pub fn matrix(&self) -> Vec<Vec<u32>> {
        self.adj.chunks(self.n.max(1)).take(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Total number of arcs, parallel arcs and loops each counted once.
    pub fn arc_count(&self) -> u64 {
        self.adj.iter().map(|&m| m as u64).sum()
    }

    /// Number of slots with positive multiplicity.
    pub fn support_size(&self) -> usize {
        self.adj.iter().filter(|&&m| m > 0).count()
    }

    pub fn is_arcless(&self) -> bool {
        self.adj.iter().all(|&m| m == 0)
    }

    /// Slots with positive multiplicity, row-major.
    pub fn arcs(&self) -> impl Iterator<Item = (Arc, u32)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| {
                let m = self.mult(i, j);
                (m > 0).then_some((Arc::new(i, j), m))
            })
        })
    }

    pub fn has_loop_at(&self, v: usize) -> bool {
        self.mult(v, v) > 0
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_loop_at(v))
    }

    /// Out-degree counting multiplicities; a loop counts once.
    pub fn out_degree(&self, v: usize) -> u64 {
        (0..self.n).map(|j| self.mult(v, j) as u64).sum()
    }

    /// In-degree counting multiplicities; a loop counts once.
    pub fn in_degree(&self, v: usize) -> u64 {
        (0..self.n).map(|i| self.mult(i, v) as u64).sum()
    }

    pub fn max_mult(&self) -> u32 {
        self.adj.iter().copied().max().unwrap_or(0)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(DigraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn check_arc(&self, e: Arc) -> Result<()> {
        self.check_vertex(e.tail)?;
        self.check_vertex(e.head)?;
        if self.mult(e.tail, e.head) == 0 {
            return Err(DigraphError::ZeroMultiplicity {
                tail: e.tail,
                head: e.head,
            });
        }
        Ok(())
    }

    /// Keeps the listed vertices, in the listed order, with all arcs among them.
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let k = keep.len();
        let mut adj = Vec::with_capacity(k * k);
        for &i in keep {
            for &j in keep {
                adj.push(self.mult(i, j));
            }
        }
        Digraph { n: k, adj }
    }

    fn without_vertices(&self, drop: &[usize]) -> Digraph {
        let keep: Vec<usize> = (0..self.n).filter(|v| !drop.contains(v)).collect();
        self.induced(&keep)
    }

    /// `D_{-e}`: one arc of the slot removed.
    pub fn delete_arc(&self, e: Arc) -> Result<Digraph> {
        self.check_arc(e)?;
        let mut d = self.clone();
        d.adj[e.tail * self.n + e.head] -= 1;
        Ok(d)
    }

    /// Removes every arc of the slot at once.
    pub fn delete_slot(&self, e: Arc) -> Digraph {
        let mut d = self.clone();
        d.adj[e.tail * self.n + e.head] = 0;
        d
    }

    /// `D_{/e}`. For a loop this removes the vertex, like extraction.
    pub fn contract_arc(&self, e: Arc) -> Result<Digraph> {
        self.check_arc(e)?;
        if e.is_loop() {
            return Ok(self.without_vertices(&[e.tail]));
        }
        let (i, j) = (e.tail, e.head);
        let n = self.n;
        let mut adj = Vec::with_capacity((n - 1) * (n - 1));
        for r in (0..n).filter(|&r| r != j) {
            let src = if r == i { j } else { r };
            for c in (0..n).filter(|&c| c != j) {
                adj.push(self.mult(src, c));
            }
        }
        Ok(Digraph { n: n - 1, adj })
    }

    /// `D_{\dagger e}`: both endpoints and their incident arcs removed.
    pub fn extract_arc(&self, e: Arc) -> Result<Digraph> {
        self.check_arc(e)?;
        Ok(self.without_vertices(&[e.tail, e.head]))
    }

    /// `D_{+(u,v)}`.
    pub fn add_arc(&self, u: usize, v: usize) -> Result<Digraph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut d = self.clone();
        d.adj[u * self.n + v] += 1;
        Ok(d)
    }

    /// `D_{-v}`.
    pub fn delete_vertex(&self, v: usize) -> Result<Digraph> {
        self.check_vertex(v)?;
        Ok(self.without_vertices(&[v]))
    }

    /// `D_{/v}`: `D_{-v}` plus `mult(u,v) * mult(v,w)` arcs from `u` to `w`
    /// for every in-neighbour `u` and out-neighbour `w` (with `u == w`
    /// giving loops). Rejected when `v` has a loop.
    pub fn contract_vertex(&self, v: usize) -> Result<Digraph> {
        self.check_vertex(v)?;
        if self.has_loop_at(v) {
            return Err(DigraphError::LoopAtVertex { vertex: v });
        }
        let rest: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        let mut d = self.induced(&rest);
        for (a, &u) in rest.iter().enumerate() {
            let into_v = self.mult(u, v);
            if into_v == 0 {
                continue;
            }
            for (b, &w) in rest.iter().enumerate() {
                let extra = into_v * self.mult(v, w);
                d.adj[a * d.n + b] += extra;
            }
        }
        Ok(d)
    }

    /// Block-diagonal union; `other`'s vertices are numbered after `self`'s.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let n = self.n + other.n;
        let mut d = Digraph::empty(n);
        for i in 0..self.n {
            for j in 0..self.n {
                d.adj[i * n + j] = self.mult(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                d.adj[(self.n + i) * n + self.n + j] = other.mult(i, j);
            }
        }
        d
    }

    /// Vertex sets of the weak components, each sorted, ordered by smallest
    /// member.
    pub fn component_vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            label[start] = id;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for w in 0..self.n {
                    if label[w] == usize::MAX && (self.mult(u, w) > 0 || self.mult(w, u) > 0) {
                        label[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Weak components as standalone digraphs; isolated vertices give `E_1`.
    pub fn components(&self) -> Vec<Digraph> {
        self.component_vertex_sets()
            .iter()
            .map(|vs| self.induced(vs))
            .collect()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Digraph {
        let mut d = Digraph::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                d.adj[perm[i] * self.n + perm[j]] = self.mult(i, j);
            }
        }
        d
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canon::canonical_key(self)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph({})", self.to_json_string())
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(DigraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(DigraphError::NotSimple(format!("loop at {}", a)));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(DigraphError::NotSimple(format!("repeated edge {{{}, {}}}", a, b)));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// `D(G)`: every edge replaced by two opposite arcs.
    pub fn orient(&self) -> Digraph {
        let mut d = Digraph::empty(self.n);
        for &(a, b) in &self.edges {
            d.set_mult(a, b, 1);
            d.set_mult(b, a, 1);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs).unwrap()
    }

    fn loop1() -> Digraph {
        d(1, &[(0, 0)])
    }

    fn c2() -> Digraph {
        d(2, &[(0, 1), (1, 0)])
    }

    #[test]
    fn arc_deletion() {
        let e = Arc::new(0, 0);
        assert_eq!(loop1().delete_arc(e).unwrap(), Digraph::empty(1));
        assert_eq!(c2().delete_arc(Arc::new(0, 1)).unwrap(), d(2, &[(1, 0)]));
        let double = d(2, &[(0, 1), (0, 1), (1, 0)]);
        assert_eq!(double.delete_arc(Arc::new(0, 1)).unwrap(), c2());
        assert_eq!(
            Digraph::empty(2).delete_arc(Arc::new(0, 1)),
            Err(DigraphError::ZeroMultiplicity { tail: 0, head: 1 })
        );
    }

    #[test]
    fn arc_contraction() {
        assert_eq!(d(2, &[(0, 1)]).contract_arc(Arc::new(0, 1)).unwrap(), Digraph::empty(1));
        assert_eq!(c2().contract_arc(Arc::new(0, 1)).unwrap(), loop1());
        for e in Digraph::cycle(3).arcs().map(|(e, _)| e).collect::<Vec<_>>() {
            let got = Digraph::cycle(3).contract_arc(e).unwrap();
            assert_eq!(got.canonical_key(), c2().canonical_key());
            assert_eq!(got.arc_count(), 2);
        }
        assert!(Digraph::empty(2).contract_arc(Arc::new(1, 0)).is_err());
    }

    #[test]
    fn contraction_keeps_antiparallel_multiplicity() {
        // two arcs 0->1 and three arcs 1->0 collapse to a triple loop
        let m = Digraph::from_matrix(&[vec![0, 2], vec![3, 0]]).unwrap();
        let got = m.contract_arc(Arc::new(0, 1)).unwrap();
        assert_eq!(got, Digraph::from_matrix(&[vec![3]]).unwrap());
    }

    #[test]
    fn merged_vertex_keeps_tail_in_arcs_and_head_out_arcs() {
        // 2 -> 0 -> 1 -> 3, plus 0 -> 3 and 2 -> 1 which must vanish
        let g = d(4, &[(2, 0), (0, 1), (1, 3), (0, 3), (2, 1)]);
        let got = g.contract_arc(Arc::new(0, 1)).unwrap();
        // vertices after contraction: w(=0), 2, 3
        assert_eq!(got, d(3, &[(1, 0), (0, 2)]));
    }

    #[test]
    fn arc_extraction() {
        assert_eq!(d(2, &[(0, 1)]).extract_arc(Arc::new(0, 1)).unwrap(), Digraph::empty(0));
        assert_eq!(Digraph::cycle(3).extract_arc(Arc::new(1, 2)).unwrap(), Digraph::empty(1));
        assert_eq!(loop1().extract_arc(Arc::new(0, 0)).unwrap(), Digraph::empty(0));
    }

    #[test]
    fn loop_contraction_equals_extraction() {
        let g = d(3, &[(0, 0), (0, 1), (1, 2), (2, 0), (2, 2)]);
        for v in [0, 2] {
            let e = Arc::new(v, v);
            assert_eq!(g.contract_arc(e).unwrap(), g.extract_arc(e).unwrap());
        }
    }

    #[test]
    fn arc_addition() {
        assert_eq!(Digraph::empty(2).add_arc(0, 1).unwrap(), d(2, &[(0, 1)]));
        assert_eq!(loop1().add_arc(0, 0).unwrap(), d(1, &[(0, 0), (0, 0)]));
        assert_eq!(d(2, &[(0, 1)]).add_arc(1, 0).unwrap(), c2());
        assert_eq!(
            Digraph::empty(2).add_arc(0, 2),
            Err(DigraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn vertex_deletion() {
        assert_eq!(Digraph::empty(1).delete_vertex(0).unwrap(), Digraph::empty(0));
        assert_eq!(c2().delete_vertex(0).unwrap(), Digraph::empty(1));
        assert_eq!(Digraph::cycle(3).delete_vertex(1).unwrap(), d(2, &[(1, 0)]));
    }

    #[test]
    fn vertex_contraction() {
        assert_eq!(c2().contract_vertex(1).unwrap(), loop1());
        // 0 -> 1 -> 2 -> 0, contracting 1 adds 0 -> 2
        assert_eq!(Digraph::cycle(3).contract_vertex(1).unwrap(), c2());
        // star: u1,u2 -> v -> w1,w2 with v = 0
        let star = d(5, &[(1, 0), (2, 0), (0, 3), (0, 4)]);
        let got = star.contract_vertex(0).unwrap();
        assert_eq!(got, d(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]));
        // multiplicities multiply
        let m = Digraph::from_matrix(&[vec![0, 2, 0], vec![0, 0, 3], vec![0, 0, 0]]).unwrap();
        assert_eq!(m.contract_vertex(1).unwrap().mult(0, 1), 6);
        assert_eq!(loop1().contract_vertex(0), Err(DigraphError::LoopAtVertex { vertex: 0 }));
    }

    #[test]
    fn unions_and_components() {
        assert_eq!(Digraph::empty(1).disjoint_union(&Digraph::empty(1)), Digraph::empty(2));
        assert_eq!(loop1().disjoint_union(&Digraph::empty(0)), loop1());
        let u = c2().disjoint_union(&loop1());
        assert_eq!(u, d(3, &[(0, 1), (1, 0), (2, 2)]));
        assert_eq!(u.components(), vec![c2(), loop1()]);
        assert_eq!(Digraph::empty(3).components(), vec![Digraph::empty(1); 3]);
        assert_eq!(Digraph::cycle(3).components(), vec![Digraph::cycle(3)]);
        // weak connectivity
        assert_eq!(d(3, &[(0, 2), (1, 2)]).components().len(), 1);
    }

    #[test]
    fn undirected_orientation() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.orient(), c2());
        assert!(Graph::new(2, &[(0, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 1), (1, 0)]).is_err());
    }
}
