//! Matrix-form arc and vertex operations against a direct implementation on
//! labelled arc lists, over every small digraph.

use dipoly_core::corpus;
use dipoly_core::digraph::{Arc, Digraph};

/// A digraph as a vertex label list plus one entry per arc instance.
#[derive(Clone)]
struct ArcSet {
    vertices: Vec<usize>,
    arcs: Vec<(usize, usize)>,
}

impl ArcSet {
    fn from(d: &Digraph) -> Self {
        let mut arcs = Vec::new();
        for (e, m) in d.arcs() {
            for _ in 0..m {
                arcs.push((e.tail, e.head));
            }
        }
        ArcSet { vertices: (0..d.n()).collect(), arcs }
    }

    fn remove_vertices(mut self, gone: &[usize]) -> Self {
        self.vertices.retain(|v| !gone.contains(v));
        self.arcs.retain(|(a, b)| !gone.contains(a) && !gone.contains(b));
        self
    }

    fn remove_one(mut self, u: usize, v: usize) -> Self {
        let i = self.arcs.iter().position(|&a| a == (u, v)).unwrap();
        self.arcs.remove(i);
        self
    }

    /// Drops the tail's out-arcs and the head's in-arcs, then merges the head
    /// into the tail.
    fn contract(mut self, u: usize, v: usize) -> Self {
        self.arcs.retain(|&(a, b)| a != u && b != v);
        for arc in self.arcs.iter_mut() {
            if arc.0 == v {
                arc.0 = u;
            }
            if arc.1 == v {
                arc.1 = u;
            }
        }
        self.vertices.retain(|&w| w != v);
        self
    }

    fn contract_vertex(self, v: usize) -> Self {
        let ins: Vec<usize> = self.arcs.iter().filter(|a| a.1 == v).map(|a| a.0).collect();
        let outs: Vec<usize> = self.arcs.iter().filter(|a| a.0 == v).map(|a| a.1).collect();
        let mut rest = self.remove_vertices(&[v]);
        for &u in &ins {
            for &w in &outs {
                rest.arcs.push((u, w));
            }
        }
        rest
    }

    /// Relabels surviving vertices `0..k` in increasing label order.
    fn to_digraph(&self) -> Digraph {
        let index = |x: usize| self.vertices.iter().position(|&w| w == x).unwrap();
        let mut d = Digraph::empty(self.vertices.len());
        for &(a, b) in &self.arcs {
            let (i, j) = (index(a), index(b));
            d.set_mult(i, j, d.mult(i, j) + 1);
        }
        d
    }
}

fn check_all_operations(d: &Digraph) {
    let set = ArcSet::from(d);
    let n = d.n();
    for (e, _) in d.arcs() {
        let (u, v) = (e.tail, e.head);
        assert_eq!(d.delete_arc(e).unwrap(), set.clone().remove_one(u, v).to_digraph(), "delete {} in {}", e, d);
        let extracted = d.extract_arc(e).unwrap();
        let contracted = d.contract_arc(e).unwrap();
        assert_eq!(extracted, set.clone().remove_vertices(&[u, v]).to_digraph(), "extract {} in {}", e, d);
        if e.is_loop() {
            assert_eq!(contracted, extracted);
            assert_eq!(contracted.n(), n - 1);
        } else {
            // the merged vertex carries the tail's label; with the head
            // removed, sorted labels give the matrix rule's indices
            assert_eq!(contracted, set.clone().contract(u, v).to_digraph(), "contract {} in {}", e, d);
            assert_eq!(contracted.n(), n - 1);
            assert_eq!(extracted.n(), n - 2);
        }
    }
    for v in 0..n {
        let deleted = d.delete_vertex(v).unwrap();
        assert_eq!(deleted, set.clone().remove_vertices(&[v]).to_digraph());
        assert_eq!(deleted.n(), n - 1);
        match d.contract_vertex(v) {
            Ok(c) => {
                assert!(!d.has_loop_at(v));
                assert_eq!(c, set.clone().contract_vertex(v).to_digraph(), "contract vertex {} in {}", v, d);
            }
            Err(_) => assert!(d.has_loop_at(v)),
        }
    }
}

#[test]
fn operations_match_set_form_up_to_three_vertices_mult_two() {
    for d in corpus::exhaustive(3, 2) {
        check_all_operations(&d);
    }
}

#[test]
fn operations_match_set_form_four_vertices_simple() {
    for d in corpus::all_digraphs(4, 1) {
        check_all_operations(&d);
    }
}

#[test]
fn operations_match_set_form_four_vertices_sampled_mult_two() {
    let spec = corpus::RandomSpec { min_n: 4, max_n: 4, max_mult: 2, density: 0.5, loop_density: 0.3 };
    for d in corpus::random_digraphs(17, 3000, spec) {
        check_all_operations(&d);
    }
}

#[test]
fn components_and_union_are_inverse() {
    for d in corpus::exhaustive(3, 1).chain(corpus::random_digraphs(5, 300, Default::default())) {
        let comps = d.components();
        let rebuilt = comps
            .iter()
            .fold(Digraph::empty(0), |acc, c| acc.disjoint_union(c));
        assert_eq!(rebuilt.canonical_key(), d.canonical_key(), "{}", d);
        assert!(comps.iter().all(|c| c.components().len() == 1));
    }
}

#[test]
fn missing_arcs_are_rejected() {
    let d = Digraph::path(3);
    assert!(d.delete_arc(Arc::new(1, 0)).is_err());
    assert!(d.contract_arc(Arc::new(0, 2)).is_err());
    assert!(d.extract_arc(Arc::new(2, 2)).is_err());
    assert!(d.delete_vertex(3).is_err());
}
