//! Canonical byte keys for memoization.
//!
//! Vertices are first split into classes by iterated colour refinement
//! (degree signatures, then neighbour-class multisets). Classes are ordered
//! by their signatures, which makes the ordering itself an isomorphism
//! invariant. Up to [`EXHAUSTIVE_LIMIT`] vertices every relabeling that
//! respects the class order is tried and the smallest encoding wins, so
//! isomorphic digraphs share a key. Beyond that the refined order is used
//! directly with ties broken by index: equal keys still imply isomorphic
//! digraphs, but isomorphic digraphs may get different keys.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::Digraph;

pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Own colour, loop count, sorted out- and in-neighbour (colour, multiplicity).
type Signature = (usize, u32, Vec<(usize, u32)>, Vec<(usize, u32)>);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Colour of every vertex after refinement reaches a fixed point. Colours
/// are ranks of sorted signatures, so they do not depend on vertex labels.
fn refined_colours(d: &Digraph) -> Vec<usize> {
    let n = d.n();
    let mut colour = vec![0usize; n];
    let mut classes = if n == 0 { 0 } else { 1 };
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut outs: Vec<(usize, u32)> = (0..n)
                    .filter(|&w| w != v && d.mult(v, w) > 0)
                    .map(|w| (colour[w], d.mult(v, w)))
                    .collect();
                let mut ins: Vec<(usize, u32)> = (0..n)
                    .filter(|&u| u != v && d.mult(u, v) > 0)
                    .map(|u| (colour[u], d.mult(u, v)))
                    .collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (colour[v], d.mult(v, v), outs, ins)
            })
            .collect();
        let ranks: BTreeMap<_, usize> = {
            let mut distinct: Vec<_> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            distinct.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
        };
        let next: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
        let next_classes = ranks.len();
        colour = next;
        if next_classes == classes {
            return colour;
        }
        classes = next_classes;
    }
}

/// Encoding in "shell" order: the entries among the first `p + 1` vertices
/// precede any entry involving a later vertex, so a partial relabeling fixes
/// a prefix of the key and the search below can prune.
fn push_shell(d: &Digraph, order: &[usize], p: usize, out: &mut Vec<u32>) {
    let vp = order[p];
    for &vq in &order[..p] {
        out.push(d.mult(vp, vq));
        out.push(d.mult(vq, vp));
    }
    out.push(d.mult(vp, vp));
}

struct Search<'a> {
    d: &'a Digraph,
    slots: Vec<Vec<usize>>,
    slot_class: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    current: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl Search<'_> {
    /// Current prefix compared with the same-length prefix of the best key.
    fn versus_best(&self) -> Ordering {
        match &self.best {
            Some(best) => self.current[..].cmp(&best[..self.current.len()]),
            None => Ordering::Less,
        }
    }

    fn run(&mut self, p: usize) {
        let n = self.d.n();
        if p == n {
            if self.versus_best() == Ordering::Less {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let class = self.slot_class[p];
        for idx in 0..self.slots[class].len() {
            let v = self.slots[class][idx];
            if self.used[v] {
                continue;
            }
            let before = self.current.len();
            self.order.push(v);
            push_shell(self.d, &self.order, p, &mut self.current);
            if self.versus_best() != Ordering::Greater {
                self.used[v] = true;
                self.run(p + 1);
                self.used[v] = false;
            }
            self.current.truncate(before);
            self.order.pop();
        }
    }
}

pub(super) fn canonical_key(d: &Digraph) -> CanonicalKey {
    let n = d.n();
    let colour = refined_colours(d);
    let classes = colour.iter().copied().max().map_or(0, |c| c + 1);
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for v in 0..n {
        slots[colour[v]].push(v);
    }
    let slot_class: Vec<usize> = (0..classes)
        .flat_map(|c| std::iter::repeat_n(c, slots[c].len()))
        .collect();

    let entries = if n <= EXHAUSTIVE_LIMIT {
        let mut search = Search {
            d,
            slots,
            slot_class,
            order: Vec::with_capacity(n),
            used: vec![false; n],
            current: Vec::with_capacity(n * n),
            best: None,
        };
        search.run(0);
        search.best.unwrap_or_default()
    } else {
        let order: Vec<usize> = slots.into_iter().flatten().collect();
        let mut out = Vec::with_capacity(n * n);
        for p in 0..n {
            push_shell(d, &order, p, &mut out);
        }
        out
    };

    let mut bytes = Vec::with_capacity(4 + 4 * entries.len());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    for m in entries {
        bytes.extend_from_slice(&m.to_le_bytes());
    }
    CanonicalKey(bytes)
}
