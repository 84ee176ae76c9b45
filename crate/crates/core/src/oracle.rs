//! Brute-force evaluation of every polynomial straight from its definition.
//!
//! Nothing here calls into the recurrence engine; these functions are the
//! reference side of every differential test. Cycles and paths are vertex
//! sequences weighted by the product of the multiplicities along them, so a
//! 2-cycle on slots of multiplicity 2 and 3 counts 6 times. Spanning
//! subgraphs are enumerated over multiplicity slots with in/out-degree at
//! most one; two parallel arcs can never both be chosen under that
//! constraint, so a chosen slot simply contributes its multiplicity as a
//! factor. The enumeration is exponential in the number of slots.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::digraph::{Digraph, Graph};
use crate::polynomial::MultiPoly;

/// `coefficient * x^k` as a polynomial.
fn x_pow(k: u32, coefficient: BigInt) -> MultiPoly {
    MultiPoly::monomial([0, k, 0, 0], coefficient)
}

/// Depth-first walk over simple directed paths starting at `start`.
/// `visit(end, length, weight)` is called for every path of length >= 1.
fn walk_paths(d: &Digraph, start: usize, visit: &mut dyn FnMut(usize, u32, &BigInt)) {
    fn go(
        d: &Digraph,
        v: usize,
        len: u32,
        weight: &BigInt,
        on_path: &mut [bool],
        visit: &mut dyn FnMut(usize, u32, &BigInt),
    ) {
        for w in 0..d.n() {
            let m = d.mult(v, w);
            if m == 0 || on_path[w] {
                continue;
            }
            let wt = weight * BigInt::from(m);
            visit(w, len + 1, &wt);
            on_path[w] = true;
            go(d, w, len + 1, &wt, on_path, visit);
            on_path[w] = false;
        }
    }
    let mut on_path = vec![false; d.n()];
    on_path[start] = true;
    go(d, start, 0, &BigInt::one(), &mut on_path, visit);
}

/// Number of directed cycles of each length, multiplicity weighted. Each
/// loop arc is a cycle of length 1.
pub fn cycle_counts(d: &Digraph) -> BTreeMap<u32, BigInt> {
    let mut counts: BTreeMap<u32, BigInt> = BTreeMap::new();
    for v in 0..d.n() {
        let loops = d.mult(v, v);
        if loops > 0 {
            *counts.entry(1).or_default() += BigInt::from(loops);
        }
    }
    // every cycle of length >= 2 is listed once, starting at its smallest vertex
    for s in 0..d.n() {
        let restricted: Vec<usize> = (s..d.n()).collect();
        let sub = d.induced(&restricted);
        walk_paths(&sub, 0, &mut |end, len, weight| {
            let back = sub.mult(end, 0);
            if back > 0 {
                *counts.entry(len + 1).or_default() += weight * BigInt::from(back);
            }
        });
    }
    counts
}

/// Cycle polynomial: `sum_k c_k x^k`.
pub fn sigma_enum(d: &Digraph) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for (k, c) in cycle_counts(d) {
        p += &x_pow(k, c);
    }
    p
}

/// Path polynomial: `sum_k p_k x^k` over simple paths of length >= 1.
pub fn pi_enum(d: &Digraph) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for s in 0..d.n() {
        walk_paths(d, s, &mut |_, len, w| p.add_term([0, len, 0, 0], w.clone()));
    }
    p
}

/// Generating function of the paths that begin at `v`.
pub fn pi_source_enum(d: &Digraph, v: usize) -> MultiPoly {
    let mut p = MultiPoly::zero();
    walk_paths(d, v, &mut |_, len, w| p.add_term([0, len, 0, 0], w.clone()));
    p
}

/// Generating function of the paths that end at `v`.
pub fn pi_sink_enum(d: &Digraph, v: usize) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for s in 0..d.n() {
        walk_paths(d, s, &mut |end, len, w| {
            if end == v {
                p.add_term([0, len, 0, 0], w.clone());
            }
        });
    }
    p
}

/// Statistics of one spanning subgraph `D<F>` whose components are directed
/// cycles, directed paths and isolated vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoverStats {
    /// `|F|`
    pub arcs: u32,
    /// cycle components
    pub kc: u32,
    /// path components of length >= 1
    pub kp: u32,
    /// all components, isolated vertices included
    pub k: u32,
    /// covered components, i.e. `k` minus isolated vertices
    pub c: u32,
    /// loop components
    pub c1: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Cycle,
    Path,
}

/// A covered component: its shape and number of arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverComponent {
    pub kind: ComponentKind,
    pub arcs: u32,
}

/// One admissible arc subset, described by its covered components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub components: Vec<CoverComponent>,
    pub isolated: u32,
}

impl Cover {
    pub fn stats(&self) -> CoverStats {
        let count = |kind| self.components.iter().filter(|c| c.kind == kind).count() as u32;
        let kc = count(ComponentKind::Cycle);
        let kp = count(ComponentKind::Path);
        CoverStats {
            arcs: self.components.iter().map(|c| c.arcs).sum(),
            kc,
            kp,
            k: kc + kp + self.isolated,
            c: kc + kp,
            c1: self
                .components
                .iter()
                .filter(|c| c.kind == ComponentKind::Cycle && c.arcs == 1)
                .count() as u32,
        }
    }
}

fn describe(n: usize, succ: &[Option<usize>], pred: &[Option<usize>]) -> Cover {
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut isolated = 0;
    for s in 0..n {
        if pred[s].is_some() {
            continue;
        }
        // s starts a path (possibly of length 0)
        let mut len = 0;
        let mut v = s;
        seen[v] = true;
        while let Some(w) = succ[v] {
            seen[w] = true;
            len += 1;
            v = w;
        }
        if len == 0 {
            isolated += 1;
        } else {
            components.push(CoverComponent {
                kind: ComponentKind::Path,
                arcs: len,
            });
        }
    }
    for s in 0..n {
        if seen[s] {
            continue;
        }
        // everything left lies on a cycle
        let mut len = 0;
        let mut v = s;
        loop {
            seen[v] = true;
            len += 1;
            v = succ[v].expect("vertex on a cycle has a successor");
            if v == s {
                break;
            }
        }
        components.push(CoverComponent {
            kind: ComponentKind::Cycle,
            arcs: len,
        });
    }
    Cover {
        components,
        isolated,
    }
}

/// Calls `visit(cover, weight)` once per slot subset `F` with all in- and
/// out-degrees of `D<F>` at most one.
pub fn for_each_cover(d: &Digraph, visit: &mut dyn FnMut(&Cover, &BigInt)) {
    let slots: Vec<(usize, usize, u32)> = d.arcs().map(|(e, m)| (e.tail, e.head, m)).collect();
    let n = d.n();
    let mut succ = vec![None; n];
    let mut pred = vec![None; n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        n: usize,
        slots: &[(usize, usize, u32)],
        succ: &mut [Option<usize>],
        pred: &mut [Option<usize>],
        weight: &BigInt,
        visit: &mut dyn FnMut(&Cover, &BigInt),
    ) {
        if i == slots.len() {
            visit(&describe(n, succ, pred), weight);
            return;
        }
        go(i + 1, n, slots, succ, pred, weight, visit);
        let (t, h, m) = slots[i];
        if succ[t].is_none() && pred[h].is_none() {
            succ[t] = Some(h);
            pred[h] = Some(t);
            go(i + 1, n, slots, succ, pred, &(weight * BigInt::from(m)), visit);
            succ[t] = None;
            pred[h] = None;
        }
    }
    go(0, n, &slots, &mut succ, &mut pred, &BigInt::one(), visit);
}

/// Every admissible subset's statistics with its multiplicity weight.
pub fn subgraph_stats_enum(d: &Digraph) -> Vec<(CoverStats, BigInt)> {
    let mut out = Vec::new();
    for_each_cover(d, &mut |cover, w| out.push((cover.stats(), w.clone())));
    out
}

fn sum_over_covers(d: &Digraph, term: impl Fn(&CoverStats) -> Option<[u32; 4]>) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for_each_cover(d, &mut |cover, w| {
        if let Some(e) = term(&cover.stats()) {
            p.add_term(e, w.clone());
        }
    });
    p
}

/// Bivariate cycle polynomial: subsets made of cycles only, `x^|F| y^kc`.
pub fn sigma_hat_enum(d: &Digraph) -> MultiPoly {
    sum_over_covers(d, |s| (s.kp == 0).then_some([0, s.arcs, s.kc, 0]))
}

/// Bivariate path polynomial: subsets made of paths only, `x^|F| y^kp`.
pub fn pi_hat_enum(d: &Digraph) -> MultiPoly {
    sum_over_covers(d, |s| (s.kc == 0).then_some([0, s.arcs, s.kp, 0]))
}

/// Trivariate cycle-path polynomial, `x^|F| y^kc z^kp`.
pub fn sigma_pi_enum(d: &Digraph) -> MultiPoly {
    sum_over_covers(d, |s| Some([0, s.arcs, s.kc, s.kp]))
}

/// Geometric cover polynomial: `x^(paths incl. length 0) y^cycles`, where
/// the number of paths is `n - |F|`.
pub fn geo_cover_enum(d: &Digraph) -> MultiPoly {
    let n = d.n() as u32;
    sum_over_covers(d, |s| Some([0, n - s.arcs, s.kc, 0]))
}

/// Cover polynomial: the geometric cover counts in the falling-factorial
/// basis.
pub fn cover_enum(d: &Digraph) -> MultiPoly {
    let n = d.n() as u32;
    let mut counts: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for_each_cover(d, &mut |cover, w| {
        let s = cover.stats();
        *counts.entry((n - s.arcs, s.kc)).or_default() += w;
    });
    let mut p = MultiPoly::zero();
    for ((i, j), c) in counts {
        let term = MultiPoly::falling_factorial(i).shift(&[0, 0, j, 0]).scale(&c);
        p += &term;
    }
    p
}

/// How the explicit arc elimination formula discounts cycles coloured `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XiStatistic {
    /// Subtract the number of loops in `A` only.
    Literal,
    /// Subtract the number of cycle components of `A`, of any length.
    Corrected,
}

impl XiStatistic {
    pub fn name(self) -> &'static str {
        match self {
            XiStatistic::Literal => "literal",
            XiStatistic::Corrected => "corrected",
        }
    }
}

/// Explicit sum over pairs `(A, B)`: `A ∪ B` admissible, no vertex touched by
/// both, i.e. every covered component is wholly `A` or wholly `B`. Each pair
/// contributes `x^(k - c(B) - s(A)) y^(|A|+|B| - c(B)) z^c(B)`.
pub fn xi_explicit(d: &Digraph, statistic: XiStatistic) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for_each_cover(d, &mut |cover, w| {
        let stats = cover.stats();
        let comps = &cover.components;
        for mask in 0u64..(1u64 << comps.len()) {
            let in_b = |i: usize| mask >> i & 1 == 1;
            let c_b = mask.count_ones();
            let s_a = comps
                .iter()
                .enumerate()
                .filter(|&(i, c)| {
                    !in_b(i)
                        && c.kind == ComponentKind::Cycle
                        && (statistic == XiStatistic::Corrected || c.arcs == 1)
                })
                .count() as u32;
            p.add_term([0, stats.k - c_b - s_a, stats.arcs - c_b, c_b], w.clone());
        }
    });
    p
}

/// Cycle and path polynomials of a simple undirected graph: cycles of length
/// >= 3 up to rotation and reflection, paths of length >= 1 up to reversal.
pub fn undirected_enum(g: &Graph) -> (MultiPoly, MultiPoly) {
    let n = g.n();
    let mut sigma = MultiPoly::zero();
    let mut pi = MultiPoly::zero();

    fn extend(
        g: &Graph,
        seq: &mut Vec<usize>,
        on: &mut [bool],
        sigma: &mut MultiPoly,
        pi: &mut MultiPoly,
    ) {
        let first = seq[0];
        let last = *seq.last().unwrap();
        let len = seq.len() as u32 - 1;
        if len >= 1 && first < last {
            pi.add_term([0, len, 0, 0], BigInt::one());
        }
        // a closed cycle is recorded from its smallest vertex, in the
        // direction whose second vertex is smaller than its last
        if len >= 2 && g.adjacent(last, first) && seq[1] < last && seq.iter().all(|&v| v >= first) {
            sigma.add_term([0, len + 1, 0, 0], BigInt::one());
        }
        for w in 0..g.n() {
            if !on[w] && g.adjacent(last, w) {
                on[w] = true;
                seq.push(w);
                extend(g, seq, on, sigma, pi);
                seq.pop();
                on[w] = false;
            }
        }
    }

    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        extend(g, &mut vec![s], &mut on, &mut sigma, &mut pi);
    }
    (sigma, pi)
}
