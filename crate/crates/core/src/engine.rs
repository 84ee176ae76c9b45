//! Recurrence evaluation of the digraph polynomials.
//!
//! Every polynomial here obeys a linear recurrence of the shape
//!
//! ```text
//! P(D) = loop_del * P(D - e) + loop_con * P(D / e) + loop_const      e a loop
//! P(D) = del * P(D - e) + con * P(D / e) + ext * P(D † e) + const    otherwise
//! ```
//!
//! bottoming out at arc-less digraphs. [`EliminationScheme`] holds those
//! coefficients and [`Engine::eliminate`] runs the recursion with a
//! pluggable arc order, optional decomposition into weak components and a
//! memo cache keyed by canonical form.
//!
//! [`xi_general_rec`] is the odd one out: it evaluates the arc elimination
//! recurrence with a deletion weight `t` strictly along a fixed arc order,
//! which is only order independent when `t = 1` or `y = z = 0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digraph::{Arc, CanonicalKey, Digraph, DigraphError};
use crate::polynomial::{poly, MultiPoly, Var};

/// The eight polynomials the toolkit knows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolyKind {
    Sigma,
    Pi,
    SigmaHat,
    PiHat,
    SigmaPi,
    GeoCover,
    Cover,
    Xi,
}

impl PolyKind {
    pub const ALL: [PolyKind; 8] = [
        PolyKind::Sigma,
        PolyKind::Pi,
        PolyKind::SigmaHat,
        PolyKind::PiHat,
        PolyKind::SigmaPi,
        PolyKind::GeoCover,
        PolyKind::Cover,
        PolyKind::Xi,
    ];

    /// Everything except the arc elimination polynomial, whose explicit
    /// formula is itself under test.
    pub const WITH_ORACLE: [PolyKind; 7] = [
        PolyKind::Sigma,
        PolyKind::Pi,
        PolyKind::SigmaHat,
        PolyKind::PiHat,
        PolyKind::SigmaPi,
        PolyKind::GeoCover,
        PolyKind::Cover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolyKind::Sigma => "sigma",
            PolyKind::Pi => "pi",
            PolyKind::SigmaHat => "sigma-hat",
            PolyKind::PiHat => "pi-hat",
            PolyKind::SigmaPi => "sigma-pi",
            PolyKind::GeoCover => "geo-cover",
            PolyKind::Cover => "cover",
            PolyKind::Xi => "xi",
        }
    }
}

impl fmt::Display for PolyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown polynomial {:?}", s))
    }
}

/// How a scheme treats a digraph with several weak components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `P(D1 ⊔ D2) = P(D1) P(D2)`.
    Multiplicative,
    /// `P(D1 ⊔ D2) = P(D1) + P(D2)`.
    Additive,
    /// No component rule; recursion on arcs only.
    None,
}

#[derive(Clone)]
pub struct EliminationScheme {
    /// Cache namespace; two schemes with the same name must be identical.
    pub name: String,
    pub loop_del: MultiPoly,
    pub loop_con: MultiPoly,
    pub loop_const: MultiPoly,
    pub del: MultiPoly,
    pub con: MultiPoly,
    pub ext: MultiPoly,
    pub arc_const: MultiPoly,
    /// Value on the arc-less digraph `E_n`.
    pub initial: fn(usize) -> MultiPoly,
    pub decomposition: Decomposition,
    /// Eliminate every loop before any other arc.
    pub loops_first: bool,
}

fn x_power(n: usize) -> MultiPoly {
    MultiPoly::monomial([0, n as u32, 0, 0], BigInt::from(1))
}

fn one(_: usize) -> MultiPoly {
    MultiPoly::one()
}

fn zero(_: usize) -> MultiPoly {
    MultiPoly::zero()
}

fn falling(n: usize) -> MultiPoly {
    MultiPoly::falling_factorial(n as u32)
}

impl EliminationScheme {
    #[allow(clippy::too_many_arguments)]
    fn multiplicative(
        name: &str,
        loop_del: &str,
        loop_con: &str,
        del: &str,
        con: &str,
        ext: &str,
        initial: fn(usize) -> MultiPoly,
    ) -> Self {
        EliminationScheme {
            name: name.to_string(),
            loop_del: poly(loop_del),
            loop_con: poly(loop_con),
            loop_const: MultiPoly::zero(),
            del: poly(del),
            con: poly(con),
            ext: poly(ext),
            arc_const: MultiPoly::zero(),
            initial,
            decomposition: Decomposition::Multiplicative,
            loops_first: false,
        }
    }

    pub fn for_kind(kind: PolyKind) -> Self {
        match kind {
            PolyKind::Sigma => EliminationScheme {
                name: kind.name().into(),
                loop_del: poly("1"),
                loop_con: MultiPoly::zero(),
                loop_const: poly("x"),
                del: poly("1"),
                con: poly("x"),
                ext: poly("-x"),
                arc_const: MultiPoly::zero(),
                initial: zero,
                decomposition: Decomposition::Additive,
                loops_first: true,
            },
            PolyKind::Pi => EliminationScheme {
                name: kind.name().into(),
                loop_del: poly("1"),
                loop_con: MultiPoly::zero(),
                loop_const: MultiPoly::zero(),
                del: poly("1"),
                con: poly("x"),
                ext: poly("-x"),
                arc_const: poly("x"),
                initial: zero,
                decomposition: Decomposition::Additive,
                loops_first: true,
            },
            PolyKind::SigmaHat => Self::multiplicative(kind.name(), "1", "xy", "1", "x", "-x", one),
            PolyKind::PiHat => Self::multiplicative(kind.name(), "1", "0", "1", "x", "xy-x", one),
            PolyKind::SigmaPi => Self::multiplicative(kind.name(), "1", "xy", "1", "x", "xz-x", one),
            PolyKind::GeoCover => Self::multiplicative(kind.name(), "1", "y", "1", "1", "0", x_power),
            PolyKind::Cover => EliminationScheme {
                decomposition: Decomposition::None,
                ..Self::multiplicative(kind.name(), "1", "y", "1", "1", "0", falling)
            },
            PolyKind::Xi => Self::multiplicative(kind.name(), "1", "y+z", "1", "y", "z", x_power),
        }
    }
}

/// Chooses the next arc to eliminate from a non-empty candidate list.
pub trait ArcOrder: Send {
    fn choose(&mut self, d: &Digraph, candidates: &[Arc]) -> usize;
}

/// Loops first, then the lexicographically smallest `(tail, head)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultOrder;

impl ArcOrder for DefaultOrder {
    fn choose(&mut self, _: &Digraph, candidates: &[Arc]) -> usize {
        candidates.iter().position(Arc::is_loop).unwrap_or(0)
    }
}

/// Uniformly random slot at every step, from a seeded generator.
#[derive(Clone, Debug)]
pub struct RandomOrder(ChaCha8Rng);

impl RandomOrder {
    pub fn new(seed: u64) -> Self {
        RandomOrder(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl ArcOrder for RandomOrder {
    fn choose(&mut self, _: &Digraph, candidates: &[Arc]) -> usize {
        self.0.gen_range(0..candidates.len())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    /// Invocations of the recursive evaluator.
    pub calls: u64,
    /// Recursion steps that eliminated an arc.
    pub arc_steps: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    pub peak_cache_size: usize,
}

impl EngineStats {
    pub fn lookups(&self) -> u64 {
        self.cache_hits + self.cache_misses
    }
}

/// Recurrence evaluator. The cache lives as long as the engine, so share one
/// engine across a batch of related digraphs and drop it afterwards.
pub struct Engine {
    order: Box<dyn ArcOrder>,
    cache: Option<HashMap<String, HashMap<CanonicalKey, MultiPoly>>>,
    cache_size: usize,
    stats: EngineStats,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    /// Default order, cache enabled.
    pub fn new() -> Self {
        Engine {
            order: Box::new(DefaultOrder),
            cache: Some(HashMap::new()),
            cache_size: 0,
            stats: EngineStats::default(),
        }
    }

    pub fn with_order(mut self, order: impl ArcOrder + 'static) -> Self {
        self.order = Box::new(order);
        self
    }

    pub fn without_cache(mut self) -> Self {
        self.cache = None;
        self.cache_size = 0;
        self
    }

    pub fn caching(&self) -> bool {
        self.cache.is_some()
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn reset_stats(&mut self) {
        self.stats = EngineStats::default();
    }

    pub fn compute(&mut self, kind: PolyKind, d: &Digraph) -> MultiPoly {
        self.eliminate(d, &EliminationScheme::for_kind(kind))
    }

    pub fn sigma_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::Sigma, d)
    }

    pub fn pi_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::Pi, d)
    }

    pub fn sigma_hat_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::SigmaHat, d)
    }

    pub fn pi_hat_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::PiHat, d)
    }

    pub fn sigma_pi_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::SigmaPi, d)
    }

    pub fn geo_cover_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::GeoCover, d)
    }

    pub fn cover_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::Cover, d)
    }

    pub fn xi_rec(&mut self, d: &Digraph) -> MultiPoly {
        self.compute(PolyKind::Xi, d)
    }

    pub fn eliminate(&mut self, d: &Digraph, scheme: &EliminationScheme) -> MultiPoly {
        self.stats.calls += 1;
        if d.is_arcless() {
            return (scheme.initial)(d.n());
        }

        let key = if self.cache.is_some() {
            let key = d.canonical_key();
            let hit = self
                .cache
                .as_ref()
                .and_then(|c| c.get(&scheme.name))
                .and_then(|m| m.get(&key))
                .cloned();
            if let Some(p) = hit {
                self.stats.cache_hits += 1;
                return p;
            }
            self.stats.cache_misses += 1;
            Some(key)
        } else {
            None
        };

        let result = match self.split(d, scheme) {
            Some(p) => p,
            None => self.step(d, scheme),
        };

        if let (Some(cache), Some(key)) = (self.cache.as_mut(), key) {
            if cache
                .entry(scheme.name.clone())
                .or_default()
                .insert(key, result.clone())
                .is_none()
            {
                self.cache_size += 1;
                self.stats.peak_cache_size = self.stats.peak_cache_size.max(self.cache_size);
            }
        }
        result
    }

    /// Applies the component rule when it exists and `d` is disconnected.
    fn split(&mut self, d: &Digraph, scheme: &EliminationScheme) -> Option<MultiPoly> {
        if scheme.decomposition == Decomposition::None {
            return None;
        }
        let comps = d.component_vertex_sets();
        if comps.len() < 2 {
            return None;
        }
        let isolated = comps.iter().filter(|c| c.len() == 1 && !d.has_loop_at(c[0])).count();
        let mut acc = match scheme.decomposition {
            Decomposition::Multiplicative => (scheme.initial)(isolated),
            _ => (scheme.initial)(0),
        };
        for comp in comps.iter().filter(|c| c.len() > 1 || d.has_loop_at(c[0])) {
            let part = self.eliminate(&d.induced(comp), scheme);
            acc = match scheme.decomposition {
                Decomposition::Multiplicative => &acc * &part,
                _ => &acc + &part,
            };
        }
        Some(acc)
    }

    fn step(&mut self, d: &Digraph, scheme: &EliminationScheme) -> MultiPoly {
        self.stats.arc_steps += 1;
        let mut candidates: Vec<Arc> = d.arcs().map(|(e, _)| e).collect();
        if scheme.loops_first && d.has_loops() {
            candidates.retain(Arc::is_loop);
        }
        let e = candidates[self.order.choose(d, &candidates)];

        let mut term = |coef: &MultiPoly, g: Result<Digraph, DigraphError>| -> MultiPoly {
            if coef.is_zero() {
                return MultiPoly::zero();
            }
            let g = g.expect("chosen arc has positive multiplicity");
            coef * &self.eliminate(&g, scheme)
        };
        if e.is_loop() {
            let mut p = term(&scheme.loop_del, d.delete_arc(e));
            p += &term(&scheme.loop_con, d.contract_arc(e));
            p += &scheme.loop_const;
            p
        } else {
            let mut p = term(&scheme.del, d.delete_arc(e));
            p += &term(&scheme.con, d.contract_arc(e));
            p += &term(&scheme.ext, d.extract_arc(e));
            p += &scheme.arc_const;
            p
        }
    }

    /// Paths starting at `v`: `x deg+(v) + x sum_u mult(v,u) pi_{u+}(D - v)`,
    /// with loops left out of both the degree and the sum since a loop is
    /// never part of a path.
    pub fn pi_source_rec(&mut self, d: &Digraph, v: usize) -> MultiPoly {
        let x = MultiPoly::var(Var::X);
        let rest = d.delete_vertex(v).expect("vertex in range");
        let mut acc = MultiPoly::zero();
        for u in (0..d.n()).filter(|&u| u != v) {
            let m = d.mult(v, u);
            if m == 0 {
                continue;
            }
            let shifted = if u > v { u - 1 } else { u };
            let mut inner = self.pi_source_rec(&rest, shifted);
            inner += &MultiPoly::one();
            acc += &inner.scale(&BigInt::from(m));
        }
        &x * &acc
    }

    /// Mirror image of [`Engine::pi_source_rec`] over in-arcs.
    pub fn pi_sink_rec(&mut self, d: &Digraph, v: usize) -> MultiPoly {
        let x = MultiPoly::var(Var::X);
        let rest = d.delete_vertex(v).expect("vertex in range");
        let mut acc = MultiPoly::zero();
        for u in (0..d.n()).filter(|&u| u != v) {
            let m = d.mult(u, v);
            if m == 0 {
                continue;
            }
            let shifted = if u > v { u - 1 } else { u };
            let mut inner = self.pi_sink_rec(&rest, shifted);
            inner += &MultiPoly::one();
            acc += &inner.scale(&BigInt::from(m));
        }
        &x * &acc
    }

    /// Right-hand side of the vertex decomposition claim for cycles,
    /// `(1-x) sigma(D-v) + x sigma(D/v)`. This is the formula's value, not
    /// necessarily `sigma(D)`.
    pub fn sigma_vertex_rec(&mut self, d: &Digraph, v: usize) -> Result<MultiPoly, DigraphError> {
        let contracted = d.contract_vertex(v)?;
        let deleted = d.delete_vertex(v)?;
        let x = MultiPoly::var(Var::X);
        let one_minus_x = &MultiPoly::one() - &x;
        Ok(&(&one_minus_x * &self.sigma_rec(&deleted)) + &(&x * &self.sigma_rec(&contracted)))
    }

    /// Right-hand side of the vertex decomposition claim for paths,
    /// `(1-x) pi(D-v) + x pi(D/v) + pi_{v+}(D) + pi_{v-}(D)`.
    pub fn pi_vertex_rec(&mut self, d: &Digraph, v: usize) -> Result<MultiPoly, DigraphError> {
        let contracted = d.contract_vertex(v)?;
        let deleted = d.delete_vertex(v)?;
        let x = MultiPoly::var(Var::X);
        let one_minus_x = &MultiPoly::one() - &x;
        let mut p = &one_minus_x * &self.pi_rec(&deleted);
        p += &(&x * &self.pi_rec(&contracted));
        p += &self.pi_source_rec(d, v);
        p += &self.pi_sink_rec(d, v);
        Ok(p)
    }
}

/// Reduction of the arcs between `u` and `v` to at most one arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiArcReduction {
    /// `d3 + (u, v)`
    pub d1: Digraph,
    /// `d3 + (v, u)`
    pub d2: Digraph,
    /// `d` without any arc between `u` and `v`
    pub d3: Digraph,
    /// multiplicity of `(u, v)` in `d`
    pub forward: u32,
    /// multiplicity of `(v, u)` in `d`
    pub backward: u32,
}

impl MultiArcReduction {
    fn weights(&self) -> (BigInt, BigInt, BigInt) {
        let n = BigInt::from(self.forward);
        let m = BigInt::from(self.backward);
        let rest = &n + &m - 1;
        (n, m, rest)
    }

    /// `n P(D1) + m P(D2) - (n+m-1) P(D3)` from the three values.
    pub fn combine(&self, p1: &MultiPoly, p2: &MultiPoly, p3: &MultiPoly) -> MultiPoly {
        let (n, m, rest) = self.weights();
        &(&p1.scale(&n) + &p2.scale(&m)) - &p3.scale(&rest)
    }

    /// Cycle version: [`MultiArcReduction::combine`] plus `n m x^2`.
    pub fn combine_sigma(&self, s1: &MultiPoly, s2: &MultiPoly, s3: &MultiPoly) -> MultiPoly {
        let (n, m, _) = self.weights();
        &self.combine(s1, s2, s3) + &MultiPoly::monomial([0, 2, 0, 0], n * m)
    }
}

/// Splits off the `u`-`v` arcs. Requires `u != v` and at least one arc
/// between them.
pub fn multiarc_reduce(d: &Digraph, u: usize, v: usize) -> Result<MultiArcReduction, DigraphError> {
    for w in [u, v] {
        if w >= d.n() {
            return Err(DigraphError::VertexOutOfRange { vertex: w, n: d.n() });
        }
    }
    if u == v {
        return Err(DigraphError::Parse(format!("multi-arc reduction needs two distinct vertices, got {} twice", u)));
    }
    let forward = d.mult(u, v);
    let backward = d.mult(v, u);
    if forward + backward == 0 {
        return Err(DigraphError::ZeroMultiplicity { tail: u, head: v });
    }
    let d3 = d.delete_slot(Arc::new(u, v)).delete_slot(Arc::new(v, u));
    Ok(MultiArcReduction {
        d1: d3.add_arc(u, v)?,
        d2: d3.add_arc(v, u)?,
        d3,
        forward,
        backward,
    })
}

/// Arc instances of `d`, parallel arcs expanded, in row-major slot order.
/// Index `i` of the returned list is the arc id used by [`xi_general_rec`].
pub fn arc_instances(d: &Digraph) -> Vec<Arc> {
    d.arcs()
        .flat_map(|(e, m)| std::iter::repeat_n(e, m as usize))
        .collect()
}

/// State of an order-following elimination: which original vertices remain
/// and the current endpoints of each surviving arc. A merged vertex keeps
/// the tail's label.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Tracked {
    alive: Vec<bool>,
    arcs: Vec<Option<(usize, usize)>>,
}

impl Tracked {
    fn remove_vertex(&mut self, v: usize) {
        self.alive[v] = false;
        for a in self.arcs.iter_mut() {
            if matches!(a, Some((t, h)) if *t == v || *h == v) {
                *a = None;
            }
        }
    }
}

/// Arc elimination recurrence with deletion weight `t`,
/// `P(D) = t P(D - e) + y P(D / e) + z P(D † e)`, `P(E_n) = x^n`,
/// applied to arcs in exactly the given order (arc ids from
/// [`arc_instances`]; arcs already removed are skipped).
///
/// Panics if `order` is not a permutation of the arc ids.
pub fn xi_general_rec(d: &Digraph, order: &[usize]) -> MultiPoly {
    let arcs = arc_instances(d);
    let mut check = order.to_vec();
    check.sort_unstable();
    assert!(
        check.iter().copied().eq(0..arcs.len()),
        "order must be a permutation of 0..{}",
        arcs.len()
    );
    let start = Tracked {
        alive: vec![true; d.n()],
        arcs: arcs.iter().map(|e| Some((e.tail, e.head))).collect(),
    };
    let mut memo = HashMap::new();
    general_step(&start, order, 0, &mut memo)
}

fn general_step(
    state: &Tracked,
    order: &[usize],
    pos: usize,
    memo: &mut HashMap<Tracked, MultiPoly>,
) -> MultiPoly {
    let Some(next) = (pos..order.len()).find(|&i| state.arcs[order[i]].is_some()) else {
        return x_power(state.alive.iter().filter(|&&a| a).count());
    };
    // every arc before `next` in the order is gone, so the state alone
    // determines the rest of the evaluation
    if let Some(p) = memo.get(state) {
        return p.clone();
    }
    let id = order[next];
    let (u, v) = state.arcs[id].expect("found above");

    let mut deleted = state.clone();
    deleted.arcs[id] = None;

    let mut extracted = state.clone();
    extracted.remove_vertex(u);
    extracted.remove_vertex(v);

    let t = MultiPoly::var(Var::T);
    let y = MultiPoly::var(Var::Y);
    let z = MultiPoly::var(Var::Z);
    let mut p = &t * &general_step(&deleted, order, next + 1, memo);
    let ext = general_step(&extracted, order, next + 1, memo);
    if u == v {
        // contraction of a loop is extraction
        p += &(&(&y + &z) * &ext);
    } else {
        let mut contracted = state.clone();
        for a in contracted.arcs.iter_mut() {
            if matches!(a, Some((tail, head)) if *tail == u || *head == v) {
                *a = None;
            }
        }
        contracted.alive[v] = false;
        for a in contracted.arcs.iter_mut().flatten() {
            if a.0 == v {
                a.0 = u;
            }
            if a.1 == v {
                a.1 = u;
            }
        }
        p += &(&y * &general_step(&contracted, order, next + 1, memo));
        p += &(&z * &ext);
    }
    memo.insert(state.clone(), p.clone());
    p
}

/// A uniformly random permutation of the arc ids of `d`.
pub fn random_arc_order(d: &Digraph, rng: &mut impl Rng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..d.arc_count() as usize).collect();
    order.shuffle(rng);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_rational::BigRational;

    fn d(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs).unwrap()
    }

    fn graph_w() -> Digraph {
        d(5, &[(0, 2), (1, 2), (2, 3), (2, 4), (3, 1), (4, 0)])
    }

    #[test]
    fn xi_examples() {
        let mut e = Engine::new();
        assert_eq!(e.xi_rec(&Digraph::cycle(1)), poly("x+y+z"));
        assert_eq!(e.xi_rec(&Digraph::path(2)), poly("x^2+xy+z"));
        assert_eq!(e.xi_rec(&Digraph::cycle(2)), poly("x^2+2xy+y^2+yz+2z"));
        // other arc first
        let mut rev = Engine::new().without_cache().with_order(LastArc);
        assert_eq!(rev.xi_rec(&Digraph::cycle(2)), poly("x^2+2xy+y^2+yz+2z"));
    }

    struct LastArc;
    impl ArcOrder for LastArc {
        fn choose(&mut self, _: &Digraph, candidates: &[Arc]) -> usize {
            candidates.len() - 1
        }
    }

    #[test]
    fn trivariate_family_examples() {
        let mut e = Engine::new();
        assert_eq!(e.sigma_pi_rec(&Digraph::cycle(2)), poly("1+2xz+x^2y"));
        assert_eq!(e.pi_hat_rec(&Digraph::cycle(1)), poly("1"));
        assert_eq!(e.sigma_hat_rec(&Digraph::cycle(3)), poly("1+x^3y"));
        assert_eq!(e.sigma_hat_rec(&Digraph::cycle(3)), oracle::sigma_hat_enum(&Digraph::cycle(3)));
    }

    #[test]
    fn cover_examples() {
        let mut e = Engine::new();
        assert_eq!(e.geo_cover_rec(&Digraph::cycle(2)), poly("x^2+2x+y"));
        assert_eq!(e.cover_rec(&Digraph::cycle(2)), poly("x^2+x+y"));
        assert_eq!(e.cover_rec(&Digraph::cycle(1)), poly("x+y"));
        assert_eq!(e.cover_rec(&Digraph::empty(3)), poly("x^3-3x^2+2x"));
        // the falling factorial basis is not multiplicative
        assert_eq!(e.cover_rec(&Digraph::empty(2)), poly("x^2-x"));
    }

    #[test]
    fn sigma_pi_examples() {
        let mut e = Engine::new();
        assert_eq!(e.sigma_rec(&Digraph::cycle(2)), poly("x^2"));
        assert_eq!(e.pi_rec(&Digraph::cycle(2)), poly("2x"));
        assert_eq!(e.sigma_rec(&Digraph::cycle(3)), poly("x^3"));
        assert_eq!(e.sigma_rec(&graph_w()), poly("2x^3"));
        let looped = d(2, &[(0, 0), (0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(e.sigma_rec(&looped), oracle::sigma_enum(&looped));
        assert_eq!(e.pi_rec(&looped), oracle::pi_enum(&looped));
    }

    #[test]
    fn multiarc_examples() {
        let m = Digraph::from_matrix(&[vec![0, 2], vec![3, 0]]).unwrap();
        let r = multiarc_reduce(&m, 0, 1).unwrap();
        assert_eq!(r.d3, Digraph::empty(2));
        let s = |g: &Digraph| oracle::sigma_enum(g);
        let p = |g: &Digraph| oracle::pi_enum(g);
        assert_eq!(r.combine_sigma(&s(&r.d1), &s(&r.d2), &s(&r.d3)), poly("6x^2"));
        assert_eq!(r.combine(&p(&r.d1), &p(&r.d2), &p(&r.d3)), poly("5x"));
        assert_eq!(oracle::pi_enum(&m), poly("5x"));

        let single = Digraph::path(2);
        let r = multiarc_reduce(&single, 0, 1).unwrap();
        assert_eq!(r.d1, single);
        assert_eq!(r.combine_sigma(&s(&r.d1), &s(&r.d2), &s(&r.d3)), s(&single));
        assert!(multiarc_reduce(&Digraph::empty(2), 0, 1).is_err());
        assert!(multiarc_reduce(&single, 0, 0).is_err());
    }

    #[test]
    fn source_and_sink_recurrences() {
        let mut e = Engine::new();
        let p3 = Digraph::path(3);
        assert_eq!(e.pi_source_rec(&p3, 0), poly("x+x^2"));
        assert!(e.pi_source_rec(&p3, 2).is_zero());
        assert_eq!(e.pi_sink_rec(&p3, 2), poly("x+x^2"));
        for v in 0..3 {
            assert_eq!(e.pi_source_rec(&Digraph::cycle(3), v), poly("x+x^2"));
        }
        let g = Digraph::from_matrix(&[vec![1, 2, 1], vec![1, 0, 2], vec![0, 1, 1]]).unwrap();
        for v in 0..3 {
            assert_eq!(e.pi_source_rec(&g, v), oracle::pi_source_enum(&g, v));
            assert_eq!(e.pi_sink_rec(&g, v), oracle::pi_sink_enum(&g, v));
        }
    }

    #[test]
    fn vertex_formula_values() {
        let mut e = Engine::new();
        for v in 0..2 {
            assert_eq!(e.sigma_vertex_rec(&Digraph::cycle(2), v).unwrap(), poly("x^2"));
        }
        assert_eq!(e.pi_vertex_rec(&Digraph::path(2), 0).unwrap(), poly("x"));
        // graph W at its centre: the formula overcounts
        let w = graph_w();
        assert_eq!(e.sigma_vertex_rec(&w, 2).unwrap(), poly("2x^3+x^5"));
        assert_eq!(oracle::sigma_enum(&w), poly("2x^3"));
        assert!(e.sigma_vertex_rec(&Digraph::cycle(1), 0).is_err());
    }

    #[test]
    fn general_recurrence() {
        let p3 = Digraph::path(3);
        let at_one = |p: &MultiPoly| {
            p.substitute_const(Var::T, &BigRational::from_integer(1.into()))
        };
        let mut e = Engine::new();
        for order in [[0, 1], [1, 0]] {
            assert_eq!(at_one(&xi_general_rec(&p3, &order)), e.xi_rec(&p3).to_rational());
        }
        assert_eq!(xi_general_rec(&Digraph::empty(3), &[]), poly("x^3"));
        // the two orders of a bare path happen to agree
        assert_eq!(xi_general_rec(&p3, &[0, 1]), xi_general_rec(&p3, &[1, 0]));
        // on a longer path they do not, and the gap carries (t-1) z
        let p4 = Digraph::path(4);
        let a = xi_general_rec(&p4, &[0, 1, 2]);
        let b = xi_general_rec(&p4, &[1, 0, 2]);
        let diff = &a - &b;
        assert!(!diff.is_zero());
        assert!(diff.divisible_by_var(Var::Z));
        assert!(at_one(&diff).is_zero());
        // at y = z = 0 only t^|E| x^|V| survives
        let zero = BigRational::from_integer(0.into());
        let g = Digraph::from_matrix(&[vec![1, 1, 0], vec![2, 0, 1], vec![0, 1, 0]]).unwrap();
        let reduced = xi_general_rec(&g, &[5, 2, 0, 4, 1, 3])
            .substitute_const(Var::Y, &zero)
            .substitute(Var::Z, &zero);
        assert_eq!(reduced, poly("t^6x^3").to_rational());
    }

    #[test]
    fn memo_statistics() {
        let mut e = Engine::new();
        e.sigma_pi_rec(&Digraph::empty(20));
        assert_eq!(e.stats().arc_steps, 0);

        let mut e = Engine::new();
        e.sigma_hat_rec(&Digraph::cycle(3));
        let before = e.stats().cache_hits;
        e.sigma_hat_rec(&Digraph::cycle(3));
        assert_eq!(e.stats().cache_hits, before + 1);

        let mut e = Engine::new();
        let c2 = Digraph::cycle(2);
        let single = e.sigma_pi_rec(&c2);
        let steps = e.stats().arc_steps;
        let mut e = Engine::new();
        let both = e.sigma_pi_rec(&c2.disjoint_union(&c2));
        assert_eq!(both, &single * &single);
        assert_eq!(e.stats().arc_steps, steps);
        assert_eq!(e.stats().lookups(), e.stats().cache_hits + e.stats().cache_misses);
    }

    #[test]
    fn cache_does_not_change_results() {
        let g = Digraph::from_matrix(&[vec![0, 1, 2, 0], vec![1, 1, 0, 1], vec![0, 1, 0, 1], vec![2, 0, 0, 0]]).unwrap();
        for kind in PolyKind::ALL {
            let cached = Engine::new().compute(kind, &g);
            let fresh = Engine::new().without_cache().compute(kind, &g);
            assert_eq!(cached, fresh, "{}", kind);
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in PolyKind::ALL {
            assert_eq!(k.name().parse::<PolyKind>().unwrap(), k);
        }
        assert!("tutte".parse::<PolyKind>().is_err());
    }
}
