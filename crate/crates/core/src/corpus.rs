//! Test corpora: exhaustive enumeration of small digraphs and seeded random
//! ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Digraph, Graph};

/// Every labelled digraph on `n` vertices with all multiplicities at most
/// `max_mult`, loops included. There are `(max_mult + 1)^(n^2)` of them.
pub fn all_digraphs(n: usize, max_mult: u32) -> impl Iterator<Item = Digraph> {
    let slots = n * n;
    let base = max_mult as u64 + 1;
    let total = base.checked_pow(slots as u32).expect("corpus too large");
    (0..total).map(move |mut code| {
        let mut d = Digraph::empty(n);
        for s in 0..slots {
            d.set_mult(s / n, s % n, (code % base) as u32);
            code /= base;
        }
        d
    })
}

/// [`all_digraphs`] for every `n` in `1..=max_n`, smallest first.
pub fn exhaustive(max_n: usize, max_mult: u32) -> impl Iterator<Item = Digraph> {
    (1..=max_n).flat_map(move |n| all_digraphs(n, max_mult))
}

/// Every simple undirected graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::new(n, &edges).expect("pairs are distinct non-loops")
    })
}

/// Shape of a random digraph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub min_n: usize,
    pub max_n: usize,
    pub max_mult: u32,
    /// Chance that a non-loop slot is occupied.
    pub density: f64,
    /// Chance that a loop slot is occupied.
    pub loop_density: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            min_n: 1,
            max_n: 6,
            max_mult: 2,
            density: 0.3,
            loop_density: 0.15,
        }
    }
}

impl RandomSpec {
    pub fn sample(&self, rng: &mut impl Rng) -> Digraph {
        let n = rng.gen_range(self.min_n..=self.max_n);
        let mut d = Digraph::empty(n);
        for i in 0..n {
            for j in 0..n {
                let p = if i == j { self.loop_density } else { self.density };
                if self.max_mult > 0 && rng.gen_bool(p) {
                    d.set_mult(i, j, rng.gen_range(1..=self.max_mult));
                }
            }
        }
        d
    }
}

/// `count` digraphs drawn from `spec` with a generator seeded by `seed`.
pub fn random_digraphs(seed: u64, count: usize, spec: RandomSpec) -> Vec<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| spec.sample(&mut rng)).collect()
}
