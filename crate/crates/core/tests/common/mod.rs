//! Deterministic random-input generators shared by the integration tests.

use tuttekit::{Digraph, Multigraph};

/// SplitMix64: tiny, seedable, and stable across platforms, so every test
/// run sees the same input corpus.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

/// Random multigraph with `1..=max_n` vertices and `0..=max_m` edges;
/// loops and parallel edges arise naturally and connectivity is not
/// enforced.
pub fn random_multigraph(rng: &mut SplitMix64, max_n: usize, max_m: usize) -> Multigraph {
    let n = 1 + rng.below(max_n as u64) as usize;
    let m = rng.below(max_m as u64 + 1) as usize;
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| (1 + rng.below(n as u64) as usize, 1 + rng.below(n as u64) as usize))
        .collect();
    Multigraph::new(n, &edges).unwrap()
}

/// Random directed multigraph; loops and parallel arcs included.
pub fn random_digraph(rng: &mut SplitMix64, max_n: usize, max_m: usize) -> Digraph {
    let n = 1 + rng.below(max_n as u64) as usize;
    let m = rng.below(max_m as u64 + 1) as usize;
    let arcs: Vec<(usize, usize)> = (0..m)
        .map(|_| (1 + rng.below(n as u64) as usize, 1 + rng.below(n as u64) as usize))
        .collect();
    Digraph::new(n, &arcs).unwrap()
}

/// Every labeled connected simple graph on exactly `n` vertices, by
/// enumerating all subsets of the `n(n-1)/2` vertex pairs.
pub fn connected_simple_graphs(n: usize) -> Vec<Multigraph> {
    let mut pairs = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            pairs.push((u, v));
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = Multigraph::new(n, &edges).unwrap();
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}
