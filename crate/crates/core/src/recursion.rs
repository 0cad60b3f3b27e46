//! Component-count recursion for the multivariate coloring sum.
//!
//! `S[W][k]` is the total weight `sum prod_{e in F} r_e` of edge subsets
//! `F` of the induced subgraph `G[W]` for which the spanning subgraph
//! `(W, F)` has exactly `k` connected components.  Splitting off the
//! component of one vertex gives, for `k >= 2`,
//!
//! `S[W][k] = (1/k) * sum_{0 < U < W} S[U][1] * S[W \ U][k-1]`
//!
//! (each `F` is produced once per choice of component), and the `k = 1`
//! values follow by subtraction from the full edge-subset sum
//! `prod_{e in E(G[W])} (1 + r_e)`.  Layering by `|W|` makes every
//! right-hand side read strictly smaller sets, and the coloring sum is
//! recovered as `Z(q, r) = sum_k q^k S[V][k]` — polynomial in `q` by
//! construction, so no interpolation over `q` is needed.

use crate::graph::Multigraph;
use crate::modular::Fp;
use crate::potts::induced_weight_table;
use crate::transforms::layered_convolve;

/// The full table `S[W][k] mod p` for all vertex subsets `W` and component
/// counts `k in 0..=n`.
pub struct STable {
    n: usize,
    s: Vec<Vec<u64>>,
}

impl STable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `S[W][k]`; zero whenever `k` exceeds the vertex count.
    pub fn value(&self, w: u32, k: usize) -> u64 {
        if k >= self.s.len() {
            return 0;
        }
        self.s[k][w as usize]
    }
}

/// Iterate over all `n`-bit masks of population `d` in increasing order.
fn for_each_mask_of_size(n: usize, d: usize, mut visit: impl FnMut(usize)) {
    if d == 0 {
        visit(0);
        return;
    }
    if d > n {
        return;
    }
    let limit = 1usize << n;
    let mut mask = (1usize << d) - 1;
    while mask < limit {
        visit(mask);
        // Gosper's hack: next mask with the same population.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

/// Build the table layer by layer over `|W| = 1..=n`.
pub fn s_table(g: &Multigraph, fp: &Fp, factors: &[u64]) -> STable {
    let n = g.n();
    assert_eq!(factors.len(), g.m());
    let wt = induced_weight_table(g, fp, factors);
    let mut s = vec![vec![0u64; 1 << n]; n + 1];
    s[0][0] = 1;
    for d in 1..=n {
        for k in 2..=d {
            let conv = layered_convolve(fp, &s[1], &s[k - 1], n, d);
            let inv_k = fp.inv(k as u64);
            let sk = &mut s[k];
            for_each_mask_of_size(n, d, |mask| {
                sk[mask] = fp.mul(conv[mask], inv_k);
            });
        }
        for_each_mask_of_size(n, d, |mask| {
            let mut rest = 0u64;
            for k in 2..=d {
                rest = fp.add(rest, s[k][mask]);
            }
            s[1][mask] = fp.sub(wt[mask], rest);
        });
    }
    STable { n, s }
}

/// `Z(q, r) mod p` from a finished table: `sum_k q^k S[V][k]`.
pub fn z_from_s(st: &STable, fp: &Fp, q: u64) -> u64 {
    let full = ((1u64 << st.n) - 1) as u32;
    let qm = fp.reduce_u64(q);
    let mut qpow = 1u64;
    let mut total = 0u64;
    for k in 1..=st.n {
        qpow = fp.mul(qpow, qm);
        total = fp.add(total, fp.mul(qpow, st.value(full, k)));
    }
    total
}

/// The coefficient vector `b[k] = S[V][k]` for `k = 0..=n` (so that
/// `Z(q, r) = sum_k b[k] q^k`); `b[0] = 0` whenever the graph has vertices.
pub fn s_values(g: &Multigraph, fp: &Fp, factors: &[u64]) -> Vec<u64> {
    let st = s_table(g, fp, factors);
    let full = g.full_set().0;
    (0..=g.n()).map(|k| if k == 0 && g.n() > 0 { 0 } else { st.value(full, k) }).collect()
}
