//! Potts-model partition function over the truncated ring, under three
//! interchangeable evaluation strategies.
//!
//! For a multigraph `G` with edge weights `r_e` and an integer `q ≥ 1`,
//!
//! ```text
//! Z^Potts(q, r) = sum over maps s: V -> {1..q} of prod_e (1 + r_e [s(u)=s(v)])
//! ```
//!
//! which equals the multivariate subgraph expansion
//! `sum_{F subset E} q^{c(F)} prod_{e in F} r_e` (the Fortuin–Kasteleyn
//! identity, asserted by cross-checks against both brute forces).  All
//! strategies compute the `z^n` coefficient of the disjoint-cover power of
//! `f_z(X) = prod_{e in E(G[X])} (1 + r_e) z^{|X|}`; they differ only in
//! time/space profile.

use crate::graph::Multigraph;
use crate::modular::{zp_add_assign, zp_pow_ascending, zp_sub_assign, Fp, ZPoly};
use crate::transforms::{split_eval_multi, LatticeFunction};
use crate::{Error, Result};

/// Evaluation strategy for the cover-power kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Full `2^n` tables and fast transforms: fastest, most memory.
    Dense,
    /// Direct summation, re-evaluating the weight function on the fly:
    /// `3^n`-time, constant number of ring elements.
    Direct,
    /// Dense tables over only the `s` highest-labelled vertices:
    /// `3^{n-s} 2^s`-time, `2^s`-space.
    Split(usize),
}

/// Edge weights `r_e` as residues mod the active prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeWeights {
    /// Every edge carries the same weight.
    Uniform(u64),
    /// `weights[i]` belongs to `edges()[i]`.
    PerEdge(Vec<u64>),
}

/// One Potts evaluation task: a graph, a prime field, edge weights, and a
/// strategy.  Immutable once built; safe to share across worker threads.
pub struct PottsInstance<'a> {
    graph: &'a Multigraph,
    fp: Fp,
    weights: EdgeWeights,
    strategy: Strategy,
}

impl<'a> PottsInstance<'a> {
    /// The prime must exceed `max(n+1, m+1)` so that interpolation nodes
    /// stay distinct and small factorials stay invertible downstream.  A
    /// `Split(s)` strategy has `s` clamped to `n`.
    pub fn new(
        graph: &'a Multigraph,
        fp: Fp,
        weights: EdgeWeights,
        strategy: Strategy,
    ) -> Result<PottsInstance<'a>> {
        let bound = graph.n().max(graph.m()) as u64 + 1;
        if fp.p() <= bound {
            return Err(Error::Invalid(format!(
                "prime {} too small for n = {}, m = {}",
                fp.p(),
                graph.n(),
                graph.m()
            )));
        }
        if let EdgeWeights::PerEdge(w) = &weights {
            if w.len() != graph.m() {
                return Err(Error::Invalid(format!(
                    "{} per-edge weights for {} edges",
                    w.len(),
                    graph.m()
                )));
            }
        }
        let strategy = match strategy {
            Strategy::Split(s) => Strategy::Split(s.min(graph.n())),
            other => other,
        };
        Ok(PottsInstance { graph, fp, weights, strategy })
    }

    pub fn graph(&self) -> &Multigraph {
        self.graph
    }

    pub fn field(&self) -> &Fp {
        &self.fp
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// `1 + r_e` mod p for every edge, in edge-list order.
    pub fn edge_factors(&self) -> Vec<u64> {
        match &self.weights {
            EdgeWeights::Uniform(w) => {
                vec![self.fp.add(1, self.fp.reduce_u64(*w)); self.graph.m()]
            }
            EdgeWeights::PerEdge(ws) => {
                ws.iter().map(|&w| self.fp.add(1, self.fp.reduce_u64(w))).collect()
            }
        }
    }

    /// `Z^Potts(q, r) mod p` for each exponent in the strictly ascending
    /// list `qs` (each ≥ 1), via the selected strategy.
    pub fn potts_values(&self, qs: &[u64]) -> Vec<u64> {
        assert!(!qs.is_empty() && qs[0] >= 1);
        debug_assert!(qs.windows(2).all(|w| w[0] < w[1]), "exponents must ascend");
        let factors = self.edge_factors();
        match self.strategy {
            Strategy::Dense => self.dense_values(&factors, qs),
            Strategy::Direct => self.direct_values(&factors, qs),
            Strategy::Split(s) => self.split_values(&factors, qs, s),
        }
    }

    fn dense_values(&self, factors: &[u64], qs: &[u64]) -> Vec<u64> {
        let n = self.graph.n();
        let fp = &self.fp;
        let wt = induced_weight_table(self.graph, fp, factors);
        let mut f = LatticeFunction::from_fn(n, n + 1, |mask, row| {
            row[mask.count_ones() as usize] = wt[mask as usize];
        });
        f.fast_zeta(fp);
        let mut acc = vec![ZPoly::zero(n); qs.len()];
        for mask in 0..1u32 << n {
            let sign = (n - mask.count_ones() as usize) % 2;
            zp_pow_ascending(fp, f.row(mask), qs, |idx, pw| {
                if sign == 0 {
                    zp_add_assign(fp, &mut acc[idx].coeffs, pw);
                } else {
                    zp_sub_assign(fp, &mut acc[idx].coeffs, pw);
                }
            });
        }
        acc.into_iter().map(|a| a.coeffs[n]).collect()
    }

    fn direct_values(&self, factors: &[u64], qs: &[u64]) -> Vec<u64> {
        let n = self.graph.n();
        let fp = &self.fp;
        let edges = self.graph.edges();
        let mut acc = vec![ZPoly::zero(n); qs.len()];
        let mut fz = ZPoly::zero(n);
        for y in 0..1u32 << n {
            // (f_z zeta)(Y) by direct summation, weights evaluated on the fly.
            fz.coeffs.iter_mut().for_each(|c| *c = 0);
            let mut x = y;
            loop {
                fz.coeffs[x.count_ones() as usize] =
                    fp.add(fz.coeffs[x.count_ones() as usize], weight_of(fp, edges, factors, x));
                if x == 0 {
                    break;
                }
                x = (x - 1) & y;
            }
            let sign = (n - y.count_ones() as usize) % 2;
            zp_pow_ascending(fp, &fz.coeffs, qs, |idx, pw| {
                if sign == 0 {
                    zp_add_assign(fp, &mut acc[idx].coeffs, pw);
                } else {
                    zp_sub_assign(fp, &mut acc[idx].coeffs, pw);
                }
            });
        }
        acc.into_iter().map(|a| a.coeffs[n]).collect()
    }

    fn split_values(&self, factors: &[u64], qs: &[u64], s: usize) -> Vec<u64> {
        let n = self.graph.n();
        let fp = &self.fp;
        let edges = self.graph.edges();
        let eval = |x: u32| {
            ZPoly::monomial(n, weight_of(fp, edges, factors, x), x.count_ones() as usize)
        };
        let (polys, _) = split_eval_multi(n, n, &eval, fp, qs, s);
        polys.into_iter().map(|a| a.coeffs[n]).collect()
    }
}

/// `f(X) = prod_{e in E(G[X])} factor_e` for one subset, by edge-list scan.
pub(crate) fn weight_of(fp: &Fp, edges: &[(usize, usize)], factors: &[u64], x: u32) -> u64 {
    let mut value = 1u64;
    for (&(a, b), &fac) in edges.iter().zip(factors) {
        if x >> a & 1 == 1 && x >> b & 1 == 1 {
            value = fp.mul(value, fac);
        }
    }
    value
}

/// Dense table of `f(X) = prod_{e in E(G[X])} factor_e` over all subsets,
/// built incrementally from each set's lowest vertex (the multiplicative
/// analogue of the induced-edge-count table).
pub fn induced_weight_table(g: &Multigraph, fp: &Fp, factors: &[u64]) -> Vec<u64> {
    assert_eq!(factors.len(), g.m());
    // Per-vertex incidence: (other endpoint, combined factor); loops are
    // recorded once under their vertex.
    let mut incident: Vec<Vec<(usize, u64)>> = vec![Vec::new(); g.n()];
    for (&(a, b), &fac) in g.edges().iter().zip(factors) {
        let (v, u) = (a.max(b), a.min(b));
        if let Some(entry) = incident[v].iter_mut().find(|e| e.0 == u) {
            entry.1 = fp.mul(entry.1, fac);
        } else {
            incident[v].push((u, fac));
        }
    }
    let size = 1usize << g.n();
    let mut table = vec![0u64; size];
    table[0] = 1;
    for mask in 1..size {
        // Peel the highest vertex so its incidence list (which points at
        // lower-numbered endpoints only) can be scanned directly.
        let i = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut v = table[rest];
        for &(u, fac) in &incident[i] {
            if u == i || rest >> u & 1 == 1 {
                v = fp.mul(v, fac);
            }
        }
        table[mask] = v;
    }
    table
}

/// `Z^Potts(q, w) mod p` at a pipeline interpolation node; `q` must lie in
/// `{1, .., n+1}`.
pub fn potts_value(inst: &PottsInstance, q: u64) -> Result<u64> {
    let n = inst.graph.n() as u64;
    if q < 1 || q > n + 1 {
        return Err(Error::Invalid(format!("q = {q} outside the node range 1..={}", n + 1)));
    }
    Ok(inst.potts_values(&[q])[0])
}

/// `Z^Potts(q, r) mod p` for an arbitrary integer `q ≥ 1` (the identity
/// with the subgraph expansion holds for every positive integer).
pub fn potts_value_any(inst: &PottsInstance, q: u64) -> Result<u64> {
    if q < 1 {
        return Err(Error::Invalid("q must be at least 1".into()));
    }
    Ok(inst.potts_values(&[q])[0])
}
