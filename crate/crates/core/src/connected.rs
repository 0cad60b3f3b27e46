//! Disjoint-cover powers by recursion over connected vertex sets.
//!
//! The intermediate value `F(X, q, i)` is the sum of `prod_j f_z(U_j)` over
//! all `q`-tuples of subsets of `X` whose union agrees with `X` on the
//! vertices numbered above `i` (1-based).  `F(V, q, 0)` is exactly the
//! disjoint-cover power `((f_z zeta)^q mu)(V)`, and the suffix-partition
//! up-step computes a set's table from its maximal proper subsets' tables.
//! Because the weight function factors over connected components, tables of
//! disconnected sets are entrywise products of their components' tables and
//! are never stored: the memo holds exactly the connected sets.

use std::collections::HashMap;

use crate::graph::{Multigraph, VertexSet};
use crate::modular::{zp_add_assign, zp_mul_assign, zp_pow_ascending, zp_sub_assign, Fp, ZPoly};
use crate::potts::weight_of;

/// The values `F(X, q, i)` for one vertex set `X`: one ring element per
/// (exponent index, suffix index `i` in `0..=n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTable {
    n: usize,
    stride: usize,
    q_count: usize,
    data: Vec<u64>,
}

impl FTable {
    fn zeros(n: usize, stride: usize, q_count: usize) -> FTable {
        FTable { n, stride, q_count, data: vec![0u64; q_count * (n + 1) * stride] }
    }

    /// The table of the empty set: `F(∅, q, i) = f_z(∅)^q = 1`.
    pub fn empty_set(n: usize, stride: usize, q_count: usize) -> FTable {
        let mut t = FTable::zeros(n, stride, q_count);
        for qi in 0..q_count {
            for i in 0..=n {
                t.value_mut(qi, i)[0] = 1;
            }
        }
        t
    }

    pub fn value(&self, qi: usize, i: usize) -> &[u64] {
        let at = (qi * (self.n + 1) + i) * self.stride;
        &self.data[at..at + self.stride]
    }

    fn value_mut(&mut self, qi: usize, i: usize) -> &mut [u64] {
        let at = (qi * (self.n + 1) + i) * self.stride;
        &mut self.data[at..at + self.stride]
    }
}

/// Compute `F(X, ., .)` from the tables of all maximal proper subsets.
///
/// `fz_x` is `f_z(X)`; `preds` holds `(v, table of X \ {v})` for every
/// 0-based vertex `v` of `X`.  Step one exploits the suffix partition —
/// summing each predecessor's exponent-1 value at suffix index `v` walks
/// every proper subset of `X` exactly once, so adding `f_z(X)` gives the
/// zeta transform at `X`, whose powers are `F(X, q, n)`.  Step two peels
/// the suffix indices back down to 0.
pub fn up_step(
    x: u32,
    fz_x: &ZPoly,
    preds: &[(usize, FTable)],
    fp: &Fp,
    qs: &[u64],
    n: usize,
) -> FTable {
    let stride = fz_x.coeffs.len();
    debug_assert_eq!(x.count_ones() as usize, preds.len());
    let q1 = qs.iter().position(|&q| q == 1).expect("exponent list must contain 1");
    let mut table = FTable::zeros(n, stride, qs.len());

    let mut base = fz_x.coeffs.clone();
    for (v, pred) in preds {
        zp_add_assign(fp, &mut base, pred.value(q1, *v));
    }
    zp_pow_ascending(fp, &base, qs, |qi, pw| {
        table.value_mut(qi, n).copy_from_slice(pw);
    });

    let mut scratch = vec![0u64; stride];
    for qi in 0..qs.len() {
        for i in (1..=n).rev() {
            let v = i - 1;
            scratch.copy_from_slice(table.value(qi, i));
            if x >> v & 1 == 1 {
                let pred = &preds.iter().find(|(pv, _)| *pv == v).unwrap().1;
                zp_sub_assign(fp, &mut scratch, pred.value(qi, v));
            }
            table.value_mut(qi, i - 1).copy_from_slice(&scratch);
        }
    }
    table
}

/// Entrywise ring product of component tables: valid whenever the weight
/// function is multiplicative over connected components.
pub fn factor_disconnected(fp: &Fp, components: &[FTable]) -> FTable {
    debug_assert!(components.len() >= 2, "factorisation needs at least two components");
    let mut result = components[0].clone();
    let mut scratch = vec![0u64; result.stride];
    for other in &components[1..] {
        for qi in 0..result.q_count {
            for i in 0..=result.n {
                zp_mul_assign(fp, result.value_mut(qi, i), other.value(qi, i), &mut scratch);
            }
        }
    }
    result
}

/// Memoised top-down driver: tables of connected sets are computed by
/// [`up_step`] and stored; tables of disconnected sets are synthesised from
/// their components on the fly.  One solver serves one (prime, weights)
/// task for a whole ascending exponent list at once.
pub struct ConnectedSolver<'a> {
    graph: &'a Multigraph,
    fp: Fp,
    factors: Vec<u64>,
    qs: Vec<u64>,
    memo: HashMap<u32, FTable>,
}

impl<'a> ConnectedSolver<'a> {
    /// `factors[e] = 1 + r_e mod p`.  The exponent list is extended with 1
    /// if absent (the up-step consumes exponent-1 values).
    pub fn new(graph: &'a Multigraph, fp: Fp, factors: Vec<u64>, qs: &[u64]) -> ConnectedSolver<'a> {
        assert_eq!(factors.len(), graph.m());
        debug_assert!(qs.windows(2).all(|w| w[0] < w[1]) && qs.first().is_none_or(|&q| q >= 1));
        let mut all_qs = qs.to_vec();
        if !all_qs.contains(&1) {
            all_qs.insert(0, 1);
        }
        ConnectedSolver { graph, fp, factors, qs: all_qs, memo: HashMap::new() }
    }

    /// The exponent list actually computed (ascending, contains 1).
    pub fn exponents(&self) -> &[u64] {
        &self.qs
    }

    /// Number of memoised tables; equals the number of connected sets
    /// touched (after solving the full set of a connected graph, exactly
    /// the count of connected sets of the graph).
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// The table of an arbitrary subset (owned; connected sets come from
    /// the memo, disconnected ones are factored).
    pub fn table(&mut self, x: VertexSet) -> FTable {
        let n = self.graph.n();
        let stride = n + 1;
        if x.is_empty() {
            return FTable::empty_set(n, stride, self.qs.len());
        }
        if let Some(t) = self.memo.get(&x.0) {
            return t.clone();
        }
        let components = self.graph.components_of_subset(x);
        if components.len() > 1 {
            let tables: Vec<FTable> = components.into_iter().map(|c| self.table(c)).collect();
            return factor_disconnected(&self.fp, &tables);
        }
        let preds: Vec<(usize, FTable)> =
            x.iter().map(|v| (v, self.table(x.remove(v)))).collect();
        let fz_x = ZPoly::monomial(
            n,
            weight_of(&self.fp, self.graph.edges(), &self.factors, x.0),
            x.len(),
        );
        let t = up_step(x.0, &fz_x, &preds, &self.fp, &self.qs, n);
        self.memo.insert(x.0, t.clone());
        t
    }

    /// `((f_z zeta)^q mu)(V)` for every exponent in [`Self::exponents`], as
    /// full ring elements (`F(V, q, 0)`).
    pub fn solve(&mut self) -> Vec<ZPoly> {
        let full = self.graph.full_set();
        let table = self.table(full);
        (0..self.qs.len()).map(|qi| ZPoly { coeffs: table.value(qi, 0).to_vec() }).collect()
    }
}

/// Potts values `Z^Potts(q, r) mod p` for each exponent in the ascending
/// list `qs`, by the connected-sets recursion.
pub fn connected_potts_values(g: &Multigraph, fp: &Fp, factors: &[u64], qs: &[u64]) -> Vec<u64> {
    let n = g.n();
    let mut solver = ConnectedSolver::new(g, fp.clone(), factors.to_vec(), qs);
    let values = solver.solve();
    qs.iter()
        .map(|q| {
            let qi = solver.exponents().iter().position(|x| x == q).unwrap();
            values[qi].coeffs[n]
        })
        .collect()
}
