//! The cover polynomial of directed multigraphs.
//!
//! `C_D(x, y) = sum_{i,j} c(i,j) x^(i) y^j` (falling-factorial basis in
//! `x`), where `c(i,j)` counts the ways to cover the vertex set with `i`
//! vertex-disjoint directed paths and `j` vertex-disjoint directed cycles.
//! With `p(X)` / `c(X)` the numbers of spanning paths/cycles of the
//! induced subdigraph `D[X]` and `P(U;z)`, `C(U;z)` their z-weighted zeta
//! transforms, the count of ordered covers is isolated by a subset-lattice
//! Moebius inversion and a `z^n` coefficient:
//!
//! `c(i,j) = (1/(i! j!)) sum_U (-1)^{|V\U|} [z^n] P(U;z)^i C(U;z)^j`.
//!
//! The fast mode stores the transforms for all `2^n` subsets; the
//! polynomial-space mode regenerates `P(U;z)` and `C(U;z)` for one `U` at
//! a time from walk counts (time `3^n n^{O(1)}`, space `n^{O(1)}`).
//! Results are exact integers via the Chinese remainder theorem (every
//! cover is determined by its arc set, so the table sums to at most
//! `2^m`).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::Digraph;
use crate::modular::{
    binomial_table_mod, choose_primes, crt_reconstruct, zp_mul, Fp,
};
use crate::transforms::LatticeFunction;
use crate::{Error, Result};

/// Which evaluation plan produces the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    /// z-weighted zeta tables over all subsets (`2^n` ring elements).
    Fast,
    /// Per-subset regeneration from walk counts (polynomial space).
    PolySpace,
}

/// Sparse table of the cover-polynomial coefficients `c(i, j)`, `i + j <= n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverTable {
    n: usize,
    m: usize,
    c: BTreeMap<(usize, usize), BigUint>,
}

impl CoverTable {
    pub(crate) fn from_parts(n: usize, m: usize, c: BTreeMap<(usize, usize), BigUint>) -> CoverTable {
        CoverTable { n, m, c }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `c(i, j)` (zero when absent).
    pub fn coefficient(&self, i: usize, j: usize) -> BigUint {
        self.c.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in lexicographic `(i, j)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.c.iter().map(|(&(i, j), v)| (i, j, v))
    }
}

/// One step of the restricted walk recursion: `next[b] = sum_{(a,b) in
/// arcs, a,b in S} r[a]`, arcs counted with multiplicity.
fn walk_step(fp: &Fp, arcs: &[(usize, usize)], s_mask: u32, r: &[u64], next: &mut [u64]) {
    next.fill(0);
    for &(a, b) in arcs {
        if s_mask >> a & 1 == 1 && s_mask >> b & 1 == 1 {
            next[b] = fp.add(next[b], r[a]);
        }
    }
}

/// Number of directed walks of length `len` from `s` to `t` staying inside
/// `S` (mod p), counted with arc multiplicity; zero when an endpoint is
/// outside `S`.
pub fn count_walks(d: &Digraph, fp: &Fp, s_mask: u32, s: usize, t: usize, len: usize) -> u64 {
    if s_mask >> s & 1 == 0 || s_mask >> t & 1 == 0 {
        return 0;
    }
    let n = d.n();
    let mut r = vec![0u64; n];
    r[s] = 1;
    let mut next = vec![0u64; n];
    for _ in 0..len {
        walk_step(fp, d.arcs(), s_mask, &r, &mut next);
        std::mem::swap(&mut r, &mut next);
    }
    r[t]
}

/// `sum_{s,t in S}` of the walk counts inside `S`, for every length
/// `0..=max_len` (index = length).
fn path_walk_counts(d: &Digraph, fp: &Fp, s_mask: u32, max_len: usize) -> Vec<u64> {
    let n = d.n();
    let mut r: Vec<u64> = (0..n).map(|v| (s_mask >> v & 1) as u64).collect();
    let mut next = vec![0u64; n];
    let mut counts = Vec::with_capacity(max_len + 1);
    for l in 0..=max_len {
        let mut total = 0u64;
        for v in 0..n {
            total = fp.add(total, r[v]);
        }
        counts.push(total);
        if l < max_len {
            walk_step(fp, d.arcs(), s_mask, &r, &mut next);
            std::mem::swap(&mut r, &mut next);
        }
    }
    counts
}

/// Closed walks from `base` back to `base` inside `S`, for every length
/// `0..=max_len`; all zeros when `base` is outside `S`.
fn closed_walk_counts(d: &Digraph, fp: &Fp, s_mask: u32, base: usize, max_len: usize) -> Vec<u64> {
    let n = d.n();
    let mut counts = vec![0u64; max_len + 1];
    if s_mask >> base & 1 == 0 {
        return counts;
    }
    let mut r = vec![0u64; n];
    r[base] = 1;
    let mut next = vec![0u64; n];
    counts[0] = 1;
    for l in 1..=max_len {
        walk_step(fp, d.arcs(), s_mask, &r, &mut next);
        std::mem::swap(&mut r, &mut next);
        counts[l] = r[base];
    }
    counts
}

fn moebius_in_place(fp: &Fp, table: &mut [u64], bits: usize) {
    for bit in 0..bits {
        let step = 1usize << bit;
        for mask in 0..table.len() {
            if mask & step != 0 {
                table[mask] = fp.sub(table[mask], table[mask ^ step]);
            }
        }
    }
}

/// Spanning-path and spanning-cycle counts of every induced subdigraph,
/// mod p: `p(X)` = directed paths through all of `X`, `c(X)` = directed
/// cycles through all of `X` (each cycle once, with arc multiplicity).
///
/// A walk of length `|X| - 1` that stays inside `X` and touches every
/// vertex is exactly a spanning path, so `p(X)` is a Moebius inversion
/// (over `S ⊆ X`) of the all-pairs walk counts, read off at the layer
/// `|X| = length + 1`.  Spanning cycles are closed walks of length `|X|`
/// anchored at the minimum vertex of `X`; anchoring makes the count
/// per-cycle, and only sets containing the anchor contribute, so the
/// inversion runs on the sublattice above each base vertex in turn.
/// Boundary values: `p(∅) = c(∅) = 0`, `p({x}) = 1`, `c({x})` = loops at
/// `x`.
pub fn spanning_paths_cycles(d: &Digraph, fp: &Fp) -> (Vec<u64>, Vec<u64>) {
    let n = d.n();
    assert!(n <= 25, "2^n walk tables need n <= 25");
    let size = 1usize << n;
    let mut p = vec![0u64; size];
    let mut c = vec![0u64; size];

    // Paths: one full-lattice inversion per walk length.
    for l in 0..n {
        let mut table: Vec<u64> = (0..size)
            .map(|s| path_walk_counts(d, fp, s as u32, l)[l])
            .collect();
        moebius_in_place(fp, &mut table, n);
        for (mask, &value) in table.iter().enumerate() {
            if mask.count_ones() as usize == l + 1 {
                p[mask] = value;
            }
        }
    }

    // Cycles: anchor at the minimum vertex v; the free bits are v+1..n.
    for v in 0..n {
        let hb = n - v - 1;
        for l in 1..=hb + 1 {
            let mut table: Vec<u64> = (0..1usize << hb)
                .map(|sp| {
                    let s_mask = (1u32 << v) | ((sp as u32) << (v + 1));
                    closed_walk_counts(d, fp, s_mask, v, l)[l]
                })
                .collect();
            moebius_in_place(fp, &mut table, hb);
            for (sp, &value) in table.iter().enumerate() {
                if sp.count_ones() as usize == l - 1 {
                    c[(1usize << v) | (sp << (v + 1))] = value;
                }
            }
        }
    }
    (p, c)
}

/// `P(U;z)` and `C(U;z)` for every `U`, as z-weighted zeta transforms of
/// `p(X)` and `c(X)` (fast mode).
fn zeta_tables(d: &Digraph, fp: &Fp) -> (LatticeFunction, LatticeFunction) {
    let n = d.n();
    let (p, c) = spanning_paths_cycles(d, fp);
    let mut pz = LatticeFunction::from_fn(n, n + 1, |mask, row| {
        row[mask.count_ones() as usize] = p[mask as usize];
    });
    let mut cz = LatticeFunction::from_fn(n, n + 1, |mask, row| {
        row[mask.count_ones() as usize] = c[mask as usize];
    });
    pz.fast_zeta(fp);
    cz.fast_zeta(fp);
    (pz, cz)
}

/// `P(U;z)` and `C(U;z)` for a single `U`, regenerated from walk counts
/// (polynomial space).  For each nonempty `S ⊆ U` the sets `X` with
/// inversion term `S` are grouped by size: paths may extend `S` by any
/// `k` of the `|U \ S|` free vertices, cycles only by vertices above the
/// anchor `min S` (an extension below the anchor would change the
/// anchor, and those terms vanish).
fn per_subset_transforms(
    d: &Digraph,
    fp: &Fp,
    u_mask: u32,
    binom: &[Vec<u64>],
    pu: &mut [u64],
    cu: &mut [u64],
) {
    let u_size = u_mask.count_ones() as usize;
    pu.fill(0);
    cu.fill(0);
    if u_size == 0 {
        return;
    }
    let mut s_mask = u_mask;
    loop {
        let s_size = s_mask.count_ones() as usize;
        let base = s_mask.trailing_zeros() as usize;
        let b = u_size - s_size;
        let pw = path_walk_counts(d, fp, s_mask, u_size.saturating_sub(1));
        for k in 0..=b {
            let term = fp.mul(binom[b][k], pw[s_size + k - 1]);
            let slot = &mut pu[s_size + k];
            *slot = if k % 2 == 0 { fp.add(*slot, term) } else { fp.sub(*slot, term) };
        }
        let above = (u_mask & !s_mask) >> base;
        let a = above.count_ones() as usize;
        let cw = closed_walk_counts(d, fp, s_mask, base, s_size + a);
        for k in 0..=a {
            let term = fp.mul(binom[a][k], cw[s_size + k]);
            let slot = &mut cu[s_size + k];
            *slot = if k % 2 == 0 { fp.add(*slot, term) } else { fp.sub(*slot, term) };
        }
        if s_mask == 0 || (s_mask - 1) & u_mask == 0 {
            break;
        }
        s_mask = (s_mask - 1) & u_mask;
    }
}

/// The full grid `c(i, j) mod p` for one prime, shared by both modes:
/// iterate `U`, build the truncated powers of `P(U;z)` and `C(U;z)`, and
/// accumulate the signed `z^n` coefficients of every product.
fn cover_counts(d: &Digraph, fp: &Fp, mode: CoverMode) -> Vec<Vec<u64>> {
    let n = d.n();
    let zeta = match mode {
        CoverMode::Fast => Some(zeta_tables(d, fp)),
        CoverMode::PolySpace => None,
    };
    let binom = binomial_table_mod(fp, n);
    let mut pu = vec![0u64; n + 1];
    let mut cu = vec![0u64; n + 1];
    let mut ppow: Vec<Vec<u64>> = vec![vec![0u64; n + 1]; n + 1];
    let mut cpow = ppow.clone();
    let mut acc = vec![vec![0u64; n + 1]; n + 1];
    let p128 = fp.p() as u128;
    for u in 0u32..1 << n {
        let (pz, cz): (&[u64], &[u64]) = match (&zeta, mode) {
            (Some((pt, ct)), _) => (pt.row(u), ct.row(u)),
            (None, _) => {
                per_subset_transforms(d, fp, u, &binom, &mut pu, &mut cu);
                (&pu, &cu)
            }
        };
        ppow[0].fill(0);
        ppow[0][0] = 1;
        cpow[0].fill(0);
        cpow[0][0] = 1;
        for i in 1..=n {
            let (done, rest) = ppow.split_at_mut(i);
            zp_mul(fp, &done[i - 1], pz, &mut rest[0]);
            let (done, rest) = cpow.split_at_mut(i);
            zp_mul(fp, &done[i - 1], cz, &mut rest[0]);
        }
        let negative = (n - u.count_ones() as usize) % 2 == 1;
        for i in 0..=n {
            for j in 0..=n - i {
                let mut sum = 0u128;
                for dgr in 0..=n {
                    sum += ppow[i][dgr] as u128 * cpow[j][n - dgr] as u128 % p128;
                }
                let v = (sum % p128) as u64;
                acc[i][j] = if negative { fp.sub(acc[i][j], v) } else { fp.add(acc[i][j], v) };
            }
        }
    }
    // Divide the ordered counts by i! j!.
    let mut inv_fact = vec![1u64; n + 1];
    let mut fact = 1u64;
    for i in 1..=n {
        fact = fp.mul(fact, i as u64);
        inv_fact[i] = fp.inv(fact);
    }
    for (i, row) in acc.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = fp.mul(*v, fp.mul(inv_fact[i], inv_fact[j]));
        }
    }
    acc
}

/// Exact cover-polynomial coefficient table.
///
/// Fast mode needs `n <= 25` (subset tables); the polynomial-space mode
/// shares the same guard, since its `3^n` running time is already far
/// beyond reach there.  Internal cross-checks: the table must sum to at
/// most `2^m` and contain the unique all-singleton path cover.
pub fn cover_table(d: &Digraph, mode: CoverMode) -> Result<CoverTable> {
    let n = d.n();
    let m = d.m();
    if n > 25 {
        return Err(Error::Capacity(format!(
            "{n} vertices exceeds the cover-table limit of 25"
        )));
    }
    let bound = BigUint::one() << m;
    let primes = choose_primes(&bound, n as u64 + 1);
    let mut residues: Vec<Vec<Vec<(u64, u64)>>> = vec![vec![Vec::new(); n + 1]; n + 1];
    for &p in &primes {
        let fp = Fp::new(p);
        let grid = cover_counts(d, &fp, mode);
        for i in 0..=n {
            for j in 0..=n - i {
                residues[i][j].push((p, grid[i][j]));
            }
        }
    }
    let mut coeffs = BTreeMap::new();
    for i in 0..=n {
        for j in 0..=n - i {
            let v = crt_reconstruct(&residues[i][j]);
            if !v.is_zero() {
                coeffs.insert((i, j), v);
            }
        }
    }
    let table = CoverTable { n, m, c: coeffs };
    let total: BigUint = table.c.values().sum();
    if total > bound {
        return Err(Error::Internal(format!(
            "cover table sums to {total}, above the arc-subset bound 2^{m}"
        )));
    }
    if table.coefficient(n, 0) != BigUint::one() {
        return Err(Error::Internal(
            "the all-singleton path cover was not counted exactly once".into(),
        ));
    }
    Ok(table)
}

/// Exact evaluation `sum c(i,j) x^(i) y^j`, with `x^(i)` the falling
/// factorial `x (x-1) ... (x-i+1)`.
pub fn cover_evaluate(t: &CoverTable, x: &BigRational, y: &BigRational) -> BigRational {
    let max_i = t.c.keys().map(|&(i, _)| i).max().unwrap_or(0);
    let max_j = t.c.keys().map(|&(_, j)| j).max().unwrap_or(0);
    let mut falling = Vec::with_capacity(max_i + 1);
    falling.push(BigRational::one());
    for i in 1..=max_i {
        let next = &falling[i - 1] * (x - BigRational::from(BigInt::from(i as u64 - 1)));
        falling.push(next);
    }
    let mut ypow = Vec::with_capacity(max_j + 1);
    ypow.push(BigRational::one());
    for j in 1..=max_j {
        let next = &ypow[j - 1] * y;
        ypow.push(next);
    }
    let mut total = BigRational::zero();
    for (&(i, j), v) in &t.c {
        total += BigRational::from(BigInt::from(v.clone())) * &falling[i] * &ypow[j];
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{cover_bruteforce, permanent_bruteforce};

    const P: u64 = (1 << 62) - 57;

    fn rational(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    #[test]
    fn walk_count_fixtures() {
        let two_cycle = Digraph::new(2, &[(1, 2), (2, 1)]).unwrap();
        let fp = Fp::new(P);
        // Empty walks, the round trip, and an endpoint outside S.
        assert_eq!(count_walks(&two_cycle, &fp, 0b11, 0, 0, 0), 1);
        assert_eq!(count_walks(&two_cycle, &fp, 0b11, 0, 0, 2), 1);
        assert_eq!(count_walks(&two_cycle, &fp, 0b01, 0, 1, 1), 0);
        // Multiplicities multiply along the walk.
        let doubled = Digraph::new(2, &[(1, 2), (1, 2), (2, 1)]).unwrap();
        assert_eq!(count_walks(&doubled, &fp, 0b11, 0, 0, 2), 2);
    }

    fn spanning_bruteforce(d: &Digraph, x_mask: u32) -> (u64, u64) {
        // Permutations of X: paths over all orders, cycles anchored at the
        // smallest vertex, both with arc multiplicity.
        let verts: Vec<usize> = (0..d.n()).filter(|&v| x_mask >> v & 1 == 1).collect();
        if verts.is_empty() {
            return (0, 0);
        }
        let mult = d.multiplicity_matrix();
        let mut paths = 0u64;
        let mut cycles = 0u64;
        let mut order = verts.clone();
        permute(&mut order, 0, &mut |order| {
            let mut pw = 1u64;
            for w in order.windows(2) {
                pw *= mult[w[0]][w[1]];
            }
            paths += pw;
            // Each cycle is visited once: anchor the order at the minimum.
            if order.first() == verts.first() {
                cycles += pw * mult[*order.last().unwrap()][order[0]];
            }
        });
        (paths, cycles)
    }

    fn permute(items: &mut [usize], at: usize, visit: &mut impl FnMut(&[usize])) {
        if at == items.len() {
            visit(items);
            return;
        }
        for i in at..items.len() {
            items.swap(at, i);
            permute(items, at + 1, visit);
            items.swap(at, i);
        }
    }

    #[test]
    fn spanning_tables_fixtures() {
        let fp = Fp::new(P);
        // Single vertex with a loop.
        let d = Digraph::new(1, &[(1, 1)]).unwrap();
        let (p, c) = spanning_paths_cycles(&d, &fp);
        assert_eq!((p[1], c[1]), (1, 1));
        assert_eq!((p[0], c[0]), (0, 0));
        // Directed 2-cycle.
        let d = Digraph::new(2, &[(1, 2), (2, 1)]).unwrap();
        let (p, c) = spanning_paths_cycles(&d, &fp);
        assert_eq!((p[0b11], c[0b11]), (2, 1));
        // Two isolated vertices.
        let d = Digraph::new(2, &[]).unwrap();
        let (p, c) = spanning_paths_cycles(&d, &fp);
        assert_eq!((p[0b11], c[0b11]), (0, 0));
        assert_eq!((p[0b01], p[0b10]), (1, 1));
    }

    #[test]
    fn spanning_tables_match_permutation_enumeration() {
        let fp = Fp::new(P);
        let mut state = 0xc0ffee123456789u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..12 {
            let n = 1 + (next() % 5) as usize;
            let m = (next() % 12) as usize;
            let arcs: Vec<(usize, usize)> =
                (0..m).map(|_| (1 + (next() as usize % n), 1 + (next() as usize % n))).collect();
            let d = Digraph::new(n, &arcs).unwrap();
            let (p, c) = spanning_paths_cycles(&d, &fp);
            for x in 0u32..1 << n {
                let (bp, bc) = spanning_bruteforce(&d, x);
                assert_eq!(p[x as usize], bp % P, "paths, arcs = {arcs:?}, X = {x:#b}");
                assert_eq!(c[x as usize], bc % P, "cycles, arcs = {arcs:?}, X = {x:#b}");
            }
        }
    }

    #[test]
    fn table_fixtures() {
        for mode in [CoverMode::Fast, CoverMode::PolySpace] {
            let d = Digraph::new(1, &[]).unwrap();
            let t = cover_table(&d, mode).unwrap();
            assert_eq!(t.iter().count(), 1);
            assert_eq!(t.coefficient(1, 0), BigUint::one());

            let d = Digraph::new(1, &[(1, 1)]).unwrap();
            let t = cover_table(&d, mode).unwrap();
            assert_eq!(t.coefficient(1, 0), BigUint::one());
            assert_eq!(t.coefficient(0, 1), BigUint::one());

            let d = Digraph::new(2, &[(1, 2), (2, 1)]).unwrap();
            let t = cover_table(&d, mode).unwrap();
            assert_eq!(t.coefficient(2, 0), BigUint::one());
            assert_eq!(t.coefficient(1, 0), BigUint::from(2u32));
            assert_eq!(t.coefficient(0, 1), BigUint::one());
        }
    }

    #[test]
    fn modes_and_bruteforce_agree_on_random_digraphs() {
        let mut state = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        for round in 0..15 {
            let n = 1 + (next() % 5) as usize;
            let m = (next() % 10) as usize;
            let arcs: Vec<(usize, usize)> =
                (0..m).map(|_| (1 + (next() as usize % n), 1 + (next() as usize % n))).collect();
            let d = Digraph::new(n, &arcs).unwrap();
            let brute = cover_bruteforce(&d).unwrap();
            let fast = cover_table(&d, CoverMode::Fast).unwrap();
            let poly = cover_table(&d, CoverMode::PolySpace).unwrap();
            assert_eq!(fast, brute, "fast, round {round}, arcs = {arcs:?}");
            assert_eq!(poly, brute, "polyspace, round {round}, arcs = {arcs:?}");
        }
    }

    #[test]
    fn cycle_cover_row_is_the_permanent()  {
        let d = Digraph::new(4, &[(1, 2), (2, 1), (2, 3), (3, 4), (4, 2), (1, 1), (3, 2), (2, 3)])
            .unwrap();
        let t = cover_table(&d, CoverMode::Fast).unwrap();
        let row: BigUint = (0..=d.n()).map(|j| t.coefficient(0, j)).sum();
        assert_eq!(row, permanent_bruteforce(&d.multiplicity_matrix()));
    }

    #[test]
    fn evaluation_fixtures() {
        let d = Digraph::new(2, &[(1, 2), (2, 1)]).unwrap();
        let t = cover_table(&d, CoverMode::Fast).unwrap();
        assert_eq!(cover_evaluate(&t, &rational(1), &rational(1)), rational(3));
        // At x = 0 only the cycle row survives.
        assert_eq!(cover_evaluate(&t, &rational(0), &rational(5)), rational(5));

        let d = Digraph::new(1, &[(1, 1)]).unwrap();
        let t = cover_table(&d, CoverMode::Fast).unwrap();
        assert_eq!(cover_evaluate(&t, &rational(2), &rational(3)), rational(5));
    }

    #[test]
    fn oversized_input_is_a_capacity_error() {
        let d = Digraph::new(26, &[]).unwrap();
        assert!(matches!(cover_table(&d, CoverMode::Fast), Err(Error::Capacity(_))));
    }
}
