//! Independent brute-force references.
//!
//! Everything here is deliberately written from first principles — direct
//! enumeration of spin maps, edge subsets, recursion trees, and arc
//! covers — sharing no machinery with the production pipelines, so that an
//! agreement between the two is meaningful evidence of correctness.  All
//! entry points enforce hard size guards and fail with a capacity error
//! beyond them.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::cover::CoverTable;
use crate::graph::{Digraph, Multigraph};
use crate::modular::{binomial_table, Fp};
use crate::tutte::TutteTable;
use crate::{Error, Result};

/// Component count of the spanning subgraph `(V, F)` given an edge-subset
/// bitmask, by union-find.
fn edge_subset_components(n: usize, edges: &[(usize, usize)], f_mask: u32) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        if f_mask >> i & 1 == 1 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

/// Spin-sum reference: `sum over s: V -> [q]` of
/// `prod_{e monochromatic} (1 + r_e) mod p`.  Guard: `q^n <= 10^7`.
pub fn potts_bruteforce(g: &Multigraph, fp: &Fp, q: u64, weights: &[u64]) -> Result<u64> {
    let n = g.n();
    assert_eq!(weights.len(), g.m());
    let states = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if states > 10_000_000 {
        return Err(Error::Capacity(format!("q^n = {states} spin maps is beyond the oracle guard")));
    }
    if q == 0 {
        return Ok(0);
    }
    let factors: Vec<u64> = weights.iter().map(|&w| fp.add(1, fp.reduce_u64(w))).collect();
    let mut spin = vec![0u64; n];
    let mut total = 0u64;
    loop {
        let mut term = 1u64;
        for (&(a, b), &f) in g.edges().iter().zip(&factors) {
            if spin[a] == spin[b] {
                term = fp.mul(term, f);
            }
        }
        total = fp.add(total, term);
        let mut v = 0;
        loop {
            if v == n {
                return Ok(total);
            }
            spin[v] += 1;
            if spin[v] == q {
                spin[v] = 0;
                v += 1;
            } else {
                break;
            }
        }
    }
}

/// Edge-subset reference: `sum_F q^{c(F)} prod_{e in F} r_e mod p`.
/// Guard: `m <= 25`.
pub fn multivariate_z_bruteforce(g: &Multigraph, fp: &Fp, q: u64, weights: &[u64]) -> Result<u64> {
    let m = g.m();
    assert_eq!(weights.len(), m);
    if m > 25 {
        return Err(Error::Capacity(format!("2^{m} edge subsets is beyond the oracle guard")));
    }
    let qm = fp.reduce_u64(q);
    let rs: Vec<u64> = weights.iter().map(|&w| fp.reduce_u64(w)).collect();
    let mut total = 0u64;
    for f in 0u32..1 << m {
        let c = edge_subset_components(g.n(), g.edges(), f);
        let mut term = fp.pow(qm, c as u64);
        for (i, &r) in rs.iter().enumerate() {
            if f >> i & 1 == 1 {
                term = fp.mul(term, r);
            }
        }
        total = fp.add(total, term);
    }
    Ok(total)
}

/// Subset-expansion reference for the Tutte table: accumulate
/// `(x-1)^{c(F)-c} (y-1)^{c(F)+|F|-n}` over all edge subsets, then expand
/// the two binomials exactly.  Guard: `m <= 22`.
pub fn tutte_bruteforce(g: &Multigraph) -> Result<TutteTable> {
    let (n, m) = (g.n(), g.m());
    if m > 22 {
        return Err(Error::Capacity(format!("2^{m} edge subsets is beyond the oracle guard")));
    }
    let c = g.connected_components().len();
    let mut counts = vec![vec![BigUint::zero(); m + 1]; n + 1];
    for f in 0u32..1 << m {
        let k = edge_subset_components(n, g.edges(), f);
        counts[k - c][k + f.count_ones() as usize - n] += 1u32;
    }
    let binom = binomial_table(n.max(m));
    let mut grid = vec![vec![BigInt::zero(); m + 1]; n + 1];
    for (xe, row) in counts.iter().enumerate() {
        for (ye, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for i in 0..=xe {
                let mut xc = BigInt::from(a.clone()) * BigInt::from(binom[xe][i].clone());
                if (xe - i) % 2 == 1 {
                    xc = -xc;
                }
                for j in 0..=ye {
                    let mut term = &xc * BigInt::from(binom[ye][j].clone());
                    if (ye - j) % 2 == 1 {
                        term = -term;
                    }
                    grid[i][j] += term;
                }
            }
        }
    }
    let mut coeffs = BTreeMap::new();
    for (i, row) in grid.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            if v.is_negative() {
                return Err(Error::Internal(format!(
                    "negative coefficient at x^{i} y^{j} in the subset expansion"
                )));
            }
            if !v.is_zero() {
                coeffs.insert((i, j), v.to_biguint().unwrap());
            }
        }
    }
    Ok(TutteTable::from_parts(n, m, c, coeffs))
}

/// Deletion–contraction reference.  Returns the table and the number of
/// leaves of the recursion tree (for a connected graph the leaf count
/// equals the spanning-tree count, since every leaf contributes the
/// monomial of one maximal forest).
pub fn tutte_delcon_counted(g: &Multigraph) -> Result<(TutteTable, u64)> {
    const LEAF_BUDGET: u64 = 10_000_000;
    let mut leaves = 0u64;
    let coeffs = delcon_rec(g.edges().to_vec(), &mut leaves, LEAF_BUDGET)?;
    let c = g.connected_components().len();
    Ok((TutteTable::from_parts(g.n(), g.m(), c, coeffs), leaves))
}

/// Deletion–contraction reference (table only).
pub fn tutte_deletion_contraction(g: &Multigraph) -> Result<TutteTable> {
    Ok(tutte_delcon_counted(g)?.0)
}

fn delcon_rec(
    edges: Vec<(usize, usize)>,
    leaves: &mut u64,
    budget: u64,
) -> Result<BTreeMap<(usize, usize), BigUint>> {
    // Loops split off as y factors.
    let loops = edges.iter().filter(|&&(a, b)| a == b).count();
    let rest: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a != b).collect();

    // An edge is a bridge iff removing it splits the component it lies in.
    let vertex_ids: Vec<usize> = {
        let mut ids: Vec<usize> =
            rest.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    let components_of = |skip: Option<usize>| -> usize {
        let mut parent: std::collections::HashMap<usize, usize> =
            vertex_ids.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut std::collections::HashMap<usize, usize>, mut a: usize) -> usize {
            while parent[&a] != a {
                let next = parent[&parent[&a]];
                parent.insert(a, next);
                a = next;
            }
            a
        }
        for (i, &(a, b)) in rest.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let mut count = 0;
        for &v in &vertex_ids {
            if find(&mut parent, v) == v {
                count += 1;
            }
        }
        count
    };
    let base = components_of(None);
    let non_bridge = (0..rest.len()).find(|&i| components_of(Some(i)) == base);

    match non_bridge {
        None => {
            // Only bridges (and the stripped loops) remain: one leaf.
            *leaves += 1;
            if *leaves > budget {
                return Err(Error::Capacity(format!(
                    "deletion-contraction exceeded {budget} leaves"
                )));
            }
            let mut map = BTreeMap::new();
            map.insert((rest.len(), loops), BigUint::one());
            Ok(map)
        }
        Some(i) => {
            let (u, v) = rest[i];
            let mut deleted = rest.clone();
            deleted.remove(i);
            let contracted: Vec<(usize, usize)> = deleted
                .iter()
                .map(|&(a, b)| {
                    (if a == v { u } else { a }, if b == v { u } else { b })
                })
                .collect();
            let mut total = delcon_rec(deleted, leaves, budget)?;
            for ((di, dj), val) in delcon_rec(contracted, leaves, budget)? {
                *total.entry((di, dj)).or_default() += val;
            }
            if loops > 0 {
                total = total.into_iter().map(|((i, j), v)| ((i, j + loops), v)).collect();
            }
            Ok(total)
        }
    }
}

/// Count proper colorings with `t` colors by direct enumeration.
/// Guard: `t^n <= 10^7`.
pub fn count_proper_colorings(g: &Multigraph, t: u64) -> Result<BigUint> {
    let n = g.n();
    let states = (t as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if states > 10_000_000 {
        return Err(Error::Capacity(format!("t^n = {states} colorings is beyond the oracle guard")));
    }
    if t == 0 {
        return Ok(BigUint::zero());
    }
    let mut color = vec![0u64; n];
    let mut count = BigUint::zero();
    loop {
        if g.edges().iter().all(|&(a, b)| color[a] != color[b]) {
            count += 1u32;
        }
        let mut v = 0;
        loop {
            if v == n {
                return Ok(count);
            }
            color[v] += 1;
            if color[v] == t {
                color[v] = 0;
                v += 1;
            } else {
                break;
            }
        }
    }
}

/// Count maximal spanning forests (edge subsets that are acyclic with as
/// many components as the whole graph); equals `T(1, 1)`.
/// Guard: `m <= 25`.
pub fn count_maximal_forests(g: &Multigraph) -> Result<BigUint> {
    let (n, m) = (g.n(), g.m());
    if m > 25 {
        return Err(Error::Capacity(format!("2^{m} edge subsets is beyond the oracle guard")));
    }
    let c = g.connected_components().len();
    let mut count = BigUint::zero();
    for f in 0u32..1 << m {
        let size = f.count_ones() as usize;
        if size == n - c && edge_subset_components(n, g.edges(), f) == c {
            count += 1u32;
        }
    }
    Ok(count)
}

/// Permanent by inclusion–exclusion over column subsets (exact, signed
/// internally, nonnegative for a nonnegative matrix).
pub fn permanent_bruteforce(matrix: &[Vec<u64>]) -> BigUint {
    let n = matrix.len();
    if n == 0 {
        return BigUint::one();
    }
    debug_assert!(matrix.iter().all(|row| row.len() == n));
    let mut total = BigInt::zero();
    for s in 1u64..1 << n {
        let mut product = BigInt::one();
        for row in matrix {
            let mut sum = BigUint::zero();
            for (j, &a) in row.iter().enumerate() {
                if s >> j & 1 == 1 {
                    sum += a;
                }
            }
            product *= BigInt::from(sum);
        }
        if (n as u32 - s.count_ones()) % 2 == 1 {
            product = -product;
        }
        total += product;
    }
    total.to_biguint().expect("permanent of a nonnegative matrix is nonnegative")
}

/// Cover-table reference: enumerate arc subsets in which every vertex has
/// in-degree and out-degree at most one.  Such a subset decomposes into
/// vertex-disjoint directed paths (isolated vertices are length-0 paths)
/// and cycles covering all of `V`; count them by (path count, cycle
/// count).  Guards: `n <= 7` and `m <= 25`.
pub fn cover_bruteforce(d: &Digraph) -> Result<CoverTable> {
    let (n, m) = (d.n(), d.m());
    if n > 7 {
        return Err(Error::Capacity(format!("{n} vertices is beyond the cover oracle guard")));
    }
    if m > 25 {
        return Err(Error::Capacity(format!("2^{m} arc subsets is beyond the cover oracle guard")));
    }
    let mut coeffs: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
    'subset: for s in 0u32..1 << m {
        let mut out_to = vec![usize::MAX; n];
        let mut in_from = vec![usize::MAX; n];
        for (i, &(a, b)) in d.arcs().iter().enumerate() {
            if s >> i & 1 == 1 {
                if out_to[a] != usize::MAX || in_from[b] != usize::MAX {
                    continue 'subset;
                }
                out_to[a] = b;
                in_from[b] = a;
            }
        }
        // Path components start at vertices with no incoming arc.
        let mut visited = vec![false; n];
        let mut paths = 0usize;
        for v in 0..n {
            if in_from[v] == usize::MAX {
                paths += 1;
                let mut at = v;
                while !visited[at] {
                    visited[at] = true;
                    if out_to[at] == usize::MAX {
                        break;
                    }
                    at = out_to[at];
                }
            }
        }
        // Whatever remains lies on cycles.
        let mut cycles = 0usize;
        for v in 0..n {
            if !visited[v] {
                cycles += 1;
                let mut at = v;
                while !visited[at] {
                    visited[at] = true;
                    at = out_to[at];
                }
            }
        }
        *coeffs.entry((paths, cycles)).or_default() += 1u32;
    }
    Ok(CoverTable::from_parts(n, m, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::RunOptions;
    use crate::tutte::compute_tutte;

    #[test]
    fn subset_expansion_matches_pipeline_fixtures() {
        for g in [
            Multigraph::complete(3),
            Multigraph::cycle(4),
            Multigraph::new(2, &[(1, 2), (1, 2)]).unwrap(),
            Multigraph::new(1, &[(1, 1)]).unwrap(),
            Multigraph::new(4, &[(1, 2), (3, 4)]).unwrap(),
            Multigraph::new(3, &[(1, 2), (1, 2), (2, 3), (1, 1)]).unwrap(),
        ] {
            let brute = tutte_bruteforce(&g).unwrap();
            let pipeline = compute_tutte(&g, &RunOptions::default()).unwrap();
            assert_eq!(brute, pipeline);
        }
    }

    #[test]
    fn deletion_contraction_agrees_with_subset_expansion() {
        let graphs = [
            Multigraph::complete(4),
            Multigraph::petersen(),
            Multigraph::new(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (1, 3), (2, 2)]).unwrap(),
        ];
        for g in &graphs {
            assert_eq!(tutte_deletion_contraction(g).unwrap(), tutte_bruteforce(g).unwrap());
        }
    }

    #[test]
    fn delcon_leaf_count_is_the_spanning_tree_count() {
        for g in [
            Multigraph::complete(4),
            Multigraph::complete(5),
            Multigraph::cycle(7),
            Multigraph::path(5),
            Multigraph::petersen(),
        ] {
            let (_, leaves) = tutte_delcon_counted(&g).unwrap();
            assert_eq!(BigUint::from(leaves), g.spanning_tree_count());
        }
    }

    #[test]
    fn spin_and_subset_references_agree_with_each_other() {
        let fp = Fp::new((1 << 62) - 57);
        let g = Multigraph::new(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (2, 2), (1, 3)]).unwrap();
        let weights: Vec<u64> = (0..g.m() as u64).map(|i| 5 * i + 1).collect();
        for q in 1..=4 {
            assert_eq!(
                potts_bruteforce(&g, &fp, q, &weights).unwrap(),
                multivariate_z_bruteforce(&g, &fp, q, &weights).unwrap()
            );
        }
    }

    #[test]
    fn forest_count_matches_tutte_at_one_one() {
        for g in [
            Multigraph::complete(4),
            Multigraph::cycle(5),
            Multigraph::new(4, &[(1, 2), (3, 4), (3, 4)]).unwrap(),
        ] {
            let t = compute_tutte(&g, &RunOptions::default()).unwrap();
            let sum: BigUint = t.iter().map(|(_, _, v)| v.clone()).sum();
            assert_eq!(count_maximal_forests(&g).unwrap(), sum);
        }
    }

    #[test]
    fn coloring_counts() {
        let k3 = Multigraph::complete(3);
        assert_eq!(count_proper_colorings(&k3, 3).unwrap(), BigUint::from(6u32));
        assert_eq!(count_proper_colorings(&k3, 2).unwrap(), BigUint::zero());
        let loopy = Multigraph::new(2, &[(1, 1)]).unwrap();
        assert_eq!(count_proper_colorings(&loopy, 5).unwrap(), BigUint::zero());
    }

    #[test]
    fn permanents() {
        let eye = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(permanent_bruteforce(&eye), BigUint::one());
        let ones = vec![vec![1; 3]; 3];
        assert_eq!(permanent_bruteforce(&ones), BigUint::from(6u32));
        let two_cycle = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(permanent_bruteforce(&two_cycle), BigUint::one());
        assert_eq!(permanent_bruteforce(&[]), BigUint::one());
    }

    #[test]
    fn cover_reference_fixtures() {
        // Single vertex: one empty path cover.
        let d = Digraph::new(1, &[]).unwrap();
        let t = cover_bruteforce(&d).unwrap();
        assert_eq!(t.coefficient(1, 0), BigUint::one());
        // Vertex with a loop: a trivial path or a 1-cycle.
        let d = Digraph::new(1, &[(1, 1)]).unwrap();
        let t = cover_bruteforce(&d).unwrap();
        assert_eq!(t.coefficient(1, 0), BigUint::one());
        assert_eq!(t.coefficient(0, 1), BigUint::one());
        // Directed 2-cycle.
        let d = Digraph::new(2, &[(1, 2), (2, 1)]).unwrap();
        let t = cover_bruteforce(&d).unwrap();
        assert_eq!(t.coefficient(2, 0), BigUint::one());
        assert_eq!(t.coefficient(1, 0), BigUint::from(2u32));
        assert_eq!(t.coefficient(0, 1), BigUint::one());
    }

    #[test]
    fn cover_cycle_row_sums_to_the_permanent() {
        let d = Digraph::new(4, &[(1, 2), (2, 1), (2, 3), (3, 4), (4, 2), (1, 1), (3, 2)])
            .unwrap();
        let t = cover_bruteforce(&d).unwrap();
        let cycle_row: BigUint = (0..=d.n()).map(|j| t.coefficient(0, j)).sum();
        assert_eq!(cycle_row, permanent_bruteforce(&d.multiplicity_matrix()));
    }

    #[test]
    fn oracle_guards_reject_oversized_inputs() {
        let big = Multigraph::complete(12); // m = 66
        assert!(matches!(tutte_bruteforce(&big), Err(Error::Capacity(_))));
        assert!(matches!(count_maximal_forests(&big), Err(Error::Capacity(_))));
        let fp = Fp::new((1 << 62) - 57);
        let w = vec![1u64; big.m()];
        assert!(matches!(multivariate_z_bruteforce(&big, &fp, 2, &w), Err(Error::Capacity(_))));
        assert!(matches!(potts_bruteforce(&big, &fp, 100, &w), Err(Error::Capacity(_))));
        let wide = Digraph::new(9, &[]).unwrap();
        assert!(matches!(cover_bruteforce(&wide), Err(Error::Capacity(_))));
    }
}
