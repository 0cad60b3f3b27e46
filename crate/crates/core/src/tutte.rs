//! The Tutte polynomial: exact coefficient tables and specialisations.
//!
//! For a graph with `n` vertices, `m` edges and `c` components, the Tutte
//! polynomial is recovered from the coloring-sum table by
//!
//! `T(x, y) = sum_{k,l} a[k][l] (x-1)^{k-c} (y-1)^{k+l-n}`
//!
//! — both exponents are nonnegative whenever `a[k][l] > 0`, so the right
//! side is a polynomial identity, expanded here with exact big-integer
//! binomials.  Disconnected graphs factor: the table of the whole graph is
//! the product of its components' tables.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::Multigraph;
use crate::modular::binomial_table;
use crate::pipeline::{z_coefficient_table, RunOptions, ZCoefficients};
use crate::{Error, Result};

/// Sparse coefficient table of `T(x, y) = sum t_{ij} x^i y^j`, with the
/// source graph's vertex, edge and component counts attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TutteTable {
    n: usize,
    m: usize,
    components: usize,
    coeffs: BTreeMap<(usize, usize), BigUint>,
}

impl TutteTable {
    pub(crate) fn from_parts(
        n: usize,
        m: usize,
        components: usize,
        coeffs: BTreeMap<(usize, usize), BigUint>,
    ) -> TutteTable {
        TutteTable { n, m, components, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// `t_{ij}` (zero when absent).
    pub fn coefficient(&self, i: usize, j: usize) -> BigUint {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in lexicographic `(i, j)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> {
        self.coeffs.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// Exact rational evaluation `T(x, y)`.
    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let max_i = self.coeffs.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let xpow = powers(x, max_i);
        let ypow = powers(y, max_j);
        let mut total = BigRational::zero();
        for (&(i, j), c) in &self.coeffs {
            total += BigRational::from(BigInt::from(c.clone())) * &xpow[i] * &ypow[j];
        }
        total
    }
}

fn powers(x: &BigRational, up_to: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(BigRational::one());
    for i in 1..=up_to {
        let next = &out[i - 1] * x;
        out.push(next);
    }
    out
}

/// Expand the coloring-sum table of a graph with `components` components
/// of its full edge set into the Tutte coefficient table.
///
/// Internal errors flag impossible shapes: a nonzero entry that would need
/// a negative exponent, or a negative coefficient after expansion.
pub fn assemble_tutte(z: &ZCoefficients, components: usize) -> Result<TutteTable> {
    let (n, m) = (z.n(), z.m());
    let binom = binomial_table(n.max(m));
    let mut grid = vec![vec![BigInt::zero(); m + 1]; n + 1];
    for k in 0..=n {
        for l in 0..=m {
            let a = z.a(k, l);
            if a.is_zero() {
                continue;
            }
            if k + l < n || k < components {
                return Err(Error::Internal(format!(
                    "subgraph class (components {k}, edges {l}) contradicts the graph shape"
                )));
            }
            let xe = k - components;
            let ye = k + l - n;
            let a = BigInt::from(a.clone());
            // (x-1)^xe (y-1)^ye, expanded with alternating signs.
            for i in 0..=xe {
                let mut xc = &a * BigInt::from(binom[xe][i].clone());
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
                    "negative Tutte coefficient at x^{i} y^{j}"
                )));
            }
            if !v.is_zero() {
                coeffs.insert((i, j), v.to_biguint().unwrap());
            }
        }
    }
    Ok(TutteTable { n, m, components, coeffs })
}

/// Product of component tables (the Tutte polynomial is multiplicative
/// over connected components); counts are summed.
pub fn combine_components(tables: Vec<TutteTable>) -> TutteTable {
    assert!(!tables.is_empty());
    let mut iter = tables.into_iter();
    let mut acc = iter.next().unwrap();
    for t in iter {
        let mut product: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
        for (&(i1, j1), c1) in &acc.coeffs {
            for (&(i2, j2), c2) in &t.coeffs {
                *product.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
            }
        }
        acc = TutteTable {
            n: acc.n + t.n,
            m: acc.m + t.m,
            components: acc.components + t.components,
            coeffs: product,
        };
    }
    acc
}

/// Two independent identities a finished table must satisfy.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    /// Product over components of the spanning-tree count (matrix-tree).
    pub tau: BigUint,
    /// `T(1, 1)` = sum of all coefficients.
    pub coeff_sum: BigUint,
    /// `T(2, 2)`.
    pub eval22: BigUint,
    /// `2^m`.
    pub two_m: BigUint,
    pub sum_eq_tau: bool,
    pub eval22_eq_2m: bool,
}

/// Check the table against the graph it claims to describe: `T(1, 1)`
/// must equal the maximal-spanning-forest count obtained independently by
/// matrix-tree, and `T(2, 2)` must equal `2^m`.
pub fn consistency_check(t: &TutteTable, g: &Multigraph) -> Result<ConsistencyReport> {
    if t.n != g.n() || t.m != g.m() {
        return Err(Error::Invalid("table does not match the graph's size".into()));
    }
    let mut tau = BigUint::one();
    for comp in g.connected_components() {
        tau *= g.induced_subgraph(comp).spanning_tree_count();
    }
    let coeff_sum: BigUint = t.coeffs.values().sum();
    let mut eval22 = BigUint::zero();
    for (&(i, j), c) in &t.coeffs {
        eval22 += c << (i + j);
    }
    let two_m = BigUint::one() << t.m;
    Ok(ConsistencyReport {
        sum_eq_tau: coeff_sum == tau,
        eval22_eq_2m: eval22 == two_m,
        tau,
        coeff_sum,
        eval22,
        two_m,
    })
}

/// Full pipeline: coefficient table of the coloring sum per connected
/// component, expansion into Tutte coefficients, product over components,
/// and a mandatory consistency check (failure is an internal error).
pub fn compute_tutte(g: &Multigraph, opts: &RunOptions) -> Result<TutteTable> {
    let components = g.connected_components();
    let mut tables = Vec::with_capacity(components.len());
    for comp in &components {
        let h = g.induced_subgraph(*comp);
        let z = z_coefficient_table(&h, opts)?;
        tables.push(assemble_tutte(&z, 1)?);
    }
    let t = combine_components(tables);
    let report = consistency_check(&t, g)?;
    if !report.sum_eq_tau {
        return Err(Error::Internal(format!(
            "T(1,1) = {} disagrees with the matrix-tree count {}",
            report.coeff_sum, report.tau
        )));
    }
    if !report.eval22_eq_2m {
        return Err(Error::Internal(format!(
            "T(2,2) = {} disagrees with 2^m = {}",
            report.eval22, report.two_m
        )));
    }
    Ok(t)
}

/// Ascending coefficients of the chromatic polynomial
/// `P(x) = (-1)^{n-c} x^c T(1-x, 0)`, length `n + 1`.
pub fn chromatic_polynomial(t: &TutteTable) -> Vec<BigInt> {
    let n = t.n;
    let c = t.components;
    let binom = binomial_table(n);
    let mut poly = vec![BigInt::zero(); n + 1];
    let sign = if (n - c) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    for (&(i, j), coeff) in &t.coeffs {
        if j != 0 {
            continue;
        }
        // (1-x)^i contributes binom(i, d) (-1)^d x^d; shift by x^c.
        for d in 0..=i {
            let term = BigInt::from(coeff.clone())
                * BigInt::from(binom[i][d].clone())
                * if d % 2 == 0 { 1 } else { -1 };
            poly[c + d] += &sign * term;
        }
    }
    poly
}

/// All-terminal reliability: the probability that every component stays
/// connected when each edge independently survives with probability `p`,
/// namely `p^{n-c} (1-p)^{m-n+c} T(1, 1/(1-p))` for `0 < p < 1`.
pub fn reliability(t: &TutteTable, p: &BigRational) -> Result<BigRational> {
    if !(p > &BigRational::zero() && p < &BigRational::one()) {
        return Err(Error::Invalid("edge survival probability must satisfy 0 < p < 1".into()));
    }
    let n = t.n;
    let m = t.m;
    let c = t.components;
    let q = BigRational::one() - p;
    let mut out = t.evaluate(&BigRational::one(), &q.recip());
    for _ in 0..n - c {
        out *= p;
    }
    for _ in 0..m - (n - c) {
        out *= &q;
    }
    Ok(out)
}
