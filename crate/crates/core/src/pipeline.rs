//! Exact coefficient tables of the coloring sum.
//!
//! The coloring sum of a multigraph is `Z(q, w) = sum_F q^{c(F)} w^{|F|}`
//! over edge subsets `F`, with `c(F)` the component count of the spanning
//! subgraph.  Its integer coefficient table `a[k][l] = #{F : c(F) = k,
//! |F| = l}` is recovered exactly by evaluating `Z` modulo several 62-bit
//! primes on the grid `q = 1..=n+1`, `w = 0..=m`, interpolating in both
//! variables, and Chinese-remaindering the results (every coefficient is
//! at most `2^m`, so a handful of primes suffices).  All evaluation
//! strategies plug into the same task grid and must agree bit for bit.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::connected::connected_potts_values;
use crate::graph::Multigraph;
use crate::modular::{
    choose_primes, crt_reconstruct, crt_reconstruct_signed, lagrange_interpolate, Fp, PrimeStream,
};
use crate::potts::{EdgeWeights, PottsInstance, Strategy};
use crate::recursion::s_values;
use crate::{Error, Result};

/// Evaluation strategy selection for the modular tasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Choose automatically from the memory budget (dense if it fits, then
    /// the widest affordable split, then direct).
    Auto,
    /// Zeta-transformed tables over all `2^n` subsets.
    Dense,
    /// Direct enumeration over `3^n` (subset, subset) pairs with constant
    /// ring storage.
    Direct,
    /// Dense tables over the `s` highest-numbered vertices, direct
    /// enumeration over the rest.
    Split(usize),
    /// Memoised recursion storing one table per connected vertex set.
    Connected,
    /// Component-count recursion; yields the polynomial in `q` directly.
    Recursion,
}

/// Knobs shared by every entry point that runs the modular task grid.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub algorithm: Algorithm,
    /// Worker threads for the task grid (results are independent of this).
    pub threads: usize,
    /// Hard cap, in bytes, on the algorithm working set.
    pub memory_budget: u64,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions { algorithm: Algorithm::Auto, threads: 1, memory_budget: 4 << 30 }
    }
}

/// The exact table `a[k][l] = #{F subset of E : c(F) = k, |F| = l}`, for
/// `k in 0..=n`, `l in 0..=m`.  Entries are nonnegative by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZCoefficients {
    n: usize,
    m: usize,
    a: Vec<Vec<BigUint>>,
}

impl ZCoefficients {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `a[k][l]`; panics outside `k <= n`, `l <= m`.
    pub fn a(&self, k: usize, l: usize) -> &BigUint {
        &self.a[k][l]
    }

    /// Structural sanity checks: the table sums to `2^m`, the only
    /// edgeless subgraph has `n` components, and the full edge set appears
    /// once with its true component count.  Violations are internal errors
    /// (the table must not be used).
    pub fn validate(&self, full_edge_components: usize) -> Result<()> {
        let total: BigUint = self.a.iter().flat_map(|row| row.iter()).sum();
        if total != BigUint::one() << self.m {
            return Err(Error::Internal(format!(
                "coefficient table sums to {total}, expected 2^{}",
                self.m
            )));
        }
        for k in 0..=self.n {
            let expect = if k == self.n { BigUint::one() } else { BigUint::zero() };
            if self.a[k][0] != expect {
                return Err(Error::Internal(format!(
                    "edgeless column is wrong at component count {k}"
                )));
            }
        }
        if self.a[full_edge_components][self.m] != BigUint::one() {
            return Err(Error::Internal(
                "full edge set does not appear exactly once at its component count".into(),
            ));
        }
        Ok(())
    }
}

/// Exact rational evaluation `Z(q, w) = sum a[k][l] q^k w^l`.
pub fn evaluate_z(z: &ZCoefficients, q: &BigRational, w: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for k in (0..=z.n).rev() {
        let mut row = BigRational::zero();
        for l in (0..=z.m).rev() {
            row = row * w + BigRational::from(BigInt::from(z.a[k][l].clone()));
        }
        total = total * q + row;
    }
    total
}

/// One concrete strategy after `Auto` resolution and budget checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Resolved {
    Dense,
    Direct,
    Split(usize),
    Connected,
    Recursion,
}

fn dense_bytes(n: usize, threads: usize) -> u128 {
    threads as u128 * (n as u128 + 2) * 8 * (1u128 << n)
}

fn split_bytes(n: usize, s: usize, threads: usize) -> u128 {
    threads as u128 * (n as u128 + 2) * 8 * (1u128 << s)
}

/// Count connected vertex sets by breadth-first growth, giving up once the
/// count exceeds `limit` (so the probe itself stays cheap and small).
fn connected_sets_within(g: &Multigraph, limit: u64) -> Option<u64> {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|v| g.adjacency_mask(v)).collect();
    let mut seen = std::collections::HashSet::new();
    let mut stack: Vec<u32> = Vec::new();
    for v in 0..n {
        seen.insert(1u32 << v);
        stack.push(1u32 << v);
    }
    while let Some(x) = stack.pop() {
        if seen.len() as u64 > limit {
            return None;
        }
        let mut boundary = 0u32;
        let mut rest = x;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            boundary |= adj[v];
        }
        boundary &= !x;
        while boundary != 0 {
            let u = boundary.trailing_zeros() as usize;
            boundary &= boundary - 1;
            let y = x | 1 << u;
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    if seen.len() as u64 > limit {
        None
    } else {
        Some(seen.len() as u64)
    }
}

fn resolve(g: &Multigraph, opts: &RunOptions) -> Result<Resolved> {
    let n = g.n();
    let threads = opts.threads.max(1);
    let budget = opts.memory_budget as u128;
    match opts.algorithm {
        Algorithm::Auto => {
            if dense_bytes(n, threads) <= budget {
                return Ok(Resolved::Dense);
            }
            for s in (1..n).rev() {
                if split_bytes(n, s, threads) <= budget {
                    return Ok(Resolved::Split(s));
                }
            }
            Ok(Resolved::Direct)
        }
        Algorithm::Dense => {
            if dense_bytes(n, threads) <= budget {
                Ok(Resolved::Dense)
            } else {
                Err(Error::Capacity(format!(
                    "dense tables need {} bytes, budget is {}",
                    dense_bytes(n, threads),
                    opts.memory_budget
                )))
            }
        }
        Algorithm::Direct => Ok(Resolved::Direct),
        Algorithm::Split(s) => {
            let s = s.min(n);
            if split_bytes(n, s, threads) <= budget {
                Ok(Resolved::Split(s))
            } else {
                Err(Error::Capacity(format!(
                    "split tables over {s} vertices need {} bytes, budget is {}",
                    split_bytes(n, s, threads),
                    opts.memory_budget
                )))
            }
        }
        Algorithm::Connected => {
            // One table of (n+1)^3 ring entries per connected set per
            // worker; probe the connected-set count only up to the point
            // where the budget is exceeded.
            let per_table = 8u128 * (n as u128 + 1).pow(3) * threads as u128;
            let limit = (budget / per_table.max(1)) as u64;
            match connected_sets_within(g, limit) {
                Some(_) => Ok(Resolved::Connected),
                None => Err(Error::Capacity(format!(
                    "more than {limit} connected sets at {per_table} bytes per set, budget is {}",
                    opts.memory_budget
                ))),
            }
        }
        Algorithm::Recursion => {
            if dense_bytes(n, threads) <= budget {
                Ok(Resolved::Recursion)
            } else {
                Err(Error::Capacity(format!(
                    "component-count tables need {} bytes, budget is {}",
                    dense_bytes(n, threads),
                    opts.memory_budget
                )))
            }
        }
    }
}

/// One modular task: the coefficients `b[k]` of `q^k` in `Z(q, w) mod p`
/// at one prime and one integer `w`.
fn task_coefficients(g: &Multigraph, alg: Resolved, p: u64, w: u64) -> Result<Vec<u64>> {
    let fp = Fp::new(p);
    let n = g.n();
    if alg == Resolved::Recursion {
        let factors = vec![fp.add(1, fp.reduce_u64(w)); g.m()];
        return Ok(s_values(g, &fp, &factors));
    }
    let qs: Vec<u64> = (1..=n as u64 + 1).collect();
    let values = match alg {
        Resolved::Dense => {
            PottsInstance::new(g, fp, EdgeWeights::Uniform(w), Strategy::Dense)?.potts_values(&qs)
        }
        Resolved::Direct => {
            PottsInstance::new(g, fp, EdgeWeights::Uniform(w), Strategy::Direct)?.potts_values(&qs)
        }
        Resolved::Split(s) => PottsInstance::new(g, fp, EdgeWeights::Uniform(w), Strategy::Split(s))?
            .potts_values(&qs),
        Resolved::Connected => {
            let inst = PottsInstance::new(g, fp, EdgeWeights::Uniform(w), Strategy::Direct)?;
            connected_potts_values(g, &fp, &inst.edge_factors(), &qs)
        }
        Resolved::Recursion => unreachable!(),
    };
    let b = lagrange_interpolate(&fp, &qs, &values);
    if b[0] != 0 {
        return Err(Error::Internal(
            "coloring sum has a nonzero constant term in the spin count".into(),
        ));
    }
    Ok(b)
}

/// Run the `(prime, w)` grid, possibly on several workers.  Results are
/// slotted by task index, so the output is independent of scheduling.
fn run_tasks(
    g: &Multigraph,
    alg: Resolved,
    tasks: &[(u64, u64)],
    threads: usize,
) -> Result<Vec<Vec<u64>>> {
    if threads <= 1 || tasks.len() <= 1 {
        return tasks.iter().map(|&(p, w)| task_coefficients(g, alg, p, w)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Vec<u64>>>>> =
        Mutex::new((0..tasks.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..threads.min(tasks.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let (p, w) = tasks[i];
                let result = task_coefficients(g, alg, p, w);
                slots.lock().unwrap()[i] = Some(result);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("worker skipped a task"))
        .collect()
}

/// Compute the exact coefficient table of the coloring sum.
///
/// Works for any multigraph (loops and parallel edges included; the graph
/// need not be connected).  Fails with a capacity error if the requested
/// strategy does not fit the memory budget, and with an internal error if
/// any structural cross-check fails.
pub fn z_coefficient_table(g: &Multigraph, opts: &RunOptions) -> Result<ZCoefficients> {
    let n = g.n();
    let m = g.m();
    let alg = resolve(g, opts)?;
    let bound = BigUint::one() << m;
    let node_max = (n as u64 + 1).max(m as u64);
    let primes = choose_primes(&bound, node_max);
    let mut tasks = Vec::with_capacity(primes.len() * (m + 1));
    for &p in &primes {
        for w in 0..=m as u64 {
            tasks.push((p, w));
        }
    }
    let results = run_tasks(g, alg, &tasks, opts.threads.max(1))?;

    let mut residues: Vec<Vec<Vec<(u64, u64)>>> = vec![vec![Vec::new(); m + 1]; n + 1];
    let w_nodes: Vec<u64> = (0..=m as u64).collect();
    for (pi, &p) in primes.iter().enumerate() {
        let fp = Fp::new(p);
        for k in 0..=n {
            let values: Vec<u64> = (0..=m).map(|wi| results[pi * (m + 1) + wi][k]).collect();
            let coeffs = lagrange_interpolate(&fp, &w_nodes, &values);
            for l in 0..=m {
                residues[k][l].push((p, coeffs[l]));
            }
        }
    }
    let a: Vec<Vec<BigUint>> = residues
        .into_iter()
        .map(|row| row.into_iter().map(|cell| crt_reconstruct(&cell)).collect())
        .collect();
    let z = ZCoefficients { n, m, a };
    z.validate(g.connected_components().len())?;
    Ok(z)
}

/// Exact value of `Z(q, r)` at an integer spin count `q >= 1` and
/// arbitrary per-edge rational weights, by modular evaluation at enough
/// primes and signed Chinese remaindering (no coefficient table is
/// built, so `q` may be arbitrarily large).
pub fn evaluate_z_with_weights(
    g: &Multigraph,
    q: u64,
    weights: &[BigRational],
    opts: &RunOptions,
) -> Result<BigRational> {
    if q < 1 {
        return Err(Error::Invalid("spin count must be at least 1".into()));
    }
    if weights.len() != g.m() {
        return Err(Error::Invalid(format!(
            "expected {} edge weights, got {}",
            g.m(),
            weights.len()
        )));
    }
    let n = g.n();
    let alg = resolve(g, opts)?;

    // Clear denominators: with D the product of the weight denominators,
    // D * Z is an integer of magnitude at most q^n * prod(|num_e| + den_e).
    let mut denom = BigUint::one();
    let mut magnitude = BigUint::from(q).pow(n as u32);
    for w in weights {
        denom *= w.denom().magnitude();
        magnitude *= w.numer().magnitude() + w.denom().magnitude();
    }
    let signed_bound = magnitude << 1;

    let node_max = (n as u64 + 1).max(g.m() as u64);
    let mut residues: Vec<(u64, u64)> = Vec::new();
    let mut product = BigUint::one();
    for p in PrimeStream::descending(node_max) {
        let fp = Fp::new(p);
        // A prime dividing some denominator cannot represent the weights.
        if weights.iter().any(|w| fp.reduce_bigint(w.denom()) == 0) {
            continue;
        }
        let r_mod: Vec<u64> = weights
            .iter()
            .map(|w| fp.mul(fp.reduce_bigint(w.numer()), fp.inv(fp.reduce_bigint(w.denom()))))
            .collect();
        let value = match alg {
            Resolved::Dense => PottsInstance::new(g, fp, EdgeWeights::PerEdge(r_mod), Strategy::Dense)?
                .potts_values(&[q])[0],
            Resolved::Direct => {
                PottsInstance::new(g, fp, EdgeWeights::PerEdge(r_mod), Strategy::Direct)?
                    .potts_values(&[q])[0]
            }
            Resolved::Split(s) => {
                PottsInstance::new(g, fp, EdgeWeights::PerEdge(r_mod), Strategy::Split(s))?
                    .potts_values(&[q])[0]
            }
            Resolved::Connected => {
                let inst =
                    PottsInstance::new(g, fp, EdgeWeights::PerEdge(r_mod), Strategy::Direct)?;
                connected_potts_values(g, &fp, &inst.edge_factors(), &[q])[0]
            }
            Resolved::Recursion => {
                let factors: Vec<u64> = r_mod.iter().map(|&r| fp.add(1, r)).collect();
                let b = s_values(g, &fp, &factors);
                let qm = fp.reduce_u64(q);
                let mut qpow = 1u64;
                let mut total = 0u64;
                for &bk in &b[1..] {
                    qpow = fp.mul(qpow, qm);
                    total = fp.add(total, fp.mul(qpow, bk));
                }
                total
            }
        };
        let d_mod = fp.reduce_bigint(&BigInt::from(denom.clone()));
        residues.push((p, fp.mul(value, d_mod)));
        product *= p;
        if product > signed_bound {
            break;
        }
    }
    let dz = crt_reconstruct_signed(&residues);
    Ok(BigRational::new(dz, BigInt::from(denom)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn table(g: &Multigraph, alg: Algorithm) -> ZCoefficients {
        let opts = RunOptions { algorithm: alg, ..RunOptions::default() };
        z_coefficient_table(g, &opts).unwrap()
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn single_vertex_table() {
        let g = Multigraph::new(1, &[]).unwrap();
        let z = table(&g, Algorithm::Auto);
        assert_eq!(z.a(1, 0), &BigUint::one());
        assert_eq!(z.a(0, 0), &BigUint::zero());
    }

    #[test]
    fn single_edge_table() {
        let g = Multigraph::complete(2);
        let z = table(&g, Algorithm::Auto);
        assert_eq!(z.a(2, 0), &BigUint::one());
        assert_eq!(z.a(1, 1), &BigUint::one());
        assert_eq!(z.a(2, 1), &BigUint::zero());
        assert_eq!(z.a(1, 0), &BigUint::zero());
    }

    #[test]
    fn triangle_table() {
        let g = Multigraph::complete(3);
        let z = table(&g, Algorithm::Auto);
        let one = BigUint::one();
        assert_eq!(z.a(3, 0), &one);
        assert_eq!(z.a(2, 1), &BigUint::from(3u32));
        assert_eq!(z.a(1, 2), &BigUint::from(3u32));
        assert_eq!(z.a(1, 3), &one);
        // Everything else is zero.
        let named = [(3, 0), (2, 1), (1, 2), (1, 3)];
        for k in 0..=3 {
            for l in 0..=3 {
                if !named.contains(&(k, l)) {
                    assert_eq!(z.a(k, l), &BigUint::zero(), "k = {k}, l = {l}");
                }
            }
        }
    }

    #[test]
    fn loops_only_scale_the_edge_count() {
        // One vertex, two loops: every subset keeps one component.
        let g = Multigraph::new(1, &[(1, 1), (1, 1)]).unwrap();
        let z = table(&g, Algorithm::Auto);
        assert_eq!(z.a(1, 0), &BigUint::one());
        assert_eq!(z.a(1, 1), &BigUint::from(2u32));
        assert_eq!(z.a(1, 2), &BigUint::one());
    }

    #[test]
    fn disconnected_graph_is_supported() {
        let g = Multigraph::new(3, &[(1, 2)]).unwrap();
        let z = table(&g, Algorithm::Auto);
        assert_eq!(z.a(3, 0), &BigUint::one());
        assert_eq!(z.a(2, 1), &BigUint::one());
    }

    #[test]
    fn all_strategies_produce_identical_tables() {
        let graphs = [
            Multigraph::cycle(5),
            Multigraph::complete(4),
            Multigraph::new(5, &[(1, 2), (1, 2), (2, 3), (3, 3), (4, 5), (1, 4)]).unwrap(),
        ];
        for g in &graphs {
            let reference = table(g, Algorithm::Dense);
            for alg in [
                Algorithm::Direct,
                Algorithm::Split(0),
                Algorithm::Split(2),
                Algorithm::Split(g.n()),
                Algorithm::Connected,
                Algorithm::Recursion,
            ] {
                assert_eq!(table(g, alg), reference, "algorithm {alg:?}");
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_the_table() {
        let g = Multigraph::complete(4);
        let opts1 = RunOptions { threads: 1, ..RunOptions::default() };
        let opts3 = RunOptions { threads: 3, ..RunOptions::default() };
        assert_eq!(
            z_coefficient_table(&g, &opts1).unwrap(),
            z_coefficient_table(&g, &opts3).unwrap()
        );
    }

    #[test]
    fn evaluation_matches_spin_counting() {
        // Z(2, 1) of the triangle is the 2-state sum with weight 1: 28.
        let g = Multigraph::complete(3);
        let z = table(&g, Algorithm::Auto);
        let v = evaluate_z(&z, &rational(2, 1), &rational(1, 1));
        assert_eq!(v, BigRational::from_i64(28).unwrap());
    }

    #[test]
    fn explicit_strategy_over_budget_is_a_capacity_error() {
        let g = Multigraph::complete(4);
        for alg in [Algorithm::Dense, Algorithm::Split(3), Algorithm::Connected, Algorithm::Recursion]
        {
            let opts = RunOptions { algorithm: alg, memory_budget: 16, ..RunOptions::default() };
            match z_coefficient_table(&g, &opts) {
                Err(Error::Capacity(_)) => {}
                other => panic!("expected capacity error for {alg:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn auto_falls_back_under_tight_budgets_and_stays_correct() {
        let g = Multigraph::complete(4);
        let reference = table(&g, Algorithm::Dense);
        for budget in [1u64, 4096] {
            let opts = RunOptions { memory_budget: budget, ..RunOptions::default() };
            assert_eq!(z_coefficient_table(&g, &opts).unwrap(), reference, "budget {budget}");
        }
    }

    #[test]
    fn weighted_evaluation_matches_bigrational_bruteforce() {
        fn components(g: &Multigraph, f_mask: u32) -> usize {
            let mut parent: Vec<usize> = (0..g.n()).collect();
            fn find(p: &mut Vec<usize>, mut a: usize) -> usize {
                while p[a] != a {
                    p[a] = p[p[a]];
                    a = p[a];
                }
                a
            }
            for (i, &(a, b)) in g.edges().iter().enumerate() {
                if f_mask >> i & 1 == 1 {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
            (0..g.n()).filter(|&v| find(&mut parent, v) == v).count()
        }

        let g = Multigraph::new(4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 2)]).unwrap();
        let weights = vec![
            rational(1, 2),
            rational(-3, 1),
            rational(5, 7),
            rational(0, 1),
            rational(2, 3),
            rational(-1, 5),
        ];
        for q in [1u64, 2, 7, 1_000_003] {
            let mut brute = BigRational::zero();
            for f in 0u32..1 << g.m() {
                let mut term = BigRational::from_integer(BigInt::from(q).pow(
                    components(&g, f) as u32,
                ));
                for (i, w) in weights.iter().enumerate() {
                    if f >> i & 1 == 1 {
                        term *= w;
                    }
                }
                brute += term;
            }
            for alg in [Algorithm::Dense, Algorithm::Direct, Algorithm::Connected, Algorithm::Recursion]
            {
                let opts = RunOptions { algorithm: alg, ..RunOptions::default() };
                let got = evaluate_z_with_weights(&g, q, &weights, &opts).unwrap();
                assert_eq!(got, brute, "q = {q}, algorithm {alg:?}");
            }
        }
    }

    #[test]
    fn validation_catches_a_corrupted_table() {
        let g = Multigraph::complete(3);
        let mut z = table(&g, Algorithm::Auto);
        z.a[1][2] += 1u32;
        match z.validate(1) {
            Err(Error::Internal(_)) => {}
            other => panic!("expected internal error, got {other:?}"),
        }
    }
}
