//! Prime-field scalars, truncated polynomials in the auxiliary variable
//! `z`, Lagrange interpolation, prime selection, and Chinese remaindering.
//!
//! All pipeline arithmetic runs over `Z_p` for odd primes `p < 2^62`.  The
//! 62-bit bound leaves two spare bits so that sums of `a * b` products can
//! be accumulated lazily in a `u128` with only occasional reductions, which
//! is what keeps the truncated-polynomial multiplication kernels fast.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

/// Largest allowed modulus (exclusive): primes must fit in 62 bits.
pub const PRIME_CEILING: u64 = 1 << 62;

/// When a lazy `u128` accumulator reaches this threshold it is reduced; the
/// next added product (< 2^124) then cannot overflow 128 bits.
const LAZY_REDUCE_AT: u128 = 1 << 126;

/// A prime field `Z_p` with `p` an odd prime below `2^62`.
///
/// Elements are plain `u64` values in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Wrap a modulus.  The caller is responsible for primality (use
    /// [`choose_primes`] or [`is_prime_u64`]); oddness and the size bound
    /// are enforced here.
    pub fn new(p: u64) -> Fp {
        assert!(p >= 3 && p % 2 == 1 && p < PRIME_CEILING, "modulus out of range: {p}");
        Fp { p }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce an arbitrary u64 (used on parsed inputs, not in hot loops).
    #[inline]
    pub fn reduce_u64(&self, x: u64) -> u64 {
        x % self.p
    }

    /// Canonical residue of a possibly negative big integer.
    pub fn reduce_bigint(&self, x: &BigInt) -> u64 {
        use num_traits::Signed;
        let p = BigInt::from(self.p);
        let mut r = x % &p;
        if r.is_negative() {
            r += &p;
        }
        let digits = r.to_biguint().expect("nonnegative").to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b; // both < 2^62, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem; `a` must be
    /// nonzero mod p.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }
}

/// A polynomial in `z` truncated beyond degree `cap`; `coeffs[d]` is the
/// coefficient of `z^d`, reduced mod the ambient prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    pub coeffs: Vec<u64>,
}

impl ZPoly {
    pub fn zero(cap: usize) -> ZPoly {
        ZPoly { coeffs: vec![0; cap + 1] }
    }

    pub fn one(cap: usize) -> ZPoly {
        let mut p = ZPoly::zero(cap);
        p.coeffs[0] = 1;
        p
    }

    /// `value * z^degree`; degrees beyond the cap truncate to zero.
    pub fn monomial(cap: usize, value: u64, degree: usize) -> ZPoly {
        let mut p = ZPoly::zero(cap);
        if degree <= cap {
            p.coeffs[degree] = value;
        }
        p
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `dst += src` coefficient-wise.  Slices must have equal length.
#[inline]
pub fn zp_add_assign(fp: &Fp, dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len(), "cap mismatch");
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = fp.add(*d, s);
    }
}

/// `dst -= src` coefficient-wise.
#[inline]
pub fn zp_sub_assign(fp: &Fp, dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len(), "cap mismatch");
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = fp.sub(*d, s);
    }
}

/// Truncated product `out = a * b` (all three the same length = cap + 1).
/// Schoolbook with lazy `u128` accumulation; the truncation keeps the caps
/// small enough that no FFT is ever warranted.
pub fn zp_mul(fp: &Fp, a: &[u64], b: &[u64], out: &mut [u64]) {
    debug_assert_eq!(a.len(), b.len(), "cap mismatch");
    debug_assert_eq!(a.len(), out.len(), "cap mismatch");
    let p = fp.p() as u128;
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc: u128 = 0;
        for i in 0..=k {
            acc += a[i] as u128 * b[k - i] as u128;
            if acc >= LAZY_REDUCE_AT {
                acc %= p;
            }
        }
        *o = (acc % p) as u64;
    }
}

/// In-place truncated product `acc *= b`, using `scratch` as workspace.
pub fn zp_mul_assign(fp: &Fp, acc: &mut [u64], b: &[u64], scratch: &mut [u64]) {
    zp_mul(fp, acc, b, scratch);
    acc.copy_from_slice(scratch);
}

/// Truncated power `base^exp` by binary exponentiation.
pub fn zp_pow(fp: &Fp, base: &[u64], exp: u64) -> ZPoly {
    zp_pow_counted(fp, base, exp).0
}

/// As [`zp_pow`], also returning the number of ring multiplications used.
pub fn zp_pow_counted(fp: &Fp, base: &[u64], exp: u64) -> (ZPoly, u64) {
    let cap = base.len() - 1;
    let mut result = ZPoly::one(cap);
    let mut muls = 0u64;
    if exp == 0 {
        return (result, muls);
    }
    if exp == 1 {
        result.coeffs.copy_from_slice(base);
        return (result, muls);
    }
    let mut scratch = vec![0u64; cap + 1];
    let mut sq = base.to_vec();
    let mut e = exp;
    loop {
        if e & 1 == 1 {
            zp_mul_assign(fp, &mut result.coeffs, &sq, &mut scratch);
            muls += 1;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        let tmp = sq.clone();
        zp_mul(fp, &tmp, &tmp, &mut sq);
        muls += 1;
    }
    (result, muls)
}

/// Visit `base^q` for every exponent `q` in the strictly ascending list
/// `qs` (each ≥ 1), reusing the previous power so a contiguous run such as
/// `1..=n+1` costs one multiplication per step.  Returns the number of
/// ring multiplications performed.
pub fn zp_pow_ascending(
    fp: &Fp,
    base: &[u64],
    qs: &[u64],
    mut visit: impl FnMut(usize, &[u64]),
) -> u64 {
    let mut muls = 0u64;
    let mut scratch = vec![0u64; base.len()];
    let mut cur: Vec<u64> = Vec::new();
    let mut prev = 0u64;
    for (idx, &q) in qs.iter().enumerate() {
        debug_assert!(q > prev, "exponents must be ascending and nonzero");
        if idx == 0 {
            let (p, c) = zp_pow_counted(fp, base, q);
            cur = p.coeffs;
            muls += c;
        } else if q - prev == 1 {
            zp_mul_assign(fp, &mut cur, base, &mut scratch);
            muls += 1;
        } else {
            let (p, c) = zp_pow_counted(fp, base, q - prev);
            zp_mul_assign(fp, &mut cur, &p.coeffs, &mut scratch);
            muls += c + 1;
        }
        visit(idx, &cur);
        prev = q;
    }
    muls
}

/// Deterministic Miller–Rabin, exact for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    // This witness set is deterministic for all 64-bit integers.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Iterator over primes strictly below `2^62`, descending, skipping any
/// prime `<= node_max` (so every yielded prime exceeds all interpolation
/// nodes in use).
pub struct PrimeStream {
    candidate: u64,
    node_max: u64,
}

impl PrimeStream {
    pub fn descending(node_max: u64) -> PrimeStream {
        PrimeStream { candidate: PRIME_CEILING - 1, node_max }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.candidate > self.node_max && self.candidate > 2 {
            let c = self.candidate;
            self.candidate -= 2; // stay on odd numbers
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Choose successive primes descending from `2^62`, each greater than
/// `node_max`, until their product strictly exceeds `coeff_bound`.
/// Deterministic: the same inputs always select the same primes.
pub fn choose_primes(coeff_bound: &BigUint, node_max: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut product = BigUint::one();
    for p in PrimeStream::descending(node_max) {
        primes.push(p);
        product *= p;
        if product > *coeff_bound {
            return primes;
        }
    }
    unreachable!("prime supply below 2^62 exhausted");
}

/// Coefficients (degree ascending) of the unique polynomial of degree
/// `< nodes.len()` through the points `(nodes[i], values[i])`, mod p.
/// Nodes must be distinct residues.
pub fn lagrange_interpolate(fp: &Fp, nodes: &[u64], values: &[u64]) -> Vec<u64> {
    let k = nodes.len();
    assert_eq!(k, values.len(), "node/value length mismatch");
    assert!(k > 0, "need at least one node");
    // Master polynomial M(x) = prod (x - x_i), degree k.
    let mut master = vec![0u64; k + 1];
    master[0] = 1;
    let mut deg = 0usize;
    for &x in nodes {
        let neg = fp.neg(fp.reduce_u64(x));
        // multiply by (x - x_i)
        master[deg + 1] = master[deg];
        for j in (1..=deg).rev() {
            master[j] = fp.add(fp.mul(master[j], neg), master[j - 1]);
        }
        master[0] = fp.mul(master[0], neg);
        deg += 1;
    }
    let mut out = vec![0u64; k];
    let mut quotient = vec![0u64; k];
    for i in 0..k {
        let xi = fp.reduce_u64(nodes[i]);
        // Synthetic division: quotient = M / (x - x_i), degree k - 1.
        let mut carry = master[k];
        for j in (0..k).rev() {
            quotient[j] = carry;
            carry = fp.add(master[j], fp.mul(carry, xi));
        }
        debug_assert_eq!(carry, 0, "node is not a root of the master polynomial");
        // Denominator = quotient evaluated at x_i (equals prod_{j!=i}(x_i - x_j)).
        let mut denom = 0u64;
        for j in (0..k).rev() {
            denom = fp.add(fp.mul(denom, xi), quotient[j]);
        }
        let scale = fp.mul(fp.reduce_u64(values[i]), fp.inv(denom));
        for j in 0..k {
            out[j] = fp.add(out[j], fp.mul(scale, quotient[j]));
        }
    }
    out
}

/// Reconstruct the unique `x` in `[0, prod p_i)` with `x = r_i (mod p_i)`
/// from pairwise distinct primes.
pub fn crt_reconstruct(residues: &[(u64, u64)]) -> BigUint {
    let mut x = BigUint::from(0u32);
    let mut modulus = BigUint::one();
    for &(p, r) in residues {
        let fp = Fp::new(p);
        let x_mod = (&x % p).to_u64_digits().first().copied().unwrap_or(0);
        let m_mod = (&modulus % p).to_u64_digits().first().copied().unwrap_or(0);
        let diff = fp.sub(fp.reduce_u64(r), x_mod);
        let t = fp.mul(diff, fp.inv(m_mod));
        x += &modulus * t;
        modulus *= p;
    }
    x
}

/// Reconstruct a signed value `x` with `|x| < prod(p_i) / 2` from its
/// residues: the representative in `(-M/2, M/2]`.
pub fn crt_reconstruct_signed(residues: &[(u64, u64)]) -> BigInt {
    let x = crt_reconstruct(residues);
    let mut modulus = BigUint::one();
    for &(p, _) in residues {
        modulus *= p;
    }
    if &x * 2u32 > modulus {
        BigInt::from(x) - BigInt::from(modulus)
    } else {
        BigInt::from(x)
    }
}

/// Pascal's triangle of exact binomial coefficients, rows `0..=max_n`.
pub fn binomial_table(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut row = vec![BigUint::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Pascal's triangle mod p, rows `0..=max_n`.
pub fn binomial_table_mod(fp: &Fp, max_n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut row = vec![1u64; n + 1];
        for k in 1..n {
            row[k] = fp.add(rows[n - 1][k - 1], rows[n - 1][k]);
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u64 = (1 << 62) - 57; // prime

    #[test]
    fn field_basics() {
        let fp = Fp::new(P);
        assert_eq!(fp.add(P - 1, 1), 0);
        assert_eq!(fp.sub(0, 1), P - 1);
        assert_eq!(fp.mul(P - 1, P - 1), 1); // (-1)^2
        assert_eq!(fp.pow(3, 0), 1);
        let a = 123456789123456789u64 % P;
        assert_eq!(fp.mul(a, fp.inv(a)), 1);
    }

    #[test]
    fn prime_ceiling_anchor() {
        // The descending stream must start at the largest prime below 2^62.
        let first = PrimeStream::descending(0).next().unwrap();
        assert!(is_prime_u64(first));
        assert!(first < PRIME_CEILING);
        // No prime may exist between it and the ceiling (first is odd).
        for candidate in (first + 2..PRIME_CEILING).step_by(2) {
            assert!(!is_prime_u64(candidate));
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        let trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        for n in 0..2000 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn choose_primes_counts() {
        use num_bigint::BigUint;
        // Bound below one prime: a single prime suffices.
        let primes = choose_primes(&BigUint::from(1u32), 10);
        assert_eq!(primes.len(), 1);
        // tau(K22) = 22^20 needs two 62-bit primes.
        let tau_k22: BigUint = "705429498686404044207947776".parse().unwrap();
        let primes = choose_primes(&tau_k22, 232);
        assert_eq!(primes.len(), 2);
        // 2^300 needs five.
        let primes = choose_primes(&(BigUint::from(1u32) << 300), 2);
        assert_eq!(primes.len(), 5);
        // Determinism.
        assert_eq!(primes, choose_primes(&(BigUint::from(1u32) << 300), 2));
    }

    #[test]
    fn zpoly_mul_truncates() {
        let fp = Fp::new(P);
        // (1 + z)^2 truncated at cap 1 = 1 + 2z.
        let a = ZPoly { coeffs: vec![1, 1] };
        let mut out = vec![0u64; 2];
        zp_mul(&fp, &a.coeffs, &a.coeffs, &mut out);
        assert_eq!(out, vec![1, 2]);
    }

    #[test]
    fn zpoly_example_cover_power_shape() {
        // (1 + 2z + z^2)^2 - 2 (1 + z)^2 + 1 with cap 4 = 4z^2 + 4z^3 + z^4.
        let fp = Fp::new(P);
        let cap = 4;
        let a = ZPoly { coeffs: vec![1, 2, 1, 0, 0] };
        let b = ZPoly { coeffs: vec![1, 1, 0, 0, 0] };
        let mut sq_a = vec![0u64; cap + 1];
        zp_mul(&fp, &a.coeffs, &a.coeffs, &mut sq_a);
        let mut sq_b = vec![0u64; cap + 1];
        zp_mul(&fp, &b.coeffs, &b.coeffs, &mut sq_b);
        let mut total = sq_a;
        for _ in 0..2 {
            zp_sub_assign(&fp, &mut total, &sq_b);
        }
        let one = ZPoly::one(cap);
        zp_add_assign(&fp, &mut total, &one.coeffs);
        assert_eq!(total, vec![0, 0, 4, 4, 1]);
    }

    #[test]
    fn lagrange_fixture() {
        let fp = Fp::new(P);
        let coeffs = lagrange_interpolate(&fp, &[0, 1, 2], &[4, 6, 12]);
        assert_eq!(coeffs, vec![4, 0, 2]);
    }

    #[test]
    fn crt_fixture() {
        let x = crt_reconstruct(&[(5, 1), (7, 2)]);
        assert_eq!(x, BigUint::from(16u32));
    }

    #[test]
    fn crt_signed_recovers_negatives() {
        let primes = [(1009u64, 1009 - 5), (1013u64, 1013 - 5)];
        assert_eq!(crt_reconstruct_signed(&primes), BigInt::from(-5));
        let primes = [(1009u64, 5), (1013u64, 5)];
        assert_eq!(crt_reconstruct_signed(&primes), BigInt::from(5));
    }

    #[test]
    fn binomial_tables_agree() {
        let fp = Fp::new(1009);
        let exact = binomial_table(12);
        let modular = binomial_table_mod(&fp, 12);
        for n in 0..=12 {
            for k in 0..=n {
                assert_eq!((&exact[n][k] % 1009u32).to_u64_digits().first().copied().unwrap_or(0), modular[n][k]);
            }
        }
    }

    #[test]
    fn pow_ascending_matches_individual_powers() {
        let fp = Fp::new(P);
        let base = [3u64, 1, 4, 1, 5];
        for qs in [vec![1u64, 2, 3, 4, 5], vec![2, 7], vec![6], vec![1, 10]] {
            let mut seen = Vec::new();
            zp_pow_ascending(&fp, &base, &qs, |idx, pw| {
                assert_eq!(idx, seen.len());
                seen.push(pw.to_vec());
            });
            for (i, &q) in qs.iter().enumerate() {
                assert_eq!(seen[i], zp_pow(&fp, &base, q).coeffs, "q = {q}");
            }
        }
    }

    #[test]
    fn pow_ascending_contiguous_run_is_one_mul_per_step() {
        let fp = Fp::new(P);
        let base = [2u64, 3, 5];
        let qs: Vec<u64> = (1..=9).collect();
        let muls = zp_pow_ascending(&fp, &base, &qs, |_, _| {});
        assert_eq!(muls, 8);
    }

    proptest! {
        #[test]
        fn prop_pow_matches_repeated_mul(coeffs in proptest::collection::vec(0u64..1_000_000, 4), exp in 0u64..6) {
            let fp = Fp::new(P);
            let base: Vec<u64> = coeffs;
            let (fast, _) = zp_pow_counted(&fp, &base, exp);
            let mut slow = ZPoly::one(base.len() - 1);
            let mut scratch = vec![0u64; base.len()];
            for _ in 0..exp {
                zp_mul_assign(&fp, &mut slow.coeffs, &base, &mut scratch);
            }
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn prop_lagrange_roundtrip(values in proptest::collection::vec(0u64..1_000_000, 1..8)) {
            let fp = Fp::new(P);
            let nodes: Vec<u64> = (0..values.len() as u64).collect();
            let coeffs = lagrange_interpolate(&fp, &nodes, &values);
            // Evaluate back at each node.
            for (i, &node) in nodes.iter().enumerate() {
                let mut acc = 0u64;
                for &c in coeffs.iter().rev() {
                    acc = fp.add(fp.mul(acc, node), c);
                }
                prop_assert_eq!(acc, values[i]);
            }
        }

        #[test]
        fn prop_crt_roundtrip(value in 0u64..u64::MAX) {
            let p1 = 4611686018427387847u64; // prime below 2^62
            let p2 = 4611686018427387817u64; // next prime down
            assert!(is_prime_u64(p1) && is_prime_u64(p2));
            let x = crt_reconstruct(&[(p1, value % p1), (p2, value % p2)]);
            prop_assert_eq!(x, BigUint::from(value));
        }
    }
}
