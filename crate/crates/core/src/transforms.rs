//! Zeta and Moebius transforms over the subset lattice, and the
//! disjoint-cover power built from them.
//!
//! The disjoint-cover power of a set function `f` (pre-weighted with a
//! `z^{|X|}` factor so that overlaps overshoot the tracked degree) is
//!
//! ```text
//! ((f zeta)^q mu)(V) = sum over q-tuples (U_1..U_q), union = V, of prod f(U_j)
//! ```
//!
//! restricted to the coefficient of `z^n`, which forces the `U_j` to be
//! pairwise disjoint.  Three evaluation routes are provided: dense tables
//! (`exact_cover_power`), and a space/time tradeoff (`split_eval`) that
//! keeps dense tables only over the `s` highest-labelled vertices.

use crate::modular::{zp_add_assign, zp_pow_ascending, zp_pow_counted, Fp, ZPoly};

/// Counters for ring-level work: one unit per ring addition/subtraction or
/// multiplication on truncated polynomials.
///
/// `direct_adds` is the portion of `adds` spent enumerating subsets in a
/// direct-summation phase (the `3^{n-s} 2^s` term of the split
/// evaluator); it isolates the space/time-tradeoff work from transform
/// and powering work whose cost does not depend on the split size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub adds: u64,
    pub muls: u64,
    pub direct_adds: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.adds + self.muls
    }
}

impl std::ops::AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        self.adds += rhs.adds;
        self.muls += rhs.muls;
        self.direct_adds += rhs.direct_adds;
    }
}

/// A function from subsets of an `n`-element ground set into the truncated
/// polynomial ring, stored as a dense `2^n`-row table.  `stride` is the
/// number of coefficients per ring element (`cap + 1`; 1 for scalars).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFunction {
    n: usize,
    stride: usize,
    data: Vec<u64>,
}

impl LatticeFunction {
    pub fn zeros(n: usize, stride: usize) -> LatticeFunction {
        assert!(stride >= 1);
        LatticeFunction { n, stride, data: vec![0u64; stride << n] }
    }

    /// Build by filling each row from a closure (rows arrive zeroed).
    pub fn from_fn(n: usize, stride: usize, mut fill: impl FnMut(u32, &mut [u64])) -> LatticeFunction {
        let mut f = LatticeFunction::zeros(n, stride);
        for mask in 0..1u32 << n {
            let row = f.row_mut(mask);
            fill(mask, row);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn row(&self, mask: u32) -> &[u64] {
        let s = self.stride;
        &self.data[mask as usize * s..(mask as usize + 1) * s]
    }

    pub fn row_mut(&mut self, mask: u32) -> &mut [u64] {
        let s = self.stride;
        &mut self.data[mask as usize * s..(mask as usize + 1) * s]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    /// In-place fast zeta transform: afterwards row(Y) = sum_{X subset Y}
    /// of the old row(X).  One coordinate sweep per ground element,
    /// `n * 2^(n-1)` ring additions in total.
    pub fn fast_zeta(&mut self, fp: &Fp) -> OpCount {
        self.sweep(fp, false)
    }

    /// In-place fast Moebius transform, the inverse of [`fast_zeta`]:
    /// afterwards row(X) = sum_{Y subset X} (-1)^{|X \ Y|} old row(Y).
    pub fn fast_moebius(&mut self, fp: &Fp) -> OpCount {
        self.sweep(fp, true)
    }

    fn sweep(&mut self, fp: &Fp, subtract: bool) -> OpCount {
        let stride = self.stride;
        let size = 1usize << self.n;
        let mut count = OpCount::default();
        for i in 0..self.n {
            let bit = 1usize << i;
            for mask in 0..size {
                if mask & bit != 0 {
                    let (lo, hi) = self.data.split_at_mut(mask * stride);
                    let src = &lo[(mask ^ bit) * stride..][..stride];
                    let dst = &mut hi[..stride];
                    if subtract {
                        for (d, &s) in dst.iter_mut().zip(src) {
                            *d = fp.sub(*d, s);
                        }
                    } else {
                        for (d, &s) in dst.iter_mut().zip(src) {
                            *d = fp.add(*d, s);
                        }
                    }
                    count.adds += 1;
                }
            }
        }
        count
    }
}

/// The disjoint-cover power `((f zeta)^q mu)(V)` as a full truncated
/// polynomial, from a dense table of `f` (each row already carrying its
/// `z^{|X|}` weight).  Runs one zeta transform, then accumulates the signed
/// sum of `q`-th powers over all subsets (the Moebius transform is only
/// needed at the full set, where it degenerates to this signed sum).
pub fn exact_cover_power(f: &LatticeFunction, fp: &Fp, q: u64) -> ZPoly {
    let n = f.n();
    let stride = f.stride();
    let mut zeta = f.clone();
    zeta.fast_zeta(fp);
    let mut acc_pos = vec![0u64; stride];
    let mut acc_neg = vec![0u64; stride];
    for mask in 0..1u32 << n {
        let (pw, _) = zp_pow_counted(fp, zeta.row(mask), q);
        let target = if (n - mask.count_ones() as usize) % 2 == 0 {
            &mut acc_pos
        } else {
            &mut acc_neg
        };
        zp_add_assign(fp, target, &pw.coeffs);
    }
    let mut out = ZPoly { coeffs: acc_pos };
    crate::modular::zp_sub_assign(fp, &mut out.coeffs, &acc_neg);
    out
}

/// The same value as [`exact_cover_power`], computed with dense tables only
/// over the `s` highest-labelled vertices;
/// `f` is an implicit evaluator returning the ring element of a subset
/// (with its `z^{|X|}` weight included) so no `2^n` table is ever held.
///
/// For each of the `2^(n-s)` subsets `Y1` of the low block, the inner table
/// over the high block is rebuilt by direct summation and zeta-transformed
/// on the high coordinates, and the doubly-signed accumulation adds one
/// `q`-th power per `(Y1, Y2)` pair.  Ring operations total
/// `(3^(n-s) + 2^(n-s) * s) * 2^s` plus the powering work, matching the
/// predicted time/space tradeoff; the returned [`OpCount`] reports them.
pub fn split_eval(
    n: usize,
    cap: usize,
    f: &dyn Fn(u32) -> ZPoly,
    fp: &Fp,
    q: u64,
    s: usize,
) -> (ZPoly, OpCount) {
    let (mut values, count) = split_eval_multi(n, cap, f, fp, &[q], s);
    (values.pop().unwrap(), count)
}

/// [`split_eval`] for several exponents at once (strictly ascending, each
/// ≥ 1): the inner tables are built and zeta-transformed once per low-block
/// subset and shared by every exponent, so a contiguous exponent run costs
/// one extra ring multiplication per `(Y1, Y2)` pair per exponent.
pub fn split_eval_multi(
    n: usize,
    cap: usize,
    f: &dyn Fn(u32) -> ZPoly,
    fp: &Fp,
    qs: &[u64],
    s: usize,
) -> (Vec<ZPoly>, OpCount) {
    assert!(s <= n, "split parameter {s} exceeds n = {n}");
    assert!(!qs.is_empty());
    let n1 = n - s;
    let stride = cap + 1;
    let low_size = 1u32 << n1;
    let high_size = 1usize << s;
    let mut count = OpCount::default();
    let mut table = vec![0u64; stride * high_size];
    let mut results = vec![ZPoly::zero(cap); qs.len()];
    for y1 in 0..low_size {
        // Build f-zeta over the low block only: table[X2] = sum_{X1 subset Y1} f(X1 | X2).
        table.iter_mut().for_each(|v| *v = 0);
        for x2 in 0..high_size {
            let x2_mask = (x2 as u32) << n1;
            let dst = &mut table[x2 * stride..(x2 + 1) * stride];
            let mut x1 = y1;
            loop {
                let val = f(x1 | x2_mask);
                debug_assert_eq!(val.coeffs.len(), stride, "cap mismatch from evaluator");
                zp_add_assign(fp, dst, &val.coeffs);
                count.adds += 1;
                count.direct_adds += 1;
                if x1 == 0 {
                    break;
                }
                x1 = (x1 - 1) & y1;
            }
        }
        // Fast zeta on the high coordinates.
        for j in 0..s {
            let bit = 1usize << j;
            for x2 in 0..high_size {
                if x2 & bit != 0 {
                    let (lo, hi) = table.split_at_mut(x2 * stride);
                    let src = &lo[(x2 ^ bit) * stride..][..stride];
                    zp_add_assign(fp, &mut hi[..stride], src);
                    count.adds += 1;
                }
            }
        }
        // Doubly-signed accumulation of powers.
        let sign1 = (n1 - y1.count_ones() as usize) % 2;
        for y2 in 0..high_size {
            let base = &table[y2 * stride..(y2 + 1) * stride];
            let sign = (sign1 + (s - y2.count_ones() as usize)) % 2;
            count.muls += zp_pow_ascending(fp, base, qs, |idx, pw| {
                if sign == 0 {
                    zp_add_assign(fp, &mut results[idx].coeffs, pw);
                } else {
                    crate::modular::zp_sub_assign(fp, &mut results[idx].coeffs, pw);
                }
            });
            count.adds += qs.len() as u64;
        }
    }
    (results, count)
}

/// Layer-`d` slice of the subset convolution `sum_{U subset W} s1(U) *
/// sk1(W \ U)` over all `W` with `|W| = d`, by direct summation over
/// subsets.  Entries at other set sizes are left zero.  Callers arrange
/// `s1(empty) = sk1(empty) = 0`, so the full-range sum equals the sum over
/// proper nonempty splits.
pub fn layered_convolve(fp: &Fp, s1: &[u64], sk1: &[u64], n: usize, d: usize) -> Vec<u64> {
    assert_eq!(s1.len(), 1 << n);
    assert_eq!(sk1.len(), 1 << n);
    assert!(d >= 1 && d <= n);
    let p = fp.p() as u128;
    let mut out = vec![0u64; 1 << n];
    // Gosper's hack: iterate all masks of popcount d in increasing order.
    let mut w = (1u64 << d) - 1;
    let limit = 1u64 << n;
    while w < limit {
        let wm = w as u32;
        let mut acc: u128 = 0;
        let mut u = wm;
        loop {
            acc += s1[u as usize] as u128 * sk1[(wm ^ u) as usize] as u128;
            if acc >= (1u128 << 126) {
                acc %= p;
            }
            if u == 0 {
                break;
            }
            u = (u - 1) & wm;
        }
        out[wm as usize] = (acc % p) as u64;
        // Next mask with the same popcount.
        let c = w & w.wrapping_neg();
        let r = w + c;
        w = (((r ^ w) >> 2) / c) | r;
    }
    out
}
