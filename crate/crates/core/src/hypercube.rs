//! Exact arithmetic over balanced sign vectors and their tensor products.
//!
//! A [`SignVector`] is a ±1 vector of even length `k` with equally many +1
//! and −1 entries (the middle layer of the hypercube). A [`TensorVector`] is
//! a tensor product of `m` such vectors, stored as `m` indices into the
//! canonical middle-layer enumeration and never materialized unless asked.
//!
//! All orthogonality decisions are exact integer zero tests on the factor
//! inner products. The full tensor inner product is never formed as a single
//! integer (it can exceed 64 bits); its sign and zero-ness follow from the
//! factors.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::fp;

/// Largest `k` for which the middle layer may be enumerated or sampled.
/// C(28,14) = 40_116_600 already makes dense member lists ~320 MB.
pub const MAX_K: u32 = 28;

/// Largest materialized tensor dimension `k^m`.
pub const MAX_MATERIALIZE: u64 = 1 << 20;

/// A middle-layer ±1 vector of length `k`, stored as its support bitmask.
///
/// Bit `i` of `support` is set exactly when entry `i` equals +1, so the
/// balance invariant is `support.count_ones() == k / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector {
    k: u32,
    support: u32,
}

impl SignVector {
    /// Builds a sign vector from its +1 support mask.
    pub fn from_support(k: u32, support: u32) -> Result<Self, Error> {
        check_k(k)?;
        if support >= 1u32 << k {
            return Err(Error::InvalidParameter(format!(
                "support mask {support:#x} has bits outside [0, {k})"
            )));
        }
        if support.count_ones() != k / 2 {
            return Err(Error::InvalidParameter(format!(
                "support size {} != k/2 = {}",
                support.count_ones(),
                k / 2
            )));
        }
        Ok(Self { k, support })
    }

    /// Builds a sign vector from explicit ±1 entries.
    pub fn from_entries(entries: &[i8]) -> Result<Self, Error> {
        let k = entries.len() as u32;
        let mut support = 0u32;
        for (i, &e) in entries.iter().enumerate() {
            match e {
                1 => support |= 1 << i,
                -1 => {}
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "entry {i} is {other}, expected +1 or -1"
                    )))
                }
            }
        }
        Self::from_support(k, support)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The +1 positions as a bitmask.
    pub fn support(&self) -> u32 {
        self.support
    }

    /// The entries as ±1 integers.
    pub fn entries(&self) -> Vec<i8> {
        (0..self.k)
            .map(|i| if self.support >> i & 1 == 1 { 1 } else { -1 })
            .collect()
    }

    /// Exact inner product with `other`.
    ///
    /// Computed both as `k − 2|A △ B|` and as `4|A ∩ B| − k`; the two routes
    /// must agree, and the result is ≡ k (mod 4) for middle-layer inputs.
    pub fn inner_product(&self, other: &Self) -> Result<i32, Error> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!(
                "sign vectors of length {} and {}",
                self.k, other.k
            )));
        }
        let k = self.k as i32;
        let sym_diff = (self.support ^ other.support).count_ones() as i32;
        let via_diff = k - 2 * sym_diff;
        let via_meet = 4 * (self.support & other.support).count_ones() as i32 - k;
        assert_eq!(via_diff, via_meet, "inner product identity violated");
        debug_assert_eq!(via_meet.rem_euclid(4), k.rem_euclid(4));
        Ok(via_meet)
    }

    /// Rank of this vector in the canonical enumeration of its layer.
    pub fn rank(&self) -> u64 {
        // lexicographic rank of the support as an ascending index list
        let k = self.k;
        let r = k / 2;
        let mut rank = 0u64;
        let mut chosen = 0u32;
        let mut prev: i64 = -1;
        for pos in 0..k {
            if self.support >> pos & 1 == 1 {
                for skipped in (prev + 1) as u32..pos {
                    rank += binomial(k - skipped - 1, r - chosen - 1);
                }
                chosen += 1;
                prev = pos as i64;
            }
        }
        rank
    }
}

fn check_k(k: u32) -> Result<(), Error> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("k = {k} must be even and >= 2")));
    }
    if k > MAX_K {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds guard {MAX_K}")));
    }
    Ok(())
}

/// C(n, r) for the small arguments used here (n <= 28 everywhere).
pub(crate) fn binomial(n: u32, r: u32) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for i in 0..r {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Number of middle-layer vectors of length `k`, i.e. C(k, k/2).
pub fn middle_layer_size(k: u32) -> Result<u64, Error> {
    check_k(k)?;
    Ok(binomial(k, k / 2))
}

/// The rank-`rank` middle-layer vector in canonical order.
///
/// Canonical order is lexicographic on the support set read as an ascending
/// list of indices, which is stable across runs and platforms.
pub fn unrank_middle_layer(k: u32, rank: u64) -> Result<SignVector, Error> {
    let size = middle_layer_size(k)?;
    if rank >= size {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} out of range for layer size {size}"
        )));
    }
    let mut support = 0u32;
    let mut remaining = rank;
    let mut next = 0u32;
    let mut left = k / 2;
    while left > 0 {
        let block = binomial(k - next - 1, left - 1);
        if remaining < block {
            support |= 1 << next;
            left -= 1;
        } else {
            remaining -= block;
        }
        next += 1;
    }
    Ok(SignVector { k, support })
}

/// All middle-layer vectors of length `k` in canonical order.
pub fn enumerate_middle_layer(k: u32) -> Result<Vec<SignVector>, Error> {
    let size = middle_layer_size(k)?;
    let mut out = Vec::with_capacity(size as usize);
    // first combination: lowest k/2 bits
    let mut support = (1u32 << (k / 2)) - 1;
    loop {
        out.push(SignVector { k, support });
        if out.len() as u64 == size {
            break;
        }
        support = next_combination(support, k);
    }
    Ok(out)
}

/// Successor of a support mask in lexicographic order on index lists.
fn next_combination(mask: u32, k: u32) -> u32 {
    // advance the highest index that can move right, pulling the tail along
    let bits: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
    let r = bits.len();
    let mut i = r;
    loop {
        i -= 1;
        if bits[i] != k - (r - i) as u32 {
            break;
        }
    }
    let mut out = mask & ((1 << bits[i]) - 1);
    let mut v = bits[i] + 1;
    for _ in i..r {
        out |= 1 << v;
        v += 1;
    }
    out
}

/// An element of the `m`-fold tensor power of the middle layer, stored as
/// factor indices into the canonical enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorVector {
    k: u32,
    m: u32,
    factors: Vec<u64>,
}

impl TensorVector {
    pub fn new(k: u32, factors: Vec<u64>) -> Result<Self, Error> {
        let size = middle_layer_size(k)?;
        if factors.is_empty() {
            return Err(Error::InvalidParameter("tensor needs m >= 1 factors".into()));
        }
        for (i, &f) in factors.iter().enumerate() {
            if f >= size {
                return Err(Error::InvalidParameter(format!(
                    "factor {i} index {f} out of range for layer size {size}"
                )));
            }
        }
        Ok(Self { k, m: factors.len() as u32, factors })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Resolves the factor indices to sign vectors.
    pub fn factor_vectors(&self) -> Vec<SignVector> {
        self.factors
            .iter()
            .map(|&f| unrank_middle_layer(self.k, f).expect("index validated at construction"))
            .collect()
    }

    /// Ambient dimension `k^m`, if it fits in a `u128`.
    pub fn dim(&self) -> Option<u128> {
        (self.k as u128).checked_pow(self.m)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), Error> {
        if self.k != other.k || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "tensors with (k, m) = ({}, {}) and ({}, {})",
                self.k, self.m, other.k, other.m
            )));
        }
        Ok(())
    }

    /// The `m` factor inner products `<u_i, v_i>`.
    ///
    /// The full inner product is their product; it is zero iff some factor
    /// is zero, and the caller derives sign and zero-ness without forming
    /// the (possibly 64-bit-overflowing) product.
    pub fn factor_products(&self, other: &Self) -> Result<Vec<i32>, Error> {
        self.check_compatible(other)?;
        let a = self.factor_vectors();
        let b = other.factor_vectors();
        a.iter().zip(&b).map(|(x, y)| x.inner_product(y)).collect()
    }

    /// Inner product of the unit-normalized tensors, in [-1, 1].
    ///
    /// Computed factor by factor as `prod <u_i, v_i> / k` so every partial
    /// product stays in [-1, 1]; exactly 0.0 when any factor is orthogonal.
    pub fn normalized_inner_product(&self, other: &Self) -> Result<f64, Error> {
        let products = self.factor_products(other)?;
        if products.contains(&0) {
            return Ok(0.0);
        }
        let k = self.k as f64;
        Ok(products.iter().fold(1.0, |acc, &p| acc * (p as f64 / k)))
    }

    /// Explicit unit-normalized coordinates in `R^(k^m)`.
    ///
    /// Guarded at `k^m <= 2^20`; intended for cross-validation and explicit
    /// Gram computation at small scale.
    pub fn materialize(&self) -> Result<Vec<f64>, Error> {
        let dim = self
            .dim()
            .filter(|&d| d <= MAX_MATERIALIZE as u128)
            .ok_or_else(|| {
                Error::SizeGuard(format!(
                    "k^m = {}^{} exceeds materialization guard {MAX_MATERIALIZE}",
                    self.k, self.m
                ))
            })? as usize;
        let mut out = Vec::with_capacity(dim);
        out.push(1.0f64);
        for sv in self.factor_vectors() {
            let entries = sv.entries();
            let mut next = Vec::with_capacity(out.len() * entries.len());
            for &a in &out {
                for &e in &entries {
                    next.push(a * e as f64);
                }
            }
            out = next;
        }
        let norm = fp::sqrt(dim as f64);
        for x in &mut out {
            *x /= norm;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Independent enumeration oracle: filter all 2^k sign patterns for
    /// balance and sort by support read as an ascending index list.
    fn oracle_enumerate(k: u32) -> Vec<u32> {
        let mut masks: Vec<u32> = (0..1u32 << k)
            .filter(|m| m.count_ones() == k / 2)
            .collect();
        masks.sort_by_key(|&m| (0..k).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>());
        masks
    }

    #[test]
    fn enumerate_matches_oracle() {
        for k in [2u32, 4, 6, 8] {
            let got: Vec<u32> = enumerate_middle_layer(k).unwrap().iter().map(|v| v.support()).collect();
            assert_eq!(got, oracle_enumerate(k), "k = {k}");
        }
    }

    #[test]
    fn layer_sizes() {
        assert_eq!(enumerate_middle_layer(4).unwrap().len(), 6);
        assert_eq!(middle_layer_size(8).unwrap(), 70);
        let all8 = enumerate_middle_layer(8).unwrap();
        assert_eq!(all8.len(), 70);
        assert!(all8.iter().all(|v| v.support().count_ones() == 4));
    }

    #[test]
    fn k2_layer_is_plus_minus_then_minus_plus() {
        let l = enumerate_middle_layer(2).unwrap();
        assert_eq!(l[0].entries(), vec![1, -1]);
        assert_eq!(l[1].entries(), vec![-1, 1]);
    }

    #[test]
    fn guard_rejects_bad_k() {
        assert!(enumerate_middle_layer(3).is_err());
        assert!(enumerate_middle_layer(0).is_err());
        assert!(enumerate_middle_layer(30).is_err());
    }

    #[test]
    fn enumeration_is_deterministic() {
        assert_eq!(enumerate_middle_layer(8).unwrap(), enumerate_middle_layer(8).unwrap());
    }

    #[test]
    fn unrank_and_rank_invert_enumeration() {
        for k in [2u32, 4, 6, 8, 10] {
            for (i, v) in enumerate_middle_layer(k).unwrap().into_iter().enumerate() {
                assert_eq!(unrank_middle_layer(k, i as u64).unwrap(), v);
                assert_eq!(v.rank(), i as u64);
            }
        }
    }

    fn coordinate_dot(a: &SignVector, b: &SignVector) -> i32 {
        a.entries()
            .iter()
            .zip(b.entries())
            .map(|(&x, y)| x as i32 * y as i32)
            .sum()
    }

    #[test]
    fn inner_product_examples() {
        let x = SignVector::from_entries(&[1, 1, -1, -1]).unwrap();
        let y = SignVector::from_entries(&[1, -1, 1, -1]).unwrap();
        let z = SignVector::from_entries(&[-1, -1, 1, 1]).unwrap();
        assert_eq!(x.inner_product(&x).unwrap(), 4);
        assert_eq!(x.inner_product(&y).unwrap(), 0);
        assert_eq!(x.inner_product(&z).unwrap(), -4);
    }

    #[test]
    fn inner_product_identity_exhaustive() {
        for k in [4u32, 6, 8] {
            let layer = enumerate_middle_layer(k).unwrap();
            for a in &layer {
                for b in &layer {
                    let ip = a.inner_product(b).unwrap();
                    assert_eq!(ip, coordinate_dot(a, b));
                    assert_eq!(
                        ip,
                        4 * (a.support() & b.support()).count_ones() as i32 - k as i32
                    );
                }
            }
        }
    }

    #[test]
    fn inner_product_rejects_mixed_lengths() {
        let a = SignVector::from_entries(&[1, -1]).unwrap();
        let b = SignVector::from_entries(&[1, 1, -1, -1]).unwrap();
        assert!(a.inner_product(&b).is_err());
    }

    #[test]
    fn tensor_self_products_are_k() {
        let u = TensorVector::new(4, vec![0, 3, 5]).unwrap();
        assert_eq!(u.factor_products(&u).unwrap(), vec![4, 4, 4]);
        assert_eq!(u.normalized_inner_product(&u).unwrap(), 1.0);
    }

    #[test]
    fn zero_factor_annihilates() {
        // k=4 ranks: 0 <-> {0,1}, 1 <-> {0,2}; supports 0b0011 and 0b0101 meet in 1 bit -> ip 0
        let u = TensorVector::new(4, vec![0, 0]).unwrap();
        let v = TensorVector::new(4, vec![1, 0]).unwrap();
        let p = u.factor_products(&v).unwrap();
        assert_eq!(p[0], 0);
        assert_eq!(p[1], 4);
        assert_eq!(u.normalized_inner_product(&v).unwrap(), 0.0);
    }

    #[test]
    fn normalized_product_of_half_factors() {
        // need factor pairs with inner product 2: impossible for k=4 (ips are 0, ±4);
        // use k=8 where <x,y> = 4|A∩B| - 8 takes value 4 at |A∩B| = 3.
        let layer = enumerate_middle_layer(8).unwrap();
        let x = layer[0];
        let y = layer
            .iter()
            .find(|y| x.inner_product(y).unwrap() == 4)
            .copied()
            .unwrap();
        let u = TensorVector::new(8, vec![x.rank(), x.rank()]).unwrap();
        let v = TensorVector::new(8, vec![y.rank(), y.rank()]).unwrap();
        let nip = u.normalized_inner_product(&v).unwrap();
        assert!((nip - 0.25).abs() < 1e-15);
    }

    #[test]
    fn materialize_single_factor() {
        let x = SignVector::from_entries(&[1, 1, -1, -1]).unwrap();
        let u = TensorVector::new(4, vec![x.rank()]).unwrap();
        assert_eq!(u.materialize().unwrap(), vec![0.5, 0.5, -0.5, -0.5]);
    }

    #[test]
    fn materialize_square_tensor() {
        let x = SignVector::from_entries(&[1, 1, -1, -1]).unwrap();
        let u = TensorVector::new(4, vec![x.rank(), x.rank()]).unwrap();
        let coords = u.materialize().unwrap();
        assert_eq!(coords.len(), 16);
        assert!(coords.iter().all(|&c| (c.abs() - 0.25).abs() < 1e-15));
    }

    #[test]
    fn materialize_guard() {
        let u = TensorVector::new(16, vec![0; 6]).unwrap(); // 16^6 = 2^24 > 2^20
        assert!(matches!(u.materialize(), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn factor_products_match_materialized_dot() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let size = middle_layer_size(4).unwrap();
        for _ in 0..200 {
            let m = rng.gen_range(1..=3);
            let u = TensorVector::new(4, (0..m).map(|_| rng.gen_range(0..size)).collect()).unwrap();
            let v = TensorVector::new(4, (0..m).map(|_| rng.gen_range(0..size)).collect()).unwrap();
            let exact: i64 = u
                .factor_products(&v)
                .unwrap()
                .iter()
                .map(|&p| p as i64)
                .product();
            let mu = u.materialize().unwrap();
            let mv = v.materialize().unwrap();
            let dot: f64 = mu.iter().zip(&mv).map(|(a, b)| a * b).sum();
            // materialized vectors are normalized by k^(m/2) each
            let scale = 4f64.powi(m);
            assert!((dot * scale - exact as f64).abs() < 1e-9);
            assert_eq!(dot == 0.0, exact == 0, "exact zero must materialize to exact zero");
            let nip = u.normalized_inner_product(&v).unwrap();
            assert!((nip - exact as f64 / scale).abs() < 1e-12);
        }
    }

    #[test]
    fn random_tensors_have_unit_norm() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let k = if rng.gen_bool(0.5) { 4 } else { 8 };
            let size = middle_layer_size(k).unwrap();
            let m = rng.gen_range(1..=2);
            let u = TensorVector::new(k, (0..m).map(|_| rng.gen_range(0..size)).collect()).unwrap();
            let coords = u.materialize().unwrap();
            let norm: f64 = coords.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
