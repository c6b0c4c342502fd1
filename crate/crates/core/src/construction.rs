//! Randomized construction of biclique-free non-orthogonality graphs.
//!
//! A family of `n` tensor vectors is drawn uniformly from the `m`-fold tensor
//! power of the middle layer; its non-orthogonality graph has an edge exactly
//! where the (exact, integer) inner product is nonzero. The constructed
//! instance is accepted only after an exhaustive search certifies that the
//! graph contains no complete bipartite subgraph with `t` vertices per side,
//! resampling with derived seeds until verification passes or the retry
//! budget runs out.
//!
//! The dangerous-pair machinery (`all_projections`, `is_dangerous_pair`)
//! exposes the combinatorial obstruction the sampling has to avoid; the
//! verifier works on the graph directly and does not depend on it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AttemptReport, Error};
use crate::fp;
use crate::graph::Graph;
use crate::hypercube::{middle_layer_size, unrank_middle_layer, SignVector, TensorVector};

/// Derived construction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub t: u64,
    pub n: u64,
    pub epsilon: f64,
    /// Largest multiple of 4 with `t >= 2^(k+3) / (epsilon * k)`.
    pub k: u32,
    /// `ceil(2 * log2(n) / (epsilon * k))`, at least 1.
    pub m: u32,
}

impl Schedule {
    /// Derives `(k, m)` from the target biclique size, vertex count, and the
    /// forbidden-intersection constant `epsilon`.
    pub fn derive(t: u64, n: u64, epsilon: f64) -> Result<Self, Error> {
        if t < 3 {
            return Err(Error::InvalidParameter(format!("t = {t} must be >= 3")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n = {n} must be >= 2")));
        }
        if !(epsilon > 0.0 && epsilon < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "epsilon = {epsilon} must lie in (0, 1/4)"
            )));
        }
        // threshold 2^(k+3)/(eps*k) is strictly increasing in k, so the
        // feasible set of k is a prefix of 4, 8, 12, ...
        let feasible = |k: u32| t as f64 * epsilon * k as f64 >= exp2(k + 3);
        if !feasible(4) {
            return Err(Error::ScheduleInfeasible { t, epsilon });
        }
        let mut k = 4;
        while feasible(k + 4) {
            k += 4;
        }
        let m_raw = fp::ceil(2.0 * fp::log2(n as f64) / (epsilon * k as f64)) as u32;
        Ok(Self { t, n, epsilon, k, m: m_raw.max(1) })
    }
}

fn exp2(e: u32) -> f64 {
    let mut acc = 1.0f64;
    for _ in 0..e {
        acc *= 2.0;
    }
    acc
}

/// A list of tensor vectors drawn independently and uniformly, together with
/// the parameters and seed that reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySample {
    pub k: u32,
    pub m: u32,
    pub seed: u64,
    pub vectors: Vec<TensorVector>,
}

impl FamilySample {
    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    /// Ambient dimension `k^m`, if it fits in a `u128`.
    pub fn dim(&self) -> Option<u128> {
        (self.k as u128).checked_pow(self.m)
    }
}

/// Draws `bound`-sided dice from the stream without modulo bias.
fn uniform_below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let x = rng.next_u64();
        if x >= threshold {
            return x % bound;
        }
    }
}

/// Samples `n` tensor vectors uniformly from the `m`-fold middle-layer power.
///
/// Vector `i` is produced from its own ChaCha stream derived from
/// `(seed, i)`, so the family is reproducible bit for bit and independent of
/// evaluation order.
pub fn sample_family(k: u32, m: u32, n: usize, seed: u64) -> Result<FamilySample, Error> {
    let size = middle_layer_size(k)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let factors: Vec<u64> = (0..m).map(|_| uniform_below(&mut rng, size)).collect();
        vectors.push(TensorVector::new(k, factors)?);
    }
    Ok(FamilySample { k, m, seed, vectors })
}

/// Builds the non-orthogonality graph: `uv` is an edge iff every factor
/// inner product of `(v_u, v_v)` is nonzero.
pub fn build_graph(family: &FamilySample) -> Graph {
    let n = family.n();
    let m = family.m as usize;
    let k = family.k;
    // resolve factor supports once; pairwise tests are then pure popcounts
    let masks: Vec<u32> = family
        .vectors
        .iter()
        .flat_map(|v| v.factor_vectors().into_iter().map(|s| s.support()))
        .collect();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let adjacent = (0..m).all(|f| {
                let meet = (masks[u * m + f] & masks[v * m + f]).count_ones();
                4 * meet != k
            });
            if adjacent {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// The deduplicated set of `i`-th factors of `set`, in canonical order.
pub fn projection(set: &[TensorVector], i: usize) -> Result<Vec<SignVector>, Error> {
    let first = set
        .first()
        .ok_or_else(|| Error::InvalidParameter("projection of empty set".into()))?;
    let (k, m) = (first.k(), first.m());
    if i >= m as usize {
        return Err(Error::InvalidParameter(format!("coordinate {i} out of range for m = {m}")));
    }
    let mut indices: Vec<u64> = Vec::with_capacity(set.len());
    for v in set {
        if v.k() != k || v.m() != m {
            return Err(Error::DimensionMismatch("mixed (k, m) in projection input".into()));
        }
        indices.push(v.factors()[i]);
    }
    indices.sort_unstable();
    indices.dedup();
    indices.iter().map(|&r| unrank_middle_layer(k, r)).collect()
}

/// All `m` factor projections of `set`.
pub fn all_projections(set: &[TensorVector]) -> Result<Vec<Vec<SignVector>>, Error> {
    let m = set
        .first()
        .ok_or_else(|| Error::InvalidParameter("projection of empty set".into()))?
        .m() as usize;
    (0..m).map(|i| projection(set, i)).collect()
}

/// Whether the product families described by per-coordinate factor sets form
/// a dangerous pair: no cross pair `(x, y) in S_i x T_i` is orthogonal, for
/// every coordinate `i`.
pub fn is_dangerous_pair(
    s_factors: &[Vec<SignVector>],
    t_factors: &[Vec<SignVector>],
) -> Result<bool, Error> {
    if s_factors.len() != t_factors.len() {
        return Err(Error::DimensionMismatch(format!(
            "projection lists of length {} and {}",
            s_factors.len(),
            t_factors.len()
        )));
    }
    for (si, ti) in s_factors.iter().zip(t_factors) {
        for x in si {
            for y in ti {
                if x.inner_product(y)? == 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A complete bipartite subgraph witness: both sides sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn binomial_u128(n: u128, r: u128) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Exhaustively searches for a `K_{t,t}` subgraph.
///
/// Left sides are enumerated in degree-descending vertex order with
/// common-neighborhood pruning; a left side is a witness when at least `t`
/// vertices outside it are adjacent to all of it. Returns `None` only after
/// the full (pruned) enumeration proves there is no such subgraph.
///
/// The nominal work `n * C(n, t)` must fit under `budget`.
pub fn find_biclique(g: &Graph, t: usize, budget: u64) -> Result<Option<Biclique>, Error> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let n = g.n();
    let cost = binomial_u128(n as u128, t as u128)
        .and_then(|c| c.checked_mul(n as u128))
        .unwrap_or(u128::MAX);
    if cost > budget as u128 {
        return Err(Error::BudgetExceeded { cost, budget });
    }
    if 2 * t > n {
        return Ok(None);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v));

    let words = g.words();
    let mut chosen: Vec<usize> = Vec::with_capacity(t);
    let mut common = vec![vec![0u64; words]; t + 1];
    for w in 0..words {
        common[0][w] = !0;
    }
    // mask off bits >= n in the top word
    if !n.is_multiple_of(64) {
        common[0][words - 1] = (1u64 << (n % 64)) - 1;
    }

    fn popcount(mask: &[u64]) -> usize {
        mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn rec(
        g: &Graph,
        order: &[usize],
        start: usize,
        t: usize,
        chosen: &mut Vec<usize>,
        common: &mut [Vec<u64>],
    ) -> Option<Biclique> {
        let depth = chosen.len();
        if depth == t {
            // count common neighbors outside the chosen side
            let mut outside = common[depth].clone();
            for &v in chosen.iter() {
                outside[v / 64] &= !(1u64 << (v % 64));
            }
            if popcount(&outside) >= t {
                let mut right = Vec::with_capacity(t);
                'take: for (w, &word) in outside.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        right.push(w * 64 + b);
                        if right.len() == t {
                            break 'take;
                        }
                        bits &= bits - 1;
                    }
                }
                let mut left = chosen.clone();
                left.sort_unstable();
                return Some(Biclique { left, right });
            }
            return None;
        }
        for idx in start..order.len() {
            let v = order[idx];
            let (head, tail) = common.split_at_mut(depth + 1);
            let cur = &head[depth];
            let next = &mut tail[0];
            let row = g.row(v);
            let mut count = 0usize;
            for w in 0..cur.len() {
                next[w] = cur[w] & row[w];
                count += next[w].count_ones() as usize;
            }
            if count < t {
                continue;
            }
            chosen.push(v);
            if let Some(found) = rec(g, order, idx + 1, t, chosen, common) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    Ok(rec(g, &order, 0, t, &mut chosen, &mut common))
}

/// A verified construction: the family, its graph, and how many resamples
/// verification took.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub family: FamilySample,
    pub graph: Graph,
    pub retries: u32,
}

/// Seed for retry `attempt` (attempt 0 uses `seed` itself).
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Samples, builds, and verifies; resamples with derived seeds on failure.
///
/// Deterministic given `(seed, max_retries)`. On exhaustion the error carries
/// one report per attempt with the witness biclique that killed it.
pub fn construct_verified(
    k: u32,
    m: u32,
    n: usize,
    t: usize,
    seed: u64,
    max_retries: u32,
    budget: u64,
) -> Result<Construction, Error> {
    let mut reports = Vec::new();
    for attempt in 0..=max_retries {
        let s = attempt_seed(seed, attempt);
        let family = sample_family(k, m, n, s)?;
        let graph = build_graph(&family);
        match find_biclique(&graph, t, budget)? {
            None => return Ok(Construction { family, graph, retries: attempt }),
            Some(witness) => reports.push(AttemptReport {
                seed: s,
                edges: graph.edge_count(),
                witness: (witness.left, witness.right),
            }),
        }
    }
    Err(Error::ConstructionFailed(reports))
}
