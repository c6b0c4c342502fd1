//! Squared-Gram support matrices, rectangle covers, and the rank-gap report.
//!
//! The squared Gram of a faithful orthonormal representation is entrywise
//! nonnegative with support exactly (edges ∪ diagonal); its rank is at most
//! the square of the ambient dimension, while every rectangle inside its
//! support is capped at `2 t n` cells when the graph has no `K_{t,t}`. The
//! resulting chain
//!
//!   nonnegative rank >= rectangle cover number >= ceil(nnz / (2 t n))
//!
//! is what [`gap_report`] records; the nonnegative rank itself is never
//! computed (only the chain is reported).
//!
//! Support is carried symbolically from the exact integer construction —
//! never inferred from floating-point magnitudes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::{jacobi_eigen, SymMatrix};
use crate::spectral::{gram, validate, Representation};

/// Dense guard shared with the Gram path.
pub const MAX_DENSE_N: usize = 4096;
/// Guards for the exact set-cover solver.
pub const MAX_EXACT_SUPPORT: usize = 40;
pub const MAX_EXACT_RECTANGLES: usize = 10_000;
/// Cell guard for the greedy cover.
pub const MAX_COVER_CELLS: u64 = 1_000_000;

/// A nonnegative matrix with exact support bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<f64>,
    /// Row-major support bitmasks, `words` u64 words per row.
    support: Vec<u64>,
    words: usize,
}

impl SupportMatrix {
    /// Builds from entries and an explicit support set. Entries must be
    /// nonnegative, and every support cell is listed exactly once.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        entries: Vec<f64>,
        support_cells: &[(usize, usize)],
    ) -> Result<Self, Error> {
        if entries.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n_rows} x {n_cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e < 0.0) {
            return Err(Error::InvalidParameter(format!("negative entry {bad}")));
        }
        let words = n_cols.div_ceil(64).max(1);
        let mut support = vec![0u64; n_rows * words];
        for &(i, j) in support_cells {
            if i >= n_rows || j >= n_cols {
                return Err(Error::InvalidParameter(format!("support cell ({i}, {j}) out of range")));
            }
            support[i * words + j / 64] |= 1 << (j % 64);
        }
        Ok(Self { n_rows, n_cols, entries, support, words })
    }

    /// Support inferred as the exact-nonzero entries (for hand-built tests
    /// and 0/1 matrices; representation-derived matrices carry their support
    /// from the construction instead).
    pub fn from_dense(n_rows: usize, n_cols: usize, entries: Vec<f64>) -> Result<Self, Error> {
        let cells: Vec<(usize, usize)> = (0..n_rows)
            .flat_map(|i| (0..n_cols).map(move |j| (i, j)))
            .filter(|&(i, j)| entries[i * n_cols + j] != 0.0)
            .collect();
        Self::new(n_rows, n_cols, entries, &cells)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self::from_dense(n, n, entries).expect("well-formed")
    }

    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        Self::from_dense(n_rows, n_cols, vec![1.0; n_rows * n_cols]).expect("well-formed")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n_cols + j]
    }

    pub fn supported(&self, i: usize, j: usize) -> bool {
        self.support[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn nnz(&self) -> usize {
        self.support.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn support_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if self.supported(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn row_mask(&self, i: usize) -> &[u64] {
        &self.support[i * self.words..(i + 1) * self.words]
    }
}

/// The squared Gram `M(u, v) = <f(u), f(v)>^2` of an orthonormal
/// representation, with support fixed to edges ∪ diagonal.
///
/// For faithful representations the declared support coincides with the
/// nonzero entries and `nnz = 2|E| + n` exactly.
pub fn squared_gram(rep: &Representation, tol: f64) -> Result<SupportMatrix, Error> {
    let report = validate(rep, tol);
    if !report.is_orthonormal() {
        return Err(Error::InvalidRepresentation {
            required: "orthonormal",
            detail: crate::spectral::describe_failures(&report),
        });
    }
    let n = rep.n();
    let g = gram(rep)?;
    let entries: Vec<f64> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .map(|(u, v)| {
            let x = g.get(u, v);
            x * x
        })
        .collect();
    let mut cells: Vec<(usize, usize)> = (0..n).map(|v| (v, v)).collect();
    for (u, v) in rep.graph.edges() {
        cells.push((u, v));
        cells.push((v, u));
    }
    SupportMatrix::new(n, n, entries, &cells)
}

/// Numeric rank via singular values above `1e-8 * sigma_max`.
pub fn numeric_rank(m: &SupportMatrix) -> Result<usize, Error> {
    if m.n_rows.max(m.n_cols) > MAX_DENSE_N {
        return Err(Error::SizeGuard(format!(
            "{} x {} exceeds dense guard {MAX_DENSE_N}",
            m.n_rows, m.n_cols
        )));
    }
    // eigenvalues of the smaller of M M^T / M^T M are the squared singular values
    let (small, big, transpose) = if m.n_rows <= m.n_cols {
        (m.n_rows, m.n_cols, false)
    } else {
        (m.n_cols, m.n_rows, true)
    };
    let at = |i: usize, j: usize| if transpose { m.get(j, i) } else { m.get(i, j) };
    let mm = SymMatrix::from_fn(small, |i, j| {
        (0..big).map(|c| at(i, c) * at(j, c)).sum()
    });
    let eig = jacobi_eigen(&mm)?;
    let max = eig.values.iter().fold(0.0f64, |a, &b| a.max(b));
    if max <= 0.0 {
        return Ok(0);
    }
    // sigma > 1e-8 sigma_max  <=>  lambda > 1e-16 lambda_max
    Ok(eig.values.iter().filter(|&&l| l > 1e-16 * max).count())
}

/// A combinatorial rectangle `rows x cols`, both sides sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Rectangle {
    pub fn cells(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn min_side(&self) -> usize {
        self.rows.len().min(self.cols.len())
    }
}

/// A list of rectangles intended to cover a support exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleCover {
    pub rectangles: Vec<Rectangle>,
}

impl RectangleCover {
    pub fn size(&self) -> usize {
        self.rectangles.len()
    }

    /// Every rectangle inside the support, and the union equal to it.
    pub fn is_valid_for(&self, m: &SupportMatrix) -> bool {
        let mut covered = vec![false; m.n_rows * m.n_cols];
        for r in &self.rectangles {
            for &i in &r.rows {
                for &j in &r.cols {
                    if !m.supported(i, j) {
                        return false;
                    }
                    covered[i * m.n_cols + j] = true;
                }
            }
        }
        for i in 0..m.n_rows {
            for j in 0..m.n_cols {
                if m.supported(i, j) != covered[i * m.n_cols + j] {
                    return false;
                }
            }
        }
        true
    }
}

fn mask_to_indices(mask: &[u64], limit: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in mask.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            let idx = w * 64 + b;
            if idx < limit {
                out.push(idx);
            }
            bits &= bits - 1;
        }
    }
    out
}

/// Rows whose support contains every column of `colmask`.
fn rows_supporting(m: &SupportMatrix, colmask: &[u64]) -> Vec<usize> {
    (0..m.n_rows)
        .filter(|&i| {
            m.row_mask(i)
                .iter()
                .zip(colmask)
                .all(|(&have, &need)| have & need == need)
        })
        .collect()
}

/// Intersection of the row supports of `rows`.
fn cols_of_rows(m: &SupportMatrix, rows: &[usize]) -> Vec<u64> {
    let mut acc = vec![!0u64; m.words];
    for &i in rows {
        for (a, &b) in acc.iter_mut().zip(m.row_mask(i)) {
            *a &= b;
        }
    }
    if !m.n_cols.is_multiple_of(64) {
        acc[m.words - 1] &= (1u64 << (m.n_cols % 64)) - 1;
    }
    acc
}

/// All maximal support-contained rectangles (maximal bicliques of the
/// row-column support relation), sorted, capped at `cap` many.
///
/// Every maximal rectangle's column set is an intersection of row supports;
/// the closure walk below generates exactly those intersections.
pub fn maximal_rectangles(m: &SupportMatrix, cap: usize) -> Result<Vec<Rectangle>, Error> {
    let mut closed: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue: Vec<Vec<u64>> = Vec::new();
    for i in 0..m.n_rows {
        let mask = m.row_mask(i).to_vec();
        if mask.iter().any(|&w| w != 0) && closed.insert(mask.clone()) {
            queue.push(mask);
        }
    }
    while let Some(j) = queue.pop() {
        for i in 0..m.n_rows {
            let mut meet: Vec<u64> = j.iter().zip(m.row_mask(i)).map(|(&a, &b)| a & b).collect();
            if !m.n_cols.is_multiple_of(64) {
                meet[m.words - 1] &= (1u64 << (m.n_cols % 64)) - 1;
            }
            if meet.iter().all(|&w| w == 0) {
                continue;
            }
            if closed.insert(meet.clone()) {
                if closed.len() > cap {
                    return Err(Error::SizeGuard(format!(
                        "more than {cap} maximal rectangles"
                    )));
                }
                queue.push(meet);
            }
        }
    }
    let mut out: Vec<Rectangle> = closed
        .into_iter()
        .map(|colmask| {
            let rows = rows_supporting(m, &colmask);
            let cols = mask_to_indices(&colmask, m.n_cols);
            Rectangle { rows, cols }
        })
        .filter(|r| !r.rows.is_empty())
        .collect();
    out.sort();
    Ok(out)
}

/// Lower bound on the rectangle covering number of the squared Gram of a
/// `K_{t,t}`-free graph's faithful representation: `ceil(nnz / (2 t n))`.
///
/// Small instances (`n <= 14`) are additionally checked exhaustively: every
/// maximal support rectangle must have min side below `2t`, as the
/// biclique-freeness precondition promises.
pub fn rc_lower_bound(m: &SupportMatrix, t: usize) -> Result<usize, Error> {
    if m.n_rows != m.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "rectangle bound needs a square matrix, got {} x {}",
            m.n_rows, m.n_cols
        )));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let n = m.n_rows;
    if n <= 14 {
        for r in maximal_rectangles(m, 1 << 16)? {
            if r.min_side() >= 2 * t {
                return Err(Error::InvalidParameter(format!(
                    "support admits a rectangle with min side {} >= 2t = {}; \
                     input is not the squared Gram of a K_{{t,t}}-free faithful representation",
                    r.min_side(),
                    2 * t
                )));
            }
        }
    }
    let nnz = m.nnz();
    Ok(nnz.div_ceil(2 * t * n))
}

/// Galois closure of a row set: alternate rows -> columns -> rows until
/// stable. The result is a maximal rectangle.
fn closure_from_rows(m: &SupportMatrix, mut rows: Vec<usize>) -> Rectangle {
    loop {
        let cols = cols_of_rows(m, &rows);
        let rows2 = rows_supporting(m, &cols);
        if rows2 == rows {
            return Rectangle { rows, cols: mask_to_indices(&cols, m.n_cols) };
        }
        rows = rows2;
    }
}

/// Greedy rectangle cover: each round grows a maximal rectangle from every
/// seed row and seed column that still has uncovered support, keeps the one
/// covering the most uncovered cells (ties to the lexicographically smallest
/// `(rows, cols)`), and repeats until the support is covered.
pub fn greedy_rectangle_cover(m: &SupportMatrix) -> Result<RectangleCover, Error> {
    let cells = m.n_rows as u64 * m.n_cols as u64;
    if cells > MAX_COVER_CELLS {
        return Err(Error::SizeGuard(format!(
            "{} cells exceed cover guard {MAX_COVER_CELLS}",
            cells
        )));
    }
    let mut uncovered: Vec<u64> = m.support.clone();
    let mut remaining: usize = m.nnz();
    let mut rectangles = Vec::new();

    let score = |r: &Rectangle, uncovered: &[u64]| -> usize {
        let mut colmask = vec![0u64; m.words];
        for &j in &r.cols {
            colmask[j / 64] |= 1 << (j % 64);
        }
        r.rows
            .iter()
            .map(|&i| {
                uncovered[i * m.words..(i + 1) * m.words]
                    .iter()
                    .zip(&colmask)
                    .map(|(&u, &c)| (u & c).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum()
    };

    while remaining > 0 {
        let mut best: Option<(usize, Rectangle)> = None;
        let mut consider = |rect: Rectangle, uncovered: &[u64]| {
            let s = score(&rect, uncovered);
            if s == 0 {
                return;
            }
            let better = match &best {
                None => true,
                Some((bs, br)) => s > *bs || (s == *bs && (&rect.rows, &rect.cols) < (&br.rows, &br.cols)),
            };
            if better {
                best = Some((s, rect));
            }
        };
        for i in 0..m.n_rows {
            let has_uncovered = uncovered[i * m.words..(i + 1) * m.words].iter().any(|&w| w != 0);
            if has_uncovered {
                consider(closure_from_rows(m, vec![i]), &uncovered);
            }
        }
        for j in 0..m.n_cols {
            let col_has_uncovered =
                (0..m.n_rows).any(|i| uncovered[i * m.words + j / 64] >> (j % 64) & 1 == 1);
            if col_has_uncovered {
                let seed_rows: Vec<usize> =
                    (0..m.n_rows).filter(|&i| m.supported(i, j)).collect();
                if !seed_rows.is_empty() {
                    consider(closure_from_rows(m, seed_rows), &uncovered);
                }
            }
        }
        let (gain, rect) = best.expect("uncovered support cell must seed a rectangle");
        for &i in &rect.rows {
            for &j in &rect.cols {
                uncovered[i * m.words + j / 64] &= !(1 << (j % 64));
            }
        }
        remaining -= gain;
        rectangles.push(rect);
    }
    Ok(RectangleCover { rectangles })
}

/// Exact rectangle covering number by branch and bound over the maximal
/// rectangles, with the greedy cover as incumbent.
///
/// Guarded at support size 40 and 10^4 maximal rectangles.
pub fn exact_rc_small(m: &SupportMatrix) -> Result<usize, Error> {
    let nnz = m.nnz();
    if nnz == 0 {
        return Ok(0);
    }
    if nnz > MAX_EXACT_SUPPORT {
        return Err(Error::SizeGuard(format!(
            "support size {nnz} exceeds exact-cover guard {MAX_EXACT_SUPPORT}; use the bounds instead"
        )));
    }
    let rects = maximal_rectangles(m, MAX_EXACT_RECTANGLES)?;
    let cells = m.support_cells();
    let cell_index = |i: usize, j: usize| cells.iter().position(|&c| c == (i, j)).expect("in support");
    let masks: Vec<u64> = rects
        .iter()
        .map(|r| {
            let mut mask = 0u64;
            for &i in &r.rows {
                for &j in &r.cols {
                    mask |= 1 << cell_index(i, j);
                }
            }
            mask
        })
        .collect();
    let full: u64 = (0..nnz).fold(0, |m, i| m | (1 << i));

    // greedy incumbent
    let greedy = {
        let mut covered = 0u64;
        let mut count = 0;
        while covered != full {
            let (_, best) = masks
                .iter()
                .enumerate()
                .map(|(i, &m)| ((m & !covered).count_ones(), i))
                .max_by_key(|&(gain, i)| (gain, core::cmp::Reverse(i)))
                .expect("nonempty");
            covered |= masks[best];
            count += 1;
        }
        count
    };

    let max_cells = masks.iter().map(|m| m.count_ones()).max().unwrap_or(1) as usize;
    let mut best = greedy;

    fn dfs(
        covered: u64,
        full: u64,
        depth: usize,
        masks: &[u64],
        covers_of: &[Vec<usize>],
        cells_left_div: usize,
        best: &mut usize,
    ) {
        if covered == full {
            *best = (*best).min(depth);
            return;
        }
        let remaining = (full & !covered).count_ones() as usize;
        let lower = depth + remaining.div_ceil(cells_left_div);
        if lower >= *best {
            return;
        }
        // branch on the uncovered cell with the fewest covering rectangles
        let cell = (0..64)
            .filter(|&c| full >> c & 1 == 1 && covered >> c & 1 == 0)
            .min_by_key(|&c| covers_of[c].len())
            .expect("some cell uncovered");
        for &r in &covers_of[cell] {
            dfs(covered | masks[r], full, depth + 1, masks, covers_of, cells_left_div, best);
        }
    }

    let covers_of: Vec<Vec<usize>> = (0..nnz)
        .map(|c| {
            (0..masks.len())
                .filter(|&r| masks[r] >> c & 1 == 1)
                .collect()
        })
        .collect();
    dfs(0, full, 0, &masks, &covers_of, max_cells, &mut best);
    Ok(best)
}

/// The rank-gap report for one verified instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub n: usize,
    pub nnz: usize,
    pub numeric_rank: usize,
    pub rc_lower: usize,
    pub greedy_cover: usize,
    /// `rc_lower / numeric_rank`.
    pub ratio: f64,
    /// The inequality chain this report certifies, stated as text; the
    /// nonnegative rank itself is never computed.
    pub chain: String,
}

/// Builds the report for a faithful orthonormal representation whose graph
/// the caller has verified to be `K_{t,t}`-free.
pub fn gap_report(rep: &Representation, t: usize, tol: f64) -> Result<GapReport, Error> {
    let report = validate(rep, tol);
    if !(report.is_orthonormal() && report.is_faithful()) {
        return Err(Error::InvalidRepresentation {
            required: "faithful orthonormal",
            detail: crate::spectral::describe_failures(&report),
        });
    }
    let m = squared_gram(rep, tol)?;
    let n = m.n_rows();
    let nnz = m.nnz();
    let rank = numeric_rank(&m)?;
    let rc_lower = rc_lower_bound(&m, t)?;
    let greedy = greedy_rectangle_cover(&m)?;
    debug_assert!(greedy.is_valid_for(&m));
    let ratio = rc_lower as f64 / rank as f64;
    if let Some(dim) = rep.dim() {
        if let Some(dim_sq) = dim.checked_mul(dim) {
            assert!(
                (rank as u128) <= dim_sq,
                "rank {rank} exceeds squared ambient dimension {dim_sq}"
            );
        }
    }
    let chain = format!(
        "nonnegative_rank >= rectangle_cover_number >= ceil(nnz / (2*t*n)) = {rc_lower}"
    );
    Ok(GapReport { n, nnz, numeric_rank: rank, rc_lower, greedy_cover: greedy.size(), ratio, chain })
}
