//! Sparse matrices over an exact field and the row-reduction kernel.
//!
//! The pivot rule is fixed (first nonzero entry in row-major order) so ranks,
//! kernel bases and homology representatives are reproducible across runs.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Adds `coeff * v` into an accumulator keyed by index.
pub fn axpy(field: &FieldSpec, acc: &mut BTreeMap<usize, Scalar>, coeff: &Scalar, v: &SparseVec) {
    if coeff.is_zero() {
        return;
    }
    for (i, x) in v {
        let t = field.mul(coeff, x);
        match acc.entry(*i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(t);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(e.get(), &t);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

pub fn collect_sparse(acc: BTreeMap<usize, Scalar>) -> SparseVec {
    acc.into_iter().collect()
}

/// A sparse matrix with row-major storage. Rows keep strictly increasing
/// column indices and never store zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    row_data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            row_data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.row_data[i].push((i, field.one()));
        }
        m
    }

    /// Builds from (row, col, scalar) triples; repeated positions accumulate.
    pub fn from_triples<I>(field: FieldSpec, rows: usize, cols: usize, triples: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triples {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of {rows}x{cols}");
            axpy(&field, &mut acc[r], &v, &vec![(c, field.one())]);
        }
        SparseMatrix {
            field,
            rows,
            cols,
            row_data: acc.into_iter().map(collect_sparse).collect(),
        }
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<SparseVec>) -> Self {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(c, v)| *c < cols && !v.is_zero()));
        }
        SparseMatrix {
            field,
            rows: rows.len(),
            cols,
            row_data: rows,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.row_data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.row_data.iter().all(|r| r.is_empty())
    }

    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        self.row_data[r]
            .binary_search_by_key(&c, |(i, _)| *i)
            .map(|k| self.row_data[r][k].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            row_data: rows,
        }
    }

    /// Matrix-vector product `m * v` with `v` in column coordinates.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let dense: BTreeMap<usize, &Scalar> = v.iter().map(|(i, x)| (*i, x)).collect();
        let mut out = Vec::new();
        for (r, row) in self.row_data.iter().enumerate() {
            let mut s = self.field.zero();
            for (c, a) in row {
                if let Some(x) = dense.get(c) {
                    s = self.field.add(&s, &self.field.mul(a, x));
                }
            }
            if !s.is_zero() {
                out.push((r, s));
            }
        }
        out
    }

    /// `self * other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "composition shape mismatch");
        assert_eq!(self.field, other.field);
        let mut rows: Vec<SparseVec> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = BTreeMap::new();
            for (k, a) in &self.row_data[r] {
                axpy(&self.field, &mut acc, a, &other.row_data[*k]);
            }
            rows.push(collect_sparse(acc));
        }
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            row_data: rows,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = BTreeMap::new();
            axpy(&self.field, &mut acc, &self.field.one(), &self.row_data[r]);
            axpy(&self.field, &mut acc, &self.field.one(), &other.row_data[r]);
            rows.push(collect_sparse(acc));
        }
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            row_data: rows,
        }
    }

    pub fn scale(&self, coeff: &Scalar) -> SparseMatrix {
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = BTreeMap::new();
            axpy(&self.field, &mut acc, coeff, &self.row_data[r]);
            rows.push(collect_sparse(acc));
        }
        SparseMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            row_data: rows,
        }
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn stack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.row_data.clone();
        rows.extend(other.row_data.iter().cloned());
        SparseMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            row_data: rows,
        }
    }

    pub fn row_reduce(&self) -> RowReduction {
        row_reduce(self)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }
}

/// Result of Gauss-Jordan elimination: reduced row echelon form plus the
/// canonical kernel and image bases it determines.
pub struct RowReduction {
    pub field: FieldSpec,
    pub rank: usize,
    /// `(echelon_row, col)` pairs, in increasing column order.
    pub pivots: Vec<(usize, usize)>,
    /// Reduced row echelon form (nonzero rows only, pivot entries 1).
    pub rref: SparseMatrix,
    /// Non-pivot columns, ascending.
    pub free_cols: Vec<usize>,
}

/// Gauss-Jordan elimination with the first-nonzero-in-row-major-order pivot
/// rule: columns are scanned left to right and the earliest remaining row
/// with a nonzero entry is chosen.
pub fn row_reduce(m: &SparseMatrix) -> RowReduction {
    let field = m.field;
    let mut work: Vec<BTreeMap<usize, Scalar>> = m
        .row_data
        .iter()
        .map(|r| r.iter().cloned().collect())
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut done_rows: Vec<usize> = Vec::new();

    for col in 0..m.cols {
        let pivot_row = (0..m.rows)
            .find(|r| !done_rows.contains(r) && work[*r].contains_key(&col));
        let Some(pr) = pivot_row else { continue };
        // Normalize the pivot row.
        let inv = field
            .inv(&work[pr][&col])
            .expect("pivot entry is nonzero by construction");
        let normalized: SparseVec = {
            let mut acc = BTreeMap::new();
            let row_vec: SparseVec = std::mem::take(&mut work[pr]).into_iter().collect();
            axpy(&field, &mut acc, &inv, &row_vec);
            collect_sparse(acc)
        };
        // Eliminate the column everywhere else.
        for r in 0..m.rows {
            if r == pr {
                continue;
            }
            if let Some(c) = work[r].get(&col).cloned() {
                axpy(&field, &mut work[r], &field.neg(&c), &normalized);
            }
        }
        work[pr] = normalized.into_iter().collect();
        done_rows.push(pr);
        pivots.push((pr, col));
    }

    // Echelon rows ordered by pivot column; original row index forgotten.
    let rref_rows: Vec<SparseVec> = pivots
        .iter()
        .map(|(r, _)| work[*r].iter().map(|(c, v)| (*c, v.clone())).collect())
        .collect();
    let rank = pivots.len();
    let pivot_cols: Vec<usize> = pivots.iter().map(|(_, c)| *c).collect();
    let free_cols: Vec<usize> = (0..m.cols).filter(|c| !pivot_cols.contains(c)).collect();
    let pivots_out: Vec<(usize, usize)> = pivot_cols.iter().copied().enumerate().collect();

    RowReduction {
        field,
        rank,
        pivots: pivots_out,
        rref: SparseMatrix::from_rows(field, m.cols, rref_rows),
        free_cols,
    }
}

impl RowReduction {
    /// Canonical kernel basis: one vector per free column, with entry 1 at
    /// that column and the compensating pivot entries.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let field = self.field;
        self.free_cols
            .iter()
            .map(|&f| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                acc.insert(f, field.one());
                for (er, pc) in &self.pivots {
                    let v = self.rref.entry(*er, f);
                    if !v.is_zero() {
                        acc.insert(*pc, field.neg(&v));
                    }
                }
                collect_sparse(acc)
            })
            .collect()
    }

    /// Reduces `v` modulo the row space: subtracts pivot rows until every
    /// pivot coordinate vanishes. The result is a canonical normal form.
    pub fn reduce_mod_rowspace(&self, v: &SparseVec) -> SparseVec {
        let field = self.field;
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        for (er, pc) in &self.pivots {
            if let Some(c) = acc.get(pc).cloned() {
                let row: SparseVec = self.rref.row(*er).clone();
                axpy(&field, &mut acc, &field.neg(&c), &row);
            }
        }
        collect_sparse(acc)
    }

    /// Coordinates of `v` in the row space, if it lies there.
    pub fn coordinates_in_rowspace(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let field = self.field;
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut coords = Vec::with_capacity(self.pivots.len());
        for (er, pc) in &self.pivots {
            let c = acc.get(pc).cloned().unwrap_or_else(|| field.zero());
            coords.push(c.clone());
            if !c.is_zero() {
                let row: SparseVec = self.rref.row(*er).clone();
                axpy(&field, &mut acc, &field.neg(&c), &row);
            }
        }
        if acc.is_empty() {
            Some(coords)
        } else {
            None
        }
    }
}

/// The image of a matrix as a row-reduced span of its columns.
pub fn column_space(m: &SparseMatrix) -> RowReduction {
    m.transpose().row_reduce()
}

/// One exact solution of `m · x = b` (free variables set to zero), or `None`
/// when the system is inconsistent.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<Vec<Scalar>> {
    let field = m.field();
    let augmented_col = m.cols();
    let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
    for r in 0..m.rows() {
        for (c, v) in m.row(r) {
            triples.push((r, *c, v.clone()));
        }
    }
    for (r, v) in b {
        triples.push((*r, augmented_col, v.clone()));
    }
    let aug = SparseMatrix::from_triples(field, m.rows(), augmented_col + 1, triples);
    let rr = aug.row_reduce();
    let mut x = vec![field.zero(); m.cols()];
    for (er, pc) in &rr.pivots {
        if *pc == augmented_col {
            return None; // pivot in the augmented column: inconsistent
        }
        x[*pc] = rr.rref.entry(*er, augmented_col);
    }
    // Exactness check.
    let xs: SparseVec = x
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect();
    let mut residual: std::collections::BTreeMap<usize, Scalar> =
        m.apply(&xs).into_iter().collect();
    for (r, v) in b {
        axpy(&field, &mut residual, &field.neg(&field.one()), &vec![(*r, v.clone())]);
    }
    if residual.is_empty() {
        Some(x)
    } else {
        None
    }
}

/// Quotient representatives: rows spanning `cycles` reduced modulo the row
/// space of `boundaries`, then re-reduced to a canonical independent set.
/// Returns the reduced representatives (one per quotient dimension).
pub fn quotient_representatives(
    field: FieldSpec,
    ambient: usize,
    cycles: &[SparseVec],
    boundaries: &RowReduction,
) -> Vec<SparseVec> {
    let reduced: Vec<SparseVec> = cycles
        .iter()
        .map(|v| boundaries.reduce_mod_rowspace(v))
        .filter(|v| !v.is_empty())
        .collect();
    let span = SparseMatrix::from_rows(field, ambient, reduced).row_reduce();
    (0..span.rank)
        .map(|r| span.rref.row(r).clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let m = SparseMatrix::zero(f(5), 3, 3);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 0);
        assert_eq!(rr.kernel_basis().len(), 3);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let m = SparseMatrix::identity(FieldSpec::Rationals, 4);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 4);
        assert!(rr.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_all_ones_over_f2() {
        // Oracle: enumerate all four vectors of F_2^2 and keep those killed
        // by [[1,1],[1,1]].
        let field = f(2);
        let one = field.one();
        let m = SparseMatrix::from_triples(
            field,
            2,
            2,
            vec![
                (0, 0, one.clone()),
                (0, 1, one.clone()),
                (1, 0, one.clone()),
                (1, 1, one.clone()),
            ],
        );
        let mut oracle_kernel = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                let v: SparseVec = [(0, Scalar::Mod(a)), (1, Scalar::Mod(b))]
                    .into_iter()
                    .filter(|(_, s)| !s.is_zero())
                    .collect();
                if m.apply(&v).is_empty() && !v.is_empty() {
                    oracle_kernel.push(v);
                }
            }
        }
        assert_eq!(oracle_kernel.len(), 1); // only (1,1)
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 1);
        let kb = rr.kernel_basis();
        assert_eq!(kb.len(), 1);
        assert_eq!(kb[0], oracle_kernel[0]);
    }

    #[test]
    fn kernel_vectors_are_exact() {
        let field = FieldSpec::Rationals;
        let entries = vec![
            (0, 0, field.from_integer(2)),
            (0, 1, field.from_integer(4)),
            (0, 2, field.from_integer(-2)),
            (1, 0, field.from_integer(1)),
            (1, 1, field.from_integer(2)),
            (1, 2, field.from_integer(-1)),
        ];
        let m = SparseMatrix::from_triples(field, 2, 3, entries);
        let rr = m.row_reduce();
        assert_eq!(rr.rank, 1);
        let kb = rr.kernel_basis();
        assert_eq!(kb.len(), 2);
        for v in &kb {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn rank_nullity_and_transpose_rank() {
        let field = f(3);
        let m = SparseMatrix::from_triples(
            field,
            3,
            4,
            vec![
                (0, 0, Scalar::Mod(1)),
                (0, 2, Scalar::Mod(2)),
                (1, 1, Scalar::Mod(1)),
                (2, 0, Scalar::Mod(2)),
                (2, 2, Scalar::Mod(1)),
            ],
        );
        let rr = m.row_reduce();
        assert_eq!(rr.rank + rr.kernel_basis().len(), m.cols());
        assert_eq!(rr.rank, m.transpose().rank());
    }

    #[test]
    fn reduce_mod_rowspace_is_canonical() {
        let field = f(5);
        let rows = vec![
            vec![(0, Scalar::Mod(1)), (1, Scalar::Mod(2))],
            vec![(1, Scalar::Mod(1)), (2, Scalar::Mod(3))],
        ];
        let m = SparseMatrix::from_rows(field, 3, rows);
        let rr = m.row_reduce();
        // A vector inside the row space must reduce to zero.
        let inside = vec![(0, Scalar::Mod(2)), (1, Scalar::Mod(0)), (2, Scalar::Mod(3))];
        let inside: SparseVec = inside.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        // 2*(row0) - 2*... compute honestly: 2*row0 + 3*row1 = (2, 4+3, 9) = (2, 2, 4)
        let combo = {
            let mut acc = BTreeMap::new();
            axpy(&field, &mut acc, &Scalar::Mod(2), &m.row(0).clone());
            axpy(&field, &mut acc, &Scalar::Mod(3), &m.row(1).clone());
            collect_sparse(acc)
        };
        assert!(rr.reduce_mod_rowspace(&combo).is_empty());
        assert!(rr.coordinates_in_rowspace(&combo).is_some());
        let _ = inside;
        // A vector outside reduces to something nonzero.
        let outside = vec![(0, Scalar::Mod(1))];
        assert!(rr.coordinates_in_rowspace(&outside).is_none());
    }
}
