//! The normalized complex of the cyclic cobar object, its bicomplex with the
//! internal differential, the total complex, and the bigraded homology
//! `coHH_{s,t}`.
//!
//! Cells use the structural basis forced by counit-compatible bases: the
//! intersection of codegeneracy kernels inside `(C^{⊗ s+1})_t` is spanned by
//! the words whose middle slots avoid the counit element. For connected
//! coalgebras that kills every cell with `s > t`, so `S = D` yields exact
//! answers in the whole window `t <= D`.

use std::collections::HashMap;

use crate::coalgebra::{CoalgebraPresentation, ElemId};
use crate::field::FieldSpec;
use crate::graded::render_vector;
use crate::matrix::{column_space, quotient_representatives, SparseMatrix, SparseVec};
use crate::tensor::{horizontal_diff_word, vertical_diff_word, word_degree, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("input must be connected (degree 0 spanned by the counit element)")]
    NotConnected,
    #[error("horizontal differential leaves the normalized subspace at (s={0}, t={1}); sign bug upstream")]
    NotNormalized(usize, usize),
    #[error("d_h∘d_h ≠ 0 at (s={0}, t={1})")]
    HorizontalSquare(usize, usize),
    #[error("d_v∘d_v ≠ 0 at (s={0}, t={1})")]
    VerticalSquare(usize, usize),
    #[error("d_h and d_v fail to commute at (s={0}, t={1})")]
    MixedSquare(usize, usize),
    #[error("total differential fails d∘d = 0 at degree {0}")]
    TotalSquare(i64),
    #[error(transparent)]
    Graded(#[from] crate::graded::GradedError),
}

/// The normalized bicomplex `N^{s,t}` for `0 <= s <= S`, `0 <= t <= D`,
/// with horizontal differential `Σ (-1)^i δ_i` and vertical differential
/// induced by the internal differential (zero when absent).
pub struct Bicomplex<'c> {
    pub coalg: &'c CoalgebraPresentation,
    pub s_max: usize,
    pub d_max: usize,
    /// `cells[s][t]`: normalized words, slot 0 free, slots 1..=s reduced.
    cells: Vec<Vec<Vec<Word>>>,
    index: Vec<Vec<HashMap<Word, usize>>>,
    /// `d_h[s][t] : N^{s,t} -> N^{s+1,t}` (present while `s < s_max`).
    d_h: Vec<Vec<SparseMatrix>>,
    /// `d_v[s][t] : N^{s,t} -> N^{s,t+1}` (zero matrices when no differential).
    d_v: Vec<Vec<SparseMatrix>>,
}

fn enumerate_cells(
    c: &CoalgebraPresentation,
    s_max: usize,
    d_max: usize,
) -> Vec<Vec<Vec<Word>>> {
    // Words in lexicographic order: slot 0 over all of C, slots 1..=s over
    // the non-unit basis.
    let mut cells: Vec<Vec<Vec<Word>>> = Vec::with_capacity(s_max + 1);
    for s in 0..=s_max {
        let mut level: Vec<Vec<Word>> = vec![Vec::new(); d_max + 1];
        let mut stack: Word = Vec::with_capacity(s + 1);
        fn extend(
            c: &CoalgebraPresentation,
            len: usize,
            d_max: usize,
            used: usize,
            stack: &mut Word,
            out: &mut Vec<Vec<Word>>,
        ) {
            if stack.len() == len {
                out[used].push(stack.clone());
                return;
            }
            let reduced_slot = !stack.is_empty();
            for degree in 0..=(d_max - used) {
                for index in 0..c.dim(degree) {
                    let e = ElemId { degree, index };
                    if reduced_slot && c.is_unit(e) {
                        continue;
                    }
                    stack.push(e);
                    extend(c, len, d_max, used + degree, stack, out);
                    stack.pop();
                }
            }
        }
        extend(c, s + 1, d_max, 0, &mut stack, &mut level);
        cells.push(level);
    }
    cells
}

fn is_normalized(c: &CoalgebraPresentation, w: &Word) -> bool {
    w[1..].iter().all(|e| !c.is_unit(*e))
}

impl<'c> Bicomplex<'c> {
    pub fn cell_words(&self, s: usize, t: usize) -> &[Word] {
        &self.cells[s][t]
    }

    pub fn dim(&self, s: usize, t: usize) -> usize {
        if s <= self.s_max && t <= self.d_max {
            self.cells[s][t].len()
        } else {
            0
        }
    }

    pub fn cell_index(&self, s: usize, w: &Word) -> Option<usize> {
        self.index[s][word_degree(w)].get(w).copied()
    }

    pub fn horizontal(&self, s: usize, t: usize) -> SparseMatrix {
        if s < self.s_max {
            self.d_h[s][t].clone()
        } else {
            SparseMatrix::zero(self.coalg.field(), 0, self.dim(s, t))
        }
    }

    pub fn vertical(&self, s: usize, t: usize) -> SparseMatrix {
        if t < self.d_max {
            self.d_v[s][t].clone()
        } else {
            SparseMatrix::zero(self.coalg.field(), 0, self.dim(s, t))
        }
    }

    pub fn has_vertical(&self) -> bool {
        self.coalg.differential().is_some()
    }

    /// Renders a cell vector as a sum of `⊗`-words.
    pub fn render(&self, s: usize, t: usize, v: &SparseVec) -> String {
        let names: Vec<String> = self.cells[s][t]
            .iter()
            .map(|w| {
                w.iter()
                    .map(|e| self.coalg.name(*e).to_string())
                    .collect::<Vec<_>>()
                    .join("⊗")
            })
            .collect();
        render_vector(&self.coalg.field(), v, &names)
    }

    /// Euler characteristic of the column `t`: `Σ_s (-1)^s dim N^{s,t}`.
    pub fn column_euler(&self, t: usize) -> i64 {
        (0..=self.s_max)
            .map(|s| {
                let d = self.dim(s, t) as i64;
                if s % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// The column complex `N^{•,t}` with the horizontal differential.
    pub fn column_complex(&self, t: usize) -> crate::graded::ChainComplex {
        let field = self.coalg.field();
        let mut dims = std::collections::BTreeMap::new();
        let mut diffs = std::collections::BTreeMap::new();
        for s in 0..=self.s_max {
            dims.insert(s as i64, self.dim(s, t));
            if s < self.s_max {
                diffs.insert(s as i64, self.d_h[s][t].clone());
            }
        }
        crate::graded::ChainComplex {
            field,
            orientation: 1,
            dims,
            diffs,
        }
    }
}

/// Builds the normalized bicomplex, verifying the structural invariants
/// exactly: the differential stays normalized, both squares vanish, and the
/// two differentials commute (the total-complex sign does the anticommuting).
pub fn normalized_bicomplex<'c>(
    c: &'c CoalgebraPresentation,
    s_max: usize,
) -> Result<Bicomplex<'c>, ComplexError> {
    let field = c.field();
    let d_max = c.truncation();
    let cells = enumerate_cells(c, s_max, d_max);
    let index: Vec<Vec<HashMap<Word, usize>>> = cells
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
                .collect()
        })
        .collect();

    let mut d_h: Vec<Vec<SparseMatrix>> = Vec::new();
    for s in 0..s_max {
        let mut per_t = Vec::new();
        for t in 0..=d_max {
            let mut triples = Vec::new();
            for (col, w) in cells[s][t].iter().enumerate() {
                for (nw, v) in horizontal_diff_word(c, s, w) {
                    if !is_normalized(c, &nw) {
                        // Non-normalized words must cancel in the alternating
                        // sum; a survivor indicates a sign bug.
                        return Err(ComplexError::NotNormalized(s, t));
                    }
                    let row = index[s + 1][t][&nw];
                    triples.push((row, col, v));
                }
            }
            per_t.push(SparseMatrix::from_triples(
                field,
                cells[s + 1][t].len(),
                cells[s][t].len(),
                triples,
            ));
        }
        d_h.push(per_t);
    }

    let mut d_v: Vec<Vec<SparseMatrix>> = Vec::new();
    for (s, level) in cells.iter().enumerate() {
        let mut per_t = Vec::new();
        for t in 0..d_max {
            let mut triples = Vec::new();
            for (col, w) in level[t].iter().enumerate() {
                for (nw, v) in vertical_diff_word(c, w) {
                    debug_assert!(is_normalized(c, &nw));
                    let row = index[s][t + 1][&nw];
                    triples.push((row, col, v));
                }
            }
            per_t.push(SparseMatrix::from_triples(
                field,
                level[t + 1].len(),
                level[t].len(),
                triples,
            ));
        }
        d_v.push(per_t);
    }

    let b = Bicomplex {
        coalg: c,
        s_max,
        d_max,
        cells,
        index,
        d_h,
        d_v,
    };

    // d_h² = 0.
    for s in 0..s_max.saturating_sub(1) {
        for t in 0..=d_max {
            if !b.d_h[s + 1][t].compose(&b.d_h[s][t]).is_zero() {
                return Err(ComplexError::HorizontalSquare(s, t));
            }
        }
    }
    if b.has_vertical() {
        for s in 0..=s_max {
            for t in 0..d_max.saturating_sub(1) {
                if !b.d_v[s][t + 1].compose(&b.d_v[s][t]).is_zero() {
                    return Err(ComplexError::VerticalSquare(s, t));
                }
            }
        }
        for s in 0..s_max {
            for t in 0..d_max {
                let hv = b.d_h[s][t + 1].compose(&b.d_v[s][t]);
                let vh = b.d_v[s + 1][t].compose(&b.d_h[s][t]);
                if hv != vh {
                    return Err(ComplexError::MixedSquare(s, t));
                }
            }
        }
    }
    Ok(b)
}

/// Collapses the bicomplex to its total cochain complex:
/// `Tot^u = ⊕_{s+t=u} N^{s,t}` with differential `d_h + (-1)^s d_v`.
/// Exact through total degree `min(S, D)`; blocks are ordered by `s`.
pub fn total_complex(b: &Bicomplex<'_>) -> Result<crate::graded::ChainComplex, ComplexError> {
    let field = b.coalg.field();
    let u_max = b.s_max + b.d_max;
    let offsets = |u: usize| -> Vec<(usize, usize, usize)> {
        // (s, t, offset) blocks with s + t = u.
        let mut out = Vec::new();
        let mut off = 0;
        for s in 0..=b.s_max.min(u) {
            let t = u - s;
            if t <= b.d_max {
                out.push((s, t, off));
                off += b.dim(s, t);
            }
        }
        out
    };
    let mut dims = std::collections::BTreeMap::new();
    let mut diffs = std::collections::BTreeMap::new();
    for u in 0..=u_max {
        let blocks = offsets(u);
        let total: usize = blocks.iter().map(|(s, t, _)| b.dim(*s, *t)).sum();
        dims.insert(u as i64, total);
    }
    for u in 0..u_max {
        let source_blocks = offsets(u);
        let target_blocks = offsets(u + 1);
        let find_target = |s: usize, t: usize| -> Option<usize> {
            target_blocks
                .iter()
                .find(|(bs, bt, _)| *bs == s && *bt == t)
                .map(|(_, _, off)| *off)
        };
        let mut triples = Vec::new();
        for (s, t, src_off) in &source_blocks {
            // Horizontal part into (s+1, t).
            if *s < b.s_max {
                if let Some(tgt_off) = find_target(s + 1, *t) {
                    let m = &b.d_h[*s][*t];
                    for r in 0..m.rows() {
                        for (cidx, v) in m.row(r) {
                            triples.push((tgt_off + r, src_off + cidx, v.clone()));
                        }
                    }
                }
            }
            // Vertical part into (s, t+1) with sign (-1)^s.
            if *t < b.d_max && b.has_vertical() {
                if let Some(tgt_off) = find_target(*s, t + 1) {
                    let sign = field.sign(*s);
                    let m = &b.d_v[*s][*t];
                    for r in 0..m.rows() {
                        for (cidx, v) in m.row(r) {
                            triples.push((tgt_off + r, src_off + cidx, field.mul(&sign, v)));
                        }
                    }
                }
            }
        }
        let rows = dims[&((u + 1) as i64)];
        let cols = dims[&(u as i64)];
        diffs.insert(
            u as i64,
            SparseMatrix::from_triples(field, rows, cols, triples),
        );
    }
    let cx = crate::graded::ChainComplex {
        field,
        orientation: 1,
        dims,
        diffs,
    };
    cx.verify_squares_to_zero()
        .map_err(|e| match e {
            crate::graded::GradedError::NotAComplex(n) => ComplexError::TotalSquare(n),
            other => ComplexError::Graded(other),
        })?;
    Ok(cx)
}

/// One homology class: a representative cycle in cell coordinates plus its
/// rendering as a sum of tensor words.
#[derive(Clone, Debug)]
pub struct ClassRep {
    pub vector: SparseVec,
    pub rendered: String,
}

/// Bigraded dimensions and representatives of `coHH_{s,t}`, valid for the
/// recorded window.
#[derive(Clone, Debug)]
pub struct BigradedTable {
    pub field: FieldSpec,
    pub s_max: usize,
    pub d_max: usize,
    /// `dims[s][t]`.
    pub dims: Vec<Vec<usize>>,
    pub reps: Vec<Vec<Vec<ClassRep>>>,
    /// `cell_dims[s][t] = dim N^{s,t}`, for Euler-characteristic checks.
    pub cell_dims: Vec<Vec<usize>>,
}

impl BigradedTable {
    pub fn dim(&self, s: usize, t: usize) -> usize {
        if s <= self.s_max && t <= self.d_max {
            self.dims[s][t]
        } else {
            0
        }
    }

    /// Dimensions per total degree `t - s` (homological reading).
    pub fn total_degree_dims(&self) -> std::collections::BTreeMap<i64, usize> {
        let mut out = std::collections::BTreeMap::new();
        for s in 0..=self.s_max {
            for t in 0..=self.d_max {
                if self.dims[s][t] > 0 {
                    *out.entry(t as i64 - s as i64).or_insert(0) += self.dims[s][t];
                }
            }
        }
        out
    }
}

/// Total-complex homology of a dg input, per total cochain degree `u = s+t`.
#[derive(Clone, Debug)]
pub struct TotalTable {
    pub field: FieldSpec,
    pub s_max: usize,
    pub d_max: usize,
    pub dims: std::collections::BTreeMap<i64, usize>,
}

/// The coHochschild homology of a connected coaugmented coalgebra: bigraded
/// `coHH_{s,t}` with representatives when the internal differential is zero,
/// total-complex homology (labeled by `u = s+t`) otherwise.
pub enum CohhResult {
    Bigraded(BigradedTable),
    TotalComplex(TotalTable),
}

pub fn cohh(c: &CoalgebraPresentation) -> Result<CohhResult, ComplexError> {
    if !c.is_connected() {
        return Err(ComplexError::NotConnected);
    }
    let d_max = c.truncation();
    let b = normalized_bicomplex(c, d_max)?;
    if b.has_vertical() {
        let tot = total_complex(&b)?;
        let mut dims = std::collections::BTreeMap::new();
        for u in 0..=(d_max as i64) {
            let (h, _) = tot.homology(u)?;
            dims.insert(u, h);
        }
        return Ok(CohhResult::TotalComplex(TotalTable {
            field: c.field(),
            s_max: d_max,
            d_max,
            dims,
        }));
    }
    Ok(CohhResult::Bigraded(bigraded_homology(&b)?))
}

/// coHH over an explicitly smaller cosimplicial window `S`: one extra level
/// is assembled so the homology at `s = S` is honest, and the table is
/// truncated back to `s <= S`. Exact there; the caller labels the answer
/// partial when `S < D`. Zero-differential inputs only.
pub fn cohh_bigraded_with_window(
    c: &CoalgebraPresentation,
    s_max: usize,
) -> Result<BigradedTable, ComplexError> {
    if !c.is_connected() {
        return Err(ComplexError::NotConnected);
    }
    assert!(
        c.differential().is_none(),
        "partial cosimplicial windows apply to zero-differential inputs"
    );
    let b = normalized_bicomplex(c, s_max + 1)?;
    let full = bigraded_homology(&b)?;
    Ok(BigradedTable {
        field: full.field,
        s_max,
        d_max: full.d_max,
        dims: full.dims[..=s_max].to_vec(),
        reps: full.reps[..=s_max].to_vec(),
        cell_dims: full.cell_dims[..=s_max].to_vec(),
    })
}

/// Column-by-column homology of the horizontal complexes `N^{•,t}`.
pub fn bigraded_homology(b: &Bicomplex<'_>) -> Result<BigradedTable, ComplexError> {
    let field = b.coalg.field();
    let mut dims = vec![vec![0usize; b.d_max + 1]; b.s_max + 1];
    let mut reps: Vec<Vec<Vec<ClassRep>>> =
        vec![vec![Vec::new(); b.d_max + 1]; b.s_max + 1];
    let mut cell_dims = vec![vec![0usize; b.d_max + 1]; b.s_max + 1];
    for t in 0..=b.d_max {
        for s in 0..=b.s_max {
            cell_dims[s][t] = b.dim(s, t);
            let out = b.horizontal(s, t);
            let inc = if s > 0 {
                b.horizontal(s - 1, t)
            } else {
                SparseMatrix::zero(field, b.dim(0, t), 0)
            };
            if !out.compose(&inc).is_zero() {
                return Err(ComplexError::HorizontalSquare(s - 1, t));
            }
            let cycles = out.row_reduce().kernel_basis();
            let boundaries = column_space(&inc);
            let classes =
                quotient_representatives(field, b.dim(s, t), &cycles, &boundaries);
            dims[s][t] = classes.len();
            reps[s][t] = classes
                .into_iter()
                .map(|v| ClassRep {
                    rendered: b.render(s, t, &v),
                    vector: v,
                })
                .collect();
        }
    }
    Ok(BigradedTable {
        field,
        s_max: b.s_max,
        d_max: b.d_max,
        dims,
        reps,
        cell_dims,
    })
}
