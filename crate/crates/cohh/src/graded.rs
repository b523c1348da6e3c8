//! Graded vector spaces, graded maps with Koszul signs, and homology of
//! complexes, all truncated at a fixed internal degree bound `D`.
//!
//! Truncation semantics: anything a construction produces above degree `D`
//! is discarded, and callers label every answer "valid for internal degree
//! <= D". With connected gradings each degree slice is exact.

use crate::field::{FieldSpec, Scalar};
use crate::matrix::{
    column_space, quotient_representatives, SparseMatrix, SparseVec,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("duplicate basis name {0:?} in degree {1}")]
    DuplicateName(String, usize),
    #[error("composite of consecutive differentials is nonzero at degree {0} (sign bug upstream)")]
    NotAComplex(i64),
    #[error("map shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// A finite-dimensional graded vector space with a named, ordered basis in
/// each internal degree `0..=D`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    truncation: usize,
    names: Vec<Vec<String>>,
}

impl GradedSpace {
    pub fn empty(truncation: usize) -> Self {
        GradedSpace {
            truncation,
            names: vec![Vec::new(); truncation + 1],
        }
    }

    /// The monoidal unit: one basis element "1" in degree zero.
    pub fn unit(truncation: usize) -> Self {
        let mut s = Self::empty(truncation);
        s.names[0].push("1".to_string());
        s
    }

    pub fn from_names(truncation: usize, names: Vec<Vec<String>>) -> Result<Self, GradedError> {
        let mut padded = names;
        padded.resize(truncation + 1, Vec::new());
        padded.truncate(truncation + 1);
        for (d, level) in padded.iter().enumerate() {
            for (i, n) in level.iter().enumerate() {
                if level[..i].contains(n) {
                    return Err(GradedError::DuplicateName(n.clone(), d));
                }
            }
        }
        Ok(GradedSpace {
            truncation,
            names: padded,
        })
    }

    /// Basis space on a plain generator list `(name, degree)`.
    pub fn from_generators(
        truncation: usize,
        gens: &[(String, usize)],
    ) -> Result<Self, GradedError> {
        let mut names = vec![Vec::new(); truncation + 1];
        for (n, d) in gens {
            if *d <= truncation {
                names[*d].push(n.clone());
            }
        }
        Self::from_names(truncation, names)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self, degree: usize) -> usize {
        if degree <= self.truncation {
            self.names[degree].len()
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.names.iter().map(|v| v.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.names.iter().map(|v| v.len()).sum()
    }

    pub fn names(&self, degree: usize) -> &[String] {
        &self.names[degree]
    }

    pub fn name_of(&self, degree: usize, index: usize) -> &str {
        &self.names[degree][index]
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Index of a named element within its degree.
    pub fn index_of(&self, degree: usize, name: &str) -> Option<usize> {
        self.names.get(degree)?.iter().position(|n| n == name)
    }
}

/// Tensor product of graded spaces. The degree-`t` basis is all pairs
/// `(a, b)` with `deg a + deg b = t <= D`, ordered by (deg a, index a,
/// index b); dimensions convolve.
pub fn tensor_space(v: &GradedSpace, w: &GradedSpace) -> Result<GradedSpace, GradedError> {
    if v.truncation != w.truncation {
        return Err(GradedError::TruncationMismatch(v.truncation, w.truncation));
    }
    let d = v.truncation;
    let mut names = vec![Vec::new(); d + 1];
    for t in 0..=d {
        for ta in 0..=t {
            for a in v.names(ta) {
                for b in w.names(t - ta) {
                    names[t].push(format!("{a}⊗{b}"));
                }
            }
        }
    }
    GradedSpace::from_names(d, names)
}

/// Index of the pair `(ta, ia) ⊗ (tb, ib)` inside the degree-`(ta+tb)` slice
/// of `tensor_space(v, w)`.
pub fn tensor_index(
    v: &GradedSpace,
    w: &GradedSpace,
    ta: usize,
    ia: usize,
    tb: usize,
    ib: usize,
) -> usize {
    let t = ta + tb;
    let mut offset = 0;
    for u in 0..ta {
        offset += v.dim(u) * w.dim(t - u);
    }
    offset + ia * w.dim(tb) + ib
}

/// A degree-homogeneous linear map between graded spaces, stored as one
/// sparse block per source degree. Blocks that would land above the
/// truncation are absent and treated as discarded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMap {
    field: FieldSpec,
    shift: i64,
    truncation: usize,
    source_dims: Vec<usize>,
    target_dims: Vec<usize>,
    blocks: Vec<Option<SparseMatrix>>,
}

impl GradedMap {
    pub fn zero(
        field: FieldSpec,
        shift: i64,
        source: &GradedSpace,
        target: &GradedSpace,
    ) -> Self {
        GradedMap {
            field,
            shift,
            truncation: source.truncation(),
            source_dims: source.dims(),
            target_dims: target.dims(),
            blocks: vec![None; source.truncation() + 1],
        }
    }

    pub fn from_dims(
        field: FieldSpec,
        shift: i64,
        truncation: usize,
        source_dims: Vec<usize>,
        target_dims: Vec<usize>,
    ) -> Self {
        GradedMap {
            field,
            shift,
            truncation,
            source_dims,
            target_dims,
            blocks: vec![None; truncation + 1],
        }
    }

    pub fn identity(field: FieldSpec, space: &GradedSpace) -> Self {
        let mut m = Self::zero(field, 0, space, space);
        for t in 0..=space.truncation() {
            m.set_block(t, SparseMatrix::identity(field, space.dim(t)));
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn source_dim(&self, t: usize) -> usize {
        self.source_dims.get(t).copied().unwrap_or(0)
    }

    pub fn target_dim(&self, t: usize) -> usize {
        self.target_dims.get(t).copied().unwrap_or(0)
    }

    fn target_degree(&self, t: usize) -> Option<usize> {
        let td = t as i64 + self.shift;
        if td < 0 || td > self.truncation as i64 {
            None
        } else {
            Some(td as usize)
        }
    }

    pub fn set_block(&mut self, source_degree: usize, block: SparseMatrix) {
        let td = self
            .target_degree(source_degree)
            .expect("block lands outside the truncation window");
        assert_eq!(block.cols(), self.source_dim(source_degree));
        assert_eq!(block.rows(), self.target_dim(td));
        self.blocks[source_degree] = Some(block);
    }

    /// The block on source degree `t`; identity-shaped zero when absent.
    pub fn block(&self, t: usize) -> SparseMatrix {
        if let Some(b) = self.blocks.get(t).and_then(|b| b.as_ref()) {
            return b.clone();
        }
        let rows = self
            .target_degree(t)
            .map(|td| self.target_dim(td))
            .unwrap_or(0);
        SparseMatrix::zero(self.field, rows, self.source_dim(t))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(|b| b.is_zero())
    }

    pub fn apply(&self, source_degree: usize, v: &SparseVec) -> SparseVec {
        self.block(source_degree).apply(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap, GradedError> {
        if self.truncation != other.truncation {
            return Err(GradedError::TruncationMismatch(
                self.truncation,
                other.truncation,
            ));
        }
        if other
            .target_dims
            .iter()
            .zip(self.source_dims.iter())
            .any(|(a, b)| a != b)
        {
            return Err(GradedError::ShapeMismatch(
                "inner dimensions disagree".into(),
            ));
        }
        let mut out = GradedMap::from_dims(
            self.field,
            self.shift + other.shift,
            self.truncation,
            other.source_dims.clone(),
            self.target_dims.clone(),
        );
        for t in 0..=self.truncation {
            let Some(mid) = other.target_degree(t) else { continue };
            if out.target_degree(t).is_none() {
                continue;
            }
            out.set_block(t, self.block(mid).compose(&other.block(t)));
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, GradedError> {
        if self.shift != other.shift
            || self.source_dims != other.source_dims
            || self.target_dims != other.target_dims
        {
            return Err(GradedError::ShapeMismatch("sum of unlike maps".into()));
        }
        let mut out = self.clone();
        for t in 0..=self.truncation {
            if out.target_degree(t).is_some() {
                out.set_block(t, self.block(t).add(&other.block(t)));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, coeff: &Scalar) -> GradedMap {
        let mut out = self.clone();
        for t in 0..=self.truncation {
            if let Some(b) = &self.blocks[t] {
                out.blocks[t] = Some(b.scale(coeff));
            }
        }
        out
    }

    /// Exact equality of all blocks within the window.
    pub fn equal(&self, other: &GradedMap) -> bool {
        if self.shift != other.shift || self.truncation != other.truncation {
            return false;
        }
        (0..=self.truncation).all(|t| self.block(t) == other.block(t))
    }
}

/// Koszul tensor product of graded maps:
/// `(f ⊗ g)(a ⊗ b) = (-1)^{deg(g)·deg(a)} f(a) ⊗ g(b)`.
///
/// Sources and targets are the corresponding tensor spaces with the pair
/// basis ordering of [`tensor_space`].
pub fn tensor_map_koszul(
    f: &GradedMap,
    g: &GradedMap,
    f_source: &GradedSpace,
    g_source: &GradedSpace,
    f_target: &GradedSpace,
    g_target: &GradedSpace,
) -> Result<GradedMap, GradedError> {
    if f.truncation() != g.truncation() {
        return Err(GradedError::TruncationMismatch(
            f.truncation(),
            g.truncation(),
        ));
    }
    if f.field() != g.field() {
        return Err(GradedError::FieldMismatch);
    }
    let field = f.field();
    let d = f.truncation();
    let source = tensor_space(f_source, g_source)?;
    let target = tensor_space(f_target, g_target)?;
    let mut out = GradedMap::zero(field, f.shift() + g.shift(), &source, &target);
    for t in 0..=d {
        let Some(tt) = out.target_degree(t) else { continue };
        let mut triples: Vec<(usize, usize, Scalar)> = Vec::new();
        for ta in 0..=t {
            let tb = t - ta;
            // Koszul sign: g of degree shift(g) moves past an element of
            // degree ta.
            let sign = field.sign((g.shift().rem_euclid(2) as usize) * ta);
            let (Some(fta), Some(gtb)) = (
                (ta as i64 + f.shift()).try_into().ok().filter(|x: &usize| *x <= d),
                (tb as i64 + g.shift()).try_into().ok().filter(|x: &usize| *x <= d),
            ) else {
                // One factor escapes the window: if that block is nonzero we
                // silently discard it, per the truncation policy. Discarding
                // also kills the paired factor.
                continue;
            };
            let fa_cols = f.block(ta).transpose();
            let gb_cols = g.block(tb).transpose();
            for ia in 0..f_source.dim(ta) {
                for ib in 0..g_source.dim(tb) {
                    let col = tensor_index(f_source, g_source, ta, ia, tb, ib);
                    for (ra, va) in fa_cols.row(ia).iter() {
                        for (rb, vb) in gb_cols.row(ib).iter() {
                            let coeff =
                                field.mul(&sign, &field.mul(va, vb));
                            let row =
                                tensor_index(f_target, g_target, fta, *ra, gtb, *rb);
                            triples.push((row, col, coeff));
                        }
                    }
                }
            }
        }
        out.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(tt), source.dim(t), triples),
        );
    }
    Ok(out)
}

/// A complex of finite-dimensional spaces indexed by an integer degree,
/// with differentials of a fixed shift `+1` or `-1`.
pub struct ChainComplex {
    pub field: FieldSpec,
    /// +1 for cochain orientation, -1 for chain orientation.
    pub orientation: i64,
    /// Dimension per degree; degrees outside the map are zero.
    pub dims: std::collections::BTreeMap<i64, usize>,
    /// `diffs[n]`: matrix of `d_n : C_n -> C_{n+orientation}`.
    pub diffs: std::collections::BTreeMap<i64, SparseMatrix>,
}

impl ChainComplex {
    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn diff(&self, n: i64) -> SparseMatrix {
        self.diffs.get(&n).cloned().unwrap_or_else(|| {
            SparseMatrix::zero(self.field, self.dim(n + self.orientation), self.dim(n))
        })
    }

    /// Checks `d ∘ d = 0` in the window where all three terms are stored.
    pub fn verify_squares_to_zero(&self) -> Result<(), GradedError> {
        for (&n, d) in &self.diffs {
            let next = self.diff(n + self.orientation);
            if !next.compose(d).is_zero() {
                return Err(GradedError::NotAComplex(n));
            }
        }
        Ok(())
    }

    /// Homology at degree `n`: dimension and canonical representative
    /// cycles (kernel vectors reduced against the image).
    pub fn homology(&self, n: i64) -> Result<(usize, Vec<SparseVec>), GradedError> {
        let d_out = self.diff(n);
        let d_in = self.diff(n - self.orientation);
        if !d_out.compose(&d_in).is_zero() {
            return Err(GradedError::NotAComplex(n - self.orientation));
        }
        let cycles = d_out.row_reduce().kernel_basis();
        let boundaries = column_space(&d_in);
        let reps = quotient_representatives(self.field, self.dim(n), &cycles, &boundaries);
        let dim_h = cycles.len() - boundaries.rank;
        debug_assert_eq!(reps.len(), dim_h);
        Ok((dim_h, reps))
    }

    /// Alternating sum of dimensions over the stored support.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(&n, &d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Renders a sparse vector against basis names, e.g. `"2·a⊗b + c⊗d"`.
pub fn render_vector(field: &FieldSpec, v: &SparseVec, names: &[String]) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in v {
        let name = &names[*i];
        if c.is_one() {
            parts.push(name.clone());
        } else {
            parts.push(format!("{}·{}", field.format_scalar(c), name));
        }
    }
    parts.join(" + ")
}
