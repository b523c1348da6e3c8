//! Matching spaces of the cyclic cobar object and the constructive
//! surjectivity of the matching maps.
//!
//! `M_n` sits inside the `n`-fold product of `C^{⊗n}` slices cut out by the
//! relations `σ_i(x_j) = σ_{j-1}(x_i)` for `0 <= i < j <= n-1`; the matching
//! map assembles the codegeneracies, and an explicit linear section is built
//! from the unit insertions `η_i`.

use crate::coalgebra::CoalgebraPresentation;
use crate::field::Scalar;
use crate::matrix::{SparseMatrix, SparseVec};
use crate::tensor::{
    codegeneracy_matrix, codegeneracy_word, eta_word, map_sum, TensorLevel,
    WordSum,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching spaces need n >= 1, got {0}")]
    LevelTooSmall(usize),
    #[error("tuple component {0} has the wrong length")]
    BadTuple(usize),
    #[error("tuple violates the matching relations at (i,j) = ({0},{1})")]
    RelationViolation(usize, usize),
}

/// The matching data at level `n` and internal degree `t`: the ambient
/// product of `n` copies of `(C^{⊗n})_t` with the relation kernel.
pub struct MatchingSpace {
    pub n: usize,
    pub degree: usize,
    /// Dimension of one ambient block `(C^{⊗n})_t`.
    pub block_dim: usize,
    /// Canonical basis of `M_n` in flat ambient coordinates
    /// (block `s` occupies indices `s·block_dim .. (s+1)·block_dim`).
    pub basis: Vec<SparseVec>,
}

/// Basis of `M_n` in internal degree `t`: kernel of the sparsely assembled
/// relation matrix.
pub fn matching_space(
    c: &CoalgebraPresentation,
    n: usize,
    t: usize,
) -> Result<MatchingSpace, MatchingError> {
    if n == 0 {
        return Err(MatchingError::LevelTooSmall(0));
    }
    let field = c.field();
    let level = TensorLevel::new(c, n);
    let lower = TensorLevel::new(c, n.saturating_sub(1));
    let block_dim = level.dim(t);
    let ambient = n * block_dim;
    if n == 1 {
        // No relations: M_1 = C.
        let basis = (0..block_dim)
            .map(|i| vec![(i, field.one())])
            .collect();
        return Ok(MatchingSpace {
            n,
            degree: t,
            block_dim,
            basis,
        });
    }
    let row_dim = lower.dim(t);
    let mut triples = Vec::new();
    let mut row_offset = 0usize;
    for j in 0..n {
        for i in 0..j {
            // σ_i(x_j) - σ_{j-1}(x_i) = 0.
            let sigma_i = codegeneracy_matrix(&level, &lower, i).block(t);
            let sigma_jm1 = codegeneracy_matrix(&level, &lower, j - 1).block(t);
            for r in 0..sigma_i.rows() {
                for (col, v) in sigma_i.row(r) {
                    triples.push((row_offset + r, j * block_dim + col, v.clone()));
                }
                for (col, v) in sigma_jm1.row(r) {
                    triples.push((row_offset + r, i * block_dim + col, field.neg(v)));
                }
            }
            row_offset += row_dim;
        }
    }
    let relations = SparseMatrix::from_triples(field, row_offset.max(1), ambient, triples);
    let basis = relations.row_reduce().kernel_basis();
    Ok(MatchingSpace {
        n,
        degree: t,
        block_dim,
        basis,
    })
}

/// The matching map `σ : C^{⊗ n+1} -> (C^{⊗n})^{×n}` with components
/// `σ_0, …, σ_{n-1}`, as one matrix per internal degree in flat ambient
/// coordinates.
pub fn matching_map_matrix(c: &CoalgebraPresentation, n: usize, t: usize) -> SparseMatrix {
    let field = c.field();
    let upper = TensorLevel::new(c, n + 1);
    let level = TensorLevel::new(c, n);
    let block_dim = level.dim(t);
    let mut triples = Vec::new();
    for s in 0..n {
        let sigma = codegeneracy_matrix(&upper, &level, s).block(t);
        for r in 0..sigma.rows() {
            for (col, v) in sigma.row(r) {
                triples.push((s * block_dim + r, *col, v.clone()));
            }
        }
    }
    SparseMatrix::from_triples(field, n * block_dim, upper.dim(t), triples)
}

/// Splits a flat ambient vector into the `n` block components as word sums.
fn tuple_components(
    level: &TensorLevel<'_>,
    n: usize,
    t: usize,
    flat: &SparseVec,
) -> Vec<WordSum> {
    let block_dim = level.dim(t);
    let mut out: Vec<WordSum> = vec![WordSum::new(); n];
    for (idx, v) in flat {
        let block = idx / block_dim;
        let word = level.word(t, idx % block_dim).clone();
        out[block].insert(word, v.clone());
    }
    out
}

/// The explicit preimage of a matching tuple: for each `i`, apply `η_i` to
/// `x_i` corrected by the signed sum over tuples `l_1 < … < l_j <= i-1` of
/// `η_{l_1}σ_{l_1} ⋯ η_{l_j}σ_{l_j}(x_i)`. Fails if the tuple violates the
/// matching relations. The result satisfies `σ_s(y) = x_s` exactly.
pub fn matching_preimage(
    c: &CoalgebraPresentation,
    n: usize,
    t: usize,
    tuple: &[WordSum],
) -> Result<WordSum, MatchingError> {
    if n == 0 {
        return Err(MatchingError::LevelTooSmall(0));
    }
    if tuple.len() != n {
        return Err(MatchingError::BadTuple(tuple.len()));
    }
    let field = c.field();
    // Check the relations σ_i(x_j) = σ_{j-1}(x_i) before constructing.
    for j in 0..n {
        for i in 0..j {
            let lhs = map_sum(c, &tuple[j], |w, v| codegeneracy_word(c, n - 2, i, w, v));
            let rhs = map_sum(c, &tuple[i], |w, v| {
                codegeneracy_word(c, n - 2, j - 1, w, v)
            });
            let mut diff = lhs;
            for (w, v) in rhs {
                crate::tensor::add_word(c, &mut diff, w, field.neg(&v));
            }
            if !diff.is_empty() {
                return Err(MatchingError::RelationViolation(i, j));
            }
        }
    }

    let mut y = WordSum::new();
    for (i, x_i) in tuple.iter().enumerate() {
        // inner = x_i + Σ_{j>=1} (-1)^j Σ_{l_1<…<l_j <= i-1} η_l σ_l … (x_i)
        let mut inner = x_i.clone();
        let subsets = subsets_of(i); // nonempty subsets of {0, …, i-1}
        for subset in subsets {
            let mut term = x_i.clone();
            // Rightmost operator acts first.
            for &l in subset.iter().rev() {
                term = map_sum(c, &term, |w, v| {
                    codegeneracy_word(c, n - 2, l, w, v)
                });
                term = term
                    .into_iter()
                    .map(|(w, v)| (eta_word(c, l, &w), v))
                    .collect();
            }
            let sign = field.sign(subset.len());
            for (w, v) in term {
                crate::tensor::add_word(c, &mut inner, w, field.mul(&sign, &v));
            }
        }
        for (w, v) in inner {
            crate::tensor::add_word(c, &mut y, eta_word(c, i, &w), v);
        }
    }
    let _ = t;
    Ok(y)
}

fn subsets_of(i: usize) -> Vec<Vec<usize>> {
    // Nonempty subsets of {0, …, i-1}, by increasing size then lex.
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << i) {
        let subset: Vec<usize> = (0..i).filter(|l| mask & (1 << l) != 0).collect();
        out.push(subset);
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Per-degree outcome of the surjectivity verification.
#[derive(Clone, Debug)]
pub struct DegreeCheck {
    pub degree: usize,
    pub matching_dim: usize,
    pub matching_map_rank: usize,
    pub basis_tuples_verified: usize,
    pub random_tuples_verified: usize,
}

#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    pub n: usize,
    pub per_degree: Vec<DegreeCheck>,
    pub ok: bool,
    /// First discrepancy, if any: rendered tuple and what went wrong.
    pub counterexample: Option<String>,
}

/// Constructive surjectivity check: for every basis tuple of `M_n` (and a
/// few deterministic pseudo-random combinations), the explicit preimage
/// reproduces the tuple under the matching map; independently the rank of
/// the matching map equals `dim M_n` per degree.
pub fn verify_surjectivity(
    c: &CoalgebraPresentation,
    n: usize,
    trials: usize,
) -> Result<SurjectivityReport, MatchingError> {
    let field = c.field();
    let level = TensorLevel::new(c, n);
    let mut per_degree = Vec::new();
    let mut counterexample = None;
    let mut rng_state = 0x9e3779b97f4a7c15u64;
    let mut next_rand = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };

    'degrees: for t in 0..=c.truncation() {
        let m = matching_space(c, n, t)?;
        let sigma = matching_map_matrix(c, n, t);
        let rank = sigma.rank();
        let mut check = DegreeCheck {
            degree: t,
            matching_dim: m.basis.len(),
            matching_map_rank: rank,
            basis_tuples_verified: 0,
            random_tuples_verified: 0,
        };
        if rank != m.basis.len() {
            counterexample = Some(format!(
                "rank of the matching map in degree {t} is {rank}, expected {}",
                m.basis.len()
            ));
            per_degree.push(check);
            break 'degrees;
        }

        let verify_tuple = |flat: &SparseVec| -> Result<bool, MatchingError> {
            let tuple = tuple_components(&level, n, t, flat);
            let y = matching_preimage(c, n, t, &tuple)?;
            for (s, expected) in tuple.iter().enumerate() {
                let got = map_sum(c, &y, |w, v| codegeneracy_word(c, n - 1, s, w, v));
                let mut diff = got;
                for (w, v) in expected {
                    crate::tensor::add_word(c, &mut diff, w.clone(), field.neg(v));
                }
                if !diff.is_empty() {
                    return Ok(false);
                }
            }
            Ok(true)
        };

        for flat in &m.basis {
            if !verify_tuple(flat)? {
                counterexample = Some(format!(
                    "σ(preimage) differs from the basis tuple in degree {t}"
                ));
                per_degree.push(check);
                break 'degrees;
            }
            check.basis_tuples_verified += 1;
        }
        for _ in 0..trials.min(8) {
            if m.basis.is_empty() {
                break;
            }
            // Small deterministic pseudo-random combination of basis tuples.
            let mut flat_acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
            for b in &m.basis {
                let coeff = field.from_integer((next_rand() % 5) as i64);
                crate::matrix::axpy(&field, &mut flat_acc, &coeff, b);
            }
            let flat: SparseVec = flat_acc.into_iter().collect();
            if !verify_tuple(&flat)? {
                counterexample = Some(format!(
                    "σ(preimage) differs from a random tuple in degree {t}"
                ));
                per_degree.push(check);
                break 'degrees;
            }
            check.random_tuples_verified += 1;
        }
        per_degree.push(check);
    }

    Ok(SurjectivityReport {
        n,
        ok: counterexample.is_none(),
        per_degree,
        counterexample,
    })
}
