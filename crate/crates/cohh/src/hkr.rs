//! The cofree comparison: the bigraded module `Ω^{S^c(X)|k}`, the dimension
//! comparison against computed coHH, the explicit one-cogenerator cycles,
//! and the two-step resolution exactness check.

use crate::coalgebra::{
    cofree_cocommutative, named_coalgebra, CoalgebraError, CoalgebraPresentation, NamedKind,
};
use crate::complex::{cohh, normalized_bicomplex, BigradedTable, CohhResult, ComplexError};
use crate::field::FieldSpec;
use crate::graded::{tensor_index, tensor_space};
use crate::matrix::SparseMatrix;
use crate::tensor::{horizontal_diff_word, Word, WordSum};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HkrError {
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Graded(#[from] crate::graded::GradedError),
    #[error("generator {0:?} violates the parity constraint")]
    Parity(String),
    #[error("explicit cycle fails to be a cycle at (s={0}, t={1})")]
    NotACycle(usize, usize),
    #[error("explicit cycles do not span the homology at (s={0}, t={1})")]
    NotABasis(usize, usize),
}

/// The bigraded dimension table of `Ω^{S^c(X)|k}`: outside characteristic 2
/// this is `U(S^c(X)) ⊗ U(S^c(Σ^{-1}X))`, in characteristic 2 it is
/// `U(S^c(X)) ⊗ Λ(Σ^{-1}X)` with genuine exterior powers. A desuspended
/// generator sits in bidegree `(1, deg x)`, so its total degree drops by
/// one; parities are taken with respect to the total degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityMode {
    /// Shifted generators alternate parity with the total degree.
    CharNotTwo,
    /// Exterior powers on every shifted generator.
    CharTwo,
}

#[derive(Clone, Debug)]
pub struct OmegaModule {
    pub field: FieldSpec,
    pub d_max: usize,
    pub parity_mode: ParityMode,
    /// dims[s][t]
    pub dims: Vec<Vec<usize>>,
}

impl OmegaModule {
    pub fn dim(&self, s: usize, t: usize) -> usize {
        if s <= self.d_max && t <= self.d_max {
            self.dims[s][t]
        } else {
            0
        }
    }
}

/// Bidegree table of a single tensor factor.
fn factor_table(d_max: usize, entries: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0usize; d_max + 1]; d_max + 1];
    for (s, t) in entries {
        if s <= d_max && t <= d_max {
            out[s][t] += 1;
        }
    }
    out
}

fn convolve(d_max: usize, a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0usize; d_max + 1]; d_max + 1];
    for s1 in 0..=d_max {
        for t1 in 0..=d_max {
            if a[s1][t1] == 0 {
                continue;
            }
            for s2 in 0..=(d_max - s1) {
                for t2 in 0..=(d_max - t1) {
                    out[s1 + s2][t1 + t2] += a[s1][t1] * b[s2][t2];
                }
            }
        }
    }
    out
}

pub fn omega(
    gens: &[(String, usize)],
    field: FieldSpec,
    d_max: usize,
) -> Result<OmegaModule, HkrError> {
    let char2 = field.characteristic() == 2;
    if !char2 {
        // Parity sanity mirrors the S^c model's constraints.
        for (name, d) in gens {
            if *d == 0 {
                return Err(HkrError::Coalgebra(
                    CoalgebraError::DegreeZeroCogenerator(name.clone()),
                ));
            }
        }
    }
    let mut dims = factor_table(d_max, std::iter::once((0usize, 0usize)));
    for (_, d) in gens {
        let d = *d;
        // Unshifted factor of U(S^c(X)).
        let unshifted: Vec<(usize, usize)> = if char2 || d % 2 == 0 {
            (0..).map(|j| (0, j * d)).take_while(|(_, t)| *t <= d_max).collect()
        } else {
            vec![(0, 0), (0, d)]
        };
        dims = convolve(d_max, &dims, &factor_table(d_max, unshifted.into_iter()));
        // Shifted factor: bidegree (1, d) per power; exterior when the
        // shifted total degree d-1 is odd or in characteristic 2, divided
        // powers when it is even.
        let shifted_exterior = char2 || (d % 2 == 0);
        let shifted: Vec<(usize, usize)> = if shifted_exterior {
            vec![(0, 0), (1, d)]
        } else {
            (0..)
                .map(|a| (a, a * d))
                .take_while(|(s, t)| *s <= d_max && *t <= d_max)
                .collect()
        };
        dims = convolve(d_max, &dims, &factor_table(d_max, shifted.into_iter()));
    }
    Ok(OmegaModule {
        field,
        d_max,
        parity_mode: if char2 {
            ParityMode::CharTwo
        } else {
            ParityMode::CharNotTwo
        },
        dims,
    })
}

/// Outcome of the cofree comparison: computed coHH dimensions against the
/// expansion of `Ω^{S^c(X)|k}`, per bidegree.
#[derive(Clone, Debug)]
pub struct HkrReport {
    pub field: FieldSpec,
    pub d_max: usize,
    pub gens: Vec<(String, usize)>,
    pub matches: bool,
    /// (s, t, computed, expected) for every disagreement.
    pub mismatches: Vec<(usize, usize, usize, usize)>,
    pub computed: BigradedTable,
    pub expected: OmegaModule,
}

/// Computes `coHH(S^c(X))` from the normalized complex and compares its
/// bigraded dimensions with `Ω^{S^c(X)|k}` for all `t <= D`.
pub fn hkr_compare(
    gens: &[(String, usize)],
    field: FieldSpec,
    d_max: usize,
) -> Result<HkrReport, HkrError> {
    let c = cofree_cocommutative(field, gens, d_max)?;
    let CohhResult::Bigraded(computed) = cohh(&c)? else {
        unreachable!("cofree model carries no differential")
    };
    let expected = omega(gens, field, d_max)?;
    let mut mismatches = Vec::new();
    for s in 0..=d_max {
        for t in 0..=d_max {
            let got = computed.dim(s, t);
            let want = expected.dim(s, t);
            if got != want {
                mismatches.push((s, t, got, want));
            }
        }
    }
    Ok(HkrReport {
        field,
        d_max,
        gens: gens.to_vec(),
        matches: mismatches.is_empty(),
        mismatches,
        computed,
        expected,
    })
}

/// A verified explicit cycle.
#[derive(Clone, Debug)]
pub struct VerifiedCycle {
    pub s: usize,
    pub t: usize,
    pub rendered: String,
    pub words: WordSum,
}

/// Emits the explicit generating cycles for a single cogenerator and
/// verifies each is a horizontal cycle whose class spans the homology in
/// its bidegree.
///
/// Even degree (or characteristic 2): the `N^1` cycles
/// `Σ_{i=1}^n i · γ_{n-i} ⊗ γ_i`. Odd degree away from characteristic 2:
/// the words `1 ⊗ y^{⊗a}` and `y ⊗ y^{⊗a}`.
pub fn single_cogen_cycles(
    degree: usize,
    field: FieldSpec,
    d_max: usize,
) -> Result<Vec<VerifiedCycle>, HkrError> {
    let gens = vec![("x".to_string(), degree)];
    let c = cofree_cocommutative(field, &gens, d_max)?;
    let b = normalized_bicomplex(&c, d_max)?;
    let CohhResult::Bigraded(table) = cohh(&c)? else {
        unreachable!()
    };
    let even_case = field.characteristic() == 2 || degree % 2 == 0;
    let mut cycles: Vec<(usize, usize, WordSum)> = Vec::new();

    if even_case {
        let gamma = |j: usize| -> crate::coalgebra::ElemId {
            if j == 0 {
                c.unit()
            } else {
                c.elem_by_name(&format!("γ{j}(x)")).expect("within truncation")
            }
        };
        for n in 1..=(d_max / degree) {
            let t = n * degree;
            let mut sum = WordSum::new();
            for i in 1..=n {
                let coeff = field.from_integer(i as i64);
                crate::tensor::add_word(&c, &mut sum, vec![gamma(n - i), gamma(i)], coeff);
            }
            cycles.push((1, t, sum));
        }
    } else {
        let y = c.elem_by_name("x").expect("generator present");
        for a in 0..=(d_max / degree) {
            let t = a * degree;
            let mut word: Word = vec![c.unit()];
            word.extend(std::iter::repeat(y).take(a));
            let mut sum = WordSum::new();
            sum.insert(word, field.one());
            cycles.push((a, t, sum));
            if t + degree <= d_max {
                let mut word: Word = vec![y];
                word.extend(std::iter::repeat(y).take(a));
                let mut sum = WordSum::new();
                sum.insert(word, field.one());
                cycles.push((a, t + degree, sum));
            }
        }
    }

    let mut out = Vec::new();
    let mut seen: std::collections::HashMap<(usize, usize), Vec<crate::matrix::SparseVec>> =
        Default::default();
    for (s, t, sum) in cycles {
        // Cycle check: the horizontal differential kills it exactly.
        let mut image = WordSum::new();
        for (w, v) in &sum {
            for (nw, nv) in horizontal_diff_word(&c, s, w) {
                crate::tensor::add_word(&c, &mut image, nw, field.mul(v, &nv));
            }
        }
        if !image.is_empty() {
            return Err(HkrError::NotACycle(s, t));
        }
        let vector: crate::matrix::SparseVec = {
            let mut acc: std::collections::BTreeMap<usize, crate::field::Scalar> =
                Default::default();
            for (w, v) in &sum {
                let idx = b.cell_index(s, w).expect("cycle words are normalized");
                acc.insert(idx, v.clone());
            }
            acc.into_iter().collect()
        };
        let rendered = b.render(s, t, &vector);
        seen.entry((s, t)).or_default().push(vector);
        out.push(VerifiedCycle {
            s,
            t,
            rendered,
            words: sum,
        });
    }

    // The emitted cycles must project onto a homology basis bidegree by
    // bidegree: boundaries plus cycles span exactly dim coHH + rank(image).
    for ((s, t), vectors) in seen {
        let boundary = if s > 0 {
            b.horizontal(s - 1, t)
        } else {
            SparseMatrix::zero(field, b.dim(0, t), 0)
        };
        let boundaries = crate::matrix::column_space(&boundary);
        let reduced: Vec<crate::matrix::SparseVec> = vectors
            .iter()
            .map(|v| boundaries.reduce_mod_rowspace(v))
            .collect();
        let span = SparseMatrix::from_rows(field, b.dim(s, t), reduced).rank();
        if span != table.dim(s, t) || vectors.len() != table.dim(s, t) {
            return Err(HkrError::NotABasis(s, t));
        }
    }
    Ok(out)
}

/// Per-degree exactness data for the two-step resolution
/// `S^c(X) --△--> S^c⊗S^c --f--> S^c⊗X⊗S^c -> 0`,
/// with `f(γ_i ⊗ γ_j) = γ_{i-1}⊗x⊗γ_j − γ_i⊗x⊗γ_{j-1}` and `γ_{-1} = 0`.
#[derive(Clone, Debug)]
pub struct DoiReport {
    pub field: FieldSpec,
    pub degree: usize,
    pub d_max: usize,
    pub exact: bool,
    /// (t, what failed) for each internal degree with a defect.
    pub failures: Vec<(usize, String)>,
}

/// Dimension of `(S^c ⊗ X ⊗ S^c)_t` for one cogenerator of the given
/// degree: pairs `(i, j)` with `(i + 1 + j)·|x| = t`.
fn doi_mid_dim(degree: usize, t: usize) -> usize {
    if t % degree != 0 || t < degree {
        0
    } else {
        t / degree
    }
}

/// The middle map `f(γ_i ⊗ γ_j) = γ_{i-1}⊗x⊗γ_j − γ_i⊗x⊗γ_{j-1}` of the
/// two-step resolution, on the degree-`t` slice.
fn doi_f_matrix(c: &CoalgebraPresentation, degree: usize, t: usize) -> SparseMatrix {
    let field = c.field();
    let square = tensor_space(c.space(), c.space()).expect("same truncation");
    let dim_sq = square.dim(t);
    let dim_mid = doi_mid_dim(degree, t);
    let mut triples = Vec::new();
    if t % degree == 0 && dim_sq > 0 {
        let w = t / degree;
        for i in 0..=w {
            let j = w - i;
            // Γ[x] is one-dimensional per multiple of |x|.
            let col = tensor_index(c.space(), c.space(), i * degree, 0, j * degree, 0);
            // Row index of (γ_a, x, γ_b) with a + b = w - 1, ordered by a.
            if i >= 1 {
                triples.push((i - 1, col, field.one()));
            }
            if j >= 1 {
                triples.push((i, col, field.neg(&field.one())));
            }
        }
    }
    SparseMatrix::from_triples(field, dim_mid, dim_sq, triples)
}

pub fn doi_resolution_check(
    degree: usize,
    field: FieldSpec,
    d_max: usize,
) -> Result<DoiReport, HkrError> {
    if field.characteristic() != 2 && degree % 2 != 0 {
        return Err(HkrError::Parity("x".into()));
    }
    let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), degree)], field, d_max)?;
    let comult = c.comult_map();

    let mut failures = Vec::new();
    for t in 0..=d_max {
        let dim_c = c.dim(t);
        let dim_mid = doi_mid_dim(degree, t);
        let f_t = doi_f_matrix(&c, degree, t);
        let comult_t = comult.block(t);

        // f ∘ △ = 0.
        if !f_t.compose(&comult_t).is_zero() {
            failures.push((t, "f∘△ ≠ 0".to_string()));
            continue;
        }
        // △ injective.
        if comult_t.rank() != dim_c {
            failures.push((t, "△ not injective".to_string()));
        }
        // ker f = im △.
        if f_t.row_reduce().kernel_basis().len() != comult_t.rank() {
            failures.push((t, "ker f ≠ im △".to_string()));
        }
        // f surjective.
        if f_t.rank() != dim_mid {
            failures.push((t, "f not surjective".to_string()));
        }
    }
    Ok(DoiReport {
        field,
        degree,
        d_max,
        exact: failures.is_empty(),
        failures,
    })
}
