//! Tensor powers of a coalgebra with their word bases, and the cosimplicial
//! operators of the cyclic cobar object: cofaces `δ_i`, codegeneracies
//! `σ_i`, and the unit insertions `η_i` of the matching-space section.
//!
//! Level `n` is `C^{⊗ n+1}`. Cofaces apply the comultiplication in slot `i`
//! for `i <= n`; the top coface applies it in slot 0 and cycles the first
//! output to the far right with the Koszul sign of that block permutation.

use std::collections::HashMap;

use crate::coalgebra::{CoalgebraPresentation, ElemId};
use crate::field::Scalar;
use crate::graded::{GradedMap, GradedSpace};
use crate::matrix::SparseMatrix;

pub type Word = Vec<ElemId>;

/// Formal linear combination of words.
pub type WordSum = HashMap<Word, Scalar>;

pub fn word_degree(w: &Word) -> usize {
    w.iter().map(|e| e.degree).sum()
}

pub fn add_word(c: &CoalgebraPresentation, sum: &mut WordSum, w: Word, coeff: Scalar) {
    if coeff.is_zero() {
        return;
    }
    let field = c.field();
    match sum.entry(w) {
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::hash_map::Entry::Occupied(mut e) => {
            let s = field.add(e.get(), &coeff);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// The word basis of `C^{⊗ factors}` in each internal degree `<= D`, in
/// lexicographic order on the `(degree, index)` letters.
pub struct TensorLevel<'c> {
    pub coalg: &'c CoalgebraPresentation,
    pub factors: usize,
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl<'c> TensorLevel<'c> {
    pub fn new(coalg: &'c CoalgebraPresentation, factors: usize) -> Self {
        let d = coalg.truncation();
        let mut words: Vec<Vec<Word>> = vec![Vec::new(); d + 1];
        let mut stack: Word = Vec::with_capacity(factors);
        fn extend(
            coalg: &CoalgebraPresentation,
            factors: usize,
            d: usize,
            used: usize,
            stack: &mut Word,
            out: &mut Vec<Vec<Word>>,
        ) {
            if stack.len() == factors {
                out[used].push(stack.clone());
                return;
            }
            let remaining = factors - stack.len() - 1;
            for degree in 0..=(d - used) {
                // Leave room: later factors contribute at least 0 each, so
                // any degree up to the budget is allowed.
                let _ = remaining;
                for idx in 0..coalg.dim(degree) {
                    stack.push(ElemId { degree, index: idx });
                    extend(coalg, factors, d, used + degree, stack, out);
                    stack.pop();
                }
            }
        }
        if factors == 0 {
            words[0].push(Vec::new());
        } else {
            extend(coalg, factors, d, 0, &mut stack, &mut words);
        }
        let index = words
            .iter()
            .map(|level| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, w)| (w.clone(), i))
                    .collect()
            })
            .collect();
        TensorLevel {
            coalg,
            factors,
            words,
            index,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coalg.truncation()
    }

    pub fn dim(&self, t: usize) -> usize {
        if t <= self.truncation() {
            self.words[t].len()
        } else {
            0
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.words.iter().map(|l| l.len()).collect()
    }

    pub fn words(&self, t: usize) -> &[Word] {
        &self.words[t]
    }

    pub fn word(&self, t: usize, i: usize) -> &Word {
        &self.words[t][i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index[word_degree(w)].get(w).copied()
    }

    /// Graded space view with ⊗-joined names.
    pub fn as_space(&self) -> GradedSpace {
        let names: Vec<Vec<String>> = self
            .words
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|w| {
                        if w.is_empty() {
                            "()".to_string()
                        } else {
                            w.iter()
                                .map(|e| self.coalg.name(*e).to_string())
                                .collect::<Vec<_>>()
                                .join("⊗")
                        }
                    })
                    .collect()
            })
            .collect();
        GradedSpace::from_names(self.truncation(), names).expect("tensor words are distinct")
    }
}

/// `δ_i` on a single word at level `n` (so `n+1` letters in, `n+2` out).
pub fn coface_word(
    c: &CoalgebraPresentation,
    n: usize,
    i: usize,
    w: &Word,
    coeff: &Scalar,
) -> WordSum {
    assert_eq!(w.len(), n + 1, "word length must match the level");
    assert!(i <= n + 1, "coface index out of range");
    let field = c.field();
    let mut out = WordSum::new();
    if i <= n {
        for (a, b, v) in c.comult_terms(w[i]) {
            let mut nw = Vec::with_capacity(n + 2);
            nw.extend_from_slice(&w[..i]);
            nw.push(*a);
            nw.push(*b);
            nw.extend_from_slice(&w[i + 1..]);
            add_word(c, &mut out, nw, field.mul(coeff, v));
        }
    } else {
        // Top coface: comultiply slot 0 and cycle the first output past the
        // rest. The block swap contributes the Koszul sign
        // (-1)^{|a| (|b| + |w_1..w_n|)}.
        let tail_degree: usize = w[1..].iter().map(|e| e.degree).sum();
        for (a, b, v) in c.comult_terms(w[0]) {
            let sign = field.sign(a.degree * (b.degree + tail_degree));
            let mut nw = Vec::with_capacity(n + 2);
            nw.push(*b);
            nw.extend_from_slice(&w[1..]);
            nw.push(*a);
            add_word(c, &mut out, nw, field.mul(coeff, &field.mul(v, &sign)));
        }
    }
    out
}

/// `σ_i` on a single word at level `n+1` (`n+2` letters in, `n+1` out):
/// applies the counit in slot `i+1`.
pub fn codegeneracy_word(
    c: &CoalgebraPresentation,
    n: usize,
    i: usize,
    w: &Word,
    coeff: &Scalar,
) -> WordSum {
    assert_eq!(w.len(), n + 2, "word length must match the level");
    assert!(i <= n, "codegeneracy index out of range");
    let mut out = WordSum::new();
    if c.is_unit(w[i + 1]) {
        let mut nw = Vec::with_capacity(n + 1);
        nw.extend_from_slice(&w[..i + 1]);
        nw.extend_from_slice(&w[i + 2..]);
        add_word(c, &mut out, nw, coeff.clone());
    }
    out
}

/// `η_i = id^{⊗ i+1} ⊗ η ⊗ id^{⊗ n-i-1}` on an `n`-letter word: inserts the
/// coaugmentation after slot `i`. Inserting a degree-0 element picks up no
/// Koszul sign.
pub fn eta_word(c: &CoalgebraPresentation, i: usize, w: &Word) -> Word {
    assert!(i + 1 <= w.len(), "eta index out of range");
    let mut nw = Vec::with_capacity(w.len() + 1);
    nw.extend_from_slice(&w[..i + 1]);
    nw.push(c.unit());
    nw.extend_from_slice(&w[i + 1..]);
    nw
}

/// Applies a word-level operator to a whole sum.
pub fn map_sum<F>(c: &CoalgebraPresentation, sum: &WordSum, f: F) -> WordSum
where
    F: Fn(&Word, &Scalar) -> WordSum,
{
    let field = c.field();
    let mut out = WordSum::new();
    for (w, v) in sum {
        for (nw, nv) in f(w, v) {
            let s = field.add(out.get(&nw).unwrap_or(&field.zero()), &nv);
            if s.is_zero() {
                out.remove(&nw);
            } else {
                out.insert(nw, s);
            }
        }
    }
    out
}

/// The normalized horizontal differential `Σ (-1)^i δ_i` on a level-`n`
/// word.
pub fn horizontal_diff_word(c: &CoalgebraPresentation, n: usize, w: &Word) -> WordSum {
    let field = c.field();
    let mut out = WordSum::new();
    for i in 0..=n + 1 {
        let part = coface_word(c, n, i, w, &field.sign(i));
        for (nw, nv) in part {
            add_word(c, &mut out, nw, nv);
        }
    }
    out
}

/// The internal (vertical) differential on a tensor word:
/// `Σ_i (-1)^{|w_0| + … + |w_{i-1}|} w_0 ⊗ … ⊗ d(w_i) ⊗ … ⊗ w_k`,
/// discarding anything above the truncation.
pub fn vertical_diff_word(c: &CoalgebraPresentation, w: &Word) -> WordSum {
    let field = c.field();
    let d = match c.differential() {
        Some(d) => d,
        None => return WordSum::new(),
    };
    let mut out = WordSum::new();
    let total = word_degree(w);
    if total + 1 > c.truncation() {
        return out;
    }
    let mut prefix = 0usize;
    for (i, e) in w.iter().enumerate() {
        let image = d.apply(e.degree, &vec![(e.index, field.one())]);
        let sign = field.sign(prefix);
        for (j, v) in &image {
            let mut nw = w.clone();
            nw[i] = ElemId {
                degree: e.degree + 1,
                index: *j,
            };
            add_word(c, &mut out, nw, field.mul(&sign, v));
        }
        prefix += e.degree;
    }
    out
}

/// Matrix of the iterated comultiplication `△^n : C -> C^{⊗ n+1}` on the
/// word basis of the target level.
pub fn iterated_comult_matrix(
    c: &CoalgebraPresentation,
    target: &TensorLevel<'_>,
    n: usize,
) -> GradedMap {
    assert_eq!(target.factors, n + 1);
    let field = c.field();
    let mut m = GradedMap::from_dims(
        field,
        0,
        c.truncation(),
        c.space().dims(),
        target.dims(),
    );
    for t in 0..=c.truncation() {
        let mut triples = Vec::new();
        for i in 0..c.dim(t) {
            let e = ElemId { degree: t, index: i };
            for (w, v) in crate::coalgebra::iterated_comult_words(c, e, n) {
                let row = target.index_of(&w).expect("degree preserved");
                triples.push((row, i, v));
            }
        }
        m.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(t), c.dim(t), triples),
        );
    }
    m
}

/// Matrix of `δ_i : level n -> level n+1` on the word bases.
pub fn coface_matrix(
    source: &TensorLevel<'_>,
    target: &TensorLevel<'_>,
    i: usize,
) -> GradedMap {
    let c = source.coalg;
    let n = source.factors - 1;
    assert_eq!(target.factors, source.factors + 1);
    let field = c.field();
    let mut m = GradedMap::from_dims(
        field,
        0,
        c.truncation(),
        source.dims(),
        target.dims(),
    );
    for t in 0..=c.truncation() {
        let mut triples = Vec::new();
        for (col, w) in source.words(t).iter().enumerate() {
            for (nw, v) in coface_word(c, n, i, w, &field.one()) {
                let row = target.index_of(&nw).expect("coface preserves degree");
                triples.push((row, col, v));
            }
        }
        m.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(t), source.dim(t), triples),
        );
    }
    m
}

/// Matrix of `σ_i : level n+1 -> level n` on the word bases.
pub fn codegeneracy_matrix(
    source: &TensorLevel<'_>,
    target: &TensorLevel<'_>,
    i: usize,
) -> GradedMap {
    let c = source.coalg;
    assert_eq!(source.factors, target.factors + 1);
    let n = target.factors - 1;
    let field = c.field();
    let mut m = GradedMap::from_dims(field, 0, c.truncation(), source.dims(), target.dims());
    for t in 0..=c.truncation() {
        let mut triples = Vec::new();
        for (col, w) in source.words(t).iter().enumerate() {
            for (nw, v) in codegeneracy_word(c, n, i, w, &field.one()) {
                let row = target.index_of(&nw).expect("codegeneracy preserves degree");
                triples.push((row, col, v));
            }
        }
        m.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(t), source.dim(t), triples),
        );
    }
    m
}

/// Matrix of `η_i : C^{⊗n} -> C^{⊗n+1}` on the word bases.
pub fn eta_matrix(source: &TensorLevel<'_>, target: &TensorLevel<'_>, i: usize) -> GradedMap {
    let c = source.coalg;
    assert_eq!(source.factors + 1, target.factors);
    let field = c.field();
    let mut m = GradedMap::from_dims(field, 0, c.truncation(), source.dims(), target.dims());
    for t in 0..=c.truncation() {
        let mut triples = Vec::new();
        for (col, w) in source.words(t).iter().enumerate() {
            let nw = eta_word(c, i, w);
            let row = target.index_of(&nw).expect("eta preserves degree");
            triples.push((row, col, field.one()));
        }
        m.set_block(
            t,
            SparseMatrix::from_triples(field, target.dim(t), source.dim(t), triples),
        );
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{named_coalgebra, NamedKind};
    use crate::field::FieldSpec;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn level_dims_are_convolutions() {
        let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], f(3), 8)
            .unwrap();
        let l0 = TensorLevel::new(&c, 1);
        let l1 = TensorLevel::new(&c, 2);
        let dims = c.space().dims();
        let conv: Vec<usize> = (0..=8)
            .map(|t| (0..=t).map(|a| dims[a] * dims[t - a]).sum())
            .collect();
        assert_eq!(l0.dims(), dims);
        assert_eq!(l1.dims(), conv);
    }

    #[test]
    fn coface_zero_is_the_coproduct() {
        let field = f(3);
        let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], field, 8)
            .unwrap();
        let g2 = c.elem_by_name("γ2(x)").unwrap();
        let out = coface_word(&c, 0, 0, &vec![g2], &field.one());
        // δ_0(γ2) = 1⊗γ2 + γ1⊗γ1 + γ2⊗1.
        assert_eq!(out.len(), 3);
        assert!(out.values().all(|v| v.is_one()));
    }

    #[test]
    fn top_coface_fixes_the_unit_word() {
        let field = f(5);
        let c = named_coalgebra(NamedKind::Exterior, &[("y".to_string(), 3)], field, 9)
            .unwrap();
        let one = c.unit();
        let out = coface_word(&c, 1, 2, &vec![one, one], &field.one());
        assert_eq!(out.len(), 1);
        let (w, v) = out.iter().next().unwrap();
        assert_eq!(w, &vec![one, one, one]);
        assert!(v.is_one());
    }

    #[test]
    fn first_cosimplicial_identity_on_lambda() {
        // δ_1 δ_0 = δ_0 δ_0 on C^{⊗1} (coassociativity in disguise).
        let field = f(3);
        let c = named_coalgebra(NamedKind::Exterior, &[("y".to_string(), 3)], field, 9)
            .unwrap();
        let y = c.elem_by_name("y").unwrap();
        let d0 = coface_word(&c, 0, 0, &vec![y], &field.one());
        let lhs = map_sum(&c, &d0, |w, v| coface_word(&c, 1, 1, w, v));
        let rhs = map_sum(&c, &d0, |w, v| coface_word(&c, 1, 0, w, v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn codegeneracy_kills_non_unit_slots() {
        let field = f(2);
        let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], field, 8)
            .unwrap();
        let g1 = c.elem_by_name("γ1(x)").unwrap();
        let out = codegeneracy_word(&c, 0, 0, &vec![g1, g1], &field.one());
        assert!(out.is_empty(), "ε(γ1) = 0");
        let out = codegeneracy_word(&c, 0, 0, &vec![g1, c.unit()], &field.one());
        assert_eq!(out.get(&vec![g1]).cloned(), Some(field.one()));
    }

    #[test]
    fn iterated_comult_matrix_follows_the_recursion() {
        // △^{n+1} = (△ ⊗ id^{⊗n}) △^n, checked as matrices at n = 1.
        let field = f(3);
        let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], field, 6)
            .unwrap();
        let l2 = TensorLevel::new(&c, 2);
        let l3 = TensorLevel::new(&c, 3);
        let two = iterated_comult_matrix(&c, &l2, 1);
        let three = iterated_comult_matrix(&c, &l3, 2);
        let step = coface_matrix(&l2, &l3, 0); // △ in slot 0
        assert!(three.equal(&step.compose(&two).unwrap()));
    }

    #[test]
    fn sigma_eta_is_identity() {
        let field = f(3);
        let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], field, 6)
            .unwrap();
        let l2 = TensorLevel::new(&c, 2);
        let l3 = TensorLevel::new(&c, 3);
        for i in 0..2 {
            let eta = eta_matrix(&l2, &l3, i);
            let sigma = codegeneracy_matrix(&l3, &l2, i);
            let composite = sigma.compose(&eta).unwrap();
            let id = GradedMap::identity(field, &l2.as_space());
            assert!(composite.equal(&id), "σ_{i} η_{i} = id");
        }
    }

    #[test]
    fn cosimplicial_identities_at_low_levels() {
        // All identities δ_j δ_i = δ_i δ_{j-1} (i<j), σ_j σ_i = σ_i σ_{j+1}
        // (i<=j), and the mixed ones, as exact matrix equalities. The
        // exterior coalgebra in odd degree exercises the Koszul twist sign.
        for (field, gens, kind) in [
            (f(3), vec![("y".to_string(), 3)], NamedKind::Exterior),
            (f(2), vec![("x".to_string(), 2)], NamedKind::DividedPower),
        ] {
            let c = named_coalgebra(kind, &gens, field, 6).unwrap();
            let levels: Vec<TensorLevel> =
                (1..=4).map(|m| TensorLevel::new(&c, m)).collect();
            let coface = |n: usize, i: usize| -> GradedMap {
                coface_matrix(&levels[n], &levels[n + 1], i)
            };
            let codegen = |n: usize, i: usize| -> GradedMap {
                codegeneracy_matrix(&levels[n + 1], &levels[n], i)
            };
            // δ_j δ_i = δ_i δ_{j-1}, maps level 0 -> level 2.
            for j in 0..=2usize {
                for i in 0..j {
                    let lhs = coface(1, j).compose(&coface(0, i)).unwrap();
                    let rhs = coface(1, i).compose(&coface(0, j - 1)).unwrap();
                    assert!(lhs.equal(&rhs), "δ_{j} δ_{i} failed");
                }
            }
            // σ_j σ_i = σ_i σ_{j+1} for i <= j, maps level 3 -> level 1
            // (rightmost operator applies first).
            for j in 0..=1usize {
                for i in 0..=j {
                    let lhs = codegen(1, j).compose(&codegen(2, i)).unwrap();
                    let rhs = codegen(1, i).compose(&codegen(2, j + 1)).unwrap();
                    assert!(lhs.equal(&rhs), "σ identities failed at ({i},{j})");
                }
            }
            // Mixed: σ_j δ_i = δ_i σ_{j-1} (i < j), = id (i = j, j+1),
            // = δ_{i-1} σ_j (i > j+1); checked at level 1.
            let id1 = GradedMap::identity(field, &levels[1].as_space());
            for j in 0..=1usize {
                for i in 0..=3usize {
                    if i >= 3 {
                        continue;
                    }
                    let lhs = codegen(1, j).compose(&coface(1, i)).unwrap();
                    if i < j {
                        let rhs = coface(0, i).compose(&codegen(0, j - 1)).unwrap();
                        assert!(lhs.equal(&rhs));
                    } else if i == j || i == j + 1 {
                        assert!(lhs.equal(&id1));
                    } else {
                        let rhs = coface(0, i - 1).compose(&codegen(0, j)).unwrap();
                        assert!(lhs.equal(&rhs));
                    }
                }
            }
        }
    }
}
