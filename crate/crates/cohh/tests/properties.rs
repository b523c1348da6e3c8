//! Randomized structural properties: exact linear algebra invariants, the
//! Koszul interchange law, constructor axioms on random cogenerator sets,
//! the cofree product/level dimension laws, format round trips, and the
//! characteristic-2 degeneration of the matching section.

use proptest::prelude::*;

use cohh::coalgebra::{
    check_coalgebra, coalgebra_tensor, cofree_cocommutative, cofree_tensor, named_coalgebra,
    NamedKind,
};
use cohh::complex::{cohh, normalized_bicomplex, CohhResult};
use cohh::field::{FieldSpec, Scalar};
use cohh::graded::{tensor_map_koszul, GradedMap, GradedSpace};
use cohh::matching::{matching_preimage, verify_surjectivity};
use cohh::matrix::SparseMatrix;
use cohh::tensor::{codegeneracy_word, map_sum, TensorLevel, WordSum};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(3).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
        Just(FieldSpec::Rationals),
    ]
}

fn gens_strategy(max_gens: usize) -> impl Strategy<Value = Vec<(String, usize)>> {
    prop::collection::vec(1usize..=4, 1..=max_gens).prop_map(|degrees| {
        degrees
            .into_iter()
            .enumerate()
            .map(|(i, d)| (format!("g{i}"), d))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_vectors_are_killed_exactly(
        field in field_strategy(),
        seed in 0u64..1000,
    ) {
        let m = make_matrix(field, seed);
        let rr = m.row_reduce();
        prop_assert_eq!(rr.rank + rr.kernel_basis().len(), m.cols());
        for v in rr.kernel_basis() {
            prop_assert!(m.apply(&v).is_empty());
        }
    }

    #[test]
    fn rank_equals_transpose_rank(
        field in field_strategy(),
        seed in 0u64..1000,
    ) {
        let m = make_matrix(field, seed);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn koszul_interchange_law(
        shift_f in 0i64..=1,
        shift_g in 0i64..=1,
        shift_f2 in 0i64..=1,
        shift_g2 in 0i64..=1,
        seed in 0u64..500,
    ) {
        // (f⊗g)(f'⊗g') = (-1)^{deg g · deg f'} (ff')⊗(gg') on random maps.
        let field = FieldSpec::prime(7).unwrap();
        let space = GradedSpace::from_names(
            3,
            (0..=3).map(|t| (0..2).map(|i| format!("e{t}_{i}")).collect()).collect(),
        ).unwrap();
        let mk = |shift: i64, salt: u64| random_map(field, &space, shift, seed.wrapping_mul(31).wrapping_add(salt));
        let f = mk(shift_f, 1);
        let g = mk(shift_g, 2);
        let f2 = mk(shift_f2, 3);
        let g2 = mk(shift_g2, 4);
        let lhs = tensor_map_koszul(&f, &g, &space, &space, &space, &space)
            .unwrap()
            .compose(&tensor_map_koszul(&f2, &g2, &space, &space, &space, &space).unwrap())
            .unwrap();
        let sign = field.sign((shift_g.rem_euclid(2) * shift_f2.rem_euclid(2)) as usize);
        let rhs = tensor_map_koszul(
            &f.compose(&f2).unwrap(),
            &g.compose(&g2).unwrap(),
            &space,
            &space,
            &space,
            &space,
        )
        .unwrap()
        .scale(&sign);
        prop_assert!(lhs.equal(&rhs));
    }

    #[test]
    fn constructors_pass_the_axiom_checker(
        field in field_strategy(),
        gens in gens_strategy(3),
    ) {
        let d = 5;
        let words = cofree_tensor(field, &gens, d).unwrap();
        prop_assert!(check_coalgebra(&words).ok());
        let sym = cofree_cocommutative(field, &gens, d).unwrap();
        prop_assert!(check_coalgebra(&sym).ok());
        let evens: Vec<(String, usize)> = gens
            .iter()
            .filter(|(_, deg)| deg % 2 == 0)
            .cloned()
            .collect();
        if !evens.is_empty() {
            let poly = named_coalgebra(NamedKind::Polynomial, &evens, field, d).unwrap();
            prop_assert!(check_coalgebra(&poly).ok());
        }
        let t = coalgebra_tensor(&sym, &words).unwrap();
        prop_assert!(check_coalgebra(&t).ok());
    }

    #[test]
    fn cofree_turns_sums_into_tensor_products(
        field in field_strategy(),
        left in gens_strategy(2),
        right in gens_strategy(2),
    ) {
        // Dimension half of the product law; the coefficient-table half is
        // pinned by a deterministic test below.
        let d = 6;
        let right: Vec<(String, usize)> = right
            .iter()
            .map(|(n, deg)| (format!("r{n}"), *deg))
            .collect();
        let both: Vec<(String, usize)> = left.iter().cloned().chain(right.iter().cloned()).collect();
        let sum = cofree_cocommutative(field, &both, d).unwrap();
        let tensor = coalgebra_tensor(
            &cofree_cocommutative(field, &left, d).unwrap(),
            &cofree_cocommutative(field, &right, d).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(sum.space().dims(), tensor.space().dims());
    }

    #[test]
    fn cosimplicial_levels_of_cofree_are_cofree(
        field in field_strategy(),
        gens in gens_strategy(2),
        n in 0usize..=2,
    ) {
        // dims of C^{⊗ n+1} for C = S^c(X) equal dims of S^c(X^{⊕ n+1}).
        let d = 5;
        let sc = cofree_cocommutative(field, &gens, d).unwrap();
        let level = TensorLevel::new(&sc, n + 1);
        let copies: Vec<(String, usize)> = (0..=n)
            .flat_map(|k| gens.iter().map(move |(g, deg)| (format!("{g}#{k}"), *deg)))
            .collect();
        let fat = cofree_cocommutative(field, &copies, d).unwrap();
        prop_assert_eq!(level.dims(), fat.space().dims());
    }

    #[test]
    fn euler_characteristic_matches_homology(
        field in field_strategy(),
        gens in gens_strategy(2),
    ) {
        let d = 5;
        let c = cofree_cocommutative(field, &gens, d).unwrap();
        let b = normalized_bicomplex(&c, d).unwrap();
        let CohhResult::Bigraded(table) = cohh(&c).unwrap() else { unreachable!() };
        for t in 0..=d {
            let homology: i64 = (0..=table.s_max)
                .map(|s| {
                    let dim = table.dim(s, t) as i64;
                    if s % 2 == 0 { dim } else { -dim }
                })
                .sum();
            prop_assert_eq!(b.column_euler(t), homology);
        }
    }

    #[test]
    fn format_round_trip_is_identity(
        field in field_strategy(),
        gens in gens_strategy(2),
    ) {
        let c = cofree_cocommutative(field, &gens, 5).unwrap();
        let json = cohh::format::to_json(&c);
        let (back, report) = cohh::format::load(&json).unwrap();
        prop_assert!(report.ok());
        prop_assert_eq!(&json, &cohh::format::to_json(&back));
        for (e1, e2) in c.elems().zip(back.elems()) {
            prop_assert_eq!(c.comult_terms(e1), back.comult_terms(e2));
        }
    }

    #[test]
    fn matching_surjectivity_on_random_cofree_inputs(
        field in field_strategy(),
        gens in gens_strategy(2),
        n in 1usize..=3,
    ) {
        let c = cofree_cocommutative(field, &gens, 4).unwrap();
        let report = verify_surjectivity(&c, n, 1).unwrap();
        prop_assert!(report.ok, "{:?}", report.counterexample);
    }
}

/// Deterministic pseudo-random matrix from a seed (xorshift), entries in
/// -4..=4 mapped into the field.
fn make_matrix(field: FieldSpec, seed: u64) -> SparseMatrix {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let rows = (next() % 5 + 1) as usize;
    let cols = (next() % 5 + 1) as usize;
    let mut triples = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = (next() % 9) as i64 - 4;
            triples.push((r, c, field.from_integer(v)));
        }
    }
    SparseMatrix::from_triples(field, rows, cols, triples)
}

fn random_map(field: FieldSpec, space: &GradedSpace, shift: i64, seed: u64) -> GradedMap {
    let mut state = seed.wrapping_mul(0x2545f4914f6cdd1d).wrapping_add(7);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut m = GradedMap::zero(field, shift, space, space);
    for t in 0..=space.truncation() {
        let tt = t as i64 + shift;
        if tt < 0 || tt > space.truncation() as i64 {
            continue;
        }
        let rows = space.dim(tt as usize);
        let cols = space.dim(t);
        let mut triples = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = (next() % 7) as i64 - 3;
                triples.push((r, c, field.from_integer(v)));
            }
        }
        m.set_block(t, SparseMatrix::from_triples(field, rows, cols, triples));
    }
    m
}

/// The matching section over F_2 is the unsigned sum: computing the
/// preimage of an integral tuple over Q and reducing mod 2 agrees with the
/// computation over F_2.
#[test]
fn matching_preimage_reduces_mod_two() {
    let d = 6;
    let q = FieldSpec::Rationals;
    let f2 = FieldSpec::prime(2).unwrap();
    let cq = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], q, d).unwrap();
    let c2 = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], f2, d).unwrap();
    let n = 3usize;
    let level_q = TensorLevel::new(&cq, n + 1);
    // Integral tuples: σ(y) of basis words y is always in the matching
    // space; run the preimage formula on both sides of the reduction.
    for t in 0..=d {
        for y in level_q.words(t) {
            let mut y_sum_q = WordSum::new();
            y_sum_q.insert(y.clone(), q.one());
            let tuple_q: Vec<WordSum> = (0..n)
                .map(|s| map_sum(&cq, &y_sum_q, |w, v| codegeneracy_word(&cq, n - 1, s, w, v)))
                .collect();
            let pre_q = matching_preimage(&cq, n, t, &tuple_q).unwrap();

            let reduce = |sum: &WordSum| -> WordSum {
                let mut out = WordSum::new();
                for (w, v) in sum {
                    let Scalar::Rat(r) = v else { unreachable!() };
                    assert!(r.is_integer(), "formula stays integral on integral input");
                    let lifted = f2.from_bigint(r.numer());
                    cohh::tensor::add_word(&c2, &mut out, w.clone(), lifted);
                }
                out
            };
            let tuple_2: Vec<WordSum> = tuple_q.iter().map(&reduce).collect();
            let pre_2 = matching_preimage(&c2, n, t, &tuple_2).unwrap();
            assert_eq!(reduce(&pre_q), pre_2);
        }
    }
}
