//! Acceptance suite: the headline algebraic identities, reproduced exactly
//! (zero tolerance, exact field arithmetic). One test per criterion; each
//! prints a pass line on success and the harness reports pass/fail per
//! criterion.

use cohh::circle::{circle_construction, cohh_coproduct, verify_cohh_coproduct};
use cohh::coalgebra::{
    check_coalgebra, cofree_cocommutative, cofree_tensor, named_coalgebra,
    CoalgebraPresentation, NamedKind,
};
use cohh::complex::{cohh, normalized_bicomplex, total_complex, CohhResult};
use cohh::e2::{
    catalog, collapse_check, convergence_analysis, dr_differential, einfty_series,
    einfty_series_oracle, CatalogEntry, CollapseStatus,
};
use cohh::field::FieldSpec;
use cohh::hkr::{doi_resolution_check, hkr_compare, single_cogen_cycles};
use cohh::matching::verify_surjectivity;
use cohh::tensor::{codegeneracy_matrix, coface_matrix, TensorLevel};

fn f(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// Brute-force bigraded expansion of `Γ[x] ⊗ Λ(z)` with `x` at `(0, d)` and
/// `z` at `(1, d)`: the independent oracle for the even closed form.
fn gamma_lambda_table(d_gen: usize, d_max: usize) -> Vec<Vec<usize>> {
    let mut dims = vec![vec![0usize; d_max + 1]; d_max + 1];
    let mut a = 0usize;
    while a * d_gen <= d_max {
        dims[0][a * d_gen] += 1;
        if a * d_gen + d_gen <= d_max {
            dims[1][a * d_gen + d_gen] += 1;
        }
        a += 1;
    }
    dims
}

/// Brute-force bigraded expansion of `Λ(y) ⊗ k[w]` with `y` at `(0, d)` and
/// `w` at `(1, d)`.
fn lambda_poly_table(d_gen: usize, d_max: usize) -> Vec<Vec<usize>> {
    let mut dims = vec![vec![0usize; d_max + 1]; d_max + 1];
    let mut a = 0usize;
    while a <= d_max && a * d_gen <= d_max {
        dims[a][a * d_gen] += 1;
        if a * d_gen + d_gen <= d_max {
            dims[a][a * d_gen + d_gen] += 1;
        }
        a += 1;
    }
    dims
}

#[test]
fn criterion_1_even_closed_form_with_explicit_cycles() {
    let d_max = 12;
    let field = f(3);
    let c = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], field, d_max)
        .unwrap();
    let CohhResult::Bigraded(table) = cohh(&c).unwrap() else {
        panic!("no differential")
    };
    let expected = gamma_lambda_table(2, d_max);
    for s in 0..=d_max {
        for t in 0..=d_max {
            assert_eq!(
                table.dim(s, t),
                expected[s][t],
                "coHH_{{{s},{t}}}(Γ_F3[x]) disagrees with Γ[x]⊗Λ(z)"
            );
        }
    }
    // The explicit generating cycles Σ_{i=1}^n i·γ_{n-i}⊗γ_i are cycles and
    // span the (1, 2n) classes; verify the literal coefficient pattern too.
    let cycles = single_cogen_cycles(2, field, d_max).unwrap();
    assert_eq!(cycles.len(), 6);
    for (n, cyc) in (1..=6usize).zip(&cycles) {
        assert_eq!((cyc.s, cyc.t), (1, 2 * n));
        for (word, coeff) in &cyc.words {
            let i = word[1].degree / 2;
            assert_eq!(coeff, &field.from_integer(i as i64));
        }
    }
    println!("criterion 1: PASS — coHH(Γ_F3[x]) = Γ[x]⊗Λ(z) through t = 12, cycles verified");
}

#[test]
fn criterion_2_odd_closed_form_with_representative_pattern() {
    let d_max = 12;
    let field = f(3);
    let c = named_coalgebra(NamedKind::Exterior, &[("y".to_string(), 3)], field, d_max)
        .unwrap();
    let CohhResult::Bigraded(table) = cohh(&c).unwrap() else {
        panic!()
    };
    let expected = lambda_poly_table(3, d_max);
    for s in 0..=d_max {
        for t in 0..=d_max {
            assert_eq!(
                table.dim(s, t),
                expected[s][t],
                "coHH_{{{s},{t}}}(Λ_F3(y)) disagrees with Λ(y)⊗k[w]"
            );
        }
    }
    // Representative pattern: 1⊗y^{⊗a} at (a, 3a) and y⊗y^{⊗a} at (a, 3a+3).
    for a in 0..=4usize {
        let rep = &table.reps[a][3 * a][0];
        let expected_name = std::iter::once("1")
            .chain(std::iter::repeat("y").take(a))
            .collect::<Vec<_>>()
            .join("⊗");
        assert_eq!(rep.rendered, expected_name);
        if 3 * a + 3 <= d_max {
            let rep = &table.reps[a][3 * a + 3][0];
            let expected_name = std::iter::repeat("y")
                .take(a + 1)
                .collect::<Vec<_>>()
                .join("⊗");
            assert_eq!(rep.rendered, expected_name);
        }
    }
    println!("criterion 2: PASS — coHH(Λ_F3(y)) = Λ(y)⊗k[w] through t = 12, patterns verified");
}

#[test]
fn criterion_3_cofree_comparison_across_fields() {
    let d_max = 10;
    let gen_sets: Vec<Vec<(String, usize)>> = vec![
        vec![("x".to_string(), 2)],
        vec![("y".to_string(), 3)],
        vec![("x".to_string(), 2), ("y".to_string(), 3)],
        vec![("x".to_string(), 2), ("x'".to_string(), 2)],
    ];
    let fields = [f(2), f(3), f(5), FieldSpec::Rationals];
    for gens in &gen_sets {
        for field in fields {
            let report = hkr_compare(gens, field, d_max).unwrap();
            assert!(
                report.matches,
                "mismatch for {gens:?} over {field}: {:?}",
                report.mismatches
            );
        }
    }
    println!("criterion 3: PASS — cofree comparison exact for 4 generator sets × 4 fields, t <= 10");
}

#[test]
fn criterion_4_matching_surjectivity_with_witnesses() {
    let gamma = named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], f(2), 8)
        .unwrap();
    let lambda = named_coalgebra(NamedKind::Exterior, &[("y".to_string(), 3)], f(3), 8)
        .unwrap();
    for c in [&gamma, &lambda] {
        for n in 1..=4usize {
            let report = verify_surjectivity(c, n, 3).unwrap();
            assert!(report.ok, "n = {n}: {:?}", report.counterexample);
            // Full basis of every matching space was swept constructively.
            for row in &report.per_degree {
                assert_eq!(row.basis_tuples_verified, row.matching_dim);
                assert_eq!(row.matching_map_rank, row.matching_dim);
            }
        }
    }
    println!("criterion 4: PASS — matching maps surjective with exact constructive witnesses, n <= 4, t <= 8");
}

#[test]
fn criterion_5_collapse_certificates_and_einfty_series() {
    let field = f(3);
    let entries: Vec<CatalogEntry> = (1..=3)
        .flat_map(|n| {
            vec![
                CatalogEntry::BU(n),
                CatalogEntry::BSU(n),
                CatalogEntry::BSp(n),
                CatalogEntry::CpInfinityPower(n),
            ]
        })
        .collect();
    for entry in entries {
        let h = catalog(entry, field, 12).unwrap();
        let verdict = collapse_check(&h);
        assert_eq!(
            verdict.status,
            CollapseStatus::Collapses,
            "catalog entry {entry:?}"
        );
    }
    // BU(2) series against the independent brute-force oracle.
    let h = catalog(CatalogEntry::BU(2), field, 12).unwrap();
    let verdict = collapse_check(&h);
    let series = einfty_series(&verdict, 12).unwrap();
    let oracle = einfty_series_oracle(&CatalogEntry::BU(2).generators(), 12);
    assert_eq!(series, oracle);
    assert_eq!(&series[..5], &[1, 1, 1, 2, 3]);
    println!("criterion 5: PASS — collapse certificates for the catalog, BU(2) series = oracle through 12");
}

#[test]
fn criterion_6_property_suites() {
    // The always-on structural properties, exactly, on the named test set.
    let test_set: Vec<CoalgebraPresentation> = vec![
        named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], f(2), 6).unwrap(),
        named_coalgebra(NamedKind::DividedPower, &[("x".to_string(), 2)], f(3), 6).unwrap(),
        named_coalgebra(NamedKind::Exterior, &[("y".to_string(), 3)], f(3), 6).unwrap(),
        named_coalgebra(NamedKind::Polynomial, &[("w".to_string(), 2)], f(2), 6).unwrap(),
        cofree_cocommutative(f(5), &[("x".to_string(), 2), ("y".to_string(), 3)], 5).unwrap(),
        cofree_tensor(f(5), &[("a".to_string(), 1), ("b".to_string(), 2)], 4).unwrap(),
        CoalgebraPresentation::trivial(FieldSpec::Rationals, 4),
    ];

    for c in &test_set {
        // Constructor outputs pass every axiom.
        let report = check_coalgebra(c);
        assert!(report.ok(), "axioms fail: {:?}", report.witnesses);

        // Cosimplicial identities as exact matrix equalities at n <= 4.
        let levels: Vec<TensorLevel> = (1..=6).map(|m| TensorLevel::new(c, m)).collect();
        let coface = |n: usize, i: usize| coface_matrix(&levels[n], &levels[n + 1], i);
        let codegen = |n: usize, i: usize| codegeneracy_matrix(&levels[n + 1], &levels[n], i);
        for n in 0..=3usize {
            for j in 0..=n + 2 {
                for i in 0..j {
                    let lhs = coface(n + 1, j).compose(&coface(n, i)).unwrap();
                    let rhs = coface(n + 1, i).compose(&coface(n, j - 1)).unwrap();
                    assert!(lhs.equal(&rhs), "δδ at (n,i,j)=({n},{i},{j})");
                }
            }
        }
        for n in 0..=2usize {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = codegen(n, j).compose(&codegen(n + 1, i)).unwrap();
                    let rhs = codegen(n, i).compose(&codegen(n + 1, j + 1)).unwrap();
                    assert!(lhs.equal(&rhs), "σσ at (n,i,j)=({n},{i},{j})");
                }
            }
        }
        for n in 1..=3usize {
            let id = cohh::GradedMap::identity(c.field(), &levels[n].as_space());
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = codegen(n, j).compose(&coface(n, i)).unwrap();
                    if i < j {
                        let rhs = coface(n - 1, i).compose(&codegen(n - 1, j - 1)).unwrap();
                        assert!(lhs.equal(&rhs), "mixed at ({n},{i},{j})");
                    } else if i == j || i == j + 1 {
                        assert!(lhs.equal(&id), "mixed identity at ({n},{i},{j})");
                    } else {
                        let rhs = coface(n - 1, i - 1).compose(&codegen(n - 1, j)).unwrap();
                        assert!(lhs.equal(&rhs), "mixed at ({n},{i},{j})");
                    }
                }
            }
        }

        // d² = 0 on every assembled complex, bicomplex and total complex.
        let b = normalized_bicomplex(c, c.truncation()).unwrap();
        for t in 0..=c.truncation() {
            b.column_complex(t).verify_squares_to_zero().unwrap();
        }
        total_complex(&b).unwrap().verify_squares_to_zero().unwrap();

        // Circle model equals the cyclic cobar object for cocommutative
        // inputs, coefficientwise, at n <= 3.
        if check_coalgebra(c).cocommutative {
            for n in 0..=3usize {
                let circ = circle_construction(c, n).unwrap();
                for i in 0..=n + 1 {
                    assert!(circ.cofaces[i].equal(&coface(n, i)), "circle coface {i}@{n}");
                }
                for i in 0..=n {
                    assert!(
                        circ.codegeneracies[i].equal(&codegen(n, i)),
                        "circle codegeneracy {i}@{n}"
                    );
                }
            }
            // The induced coproduct is coassociative and counital.
            let h = cohh_coproduct(c).unwrap();
            assert!(verify_cohh_coproduct(&h, &c.field()));
        }
    }

    // Cofree-product dimension law (finite positive-degree cogenerators):
    // S^c(X ⊕ Y) and S^c(X) ⊗ S^c(Y) have equal dimension sequences and
    // coefficient tables; checked here on dimension sequences over several
    // splittings, with the coefficient-table comparison in the unit tests.
    for field in [f(2), f(5), FieldSpec::Rationals] {
        let x = vec![("x".to_string(), 2)];
        let y = vec![("u".to_string(), 3), ("v".to_string(), 4)];
        let both: Vec<(String, usize)> = x.iter().cloned().chain(y.iter().cloned()).collect();
        let sum = cofree_cocommutative(field, &both, 7).unwrap();
        let sx = cofree_cocommutative(field, &x, 7).unwrap();
        let sy = cofree_cocommutative(field, &y, 7).unwrap();
        let tensor = cohh::coalgebra_tensor(&sx, &sy).unwrap();
        assert_eq!(sum.space().dims(), tensor.space().dims());
    }

    // Cofree commutes with the cosimplicial levels on dimensions:
    // coTHH^n(S^c(X)) and S^c(X^{⊕ n+1}) agree in every degree <= D.
    for field in [f(2), f(3)] {
        let gens = vec![("x".to_string(), 2), ("y".to_string(), 3)];
        let sc = cofree_cocommutative(field, &gens, 6).unwrap();
        for n in 0..=3usize {
            let level = TensorLevel::new(&sc, n + 1);
            let copies: Vec<(String, usize)> = (0..=n)
                .flat_map(|k| {
                    gens.iter()
                        .map(move |(g, d)| (format!("{g}[{k}]"), *d))
                })
                .collect();
            let fat = cofree_cocommutative(field, &copies, 6).unwrap();
            assert_eq!(level.dims(), fat.space().dims(), "level {n} over {field}");
        }
    }

    // Two-step resolution exactness for |x| = 2 over F_2 and F_3, t <= 8.
    for field in [f(2), f(3)] {
        let report = doi_resolution_check(2, field, 8).unwrap();
        assert!(report.exact, "{:?}", report.failures);
    }

    println!("criterion 6: PASS — structural property suites hold exactly on the test set");
}

#[test]
fn criterion_7_out_of_scope_queries_fail_honestly() {
    for r in [2usize, 3, 5] {
        let err = dr_differential(r).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("not computed — certified by paper hypothesis only"),
            "message was {msg:?}"
        );
    }
    let err = convergence_analysis().unwrap_err();
    assert!(err
        .to_string()
        .contains("not computed — certified by paper hypothesis only"));
    println!("criterion 7: PASS — convergence and higher differentials fail with the explicit message");
}
