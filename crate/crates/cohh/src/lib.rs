//! Exact-arithmetic coHochschild homology of graded and differential graded
//! coalgebras over a field.
//!
//! The library is organized around the cyclic cobar cosimplicial object of a
//! counital coalgebra: its normalized bicomplex, the bigraded homology
//! `coHH_{s,t}`, the cofree comparison, the constructive matching-map
//! surjectivity, and the induced E2-page coalgebra with its collapse
//! analysis. All arithmetic is exact (rationals or a prime field);
//! everything is truncated at a caller-chosen internal degree `D` and
//! answers carry that validity window.

pub mod circle;
pub mod coalgebra;
pub mod complex;
pub mod e2;
pub mod field;
pub mod format;
pub mod graded;
pub mod hkr;
pub mod matching;
pub mod matrix;
pub mod tensor;

pub use coalgebra::{
    check_coalgebra, coalgebra_tensor, cofree_cocommutative, cofree_tensor, named_coalgebra,
    AxiomReport, CoalgebraError, CoalgebraPresentation, CofreeShape, ElemId, NamedKind,
};
pub use complex::{cohh, normalized_bicomplex, total_complex, BigradedTable, CohhResult};
pub use field::{FieldSpec, Scalar};
pub use graded::{tensor_map_koszul, tensor_space, ChainComplex, GradedMap, GradedSpace};
