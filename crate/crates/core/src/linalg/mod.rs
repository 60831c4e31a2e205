//! Exact rational arithmetic, dense and sparse linear algebra, and the
//! graded algebra models that carry the cohomology of every fixed locus.

pub mod algebra;
pub mod matrix;
pub mod rational;
pub mod sparse;

pub use algebra::{
    check_structure, gram_nondegenerate, invariant_basis, quotient_model, tensor_algebra, ExteriorAlgebra,
    GradedAlgebra, QuotientModel, TableAlgebra, TensorAlgebra,
};
pub use matrix::{rref_kernel, MatrixQ, RrefData};
pub use rational::Rational;
pub use sparse::{Accumulator, SparseEchelon, SparseMap, SparseVec};
