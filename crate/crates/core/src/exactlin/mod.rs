//! Exact scalars and linear algebra over finite fields.

pub mod cyclo;
pub mod field;
pub mod matrix;
pub mod pack;
pub mod poly;

pub use cyclo::{cyclotomic_polynomial, totient, CycloNumber};
pub use field::{fq_arith, prime_power, FieldDescriptor, FieldElement, FqOp, FqValue};
pub use matrix::{row_space_basis, ColumnSolver, Echelon, FqMatrix};
pub use pack::VectorPacker;
pub use poly::FqPoly;
