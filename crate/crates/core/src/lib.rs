//! Exact construction and verification of Hom-Lie and skew-Hom-Lie algebras.
//!
//! The crate works over pluggable scalar backends ([`scalar`]): exact
//! rationals, the quadratic extension generated by `√(1+θ²)`, and floats
//! compared with a tolerance. On top of small dense linear algebra
//! ([`linalg`]) it provides structure-constant algebras with witness-producing
//! axiom checks ([`algebra`]), the concrete families ([`constructions`]),
//! representations ([`representation`]), cochains and coboundary operators
//! ([`cohomology`]), the geometry of the semi-Euclidean 4-space
//! ([`semi_euclidean`]) and the JSON file formats ([`io`]).

pub mod algebra;
pub mod cohomology;
pub mod constructions;
pub mod io;
pub mod linalg;
pub mod parallel;
pub mod representation;
pub mod scalar;
pub mod semi_euclidean;

pub use algebra::{CheckReport, Classification, HomAlgebra, Verdict, Witness};
pub use cohomology::{check_d_squared, coboundary, Cochain};
pub use io::{load_algebra, DynAlgebra};
pub use linalg::Matrix;
pub use parallel::Strategy;
pub use representation::Representation;
pub use scalar::{QuadExt, Rational, Scalar};
