//! Exact chain-level machinery for twisted Koszul-type complexes over a
//! polynomial ring: tensor products, duals, symmetric forms, and graded
//! homology computed one graded piece at a time.

pub mod complex;
pub mod contraction;
pub mod formed;
pub mod homology;
pub mod poly;
pub mod verify;

pub use complex::{
    cone, dual, swap_map, tensor, tensor_index, tensor_layout, ChainMap, GradedComplex,
    KoszulError, PolyMat, RestrictMode,
};
pub use contraction::{contraction_null_homotopy, Homotopy};
pub use formed::{adjoint, b_complex, beta, is_symmetric, FormedComplex};
pub use homology::{graded_homology, graded_piece_dims, CoeffField};
pub use poly::{Poly, PolyRing};
pub use verify::{default_bound, verify_suite, verify_suite_threads, VerificationReport};
