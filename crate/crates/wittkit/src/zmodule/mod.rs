//! Exact linear algebra over Z and Z[1/2]: integer matrices, Smith normal
//! form, and presentations of finitely generated modules with kernels,
//! cokernels and homology.

pub mod matrix;
pub mod module;
pub mod snf;

pub use matrix::Mat;
pub use module::{
    cokernel, homology_at, kernel, BaseRing, CanonicalForm, FgModule, ModuleMap, ZmoduleError,
};
pub use snf::{smith_normal_form, Snf};
