//! wittkit: an exact-arithmetic calculator and verifier for Witt and
//! Grothendieck-Witt groups of schemes, including singular ones.
//!
//! The crate is organized in four layers:
//! - [`zmodule`]: integer matrices, Smith normal form, finitely generated
//!   abelian groups and their maps;
//! - [`involution`]: modules with involution and Z/2 Tate cohomology;
//! - [`koszul`]: graded chain complexes over polynomial rings, the formed
//!   Koszul complexes and their verification suite;
//! - [`wittcalc`]: concrete Witt groups of fields and the rewrite rules for
//!   punctured affine spaces, projective spaces and the nodal curve.
//!
//! The [`cli`] module hosts the query language used by the `wittkit` binary.

pub mod cli;
pub mod involution;
pub mod koszul;
pub mod wittcalc;
pub mod zmodule;
