//! The calculator proper: Witt groups of small fields from their
//! presentations, the rewrite rules for punctured affine space, projective
//! space and vector bundles, and the full nodal-curve computation.

pub mod expr;
pub mod field;
pub mod node;
pub mod projective;
pub mod rules;

use crate::zmodule::ZmoduleError;
use serde::{Deserialize, Serialize};

/// One entry of the audit trail: what rule fired, under which stable
/// identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppliedRule {
    pub rule: String,
    pub anchor: String,
}

impl AppliedRule {
    pub fn new(rule: &str, anchor: &str) -> Self {
        AppliedRule { rule: rule.to_string(), anchor: anchor.to_string() }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum WittError {
    /// The vanishing-Tate hypothesis of the splitting formula fails; carries
    /// the offending Tate pair for reporting.
    #[error("splitting hypothesis failed: Tate cohomology of K_-1 is (h0 = {h0}, h1 = {h1})")]
    HypothesisFailed { h0: String, h1: String },
    #[error("not tabulated: {0}")]
    NotTabulated(String),
    #[error("{0}")]
    BadInput(String),
    #[error("module computation failed: {0}")]
    Module(#[from] ZmoduleError),
}

pub use expr::{normalize, GroupAtom, GroupExpr, SchemeExpr};
pub use field::{witt_field, witt_field_oracle, FieldDesc, SmallField, WittFieldData};
pub use node::{node_laurent_witt, node_witt, NodeLTable, NodeLaurentReport, NodeWittReport};
pub use projective::{gw_projective, gw_projective_split};
pub use rules::{
    gw_punctured, higher_witt_punctured, homotopy_invariance, k_minus_one, k_theory_punctured,
    witt_les_punctured, witt_punctured, witt_punctured_bass, Evaluation, HigherVariant,
    SequenceReport, SequenceTerm,
};
