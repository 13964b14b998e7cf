//! Z/2-equivariant layer: modules with involution, hyperbolic modules, and
//! Tate cohomology. Conventions: h0 = ker(1-s)/im(1+s), h1 = ker(1+s)/im(1-s);
//! with the trivial involution on Z this gives (Z/2, 0), the normalization
//! every other computation hangs off.

use crate::zmodule::{homology_at, BaseRing, FgModule, Mat, ModuleMap, ZmoduleError};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("sigma is not a well-defined endomorphism: {0}")]
    IllFormedSigma(ZmoduleError),
    #[error("sigma squared is not the identity")]
    NotAnInvolution,
}

/// A finitely generated module with an involution, plus the duality shift
/// class carried along from K-theory with twisted duality.
#[derive(Clone, Debug)]
pub struct InvolutionModule {
    underlying: FgModule,
    sigma: ModuleMap,
    shift_class: i64,
}

impl InvolutionModule {
    pub fn new(underlying: FgModule, sigma: Mat, shift_class: i64) -> Result<Self, InvolutionError> {
        let sigma = ModuleMap::new(underlying.clone(), underlying.clone(), sigma)
            .map_err(InvolutionError::IllFormedSigma)?;
        let m = InvolutionModule { underlying, sigma, shift_class };
        if !m.sigma_squared_is_identity() {
            return Err(InvolutionError::NotAnInvolution);
        }
        Ok(m)
    }

    /// Trivial involution (sigma = id).
    pub fn trivial(underlying: FgModule, shift_class: i64) -> Self {
        let sigma = ModuleMap::identity(&underlying);
        InvolutionModule { underlying, sigma, shift_class }
    }

    /// Sign involution (sigma = -id).
    pub fn negation(underlying: FgModule, shift_class: i64) -> Self {
        let n = underlying.ngens();
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(-1);
        }
        InvolutionModule::new(underlying, m, shift_class).expect("-1 is always an involution")
    }

    pub fn underlying(&self) -> &FgModule {
        &self.underlying
    }

    pub fn sigma(&self) -> &ModuleMap {
        &self.sigma
    }

    pub fn shift_class(&self) -> i64 {
        self.shift_class
    }

    fn sigma_squared_is_identity(&self) -> bool {
        let square = self.sigma.compose(&self.sigma).expect("endo composes");
        let id = ModuleMap::identity(&self.underlying);
        // sigma^2 - id must kill every generator modulo relations
        let n = self.underlying.ngens();
        let diff = Mat::from_fn(n, n, |i, j| {
            &square.matrix()[(i, j)] - &id.matrix()[(i, j)]
        });
        match ModuleMap::new(self.underlying.clone(), self.underlying.clone(), diff) {
            Ok(d) => d.is_zero_map(),
            Err(_) => false,
        }
    }
}

/// Verifies sigma is well defined and squares to the identity.
pub fn check_involution(m: &InvolutionModule) -> bool {
    m.sigma_squared_is_identity()
}

/// The pair (h0, h1) of Tate cohomology groups; both are elementary
/// abelian 2-groups.
#[derive(Clone, PartialEq)]
pub struct TatePair {
    h0: FgModule,
    h1: FgModule,
}

impl TatePair {
    pub fn new(h0: FgModule, h1: FgModule) -> Self {
        let two = BigInt::from(2);
        for g in [&h0, &h1] {
            assert!(
                g.canonical_form().factors.iter().all(|d| *d == two)
                    && g.canonical_form().free_rank == 0,
                "Tate groups must be killed by 2, got {g}"
            );
        }
        TatePair { h0, h1 }
    }

    pub fn h0(&self) -> &FgModule {
        &self.h0
    }

    pub fn h1(&self) -> &FgModule {
        &self.h1
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h1.is_zero()
    }
}

impl fmt::Display for TatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h0 = {}, h1 = {})", self.h0, self.h1)
    }
}

impl fmt::Debug for TatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TatePair{self}")
    }
}

/// Tate cohomology of the involution module, swapped when the duality
/// shift class is odd.
pub fn tate(m: &InvolutionModule) -> TatePair {
    let a = &m.underlying;
    let n = a.ngens();
    let id = Mat::identity(n);
    let s = m.sigma.matrix();
    let minus = Mat::from_fn(n, n, |i, j| &id[(i, j)] - &s[(i, j)]);
    let plus = Mat::from_fn(n, n, |i, j| &id[(i, j)] + &s[(i, j)]);
    let one_minus = ModuleMap::new(a.clone(), a.clone(), minus).expect("1-sigma well defined");
    let one_plus = ModuleMap::new(a.clone(), a.clone(), plus).expect("1+sigma well defined");
    let h0 = homology_at(&one_minus, &one_plus).expect("(1-s)(1+s) = 0");
    let h1 = homology_at(&one_plus, &one_minus).expect("(1+s)(1-s) = 0");
    let pair = TatePair::new(h0, h1);
    tate_shift(&pair, m.shift_class)
}

/// Hyperbolic module a + a with the swap involution; its Tate vanishes.
pub fn hyperbolic(a: &FgModule) -> InvolutionModule {
    let double = a.direct_sum(a).expect("same ring");
    let n = a.ngens();
    if n == 0 {
        return InvolutionModule::trivial(double, 0);
    }
    let swap = Mat::from_fn(2 * n, 2 * n, |i, j| {
        if j == (i + n) % (2 * n) {
            BigInt::from(1)
        } else {
            BigInt::from(0)
        }
    });
    InvolutionModule::new(double, swap, 0).expect("swap is an involution")
}

/// 2-periodic degree shift of a Tate pair.
pub fn tate_shift(pair: &TatePair, s: i64) -> TatePair {
    if s.rem_euclid(2) == 0 {
        pair.clone()
    } else {
        TatePair { h0: pair.h1.clone(), h1: pair.h0.clone() }
    }
}

/// Coefficient classes whose Tate cohomology vanishes without any matrix
/// computation; the returned rule name is recorded in audit output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VanishingClass {
    /// Multiplication by 2 is bijective on the coefficients.
    UniquelyTwoDivisible,
    /// Module of the form a + a with the swap involution.
    Hyperbolic,
    /// Finite of odd order.
    FiniteOdd,
}

pub fn tate_vanishes_by_divisibility(tag: VanishingClass) -> (bool, &'static str) {
    match tag {
        VanishingClass::UniquelyTwoDivisible => (true, "tate.vanishing.uniquely-2-divisible"),
        VanishingClass::Hyperbolic => (true, "tate.vanishing.hyperbolic"),
        VanishingClass::FiniteOdd => (true, "tate.vanishing.finite-odd"),
    }
}

/// JSON ingestion format for an involution module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvolutionInput {
    pub relations: Vec<Vec<i64>>,
    pub sigma: Vec<Vec<i64>>,
    pub base_ring: BaseRing,
    #[serde(default)]
    pub shift: i64,
}

impl InvolutionInput {
    pub fn build(&self) -> Result<InvolutionModule, InvolutionError> {
        let ngens = self.sigma.len();
        let relations = if self.relations.is_empty() {
            Mat::zeros(0, ngens)
        } else {
            Mat::from_rows(self.relations.clone())
        };
        let underlying = FgModule::new(self.base_ring, relations);
        InvolutionModule::new(underlying, Mat::from_rows(self.sigma.clone()), self.shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodule::BaseRing;

    fn z() -> FgModule {
        FgModule::free(BaseRing::Z, 1)
    }

    fn z2() -> FgModule {
        FgModule::cyclic(BaseRing::Z, &[2])
    }

    #[test]
    fn involution_check() {
        assert!(InvolutionModule::new(z(), Mat::from_rows(vec![vec![1]]), 0).is_ok());
        assert!(InvolutionModule::new(z(), Mat::from_rows(vec![vec![-1]]), 0).is_ok());
        assert_eq!(
            InvolutionModule::new(z(), Mat::from_rows(vec![vec![2]]), 0).unwrap_err(),
            InvolutionError::NotAnInvolution
        );
    }

    #[test]
    fn tate_of_z_trivial() {
        let pair = tate(&InvolutionModule::trivial(z(), 0));
        assert!(pair.h0().is_isomorphic(&z2()).unwrap());
        assert!(pair.h1().is_zero());
    }

    #[test]
    fn tate_of_z_negation() {
        let pair = tate(&InvolutionModule::negation(z(), 0));
        assert!(pair.h0().is_zero());
        assert!(pair.h1().is_isomorphic(&z2()).unwrap());
    }

    #[test]
    fn tate_of_z3_trivial() {
        // brute force over the 3 elements: the norm map is x2, an automorphism
        let pair = tate(&InvolutionModule::trivial(FgModule::cyclic(BaseRing::Z, &[3]), 0));
        assert!(pair.is_zero());
    }

    #[test]
    fn hyperbolic_examples() {
        for a in [z(), FgModule::cyclic(BaseRing::Z, &[4]), FgModule::zero(BaseRing::Z)] {
            let h = hyperbolic(&a);
            assert!(check_involution(&h));
            assert!(tate(&h).is_zero(), "tate(hyperbolic({a})) != 0");
        }
    }

    #[test]
    fn shift_rules() {
        let p = TatePair::new(z2(), FgModule::zero(BaseRing::Z));
        assert_eq!(tate_shift(&p, 2), p);
        let q = tate_shift(&p, 1);
        assert!(q.h0().is_zero());
        assert!(q.h1().is_isomorphic(&z2()).unwrap());
        let zero = TatePair::new(FgModule::zero(BaseRing::Z), FgModule::zero(BaseRing::Z));
        assert_eq!(tate_shift(&zero, 7), zero);
        // composition: shift(s) then shift(s') = shift(s + s')
        assert_eq!(tate_shift(&tate_shift(&p, 3), 5), tate_shift(&p, 8));
    }

    #[test]
    fn shifted_tate_swaps() {
        let m = InvolutionModule::trivial(z(), 1);
        let pair = tate(&m);
        assert!(pair.h0().is_zero());
        assert!(pair.h1().is_isomorphic(&z2()).unwrap());
    }

    #[test]
    fn vanishing_tags() {
        for tag in [
            VanishingClass::UniquelyTwoDivisible,
            VanishingClass::Hyperbolic,
            VanishingClass::FiniteOdd,
        ] {
            let (vanishes, rule) = tate_vanishes_by_divisibility(tag);
            assert!(vanishes);
            assert!(rule.starts_with("tate.vanishing."));
        }
    }

    #[test]
    fn finite_odd_brute_force() {
        // all involutions on Z/3, Z/5, Z/9 give vanishing Tate
        for n in [3i64, 5, 9] {
            let a = FgModule::cyclic(BaseRing::Z, &[n]);
            for s in 0..n {
                if (s * s).rem_euclid(n) != 1 {
                    continue;
                }
                let m = InvolutionModule::new(a.clone(), Mat::from_rows(vec![vec![s]]), 0).unwrap();
                assert!(tate(&m).is_zero(), "Z/{n} with sigma={s}");
            }
        }
    }
}
