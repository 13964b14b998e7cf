use super::expr::{normalize, GroupAtom, GroupExpr, SchemeExpr};
use super::{AppliedRule, WittError};
use crate::involution::{tate, InvolutionModule, TatePair};
use crate::zmodule::{BaseRing, FgModule};

/// Result of a rule evaluation: the group expression plus the audit trail.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub result: GroupExpr,
    pub rules: Vec<AppliedRule>,
    pub warnings: Vec<String>,
}

impl Evaluation {
    fn new(result: GroupExpr) -> Self {
        Evaluation { result, rules: vec![], warnings: vec![] }
    }

    fn rule(mut self, rule: &str, anchor: &str) -> Self {
        self.rules.push(AppliedRule::new(rule, anchor));
        self
    }

}

/// K_-1 of the supported schemes, as a module with involution (the duality
/// involution K_-1 carries into the Tate construction). Fields and other
/// regular affine bases give 0; the node gives Z with the trivial
/// involution; bundles and affine spaces inherit from the base.
pub fn k_minus_one(x: &SchemeExpr) -> Result<InvolutionModule, WittError> {
    match x {
        SchemeExpr::Field(_) => Ok(InvolutionModule::trivial(FgModule::zero(BaseRing::Z), 0)),
        SchemeExpr::Node(_) => Ok(InvolutionModule::trivial(FgModule::free(BaseRing::Z, 1), 0)),
        SchemeExpr::VectorBundleOver(b) | SchemeExpr::AffineSpace(b, _) => k_minus_one(b),
        other => Err(WittError::NotTabulated(format!("K_-1 not tabulated for {other}"))),
    }
}

fn tate_of_k_minus_one(x: &SchemeExpr) -> Result<TatePair, WittError> {
    Ok(tate(&k_minus_one(x)?))
}

fn hypothesis_failed(pair: &TatePair) -> WittError {
    WittError::HypothesisFailed { h0: pair.h0().to_string(), h1: pair.h1().to_string() }
}

/// W^r(X x (A^n - 0)) = W^r(X) + W^{r+1-n}(X), valid when the Tate
/// cohomology of K_-1(X) vanishes; the hypothesis is computed, not assumed.
pub fn witt_punctured(x: &SchemeExpr, n: u32, r: i64) -> Result<Evaluation, WittError> {
    if n < 1 {
        return Err(WittError::BadInput("puncturing needs n >= 1".into()));
    }
    let pair = tate_of_k_minus_one(x)?;
    if !pair.is_zero() {
        return Err(hypothesis_failed(&pair));
    }
    let sum = GroupExpr::of(vec![
        GroupAtom::Witt { r, scheme: x.clone() },
        GroupAtom::Witt { r: r + 1 - i64::from(n), scheme: x.clone() },
    ]);
    Ok(Evaluation::new(normalize(&sum))
        .rule("Tate cohomology of K_-1 vanishes", "tate.vanishing.checked")
        .rule(
            "punctured-space splitting W^r(X) + W^{r+1-n}(X)",
            "witt.punctured.split",
        ))
}

/// Independent route for n = 1 through the contracted-functor sequence:
/// W(X x Gm) = W(X) + W(X) when the Tate obstruction vanishes. Exists as a
/// separate code path so the two derivations can be compared.
pub fn witt_punctured_bass(x: &SchemeExpr, r: i64) -> Result<Evaluation, WittError> {
    let pair = tate_of_k_minus_one(x)?;
    if !pair.is_zero() {
        return Err(hypothesis_failed(&pair));
    }
    // the contracted-functor sequence identifies the extra summand in
    // degree r with W^r(X) itself (loop term with the same shift)
    let sum = GroupExpr::of(vec![
        GroupAtom::Witt { r, scheme: x.clone() },
        GroupAtom::Witt { r, scheme: x.clone() },
    ]);
    Ok(Evaluation::new(normalize(&sum)).rule(
        "Laurent contracted-functor sequence, cokernel of the K-theory comparison",
        "witt.laurent.contracted",
    ))
}

/// One term of a long-exact-sequence report.
#[derive(Debug, Clone)]
pub struct SequenceTerm {
    pub label: String,
    pub value: GroupExpr,
}

#[derive(Debug, Clone)]
pub struct SequenceReport {
    pub terms: Vec<SequenceTerm>,
    pub extensions_resolved: bool,
    pub rules: Vec<AppliedRule>,
}

/// The six-term stretch around degree 0 of the long exact sequence induced
/// by the fibration with fiber the (n+1)-fold desuspended Tate spectrum of
/// K_-1(X). Tate contributions are 2-periodic, so only the parity of the
/// shift r - n - 1 matters. Extensions are reported, never resolved, unless
/// the Tate terms vanish.
pub fn witt_les_punctured(x: &SchemeExpr, n: u32, r: i64) -> Result<SequenceReport, WittError> {
    let pair = tate_of_k_minus_one(x)?;
    let mut terms = vec![];
    // homotopy groups of the fiber: pi_i = h^{(i + n + 1) mod 2} of the pair
    let fiber = |i: i64| -> FgModule {
        if (i + i64::from(n) + 1).rem_euclid(2) == 0 {
            pair.h0().clone()
        } else {
            pair.h1().clone()
        }
    };
    let middle = |i: i64| -> GroupExpr {
        GroupExpr::of(vec![
            GroupAtom::Witt { r: r - i, scheme: x.clone() },
            GroupAtom::Witt { r: r - i + 1 - i64::from(n), scheme: x.clone() },
        ])
    };
    for i in [1i64, 0] {
        terms.push(SequenceTerm {
            label: format!("pi_{i} fiber"),
            value: normalize(&GroupExpr::concrete(fiber(i))),
        });
        terms.push(SequenceTerm {
            label: format!("W^{}(X) + W^{}(X)", r - i, r - i + 1 - i64::from(n)),
            value: normalize(&middle(i)),
        });
        terms.push(SequenceTerm {
            label: format!("W^{}(X x C{n})", r - i),
            value: GroupExpr::of(vec![GroupAtom::Witt {
                r: r - i,
                scheme: x.clone().punctured(n),
            }]),
        });
    }
    let resolved = pair.is_zero();
    let mut rules = vec![AppliedRule::new(
        "long exact sequence of the punctured-space fibration",
        "witt.punctured.les",
    )];
    if resolved {
        rules.push(AppliedRule::new(
            "zero fiber: sequence degenerates to the split formula",
            "witt.punctured.split",
        ));
    }
    Ok(SequenceReport { terms, extensions_resolved: resolved, rules })
}

/// Homotopy invariance: Witt-type groups of a vector bundle agree with
/// those of the base. Applies to W^r, W^[r]_i and the coWitt variant.
pub fn homotopy_invariance(g: &GroupExpr) -> Evaluation {
    let mut applied = false;
    let atoms = g
        .atoms
        .iter()
        .map(|a| {
            let strip = |scheme: &SchemeExpr| -> Option<SchemeExpr> {
                match scheme {
                    SchemeExpr::VectorBundleOver(b) | SchemeExpr::AffineSpace(b, _) => {
                        let mut inner = (**b).clone();
                        // repeated towers collapse in one pass
                        loop {
                            match inner {
                                SchemeExpr::VectorBundleOver(c)
                                | SchemeExpr::AffineSpace(c, _) => inner = *c,
                                done => return Some(done),
                            }
                        }
                    }
                    _ => None,
                }
            };
            match a {
                GroupAtom::Witt { r, scheme } => strip(scheme).map(|s| {
                    applied = true;
                    GroupAtom::Witt { r: *r, scheme: s }
                }),
                GroupAtom::WittHigh { r, i, scheme } => strip(scheme).map(|s| {
                    applied = true;
                    GroupAtom::WittHigh { r: *r, i: *i, scheme: s }
                }),
                GroupAtom::CoWittHigh { r, i, scheme } => strip(scheme).map(|s| {
                    applied = true;
                    GroupAtom::CoWittHigh { r: *r, i: *i, scheme: s }
                }),
                _ => None,
            }
            .unwrap_or_else(|| a.clone())
        })
        .collect();
    let mut ev = Evaluation::new(normalize(&GroupExpr::of(atoms)));
    if applied {
        ev = ev.rule(
            "homotopy invariance: bundle replaced by its base",
            "witt.homotopy-invariance",
        );
    }
    ev
}

/// K_i(X x (A^n - 0)) = K_i(X) + K_{i-1}(X) + two relative pieces; the
/// relative pieces vanish for regular X. In KH mode only the two absolute
/// summands appear.
pub fn k_theory_punctured(x: &SchemeExpr, n: u32, i: i64, kh_mode: bool) -> Evaluation {
    let mut atoms = vec![
        GroupAtom::K { i, scheme: x.clone() },
        GroupAtom::K { i: i - 1, scheme: x.clone() },
    ];
    let mut ev_rules: Vec<(&str, &str)> = vec![(
        "punctured-space K-theory decomposition",
        "ktheory.punctured.four-terms",
    )];
    if kh_mode {
        ev_rules.push(("homotopy K-theory: relative pieces drop", "ktheory.punctured.kh"));
    } else if x.is_regular() {
        ev_rules.push((
            "regular base: relative pieces vanish by homotopy invariance",
            "ktheory.punctured.regular",
        ));
    } else {
        atoms.push(GroupAtom::KRelProj { n, scheme: x.clone() });
        atoms.push(GroupAtom::KRelAffine { n, scheme: x.clone() });
    }
    let mut ev = Evaluation::new(normalize(&GroupExpr::of(atoms)));
    for (r, a) in ev_rules {
        ev = ev.rule(r, a);
    }
    ev
}

/// GW^[r]_i(X x (A^n - 0)) = GW^[r]_i(X) + GW^[r-n]_{i-1}(X) + two relative
/// pieces; relative pieces vanish for regular X. GW shifts are never
/// reduced mod 4.
pub fn gw_punctured(x: &SchemeExpr, n: u32, r: i64, i: i64) -> Evaluation {
    let mut atoms = vec![
        GroupAtom::GW { r, i, scheme: x.clone() },
        GroupAtom::GW { r: r - i64::from(n), i: i - 1, scheme: x.clone() },
    ];
    let mut rules: Vec<(&str, &str)> = vec![(
        "punctured-space hermitian decomposition",
        "gw.punctured.four-terms",
    )];
    if x.is_regular() {
        rules.push((
            "regular base: relative pieces vanish by homotopy invariance",
            "gw.punctured.regular",
        ));
    } else {
        atoms.push(GroupAtom::GWRelProj { r, n, scheme: x.clone() });
        atoms.push(GroupAtom::GWRelAffine { r, n, scheme: x.clone() });
    }
    let mut ev = Evaluation::new(normalize(&GroupExpr::of(atoms)));
    for (rl, a) in rules {
        ev = ev.rule(rl, a);
    }
    ev
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HigherVariant {
    Witt,
    CoWitt,
}

/// Higher (co)Witt groups of the punctured space:
/// W^[r]_i(X x C_n) = W^[r]_i(X) + W^[r-n]_{i-1}(X), with the shift
/// reduced mod 4 (these groups are 4-periodic in the shift), hence
/// 4-periodicity in n.
pub fn higher_witt_punctured(
    x: &SchemeExpr,
    n: u32,
    r: i64,
    i: i64,
    variant: HigherVariant,
) -> Evaluation {
    let mk = |r: i64, i: i64| match variant {
        HigherVariant::Witt => GroupAtom::WittHigh { r, i, scheme: x.clone() },
        HigherVariant::CoWitt => GroupAtom::CoWittHigh { r, i, scheme: x.clone() },
    };
    let sum = GroupExpr::of(vec![mk(r, i), mk(r - i64::from(n), i - 1)]);
    Evaluation::new(normalize(&sum)).rule(
        "higher Witt splitting with 4-periodic shift",
        "witt.higher.punctured",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcalc::field::FieldDesc;
    use num_bigint::BigInt;

    fn f5() -> SchemeExpr {
        SchemeExpr::Field(FieldDesc::Finite(5))
    }

    fn node5() -> SchemeExpr {
        SchemeExpr::Node(FieldDesc::Finite(5))
    }

    #[test]
    fn k_minus_one_table() {
        assert!(tate(&k_minus_one(&f5()).unwrap()).is_zero());
        let pair = tate(&k_minus_one(&node5()).unwrap());
        assert!(!pair.is_zero());
        assert!(!pair.h0().is_zero());
        assert!(pair.h1().is_zero());
        // propagates through bundles
        assert!(!tate(&k_minus_one(&node5().bundle()).unwrap()).is_zero());
        assert!(matches!(
            k_minus_one(&node5().punctured(1)),
            Err(WittError::NotTabulated(_))
        ));
    }

    #[test]
    fn punctured_gm_over_f5() {
        let ev = witt_punctured(&f5(), 1, 0).unwrap();
        let m = ev.result.as_concrete().unwrap();
        assert_eq!(m.canonical_form().order(), Some(BigInt::from(16)));
        assert_eq!(m.canonical_form().factors.len(), 4);
    }

    #[test]
    fn punctured_c2_drops_odd_shift() {
        // W^0(X) + W^{-1}(X) = W(k) + W^3(k) = W(k)
        let ev = witt_punctured(&f5(), 2, 0).unwrap();
        let m = ev.result.as_concrete().unwrap();
        assert!(m.is_isomorphic(&FieldDesc::Finite(5).witt_group()).unwrap());
    }

    #[test]
    fn punctured_node_fails_hypothesis() {
        let err = witt_punctured(&node5(), 1, 0).unwrap_err();
        match err {
            WittError::HypothesisFailed { h0, h1 } => {
                assert_eq!(h0, "Z/2");
                assert_eq!(h1, "0");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bass_route_agrees() {
        for q in [3u64, 5, 9] {
            for r in 0..4 {
                let x = SchemeExpr::Field(FieldDesc::Finite(q));
                let a = witt_punctured(&x, 1, r).unwrap();
                let b = witt_punctured_bass(&x, r).unwrap();
                assert!(a.result.equivalent(&b.result), "q={q}, r={r}");
            }
        }
    }

    #[test]
    fn four_periodicity_in_n() {
        for n in 1..=8u32 {
            for r in 0..4i64 {
                let a = witt_punctured(&f5(), n, r).unwrap();
                let b = witt_punctured(&f5(), n + 4, r).unwrap();
                assert!(a.result.equivalent(&b.result), "n={n}, r={r}");
            }
        }
    }

    #[test]
    fn les_report_shapes() {
        let rep = witt_les_punctured(&f5(), 1, 0).unwrap();
        assert!(rep.extensions_resolved);
        assert_eq!(rep.terms.len(), 6);
        let rep = witt_les_punctured(&node5(), 1, 0).unwrap();
        assert!(!rep.extensions_resolved);
        // Tate placements 2-periodic in n
        let rep5 = witt_les_punctured(&node5(), 5, 0).unwrap();
        let places: Vec<String> = rep.terms.iter().map(|t| t.value.to_string()).collect();
        let places5: Vec<String> = rep5.terms.iter().map(|t| t.value.to_string()).collect();
        assert_eq!(places[0], places5[0]);
        assert_eq!(places[3], places5[3]);
    }

    #[test]
    fn bundle_invariance() {
        let g = GroupExpr::of(vec![GroupAtom::Witt { r: 0, scheme: f5().bundle() }]);
        let ev = homotopy_invariance(&g);
        let m = ev.result.as_concrete().unwrap();
        assert_eq!(m.canonical_form().order(), Some(BigInt::from(4)));
        // idempotent
        let again = homotopy_invariance(&ev.result);
        assert!(again.result.equivalent(&ev.result));
        // symbolic case
        let g = GroupExpr::of(vec![GroupAtom::WittHigh {
            r: 2,
            i: 3,
            scheme: node5().bundle(),
        }]);
        let ev = homotopy_invariance(&g);
        assert_eq!(ev.result.to_string(), "Whigh^[2]_3(node(F5))");
    }

    #[test]
    fn k_theory_shapes() {
        let ev = k_theory_punctured(&f5(), 1, 0, false);
        // K_0(k) + K_-1(k) = Z + 0
        let m = ev.result.as_concrete().unwrap();
        let cf = m.canonical_form();
        assert_eq!(cf.free_rank, 1);
        assert!(cf.factors.is_empty());

        let ev = k_theory_punctured(&node5(), 2, 1, false);
        assert_eq!(ev.result.atoms.len(), 4);
        let ev = k_theory_punctured(&node5(), 2, 1, true);
        assert_eq!(ev.result.atoms.len(), 2);
    }

    #[test]
    fn gw_shapes() {
        let ev = gw_punctured(&f5(), 2, 0, 0);
        assert_eq!(ev.result.atoms.len(), 2);
        // shift is not reduced mod 4 in GW-land
        let ev = gw_punctured(&f5(), 6, 0, 0);
        assert!(ev.result.to_string().contains("GW^[-6]_-1(F5)"));
        let ev = gw_punctured(&node5(), 1, 0, 0);
        assert_eq!(ev.result.atoms.len(), 4);
    }

    #[test]
    fn higher_witt_periodicity() {
        for variant in [HigherVariant::Witt, HigherVariant::CoWitt] {
            for n in 1..=4u32 {
                for r in 0..4i64 {
                    let a = higher_witt_punctured(&node5(), n, r, 0, variant);
                    let b = higher_witt_punctured(&node5(), n + 4, r, 0, variant);
                    assert!(a.result.equivalent(&b.result), "n={n}, r={r}");
                }
            }
        }
        let ev = higher_witt_punctured(&node5(), 1, 0, 0, HigherVariant::Witt);
        assert_eq!(
            ev.result.to_string(),
            "Whigh^[0]_0(node(F5)) + Whigh^[3]_-1(node(F5))"
        );
    }
}
