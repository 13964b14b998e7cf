use super::expr::{normalize, GroupAtom, GroupExpr, SchemeExpr};
use super::rules::Evaluation;
use super::AppliedRule;

fn gw_spec(r: i64, x: &SchemeExpr) -> GroupAtom {
    GroupAtom::GWSpec { r, scheme: x.clone() }
}

fn k_copies(m: u32, x: &SchemeExpr) -> Vec<GroupAtom> {
    (0..m).map(|_| GroupAtom::KSpec { scheme: x.clone() }).collect()
}

/// GW^[r](P^n over X; O(i)) by the four-case parity table: only the parity
/// of the twist matters, and the answer is assembled from GW^[r](X),
/// copies of K(X), and GW^[r-n](X).
pub fn gw_projective(x: &SchemeExpr, n: u32, i: i64, r: i64) -> Evaluation {
    let even = i.rem_euclid(2) == 0;
    let n64 = i64::from(n);
    let (atoms, case) = if n % 2 == 0 && even {
        let m = n / 2;
        let mut a = vec![gw_spec(r, x)];
        a.extend(k_copies(m, x));
        (a, "even n, even twist")
    } else if n % 2 == 1 && !even {
        let m = (n + 1) / 2;
        (k_copies(m, x), "odd n, odd twist")
    } else if n % 2 == 1 && even {
        let m = (n - 1) / 2;
        let mut a = vec![gw_spec(r, x)];
        a.extend(k_copies(m, x));
        a.push(gw_spec(r - n64, x));
        (a, "odd n, even twist")
    } else {
        let m = n / 2;
        let mut a = k_copies(m, x);
        a.push(gw_spec(r - n64, x));
        (a, "even n, odd twist")
    };
    let mut ev = Evaluation {
        result: normalize(&GroupExpr::of(atoms)),
        rules: vec![],
        warnings: vec![],
    };
    ev.rules.push(AppliedRule::new(
        &format!("projective-space table, case: {case}"),
        "gw.projective.table",
    ));
    ev
}

/// Independent route: peel off one dimension at a time with the split
/// fibration GW^[r-n](X) -> GW^[r](P^n; O(1-n)) -> GW^[r](P^{n-1}; O(1-n))
/// whenever the twist parity matches 1-n, and fall back to the two direct
/// additivity computations (even n with even twist; odd n with odd twist)
/// otherwise. Bottoms out at P^0 = X.
pub fn gw_projective_split(x: &SchemeExpr, n: u32, i: i64, r: i64) -> Evaluation {
    let mut rules = vec![];
    let result = split_rec(x, n, i, r, &mut rules);
    Evaluation { result: normalize(&result), rules, warnings: vec![] }
}

fn split_rec(x: &SchemeExpr, n: u32, i: i64, r: i64, rules: &mut Vec<AppliedRule>) -> GroupExpr {
    let n64 = i64::from(n);
    if n == 0 {
        rules.push(AppliedRule::new("P^0 is the base", "gw.projective.base"));
        return GroupExpr::of(vec![gw_spec(r, x)]);
    }
    if (i - (1 - n64)).rem_euclid(2) == 0 {
        // duality twist matches the canonical line bundle of the fibration
        rules.push(AppliedRule::new(
            "split fibration peels off GW^[r-n](X)",
            "gw.projective.split-fibration",
        ));
        let rest = split_rec(x, n - 1, 1 - n64, r, rules);
        let mut atoms = vec![gw_spec(r - n64, x)];
        atoms.extend(rest.atoms);
        GroupExpr::of(atoms)
    } else if n % 2 == 0 {
        // even n, twist parity = n: direct additivity computation
        rules.push(AppliedRule::new(
            "semi-orthogonal additivity on even-dimensional projective space",
            "gw.projective.additivity.even",
        ));
        let mut atoms = vec![gw_spec(r, x)];
        atoms.extend(k_copies(n / 2, x));
        GroupExpr::of(atoms)
    } else {
        // odd n, twist parity = n: direct additivity computation
        rules.push(AppliedRule::new(
            "semi-orthogonal additivity on odd-dimensional projective space",
            "gw.projective.additivity.odd",
        ));
        GroupExpr::of(k_copies((n + 1) / 2, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcalc::field::FieldDesc;

    fn x() -> SchemeExpr {
        SchemeExpr::Field(FieldDesc::Finite(5))
    }

    #[test]
    fn table_sample_rows() {
        let ev = gw_projective(&x(), 2, 0, 0);
        assert_eq!(ev.result.to_string(), "GW^[0](F5) + K(F5)");
        let ev = gw_projective(&x(), 3, 1, 0);
        assert_eq!(ev.result.to_string(), "K(F5) + K(F5)");
        let ev = gw_projective(&x(), 1, 0, 0);
        assert_eq!(ev.result.to_string(), "GW^[-1](F5) + GW^[0](F5)");
        let ev = gw_projective(&x(), 2, 1, 0);
        assert_eq!(ev.result.to_string(), "GW^[-2](F5) + K(F5)");
    }

    #[test]
    fn twist_parity_only() {
        for n in 0..=5u32 {
            for i in [-3i64, -1, 1, 17] {
                let a = gw_projective(&x(), n, i, 2);
                let b = gw_projective(&x(), n, i + 2, 2);
                assert!(a.result.equivalent(&b.result), "n={n}, i={i}");
            }
        }
    }

    #[test]
    fn split_route_matches_table() {
        for n in 0..=5u32 {
            for i in [0i64, 1] {
                for r in [-1i64, 0, 3] {
                    let a = gw_projective(&x(), n, i, r);
                    let b = gw_projective_split(&x(), n, i, r);
                    assert!(
                        a.result.equivalent(&b.result),
                        "n={n}, i={i}, r={r}: table {} vs split {}",
                        a.result,
                        b.result
                    );
                }
            }
        }
    }

    #[test]
    fn split_route_over_singular_base() {
        let node = SchemeExpr::Node(FieldDesc::Finite(3));
        for n in 0..=5u32 {
            for i in [0i64, 1] {
                let a = gw_projective(&node, n, i, 0);
                let b = gw_projective_split(&node, n, i, 0);
                assert!(a.result.equivalent(&b.result), "n={n}, i={i}");
            }
        }
    }
}
