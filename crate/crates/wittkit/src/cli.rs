//! Query language and command dispatch for the `wittkit` binary.
//!
//! Group queries follow the grammar
//! `W^r(scheme)`, `GW^[r]_i(scheme)`, `Whigh^[r]_i(scheme)`, `K_i(scheme)`
//! with schemes built from `Fq`, `Rfield`, `Cfield`, `node(field)`,
//! `scheme x Gm`, `scheme x Cn`, `P^n(scheme; O(i))` and `V(scheme)`.

use crate::involution::{tate, InvolutionInput};
use crate::koszul::{default_bound, verify_suite_threads, CoeffField};
use crate::wittcalc::{
    gw_projective, gw_punctured, higher_witt_punctured, homotopy_invariance, k_theory_punctured,
    node_laurent_witt, node_witt, normalize, witt_field_oracle, witt_punctured, AppliedRule,
    Evaluation, FieldDesc, GroupAtom, GroupExpr, HigherVariant, SchemeExpr, WittError,
};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed group query.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupQuery {
    Witt { r: i64, scheme: SchemeExpr },
    GW { r: i64, i: i64, scheme: SchemeExpr },
    WittHigh { r: i64, i: i64, scheme: SchemeExpr },
    K { i: i64, scheme: SchemeExpr },
}

impl fmt::Display for GroupQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupQuery::Witt { r, scheme } => write!(f, "W^{r}({scheme})"),
            GroupQuery::GW { r, i, scheme } => write!(f, "GW^[{r}]_{i}({scheme})"),
            GroupQuery::WittHigh { r, i, scheme } => write!(f, "Whigh^[{r}]_{i}({scheme})"),
            GroupQuery::K { i, scheme } => write!(f, "K_{i}({scheme})"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { s: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: msg.into() })
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected '{lit}'"))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.s[start] == b'-') {
            self.pos = start;
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { offset: start, message: "integer out of range".into() })
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| ParseError {
            offset: start,
            message: "expected a nonnegative integer".into(),
        })
    }

    fn field(&mut self) -> Result<FieldDesc, ParseError> {
        if self.eat("Rfield") {
            return Ok(FieldDesc::RealClosed);
        }
        if self.eat("Cfield") {
            return Ok(FieldDesc::QuadraticallyClosed);
        }
        if self.eat("F") {
            let start = self.pos;
            let q = self.uint()? as u64;
            return FieldDesc::finite(q)
                .map_err(|e| ParseError { offset: start, message: e.to_string() });
        }
        self.err("expected a field (Fq, Rfield or Cfield)")
    }

    fn scheme(&mut self) -> Result<SchemeExpr, ParseError> {
        let mut base = self.scheme_base()?;
        loop {
            let save = self.pos;
            if self.eat(" x Gm") {
                base = base.punctured(1);
            } else if self.eat(" x C") {
                match self.uint() {
                    Ok(n) if n >= 1 => base = base.punctured(n),
                    Ok(_) => return self.err("puncturing needs n >= 1"),
                    Err(e) => return Err(e),
                }
            } else {
                self.pos = save;
                break;
            }
        }
        Ok(base)
    }

    fn scheme_base(&mut self) -> Result<SchemeExpr, ParseError> {
        if self.eat("node(") {
            let k = self.field()?;
            self.expect(")")?;
            return Ok(SchemeExpr::Node(k));
        }
        if self.eat("V(") {
            let inner = self.scheme()?;
            self.expect(")")?;
            return Ok(inner.bundle());
        }
        if self.eat("P^") {
            let n = self.uint()?;
            self.expect("(")?;
            let inner = self.scheme()?;
            let twist = if self.eat("; O(") {
                let t = self.int()?;
                self.expect(")")?;
                t
            } else {
                0
            };
            self.expect(")")?;
            return Ok(SchemeExpr::ProjSpace(Box::new(inner), n, twist));
        }
        if self.eat("A^") {
            let n = self.uint()?;
            self.expect("(")?;
            let inner = self.scheme()?;
            self.expect(")")?;
            return Ok(SchemeExpr::AffineSpace(Box::new(inner), n));
        }
        self.field().map(SchemeExpr::Field)
    }

    fn group(&mut self) -> Result<GroupQuery, ParseError> {
        let q = if self.eat("GW^[") {
            let r = self.int()?;
            self.expect("]_")?;
            let i = self.int()?;
            self.expect("(")?;
            let scheme = self.scheme()?;
            self.expect(")")?;
            GroupQuery::GW { r, i, scheme }
        } else if self.eat("Whigh^[") {
            let r = self.int()?;
            self.expect("]_")?;
            let i = self.int()?;
            self.expect("(")?;
            let scheme = self.scheme()?;
            self.expect(")")?;
            GroupQuery::WittHigh { r, i, scheme }
        } else if self.eat("W^") {
            let r = self.int()?;
            self.expect("(")?;
            let scheme = self.scheme()?;
            self.expect(")")?;
            GroupQuery::Witt { r, scheme }
        } else if self.eat("K_") {
            let i = self.int()?;
            self.expect("(")?;
            let scheme = self.scheme()?;
            self.expect(")")?;
            GroupQuery::K { i, scheme }
        } else {
            return self.err("expected a group query (W^, GW^[, Whigh^[ or K_)");
        };
        Ok(q)
    }
}

/// Parses one group query from the exact canonical syntax.
pub fn parse(text: &str) -> Result<GroupQuery, ParseError> {
    let mut p = Parser::new(text.trim());
    let q = p.group()?;
    if p.pos != p.s.len() {
        return p.err("trailing input");
    }
    Ok(q)
}

/// Evaluates a parsed query against the rule tables.
pub fn run(q: &GroupQuery) -> Result<Evaluation, WittError> {
    match q {
        GroupQuery::Witt { r, scheme } => run_witt(*r, scheme),
        GroupQuery::GW { r, i, scheme } => run_gw(*r, *i, scheme),
        GroupQuery::WittHigh { r, i, scheme } => Ok(run_whigh(*r, *i, scheme)),
        GroupQuery::K { i, scheme } => run_k(*i, scheme),
    }
}

fn symbolic(ev_atoms: Vec<GroupAtom>) -> Evaluation {
    Evaluation {
        result: normalize(&GroupExpr::of(ev_atoms)),
        rules: vec![],
        warnings: vec![],
    }
}

fn run_witt(r: i64, scheme: &SchemeExpr) -> Result<Evaluation, WittError> {
    match scheme {
        SchemeExpr::PuncturedAffine(base, n) => match witt_punctured(base, *n, r) {
            Ok(ev) => Ok(ev),
            Err(WittError::HypothesisFailed { h0, h1 }) => {
                // the Laurent ring of the node is still computable through
                // the Tate-circle decomposition when n = 1
                if let (SchemeExpr::Node(k), 1) = (base.as_ref(), *n) {
                    let lr = node_laurent_witt(*k);
                    let value = match r.rem_euclid(4) {
                        0 => Some(lr.w0),
                        1 => Some(lr.w1),
                        _ => None,
                    };
                    if let Some(m) = value {
                        let mut ev = Evaluation {
                            result: GroupExpr::concrete(m),
                            rules: lr.rules,
                            warnings: lr.warnings,
                        };
                        ev.warnings.insert(
                            0,
                            format!(
                                "splitting formula inapplicable: Tate(K_-1) = (h0 = {h0}, h1 = {h1})"
                            ),
                        );
                        return Ok(ev);
                    }
                }
                Err(WittError::HypothesisFailed { h0, h1 })
            }
            Err(e) => Err(e),
        },
        SchemeExpr::VectorBundleOver(_) | SchemeExpr::AffineSpace(_, _) => {
            let ev = homotopy_invariance(&GroupExpr::of(vec![GroupAtom::Witt {
                r,
                scheme: scheme.clone(),
            }]));
            // re-dispatch on the stripped scheme if it is still structured
            match ev.result.atoms.as_slice() {
                [GroupAtom::Witt { r, scheme }] => {
                    let mut inner = run_witt(*r, &scheme.clone())?;
                    inner.rules = ev.rules.into_iter().chain(inner.rules).collect();
                    Ok(inner)
                }
                _ => Ok(ev),
            }
        }
        SchemeExpr::Field(_) | SchemeExpr::Node(_) => {
            Ok(symbolic(vec![GroupAtom::Witt { r, scheme: scheme.clone() }]))
        }
        SchemeExpr::ProjSpace(_, _, _) => Err(WittError::NotTabulated(
            "4-periodic Witt groups of projective space are not tabulated; query GW instead"
                .into(),
        )),
    }
}

fn run_gw(r: i64, i: i64, scheme: &SchemeExpr) -> Result<Evaluation, WittError> {
    match scheme {
        SchemeExpr::PuncturedAffine(base, n) => Ok(gw_punctured(base, *n, r, i)),
        SchemeExpr::ProjSpace(base, n, twist) => {
            let ev = gw_projective(base, *n, *twist, r);
            // take homotopy groups in degree i of the spectrum answer
            let atoms = ev
                .result
                .atoms
                .iter()
                .map(|a| match a {
                    GroupAtom::GWSpec { r, scheme } => {
                        GroupAtom::GW { r: *r, i, scheme: scheme.clone() }
                    }
                    GroupAtom::KSpec { scheme } => GroupAtom::K { i, scheme: scheme.clone() },
                    other => other.clone(),
                })
                .collect();
            let mut out = symbolic(atoms);
            out.rules = ev.rules;
            Ok(out)
        }
        SchemeExpr::VectorBundleOver(base) | SchemeExpr::AffineSpace(base, _) => {
            if base.is_regular() {
                let mut ev = run_gw(r, i, base)?;
                ev.rules.insert(
                    0,
                    AppliedRule::new(
                        "homotopy invariance over a regular base",
                        "gw.homotopy-invariance.regular",
                    ),
                );
                Ok(ev)
            } else {
                Err(WittError::NotTabulated(
                    "hermitian K-theory of bundles over singular bases is not tabulated".into(),
                ))
            }
        }
        SchemeExpr::Field(_) | SchemeExpr::Node(_) => {
            Ok(symbolic(vec![GroupAtom::GW { r, i, scheme: scheme.clone() }]))
        }
    }
}

fn run_whigh(r: i64, i: i64, scheme: &SchemeExpr) -> Evaluation {
    match scheme {
        SchemeExpr::PuncturedAffine(base, n) => {
            higher_witt_punctured(base, *n, r, i, HigherVariant::Witt)
        }
        SchemeExpr::VectorBundleOver(_) | SchemeExpr::AffineSpace(_, _) => {
            homotopy_invariance(&GroupExpr::of(vec![GroupAtom::WittHigh {
                r,
                i,
                scheme: scheme.clone(),
            }]))
        }
        _ => symbolic(vec![GroupAtom::WittHigh { r, i, scheme: scheme.clone() }]),
    }
}

fn run_k(i: i64, scheme: &SchemeExpr) -> Result<Evaluation, WittError> {
    match scheme {
        SchemeExpr::PuncturedAffine(base, n) => Ok(k_theory_punctured(base, *n, i, false)),
        _ => Ok(symbolic(vec![GroupAtom::K { i, scheme: scheme.clone() }])),
    }
}

/// JSON shape of a single evaluation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub query: String,
    pub result: String,
    pub rules_applied: Vec<AppliedRule>,
    pub warnings: Vec<String>,
}

pub fn report_for(query: &str, ev: &Evaluation) -> RunReport {
    RunReport {
        query: query.to_string(),
        result: ev.result.to_string(),
        rules_applied: ev.rules.clone(),
        warnings: ev.warnings.clone(),
    }
}

/// Formatted tables for the fixed families of results.
pub fn table(name: &str, q_list: &[u64], n_range: (u32, u32)) -> Result<String, WittError> {
    let mut out = String::new();
    match name {
        "witt-fields" => {
            out.push_str("q     W(Fq)\n");
            for &q in q_list {
                let data = witt_field_oracle(q)?;
                out.push_str(&format!("{:<5} {}\n", q, data.witt));
            }
        }
        "node" => {
            out.push_str("q     W^0(R)       W^1(R)  W^2(R)  W^3(R)\n");
            for &q in q_list {
                let k = FieldDesc::finite(q)?;
                let r = node_witt(k);
                out.push_str(&format!(
                    "{:<5} {:<12} {:<7} {:<7} {}\n",
                    q, r.groups[0], r.groups[1], r.groups[2], r.groups[3]
                ));
            }
        }
        "gw-proj" => {
            out.push_str("n  twist  GW^[r](P^n_X; O(i))\n");
            let x = SchemeExpr::Field(FieldDesc::Finite(5));
            for n in n_range.0..=n_range.1 {
                for i in [0i64, 1] {
                    let ev = gw_projective(&x, n, i, 0);
                    let shown = ev
                        .result
                        .to_string()
                        .replace("(F5)", "(X)");
                    out.push_str(&format!("{:<2} {:<6} {}\n", n, i, shown));
                }
            }
        }
        other => {
            return Err(WittError::BadInput(format!(
                "unknown table '{other}' (expected witt-fields, node or gw-proj)"
            )))
        }
    }
    Ok(out)
}

/// Tate verb: reads an involution module description and prints its Tate
/// cohomology pair.
pub fn tate_report(input: &InvolutionInput) -> Result<String, String> {
    let m = input.build().map_err(|e| e.to_string())?;
    Ok(tate(&m).to_string())
}

/// Koszul-verify verb.
pub fn koszul_report(n: usize, bound: Option<i64>, field: &str, threads: usize) -> Result<(Vec<crate::koszul::VerificationReport>, bool), String> {
    let field = match field {
        "Q" => CoeffField::Q,
        f => {
            let p: u64 = f
                .strip_prefix('F')
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| format!("unknown field '{f}' (expected Q or Fp)"))?;
            CoeffField::Fp(p)
        }
    };
    let bound = bound.unwrap_or_else(|| default_bound(n));
    let reports = verify_suite_threads(n, bound, field, threads);
    let ok = reports.iter().all(|r| r.passed());
    Ok((reports, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in [
            "W^0(F5 x Gm)",
            "W^2(node(F7))",
            "GW^[1]_0(F9 x C3)",
            "Whigh^[2]_-1(node(F3) x C2)",
            "K_0(F5 x Gm)",
            "W^0(V(F5))",
            "GW^[0]_0(P^2(F5; O(-1)))",
            "GW^[0]_0(P^3(F5))",
        ] {
            let q = parse(s).unwrap();
            assert_eq!(q.to_string(), s, "roundtrip of {s}");
        }
    }

    #[test]
    fn parse_errors_have_offsets() {
        let e = parse("W^0(F4 x Gm)").unwrap_err();
        assert!(e.message.contains("even characteristic"), "{e}");
        let e = parse("W^0(F5 x Gm) junk").unwrap_err();
        assert!(e.message.contains("trailing"));
        assert_eq!(e.offset, 12);
        assert!(parse("Q^0(F5)").is_err());
    }

    #[test]
    fn eval_punctured_field() {
        let ev = run(&parse("W^0(F5 x Gm)").unwrap()).unwrap();
        assert_eq!(ev.result.to_string(), "Z/2 + Z/2 + Z/2 + Z/2");
    }

    #[test]
    fn eval_node_laurent_with_warning() {
        let ev = run(&parse("W^0(node(F5) x Gm)").unwrap()).unwrap();
        assert_eq!(ev.result.to_string(), "Z/2 + Z/2 + Z/2 + Z/2 + Z/2");
        assert!(ev.warnings[0].contains("h0 = Z/2"), "{:?}", ev.warnings);
        let ev = run(&parse("W^1(node(F3) x Gm)").unwrap()).unwrap();
        assert_eq!(ev.result.to_string(), "Z/2 + Z/4");
    }

    #[test]
    fn eval_node_c2_fails_hypothesis() {
        let err = run(&parse("W^0(node(F5) x C2)").unwrap()).unwrap_err();
        assert!(matches!(err, WittError::HypothesisFailed { .. }));
    }

    #[test]
    fn eval_bundle_and_proj() {
        let ev = run(&parse("W^0(V(F5))").unwrap()).unwrap();
        assert_eq!(ev.result.to_string(), "Z/2 + Z/2");
        let ev = run(&parse("GW^[0]_0(P^2(F5))").unwrap()).unwrap();
        assert_eq!(ev.result.to_string(), "Z + GW^[0]_0(F5)");
    }

    #[test]
    fn tables_render() {
        let t = table("witt-fields", &[3, 5, 7, 9], (0, 0)).unwrap();
        assert!(t.contains("Z/4"));
        assert!(t.contains("Z/2 + Z/2"));
        let t = table("node", &[3, 5], (0, 0)).unwrap();
        assert!(t.contains("Z/4 + Z/2") || t.contains("Z/2 + Z/4"));
        let t = table("gw-proj", &[], (0, 5)).unwrap();
        assert_eq!(t.lines().count(), 13);
        assert!(table("bogus", &[], (0, 0)).is_err());
    }
}
