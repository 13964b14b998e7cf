use super::field::{witt_field, FieldDesc};
use super::node::node_witt_value;
use crate::zmodule::{BaseRing, FgModule};
use std::fmt;

/// The closed vocabulary of schemes the calculator evaluates over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeExpr {
    Field(FieldDesc),
    /// Spec k[x,y]/(y^2 - x^3 + x^2)
    Node(FieldDesc),
    /// base x (A^n - 0)
    PuncturedAffine(Box<SchemeExpr>, u32),
    VectorBundleOver(Box<SchemeExpr>),
    /// P^n over the base with a chosen twist O(i)
    ProjSpace(Box<SchemeExpr>, u32, i64),
    AffineSpace(Box<SchemeExpr>, u32),
}

impl SchemeExpr {
    pub fn punctured(self, n: u32) -> SchemeExpr {
        SchemeExpr::PuncturedAffine(Box::new(self), n)
    }

    pub fn bundle(self) -> SchemeExpr {
        SchemeExpr::VectorBundleOver(Box::new(self))
    }

    /// Regularity, used to discharge the relative K and GW pieces.
    pub fn is_regular(&self) -> bool {
        match self {
            SchemeExpr::Field(_) => true,
            SchemeExpr::Node(_) => false,
            SchemeExpr::PuncturedAffine(b, _)
            | SchemeExpr::VectorBundleOver(b)
            | SchemeExpr::ProjSpace(b, _, _)
            | SchemeExpr::AffineSpace(b, _) => b.is_regular(),
        }
    }
}

impl fmt::Display for SchemeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeExpr::Field(k) => write!(f, "{k}"),
            SchemeExpr::Node(k) => write!(f, "node({k})"),
            SchemeExpr::PuncturedAffine(b, 1) => write!(f, "{b} x Gm"),
            SchemeExpr::PuncturedAffine(b, n) => write!(f, "{b} x C{n}"),
            SchemeExpr::VectorBundleOver(b) => write!(f, "V({b})"),
            SchemeExpr::ProjSpace(b, n, 0) => write!(f, "P^{n}({b})"),
            SchemeExpr::ProjSpace(b, n, i) => write!(f, "P^{n}({b}; O({i}))"),
            SchemeExpr::AffineSpace(b, n) => write!(f, "A^{n}({b})"),
        }
    }
}

/// One summand of a formal direct sum.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupAtom {
    Concrete(FgModule),
    /// W^r(X), Balmer's 4-periodic Witt group
    Witt { r: i64, scheme: SchemeExpr },
    /// GW^[r]_i(X)
    GW { r: i64, i: i64, scheme: SchemeExpr },
    /// spectrum-level GW^[r](X), used by the projective-space table
    GWSpec { r: i64, scheme: SchemeExpr },
    /// spectrum-level K(X)
    KSpec { scheme: SchemeExpr },
    /// K_i(X)
    K { i: i64, scheme: SchemeExpr },
    /// higher Witt group W^[r]_i(X)
    WittHigh { r: i64, i: i64, scheme: SchemeExpr },
    /// coWitt group W'^[r]_i(X)
    CoWittHigh { r: i64, i: i64, scheme: SchemeExpr },
    /// I(k), kernel of the rank map
    FundamentalIdeal(FieldDesc),
    /// relative K-theory of (V(1), P^{n-1}) over the base
    KRelProj { n: u32, scheme: SchemeExpr },
    /// relative K-theory of (A^n, base)
    KRelAffine { n: u32, scheme: SchemeExpr },
    /// relative GW piece over (V(1), P^{n-1}; O(1-n))
    GWRelProj { r: i64, n: u32, scheme: SchemeExpr },
    /// relative GW piece over (A^n, base)
    GWRelAffine { r: i64, n: u32, scheme: SchemeExpr },
}

impl fmt::Display for GroupAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAtom::Concrete(m) => write!(f, "{m}"),
            GroupAtom::Witt { r, scheme } => write!(f, "W^{r}({scheme})"),
            GroupAtom::GW { r, i, scheme } => write!(f, "GW^[{r}]_{i}({scheme})"),
            GroupAtom::GWSpec { r, scheme } => write!(f, "GW^[{r}]({scheme})"),
            GroupAtom::KSpec { scheme } => write!(f, "K({scheme})"),
            GroupAtom::K { i, scheme } => write!(f, "K_{i}({scheme})"),
            GroupAtom::WittHigh { r, i, scheme } => write!(f, "Whigh^[{r}]_{i}({scheme})"),
            GroupAtom::CoWittHigh { r, i, scheme } => write!(f, "coWhigh^[{r}]_{i}({scheme})"),
            GroupAtom::FundamentalIdeal(k) => write!(f, "I({k})"),
            GroupAtom::KRelProj { n, scheme } => write!(f, "K(V(1),P^{}({scheme}))", n - 1),
            GroupAtom::KRelAffine { n, scheme } => write!(f, "K(A^{n},{scheme})"),
            GroupAtom::GWRelProj { r, n, scheme } => {
                write!(f, "GW^[{r}](V(1),P^{}({scheme}); O({}))", n - 1, 1 - i64::from(*n))
            }
            GroupAtom::GWRelAffine { r, n, scheme } => write!(f, "GW^[{r}](A^{n},{scheme})"),
        }
    }
}

/// Formal direct sum of atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupExpr {
    pub atoms: Vec<GroupAtom>,
}

impl GroupExpr {
    pub fn zero() -> Self {
        GroupExpr { atoms: vec![] }
    }

    pub fn of(atoms: Vec<GroupAtom>) -> Self {
        GroupExpr { atoms }
    }

    pub fn concrete(m: FgModule) -> Self {
        GroupExpr { atoms: vec![GroupAtom::Concrete(m)] }
    }

    pub fn plus(mut self, other: GroupExpr) -> Self {
        self.atoms.extend(other.atoms);
        self
    }

    /// The concrete part, if every atom reduced to a concrete group.
    pub fn as_concrete(&self) -> Option<&FgModule> {
        match self.atoms.as_slice() {
            [GroupAtom::Concrete(m)] => Some(m),
            [] => None,
            _ => None,
        }
    }

    pub fn is_fully_concrete(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, GroupAtom::Concrete(_)))
    }

    /// Semantic comparison after normalization: concrete parts compared up
    /// to isomorphism, symbolic parts as multisets of display strings.
    pub fn equivalent(&self, other: &GroupExpr) -> bool {
        let a = normalize(self);
        let b = normalize(other);
        let (ca, sa) = split_parts(&a);
        let (cb, sb) = split_parts(&b);
        sa == sb
            && match (ca, cb) {
                (None, None) => true,
                (Some(x), Some(y)) => x.is_isomorphic(&y).unwrap_or(false),
                (Some(x), None) => x.is_zero(),
                (None, Some(y)) => y.is_zero(),
            }
    }
}

fn split_parts(g: &GroupExpr) -> (Option<FgModule>, Vec<String>) {
    let mut concrete: Option<FgModule> = None;
    let mut symbols = vec![];
    for a in &g.atoms {
        match a {
            GroupAtom::Concrete(m) => {
                concrete = Some(match concrete {
                    None => m.clone(),
                    Some(c) => c.direct_sum(m).expect("same base ring"),
                });
            }
            other => symbols.push(other.to_string()),
        }
    }
    symbols.sort();
    (concrete, symbols)
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Canonical form of a group expression: Witt superscripts reduced mod 4,
/// atoms over concrete base fields evaluated, zero atoms dropped, concrete
/// summands merged, symbolic atoms sorted.
pub fn normalize(g: &GroupExpr) -> GroupExpr {
    let mut concrete: Option<FgModule> = None;
    let mut symbols: Vec<GroupAtom> = vec![];
    let push_concrete = |concrete: &mut Option<FgModule>, m: FgModule| {
        *concrete = Some(match concrete.take() {
            None => m,
            Some(c) => c.direct_sum(&m).expect("same base ring"),
        });
    };
    for atom in &g.atoms {
        let atom = match atom {
            GroupAtom::Witt { r, scheme } => GroupAtom::Witt { r: r.rem_euclid(4), scheme: scheme.clone() },
            GroupAtom::WittHigh { r, i, scheme } => {
                GroupAtom::WittHigh { r: r.rem_euclid(4), i: *i, scheme: scheme.clone() }
            }
            GroupAtom::CoWittHigh { r, i, scheme } => {
                GroupAtom::CoWittHigh { r: r.rem_euclid(4), i: *i, scheme: scheme.clone() }
            }
            a => a.clone(),
        };
        match atom {
            GroupAtom::Concrete(m) => {
                if !m.is_zero() {
                    push_concrete(&mut concrete, m);
                }
            }
            GroupAtom::Witt { r, scheme: SchemeExpr::Field(k) } => {
                let m = witt_field(k, r);
                if !m.is_zero() {
                    push_concrete(&mut concrete, m);
                }
            }
            GroupAtom::Witt { r, scheme: SchemeExpr::Node(k) } => {
                let m = node_witt_value(k, r);
                if !m.is_zero() {
                    push_concrete(&mut concrete, m);
                }
            }
            GroupAtom::FundamentalIdeal(k) => {
                let m = k.fundamental_ideal();
                if !m.is_zero() {
                    push_concrete(&mut concrete, m);
                }
            }
            GroupAtom::K { i, scheme: SchemeExpr::Field(_) } if i < 0 => {
                // negative K-theory of a field vanishes
            }
            GroupAtom::K { i: 0, scheme: SchemeExpr::Field(_) } => {
                push_concrete(&mut concrete, FgModule::free(BaseRing::Z, 1));
            }
            other => symbols.push(other),
        }
    }
    symbols.sort_by_key(|a| a.to_string());
    let mut atoms = vec![];
    if let Some(c) = concrete {
        if !c.is_zero() || symbols.is_empty() {
            atoms.push(GroupAtom::Concrete(c));
        }
    } else if symbols.is_empty() {
        atoms.push(GroupAtom::Concrete(FgModule::zero(BaseRing::Z)));
    }
    atoms.extend(symbols);
    GroupExpr { atoms }
}
