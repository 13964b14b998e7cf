use crate::zmodule::{kernel, BaseRing, FgModule, Mat, ModuleMap};
use serde::{Deserialize, Serialize};
use std::fmt;

use super::WittError;

/// Multiplication-table model of GF(p^e) for small odd q, used to run the
/// generators-and-relations presentation of the Witt group.
pub struct SmallField {
    pub q: u64,
    p: u64,
    e: u32,
    mul: Vec<u64>,
    add: Vec<u64>,
    squares: Vec<bool>,
}

fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return (m == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Coefficients of a monic degree-d polynomial over F_p, from an index.
fn poly_from_index(mut idx: u64, d: u32, p: u64) -> Vec<u64> {
    let mut c = Vec::with_capacity(d as usize + 1);
    for _ in 0..d {
        c.push(idx % p);
        idx /= p;
    }
    c.push(1);
    c
}

/// Remainder of a by the monic polynomial b, coefficients mod p,
/// lowest degree first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|x| x % p).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for i in 0..=db {
                let sub = lead * b[i] % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = (f.len() - 1) as u32;
    for dd in 1..=d / 2 {
        let count = p.pow(dd);
        for idx in 0..count {
            let g = poly_from_index(idx, dd, p);
            let r = poly_rem(f, &g, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl SmallField {
    pub fn new(q: u64) -> Result<Self, WittError> {
        let Some((p, e)) = factor_prime_power(q) else {
            return Err(WittError::BadInput(format!("{q} is not a prime power")));
        };
        if p == 2 {
            return Err(WittError::BadInput(format!(
                "field of order {q} has even characteristic; 2 must be invertible"
            )));
        }
        if q > 100_000 {
            return Err(WittError::BadInput(format!("field of order {q} is too large")));
        }
        // modulus polynomial: x - 0 for e = 1, else the first irreducible
        // monic polynomial of degree e
        let modulus: Vec<u64> = if e == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(e))
                .map(|idx| poly_from_index(idx, e, p))
                .find(|f| is_irreducible(f, p))
                .expect("irreducible polynomial exists")
        };
        let qs = q as usize;
        let digits = |mut x: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(e as usize);
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let undigits = |v: &[u64]| -> u64 {
            v.iter().rev().fold(0, |acc, &d| acc * p + d)
        };
        let mut add = vec![0u64; qs * qs];
        let mut mul = vec![0u64; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum);
                // polynomial product reduced by the modulus
                let mut prod = vec![0u64; 2 * e as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = reduce(&prod, &modulus, p, e as usize);
                mul[(a * q + b) as usize] = undigits(&r);
            }
        }
        let mut squares = vec![false; qs];
        for a in 1..q {
            squares[mul[(a * q + a) as usize] as usize] = true;
        }
        Ok(SmallField { q, p, e, mul, add, squares })
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u64) -> u64 {
        (1..self.q).chain(std::iter::once(0)).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn is_square(&self, a: u64) -> bool {
        self.squares[a as usize]
    }

    /// 0 for squares, 1 for the nonsquare class.
    pub fn square_class(&self, a: u64) -> usize {
        usize::from(!self.is_square(a))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }
}

fn reduce(prod: &[u64], modulus: &[u64], p: u64, e: usize) -> Vec<u64> {
    let mut r: Vec<u64> = prod.to_vec();
    for i in (e..r.len()).rev() {
        let c = r[i] % p;
        if c != 0 {
            // subtract c * x^(i-e) * modulus
            for (j, &m) in modulus.iter().enumerate() {
                let idx = i - e + j;
                r[idx] = (r[idx] + p * p - c * m % p) % p;
            }
        }
    }
    r.truncate(e);
    r
}

/// The Witt group of F_q together with the presentation data needed for the
/// rank map.
pub struct WittFieldData {
    /// presented on two generators: the square classes of 1 and of a fixed
    /// nonsquare
    pub witt: FgModule,
    pub rank_map: ModuleMap,
}

/// Brute-force presentation of W(F_q): generators are the square classes,
/// relations are the trace of the chain-equivalence law
/// <a> + <b> = <a+b> + <ab(a+b)> over all unit pairs with a+b != 0, plus
/// <1> + <-1> = 0; the canonical form falls out of Smith reduction.
pub fn witt_field_oracle(q: u64) -> Result<WittFieldData, WittError> {
    let f = SmallField::new(q)?;
    let mut rows: Vec<Vec<i64>> = vec![];
    let minus_one = f.neg(1);
    let mut hyp = vec![0i64; 2];
    hyp[f.square_class(1)] += 1;
    hyp[f.square_class(minus_one)] += 1;
    rows.push(hyp);
    for a in 1..q {
        for b in 1..q {
            let s = f.add(a, b);
            if s == 0 {
                continue;
            }
            let d = f.mul(f.mul(a, b), s);
            let mut row = vec![0i64; 2];
            row[f.square_class(a)] += 1;
            row[f.square_class(b)] += 1;
            row[f.square_class(s)] -= 1;
            row[f.square_class(d)] -= 1;
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    rows.sort_unstable();
    rows.dedup();
    let witt = FgModule::new(BaseRing::Z, Mat::from_rows(rows));
    let z2 = FgModule::cyclic(BaseRing::Z, &[2]);
    let rank_map = ModuleMap::new(witt.clone(), z2, Mat::from_rows(vec![vec![1, 1]]))
        .expect("rank is well defined on the presentation");
    Ok(WittFieldData { witt, rank_map })
}

/// The base fields the calculator knows how to evaluate over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldDesc {
    /// F_q, q an odd prime power
    Finite(u64),
    /// real closed field (signature sees everything)
    RealClosed,
    /// quadratically closed field of characteristic != 2
    QuadraticallyClosed,
}

impl FieldDesc {
    pub fn finite(q: u64) -> Result<Self, WittError> {
        // constructing the field validates q
        SmallField::new(q)?;
        Ok(FieldDesc::Finite(q))
    }

    /// W(k) as a finitely generated abelian group.
    pub fn witt_group(&self) -> FgModule {
        self.witt_data().witt
    }

    fn witt_data(&self) -> WittFieldData {
        match self {
            FieldDesc::Finite(q) => witt_field_oracle(*q).expect("validated at construction"),
            FieldDesc::RealClosed => {
                // signature identifies W with Z on the generator <1>
                let witt = FgModule::free(BaseRing::Z, 1);
                let z2 = FgModule::cyclic(BaseRing::Z, &[2]);
                let rank_map = ModuleMap::new(witt.clone(), z2, Mat::from_rows(vec![vec![1]]))
                    .expect("well defined");
                WittFieldData { witt, rank_map }
            }
            FieldDesc::QuadraticallyClosed => {
                let witt = FgModule::cyclic(BaseRing::Z, &[2]);
                let rank_map =
                    ModuleMap::new(witt.clone(), witt.clone(), Mat::from_rows(vec![vec![1]]))
                        .expect("well defined");
                WittFieldData { witt, rank_map }
            }
        }
    }

    /// The surjection W(k) -> Z/2 remembering the rank mod 2.
    pub fn rank_map(&self) -> ModuleMap {
        self.witt_data().rank_map
    }

    /// I(k) = ker(rank map), computed as a kernel, not read off a table.
    pub fn fundamental_ideal(&self) -> FgModule {
        let data = self.witt_data();
        kernel(&data.rank_map).0
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Finite(q) => write!(f, "F{q}"),
            FieldDesc::RealClosed => write!(f, "Rfield"),
            FieldDesc::QuadraticallyClosed => write!(f, "Cfield"),
        }
    }
}

/// Shifted Witt groups of a field: zero away from multiples of 4.
pub fn witt_field(k: FieldDesc, r: i64) -> FgModule {
    if r.rem_euclid(4) != 0 {
        FgModule::zero(BaseRing::Z)
    } else {
        k.witt_group()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tables() {
        let f9 = SmallField::new(9).unwrap();
        assert_eq!(f9.characteristic(), 3);
        assert_eq!(f9.degree(), 2);
        // multiplicative group is cyclic of order 8: number of squares is 4
        assert_eq!((1..9).filter(|&a| f9.is_square(a)).count(), 4);
        // -1 is a square in F_9 (9 = 1 mod 4)
        assert!(f9.is_square(f9.neg(1)));
        let f27 = SmallField::new(27).unwrap();
        assert!(!f27.is_square(f27.neg(1)));
        assert!(SmallField::new(4).is_err());
        assert!(SmallField::new(6).is_err());
    }

    #[test]
    fn oracle_small_fields() {
        // frozen values recomputed independently by enumerating the
        // presentation in a computer algebra system
        for (q, factors) in [
            (3u64, vec![4i64]),
            (5, vec![2, 2]),
            (7, vec![4]),
            (9, vec![2, 2]),
            (11, vec![4]),
            (13, vec![2, 2]),
            (25, vec![2, 2]),
            (27, vec![4]),
            (49, vec![2, 2]),
            (81, vec![2, 2]),
        ] {
            let data = witt_field_oracle(q).unwrap();
            let cf = data.witt.canonical_form();
            assert_eq!(cf.free_rank, 0, "q = {q}");
            let got: Vec<i64> = cf
                .factors
                .iter()
                .map(|d| i64::try_from(d.clone()).unwrap())
                .collect();
            assert_eq!(got, factors, "q = {q}");
        }
    }

    #[test]
    fn oracle_matches_congruence_class() {
        for q in (3..100u64).filter(|q| factor_prime_power(*q).is_some_and(|(p, _)| p != 2)) {
            let data = witt_field_oracle(q).unwrap();
            let cf = data.witt.canonical_form();
            let expect: Vec<i64> = if q % 4 == 3 { vec![4] } else { vec![2, 2] };
            let got: Vec<i64> =
                cf.factors.iter().map(|d| i64::try_from(d.clone()).unwrap()).collect();
            assert_eq!(got, expect, "q = {q}");
        }
    }

    #[test]
    fn fundamental_ideals() {
        let i5 = FieldDesc::Finite(5).fundamental_ideal();
        assert!(i5.is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[2])).unwrap());
        let i3 = FieldDesc::Finite(3).fundamental_ideal();
        assert!(i3.is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[2])).unwrap());
        let ir = FieldDesc::RealClosed.fundamental_ideal();
        assert!(ir.is_isomorphic(&FgModule::free(BaseRing::Z, 1)).unwrap());
        let ic = FieldDesc::QuadraticallyClosed.fundamental_ideal();
        assert!(ic.is_zero());
    }

    #[test]
    fn shifted_witt_of_fields() {
        for r in [1i64, 2, 3, 5, -2] {
            assert!(witt_field(FieldDesc::Finite(5), r).is_zero(), "r = {r}");
        }
        assert!(witt_field(FieldDesc::RealClosed, 4)
            .is_isomorphic(&FgModule::free(BaseRing::Z, 1))
            .unwrap());
        assert!(witt_field(FieldDesc::Finite(3), -4)
            .is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[4]))
            .unwrap());
    }
}
