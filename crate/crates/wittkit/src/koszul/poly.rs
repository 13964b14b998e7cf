use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial ring k[T0,...,Tn]; the base field only matters when graded
/// homology is computed, so the ring just carries variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    /// k[T0,...,Tn]
    pub fn standard(n: usize) -> Self {
        PolyRing { vars: (0..=n).map(|i| format!("T{i}")).collect() }
    }

    pub fn with_vars(vars: Vec<String>) -> Self {
        PolyRing { vars }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Ring with variable `j` removed (after substituting it away).
    pub fn without_var(&self, j: usize) -> PolyRing {
        let mut vars = self.vars.clone();
        vars.remove(j);
        PolyRing { vars }
    }

    /// Monomials of the given total degree, in a deterministic order.
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Vec<u32>> {
        if d < 0 {
            return vec![];
        }
        let mut out = vec![];
        let mut cur = vec![0u32; self.nvars()];
        gen_monomials(self.nvars(), d as u32, 0, &mut cur, &mut out);
        out
    }
}

fn gen_monomials(nvars: usize, left: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if nvars == 0 {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = left;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        gen_monomials(nvars, left - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Sparse multivariate polynomial with exact integer coefficients,
/// keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Poly { terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly { terms: BTreeMap::from([(e, BigInt::one())]) }
    }

    pub fn monomial(exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Single-term polynomials; graded homology has a fast path for these.
    pub fn as_monomial(&self) -> Option<(&Vec<u32>, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Total degree if homogeneous (None for 0, Err-like None-with-flag is
    /// avoided: use is_homogeneous).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum::<i64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect() }
    }

    /// Substitute variable `j` by the constant `value` (0 or 1 in practice),
    /// dropping the variable from the exponent vectors.
    pub fn substitute(&self, j: usize, value: &BigInt) -> Poly {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            if e[j] > 0 {
                if value.is_zero() {
                    continue;
                }
                coeff *= value.pow(e[j]);
            }
            let mut exps = e.clone();
            exps.remove(j);
            let entry = terms.entry(exps).or_insert_with(BigInt::zero);
            *entry += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    /// Coefficient of the given exponent vector.
    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn display<'a>(&'a self, ring: &'a PolyRing) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, ring }
    }

    /// Parse expressions like "T0^2*T1 - 2*T2 + 3".
    pub fn parse(s: &str, ring: &PolyRing) -> Result<Poly, String> {
        let mut result = Poly::zero();
        let s = s.trim();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut rest = s;
        let mut sign = BigInt::one();
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                continue;
            }
            if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
                continue;
            }
            let end = rest
                .find(['+', '-'])
                .unwrap_or(rest.len());
            let term_str = &rest[..end];
            result = result.add(&parse_term(term_str, ring, &sign)?);
            sign = BigInt::one();
            rest = &rest[end..];
        }
        Ok(result)
    }
}

fn parse_term(s: &str, ring: &PolyRing, sign: &BigInt) -> Result<Poly, String> {
    let mut coeff = sign.clone();
    let mut exps = vec![0u32; ring.nvars()];
    for factor in s.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(format!("empty factor in term '{s}'"));
        }
        if let Ok(c) = factor.parse::<BigInt>() {
            coeff *= c;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent in '{factor}'"))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = ring
            .var_index(name)
            .ok_or_else(|| format!("unknown variable '{name}'"))?;
        exps[idx] += exp;
    }
    Ok(Poly::monomial(exps, coeff))
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    ring: &'a PolyRing,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.ring.var_name(i).to_string()
                    } else {
                        format!("{}^{}", self.ring.var_name(i), x)
                    }
                })
                .collect();
            let abs = c.abs();
            let lead = if c.is_negative() {
                if k == 0 { "-".to_string() } else { " - ".to_string() }
            } else if k == 0 {
                String::new()
            } else {
                " + ".to_string()
            };
            write!(f, "{lead}")?;
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({:?})", self.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let r = PolyRing::standard(2);
        let t0 = Poly::var(3, 0);
        let t1 = Poly::var(3, 1);
        let p = t0.mul(&t0).mul(&t1).sub(&Poly::var(3, 2).scale(&BigInt::from(2)));
        assert_eq!(p.display(&r).to_string(), "T0^2*T1 - 2*T2");
        let q = Poly::parse("T0^2*T1 - 2*T2", &r).unwrap();
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
        assert_eq!(p.homogeneous_degree(), None);
        assert_eq!(t0.mul(&t1).homogeneous_degree(), Some(2));
    }

    #[test]
    fn substitution() {
        let p = Poly::parse("T0*T1 + T2", &PolyRing::standard(2)).unwrap();
        let small = PolyRing::with_vars(vec!["T1".into(), "T2".into()]);
        let q = p.substitute(0, &BigInt::zero());
        assert_eq!(q.display(&small).to_string(), "T2");
        let q = p.substitute(0, &BigInt::one());
        assert_eq!(q.display(&small).to_string(), "T1 + T2");
    }

    #[test]
    fn monomial_enumeration() {
        let r = PolyRing::standard(1);
        assert_eq!(r.monomials_of_degree(0), vec![vec![0, 0]]);
        assert_eq!(r.monomials_of_degree(2).len(), 3);
        assert_eq!(r.monomials_of_degree(-1).len(), 0);
    }
}
