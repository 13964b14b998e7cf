use super::poly::{Poly, PolyRing};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum KoszulError {
    #[error("polynomial rings do not match")]
    RingMismatch,
    #[error("differential entry at degree {degree} ({row},{col}) is not homogeneous of degree {expected}")]
    NotHomogeneous { degree: i64, row: usize, col: usize, expected: i64 },
    #[error("d o d != 0 at degree {0}")]
    NotAComplex(i64),
    #[error("map does not commute with the differentials at degree {0}")]
    NotChainMap(i64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("complex is not contractible: {0}")]
    NotContractible(String),
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("{0}")]
    BadInput(String),
}

/// Matrix of polynomials.
#[derive(Clone, PartialEq)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMat { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, rhs.rows, "poly matrix shape mismatch");
        let mut out = PolyMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &PolyMat) -> PolyMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = PolyMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).add(rhs.get(i, j)));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> PolyMat {
        let mut out = PolyMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).scale(c));
            }
        }
        out
    }

    pub fn identity_like(n: usize, nvars: usize) -> PolyMat {
        let mut m = PolyMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::constant(nvars, 1));
        }
        m
    }
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMat({}x{})", self.rows, self.cols)
    }
}

/// Bounded chain complex of twisted free modules over a polynomial ring.
/// Objects in homological degree i are lists of generator twists; the
/// differential d_i maps degree i to degree i-1. A homogeneous entry in
/// d_i from a generator of twist t to one of twist t' has polynomial
/// degree t' - t.
#[derive(Clone, PartialEq)]
pub struct GradedComplex {
    ring: PolyRing,
    objects: BTreeMap<i64, Vec<i64>>,
    diffs: BTreeMap<i64, PolyMat>,
    graded: bool,
}

impl GradedComplex {
    pub fn new(
        ring: PolyRing,
        objects: BTreeMap<i64, Vec<i64>>,
        diffs: BTreeMap<i64, PolyMat>,
    ) -> Result<Self, KoszulError> {
        Self::build(ring, objects, diffs, true)
    }

    pub(crate) fn build(
        ring: PolyRing,
        mut objects: BTreeMap<i64, Vec<i64>>,
        mut diffs: BTreeMap<i64, PolyMat>,
        graded: bool,
    ) -> Result<Self, KoszulError> {
        objects.retain(|_, tw| !tw.is_empty());
        diffs.retain(|_, m| m.nrows() > 0 && m.ncols() > 0 && !m.is_zero());
        let c = GradedComplex { ring, objects, diffs, graded };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), KoszulError> {
        for (&i, d) in &self.diffs {
            let src = self.twists(i);
            let tgt = self.twists(i - 1);
            if d.ncols() != src.len() || d.nrows() != tgt.len() {
                return Err(KoszulError::ShapeMismatch(format!(
                    "d_{i} is {}x{}, expected {}x{}",
                    d.nrows(),
                    d.ncols(),
                    tgt.len(),
                    src.len()
                )));
            }
            if self.graded {
                for r in 0..d.nrows() {
                    for c in 0..d.ncols() {
                        let p = d.get(r, c);
                        if p.is_zero() {
                            continue;
                        }
                        let expected = tgt[r] - src[c];
                        if p.homogeneous_degree() != Some(expected) {
                            return Err(KoszulError::NotHomogeneous {
                                degree: i,
                                row: r,
                                col: c,
                                expected,
                            });
                        }
                    }
                }
            }
        }
        // d o d = 0
        for (&i, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(i + 1)) {
                if !d.mul(next).is_zero() {
                    return Err(KoszulError::NotAComplex(i + 1));
                }
            }
        }
        Ok(())
    }

    /// Complex with a single generator of the given twist in the given degree.
    pub fn unit(ring: PolyRing, twist: i64, degree: i64) -> Self {
        let objects = BTreeMap::from([(degree, vec![twist])]);
        GradedComplex { ring, objects, diffs: BTreeMap::new(), graded: true }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn twists(&self, i: i64) -> &[i64] {
        self.objects.get(&i).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, i: i64) -> usize {
        self.twists(i).len()
    }

    pub fn min_degree(&self) -> i64 {
        self.objects.keys().next().copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.objects.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.objects.keys().copied()
    }

    /// d_i : C_i -> C_{i-1}; zero matrix when absent.
    pub fn diff(&self, i: i64) -> PolyMat {
        match self.diffs.get(&i) {
            Some(m) => m.clone(),
            None => PolyMat::zeros(self.rank(i - 1), self.rank(i)),
        }
    }

    pub fn total_rank(&self) -> usize {
        self.objects.values().map(Vec::len).sum()
    }

    /// Alternating sum of the ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.objects
            .iter()
            .map(|(&i, tw)| if i.rem_euclid(2) == 0 { tw.len() as i64 } else { -(tw.len() as i64) })
            .sum()
    }

    /// Do all differential entries consist of a single monomial?
    pub fn is_monomial(&self) -> bool {
        self.diffs
            .values()
            .flat_map(|m| (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m.get(i, j))))
            .all(|p| p.is_zero() || p.as_monomial().is_some())
    }

    /// Substitute T_j = 0 (staying graded) or T_j = 1 (dropping the grading).
    pub fn restrict(&self, j: usize, mode: RestrictMode) -> Result<GradedComplex, KoszulError> {
        if j >= self.ring.nvars() {
            return Err(KoszulError::BadInput(format!("no variable with index {j}")));
        }
        let value = match mode {
            RestrictMode::SetZero => BigInt::zero(),
            RestrictMode::SetOne => BigInt::from(1),
        };
        let ring = self.ring.without_var(j);
        let diffs = self
            .diffs
            .iter()
            .map(|(&i, m)| {
                let mut out = PolyMat::zeros(m.nrows(), m.ncols());
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        out.set(r, c, m.get(r, c).substitute(j, &value));
                    }
                }
                (i, out)
            })
            .collect();
        GradedComplex::build(
            ring,
            self.objects.clone(),
            diffs,
            matches!(mode, RestrictMode::SetZero) && self.graded,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictMode {
    SetZero,
    SetOne,
}

impl fmt::Debug for GradedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedComplex{{")?;
        for (i, tw) in &self.objects {
            write!(f, " {i}:{tw:?}")?;
        }
        write!(f, " }}")
    }
}

/// Basis layout of (a tensor b) in total degree m: entries (p, i, j) meaning
/// generator i of a in degree p paired with generator j of b in degree m-p.
pub fn tensor_layout(a: &GradedComplex, b: &GradedComplex, m: i64) -> Vec<(i64, usize, usize)> {
    let mut out = vec![];
    for p in a.degrees() {
        let q = m - p;
        for i in 0..a.rank(p) {
            for j in 0..b.rank(q) {
                out.push((p, i, j));
            }
        }
    }
    out
}

/// Position of (p, i, j) inside `tensor_layout(a, b, m)`.
pub fn tensor_index(
    a: &GradedComplex,
    b: &GradedComplex,
    m: i64,
    p: i64,
    i: usize,
    j: usize,
) -> Option<usize> {
    let mut offset = 0;
    for dp in a.degrees() {
        let q = m - dp;
        let block = a.rank(dp) * b.rank(q);
        if dp == p {
            if i < a.rank(p) && j < b.rank(q) {
                return Some(offset + i * b.rank(q) + j);
            }
            return None;
        }
        offset += block;
    }
    None
}

/// Total complex of the tensor product, with the usual sign (-1)^p on the
/// second differential.
pub fn tensor(a: &GradedComplex, b: &GradedComplex) -> Result<GradedComplex, KoszulError> {
    if a.ring != b.ring {
        return Err(KoszulError::RingMismatch);
    }
    let nvars = a.ring.nvars();
    let mut objects: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    let degrees: Vec<i64> = {
        let mut v = vec![];
        for p in a.degrees() {
            for q in b.degrees() {
                v.push(p + q);
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    };
    for &m in &degrees {
        let tw: Vec<i64> = tensor_layout(a, b, m)
            .into_iter()
            .map(|(p, i, j)| a.twists(p)[i] + b.twists(m - p)[j])
            .collect();
        if !tw.is_empty() {
            objects.insert(m, tw);
        }
    }
    let mut diffs: BTreeMap<i64, PolyMat> = BTreeMap::new();
    for &m in &degrees {
        let src = tensor_layout(a, b, m);
        let tgt_len = tensor_layout(a, b, m - 1).len();
        if src.is_empty() || tgt_len == 0 {
            continue;
        }
        let mut mat = PolyMat::zeros(tgt_len, src.len());
        for (col, &(p, i, j)) in src.iter().enumerate() {
            let q = m - p;
            // d_a part: (p, i) -> (p-1, r), b factor untouched
            let da = a.diff(p);
            for r in 0..a.rank(p - 1) {
                let e = da.get(r, i);
                if e.is_zero() {
                    continue;
                }
                if let Some(row) = tensor_index(a, b, m - 1, p - 1, r, j) {
                    mat.set(row, col, mat.get(row, col).add(e));
                }
            }
            // d_b part with sign (-1)^p
            let db = b.diff(q);
            let sign = if p.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            for s in 0..b.rank(q - 1) {
                let e = db.get(s, j);
                if e.is_zero() {
                    continue;
                }
                if let Some(row) = tensor_index(a, b, m - 1, p, i, s) {
                    mat.set(row, col, mat.get(row, col).add(&e.scale(&sign)));
                }
            }
        }
        let _ = nvars;
        diffs.insert(m, mat);
    }
    GradedComplex::build(a.ring.clone(), objects, diffs, a.graded && b.graded)
}

/// Degree-zero chain map; construction verifies commutation with the
/// differentials.
#[derive(Clone)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    mats: BTreeMap<i64, PolyMat>,
}

impl ChainMap {
    pub fn new(
        source: GradedComplex,
        target: GradedComplex,
        mut mats: BTreeMap<i64, PolyMat>,
    ) -> Result<Self, KoszulError> {
        if source.ring != target.ring {
            return Err(KoszulError::RingMismatch);
        }
        mats.retain(|_, m| m.nrows() > 0 && m.ncols() > 0);
        for (&i, m) in &mats {
            if m.ncols() != source.rank(i) || m.nrows() != target.rank(i) {
                return Err(KoszulError::ShapeMismatch(format!(
                    "component {i} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        let map = ChainMap { source, target, mats };
        map.check_commutes()?;
        Ok(map)
    }

    fn check_commutes(&self) -> Result<(), KoszulError> {
        let lo = self.source.min_degree().min(self.target.min_degree());
        let hi = self.source.max_degree().max(self.target.max_degree());
        for i in lo..=hi + 1 {
            let lhs = self.target.diff(i).mul(&self.component(i));
            let rhs = self.component(i - 1).mul(&self.source.diff(i));
            if lhs != rhs {
                return Err(KoszulError::NotChainMap(i));
            }
        }
        Ok(())
    }

    pub fn component(&self, i: i64) -> PolyMat {
        match self.mats.get(&i) {
            Some(m) => m.clone(),
            None => PolyMat::zeros(self.target.rank(i), self.source.rank(i)),
        }
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedComplex {
        &self.target
    }

    pub fn components(&self) -> &BTreeMap<i64, PolyMat> {
        &self.mats
    }

    pub fn identity(c: &GradedComplex) -> Self {
        let nvars = c.ring.nvars();
        let mats = c
            .degrees()
            .map(|i| (i, PolyMat::identity_like(c.rank(i), nvars)))
            .collect();
        ChainMap { source: c.clone(), target: c.clone(), mats }
    }

    pub fn compose(&self, inner: &ChainMap) -> Result<ChainMap, KoszulError> {
        if inner.target != self.source {
            return Err(KoszulError::ShapeMismatch("chain map composition mismatch".into()));
        }
        let lo = inner.source.min_degree();
        let hi = inner.source.max_degree();
        let mats = (lo..=hi)
            .map(|i| (i, self.component(i).mul(&inner.component(i))))
            .collect();
        ChainMap::new(inner.source.clone(), self.target.clone(), mats)
    }

    /// Componentwise equality as matrices.
    pub fn same_matrices(&self, other: &ChainMap) -> bool {
        let lo = self.source.min_degree().min(other.source.min_degree());
        let hi = self.source.max_degree().max(other.source.max_degree());
        (lo..=hi).all(|i| self.component(i) == other.component(i))
    }

    /// Is every component degreewise invertible with entries +-1 on some
    /// permutation? We only need "unit entries" detection for audits: a
    /// component is a strict iso if it is square and its determinant is a
    /// nonzero constant; for our uses entries are constants.
    pub fn is_degreewise_sign_iso(&self) -> bool {
        let lo = self.source.min_degree().min(self.target.min_degree());
        let hi = self.source.max_degree().max(self.target.max_degree());
        (lo..=hi).all(|i| {
            let m = self.component(i);
            if m.nrows() != m.ncols() {
                return false;
            }
            // constant entries and unimodular over the base field
            let n = m.nrows();
            if n == 0 {
                return true;
            }
            let mut int = crate::zmodule::Mat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    let p = m.get(r, c);
                    if p.is_zero() {
                        continue;
                    }
                    match p.as_monomial() {
                        Some((e, coeff)) if e.iter().all(|&x| x == 0) => {
                            int[(r, c)] = coeff.clone();
                        }
                        _ => return false,
                    }
                }
            }
            !int.det().is_zero()
        })
    }
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainMap{{ degrees: {:?} }}", self.mats.keys().collect::<Vec<_>>())
    }
}

/// The Koszul-sign swap tensor(a,b) -> tensor(b,a), x (x) y |->
/// (-1)^{|x||y|} y (x) x.
pub fn swap_map(a: &GradedComplex, b: &GradedComplex) -> Result<ChainMap, KoszulError> {
    let src = tensor(a, b)?;
    let tgt = tensor(b, a)?;
    let mut mats = BTreeMap::new();
    for m in src.degrees() {
        let layout = tensor_layout(a, b, m);
        let mut mat = PolyMat::zeros(tgt.rank(m), src.rank(m));
        for (col, &(p, i, j)) in layout.iter().enumerate() {
            let q = m - p;
            let row = tensor_index(b, a, m, q, j, i).expect("swap target index");
            let sign = if (p * q).rem_euclid(2) == 0 { 1 } else { -1 };
            mat.set(row, col, Poly::constant(a.ring().nvars(), sign));
        }
        mats.insert(m, mat);
    }
    ChainMap::new(src, tgt, mats)
}

/// Dual complex with values in O(d)[r]: degree i holds the duals of the
/// degree (r - i) generators, twisted by d; differentials are transposed
/// with the sign (-1)^i.
pub fn dual(c: &GradedComplex, d: i64, r: i64) -> Result<GradedComplex, KoszulError> {
    let objects: BTreeMap<i64, Vec<i64>> = c
        .degrees()
        .map(|deg| (r - deg, c.twists(deg).iter().map(|t| d - t).collect()))
        .collect();
    let mut diffs = BTreeMap::new();
    for deg in c.degrees() {
        // d_{deg+1} : C_{deg+1} -> C_deg transposes to dual_{r-deg} -> dual_{r-deg-1}
        let orig = c.diff(deg + 1);
        if orig.nrows() == 0 || orig.ncols() == 0 {
            continue;
        }
        let i = r - deg;
        let sign = if i.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        let mut t = PolyMat::zeros(orig.ncols(), orig.nrows());
        for a in 0..orig.nrows() {
            for b in 0..orig.ncols() {
                t.set(b, a, orig.get(a, b).scale(&sign));
            }
        }
        if !t.is_zero() {
            diffs.insert(i, t);
        }
    }
    GradedComplex::build(c.ring().clone(), objects, diffs, c.is_graded())
}

/// Mapping cone of a degree-zero chain map: cone_i = A_{i-1} + B_i with
/// d(a, b) = (-d_A a, f a + d_B b).
pub fn cone(f: &ChainMap) -> Result<GradedComplex, KoszulError> {
    let a = f.source();
    let b = f.target();
    let lo = a.min_degree().min(b.min_degree());
    let hi = (a.max_degree() + 1).max(b.max_degree());
    let mut objects = BTreeMap::new();
    for i in lo..=hi {
        let mut tw: Vec<i64> = a.twists(i - 1).to_vec();
        tw.extend_from_slice(b.twists(i));
        if !tw.is_empty() {
            objects.insert(i, tw);
        }
    }
    let mut diffs = BTreeMap::new();
    for i in lo..=hi {
        let ra = a.rank(i - 1);
        let rb = b.rank(i);
        let ra_t = a.rank(i - 2);
        let rb_t = b.rank(i - 1);
        let rows = ra_t + rb_t;
        let cols = ra + rb;
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = PolyMat::zeros(rows, cols);
        let da = a.diff(i - 1);
        let neg = BigInt::from(-1);
        for r in 0..ra_t {
            for c in 0..ra {
                m.set(r, c, da.get(r, c).scale(&neg));
            }
        }
        let fc = f.component(i - 1);
        for r in 0..rb_t {
            for c in 0..ra {
                m.set(ra_t + r, c, fc.get(r, c).clone());
            }
        }
        let db = b.diff(i);
        for r in 0..rb_t {
            for c in 0..rb {
                m.set(ra_t + r, ra + c, db.get(r, c).clone());
            }
        }
        if !m.is_zero() {
            diffs.insert(i, m);
        }
    }
    GradedComplex::build(a.ring().clone(), objects, diffs, a.is_graded() && b.is_graded())
}
