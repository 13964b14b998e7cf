use super::complex::{
    dual, swap_map, tensor, tensor_index, tensor_layout, ChainMap, GradedComplex, KoszulError,
    PolyMat,
};
use super::poly::{Poly, PolyRing};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// A bounded complex C together with a symmetric form: a chain map from
/// C (x) C to the rank-one complex O(d)[r]. The form is stored as its only
/// interesting component, the row vector on the degree-r part of C (x) C.
#[derive(Clone, Debug)]
pub struct FormedComplex {
    complex: GradedComplex,
    form: ChainMap,
    values_twist: i64,
    shift: i64,
}

impl FormedComplex {
    /// Assembles and validates: the form row must be a chain map to
    /// O(values_twist)[shift], i.e. vanish on the image of d_{shift+1}.
    pub fn new(
        complex: GradedComplex,
        form_row: PolyMat,
        values_twist: i64,
        shift: i64,
    ) -> Result<Self, KoszulError> {
        let square = tensor(&complex, &complex)?;
        let target = GradedComplex::unit(complex.ring().clone(), values_twist, shift);
        let form = ChainMap::new(square, target, BTreeMap::from([(shift, form_row)]))?;
        Ok(FormedComplex { complex, form, values_twist, shift })
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn form(&self) -> &ChainMap {
        &self.form
    }

    /// The row vector of form values on the degree-`shift` part of the
    /// tensor square, indexed by `tensor_layout(c, c, shift)`.
    pub fn form_row(&self) -> PolyMat {
        self.form.component(self.shift)
    }

    pub fn values_twist(&self) -> i64 {
        self.values_twist
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// The unit form: O in degree 0 with the multiplication pairing.
    pub fn unit(ring: PolyRing) -> Self {
        let nvars = ring.nvars();
        let complex = GradedComplex::unit(ring, 0, 0);
        let mut row = PolyMat::zeros(1, 1);
        row.set(0, 0, Poly::constant(nvars, 1));
        FormedComplex::new(complex, row, 0, 0).expect("unit form")
    }

    /// Tensor product of formed complexes. On elements,
    /// phi((x(x)u)(x)(y(x)v)) = (-1)^{|u||y|} phi_a(x(x)y) phi_b(u(x)v).
    pub fn tensor(&self, other: &FormedComplex) -> Result<FormedComplex, KoszulError> {
        let a = self;
        let b = other;
        let c = tensor(&a.complex, &b.complex)?;
        let r = a.shift + b.shift;
        let square_layout = tensor_layout(&c, &c, r);
        let a_row = a.form_row();
        let b_row = b.form_row();
        let mut row = PolyMat::zeros(1, square_layout.len());
        for (col, &(p, i, j)) in square_layout.iter().enumerate() {
            let q = r - p;
            // unpack i as a basis element of (a (x) b) in degree p,
            // and j as one in degree q
            let (pa, ia, ib) = tensor_layout(&a.complex, &b.complex, p)[i];
            let (qa, ja, jb) = tensor_layout(&a.complex, &b.complex, q)[j];
            let Some(ca) = tensor_index(&a.complex, &a.complex, a.shift, pa, ia, ja) else {
                continue;
            };
            let Some(cb) = tensor_index(&b.complex, &b.complex, b.shift, p - pa, ib, jb) else {
                continue;
            };
            if pa + qa != a.shift {
                continue;
            }
            let va = a_row.get(0, ca);
            let vb = b_row.get(0, cb);
            if va.is_zero() || vb.is_zero() {
                continue;
            }
            let sign = if ((p - pa) * qa).rem_euclid(2) == 0 { 1 } else { -1 };
            row.set(0, col, va.mul(vb).scale(&BigInt::from(sign)));
        }
        FormedComplex::new(c, row, a.values_twist + b.values_twist, r)
    }

    /// Postcompose the form with multiplication by a homogeneous polynomial,
    /// raising the twist of the values.
    pub fn rescale_values(&self, factor: &Poly) -> Result<FormedComplex, KoszulError> {
        let deg = factor
            .homogeneous_degree()
            .ok_or_else(|| KoszulError::BadInput("rescaling factor must be homogeneous".into()))?;
        let row = self.form_row();
        let mut out = PolyMat::zeros(1, row.ncols());
        for c in 0..row.ncols() {
            out.set(0, c, row.get(0, c).mul(factor));
        }
        FormedComplex::new(self.complex.clone(), out, self.values_twist + deg, self.shift)
    }
}

/// The two-term formed complex for one variable: T_i from O(-1) to O, with
/// the evident rank-one pairing into O(-1)[1].
pub fn beta(i: usize, n: usize) -> Result<FormedComplex, KoszulError> {
    if i > n {
        return Err(KoszulError::BadInput(format!("variable T{i} does not exist for n = {n}")));
    }
    let ring = PolyRing::standard(n);
    let nvars = ring.nvars();
    let objects = BTreeMap::from([(0, vec![0]), (1, vec![-1])]);
    let mut d1 = PolyMat::zeros(1, 1);
    d1.set(0, 0, Poly::var(nvars, i));
    let complex = GradedComplex::new(ring, objects, BTreeMap::from([(1, d1)]))?;
    // tensor square in degree 1: (x0 (x) y1), (x1 (x) y0); the form sends
    // both to the generator of O(-1)
    let mut row = PolyMat::zeros(1, 2);
    row.set(0, 0, Poly::constant(nvars, 1));
    row.set(0, 1, Poly::constant(nvars, 1));
    FormedComplex::new(complex, row, -1, 1)
}

/// The formed Koszul complex b_n = T_0 . (beta_1 (x) ... (x) beta_n), a
/// complex on P^n with values in O(1-n)[n]. Degree j has rank C(n, j) with
/// all twists -j; the form is T_0 times the product pairing.
pub fn b_complex(n: usize) -> Result<FormedComplex, KoszulError> {
    if n == 0 {
        return Err(KoszulError::BadInput("b_complex needs n >= 1".into()));
    }
    let ring = PolyRing::standard(n);
    let mut f = FormedComplex::unit(ring.clone());
    for i in 1..=n {
        f = f.tensor(&beta(i, n)?)?;
    }
    f.rescale_values(&Poly::var(ring.nvars(), 0))
}

/// Does the form agree with itself after the Koszul-sign swap of the two
/// tensor factors?
pub fn is_symmetric(f: &FormedComplex) -> Result<bool, KoszulError> {
    let tau = swap_map(f.complex(), f.complex())?;
    let swapped = f.form().compose(&tau)?;
    Ok(swapped.same_matrices(f.form()))
}

/// Adjoint chain map C -> dual(C, d, r) of the form, with the sign (-1)^i
/// in homological degree i making it a chain map for our dual convention.
pub fn adjoint(f: &FormedComplex) -> Result<ChainMap, KoszulError> {
    let c = f.complex();
    let r = f.shift();
    let d = dual(c, f.values_twist(), r)?;
    let row = f.form_row();
    let mut mats = BTreeMap::new();
    for i in c.degrees() {
        let src_rank = c.rank(i);
        let tgt_rank = c.rank(r - i);
        if src_rank == 0 || tgt_rank == 0 {
            continue;
        }
        let mut m = PolyMat::zeros(tgt_rank, src_rank);
        let sign = if i.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        for l in 0..src_rank {
            for k in 0..tgt_rank {
                if let Some(idx) = tensor_index(c, c, r, i, l, k) {
                    m.set(k, l, row.get(0, idx).scale(&sign));
                }
            }
        }
        mats.insert(i, m);
    }
    ChainMap::new(c.clone(), d, mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::complex::cone;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
    }

    #[test]
    fn unit_form_is_symmetric() {
        let f = FormedComplex::unit(PolyRing::standard(2));
        assert!(is_symmetric(&f).unwrap());
        assert!(adjoint(&f).unwrap().is_degreewise_sign_iso());
    }

    #[test]
    fn beta_is_a_symmetric_form() {
        for n in 1..=3 {
            for i in 1..=n {
                let b = beta(i, n).unwrap();
                assert_eq!(b.values_twist(), -1);
                assert_eq!(b.shift(), 1);
                assert!(is_symmetric(&b).unwrap(), "beta_{i} on P^{n}");
                let adj = adjoint(&b).unwrap();
                assert!(adj.is_degreewise_sign_iso(), "adjoint of beta_{i} invertible");
            }
        }
    }

    #[test]
    fn tensor_of_betas_is_symmetric() {
        let b1 = beta(1, 2).unwrap();
        let b2 = beta(2, 2).unwrap();
        let t = b1.tensor(&b2).unwrap();
        assert_eq!(t.values_twist(), -2);
        assert_eq!(t.shift(), 2);
        assert!(is_symmetric(&t).unwrap());
        // and in the other order
        let t = b2.tensor(&b1).unwrap();
        assert!(is_symmetric(&t).unwrap());
    }

    #[test]
    fn b_complex_shape_and_symmetry() {
        for n in 1..=4usize {
            let b = b_complex(n).unwrap();
            assert_eq!(b.values_twist(), 1 - n as i64);
            assert_eq!(b.shift(), n as i64);
            for j in 0..=n {
                let tw = b.complex().twists(j as i64);
                assert_eq!(tw.len(), binom(n, j), "rank at degree {j} of b_{n}");
                assert!(tw.iter().all(|&t| t == -(j as i64)), "twists at degree {j} of b_{n}");
            }
            assert!(is_symmetric(&b).unwrap(), "b_{n} symmetric");
            // the adjoint exists as a chain map (construction validates it)
            let adj = adjoint(&b).unwrap();
            // and it is far from invertible: the cone is the interesting object
            let c = cone(&adj).unwrap();
            assert_eq!(c.total_rank(), 2 * b.complex().total_rank());
        }
    }

    #[test]
    fn b1_explicit() {
        // b_1: T_1 from O(-1) to O with form T_0 into O; adjoint degree-0
        // entry is T_0 up to sign
        let b = b_complex(1).unwrap();
        assert_eq!(b.values_twist(), 0);
        let row = b.form_row();
        assert_eq!(row.ncols(), 2);
        let t0 = Poly::var(2, 0);
        assert_eq!(row.get(0, 0), &t0);
        assert_eq!(row.get(0, 1), &t0);
    }

    #[test]
    fn rescale_checks_homogeneity() {
        let f = FormedComplex::unit(PolyRing::standard(1));
        let bad = Poly::parse("T0 + 1", &PolyRing::standard(1)).unwrap();
        assert!(f.rescale_values(&bad).is_err());
    }
}
