use super::complex::{
    tensor, tensor_index, tensor_layout, GradedComplex, KoszulError, PolyMat, RestrictMode,
};
use super::formed::b_complex;
use super::poly::Poly;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A degree +1 map h with d h + h d = id, stored per degree as
/// h_m : C_m -> C_{m+1}.
#[derive(Clone, Debug)]
pub struct Homotopy {
    complex: GradedComplex,
    mats: BTreeMap<i64, PolyMat>,
}

impl Homotopy {
    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn component(&self, m: i64) -> PolyMat {
        match self.mats.get(&m) {
            Some(h) => h.clone(),
            None => PolyMat::zeros(self.complex.rank(m + 1), self.complex.rank(m)),
        }
    }

    /// d h + h d = id in every degree, by matrix arithmetic.
    pub fn verify(&self) -> Result<(), KoszulError> {
        let c = &self.complex;
        for m in c.min_degree()..=c.max_degree() {
            let n = c.rank(m);
            if n == 0 {
                continue;
            }
            let dh = c.diff(m + 1).mul(&self.component(m));
            let hd = self.component(m - 1).mul(&c.diff(m));
            let sum = dh.add(&hd);
            let id = PolyMat::identity_like(n, c.ring().nvars());
            if sum != id {
                return Err(KoszulError::NotContractible(format!(
                    "d h + h d differs from the identity in degree {m}"
                )));
            }
        }
        Ok(())
    }
}

/// Explicit contracting homotopy for the restriction of the formed Koszul
/// complex to the chart T_j = 1, for 1 <= j <= n. The homotopy is assembled
/// along the tensor factorization: the factor for T_j becomes an identity
/// map after substitution and is contracted first; the remaining factors
/// extend the homotopy with the usual Koszul sign.
///
/// Setting T_0 = 1 instead leaves the differential untouched and the
/// complex has nonzero homology in degree 0, so that call fails.
pub fn contraction_null_homotopy(c: &GradedComplex, j: usize) -> Result<Homotopy, KoszulError> {
    let n = c.max_degree();
    if n < 1 || c.min_degree() != 0 {
        return Err(KoszulError::BadInput(
            "expected the restriction of a Koszul-type complex in degrees 0..n".into(),
        ));
    }
    let n = n as usize;
    let full = b_complex(n)?;
    if j > n {
        return Err(KoszulError::BadInput(format!("chart index {j} out of range for n = {n}")));
    }
    let expected = full.complex().restrict(j, RestrictMode::SetOne)?;
    if *c != expected {
        return Err(KoszulError::BadInput(format!(
            "complex is not the restriction of the rank-2^{n} Koszul complex to T_{j} = 1"
        )));
    }
    // obstruction check: if no differential entry has a constant term, the
    // augmentation to the base field survives and H_0 != 0
    let d1 = c.diff(1);
    let const_exps = vec![0u32; c.ring().nvars()];
    let has_unit = (0..d1.nrows())
        .any(|r| (0..d1.ncols()).any(|s| !d1.get(r, s).coeff(&const_exps).is_zero()));
    if !has_unit {
        return Err(KoszulError::NotContractible(
            "no unit entry in the first differential: the constants are not a boundary and \
             homology in degree 0 is nonzero"
            .into(),
        ));
    }

    // rebuild the complex as an iterated tensor product of the restricted
    // two-term factors, carrying the homotopy along
    let ring = c.ring().clone();
    let nvars = ring.nvars();
    let mut prefix = GradedComplex::unit(ring.clone(), 0, 0);
    let mut hom: Option<BTreeMap<i64, PolyMat>> = None;
    for k in 1..=n {
        // the k-th factor: T_k from O(-1) to O, with T_j replaced by 1
        let entry = if k == j {
            Poly::constant(nvars, 1)
        } else {
            // index of T_k after removing T_j from T_0..T_n
            let idx = if k < j { k } else { k - 1 };
            Poly::var(nvars, idx)
        };
        let mut d1 = PolyMat::zeros(1, 1);
        d1.set(0, 0, entry);
        let factor = GradedComplex::build(
            ring.clone(),
            BTreeMap::from([(0, vec![0]), (1, vec![-1])]),
            BTreeMap::from([(1, d1)]),
            false,
        )?;
        let next = tensor(&prefix, &factor)?;
        hom = match hom {
            None if k == j => {
                // h(x (x) b) = (-1)^{|x|} x (x) s(b), with s the inverse of
                // the identity differential of this factor
                let mut mats = BTreeMap::new();
                for m in next.degrees() {
                    let layout = tensor_layout(&prefix, &factor, m);
                    let mut h = PolyMat::zeros(next.rank(m + 1), next.rank(m));
                    for (col, &(p, i, q_gen)) in layout.iter().enumerate() {
                        let q = m - p;
                        if q != 0 {
                            continue;
                        }
                        if let Some(row) = tensor_index(&prefix, &factor, m + 1, p, i, q_gen) {
                            let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                            h.set(row, col, Poly::constant(nvars, sign));
                        }
                    }
                    mats.insert(m, h);
                }
                Some(mats)
            }
            None => None,
            Some(prev) => {
                // h(x (x) c) = h_prev(x) (x) c
                let mut mats = BTreeMap::new();
                for m in next.degrees() {
                    let layout = tensor_layout(&prefix, &factor, m);
                    let mut h = PolyMat::zeros(next.rank(m + 1), next.rank(m));
                    for (col, &(p, i, q_gen)) in layout.iter().enumerate() {
                        let hp = match prev.get(&p) {
                            Some(x) => x.clone(),
                            None => PolyMat::zeros(prefix.rank(p + 1), prefix.rank(p)),
                        };
                        for r in 0..prefix.rank(p + 1) {
                            let e = hp.get(r, i);
                            if e.is_zero() {
                                continue;
                            }
                            if let Some(row) =
                                tensor_index(&prefix, &factor, m + 1, p + 1, r, q_gen)
                            {
                                h.set(row, col, h.get(row, col).add(e));
                            }
                        }
                    }
                    mats.insert(m, h);
                }
                Some(mats)
            }
        };
        prefix = next;
    }
    debug_assert_eq!(prefix, expected, "tensor rebuild matches the restriction");
    let mut mats = hom.expect("j >= 1 seeds the homotopy");
    mats.retain(|_, m| !m.is_zero());
    let h = Homotopy { complex: prefix, mats };
    h.verify()?;
    Ok(h)
}
