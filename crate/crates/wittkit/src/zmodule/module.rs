use super::matrix::Mat;
use super::snf;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseRing {
    /// The integers.
    Z,
    /// The integers with 2 inverted; 2-power torsion dies here.
    ZHalf,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ZmoduleError {
    #[error("base rings do not match")]
    BaseRingMismatch,
    #[error("matrix does not define a map between the given presentations")]
    IllFormedMap,
    #[error("maps do not compose to zero")]
    NotAComplex,
    #[error("map shapes are incompatible: {0}")]
    ShapeMismatch(String),
}

/// Canonical form of a finitely generated module: free rank plus the
/// invariant-factor chain d1 | d2 | ... with every di > 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub factors: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| BigInt::from_str(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl CanonicalForm {
    pub fn zero() -> Self {
        CanonicalForm { free_rank: 0, factors: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }

    /// Order of the group, or None if infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.factors.iter().product())
    }

    /// Rebuild the divisibility chain from an arbitrary bag of cyclic orders.
    pub fn from_parts(free_rank: usize, cyclic_orders: &[BigInt]) -> Self {
        // primary decomposition, then reassemble largest-to-smallest
        use std::collections::BTreeMap;
        let mut primary: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for d in cyclic_orders {
            let mut d = d.clone();
            assert!(d > BigInt::zero(), "cyclic order must be positive");
            let mut p = BigInt::from(2);
            while &p * &p <= d {
                let mut e = 0u32;
                while d.mod_floor(&p).is_zero() {
                    d /= &p;
                    e += 1;
                }
                if e > 0 {
                    primary.entry(p.clone()).or_default().push(e);
                }
                p += 1;
            }
            if d > BigInt::one() {
                primary.entry(d).or_default().push(1);
            }
        }
        let mut slots: Vec<BigInt> = vec![];
        for (p, mut exps) in primary {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, e) in exps.iter().enumerate() {
                if slots.len() <= i {
                    slots.push(BigInt::one());
                }
                slots[i] *= p.pow(*e);
            }
        }
        slots.reverse();
        CanonicalForm { free_rank, factors: slots }
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = vec![];
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Finitely generated module over Z or Z[1/2], presented as the cokernel of
/// an integer relation matrix: generators are the columns, each row is a
/// relation among them.
#[derive(Clone)]
pub struct FgModule {
    base_ring: BaseRing,
    relations: Mat,
    canon: CanonicalForm,
}

impl FgModule {
    pub fn new(base_ring: BaseRing, relations: Mat) -> Self {
        let canon = canonicalize(base_ring, &relations);
        FgModule { base_ring, relations, canon }
    }

    pub fn zero(base_ring: BaseRing) -> Self {
        FgModule::new(base_ring, Mat::zeros(0, 0))
    }

    pub fn free(base_ring: BaseRing, rank: usize) -> Self {
        FgModule::new(base_ring, Mat::zeros(0, rank))
    }

    /// Direct sum of cyclic groups Z/d1 + ... + Z/dk.
    pub fn cyclic(base_ring: BaseRing, orders: &[i64]) -> Self {
        let entries: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        FgModule::new(base_ring, Mat::diagonal(&entries))
    }

    pub fn base_ring(&self) -> BaseRing {
        self.base_ring
    }

    pub fn relations(&self) -> &Mat {
        &self.relations
    }

    /// Number of generators of the presentation.
    pub fn ngens(&self) -> usize {
        self.relations.ncols()
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        &self.canon
    }

    pub fn is_zero(&self) -> bool {
        self.canon.is_zero()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.canon.order()
    }

    pub fn is_isomorphic(&self, other: &FgModule) -> Result<bool, ZmoduleError> {
        if self.base_ring != other.base_ring {
            return Err(ZmoduleError::BaseRingMismatch);
        }
        Ok(self.canon == other.canon)
    }

    pub fn direct_sum(&self, other: &FgModule) -> Result<FgModule, ZmoduleError> {
        if self.base_ring != other.base_ring {
            return Err(ZmoduleError::BaseRingMismatch);
        }
        Ok(FgModule::new(self.base_ring, self.relations.block_diag(&other.relations)))
    }

    /// The relation lattice as columns of a matrix (transposed relations).
    fn relation_lattice(&self) -> Mat {
        self.relations.transpose()
    }
}

impl PartialEq for FgModule {
    fn eq(&self, other: &Self) -> bool {
        self.base_ring == other.base_ring && self.relations == other.relations
    }
}

impl fmt::Debug for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgModule({:?}, {})", self.base_ring, self.canon)
    }
}

impl fmt::Display for FgModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canon.fmt(f)
    }
}

fn canonicalize(base_ring: BaseRing, relations: &Mat) -> CanonicalForm {
    let s = snf::smith_normal_form(relations);
    let diag = s.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let free_rank = relations.ncols() - rank;
    let two = BigInt::from(2);
    let mut factors = vec![];
    for mut d in diag.into_iter().filter(|d| !d.is_zero()) {
        if base_ring == BaseRing::ZHalf {
            while d.mod_floor(&two).is_zero() {
                d /= &two;
            }
        }
        if d > BigInt::one() {
            factors.push(d);
        }
    }
    factors.sort();
    CanonicalForm { free_rank, factors }
}

/// Map of finitely generated modules, given on the chosen generators.
/// `matrix` has one column per source generator and one row per target
/// generator; construction checks that relations map to relations.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: FgModule,
    target: FgModule,
    matrix: Mat,
}

impl ModuleMap {
    pub fn new(source: FgModule, target: FgModule, matrix: Mat) -> Result<Self, ZmoduleError> {
        if source.base_ring != target.base_ring {
            return Err(ZmoduleError::BaseRingMismatch);
        }
        if matrix.nrows() != target.ngens() || matrix.ncols() != source.ngens() {
            return Err(ZmoduleError::ShapeMismatch(format!(
                "map is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let map = ModuleMap { source, target, matrix };
        if !map.is_well_defined() {
            return Err(ZmoduleError::IllFormedMap);
        }
        Ok(map)
    }

    fn is_well_defined(&self) -> bool {
        let lat = self.target.relation_lattice();
        let s = snf::smith_normal_form(&lat);
        (0..self.source.relations.nrows()).all(|i| {
            let rel = self.source.relations.row(i);
            let img = self.matrix.mul_vec(&rel);
            snf::solve(&s, &img).is_some()
        })
    }

    pub fn identity(m: &FgModule) -> Self {
        let n = m.ngens();
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Mat::identity(n) }
    }

    pub fn zero(source: &FgModule, target: &FgModule) -> Self {
        let matrix = Mat::zeros(target.ngens(), source.ngens());
        ModuleMap { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn source(&self) -> &FgModule {
        &self.source
    }

    pub fn target(&self) -> &FgModule {
        &self.target
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap, ZmoduleError> {
        if inner.target != self.source {
            return Err(ZmoduleError::ShapeMismatch("composition mismatch".into()));
        }
        Ok(ModuleMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }

    /// Does this map send every element to zero in the target?
    pub fn is_zero_map(&self) -> bool {
        let lat = self.target.relation_lattice();
        let s = snf::smith_normal_form(&lat);
        (0..self.matrix.ncols()).all(|j| snf::solve(&s, &self.matrix.column(j)).is_some())
    }
}

/// Generators (as columns in Z^ambient) of the lattice {x : A x in L},
/// where L is spanned by the columns of `lattice`.
fn preimage_lattice(a: &Mat, lattice: &Mat) -> Vec<Vec<BigInt>> {
    let stacked = a.hstack(lattice);
    let s = snf::smith_normal_form(&stacked);
    snf::kernel_basis(&s)
        .into_iter()
        .map(|k| k[..a.ncols()].to_vec())
        .collect()
}

/// Present the subquotient K / L' where K is spanned by the columns of
/// `gens` (inside Z^ambient) and L' by the columns of `sub`.
fn subquotient(base_ring: BaseRing, gens: &Mat, sub: &Mat) -> FgModule {
    let rel_cols = preimage_lattice(gens, sub);
    let rel_rows: Vec<Vec<BigInt>> = rel_cols;
    let relations = if rel_rows.is_empty() {
        Mat::zeros(0, gens.ncols())
    } else {
        Mat::from_bigint_rows(rel_rows)
    };
    FgModule::new(base_ring, relations)
}

/// Kernel of a map, with its inclusion into the source.
pub fn kernel(f: &ModuleMap) -> (FgModule, ModuleMap) {
    let ring = f.source.base_ring;
    let tgt_lat = f.target.relation_lattice();
    let gens_cols = preimage_lattice(&f.matrix, &tgt_lat);
    let gens = Mat::from_columns(&gens_cols, f.source.ngens());
    let ker = subquotient(ring, &gens, &f.source.relation_lattice());
    let incl = ModuleMap {
        source: ker.clone(),
        target: f.source.clone(),
        matrix: gens,
    };
    debug_assert!(incl.is_well_defined());
    (ker, incl)
}

/// Cokernel of a map, with the projection from the target.
pub fn cokernel(f: &ModuleMap) -> (FgModule, ModuleMap) {
    let ring = f.target.base_ring;
    let image_rows = f.matrix.transpose();
    let relations = f.target.relations.vstack(&image_rows);
    let coker = FgModule::new(ring, relations);
    let proj = ModuleMap {
        source: f.target.clone(),
        target: coker.clone(),
        matrix: Mat::identity(f.target.ngens()),
    };
    (coker, proj)
}

/// Homology ker(f)/im(g) at the middle of `C --g--> A --f--> B`.
pub fn homology_at(f: &ModuleMap, g: &ModuleMap) -> Result<FgModule, ZmoduleError> {
    if g.target != f.source {
        return Err(ZmoduleError::ShapeMismatch("g.target != f.source".into()));
    }
    let composite = f.compose(g)?;
    if !composite.is_zero_map() {
        return Err(ZmoduleError::NotAComplex);
    }
    let ring = f.source.base_ring;
    let tgt_lat = f.target.relation_lattice();
    let gens_cols = preimage_lattice(&f.matrix, &tgt_lat);
    let gens = Mat::from_columns(&gens_cols, f.source.ngens());
    // divide by source relations together with the image of g
    let denom = f.source.relation_lattice().hstack(&g.matrix);
    Ok(subquotient(ring, &gens, &denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FgModule {
        FgModule::free(BaseRing::Z, 1)
    }

    #[test]
    fn canonical_forms() {
        let m = FgModule::new(BaseRing::Z, Mat::from_rows(vec![vec![1, 0, 0], vec![0, 2, 0]]));
        assert_eq!(m.canonical_form().free_rank, 1);
        assert_eq!(m.canonical_form().factors, vec![BigInt::from(2)]);
        assert_eq!(m.to_string(), "Z + Z/2");

        let m = FgModule::cyclic(BaseRing::ZHalf, &[2]);
        assert!(m.is_zero());
        let m = FgModule::cyclic(BaseRing::ZHalf, &[12]);
        assert_eq!(m.canonical_form().factors, vec![BigInt::from(3)]);
        assert_eq!(m.canonical_form().free_rank, 0);
    }

    #[test]
    fn canonicalize_idempotent() {
        let m = FgModule::new(BaseRing::Z, Mat::from_rows(vec![vec![4, 2], vec![6, 8]]));
        let again = FgModule::new(
            BaseRing::Z,
            Mat::diagonal(&m.canonical_form().factors),
        );
        let mut c = again.canonical_form().clone();
        c.free_rank += m.canonical_form().free_rank;
        assert_eq!(&c, m.canonical_form());
    }

    #[test]
    fn direct_sum_merges_factors() {
        let a = FgModule::cyclic(BaseRing::Z, &[2]);
        let b = FgModule::cyclic(BaseRing::Z, &[2]);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.canonical_form().factors, vec![BigInt::from(2), BigInt::from(2)]);

        let c = FgModule::cyclic(BaseRing::Z, &[3]);
        let s = a.direct_sum(&c).unwrap();
        assert_eq!(s.canonical_form().factors, vec![BigInt::from(6)]);

        let z4 = FgModule::cyclic(BaseRing::Z, &[4]);
        let z22 = FgModule::cyclic(BaseRing::Z, &[2, 2]);
        assert!(!z4.is_isomorphic(&z22).unwrap());
    }

    #[test]
    fn mixed_rings_rejected() {
        let a = FgModule::cyclic(BaseRing::Z, &[2]);
        let b = FgModule::cyclic(BaseRing::ZHalf, &[3]);
        assert_eq!(a.direct_sum(&b).unwrap_err(), ZmoduleError::BaseRingMismatch);
        assert_eq!(a.is_isomorphic(&b).unwrap_err(), ZmoduleError::BaseRingMismatch);
    }

    #[test]
    fn map_well_definedness() {
        let z2 = FgModule::cyclic(BaseRing::Z, &[2]);
        // Z/2 -> Z, 1 -> 1 is not well defined
        assert!(ModuleMap::new(z2.clone(), z(), Mat::from_rows(vec![vec![1]])).is_err());
        // Z -> Z/2 is fine
        assert!(ModuleMap::new(z(), z2, Mat::from_rows(vec![vec![1]])).is_ok());
    }

    #[test]
    fn kernel_cokernel_of_times_two() {
        let f = ModuleMap::new(z(), z(), Mat::from_rows(vec![vec![2]])).unwrap();
        let (ker, _) = kernel(&f);
        assert!(ker.is_zero());
        let (coker, _) = cokernel(&f);
        assert!(coker.is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[2])).unwrap());
    }

    #[test]
    fn homology_examples() {
        // Z --x2--> Z --0--> 0: homology at the right slot is Z/2
        let f = ModuleMap::zero(&z(), &FgModule::zero(BaseRing::Z));
        let g = ModuleMap::new(z(), z(), Mat::from_rows(vec![vec![2]])).unwrap();
        let h = homology_at(&f, &g).unwrap();
        assert!(h.is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[2])).unwrap());

        // f = 0 : Z/4 -> 0, g = (Z/4 -> Z/4, x2): homology Z/2
        let z4 = FgModule::cyclic(BaseRing::Z, &[4]);
        let f = ModuleMap::zero(&z4, &FgModule::zero(BaseRing::Z));
        let g = ModuleMap::new(z4.clone(), z4.clone(), Mat::from_rows(vec![vec![2]])).unwrap();
        let h = homology_at(&f, &g).unwrap();
        assert!(h.is_isomorphic(&FgModule::cyclic(BaseRing::Z, &[2])).unwrap());

        // homology_at(f, id) = 0
        let f = ModuleMap::zero(&z4, &FgModule::zero(BaseRing::Z));
        let h = homology_at(&f, &ModuleMap::identity(&z4)).unwrap();
        assert!(h.is_zero());

        // homology_at(0, 0) on A = A
        let a = FgModule::cyclic(BaseRing::Z, &[6]);
        let f = ModuleMap::zero(&a, &FgModule::zero(BaseRing::Z));
        let g = ModuleMap::zero(&FgModule::zero(BaseRing::Z), &a);
        let h = homology_at(&f, &g).unwrap();
        assert!(h.is_isomorphic(&a).unwrap());
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let f = ModuleMap::new(z(), z(), Mat::from_rows(vec![vec![2]])).unwrap();
        let g = ModuleMap::identity(&z());
        assert_eq!(homology_at(&f, &g).unwrap_err(), ZmoduleError::NotAComplex);
    }
}
