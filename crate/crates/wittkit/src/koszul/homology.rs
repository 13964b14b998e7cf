use super::complex::{GradedComplex, KoszulError};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// Coefficient field for graded homology ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffField {
    Q,
    Fp(u64),
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// One basis element of the degree-d graded piece: a generator index plus a
/// monomial of the complementary degree.
type Node = (usize, Vec<u32>);

struct PieceBasis {
    /// homological degree -> ordered nodes
    nodes: BTreeMap<i64, Vec<Node>>,
    /// homological degree -> node -> position
    index: BTreeMap<i64, HashMap<Node, usize>>,
    /// homological degree -> offset into the global numbering
    offsets: BTreeMap<i64, usize>,
    total: usize,
}

fn piece_basis(c: &GradedComplex, d: i64) -> PieceBasis {
    let mut nodes = BTreeMap::new();
    let mut index = BTreeMap::new();
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for i in c.degrees() {
        let mut v: Vec<Node> = vec![];
        for (g, &t) in c.twists(i).iter().enumerate() {
            for m in c.ring().monomials_of_degree(d + t) {
                v.push((g, m));
            }
        }
        let idx: HashMap<Node, usize> =
            v.iter().cloned().enumerate().map(|(k, n)| (n, k)).collect();
        offsets.insert(i, total);
        total += v.len();
        nodes.insert(i, v);
        index.insert(i, idx);
    }
    PieceBasis { nodes, index, offsets, total }
}

/// Dimensions of the degree-d graded piece, per homological degree.
pub fn graded_piece_dims(c: &GradedComplex, d: i64) -> BTreeMap<i64, usize> {
    piece_basis(c, d).nodes.iter().map(|(&i, v)| (i, v.len())).collect()
}

/// Homology dimensions of the degree-d graded piece of the complex over the
/// given coefficient field. The graded piece splits into connected
/// components (basis elements linked by matrix entries); ranks are computed
/// densely per component, which keeps the matrices small for monomial
/// complexes.
pub fn graded_homology(
    c: &GradedComplex,
    d: i64,
    field: CoeffField,
) -> Result<BTreeMap<i64, usize>, KoszulError> {
    if !c.is_graded() {
        return Err(KoszulError::BadInput(
            "graded homology needs a homogeneous differential".into(),
        ));
    }
    if let CoeffField::Fp(p) = field {
        if p < 2 || p >= (1 << 31) {
            return Err(KoszulError::BadInput(format!("bad prime {p}")));
        }
    }
    let basis = piece_basis(c, d);
    let mut dsu = Dsu::new(basis.total);

    // link source and target basis elements through every term of every
    // differential entry
    for i in c.degrees() {
        let diff = c.diff(i);
        if diff.nrows() == 0 || diff.ncols() == 0 {
            continue;
        }
        let (src_nodes, src_off) = (&basis.nodes[&i], basis.offsets[&i]);
        let (Some(tgt_index), Some(&tgt_off)) =
            (basis.index.get(&(i - 1)), basis.offsets.get(&(i - 1)))
        else {
            continue;
        };
        for (s, (g, m)) in src_nodes.iter().enumerate() {
            for r in 0..diff.nrows() {
                let p = diff.get(r, *g);
                for (mono, _) in p.terms() {
                    let tgt: Vec<u32> = m.iter().zip(mono).map(|(a, b)| a + b).collect();
                    if let Some(&t) = tgt_index.get(&(r, tgt)) {
                        dsu.union(src_off + s, tgt_off + t);
                    }
                }
            }
        }
    }

    // group nodes by component root
    let mut comps: HashMap<usize, BTreeMap<i64, Vec<usize>>> = HashMap::new();
    for (&i, v) in &basis.nodes {
        let off = basis.offsets[&i];
        for s in 0..v.len() {
            let root = dsu.find(off + s);
            comps.entry(root).or_default().entry(i).or_default().push(s);
        }
    }

    let mut hom: BTreeMap<i64, usize> = c.degrees().map(|i| (i, 0)).collect();
    for comp in comps.values() {
        // per-degree ranks of the restricted differential
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for (&i, cols) in comp {
            let Some(rows) = comp.get(&(i - 1)) else {
                continue;
            };
            let diff = c.diff(i);
            if diff.nrows() == 0 || diff.ncols() == 0 {
                continue;
            }
            let row_pos: HashMap<usize, usize> =
                rows.iter().enumerate().map(|(k, &s)| (s, k)).collect();
            let tgt_index = &basis.index[&(i - 1)];
            let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
            for (cj, &s) in cols.iter().enumerate() {
                let (g, mono_s) = &basis.nodes[&i][s];
                for r in 0..diff.nrows() {
                    let p = diff.get(r, *g);
                    for (mono, coeff) in p.terms() {
                        let tgt: Vec<u32> =
                            mono_s.iter().zip(mono).map(|(a, b)| a + b).collect();
                        if let Some(&t) = tgt_index.get(&(r, tgt)) {
                            if let Some(&ri) = row_pos.get(&t) {
                                m[ri][cj] += coeff;
                            }
                        }
                    }
                }
            }
            ranks.insert(i, matrix_rank(m, field));
        }
        for (&i, cols) in comp {
            let r_in = ranks.get(&i).copied().unwrap_or(0);
            let r_out = ranks.get(&(i + 1)).copied().unwrap_or(0);
            *hom.entry(i).or_default() += cols.len() - r_in - r_out;
        }
    }
    Ok(hom)
}

fn matrix_rank(m: Vec<Vec<BigInt>>, field: CoeffField) -> usize {
    match field {
        CoeffField::Q => rank_bareiss(m),
        CoeffField::Fp(p) => rank_mod_p(m, p),
    }
}

/// Fraction-free Gaussian elimination; exact rank over the rationals.
fn rank_bareiss(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..cols {
        // pick the smallest nonzero pivot to limit growth
        let pivot = (row..rows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| m[r][col].abs());
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let val = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                m[r][c] = val;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn rank_mod_p(m: Vec<Vec<BigInt>>, p: u64) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v = ((x % &pb) + &pb) % &pb;
                    v.try_into().expect("residue fits u64")
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows).find(|&r| a[r][col] % p != 0) else { continue };
        a.swap(row, piv);
        let inv = mod_inverse(a[row][col] % p, p);
        for c in col..cols {
            a[row][c] = mulmod(a[row][c], inv, p);
        }
        for r in 0..rows {
            if r != row && a[r][col] % p != 0 {
                let f = a[r][col] % p;
                for c in col..cols {
                    let sub = mulmod(f, a[row][c], p);
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: p is prime
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, p);
        }
        base = mulmod(base, base, p);
        e >>= 1;
    }
    result
}
