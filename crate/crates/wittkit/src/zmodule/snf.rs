use super::matrix::Mat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal with non-negative entries satisfying the divisibility chain
/// d1 | d2 | ... . Total on every shape, including empty matrices.
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Rank of the matrix (number of nonzero invariant factors).
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &Mat) -> Snf {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut d = m.clone();
    let mut u = Mat::identity(rows);
    let mut v = Mat::identity(cols);

    diagonalize(&mut d, &mut u, &mut v);
    fix_chain(&mut d, &mut u, &mut v);

    // normalize signs
    let n = rows.min(cols);
    for i in 0..n {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    debug_assert!(u.mul(m).mul(&v) == d);
    Snf { u, d, v }
}

fn diagonalize(d: &mut Mat, u: &mut Mat, v: &mut Mat) {
    let n = d.nrows().min(d.ncols());
    for t in 0..n {
        loop {
            let Some((pi, pj)) = min_abs_pivot(d, t) else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            // clear column t below and above the pivot
            for i in t + 1..d.nrows() {
                if !d[(i, t)].is_zero() {
                    let q = -(&d[(i, t)] / &d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    if !d[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row t
            for j in t + 1..d.ncols() {
                if !d[(t, j)].is_zero() {
                    let q = -(&d[(t, j)] / &d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    if !d[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue; // remainders left; pick a smaller pivot and repeat
            }
            let row_clear = (t + 1..d.nrows()).all(|i| d[(i, t)].is_zero());
            let col_clear = (t + 1..d.ncols()).all(|j| d[(t, j)].is_zero());
            if row_clear && col_clear {
                break;
            }
        }
    }
}

/// Smallest nonzero entry (in absolute value) of the trailing submatrix.
fn min_abs_pivot(d: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..d.nrows() {
        for j in t..d.ncols() {
            let a = d[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            match &best {
                Some((_, _, b)) if *b <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Enforce d_i | d_{i+1} on an already diagonal matrix.
fn fix_chain(d: &mut Mat, u: &mut Mat, v: &mut Mat) {
    let n = d.nrows().min(d.ncols());
    if n == 0 {
        return;
    }
    loop {
        let mut changed = false;
        for i in 0..n - 1 {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                d.swap_rows(i, i + 1);
                u.swap_rows(i, i + 1);
                d.swap_cols(i, i + 1);
                v.swap_cols(i, i + 1);
                changed = true;
            } else if !a.is_zero() && !b.mod_floor(&a).is_zero() {
                // [[a,0],[0,b]] ~ [[g,0],[0,lcm]]: introduce b into row i and
                // let the elimination on the 2x2 block sort it out.
                let one = BigInt::from(1);
                d.add_col_multiple(i, i + 1, &one);
                v.add_col_multiple(i, i + 1, &one);
                reduce_block(d, u, v, i);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Re-diagonalize the 2x2 block at (i, i); entries outside it are zero.
fn reduce_block(d: &mut Mat, u: &mut Mat, v: &mut Mat, i: usize) {
    loop {
        // pivot: smaller of the two column-i entries
        if d[(i, i)].is_zero() || (!d[(i + 1, i)].is_zero() && d[(i + 1, i)].abs() < d[(i, i)].abs())
        {
            d.swap_rows(i, i + 1);
            u.swap_rows(i, i + 1);
        }
        if d[(i + 1, i)].is_zero() && d[(i, i + 1)].is_zero() {
            break;
        }
        if !d[(i + 1, i)].is_zero() {
            let q = -(&d[(i + 1, i)] / &d[(i, i)]);
            d.add_row_multiple(i + 1, i, &q);
            u.add_row_multiple(i + 1, i, &q);
        }
        if !d[(i, i + 1)].is_zero() {
            let q = -(&d[(i, i + 1)] / &d[(i, i)]);
            d.add_col_multiple(i + 1, i, &q);
            v.add_col_multiple(i + 1, i, &q);
        }
    }
}

/// Solve `M x = b` over the integers, if possible.
pub fn solve(snf: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = snf.d.nrows();
    let cols = snf.d.ncols();
    assert_eq!(b.len(), rows, "rhs length mismatch");
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); cols];
    let n = rows.min(cols);
    for (i, ci) in c.iter().enumerate() {
        if i < n && !snf.d[(i, i)].is_zero() {
            let (q, r) = ci.div_rem(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Basis for the integer kernel of `M`, as columns.
pub fn kernel_basis(snf: &Snf) -> Vec<Vec<BigInt>> {
    let cols = snf.d.ncols();
    let n = snf.d.nrows().min(cols);
    (0..cols)
        .filter(|&j| j >= n || snf.d[(j, j)].is_zero())
        .map(|j| snf.v.column(j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(m: &Mat) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D");
        assert_eq!(s.u.det().abs(), BigInt::one(), "U not unimodular");
        assert_eq!(s.v.det().abs(), BigInt::one(), "V not unimodular");
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "chain violated: {:?}", diag);
            } else {
                assert!(w[1].is_zero(), "zero before nonzero: {:?}", diag);
            }
        }
        s
    }

    #[test]
    fn already_in_snf() {
        let m = Mat::from_rows(vec![vec![2, 0], vec![0, 0]]);
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::zero()]);
        assert_eq!(s.u, Mat::identity(2));
        assert_eq!(s.v, Mat::identity(2));
    }

    #[test]
    fn one_by_one_zero() {
        let m = Mat::from_rows(vec![vec![0]]);
        let s = check(&m);
        assert_eq!(s.d, m);
    }

    #[test]
    fn three_by_three() {
        // expected invariant factors confirmed by an independent computation
        let m = Mat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let s = check(&m);
        assert_eq!(
            s.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
    }

    #[test]
    fn empty_matrices() {
        check(&Mat::zeros(0, 0));
        check(&Mat::zeros(0, 4));
        check(&Mat::zeros(3, 0));
    }

    #[test]
    fn solve_and_kernel() {
        let m = Mat::from_rows(vec![vec![2, 0, 4], vec![0, 3, 6]]);
        let s = check(&m);
        let b = vec![BigInt::from(6), BigInt::from(9)];
        let x = solve(&s, &b).expect("solvable");
        assert_eq!(m.mul_vec(&x), b);
        assert!(solve(&s, &[BigInt::one(), BigInt::zero()]).is_none());
        let ker = kernel_basis(&s);
        assert_eq!(ker.len(), 1);
        for k in &ker {
            assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        }
    }
}
