//! Exact integer linear algebra: Smith normal form, elementary divisors,
//! integer kernels, and elementary divisors of a lattice pair.
//!
//! Arbitrary-precision integers throughout. The reduction is deterministic:
//! the pivot is the smallest nonzero absolute value, ties broken by
//! (row, col) order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmithError {
    #[error("ambient columns are not linearly independent")]
    AmbientNotABasis,
    #[error("column {0} of the subgroup basis is not in the span of the ambient basis")]
    NotInSpan(usize),
    #[error("matrix shapes {0}x{1} and {2}x{3} are incompatible")]
    ShapeMismatch(usize, usize, usize, usize),
}

/// Dense matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in integer matrix"
        );
        IntMat {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        })
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<BigInt>>) -> Self {
        let cols = columns.len();
        assert!(columns.iter().all(|c| c.len() == rows));
        Self::from_fn(rows, cols, |r, c| columns[c][r].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }

    /// row_dst += q * row_src
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(dst, c)] + q * &self[(src, c)];
            self[(dst, c)] = v;
        }
    }

    /// col_dst += q * col_src
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, dst)] + q * &self[(r, src)];
            self[(r, dst)] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

/// U * A * V = D with U, V unimodular and D diagonal with nonnegative
/// entries d1 | d2 | ..., zeros trailing.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMat,
    pub v: IntMat,
    pub d: IntMat,
}

impl SmithDecomposition {
    /// Full diagonal of D: min(rows, cols) entries, zeros trailing.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// The nonzero elementary divisors.
    pub fn nonzero_divisors(&self) -> Vec<BigInt> {
        self.divisors()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_divisors().len()
    }

    /// Divisors strictly greater than 1 (the torsion of the cokernel).
    pub fn torsion_divisors(&self) -> Vec<BigInt> {
        self.nonzero_divisors()
            .into_iter()
            .filter(|d| !d.is_one())
            .collect()
    }
}

fn find_pivot(d: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in k..d.rows() {
        for c in k..d.cols() {
            let v = d[(r, c)].abs();
            if v.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bv, _, _)) => v < *bv,
            };
            if better {
                best = Some((v, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Smith normal form. Deterministic for a fixed input.
pub fn snf(a: &IntMat) -> SmithDecomposition {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut v = IntMat::identity(a.cols());
    let n = a.rows().min(a.cols());

    for k in 0..n {
        'pivot: loop {
            let Some((pr, pc)) = find_pivot(&d, k) else {
                // remaining submatrix is zero
                return SmithDecomposition { u, v, d };
            };
            d.swap_rows(k, pr);
            u.swap_rows(k, pr);
            d.swap_cols(k, pc);
            v.swap_cols(k, pc);
            if d[(k, k)].is_negative() {
                d.negate_row(k);
                u.negate_row(k);
            }
            let pivot = d[(k, k)].clone();

            let mut clean = true;
            for r in k + 1..d.rows() {
                if d[(r, k)].is_zero() {
                    continue;
                }
                let q = -(&d[(r, k)] / &pivot);
                if !q.is_zero() {
                    d.add_row_multiple(r, k, &q);
                    u.add_row_multiple(r, k, &q);
                }
                if !d[(r, k)].is_zero() {
                    clean = false;
                }
            }
            for c in k + 1..d.cols() {
                if d[(k, c)].is_zero() {
                    continue;
                }
                let q = -(&d[(k, c)] / &pivot);
                if !q.is_zero() {
                    d.add_col_multiple(c, k, &q);
                    v.add_col_multiple(c, k, &q);
                }
                if !d[(k, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'pivot;
            }

            // row k and column k are clear; enforce divisibility of the
            // remaining block by the pivot
            for r in k + 1..d.rows() {
                for c in k + 1..d.cols() {
                    if !(&d[(r, c)] % &pivot).is_zero() {
                        let one = BigInt::one();
                        d.add_row_multiple(k, r, &one);
                        u.add_row_multiple(k, r, &one);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }
    SmithDecomposition { u, v, d }
}

/// Columns form a basis of ker(A) over the integers; count = cols - rank.
/// Each column is sign-normalized so its first nonzero entry is positive.
pub fn kernel_basis(a: &IntMat) -> IntMat {
    let dec = snf(a);
    let rank = dec.rank();
    let cols: Vec<Vec<BigInt>> = (rank..a.cols())
        .map(|c| {
            let mut col = dec.v.column(c);
            if let Some(first) = col.iter().find(|x| !x.is_zero()) {
                if first.is_negative() {
                    for x in &mut col {
                        *x = -x.clone();
                    }
                }
            }
            col
        })
        .collect();
    IntMat::from_columns(a.cols(), cols)
}

/// Elementary divisors of a pair of lattices: `sub` expressed in the
/// coordinates of `ambient` (an exact integer solve), then reduced to
/// Smith form. The quotient of the two lattices is
/// (+) Z/d_i  (+)  Z^(ambient rank - #divisors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDivisors {
    /// Divisors of the inclusion, one per subgroup basis column.
    pub divisors: Vec<BigInt>,
    /// Torsion orders of the quotient (divisors > 1).
    pub quotient_torsion: Vec<BigInt>,
    /// Free rank of the quotient.
    pub quotient_free_rank: usize,
}

/// `ambient_basis` and `sub_basis` hold basis vectors in their columns.
pub fn pair_divisors(ambient_basis: &IntMat, sub_basis: &IntMat) -> Result<PairDivisors, SmithError> {
    if ambient_basis.rows() != sub_basis.rows() {
        return Err(SmithError::ShapeMismatch(
            ambient_basis.rows(),
            ambient_basis.cols(),
            sub_basis.rows(),
            sub_basis.cols(),
        ));
    }
    let dec = snf(ambient_basis);
    let rank = dec.rank();
    if rank != ambient_basis.cols() {
        return Err(SmithError::AmbientNotABasis);
    }
    // Solve ambient * C = sub: with U*A*V = D this is D * (V^-1 C) = U * sub.
    let rhs = dec.u.mul(sub_basis);
    let divisors = dec.divisors();
    let mut c_prime = IntMat::zeros(ambient_basis.cols(), sub_basis.cols());
    for t in 0..sub_basis.cols() {
        for r in 0..ambient_basis.rows() {
            if r < rank {
                let (q, rem) = rhs[(r, t)].div_rem(&divisors[r]);
                if !rem.is_zero() {
                    return Err(SmithError::NotInSpan(t));
                }
                c_prime[(r, t)] = q;
            } else if !rhs[(r, t)].is_zero() {
                return Err(SmithError::NotInSpan(t));
            }
        }
    }
    let coeffs = dec.v.mul(&c_prime);
    let inclusion = snf(&coeffs);
    let divisors = inclusion.divisors();
    let quotient_torsion = inclusion.torsion_divisors();
    let quotient_free_rank = ambient_basis.cols() - inclusion.rank();
    Ok(PairDivisors {
        divisors,
        quotient_torsion,
        quotient_free_rank,
    })
}
