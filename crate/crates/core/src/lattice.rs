//! Exact integer linear algebra: Hermite normal form, rational rank and
//! saturated kernel lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            cols,
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.entries
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.entries[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i][j] += &self.entries[i][k] * &other.entries[k][j];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    /// `row_a <- x*row_a + y*row_b`, `row_b <- u*row_a + v*row_b`.
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let ra = self.entries[a][j].clone();
            let rb = self.entries[b][j].clone();
            self.entries[a][j] = x * &ra + y * &rb;
            self.entries[b][j] = u * &ra + v * &rb;
        }
    }

    /// `row_a <- row_a - k*row_b`.
    fn sub_row_multiple(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = k * &self.entries[b][j];
            self.entries[a][j] -= t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for x in &mut self.entries[a] {
            *x = -x.clone();
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", xs.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Row-style Hermite normal form. Returns `(H, U)` with `U` unimodular and
/// `H = U * M`: pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, and zero rows sit at the bottom.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let Some(first) = (pivot_row..m.rows).find(|&i| !h.entries[i][col].is_zero()) else {
            continue;
        };
        h.swap_rows(pivot_row, first);
        u.swap_rows(pivot_row, first);
        for i in pivot_row + 1..m.rows {
            if h.entries[i][col].is_zero() {
                continue;
            }
            let a = h.entries[pivot_row][col].clone();
            let b = h.entries[i][col].clone();
            let e = a.extended_gcd(&b);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let ua = -(&b / &g);
            let va = &a / &g;
            // [[x, y], [-b/g, a/g]] has determinant one.
            h.combine_rows(pivot_row, i, &x, &y, &ua, &va);
            u.combine_rows(pivot_row, i, &x, &y, &ua, &va);
        }
        if h.entries[pivot_row][col].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h.entries[pivot_row][col].clone();
        for i in 0..pivot_row {
            let q = h.entries[i][col].div_floor(&p);
            if !q.is_zero() {
                h.sub_row_multiple(i, pivot_row, &q);
                u.sub_row_multiple(i, pivot_row, &q);
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank(s: &[Vec<BigRational>]) -> usize {
    let cols = s.first().map_or(0, Vec::len);
    let m = clear_denominators(s, cols);
    let (h, _) = hnf(&m);
    (0..h.rows)
        .filter(|&i| h.entries[i].iter().any(|x| !x.is_zero()))
        .count()
}

/// Scales each row by the lcm of its denominators; the kernel is unchanged.
pub fn clear_denominators(s: &[Vec<BigRational>], cols: usize) -> IntMatrix {
    let rows = s
        .iter()
        .map(|row| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| (q * &l).to_integer()).collect()
        })
        .collect();
    IntMatrix::from_rows(cols, rows)
}

/// A basis of a saturated sublattice of `Z^n`, kept in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    /// Canonical basis of the lattice generated by `generators`.
    pub fn from_generators(dim: usize, generators: Vec<Vec<BigInt>>) -> Self {
        let (h, _) = hnf(&IntMatrix::from_rows(dim, generators));
        let vectors = h
            .into_rows()
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        LatticeBasis { dim, vectors }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<BigInt>] {
        &self.vectors
    }

    pub fn combination(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coeffs.len(), self.rank());
        let mut v = vec![BigInt::zero(); self.dim];
        for (c, b) in coeffs.iter().zip(&self.vectors) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        v
    }

    /// The unique `c` with `sum c_i B_i = v`, or `None` if `v` is outside
    /// the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut residual = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for b in &self.vectors {
            let p = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            let (c, r) = residual[p].div_rem(&b[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in residual.iter_mut().zip(b) {
                *x -= &c * y;
            }
            coeffs.push(c);
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }
}

/// Canonical basis of `{ I in Z^n : S I = 0 }`.
pub fn kernel_basis(s: &[Vec<BigRational>], n: usize) -> LatticeBasis {
    let a = clear_denominators(s, n);
    // Rows of U paired with zero rows of H = U A^T span the integer kernel
    // of A; U unimodular makes that span saturated.
    let (h, u) = hnf(&a.transpose());
    let kernel = (0..n)
        .filter(|&i| h.entries[i].iter().all(Zero::is_zero))
        .map(|i| u.entries[i].clone())
        .collect();
    LatticeBasis::from_generators(n, kernel)
}

/// Coordinates of `v` in `basis`; see [`LatticeBasis::coords`].
pub fn lattice_coords(basis: &LatticeBasis, v: &[BigInt]) -> Option<Vec<BigInt>> {
    basis.coords(v)
}
