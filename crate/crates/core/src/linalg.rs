//! Dense exact linear algebra over the prime field F_p.
//!
//! Everything is integer arithmetic mod p — there are no tolerances anywhere.
//! Subspaces carry a canonical basis (reduced column echelon form), so two
//! subspaces are equal exactly when their basis matrices are identical, and
//! kernels, images and quotient dimensions are deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::qcalc::{addm, invm, mulm, subm};

/// Errors from the checked matrix operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch in {op}: left is {lrows}x{lcols}, right is {rrows}x{rcols}")]
    ShapeMismatch {
        op: &'static str,
        lrows: usize,
        lcols: usize,
        rrows: usize,
        rcols: usize,
    },
    #[error("modulus mismatch: {lhs} vs {rhs}")]
    ModulusMismatch { lhs: u64, rhs: u64 },
    #[error("claimed inner subspace is not contained in the outer one")]
    NotContained,
    #[error("ambient dimension mismatch: {lhs} vs {rhs}")]
    AmbientMismatch { lhs: usize, rhs: usize },
}

/// A dense rows×cols matrix over F_p, entries stored row-major and reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} mod {} [", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>3}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl FMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        FMatrix {
            rows,
            cols,
            p,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from explicit rows; entries are reduced mod p.
    pub fn from_rows(rows: &[Vec<u64>], p: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows in FMatrix::from_rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, p: u64, f: impl Fn(usize, usize) -> u64) -> Self {
        let mut m = Self::zeros(rows, cols, p);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Single column vector as an n×1 matrix.
    pub fn column(v: &[u64], p: u64) -> Self {
        Self::from_fn(v.len(), 1, p, |i, _| v[i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FMatrix {
        FMatrix::from_fn(self.cols, self.rows, self.p, |i, j| self.get(j, i))
    }

    pub fn scale(&self, c: u64) -> FMatrix {
        let c = c % self.p;
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self.data.iter().map(|&v| mulm(v, c, self.p)).collect(),
        }
    }

    /// Checked matrix product: inner dimensions and moduli must agree.
    pub fn matmul(&self, rhs: &FMatrix) -> Result<FMatrix, LinalgError> {
        if self.p != rhs.p {
            return Err(LinalgError::ModulusMismatch {
                lhs: self.p,
                rhs: rhs.p,
            });
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "matmul",
                lrows: self.rows,
                lcols: self.cols,
                rrows: rhs.rows,
                rcols: rhs.cols,
            });
        }
        let mut out = FMatrix::zeros(self.rows, rhs.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, addm(cur, mulm(a, rhs.get(k, j), self.p), self.p));
                }
            }
        }
        Ok(out)
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = addm(acc, mulm(self.get(i, j), v[j] % self.p, self.p), self.p);
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hstack(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        assert_eq!(self.p, rhs.p, "hstack modulus mismatch");
        FMatrix::from_fn(self.rows, self.cols + rhs.cols, self.p, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        })
    }

    /// Vertical concatenation [self; rhs].
    pub fn vstack(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, rhs.cols, "vstack col mismatch");
        assert_eq!(self.p, rhs.p, "vstack modulus mismatch");
        FMatrix::from_fn(self.rows + rhs.rows, self.cols, self.p, |i, j| {
            if i < self.rows {
                self.get(i, j)
            } else {
                rhs.get(i - self.rows, j)
            }
        })
    }

    /// Kronecker product self ⊗ rhs, with (i·rows(rhs)+k, j·cols(rhs)+l)
    /// holding self[i,j]·rhs[k,l].
    pub fn kron(&self, rhs: &FMatrix) -> FMatrix {
        assert_eq!(self.p, rhs.p, "kron modulus mismatch");
        FMatrix::from_fn(
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            self.p,
            |i, j| {
                mulm(
                    self.get(i / rhs.rows, j / rhs.cols),
                    rhs.get(i % rhs.rows, j % rhs.cols),
                    self.p,
                )
            },
        )
    }

    /// In-place reduced row echelon form; returns the pivot columns in order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let (a, b) = (self.get(r, j), self.get(pr, j));
                    self.set(r, j, b);
                    self.set(pr, j, a);
                }
            }
            let inv = invm(self.get(r, c), self.p);
            for j in 0..self.cols {
                self.set(r, j, mulm(self.get(r, j), inv, self.p));
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) != 0 {
                    let f = self.get(i, c);
                    for j in 0..self.cols {
                        let v = subm(self.get(i, j), mulm(f, self.get(r, j), self.p), self.p);
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Canonical basis of the solution space of self · v = 0.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut generators = FMatrix::zeros(self.cols, self.cols - pivots.len(), self.p);
        let mut g = 0;
        for f in 0..self.cols {
            if pivots.binary_search(&f).is_ok() {
                continue;
            }
            generators.set(f, g, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                generators.set(pc, g, subm(0, m.get(row, f), self.p));
            }
            g += 1;
        }
        Subspace::from_columns(&generators)
    }

    /// Canonical basis of the column span.
    pub fn image(&self) -> Subspace {
        Subspace::from_columns(self)
    }

    /// Solve self · X = rhs; `None` when inconsistent.  Free variables are
    /// set to zero, making the particular solution canonical.
    pub fn solve(&self, rhs: &FMatrix) -> Option<FMatrix> {
        assert_eq!(self.rows, rhs.rows, "solve row mismatch");
        assert_eq!(self.p, rhs.p, "solve modulus mismatch");
        let mut aug = self.hstack(rhs);
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FMatrix::zeros(self.cols, rhs.cols, self.p);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, aug.get(row, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, b: &[u64]) -> Option<Vec<u64>> {
        self.solve(&FMatrix::column(b, self.p)).map(|x| x.col(0))
    }
}

impl Add for &FMatrix {
    type Output = FMatrix;
    fn add(self, rhs: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        assert_eq!(self.p, rhs.p, "add modulus");
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| addm(a, b, self.p))
                .collect(),
        }
    }
}

impl Sub for &FMatrix {
    type Output = FMatrix;
    fn sub(self, rhs: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        assert_eq!(self.p, rhs.p, "sub modulus");
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| subm(a, b, self.p))
                .collect(),
        }
    }
}

impl Neg for &FMatrix {
    type Output = FMatrix;
    fn neg(self) -> FMatrix {
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            p: self.p,
            data: self.data.iter().map(|&a| subm(0, a, self.p)).collect(),
        }
    }
}

/// Unchecked product for compositions that are well-shaped by construction.
impl Mul for &FMatrix {
    type Output = FMatrix;
    fn mul(self, rhs: &FMatrix) -> FMatrix {
        self.matmul(rhs).expect("operands are well-shaped by construction")
    }
}

impl Add for FMatrix {
    type Output = FMatrix;
    fn add(self, rhs: FMatrix) -> FMatrix {
        &self + &rhs
    }
}

impl Sub for FMatrix {
    type Output = FMatrix;
    fn sub(self, rhs: FMatrix) -> FMatrix {
        &self - &rhs
    }
}

impl Neg for FMatrix {
    type Output = FMatrix;
    fn neg(self) -> FMatrix {
        -&self
    }
}

impl Mul for FMatrix {
    type Output = FMatrix;
    fn mul(self, rhs: FMatrix) -> FMatrix {
        &self * &rhs
    }
}

/// A subspace of F_p^ambient, held as a canonical basis matrix: columns are
/// basis vectors whose first nonzero coordinate is 1, those leading
/// coordinates are strictly increasing across columns, and every leading
/// coordinate is zero in all other basis vectors.  Two subspaces are equal
/// iff their basis matrices are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    p: u64,
    basis: FMatrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace dim {} of F_{}^{}: {:?}",
            self.dim(),
            self.p,
            self.ambient,
            self.basis
        )
    }
}

impl Subspace {
    /// Canonicalize the span of the columns of `m`.
    pub fn from_columns(m: &FMatrix) -> Subspace {
        let mut rows = m.transpose();
        let pivot_count = rows.rref_in_place().len();
        // Nonzero rows of the transpose RREF, transposed back, are canonical.
        let basis = FMatrix::from_fn(m.rows(), pivot_count, m.modulus(), |i, j| rows.get(j, i));
        Subspace {
            ambient: m.rows(),
            p: m.modulus(),
            basis,
        }
    }

    pub fn zero(ambient: usize, p: u64) -> Subspace {
        Subspace {
            ambient,
            p,
            basis: FMatrix::zeros(ambient, 0, p),
        }
    }

    pub fn full(ambient: usize, p: u64) -> Subspace {
        Subspace {
            ambient,
            p,
            basis: FMatrix::identity(ambient, p),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The canonical basis, one vector per column.
    pub fn basis(&self) -> &FMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient, "contains ambient mismatch");
        self.basis.solve_vec(v).is_some()
    }

    pub fn is_contained_in(&self, outer: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient != outer.ambient {
            return Err(LinalgError::AmbientMismatch {
                lhs: self.ambient,
                rhs: outer.ambient,
            });
        }
        if self.p != outer.p {
            return Err(LinalgError::ModulusMismatch {
                lhs: self.p,
                rhs: outer.p,
            });
        }
        Ok(outer.basis.solve(&self.basis).is_some())
    }

    /// dim(outer/inner), verifying inner ⊆ outer first.
    pub fn quotient_dim(inner: &Subspace, outer: &Subspace) -> Result<usize, LinalgError> {
        if inner.is_contained_in(outer)? {
            Ok(outer.dim() - inner.dim())
        } else {
            Err(LinalgError::NotContained)
        }
    }
}

/// Incremental row-echelon accumulator for rank-tracking and greedy basis
/// extension.  Rows are kept with a normalized leading 1.
pub struct Echelon {
    p: u64,
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(width: usize, p: u64) -> Self {
        Echelon {
            p,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the accumulated rows; if a nonzero residue is left,
    /// absorb it and return true.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.width, "echelon width mismatch");
        let mut v: Vec<u64> = v.iter().map(|&x| x % self.p).collect();
        for (lead, row) in &self.rows {
            let f = v[*lead];
            if f != 0 {
                for j in *lead..self.width {
                    v[j] = subm(v[j], mulm(f, row[j], self.p), self.p);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(lead) => {
                let inv = invm(v[lead], self.p);
                for x in v.iter_mut() {
                    *x = mulm(*x, inv, self.p);
                }
                self.rows.push((lead, v));
                self.rows.sort_by_key(|(l, _)| *l);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m7(rows: &[Vec<u64>]) -> FMatrix {
        FMatrix::from_rows(rows, 7)
    }

    #[test]
    fn matmul_scalar_case() {
        let a = m7(&[vec![2]]);
        let b = m7(&[vec![4]]);
        assert_eq!(a.matmul(&b).unwrap(), m7(&[vec![1]]));
    }

    #[test]
    fn matmul_error_paths() {
        let a = FMatrix::zeros(2, 3, 7);
        let b = FMatrix::zeros(2, 3, 7);
        assert!(matches!(
            a.matmul(&b),
            Err(LinalgError::ShapeMismatch { op: "matmul", .. })
        ));
        let c = FMatrix::zeros(3, 2, 5);
        assert_eq!(
            a.matmul(&c),
            Err(LinalgError::ModulusMismatch { lhs: 7, rhs: 5 })
        );
    }

    #[test]
    fn matmul_through_zero_dimensional_spaces() {
        let a = FMatrix::zeros(3, 0, 7);
        let b = FMatrix::zeros(0, 2, 7);
        assert_eq!(a.matmul(&b).unwrap(), FMatrix::zeros(3, 2, 7));
    }

    #[test]
    fn kernel_canonical_form() {
        // Kernel of (1 1) over F_7 is spanned by (1, 6).
        let k = m7(&[vec![1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().col(0), vec![1, 6]);
    }

    #[test]
    fn image_canonical_form() {
        // Image of the column (1, 2)^T is spanned by (1, 2).
        let im = m7(&[vec![1], vec![2]]).image();
        assert_eq!(im.dim(), 1);
        assert_eq!(im.basis().col(0), vec![1, 2]);
    }

    #[test]
    fn kernel_of_zero_row_matrix_is_everything() {
        let k = FMatrix::zeros(0, 3, 7).kernel();
        assert_eq!(k.dim(), 3);
        assert_eq!(k, Subspace::full(3, 7));
    }

    #[test]
    fn quotient_dim_and_containment() {
        let outer = m7(&[vec![1, 0], vec![0, 1], vec![0, 0]]).image();
        let inner = m7(&[vec![1], vec![1], vec![0]]).image();
        assert_eq!(Subspace::quotient_dim(&inner, &outer), Ok(1));
        let off = m7(&[vec![0], vec![0], vec![1]]).image();
        assert_eq!(
            Subspace::quotient_dim(&off, &outer),
            Err(LinalgError::NotContained)
        );
    }

    #[test]
    fn solve_particular_and_inconsistent() {
        let a = m7(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(a.solve_vec(&[1, 2]), Some(vec![1, 0]));
        assert_eq!(a.solve_vec(&[1, 3]), None);
    }

    #[test]
    fn echelon_greedy_extension() {
        let mut e = Echelon::new(3, 7);
        assert!(e.insert(&[1, 1, 0]));
        assert!(!e.insert(&[2, 2, 0]));
        assert!(e.insert(&[0, 0, 5]));
        assert_eq!(e.rank(), 2);
    }

    prop_compose! {
        fn small_matrix()(rows in 1usize..6, cols in 1usize..6)
            (rows in Just(rows), cols in Just(cols),
             data in prop::collection::vec(0u64..7, rows * cols)) -> FMatrix {
            let mut m = FMatrix::zeros(rows, cols, 7);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, data[i * cols + j]);
                }
            }
            m
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.kernel().dim() + m.rank(), m.cols());
            prop_assert_eq!(m.image().dim(), m.rank());
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in small_matrix()) {
            let k = m.kernel();
            let prod = m.matmul(k.basis()).unwrap();
            prop_assert!(prod.is_zero());
        }

        #[test]
        fn canonical_basis_ignores_generating_set(m in small_matrix(), c in 1u64..7) {
            // Scaling columns and appending redundant combinations must not
            // change the canonical basis.
            let scaled = m.scale(c);
            prop_assert_eq!(m.image(), scaled.image());
            let doubled = m.hstack(&m.scale(2));
            prop_assert_eq!(m.image(), doubled.image());
        }

        #[test]
        fn solve_returns_actual_solutions(m in small_matrix(), seed in 0u64..100) {
            // Build a guaranteed-consistent rhs = m · w.
            let w: Vec<u64> = (0..m.cols()).map(|j| (seed + j as u64) % 7).collect();
            let b = m.mul_vec(&w);
            let x = m.solve_vec(&b).expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
        }
    }
}
