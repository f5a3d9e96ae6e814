//! N-complexes over F_p and their graded homology.
//!
//! An N-complex is a Z-graded vector space with a degree −1 map `d` such that
//! `d^N = 0`.  For every 1 ≤ p ≤ N−1 there is a homology flavour
//!
//! ```text
//!   pH_n = Ker(d^p : C_n → C_{n−p}) / Im(d^{N−p} : C_{n+N−p} → C_n),
//! ```
//!
//! and for N = 2, p = 1 this is ordinary homology.  A complex is stored on a
//! finite degree window `[lo, hi]`; degrees outside the window are genuinely
//! zero for the stored object, so for a mathematically unbounded complex the
//! homology of the stored window only agrees with the true homology on the
//! *safe window* of each flavour (see [`NComplex::safe_window`]).

mod exact;
mod morphism;
mod resolution;

pub use exact::{
    hexagon_check, inclusion_induced, power_induced, HexagonOutcome, LesOutcome,
    ShortExactSequence,
};
pub use morphism::{
    check_homotopy, check_homotopy_on, induced_equal, Homotopy, NComplexMorphism,
};
pub use resolution::{
    comparison_lift, contract_complex, contraction_source_degree, expand_complex,
    homotopy_between_lifts, reindex_branch, NResolution,
};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{FMatrix, Subspace};
use crate::qcalc::QContext;

/// Errors from N-complex construction and homology computations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("contexts disagree (order, modulus, or q)")]
    ContextMismatch,
    #[error("degree windows disagree: expected [{}, {}], got [{}, {}]", .expected.0, .expected.1, .got.0, .got.1)]
    WindowMismatch { expected: (i64, i64), got: (i64, i64) },
    #[error("differential at degree {degree} has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    ShapeMismatch {
        degree: i64,
        want_rows: usize,
        want_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("d^N is nonzero out of degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("homology flavour p = {p} out of range 1..{order}")]
    FlavourOutOfRange { p: u32, order: u32 },
    #[error("degree {n} is outside the safe window of flavour p = {p}")]
    UnsafeDegree { p: u32, n: i64 },
    #[error("maps do not commute with the differentials at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("sequence is not exact at degree {degree}")]
    NotExact { degree: i64 },
    #[error("injection has a kernel at degree {degree}")]
    NotInjective { degree: i64 },
    #[error("surjection misses vectors at degree {degree}")]
    NotSurjective { degree: i64 },
    #[error("no lift exists at degree {degree}")]
    NoLift { degree: i64 },
    #[error("complex has nonzero modules below degree 0 (degree {degree})")]
    NotPositive { degree: i64 },
    #[error("expected a classical complex (order N = 2)")]
    NotClassical,
    #[error("representative chase failed at degree {degree}: the sequence is not exact")]
    ChaseFailed { degree: i64 },
}

/// A finitely supported N-complex: dimensions and differentials on a degree
/// window `[lo, hi]`, zero modules outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NComplex {
    ctx: QContext,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    /// `diffs[k]` is d at degree lo+1+k, a map C_{lo+1+k} → C_{lo+k}.
    diffs: Vec<FMatrix>,
}

impl NComplex {
    /// Build and validate a complex.  `dims[k]` is the dimension at degree
    /// `lo + k`; `diffs[k]` maps degree `lo + 1 + k` to degree `lo + k`.
    /// Validation checks every shape and that all N-fold composites vanish.
    pub fn new(
        ctx: QContext,
        lo: i64,
        dims: Vec<usize>,
        diffs: Vec<FMatrix>,
    ) -> Result<Self, ComplexError> {
        assert!(!dims.is_empty(), "empty degree window");
        assert_eq!(
            diffs.len(),
            dims.len() - 1,
            "need exactly one differential per adjacent degree pair"
        );
        let hi = lo + dims.len() as i64 - 1;
        let c = NComplex {
            ctx,
            lo,
            hi,
            dims,
            diffs,
        };
        for n in (c.lo + 1)..=c.hi {
            let d = c.stored_diff(n);
            let (want_r, want_c) = (c.dim(n - 1), c.dim(n));
            if d.rows() != want_r || d.cols() != want_c {
                return Err(ComplexError::ShapeMismatch {
                    degree: n,
                    want_rows: want_r,
                    want_cols: want_c,
                    got_rows: d.rows(),
                    got_cols: d.cols(),
                });
            }
            if d.modulus() != c.ctx.modulus() {
                return Err(ComplexError::ContextMismatch);
            }
        }
        let order = c.ctx.order() as i64;
        for n in (c.lo + order)..=c.hi {
            if !c.diff_power(n, c.ctx.order()).is_zero() {
                return Err(ComplexError::NotAComplex { degree: n });
            }
        }
        Ok(c)
    }

    pub fn context(&self) -> &QContext {
        &self.ctx
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn order(&self) -> u32 {
        self.ctx.order()
    }

    pub fn modulus(&self) -> u64 {
        self.ctx.modulus()
    }

    /// Dimension at any degree; zero outside the window.
    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    fn stored_diff(&self, n: i64) -> &FMatrix {
        &self.diffs[(n - self.lo - 1) as usize]
    }

    /// The differential out of degree n, synthesized as a zero map when it
    /// crosses the window boundary.
    pub fn diff(&self, n: i64) -> FMatrix {
        if n > self.lo && n <= self.hi {
            self.stored_diff(n).clone()
        } else {
            FMatrix::zeros(self.dim(n - 1), self.dim(n), self.ctx.modulus())
        }
    }

    /// The k-fold composite d^k : C_n → C_{n−k} (k = 0 gives the identity).
    pub fn diff_power(&self, n: i64, k: u32) -> FMatrix {
        let mut acc = FMatrix::identity(self.dim(n), self.ctx.modulus());
        for j in 0..k as i64 {
            acc = &self.diff(n - j) * &acc;
        }
        acc
    }

    /// The degrees n for which pH_n is free of window-truncation artifacts:
    /// both d^p out of C_n and d^{N−p} into C_n lie inside `[lo, hi]`.
    pub fn safe_window(&self, p: u32) -> (i64, i64) {
        let order = self.ctx.order() as i64;
        (self.lo + p as i64, self.hi - order + p as i64)
    }

    pub fn is_safe(&self, p: u32, n: i64) -> bool {
        let (a, b) = self.safe_window(p);
        a <= n && n <= b
    }

    fn check_flavour(&self, p: u32) -> Result<(), ComplexError> {
        if p == 0 || p >= self.ctx.order() {
            return Err(ComplexError::FlavourOutOfRange {
                p,
                order: self.ctx.order(),
            });
        }
        Ok(())
    }

    /// The cycle/boundary data of the cell (p, n); requires a safe degree.
    pub fn cell(&self, p: u32, n: i64) -> Result<HomologyCell, ComplexError> {
        self.check_flavour(p)?;
        if !self.is_safe(p, n) {
            return Err(ComplexError::UnsafeDegree { p, n });
        }
        let order = self.ctx.order();
        let ker = self.diff_power(n, p).kernel();
        let im = self.diff_power(n + (order - p) as i64, order - p).image();
        Ok(HomologyCell::new(ker, im))
    }

    /// dim pH_n for a safe degree n.
    pub fn homology_dim(&self, p: u32, n: i64) -> Result<usize, ComplexError> {
        Ok(self.cell(p, n)?.dim())
    }

    /// All homology dimensions over every flavour's safe window.
    pub fn homology_table(&self) -> HomologyTable {
        let mut entries = BTreeMap::new();
        for p in 1..self.ctx.order() {
            let (a, b) = self.safe_window(p);
            for n in a..=b {
                let h = self
                    .homology_dim(p, n)
                    .expect("safe window degrees are computable");
                entries.insert((p, n), h);
            }
        }
        HomologyTable { entries }
    }

    /// The stored dimension vector, indexed from degree `lo`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The same complex with `below`/`above` extra zero degrees appended to
    /// the window ends, so that more of the original degrees become safe.
    pub fn padded(&self, below: usize, above: usize) -> NComplex {
        let p = self.ctx.modulus();
        let new_lo = self.lo - below as i64;
        let new_hi = self.hi + above as i64;
        let dims: Vec<usize> = (new_lo..=new_hi).map(|n| self.dim(n)).collect();
        let diffs: Vec<FMatrix> = ((new_lo + 1)..=new_hi)
            .map(|n| {
                if n > self.lo && n <= self.hi {
                    self.stored_diff(n).clone()
                } else {
                    FMatrix::zeros(self.dim(n - 1), self.dim(n), p)
                }
            })
            .collect();
        NComplex::new(self.ctx.clone(), new_lo, dims, diffs)
            .expect("zero padding preserves the complex laws")
    }

    /// True when pH_n = 0 across the flavour's whole safe window.
    pub fn is_acyclic(&self, p: u32) -> Result<bool, ComplexError> {
        self.check_flavour(p)?;
        let (a, b) = self.safe_window(p);
        for n in a..=b {
            if self.homology_dim(p, n)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Acyclicity for one flavour is equivalent to acyclicity for all; this
    /// verifies the equivalence on the stored instance (true = consistent).
    ///
    /// The stored data extends by zero to a complex on all of ℤ (composites
    /// that leave the window factor through zero modules), and the flavours
    /// are compared on that extension: padding the window by N−1 degrees on
    /// each side puts the whole support inside every flavour's safe range,
    /// so each flag below is genuine global acyclicity.  Comparing raw safe
    /// windows instead would misread edge classes: a class in a degree that
    /// only some flavours' windows reach says nothing about the equivalence.
    pub fn kapranov_check(&self) -> Result<bool, ComplexError> {
        let margin = self.ctx.order() as usize - 1;
        let padded = self.padded(margin, margin);
        let flags = (1..self.ctx.order())
            .map(|p| padded.is_acyclic(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(flags.iter().all(|&f| f) == flags.iter().any(|&f| f))
    }
}

/// Cycles, boundaries, and a canonical set of representatives for one
/// homology cell pH_n.  Representatives are the kernel-basis columns that
/// extend the boundary space, picked greedily in canonical order, so classes
/// have deterministic coordinates.
pub struct HomologyCell {
    ker: Subspace,
    im: Subspace,
    reps: FMatrix,
}

impl HomologyCell {
    fn new(ker: Subspace, im: Subspace) -> Self {
        let p = ker.modulus();
        let ambient = ker.ambient();
        let mut ech = crate::linalg::Echelon::new(ambient, p);
        for j in 0..im.dim() {
            ech.insert(&im.basis().col(j));
        }
        debug_assert_eq!(ech.rank(), im.dim());
        let mut picked = Vec::new();
        for j in 0..ker.dim() {
            let v = ker.basis().col(j);
            if ech.insert(&v) {
                picked.push(v);
            }
        }
        let mut reps = FMatrix::zeros(ambient, picked.len(), p);
        for (j, v) in picked.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                reps.set(i, j, x);
            }
        }
        HomologyCell { ker, im, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn cycles(&self) -> &Subspace {
        &self.ker
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.im
    }

    /// Representative vector of the j-th basis class.
    pub fn rep(&self, j: usize) -> Vec<u64> {
        self.reps.col(j)
    }

    /// Coordinates of the class of `v` in the canonical quotient basis;
    /// `None` when `v` is not a cycle.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let stacked = self.im.basis().hstack(&self.reps);
        let sol = stacked.solve_vec(v)?;
        Some(sol[self.im.dim()..].to_vec())
    }
}

/// Homology dimensions keyed by (flavour p, degree n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    pub entries: BTreeMap<(u32, i64), usize>,
}

impl HomologyTable {
    pub fn get(&self, p: u32, n: i64) -> Option<usize> {
        self.entries.get(&(p, n)).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|&d| d == 0)
    }
}
