//! Resolutions and the contraction/expansion translation between
//! N-complexes and classical (order 2) complexes.
//!
//! Contraction with parameter p keeps only the modules in degrees
//! ≡ p−1 and ≡ N−1 (mod N), alternating d^{N−p} and d^p as differentials;
//! its classical homology computes, degree for degree, two homology
//! flavours of the original complex — an identity that holds by definition,
//! since both sides are built from the same kernel and image matrices.
//! Expansion goes the other way, duplicating each even-degree module N−1
//! times with identity differentials, and contraction inverts it on the
//! nose.

use super::morphism::{Homotopy, NComplexMorphism};
use super::{ComplexError, NComplex};
use crate::linalg::FMatrix;
use crate::qcalc::QContext;

/// A nonnegatively graded N-complex P together with a surjection ε from P_0
/// onto a target module, satisfying ε ∘ d^{N−1} = 0 so that adjoining the
/// target at degree −1 again yields an N-complex.
#[derive(Debug, Clone)]
pub struct NResolution {
    complex: NComplex,
    target_dim: usize,
    augmentation: FMatrix,
}

impl NResolution {
    pub fn new(
        complex: NComplex,
        target_dim: usize,
        augmentation: FMatrix,
    ) -> Result<Self, ComplexError> {
        assert!(
            complex.lo() <= -1,
            "resolution windows must reach below degree 0"
        );
        for n in complex.lo()..0 {
            if complex.dim(n) != 0 {
                return Err(ComplexError::NotPositive { degree: n });
            }
        }
        if augmentation.rows() != target_dim || augmentation.cols() != complex.dim(0) {
            return Err(ComplexError::ShapeMismatch {
                degree: -1,
                want_rows: target_dim,
                want_cols: complex.dim(0),
                got_rows: augmentation.rows(),
                got_cols: augmentation.cols(),
            });
        }
        if augmentation.rank() != target_dim {
            return Err(ComplexError::NotSurjective { degree: -1 });
        }
        let r = NResolution {
            complex,
            target_dim,
            augmentation,
        };
        // Building the augmented complex validates ε ∘ d^{N−1} = 0.
        r.augmented()?;
        Ok(r)
    }

    pub fn complex(&self) -> &NComplex {
        &self.complex
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn augmentation(&self) -> &FMatrix {
        &self.augmentation
    }

    /// The complex with the target module adjoined at degree −1 and ε as the
    /// differential out of degree 0.
    pub fn augmented(&self) -> Result<NComplex, ComplexError> {
        let c = &self.complex;
        let mut dims: Vec<usize> = (c.lo()..=c.hi()).map(|n| c.dim(n)).collect();
        dims[(-1 - c.lo()) as usize] = self.target_dim;
        let mut diffs: Vec<FMatrix> = ((c.lo() + 1)..=c.hi()).map(|n| c.diff(n)).collect();
        diffs[(-c.lo() - 1) as usize] = self.augmentation.clone();
        if c.lo() <= -2 {
            diffs[(-1 - c.lo() - 1) as usize] =
                FMatrix::zeros(0, self.target_dim, c.modulus());
        }
        NComplex::new(c.context().clone(), c.lo(), dims, diffs)
    }
}

/// The degree of the original complex referenced by degree m of the
/// parameter-p contraction: even m = 2k reads degree kN+p−1, odd m = 2k+1
/// reads degree kN+N−1.
pub fn contraction_source_degree(order: u32, p: u32, m: i64) -> i64 {
    let nn = order as i64;
    let k = m.div_euclid(2);
    if m.rem_euclid(2) == 0 {
        k * nn + p as i64 - 1
    } else {
        k * nn + nn - 1
    }
}

/// Contract an N-complex to a classical complex whose homology computes the
/// flavour-p and flavour-(N−p) homology of the original.
pub fn contract_complex(c: &NComplex, p: u32) -> Result<NComplex, ComplexError> {
    let order = c.order();
    if p == 0 || p >= order {
        return Err(ComplexError::FlavourOutOfRange { p, order });
    }
    let nn = order as i64;
    let mut degrees: Vec<i64> = Vec::new();
    let k_min = (c.lo() - nn).div_euclid(nn) - 1;
    let k_max = (c.hi() + nn).div_euclid(nn) + 1;
    for k in k_min..=k_max {
        for m in [2 * k, 2 * k + 1] {
            let r = contraction_source_degree(order, p, m);
            if r >= c.lo() && r <= c.hi() {
                degrees.push(m);
            }
        }
    }
    assert!(
        !degrees.is_empty(),
        "window too small: no contraction degree falls inside it"
    );
    let (m_lo, m_hi) = (degrees[0], *degrees.last().unwrap());
    let dims: Vec<usize> = (m_lo..=m_hi)
        .map(|m| c.dim(contraction_source_degree(order, p, m)))
        .collect();
    let diffs: Vec<FMatrix> = ((m_lo + 1)..=m_hi)
        .map(|m| {
            let src = contraction_source_degree(order, p, m);
            if m.rem_euclid(2) == 0 {
                c.diff_power(src, p)
            } else {
                c.diff_power(src, order - p)
            }
        })
        .collect();
    let ctx2 = QContext::new(2, c.modulus(), c.modulus() - 1)
        .expect("order-2 context with q = -1 always validates");
    NComplex::new(ctx2, m_lo, dims, diffs)
}

/// Expand a classical complex into an N-complex in the given context whose
/// flavour homology reproduces the classical homology along the two residue
/// branches of [`reindex_branch`].
pub fn expand_complex(q: &NComplex, ctx: &QContext) -> Result<NComplex, ComplexError> {
    if q.order() != 2 {
        return Err(ComplexError::NotClassical);
    }
    if ctx.modulus() != q.modulus() {
        return Err(ComplexError::ContextMismatch);
    }
    let nn = ctx.order() as i64;
    let p = q.modulus();
    // Classical degree 2k spreads over degrees kN..kN+N−2; degree 2k+1 sits
    // at kN+N−1.
    let lo_k = q.lo().div_euclid(2);
    let e_lo = if q.lo().rem_euclid(2) == 0 {
        lo_k * nn
    } else {
        lo_k * nn + nn - 1
    };
    let hi_k = q.hi().div_euclid(2);
    let e_hi = if q.hi().rem_euclid(2) == 0 {
        hi_k * nn + nn - 2
    } else {
        hi_k * nn + nn - 1
    };
    let module = |n: i64| -> i64 {
        let k = n.div_euclid(nn);
        let j = n.rem_euclid(nn);
        if j == nn - 1 {
            2 * k + 1
        } else {
            2 * k
        }
    };
    let dims: Vec<usize> = (e_lo..=e_hi).map(|n| q.dim(module(n))).collect();
    let diffs: Vec<FMatrix> = ((e_lo + 1)..=e_hi)
        .map(|n| {
            let k = n.div_euclid(nn);
            let j = n.rem_euclid(nn);
            if j == 0 {
                q.diff(2 * k)
            } else if j == nn - 1 {
                q.diff(2 * k + 1)
            } else {
                FMatrix::identity(q.dim(2 * k), p)
            }
        })
        .collect();
    NComplex::new(ctx.clone(), e_lo, dims, diffs)
}

/// The classical degree that the flavour-p cell at degree n collapses to
/// under the reindexing, or None when that cell must vanish: degrees with
/// n+1 ≡ p (mod N) land in even classical degree 2(n+1−p)/N, degrees with
/// n+1 ≡ 0 land in odd classical degree (2n+2−N)/N.
pub fn reindex_branch(order: u32, p: u32, n: i64) -> Option<i64> {
    let nn = order as i64;
    let r = (n + 1).rem_euclid(nn);
    if r == p as i64 {
        Some(2 * (n + 1 - p as i64) / nn)
    } else if r == 0 {
        Some((2 * (n + 1) - nn) / nn)
    } else {
        None
    }
}

/// Lift a map u between target modules to a morphism between resolutions:
/// f_0 solves ε' f_0 = u ε and f_{n+1} solves d' f_{n+1} = f_n d.
pub fn comparison_lift(
    source: &NResolution,
    target: &NResolution,
    u: &FMatrix,
) -> Result<NComplexMorphism, ComplexError> {
    let s = source.complex();
    let t = target.complex();
    if s.context() != t.context() {
        return Err(ComplexError::ContextMismatch);
    }
    if s.lo() != t.lo() || s.hi() != t.hi() {
        return Err(ComplexError::WindowMismatch {
            expected: (s.lo(), s.hi()),
            got: (t.lo(), t.hi()),
        });
    }
    if u.rows() != target.target_dim() || u.cols() != source.target_dim() {
        return Err(ComplexError::ShapeMismatch {
            degree: -1,
            want_rows: target.target_dim(),
            want_cols: source.target_dim(),
            got_rows: u.rows(),
            got_cols: u.cols(),
        });
    }
    let p = s.modulus();
    let mut maps: Vec<FMatrix> = Vec::new();
    for n in s.lo()..=s.hi() {
        let f_n = if n < 0 {
            FMatrix::zeros(t.dim(n), s.dim(n), p)
        } else if n == 0 {
            let rhs = u * source.augmentation();
            target
                .augmentation()
                .solve(&rhs)
                .ok_or(ComplexError::NoLift { degree: 0 })?
        } else {
            let prev = &maps[(n - 1 - s.lo()) as usize];
            let rhs = prev * &s.diff(n);
            t.diff(n)
                .solve(&rhs)
                .ok_or(ComplexError::NoLift { degree: n })?
        };
        maps.push(f_n);
    }
    NComplexMorphism::new(s, t, maps)
}

/// Construct a homotopy between two lifts of the same map: h_n solves
/// d'^{N−1} h_n = f_n − g_n − Σ_{i=1}^{N−1} d'^{N−1−i} h_{n−i} d^i, so the
/// homotopy identity holds exactly at every degree where it is checked.
pub fn homotopy_between_lifts(
    source: &NResolution,
    target: &NResolution,
    f: &NComplexMorphism,
    g: &NComplexMorphism,
) -> Result<Homotopy, ComplexError> {
    let s = source.complex();
    let t = target.complex();
    if f.source() != s || f.target() != t || g.source() != s || g.target() != t {
        return Err(ComplexError::ContextMismatch);
    }
    let order = s.order();
    let p = s.modulus();
    let top = s.hi() - order as i64 + 1;
    let mut maps: Vec<FMatrix> = Vec::new();
    let h_at = |maps: &[FMatrix], deg: i64| -> FMatrix {
        let k = deg - s.lo();
        if k >= 0 && (k as usize) < maps.len() {
            maps[k as usize].clone()
        } else {
            FMatrix::zeros(t.dim(deg + order as i64 - 1), s.dim(deg), p)
        }
    };
    for n in s.lo()..=top {
        let mut rhs = f.map(n).clone() - g.map(n).clone();
        for i in 1..order {
            let din = s.diff_power(n, i);
            let hm = h_at(&maps, n - i as i64);
            let dout = t.diff_power(n - i as i64 + order as i64 - 1, order - 1 - i);
            rhs = rhs - &(&dout * &hm) * &din;
        }
        let a = t.diff_power(n + order as i64 - 1, order - 1);
        let x = a.solve(&rhs).ok_or(ComplexError::NoLift { degree: n })?;
        maps.push(x);
    }
    Ok(Homotopy::new(s.lo(), maps))
}
