//! Morphisms of N-complexes, homotopies, and induced maps on homology.
//!
//! A morphism is a degreewise linear map commuting with the differentials.
//! Two morphisms f, g are homotopic when there is a degree N−1 map h with
//!
//! ```text
//!   f − g = Σ_{i=0}^{N−1} d'^{N−1−i} ∘ h ∘ d^i,
//! ```
//!
//! and homotopic morphisms induce the same map on every homology flavour.

use super::{ComplexError, NComplex};
use crate::linalg::FMatrix;

/// A chain map between two N-complexes sharing context and degree window.
#[derive(Debug, Clone)]
pub struct NComplexMorphism {
    source: NComplex,
    target: NComplex,
    /// maps[k] : C_{lo+k} → C'_{lo+k}.
    maps: Vec<FMatrix>,
}

impl NComplexMorphism {
    /// Validate shapes and the chain-map law d' f_n = f_{n−1} d.
    pub fn new(
        source: &NComplex,
        target: &NComplex,
        maps: Vec<FMatrix>,
    ) -> Result<Self, ComplexError> {
        if source.context() != target.context() {
            return Err(ComplexError::ContextMismatch);
        }
        if source.lo() != target.lo() || source.hi() != target.hi() {
            return Err(ComplexError::WindowMismatch {
                expected: (source.lo(), source.hi()),
                got: (target.lo(), target.hi()),
            });
        }
        assert_eq!(
            maps.len(),
            (source.hi() - source.lo() + 1) as usize,
            "need one map per degree in the window"
        );
        let m = NComplexMorphism {
            source: source.clone(),
            target: target.clone(),
            maps,
        };
        for n in m.source.lo()..=m.source.hi() {
            let f = m.map(n);
            if f.rows() != m.target.dim(n) || f.cols() != m.source.dim(n) {
                return Err(ComplexError::ShapeMismatch {
                    degree: n,
                    want_rows: m.target.dim(n),
                    want_cols: m.source.dim(n),
                    got_rows: f.rows(),
                    got_cols: f.cols(),
                });
            }
        }
        for n in (m.source.lo() + 1)..=m.source.hi() {
            let lhs = &m.target.diff(n) * m.map(n);
            let rhs = m.map(n - 1) * &m.source.diff(n);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap { degree: n });
            }
        }
        Ok(m)
    }

    /// The identity morphism of a complex.
    pub fn identity(c: &NComplex) -> Self {
        let maps = (c.lo()..=c.hi())
            .map(|n| FMatrix::identity(c.dim(n), c.modulus()))
            .collect();
        NComplexMorphism::new(c, c, maps).expect("identity is a chain map")
    }

    /// The zero morphism between two complexes on the same window.
    pub fn zero(source: &NComplex, target: &NComplex) -> Result<Self, ComplexError> {
        let maps = (source.lo()..=source.hi())
            .map(|n| FMatrix::zeros(target.dim(n), source.dim(n), source.modulus()))
            .collect();
        NComplexMorphism::new(source, target, maps)
    }

    pub fn source(&self) -> &NComplex {
        &self.source
    }

    pub fn target(&self) -> &NComplex {
        &self.target
    }

    /// Component at degree n (zero-shaped outside the window).
    pub fn map(&self, n: i64) -> &FMatrix {
        &self.maps[(n - self.source.lo()) as usize]
    }

    /// The induced matrix pH_n(C) → pH_n(C') in canonical quotient bases.
    /// The degree must be safe in both complexes (they share windows, so one
    /// check suffices).
    pub fn induced(&self, p: u32, n: i64) -> Result<FMatrix, ComplexError> {
        let src = self.source.cell(p, n)?;
        let tgt = self.target.cell(p, n)?;
        let q = self.source.modulus();
        let mut out = FMatrix::zeros(tgt.dim(), src.dim(), q);
        for j in 0..src.dim() {
            let v = src.rep(j);
            let fv = self.map(n).mul_vec(&v);
            let coords = tgt
                .coords(&fv)
                .expect("chain maps send cycles to cycles");
            for (i, &x) in coords.iter().enumerate() {
                out.set(i, j, x);
            }
        }
        Ok(out)
    }

    /// Pointwise difference f − g (same source, target, window).
    pub fn sub(&self, other: &NComplexMorphism) -> Result<NComplexMorphism, ComplexError> {
        if self.source != other.source || self.target != other.target {
            return Err(ComplexError::ContextMismatch);
        }
        let maps = self
            .maps
            .iter()
            .zip(other.maps.iter())
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        NComplexMorphism::new(&self.source, &self.target, maps)
    }

    /// Composition other ∘ self.
    pub fn then(&self, other: &NComplexMorphism) -> Result<NComplexMorphism, ComplexError> {
        if self.target != other.source {
            return Err(ComplexError::ContextMismatch);
        }
        let maps = (self.source.lo()..=self.source.hi())
            .map(|n| other.map(n) * self.map(n))
            .collect();
        NComplexMorphism::new(&self.source, &other.target, maps)
    }
}

/// A degree N−1 map h : C_n → C'_{n+N−1}, the witness of a homotopy.
#[derive(Debug, Clone)]
pub struct Homotopy {
    lo: i64,
    /// maps[k] : C_{lo+k} → C'_{lo+k+N−1}.
    maps: Vec<FMatrix>,
}

impl Homotopy {
    pub fn new(lo: i64, maps: Vec<FMatrix>) -> Self {
        Homotopy { lo, maps }
    }

    /// Component at degree n; zero-shaped when outside the stored range.
    pub fn map(&self, n: i64, source: &NComplex, target: &NComplex) -> FMatrix {
        let k = n - self.lo;
        let order = source.order() as i64;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            FMatrix::zeros(
                target.dim(n + order - 1),
                source.dim(n),
                source.modulus(),
            )
        }
    }
}

/// Evaluate the homotopy combination Σ_i d'^{N−1−i} h d^i at degree n.
fn homotopy_combination(
    h: &Homotopy,
    source: &NComplex,
    target: &NComplex,
    n: i64,
) -> FMatrix {
    let order = source.order();
    let p = source.modulus();
    let mut acc = FMatrix::zeros(target.dim(n), source.dim(n), p);
    for i in 0..order {
        // d^i lands in degree n−i; h sends it to degree n−i+N−1; then
        // d'^{N−1−i} brings it back to degree n.
        let din = source.diff_power(n, i);
        let hmid = h.map(n - i as i64, source, target);
        let dout = target.diff_power(n - i as i64 + order as i64 - 1, order - 1 - i);
        acc = acc + &(&dout * &hmid) * &din;
    }
    acc
}

/// Check that h witnesses f ≃ g on the degree range where the combination is
/// fully determined by stored data: n ∈ [lo, hi − N + 1] (higher degrees pull
/// h-values from above the window, which the stored object treats as zero).
pub fn check_homotopy(
    f: &NComplexMorphism,
    g: &NComplexMorphism,
    h: &Homotopy,
) -> Result<bool, ComplexError> {
    let order = f.source().order() as i64;
    let (lo, hi) = (f.source().lo(), f.source().hi() - order + 1);
    check_homotopy_on(f, g, h, lo, hi)
}

/// Check the homotopy identity on an explicit degree range only; used when
/// the witness is valid on a sub-range of the window (for instance when an
/// auxiliary operator identity needs a few low degrees of clearance).
pub fn check_homotopy_on(
    f: &NComplexMorphism,
    g: &NComplexMorphism,
    h: &Homotopy,
    lo: i64,
    hi: i64,
) -> Result<bool, ComplexError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(ComplexError::ContextMismatch);
    }
    let source = f.source();
    let target = f.target();
    for n in lo..=hi {
        let comb = homotopy_combination(h, source, target, n);
        let diff = f.map(n).clone() - g.map(n).clone();
        if comb != diff {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that f and g induce equal maps on every safe homology cell.
pub fn induced_equal(
    f: &NComplexMorphism,
    g: &NComplexMorphism,
) -> Result<bool, ComplexError> {
    let source = f.source();
    for p in 1..source.order() {
        let (a, b) = source.safe_window(p);
        for n in a..=b {
            if f.induced(p, n)? != g.induced(p, n)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::QContext;

    fn two_module_complex() -> NComplex {
        // N = 3 over F_7: C_1 = C_0 = F^2 with d = [[0,1],[0,0]] (d^2 = 0).
        let ctx = QContext::auto(3).unwrap();
        let p = ctx.modulus();
        let mut d = FMatrix::zeros(2, 2, p);
        d.set(0, 1, 1);
        NComplex::new(
            ctx,
            -3,
            vec![0, 0, 0, 2, 2, 0, 0, 0],
            vec![
                FMatrix::zeros(0, 0, p),
                FMatrix::zeros(0, 0, p),
                FMatrix::zeros(0, 2, p),
                d,
                FMatrix::zeros(2, 0, p),
                FMatrix::zeros(0, 0, p),
                FMatrix::zeros(0, 0, p),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_chain_map_and_induces_identity() {
        let c = two_module_complex();
        let id = NComplexMorphism::identity(&c);
        for p in 1..3 {
            let (a, b) = c.safe_window(p);
            for n in a..=b {
                let m = id.induced(p, n).unwrap();
                assert_eq!(m, FMatrix::identity(m.rows(), c.modulus()));
            }
        }
    }

    #[test]
    fn non_commuting_map_is_rejected() {
        let c = two_module_complex();
        let p = c.modulus();
        // Swap map at degree 1 only: fails d' f = f d.
        let mut maps: Vec<FMatrix> = (c.lo()..=c.hi())
            .map(|n| FMatrix::identity(c.dim(n), p))
            .collect();
        let mut swap = FMatrix::zeros(2, 2, p);
        swap.set(0, 1, 1);
        swap.set(1, 0, 1);
        maps[(1 - c.lo()) as usize] = swap;
        let err = NComplexMorphism::new(&c, &c, maps).unwrap_err();
        assert!(matches!(err, ComplexError::NotChainMap { .. }));
    }

    #[test]
    fn zero_homotopy_witnesses_f_equals_f() {
        let c = two_module_complex();
        let id = NComplexMorphism::identity(&c);
        let h = Homotopy::new(c.lo(), vec![]);
        assert!(check_homotopy(&id, &id, &h).unwrap());
        assert!(induced_equal(&id, &id).unwrap());
    }
}
