//! Simplicial modules over F_p and their q-deformed differentials.
//!
//! A simplicial module is a family of finite-dimensional F_p-spaces C_0,
//! C_1, … with face maps d_i : C_n → C_{n−1} (0 ≤ i ≤ n) satisfying
//! d_i d_j = d_{j−1} d_i for i < j, and optionally degeneracies
//! s_i : C_n → C_{n+1} with the usual mixed identities.  Weighting the
//! faces by powers of q turns the family into an N-complex in several
//! ways:
//!
//! * full: d = Σ_{i=0}^{n} q^i d_i (all faces),
//! * truncated: δ = Σ_{i=0}^{n−1} q^i d_i (last face dropped),
//! * weighted(ℓ): like truncated but the top retained face carries an
//!   extra factor [ℓ],
//! * general: δ = Σ_{i=0}^{n−1} a_{n−1−i} q^i d_i for a fixed scalar
//!   sequence a_0, a_1, …
//!
//! Each satisfies δ^N = 0 whenever [N] = 0 in the field.  The N-th power
//! of the general form has a closed expansion into face composites
//! ([`SimplicialModule::power_closed_form`]) that holds with no hypothesis
//! on q at all, and the truncated and weighted complexes carry explicit
//! contracting homotopies built from degeneracies.

use thiserror::Error;

use crate::linalg::FMatrix;
use crate::ncomplex::{
    check_homotopy_on, ComplexError, Homotopy, NComplex, NComplexMorphism,
};
use crate::qcalc::{invm, mulm, QContext, QcalcError};

/// Errors from simplicial-module construction and the derived complexes.
#[derive(Debug, Error)]
pub enum SimplicialError {
    #[error("face {index} at level {level} has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    FaceShape {
        level: usize,
        index: usize,
        want_rows: usize,
        want_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("degeneracy {index} at level {level} has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    DegeneracyShape {
        level: usize,
        index: usize,
        want_rows: usize,
        want_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("expected {want} faces at level {level}, got {got}")]
    FaceCount { level: usize, want: usize, got: usize },
    #[error("expected {want} degeneracies at level {level}, got {got}")]
    DegeneracyCount { level: usize, want: usize, got: usize },
    #[error("matrix modulus differs from the declared field F_{p}")]
    ModulusMismatch { p: u64 },
    #[error("face identity d_{i} d_{j} = d_{} d_{i} fails out of level {level}", .j - 1)]
    FaceFace { level: usize, i: usize, j: usize },
    #[error("face-degeneracy identity fails for d_{i} s_{j} out of level {level}")]
    FaceDegeneracy { level: usize, i: usize, j: usize },
    #[error("degeneracy identity s_{i} s_{j} = s_{} s_{i} fails out of level {level}", .j + 1)]
    DegeneracyDegeneracy { level: usize, i: usize, j: usize },
    #[error("this operation needs degeneracies, but the module has none")]
    NeedsDegeneracies,
    #[error("context field F_{ctx} does not match the module field F_{module}")]
    FieldMismatch { ctx: u64, module: u64 },
    #[error("coefficient list has {got} entries but levels up to {top} need {want}")]
    CoefficientCount { want: usize, got: usize, top: usize },
    #[error("extra degeneracy fails d_0 s = id at level {level}")]
    ExtraDegeneracyUnit { level: usize },
    #[error("extra degeneracy fails d_{i} s = s d_{} at level {level}", .i - 1)]
    ExtraDegeneracyShift { level: usize, i: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Scalar(#[from] QcalcError),
}

/// A simplicial (or semi-simplicial, when no degeneracies are attached)
/// module over F_p, stored as face/degeneracy matrices per level.
#[derive(Debug, Clone)]
pub struct SimplicialModule {
    p: u64,
    dims: Vec<usize>,
    /// faces[n] are the maps out of level n; faces[0] is empty and
    /// faces[n] has n+1 entries for n ≥ 1.
    faces: Vec<Vec<FMatrix>>,
    /// degeneracies[n] are the maps out of level n into level n+1, with
    /// n+1 entries; the vector covers levels 0..top.
    degeneracies: Option<Vec<Vec<FMatrix>>>,
}

impl SimplicialModule {
    /// Build and validate: shapes, the face-face identities, and (when
    /// degeneracies are given) the mixed and degeneracy-degeneracy
    /// identities.
    pub fn new(
        p: u64,
        dims: Vec<usize>,
        faces: Vec<Vec<FMatrix>>,
        degeneracies: Option<Vec<Vec<FMatrix>>>,
    ) -> Result<Self, SimplicialError> {
        assert!(!dims.is_empty(), "a simplicial module needs level 0");
        assert_eq!(faces.len(), dims.len(), "one face list per level");
        let m = SimplicialModule {
            p,
            dims,
            faces,
            degeneracies,
        };
        let top = m.top();
        for n in 0..=top {
            let want = if n == 0 { 0 } else { n + 1 };
            if m.faces[n].len() != want {
                return Err(SimplicialError::FaceCount {
                    level: n,
                    want,
                    got: m.faces[n].len(),
                });
            }
            for (i, f) in m.faces[n].iter().enumerate() {
                if f.modulus() != p {
                    return Err(SimplicialError::ModulusMismatch { p });
                }
                if f.rows() != m.dims[n - 1] || f.cols() != m.dims[n] {
                    return Err(SimplicialError::FaceShape {
                        level: n,
                        index: i,
                        want_rows: m.dims[n - 1],
                        want_cols: m.dims[n],
                        got_rows: f.rows(),
                        got_cols: f.cols(),
                    });
                }
            }
        }
        if let Some(degens) = &m.degeneracies {
            if degens.len() != top {
                return Err(SimplicialError::DegeneracyCount {
                    level: 0,
                    want: top,
                    got: degens.len(),
                });
            }
            for n in 0..top {
                if degens[n].len() != n + 1 {
                    return Err(SimplicialError::DegeneracyCount {
                        level: n,
                        want: n + 1,
                        got: degens[n].len(),
                    });
                }
                for (i, s) in degens[n].iter().enumerate() {
                    if s.modulus() != p {
                        return Err(SimplicialError::ModulusMismatch { p });
                    }
                    if s.rows() != m.dims[n + 1] || s.cols() != m.dims[n] {
                        return Err(SimplicialError::DegeneracyShape {
                            level: n,
                            index: i,
                            want_rows: m.dims[n + 1],
                            want_cols: m.dims[n],
                            got_rows: s.rows(),
                            got_cols: s.cols(),
                        });
                    }
                }
            }
        }
        m.check_identities()?;
        Ok(m)
    }

    fn check_identities(&self) -> Result<(), SimplicialError> {
        let top = self.top();
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.face(n - 1, i) * self.face(n, j);
                    let rhs = self.face(n - 1, j - 1) * self.face(n, i);
                    if lhs != rhs {
                        return Err(SimplicialError::FaceFace { level: n, i, j });
                    }
                }
            }
        }
        let Some(degens) = &self.degeneracies else {
            return Ok(());
        };
        for n in 0..top {
            // d_i s_j out of level n (s_j lands in level n+1).
            for j in 0..=n {
                for i in 0..=(n + 1) {
                    let lhs = self.face(n + 1, i) * &degens[n][j];
                    let ok = if i == j || i == j + 1 {
                        lhs == FMatrix::identity(self.dims[n], self.p)
                    } else if i < j {
                        lhs == &degens[n - 1][j - 1] * self.face(n, i)
                    } else {
                        lhs == &degens[n - 1][j] * self.face(n, i - 1)
                    };
                    if !ok {
                        return Err(SimplicialError::FaceDegeneracy { level: n, i, j });
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            // s_i s_j out of level n, for i ≤ j ≤ n.
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = &degens[n + 1][i] * &degens[n][j];
                    let rhs = &degens[n + 1][j + 1] * &degens[n][i];
                    if lhs != rhs {
                        return Err(SimplicialError::DegeneracyDegeneracy { level: n, i, j });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Highest level stored.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, level: usize) -> usize {
        self.dims[level]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Face map d_i out of level n (n ≥ 1, 0 ≤ i ≤ n).
    pub fn face(&self, n: usize, i: usize) -> &FMatrix {
        &self.faces[n][i]
    }

    pub fn has_degeneracies(&self) -> bool {
        self.degeneracies.is_some()
    }

    /// Degeneracy s_i out of level n (0 ≤ i ≤ n < top).
    pub fn degeneracy(&self, n: usize, i: usize) -> Result<&FMatrix, SimplicialError> {
        let degens = self
            .degeneracies
            .as_ref()
            .ok_or(SimplicialError::NeedsDegeneracies)?;
        Ok(&degens[n][i])
    }

    fn check_context(&self, ctx: &QContext) -> Result<(), SimplicialError> {
        if ctx.modulus() != self.p {
            return Err(SimplicialError::FieldMismatch {
                ctx: ctx.modulus(),
                module: self.p,
            });
        }
        Ok(())
    }

    fn check_coefficients(&self, spec: &DifferentialSpec) -> Result<(), SimplicialError> {
        if let DifferentialSpec::General(a) = spec {
            if a.len() < self.top() {
                return Err(SimplicialError::CoefficientCount {
                    want: self.top(),
                    got: a.len(),
                    top: self.top(),
                });
            }
        }
        Ok(())
    }

    /// The q-weighted differential out of level n (1 ≤ n ≤ top) for the
    /// given variant.
    pub fn differential_matrix(
        &self,
        ctx: &QContext,
        spec: &DifferentialSpec,
        n: usize,
    ) -> Result<FMatrix, SimplicialError> {
        self.check_context(ctx)?;
        self.check_coefficients(spec)?;
        assert!((1..=self.top()).contains(&n), "level out of range");
        let mut acc = FMatrix::zeros(self.dims[n - 1], self.dims[n], self.p);
        let included = match spec {
            DifferentialSpec::Full => n + 1,
            _ => n,
        };
        for i in 0..included {
            let mut w = ctx.qpow(i as i64);
            match spec {
                DifferentialSpec::Weighted(l) if i == n - 1 => {
                    w = mulm(w, ctx.qint(*l), self.p);
                }
                DifferentialSpec::General(a) => {
                    w = mulm(w, a[n - 1 - i] % self.p, self.p);
                }
                _ => {}
            }
            acc = &acc + &self.face(n, i).scale(w);
        }
        Ok(acc)
    }

    /// The N-complex on degrees [−N, top] with the chosen differential;
    /// degrees below 0 are zero.  Construction fails when the N-th power of
    /// the differential does not vanish (for the built-in variants it always
    /// does when [N] = 0 in the field).
    pub fn q_differential(
        &self,
        ctx: &QContext,
        spec: &DifferentialSpec,
    ) -> Result<NComplex, SimplicialError> {
        self.check_context(ctx)?;
        self.check_coefficients(spec)?;
        let order = ctx.order() as i64;
        let lo = -order;
        let top = self.top() as i64;
        let dims: Vec<usize> = (lo..=top)
            .map(|m| if m < 0 { 0 } else { self.dims[m as usize] })
            .collect();
        let mut diffs: Vec<FMatrix> = Vec::new();
        for m in (lo + 1)..=top {
            diffs.push(if m <= 0 {
                FMatrix::zeros(
                    if m - 1 < 0 { 0 } else { self.dims[(m - 1) as usize] },
                    if m < 0 { 0 } else { self.dims[m as usize] },
                    self.p,
                )
            } else {
                self.differential_matrix(ctx, spec, m as usize)?
            });
        }
        Ok(NComplex::new(ctx.clone(), lo, dims, diffs)?)
    }

    /// The closed expansion of the N-th power of the general differential
    /// out of level n (n ≥ N): a face-composite sum whose coefficients are
    /// built from the windowed sums (N,j,k) = Σ_{s=0}^{N−k} q^s a_{n−k−j−s}.
    /// This is an identity of matrices with no hypothesis on q, so it cross-
    /// checks the differential assembly and the face identities at once.
    pub fn power_closed_form(
        &self,
        ctx: &QContext,
        a: &[u64],
        n: usize,
    ) -> Result<FMatrix, SimplicialError> {
        self.check_context(ctx)?;
        let order = ctx.order() as usize;
        assert!(n >= order && n <= self.top(), "level out of range");
        if a.len() < n {
            return Err(SimplicialError::CoefficientCount {
                want: n,
                got: a.len(),
                top: self.top(),
            });
        }
        let p = self.p;
        // (N, j, k) with the level-n convention.
        let windowed = |j: usize, k: usize| -> u64 {
            let mut acc = 0u64;
            for s in 0..=(order - k) {
                // a-index n−k−j−s stays within 0..n for the tuples below.
                let idx = n - k - j - s;
                acc = crate::qcalc::addm(acc, mulm(ctx.qpow(s as i64), a[idx] % p, p), p);
            }
            acc
        };
        let mut result = FMatrix::zeros(self.dims[n - order], self.dims[n], p);
        // Iterate non-decreasing tuples 0 ≤ i_1 ≤ … ≤ i_N ≤ n−N.
        let mut tuple = vec![0usize; order];
        loop {
            let mut coeff = 1u64;
            let mut composite = FMatrix::identity(self.dims[n], p);
            for (k, &ik) in tuple.iter().enumerate() {
                // k is 0-based; the factor index in the product is k+1.
                coeff = mulm(coeff, ctx.qpow(ik as i64), p);
                coeff = mulm(coeff, windowed(ik, k + 1), p);
                composite = self.face(n - k, ik) * &composite;
            }
            result = &result + &composite.scale(coeff);
            // Advance the odometer.
            let mut pos = order;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if tuple[pos] < n - order {
                    tuple[pos] += 1;
                    for t in (pos + 1)..order {
                        tuple[t] = tuple[pos];
                    }
                    break;
                }
                if pos == 0 {
                    return Ok(result);
                }
            }
            if tuple.iter().all(|&x| x == 0) {
                // Wrapped around (only happens when n == N and the single
                // tuple is all zeros): done after one pass.
                return Ok(result);
            }
        }
    }

    /// Contract the truncated complex using the last degeneracy: with
    /// σ = q^{−n} s_n one has δσ − q^{−1}σδ = id, and a scalar multiple of
    /// σ^{N−1} is a contracting homotopy.  Returns the complex, the
    /// homotopy, and the outcome of both verifications.
    pub fn sigma_contraction(
        &self,
        ctx: &QContext,
    ) -> Result<ContractionCertificate, SimplicialError> {
        self.check_context(ctx)?;
        ctx.require_h1()?;
        if !self.has_degeneracies() {
            return Err(SimplicialError::NeedsDegeneracies);
        }
        let complex = self.q_differential(ctx, &DifferentialSpec::Truncated)?;
        let order = ctx.order();
        let p = self.p;
        let top = self.top();
        let sigma = |m: usize| -> Result<FMatrix, SimplicialError> {
            Ok(self.degeneracy(m, m)?.scale(ctx.qpow(-(m as i64))))
        };
        // One-step relation δσ − q^{−1}σδ = id at every level.
        let mut relation_ok = true;
        let qinv = ctx.qpow(-1);
        for m in 0..top {
            let first = &complex.diff(m as i64 + 1) * &sigma(m)?;
            let second = if m == 0 {
                FMatrix::zeros(self.dims[0], self.dims[0], p)
            } else {
                (&sigma(m - 1)? * &complex.diff(m as i64)).scale(qinv)
            };
            if &first - &second != FMatrix::identity(self.dims[m], p) {
                relation_ok = false;
            }
        }
        // Normalizer: the alternating sum collapses to
        // (−1)^{N−1} q^{N−1} [N−1]! times the identity.
        let constant = mulm(
            ctx.sign(order - 1),
            mulm(ctx.qpow(order as i64 - 1), ctx.qfact(order - 1), p),
            p,
        );
        let c = invm(constant, p);
        let certificate = self.finish_certificate(ctx, complex, c, |m| sigma(m), 0)?;
        Ok(ContractionCertificate {
            relation_ok,
            ..certificate
        })
    }

    /// Contract the weighted complex using an extra degeneracy s with
    /// d_0 s = id and d_i s = s d_{i−1}: then δs − qsδ = id away from level
    /// 0, and a scalar multiple of s^{N−1} is a contracting homotopy — valid
    /// from level N up, because pushing the operator identity through level
    /// 0 needs [ℓ] = 1 there.
    pub fn extra_contraction(
        &self,
        ctx: &QContext,
        ell: i64,
        s: &ExtraDegeneracy,
    ) -> Result<ContractionCertificate, SimplicialError> {
        self.check_context(ctx)?;
        ctx.require_h1()?;
        s.validate(self)?;
        let complex = self.q_differential(ctx, &DifferentialSpec::Weighted(ell))?;
        let order = ctx.order();
        let p = self.p;
        let top = self.top();
        // One-step relation δs − qsδ = id at levels ≥ 1 (at level 0 the
        // left side is [ℓ]·id, so it only holds when [ℓ] = 1).
        let mut relation_ok = true;
        let q = ctx.q();
        let start = if ctx.qint(ell) == 1 { 0 } else { 1 };
        for m in start..top {
            let first = &complex.diff(m as i64 + 1) * s.map(m);
            let second = if m == 0 {
                FMatrix::zeros(self.dims[0], self.dims[0], p)
            } else {
                (s.map(m - 1) * &complex.diff(m as i64)).scale(q)
            };
            if &first - &second != FMatrix::identity(self.dims[m], p) {
                relation_ok = false;
            }
        }
        // Normalizer: here the alternating sum collapses to
        // (−1)^{N−1} q^{−N(N−1)/2} [N−1]! times the identity.
        let e = -((order as i64) * (order as i64 - 1) / 2);
        let constant = mulm(
            ctx.sign(order - 1),
            mulm(ctx.qpow(e), ctx.qfact(order - 1), p),
            p,
        );
        let c = invm(constant, p);
        let certificate =
            self.finish_certificate(ctx, complex, c, |m| Ok(s.map(m).clone()), order as i64)?;
        Ok(ContractionCertificate {
            relation_ok,
            ..certificate
        })
    }

    /// Assemble h = c·(step)^{N−1} as a homotopy witness and check the
    /// homotopy identity from `first_level` up.
    fn finish_certificate(
        &self,
        ctx: &QContext,
        complex: NComplex,
        c: u64,
        step: impl Fn(usize) -> Result<FMatrix, SimplicialError>,
        first_level: i64,
    ) -> Result<ContractionCertificate, SimplicialError> {
        let order = ctx.order();
        let p = self.p;
        let top = self.top() as i64;
        let mut maps: Vec<FMatrix> = Vec::new();
        for m in complex.lo()..=(top - order as i64 + 1) {
            if m < 0 {
                maps.push(FMatrix::zeros(
                    complex.dim(m + order as i64 - 1),
                    complex.dim(m),
                    p,
                ));
                continue;
            }
            let mut acc = FMatrix::identity(self.dims[m as usize], p);
            for t in 0..(order - 1) as usize {
                acc = step(m as usize + t)? * acc;
            }
            maps.push(acc.scale(c));
        }
        let homotopy = Homotopy::new(complex.lo(), maps);
        let idm = NComplexMorphism::identity(&complex);
        let zero = NComplexMorphism::zero(&complex, &complex)?;
        let hi_level = top - order as i64 + 1;
        let identity_ok = check_homotopy_on(&idm, &zero, &homotopy, first_level, hi_level)?;
        Ok(ContractionCertificate {
            complex,
            homotopy,
            relation_ok: true,
            identity_ok,
            identity_levels: (first_level, hi_level),
        })
    }
}

/// The four q-weighted differentials built from the faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DifferentialSpec {
    /// All faces: d = Σ_{i=0}^{n} q^i d_i.
    Full,
    /// Last face dropped: δ = Σ_{i=0}^{n−1} q^i d_i.
    Truncated,
    /// Truncated with the final retained face weighted by [ℓ].
    Weighted(i64),
    /// δ = Σ_{i=0}^{n−1} a_{n−1−i} q^i d_i for a fixed sequence a.
    General(Vec<u64>),
}

/// An operator s : C_n → C_{n+1} with d_0 s = id and d_i s = s d_{i−1} for
/// the faces the truncated/weighted differentials use (the last face of
/// each level is exempt).
#[derive(Debug, Clone)]
pub struct ExtraDegeneracy {
    /// maps[n] : C_n → C_{n+1}, for n = 0..top−1.
    maps: Vec<FMatrix>,
}

impl ExtraDegeneracy {
    pub fn new(maps: Vec<FMatrix>) -> Self {
        ExtraDegeneracy { maps }
    }

    pub fn map(&self, n: usize) -> &FMatrix {
        &self.maps[n]
    }

    fn validate(&self, module: &SimplicialModule) -> Result<(), SimplicialError> {
        let top = module.top();
        assert_eq!(self.maps.len(), top, "one map per level below the top");
        for n in 0..top {
            let s = &self.maps[n];
            if s.rows() != module.dim(n + 1) || s.cols() != module.dim(n) {
                return Err(SimplicialError::DegeneracyShape {
                    level: n,
                    index: 0,
                    want_rows: module.dim(n + 1),
                    want_cols: module.dim(n),
                    got_rows: s.rows(),
                    got_cols: s.cols(),
                });
            }
            if module.face(n + 1, 0) * s != FMatrix::identity(module.dim(n), module.modulus()) {
                return Err(SimplicialError::ExtraDegeneracyUnit { level: n });
            }
            for i in 1..=n {
                let lhs = module.face(n + 1, i) * s;
                let rhs = &self.maps[n - 1] * module.face(n, i - 1);
                if lhs != rhs {
                    return Err(SimplicialError::ExtraDegeneracyShift { level: n, i });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a contracting-homotopy construction: the complex, the witness,
/// and whether the one-step relation and the full homotopy identity held.
#[derive(Debug, Clone)]
pub struct ContractionCertificate {
    pub complex: NComplex,
    pub homotopy: Homotopy,
    /// The one-step commutation relation between δ and the step operator.
    pub relation_ok: bool,
    /// The N-term homotopy identity over `identity_levels`.
    pub identity_ok: bool,
    pub identity_levels: (i64, i64),
}

impl ContractionCertificate {
    pub fn pass(&self) -> bool {
        self.relation_ok && self.identity_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::QContext;

    /// The constant simplicial module: every level is F^d, every face and
    /// degeneracy is the identity.
    fn point_module(p: u64, d: usize, top: usize) -> SimplicialModule {
        let dims = vec![d; top + 1];
        let faces: Vec<Vec<FMatrix>> = (0..=top)
            .map(|n| {
                if n == 0 {
                    vec![]
                } else {
                    vec![FMatrix::identity(d, p); n + 1]
                }
            })
            .collect();
        let degens: Vec<Vec<FMatrix>> = (0..top)
            .map(|n| vec![FMatrix::identity(d, p); n + 1])
            .collect();
        SimplicialModule::new(p, dims, faces, Some(degens)).unwrap()
    }

    /// The chain module of the full simplex on `v` ordered vertices, levels
    /// 0..=v−1: level n has one basis vector per (n+1)-subset, and d_i
    /// deletes the i-th smallest vertex.  Semi-simplicial (no degeneracies).
    fn simplex_module(p: u64, v: usize) -> SimplicialModule {
        fn subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, v: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for x in start..v {
                    cur.push(x);
                    rec(x + 1, v, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, v, k, &mut cur, &mut out);
            out
        }
        let top = v - 1;
        let levels: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| subsets(v, n + 1)).collect();
        let dims: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        let index_of = |n: usize, s: &[usize]| -> usize {
            levels[n].iter().position(|t| t == s).unwrap()
        };
        let faces: Vec<Vec<FMatrix>> = (0..=top)
            .map(|n| {
                if n == 0 {
                    return vec![];
                }
                (0..=n)
                    .map(|i| {
                        let mut f = FMatrix::zeros(dims[n - 1], dims[n], p);
                        for (col, s) in levels[n].iter().enumerate() {
                            let mut t = s.clone();
                            t.remove(i);
                            f.set(index_of(n - 1, &t), col, 1);
                        }
                        f
                    })
                    .collect()
            })
            .collect();
        SimplicialModule::new(p, dims, faces, None).unwrap()
    }

    #[test]
    fn face_identities_catch_corruption() {
        let p = 7;
        let m = simplex_module(p, 4);
        assert_eq!(m.dims(), &[4, 6, 4, 1]);
        // Swap two face maps at level 2: the face-face identities break.
        let mut faces: Vec<Vec<FMatrix>> = (0..=m.top())
            .map(|n| (0..m.faces[n].len()).map(|i| m.face(n, i).clone()).collect())
            .collect();
        faces[2].swap(0, 2);
        let err = SimplicialModule::new(p, m.dims().to_vec(), faces, None).unwrap_err();
        assert!(matches!(err, SimplicialError::FaceFace { .. }));
    }

    #[test]
    fn full_differential_of_a_simplex_squares_to_zero_classically() {
        // With N = 2, q = −1 the full differential is the alternating-sign
        // boundary; the simplex is contractible so homology is one F at
        // degree 0.
        let ctx = QContext::new(2, 7, 6).unwrap();
        let m = simplex_module(7, 4);
        let c = m.q_differential(&ctx, &DifferentialSpec::Full).unwrap();
        assert_eq!(c.homology_dim(1, 0).unwrap(), 1);
        for n in 1..=2 {
            assert_eq!(c.homology_dim(1, n).unwrap(), 0, "degree {n}");
        }
    }

    #[test]
    fn all_variants_are_n_complexes_on_the_point_module() {
        for order in [2u32, 3, 4] {
            let ctx = QContext::auto(order).unwrap();
            let m = point_module(ctx.modulus(), 2, 2 * order as usize + 1);
            for spec in [
                DifferentialSpec::Full,
                DifferentialSpec::Truncated,
                DifferentialSpec::Weighted(-1),
                DifferentialSpec::Weighted(order as i64 + 2),
                DifferentialSpec::General(vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10]),
            ] {
                // General sequences do not give δ^N = 0 in general; only
                // check construction for the built-in three.
                let res = m.q_differential(&ctx, &spec);
                match spec {
                    DifferentialSpec::General(_) => {
                        // may or may not be a complex; both outcomes fine
                        let _ = res;
                    }
                    _ => {
                        res.unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn truncated_power_matches_the_closed_form() {
        // Coefficients all 1 make the general differential the truncated
        // one; the closed form must reproduce δ^N entry for entry, with and
        // without the [N] = 0 hypothesis.
        for (order, p, q, v) in [(2u32, 11u64, 10u64, 6usize), (3, 7, 2, 6), (5, 11, 4, 7)] {
            let ctx = QContext::new(order, p, q).unwrap();
            let m = simplex_module(p, v);
            assert!(m.top() >= order as usize, "fixture must reach level N");
            let ones = vec![1u64; m.top()];
            let c = m
                .q_differential(&ctx, &DifferentialSpec::General(ones.clone()))
                .unwrap();
            for n in (order as usize)..=m.top() {
                let direct = c.diff_power(n as i64, order);
                let closed = m.power_closed_form(&ctx, &ones, n).unwrap();
                assert_eq!(direct, closed, "level {n}, order {order}");
            }
        }
    }

    #[test]
    fn general_power_closed_form_without_nilpotency() {
        // A coefficient sequence with no special structure: δ^N is nonzero,
        // and the closed form still matches it exactly.
        let m = simplex_module(11, 5);
        let ctx = QContext::new(2, 11, 10).unwrap();
        let a = vec![3u64, 1, 4, 1, 5];
        // Assemble δ^N by hand (q_differential would reject it).
        let order = ctx.order();
        for n in (order as usize)..=m.top() {
            let mut direct = FMatrix::identity(m.dim(n), 11);
            for k in 0..order as usize {
                let d = m
                    .differential_matrix(&ctx, &DifferentialSpec::General(a.clone()), n - k)
                    .unwrap();
                direct = &d * &direct;
            }
            let closed = m.power_closed_form(&ctx, &a, n).unwrap();
            assert_eq!(direct, closed, "level {n}");
        }
    }

    #[test]
    fn sigma_contracts_the_truncated_complex() {
        for order in [2u32, 3, 4] {
            let ctx = QContext::auto(order).unwrap();
            let m = point_module(ctx.modulus(), 2, 2 * order as usize + 1);
            let cert = m.sigma_contraction(&ctx).unwrap();
            assert!(cert.relation_ok, "order {order}: one-step relation");
            assert!(cert.identity_ok, "order {order}: homotopy identity");
            assert!(cert.identity_levels.1 >= cert.identity_levels.0 + 2);
            // The certified complex really is acyclic on its safe windows.
            for p in 1..order {
                assert!(cert.complex.is_acyclic(p).unwrap());
            }
        }
    }

    #[test]
    fn extra_degeneracy_contracts_the_weighted_complex() {
        let order = 3u32;
        let ctx = QContext::auto(order).unwrap();
        let m = point_module(ctx.modulus(), 2, 2 * order as usize + 1);
        let d = 2;
        let s = ExtraDegeneracy::new(
            (0..m.top())
                .map(|_| FMatrix::identity(d, ctx.modulus()))
                .collect(),
        );
        for ell in [-1i64, 0, 1, 2, 5] {
            let cert = m.extra_contraction(&ctx, ell, &s).unwrap();
            assert!(cert.relation_ok, "l = {ell}");
            assert!(cert.identity_ok, "l = {ell}");
            // The homotopy identity certifies vanishing homology exactly on
            // the levels it covers; below them the weighted complex can have
            // genuine homology (it does for l = -1 at degree 0).
            let (a, b) = cert.identity_levels;
            for p in 1..order {
                for n in a..=b {
                    if cert.complex.is_safe(p, n) {
                        assert_eq!(
                            cert.complex.homology_dim(p, n).unwrap(),
                            0,
                            "l = {ell}, flavour {p}, degree {n}"
                        );
                    }
                }
            }
        }
        // And the certified range is not vacuous protection: for l = -1 the
        // complex really fails to be acyclic below it.
        let cert = m.extra_contraction(&ctx, -1, &s).unwrap();
        assert!(cert.complex.homology_dim(1, 0).unwrap() > 0);
    }

    #[test]
    fn weighted_relation_fails_at_level_zero_unless_the_weight_is_one() {
        // Direct check of the boundary phenomenon: δ₁s₀ = [ℓ]·id.
        let ctx = QContext::auto(3).unwrap();
        let m = point_module(ctx.modulus(), 1, 4);
        let ell = 2i64;
        assert_ne!(ctx.qint(ell), 1);
        let delta1 = m
            .differential_matrix(&ctx, &DifferentialSpec::Weighted(ell), 1)
            .unwrap();
        let s0 = FMatrix::identity(1, ctx.modulus());
        let prod = &delta1 * &s0;
        assert_eq!(prod.get(0, 0), ctx.qint(ell));
    }
}
