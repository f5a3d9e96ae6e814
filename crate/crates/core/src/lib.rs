//! Exact homological algebra for N-complexes over prime fields.
//!
//! An N-complex is a graded vector space with a degree −1 endomorphism `d`
//! satisfying `d^N = 0` instead of `d^2 = 0`.  Over a field F_p containing a
//! primitive N-th root of unity q, such complexes carry N−1 homology flavours
//!
//! ```text
//!   pH_n(C) = Ker(d^p : C_n → C_{n−p}) / Im(d^{N−p} : C_{n+N−p} → C_n)
//! ```
//!
//! for 1 ≤ p ≤ N−1.  This crate computes these groups exactly (no floating
//! point anywhere), builds the q-deformed Hochschild N-complex of a finite
//! dimensional algebra, and cross-checks the reindexing of N-homology against
//! independently computed classical homology.
//!
//! Module map:
//! * [`qcalc`] — q-integers, q-factorials, q-binomials, field contexts.
//! * [`linalg`] — dense exact linear algebra over F_p with canonical bases.
//! * [`ncomplex`] — N-complexes, homology, long exact sequences, resolutions.
//! * [`simplicial`] — simplicial modules and their q-differentials.
//! * [`dqalg`] — the quantum Weyl algebra YX − qXY = 1 and q-derivatives.
//! * [`hochschild`] — Hochschild N-complexes of finite dimensional algebras.
//! * [`derived`] — relative Tor/Ext of modules via bar N-resolutions.
//! * [`schema`] — versioned JSON serialization of the core types.
//! * [`sample`] — seeded random instances for property and CLI checks.

pub mod dqalg;
pub mod derived;
pub mod hochschild;
pub mod linalg;
pub mod ncomplex;
pub mod qcalc;
pub mod sample;
pub mod schema;
pub mod simplicial;

pub use derived::{
    ext_reindexing_check, hom_complex, hom_over_algebra, pext, ptor, relative_bar_resolution,
    tensor_over_algebra, tor_complex, tor_les_check, tor_reindexing_check, tor_symmetry_check,
    two_sided_bar, DerivedError, FDModule, ModuleResolution, ModuleSES, Side, TorLesReport,
    TorSymmetryReport,
};
pub use linalg::{FMatrix, Subspace};
pub use ncomplex::{
    ComplexError, Homotopy, NComplex, NComplexMorphism, NResolution, ShortExactSequence,
};
pub use dqalg::{
    check_commutation, check_leibniz, verify_geometric_derivatives, verify_operator_sums,
    CommutationReport, DqElement, DqParams, GeometricDerivativeReport, OperatorSumReport,
    QPolynomial,
};
pub use hochschild::{
    classical_hochschild_dims, hochschild_ncomplex, hochschild_simplicial, identify_tor,
    reindexing_check, CellComparison, FinDimAlgebra, HochschildError, ReindexingReport,
    TorIdentificationReport,
};
pub use qcalc::QContext;
pub use sample::{
    conjugated, random_homotopy_pair, random_ncomplex, random_semisimplicial, random_ses,
    random_split_classical, seeded,
};
pub use simplicial::{
    ContractionCertificate, DifferentialSpec, SimplicialError, SimplicialModule,
};
