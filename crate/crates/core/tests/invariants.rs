//! Seed-driven property tests for the structural laws the library promises:
//! canonical linear algebra, nilpotency of every deformed differential,
//! homotopy invariance of induced maps, exactness of the connecting
//! machinery, the acyclicity dichotomy, classical reindexing under
//! expansion, normal forms in the deformed plane, and bit-exact document
//! round-trips.

use nhom_core::ncomplex::{
    check_homotopy, contract_complex, expand_complex, hexagon_check, induced_equal,
};
use nhom_core::{
    check_leibniz, conjugated, random_homotopy_pair, random_ncomplex, random_semisimplicial,
    random_ses, random_split_classical, schema, seeded, DifferentialSpec, DqElement, DqParams,
    QContext, QPolynomial,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// One of the frozen contexts, picked by index so proptest can shrink it.
fn auto_ctx(sel: usize) -> QContext {
    QContext::auto([2, 3, 4, 5][sel % 4]).expect("frozen contexts validate")
}

/// A random element of the deformed plane: a short sum of monomials.
fn random_dq(rng: &mut ChaCha8Rng, params: DqParams) -> DqElement {
    let mut e = DqElement::zero(params);
    for _ in 0..rng.gen_range(0..5) {
        let (k, l) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let c = rng.gen_range(0..params.modulus());
        e = e.add(&DqElement::monomial(params, k, l, c));
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Kernel bases ignore row operations and image bases ignore column
    /// operations: the stored representatives depend only on the subspace.
    #[test]
    fn kernel_and_image_bases_do_not_depend_on_the_presentation(
        seed in any::<u64>(),
        rows in 0usize..5,
        cols in 0usize..5,
    ) {
        let p = 7;
        let mut rng = seeded(seed);
        let m = nhom_core::sample::random_matrix(&mut rng, rows, cols, p);
        let u = nhom_core::sample::random_invertible(&mut rng, rows, p);
        let v = nhom_core::sample::random_invertible(&mut rng, cols, p);
        let (row_ops, plain_kernel) = ((&u * &m).kernel(), m.kernel());
        let (col_ops, plain_image) = ((&m * &v).image(), m.image());
        prop_assert_eq!(row_ops.basis(), plain_kernel.basis());
        prop_assert_eq!(col_ops.basis(), plain_image.basis());
    }

    /// q-integers obey the addition law [m+n] = [m] + q^m [n] and are
    /// N-periodic once [N] = 0.
    #[test]
    fn q_integers_satisfy_the_addition_law_and_are_periodic(
        sel in 0usize..4,
        m in 0i64..12,
        n in -6i64..12,
    ) {
        let ctx = auto_ctx(sel);
        let p = ctx.modulus();
        let rhs = (ctx.qint(m) + ctx.qpow(m) * ctx.qint(n)) % p;
        prop_assert_eq!(ctx.qint(m + n), rhs);
        prop_assert_eq!(ctx.qint(n + ctx.order() as i64), ctx.qint(n));
    }

    /// Homology dimensions are invariants of the isomorphism class: a
    /// levelwise change of basis leaves the whole table untouched.
    #[test]
    fn homology_tables_are_invariant_under_basis_change(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let c = random_ncomplex(&mut rng, &ctx, 4, 2, 2);
        let t = conjugated(&mut rng, &c);
        prop_assert_eq!(c.homology_table(), t.homology_table());
    }

    /// Every built-in differential variant on a random semisimplicial
    /// module has vanishing N-th power.
    #[test]
    fn every_differential_variant_is_nilpotent(
        seed in any::<u64>(),
        sel in 0usize..4,
        ell in -2i64..=7,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let sm = random_semisimplicial(&mut rng, ctx.modulus(), 4, 3);
        for spec in [
            DifferentialSpec::Full,
            DifferentialSpec::Truncated,
            DifferentialSpec::Weighted(ell),
        ] {
            // construction re-validates d^N = 0 internally
            let c = sm.q_differential(&ctx, &spec).unwrap();
            let top = sm.top() as i64;
            prop_assert_eq!(c.diff_power(top, ctx.order()).rank(), 0);
        }
    }

    /// Weight 1 and an all-ones coefficient sequence both reproduce the
    /// truncated differential exactly, level by level.
    #[test]
    fn weight_one_and_unit_coefficients_recover_truncation(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let sm = random_semisimplicial(&mut rng, ctx.modulus(), 4, 3);
        let ones = DifferentialSpec::General(vec![1; sm.top()]);
        for n in 1..=sm.top() {
            let truncated = sm
                .differential_matrix(&ctx, &DifferentialSpec::Truncated, n)
                .unwrap();
            let weighted = sm
                .differential_matrix(&ctx, &DifferentialSpec::Weighted(1), n)
                .unwrap();
            let general = sm.differential_matrix(&ctx, &ones, n).unwrap();
            prop_assert_eq!(weighted, truncated.clone());
            prop_assert_eq!(general, truncated);
        }
    }

    /// A homotopy witness makes its two chain maps agree on every safe
    /// homology cell.
    #[test]
    fn homotopic_chain_maps_agree_on_homology(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let c = random_ncomplex(&mut rng, &ctx, 4, 2, 2);
        let (f, g, h) = random_homotopy_pair(&mut rng, &c);
        prop_assert!(check_homotopy(&f, &g, &h).unwrap());
        prop_assert!(induced_equal(&f, &g).unwrap());
    }

    /// Short exact sequences induce exact long sequences, and every
    /// complex has exact internal hexagons.
    #[test]
    fn connecting_machinery_is_exact(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let ses = random_ses(&mut rng, &ctx, 4, 2, 1);
        let les = ses.les_check().unwrap();
        prop_assert!(les.pass(), "long-sequence failures: {:?}", les.failures);
        prop_assert!(les.nodes_checked > 0);
        let hex = hexagon_check(ses.mid());
        prop_assert!(hex.pass(), "hexagon failures: {:?}", hex.failures);
    }

    /// Acyclicity for one flavour is equivalent to acyclicity for all of
    /// them, on every random instance.
    #[test]
    fn acyclicity_is_a_single_dichotomy_across_flavours(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let c = random_ncomplex(&mut rng, &ctx, 4, 2, 2);
        prop_assert!(c.kapranov_check().unwrap());
    }

    /// Expanding a classical complex and contracting back along any
    /// flavour returns the original homology at every interior degree.
    #[test]
    fn expansion_then_contraction_returns_classical_homology(
        seed in any::<u64>(),
        sel in 0usize..4,
        lo in -2i64..=2,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let (q, _) = random_split_classical(&mut rng, ctx.modulus(), lo, 4, 2, 2);
        let e = conjugated(&mut rng, &expand_complex(&q, &ctx).unwrap());
        for p in 1..ctx.order() {
            let back = contract_complex(&e, p).unwrap();
            for m in (q.lo() + 1)..q.hi() {
                prop_assert_eq!(
                    back.homology_dim(1, m).unwrap(),
                    q.homology_dim(1, m).unwrap(),
                    "flavour {} degree {}", p, m
                );
            }
        }
    }

    /// Serialized documents parse back to the same object and re-serialize
    /// to the identical byte string.
    #[test]
    fn documents_round_trip_bit_exactly(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let mut rng = seeded(seed);
        let c = random_ncomplex(&mut rng, &ctx, 4, 2, 2);
        let json = schema::ncomplex_to_json(&c);
        let back = schema::ncomplex_from_json(&json).unwrap();
        prop_assert_eq!(back.dims(), c.dims());
        prop_assert_eq!(schema::ncomplex_to_json(&back), json);

        let sm = random_semisimplicial(&mut rng, ctx.modulus(), 3, 3);
        let sj = schema::simplicial_to_json(&sm);
        let sback = schema::simplicial_from_json(&sj).unwrap();
        prop_assert_eq!(schema::simplicial_to_json(&sback), sj);
    }

    /// Products in the deformed plane stay in normal form (no zero
    /// coefficients, entries reduced) and the ring laws hold.
    #[test]
    fn deformed_plane_arithmetic_stays_in_normal_form(
        seed in any::<u64>(),
    ) {
        let params = DqParams::new(7, 3).unwrap();
        let mut rng = seeded(seed);
        let a = random_dq(&mut rng, params);
        let b = random_dq(&mut rng, params);
        let c = random_dq(&mut rng, params);
        prop_assert!(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        for (_, _, coeff) in a.mul(&b).add(&c).terms() {
            prop_assert!(coeff != 0 && coeff < params.modulus());
        }
    }

    /// Polynomial coefficient vectors are trimmed (representation is
    /// unique) and the twisted Leibniz rule holds for the q-derivative.
    #[test]
    fn q_polynomials_trim_and_obey_the_leibniz_rule(
        seed in any::<u64>(),
        sel in 0usize..4,
    ) {
        let ctx = auto_ctx(sel);
        let params = DqParams::from_context(&ctx);
        let mut rng = seeded(seed);
        let coeffs: Vec<u64> = (0..rng.gen_range(0..6))
            .map(|_| rng.gen_range(0..ctx.modulus()))
            .collect();
        let f = QPolynomial::new(params, &coeffs);
        if let Some(d) = f.degree() {
            prop_assert!(f.coeff(d) != 0);
        }
        let mut padded = coeffs.clone();
        padded.extend([0, 0]);
        prop_assert!(f == QPolynomial::new(params, &padded));
        prop_assert!(f.sub(&f).is_zero());

        let other: Vec<u64> = (0..rng.gen_range(0..6))
            .map(|_| rng.gen_range(0..ctx.modulus()))
            .collect();
        let g = QPolynomial::new(params, &other);
        prop_assert!(check_leibniz(&f, &g));
    }
}
