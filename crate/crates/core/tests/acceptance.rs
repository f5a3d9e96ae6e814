//! The acceptance gate: eleven end-to-end checks, run serially, each
//! printing one machine-greppable line.  The binary exits nonzero if any
//! criterion fails, so `cargo test` treats the gate as a single target.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;

use nhom_core::ncomplex::hexagon_check;
use nhom_core::{
    ext_reindexing_check, hochschild_simplicial, hom_over_algebra, identify_tor, pext, ptor,
    random_ncomplex, random_semisimplicial, random_ses, reindexing_check, seeded,
    tensor_over_algebra, tor_reindexing_check, verify_geometric_derivatives, verify_operator_sums,
    DifferentialSpec, FDModule, FMatrix, FinDimAlgebra, NComplex, QContext,
    ShortExactSequence, Side, SimplicialModule,
};

/// (criterion number, label, wall-clock budget in seconds; no budget = 0).
type Criterion = (u32, &'static str, f64, fn());

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "reindexing for F_7[x]/(x^2), N=3, q=2, n_max=8", 10.0, criterion_01),
        (2, "reindexing for F_3[x]/(x^2), N=3, q=1, n_max=8", 10.0, criterion_02),
        (3, "reindexing for F_7[x]/(x^3), N=3, q=2, n_max=5", 60.0, criterion_03),
        (4, "operator sums collapse for N=2..6", 5.0, criterion_04),
        (5, "geometric-sum derivatives and evaluations for N=2..6", 1.0, criterion_05),
        (6, "nilpotency of weighted differentials + closed power form", 30.0, criterion_06),
        (7, "bar contraction relation and certified acyclicity", 10.0, criterion_07),
        (8, "hexagons and long exact sequences on random instances", 30.0, criterion_08),
        (9, "bar resolution collapses onto the deformed complex", 10.0, criterion_09),
        (10, "module reindexing with tensor/hom anchor cells", 30.0, criterion_10),
        (11, "one-flavour acyclicity is all-flavour acyclicity", 0.0, criterion_11),
    ];
    let mut failed = 0;
    for (id, label, budget, run) in criteria {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let dt = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) if budget == 0.0 => {
                println!("[acceptance] criterion {id:02} ({label}): PASS ({dt:.2}s)");
            }
            Ok(()) if dt < budget => {
                println!(
                    "[acceptance] criterion {id:02} ({label}): PASS ({dt:.2}s, budget {budget}s)"
                );
            }
            Ok(()) => {
                failed += 1;
                println!(
                    "[acceptance] criterion {id:02} ({label}): FAIL \
                     (over budget: {dt:.2}s >= {budget}s)"
                );
            }
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| e.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                println!("[acceptance] criterion {id:02} ({label}): FAIL ({msg})");
            }
        }
    }
    if failed > 0 {
        eprintln!("[acceptance] {failed} criterion(s) failed");
        std::process::exit(1);
    }
}

fn assert_reindexing(algebra: &FinDimAlgebra, ctx: &QContext, n_max: usize) {
    let rep = reindexing_check(algebra, ctx, n_max).unwrap();
    assert!(
        rep.pass(),
        "{} reindexing failures out of {} cells",
        rep.failures(),
        rep.cells.len()
    );
    for p in 1..ctx.order() {
        assert!(
            rep.cells.iter().any(|c| c.flavour == p),
            "no safe cells for flavour {p}"
        );
    }
}

fn criterion_01() {
    let ctx = QContext::new(3, 7, 2).unwrap();
    assert_reindexing(&FinDimAlgebra::dual_numbers(7), &ctx, 8);
}

fn criterion_02() {
    let ctx = QContext::new(3, 3, 1).unwrap();
    assert_reindexing(&FinDimAlgebra::dual_numbers(3), &ctx, 8);
}

fn criterion_03() {
    let ctx = QContext::new(3, 7, 2).unwrap();
    assert_reindexing(&FinDimAlgebra::truncated_polynomials(7, 3), &ctx, 5);
}

fn criterion_04() {
    for order in 2..=6 {
        let ctx = QContext::auto(order).unwrap();
        let r = verify_operator_sums(&ctx);
        assert!(r.first_ok && r.second_ok, "N={order}");
        assert!(r.twist_ok, "N={order} twist");
    }
}

fn criterion_05() {
    for order in 2..=6 {
        let ctx = QContext::auto(order).unwrap();
        let r = verify_geometric_derivatives(&ctx);
        assert!(r.division_ok, "N={order} division");
        assert!(r.evaluation_consistent, "N={order} evaluation");
        assert!(r.vanishing_ok, "N={order} vanishing below the top order");
        assert!(r.top_value_ok, "N={order} top value");
        assert!(r.orders_checked >= order, "N={order} coverage");
    }
}

/// The 200 seeded simplicial modules of criterion 6, cycling through the
/// orders so each N gets 50 instances.
fn criterion_06_modules() -> Vec<(QContext, SimplicialModule)> {
    let mut rng = seeded(0xAC06);
    (0..200)
        .map(|i| {
            let order = [2u32, 3, 4, 5][i % 4];
            let ctx = QContext::auto(order).unwrap();
            let sm = random_semisimplicial(&mut rng, ctx.modulus(), 5, 4);
            (ctx, sm)
        })
        .collect()
}

fn weights_for(order: u32) -> [i64; 5] {
    [-1, 0, 1, 2, order as i64 + 1]
}

fn criterion_06() {
    let modules = criterion_06_modules();
    assert_eq!(modules.len(), 200);
    for (ctx, sm) in &modules {
        assert!(sm.top() <= 5, "levels stay small");
        assert!(sm.dims().iter().all(|&d| d <= 4), "dims stay small");
        for ell in weights_for(ctx.order()) {
            // Construction validates the N-th power of the differential,
            // but assert the vanishing explicitly at the top level too.
            let c = sm
                .q_differential(ctx, &DifferentialSpec::Weighted(ell))
                .unwrap_or_else(|e| panic!("weight {ell}: {e}"));
            let top = sm.top() as i64;
            let power = c.diff_power(top, ctx.order());
            assert_eq!(
                power,
                FMatrix::zeros(power.rows(), power.cols(), ctx.modulus()),
                "weight {ell}: N-th power at the top level"
            );
        }
    }

    // The closed expansion of the N-th power of the general differential
    // agrees with composing the single-step matrices, for 50 seeded
    // coefficient sequences (no nilpotency available here: the composite is
    // assembled by hand).
    let mut rng = seeded(0xAC53);
    for i in 0..50usize {
        let order = [2u32, 3, 4, 5][i % 4];
        let ctx = QContext::auto(order).unwrap();
        let sm = random_semisimplicial(&mut rng, ctx.modulus(), 5, 4);
        let a: Vec<u64> = (0..sm.top())
            .map(|_| rng.gen_range(0..ctx.modulus()))
            .collect();
        let spec = DifferentialSpec::General(a.clone());
        for n in (order as usize)..=sm.top() {
            let mut direct = FMatrix::identity(sm.dims()[n], ctx.modulus());
            for k in 0..order as usize {
                direct = &sm.differential_matrix(&ctx, &spec, n - k).unwrap() * &direct;
            }
            let closed = sm.power_closed_form(&ctx, &a, n).unwrap();
            assert_eq!(direct, closed, "sequence {i}, level {n}");
        }
    }
}

fn criterion_07_certificate() -> nhom_core::ContractionCertificate {
    let ctx = QContext::new(3, 7, 2).unwrap();
    let sm = hochschild_simplicial(&FinDimAlgebra::dual_numbers(7), 6).unwrap();
    sm.sigma_contraction(&ctx).unwrap()
}

fn criterion_07() {
    let cert = criterion_07_certificate();
    assert!(cert.relation_ok, "one-step commutation with the differential");
    assert!(cert.identity_ok, "N-term homotopy identity");
    for p in 1..3 {
        let (lo, hi) = cert.complex.safe_window(p);
        assert!(lo <= hi, "safe window is nonempty");
        assert!(
            cert.complex.is_acyclic(p).unwrap(),
            "flavour {p} homology vanishes"
        );
    }
}

/// Criterion 8's random instances: 50 complexes and 50 short exact
/// sequences, built by expansion + perturbation.  The two orders share the
/// load; no deformation parameter exists for N = 3 over F_5 (no q has
/// [3] = 0 there), so that order runs over F_7 and N = 4 takes F_5.
fn criterion_08_instances() -> (Vec<NComplex>, Vec<ShortExactSequence>) {
    let mut rng = seeded(0xAC08);
    let mut complexes = Vec::new();
    let mut sequences = Vec::new();
    for (order, p, q) in [(3u32, 7u64, 2u64), (4, 5, 2)] {
        let ctx = QContext::new(order, p, q).unwrap();
        for _ in 0..25 {
            complexes.push(random_ncomplex(&mut rng, &ctx, 5, 2, 2));
        }
        for _ in 0..25 {
            sequences.push(random_ses(&mut rng, &ctx, 4, 2, 1));
        }
    }
    (complexes, sequences)
}

fn criterion_08() {
    let (complexes, sequences) = criterion_08_instances();
    assert_eq!(complexes.len(), 50);
    assert_eq!(sequences.len(), 50);
    for (i, c) in complexes.iter().enumerate() {
        let out = hexagon_check(c);
        assert!(out.nodes_checked > 0, "instance {i} has nodes");
        assert!(out.pass(), "instance {i}: {:?}", out.failures);
    }
    for (i, ses) in sequences.iter().enumerate() {
        let out = ses.les_check().unwrap();
        assert!(out.nodes_checked > 0, "sequence {i} has nodes");
        assert!(out.pass(), "sequence {i}: {:?}", out.failures);
    }
}

fn criterion_09() {
    let ctx = QContext::new(3, 7, 2).unwrap();
    let rep = identify_tor(&FinDimAlgebra::dual_numbers(7), &ctx, 5).unwrap();
    assert!(rep.levels_checked > 0);
    assert!(rep.relation_rank_ok, "balancing relations have full rank");
    assert!(rep.relations_killed, "collapse kills the relations");
    assert!(rep.surjective, "collapse is onto");
    assert!(rep.intertwines, "differential matrices agree");
    assert!(rep.pass());
}

fn criterion_10() {
    let ctx = QContext::new(3, 7, 2).unwrap();
    let a = FinDimAlgebra::dual_numbers(7);
    let m_right = FDModule::character(&a, Side::Right, &[1, 0]).unwrap();
    let m_left = FDModule::character(&a, Side::Left, &[1, 0]).unwrap();
    let n_left = FDModule::character(&a, Side::Left, &[1, 0]).unwrap();

    let tor = tor_reindexing_check(&m_right, &n_left, &ctx, 6).unwrap();
    assert!(tor.pass(), "{} torsion cells failed", tor.failures());
    assert!(!tor.cells.is_empty());
    let ext = ext_reindexing_check(&m_left, &n_left, &ctx, 6).unwrap();
    assert!(ext.pass(), "{} extension cells failed", ext.failures());
    assert!(!ext.cells.is_empty());

    // Anchor cells: the bottom flavoured groups are the plain tensor
    // product and homomorphism spaces.
    let t0 = tensor_over_algebra(&m_right, &n_left).unwrap();
    let h0 = hom_over_algebra(&m_left, &n_left).unwrap();
    assert_eq!(t0, 1);
    assert_eq!(h0, 1);
    for p in 1..3u32 {
        assert_eq!(
            ptor(&m_right, &n_left, &ctx, p, p as i64 - 1).unwrap(),
            t0,
            "torsion anchor at flavour {p}"
        );
        assert_eq!(
            pext(&m_left, &n_left, &ctx, p, 2 - p as i64).unwrap(),
            h0,
            "extension anchor at flavour {p}"
        );
    }
}

fn criterion_11() {
    let mut checked = 0usize;
    let mut acyclic = 0usize;
    let mut verify = |c: &NComplex| {
        assert!(
            c.kapranov_check().unwrap(),
            "flavour acyclicities disagree on a complex with window [{}, {}]",
            c.lo(),
            c.hi()
        );
        checked += 1;
        if c.is_acyclic(1).unwrap() {
            acyclic += 1;
        }
    };
    for (ctx, sm) in &criterion_06_modules() {
        for ell in weights_for(ctx.order()) {
            verify(&sm.q_differential(ctx, &DifferentialSpec::Weighted(ell)).unwrap());
        }
    }
    verify(&criterion_07_certificate().complex);
    let (complexes, sequences) = criterion_08_instances();
    for c in &complexes {
        verify(c);
    }
    for ses in &sequences {
        verify(ses.sub());
        verify(ses.mid());
        verify(ses.quotient());
    }
    assert!(checked > 1200, "instance census");
    assert!(acyclic > 0, "the equivalence is witnessed on both sides");
    assert!(acyclic < checked, "some instances have homology");
}
