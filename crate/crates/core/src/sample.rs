//! Seeded random instances for property tests and randomized verifications.
//!
//! Nothing here is rejection-sampled against the mathematical invariants:
//! each generator builds its invariant into the construction — face
//! identities come from tuple deletion, `d^N = 0` comes from expanding a
//! split classical complex, short exact sequences come from an honest
//! subcomplex — and the instance is then disguised by conjugating with
//! random invertible changes of basis, which preserves all of the above.
//! Every generator is deterministic in the seed.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::FMatrix;
use crate::ncomplex::{
    expand_complex, Homotopy, NComplex, NComplexMorphism, ShortExactSequence,
};
use crate::qcalc::QContext;
use crate::simplicial::SimplicialModule;

/// The stream of randomness used by every generator in this module.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A matrix with independent uniform entries.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: u64) -> FMatrix {
    let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    FMatrix::from_fn(rows, cols, p, |i, j| entries[i * cols + j])
}

/// A uniformly random invertible matrix (by retrying until full rank; a
/// uniform matrix over F_p is invertible with probability above 1/4, so the
/// expected number of draws is small).
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize, p: u64) -> FMatrix {
    loop {
        let m = random_matrix(rng, n, n, p);
        if m.rank() == n {
            return m;
        }
    }
}

fn inverse(m: &FMatrix) -> FMatrix {
    m.solve(&FMatrix::identity(m.rows(), m.modulus()))
        .expect("matrix is invertible by construction")
}

/// Replace a complex by an isomorphic copy: `d ↦ G d G⁻¹` degreewise.
/// Returns the twisted complex together with the change-of-basis maps, which
/// form an isomorphism of complexes from the original to the copy.
pub fn conjugated_with_iso(rng: &mut ChaCha8Rng, c: &NComplex) -> (NComplex, Vec<FMatrix>) {
    let p = c.modulus();
    let gs: Vec<FMatrix> = (c.lo()..=c.hi())
        .map(|n| random_invertible(rng, c.dim(n), p))
        .collect();
    let diffs: Vec<FMatrix> = ((c.lo() + 1)..=c.hi())
        .map(|n| {
            let k = (n - c.lo()) as usize;
            &(&gs[k - 1] * &c.diff(n)) * &inverse(&gs[k])
        })
        .collect();
    let dims: Vec<usize> = (c.lo()..=c.hi()).map(|n| c.dim(n)).collect();
    let twisted = NComplex::new(c.context().clone(), c.lo(), dims, diffs)
        .expect("conjugation preserves d^N = 0");
    (twisted, gs)
}

/// An isomorphic random copy of a complex.
pub fn conjugated(rng: &mut ChaCha8Rng, c: &NComplex) -> NComplex {
    conjugated_with_iso(rng, c).0
}

fn monotone_tuples(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let floor = t.last().copied().unwrap_or(0);
            for v in floor..alphabet {
                let mut s = t.clone();
                s.push(v);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// A random semi-simplicial module: the chains of a random collection of
/// monotone vertex tuples closed under deletion (so the face identities hold
/// by construction), conjugated levelwise.  Levels run from 0 to `top` and
/// each level keeps at most `cap` tuples; upper levels may be empty.
pub fn random_semisimplicial(
    rng: &mut ChaCha8Rng,
    p: u64,
    top: usize,
    cap: usize,
) -> SimplicialModule {
    let alphabet = rng.gen_range(1..=3usize);
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(top + 1);
    let mut level0: Vec<Vec<usize>> = (0..alphabet)
        .filter(|_| rng.gen_bool(0.8))
        .map(|v| vec![v])
        .collect();
    if level0.is_empty() {
        level0.push(vec![rng.gen_range(0..alphabet)]);
    }
    level0.truncate(cap);
    levels.push(level0);
    for n in 1..=top {
        let prev: HashMap<&[usize], usize> = levels[n - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i))
            .collect();
        let mut kept: Vec<Vec<usize>> = monotone_tuples(alphabet, n + 1)
            .into_iter()
            .filter(|t| {
                (0..=n).all(|i| {
                    let mut s = t.clone();
                    s.remove(i);
                    prev.contains_key(s.as_slice())
                }) && rng.gen_bool(0.7)
            })
            .collect();
        while kept.len() > cap {
            let drop = rng.gen_range(0..kept.len());
            kept.remove(drop);
        }
        levels.push(kept);
    }

    let dims: Vec<usize> = levels.iter().map(|l| l.len()).collect();
    let mut faces: Vec<Vec<FMatrix>> = vec![Vec::new()];
    for n in 1..=top {
        let prev: HashMap<&[usize], usize> = levels[n - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i))
            .collect();
        let mut fs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut d = FMatrix::zeros(dims[n - 1], dims[n], p);
            for (col, t) in levels[n].iter().enumerate() {
                let mut s = t.clone();
                s.remove(i);
                d.set(prev[s.as_slice()], col, 1);
            }
            fs.push(d);
        }
        faces.push(fs);
    }

    // disguise the 0/1 pattern with a change of basis at every level
    let gs: Vec<FMatrix> = dims.iter().map(|&d| random_invertible(rng, d, p)).collect();
    let inv: Vec<FMatrix> = gs.iter().map(inverse).collect();
    for n in 1..=top {
        for f in &mut faces[n] {
            *f = &(&gs[n - 1] * &*f) * &inv[n];
        }
    }
    SimplicialModule::new(p, dims, faces, None)
        .expect("tuple deletion satisfies the face identities")
}

/// A random classical (order 2) complex built in split form, so its homology
/// is known by construction, then conjugated.  Returns the complex and the
/// homology dimension at each stored degree `lo + i`.  With probability 1/3
/// the planned homology is identically zero, so downstream acyclicity
/// dichotomies get exercised from both sides.
pub fn random_split_classical(
    rng: &mut ChaCha8Rng,
    p: u64,
    lo: i64,
    len: usize,
    max_rank: usize,
    max_h: usize,
) -> (NComplex, Vec<usize>) {
    assert!(len >= 2, "need at least two degrees");
    let ctx2 = QContext::new(2, p, p - 1).expect("q = -1 always gives an order-2 context");
    let acyclic = rng.gen_bool(1.0 / 3.0);
    let h: Vec<usize> = (0..len)
        .map(|_| if acyclic { 0 } else { rng.gen_range(0..=max_h) })
        .collect();
    // r[i] is the rank of the differential out of degree lo + i
    let mut r = vec![0usize; len + 1];
    for ri in r.iter_mut().take(len).skip(1) {
        *ri = rng.gen_range(0..=max_rank);
    }
    // degree lo+i splits as (boundaries from above | homology | lifts below)
    let dims: Vec<usize> = (0..len).map(|i| r[i + 1] + h[i] + r[i]).collect();
    let diffs: Vec<FMatrix> = (1..len)
        .map(|i| {
            FMatrix::from_fn(dims[i - 1], dims[i], p, |row, col| {
                let lift_start = r[i + 1] + h[i];
                u64::from(row < r[i] && col >= lift_start && col - lift_start == row)
            })
        })
        .collect();
    let c = NComplex::new(ctx2, lo, dims, diffs).expect("split complexes satisfy d^2 = 0");
    (conjugated(rng, &c), h)
}

/// A random N-complex in the given context: expansion of a random split
/// classical complex, conjugated.  `d^N = 0` holds by construction.
pub fn random_ncomplex(
    rng: &mut ChaCha8Rng,
    ctx: &QContext,
    classical_len: usize,
    max_rank: usize,
    max_h: usize,
) -> NComplex {
    let lo = rng.gen_range(-1..=1);
    let (q, _) = random_split_classical(rng, ctx.modulus(), lo, classical_len, max_rank, max_h);
    let e = expand_complex(&q, ctx).expect("expansion of a classical complex");
    conjugated(rng, &e)
}

/// A random short exact sequence of N-complexes: the middle term is a random
/// complex, the subcomplex is `ker(d^j)` for a random `1 ≤ j < N` (stable
/// under `d`, since `d^j(dx) = d(d^j x)`), and the quotient is taken along
/// the canonical complement of the kernel's echelon basis.
pub fn random_ses(
    rng: &mut ChaCha8Rng,
    ctx: &QContext,
    classical_len: usize,
    max_rank: usize,
    max_h: usize,
) -> ShortExactSequence {
    let mid = random_ncomplex(rng, ctx, classical_len, max_rank, max_h);
    let p = mid.modulus();
    let j = rng.gen_range(1..ctx.order());
    let window: Vec<i64> = (mid.lo()..=mid.hi()).collect();

    let kernels: Vec<FMatrix> = window
        .iter()
        .map(|&n| mid.diff_power(n, j).kernel().basis().clone())
        .collect();
    // pivot row of each echelon basis column, and the complementary rows
    let pivots: Vec<Vec<usize>> = kernels
        .iter()
        .map(|k| {
            (0..k.cols())
                .map(|c| (0..k.rows()).find(|&r| k.get(r, c) != 0).expect("echelon"))
                .collect()
        })
        .collect();
    let complements: Vec<Vec<usize>> = kernels
        .iter()
        .zip(&pivots)
        .map(|(k, piv)| (0..k.rows()).filter(|r| !piv.contains(r)).collect())
        .collect();

    let sub_dims: Vec<usize> = kernels.iter().map(|k| k.cols()).collect();
    let sub_diffs: Vec<FMatrix> = (1..window.len())
        .map(|i| {
            let rhs = &mid.diff(window[i]) * &kernels[i];
            kernels[i - 1]
                .solve(&rhs)
                .expect("kernel of d^j is stable under d")
        })
        .collect();
    let sub = NComplex::new(mid.context().clone(), mid.lo(), sub_dims, sub_diffs)
        .expect("restriction of a nilpotent differential");

    // projection onto complement coordinates along the kernel
    let projections: Vec<FMatrix> = (0..window.len())
        .map(|i| {
            let (k, piv, comp) = (&kernels[i], &pivots[i], &complements[i]);
            FMatrix::from_fn(comp.len(), k.rows(), p, |qi, t| {
                let direct = u64::from(comp[qi] == t);
                match piv.iter().position(|&pv| pv == t) {
                    Some(col) => (direct + p - k.get(comp[qi], col)) % p,
                    None => direct,
                }
            })
        })
        .collect();
    let quo_dims: Vec<usize> = complements.iter().map(|c| c.len()).collect();
    let quo_diffs: Vec<FMatrix> = (1..window.len())
        .map(|i| {
            let include = FMatrix::from_fn(kernels[i].rows(), quo_dims[i], p, |r, c| {
                u64::from(complements[i][c] == r)
            });
            &(&projections[i - 1] * &mid.diff(window[i])) * &include
        })
        .collect();
    let quo = NComplex::new(mid.context().clone(), mid.lo(), quo_dims, quo_diffs)
        .expect("induced differential on the quotient");

    let inj = NComplexMorphism::new(&sub, &mid, kernels).expect("kernel inclusion is a chain map");
    let surj =
        NComplexMorphism::new(&mid, &quo, projections).expect("projection is a chain map");
    ShortExactSequence::new(inj, surj).expect("kernel/complement construction is exact")
}

/// The degree-n value of the standard combination Σᵢ d'^{N−1−i} h d^i.
fn combination(h: &Homotopy, source: &NComplex, target: &NComplex, n: i64) -> FMatrix {
    let order = source.order();
    let mut acc = FMatrix::zeros(target.dim(n), source.dim(n), source.modulus());
    for i in 0..order {
        let din = source.diff_power(n, i);
        let hmid = h.map(n - i as i64, source, target);
        let dout = target.diff_power(n - i as i64 + order as i64 - 1, order - 1 - i);
        acc = acc + &(&dout * &hmid) * &din;
    }
    acc
}

/// A homotopic pair: an isomorphism f onto a conjugated copy, a random
/// homotopy h, and g = f − Σᵢ d'^{N−1−i} h d^i.  The combination is always a
/// chain map (its commutator with d telescopes to d'^N h − h d^N = 0), so g
/// is one too, and h witnesses f ≃ g by construction.
pub fn random_homotopy_pair(
    rng: &mut ChaCha8Rng,
    c: &NComplex,
) -> (NComplexMorphism, NComplexMorphism, Homotopy) {
    let p = c.modulus();
    let step = c.order() as i64 - 1;
    let (target, gs) = conjugated_with_iso(rng, c);
    let f = NComplexMorphism::new(c, &target, gs).expect("conjugation maps form an isomorphism");
    let maps: Vec<FMatrix> = (c.lo()..=c.hi())
        .map(|n| random_matrix(rng, target.dim(n + step), c.dim(n), p))
        .collect();
    let h = Homotopy::new(c.lo(), maps);
    let g_maps: Vec<FMatrix> = (c.lo()..=c.hi())
        .map(|n| f.map(n).clone() - combination(&h, c, &target, n))
        .collect();
    let g = NComplexMorphism::new(c, &target, g_maps)
        .expect("a null-homotopic shift of a chain map is a chain map");
    (f, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncomplex::{check_homotopy, contract_complex, induced_equal};
    use crate::simplicial::DifferentialSpec;

    #[test]
    fn semisimplicial_generators_validate_and_deform_nilpotently() {
        for seed in 0..10 {
            let mut rng = seeded(seed);
            let sm = random_semisimplicial(&mut rng, 7, 5, 4);
            let ctx = QContext::auto(3).unwrap();
            for spec in [
                DifferentialSpec::Full,
                DifferentialSpec::Truncated,
                DifferentialSpec::Weighted(-1),
                DifferentialSpec::Weighted(2),
            ] {
                // construction validates d^N = 0 internally
                sm.q_differential(&ctx, &spec).unwrap();
            }
            let sm11 = random_semisimplicial(&mut rng, 11, 5, 4);
            let ctx5 = QContext::auto(5).unwrap();
            sm11.q_differential(&ctx5, &DifferentialSpec::Full).unwrap();
        }
    }

    #[test]
    fn split_classical_complexes_carry_their_planned_homology() {
        for seed in 0..10 {
            let mut rng = seeded(seed);
            let (c, h) = random_split_classical(&mut rng, 5, -1, 6, 2, 2);
            for (i, &want) in h.iter().enumerate() {
                let n = c.lo() + i as i64;
                if n > c.lo() && n < c.hi() {
                    assert_eq!(c.homology_dim(1, n).unwrap(), want, "degree {n}");
                }
            }
        }
    }

    #[test]
    fn expansion_then_contraction_preserves_classical_homology() {
        let ctx = QContext::auto(3).unwrap();
        for seed in 0..6 {
            let mut rng = seeded(seed);
            let (q, _) = random_split_classical(&mut rng, 7, 0, 5, 2, 2);
            let e = conjugated(&mut rng, &expand_complex(&q, &ctx).unwrap());
            for p in 1..3 {
                let back = contract_complex(&e, p).unwrap();
                for m in (q.lo() + 1)..q.hi() {
                    assert_eq!(
                        back.homology_dim(1, m).unwrap(),
                        q.homology_dim(1, m).unwrap(),
                        "flavour {p} node {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn random_short_exact_sequences_validate_and_their_sequences_are_exact() {
        let ctx = QContext::auto(4).unwrap();
        for seed in 0..4 {
            let mut rng = seeded(seed);
            let ses = random_ses(&mut rng, &ctx, 5, 2, 1);
            let outcome = ses.les_check().unwrap();
            assert!(outcome.pass(), "failures: {:?}", outcome.failures);
            assert!(outcome.nodes_checked > 0);
        }
    }

    #[test]
    fn homotopy_pairs_certify_and_induce_equal_maps() {
        let ctx = QContext::auto(3).unwrap();
        for seed in 0..4 {
            let mut rng = seeded(seed);
            let c = random_ncomplex(&mut rng, &ctx, 5, 2, 2);
            let (f, g, h) = random_homotopy_pair(&mut rng, &c);
            assert!(check_homotopy(&f, &g, &h).unwrap());
            assert!(induced_equal(&f, &g).unwrap());
        }
    }

    #[test]
    fn generators_are_deterministic_in_the_seed() {
        let ctx = QContext::auto(3).unwrap();
        let a = random_ncomplex(&mut seeded(42), &ctx, 5, 2, 2);
        let b = random_ncomplex(&mut seeded(42), &ctx, 5, 2, 2);
        assert_eq!(a, b);
        let c = random_ncomplex(&mut seeded(43), &ctx, 5, 2, 2);
        assert!(a != c, "different seeds should give different instances");
    }
}
