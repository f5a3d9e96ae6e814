//! q-integer arithmetic over prime fields.
//!
//! For a scalar q the q-integer of n is `[n] = (q^n − 1)/(q − 1)` when q ≠ 1
//! and `[n] = n` when q = 1.  All constructions downstream fix an order N ≥ 2
//! and work over F_p under two hypotheses:
//!
//! * (H0) `[N] = 0`, i.e. q is an N-th root of unity ≠ 1, or q = 1 and p | N;
//! * (H1) additionally `[i] ≠ 0` for 0 < i < N, i.e. q has exact order N,
//!   or q = 1 and N = p.
//!
//! q-factorials are `[r]! = [1][2]⋯[r]` and the q-binomial `(r, s)` is
//! `[r+s]!/([r]![s]!)`, defined here only for 0 ≤ r, s ≤ N−1 where the
//! denominator is invertible under (H1).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from context construction and q-scalar evaluation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum QcalcError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q must lie in [0, p); got q = {q}, p = {p}")]
    ScalarOutOfField { q: u64, p: u64 },
    #[error("order must satisfy N >= 2; got {0}")]
    OrderTooSmall(u32),
    #[error("[N] != 0 in F_{p} for N = {n}, q = {q}: hypothesis H0 fails")]
    H0Violated { n: u32, p: u64, q: u64 },
    #[error("operation requires hypothesis H1 (q of exact order N) but the context only satisfies H0")]
    H1Required,
    #[error("q-binomial ({r}, {s}) is undefined: arguments must lie in [0, {max}]")]
    QbinomOutOfRange { r: u32, s: u32, max: u32 },
}

/// Which of the two root-of-unity hypotheses a context satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypothesisLevel {
    /// `[N] = 0` only; some `[i]` with 0 < i < N may vanish.
    H0,
    /// `[N] = 0` and `[i]` invertible for all 0 < i < N.
    H1,
}

/// A triple (N, p, q) with q ∈ F_p an N-th root of unity, plus the verified
/// hypothesis level.  All q-scalar arithmetic happens through a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QContext {
    n: u32,
    p: u64,
    q: u64,
    level: HypothesisLevel,
}

/// Deterministic primality test by trial division; p here is always small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// a + b mod m.
#[inline]
pub fn addm(a: u64, b: u64, m: u64) -> u64 {
    (a + b) % m
}

/// a − b mod m.
#[inline]
pub fn subm(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

/// a · b mod m (via u128, so any m < 2^64 is safe).
#[inline]
pub fn mulm(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by binary exponentiation.
pub fn powm(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, m);
        }
        a = mulm(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod p for prime p and a ≠ 0 (Fermat).
#[inline]
pub fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverse of zero mod {p}");
    powm(a, p - 2, p)
}

/// Canonical representative of a signed integer mod m.
#[inline]
pub fn reduce_signed(v: i64, m: u64) -> u64 {
    let m_i = m as i64;
    (((v % m_i) + m_i) % m_i) as u64
}

impl QContext {
    /// Build a context, validating primality, field membership, and (H0).
    /// The hypothesis level is upgraded to (H1) when every `[i]`, 0 < i < N,
    /// is invertible.
    pub fn new(n: u32, p: u64, q: u64) -> Result<Self, QcalcError> {
        if n < 2 {
            return Err(QcalcError::OrderTooSmall(n));
        }
        if !is_prime(p) {
            return Err(QcalcError::NotPrime(p));
        }
        if q >= p {
            return Err(QcalcError::ScalarOutOfField { q, p });
        }
        let ctx = QContext {
            n,
            p,
            q,
            level: HypothesisLevel::H0,
        };
        if ctx.qint(n as i64) != 0 {
            return Err(QcalcError::H0Violated { n, p, q });
        }
        let h1 = (1..n).all(|i| ctx.qint(i as i64) != 0);
        Ok(QContext {
            level: if h1 {
                HypothesisLevel::H1
            } else {
                HypothesisLevel::H0
            },
            ..ctx
        })
    }

    /// Smallest field admitting a primitive N-th root of unity: the least
    /// prime p ≡ 1 (mod N), with q = g^((p−1)/N) for g the least primitive
    /// root mod p.  The result always satisfies (H1).
    pub fn auto(n: u32) -> Result<Self, QcalcError> {
        if n < 2 {
            return Err(QcalcError::OrderTooSmall(n));
        }
        let n64 = n as u64;
        let mut p = n64 + 1;
        loop {
            if p % n64 == 1 && is_prime(p) {
                break;
            }
            p += 1;
        }
        let g = least_primitive_root(p);
        let q = powm(g, (p - 1) / n64, p);
        let ctx = Self::new(n, p, q)?;
        debug_assert_eq!(ctx.level, HypothesisLevel::H1);
        Ok(ctx)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn level(&self) -> HypothesisLevel {
        self.level
    }

    pub fn is_h1(&self) -> bool {
        self.level == HypothesisLevel::H1
    }

    /// Errors unless the context satisfies (H1).
    pub fn require_h1(&self) -> Result<(), QcalcError> {
        if self.is_h1() {
            Ok(())
        } else {
            Err(QcalcError::H1Required)
        }
    }

    /// q^e for any signed exponent (negative exponents via the inverse of q;
    /// q is invertible in every valid context since H0 rules out q = 0).
    pub fn qpow(&self, e: i64) -> u64 {
        let base = if e >= 0 { self.q } else { invm(self.q, self.p) };
        powm(base, e.unsigned_abs(), self.p)
    }

    /// The q-integer `[k]` for any signed k.  Under (H0) this is periodic:
    /// `[k + N] = [k]`.
    pub fn qint(&self, k: i64) -> u64 {
        if self.q == 1 {
            reduce_signed(k, self.p)
        } else {
            let num = subm(self.qpow(k), 1, self.p);
            mulm(num, invm(subm(self.q, 1, self.p), self.p), self.p)
        }
    }

    /// The q-factorial `[r]! = [1][2]⋯[r]`, with `[0]! = 1`.
    pub fn qfact(&self, r: u32) -> u64 {
        let mut acc = 1 % self.p;
        for i in 1..=r {
            acc = mulm(acc, self.qint(i as i64), self.p);
        }
        acc
    }

    /// The q-binomial `(r, s) = [r+s]!/([r]![s]!)`, defined only for
    /// 0 ≤ r, s ≤ N−1 and requiring (H1) so the denominator is invertible.
    /// For r + s ≥ N the numerator contains `[N] = 0` and the value is 0.
    pub fn qbinom(&self, r: u32, s: u32) -> Result<u64, QcalcError> {
        self.require_h1()?;
        let max = self.n - 1;
        if r > max || s > max {
            return Err(QcalcError::QbinomOutOfRange { r, s, max });
        }
        let num = self.qfact(r + s);
        let den = mulm(self.qfact(r), self.qfact(s), self.p);
        Ok(mulm(num, invm(den, self.p), self.p))
    }

    /// Additive inverse in F_p.
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        subm(0, a, self.p)
    }

    /// (−1)^k in F_p.
    #[inline]
    pub fn sign(&self, k: u32) -> u64 {
        if k % 2 == 0 {
            1 % self.p
        } else {
            self.neg(1)
        }
    }
}

/// Least primitive root modulo a prime p ≥ 3.
fn least_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    'g: for g in 2..p {
        for &f in &factors {
            if powm(g, (p - 1) / f, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Precomputed q-integers and q-factorials for k = 0, …, 2N−2, the range the
/// homology and q-binomial machinery touches.
#[derive(Debug, Clone)]
pub struct QScalarTable {
    pub qints: Vec<u64>,
    pub qfacts: Vec<u64>,
}

impl QScalarTable {
    pub fn new(ctx: &QContext) -> Self {
        let top = 2 * ctx.order() - 2;
        QScalarTable {
            qints: (0..=top).map(|k| ctx.qint(k as i64)).collect(),
            qfacts: (0..=top).map(|k| ctx.qfact(k)).collect(),
        }
    }
}
