//! Scalar rings: `F_p`, its mod-p^2 lift `Z/p^2`, the Artin-Schreier
//! extension `F_p[t]/(t^p - t + c)`, and the mod-p^2 lift of the latter.
//!
//! All group-ring code is generic over the [`Ring`] object; elements do not
//! carry their modulus, the ring object does. The two lifts exist only to
//! make the divided-power exponential computable: every denominator that
//! occurs is `n!` with `n <= 2p - 2`, whose p-adic valuation is at most 1,
//! so one exact division by p inside `Z/p^2` suffices.

use crate::context::{mod_inv, PrimeContext};
use crate::{Error, Result};
use std::fmt::Debug;

/// A commutative ring with enough structure for truncated polynomial
/// arithmetic: exact equality, inversion of units, and scalar injection.
pub trait Ring: Clone {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of a small nonnegative integer.
    fn from_u64(&self, n: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit; `None` if `a` is not invertible.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `acc += a * b`; hot path for grid convolutions.
    fn mul_acc(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        if n >= 0 {
            self.from_u64(n as u64)
        } else {
            self.neg(&self.from_u64(n.unsigned_abs()))
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Rings of characteristic p that admit a distinguished mod-p^2 lift with an
/// exact "divide by p" partial map. This is what the lifted exponential
/// needs; nothing else in the crate looks at lifts.
pub trait LiftableRing: Ring {
    type Lifted: Ring;

    fn lift_ring(&self) -> Self::Lifted;
    /// The canonical (coefficientwise) lift.
    fn lift(&self, a: &Self::Elem) -> <Self::Lifted as Ring>::Elem;
    /// Reduction mod p.
    fn reduce(&self, a: &<Self::Lifted as Ring>::Elem) -> Self::Elem;
    /// For `a = p * b` in the lift, recover `b` mod p; `None` if some
    /// coordinate of `a` is not divisible by p.
    fn exact_div_p(&self, a: &<Self::Lifted as Ring>::Elem) -> Option<Self::Elem>;
}

// ---------------------------------------------------------------------------
// F_p
// ---------------------------------------------------------------------------

/// The prime field `F_p`; elements are residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(ctx: &PrimeContext) -> Self {
        Fp { p: ctx.p() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Ring for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(mod_inv(a % self.p, self.p))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn mul_acc(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p;
    }
}

// ---------------------------------------------------------------------------
// Z/p^2
// ---------------------------------------------------------------------------

/// The lift ring `Z/p^2`; elements are residues in `[0, p^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zp2 {
    p: u64,
    p2: u64,
}

impl Zp2 {
    pub fn new(ctx: &PrimeContext) -> Self {
        Zp2 {
            p: ctx.p(),
            p2: ctx.p() * ctx.p(),
        }
    }
}

impl Ring for Zp2 {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p2
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p2
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p2 - b) % self.p2
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p2 - a) % self.p2
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p2
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            None
        } else {
            Some(mod_inv(a % self.p2, self.p2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p2 == 0
    }
    fn mul_acc(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.p2;
    }
}

impl LiftableRing for Fp {
    type Lifted = Zp2;

    fn lift_ring(&self) -> Zp2 {
        Zp2 {
            p: self.p,
            p2: self.p * self.p,
        }
    }
    fn lift(&self, a: &u64) -> u64 {
        *a
    }
    fn reduce(&self, a: &u64) -> u64 {
        a % self.p
    }
    fn exact_div_p(&self, a: &u64) -> Option<u64> {
        if a % self.p == 0 {
            Some((a / self.p) % self.p)
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Artin-Schreier extension and its lift
// ---------------------------------------------------------------------------

/// Element of `B[t]/(t^p - t + c)` over a base `B` in `{Z/p, Z/p^2}`:
/// coordinates of `1, t, ..., t^(p-1)`.
pub type AsElem = Vec<u64>;

/// The ring `F_p[t]/(t^p - t + c)`.
///
/// For `c != 0` the modulus `X^p - X + c` is irreducible over `F_p`
/// (Artin-Schreier), so this is the field with `p^p` elements. For `c = 0`
/// the quotient is an etale algebra; every operation used here (ring ops,
/// inversion of constant-plus-nilpotent units) remains valid, and the
/// distinguished root is taken to be 0, so in that case all computations
/// stay inside the `F_p` subring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsRing {
    p: u64,
    modulus: u64, // p for the base field, p^2 for the lift
    c: u64,
}

impl AsRing {
    pub fn new(ctx: &PrimeContext, c: u64) -> Self {
        AsRing {
            p: ctx.p(),
            modulus: ctx.p(),
            c: c % ctx.p(),
        }
    }

    /// The lift `(Z/p^2)[t]/(t^p - t + c)`, with the same (canonically
    /// lifted) structure constant.
    pub fn new_lift(ctx: &PrimeContext, c: u64) -> Self {
        AsRing {
            p: ctx.p(),
            modulus: ctx.p() * ctx.p(),
            c: c % ctx.p(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn structure_constant(&self) -> u64 {
        self.c
    }

    /// The distinguished root of `X^p - X + c`: the generator `t` itself,
    /// or 0 when `c = 0`.
    pub fn root(&self) -> AsElem {
        let mut e = vec![0u64; self.p as usize];
        if self.c != 0 {
            e[1] = 1;
        }
        e
    }

    pub fn constant(&self, a: u64) -> AsElem {
        let mut e = vec![0u64; self.p as usize];
        e[0] = a % self.modulus;
        e
    }

    /// `Some(a)` when the element lies in the base subring (no t-part).
    pub fn as_constant(&self, e: &AsElem) -> Option<u64> {
        if e[1..].iter().all(|&x| x == 0) {
            Some(e[0])
        } else {
            None
        }
    }

    /// Whether `X^p - X + c` has a root in the base ring; used by tests to
    /// confirm irreducibility for `c != 0`.
    pub fn modulus_has_base_root(&self) -> bool {
        let p = self.p;
        (0..self.modulus).any(|x| (pow_mod(x, p, self.modulus) + self.c) % self.modulus == x)
    }

    fn reduce_conv(&self, buf: &mut [u64]) -> AsElem {
        let p = self.p as usize;
        let m = self.modulus;
        // t^(p+k) = t^(k+1) - c t^k
        for d in (p..buf.len()).rev() {
            let v = buf[d] % m;
            if v != 0 {
                buf[d - p + 1] = (buf[d - p + 1] + v) % m;
                buf[d - p] = (buf[d - p] + (m - self.c) * v) % m;
            }
            buf[d] = 0;
        }
        buf[..p].iter().map(|&x| x % m).collect()
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Ring for AsRing {
    type Elem = AsElem;

    fn zero(&self) -> AsElem {
        vec![0; self.p as usize]
    }
    fn one(&self) -> AsElem {
        self.constant(1)
    }
    fn from_u64(&self, n: u64) -> AsElem {
        self.constant(n)
    }
    fn add(&self, a: &AsElem, b: &AsElem) -> AsElem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }
    fn sub(&self, a: &AsElem, b: &AsElem) -> AsElem {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.modulus - y) % self.modulus)
            .collect()
    }
    fn neg(&self, a: &AsElem) -> AsElem {
        a.iter().map(|x| (self.modulus - x) % self.modulus).collect()
    }
    fn mul(&self, a: &AsElem, b: &AsElem) -> AsElem {
        let p = self.p as usize;
        let mut buf = [0u64; 32];
        debug_assert!(2 * p - 1 <= 32);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                buf[i + j] += x * y % self.modulus;
            }
        }
        self.reduce_conv(&mut buf[..2 * p - 1])
    }
    fn inv(&self, a: &AsElem) -> Option<AsElem> {
        // Only the two shapes that actually occur are supported: elements of
        // the base subring, and (for the field case c != 0) arbitrary nonzero
        // elements via the extended Euclidean algorithm on polynomials.
        if let Some(x) = self.as_constant(a) {
            if x % self.p == 0 {
                return None;
            }
            return Some(self.constant(mod_inv(x, self.modulus)));
        }
        if self.modulus == self.p && self.c != 0 {
            return self.field_inv(a);
        }
        None
    }
    fn is_zero(&self, a: &AsElem) -> bool {
        a.iter().all(|&x| x % self.modulus == 0)
    }
    fn mul_acc(&self, acc: &mut AsElem, a: &AsElem, b: &AsElem) {
        let p = self.p as usize;
        let mut buf = [0u64; 32];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                buf[i + j] += x * y % self.modulus;
            }
        }
        let prod = self.reduce_conv(&mut buf[..2 * p - 1]);
        for (t, s) in acc.iter_mut().zip(prod) {
            *t = (*t + s) % self.modulus;
        }
    }
}

fn poly_deg(v: &[u64], p: u64) -> Option<usize> {
    v.iter().rposition(|&x| x % p != 0)
}

/// `(quotient, remainder)` of `num / den` over `F_p[X]`; `den` nonzero.
fn poly_divmod(num: &[u64], den: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dd = poly_deg(den, p).expect("division by zero polynomial");
    let lead_inv = mod_inv(den[dd] % p, p);
    let mut rem: Vec<u64> = num.iter().map(|&x| x % p).collect();
    let mut quot = vec![0u64; num.len().max(dd + 1)];
    while let Some(dn) = poly_deg(&rem, p) {
        if dn < dd {
            break;
        }
        let coef = rem[dn] * lead_inv % p;
        let shift = dn - dd;
        quot[shift] = coef;
        for i in 0..=dd {
            rem[i + shift] = (rem[i + shift] + p - coef * den[i] % p) % p;
        }
    }
    (quot, rem)
}

fn poly_mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x % p == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn poly_sub_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0) % p;
            let y = b.get(i).copied().unwrap_or(0) % p;
            (x + p - y) % p
        })
        .collect()
}

impl AsRing {
    /// Inverse in the field case via the extended Euclidean algorithm over
    /// `F_p[X]` against the modulus `X^p - X + c`.
    fn field_inv(&self, a: &AsElem) -> Option<AsElem> {
        let p = self.p;
        if self.is_zero(a) {
            return None;
        }
        let mut modulus = vec![0u64; p as usize + 1];
        modulus[0] = self.c % p;
        modulus[1] = p - 1;
        modulus[p as usize] = 1;
        let (mut r0, mut r1) = (modulus, a.to_vec());
        let (mut s0, mut s1) = (vec![0u64], vec![1u64]);
        while poly_deg(&r1, p).is_some() {
            let (q, rem) = poly_divmod(&r0, &r1, p);
            let next_s = poly_sub_mod_p(&s0, &poly_mul_mod_p(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, next_s);
        }
        // Here s0 * a = r0 modulo the modulus polynomial; a is a unit
        // exactly when the gcd r0 is a nonzero constant.
        match poly_deg(&r0, p) {
            Some(0) => {}
            _ => return None,
        }
        let scale = mod_inv(r0[0] % p, p);
        let mut buf = [0u64; 32];
        for (i, &x) in s0.iter().enumerate() {
            if x % p != 0 {
                debug_assert!(i < 2 * p as usize - 1, "cofactor degree out of range");
                buf[i] = x % p * scale % p;
            }
        }
        Some(self.reduce_conv(&mut buf[..2 * p as usize - 1]))
    }
}

impl LiftableRing for AsRing {
    type Lifted = AsRing;

    fn lift_ring(&self) -> AsRing {
        assert_eq!(self.modulus, self.p, "ring is already a lift");
        AsRing {
            p: self.p,
            modulus: self.p * self.p,
            c: self.c,
        }
    }
    fn lift(&self, a: &AsElem) -> AsElem {
        a.clone()
    }
    fn reduce(&self, a: &AsElem) -> AsElem {
        a.iter().map(|&x| x % self.p).collect()
    }
    fn exact_div_p(&self, a: &AsElem) -> Option<AsElem> {
        a.iter()
            .map(|&x| {
                if x % self.p == 0 {
                    Some((x / self.p) % self.p)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Constructs the Artin-Schreier ring for structure constant `c` together
/// with its distinguished root.
pub fn as_ring_new(ctx: &PrimeContext, c: u64) -> (AsRing, AsElem) {
    let ring = AsRing::new(ctx, c);
    let root = ring.root();
    (ring, root)
}

/// Validates that `ell` is prime; helper shared with the finite-field code.
pub fn check_prime(ell: u64) -> Result<()> {
    if ell < 2 {
        return Err(Error::NotPrime(ell));
    }
    let mut d = 2;
    while d * d <= ell {
        if ell % d == 0 {
            return Err(Error::NotPrime(ell));
        }
        d += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5ca1ab1e)
    }

    #[test]
    fn fp_field_axioms_exhaustive_small() {
        for p in [3u64, 5, 7] {
            let ctx = PrimeContext::new(p).unwrap();
            let f = Fp::new(&ctx);
            for a in 0..p {
                for b in 0..p {
                    assert_eq!(f.add(&a, &b), (a + b) % p);
                    assert_eq!(f.mul(&a, &b), a * b % p);
                    assert_eq!(f.add(&a, &f.neg(&a)), 0);
                    for c in 0..p {
                        assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
            assert!(f.inv(&0).is_none());
        }
    }

    #[test]
    fn fp_field_axioms_random_large() {
        let mut rng = rng();
        for p in [11u64, 13] {
            let ctx = PrimeContext::new(p).unwrap();
            let f = Fp::new(&ctx);
            for _ in 0..500 {
                let (a, b, c) = (rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p));
                assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn lift_reduction_and_exact_division() {
        let ctx = PrimeContext::new(7).unwrap();
        let f = Fp::new(&ctx);
        let l = f.lift_ring();
        for x in 0..49u64 {
            assert_eq!(f.reduce(&x), x % 7);
            let px = l.mul(&7, &x);
            assert_eq!(f.exact_div_p(&px), Some(x % 7));
        }
        assert_eq!(f.exact_div_p(&8), None);
    }

    #[test]
    fn as_ring_defining_relation() {
        // t^3 = t - 1 at p = 3, c = 1; t^3 - t + 1 = 0 exactly.
        let ctx = PrimeContext::new(3).unwrap();
        let (ring, t) = as_ring_new(&ctx, 1);
        let t3 = ring.mul(&ring.mul(&t, &t), &t);
        let rel = ring.add(&ring.sub(&t3, &t), &ring.one());
        assert!(ring.is_zero(&rel));
    }

    #[test]
    fn as_ring_trivial_when_c_zero() {
        let ctx = PrimeContext::new(3).unwrap();
        let (ring, f) = as_ring_new(&ctx, 0);
        assert!(ring.is_zero(&f));
        // X^3 - X has the root 0 in F_3.
        assert!(ring.modulus_has_base_root());
    }

    #[test]
    fn as_modulus_irreducible_for_p5_c2() {
        // Brute force: X^5 - X + 2 has no root in F_5, hence (Artin-Schreier)
        // it is irreducible and the quotient has 5^5 elements.
        let ctx = PrimeContext::new(5).unwrap();
        let (ring, t) = as_ring_new(&ctx, 2);
        assert!(!ring.modulus_has_base_root());
        let mut t5 = ring.one();
        for _ in 0..5 {
            t5 = ring.mul(&t5, &t);
        }
        let rel = ring.add(&ring.sub(&t5, &t), &ring.constant(2));
        assert!(ring.is_zero(&rel));
    }

    #[test]
    fn as_ring_axioms_random() {
        let mut rng = rng();
        for (p, c) in [(3u64, 2u64), (5, 1), (7, 3)] {
            let ctx = PrimeContext::new(p).unwrap();
            let ring = AsRing::new(&ctx, c);
            let rand_elem = |rng: &mut ChaCha8Rng| -> AsElem {
                (0..p).map(|_| rng.gen_range(0..p)).collect()
            };
            for _ in 0..200 {
                let (a, b, d) = (rand_elem(&mut rng), rand_elem(&mut rng), rand_elem(&mut rng));
                assert_eq!(ring.mul(&ring.mul(&a, &b), &d), ring.mul(&a, &ring.mul(&b, &d)));
                assert_eq!(
                    ring.mul(&a, &ring.add(&b, &d)),
                    ring.add(&ring.mul(&a, &b), &ring.mul(&a, &d))
                );
                assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
            }
        }
    }

    #[test]
    fn as_field_inverse() {
        let mut rng = rng();
        for (p, c) in [(3u64, 1u64), (5, 2), (7, 1)] {
            let ctx = PrimeContext::new(p).unwrap();
            let ring = AsRing::new(&ctx, c);
            for _ in 0..100 {
                let a: AsElem = (0..p).map(|_| rng.gen_range(0..p)).collect();
                if ring.is_zero(&a) {
                    assert!(ring.inv(&a).is_none());
                    continue;
                }
                let inv = ring.inv(&a).expect("field element must invert");
                assert!(ring.is_one(&ring.mul(&a, &inv)));
            }
        }
    }

    #[test]
    fn as_lift_divides_exactly() {
        let ctx = PrimeContext::new(5).unwrap();
        let base = AsRing::new(&ctx, 2);
        let lifted = base.lift_ring();
        let mut rng = rng();
        for _ in 0..100 {
            let a: AsElem = (0..5).map(|_| rng.gen_range(0..25)).collect();
            let pa = lifted.mul(&lifted.from_u64(5), &a);
            let back = base.exact_div_p(&pa).unwrap();
            assert_eq!(back, base.reduce(&a));
            assert_eq!(base.reduce(&a), a.iter().map(|&x| x % 5).collect::<AsElem>());
        }
        let not_div = lifted.one();
        assert!(base.exact_div_p(&not_div).is_none());
    }
}
