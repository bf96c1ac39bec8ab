//! Arithmetic in the truncated group rings `R[e]/(e^p - 1)` and
//! `R[e0, e1]/(e0^p - 1, e1^p - 1)` over a scalar ring `R`.
//!
//! Elements carry an explicit basis tag: the group basis `e^i` (used by the
//! gamma units and the exponent-permuting operations) and the nilpotent
//! basis `y^i` with `y = e - 1` (used by everything that filters by the
//! augmentation ideal). Conversion is a binomial change of basis, applied
//! lazily rather than canonicalising on every operation.

use crate::context::PrimeContext;
use crate::scalar::{Fp, LiftableRing, Ring};
use crate::{Error, Result};

/// Coefficient basis of a group-ring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Group basis `e^i`.
    Eps,
    /// Nilpotent basis `y^i`, `y = e - 1` (so `y^p = 0`).
    Nil,
}

fn binomial_rows(n: usize) -> Vec<Vec<u64>> {
    // Raw integer binomials; indices stay below p <= 13 so u64 is ample.
    let mut rows = vec![vec![0u64; n]; n];
    for i in 0..n {
        rows[i][0] = 1;
        for j in 1..=i {
            rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
    }
    rows
}

// ---------------------------------------------------------------------------
// One cyclic variable
// ---------------------------------------------------------------------------

/// Element of `R[e]/(e^p - 1)`: `p` coefficients in the tagged basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicElt<R: Ring> {
    pub coeffs: Vec<R::Elem>,
    pub basis: Basis,
}

impl<R: Ring> CyclicElt<R> {
    pub fn zero(ring: &R, p: usize, basis: Basis) -> Self {
        CyclicElt {
            coeffs: vec![ring.zero(); p],
            basis,
        }
    }

    pub fn one(ring: &R, p: usize, basis: Basis) -> Self {
        let mut e = Self::zero(ring, p, basis);
        e.coeffs[0] = ring.one();
        e
    }

    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    pub fn to_basis(&self, basis: Basis, ring: &R) -> Self {
        if self.basis == basis {
            return self.clone();
        }
        let p = self.p();
        let binom = binomial_rows(p);
        let mut out = Self::zero(ring, p, basis);
        match basis {
            // e^i = (y+1)^i => y-coeff j gets sum_i a_i C(i, j)
            Basis::Nil => {
                for j in 0..p {
                    let mut acc = ring.zero();
                    for i in j..p {
                        ring.mul_acc(&mut acc, &self.coeffs[i], &ring.from_u64(binom[i][j]));
                    }
                    out.coeffs[j] = acc;
                }
            }
            // y^j = (e-1)^j => e-coeff i gets sum_j b_j C(j, i) (-1)^(j-i)
            Basis::Eps => {
                for i in 0..p {
                    let mut acc = ring.zero();
                    for j in i..p {
                        let s = ring.from_i64(if (j - i) % 2 == 0 { 1 } else { -1 });
                        let term = ring.mul(&ring.from_u64(binom[j][i]), &s);
                        ring.mul_acc(&mut acc, &self.coeffs[j], &term);
                    }
                    out.coeffs[i] = acc;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        CyclicElt {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
            basis: self.basis,
        }
    }

    pub fn sub(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        CyclicElt {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| ring.sub(a, b)).collect(),
            basis: self.basis,
        }
    }

    pub fn neg(&self, ring: &R) -> Self {
        CyclicElt {
            coeffs: self.coeffs.iter().map(|a| ring.neg(a)).collect(),
            basis: self.basis,
        }
    }

    pub fn scale(&self, s: &R::Elem, ring: &R) -> Self {
        CyclicElt {
            coeffs: self.coeffs.iter().map(|a| ring.mul(a, s)).collect(),
            basis: self.basis,
        }
    }

    /// Product, reduced by `e^p = 1` (group basis) or `y^p = 0` (nilpotent
    /// basis). The right factor is aligned to the left factor's basis.
    pub fn mul(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        let p = self.p();
        let mut out = Self::zero(ring, p, self.basis);
        for i in 0..p {
            if ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..p {
                if ring.is_zero(&o.coeffs[j]) {
                    continue;
                }
                match self.basis {
                    Basis::Eps => {
                        let k = (i + j) % p;
                        ring.mul_acc(&mut out.coeffs[k], &self.coeffs[i], &o.coeffs[j]);
                    }
                    Basis::Nil => {
                        if i + j < p {
                            ring.mul_acc(&mut out.coeffs[i + j], &self.coeffs[i], &o.coeffs[j]);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64, ring: &R) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(ring, self.p(), self.basis);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            base = base.mul(&base, ring);
            e >>= 1;
        }
        acc
    }

    /// Augmentation: the coefficient sum in the group basis, equivalently
    /// the constant term in the nilpotent basis.
    pub fn augmentation(&self, ring: &R) -> R::Elem {
        match self.basis {
            Basis::Nil => self.coeffs[0].clone(),
            Basis::Eps => self
                .coeffs
                .iter()
                .fold(ring.zero(), |acc, c| ring.add(&acc, c)),
        }
    }

    /// Inverse of a unit of the form (invertible scalar) + (nilpotent), by a
    /// geometric series in the nilpotent part.
    pub fn invert_unit(&self, ring: &R) -> Result<Self> {
        let u = self.to_basis(Basis::Nil, ring);
        let p = u.p();
        let c_inv = ring.inv(&u.coeffs[0]).ok_or(Error::NotAUnit)?;
        // u = c (1 + n); (1 + n)^-1 = sum (-n)^i
        let mut n = u.scale(&c_inv, ring);
        n.coeffs[0] = ring.zero();
        let neg_n = n.neg(ring);
        let mut acc = Self::one(ring, p, Basis::Nil);
        let mut pw = Self::one(ring, p, Basis::Nil);
        for _ in 1..p {
            pw = pw.mul(&neg_n, ring);
            if pw.is_zero(ring) {
                break;
            }
            acc = acc.add(&pw, ring);
        }
        Ok(acc.scale(&c_inv, ring).to_basis(self.basis, ring))
    }

    pub fn equals(&self, other: &Self, ring: &R) -> bool {
        self.to_basis(Basis::Nil, ring).coeffs == other.to_basis(Basis::Nil, ring).coeffs
    }
}

/// Truncated exponential `sum_{i<p} f^i / i!` of an element of the
/// augmentation ideal (zero constant term in the nilpotent basis).
pub fn exp_trunc<R: Ring>(f: &CyclicElt<R>, ring: &R) -> Result<CyclicElt<R>> {
    let fy = f.to_basis(Basis::Nil, ring);
    if !ring.is_zero(&fy.coeffs[0]) {
        return Err(Error::NonzeroConstantTerm);
    }
    let p = fy.p();
    let mut acc = CyclicElt::one(ring, p, Basis::Nil);
    let mut term = CyclicElt::one(ring, p, Basis::Nil);
    for i in 1..p {
        term = term.mul(&fy, ring);
        let inv_i = ring.inv(&ring.from_u64(i as u64)).expect("i < p is a unit");
        term = term.scale(&inv_i, ring);
        if term.is_zero(ring) {
            break;
        }
        acc = acc.add(&term, ring);
    }
    Ok(acc.to_basis(f.basis, ring))
}

/// A differential `g(e) de` on the one-variable ring; the `de`-coefficient
/// is stored as a group-ring element. `dlog e = e^(p-1) de` since
/// `e^(-1) = e^(p-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Differential<R: Ring> {
    pub coeff: CyclicElt<R>,
}

/// Logarithmic derivative `u'/u de` of a unit, with the formal derivative
/// `d(e^i) = i e^(i-1) de` (well-defined in the quotient because
/// `p e^(p-1) = 0`).
pub fn dlog<R: Ring>(u: &CyclicElt<R>, ring: &R) -> Result<Differential<R>> {
    let ue = u.to_basis(Basis::Eps, ring);
    let p = ue.p();
    let mut deriv = CyclicElt::zero(ring, p, Basis::Eps);
    for i in 1..p {
        deriv.coeffs[i - 1] = ring.mul(&ue.coeffs[i], &ring.from_u64(i as u64));
    }
    let inv = ue.invert_unit(ring)?;
    Ok(Differential {
        coeff: deriv.mul(&inv, ring),
    })
}

// ---------------------------------------------------------------------------
// Two cyclic variables
// ---------------------------------------------------------------------------

/// Element of `R[e0, e1]/(e0^p - 1, e1^p - 1)`: a `p x p` coefficient grid,
/// entry `(i, j)` multiplying `v0^i v1^j` in the tagged basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BicyclicElt<R: Ring> {
    pub coeffs: Vec<R::Elem>,
    pub p: usize,
    pub basis: Basis,
}

impl<R: Ring> BicyclicElt<R> {
    pub fn zero(ring: &R, p: usize, basis: Basis) -> Self {
        BicyclicElt {
            coeffs: vec![ring.zero(); p * p],
            p,
            basis,
        }
    }

    pub fn one(ring: &R, p: usize, basis: Basis) -> Self {
        let mut e = Self::zero(ring, p, basis);
        e.coeffs[0] = ring.one();
        e
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.coeffs[i * self.p + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.coeffs[i * self.p + j] = v;
    }

    pub fn is_zero(&self, ring: &R) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// Basis conversion, applied along each variable separately.
    pub fn to_basis(&self, basis: Basis, ring: &R) -> Self {
        if self.basis == basis {
            return self.clone();
        }
        let p = self.p;
        let binom = binomial_rows(p);
        let mut tmp = Self::zero(ring, p, basis);
        // rows: transform the second index
        let convert_vec = |coeffs: &[R::Elem], out: &mut [R::Elem]| match basis {
            Basis::Nil => {
                for j in 0..p {
                    let mut acc = ring.zero();
                    for i in j..p {
                        ring.mul_acc(&mut acc, &coeffs[i], &ring.from_u64(binom[i][j]));
                    }
                    out[j] = acc;
                }
            }
            Basis::Eps => {
                for i in 0..p {
                    let mut acc = ring.zero();
                    for j in i..p {
                        let s = ring.from_i64(if (j - i) % 2 == 0 { 1 } else { -1 });
                        let term = ring.mul(&ring.from_u64(binom[j][i]), &s);
                        ring.mul_acc(&mut acc, &coeffs[j], &term);
                    }
                    out[i] = acc;
                }
            }
        };
        for i in 0..p {
            let row: Vec<R::Elem> = (0..p).map(|j| self.get(i, j).clone()).collect();
            let mut out_row = vec![ring.zero(); p];
            convert_vec(&row, &mut out_row);
            for (j, v) in out_row.into_iter().enumerate() {
                tmp.set(i, j, v);
            }
        }
        let mut out = Self::zero(ring, p, basis);
        for j in 0..p {
            let col: Vec<R::Elem> = (0..p).map(|i| tmp.get(i, j).clone()).collect();
            let mut out_col = vec![ring.zero(); p];
            convert_vec(&col, &mut out_col);
            for (i, v) in out_col.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn add(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        BicyclicElt {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
            p: self.p,
            basis: self.basis,
        }
    }

    pub fn sub(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        BicyclicElt {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| ring.sub(a, b)).collect(),
            p: self.p,
            basis: self.basis,
        }
    }

    pub fn neg(&self, ring: &R) -> Self {
        BicyclicElt {
            coeffs: self.coeffs.iter().map(|a| ring.neg(a)).collect(),
            p: self.p,
            basis: self.basis,
        }
    }

    pub fn scale(&self, s: &R::Elem, ring: &R) -> Self {
        BicyclicElt {
            coeffs: self.coeffs.iter().map(|a| ring.mul(a, s)).collect(),
            p: self.p,
            basis: self.basis,
        }
    }

    pub fn mul(&self, other: &Self, ring: &R) -> Self {
        let o = other.to_basis(self.basis, ring);
        let p = self.p;
        let mut out = Self::zero(ring, p, self.basis);
        for i1 in 0..p {
            for j1 in 0..p {
                let a = self.get(i1, j1);
                if ring.is_zero(a) {
                    continue;
                }
                for i2 in 0..p {
                    if self.basis == Basis::Nil && i1 + i2 >= p {
                        break;
                    }
                    for j2 in 0..p {
                        if self.basis == Basis::Nil && j1 + j2 >= p {
                            break;
                        }
                        let b = o.get(i2, j2);
                        if ring.is_zero(b) {
                            continue;
                        }
                        let (i, j) = match self.basis {
                            Basis::Eps => ((i1 + i2) % p, (j1 + j2) % p),
                            Basis::Nil => (i1 + i2, j1 + j2),
                        };
                        ring.mul_acc(&mut out.coeffs[i * p + j], a, b);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64, ring: &R) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(ring, self.p, self.basis);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            base = base.mul(&base, ring);
            e >>= 1;
        }
        acc
    }

    /// Inverse of (invertible scalar) + (nilpotent); the nilpotency degree of
    /// the augmentation ideal is `2p - 1`, which bounds the geometric series.
    pub fn invert_unit(&self, ring: &R) -> Result<Self> {
        let u = self.to_basis(Basis::Nil, ring);
        let p = u.p;
        let c_inv = ring.inv(&u.coeffs[0]).ok_or(Error::NotAUnit)?;
        let mut n = u.scale(&c_inv, ring);
        n.coeffs[0] = ring.zero();
        let neg_n = n.neg(ring);
        let mut acc = Self::one(ring, p, Basis::Nil);
        let mut pw = Self::one(ring, p, Basis::Nil);
        for _ in 1..2 * p - 1 {
            pw = pw.mul(&neg_n, ring);
            if pw.is_zero(ring) {
                break;
            }
            acc = acc.add(&pw, ring);
        }
        Ok(acc.scale(&c_inv, ring).to_basis(self.basis, ring))
    }

    /// Involution exchanging the two variables: the coefficient-grid
    /// transpose (in either basis, since the basis change acts per axis).
    pub fn swap(&self) -> Self {
        let p = self.p;
        let mut out = self.clone();
        for i in 0..p {
            for j in 0..p {
                out.coeffs[i * p + j] = self.get(j, i).clone();
            }
        }
        out
    }

    /// The exponent-scaling automorphism `e0^i e1^j -> e0^(ia) e1^(ja)` for
    /// a unit `a` mod p.
    pub fn twist(&self, a: u64, ring: &R) -> Result<Self> {
        let p = self.p as u64;
        if a % p == 0 {
            return Err(Error::ZeroTwist);
        }
        let u = self.to_basis(Basis::Eps, ring);
        let mut out = Self::zero(ring, self.p, Basis::Eps);
        for i in 0..self.p {
            for j in 0..self.p {
                let ni = (i as u64 * a % p) as usize;
                let nj = (j as u64 * a % p) as usize;
                out.set(ni, nj, u.get(i, j).clone());
            }
        }
        Ok(out.to_basis(self.basis, ring))
    }

    /// The norm element `sum_{i<p} u^i`.
    pub fn norm_sum(&self, ring: &R) -> Self {
        let p = self.p;
        let mut acc = Self::one(ring, p, self.basis);
        let mut pw = Self::one(ring, p, self.basis);
        for _ in 1..p {
            pw = pw.mul(self, ring);
            acc = acc.add(&pw, ring);
        }
        acc
    }

    /// Largest `k` with `u` in the k-th power of the augmentation ideal
    /// `<y0, y1>`: the minimum total degree of a nonzero nilpotent-basis
    /// coefficient. The zero element reports `2p - 1`, the honest "infinity"
    /// since `<y0, y1>^(2p-1) = 0`.
    pub fn aug_depth(&self, ring: &R) -> usize {
        let u = self.to_basis(Basis::Nil, ring);
        let mut best = 2 * self.p - 1;
        for i in 0..self.p {
            for j in 0..self.p {
                if !ring.is_zero(u.get(i, j)) && i + j < best {
                    best = i + j;
                }
            }
        }
        best
    }

    /// Whether every monomial of `u` is divisible by `y0 y1`, i.e. `u` lies
    /// in the principal ideal generated by `y0 y1`.
    pub fn in_corner_ideal(&self, ring: &R) -> bool {
        let u = self.to_basis(Basis::Nil, ring);
        for i in 0..self.p {
            for j in 0..self.p {
                if (i == 0 || j == 0) && !ring.is_zero(u.get(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// The component `[m]_k`: terms whose minimum exponent `min(i, j)`
    /// equals `k`. The components over `0 <= k <= p-1` partition `m`.
    pub fn min_exp_component(&self, k: usize, ring: &R) -> Self {
        let u = self.to_basis(Basis::Nil, ring);
        let mut out = Self::zero(ring, self.p, Basis::Nil);
        for i in 0..self.p {
            for j in 0..self.p {
                if i.min(j) == k {
                    out.set(i, j, u.get(i, j).clone());
                }
            }
        }
        out.to_basis(self.basis, ring)
    }

    pub fn equals(&self, other: &Self, ring: &R) -> bool {
        self.to_basis(Basis::Nil, ring).coeffs == other.to_basis(Basis::Nil, ring).coeffs
    }

    /// Substitution `e -> e0`: a one-variable element placed on the first
    /// axis. Valid in both bases (`y -> y0` likewise).
    pub fn embed_var0(c: &CyclicElt<R>, ring: &R) -> Self {
        let p = c.p();
        let mut out = Self::zero(ring, p, c.basis);
        for i in 0..p {
            out.set(i, 0, c.coeffs[i].clone());
        }
        out
    }

    /// Substitution `e -> e1`.
    pub fn embed_var1(c: &CyclicElt<R>, ring: &R) -> Self {
        let p = c.p();
        let mut out = Self::zero(ring, p, c.basis);
        for j in 0..p {
            out.set(0, j, c.coeffs[j].clone());
        }
        out
    }

    /// Substitution `e -> e0 e1`, which requires the group basis: the image
    /// is supported on the diagonal `(i, i)`.
    pub fn embed_diag(c: &CyclicElt<R>, ring: &R) -> Self {
        let ce = c.to_basis(Basis::Eps, ring);
        let p = ce.p();
        let mut out = Self::zero(ring, p, Basis::Eps);
        for i in 0..p {
            out.set(i, i, ce.coeffs[i].clone());
        }
        out
    }

    /// Outer product `a(v0) * b(v1)` of two one-variable elements, both
    /// interpreted in `a`'s basis.
    pub fn outer(a: &CyclicElt<R>, b: &CyclicElt<R>, ring: &R) -> Self {
        let bb = b.to_basis(a.basis, ring);
        let p = a.p();
        let mut out = Self::zero(ring, p, a.basis);
        for i in 0..p {
            for j in 0..p {
                out.set(i, j, ring.mul(&a.coeffs[i], &bb.coeffs[j]));
            }
        }
        out
    }
}

/// Truncated exponential on the two-variable ring, `sum_{i<p} f^i / i!`.
pub fn exp_trunc2<R: Ring>(f: &BicyclicElt<R>, ring: &R) -> Result<BicyclicElt<R>> {
    let fy = f.to_basis(Basis::Nil, ring);
    if !ring.is_zero(&fy.coeffs[0]) {
        return Err(Error::NonzeroConstantTerm);
    }
    let p = fy.p;
    let mut acc = BicyclicElt::one(ring, p, Basis::Nil);
    let mut term = BicyclicElt::one(ring, p, Basis::Nil);
    for i in 1..p {
        term = term.mul(&fy, ring);
        let inv_i = ring.inv(&ring.from_u64(i as u64)).expect("i < p is a unit");
        term = term.scale(&inv_i, ring);
        if term.is_zero(ring) {
            break;
        }
        acc = acc.add(&term, ring);
    }
    Ok(acc.to_basis(f.basis, ring))
}

/// The divided-power exponential `sum_{i <= 2p-2} f^i / i!`, computed through
/// the mod-p^2 lift: the powers `f~^i` for `i >= p` have every coefficient
/// divisible by p, and the single p in `i!` cancels against it by one exact
/// division. The result does not depend on the choice of lift.
///
/// Panics if some coefficient of `f~^i` (`i >= p`) fails the divisibility —
/// that would contradict the integrality of the divided powers and signals a
/// bug, not an input condition.
pub fn exp_witt<R: LiftableRing>(
    ctx: &PrimeContext,
    f: &BicyclicElt<R>,
    ring: &R,
) -> Result<BicyclicElt<R>> {
    let fy = f.to_basis(Basis::Nil, ring);
    if !ring.is_zero(&fy.coeffs[0]) {
        return Err(Error::NonzeroConstantTerm);
    }
    let p = fy.p;
    let lifted_ring = ring.lift_ring();
    let lifted = BicyclicElt {
        coeffs: fy.coeffs.iter().map(|c| ring.lift(c)).collect(),
        p,
        basis: Basis::Nil,
    };
    let mut acc = BicyclicElt::one(ring, p, Basis::Nil);
    let mut pw = BicyclicElt::one(&lifted_ring, p, Basis::Nil);
    for i in 1..=2 * p - 2 {
        pw = pw.mul(&lifted, &lifted_ring);
        let term = if i < p {
            let reduced = BicyclicElt {
                coeffs: pw.coeffs.iter().map(|c| ring.reduce(c)).collect(),
                p,
                basis: Basis::Nil,
            };
            let inv_fact = ring
                .inv(&ring.from_u64(ctx.factorial(i)))
                .expect("i! is a unit for i < p");
            reduced.scale(&inv_fact, ring)
        } else {
            let divided = BicyclicElt {
                coeffs: pw
                    .coeffs
                    .iter()
                    .map(|c| {
                        ring.exact_div_p(c).expect(
                            "coefficient of f^i (i >= p) not divisible by p; \
                             divided-power integrality violated",
                        )
                    })
                    .collect(),
                p,
                basis: Basis::Nil,
            };
            let inv_fact = ring
                .inv(&ring.from_u64(ctx.factorial_over_p(i)))
                .expect("i!/p is a unit for p <= i <= 2p-2");
            divided.scale(&inv_fact, ring)
        };
        acc = acc.add(&term, ring);
    }
    Ok(acc.to_basis(f.basis, ring))
}

/// Variant of [`exp_witt`] taking an explicit lift of `f`, used to test that
/// the result is independent of the lift. `lift` must reduce to `f`.
pub fn exp_witt_with_lift<R: LiftableRing>(
    ctx: &PrimeContext,
    f: &BicyclicElt<R>,
    lift: &BicyclicElt<R::Lifted>,
    ring: &R,
) -> Result<BicyclicElt<R>> {
    let fy = f.to_basis(Basis::Nil, ring);
    if !ring.is_zero(&fy.coeffs[0]) {
        return Err(Error::NonzeroConstantTerm);
    }
    let p = fy.p;
    let lifted_ring = ring.lift_ring();
    let lifted = lift.to_basis(Basis::Nil, &lifted_ring);
    for (a, b) in lifted.coeffs.iter().zip(&fy.coeffs) {
        assert!(
            ring.reduce(a) == *b,
            "provided lift does not reduce to the argument"
        );
    }
    let mut acc = BicyclicElt::one(ring, p, Basis::Nil);
    let mut pw = BicyclicElt::one(&lifted_ring, p, Basis::Nil);
    for i in 1..=2 * p - 2 {
        pw = pw.mul(&lifted, &lifted_ring);
        let term = if i < p {
            let reduced = BicyclicElt {
                coeffs: pw.coeffs.iter().map(|c| ring.reduce(c)).collect(),
                p,
                basis: Basis::Nil,
            };
            let inv_fact = ring
                .inv(&ring.from_u64(ctx.factorial(i)))
                .expect("i! is a unit for i < p");
            reduced.scale(&inv_fact, ring)
        } else {
            let divided = BicyclicElt {
                coeffs: pw
                    .coeffs
                    .iter()
                    .map(|c| {
                        ring.exact_div_p(c)
                            .expect("coefficient of f^i (i >= p) not divisible by p")
                    })
                    .collect(),
                p,
                basis: Basis::Nil,
            };
            let inv_fact = ring
                .inv(&ring.from_u64(ctx.factorial_over_p(i)))
                .expect("i!/p is a unit for p <= i <= 2p-2");
            divided.scale(&inv_fact, ring)
        };
        acc = acc.add(&term, ring);
    }
    Ok(acc.to_basis(f.basis, ring))
}

// ---------------------------------------------------------------------------
// Display and test helpers over F_p
// ---------------------------------------------------------------------------

/// Builds an element from `(i, j, coeff)` monomials `x^i y^j` in the
/// nilpotent basis, `x = e0 - 1`, `y = e1 - 1`.
pub fn from_monomials(fp: &Fp, p: usize, monomials: &[(usize, usize, i64)]) -> BicyclicElt<Fp> {
    let mut out = BicyclicElt::zero(fp, p, Basis::Nil);
    for &(i, j, c) in monomials {
        let cur = out.get(i, j).clone();
        out.set(i, j, fp.add(&cur, &fp.from_i64(c)));
    }
    out
}

/// Renders an element in the display convention `x = e0 - 1`, `y = e1 - 1`,
/// terms sorted by total degree and then lexicographically (higher x-power
/// first within a degree).
pub fn render_xy(u: &BicyclicElt<Fp>, fp: &Fp) -> String {
    let un = u.to_basis(Basis::Nil, fp);
    let p = un.p;
    let mut terms = Vec::new();
    for total in 0..=2 * (p - 1) {
        for i in (0..p).rev() {
            if total < i || total - i >= p {
                continue;
            }
            let j = total - i;
            let c = *un.get(i, j);
            if c == 0 {
                continue;
            }
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let xs = match i {
                        0 => String::new(),
                        1 => "x".into(),
                        _ => format!("x^{i}"),
                    };
                    let ys = match j {
                        0 => String::new(),
                        1 => "y".into(),
                        _ => format!("y^{j}"),
                    };
                    format!("{xs}{ys}")
                }
            };
            if mono.is_empty() {
                terms.push(format!("{c}"));
            } else if c == 1 {
                terms.push(mono);
            } else {
                terms.push(format!("{c}{mono}"));
            }
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Row-major coefficient grid of an F_p element in the nilpotent basis, for
/// JSON export.
pub fn grid(u: &BicyclicElt<Fp>, fp: &Fp) -> Vec<Vec<u64>> {
    let un = u.to_basis(Basis::Nil, fp);
    (0..un.p)
        .map(|i| (0..un.p).map(|j| *un.get(i, j)).collect())
        .collect()
}
