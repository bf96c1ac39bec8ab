//! The homology module: the two-variable group ring viewed as a
//! `p^2`-dimensional space over `F_p` with the Galois generators acting by
//! multiplication by their units, plus the invariant subspaces and kernel
//! comparisons attached to it.
//!
//! The monomial ordering is fixed once and for all: `y0^i y1^j` sits at
//! index `i * p + j`. All matrices and JSON output use it.

use crate::context::PrimeContext;
use crate::galois::{action_unit, CVector};
use crate::group_ring::{Basis, BicyclicElt};
use crate::matrix::{FpMatrix, Subspace};
use crate::scalar::{Fp, Ring};
use crate::{Error, Result};

/// Index of `y0^i y1^j` in the fixed monomial ordering.
pub fn monomial_index(p: usize, i: usize, j: usize) -> usize {
    i * p + j
}

/// Coordinate vector of an element in the fixed monomial basis.
pub fn to_vector(u: &BicyclicElt<Fp>, fp: &Fp) -> Vec<u64> {
    u.to_basis(Basis::Nil, fp).coeffs
}

/// Element with the given coordinate vector.
pub fn from_vector(p: usize, v: &[u64]) -> BicyclicElt<Fp> {
    BicyclicElt {
        coeffs: v.to_vec(),
        p,
        basis: Basis::Nil,
    }
}

/// The matrix of `m -> u * m` in the monomial basis: column `k` is the
/// image of the k-th basis monomial.
pub fn action_matrix(ctx: &PrimeContext, u: &BicyclicElt<Fp>) -> FpMatrix {
    let p = ctx.p_usize();
    let fp = Fp::new(ctx);
    let un = u.to_basis(Basis::Nil, &fp);
    let mut m = FpMatrix::zero(ctx.p(), p * p, p * p);
    for a in 0..p {
        for b in 0..p {
            let col = monomial_index(p, a, b);
            for i in 0..p - a {
                for j in 0..p - b {
                    let c = *un.get(i, j);
                    if c != 0 {
                        m[(monomial_index(p, i + a, j + b), col)] = c;
                    }
                }
            }
        }
    }
    m
}

/// The matrix of the exponent-scaling automorphism
/// `e0^i e1^j -> e0^(ia) e1^(ja)` in the monomial basis.
pub fn twist_matrix(ctx: &PrimeContext, a: u64) -> Result<FpMatrix> {
    let p = ctx.p_usize();
    let fp = Fp::new(ctx);
    let mut m = FpMatrix::zero(ctx.p(), p * p, p * p);
    for i in 0..p {
        for j in 0..p {
            let mut mono = BicyclicElt::zero(&fp, p, Basis::Nil);
            mono.set(i, j, 1);
            let image = to_vector(&mono.twist(a, &fp)?, &fp);
            let col = monomial_index(p, i, j);
            for (row, &v) in image.iter().enumerate() {
                if v != 0 {
                    m[(row, col)] = v;
                }
            }
        }
    }
    Ok(m)
}

/// The module together with the generator units and their action matrices.
#[derive(Debug, Clone)]
pub struct ActionModule {
    p: u64,
    pub units: Vec<BicyclicElt<Fp>>,
    pub matrices: Vec<FpMatrix>,
}

impl ActionModule {
    pub fn new(ctx: &PrimeContext) -> Self {
        let units: Vec<_> = (0..ctx.rank())
            .map(|j| action_unit(ctx, &CVector::generator(ctx, j)).elt)
            .collect();
        let matrices = units.iter().map(|u| action_matrix(ctx, u)).collect();
        ActionModule {
            p: ctx.p(),
            units,
            matrices,
        }
    }

    pub fn dim(&self) -> usize {
        (self.p * self.p) as usize
    }

    /// Matrix of the action of an arbitrary element, as the product of
    /// generator powers.
    pub fn action_of(&self, q: &CVector) -> FpMatrix {
        let n = self.dim();
        let mut acc = FpMatrix::identity(self.p, n);
        for (j, &c) in q.coords().iter().enumerate() {
            for _ in 0..c {
                acc = self.matrices[j].mul(&acc).unwrap();
            }
        }
        acc
    }

    /// The invariant subspace: the intersection of the kernels of
    /// `(generator - 1)` over the `r + 1` generators. Generators suffice
    /// because the units multiply along the group law.
    pub fn invariants(&self) -> Subspace {
        let n = self.dim();
        let id = FpMatrix::identity(self.p, n);
        let mut space: Option<Subspace> = None;
        for m in &self.matrices {
            let ker = m.sub(&id).unwrap().kernel_basis();
            space = Some(match space {
                None => ker,
                Some(s) => s.intersect(&ker).unwrap(),
            });
        }
        space.unwrap_or_else(|| Subspace::full(self.p, n))
    }
}

/// The image of the open-curve homology inside the module: the span of the
/// monomials divisible by `y0 y1`; dimension `(p-1)^2`.
pub fn open_homology_subspace(ctx: &PrimeContext) -> Subspace {
    let p = ctx.p_usize();
    let mut vectors = Vec::new();
    for i in 1..p {
        for j in 1..p {
            let mut v = vec![0u64; p * p];
            v[monomial_index(p, i, j)] = 1;
            vectors.push(v);
        }
    }
    Subspace::from_vectors(ctx.p(), p * p, vectors)
}

/// `y0^(p-1) (1 + y1)^k`: annihilated by `1 - e0`; one of the generators of
/// the uniform invariant subspace.
pub fn norm_row(ctx: &PrimeContext, k: usize) -> BicyclicElt<Fp> {
    let p = ctx.p_usize();
    let fp = Fp::new(ctx);
    let mut base = BicyclicElt::zero(&fp, p, Basis::Nil);
    base.set(p - 1, 0, 1);
    let mut shift = BicyclicElt::zero(&fp, p, Basis::Nil);
    shift.set(0, 0, 1);
    shift.set(0, 1, 1);
    base.mul(&shift.pow(k as u64, &fp), &fp)
}

/// `y1^(p-1) (1 + y0)^k`: annihilated by `1 - e1`.
pub fn norm_col(ctx: &PrimeContext, k: usize) -> BicyclicElt<Fp> {
    norm_row(ctx, k).swap()
}

/// The uniform invariant subspace: the span of the `norm_row(k)` and
/// `norm_col(k)` for `0 <= k <= p-1`; dimension `2p - 1`, with basis the
/// monomials having at least one exponent equal to `p - 1`.
pub fn edge_subspace(ctx: &PrimeContext) -> Subspace {
    let p = ctx.p_usize();
    let fp = Fp::new(ctx);
    let mut vectors = Vec::new();
    for k in 0..p {
        vectors.push(to_vector(&norm_row(ctx, k), &fp));
        vectors.push(to_vector(&norm_col(ctx, k), &fp));
    }
    Subspace::from_vectors(ctx.p(), p * p, vectors)
}

/// The invariant vectors beyond the edge subspace: the symmetric and
/// antisymmetric deep-diagonal vectors for `p >= 5`, extended by the two
/// vectors known to complete a basis at `p = 7`.
pub fn extra_invariants(ctx: &PrimeContext) -> Vec<BicyclicElt<Fp>> {
    let p = ctx.p_usize();
    let fp = Fp::new(ctx);
    if p < 5 {
        return vec![];
    }
    let mono = |i: usize, j: usize, c: i64| -> BicyclicElt<Fp> {
        let mut m = BicyclicElt::zero(&fp, p, Basis::Nil);
        m.set(i, j, fp.from_i64(c));
        m
    };
    // s1 = y0^(p-2) y1^(p-2), a1 = y0^(p-3) y1^(p-3) (y0 - y1)
    let s1 = mono(p - 2, p - 2, 1);
    let a1 = mono(p - 2, p - 3, 1).add(&mono(p - 3, p - 2, -1), &fp);
    let mut out = vec![s1, a1];
    if p == 7 {
        // s2 = y0^3 y1^3 (y0^2 - y0 y1 + y1^2) + y0^4 y1^5
        let s2 = mono(5, 3, 1)
            .add(&mono(4, 4, -1), &fp)
            .add(&mono(3, 5, 1), &fp)
            .add(&mono(4, 5, 1), &fp);
        // a2 = y0^2 y1^2 (y0^3 - y0^2 y1 + y0 y1^2 - y1^3)
        //      + y0^3 y1^4 (y0 - 2 y1) - y0^4 y1^5
        let a2 = mono(5, 2, 1)
            .add(&mono(4, 3, -1), &fp)
            .add(&mono(3, 4, 1), &fp)
            .add(&mono(2, 5, -1), &fp)
            .add(&mono(4, 4, 1), &fp)
            .add(&mono(3, 5, -2), &fp)
            .add(&mono(4, 5, -1), &fp);
        out.push(s2);
        out.push(a2);
    }
    out
}

/// Kernel of `(action of q) - 1`.
pub fn kernel_of(ctx: &PrimeContext, q: &CVector) -> Subspace {
    let p = ctx.p_usize();
    let b = action_unit(ctx, q);
    let m = action_matrix(ctx, &b.elt);
    let id = FpMatrix::identity(ctx.p(), p * p);
    m.sub(&id).unwrap().kernel_basis()
}

/// Kernel-transport equality for a generator index `1 <= i <= r` and a unit
/// `a` mod p: the kernel at the scaled index equals the twisted kernel.
pub fn kernel_transport_check(ctx: &PrimeContext, a: u64, i: usize) -> Result<bool> {
    if i == 0 {
        return Err(Error::TransportAtZero);
    }
    if i > ctx.r() {
        return Err(Error::Invalid(format!("generator index {i} out of range")));
    }
    let p = ctx.p();
    if a % p == 0 {
        return Err(Error::ZeroTwist);
    }
    let ia = (i as u64 * a) % p;
    let idx = if ia as usize <= ctx.r() {
        ia as usize
    } else {
        (p - ia) as usize
    };
    let lhs = kernel_of(ctx, &CVector::generator(ctx, idx));
    let rho = twist_matrix(ctx, a)?;
    let rhs = kernel_of(ctx, &CVector::generator(ctx, i)).apply(&rho)?;
    Ok(lhs == rhs)
}

/// Dimension report for the invariant computations, used by the CLI.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InvariantReport {
    pub p: u64,
    #[serde(rename = "dim_MQ")]
    pub dim_mq: usize,
    #[serde(rename = "dim_H1U")]
    pub dim_h1u: usize,
    #[serde(rename = "dim_MQ_cap_H1U")]
    pub dim_mq_cap_h1u: usize,
    #[serde(rename = "codim_in_MQ")]
    pub codim_in_mq: usize,
    pub dim_edge_subspace: usize,
    pub kernel_dims: Vec<usize>,
    pub kernels_equal_for_nonzero_generators: bool,
    #[serde(rename = "MQ_basis")]
    pub mq_basis: Vec<Vec<u64>>,
}

pub fn invariant_report(ctx: &PrimeContext) -> InvariantReport {
    let module = ActionModule::new(ctx);
    let mq = module.invariants();
    let h1u = open_homology_subspace(ctx);
    let cap = mq.intersect(&h1u).unwrap();
    let kernels: Vec<Subspace> = (0..ctx.rank())
        .map(|i| kernel_of(ctx, &CVector::generator(ctx, i)))
        .collect();
    let kernels_equal = kernels[1..].windows(2).all(|w| w[0] == w[1]);
    InvariantReport {
        p: ctx.p(),
        dim_mq: mq.dim(),
        dim_h1u: h1u.dim(),
        dim_mq_cap_h1u: cap.dim(),
        codim_in_mq: cap.codim_in(&mq).unwrap(),
        dim_edge_subspace: edge_subspace(ctx).dim(),
        kernel_dims: kernels.iter().map(|k| k.dim()).collect(),
        kernels_equal_for_nonzero_generators: kernels_equal,
        mq_basis: mq.basis_rows(),
    }
}

/// Evidence report for the open question whether the nonzero-generator
/// kernels coincide for larger primes; informational only, never asserted.
#[derive(Debug, Clone, serde::Serialize)]
pub struct KernelQuestionProbe {
    pub p: u64,
    pub kernel_dims: Vec<usize>,
    pub kernels_all_equal: bool,
    pub invariants_equal_two_kernel_intersection: bool,
}

pub fn kernel_question_probe(ctx: &PrimeContext) -> KernelQuestionProbe {
    let module = ActionModule::new(ctx);
    let kernels: Vec<Subspace> = (0..ctx.rank())
        .map(|i| kernel_of(ctx, &CVector::generator(ctx, i)))
        .collect();
    let all_equal = kernels[1..].windows(2).all(|w| w[0] == w[1]);
    let mq = module.invariants();
    let cap01 = kernels[0].intersect(&kernels[1]).unwrap();
    KernelQuestionProbe {
        p: ctx.p(),
        kernel_dims: kernels.iter().map(|k| k.dim()).collect(),
        kernels_all_equal: all_equal,
        invariants_equal_two_kernel_intersection: mq == cap01,
    }
}
