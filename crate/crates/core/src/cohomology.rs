//! Group cohomology of the elementary abelian Galois group with
//! coefficients in the homology module, computed from the tensor product of
//! rank-many minimal cyclic resolutions.
//!
//! The cochain complex in low degrees is `M -> M^(r+1) -> M^rho` with
//! `rho = (r+1) + C(r+1, 2) = (p+1)(p+3)/8`. Degree-two summands are ordered
//! with the square blocks first (`u_0, ..., u_r`) and then the mixed blocks
//! `(j, k)` lexicographically; the signs of the totalization are baked into
//! the second differential in exactly that order, which keeps them
//! auditable.

use crate::context::PrimeContext;
use crate::galois::CVector;
use crate::invariants::ActionModule;
use crate::matrix::FpMatrix;
use crate::{Error, Result};
use std::collections::HashMap;

/// Ordered list of the mixed-index pairs `(j, k)`, `j < k`.
pub fn mixed_pairs(rank: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for j in 0..rank {
        for k in j + 1..rank {
            pairs.push((j, k));
        }
    }
    pairs
}

/// The cochain complex `M -> M^(r+1) -> M^rho` together with the generator
/// action data it was assembled from.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub p: u64,
    pub rank: usize,
    pub rho: usize,
    pub module: ActionModule,
    pub norms: Vec<FpMatrix>,
    /// `(r+1) p^2` rows by `p^2` columns; row-block `j` is `I - A_j`.
    pub d0: FpMatrix,
    /// `rho p^2` rows by `(r+1) p^2` columns.
    pub d1: FpMatrix,
}

impl CochainComplex {
    /// Assembles the two differentials and asserts `d1 * d0 = 0`.
    pub fn build(ctx: &PrimeContext) -> Self {
        let p = ctx.p();
        let n = (p * p) as usize;
        let rank = ctx.rank();
        let rho = rank + rank * (rank - 1) / 2;
        debug_assert_eq!(rho, ((p + 1) * (p + 3) / 8) as usize);
        let module = ActionModule::new(ctx);
        let id = FpMatrix::identity(p, n);
        let one_minus: Vec<FpMatrix> = module
            .matrices
            .iter()
            .map(|a| id.sub(a).unwrap())
            .collect();
        let norms: Vec<FpMatrix> = module
            .matrices
            .iter()
            .map(|a| {
                let mut acc = FpMatrix::identity(p, n);
                let mut pw = FpMatrix::identity(p, n);
                for _ in 1..p {
                    pw = pw.mul(a).unwrap();
                    acc = acc.add(&pw).unwrap();
                }
                acc
            })
            .collect();

        let mut d0 = FpMatrix::zero(p, rank * n, n);
        for j in 0..rank {
            d0.set_block(j * n, 0, &one_minus[j]);
        }

        let pairs = mixed_pairs(rank);
        let mut d1 = FpMatrix::zero(p, rho * n, rank * n);
        for j in 0..rank {
            d1.set_block(j * n, j * n, &norms[j]);
        }
        for (t, &(j, k)) in pairs.iter().enumerate() {
            let row = (rank + t) * n;
            // block (j,k): (1 - tau_k) m_j - (1 - tau_j) m_k
            d1.set_block(row, j * n, &one_minus[k]);
            let neg = FpMatrix::zero(p, n, n).sub(&one_minus[j]).unwrap();
            d1.set_block(row, k * n, &neg);
        }

        let prod = d1.mul(&d0).unwrap();
        assert!(prod.is_zero(), "d1 * d0 must vanish");

        CochainComplex {
            p,
            rank,
            rho,
            module,
            norms,
            d0,
            d1,
        }
    }

    pub fn module_dim(&self) -> usize {
        (self.p * self.p) as usize
    }

    /// `dim H^1 = dim ker(d1) - rank(d0)`.
    pub fn h1_dimension(&self) -> usize {
        let ker = self.d1.cols - self.d1.rank();
        ker - self.d0.rank()
    }

    /// Splits a stacked vector into `count` module-sized blocks.
    fn split_blocks(&self, v: &[u64], count: usize) -> Vec<Vec<u64>> {
        let n = self.module_dim();
        (0..count).map(|i| v[i * n..(i + 1) * n].to_vec()).collect()
    }
}

/// Values `(phi(a_j), phi(c_{j,k}))` of a homomorphism on the classifying
/// elements of an extension; the input to the kernel decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Instance {
    pub u: Vec<Vec<u64>>,
    pub w: Vec<Vec<u64>>,
}

impl D2Instance {
    pub fn zero(complex: &CochainComplex) -> Self {
        let n = complex.module_dim();
        D2Instance {
            u: vec![vec![0; n]; complex.rank],
            w: vec![vec![0; n]; complex.rho - complex.rank],
        }
    }

    pub fn validate(&self, complex: &CochainComplex) -> Result<()> {
        let n = complex.module_dim();
        if self.u.len() != complex.rank
            || self.w.len() != complex.rho - complex.rank
            || self.u.iter().chain(&self.w).any(|v| v.len() != n)
        {
            return Err(Error::DimensionMismatch(
                "instance blocks do not match the complex".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of the kernel decision: a certificate tuple, or a refusal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum D2Verdict {
    InKernel(Vec<Vec<u64>>),
    NotInKernel,
}

/// Decides membership of `(-u_j, w_{j,k})` in the image of the degree-one
/// differential, i.e. solvability of
///   `u_j = -N_j m_j`, `w_{j,k} = (1 - tau_k) m_j - (1 - tau_j) m_k`.
/// A returned certificate is re-verified by substitution.
pub fn d2_kernel_test(complex: &CochainComplex, inst: &D2Instance) -> Result<D2Verdict> {
    inst.validate(complex)?;
    let p = complex.p;
    let n = complex.module_dim();
    let mut target = Vec::with_capacity(complex.rho * n);
    for u in &inst.u {
        target.extend(u.iter().map(|&x| (p - x % p) % p));
    }
    for w in &inst.w {
        target.extend(w.iter().map(|&x| x % p));
    }
    match complex.d1.solve(&target)? {
        None => Ok(D2Verdict::NotInKernel),
        Some(x) => {
            let ms = complex.split_blocks(&x, complex.rank);
            assert!(
                verify_certificate(complex, inst, &ms),
                "solver produced a certificate that fails substitution"
            );
            Ok(D2Verdict::InKernel(ms))
        }
    }
}

/// Substitution check of the two displayed conditions.
pub fn verify_certificate(
    complex: &CochainComplex,
    inst: &D2Instance,
    ms: &[Vec<u64>],
) -> bool {
    let p = complex.p;
    for j in 0..complex.rank {
        let nm = complex.norms[j].mul_vec(&ms[j]).unwrap();
        // u_j + N_j m_j = 0
        if !nm
            .iter()
            .zip(&inst.u[j])
            .all(|(&a, &b)| (a + b) % p == 0)
        {
            return false;
        }
    }
    let n = complex.module_dim();
    let id = FpMatrix::identity(p, n);
    for (t, (j, k)) in mixed_pairs(complex.rank).into_iter().enumerate() {
        let omj = id.sub(&complex.module.matrices[j]).unwrap();
        let omk = id.sub(&complex.module.matrices[k]).unwrap();
        let lhs = omk.mul_vec(&ms[j]).unwrap();
        let rhs = omj.mul_vec(&ms[k]).unwrap();
        let expect = &inst.w[t];
        if !(0..n).all(|i| (lhs[i] + p - rhs[i]) % p == expect[i] % p) {
            return false;
        }
    }
    true
}

/// Fast-path decision valid for `p >= 5`, where the norms act as zero: any
/// nonzero square block refutes membership outright, and only the mixed
/// block system is solved.
pub fn d2_kernel_test_vanishing_norm(
    complex: &CochainComplex,
    inst: &D2Instance,
) -> Result<D2Verdict> {
    if complex.p < 5 {
        return Err(Error::RequiresLargerPrime(complex.p));
    }
    inst.validate(complex)?;
    debug_assert!(complex.norms.iter().all(|m| m.is_zero()));
    if inst.u.iter().any(|v| v.iter().any(|&x| x % complex.p != 0)) {
        return Ok(D2Verdict::NotInKernel);
    }
    let n = complex.module_dim();
    let mixed_rows = (complex.rho - complex.rank) * n;
    let mut d1_mixed = FpMatrix::zero(complex.p, mixed_rows, complex.rank * n);
    for i in 0..mixed_rows {
        for j in 0..complex.rank * n {
            d1_mixed[(i, j)] = complex.d1[(complex.rank * n + i, j)];
        }
    }
    let mut target = Vec::with_capacity(mixed_rows);
    for w in &inst.w {
        target.extend(w.iter().map(|&x| x % complex.p));
    }
    match d1_mixed.solve(&target)? {
        None => Ok(D2Verdict::NotInKernel),
        Some(x) => {
            let ms = complex.split_blocks(&x, complex.rank);
            assert!(verify_certificate(complex, inst, &ms));
            Ok(D2Verdict::InKernel(ms))
        }
    }
}

// ---------------------------------------------------------------------------
// Bar-resolution cocycles and their translation
// ---------------------------------------------------------------------------

/// A map from the group to the module, tabulated on every element (the
/// group has `p^(r+1)` elements, which stays small for the supported p).
#[derive(Debug, Clone)]
pub struct BarCochain1 {
    pub values: Vec<Vec<u64>>,
}

impl BarCochain1 {
    pub fn value(&self, q: &CVector) -> &Vec<u64> {
        &self.values[q.rank_index()]
    }
}

/// A map from pairs of group elements to the module, tabulated sparsely:
/// only the pairs the translation consumes need entries.
#[derive(Debug, Clone, Default)]
pub struct BarCochain2 {
    pub values: HashMap<(usize, usize), Vec<u64>>,
}

impl BarCochain2 {
    pub fn insert(&mut self, q1: &CVector, q2: &CVector, v: Vec<u64>) {
        self.values.insert((q1.rank_index(), q2.rank_index()), v);
    }

    pub fn value(&self, q1: &CVector, q2: &CVector) -> Result<&Vec<u64>> {
        self.values
            .get(&(q1.rank_index(), q2.rank_index()))
            .ok_or_else(|| {
                Error::MissingTableEntry(format!("({:?}, {:?})", q1.coords(), q2.coords()))
            })
    }
}

/// Translation of a degree-one bar cochain to the tensor complex:
/// `m_j = -phi(tau_j)`.
pub fn translate_bar_1cocycle(ctx: &PrimeContext, tbl: &BarCochain1) -> Vec<Vec<u64>> {
    let p = ctx.p();
    (0..ctx.rank())
        .map(|j| {
            tbl.value(&CVector::generator(ctx, j))
                .iter()
                .map(|&x| (p - x % p) % p)
                .collect()
        })
        .collect()
}

/// Translated degree-two cochain: the square blocks and the mixed blocks in
/// the fixed summand order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain2 {
    pub n: Vec<Vec<u64>>,
    pub n_pairs: Vec<Vec<u64>>,
}

/// Translation of a degree-two bar cochain:
/// `n_j = -sum_i phi(tau_j^i, tau_j)`, `n_{j,k} = phi(tau_k, tau_j) -
/// phi(tau_j, tau_k)`. Needs table entries exactly on those argument pairs.
pub fn translate_bar_2cocycle(ctx: &PrimeContext, tbl: &BarCochain2) -> Result<Cochain2> {
    let p = ctx.p();
    let dim = (p * p) as usize;
    let mut n = Vec::new();
    for j in 0..ctx.rank() {
        let tau = CVector::generator(ctx, j);
        let mut acc = vec![0u64; dim];
        let mut power = CVector::zero(ctx);
        for _ in 0..p {
            let v = tbl.value(&power, &tau)?;
            for (a, &b) in acc.iter_mut().zip(v) {
                *a = (*a + b) % p;
            }
            power = power.add(&tau);
        }
        n.push(acc.into_iter().map(|x| (p - x) % p).collect());
    }
    let mut n_pairs = Vec::new();
    for (j, k) in mixed_pairs(ctx.rank()) {
        let tj = CVector::generator(ctx, j);
        let tk = CVector::generator(ctx, k);
        let a = tbl.value(&tk, &tj)?;
        let b = tbl.value(&tj, &tk)?;
        n_pairs.push(
            a.iter()
                .zip(b)
                .map(|(&x, &y)| (x + p - y % p) % p)
                .collect(),
        );
    }
    Ok(Cochain2 { n, n_pairs })
}

/// The principal crossed homomorphism `phi(g) = (g - 1) m`, tabulated.
pub fn bar_coboundary(ctx: &PrimeContext, module: &ActionModule, m: &[u64]) -> BarCochain1 {
    let p = ctx.p();
    let order = p.pow(ctx.rank() as u32) as usize;
    let values = (0..order)
        .map(|idx| {
            let q = CVector::from_rank(ctx, idx);
            let gm = module.action_of(&q).mul_vec(m).unwrap();
            gm.iter().zip(m).map(|(&a, &b)| (a + p - b % p) % p).collect()
        })
        .collect();
    BarCochain1 { values }
}

/// Extends generator values to a full crossed homomorphism by
/// `phi(g h) = phi(g) + g phi(h)`, peeling generators in index order. The
/// result satisfies the cocycle identity exactly when the generator tuple
/// lies in the kernel of the degree-one differential.
pub fn crossed_hom_from_generator_values(
    ctx: &PrimeContext,
    module: &ActionModule,
    gen_values: &[Vec<u64>],
) -> BarCochain1 {
    let p = ctx.p();
    let dim = module.dim();
    let order = p.pow(ctx.rank() as u32) as usize;
    let mut values: Vec<Option<Vec<u64>>> = vec![None; order];
    values[0] = Some(vec![0; dim]);
    for idx in 1..order {
        let q = CVector::from_rank(ctx, idx);
        let j = q.coords().iter().position(|&c| c != 0).unwrap();
        let prev = {
            let mut coords = q.coords().to_vec();
            coords[j] -= 1;
            CVector::new(ctx, coords).unwrap()
        };
        let phi_prev = values[prev.rank_index()].clone().expect("filled in order");
        let shifted = module.action_of(&prev).mul_vec(&gen_values[j]).unwrap();
        values[idx] = Some(
            phi_prev
                .iter()
                .zip(&shifted)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
        );
    }
    BarCochain1 {
        values: values.into_iter().map(|v| v.unwrap()).collect(),
    }
}

/// Exhaustive check of the crossed-homomorphism identity
/// `phi(q1 q2) = phi(q1) + q1 phi(q2)`.
pub fn is_crossed_hom(ctx: &PrimeContext, module: &ActionModule, tbl: &BarCochain1) -> bool {
    let p = ctx.p();
    let order = p.pow(ctx.rank() as u32) as usize;
    for i in 0..order {
        let q1 = CVector::from_rank(ctx, i);
        let act = module.action_of(&q1);
        for j in 0..order {
            let q2 = CVector::from_rank(ctx, j);
            let lhs = tbl.value(&q1.add(&q2));
            let shifted = act.mul_vec(tbl.value(&q2)).unwrap();
            let rhs: Vec<u64> = tbl
                .value(&q1)
                .iter()
                .zip(&shifted)
                .map(|(&a, &b)| (a + b) % p)
                .collect();
            if *lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The coboundary `dm(q1, q2) = q1 m(q2) - m(q1 q2) + m(q1)` of an
/// arbitrary 1-cochain `m`, tabulated on the pairs the degree-two
/// translation consumes.
pub fn bar_2coboundary_on_needed_pairs(
    ctx: &PrimeContext,
    module: &ActionModule,
    m: &BarCochain1,
) -> BarCochain2 {
    let p = ctx.p();
    let mut tbl = BarCochain2::default();
    let mut record = |q1: &CVector, q2: &CVector| {
        let shifted = module.action_of(q1).mul_vec(m.value(q2)).unwrap();
        let sum = q1.add(q2);
        let v: Vec<u64> = (0..module.dim())
            .map(|i| {
                (shifted[i] + m.value(q1)[i] + 2 * p - m.value(&sum)[i] % p) % p
            })
            .collect();
        tbl.insert(q1, q2, v);
    };
    for j in 0..ctx.rank() {
        let tau = CVector::generator(ctx, j);
        let mut power = CVector::zero(ctx);
        for _ in 0..p {
            record(&power, &tau);
            power = power.add(&tau);
        }
    }
    for (j, k) in mixed_pairs(ctx.rank()) {
        let tj = CVector::generator(ctx, j);
        let tk = CVector::generator(ctx, k);
        record(&tk, &tj);
        record(&tj, &tk);
    }
    tbl
}

// ---------------------------------------------------------------------------
// Explicit small extensions and their factor sets
// ---------------------------------------------------------------------------

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct SmallGroup {
    pub order: usize,
    mul_table: Vec<u32>,
    inv_table: Vec<u32>,
    pub identity: u32,
}

impl SmallGroup {
    pub fn from_mul_table(mul_table: Vec<Vec<u32>>) -> Result<Self> {
        let order = mul_table.len();
        if mul_table.iter().any(|row| row.len() != order) {
            return Err(Error::Invalid("multiplication table is not square".into()));
        }
        let flat: Vec<u32> = mul_table.into_iter().flatten().collect();
        let mul = |a: u32, b: u32| flat[a as usize * order + b as usize];
        let identity = (0..order as u32)
            .find(|&e| (0..order as u32).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::Invalid("group has no identity".into()))?;
        let mut inv_table = vec![u32::MAX; order];
        for a in 0..order as u32 {
            let inv = (0..order as u32)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| Error::Invalid(format!("element {a} has no inverse")))?;
            inv_table[a as usize] = inv;
        }
        Ok(SmallGroup {
            order,
            mul_table: flat,
            inv_table,
            identity,
        })
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul_table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv_table[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = self.identity;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }
}

/// An extension `1 -> N -> G -> Q -> 1` with `Q` elementary abelian of the
/// given rank, presented concretely: a projection of every element to its
/// Q-coordinates and chosen section images of the generators. The section
/// on all of Q is the normalized power-product
/// `s(tau_0^t0 ... ) = s(tau_0)^t0 ...`, so `s(1) = 1` automatically.
#[derive(Debug, Clone)]
pub struct ExtensionFixture {
    pub group: SmallGroup,
    pub p: u64,
    pub rank: usize,
    pub proj: Vec<Vec<u64>>,
    pub section_gens: Vec<u32>,
}

impl ExtensionFixture {
    pub fn in_kernel(&self, g: u32) -> bool {
        self.proj[g as usize].iter().all(|&c| c == 0)
    }

    /// Section value on the element with the given Q-coordinates.
    pub fn section(&self, coords: &[u64]) -> u32 {
        let mut acc = self.group.identity;
        for (j, &t) in coords.iter().enumerate() {
            acc = self.group.mul(acc, self.group.pow(self.section_gens[j], t));
        }
        acc
    }

    pub fn omega(&self, q1: &[u64], q2: &[u64]) -> Result<u32> {
        let prod: Vec<u64> = q1
            .iter()
            .zip(q2)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        let w = self.group.mul(
            self.group.mul(self.section(q1), self.section(q2)),
            self.group.inv(self.section(&prod)),
        );
        if !self.in_kernel(w) {
            return Err(Error::BadSection(
                "factor-set value escapes the kernel subgroup".into(),
            ));
        }
        Ok(w)
    }
}

/// The classifying data of an extension: `a_j = s(tau_j)^p` and the
/// commutators `c_{j,k} = [s(tau_k), s(tau_j)]`, all in `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSetData {
    pub a: Vec<u32>,
    pub c: Vec<u32>,
}

/// Computes the factor set of the fixture and the classifying elements,
/// verifying the identities that tie them together:
/// `omega(tau_j^t, tau_j) = 1` for `t < p-1`, `a_j = omega(tau_j^(p-1),
/// tau_j)`, and `c_{j,k} = omega(tau_k, tau_j) omega(tau_j, tau_k)^(-1)`.
pub fn omega_from_extension(fx: &ExtensionFixture) -> Result<FactorSetData> {
    let g = &fx.group;
    // Section sanity: generators project to the standard basis.
    for (j, &s) in fx.section_gens.iter().enumerate() {
        let coords = &fx.proj[s as usize];
        let ok = coords
            .iter()
            .enumerate()
            .all(|(i, &c)| if i == j { c == 1 } else { c == 0 });
        if !ok {
            return Err(Error::BadSection(format!(
                "section generator {j} does not project to the standard basis vector"
            )));
        }
    }
    // Projection must be a homomorphism to (Z/p)^rank on the sampled grid.
    let mut a = Vec::new();
    for j in 0..fx.rank {
        let sj = fx.section_gens[j];
        let aj = g.pow(sj, fx.p);
        if !fx.in_kernel(aj) {
            return Err(Error::BadSection(format!("s(tau_{j})^p escapes the kernel")));
        }
        a.push(aj);
        // omega(tau_j^t, tau_j) = 1 for t < p-1, and a_j at t = p-1.
        let mut coords_t = vec![0u64; fx.rank];
        for t in 0..fx.p {
            let mut gen = vec![0u64; fx.rank];
            gen[j] = 1;
            let w = fx.omega(&coords_t, &gen)?;
            if t < fx.p - 1 {
                if w != g.identity {
                    return Err(Error::BadSection(format!(
                        "omega(tau_{j}^{t}, tau_{j}) is not trivial"
                    )));
                }
            } else if w != aj {
                return Err(Error::BadSection(format!(
                    "omega(tau_{j}^(p-1), tau_{j}) differs from s(tau_{j})^p"
                )));
            }
            coords_t[j] = (coords_t[j] + 1) % fx.p;
        }
    }
    let mut c = Vec::new();
    for (j, k) in mixed_pairs(fx.rank) {
        let cjk = g.commutator(fx.section_gens[k], fx.section_gens[j]);
        if !fx.in_kernel(cjk) {
            return Err(Error::BadSection(format!(
                "[s(tau_{k}), s(tau_{j})] escapes the kernel"
            )));
        }
        let mut ej = vec![0u64; fx.rank];
        ej[j] = 1;
        let mut ek = vec![0u64; fx.rank];
        ek[k] = 1;
        let w1 = fx.omega(&ek, &ej)?;
        let w2 = fx.omega(&ej, &ek)?;
        if cjk != g.mul(w1, g.inv(w2)) {
            return Err(Error::BadSection(format!(
                "commutator identity fails for the pair ({j}, {k})"
            )));
        }
        c.push(cjk);
    }
    Ok(FactorSetData { a, c })
}

/// Split extension `Q x Z/p`: every classifying element is trivial.
pub fn split_fixture(p: u64, rank: usize) -> ExtensionFixture {
    let q_order = p.pow(rank as u32) as usize;
    let order = q_order * p as usize;
    // element index = q_index * p + n
    let encode = |q: usize, n: u64| (q * p as usize + n as usize) as u32;
    let q_coords = |idx: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(rank);
        let mut x = idx;
        for _ in 0..rank {
            v.push((x % p as usize) as u64);
            x /= p as usize;
        }
        v
    };
    let q_index = |coords: &[u64]| -> usize {
        coords
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p as usize + c as usize)
    };
    let mut table = vec![vec![0u32; order]; order];
    for i in 0..order {
        for j in 0..order {
            let (qi, ni) = (i / p as usize, (i % p as usize) as u64);
            let (qj, nj) = (j / p as usize, (j % p as usize) as u64);
            let ci = q_coords(qi);
            let cj = q_coords(qj);
            let sum: Vec<u64> = ci.iter().zip(&cj).map(|(&a, &b)| (a + b) % p).collect();
            table[i][j] = encode(q_index(&sum), (ni + nj) % p);
        }
    }
    let group = SmallGroup::from_mul_table(table).unwrap();
    let proj = (0..order).map(|i| q_coords(i / p as usize)).collect();
    let section_gens = (0..rank)
        .map(|j| {
            let mut coords = vec![0u64; rank];
            coords[j] = 1;
            encode(q_index(&coords), 0)
        })
        .collect();
    ExtensionFixture {
        group,
        p,
        rank,
        proj,
        section_gens,
    }
}

/// The cyclic extension `Z/p^2` of `Q = Z/p` by `N = pZ/p^2`: the carrying
/// cocycle; `a_0` is the generator of `N`.
pub fn cyclic_p2_fixture(p: u64) -> ExtensionFixture {
    let order = (p * p) as usize;
    let mut table = vec![vec![0u32; order]; order];
    for i in 0..order {
        for j in 0..order {
            table[i][j] = ((i + j) % order) as u32;
        }
    }
    let group = SmallGroup::from_mul_table(table).unwrap();
    let proj = (0..order).map(|i| vec![(i as u64) % p]).collect();
    ExtensionFixture {
        group,
        p,
        rank: 1,
        proj,
        section_gens: vec![1],
    }
}

/// The mod-p Heisenberg group (upper unitriangular 3x3): center `Z/p`,
/// quotient `(Z/p)^2`; both `a_j` trivial, the commutator `c_{0,1}` a
/// central generator.
pub fn heisenberg_fixture(p: u64) -> ExtensionFixture {
    let pu = p as usize;
    let order = pu * pu * pu;
    let encode = |a: u64, b: u64, c: u64| (a as usize * pu * pu + b as usize * pu + c as usize) as u32;
    let decode = |i: usize| {
        (
            (i / (pu * pu)) as u64,
            ((i / pu) % pu) as u64,
            (i % pu) as u64,
        )
    };
    let mut table = vec![vec![0u32; order]; order];
    for i in 0..order {
        for j in 0..order {
            let (a, b, c) = decode(i);
            let (a2, b2, c2) = decode(j);
            table[i][j] = encode((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p);
        }
    }
    let group = SmallGroup::from_mul_table(table).unwrap();
    let proj = (0..order)
        .map(|i| {
            let (a, b, _) = decode(i);
            vec![a, b]
        })
        .collect();
    ExtensionFixture {
        group,
        p,
        rank: 2,
        proj,
        section_gens: vec![encode(1, 0, 0), encode(0, 1, 0)],
    }
}

/// Turns factor-set data and a homomorphism on `N` (assumed cyclic of order
/// p, generated by `n_gen`, with `phi(n_gen) = phi_gen`) into a kernel-test
/// instance: `u_j = phi(a_j)`, `w_{j,k} = phi(c_{j,k})`.
pub fn instance_from_extension(
    complex: &CochainComplex,
    fx: &ExtensionFixture,
    data: &FactorSetData,
    n_gen: u32,
    phi_gen: &[u64],
) -> Result<D2Instance> {
    if fx.rank != complex.rank || fx.p != complex.p {
        return Err(Error::DimensionMismatch(
            "fixture rank does not match the complex".into(),
        ));
    }
    let p = complex.p;
    let dlog = |n: u32| -> Result<u64> {
        let mut acc = fx.group.identity;
        for k in 0..p {
            if acc == n {
                return Ok(k);
            }
            acc = fx.group.mul(acc, n_gen);
        }
        Err(Error::Invalid("element is not a power of the given generator".into()))
    };
    let scale = |k: u64| -> Vec<u64> { phi_gen.iter().map(|&x| x * k % p).collect() };
    let u = data.a.iter().map(|&a| dlog(a).map(&scale)).collect::<Result<_>>()?;
    let w = data.c.iter().map(|&c| dlog(c).map(&scale)).collect::<Result<_>>()?;
    Ok(D2Instance { u, w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn complex_shapes_p3() {
        let c = ctx(3);
        let complex = CochainComplex::build(&c);
        assert_eq!(complex.rho, 3);
        assert_eq!((complex.d0.rows, complex.d0.cols), (18, 9));
        assert_eq!((complex.d1.rows, complex.d1.cols), (27, 18));
    }

    #[test]
    fn complex_shapes_p5() {
        let c = ctx(5);
        let complex = CochainComplex::build(&c);
        assert_eq!(complex.rho, 6);
        assert_eq!((complex.d1.rows, complex.d1.cols), (150, 75));
    }

    #[test]
    fn h1_dimension_table_small() {
        assert_eq!(CochainComplex::build(&ctx(3)).h1_dimension(), 9);
        assert_eq!(CochainComplex::build(&ctx(5)).h1_dimension(), 33);
    }

    #[test]
    fn complex_property_larger_primes() {
        // build() asserts d1 * d0 = 0; exercise it at p = 7 and p = 11.
        let c7 = CochainComplex::build(&ctx(7));
        assert_eq!(c7.rho, 10);
        let c11 = CochainComplex::build(&ctx(11));
        assert_eq!(c11.rho, 21);
    }

    #[test]
    fn zero_instance_in_kernel() {
        let complex = CochainComplex::build(&ctx(3));
        let inst = D2Instance::zero(&complex);
        match d2_kernel_test(&complex, &inst).unwrap() {
            D2Verdict::InKernel(ms) => {
                assert!(ms.iter().flatten().all(|&x| x == 0));
            }
            D2Verdict::NotInKernel => panic!("zero instance must be in the kernel"),
        }
    }

    fn random_in_image_instance(
        complex: &CochainComplex,
        rng: &mut ChaCha8Rng,
    ) -> (D2Instance, Vec<Vec<u64>>) {
        let p = complex.p;
        let n = complex.module_dim();
        let ms: Vec<Vec<u64>> = (0..complex.rank)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        // u_j = -N_j m_j, w_{j,k} = (1 - tau_k) m_j - (1 - tau_j) m_k.
        let id = FpMatrix::identity(p, n);
        let u = (0..complex.rank)
            .map(|j| {
                complex.norms[j]
                    .mul_vec(&ms[j])
                    .unwrap()
                    .into_iter()
                    .map(|x| (p - x) % p)
                    .collect()
            })
            .collect();
        let w = mixed_pairs(complex.rank)
            .into_iter()
            .map(|(j, k)| {
                let omk = id.sub(&complex.module.matrices[k]).unwrap();
                let omj = id.sub(&complex.module.matrices[j]).unwrap();
                let a = omk.mul_vec(&ms[j]).unwrap();
                let b = omj.mul_vec(&ms[k]).unwrap();
                (0..n).map(|i| (a[i] + p - b[i]) % p).collect()
            })
            .collect();
        (D2Instance { u, w }, ms)
    }

    #[test]
    fn constructed_instances_accepted_with_valid_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for p in [3u64, 5] {
            let complex = CochainComplex::build(&ctx(p));
            for _ in 0..5 {
                let (inst, _) = random_in_image_instance(&complex, &mut rng);
                match d2_kernel_test(&complex, &inst).unwrap() {
                    D2Verdict::InKernel(ms) => {
                        assert!(verify_certificate(&complex, &inst, &ms));
                    }
                    D2Verdict::NotInKernel => panic!("in-image instance rejected"),
                }
            }
        }
    }

    #[test]
    fn nonzero_square_block_rejected_p5() {
        // For p >= 5 the norms act as zero, so no instance with a nonzero
        // square block can be in the image.
        let complex = CochainComplex::build(&ctx(5));
        let mut inst = D2Instance::zero(&complex);
        inst.u[0][7] = 1;
        assert_eq!(d2_kernel_test(&complex, &inst).unwrap(), D2Verdict::NotInKernel);
        assert_eq!(
            d2_kernel_test_vanishing_norm(&complex, &inst).unwrap(),
            D2Verdict::NotInKernel
        );
    }

    #[test]
    fn vanishing_norm_tester_rejected_at_p3() {
        let complex = CochainComplex::build(&ctx(3));
        let inst = D2Instance::zero(&complex);
        assert!(matches!(
            d2_kernel_test_vanishing_norm(&complex, &inst),
            Err(Error::RequiresLargerPrime(3))
        ));
    }

    #[test]
    fn testers_agree_p5() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let complex = CochainComplex::build(&ctx(5));
        for i in 0..12 {
            let inst = if i % 2 == 0 {
                random_in_image_instance(&complex, &mut rng).0
            } else {
                // random garbage instance (usually not in the image)
                let n = complex.module_dim();
                D2Instance {
                    u: (0..complex.rank)
                        .map(|_| (0..n).map(|_| rng.gen_range(0..5)).collect())
                        .collect(),
                    w: (0..complex.rho - complex.rank)
                        .map(|_| (0..n).map(|_| rng.gen_range(0..5)).collect())
                        .collect(),
                }
            };
            let slow = d2_kernel_test(&complex, &inst).unwrap();
            let fast = d2_kernel_test_vanishing_norm(&complex, &inst).unwrap();
            match (slow, fast) {
                (D2Verdict::InKernel(_), D2Verdict::InKernel(_)) => {}
                (D2Verdict::NotInKernel, D2Verdict::NotInKernel) => {}
                other => panic!("testers disagree: {other:?}"),
            }
        }
    }

    #[test]
    fn translate_zero_tables() {
        let c = ctx(3);
        let module = ActionModule::new(&c);
        let zero1 = bar_coboundary(&c, &module, &vec![0; 9]);
        let t = translate_bar_1cocycle(&c, &zero1);
        assert!(t.iter().flatten().all(|&x| x == 0));
        let zero2 = bar_2coboundary_on_needed_pairs(&c, &module, &zero1);
        let t2 = translate_bar_2cocycle(&c, &zero2).unwrap();
        assert!(t2.n.iter().flatten().all(|&x| x == 0));
        assert!(t2.n_pairs.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn missing_table_entry_reported() {
        let c = ctx(3);
        let tbl = BarCochain2::default();
        assert!(matches!(
            translate_bar_2cocycle(&c, &tbl),
            Err(Error::MissingTableEntry(_))
        ));
    }

    #[test]
    fn translated_coboundary_is_d0_image() {
        // phi(g) = (g - 1) m translates to exactly d0(m).
        let c = ctx(3);
        let complex = CochainComplex::build(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..10 {
            let m: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let tbl = bar_coboundary(&c, &complex.module, &m);
            assert!(is_crossed_hom(&c, &complex.module, &tbl));
            let translated: Vec<u64> = translate_bar_1cocycle(&c, &tbl).concat();
            let expected = complex.d0.mul_vec(&m).unwrap();
            assert_eq!(translated, expected);
            assert!(complex.d0.image_basis().contains(&translated));
        }
    }

    #[test]
    fn translated_cocycle_lies_in_kernel() {
        // Generator tuples drawn from ker(d1) extend to genuine crossed
        // homomorphisms; their translation returns the tuple.
        let c = ctx(3);
        let complex = CochainComplex::build(&c);
        let kernel = complex.d1.kernel_basis();
        let ker_subspace = kernel.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let basis = kernel.basis_rows();
        for _ in 0..6 {
            // random kernel element
            let mut v = vec![0u64; complex.d1.cols];
            for row in &basis {
                let coef = rng.gen_range(0..3);
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = (*a + coef * b) % 3;
                }
            }
            let tuple = complex.split_blocks(&v, complex.rank);
            // phi(tau_j) = -m_j extends to a crossed homomorphism.
            let gen_values: Vec<Vec<u64>> = tuple
                .iter()
                .map(|m| m.iter().map(|&x| (3 - x) % 3).collect())
                .collect();
            let tbl = crossed_hom_from_generator_values(&c, &complex.module, &gen_values);
            assert!(is_crossed_hom(&c, &complex.module, &tbl));
            let translated: Vec<u64> = translate_bar_1cocycle(&c, &tbl).concat();
            assert_eq!(translated, v);
            assert!(ker_subspace.contains(&translated));
        }
    }

    #[test]
    fn translated_2coboundary_matches_d1_of_translation() {
        // The chain-map property in degree two: translating the bar
        // coboundary of a 1-cochain m equals d1 applied to the translated
        // tuple (-m(tau_j))_j.
        let c = ctx(3);
        let complex = CochainComplex::build(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..6 {
            let order = 27usize;
            let values: Vec<Vec<u64>> = (0..order)
                .map(|_| (0..9).map(|_| rng.gen_range(0..3)).collect())
                .collect();
            let mut m = BarCochain1 { values };
            // normalized cochain: m(1) = 0
            m.values[0] = vec![0; 9];
            let d2tbl = bar_2coboundary_on_needed_pairs(&c, &complex.module, &m);
            let translated = translate_bar_2cocycle(&c, &d2tbl).unwrap();
            let tuple: Vec<u64> = translate_bar_1cocycle(&c, &m).concat();
            let image = complex.d1.mul_vec(&tuple).unwrap();
            let got: Vec<u64> = translated
                .n
                .iter()
                .flatten()
                .chain(translated.n_pairs.iter().flatten())
                .copied()
                .collect();
            assert_eq!(got, image);
        }
    }

    #[test]
    fn split_extension_is_trivial() {
        let fx = split_fixture(3, 2);
        let data = omega_from_extension(&fx).unwrap();
        assert!(data.a.iter().all(|&a| a == fx.group.identity));
        assert!(data.c.iter().all(|&c| c == fx.group.identity));
        // omega is identically trivial.
        for q1 in 0..9usize {
            for q2 in 0..9usize {
                let c1 = &fx.proj[q1 * 3];
                let c2 = &fx.proj[q2 * 3];
                assert_eq!(fx.omega(c1, c2).unwrap(), fx.group.identity);
            }
        }
    }

    #[test]
    fn cyclic_p2_extension_carries() {
        let fx = cyclic_p2_fixture(5);
        let data = omega_from_extension(&fx).unwrap();
        // a_0 = s(tau_0)^p = p, the generator of N.
        assert_eq!(data.a, vec![5]);
        assert!(data.c.is_empty());
    }

    #[test]
    fn heisenberg_extension_commutator() {
        let fx = heisenberg_fixture(3);
        let data = omega_from_extension(&fx).unwrap();
        assert_eq!(data.a, vec![fx.group.identity; 2]);
        assert_eq!(data.c.len(), 1);
        // central generator (0, 0, +-1), not the identity
        let c01 = data.c[0];
        assert!(fx.in_kernel(c01));
        assert_ne!(c01, fx.group.identity);
    }

    #[test]
    fn bad_section_rejected() {
        let mut fx = split_fixture(3, 2);
        // Corrupt a section generator so it projects off the basis vector.
        fx.section_gens[0] = fx.group.identity;
        assert!(matches!(
            omega_from_extension(&fx),
            Err(Error::BadSection(_))
        ));
    }

    #[test]
    fn heisenberg_instance_feeds_kernel_test() {
        // At p = 3 the Heisenberg quotient has the same rank as the Galois
        // group, so its classifying data gives a genuine test instance:
        // a_j = 1 forces u_j = 0, and the instance is decided by the mixed
        // block alone.
        let c = ctx(3);
        let complex = CochainComplex::build(&c);
        let fx = heisenberg_fixture(3);
        let data = omega_from_extension(&fx).unwrap();
        let n_gen = 1u32; // (0,0,1)
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let phi_gen: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
        let inst = instance_from_extension(&complex, &fx, &data, n_gen, &phi_gen).unwrap();
        assert!(inst.u.iter().flatten().all(|&x| x == 0));
        // Verdict is whichever it is; just exercise the path end to end.
        let _ = d2_kernel_test(&complex, &inst).unwrap();
    }
}
