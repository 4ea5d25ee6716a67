//! Seeded random instances: fundamental symmetries in general position,
//! anticommuting self-adjoint strict contractions and J-invariant domains.

use rand::Rng;

use crate::angular::PartialContraction;
use crate::error::Result;
use crate::indefinite::SignatureSpace;
use crate::linalg::{self, c, CMat};

pub fn random_complex_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Unitary factor of the QR decomposition of a random matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    random_complex_matrix(n, n, rng).qr().q()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMat {
    linalg::hermitian_part(&random_complex_matrix(n, n, rng))
}

/// `J = U diag(1..1, −1..−1) U*` for a random unitary `U`.
pub fn random_space<R: Rng>(p: usize, q: usize, rng: &mut R) -> Result<SignatureSpace> {
    let u = random_unitary(p + q, rng);
    let d: Vec<f64> = (0..p + q).map(|k| if k < p { 1.0 } else { -1.0 }).collect();
    SignatureSpace::new(linalg::rebuild(&d, &u))
}

/// Self-adjoint `T` with `JT = −TJ` and `‖T‖ = norm`.
///
/// In the eigenbasis of `J` such a `T` has the off-diagonal block form
/// `[[0, K*], [K, 0]]`; `K` is random and rescaled.
pub fn random_anticommuting<R: Rng>(space: &SignatureSpace, norm: f64, rng: &mut R) -> CMat {
    let (p, q) = space.signature();
    let k = random_complex_matrix(q, p, rng);
    let kn = linalg::op_norm(&k);
    let k = if kn > 0.0 { k * linalg::real(norm / kn) } else { k };
    let n = p + q;
    let block = CMat::from_fn(n, n, |i, j| {
        if i >= p && j < p {
            k[(i - p, j)]
        } else if i < p && j >= p {
            k[(j - p, i)].conj()
        } else {
            c(0.0, 0.0)
        }
    });
    let hp = space.h_plus();
    let hm = space.h_minus();
    let basis = linalg::hstack(&hp, &hm);
    &basis * block * basis.adjoint()
}

/// Random subspace of dimension `k` inside span(`within`).
pub fn random_subspace_of<R: Rng>(within: &CMat, k: usize, rng: &mut R) -> CMat {
    let coeffs = random_complex_matrix(within.ncols(), k, rng);
    linalg::orth(&(within * coeffs), linalg::RANK_RTOL)
}

/// A random valid partial contraction: a random anticommuting strict
/// contraction restricted to `M₊ ⊕ M₋` with `M± ⊆ H±` of the given dimensions.
pub fn random_instance<R: Rng>(
    space: &SignatureSpace,
    m_plus: usize,
    m_minus: usize,
    norm: f64,
    rng: &mut R,
) -> Result<(CMat, PartialContraction)> {
    let t = random_anticommuting(space, norm, rng);
    let mp = random_subspace_of(&space.h_plus(), m_plus, rng);
    let mm = random_subspace_of(&space.h_minus(), m_minus, rng);
    let domain = linalg::hstack(&mp, &mm);
    let action = &t * &domain;
    let t0 = PartialContraction::new(space.clone(), domain, action)?;
    Ok((t, t0))
}

/// Random instance with dimension in `dims` and random domain dimensions that
/// leave a proper domain (codimension at least one).
pub fn random_problem<R: Rng>(
    dims: std::ops::RangeInclusive<usize>,
    rng: &mut R,
) -> Result<(CMat, PartialContraction)> {
    let n = rng.gen_range(dims);
    let p = rng.gen_range(1..n);
    let q = n - p;
    let space = random_space(p, q, rng)?;
    loop {
        let mp = rng.gen_range(0..=p);
        let mm = rng.gen_range(0..=q);
        if mp + mm < n {
            let norm = rng.gen_range(0.1..0.95);
            return random_instance(&space, mp, mm, norm, rng);
        }
    }
}
