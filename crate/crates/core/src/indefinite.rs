//! Finite-dimensional Krein spaces: a Hilbert space `C^n` together with a
//! fundamental symmetry `J` and the indefinite product `[f, g] = (Jf, g)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMat, CVec};

/// Tolerance for the structural identities `J = J*`, `J² = I`.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Gram eigenvalues below this magnitude count as numerically neutral.
pub const NEUTRAL_TOL: f64 = 1e-9;

/// `C^n` with a non-trivial fundamental symmetry `J`.
///
/// `J` need not be diagonal. Its eigenbasis is computed once at construction
/// and cached: the first `n_plus` columns span `H₊`, the rest span `H₋`.
#[derive(Debug, Clone)]
pub struct SignatureSpace {
    j: CMat,
    eigenbasis: CMat,
    n_plus: usize,
}

impl SignatureSpace {
    pub fn new(j: CMat) -> Result<Self> {
        let (rows, cols) = j.shape();
        if rows != cols {
            return Err(KreinError::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(KreinError::InvalidSymmetry("empty matrix".into()));
        }
        let scale = 1.0_f64.max(linalg::max_abs(&j));
        let herm = linalg::max_abs(&(&j - j.adjoint()));
        if herm > STRUCTURE_TOL * scale {
            return Err(KreinError::InvalidSymmetry(format!(
                "J is not self-adjoint (residual {herm:.3e})"
            )));
        }
        let inv = linalg::max_abs(&(&j * &j - linalg::identity(rows)));
        if inv > STRUCTURE_TOL * scale {
            return Err(KreinError::InvalidSymmetry(format!(
                "J is not an involution (residual {inv:.3e})"
            )));
        }
        let (vals, vecs) = linalg::eigh(&j);
        let n_minus = vals.iter().filter(|&&v| v < 0.0).count();
        let n_plus = rows - n_minus;
        if n_plus == 0 || n_minus == 0 {
            return Err(KreinError::InvalidSymmetry("J = ±I is trivial".into()));
        }
        // put the +1 eigenvectors first
        let order: Vec<usize> = (n_minus..rows).chain(0..n_minus).collect();
        let eigenbasis = CMat::from_fn(rows, rows, |i, k| vecs[(i, order[k])]);
        Ok(SignatureSpace {
            j: linalg::hermitian_part(&j),
            eigenbasis,
            n_plus,
        })
    }

    /// Diagonal signature with `p` plus signs followed by `q` minus signs.
    pub fn diagonal(p: usize, q: usize) -> Result<Self> {
        let d: Vec<f64> = std::iter::repeat_n(1.0, p)
            .chain(std::iter::repeat_n(-1.0, q))
            .collect();
        Self::new(linalg::diag_real(&d))
    }

    /// Diagonal signature from an explicit sign list.
    pub fn from_signs(signs: &[f64]) -> Result<Self> {
        Self::new(linalg::diag_real(signs))
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    /// `(dim H₊, dim H₋)`.
    pub fn signature(&self) -> (usize, usize) {
        (self.n_plus, self.dim() - self.n_plus)
    }

    /// Orthonormal basis of `H₊`.
    pub fn h_plus(&self) -> CMat {
        self.eigenbasis.columns(0, self.n_plus).into_owned()
    }

    /// Orthonormal basis of `H₋`.
    pub fn h_minus(&self) -> CMat {
        self.eigenbasis
            .columns(self.n_plus, self.dim() - self.n_plus)
            .into_owned()
    }

    pub fn check_vector(&self, f: &CVec) -> Result<()> {
        if f.len() != self.dim() {
            return Err(KreinError::DimensionMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        Ok(())
    }

    pub fn check_square(&self, m: &CMat) -> Result<()> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(KreinError::DimensionMismatch {
                expected: self.dim(),
                got: if m.nrows() != self.dim() { m.nrows() } else { m.ncols() },
            });
        }
        Ok(())
    }

    /// `[f, g] = (Jf, g)`, linear in `f`.
    pub fn indefinite_product(&self, f: &CVec, g: &CVec) -> Result<Complex64> {
        self.check_vector(f)?;
        self.check_vector(g)?;
        Ok(linalg::inner(&(&self.j * f), g))
    }

    /// `P± = ½(I ± J)`.
    pub fn fundamental_projections(&self) -> (CMat, CMat) {
        let n = self.dim();
        let half = linalg::real(0.5);
        let id = linalg::identity(n);
        ((&id + &self.j) * half, (&id - &self.j) * half)
    }

    /// `‖JA + AJ‖_max`, the anticommutation defect of a square matrix.
    pub fn anticommutator_residual(&self, a: &CMat) -> f64 {
        linalg::max_abs(&(&self.j * a + a * &self.j))
    }

    /// `‖JA − AJ‖_max`.
    pub fn commutator_residual(&self, a: &CMat) -> f64 {
        linalg::max_abs(&(&self.j * a - a * &self.j))
    }
}

/// A subspace of `C^n`, stored by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Orthonormalizes a spanning set (rank cutoff [`linalg::RANK_RTOL`]).
    pub fn from_span(spanning: &CMat) -> Self {
        Subspace {
            basis: linalg::orth(spanning, linalg::RANK_RTOL),
        }
    }

    pub fn from_vectors(n: usize, vectors: &[CVec]) -> Self {
        let m = CMat::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
        Self::from_span(&m)
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: CMat::zeros(n, 0),
        }
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> CMat {
        linalg::projector(&self.basis)
    }

    pub fn complement(&self) -> Subspace {
        Subspace {
            basis: linalg::complement(&self.basis),
        }
    }

    pub fn contains(&self, f: &CVec, tol: f64) -> bool {
        let resid = f - self.projector() * f;
        resid.norm() <= tol * f.norm().max(1.0)
    }

    /// Largest principal angle to another subspace (π/2 if dimensions differ).
    pub fn angle_to(&self, other: &Subspace) -> f64 {
        linalg::max_principal_angle(&self.basis, &other.basis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefiniteClass {
    Positive,
    Negative,
    Nonnegative,
    Nonpositive,
    Indefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub class: DefiniteClass,
    /// Best `α` with `|[f, f]| ≥ α‖f‖²` on the subspace, zero unless definite.
    pub uniform_margin: f64,
    /// Set when some Gram eigenvalue fell inside the neutral band.
    pub numerically_neutral: bool,
    pub gram_min: f64,
    pub gram_max: f64,
}

/// Classify a subspace by the spectrum of its indefinite Gram matrix `B*JB`.
pub fn classify_subspace(space: &SignatureSpace, l: &Subspace) -> Result<Classification> {
    if l.ambient_dim() != space.dim() {
        return Err(KreinError::DimensionMismatch {
            expected: space.dim(),
            got: l.ambient_dim(),
        });
    }
    if l.dim() == 0 {
        return Err(KreinError::ZeroSubspace);
    }
    let b = l.basis();
    let gram = b.adjoint() * space.j() * b;
    let (vals, _) = linalg::eigh(&gram);
    let min = vals[0];
    let max = vals[vals.len() - 1];
    let neutral = vals.iter().any(|v| v.abs() < NEUTRAL_TOL);
    let (class, margin) = if min >= NEUTRAL_TOL {
        (DefiniteClass::Positive, min)
    } else if max <= -NEUTRAL_TOL {
        (DefiniteClass::Negative, -max)
    } else if min > -NEUTRAL_TOL {
        (DefiniteClass::Nonnegative, 0.0)
    } else if max < NEUTRAL_TOL {
        (DefiniteClass::Nonpositive, 0.0)
    } else {
        (DefiniteClass::Indefinite, 0.0)
    };
    Ok(Classification {
        class,
        uniform_margin: margin,
        numerically_neutral: neutral,
        gram_min: min,
        gram_max: max,
    })
}
