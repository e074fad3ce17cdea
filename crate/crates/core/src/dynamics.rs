//! GKLS generators and both pictures of the induced evolution:
//! states via ρ(t) = e^{𝕃t}ρ(0), observables via Q(t) = e^{𝕃*t}Q.
//!
//! Convention: 𝕃ρ = −i[H, ρ] + Σ_k γ_k (V_k ρ V_k† − ½{V_k†V_k, ρ}), with
//! the Hilbert–Schmidt adjoint 𝕃*Q = i[H, Q] + Σ_k γ_k (V_k† Q V_k −
//! ½{V_k†V_k, Q}). Any alternate sign convention flips consistently and
//! does not change reconstructibility verdicts.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hermdecomp::HermitianObservable;
use crate::linalg::{eigh, expm};
use crate::matrix::{anticommutator, commutator, ComplexMatrix};
use crate::scalar::{lit, to_f64, Scalar};
use crate::tol;

/// A jump operator with its nonnegative rate (units 1/time).
#[derive(Debug, Clone)]
pub struct Dissipator<F: Scalar> {
    pub op: ComplexMatrix<F>,
    pub rate: F,
}

/// Which side of the duality a superoperator matrix acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    Schrodinger,
    Heisenberg,
}

/// Matrix representation of 𝕃 or 𝕃* on column-stacked coordinates.
#[derive(Debug, Clone)]
pub struct Superoperator<F: Scalar> {
    pub dim: usize,
    pub matrix: ComplexMatrix<F>,
    pub picture: Picture,
}

/// Validated GKLS generator: Hamiltonian plus weighted jump operators.
#[derive(Debug)]
pub struct GklsGenerator<F: Scalar> {
    dim: usize,
    hamiltonian: HermitianObservable<F>,
    dissipators: Vec<Dissipator<F>>,
    schro_cache: OnceLock<ComplexMatrix<F>>,
    heis_cache: OnceLock<ComplexMatrix<F>>,
}

impl<F: Scalar> Clone for GklsGenerator<F> {
    fn clone(&self) -> Self {
        let cloned = GklsGenerator {
            dim: self.dim,
            hamiltonian: self.hamiltonian.clone(),
            dissipators: self.dissipators.clone(),
            schro_cache: OnceLock::new(),
            heis_cache: OnceLock::new(),
        };
        if let Some(m) = self.schro_cache.get() {
            let _ = cloned.schro_cache.set(m.clone());
        }
        if let Some(m) = self.heis_cache.get() {
            let _ = cloned.heis_cache.set(m.clone());
        }
        cloned
    }
}

impl<F: Scalar> GklsGenerator<F> {
    /// Validate dimensions and rates and build the generator.
    pub fn new(
        hamiltonian: HermitianObservable<F>,
        dissipators: Vec<(ComplexMatrix<F>, F)>,
    ) -> Result<Self> {
        let dim = hamiltonian.dim();
        let mut ds = Vec::with_capacity(dissipators.len());
        for (op, rate) in dissipators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::dim_mismatch(
                    "dissipator",
                    (dim, dim),
                    (op.rows(), op.cols()),
                ));
            }
            if !(rate >= F::zero() && rate.is_finite()) {
                return Err(Error::InvalidRate {
                    rate: to_f64(rate),
                });
            }
            ds.push(Dissipator { op, rate });
        }
        Ok(GklsGenerator {
            dim,
            hamiltonian,
            dissipators: ds,
            schro_cache: OnceLock::new(),
            heis_cache: OnceLock::new(),
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn hamiltonian(&self) -> &HermitianObservable<F> {
        &self.hamiltonian
    }

    #[inline]
    pub fn dissipators(&self) -> &[Dissipator<F>] {
        &self.dissipators
    }

    /// The defining action 𝕃ρ.
    pub fn apply(&self, rho: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
        self.check_dim(rho)?;
        let h = self.hamiltonian.matrix();
        let minus_i = Complex::new(F::zero(), -F::one());
        let mut out = commutator(h, rho).scale(minus_i);
        for d in &self.dissipators {
            let v = &d.op;
            let vdag = v.adjoint();
            let vdv = &vdag * v;
            let sandwich = &(v * rho) * &vdag;
            let anti = anticommutator(&vdv, rho).scale_re(lit(0.5));
            out = &out + &(&sandwich - &anti).scale_re(d.rate);
        }
        Ok(out)
    }

    /// The adjoint action 𝕃*Q; maps Hermitian to Hermitian.
    pub fn apply_adjoint(&self, q: &ComplexMatrix<F>) -> Result<ComplexMatrix<F>> {
        self.check_dim(q)?;
        let h = self.hamiltonian.matrix();
        let plus_i = Complex::new(F::zero(), F::one());
        let mut out = commutator(h, q).scale(plus_i);
        for d in &self.dissipators {
            let v = &d.op;
            let vdag = v.adjoint();
            let vdv = &vdag * v;
            let sandwich = &(&vdag * q) * v;
            let anti = anticommutator(&vdv, q).scale_re(lit(0.5));
            out = &out + &(&sandwich - &anti).scale_re(d.rate);
        }
        Ok(out)
    }

    fn check_dim(&self, m: &ComplexMatrix<F>) -> Result<()> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::dim_mismatch(
                "generator action",
                (self.dim, self.dim),
                (m.rows(), m.cols()),
            ));
        }
        Ok(())
    }

    /// Matrix of 𝕃 on column-stacked coordinates:
    /// −i(I⊗H − Hᵀ⊗I) + Σ γ (V̄⊗V − ½ I⊗V†V − ½ (V†V)ᵀ⊗I).
    pub fn schrodinger_superop(&self) -> Superoperator<F> {
        let matrix = self
            .schro_cache
            .get_or_init(|| self.build_superop(Picture::Schrodinger))
            .clone();
        Superoperator {
            dim: self.dim,
            matrix,
            picture: Picture::Schrodinger,
        }
    }

    /// Matrix of 𝕃*; equals the conjugate transpose of the Schrödinger
    /// matrix because column stacking is an orthonormal frame.
    pub fn heisenberg_superop(&self) -> Superoperator<F> {
        let matrix = self
            .heis_cache
            .get_or_init(|| self.build_superop(Picture::Heisenberg))
            .clone();
        Superoperator {
            dim: self.dim,
            matrix,
            picture: Picture::Heisenberg,
        }
    }

    fn build_superop(&self, picture: Picture) -> ComplexMatrix<F> {
        let n = self.dim;
        let ident = ComplexMatrix::<F>::identity(n);
        let h = self.hamiltonian.matrix();
        let half = lit::<F>(0.5);

        let commutator_part = &ident.kron(h) - &h.transpose().kron(&ident);
        let i_sign = match picture {
            Picture::Schrodinger => Complex::new(F::zero(), -F::one()),
            Picture::Heisenberg => Complex::new(F::zero(), F::one()),
        };
        let mut total = commutator_part.scale(i_sign);

        for d in &self.dissipators {
            let v = &d.op;
            let vdag = v.adjoint();
            let vdv = &vdag * v;
            let sandwich = match picture {
                Picture::Schrodinger => v.conj().kron(v),
                Picture::Heisenberg => v.transpose().kron(&vdag),
            };
            let left = ident.kron(&vdv).scale_re(half);
            let right = vdv.transpose().kron(&ident).scale_re(half);
            total = &total + &(&(&sandwich - &left) - &right).scale_re(d.rate);
        }
        total
    }

    /// ρ(t) = e^{𝕃t} ρ(0).
    pub fn propagate_state(
        &self,
        rho0: &DensityMatrix<F>,
        t: F,
    ) -> Result<PropagatedState<F>> {
        if !t.is_finite() {
            return Err(Error::InvalidInput {
                reason: "propagation time must be finite".into(),
            });
        }
        if rho0.dim() != self.dim {
            return Err(Error::dim_mismatch(
                "propagate_state",
                (self.dim, self.dim),
                (rho0.dim(), rho0.dim()),
            ));
        }
        let propagator = expm(&self.schrodinger_superop().matrix.scale_re(t))?;
        let evolved_vec = propagator.apply_vec(&rho0.matrix().vectorize()?)?;
        let evolved = ComplexMatrix::devectorize(&evolved_vec)?;

        let drift = tol::scaled::<F>(tol::EVOLVED_DRIFT);
        let herm_dev = evolved.hermiticity_deviation();
        if herm_dev > drift {
            return Err(Error::NotHermitian {
                deviation: to_f64(herm_dev),
            });
        }
        let trace_err = (evolved.trace().re - F::one()).abs().max(evolved.trace().im.abs());
        if trace_err > drift {
            return Err(Error::InvalidDensity {
                reason: "trace drifted during propagation",
                value: to_f64(trace_err),
            });
        }
        let matrix = HermitianObservable::force_hermitize(&evolved)?.into_matrix();
        let min_eig = eigh(&matrix)?
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(F::zero());
        let physical = min_eig >= -tol::scaled::<F>(tol::EVOLVED_EIGENVALUE);
        Ok(PropagatedState { matrix, physical })
    }

    /// Q(t) = e^{𝕃*t} Q; dual to [`propagate_state`](Self::propagate_state)
    /// so that Tr(Q·ρ(t)) = Tr(Q(t)·ρ(0)).
    pub fn propagate_observable(
        &self,
        q: &HermitianObservable<F>,
        t: F,
    ) -> Result<HermitianObservable<F>> {
        if !t.is_finite() {
            return Err(Error::InvalidInput {
                reason: "propagation time must be finite".into(),
            });
        }
        if q.dim() != self.dim {
            return Err(Error::dim_mismatch(
                "propagate_observable",
                (self.dim, self.dim),
                (q.dim(), q.dim()),
            ));
        }
        let propagator = expm(&self.heisenberg_superop().matrix.scale_re(t))?;
        let evolved_vec = propagator.apply_vec(&q.matrix().vectorize()?)?;
        let evolved = ComplexMatrix::devectorize(&evolved_vec)?;

        let scale = q.matrix().hs_norm().max(F::one());
        let herm_dev = evolved.hermiticity_deviation();
        if herm_dev > tol::scaled::<F>(tol::EVOLVED_DRIFT) * scale {
            return Err(Error::NotHermitian {
                deviation: to_f64(herm_dev),
            });
        }
        HermitianObservable::force_hermitize(&evolved)
    }
}

/// Result of state propagation: Hermitian and unit trace by construction;
/// `physical` records whether positivity survived (it can legitimately
/// fail for backward evolution, t < 0).
#[derive(Debug, Clone)]
pub struct PropagatedState<F: Scalar> {
    pub matrix: ComplexMatrix<F>,
    pub physical: bool,
}

impl<F: Scalar> PropagatedState<F> {
    /// Certify the propagated matrix as a density matrix.
    pub fn density(&self) -> Result<DensityMatrix<F>> {
        DensityMatrix::new(self.matrix.clone())
    }
}

/// Hermitian, unit-trace, positive-semidefinite state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<F: Scalar> {
    matrix: ComplexMatrix<F>,
}

impl<F: Scalar> DensityMatrix<F> {
    pub fn new(matrix: ComplexMatrix<F>) -> Result<Self> {
        matrix.require_square()?;
        let herm_dev = matrix.hermiticity_deviation();
        if herm_dev > tol::scaled::<F>(tol::HERMITICITY) {
            return Err(Error::NotHermitian {
                deviation: to_f64(herm_dev),
            });
        }
        let trace = matrix.trace();
        let trace_err = (trace.re - F::one()).abs().max(trace.im.abs());
        if trace_err > tol::scaled::<F>(tol::DENSITY_TRACE) {
            return Err(Error::InvalidDensity {
                reason: "trace must equal one",
                value: to_f64(trace_err),
            });
        }
        let min_eig = eigh(&matrix)?
            .eigenvalues
            .first()
            .copied()
            .unwrap_or(F::zero());
        if min_eig < -tol::scaled::<F>(tol::DENSITY_EIGENVALUE) {
            return Err(Error::InvalidDensity {
                reason: "negative eigenvalue",
                value: to_f64(min_eig),
            });
        }
        Ok(DensityMatrix { matrix })
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<F> {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The maximally mixed state I/n.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput {
                reason: "state dimension must be ≥ 1".into(),
            });
        }
        Ok(DensityMatrix {
            matrix: ComplexMatrix::identity(n).scale_re(F::one() / lit(n as f64)),
        })
    }

    /// Pure computational basis state |k⟩⟨k|.
    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidInput {
                reason: format!("basis index {k} out of range for dimension {n}"),
            });
        }
        Ok(DensityMatrix {
            matrix: ComplexMatrix::matrix_unit(n, k, k),
        })
    }
}
