//! State vectors over the field-labeled basis, the fiducial state, and
//! coherent states as displaced fiducials.
//!
//! Amplitudes are indexed by the integer value of the polynomial-basis
//! bitmask of the labeling field element. The tensor-product (qubit)
//! frame is reached through `FieldSpec::tensor_index`, with qubit i tied
//! to the self-dual basis element θ_i and qubit 1 leftmost.

use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec};
use crate::pauli::{self, PauliError, PhasePoint};

#[derive(Debug, Error)]
pub enum StateError {
    #[error("theta must lie in (-pi/2, pi/2), got {0}")]
    ThetaOutOfRange(f64),
    #[error("amplitude vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
    #[error("states belong to different fields")]
    FieldMismatch,
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("state is not permutation-symmetric: amplitudes at h={0} labels deviate by {1:e}")]
    NotSymmetric(u32, f64),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// 2^n complex amplitudes indexed by field elements.
#[derive(Debug, Clone)]
pub struct StateVector {
    field: Arc<FieldSpec>,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(field: Arc<FieldSpec>, amps: Vec<Complex64>) -> Result<Self, StateError> {
        if amps.len() != field.size() {
            return Err(StateError::DimensionMismatch(amps.len(), field.size()));
        }
        Ok(StateVector { field, amps })
    }

    /// |λ⟩: the computational basis state with field label λ.
    pub fn basis_state(field: Arc<FieldSpec>, label: FieldElement) -> Self {
        let mut amps = vec![Complex64::ZERO; field.size()];
        amps[label.index()] = Complex64::ONE;
        StateVector { field, amps }
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, label: FieldElement) -> Complex64 {
        self.amps[label.index()]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn check_normalized(&self, tol: f64) -> Result<(), StateError> {
        let nrm = self.norm();
        if (nrm - 1.0).abs() > tol {
            return Err(StateError::NotNormalized(nrm));
        }
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self, StateError> {
        let nrm = self.norm();
        if nrm < 1e-300 {
            return Err(StateError::NotNormalized(nrm));
        }
        for a in &mut self.amps {
            *a /= nrm;
        }
        Ok(self)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, StateError> {
        if *self.field != *other.field {
            return Err(StateError::FieldMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for a in &mut self.amps {
            *a *= c;
        }
        self
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector, StateError> {
        if *self.field != *other.field {
            return Err(StateError::FieldMismatch);
        }
        let amps = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(StateVector {
            field: Arc::clone(&self.field),
            amps,
        })
    }

    /// Max-norm distance, ignoring field identity.
    pub fn max_dev(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// JSON form: amplitudes as (re, im) pairs indexed 0..2^n-1 plus field
/// metadata.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub poly: String,
    pub amplitudes: Vec<(f64, f64)>,
}

impl StateVector {
    pub fn to_json(&self) -> StateJson {
        StateJson {
            n: self.field.n(),
            poly: format!("{:#x}", self.field.poly()),
            amplitudes: self.amps.iter().map(|a| (a.re, a.im)).collect(),
        }
    }

    pub fn from_json(field: Arc<FieldSpec>, json: &StateJson) -> Result<Self, StateError> {
        if json.n != field.n() {
            return Err(StateError::FieldMismatch);
        }
        let amps = json
            .amplitudes
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        StateVector::new(field, amps)
    }
}

/// ξ(ϑ) = (√(1+cos²ϑ) - cosϑ) e^{iϑ}, the branch fixed by the Q-function
/// axis-swap symmetry.
pub fn xi_from_theta(theta: f64) -> Result<Complex64, StateError> {
    if !theta.is_finite() || theta.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(StateError::ThetaOutOfRange(theta));
    }
    let c = theta.cos();
    let r = (1.0 + c * c).sqrt() - c;
    Ok(Complex64::from_polar(r, theta))
}

/// The symmetric angle ϑ = π/4 used by default throughout.
pub const THETA_SYMMETRIC: f64 = FRAC_PI_4;

/// Product state with amplitudes ξ^{h(κ)} / (1+|ξ|²)^{n/2}, for an
/// arbitrary complex ξ.
pub fn fiducial_xi(field: &Arc<FieldSpec>, xi: Complex64) -> StateVector {
    let n = field.n();
    let norm = (1.0 + xi.norm_sqr()).powf(n as f64 / 2.0);
    let mut pow = vec![Complex64::ONE; n + 1];
    for k in 1..=n {
        pow[k] = pow[k - 1] * xi;
    }
    let amps = field
        .elements()
        .map(|k| pow[field.h(k) as usize] / norm)
        .collect();
    StateVector {
        field: Arc::clone(field),
        amps,
    }
}

/// The fiducial state at angle ϑ; ϑ = π/4 gives the symmetric fiducial.
pub fn fiducial(field: &Arc<FieldSpec>, theta: f64) -> Result<StateVector, StateError> {
    Ok(fiducial_xi(field, xi_from_theta(theta)?))
}

/// Coherent state |α,β⟩ = D(α,β)|ξ⟩.
pub fn coherent_state(
    field: &Arc<FieldSpec>,
    point: PhasePoint,
    theta: f64,
) -> Result<StateVector, StateError> {
    let fid = fiducial(field, theta)?;
    Ok(pauli::displacement(point).apply(&fid)?)
}

/// Assembles an n-qubit state from per-qubit amplitude pairs (qubit 1 is
/// the leftmost factor, tied to θ_1).
pub fn from_qubit_factors(
    field: &Arc<FieldSpec>,
    factors: &[[Complex64; 2]],
) -> Result<StateVector, StateError> {
    let n = field.n();
    if factors.len() != n {
        return Err(StateError::DimensionMismatch(factors.len(), n));
    }
    let amps = field
        .elements()
        .map(|k| {
            let mask = field.sd_coords(k);
            (0..n)
                .map(|i| factors[i][((mask >> i) & 1) as usize])
                .product()
        })
        .collect();
    Ok(StateVector {
        field: Arc::clone(field),
        amps,
    })
}

/// Coefficients on the Dicke states |k,n⟩, k = 0..n. Errors with
/// `NotSymmetric` if the amplitudes are not constant on each h-class.
pub fn dicke_expansion(psi: &StateVector) -> Result<Vec<Complex64>, StateError> {
    let field = psi.field();
    let n = field.n();
    let mut sums = vec![Complex64::ZERO; n + 1];
    let mut counts = vec![0usize; n + 1];
    for k in field.elements() {
        let h = field.h(k) as usize;
        sums[h] += psi.amp(k);
        counts[h] += 1;
    }
    let means: Vec<Complex64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    for k in field.elements() {
        let h = field.h(k) as usize;
        let dev = (psi.amp(k) - means[h]).norm();
        if dev > 1e-10 {
            return Err(StateError::NotSymmetric(h as u32, dev));
        }
    }
    Ok((0..=n)
        .map(|k| means[k] * (binomial(n, k) as f64).sqrt())
        .collect())
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// The two real ξ values solving F|ξ⟩ = ±|ξ⟩ for a single qubit:
/// ξ± = ±√2 - 1.
pub fn fourier_eigen_candidates() -> (f64, f64) {
    (std::f64::consts::SQRT_2 - 1.0, -std::f64::consts::SQRT_2 - 1.0)
}

/// Applies the finite Fourier transform to the real-ξ product state and
/// reports the empirical eigenvalue sign together with the residual
/// ‖F|ξ⟩ - sign·|ξ⟩‖.
pub fn verify_fourier_eigen(field: &Arc<FieldSpec>, xi: f64) -> Result<(i32, f64), StateError> {
    let psi = fiducial_xi(field, Complex64::new(xi, 0.0));
    let fpsi = pauli::fourier(&psi)?;
    let ov = psi.inner(&fpsi)?;
    let sign = if ov.re >= 0.0 { 1 } else { -1 };
    let diff = fpsi.add(&psi.clone().scaled(Complex64::new(-(sign as f64), 0.0)))?;
    Ok((sign, diff.norm()))
}
