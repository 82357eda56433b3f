//! The generalized Pauli group on n qubits: phase operators Z_α, shift
//! operators X_β, Hermitian displacements D(α,β), the finite Fourier
//! transform, symplectic rotations, the scaling (squeezing) permutation
//! S_ζ, and XOR gates.
//!
//! All operators act matrix-free on state vectors as label permutations
//! plus phases. Dense matrices exist only behind a testing facade capped
//! at n <= 6.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec};
use crate::states::StateVector;

#[derive(Debug, Error, PartialEq)]
pub enum PauliError {
    #[error("element {0:#x} does not belong to GF(2^{1})")]
    FieldMismatch(u32, usize),
    #[error("squeezing by zero is not invertible")]
    ZeroScaling,
    #[error("qubit index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("XOR gate requires two distinct qubits, got {0} twice")]
    EqualIndices(usize),
    #[error("dense matrices are capped at n <= {0}, requested n = {1}")]
    DenseTooLarge(usize, usize),
}

/// A point (α, β) of the 2^n × 2^n phase-space grid; α is the horizontal
/// axis, β the vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasePoint {
    pub alpha: FieldElement,
    pub beta: FieldElement,
}

impl PhasePoint {
    pub fn new(alpha: FieldElement, beta: FieldElement) -> Self {
        PhasePoint { alpha, beta }
    }

    pub fn origin() -> Self {
        PhasePoint::new(FieldElement::ZERO, FieldElement::ZERO)
    }
}

fn check_element(field: &FieldSpec, alpha: FieldElement) -> Result<(), PauliError> {
    if alpha.index() >= field.size() {
        return Err(PauliError::FieldMismatch(alpha.bits(), field.n()));
    }
    Ok(())
}

/// Largest n for which `Operator::dense` materializes a matrix.
pub const DENSE_CAP: usize = 6;

/// A unitary operator on the 2^n-dimensional space, realized as a
/// matrix-free map on state vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    Z(FieldElement),
    X(FieldElement),
    Displacement(PhasePoint),
    Fourier,
    /// z-rotation P_μ: diagonal in the X eigenbasis, (α,β) ↦ (α, β+μα).
    RotP(FieldElement),
    /// x-rotation Q_ν: diagonal in the Z eigenbasis, (α,β) ↦ (α+νβ, β).
    RotQ(FieldElement),
    Squeeze(FieldElement),
    Xor {
        p: usize,
        q: usize,
    },
}

impl Operator {
    /// S_ζ = Σ_λ |λ⟩⟨ζλ|; rejects ζ = 0 (λ ↦ ζλ would not be invertible).
    pub fn squeeze(zeta: FieldElement) -> Result<Operator, PauliError> {
        if zeta.is_zero() {
            return Err(PauliError::ZeroScaling);
        }
        Ok(Operator::Squeeze(zeta))
    }

    /// XOR_{p,q} with 1-based qubit indices, p controlling, q the target.
    pub fn xor(p: usize, q: usize, n: usize) -> Result<Operator, PauliError> {
        if p < 1 || p > n {
            return Err(PauliError::IndexOutOfRange(p, n));
        }
        if q < 1 || q > n {
            return Err(PauliError::IndexOutOfRange(q, n));
        }
        if p == q {
            return Err(PauliError::EqualIndices(p));
        }
        Ok(Operator::Xor { p, q })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, PauliError> {
        let field = Arc::clone(psi.field());
        match *self {
            Operator::Z(alpha) => apply_z(alpha, psi),
            Operator::X(beta) => apply_x(beta, psi),
            Operator::Displacement(p) => {
                check_element(&field, p.alpha)?;
                check_element(&field, p.beta)?;
                let phase = displacement_phase(&field, p);
                let amps = field
                    .elements()
                    .map(|lam| {
                        let chi = field.character(field.mul(p.alpha, lam)) as f64;
                        phase * chi * psi.amp(field.add(lam, p.beta))
                    })
                    .collect();
                Ok(StateVector::new(field, amps).expect("same dimension"))
            }
            Operator::Fourier => fourier(psi),
            Operator::RotQ(nu) => {
                check_element(&field, nu)?;
                let c = rot_coeffs(&field, nu);
                let amps = field
                    .elements()
                    .map(|lam| c[lam.index()] * psi.amp(lam))
                    .collect();
                Ok(StateVector::new(field, amps).expect("same dimension"))
            }
            Operator::RotP(mu) => {
                // P_μ is the same diagonal conjugated into the X eigenbasis.
                check_element(&field, mu)?;
                let c = rot_coeffs(&field, mu);
                let tilde = fourier(psi)?;
                let mut tilde = tilde;
                for lam in field.elements() {
                    tilde.amps_mut()[lam.index()] *= c[lam.index()];
                }
                fourier(&tilde)
            }
            Operator::Squeeze(zeta) => {
                if zeta.is_zero() {
                    return Err(PauliError::ZeroScaling);
                }
                check_element(&field, zeta)?;
                let amps = field
                    .elements()
                    .map(|lam| psi.amp(field.mul(zeta, lam)))
                    .collect();
                Ok(StateVector::new(field, amps).expect("same dimension"))
            }
            Operator::Xor { p, q } => {
                let n = field.n();
                if p < 1 || p > n {
                    return Err(PauliError::IndexOutOfRange(p, n));
                }
                if q < 1 || q > n {
                    return Err(PauliError::IndexOutOfRange(q, n));
                }
                if p == q {
                    return Err(PauliError::EqualIndices(p));
                }
                let mut amps = vec![Complex64::ZERO; field.size()];
                for lam in field.elements() {
                    let mask = field.sd_coords(lam);
                    let out = if mask & (1 << (p - 1)) != 0 {
                        mask ^ (1 << (q - 1))
                    } else {
                        mask
                    };
                    amps[field.from_sd_coords(out).index()] = psi.amp(lam);
                }
                Ok(StateVector::new(field, amps).expect("same dimension"))
            }
        }
    }

    /// Dense matrix (row-major), built column by column from the
    /// matrix-free action. Testing facade only; capped at n <= DENSE_CAP.
    pub fn dense(&self, field: &Arc<FieldSpec>) -> Result<Vec<Vec<Complex64>>, PauliError> {
        if field.n() > DENSE_CAP {
            return Err(PauliError::DenseTooLarge(DENSE_CAP, field.n()));
        }
        let dim = field.size();
        let mut rows = vec![vec![Complex64::ZERO; dim]; dim];
        for col in 0..dim {
            let e = StateVector::basis_state(Arc::clone(field), FieldElement::new(col as u32));
            let out = self.apply(&e)?;
            for row in 0..dim {
                rows[row][col] = out.amps()[row];
            }
        }
        Ok(rows)
    }
}

/// Z_α: multiplies the amplitude at label λ by χ(αλ).
pub fn apply_z(alpha: FieldElement, psi: &StateVector) -> Result<StateVector, PauliError> {
    let field = Arc::clone(psi.field());
    check_element(&field, alpha)?;
    let amps = field
        .elements()
        .map(|lam| psi.amp(lam) * field.character(field.mul(alpha, lam)) as f64)
        .collect();
    Ok(StateVector::new(field, amps).expect("same dimension"))
}

/// X_β: moves the amplitude at λ to λ + β (bitmask XOR in the canonical
/// indexing, since field addition is XOR of coefficient vectors).
pub fn apply_x(beta: FieldElement, psi: &StateVector) -> Result<StateVector, PauliError> {
    let field = Arc::clone(psi.field());
    check_element(&field, beta)?;
    let amps = field
        .elements()
        .map(|lam| psi.amp(field.add(lam, beta)))
        .collect();
    Ok(StateVector::new(field, amps).expect("same dimension"))
}

/// The Hermitizing phase e^{iΦ(α,β)} = i^{Σ_i a_i b_i}: a factor i for
/// each qubit on which both σ_z and σ_x act.
pub fn displacement_phase(field: &FieldSpec, p: PhasePoint) -> Complex64 {
    let m = (field.sd_coords(p.alpha) & field.sd_coords(p.beta)).count_ones();
    Complex64::i().powu(m)
}

/// D(α,β) = e^{iΦ} Z_α X_β: unitary, Hermitian, trace-orthonormal.
pub fn displacement(p: PhasePoint) -> Operator {
    Operator::Displacement(p)
}

/// Unnormalized Walsh-Hadamard transform in place.
pub(crate) fn fwht(data: &mut [Complex64]) {
    let mut half = 1;
    while half < data.len() {
        let mut i = 0;
        while i < data.len() {
            for j in i..i + half {
                let (a, b) = (data[j], data[j + half]);
                data[j] = a + b;
                data[j + half] = a - b;
            }
            i += 2 * half;
        }
        half *= 2;
    }
}

/// Finite Fourier transform ψ'_λ = 2^{-n/2} Σ_{λ'} χ(λλ') ψ_{λ'}. Since
/// χ(λλ') = (-1)^{Σ a_i b_i}, this is a Hadamard transform in the
/// self-dual (tensor) frame; F² = 1 and F Z_μ F = X_μ.
pub fn fourier(psi: &StateVector) -> Result<StateVector, PauliError> {
    let field = Arc::clone(psi.field());
    let dim = field.size();
    let mut buf = vec![Complex64::ZERO; dim];
    for lam in field.elements() {
        buf[field.tensor_index(lam)] = psi.amp(lam);
    }
    fwht(&mut buf);
    let scale = 1.0 / (dim as f64).sqrt();
    let amps = field
        .elements()
        .map(|lam| buf[field.tensor_index(lam)] * scale)
        .collect();
    Ok(StateVector::new(field, amps).expect("same dimension"))
}

/// Rotation coefficients c_{λ,ν} (indexed by the polynomial-basis label
/// bits), built from the recurrence
/// c_{λ+α,ν} = c_{α,ν} c_{λ,ν} χ(ναλ), c_{0,ν} = 1,
/// seeded on the self-dual basis by c_{θ_i,ν} = i^{tr(ν θ_i²)}.
pub fn rot_coeffs(field: &FieldSpec, nu: FieldElement) -> Vec<Complex64> {
    let n = field.n();
    let mut seed = vec![Complex64::ONE; n];
    for (i, &theta) in field.self_dual_basis().iter().enumerate() {
        let t = field.trace(field.mul(nu, field.mul(theta, theta)));
        if t == 1 {
            seed[i] = Complex64::i();
        }
    }
    let mut c = vec![Complex64::ONE; field.size()];
    // Walk self-dual masks in increasing order; stripping the lowest set
    // coordinate always lands on an already-computed value.
    for mask in 1u32..field.size() as u32 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let theta = field.self_dual_basis()[i];
        let lam_rest = field.from_sd_coords(rest);
        let chi = field.character(field.mul(nu, field.mul(theta, lam_rest))) as f64;
        let lam = field.from_sd_coords(mask);
        c[lam.index()] = seed[i] * c[lam_rest.index()] * chi;
    }
    c
}

/// P_μ as an operator value.
pub fn rot_p(mu: FieldElement) -> Operator {
    Operator::RotP(mu)
}

/// Q_ν as an operator value.
pub fn rot_q(nu: FieldElement) -> Operator {
    Operator::RotQ(nu)
}

/// XOR_{p,q} ψ with 1-based qubit indices in the self-dual labeling.
pub fn xor_gate(p: usize, q: usize, psi: &StateVector) -> Result<StateVector, PauliError> {
    Operator::xor(p, q, psi.n())?.apply(psi)
}
