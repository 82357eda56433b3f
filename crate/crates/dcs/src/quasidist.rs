//! Discrete Q- and P-functions on the 2^n × 2^n phase-space grid, their
//! closed forms for the fiducial state, and the sum-of-squared-Q
//! correlation measure.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::gf2n::{FieldElement, FieldSpec};
use crate::ordering::AxisOrder;
use crate::pauli::{self, fwht, PauliError, PhasePoint};
use crate::states::{self, StateError, StateVector};

/// Full grids are dense 2^n × 2^n float arrays; cap n to keep them at
/// desk scale.
pub const GRID_CAP: usize = 10;

#[derive(Debug, Error)]
pub enum QuasiError {
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("full grids are capped at n <= {GRID_CAP}, requested n = {0}")]
    GridTooLarge(usize),
    #[error("density matrix has {0} entries, expected {1}")]
    BadDensityMatrix(usize, usize),
    #[error(
        "P-function is singular: {count} vanishing fiducial overlaps, first at (γ,δ) = {first:?}"
    )]
    SingularPFunction {
        count: usize,
        first: (String, String),
    },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Overlap moduli below this are treated as exact zeros of the closed
/// form rather than roundoff.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Q(α,β) = ⟨α,β|ρ|α,β⟩ on the full grid. Values lie in [0,1] and sum
/// to 2^n.
#[derive(Debug, Clone)]
pub struct QGrid {
    field: Arc<FieldSpec>,
    values: Vec<f64>,
    state_descr: String,
}

/// Weights P(α,β) expanding ρ over coherent-state projectors.
#[derive(Debug, Clone)]
pub struct PGrid {
    field: Arc<FieldSpec>,
    values: Vec<f64>,
}

macro_rules! grid_common {
    ($ty:ident) => {
        impl $ty {
            pub fn field(&self) -> &Arc<FieldSpec> {
                &self.field
            }

            pub fn n(&self) -> usize {
                self.field.n()
            }

            pub fn side(&self) -> usize {
                self.field.size()
            }

            pub fn value(&self, alpha: FieldElement, beta: FieldElement) -> f64 {
                self.values[(alpha.index() << self.field.n()) | beta.index()]
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            pub fn sum(&self) -> f64 {
                self.values.iter().sum()
            }

            pub fn sum_squares(&self) -> f64 {
                self.values.iter().map(|v| v * v).sum()
            }
        }
    };
}

grid_common!(QGrid);
grid_common!(PGrid);

impl QGrid {
    pub fn state_descr(&self) -> &str {
        &self.state_descr
    }
}

fn check_grid_cap(field: &FieldSpec) -> Result<(), QuasiError> {
    if field.n() > GRID_CAP {
        return Err(QuasiError::GridTooLarge(field.n()));
    }
    Ok(())
}

/// Q-function of a pure state: Q(α,β) = |⟨α,β|ψ⟩|². For each β the α
/// dependence is a Walsh transform in the self-dual frame, so the whole
/// grid costs O(n 4^n).
pub fn q_function(psi: &StateVector, theta: f64) -> Result<QGrid, QuasiError> {
    let xi = states::xi_from_theta(theta)?;
    q_function_xi(psi, xi)
}

/// Q-function against the coherent-state system generated by an
/// arbitrary fiducial ξ.
pub fn q_function_xi(psi: &StateVector, xi: Complex64) -> Result<QGrid, QuasiError> {
    let field = psi.field();
    check_grid_cap(field)?;
    psi.check_normalized(1e-9)
        .map_err(|_| QuasiError::NotNormalized(psi.norm()))?;
    let fid = states::fiducial_xi(field, xi);
    let n = field.n();
    let dim = field.size();
    let mut values = vec![0.0f64; dim * dim];
    let mut buf = vec![Complex64::ZERO; dim];
    for beta in field.elements() {
        for lam in field.elements() {
            buf[field.tensor_index(lam)] = fid.amp(field.add(lam, beta)).conj() * psi.amp(lam);
        }
        fwht(&mut buf);
        for alpha in field.elements() {
            values[(alpha.index() << n) | beta.index()] =
                buf[field.tensor_index(alpha)].norm_sqr();
        }
    }
    Ok(QGrid {
        field: Arc::clone(field),
        values,
        state_descr: "pure state".to_string(),
    })
}

/// Q-function of a density matrix ρ (row-major, 2^n × 2^n).
pub fn q_function_density(
    field: &Arc<FieldSpec>,
    rho: &[Complex64],
    theta: f64,
) -> Result<QGrid, QuasiError> {
    check_grid_cap(field)?;
    let dim = field.size();
    if rho.len() != dim * dim {
        return Err(QuasiError::BadDensityMatrix(rho.len(), dim * dim));
    }
    let tr: Complex64 = (0..dim).map(|i| rho[i * dim + i]).sum();
    if (tr - Complex64::ONE).norm() > 1e-9 {
        return Err(QuasiError::NotNormalized(tr.norm()));
    }
    let fid = states::fiducial(field, theta)?;
    let n = field.n();
    let mut values = vec![0.0f64; dim * dim];
    for alpha in field.elements() {
        for beta in field.elements() {
            let cs = pauli::displacement(PhasePoint::new(alpha, beta)).apply(&fid)?;
            let v = cs.amps();
            let mut acc = Complex64::ZERO;
            for i in 0..dim {
                for j in 0..dim {
                    acc += v[i].conj() * rho[i * dim + j] * v[j];
                }
            }
            values[(alpha.index() << n) | beta.index()] = acc.re;
        }
    }
    Ok(QGrid {
        field: Arc::clone(field),
        values,
        state_descr: "density matrix".to_string(),
    })
}

/// Closed-form Q of the fiducial at angle ϑ, evaluated without building
/// any state:
/// Q(α,β) = ĉ^{2h(α+β)} ŝ^{h(α)+h(β)-h(α+β)} with ĉ = cosϑ/√(1+cos²ϑ),
/// ŝ = sinϑ/√(1+cos²ϑ). At ϑ = π/4 this reduces to
/// (1/√3)^{h(α)+h(β)+h(α+β)}.
pub fn q_closed_form_fiducial(field: &Arc<FieldSpec>, theta: f64) -> Result<QGrid, QuasiError> {
    check_grid_cap(field)?;
    let _ = states::xi_from_theta(theta)?;
    let den = (1.0 + theta.cos() * theta.cos()).sqrt();
    let c_hat = theta.cos() / den;
    let s_hat = theta.sin() / den;
    let n = field.n();
    let dim = field.size();
    let mut values = vec![0.0f64; dim * dim];
    for alpha in field.elements() {
        for beta in field.elements() {
            let hs = field.h(field.add(alpha, beta)) as i32;
            // h(α)+h(β)-h(α+β) = 2·|a ∧ b| is even, so a negative ŝ is safe.
            let cross = field.h(alpha) as i32 + field.h(beta) as i32 - hs;
            values[(alpha.index() << n) | beta.index()] =
                c_hat.powi(2 * hs) * s_hat.powi(cross);
        }
    }
    Ok(QGrid {
        field: Arc::clone(field),
        values,
        state_descr: format!("fiducial closed form, theta={theta}"),
    })
}

/// |⟨ξ|D(γ,δ)|ξ⟩| from the closed-form factorization: each qubit
/// contributes one of the three single-qubit overlap moduli, counted by
/// the h-exponents.
pub fn overlap_closed_form(
    field: &FieldSpec,
    gamma: FieldElement,
    delta: FieldElement,
    theta: f64,
) -> Result<f64, QuasiError> {
    let xi = states::xi_from_theta(theta)?;
    Ok(overlap_closed_form_xi(field, gamma, delta, xi))
}

pub fn overlap_closed_form_xi(
    field: &FieldSpec,
    gamma: FieldElement,
    delta: FieldElement,
    xi: Complex64,
) -> f64 {
    let denom = 1.0 + xi.norm_sqr();
    let m_z = (1.0 - xi.norm_sqr()).abs() / denom;
    let m_x = (2.0 * xi.re).abs() / denom;
    let m_y = (2.0 * xi.im).abs() / denom;
    let both = (field.sd_coords(gamma) & field.sd_coords(delta)).count_ones() as i32;
    let only_g = field.h(gamma) as i32 - both;
    let only_d = field.h(delta) as i32 - both;
    m_z.powi(only_g) * m_x.powi(only_d) * m_y.powi(both)
}

/// Expectation values ⟨ψ|D(γ,δ)|ψ⟩ over the full grid, indexed
/// (γ << n) | δ. Real because every displacement is Hermitian.
fn displacement_expectations(psi: &StateVector) -> Vec<f64> {
    let field = psi.field();
    let n = field.n();
    let dim = field.size();
    let mut out = vec![0.0f64; dim * dim];
    let mut buf = vec![Complex64::ZERO; dim];
    for delta in field.elements() {
        for lam in field.elements() {
            buf[field.tensor_index(lam)] = psi.amp(lam).conj() * psi.amp(field.add(lam, delta));
        }
        fwht(&mut buf);
        for gamma in field.elements() {
            let phase = pauli::displacement_phase(field, PhasePoint::new(gamma, delta));
            let val = phase * buf[field.tensor_index(gamma)];
            out[(gamma.index() << n) | delta.index()] = val.re;
        }
    }
    out
}

fn displacement_expectations_density(field: &FieldSpec, rho: &[Complex64]) -> Vec<f64> {
    let n = field.n();
    let dim = field.size();
    let mut out = vec![0.0f64; dim * dim];
    for delta in field.elements() {
        for gamma in field.elements() {
            let phase = pauli::displacement_phase(field, PhasePoint::new(gamma, delta));
            let mut acc = Complex64::ZERO;
            for mu in field.elements() {
                let row = field.add(mu, delta).index();
                acc += rho[row * dim + mu.index()]
                    * field.character(field.mul(gamma, mu)) as f64;
            }
            out[(gamma.index() << n) | delta.index()] = (phase * acc).re;
        }
    }
    out
}

/// The symplectic Fourier step shared by the P-function paths:
/// P(α,β) = 2^{-2n} Σ_{γ,δ} χ(αδ + βγ) t(γ,δ).
fn p_from_ratios(field: &Arc<FieldSpec>, t: &[f64]) -> PGrid {
    let n = field.n();
    let dim = field.size();
    // Walsh over δ for every γ ...
    let mut stage = vec![0.0f64; dim * dim];
    let mut buf = vec![Complex64::ZERO; dim];
    for gamma in field.elements() {
        for delta in field.elements() {
            buf[field.tensor_index(delta)] =
                Complex64::new(t[(gamma.index() << n) | delta.index()], 0.0);
        }
        fwht(&mut buf);
        for alpha in field.elements() {
            stage[(gamma.index() << n) | alpha.index()] =
                buf[field.tensor_index(alpha)].re;
        }
    }
    // ... then over γ for every α.
    let mut values = vec![0.0f64; dim * dim];
    let scale = 1.0 / (dim * dim) as f64;
    for alpha in field.elements() {
        for gamma in field.elements() {
            buf[field.tensor_index(gamma)] =
                Complex64::new(stage[(gamma.index() << n) | alpha.index()], 0.0);
        }
        fwht(&mut buf);
        for beta in field.elements() {
            values[(alpha.index() << n) | beta.index()] =
                buf[field.tensor_index(beta)].re * scale;
        }
    }
    PGrid {
        field: Arc::clone(field),
        values,
    }
}

fn fiducial_overlaps_checked(
    field: &Arc<FieldSpec>,
    xi: Complex64,
) -> Result<Vec<f64>, QuasiError> {
    let fid = states::fiducial_xi(field, xi);
    let denom = displacement_expectations(&fid);
    let n = field.n();
    let mut count = 0usize;
    let mut first = None;
    for gamma in field.elements() {
        for delta in field.elements() {
            if denom[(gamma.index() << n) | delta.index()].abs() < SINGULAR_TOL {
                count += 1;
                if first.is_none() {
                    first = Some((field.label(gamma), field.label(delta)));
                }
            }
        }
    }
    if let Some(first) = first {
        return Err(QuasiError::SingularPFunction { count, first });
    }
    Ok(denom)
}

/// P-function of a pure state via the displacement kernel. The fiducial
/// overlaps are computed numerically from the constructed state so that
/// the reconstruction ρ = Σ_p P(p)|p⟩⟨p| holds to machine precision.
pub fn p_function(psi: &StateVector, theta: f64) -> Result<PGrid, QuasiError> {
    let xi = states::xi_from_theta(theta)?;
    p_function_xi(psi, xi)
}

pub fn p_function_xi(psi: &StateVector, xi: Complex64) -> Result<PGrid, QuasiError> {
    let field = psi.field();
    check_grid_cap(field)?;
    psi.check_normalized(1e-9)
        .map_err(|_| QuasiError::NotNormalized(psi.norm()))?;
    let denom = fiducial_overlaps_checked(field, xi)?;
    let num = displacement_expectations(psi);
    let t: Vec<f64> = num.iter().zip(&denom).map(|(n, d)| n / d).collect();
    Ok(p_from_ratios(field, &t))
}

/// P-function of a density matrix.
pub fn p_function_density(
    field: &Arc<FieldSpec>,
    rho: &[Complex64],
    theta: f64,
) -> Result<PGrid, QuasiError> {
    check_grid_cap(field)?;
    let dim = field.size();
    if rho.len() != dim * dim {
        return Err(QuasiError::BadDensityMatrix(rho.len(), dim * dim));
    }
    let xi = states::xi_from_theta(theta)?;
    let denom = fiducial_overlaps_checked(field, xi)?;
    let num = displacement_expectations_density(field, rho);
    let t: Vec<f64> = num.iter().zip(&denom).map(|(n, d)| n / d).collect();
    Ok(p_from_ratios(field, &t))
}

/// Σ_{α,β} Q²(α,β): equals (4/3)^n for coherent states and drops below
/// that for correlated states.
pub fn sum_q_squared(grid: &QGrid) -> f64 {
    grid.sum_squares()
}

/// Rebuilds ρ = Σ_p P(p)|p⟩⟨p| from a P-grid (dense; test-scale n).
pub fn reconstruct_density(pgrid: &PGrid, theta: f64) -> Result<Vec<Complex64>, QuasiError> {
    let field = pgrid.field();
    let dim = field.size();
    let fid = states::fiducial(field, theta)?;
    let mut rho = vec![Complex64::ZERO; dim * dim];
    for alpha in field.elements() {
        for beta in field.elements() {
            let w = pgrid.value(alpha, beta);
            let cs = pauli::displacement(PhasePoint::new(alpha, beta)).apply(&fid)?;
            let v = cs.amps();
            for i in 0..dim {
                for j in 0..dim {
                    rho[i * dim + j] += w * v[i] * v[j].conj();
                }
            }
        }
    }
    Ok(rho)
}

/// Verifies Q_ψ(α,β) = Σ_{γ,δ} P_ψ(α+γ, β+δ) Q_ξ(γ,δ) and returns the
/// largest absolute deviation over the grid.
pub fn smearing_check(psi: &StateVector, theta: f64) -> Result<f64, QuasiError> {
    let field = psi.field();
    let q_psi = q_function(psi, theta)?;
    let p_psi = p_function(psi, theta)?;
    let fid = states::fiducial(field, theta)?;
    let q_fid = q_function(&fid, theta)?;
    let mut max_dev = 0.0f64;
    for alpha in field.elements() {
        for beta in field.elements() {
            let mut acc = 0.0;
            for gamma in field.elements() {
                for delta in field.elements() {
                    acc += p_psi.value(field.add(alpha, gamma), field.add(beta, delta))
                        * q_fid.value(gamma, delta);
                }
            }
            max_dev = max_dev.max((acc - q_psi.value(alpha, beta)).abs());
        }
    }
    Ok(max_dev)
}

/// Axis profile of the h-ordered fiducial Q: f(0) = 1 and f(k) = 3^-(m+1)
/// where the position k falls in the strip
/// Σ_{r<=m} C(n,r) <= k < Σ_{r<=m+1} C(n,r).
pub fn profile_f(k: usize, n: usize) -> f64 {
    assert!(k < (1usize << n), "axis position out of range");
    if k == 0 {
        return 1.0;
    }
    let mut cum = 1usize;
    for m in 0..n {
        let next = cum + states::binomial(n, m + 1) as usize;
        if k < next {
            return 3f64.powi(-(m as i32 + 1));
        }
        cum = next;
    }
    unreachable!("cumulative binomials cover 0..2^n");
}

/// CSV rendering of a grid: rows are the ordered α labels, columns the
/// ordered β labels, values printed with 17 significant digits so that
/// parsing them back is lossless.
pub fn grid_csv(
    field: &FieldSpec,
    value: impl Fn(FieldElement, FieldElement) -> f64,
    alpha_axis: &AxisOrder,
    beta_axis: &AxisOrder,
) -> String {
    let mut out = String::new();
    out.push_str("label");
    for &b in beta_axis.labels() {
        out.push(',');
        out.push_str(&field.label(b));
    }
    out.push('\n');
    for &a in alpha_axis.labels() {
        out.push_str(&field.label(a));
        for &b in beta_axis.labels() {
            out.push_str(&format!(",{:.16e}", value(a, b)));
        }
        out.push('\n');
    }
    out
}

/// JSON rendering: `{field, ordering, values}` with row-major values
/// following the axis orders.
pub fn grid_json(
    field: &FieldSpec,
    value: impl Fn(FieldElement, FieldElement) -> f64,
    alpha_axis: &AxisOrder,
    beta_axis: &AxisOrder,
) -> serde_json::Value {
    let values: Vec<Vec<f64>> = alpha_axis
        .labels()
        .iter()
        .map(|&a| beta_axis.labels().iter().map(|&b| value(a, b)).collect())
        .collect();
    serde_json::json!({
        "field": field.info(),
        "ordering": {
            "scheme": alpha_axis.scheme_name(),
            "alpha": alpha_axis.labels().iter().map(|&a| field.label(a)).collect::<Vec<_>>(),
            "beta": beta_axis.labels().iter().map(|&b| field.label(b)).collect::<Vec<_>>(),
        },
        "values": values,
    })
}
