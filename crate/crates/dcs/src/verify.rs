//! Runtime verification suite behind the `verify` CLI subcommand.
//!
//! Each check exercises one family of identities at the requested n
//! (clamped internally where a check is only meaningful dense or
//! exhaustively at small n) and reports a single pass/fail outcome.

use std::sync::Arc;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::gf2n::{build_field, FieldElement, FieldSpec};
use crate::ordering::{self, BaseScheme};
use crate::pauli::{self, Operator, PhasePoint};
use crate::quasidist;
use crate::states::{self, StateVector, THETA_SYMMETRIC};

/// Largest n accepted by the verify suite.
pub const VERIFY_CAP: usize = 8;

pub struct CheckOutcome {
    pub name: &'static str,
    pub result: Result<(), String>,
}

pub const CHECK_NAMES: &[&str] = &[
    "trace-orthonormality",
    "h-identities",
    "character-homomorphism",
    "table-bijection",
    "commutation",
    "displacement-orthonormality",
    "fourier",
    "rotation-covariance",
    "recurrence",
    "squeeze-scaling",
    "protocol",
    "q-normalization",
    "q-closed-form",
    "sum-q2",
    "p-function",
    "bloch",
    "ordering-profile",
    "overlap-closed-form",
    "fourier-eigenstates",
];

fn field(n: usize) -> Arc<FieldSpec> {
    Arc::new(build_field(n, None).expect("default polynomial builds"))
}

fn random_state(f: &Arc<FieldSpec>, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..f.size())
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    StateVector::new(Arc::clone(f), amps)
        .unwrap()
        .normalized()
        .unwrap()
}

fn fail(msg: impl Into<String>) -> Result<(), String> {
    Err(msg.into())
}

fn check_trace_orthonormality(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    for (i, &ti) in f.self_dual_basis().iter().enumerate() {
        for (j, &tj) in f.self_dual_basis().iter().enumerate() {
            if f.trace(f.mul(ti, tj)) != u8::from(i == j) {
                return fail(format!("tr(θ_{} θ_{}) != δ", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

fn check_h_identities(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(5);
    let f = field(n);
    for a in f.elements() {
        let s: i32 = f
            .self_dual_basis()
            .iter()
            .map(|&t| f.character(f.mul(a, t)))
            .sum();
        if s != n as i32 - 2 * f.h(a) as i32 {
            return fail(format!("character sum identity fails at {}", f.label(a)));
        }
        for b in f.elements() {
            let both = (f.sd_coords(a) & f.sd_coords(b)).count_ones() as i32;
            if f.h(f.add(a, b)) as i32 != f.h(a) as i32 + f.h(b) as i32 - 2 * both {
                return fail("h(α+β) identity fails");
            }
            if 2 * f.h(f.kappa_of(a, b)) != f.h(a) + f.h(b) + f.h(f.add(a, b)) {
                return fail("κ weight identity fails");
            }
        }
    }
    Ok(())
}

fn check_character_homomorphism(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    for _ in 0..200 {
        let a = FieldElement::new(rng.gen_range(0..f.size() as u32));
        let b = FieldElement::new(rng.gen_range(0..f.size() as u32));
        if f.character(f.add(a, b)) != f.character(a) * f.character(b) {
            return fail("χ(α+β) != χ(α)χ(β)");
        }
    }
    Ok(())
}

fn check_table_bijection(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let mut seen = vec![false; f.size()];
    for k in 0..f.group_order() {
        let e = f.sigma_pow(k as u64);
        if seen[e.index()] || f.log_of(e) != Some(k as u32) {
            return fail("log/exp tables are not mutually inverse");
        }
        seen[e.index()] = true;
    }
    Ok(())
}

fn check_commutation(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let psi = random_state(&f, rng);
    for _ in 0..20 {
        let a = FieldElement::new(rng.gen_range(0..f.size() as u32));
        let b = FieldElement::new(rng.gen_range(0..f.size() as u32));
        let zx = pauli::apply_z(a, &pauli::apply_x(b, &psi).unwrap()).unwrap();
        let xz = pauli::apply_x(b, &pauli::apply_z(a, &psi).unwrap()).unwrap();
        let chi = f.character(f.mul(a, b)) as f64;
        if zx.max_dev(&xz.scaled(Complex64::new(chi, 0.0))) > 1e-12 {
            return fail(format!("commutation fails at ({}, {})", f.label(a), f.label(b)));
        }
    }
    Ok(())
}

fn dense_trace(field: &FieldSpec, m: &[Vec<Complex64>]) -> Complex64 {
    (0..field.size()).map(|k| m[k][k]).sum()
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let dim = a.len();
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn check_displacement_orthonormality(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(3);
    let f = field(n);
    let points: Vec<PhasePoint> = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| PhasePoint::new(a, b)))
        .collect();
    let dense: Vec<_> = points
        .iter()
        .map(|&p| pauli::displacement(p).dense(&f).unwrap())
        .collect();
    for (i, di) in dense.iter().enumerate() {
        // Hermiticity.
        for r in 0..f.size() {
            for c in 0..f.size() {
                if (di[r][c] - di[c][r].conj()).norm() > 1e-12 {
                    return fail("displacement not Hermitian");
                }
            }
        }
        for (j, dj) in dense.iter().enumerate() {
            let tr = dense_trace(&f, &matmul(di, dj));
            let want = if i == j { f.size() as f64 } else { 0.0 };
            if (tr - Complex64::new(want, 0.0)).norm() > 1e-10 {
                return fail(format!("trace orthonormality fails at pair ({i}, {j})"));
            }
        }
    }
    Ok(())
}

fn check_fourier(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let psi = random_state(&f, rng);
    let back = pauli::fourier(&pauli::fourier(&psi).unwrap()).unwrap();
    if back.max_dev(&psi) > 1e-12 {
        return fail("F² != identity");
    }
    let nd = n.min(3);
    let fd = field(nd);
    let fm = Operator::Fourier.dense(&fd).unwrap();
    for mu in fd.elements() {
        let z = Operator::Z(mu).dense(&fd).unwrap();
        let x = Operator::X(mu).dense(&fd).unwrap();
        let fzf = matmul(&fm, &matmul(&z, &fm));
        let dev = fzf
            .iter()
            .flatten()
            .zip(x.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        if dev > 1e-12 {
            return fail(format!("F Z F != X at μ = {}", fd.label(mu)));
        }
    }
    Ok(())
}

fn proportional_unimodular(lhs: &[Vec<Complex64>], rhs: &[Vec<Complex64>], tol: f64) -> bool {
    let mut phase = None;
    for (lr, rr) in lhs.iter().zip(rhs) {
        for (&l, &r) in lr.iter().zip(rr) {
            if r.norm() > 1e-9 {
                let ratio = l / r;
                match phase {
                    None => phase = Some(ratio),
                    Some(p) => {
                        if (ratio - p).norm() > tol {
                            return false;
                        }
                    }
                }
            } else if l.norm() > tol {
                return false;
            }
        }
    }
    matches!(phase, Some(p) if (p.norm() - 1.0).abs() < tol)
}

fn dagger(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let dim = m.len();
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

fn check_rotation_covariance(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(3);
    let f = field(n);
    for mu in f.elements() {
        let p = Operator::RotP(mu).dense(&f).unwrap();
        let q = Operator::RotQ(mu).dense(&f).unwrap();
        let (pd, qd) = (dagger(&p), dagger(&q));
        for a in f.elements() {
            let z = Operator::Z(a).dense(&f).unwrap();
            let x = Operator::X(a).dense(&f).unwrap();
            let lhs = matmul(&p, &matmul(&z, &pd));
            let rhs = matmul(&z, &Operator::X(f.mul(mu, a)).dense(&f).unwrap());
            if !proportional_unimodular(&lhs, &rhs, 1e-10) {
                return fail(format!("P covariance fails at μ={} α={}", f.label(mu), f.label(a)));
            }
            let lhs = matmul(&q, &matmul(&x, &qd));
            let rhs = matmul(&Operator::Z(f.mul(mu, a)).dense(&f).unwrap(), &x);
            if !proportional_unimodular(&lhs, &rhs, 1e-10) {
                return fail(format!("Q covariance fails at ν={} β={}", f.label(mu), f.label(a)));
            }
        }
    }
    Ok(())
}

fn check_recurrence(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(5);
    let f = field(n);
    for nu in f.elements() {
        let c = pauli::rot_coeffs(&f, nu);
        for lam in f.elements() {
            for a in f.elements() {
                let lhs = c[f.add(lam, a).index()];
                let chi = f.character(f.mul(nu, f.mul(a, lam))) as f64;
                let rhs = c[a.index()] * c[lam.index()] * chi;
                if (lhs - rhs).norm() > 1e-12 {
                    return fail("recurrence consistency fails off the seeding path");
                }
            }
        }
    }
    Ok(())
}

fn check_squeeze_scaling(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(3);
    let f = field(n);
    for zeta in f.elements().skip(1) {
        let s = Operator::squeeze(zeta).unwrap().dense(&f).unwrap();
        let sd = dagger(&s);
        for b in f.elements() {
            // S_ζ = Σ|λ⟩⟨ζλ| conjugates X by ζ^{-1} and Z by ζ.
            let x = Operator::X(b).dense(&f).unwrap();
            let want = Operator::X(f.mul(b, f.inv(zeta).unwrap())).dense(&f).unwrap();
            let got = matmul(&s, &matmul(&x, &sd));
            let dev = got
                .iter()
                .flatten()
                .zip(want.iter().flatten())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            if dev > 1e-12 {
                return fail("S X S† != X scaled");
            }
            let z = Operator::Z(b).dense(&f).unwrap();
            let want = Operator::Z(f.mul(b, zeta)).dense(&f).unwrap();
            let got = matmul(&s, &matmul(&z, &sd));
            let dev = got
                .iter()
                .flatten()
                .zip(want.iter().flatten())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            if dev > 1e-12 {
                return fail("S Z S† != Z scaled");
            }
        }
    }
    Ok(())
}

fn check_protocol(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    for alpha in f.elements() {
        for beta in f.elements().skip(1) {
            let kappa = f.kappa_of(alpha, beta);
            let mu = f.mul(beta, f.inv(kappa).map_err(|e| e.to_string())?);
            let nu = f.mul(f.add(alpha, kappa), f.inv(beta).map_err(|e| e.to_string())?);
            // (κ,0) → P_μ → (κ, μκ) → Q_ν → (κ + νμκ, μκ).
            let after_p = (kappa, f.mul(mu, kappa));
            let after_q = (f.add(after_p.0, f.mul(nu, after_p.1)), after_p.1);
            if after_q != (alpha, beta) {
                return fail(format!(
                    "protocol misses ({}, {})",
                    f.label(alpha),
                    f.label(beta)
                ));
            }
        }
    }
    Ok(())
}

fn check_q_normalization(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let mut samples = vec![("fiducial", fid.clone())];
    let p = PhasePoint::new(
        FieldElement::new(rng.gen_range(0..f.size() as u32)),
        FieldElement::new(rng.gen_range(0..f.size() as u32)),
    );
    samples.push((
        "coherent",
        pauli::displacement(p).apply(&fid).unwrap(),
    ));
    if n >= 2 {
        samples.push(("xor", pauli::xor_gate(1, 2, &fid).unwrap()));
    }
    samples.push((
        "squeezed",
        Operator::squeeze(f.sigma_pow(1)).unwrap().apply(&fid).unwrap(),
    ));
    for (name, psi) in samples {
        let q = quasidist::q_function(&psi, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
        if (q.sum() - f.size() as f64).abs() > 1e-9 {
            return fail(format!("ΣQ != 2^n for {name} state"));
        }
    }
    Ok(())
}

fn check_q_closed_form(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(5);
    let f = field(n);
    for theta in [THETA_SYMMETRIC, std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_3] {
        let fid = states::fiducial(&f, theta).unwrap();
        let direct = quasidist::q_function(&fid, theta).map_err(|e| e.to_string())?;
        let closed = quasidist::q_closed_form_fiducial(&f, theta).map_err(|e| e.to_string())?;
        for a in f.elements() {
            for b in f.elements() {
                if (direct.value(a, b) - closed.value(a, b)).abs() > 1e-10 {
                    return fail(format!("closed form deviates at θ = {theta}"));
                }
            }
        }
    }
    Ok(())
}

fn check_sum_q2(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let q = quasidist::q_function(&fid, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
    let want = (4f64 / 3.0).powi(n as i32);
    if (quasidist::sum_q_squared(&q) - want).abs() / want > 1e-9 {
        return fail("fiducial ΣQ² != (4/3)^n");
    }
    if n >= 2 {
        let want = 128.0 / 81.0 * (4f64 / 3.0).powi(n as i32 - 2);
        for _ in 0..4 {
            let p = PhasePoint::new(
                FieldElement::new(rng.gen_range(0..f.size() as u32)),
                FieldElement::new(rng.gen_range(0..f.size() as u32)),
            );
            let displaced = pauli::displacement(p).apply(&fid).unwrap();
            let state = pauli::xor_gate(1, 2, &displaced).unwrap();
            let q = quasidist::q_function(&state, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
            if (quasidist::sum_q_squared(&q) - want).abs() / want > 1e-9 {
                return fail("XOR ΣQ² deviates from (128/81)(4/3)^{n-2}");
            }
        }
    }
    Ok(())
}

fn check_p_function(n: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(3);
    let f = field(n);
    let psi = random_state(&f, rng);
    let p = quasidist::p_function(&psi, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
    let back = quasidist::reconstruct_density(&p, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
    let dim = f.size();
    for i in 0..dim {
        for j in 0..dim {
            let want = psi.amps()[i] * psi.amps()[j].conj();
            if (back[i * dim + j] - want).norm() > 1e-8 {
                return fail("P reconstruction residual exceeds 1e-8");
            }
        }
    }
    // The singular set must be detected.
    let f1 = field(1);
    let z_up = StateVector::basis_state(Arc::clone(&f1), FieldElement::ZERO);
    match quasidist::p_function(&z_up, 0.0) {
        Err(quasidist::QuasiError::SingularPFunction { .. }) => Ok(()),
        _ => fail("θ = 0 did not raise the singular P-function error"),
    }
}

fn check_bloch(_n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(1);
    let psi = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let a0 = psi.amp(FieldElement::ZERO);
    let a1 = psi.amp(FieldElement::ONE);
    let got = [
        2.0 * (a0.conj() * a1).re,
        2.0 * (a0.conj() * a1).im,
        a0.norm_sqr() - a1.norm_sqr(),
    ];
    let want = 1.0 / 3f64.sqrt();
    for (i, g) in got.iter().enumerate() {
        if (g - want).abs() > 1e-12 {
            return fail(format!("Bloch component {i} deviates"));
        }
    }
    Ok(())
}

fn check_ordering_profile(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(n);
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let q = quasidist::q_function(&fid, THETA_SYMMETRIC).map_err(|e| e.to_string())?;
    let asc = ordering::order_axis(&f, BaseScheme::HAscending);
    for (k, &l) in asc.labels().iter().enumerate() {
        if (q.value(l, FieldElement::ZERO) - quasidist::profile_f(k, n)).abs() > 1e-10 {
            return fail(format!("axis profile deviates at position {k}"));
        }
    }
    Ok(())
}

fn check_overlap_closed_form(n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = n.min(4);
    let f = field(n);
    for theta in [std::f64::consts::FRAC_PI_6, THETA_SYMMETRIC, std::f64::consts::FRAC_PI_3] {
        let fid = states::fiducial(&f, theta).unwrap();
        for g in f.elements() {
            for d in f.elements() {
                let direct = fid
                    .inner(&pauli::displacement(PhasePoint::new(g, d)).apply(&fid).unwrap())
                    .unwrap()
                    .norm();
                let closed =
                    quasidist::overlap_closed_form(&f, g, d, theta).map_err(|e| e.to_string())?;
                if (direct - closed).abs() > 1e-10 {
                    return fail("overlap modulus deviates from closed form");
                }
            }
        }
    }
    Ok(())
}

fn check_fourier_eigenstates(_n: usize, _rng: &mut ChaCha8Rng) -> Result<(), String> {
    let f = field(1);
    let (xp, xm) = states::fourier_eigen_candidates();
    let (sp, rp) = states::verify_fourier_eigen(&f, xp).unwrap();
    let (sm, rm) = states::verify_fourier_eigen(&f, xm).unwrap();
    if sp != 1 || rp > 1e-12 || sm != -1 || rm > 1e-12 {
        return fail("ξ± = ±√2 - 1 are not Fourier eigenstates at n = 1");
    }
    // The symmetric fiducial is not a Fourier eigenstate.
    let fid = states::fiducial(&f, THETA_SYMMETRIC).unwrap();
    let ff = pauli::fourier(&fid).unwrap();
    let res_plus = ff.add(&fid.clone().scaled(Complex64::new(-1.0, 0.0))).unwrap().norm();
    let res_minus = ff.add(&fid.clone()).unwrap().norm();
    if res_plus.min(res_minus) < 0.1 {
        return fail("symmetric fiducial unexpectedly close to a Fourier eigenstate");
    }
    Ok(())
}

type CheckFn = fn(usize, &mut ChaCha8Rng) -> Result<(), String>;

fn check_fn(name: &str) -> Option<CheckFn> {
    Some(match name {
        "trace-orthonormality" => check_trace_orthonormality,
        "h-identities" => check_h_identities,
        "character-homomorphism" => check_character_homomorphism,
        "table-bijection" => check_table_bijection,
        "commutation" => check_commutation,
        "displacement-orthonormality" => check_displacement_orthonormality,
        "fourier" => check_fourier,
        "rotation-covariance" => check_rotation_covariance,
        "recurrence" => check_recurrence,
        "squeeze-scaling" => check_squeeze_scaling,
        "protocol" => check_protocol,
        "q-normalization" => check_q_normalization,
        "q-closed-form" => check_q_closed_form,
        "sum-q2" => check_sum_q2,
        "p-function" => check_p_function,
        "bloch" => check_bloch,
        "ordering-profile" => check_ordering_profile,
        "overlap-closed-form" => check_overlap_closed_form,
        "fourier-eigenstates" => check_fourier_eigenstates,
        _ => return None,
    })
}

/// Runs the named checks (all of them when `only` is None) at the given
/// n and returns their outcomes.
pub fn run_checks(n: usize, only: Option<&str>, seed: u64) -> Result<Vec<CheckOutcome>, String> {
    if n < 1 || n > VERIFY_CAP {
        return Err(format!("verify supports 1 <= n <= {VERIFY_CAP}, got {n}"));
    }
    let names: Vec<&'static str> = match only {
        None => CHECK_NAMES.to_vec(),
        Some(name) => {
            let found = CHECK_NAMES.iter().find(|&&c| c == name);
            match found {
                Some(&c) => vec![c],
                None => return Err(format!("unknown check {name:?}; known: {}", CHECK_NAMES.join(", "))),
            }
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(names
        .into_iter()
        .map(|name| CheckOutcome {
            name,
            result: check_fn(name).expect("listed check exists")(n, &mut rng),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_small() {
        for n in [1usize, 3] {
            let outcomes = run_checks(n, None, 7).unwrap();
            for o in &outcomes {
                assert!(o.result.is_ok(), "n={n} check {} failed: {:?}", o.name, o.result);
            }
        }
    }

    #[test]
    fn single_check_and_bad_names() {
        let outcomes = run_checks(3, Some("trace-orthonormality"), 0).unwrap();
        assert_eq!(outcomes.len(), 1);
        assert!(run_checks(3, Some("nope"), 0).is_err());
        assert!(run_checks(25, None, 0).is_err());
        assert!(run_checks(0, None, 0).is_err());
    }
}
