//! Explicit primal and dual certificates for the C_β, C_ζ, E_max and R_max
//! programs of the GADC, checked constraint by constraint.

use crate::error::{Error, Result};
use crate::gadc::{choi_gamma, is_entanglement_breaking, GadcParams};
use crate::mathcore::{
    c, diag, from_real, identity, min_eigenvalue, partial_trace, partial_transpose, pauli_x,
    spectral_norm, tensor, ComplexMatrix,
};

const DIMS: [usize; 2] = [2, 2];

fn m4(entries: [f64; 16]) -> ComplexMatrix {
    from_real(4, 4, &entries)
}

fn pt(m: &ComplexMatrix) -> ComplexMatrix {
    partial_transpose(m, &DIMS, 1).expect("two-qubit operator")
}

fn tr_a(m: &ComplexMatrix) -> ComplexMatrix {
    partial_trace(m, &DIMS, &[1]).expect("two-qubit operator")
}

fn tr_b(m: &ComplexMatrix) -> ComplexMatrix {
    partial_trace(m, &DIMS, &[0]).expect("two-qubit operator")
}

fn tr(m: &ComplexMatrix, n: &ComplexMatrix) -> f64 {
    (m * n).trace().re
}

/// Accumulates the worst violation of X ⪰ 0 and X = 0 constraints.
#[derive(Default)]
struct Checker {
    worst: f64,
    failed: Vec<String>,
    tol: f64,
}

impl Checker {
    fn new(tol: f64) -> Self {
        Self {
            worst: 0.0,
            failed: vec![],
            tol,
        }
    }

    fn psd(&mut self, name: &str, m: &ComplexMatrix) {
        let v = (-min_eigenvalue(m)).max(0.0);
        self.record(name, v);
    }

    fn zero(&mut self, name: &str, m: &ComplexMatrix) {
        let v = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        self.record(name, v);
    }

    fn record(&mut self, name: &str, v: f64) {
        self.worst = self.worst.max(v);
        if v > self.tol {
            self.failed.push(format!("{name} violated by {v:.3e}"));
        }
    }

    fn objective(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let d = (got - want).abs();
        if d > tol {
            self.failed.push(format!(
                "{name} objective {got} differs from {want} by {d:.3e}"
            ));
        }
    }

    fn finish<T>(self, report: T) -> Result<T> {
        if self.failed.is_empty() {
            Ok(report)
        } else {
            Err(Error::Witness(self.failed.join("; ")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct CbetaWitnessReport {
    pub gamma: f64,
    pub n: f64,
    /// 1 + √(1−γ).
    pub target: f64,
    pub beta_primal: f64,
    pub beta_dual: f64,
    pub zeta_primal: f64,
    pub zeta_dual: f64,
    /// Largest constraint violation over all eight certificates.
    pub max_violation: f64,
}

/// Mixes an N = 0 certificate with its σ_x-conjugate: valid for A_{γ,N}
/// because A_{γ,N} = (1−N)A_{γ,0} + N·(σ_x∘A_{γ,0}∘σ_x).
fn mix_n(m: &ComplexMatrix, n: f64, d: usize) -> ComplexMatrix {
    let x = if d == 4 {
        tensor(&pauli_x(), &pauli_x())
    } else {
        pauli_x()
    };
    m * c(1.0 - n) + (&x * m * &x) * c(n)
}

/// Builds and checks the primal (R, S), (V, S) and dual (K, E) certificates
/// for β and ζ: constraints to 1e-10, objectives equal to 1+√(1−γ) to 1e-12.
pub fn verify_cbeta_witness(p: GadcParams) -> Result<CbetaWitnessReport> {
    let (g, n) = (p.gamma, p.n);
    let s = (1.0 - g).sqrt();
    let a = 0.5 * (s - (1.0 - g));
    let target = 1.0 + s;
    let gamma = choi_gamma(p);
    let gt = pt(&gamma);
    let mut chk = Checker::new(1e-10);

    let r0 = m4([
        1.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        1.0 - g + a,
        a,
        0.0, //
        0.0,
        a,
        1.0 + a,
        0.0, //
        0.0,
        0.0,
        0.0,
        1.0 - g,
    ]);
    let s0 = from_real(2, 2, &[1.0 + a, 0.0, 0.0, 1.0 - g + a]);
    let r = mix_n(&r0, n, 4);
    let sb = mix_n(&s0, n, 2);
    let is = tensor(&identity(2), &sb);
    chk.psd("beta: R - Gamma^TB", &(&r - &gt));
    chk.psd("beta: R + Gamma^TB", &(&r + &gt));
    chk.psd("beta: I(x)S - R^TB", &(&is - pt(&r)));
    chk.psd("beta: I(x)S + R^TB", &(&is + pt(&r)));
    let beta_primal = sb.trace().re;

    let v0 = m4([
        1.0 + a,
        0.0,
        0.0,
        1.0 - g + a, //
        0.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        0.0,
        g,
        0.0, //
        1.0 - g + a,
        0.0,
        0.0,
        1.0 - g + a,
    ]);
    let v = mix_n(&v0, n, 4);
    chk.psd("zeta: V - Gamma", &(&v - &gamma));
    chk.psd("zeta: I(x)S - V^TB", &(&is - pt(&v)));
    chk.psd("zeta: I(x)S + V^TB", &(&is + pt(&v)));
    let zeta_primal = beta_primal;

    let phi_like = m4([
        0.5, 0.0, 0.0, 0.5, //
        0.0, 0.5, 0.0, 0.0, //
        0.0, 0.0, 0.5, 0.0, //
        0.5, 0.0, 0.0, 0.5,
    ]);
    let swap_like = pt(&phi_like);

    // β dual: K + M ≤ (E − F)^{T_B}, E_B + F_B ≤ I, all ⪰ 0, with M = F = 0.
    let (k, e) = (&swap_like, &phi_like);
    chk.psd("beta dual: K", k);
    chk.psd("beta dual: E", e);
    chk.psd("beta dual: E^TB - K", &(pt(e) - k));
    chk.psd("beta dual: I - E_B", &(identity(2) - tr_a(e)));
    let beta_dual = tr(&gamma, &pt(k));

    // ζ dual: Tr_A(E + F) ≤ I, K ≤ (E − F)^{T_B}, with F = 0.
    let (k, e) = (&phi_like, &swap_like);
    chk.psd("zeta dual: K", k);
    chk.psd("zeta dual: E", e);
    chk.psd("zeta dual: I - Tr_A E", &(identity(2) - tr_a(e)));
    chk.psd("zeta dual: E^TB - K", &(pt(e) - k));
    let zeta_dual = tr(k, &gamma);

    for (name, v) in [
        ("beta primal", beta_primal),
        ("beta dual", beta_dual),
        ("zeta primal", zeta_primal),
        ("zeta dual", zeta_dual),
    ] {
        chk.objective(name, v, target, 1e-12);
    }
    let report = CbetaWitnessReport {
        gamma: g,
        n,
        target,
        beta_primal,
        beta_dual,
        zeta_primal,
        zeta_dual,
        max_violation: chk.worst,
    };
    chk.finish(report)
}

#[derive(Debug, Clone)]
pub struct EmaxWitnessReport {
    pub gamma: f64,
    pub n: f64,
    pub entanglement_breaking: bool,
    /// Optimal value in linear scale: 1 − λ₋, or 1 for entanglement-breaking points.
    pub target: f64,
    pub lambda_minus: f64,
    /// ρ_A weight b of the E_max dual.
    pub b: f64,
    /// ρ_A weight a of the R_max dual.
    pub a: f64,
    pub emax_primal: f64,
    pub emax_dual: f64,
    pub rmax_primal: f64,
    pub rmax_dual: f64,
    pub max_violation: f64,
}

/// λ₋ = ½(γ − √((γ(2N−1))² + 4(1−γ))).
pub fn lambda_minus(p: GadcParams) -> f64 {
    0.5 * (p.gamma - radicand_root(p))
}

fn radicand_root(p: GadcParams) -> f64 {
    ((p.gamma * (2.0 * p.n - 1.0)).powi(2) + 4.0 * (1.0 - p.gamma)).sqrt()
}

/// R_max dual objective g(a) = Tr[Γ R(a)].
fn rmax_g(a: f64, g: f64, n: f64) -> f64 {
    let s = (1.0 - g).sqrt();
    1.0 - 2.0 * (1.0 - n) * g - 2.0 * a * a * (2.0 * s + g) + 4.0 * a * (s + g * (1.0 - n))
}

/// Root a ∈ [0,1] of g(a) = 1 − λ₋, from c₁ ± √(c₁² + c₂((4N−3)γ − c₃)) over c₂.
pub fn rmax_dual_parameter(p: GadcParams) -> Option<f64> {
    let (g, n) = (p.gamma, p.n);
    let s = (1.0 - g).sqrt();
    let c1 = 4.0 * (s + g * (1.0 - n));
    let c2 = 4.0 * (2.0 * s + g);
    let c3 = radicand_root(p);
    let disc = c1 * c1 + c2 * ((4.0 * n - 3.0) * g - c3);
    if disc < -1e-12 || c2 == 0.0 {
        return None;
    }
    let r = disc.max(0.0).sqrt();
    let want = 1.0 - lambda_minus(p);
    [(c1 - r) / c2, (c1 + r) / c2]
        .into_iter()
        .filter(|a| (-1e-12..=1.0 + 1e-12).contains(a))
        .min_by(|x, y| {
            (rmax_g(*x, g, n) - want)
                .abs()
                .total_cmp(&(rmax_g(*y, g, n) - want).abs())
        })
        .map(|a| a.clamp(0.0, 1.0))
}

/// Builds and checks Y (E_max primal, also giving an R_max primal via
/// V = Y^{T_B}), (ρ_A, P, Q) (E_max dual) and (ρ_A, R) (R_max dual).
/// Entanglement-breaking points use the trivial certificates Y = Γ and
/// P = R = ρ_A⊗I with value 1. Feasibility to 1e-9, objectives to 1e-10.
pub fn verify_emax_witness(p: GadcParams) -> Result<EmaxWitnessReport> {
    let (g, n) = (p.gamma, p.n);
    let gamma = choi_gamma(p);
    let eb = is_entanglement_breaking(p).entanglement_breaking;
    let lm = lambda_minus(p);
    let mut chk = Checker::new(1e-9);

    if eb {
        let rho = identity(2) * c(0.5);
        let rho_i = tensor(&rho, &identity(2));
        let y = gamma.clone();
        chk.psd("EB: Y^TB", &pt(&y));
        chk.psd("EB: P", &rho_i);
        let emax_primal = spectral_norm(&tr_b(&y));
        let emax_dual = tr(&gamma, &rho_i);
        chk.psd("EB: rho I - R^TB", &(&rho_i - pt(&rho_i)));
        chk.psd("EB: rho I + R^TB", &(&rho_i + pt(&rho_i)));
        let rmax_dual = tr(&gamma, &rho_i);
        for (name, v) in [
            ("E_max primal", emax_primal),
            ("E_max dual", emax_dual),
            ("R_max dual", rmax_dual),
        ] {
            chk.objective(name, v, 1.0, 1e-10);
        }
        let report = EmaxWitnessReport {
            gamma: g,
            n,
            entanglement_breaking: true,
            target: 1.0,
            lambda_minus: lm,
            b: 0.5,
            a: 0.5,
            emax_primal,
            emax_dual,
            rmax_primal: emax_primal,
            rmax_dual,
            max_violation: chk.worst,
        };
        return chk.finish(report);
    }

    let target = 1.0 - lm;
    let y = &gamma - diag(&[0.0, lm, lm, 0.0]);
    chk.psd("E_max primal: Y - Gamma", &(&y - &gamma));
    chk.psd("E_max primal: Y^TB", &pt(&y));
    let emax_primal = spectral_norm(&tr_b(&y));
    // V = Y^{T_B}, zero second variable: (V − 0)^{T_B} = Y ⪰ Γ.
    let v = pt(&y);
    chk.psd("R_max primal: V", &v);
    chk.psd("R_max primal: V^TB - Gamma", &(pt(&v) - &gamma));
    let rmax_primal = spectral_norm(&tr_b(&v));

    let a_root = radicand_root(p);
    let b = (a_root - (2.0 * n - 1.0) * g) / (2.0 * a_root);
    let off = (1.0 - g).sqrt() / a_root;
    let rho = diag(&[b, 1.0 - b]);
    let pm = m4([
        b,
        0.0,
        0.0,
        off, //
        0.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        0.0,
        0.0,
        0.0, //
        off,
        0.0,
        0.0,
        1.0 - b,
    ]);
    let qm = m4([
        0.0,
        0.0,
        0.0,
        0.0, //
        0.0,
        b,
        -off,
        0.0, //
        0.0,
        -off,
        1.0 - b,
        0.0, //
        0.0,
        0.0,
        0.0,
        0.0,
    ]);
    let rho_i = tensor(&rho, &identity(2));
    chk.psd("E_max dual: rho_A", &rho);
    chk.record("E_max dual: Tr rho_A <= 1", (rho.trace().re - 1.0).max(0.0));
    chk.psd("E_max dual: P", &pm);
    chk.psd("E_max dual: Q", &qm);
    chk.psd("E_max dual: rho(x)I - P - Q^TB", &(&rho_i - &pm - pt(&qm)));
    let emax_dual = tr(&gamma, &pm);

    let a = rmax_dual_parameter(p)
        .ok_or_else(|| Error::Witness(format!("no admissible R_max root at ({g}, {n})")))?;
    let rho_r = diag(&[a, 1.0 - a]);
    let w = 2.0 * a * (1.0 - a);
    let rm = m4([
        a,
        0.0,
        0.0,
        w, //
        0.0,
        a * (1.0 - 2.0 * a),
        0.0,
        0.0, //
        0.0,
        0.0,
        -(1.0 - a) * (1.0 - 2.0 * a),
        0.0, //
        w,
        0.0,
        0.0,
        1.0 - a,
    ]);
    let rho_ri = tensor(&rho_r, &identity(2));
    chk.psd("R_max dual: rho_A", &rho_r);
    chk.psd("R_max dual: rho(x)I - R^TB", &(&rho_ri - pt(&rm)));
    chk.psd("R_max dual: rho(x)I + R^TB", &(&rho_ri + pt(&rm)));
    let rmax_dual = tr(&gamma, &rm);

    for (name, v) in [
        ("E_max primal", emax_primal),
        ("E_max dual", emax_dual),
        ("R_max primal", rmax_primal),
        ("R_max dual", rmax_dual),
    ] {
        chk.objective(name, v, target, 1e-10);
    }
    chk.zero(
        "E_max primal: Tr_B Y flat",
        &(tr_b(&y) - identity(2) * c(target)),
    );
    let report = EmaxWitnessReport {
        gamma: g,
        n,
        entanglement_breaking: false,
        target,
        lambda_minus: lm,
        b,
        a,
        emax_primal,
        emax_dual,
        rmax_primal,
        rmax_dual,
        max_violation: chk.worst,
    };
    chk.finish(report)
}
