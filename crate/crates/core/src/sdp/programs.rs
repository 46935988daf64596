//! Semidefinite programs over channel Choi matrices Γ on A⊗B.

use super::model::{solve_optimal, Affine, ConeProgram, Var};
use super::solver::SolverOptions;
use crate::channels::{compose_choi, ChoiMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::mathcore::{identity, partial_trace, partial_transpose, tensor};

fn pt_b(e: &Affine, da: usize, db: usize) -> Result<Affine> {
    e.try_map(|m| partial_transpose(m, &[da, db], 1))
}

fn tr_b(e: &Affine, da: usize, db: usize) -> Result<Affine> {
    e.try_map(|m| partial_trace(m, &[da, db], &[0]))
}

fn id_tensor(e: &Affine, da: usize) -> Affine {
    let ia = identity(da);
    e.map(|m| tensor(&ia, m))
}

fn scalar_times_identity(t: &Var, d: usize) -> Affine {
    let id = identity(d);
    t.expr().map(|m| &id * m[(0, 0)])
}

/// Adds the epigraph ½‖Δ‖⋄ ≤ t for the Choi expression `j_delta` on A⊗B.
fn diamond_epigraph(p: &mut ConeProgram, j_delta: &Affine, da: usize, db: usize) -> Result<Var> {
    let z = p.hermitian(da * db);
    let t = p.scalar();
    p.psd(z.expr());
    p.psd(z.expr().sub(j_delta));
    p.psd(scalar_times_identity(&t, da).sub(&tr_b(&z.expr(), da, db)?));
    Ok(t)
}

/// Channel constraints on a Choi variable over in⊗out: J ⪰ 0, Tr_out J = I.
fn channel_variable(p: &mut ConeProgram, din: usize, dout: usize) -> Result<Var> {
    let j = p.hermitian(din * dout);
    p.psd(j.expr());
    p.eq(tr_b(&j.expr(), din, dout)?.add_const(&(-identity(din))));
    Ok(j)
}

fn log2_positive(v: f64, what: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v.log2())
    } else {
        Err(Error::Solver(format!("{what}: non-positive optimum {v}")))
    }
}

/// ‖N₁ − N₂‖⋄.
pub fn diamond_dist(ch1: &QuantumChannel, ch2: &QuantumChannel) -> Result<f64> {
    diamond_dist_with(ch1, ch2, &SolverOptions::precise())
}

pub fn diamond_dist_with(
    ch1: &QuantumChannel,
    ch2: &QuantumChannel,
    opts: &SolverOptions,
) -> Result<f64> {
    if ch1.din() != ch2.din() || ch1.dout() != ch2.dout() {
        return Err(Error::DimMismatch(
            "diamond distance needs channels with equal dimensions".into(),
        ));
    }
    let (da, db) = (ch1.din(), ch1.dout());
    let jd = Affine::constant(ch1.choi_gamma() - ch2.choi_gamma());
    let mut p = ConeProgram::new();
    let t = diamond_epigraph(&mut p, &jd, da, db)?;
    p.minimize(t.expr().trace());
    let s = solve_optimal(&p, opts)?;
    Ok(2.0 * s.primal.max(0.0))
}

/// log₂ β(N): min Tr S s.t. −R ≤ Γ^{T_B} ≤ R, −I⊗S ≤ R^{T_B} ≤ I⊗S.
pub fn sdp_c_beta(ch: &QuantumChannel) -> Result<f64> {
    sdp_c_beta_with(ch, &SolverOptions::precise())
}

pub fn sdp_c_beta_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<f64> {
    let (da, db) = (ch.din(), ch.dout());
    let gt = partial_transpose(&ch.choi_gamma(), &[da, db], 1)?;
    let mut p = ConeProgram::new();
    let r = p.hermitian(da * db);
    let s = p.hermitian(db);
    p.psd(r.expr().add_const(&(-&gt)));
    p.psd(r.expr().add_const(&gt));
    let is = id_tensor(&s.expr(), da);
    let rt = pt_b(&r.expr(), da, db)?;
    p.psd(is.sub(&rt));
    p.psd(is.add(&rt));
    p.minimize(s.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    log2_positive(sol.primal, "beta")
}

/// log₂ ζ(N): min Tr S s.t. V ⪰ Γ, −I⊗S ≤ V^{T_B} ≤ I⊗S.
pub fn sdp_c_zeta(ch: &QuantumChannel) -> Result<f64> {
    sdp_c_zeta_with(ch, &SolverOptions::precise())
}

pub fn sdp_c_zeta_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<f64> {
    let (da, db) = (ch.din(), ch.dout());
    let gamma = ch.choi_gamma();
    let mut p = ConeProgram::new();
    let v = p.hermitian(da * db);
    let s = p.hermitian(db);
    p.psd(v.expr().add_const(&(-&gamma)));
    let is = id_tensor(&s.expr(), da);
    let vt = pt_b(&v.expr(), da, db)?;
    p.psd(is.sub(&vt));
    p.psd(is.add(&vt));
    p.minimize(s.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    log2_positive(sol.primal, "zeta")
}

/// ε = ½ min_D ‖N^c − D∘N‖⋄ over channels D: B → E, with the minimizing D.
pub fn sdp_eps_deg(ch: &QuantumChannel) -> Result<(f64, ChoiMatrix)> {
    sdp_eps_deg_with(ch, &SolverOptions::precise())
}

pub fn sdp_eps_deg_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<(f64, ChoiMatrix)> {
    let comp = ch.complementary();
    let (da, db, de) = (ch.din(), ch.dout(), comp.dout());
    let gamma = ch.choi_gamma();
    let mut p = ConeProgram::new();
    let jd = channel_variable(&mut p, db, de)?;
    let composed = jd.expr().map(|m| compose_choi(m, db, de, &gamma, da));
    let delta = composed.scale(-1.0).add_const(&comp.choi_gamma());
    let t = diamond_epigraph(&mut p, &delta, da, de)?;
    p.minimize(t.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    Ok((
        sol.primal.max(0.0),
        ChoiMatrix::from_gamma(db, de, sol.value(&jd)),
    ))
}

/// ε = ½ min_E ‖N − E∘N^c‖⋄ over channels E from the environment to B.
pub fn sdp_eps_adeg(ch: &QuantumChannel) -> Result<f64> {
    sdp_eps_adeg_with(ch, &SolverOptions::precise())
}

pub fn sdp_eps_adeg_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<f64> {
    let comp = ch.complementary();
    let (da, db, de) = (ch.din(), ch.dout(), comp.dout());
    let gamma_c = comp.choi_gamma();
    let mut p = ConeProgram::new();
    let je = channel_variable(&mut p, de, db)?;
    let composed = je.expr().map(|m| compose_choi(m, de, db, &gamma_c, da));
    let delta = composed.scale(-1.0).add_const(&ch.choi_gamma());
    let t = diamond_epigraph(&mut p, &delta, da, db)?;
    p.minimize(t.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    Ok(sol.primal.max(0.0))
}

/// ε = ½ min_M ‖N − M‖⋄ over channels M with PPT Choi matrix (exactly the
/// entanglement-breaking qubit channels), with the minimizing M.
pub fn sdp_eps_eb(ch: &QuantumChannel) -> Result<(f64, ChoiMatrix)> {
    sdp_eps_eb_with(ch, &SolverOptions::precise())
}

pub fn sdp_eps_eb_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<(f64, ChoiMatrix)> {
    let (da, db) = (ch.din(), ch.dout());
    if da * db > 6 {
        return Err(Error::DimMismatch(
            "PPT characterizes entanglement breaking only for qubit-qubit or qubit-qutrit".into(),
        ));
    }
    let mut p = ConeProgram::new();
    let j = channel_variable(&mut p, da, db)?;
    p.psd(pt_b(&j.expr(), da, db)?);
    let delta = j.expr().scale(-1.0).add_const(&ch.choi_gamma());
    let t = diamond_epigraph(&mut p, &delta, da, db)?;
    p.minimize(t.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    Ok((
        sol.primal.max(0.0),
        ChoiMatrix::from_gamma(da, db, sol.value(&j)),
    ))
}

/// R_max = log₂ min ‖Tr_B(V + Y)‖∞ s.t. V, Y ⪰ 0, (V − Y)^{T_B} ⪰ Γ.
pub fn sdp_delta_rmax(ch: &QuantumChannel) -> Result<f64> {
    sdp_delta_rmax_with(ch, &SolverOptions::precise())
}

pub fn sdp_delta_rmax_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<f64> {
    let (da, db) = (ch.din(), ch.dout());
    let mut p = ConeProgram::new();
    let v = p.hermitian(da * db);
    let y = p.hermitian(da * db);
    let t = p.scalar();
    p.psd(v.expr());
    p.psd(y.expr());
    p.psd(pt_b(&v.expr().sub(&y.expr()), da, db)?.add_const(&(-ch.choi_gamma())));
    p.psd(scalar_times_identity(&t, da).sub(&tr_b(&v.expr().add(&y.expr()), da, db)?));
    p.minimize(t.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    log2_positive(sol.primal, "R_max")
}

/// E_max = log₂ min ‖Tr_B Y‖∞ s.t. Y ⪰ Γ, Y^{T_B} ⪰ 0.
pub fn sdp_sigma_emax(ch: &QuantumChannel) -> Result<f64> {
    sdp_sigma_emax_with(ch, &SolverOptions::precise())
}

pub fn sdp_sigma_emax_with(ch: &QuantumChannel, opts: &SolverOptions) -> Result<f64> {
    let (da, db) = (ch.din(), ch.dout());
    let mut p = ConeProgram::new();
    let y = p.hermitian(da * db);
    let t = p.scalar();
    p.psd(y.expr().add_const(&(-ch.choi_gamma())));
    p.psd(pt_b(&y.expr(), da, db)?);
    p.psd(scalar_times_identity(&t, da).sub(&tr_b(&y.expr(), da, db)?));
    p.minimize(t.expr().trace());
    let sol = solve_optimal(&p, opts)?;
    log2_positive(sol.primal, "E_max")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadc::{ad_degrading_channel, gadc_channel, GadcParams};

    fn ch(g: f64, n: f64) -> QuantumChannel {
        gadc_channel(GadcParams::new(g, n).unwrap())
    }

    #[test]
    fn identical_channels_have_zero_distance() {
        let a = ch(0.4, 0.3);
        assert!(diamond_dist(&a, &a).unwrap().abs() < 1e-8);
    }

    #[test]
    fn orthogonal_constant_channels() {
        let d = diamond_dist(&ch(1.0, 0.0), &ch(1.0, 1.0)).unwrap();
        assert!((d - 2.0).abs() < 1e-6, "{d}");
    }

    #[test]
    fn covariance_distance() {
        let d = diamond_dist(&ch(0.4, 0.25), &ch(0.4, 0.5)).unwrap();
        assert!((d - 0.2).abs() < 1e-6, "{d}");
    }

    #[test]
    fn c_beta_and_zeta_closed_form() {
        for &(g, n) in &[(0.0, 0.0), (0.5, 0.0), (0.5, 0.3), (0.8, 0.5), (1.0, 0.2)] {
            let want = (1.0 + (1.0f64 - g).sqrt()).log2();
            let b = sdp_c_beta(&ch(g, n)).unwrap();
            let z = sdp_c_zeta(&ch(g, n)).unwrap();
            assert!((b - want).abs() < 1e-6, "beta {g} {n}: {b} vs {want}");
            assert!((z - want).abs() < 1e-6, "zeta {g} {n}: {z} vs {want}");
        }
    }

    #[test]
    fn emax_and_rmax_at_amplitude_damping() {
        let e = sdp_sigma_emax(&ch(0.5, 0.0)).unwrap();
        let r = sdp_delta_rmax(&ch(0.5, 0.0)).unwrap();
        assert!((e - 1.5f64.log2()).abs() < 1e-6, "{e}");
        assert!((r - 1.5f64.log2()).abs() < 1e-6, "{r}");
        let eb = sdp_sigma_emax(&ch(0.9, 0.5)).unwrap();
        assert!(eb.abs() < 1e-6, "{eb}");
    }

    #[test]
    fn degradable_amplitude_damping() {
        let (eps, d) = sdp_eps_deg(&ch(0.3, 0.0)).unwrap();
        assert!(eps < 1e-6, "{eps}");
        assert_eq!((d.din, d.dout), (2, 2));
        let _ = ad_degrading_channel(0.3).unwrap();
        let (eps, _) = sdp_eps_deg(&ch(0.2, 0.5)).unwrap();
        assert!(eps > 1e-4, "{eps}");
    }

    #[test]
    fn antidegradable_and_eb_parameters() {
        assert!(sdp_eps_adeg(&ch(0.6, 0.3)).unwrap() < 1e-6);
        assert!(sdp_eps_adeg(&ch(0.3, 0.1)).unwrap() > 1e-4);
        let (e, m) = sdp_eps_eb(&ch(0.9, 0.5)).unwrap();
        assert!(e < 1e-6, "{e}");
        assert!(QuantumChannel::from_choi(&m).is_ok());
        let (e, _) = sdp_eps_eb(&QuantumChannel::identity(2)).unwrap();
        assert!(e > 0.1);
    }
}
