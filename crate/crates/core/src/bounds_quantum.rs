//! Quantum and private capacity bounds: coherent-information lower bound,
//! data-processing bounds from the serial decompositions, approximate
//! (anti-)degradability bounds, the Rains information bound and the
//! extended-channel bound for the qubit thermal channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{apply_choi, ChoiMatrix, QuantumChannel};
use crate::error::{Error, Result};
use crate::gadc::{
    choi_gamma, extended_channel, extended_complement, gadc_channel, is_antidegradable, GadcParams,
    ThermalParams,
};
use crate::mathcore::{bloch_to_density, c, diag, entropy, g, h2, relative_entropy, ComplexMatrix};
use crate::optim::{
    golden_max, maximize_on_nodes, maximize_scalar, multistart_min, sigmoid, softmax, BfgsOptions,
    DEFAULT_SEED,
};
use crate::sdp::{self, SolverOptions};

/// Seeding grid for one-dimensional maximizations over diagonal inputs.
pub const SEED_GRID: usize = 200;
/// Geometric seeds per end, spanning distances 1e-2 to 1e-12 from 0 and 1.
pub const END_NODES: usize = 40;
/// Argument tolerance of one-dimensional maximizations.
pub const ARG_TOL: f64 = 1e-10;
/// Restarts of the inner Rains minimization.
pub const RAINS_RESTARTS: usize = 10;
/// Outer seeding grid of the Rains maximization (objective is concave).
pub const RAINS_SEED_GRID: usize = 21;
/// Argument tolerance of the outer Rains maximization.
pub const RAINS_ARG_TOL: f64 = 1e-7;
/// Bloch-ball restarts for U_D.
pub const UD_RESTARTS: usize = 8;

/// Q(A_{γ,0}) = max_p h₂((1−γ)p) − h₂(γp) for γ < ½, else 0.
pub fn q_ad(gamma: f64) -> f64 {
    if gamma >= 0.5 {
        return 0.0;
    }
    let gamma = gamma.max(0.0);
    maximize_scalar(
        |p| h2((1.0 - gamma) * p) - h2(gamma * p),
        0.0,
        1.0,
        SEED_GRID,
        ARG_TOL,
    )
    .value
    .max(0.0)
}

fn diagonal_input(p: f64) -> ComplexMatrix {
    diag(&[1.0 - p, p])
}

/// max_p I_c(diag(1−p, p)) for a channel and a complement.
fn diagonal_coherent_info(ch: &QuantumChannel, comp: &QuantumChannel) -> f64 {
    let f = |p: f64| {
        let rho = diagonal_input(p);
        entropy(&ch.apply_unchecked(&rho)) - entropy(&comp.apply_unchecked(&rho))
    };
    // Narrow positive peaks can sit within 1e-3 of either end, so the uniform
    // grid is augmented with geometric nodes toward 0 and 1.
    let mut nodes: Vec<f64> = (0..SEED_GRID)
        .map(|k| k as f64 / (SEED_GRID - 1) as f64)
        .collect();
    for k in 0..=END_NODES {
        let d = 10f64.powf(-2.0 - 10.0 * k as f64 / END_NODES as f64);
        nodes.extend([d, 1.0 - d]);
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let grid = maximize_on_nodes(&f, &nodes, ARG_TOL).value;
    let whole = golden_max(&f, 0.0, 1.0, ARG_TOL).value;
    grid.max(whole).max(0.0)
}

/// Coherent information of A_{γ,N} maximized over diagonal inputs, clipped at 0.
/// Exactly 0 in the anti-degradable region γ ≥ ½.
pub fn coherent_info_lb(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    if is_antidegradable(p) {
        return Ok(0.0);
    }
    let ch = gadc_channel(p);
    Ok(diagonal_coherent_info(&ch, &ch.complementary()))
}

/// The four data-processing bounds, in order DP1..DP4.
pub fn dp_bounds(p: GadcParams) -> Result<[f64; 4]> {
    GadcParams::new(p.gamma, p.n)?;
    let (gm, n) = (p.gamma, p.n);
    let ratio = |num: f64, den: f64| if den > 0.0 { Some(num / den) } else { None };
    let q = |arg: Option<f64>| arg.map(q_ad).unwrap_or(1.0);
    Ok([
        q(ratio(gm * (1.0 - n), 1.0 - gm * n)),
        q_ad(gm * (1.0 - n)),
        q_ad(gm * n),
        q(ratio(gm * n, 1.0 - gm * (1.0 - n))),
    ])
}

/// U_D = max_ρ H(N(ρ)) − H(D(N(ρ))), i.e. H(F|Ẽ) for the Stinespring
/// dilation of the degrading map D: B → E.
pub fn u_d(ch: &QuantumChannel, degrading: &ChoiMatrix) -> Result<f64> {
    u_d_seeded(ch, degrading, DEFAULT_SEED)
}

pub fn u_d_seeded(ch: &QuantumChannel, degrading: &ChoiMatrix, seed: u64) -> Result<f64> {
    if ch.din() != 2 {
        return Err(Error::DimMismatch(
            "U_D is optimized over the qubit Bloch ball".into(),
        ));
    }
    if degrading.din != ch.dout() {
        return Err(Error::DimMismatch(format!(
            "degrading map input {} does not match channel output {}",
            degrading.din,
            ch.dout()
        )));
    }
    let gamma_d = degrading.gamma();
    let objective = |r: [f64; 3]| {
        let out = ch.apply_unchecked(&bloch_to_density(r));
        let env = apply_choi(&gamma_d, degrading.din, degrading.dout, &out);
        entropy(&out) - entropy(&env)
    };
    // x ∈ R³ ↦ x / √(1 + |x|²) maps onto the open Bloch ball.
    let to_ball = |x: &[f64]| {
        let s = (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        [x[0] / s, x[1] / s, x[2] / s]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![0.0; 3]];
    while starts.len() < UD_RESTARTS {
        starts.push((0..3).map(|_| rng.gen_range(-2.0..2.0)).collect());
    }
    let best = multistart_min(|x| -objective(to_ball(x)), &starts, BfgsOptions::default());
    Ok(-best.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegBound {
    pub q_ub: f64,
    pub p_ub: f64,
    pub eps: f64,
}

fn check_deg_domain(p: GadcParams) -> Result<()> {
    GadcParams::new(p.gamma, p.n)?;
    if p.gamma >= 0.5 {
        return Err(Error::Domain(format!(
            "approximate degradability bounds need γ < 1/2, got {}",
            p.gamma
        )));
    }
    Ok(())
}

/// U_D + 4ε + g(ε) and U_D + 12ε + 3g(ε) with ε = ε_deg (d_E = 4).
pub fn eps_deg_ubs(p: GadcParams) -> Result<DegBound> {
    eps_deg_ubs_with(p, &SolverOptions::precise(), DEFAULT_SEED)
}

pub fn eps_deg_ubs_with(p: GadcParams, opts: &SolverOptions, seed: u64) -> Result<DegBound> {
    check_deg_domain(p)?;
    let ch = gadc_channel(p);
    let (eps, d) = sdp::sdp_eps_deg_with(&ch, opts)?;
    let eps = eps.max(0.0);
    let ud = u_d_seeded(&ch, &d, seed)?;
    Ok(DegBound {
        q_ub: ud + 4.0 * eps + g(eps),
        p_ub: ud + 12.0 * eps + 3.0 * g(eps),
        eps,
    })
}

/// Q(A_{γ,0}) + 2ε + 2g(ε) and Q(A_{γ,0}) + 4ε + 4g(ε), ε = ½‖A_{γ,N} − A_{γ,0}‖⋄.
pub fn eps_close_deg_ubs(p: GadcParams) -> Result<DegBound> {
    eps_close_deg_ubs_with(p, &SolverOptions::precise())
}

pub fn eps_close_deg_ubs_with(p: GadcParams, opts: &SolverOptions) -> Result<DegBound> {
    check_deg_domain(p)?;
    let ad = GadcParams {
        gamma: p.gamma,
        n: 0.0,
    };
    let eps = (0.5 * sdp::diamond_dist_with(&gadc_channel(p), &gadc_channel(ad), opts)?).max(0.0);
    let q = q_ad(p.gamma);
    Ok(DegBound {
        q_ub: q + 2.0 * eps + 2.0 * g(eps),
        p_ub: q + 4.0 * eps + 4.0 * g(eps),
        eps,
    })
}

/// 2ε + h₂(ε) + g(ε) with ε = ε_a-deg (d_B = 2).
pub fn eps_adeg_ub(p: GadcParams) -> Result<f64> {
    eps_adeg_ub_with(p, &SolverOptions::precise())
}

pub fn eps_adeg_ub_with(p: GadcParams, opts: &SolverOptions) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    let eps = sdp::sdp_eps_adeg_with(&gadc_channel(p), opts)?.clamp(0.0, 1.0);
    Ok(2.0 * eps + h2(eps) + g(eps))
}

/// Real symmetric 2×2 [[a, b], [b, d]] as eigenpairs (λ, unit vector).
fn sym2_eig(a: f64, b: f64, d: f64) -> [(f64, [f64; 2]); 2] {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = (half * half + b * b).sqrt();
    let (l1, l2) = (mean + rad, mean - rad);
    let v1 = if rad == 0.0 {
        [1.0, 0.0]
    } else {
        let theta = 0.5 * b.atan2(half);
        [theta.cos(), theta.sin()]
    };
    [(l1, v1), (l2, [-v1[1], v1[0]])]
}

fn log2_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.log2()
    } else {
        f64::NEG_INFINITY
    }
}

/// Tr r log₂ r − Tr r log₂ s for real symmetric 2×2 blocks [a, b, d].
fn block_rel_ent(r: [f64; 3], s: [f64; 3]) -> f64 {
    let mut v = 0.0;
    for (lam, _) in sym2_eig(r[0], r[1], r[2]) {
        if lam > 1e-300 {
            v += lam * lam.log2();
        }
    }
    for (mu, u) in sym2_eig(s[0], s[1], s[2]) {
        let weight = r[0] * u[0] * u[0] + 2.0 * r[1] * u[0] * u[1] + r[2] * u[1] * u[1];
        if weight.abs() > 1e-300 {
            v -= weight * log2_or_neg_inf(mu);
        }
    }
    v
}

fn scalar_rel_ent(r: f64, s: f64) -> f64 {
    if r <= 0.0 {
        0.0
    } else {
        r * (r.log2() - log2_or_neg_inf(s))
    }
}

/// X-shaped state in the {00,11} ⊕ {01} ⊕ {10} block form:
/// outer = [ρ₀₀,₀₀, ρ₀₀,₁₁, ρ₁₁,₁₁], mid = [ρ₀₁,₀₁, ρ₁₀,₁₀].
#[derive(Debug, Clone, Copy)]
struct XState {
    outer: [f64; 3],
    mid: [f64; 2],
}

impl XState {
    fn to_matrix(self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = c(self.outer[0]);
        m[(0, 3)] = c(self.outer[1]);
        m[(3, 0)] = c(self.outer[1]);
        m[(3, 3)] = c(self.outer[2]);
        m[(1, 1)] = c(self.mid[0]);
        m[(2, 2)] = c(self.mid[1]);
        m
    }

    fn rel_ent(&self, s: &XState) -> f64 {
        block_rel_ent(self.outer, s.outer)
            + scalar_rel_ent(self.mid[0], s.mid[0])
            + scalar_rel_ent(self.mid[1], s.mid[1])
    }
}

/// (id ⊗ A_{γ,N})(θ^p) with |θ^p⟩ = √(1−p)|00⟩ + √p|11⟩.
pub fn theta_output(params: GadcParams, p: f64) -> ComplexMatrix {
    let w = diag(&[(1.0 - p).sqrt(), p.sqrt()]).kronecker(&crate::mathcore::identity(2));
    &w * choi_gamma(params) * &w
}

fn theta_output_x(params: GadcParams, p: f64) -> XState {
    let m = theta_output(params, p);
    XState {
        outer: [m[(0, 0)].re, m[(0, 3)].re, m[(3, 3)].re],
        mid: [m[(1, 1)].re, m[(2, 2)].re],
    }
}

/// σ(α, β, γ′, δ, ξ) from unconstrained coordinates: softmax for the
/// diagonal, ξ as a sigmoid fraction of min(√(αδ), √(βγ′)).
fn ppt_candidate(x: &[f64]) -> XState {
    let w = softmax(&x[0..4]);
    let (a, b, gg, d) = (2.0 * w[0], 2.0 * w[1], 2.0 * w[2], 2.0 * w[3]);
    let xi = sigmoid(x[4]) * (a * d).sqrt().min((b * gg).sqrt());
    XState {
        outer: [0.5 * a, 0.5 * xi, 0.5 * d],
        mid: [0.5 * b, 0.5 * gg],
    }
}

#[derive(Debug, Clone)]
pub struct RainsInner {
    pub value: f64,
    pub coords: Vec<f64>,
    /// Lowest value over the 16-point φ grid at the optimum.
    pub phi_checked: f64,
}

/// min over the PPT family of D(ρ_AB(p) ‖ σ).
pub fn rains_inner(params: GadcParams, p: f64) -> RainsInner {
    rains_inner_seeded(params, p, DEFAULT_SEED)
}

pub fn rains_inner_seeded(params: GadcParams, p: f64, seed: u64) -> RainsInner {
    let rho = theta_output_x(params, p);
    let f = |x: &[f64]| rho.rel_ent(&ppt_candidate(x));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // ρ's own diagonal is a natural start; the rest are random.
    let diag_logits: Vec<f64> = [rho.outer[0], rho.mid[0], rho.mid[1], rho.outer[2]]
        .iter()
        .map(|&v| (v.max(1e-12)).ln())
        .collect();
    let mut starts = vec![
        [diag_logits.clone(), vec![0.0]].concat(),
        [diag_logits, vec![-3.0]].concat(),
    ];
    while starts.len() < RAINS_RESTARTS {
        let mut s: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
        s.push(rng.gen_range(-4.0..4.0));
        starts.push(s);
    }
    let opts = BfgsOptions {
        max_iter: 400,
        grad_tol: 1e-10,
        fd_step: 1e-6,
    };
    let best = multistart_min(f, &starts, opts);
    let sigma = ppt_candidate(&best.x);
    let rho_m = rho.to_matrix();
    let mut phi_checked = best.value;
    for k in 0..16 {
        let phi = std::f64::consts::TAU * k as f64 / 16.0;
        let mut s = sigma.to_matrix();
        let e = num_complex::Complex64::from_polar(sigma.outer[1], phi);
        s[(0, 3)] = e;
        s[(3, 0)] = e.conj();
        if let Ok(v) = relative_entropy(&rho_m, &s) {
            phi_checked = phi_checked.min(v);
        }
    }
    RainsInner {
        value: best.value.min(phi_checked),
        coords: best.x,
        phi_checked,
    }
}

#[derive(Debug, Clone)]
pub struct RainsBound {
    pub value: f64,
    pub p: f64,
}

/// Rains information max_p min_σ D(ρ_AB(p) ‖ σ).
pub fn rains_ub(params: GadcParams) -> Result<RainsBound> {
    rains_ub_seeded(params, DEFAULT_SEED)
}

pub fn rains_ub_seeded(params: GadcParams, seed: u64) -> Result<RainsBound> {
    GadcParams::new(params.gamma, params.n)?;
    let opt = maximize_scalar(
        |p| rains_inner_seeded(params, p, seed).value,
        0.0,
        1.0,
        RAINS_SEED_GRID,
        RAINS_ARG_TOL,
    );
    Ok(RainsBound {
        value: opt.value.max(0.0),
        p: opt.x,
    })
}

/// Q(L̂_{η,N}) by diagonal-input coherent information of the extended channel.
pub fn q_rmg_ub(t: ThermalParams) -> Result<f64> {
    ThermalParams::new(t.eta, t.n)?;
    if t.n == 0.0 {
        return Ok(q_ad(1.0 - t.eta));
    }
    Ok(diagonal_coherent_info(
        &extended_channel(t),
        &extended_complement(t),
    ))
}

/// Coherent information of L̂_{η,N} over the full Bloch ball (oracle for the
/// diagonal restriction).
pub fn q_rmg_full_bloch(t: ThermalParams) -> Result<f64> {
    ThermalParams::new(t.eta, t.n)?;
    let (ch, comp) = (extended_channel(t), extended_complement(t));
    let f = |r: [f64; 3]| {
        let rho = bloch_to_density(r);
        entropy(&ch.apply_unchecked(&rho)) - entropy(&comp.apply_unchecked(&rho))
    };
    let to_ball = |x: &[f64]| {
        let s = (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        [x[0] / s, x[1] / s, x[2] / s]
    };
    let starts = vec![
        vec![0.0; 3],
        vec![0.3, -0.2, 0.5],
        vec![-0.4, 0.1, -0.6],
        vec![0.1, 0.7, 0.2],
    ];
    let best = multistart_min(|x| -f(to_ball(x)), &starts, BfgsOptions::default());
    Ok((-best.value).max(0.0))
}

#[derive(Debug, Clone)]
pub struct QuantumBoundSet {
    pub ic_lb: f64,
    pub dp: [f64; 4],
    /// None outside γ ∈ [0, ½).
    pub deg1: Option<DegBound>,
    pub deg2: Option<DegBound>,
    pub adeg: f64,
    pub rains: f64,
    pub rmg: f64,
}

impl QuantumBoundSet {
    /// Every quantum upper bound that is defined at this point.
    pub fn upper_bounds(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("dp1", self.dp[0]),
            ("dp2", self.dp[1]),
            ("dp3", self.dp[2]),
            ("dp4", self.dp[3]),
            ("adeg", self.adeg),
            ("rains", self.rains),
            ("rmg", self.rmg),
        ];
        if let Some(d) = &self.deg1 {
            v.push(("deg1", d.q_ub));
        }
        if let Some(d) = &self.deg2 {
            v.push(("deg2", d.q_ub));
        }
        v
    }
}

pub fn quantum_bound_set(p: GadcParams) -> Result<QuantumBoundSet> {
    let in_deg = p.gamma < 0.5;
    Ok(QuantumBoundSet {
        ic_lb: coherent_info_lb(p)?,
        dp: dp_bounds(p)?,
        deg1: if in_deg { Some(eps_deg_ubs(p)?) } else { None },
        deg2: if in_deg {
            Some(eps_close_deg_ubs(p)?)
        } else {
            None
        },
        adeg: eps_adeg_ub(p)?,
        rains: rains_ub(p)?.value,
        rmg: q_rmg_ub(p.thermal())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::coherent_information;
    use crate::gadc::ad_degrading_channel;

    fn gp(gamma: f64, n: f64) -> GadcParams {
        GadcParams::new(gamma, n).unwrap()
    }

    #[test]
    fn q_ad_values() {
        assert!((q_ad(0.0) - 1.0).abs() < 1e-12);
        assert_eq!(q_ad(0.5), 0.0);
        let opt = maximize_scalar(|p| h2(0.75 * p) - h2(0.25 * p), 0.0, 1.0, 200, 1e-10);
        assert!((q_ad(0.25) - opt.value).abs() < 1e-12);
        assert!((q_ad(0.25) - 0.4151).abs() < 5e-4, "{}", q_ad(0.25));
    }

    #[test]
    fn coherent_info_limits() {
        assert!((coherent_info_lb(gp(0.0, 0.3)).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(coherent_info_lb(gp(0.6, 0.3)).unwrap(), 0.0);
        assert!((coherent_info_lb(gp(0.25, 0.0)).unwrap() - q_ad(0.25)).abs() < 1e-8);
    }

    #[test]
    fn dp_structure() {
        let d = dp_bounds(gp(0.3, 0.0)).unwrap();
        assert!((d[0] - q_ad(0.3)).abs() < 1e-14);
        assert_eq!(d[2], q_ad(0.0));
        let h = dp_bounds(gp(0.3, 0.5)).unwrap();
        assert!((h[0] - h[3]).abs() < 1e-14 && (h[1] - h[2]).abs() < 1e-14);
        let lb = coherent_info_lb(gp(0.2, 0.1)).unwrap();
        for v in dp_bounds(gp(0.2, 0.1)).unwrap() {
            assert!(v.is_finite() && v >= lb - 1e-9);
        }
    }

    #[test]
    fn u_d_degradable_amplitude_damping() {
        let ch = gadc_channel(gp(0.3, 0.0));
        let d = ad_degrading_channel(0.3).unwrap();
        // Entropies only see D∘N up to a unitary on E.
        let ud = u_d(&ch, &d.choi()).unwrap();
        let ic = coherent_info_lb(gp(0.3, 0.0)).unwrap();
        assert!((ud - ic).abs() < 1e-6, "{} vs {}", ud, ic);
    }

    #[test]
    fn deg_bounds_domain_and_order() {
        assert!(eps_deg_ubs(gp(0.6, 0.2)).is_err());
        assert!(eps_close_deg_ubs(gp(0.5, 0.2)).is_err());
        let b = eps_deg_ubs(gp(0.2, 0.3)).unwrap();
        assert!(b.p_ub >= b.q_ub && b.q_ub.is_finite());
        assert!(b.q_ub >= coherent_info_lb(gp(0.2, 0.3)).unwrap() - 1e-6);
    }

    #[test]
    fn close_deg_limit() {
        let b = eps_close_deg_ubs(gp(0.2, 0.0)).unwrap();
        assert!(b.eps < 1e-7);
        assert!((b.q_ub - q_ad(0.2)).abs() < 1e-5);
    }

    #[test]
    fn adeg_vanishes_beyond_half() {
        assert!(eps_adeg_ub(gp(0.6, 0.3)).unwrap() < 1e-5);
        assert!(eps_adeg_ub(gp(0.1, 0.1)).unwrap() > 0.1);
    }

    #[test]
    fn block_relative_entropy_matches_dense() {
        let rho = theta_output_x(gp(0.3, 0.2), 0.4);
        let sigma = ppt_candidate(&[0.1, -0.3, 0.2, 0.4, 0.7]);
        let dense = relative_entropy(&rho.to_matrix(), &sigma.to_matrix()).unwrap();
        assert!((dense - rho.rel_ent(&sigma)).abs() < 1e-10);
    }

    #[test]
    fn rains_limits() {
        assert!((rains_ub(gp(0.0, 0.3)).unwrap().value - 1.0).abs() < 1e-4);
        assert!(rains_ub(gp(0.9, 0.5)).unwrap().value < 1e-4);
    }

    #[test]
    fn rmg_limits_and_diagonal_restriction() {
        assert!((q_rmg_ub(ThermalParams::new(1.0, 0.2).unwrap()).unwrap() - 1.0).abs() < 1e-9);
        let t = ThermalParams::new(0.7, 0.01).unwrap();
        let dp1 = dp_bounds(t.gadc()).unwrap()[0];
        assert!(dp1 <= q_rmg_ub(t).unwrap() + 1e-9);
        let t = ThermalParams::new(0.8, 0.1).unwrap();
        assert!((q_rmg_ub(t).unwrap() - q_rmg_full_bloch(t).unwrap()).abs() < 1e-7);
        assert!(
            (q_rmg_ub(ThermalParams::new(0.8, 0.0).unwrap()).unwrap() - q_ad(0.2)).abs() < 1e-14
        );
    }

    #[test]
    fn coherent_information_of_diagonal_input() {
        let ch = gadc_channel(gp(0.2, 0.1));
        let v = coherent_information(&ch, &diagonal_input(0.4)).unwrap();
        assert!(v <= coherent_info_lb(gp(0.2, 0.1)).unwrap() + 1e-12);
    }
}
