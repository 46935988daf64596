//! Two-way assisted quantum and private capacity bounds: reverse coherent
//! information, half the mutual information, squashed-entanglement bounds
//! from the two serial decompositions, the max-Rains bound and the
//! approximate-covariance bound built on a Bell-diagonal E_R closed form.

use crate::bounds_classical::{eps_cov, mutual_info_gadc};
use crate::error::{Error, Result};
use crate::gadc::{
    eb_gamma_threshold, gadc_channel, is_entanglement_breaking, kraus_full, GadcParams,
};
use crate::mathcore::{
    c, cmi, diag, entropy, g, identity, relative_entropy, tensor, xlog2x, ComplexMatrix,
};
use crate::optim::{bfgs_min, maximize_scalar, sigmoid, BfgsOptions};

/// Seeding grid for the squashed-entanglement maximization over p.
pub const ESQ_SEED_GRID: usize = 101;
/// Seeding grid for the reverse coherent information.
pub const SEED_GRID: usize = 200;
/// Argument tolerance of one-dimensional maximizations.
pub const ARG_TOL: f64 = 1e-10;

/// H(ρ) − H(A^c(ρ)) maximized over diagonal inputs, clipped at 0.
pub fn reverse_coherent_lb(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    let comp = gadc_channel(p).complementary();
    let f = |q: f64| {
        let rho = diag(&[1.0 - q, q]);
        entropy(&rho) - entropy(&comp.apply_unchecked(&rho))
    };
    Ok(maximize_scalar(f, 0.0, 1.0, SEED_GRID, ARG_TOL)
        .value
        .max(0.0))
}

/// ½ C_E.
pub fn half_mi_ub(p: GadcParams) -> Result<f64> {
    Ok(0.5 * mutual_info_gadc(p)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SquashVariant {
    /// A_{γN,1} ∘ A_{γ(1−N)/(1−γN),0}.
    One,
    /// A_{γ(1−N),0} ∘ A_{γN/(1−γ(1−N)),1}.
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquashedBoundConfig {
    pub variant: SquashVariant,
    /// Squashing channels (γ₁, N₁) on E₁′ and (γ₂, N₂) on E₂′.
    pub squash: [f64; 4],
}

impl SquashedBoundConfig {
    pub fn new(variant: SquashVariant, squash: [f64; 4]) -> Result<Self> {
        if squash.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Domain(format!(
                "squash parameters {:?} outside [0,1]",
                squash
            )));
        }
        Ok(Self { variant, squash })
    }

    pub fn standard(variant: SquashVariant) -> Self {
        Self {
            variant,
            squash: [0.5, 0.0, 0.5, 0.0],
        }
    }
}

/// Isometry V: qubit → B⊗E (4×2) of A_{γ,0} (`excited = false`) or A_{γ,1}.
fn extremal_isometry(gamma: f64, excited: bool) -> ComplexMatrix {
    let n = if excited { 1.0 } else { 0.0 };
    let ks = kraus_full(GadcParams { gamma, n });
    let pair = if excited {
        [&ks[2], &ks[3]]
    } else {
        [&ks[0], &ks[1]]
    };
    ComplexMatrix::from_fn(4, 2, |row, col| pair[row % 2][(row / 2, col)])
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// |ψ_p⟩ on A⊗B⊗E₂′⊗E₁′ for the chosen decomposition.
fn serial_purification(params: GadcParams, variant: SquashVariant, p: f64) -> ComplexMatrix {
    let (gm, n) = (params.gamma, params.n);
    let (first, second) = match variant {
        SquashVariant::One => (
            extremal_isometry(ratio_or_zero(gm * (1.0 - n), 1.0 - gm * n), false),
            extremal_isometry(gm * n, true),
        ),
        SquashVariant::Two => (
            extremal_isometry(ratio_or_zero(gm * n, 1.0 - gm * (1.0 - n)), true),
            extremal_isometry(gm * (1.0 - n), false),
        ),
    };
    let mut theta = ComplexMatrix::zeros(4, 1);
    theta[(0, 0)] = c((1.0 - p).sqrt());
    theta[(3, 0)] = c(p.sqrt());
    // A⊗A′ → A⊗B′⊗E₁′ → A⊗B⊗E₂′⊗E₁′.
    let step1 = tensor(&identity(2), &first) * theta;
    tensor(&tensor(&identity(2), &second), &identity(2)) * step1
}

/// ½ I(A;B|E₁E₂) of the squashed state for input θ^p.
pub fn squashed_cmi(params: GadcParams, cfg: &SquashedBoundConfig, p: f64) -> Result<f64> {
    let psi = serial_purification(params, cfg.variant, p);
    let rho = &psi * psi.adjoint();
    let s1 = kraus_full(GadcParams {
        gamma: cfg.squash[0],
        n: cfg.squash[1],
    });
    let s2 = kraus_full(GadcParams {
        gamma: cfg.squash[2],
        n: cfg.squash[3],
    });
    let id4 = identity(4);
    let mut out = ComplexMatrix::zeros(16, 16);
    for k2 in &s2 {
        for k1 in &s1 {
            let k = tensor(&tensor(&id4, k2), k1);
            out += &k * &rho * k.adjoint();
        }
    }
    Ok(0.5 * cmi(&out, &[2, 2, 2, 2], &[0], &[1], &[2, 3])?.max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquashedBound {
    pub value: f64,
    pub p: f64,
}

/// ½ max_p I(A;B|E₁E₂) for one configuration.
pub fn esq_ub(params: GadcParams, cfg: &SquashedBoundConfig) -> Result<SquashedBound> {
    GadcParams::new(params.gamma, params.n)?;
    SquashedBoundConfig::new(cfg.variant, cfg.squash)?;
    let f = |p: f64| squashed_cmi(params, cfg, p).unwrap_or(f64::NEG_INFINITY);
    let opt = maximize_scalar(f, 0.0, 1.0, ESQ_SEED_GRID, ARG_TOL);
    Ok(SquashedBound {
        value: opt.value,
        p: opt.x,
    })
}

/// Reported squashed bound: the smaller of the two standard variants.
pub fn esq_ub_best(params: GadcParams) -> Result<f64> {
    let a = esq_ub(params, &SquashedBoundConfig::standard(SquashVariant::One))?;
    let b = esq_ub(params, &SquashedBoundConfig::standard(SquashVariant::Two))?;
    Ok(a.value.min(b.value))
}

/// Local descent over the squash parameters, seeded at (½, 0, ½, 0). Any
/// fixed squash gives a valid bound, so the result is never above the seed.
pub fn esq_ub_reoptimized(params: GadcParams, variant: SquashVariant) -> Result<SquashedBound> {
    let seed = esq_ub(params, &SquashedBoundConfig::standard(variant))?;
    let to_cfg = |x: &[f64]| SquashedBoundConfig {
        variant,
        squash: [sigmoid(x[0]), sigmoid(x[1]), sigmoid(x[2]), sigmoid(x[3])],
    };
    let objective = |x: &[f64]| {
        esq_ub(params, &to_cfg(x))
            .map(|b| b.value)
            .unwrap_or(f64::INFINITY)
    };
    // sigmoid(−8) ≈ 3e-4 stands in for N = 0.
    let x0 = [0.0, -8.0, 0.0, -8.0];
    let r = bfgs_min(
        objective,
        &x0,
        BfgsOptions {
            max_iter: 25,
            grad_tol: 1e-7,
            fd_step: 1e-4,
        },
    );
    if r.value < seed.value {
        esq_ub(params, &to_cfg(&r.x))
    } else {
        Ok(seed)
    }
}

/// log₂(1 − γ/2 + ½√((γ(2N−1))² + 4(1−γ))), or 0 when entanglement breaking.
pub fn max_rains_analytic(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    if is_entanglement_breaking(p).entanglement_breaking {
        return Ok(0.0);
    }
    let (gm, n) = (p.gamma, p.n);
    let root = ((gm * (2.0 * n - 1.0)).powi(2) + 4.0 * (1.0 - gm)).sqrt();
    Ok((1.0 - 0.5 * gm + 0.5 * root).log2().max(0.0))
}

/// Bell coefficients (r₀₀, r₀₁, r₁₀, r₁₁) of ρ^γ = A_{γ,1/2}(Φ⁺).
pub fn bell_coefficients(gamma: f64) -> [f64; 4] {
    let s = (1.0 - gamma).sqrt();
    [
        0.25 * (2.0 + 2.0 * s - gamma),
        0.25 * (2.0 - 2.0 * s - gamma),
        0.25 * gamma,
        0.25 * gamma,
    ]
}

/// ρ^γ = A_{γ,1/2}(Φ⁺).
pub fn bell_state_rho(gamma: f64) -> ComplexMatrix {
    let s = (1.0 - gamma).sqrt();
    let h = 0.5 * gamma;
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(0.5 * (1.0 - h));
    m[(3, 3)] = c(0.5 * (1.0 - h));
    m[(1, 1)] = c(0.5 * h);
    m[(2, 2)] = c(0.5 * h);
    m[(0, 3)] = c(0.5 * s);
    m[(3, 0)] = c(0.5 * s);
    m
}

/// Closest separable state to ρ^γ in the entangled range.
pub fn bell_closest_separable(gamma: f64) -> ComplexMatrix {
    let x = gamma / (2.0 * (2.0 - 2.0 * (1.0 - gamma).sqrt() + gamma));
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = c(0.5 - x);
    m[(3, 3)] = c(0.5 - x);
    m[(1, 1)] = c(x);
    m[(2, 2)] = c(x);
    m[(0, 3)] = c(x);
    m[(3, 0)] = c(x);
    m
}

/// E_R(A;B) of ρ^γ; zero from γ = 2(√2−1) on, where ρ^γ is separable.
pub fn er_bell_diagonal(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma = {} outside [0,1]", gamma)));
    }
    if gamma >= eb_gamma_threshold() {
        return Ok(0.0);
    }
    if gamma == 0.0 {
        return Ok(1.0);
    }
    let s = (1.0 - gamma).sqrt();
    let r = bell_coefficients(gamma);
    let v = r.iter().map(|&x| xlog2x(x)).sum::<f64>() + 1.0
        - 0.5 * gamma * (gamma / (2.0 - 2.0 * s + gamma)).log2()
        + 0.25 * (gamma - 2.0 + 2.0 * s) * ((4.0 - gamma - 4.0 * s) / (8.0 + gamma)).log2();
    Ok(v.max(0.0))
}

/// D(ρ^γ ‖ σ) with the closed-form closest separable state.
pub fn er_bell_direct(gamma: f64) -> Result<f64> {
    relative_entropy(&bell_state_rho(gamma), &bell_closest_separable(gamma))
}

/// E_R(ρ^γ) + 2ε + g(ε) with ε = γ|N − ½|.
pub fn cov_twoway_ub(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    let eps = eps_cov(p);
    Ok(er_bell_diagonal(p.gamma)? + 2.0 * eps + g(eps))
}

#[derive(Debug, Clone)]
pub struct TwoWayBoundSet {
    pub rci_lb: f64,
    pub half_mi: f64,
    pub esq1: f64,
    pub esq2: f64,
    pub max_rains: f64,
    pub cov: f64,
}

pub fn twoway_bound_set(p: GadcParams) -> Result<TwoWayBoundSet> {
    Ok(TwoWayBoundSet {
        rci_lb: reverse_coherent_lb(p)?,
        half_mi: half_mi_ub(p)?,
        esq1: esq_ub(p, &SquashedBoundConfig::standard(SquashVariant::One))?.value,
        esq2: esq_ub(p, &SquashedBoundConfig::standard(SquashVariant::Two))?.value,
        max_rains: max_rains_analytic(p)?,
        cov: cov_twoway_ub(p)?,
    })
}
