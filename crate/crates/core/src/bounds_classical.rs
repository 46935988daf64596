//! Classical-capacity bounds: the Holevo information lower bound (closed form
//! up to a scalar root and a generic ensemble optimizer), C_β, the
//! approximate-covariance and approximate-entanglement-breaking upper bounds,
//! Filippov's bound and the entanglement-assisted capacity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{bloch_entropy, BlochAffine, QuantumChannel};
use crate::error::{Error, Result};
use crate::gadc::{gadc_channel, GadcParams};
use crate::mathcore::{g, h2, xlog2x};
use crate::optim::{bisect, maximize_scalar, multistart_min, softmax, BfgsOptions, DEFAULT_SEED};
use crate::sdp::{self, SolverOptions};

/// Uniform scan points used to bracket roots of the Holevo equation.
pub const HOLEVO_SCAN: usize = 2000;
/// Restarts of the generic ensemble optimizer.
pub const ENSEMBLE_RESTARTS: usize = 24;
/// Seeding grid for one-dimensional maximizations.
pub const SEED_GRID: usize = 200;
/// Argument tolerance of one-dimensional maximizations.
pub const ARG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HolevoSolve {
    pub chi: f64,
    pub q: f64,
    pub rstar: f64,
    pub residual: f64,
    /// Sign changes found by the scan (q = 0 included at N = ½).
    pub roots_found: usize,
    /// True when no root was found and the ensemble optimizer was used.
    pub fallback: bool,
}

/// f(x) = (1+x)log₂(1+x) + (1−x)log₂(1−x).
pub fn f_entropic(x: f64) -> f64 {
    xlog2x(1.0 + x) + xlog2x(1.0 - x)
}

/// f′(x) = log₂((1+x)/(1−x)).
pub fn f_entropic_prime(x: f64) -> f64 {
    ((1.0 + x) / (1.0 - x)).log2()
}

fn rstar(p: GadcParams, q: f64) -> Option<f64> {
    let (gm, n) = (p.gamma, p.n);
    let shift = q - gm * (1.0 - 2.0 * n);
    let rad = 1.0 - gm - shift * shift / (1.0 - gm) + q * q;
    if rad >= 0.0 {
        Some(rad.sqrt())
    } else if rad >= -1e-12 {
        Some(0.0)
    } else {
        None
    }
}

fn holevo_residual(p: GadcParams, q: f64) -> Option<f64> {
    let (gm, n) = (p.gamma, p.n);
    let r = rstar(p, q)?;
    let lhs = (gm * q - gm * gm * (1.0 - 2.0 * n) - gm * (1.0 - gm) * (1.0 - 2.0 * n))
        * f_entropic_prime(r);
    let rhs = -r * (1.0 - gm) * f_entropic_prime(q);
    let v = lhs - rhs;
    v.is_finite().then_some(v)
}

fn holevo_value(p: GadcParams, q: f64) -> Option<f64> {
    let r = rstar(p, q)?;
    let v = 0.5 * (f_entropic(r) - (1.0 - q * q).log2() - q * f_entropic_prime(q));
    v.is_finite().then_some(v)
}

/// χ(A_{γ,1/2}) = 1 − h₂((1 − √(1−γ))/2).
pub fn holevo_unital(gamma: f64) -> f64 {
    1.0 - h2(0.5 * (1.0 - (1.0 - gamma).sqrt()))
}

/// Holevo information of A_{γ,N} through its implicit root equation.
pub fn holevo_gadc(p: GadcParams) -> Result<HolevoSolve> {
    GadcParams::new(p.gamma, p.n)?;
    if p.gamma == 0.0 {
        return Ok(HolevoSolve {
            chi: 1.0,
            q: 0.0,
            rstar: 1.0,
            residual: 0.0,
            roots_found: 0,
            fallback: false,
        });
    }
    if p.gamma == 1.0 {
        return Ok(HolevoSolve {
            chi: 0.0,
            q: 0.0,
            rstar: 0.0,
            residual: 0.0,
            roots_found: 0,
            fallback: false,
        });
    }
    let h = 2.0 / HOLEVO_SCAN as f64;
    let mut roots = Vec::new();
    if (p.n - 0.5).abs() < 1e-15 {
        roots.push(0.0);
    }
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..HOLEVO_SCAN {
        let q = -1.0 + (k as f64 + 0.5) * h;
        let cur = holevo_residual(p, q).map(|v| (q, v));
        if let (Some((q0, v0)), Some((q1, v1))) = (prev, cur) {
            if v1 == 0.0 {
                roots.push(q1);
            } else if v0.signum() != v1.signum() && v0 != 0.0 {
                let res = |x: f64| holevo_residual(p, x).unwrap_or(f64::NAN);
                if let Some(r) = bisect(res, q0, q1, 1e-16) {
                    roots.push(r);
                }
            }
        }
        prev = cur;
    }
    let best = roots
        .iter()
        .filter_map(|&q| holevo_value(p, q).map(|chi| (q, chi)))
        .fold(None::<(f64, f64)>, |acc, c| match acc {
            Some(a) if a.1 >= c.1 => Some(a),
            _ => Some(c),
        });
    match best {
        Some((q, chi)) => Ok(HolevoSolve {
            chi,
            q,
            rstar: rstar(p, q).unwrap_or(0.0),
            residual: holevo_residual(p, q).unwrap_or(f64::NAN).abs(),
            roots_found: roots.len(),
            fallback: false,
        }),
        None => Ok(HolevoSolve {
            chi: holevo_generic(&gadc_channel(p))?,
            q: f64::NAN,
            rstar: f64::NAN,
            residual: f64::NAN,
            roots_found: 0,
            fallback: true,
        }),
    }
}

fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// χ of a four-state pure ensemble given by angles and probability logits.
fn ensemble_chi(map: &BlochAffine, x: &[f64]) -> f64 {
    let probs = softmax(&x[8..12]);
    let mut avg = [0.0; 3];
    let mut cond = 0.0;
    for (k, &pk) in probs.iter().enumerate() {
        let out = map.image(unit_vector(x[2 * k], x[2 * k + 1]));
        for i in 0..3 {
            avg[i] += pk * out[i];
        }
        cond += pk * bloch_entropy(out);
    }
    bloch_entropy(avg) - cond
}

/// Holevo information of a qubit channel by multi-start optimization over
/// ensembles of four pure states. A certified lower bound on χ.
pub fn holevo_generic(ch: &QuantumChannel) -> Result<f64> {
    holevo_generic_seeded(ch, DEFAULT_SEED)
}

pub fn holevo_generic_seeded(ch: &QuantumChannel, seed: u64) -> Result<f64> {
    let map = BlochAffine::of(ch)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(ENSEMBLE_RESTARTS);
    // Antipodal pairs along each axis cover the covariant optima directly.
    for axis in 0..3 {
        let (t0, p0) = match axis {
            0 => (std::f64::consts::FRAC_PI_2, 0.0),
            1 => (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            _ => (0.0, 0.0),
        };
        let t1 = std::f64::consts::PI - t0;
        let p1 = p0 + std::f64::consts::PI;
        starts.push(vec![t0, p0, t1, p1, t0, p0, t1, p1, 0.0, 0.0, 0.0, 0.0]);
    }
    while starts.len() < ENSEMBLE_RESTARTS {
        let mut s: Vec<f64> = (0..8)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        s.extend((0..4).map(|_| rng.gen_range(-1.0..1.0)));
        starts.push(s);
    }
    let best = multistart_min(|x| -ensemble_chi(&map, x), &starts, BfgsOptions::default());
    Ok((-best.value).max(0.0))
}

/// C_β(A_{γ,N}) = log₂(1 + √(1−γ)).
pub fn c_beta_analytic(p: GadcParams) -> f64 {
    (1.0 + (1.0 - p.gamma).sqrt()).log2()
}

/// ε_cov = γ|N − ½|.
pub fn eps_cov(p: GadcParams) -> f64 {
    p.gamma * (p.n - 0.5).abs()
}

/// χ(A_{γ,1/2}) + 2ε + g(ε) with ε = γ|N − ½|.
pub fn c_cov_ub(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    let eps = eps_cov(p);
    Ok(holevo_unital(p.gamma) + 2.0 * eps + g(eps))
}

#[derive(Debug, Clone)]
pub struct EbBound {
    pub value: f64,
    pub eps: f64,
    pub chi_eb: f64,
}

/// χ(M) + 2ε₁ + g(ε₁) with M the nearest entanglement-breaking channel.
pub fn c_eb_ub(p: GadcParams) -> Result<EbBound> {
    c_eb_ub_with(p, &SolverOptions::precise(), DEFAULT_SEED)
}

pub fn c_eb_ub_with(p: GadcParams, opts: &SolverOptions, seed: u64) -> Result<EbBound> {
    GadcParams::new(p.gamma, p.n)?;
    let (eps, m) = sdp::sdp_eps_eb_with(&gadc_channel(p), opts)?;
    let eps = eps.max(0.0);
    let chi_eb = holevo_generic_seeded(&QuantumChannel::from_choi(&m)?, seed)?;
    Ok(EbBound {
        value: chi_eb + 2.0 * eps + g(eps),
        eps,
        chi_eb,
    })
}

/// Filippov's bound for a fixed orientation of N; undefined at N ∈ {0,1}.
pub fn c_fil_raw(p: GadcParams) -> Result<f64> {
    let (gm, n) = (p.gamma, p.n);
    if !(n > 0.0 && n < 1.0) || !(0.0..=1.0).contains(&gm) {
        return Err(Error::Domain(format!(
            "Filippov bound needs N in (0,1), got {}",
            n
        )));
    }
    let f = gm * (n * (1.0 - n)).sqrt()
        + (n + (1.0 - n) * (1.0 - gm)).sqrt() * (1.0 - n + n * (1.0 - gm)).sqrt();
    Ok(1.0 - h2(0.5 * (1.0 - (1.0 - gm).sqrt() / f)) + f.log2() + 0.5 * (n / (1.0 - n)).log2())
}

/// Filippov's bound in the orientation N′ = max(N, 1−N), where it is a valid
/// upper bound; the capacity is symmetric under N ↔ 1−N.
pub fn c_fil_ub(p: GadcParams) -> Result<f64> {
    c_fil_raw(GadcParams {
        gamma: p.gamma,
        n: p.n.max(1.0 - p.n),
    })
}

/// Eigenvalue triple (λ, λ′, λ″) of the mutual-information objective.
pub fn mutual_info_spectra(p: GadcParams, z: f64) -> ([f64; 2], [f64; 2], [f64; 4]) {
    let (gm, n) = (p.gamma, p.n);
    let lam = [0.5 * (1.0 + z), 0.5 * (1.0 - z)];
    let m = (2.0 * n - 1.0) * gm - (1.0 - gm) * z;
    let lamp = [0.5 * (1.0 + m), 0.5 * (1.0 - m)];
    let base = 2.0 - (1.0 + (2.0 * n - 1.0) * z) * gm;
    let rad = (4.0 - 4.0 * (1.0 + z * (2.0 * n - 1.0)) * gm
        + (2.0 * n - 1.0 + z).powi(2) * gm * gm)
        .max(0.0);
    let lampp = [
        0.5 * (1.0 - n) * gm * (1.0 - z),
        0.5 * n * gm * (1.0 + z),
        0.25 * (base + rad.sqrt()),
        0.25 * (base - rad.sqrt()),
    ];
    (lam, lamp, lampp)
}

/// F(γ, N, z) = H(λ) + H(λ′) − H(λ″).
pub fn mutual_info_objective(p: GadcParams, z: f64) -> f64 {
    let (l, lp, lpp) = mutual_info_spectra(p, z);
    let h = |v: &[f64]| -v.iter().map(|&x| xlog2x(x)).sum::<f64>();
    h(&l) + h(&lp) - h(&lpp)
}

/// Entanglement-assisted capacity C_E = max_z F(γ, N, z).
pub fn mutual_info_gadc(p: GadcParams) -> Result<f64> {
    GadcParams::new(p.gamma, p.n)?;
    Ok(maximize_scalar(
        |z| mutual_info_objective(p, z),
        -1.0,
        1.0,
        SEED_GRID,
        ARG_TOL,
    )
    .value)
}
