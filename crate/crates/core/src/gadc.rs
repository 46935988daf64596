//! The generalized amplitude damping channel A_{γ,N} and everything specific
//! to it: closed-form Choi state, Bloch action, serial decompositions, the
//! entanglement-breaking and anti-degradability predicates, the
//! anti-degrading map, and the qubit thermal channel picture
//! (A_{γ,N} = L_{1−γ,N}) with its extension by the purifying system E′.

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::mathcore::{c, diag, from_real, partial_transpose, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadcParams {
    pub gamma: f64,
    pub n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParams {
    pub eta: f64,
    pub n: f64,
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} = {} outside [0,1]", name, x)))
    }
}

impl GadcParams {
    pub fn new(gamma: f64, n: f64) -> Result<Self> {
        check_unit("gamma", gamma)?;
        check_unit("N", n)?;
        Ok(Self { gamma, n })
    }

    /// (γ, 1−N): unitarily equivalent through σx conjugation.
    pub fn reflected(self) -> Self {
        Self {
            gamma: self.gamma,
            n: 1.0 - self.n,
        }
    }

    pub fn thermal(self) -> ThermalParams {
        ThermalParams {
            eta: 1.0 - self.gamma,
            n: self.n,
        }
    }
}

impl ThermalParams {
    pub fn new(eta: f64, n: f64) -> Result<Self> {
        check_unit("eta", eta)?;
        check_unit("N", n)?;
        Ok(Self { eta, n })
    }

    pub fn gadc(self) -> GadcParams {
        GadcParams {
            gamma: 1.0 - self.eta,
            n: self.n,
        }
    }
}

/// A₁…A₄ in the standard basis, including any that vanish.
pub fn kraus_full(p: GadcParams) -> [ComplexMatrix; 4] {
    let (g, n) = (p.gamma, p.n);
    let s = (1.0 - g).sqrt();
    [
        from_real(2, 2, &[1.0, 0.0, 0.0, s]) * c((1.0 - n).sqrt()),
        from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]) * c((g * (1.0 - n)).sqrt()),
        from_real(2, 2, &[s, 0.0, 0.0, 1.0]) * c(n.sqrt()),
        from_real(2, 2, &[0.0, 0.0, 1.0, 0.0]) * c((g * n).sqrt()),
    ]
}

/// A_{γ,N} with zero-prefactor Kraus operators dropped (N=0 gives the
/// two-operator amplitude damping channel).
pub fn gadc_channel(p: GadcParams) -> QuantumChannel {
    let (g, n) = (p.gamma, p.n);
    let prefactors = [1.0 - n, g * (1.0 - n), n, g * n];
    let kraus = kraus_full(p)
        .into_iter()
        .zip(prefactors)
        .filter(|(_, w)| *w > 0.0)
        .map(|(k, _)| k)
        .collect();
    QuantumChannel::new(2, 2, kraus).expect("GADC Kraus operators are trace preserving")
}

/// A_{γ,N} with all four Kraus operators kept, so the environment is always
/// four-dimensional with basis labels 0..3 in Kraus order.
pub fn gadc_channel_full(p: GadcParams) -> QuantumChannel {
    QuantumChannel::new(2, 2, kraus_full(p).to_vec())
        .expect("GADC Kraus operators are trace preserving")
}

/// A^c_{γ,N} into the four-dimensional environment.
pub fn gadc_complementary(p: GadcParams) -> QuantumChannel {
    gadc_channel_full(p).complementary()
}

/// Closed-form Choi state ρ^{γ,N} (A⊗B ordering).
pub fn choi_state(p: GadcParams) -> ComplexMatrix {
    let (g, n) = (p.gamma, p.n);
    let s = (1.0 - g).sqrt();
    #[rustfmt::skip]
    let m = from_real(4, 4, &[
        1.0 - g * n, 0.0, 0.0, s,
        0.0, g * n, 0.0, 0.0,
        0.0, 0.0, g * (1.0 - n), 0.0,
        s, 0.0, 0.0, 1.0 - g * (1.0 - n),
    ]);
    m * c(0.5)
}

pub fn choi_gamma(p: GadcParams) -> ComplexMatrix {
    choi_state(p) * c(2.0)
}

/// Image of the Bloch vector r.
pub fn bloch_image(p: GadcParams, r: [f64; 3]) -> [f64; 3] {
    let s = (1.0 - p.gamma).sqrt();
    [
        r[0] * s,
        r[1] * s,
        r[2] * (1.0 - p.gamma) + p.gamma * (1.0 - 2.0 * p.n),
    ]
}

/// Parameters of A_{γ₂,N₂} ∘ A_{γ₁,N₁}, which is again a GADC.
pub fn compose_params(outer: GadcParams, inner: GadcParams) -> GadcParams {
    let (g1, n1, g2, n2) = (inner.gamma, inner.n, outer.gamma, outer.n);
    let gamma = g1 + g2 - g1 * g2;
    let n = if gamma > 0.0 {
        (g1 * (1.0 - g2) * n1 + g2 * n2) / gamma
    } else {
        0.0
    };
    GadcParams { gamma, n }
}

/// A factorisation A_{γ,N} = outer ∘ inner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub outer: GadcParams,
    pub inner: GadcParams,
    /// True when the formula divides by zero and the trivial split
    /// (channel ∘ identity) is returned instead.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerialDecomposition {
    /// A_{γN,1} ∘ A_{γ(1−N)/(1−γN),0}.
    pub first: Factorization,
    /// A_{γ(1−N),0} ∘ A_{γN/(1−γ(1−N)),1}.
    pub second: Factorization,
}

/// Inner damping parameters are written as 1 − (1−γ)/(·), algebraically equal
/// to the usual ratios but exact at γ = 1.
pub fn serial_decompose(p: GadcParams) -> SerialDecomposition {
    let (g, n) = (p.gamma, p.n);
    let trivial = Factorization {
        outer: p,
        inner: GadcParams { gamma: 0.0, n: 0.0 },
        degenerate: true,
    };
    let first = if 1.0 - g * n > 0.0 {
        Factorization {
            outer: GadcParams {
                gamma: g * n,
                n: 1.0,
            },
            inner: GadcParams {
                gamma: 1.0 - (1.0 - g) / (1.0 - g * n),
                n: 0.0,
            },
            degenerate: false,
        }
    } else {
        trivial
    };
    let second = if 1.0 - g * (1.0 - n) > 0.0 {
        Factorization {
            outer: GadcParams {
                gamma: g * (1.0 - n),
                n: 0.0,
            },
            inner: GadcParams {
                gamma: 1.0 - (1.0 - g) / (1.0 - g * (1.0 - n)),
                n: 1.0,
            },
            degenerate: false,
        }
    } else {
        trivial
    };
    SerialDecomposition { first, second }
}

/// Smallest γ for which some N makes the channel entanglement breaking.
pub fn eb_gamma_threshold() -> f64 {
    2.0 * (2f64.sqrt() - 1.0)
}

/// det((ρ^{γ,N})^{T_B}) in closed form.
pub fn pt_determinant(p: GadcParams) -> f64 {
    let (g, n) = (p.gamma, p.n);
    (-1.0 + 2.0 * g - g * g + g.powi(4) * (1.0 - n).powi(2) * n * n) / 16.0
}

/// det of the partially transposed Choi state computed from the matrix.
pub fn pt_determinant_numeric(p: GadcParams) -> f64 {
    let pt = partial_transpose(&choi_state(p), &[2, 2], 1).expect("4x4 on 2x2");
    pt.map(|z| z.re).determinant()
}

/// Interval of N for which A_{γ,N} breaks entanglement, if any.
pub fn eb_interval(gamma: f64) -> Option<(f64, f64)> {
    if gamma <= 0.0 {
        return None;
    }
    let rad = (gamma * gamma + 4.0 * gamma - 4.0) / (gamma * gamma);
    if rad < 0.0 {
        return None;
    }
    let s = rad.sqrt();
    Some((0.5 * (1.0 - s), 0.5 * (1.0 + s)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbCheck {
    pub entanglement_breaking: bool,
    /// det((ρ^{γ,N})^{T_B}); the predicate holds iff this is ≥ −1e-12.
    pub margin: f64,
}

/// Closed-form region test: γ ≥ 2(√2−1) and |2N−1|γ ≤ √(γ²+4γ−4).
pub fn is_entanglement_breaking(p: GadcParams) -> EbCheck {
    let (g, n) = (p.gamma, p.n);
    let lhs = (g * (2.0 * n - 1.0)).powi(2);
    let rhs = g * g + 4.0 * g - 4.0;
    EbCheck {
        entanglement_breaking: lhs <= rhs + 1e-12,
        margin: pt_determinant(p),
    }
}

/// Quantities of the two-extendability criterion for the Choi state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoExtendability {
    pub purity_ab: f64,
    pub purity_b: f64,
    pub det_ab: f64,
}

impl TwoExtendability {
    /// Tr ρ_AB² − Tr ρ_B² − 4√det ρ_AB; two-extendable iff ≤ 0.
    pub fn slack(&self) -> f64 {
        self.purity_ab - self.purity_b - 4.0 * self.det_ab.max(0.0).sqrt()
    }
}

pub fn two_extendability(p: GadcParams) -> TwoExtendability {
    let (g, n) = (p.gamma, p.n);
    TwoExtendability {
        purity_ab: g * g * n * n - g * g * n + 0.5 * g * g - g + 1.0,
        purity_b: 2.0 * g * g * n * n - 2.0 * g * g * n + 0.5 * g * g + 0.5,
        det_ab: g.powi(4) * n * n * (1.0 - n).powi(2) / 16.0,
    }
}

/// Anti-degradable iff γ ≥ 1/2, independent of N.
pub fn is_antidegradable(p: GadcParams) -> bool {
    p.gamma >= 0.5
}

/// E*_N: environment (4) → B with Kraus |0⟩⟨0|+|1⟩⟨1| and |0⟩⟨3|+|1⟩⟨2|.
/// Satisfies E* ∘ A^c_{γ,N} = A_{1−γ,N} for every γ, N.
pub fn lemma_map() -> QuantumChannel {
    #[rustfmt::skip]
    let e0 = from_real(2, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let e1 = from_real(2, 4, &[
        0.0, 0.0, 0.0, 1.0,
        0.0, 0.0, 1.0, 0.0,
    ]);
    QuantumChannel::new(4, 2, vec![e0, e1]).expect("valid map")
}

/// E_{γ,N} = A_{(2γ−1)/γ,N} ∘ E*_N with E ∘ A^c_{γ,N} = A_{γ,N}.
pub fn antidegrading_channel(p: GadcParams) -> Result<QuantumChannel> {
    if p.gamma < 0.5 {
        return Err(Error::Domain(format!(
            "anti-degrading map needs γ ≥ 1/2, got {}",
            p.gamma
        )));
    }
    let post = gadc_channel(GadcParams {
        gamma: (2.0 * p.gamma - 1.0) / p.gamma,
        n: p.n,
    });
    QuantumChannel::compose(&post, &lemma_map())
}

/// Degrading map of the amplitude damping channel, A_{(1−2γ)/(1−γ),0}.
pub fn ad_degrading_channel(gamma: f64) -> Result<QuantumChannel> {
    if !(0.0..0.5).contains(&gamma) && gamma != 0.5 {
        return Err(Error::Domain(format!(
            "amplitude damping is degradable only for γ ≤ 1/2, got {}",
            gamma
        )));
    }
    Ok(gadc_channel(GadcParams {
        gamma: (1.0 - 2.0 * gamma) / (1.0 - gamma),
        n: 0.0,
    }))
}

/// Beamsplitter unitary U^η on A⊗E.
pub fn beamsplitter(eta: f64) -> ComplexMatrix {
    let (s, r) = (eta.sqrt(), (1.0 - eta).sqrt());
    #[rustfmt::skip]
    let u = from_real(4, 4, &[
        1.0, 0.0, 0.0, 0.0,
        0.0, s, r, 0.0,
        0.0, -r, s, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ]);
    u
}

pub fn thermal_state(n: f64) -> ComplexMatrix {
    diag(&[1.0 - n, n])
}

/// Isometry A → B⊗E⊗E′: (U^η ⊗ 1_{E′})(ρ_A ⊗ |θ^N⟩_{EE′}).
pub fn thermal_dilation(t: ThermalParams) -> ComplexMatrix {
    let mut theta = ComplexMatrix::zeros(4, 1);
    theta[(0, 0)] = c((1.0 - t.n).sqrt());
    theta[(3, 0)] = c(t.n.sqrt());
    let u = beamsplitter(t.eta).kronecker(&crate::mathcore::identity(2));
    u * crate::mathcore::identity(2).kronecker(&theta)
}

fn dilation_marginal(t: ThermalParams, keep: &[usize]) -> QuantumChannel {
    let w = thermal_dilation(t);
    let traced: Vec<usize> = (0..3).filter(|k| !keep.contains(k)).collect();
    let dout = 1 << keep.len();
    let mut kraus = Vec::new();
    for tr in 0..(1 << traced.len()) {
        let k = ComplexMatrix::from_fn(dout, 2, |row, a| {
            let mut bits = [0usize; 3];
            for (pos, &s) in keep.iter().enumerate() {
                bits[s] = (row >> (keep.len() - 1 - pos)) & 1;
            }
            for (pos, &s) in traced.iter().enumerate() {
                bits[s] = (tr >> (traced.len() - 1 - pos)) & 1;
            }
            w[(bits[0] * 4 + bits[1] * 2 + bits[2], a)]
        });
        kraus.push(k);
    }
    QuantumChannel::new(2, dout, kraus).expect("marginal of an isometry")
}

/// L_{η,N} built from the beamsplitter picture.
pub fn thermal_channel(t: ThermalParams) -> QuantumChannel {
    dilation_marginal(t, &[0])
}

/// L̂_{η,N}: qubit → B⊗E′ (only the beamsplitter environment E is lost).
pub fn extended_channel(t: ThermalParams) -> QuantumChannel {
    dilation_marginal(t, &[0, 2])
}

/// L̂^c_{η,N}: qubit → E.
pub fn extended_complement(t: ThermalParams) -> QuantumChannel {
    dilation_marginal(t, &[1])
}

/// Phase damping P_μ with Kraus diag(1,√μ), diag(0,√(1−μ)).
pub fn phase_damping(mu: f64) -> QuantumChannel {
    QuantumChannel::new(
        2,
        2,
        vec![diag(&[1.0, mu.sqrt()]), diag(&[0.0, (1.0 - mu).sqrt()])],
    )
    .expect("valid")
}

/// Weak degrading map of L_{η,N}: P_{(1−2N)²} ∘ L_{(1−η)/η,N}, η ≥ 1/2,
/// followed by a σ_z conjugation when N > 1/2.
///
/// The complement's coherences are (1−2N) times those of L_{1−η,N}, and
/// P_μ scales coherences by √μ, hence the square; σ_z supplies the sign.
pub fn weak_degrading_channel(t: ThermalParams) -> Result<QuantumChannel> {
    if t.eta < 0.5 {
        return Err(Error::Domain(format!(
            "weak degrading map needs η ≥ 1/2, got {}",
            t.eta
        )));
    }
    let inner = thermal_channel(ThermalParams {
        eta: (1.0 - t.eta) / t.eta,
        n: t.n,
    });
    let damped = QuantumChannel::compose(&phase_damping((1.0 - 2.0 * t.n).powi(2)), &inner)?;
    if t.n > 0.5 {
        QuantumChannel::compose(
            &QuantumChannel::unitary(crate::mathcore::pauli_z())?,
            &damped,
        )
    } else {
        Ok(damped)
    }
}

/// D̂ = (weak degrading map) ∘ Tr_{E′}, mapping B⊗E′ → E.
pub fn extended_degrading_channel(t: ThermalParams) -> Result<QuantumChannel> {
    let tr = QuantumChannel::partial_trace_map(&[2, 2], &[0])?;
    QuantumChannel::compose(&weak_degrading_channel(t)?, &tr)
}
