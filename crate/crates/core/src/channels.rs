//! Finite-dimensional channels in Kraus form, their Choi matrices, isometric
//! extensions, complements, composition and Pauli twirling.
//!
//! Choi convention: A (reference) first, B (output) second,
//! Γ = Σ_{ij} |i⟩⟨j| ⊗ N(|i⟩⟨j|) and the Choi state is ρ = Γ/d_A.

use crate::error::{Error, Result};
use crate::mathcore::{
    self, c, eigh, identity, ketbra, max_abs_diff, partial_trace, pauli_x, pauli_y, pauli_z,
    ComplexMatrix,
};

/// Σ K†K must match the identity to this precision.
pub const TP_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are dropped when refactoring Kraus operators.
pub const KRAUS_PRUNE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct QuantumChannel {
    din: usize,
    dout: usize,
    kraus: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    pub din: usize,
    pub dout: usize,
    /// Choi state, trace one.
    pub state: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn from_state(din: usize, dout: usize, state: ComplexMatrix) -> Self {
        assert_eq!(state.nrows(), din * dout);
        Self { din, dout, state }
    }

    pub fn from_gamma(din: usize, dout: usize, gamma: &ComplexMatrix) -> Self {
        Self::from_state(din, dout, gamma / c(din as f64))
    }

    /// Unnormalised Choi matrix Γ = d_A ρ.
    pub fn gamma(&self) -> ComplexMatrix {
        &self.state * c(self.din as f64)
    }

    pub fn distance(&self, other: &ChoiMatrix) -> f64 {
        max_abs_diff(&self.state, &other.state)
    }
}

impl QuantumChannel {
    /// Validated constructor: shapes and trace preservation.
    pub fn new(din: usize, dout: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("no Kraus operators".into()));
        }
        if kraus.iter().any(|k| k.shape() != (dout, din)) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators must be {}x{}",
                dout, din
            )));
        }
        let ch = Self { din, dout, kraus };
        let resid = ch.tp_residual();
        if resid > TP_TOL {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (residual {:e})",
                resid
            )));
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            din: d,
            dout: d,
            kraus: vec![identity(d)],
        }
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let d = u.nrows();
        Self::new(d, d, vec![u])
    }

    /// Partial trace over the listed output factors, as a channel.
    pub fn partial_trace_map(dims: &[usize], keep: &[usize]) -> Result<Self> {
        let din: usize = dims.iter().product();
        let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let dout: usize = kept_dims.iter().product();
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let dt: usize = traced.iter().map(|&k| dims[k]).product();
        let mut kraus = Vec::with_capacity(dt);
        let n = dims.len();
        for t in 0..dt {
            let mut k = ComplexMatrix::zeros(dout, din);
            for col in 0..din {
                let mut digits = vec![0; n];
                let mut rem = col;
                for s in (0..n).rev() {
                    digits[s] = rem % dims[s];
                    rem /= dims[s];
                }
                let tidx = traced.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);
                if tidx != t {
                    continue;
                }
                let row = keep.iter().fold(0, |acc, &s| acc * dims[s] + digits[s]);
                k[(row, col)] = c(1.0);
            }
            kraus.push(k);
        }
        Self::new(din, dout, kraus)
    }

    pub fn din(&self) -> usize {
        self.din
    }

    pub fn dout(&self) -> usize {
        self.dout
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn tp_residual(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.din, self.din);
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        max_abs_diff(&s, &identity(self.din))
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.din, self.din) {
            return Err(Error::DimMismatch(format!(
                "channel input is {}-dimensional, operator is {}x{}",
                self.din,
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(self.apply_unchecked(rho))
    }

    pub(crate) fn apply_unchecked(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dout, self.dout);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Unnormalised Choi matrix Γ.
    pub fn choi_gamma(&self) -> ComplexMatrix {
        let (di, dn) = (self.din, self.dout);
        let mut g = ComplexMatrix::zeros(di * dn, di * dn);
        for k in &self.kraus {
            for i in 0..di {
                for j in 0..di {
                    for a in 0..dn {
                        for b in 0..dn {
                            g[(i * dn + a, j * dn + b)] += k[(a, i)] * k[(b, j)].conj();
                        }
                    }
                }
            }
        }
        g
    }

    pub fn choi(&self) -> ChoiMatrix {
        ChoiMatrix::from_gamma(self.din, self.dout, &self.choi_gamma())
    }

    /// V = Σ_k K_k ⊗ |k⟩_E, output ordered B⊗E, environment dimension equal
    /// to the Kraus count.
    pub fn isometric_extension(&self) -> ComplexMatrix {
        let r = self.kraus.len();
        let mut v = ComplexMatrix::zeros(self.dout * r, self.din);
        for (k, op) in self.kraus.iter().enumerate() {
            for b in 0..self.dout {
                for a in 0..self.din {
                    v[(b * r + k, a)] = op[(b, a)];
                }
            }
        }
        v
    }

    /// Channel to the environment of [`Self::isometric_extension`].
    pub fn complementary(&self) -> QuantumChannel {
        let r = self.kraus.len();
        let kraus = (0..self.dout)
            .map(|b| ComplexMatrix::from_fn(r, self.din, |k, a| self.kraus[k][(b, a)]))
            .collect();
        QuantumChannel {
            din: self.din,
            dout: r,
            kraus,
        }
    }

    /// Refactor the Kraus set from the Choi spectrum (minimal Kraus rank).
    pub fn canonical(&self) -> QuantumChannel {
        kraus_from_gamma(&self.choi_gamma(), self.din, self.dout)
    }

    /// `second ∘ first`.
    pub fn compose(second: &QuantumChannel, first: &QuantumChannel) -> Result<QuantumChannel> {
        if first.dout != second.din {
            return Err(Error::DimMismatch(format!(
                "first outputs {} dims, second expects {}",
                first.dout, second.din
            )));
        }
        let mut kraus = Vec::with_capacity(first.kraus.len() * second.kraus.len());
        for k2 in &second.kraus {
            for k1 in &first.kraus {
                kraus.push(k2 * k1);
            }
        }
        let ch = QuantumChannel {
            din: first.din,
            dout: second.dout,
            kraus,
        };
        if ch.kraus.len() > ch.din * ch.dout {
            Ok(ch.canonical())
        } else {
            Ok(ch)
        }
    }

    pub fn then(&self, next: &QuantumChannel) -> Result<QuantumChannel> {
        QuantumChannel::compose(next, self)
    }

    /// Kraus operators from a Choi matrix (eigendecomposition of Γ).
    pub fn from_choi(choi: &ChoiMatrix) -> Result<QuantumChannel> {
        let (di, dn) = (choi.din, choi.dout);
        let lmin = mathcore::min_eigenvalue(&choi.state);
        if lmin < -1e-8 {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not PSD (eigenvalue {:e})",
                lmin
            )));
        }
        let marg = partial_trace(&choi.state, &[di, dn], &[0])?;
        let dev = max_abs_diff(&marg, &(identity(di) / c(di as f64)));
        if dev > 1e-6 {
            return Err(Error::InvalidChannel(format!(
                "Choi marginal off by {:e}",
                dev
            )));
        }
        Ok(kraus_from_gamma(&choi.gamma(), di, dn))
    }

    /// (1/4) Σ_P P N(P · P) P over the Pauli group.
    pub fn pauli_twirl(&self) -> Result<QuantumChannel> {
        if self.din != 2 || self.dout != 2 {
            return Err(Error::DimMismatch(
                "Pauli twirl needs a qubit channel".into(),
            ));
        }
        let paulis = [identity(2), pauli_x(), pauli_y(), pauli_z()];
        let mut kraus = Vec::with_capacity(4 * self.kraus.len());
        for p in &paulis {
            for k in &self.kraus {
                kraus.push(p * k * p * c(0.5));
            }
        }
        Ok(QuantumChannel {
            din: 2,
            dout: 2,
            kraus,
        }
        .canonical())
    }
}

fn kraus_from_gamma(gamma: &ComplexMatrix, di: usize, dn: usize) -> QuantumChannel {
    let s = eigh(gamma);
    let mut kraus = Vec::new();
    for (k, &lam) in s.eigenvalues.iter().enumerate() {
        if lam < KRAUS_PRUNE {
            continue;
        }
        let amp = lam.sqrt();
        let v = s.eigenvectors.column(k);
        kraus.push(ComplexMatrix::from_fn(dn, di, |b, a| {
            v[a * dn + b] * c(amp)
        }));
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(dn, di));
    }
    QuantumChannel {
        din: di,
        dout: dn,
        kraus,
    }
}

/// N(X) = Tr_A[(Xᵀ ⊗ I) Γ] for a Choi matrix Γ on din⊗dout.
pub fn apply_choi(
    gamma: &ComplexMatrix,
    din: usize,
    dout: usize,
    x: &ComplexMatrix,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dout, dout);
    for i in 0..din {
        for j in 0..din {
            let w = x[(i, j)];
            if w.norm() == 0.0 {
                continue;
            }
            for a in 0..dout {
                for b in 0..dout {
                    out[(a, b)] += w * gamma[(i * dout + a, j * dout + b)];
                }
            }
        }
    }
    out
}

/// Choi matrix of `second ∘ first` from both Choi matrices (link product).
/// Linear in each argument, which the SDP builders rely on.
pub fn compose_choi(
    second: &ComplexMatrix,
    mid: usize,
    dout: usize,
    first: &ComplexMatrix,
    din: usize,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(din * dout, din * dout);
    for i in 0..din {
        for j in 0..din {
            let block = first.view((i * mid, j * mid), (mid, mid)).into_owned();
            let img = apply_choi(second, mid, dout, &block);
            out.view_mut((i * dout, j * dout), (dout, dout))
                .copy_from(&img);
        }
    }
    out
}

/// Coherent information I_c(ρ, N) = H(N(ρ)) − H(N^c(ρ)).
pub fn coherent_information(ch: &QuantumChannel, rho: &ComplexMatrix) -> Result<f64> {
    let out = ch.apply(rho)?;
    let env = ch.complementary().apply_unchecked(rho);
    Ok(mathcore::entropy(&out) - mathcore::entropy(&env))
}

/// Reverse coherent information H(ρ) − H(N^c(ρ)).
pub fn reverse_coherent_information(ch: &QuantumChannel, rho: &ComplexMatrix) -> Result<f64> {
    ch.apply(rho)?;
    let env = ch.complementary().apply_unchecked(rho);
    Ok(mathcore::entropy(rho) - mathcore::entropy(&env))
}

/// Affine Bloch-vector action r ↦ T r + t of a qubit channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAffine {
    pub t: [[f64; 3]; 3],
    pub shift: [f64; 3],
}

impl BlochAffine {
    pub fn of(ch: &QuantumChannel) -> Result<Self> {
        if ch.din != 2 || ch.dout != 2 {
            return Err(Error::DimMismatch(
                "Bloch representation needs a qubit channel".into(),
            ));
        }
        let shift = mathcore::density_to_bloch(&ch.apply_unchecked(&(identity(2) * c(0.5))));
        let mut t = [[0.0; 3]; 3];
        for (k, e) in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
            .into_iter()
            .enumerate()
        {
            let out =
                mathcore::density_to_bloch(&ch.apply_unchecked(&mathcore::bloch_to_density(e)));
            for row in 0..3 {
                t[row][k] = out[row] - shift[row];
            }
        }
        Ok(Self { t, shift })
    }

    pub fn image(&self, r: [f64; 3]) -> [f64; 3] {
        let mut out = self.shift;
        for (row, o) in out.iter_mut().enumerate() {
            *o += (0..3).map(|k| self.t[row][k] * r[k]).sum::<f64>();
        }
        out
    }
}

/// Entropy of a qubit state with Bloch vector r.
pub fn bloch_entropy(r: [f64; 3]) -> f64 {
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt().min(1.0);
    mathcore::h2(0.5 * (1.0 - len))
}

/// Single basis-matrix helper used in tests and builders.
pub fn basis_image(ch: &QuantumChannel, i: usize, j: usize) -> ComplexMatrix {
    ch.apply_unchecked(&ketbra(ch.din, i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::{from_real, max_entangled, random_density, random_unitary, tensor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_channel(seed: u64) -> QuantumChannel {
        // Stinespring with a random unitary on qubit ⊗ qubit environment.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(4, &mut rng);
        let kraus = (0..2)
            .map(|e| ComplexMatrix::from_fn(2, 2, |b, a| u[(b * 2 + e, a * 2)]))
            .collect();
        QuantumChannel::new(2, 2, kraus).unwrap()
    }

    #[test]
    fn identity_choi_is_bell_state() {
        let ch = QuantumChannel::identity(2);
        assert!(max_abs_diff(&ch.choi().state, &max_entangled(2)) < 1e-15);
    }

    #[test]
    fn rejects_non_tp_kraus() {
        assert!(QuantumChannel::new(2, 2, vec![identity(2) * c(0.9)]).is_err());
    }

    #[test]
    fn unitary_extension_and_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary(2, &mut rng);
        let ch = QuantumChannel::unitary(u.clone()).unwrap();
        assert!(max_abs_diff(&ch.isometric_extension(), &u) < 1e-15);
        let comp = ch.complementary();
        assert_eq!(comp.dout(), 1);
        let rho = random_density(2, &mut rng);
        let out = comp.apply(&rho).unwrap();
        assert!((out[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isometry_reproduces_channel() {
        let ch = random_channel(11);
        let v = ch.isometric_extension();
        assert!(max_abs_diff(&(v.adjoint() * &v), &identity(2)) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(2, &mut rng);
        let full = &v * &rho * v.adjoint();
        let b = partial_trace(&full, &[2, ch.kraus().len()], &[0]).unwrap();
        assert!(max_abs_diff(&b, &ch.apply(&rho).unwrap()) < 1e-12);
        let e = partial_trace(&full, &[2, ch.kraus().len()], &[1]).unwrap();
        assert!(max_abs_diff(&e, &ch.complementary().apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn complement_twice_has_same_choi_spectrum() {
        let ch = random_channel(13);
        let cc = ch.complementary().complementary();
        let a = mathcore::eigvalsh(&ch.choi().state);
        let b = mathcore::eigvalsh(&cc.choi().state);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn compose_with_identity() {
        let ch = random_channel(17);
        let composed = QuantumChannel::compose(&QuantumChannel::identity(2), &ch).unwrap();
        assert!(composed.choi().distance(&ch.choi()) < 1e-12);
    }

    #[test]
    fn compose_is_associative() {
        let (a, b, d) = (random_channel(1), random_channel(2), random_channel(3));
        let left = QuantumChannel::compose(&QuantumChannel::compose(&d, &b).unwrap(), &a).unwrap();
        let right = QuantumChannel::compose(&d, &QuantumChannel::compose(&b, &a).unwrap()).unwrap();
        assert!(left.choi().distance(&right.choi()) < 1e-10);
    }

    #[test]
    fn compose_prunes_kraus_rank() {
        let a = random_channel(21);
        let b = random_channel(22);
        let ab = QuantumChannel::compose(&b, &a).unwrap();
        assert!(ab.kraus().len() <= 4);
        assert!(ab.tp_residual() < 1e-10);
    }

    #[test]
    fn compose_choi_matches_kraus_composition() {
        let a = random_channel(31);
        let b = random_channel(32);
        let ab = QuantumChannel::compose(&b, &a).unwrap();
        let linked = compose_choi(&b.choi_gamma(), 2, 2, &a.choi_gamma(), 2);
        assert!(max_abs_diff(&linked, &ab.choi_gamma()) < 1e-12);
    }

    #[test]
    fn apply_choi_matches_kraus() {
        let ch = random_channel(41);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(2, &mut rng);
        let via_choi = apply_choi(&ch.choi_gamma(), 2, 2, &rho);
        assert!(max_abs_diff(&via_choi, &ch.apply(&rho).unwrap()) < 1e-12);
    }

    #[test]
    fn from_choi_round_trips() {
        let ch = random_channel(51);
        let back = QuantumChannel::from_choi(&ch.choi()).unwrap();
        assert!(back.choi().distance(&ch.choi()) < 1e-7);
        let id =
            QuantumChannel::from_choi(&ChoiMatrix::from_state(2, 2, max_entangled(2))).unwrap();
        assert_eq!(id.kraus().len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(2, &mut rng);
        assert!(max_abs_diff(&id.apply(&rho).unwrap(), &rho) < 1e-12);
    }

    #[test]
    fn rank_one_choi_gives_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = QuantumChannel::unitary(random_unitary(2, &mut rng)).unwrap();
        let back = QuantumChannel::from_choi(&u.choi()).unwrap();
        assert_eq!(back.kraus().len(), 1);
        let k = &back.kraus()[0];
        assert!(max_abs_diff(&(k.adjoint() * k), &identity(2)) < 1e-10);
    }

    #[test]
    fn from_choi_rejects_bad_marginal() {
        let bad = ChoiMatrix::from_state(
            2,
            2,
            tensor(
                &from_real(2, 2, &[0.9, 0.0, 0.0, 0.1]),
                &(identity(2) * c(0.5)),
            ),
        );
        assert!(QuantumChannel::from_choi(&bad).is_err());
    }

    #[test]
    fn twirl_fixes_pauli_channels_and_is_idempotent() {
        let p = [0.7f64, 0.1, 0.15, 0.05];
        let ops = [identity(2), pauli_x(), pauli_y(), pauli_z()];
        let kraus = ops.iter().zip(p).map(|(o, w)| o * c(w.sqrt())).collect();
        let pauli = QuantumChannel::new(2, 2, kraus).unwrap();
        assert!(pauli.pauli_twirl().unwrap().choi().distance(&pauli.choi()) < 1e-12);
        let ch = random_channel(61);
        let once = ch.pauli_twirl().unwrap();
        let twice = once.pauli_twirl().unwrap();
        assert!(once.choi().distance(&twice.choi()) < 1e-12);
    }

    #[test]
    fn partial_trace_map_matches_partial_trace() {
        let tr = QuantumChannel::partial_trace_map(&[2, 3], &[0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(6, &mut rng);
        let lhs = tr.apply(&rho).unwrap();
        let rhs = partial_trace(&rho, &[2, 3], &[0]).unwrap();
        assert!(max_abs_diff(&lhs, &rhs) < 1e-14);
    }

    #[test]
    fn coherent_information_of_identity_is_entropy() {
        let id = QuantumChannel::identity(2);
        let rho = identity(2) * c(0.5);
        assert!((coherent_information(&id, &rho).unwrap() - 1.0).abs() < 1e-12);
    }
}
