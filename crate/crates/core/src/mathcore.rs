//! Dense complex linear algebra and entropy functionals.
//!
//! Matrices are `nalgebra` dense complex matrices. Multipartite operators use
//! the usual Kronecker ordering: the first subsystem is the most significant
//! digit of a row/column index.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Eigenvalues below this are treated as zero inside logarithms.
pub const EIG_CLIP: f64 = 1e-12;

/// Hermiticity tolerance used when validating inputs.
pub const HERM_TOL: f64 = 1e-12;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Build a real-valued complex matrix from row-major entries.
pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(
        rows * cols,
        entries.len(),
        "entry count must equal rows*cols"
    );
    ComplexMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j]))
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    ComplexMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) })
}

/// |i⟩ in dimension d as a column.
pub fn ket(d: usize, i: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d, 1);
    v[(i, 0)] = c(1.0);
    v
}

/// |i⟩⟨j| in dimension d.
pub fn ketbra(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = c(1.0);
    m
}

pub fn projector(v: &ComplexMatrix) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn pauli_x() -> ComplexMatrix {
    from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// Φ⁺ = |Φ⁺⟩⟨Φ⁺| on d⊗d with |Φ⁺⟩ = d^{-1/2} Σ|ii⟩.
pub fn max_entangled(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, 1);
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[(i * d + i, 0)] = c(amp);
    }
    projector(&v)
}

/// Density matrix of a qubit with Bloch vector r.
pub fn bloch_to_density(r: [f64; 3]) -> ComplexMatrix {
    let mut rho = identity(2) + pauli_x() * c(r[0]) + pauli_y() * c(r[1]) + pauli_z() * c(r[2]);
    rho *= c(0.5);
    rho
}

pub fn density_to_bloch(rho: &ComplexMatrix) -> [f64; 3] {
    [
        2.0 * rho[(0, 1)].re,
        -2.0 * rho[(0, 1)].im,
        (rho[(0, 0)] - rho[(1, 1)]).re,
    ]
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_all(ms: &[&ComplexMatrix]) -> ComplexMatrix {
    let mut out = ComplexMatrix::from_element(1, 1, c(1.0));
    for m in ms {
        out = out.kronecker(*m);
    }
    out
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5)
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.trace()
}

fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.nrows() != total {
        return Err(Error::DimMismatch(format!(
            "matrix is {}x{}, subsystem dims {:?} multiply to {}",
            m.nrows(),
            m.ncols(),
            dims,
            total
        )));
    }
    Ok(total)
}

/// Trace out every subsystem not listed in `keep`. Kept systems stay in
/// their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total = check_dims(m, dims)?;
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimMismatch(format!("keep {:?} out of range", keep)));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let out_dim: usize = kept.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();

    let n = dims.len();
    let mut dr = vec![0; n];
    let mut dc = vec![0; n];
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for r in 0..total {
        digits(r, dims, &mut dr);
        for col in 0..total {
            digits(col, dims, &mut dc);
            if traced.iter().any(|&t| dr[t] != dc[t]) {
                continue;
            }
            let mut orow = 0;
            let mut ocol = 0;
            for &k in &kept {
                orow = orow * dims[k] + dr[k];
                ocol = ocol * dims[k] + dc[k];
            }
            out[(orow, ocol)] += m[(r, col)];
        }
    }
    Ok(out)
}

/// Transpose on subsystem `sys`.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], sys: usize) -> Result<ComplexMatrix> {
    let total = check_dims(m, dims)?;
    if sys >= dims.len() {
        return Err(Error::DimMismatch(format!(
            "subsystem {} out of range",
            sys
        )));
    }
    let stride: usize = dims[sys + 1..].iter().product();
    let d = dims[sys];
    let mut out = ComplexMatrix::zeros(total, total);
    for r in 0..total {
        let dr = (r / stride) % d;
        for col in 0..total {
            let dc = (col / stride) % d;
            let r2 = r - dr * stride + dc * stride;
            let c2 = col - dc * stride + dr * stride;
            out[(r2, c2)] = m[(r, col)];
        }
    }
    Ok(out)
}

/// Reorder subsystems: new subsystem k is old subsystem `perm[k]`.
pub fn permute_systems(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let total = check_dims(m, dims)?;
    let n = dims.len();
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::DimMismatch(format!(
            "{:?} is not a permutation",
            perm
        )));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let map = |idx: usize, buf: &mut [usize]| -> usize {
        digits(idx, dims, buf);
        perm.iter()
            .zip(&new_dims)
            .fold(0, |acc, (&p, &d)| acc * d + buf[p])
    };
    let mut buf = vec![0; n];
    let index: Vec<usize> = (0..total).map(|i| map(i, &mut buf)).collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for r in 0..total {
        for col in 0..total {
            out[(index[r], index[col])] = m[(r, col)];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Column k belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix (the Hermitian part is used).
pub fn eigh(m: &ComplexMatrix) -> Spectrum {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

pub fn eigvalsh(m: &ComplexMatrix) -> Vec<f64> {
    eigh(m).eigenvalues
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigvalsh(m).last().copied().unwrap_or(0.0)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn matrix_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let s = eigh(m);
    let n = s.eigenvalues.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lam) in s.eigenvalues.iter().enumerate() {
        let v = s.eigenvectors.column(k);
        out += (&v * v.adjoint()) * c(f(lam));
    }
    out
}

pub fn xlog2x(x: f64) -> f64 {
    if x <= EIG_CLIP {
        0.0
    } else {
        x * x.log2()
    }
}

/// −Σ λ log₂ λ over a spectrum, with clipping.
pub fn shannon(probs: &[f64]) -> f64 {
    -probs.iter().map(|&p| xlog2x(p)).sum::<f64>()
}

/// Entropy of a Hermitian matrix without density validation.
pub fn entropy(rho: &ComplexMatrix) -> f64 {
    shannon(&eigvalsh(rho))
}

pub fn check_density(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::NotDensity("matrix is not square".into()));
    }
    if !is_hermitian(rho, 1e-10) {
        return Err(Error::NotDensity("matrix is not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::NotDensity(format!("trace is {}", tr)));
    }
    let lmin = min_eigenvalue(rho);
    if lmin < -1e-10 {
        return Err(Error::NotDensity(format!("eigenvalue {} < 0", lmin)));
    }
    Ok(())
}

/// Von Neumann entropy in bits.
pub fn entropy_vn(rho: &ComplexMatrix) -> Result<f64> {
    check_density(rho)?;
    Ok(entropy(rho))
}

/// Binary entropy, clamping excursions up to 1e-12 outside [0,1]; NaN beyond.
pub fn h2(x: f64) -> f64 {
    try_h2(x).unwrap_or(f64::NAN)
}

pub fn try_h2(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::Domain(format!("h2 argument {} outside [0,1]", x)));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

/// g(x) = (1+x)log₂(1+x) − x log₂ x.
pub fn g(x: f64) -> f64 {
    try_g(x).unwrap_or(f64::NAN)
}

pub fn try_g(x: f64) -> Result<f64> {
    if !(x >= -1e-12) {
        return Err(Error::Domain(format!("g argument {} negative", x)));
    }
    let x = x.max(0.0);
    Ok(xlog2x(1.0 + x) - xlog2x(x))
}

/// D(ρ‖σ) in bits; +∞ when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    check_density(rho)?;
    check_density(sigma)?;
    if rho.shape() != sigma.shape() {
        return Err(Error::DimMismatch("rho and sigma differ in shape".into()));
    }
    let s = eigh(sigma);
    let n = s.eigenvalues.len();
    let mut null_proj = ComplexMatrix::zeros(n, n);
    for (k, &lam) in s.eigenvalues.iter().enumerate() {
        if lam <= 1e-10 {
            let v = s.eigenvectors.column(k);
            null_proj += &v * v.adjoint();
        }
    }
    let leak = (&null_proj * rho * &null_proj).trace().re;
    if leak > 1e-8 {
        return Ok(f64::INFINITY);
    }
    let log_sigma = matrix_function(sigma, |x| if x > 1e-10 { x.log2() } else { 0.0 });
    let cross = (rho * log_sigma).trace().re;
    Ok(-entropy(rho) - cross)
}

/// I(A;B|E) = H(AE) + H(BE) − H(E) − H(ABE) for index sets over `dims`.
pub fn cmi(
    rho: &ComplexMatrix,
    dims: &[usize],
    a: &[usize],
    b: &[usize],
    e: &[usize],
) -> Result<f64> {
    check_dims(rho, dims)?;
    let mut seen: Vec<usize> = a.iter().chain(b).chain(e).copied().collect();
    let len = seen.len();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != len || seen.iter().any(|&k| k >= dims.len()) || a.is_empty() || b.is_empty() {
        return Err(Error::DimMismatch(
            "partition must be disjoint, in range, A and B non-empty".into(),
        ));
    }
    check_density(rho)?;
    let h = |sys: Vec<usize>| -> Result<f64> {
        if sys.is_empty() {
            return Ok(0.0);
        }
        Ok(entropy(&partial_trace(rho, dims, &sys)?))
    };
    let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let abe = cat(&cat(a, b), e);
    Ok(h(cat(a, e))? + h(cat(b, e))? - h(e.to_vec())? - h(abe)?)
}

/// I(A;B) of a bipartite operator on dims [da, db].
pub fn mutual_information(rho: &ComplexMatrix, da: usize, db: usize) -> Result<f64> {
    cmi(rho, &[da, db], &[0], &[1], &[])
}

fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// Haar-random unitary via QR of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(d, d, |_, _| C64::new(gauss(rng), gauss(rng)));
    let qr = z.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let x = r[(i, i)];
            if x.norm() > 0.0 {
                x / x.norm()
            } else {
                c(1.0)
            }
        } else {
            c(0.0)
        }
    });
    q * phases
}

/// Random full-rank density matrix (Hilbert-Schmidt measure).
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let z = ComplexMatrix::from_fn(d, d, |_, _| C64::new(gauss(rng), gauss(rng)));
    let m = &z * z.adjoint();
    let tr = m.trace();
    m / tr
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut v = ComplexMatrix::from_fn(d, 1, |_, _| C64::new(gauss(rng), gauss(rng)));
    let nrm = v.norm();
    v /= c(nrm);
    v
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; avoids pulling in a distributions crate for one sampler.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tensor_of_identities_is_identity() {
        assert_eq!(tensor(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn tensor_sign_pattern() {
        let zz = tensor(&pauli_z(), &pauli_z());
        let d: Vec<f64> = (0..4).map(|i| zz[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let m = tensor(&ketbra(2, 0, 0), &ketbra(2, 1, 1));
        assert_eq!(m, ketbra(4, 1, 1));
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let r = partial_trace(&max_entangled(2), &[2, 2], &[0]).unwrap();
        assert!(max_abs_diff(&r, &(identity(2) * c(0.5))) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let r = partial_trace(&tensor(&a, &b), &[2, 3], &[1]).unwrap();
        assert!(max_abs_diff(&r, &b) < 1e-14);
        let l = partial_trace(&tensor(&a, &b), &[2, 3], &[0]).unwrap();
        assert!(max_abs_diff(&l, &a) < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        assert!(partial_trace(&identity(4), &[2, 3], &[0]).is_err());
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let pt = partial_transpose(&max_entangled(2), &[2, 2], 1).unwrap();
        let ev = eigvalsh(&pt);
        assert!((ev[3] + 0.5).abs() < 1e-14);
        assert!(ev[..3].iter().all(|&x| (x - 0.5).abs() < 1e-14));
    }

    #[test]
    fn partial_transpose_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_density(6, &mut rng);
        for sys in 0..2 {
            let back =
                partial_transpose(&partial_transpose(&m, &[2, 3], sys).unwrap(), &[2, 3], sys)
                    .unwrap();
            assert!(max_abs_diff(&back, &m) < 1e-14);
        }
    }

    #[test]
    fn permute_swaps_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_density(2, &mut rng);
        let b = random_density(3, &mut rng);
        let swapped = permute_systems(&tensor(&a, &b), &[2, 3], &[1, 0]).unwrap();
        assert!(max_abs_diff(&swapped, &tensor(&b, &a)) < 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert!((entropy_vn(&(identity(2) * c(0.5))).unwrap() - 1.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = projector(&random_pure(3, &mut rng));
        assert!(entropy_vn(&psi).unwrap().abs() < 1e-10);
        let d = diag(&[0.25, 0.75]);
        let expected = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((entropy_vn(&d).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn entropy_rejects_non_density() {
        assert!(entropy_vn(&diag(&[0.5, 0.6])).is_err());
        assert!(entropy_vn(&diag(&[1.2, -0.2])).is_err());
    }

    #[test]
    fn scalar_entropies() {
        assert_eq!(h2(0.5), 1.0);
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(g(0.0), 0.0);
        assert!((g(1.0) - 2.0).abs() < 1e-15);
        let expected = 1.5 * 1.5f64.log2() - 0.5 * 0.5f64.log2();
        assert!((g(0.5) - expected).abs() < 1e-15);
        assert!((g(0.5) - 1.377444).abs() < 1e-6);
        assert!(try_h2(1.1).is_err());
        assert!(try_g(-0.1).is_err());
        assert!(h2(-0.5).is_nan());
    }

    #[test]
    fn relative_entropy_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(2, &mut rng);
        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
        let zero = ketbra(2, 0, 0);
        let one = ketbra(2, 1, 1);
        let mixed = identity(2) * c(0.5);
        assert!((relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
    }

    #[test]
    fn cmi_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ra = random_density(2, &mut rng);
        let rb = random_density(2, &mut rng);
        let re = random_density(2, &mut rng);
        let prod = tensor_all(&[&ra, &rb, &re]);
        assert!(cmi(&prod, &[2, 2, 2], &[0], &[1], &[2]).unwrap().abs() < 1e-12);
        let bell_e = tensor(&max_entangled(2), &re);
        assert!((cmi(&bell_e, &[2, 2, 2], &[0], &[1], &[2]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cmi_of_pure_state_equals_marginal_mutual_information() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let psi = projector(&random_pure(8, &mut rng));
        let ab = partial_trace(&psi, &[2, 2, 2], &[0, 1]).unwrap();
        let lhs = cmi(&psi, &[2, 2, 2], &[0], &[1], &[2]).unwrap();
        let rhs = mutual_information(&ab, 2, 2).unwrap();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn norms() {
        assert!((trace_norm(&identity(4)) - 4.0).abs() < 1e-14);
        assert!((spectral_norm(&identity(4)) - 1.0).abs() < 1e-14);
        assert!((trace_norm(&pauli_z()) - 2.0).abs() < 1e-14);
        let pt = partial_transpose(&max_entangled(2), &[2, 2], 1).unwrap();
        assert!((trace_norm(&pt) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bloch_round_trip() {
        let r = [0.1, -0.3, 0.5];
        let back = density_to_bloch(&bloch_to_density(r));
        for k in 0..3 {
            assert!((r[k] - back[k]).abs() < 1e-15);
        }
    }
}
