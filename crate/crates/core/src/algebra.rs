//! Graded algebra of the osp(1|2) chain: R-matrix, Temperley-Lieb generator,
//! Hamiltonian and transfer matrix.
//!
//! The local space is 3-dimensional with Z2 grading `p(1) = p(3) = 1`,
//! `p(2) = 0` (two fermions, one boson). Matrices act on tensor powers of
//! this space; the index convention throughout is **row = outgoing
//! multi-index, column = incoming multi-index**, with site 1 as the most
//! significant trit of the multi-index and basis labels `a ∈ {1,2,3}`
//! stored 0-based.
//!
//! The braided Yang-Baxter convention validated here is
//! `Ř12(u) Ř23(u+v) Ř12(v) = Ř23(v) Ř12(u+v) Ř23(u)`
//! on ordinary (ungraded) tensor embeddings; the grading signs live inside
//! `Ř` via the graded permutation and Temperley-Lieb generator.

use num_complex::Complex64;
use thiserror::Error;

/// Pole of the Temperley-Lieb coefficient in `Ř(u)`.
pub const R_CHECK_POLE: f64 = 1.5;

/// Largest chain length kept dense (3^10 = 59049 basis states).
pub const MAX_DENSE_SITES: usize = 10;

/// Largest chain length for the transfer-matrix constructor.
pub const MAX_TRANSFER_SITES: usize = 8;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("spectral parameter u = {0} hits the Ř-matrix pole at 3/2")]
    RMatrixPole(Complex64),
    #[error("site count {0} outside supported range {1}..={2}")]
    SiteCount(usize, usize, usize),
}

/// Z2 grading of the 3-dimensional basis: `p(1) = p(3) = 1`, `p(2) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Grading;

impl Grading {
    /// Parity of basis label `a ∈ {1,2,3}`.
    pub fn parity(a: usize) -> u8 {
        debug_assert!((1..=3).contains(&a));
        match a {
            2 => 0,
            _ => 1,
        }
    }

    /// Sign `(-1)^{p(a) p(b)}`.
    pub fn sign(a: usize, b: usize) -> f64 {
        if Self::parity(a) == 1 && Self::parity(b) == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Dense complex matrix on a tensor power of the graded 3-dimensional space.
///
/// `dim` is always an exact power of 3. Storage is row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl GradedMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(is_power_of_three(dim), "dimension {dim} is not a power of 3");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Entry addressed by paper-style two-site indices: row `(a,b)`,
    /// column `(c,d)` with labels in `{1,2,3}`. Only valid for `dim = 9`.
    pub fn two_site_entry(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        assert_eq!(self.dim, 9);
        self.get(3 * (a - 1) + (b - 1), 3 * (c - 1) + (d - 1))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(row.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *o += b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * (n * m) + (j * m + l)] = a * other.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Max-norm of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |imaginary part| over all entries.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Apply to a state vector (length `dim`).
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        let n = self.dim;
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &xj) in x.iter().enumerate() {
                acc += self.data[i * n + j] * xj;
            }
            y[i] = acc;
        }
        y
    }
}

fn is_power_of_three(mut n: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n % 3 == 0 {
        n /= 3;
    }
    n == 1
}

/// The 3×3 matrix α with rows (0,0,1), (0,1,0), (−1,0,0).
pub fn build_alpha() -> GradedMatrix {
    let mut m = GradedMatrix::zeros(3);
    m.set(0, 2, Complex64::new(1.0, 0.0));
    m.set(1, 1, Complex64::new(1.0, 0.0));
    m.set(2, 0, Complex64::new(-1.0, 0.0));
    m
}

/// Exact inverse of α (integer entries, not numerically inverted).
pub fn build_alpha_inverse() -> GradedMatrix {
    let mut m = GradedMatrix::zeros(3);
    m.set(0, 2, Complex64::new(-1.0, 0.0));
    m.set(1, 1, Complex64::new(1.0, 0.0));
    m.set(2, 0, Complex64::new(1.0, 0.0));
    m
}

/// Graded permutation, `(P^g)_{ab}^{cd} = (-1)^{p(a)p(b)} δ_{a,d} δ_{b,c}`.
pub fn build_graded_permutation() -> GradedMatrix {
    let mut m = GradedMatrix::zeros(9);
    for a in 1..=3 {
        for b in 1..=3 {
            let row = 3 * (a - 1) + (b - 1);
            let col = 3 * (b - 1) + (a - 1); // c = b, d = a
            m.set(row, col, Complex64::new(Grading::sign(a, b), 0.0));
        }
    }
    m
}

/// Ungraded permutation `P_{ab}^{cd} = δ_{a,d} δ_{b,c}` (used in `R = P Ř`).
pub fn build_plain_permutation() -> GradedMatrix {
    let mut m = GradedMatrix::zeros(9);
    for a in 0..3 {
        for b in 0..3 {
            m.set(3 * a + b, 3 * b + a, Complex64::new(1.0, 0.0));
        }
    }
    m
}

/// Temperley-Lieb generator, `(E^g)_{ab}^{cd} = α_{ab} (α^{-1})_{cd}`.
///
/// Satisfies `(E^g)^2 = -E^g`: the trace factor `Σ_{ab} α_{ab} (α^{-1})_{ab}`
/// equals -1.
pub fn build_e() -> GradedMatrix {
    let alpha = build_alpha();
    let alpha_inv = build_alpha_inverse();
    let mut m = GradedMatrix::zeros(9);
    for a in 0..3 {
        for b in 0..3 {
            let va = alpha.get(a, b);
            if va == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..3 {
                for d in 0..3 {
                    m.set(3 * a + b, 3 * c + d, va * alpha_inv.get(c, d));
                }
            }
        }
    }
    m
}

/// Baxterized R-matrix `Ř(u) = I + u P^g − u/(u − 3/2) E^g`.
pub fn build_r_check(u: Complex64) -> Result<GradedMatrix, AlgebraError> {
    if (u - R_CHECK_POLE).norm() < 1e-12 {
        return Err(AlgebraError::RMatrixPole(u));
    }
    let p = build_graded_permutation();
    let e = build_e();
    let coeff = -u / (u - R_CHECK_POLE);
    Ok(GradedMatrix::identity(9)
        .add(&p.scale(u))
        .add(&e.scale(coeff)))
}

/// Max-norm residual of the braided graded Yang-Baxter equation at `(u, v)`:
/// `Ř12(u) Ř23(u+v) Ř12(v) − Ř23(v) Ř12(u+v) Ř23(u)` on the 27-dimensional
/// triple tensor product.
pub fn check_graded_ybe(u: f64, v: f64) -> Result<f64, AlgebraError> {
    let i3 = GradedMatrix::identity(3);
    let r12 = |x: f64| -> Result<GradedMatrix, AlgebraError> {
        Ok(build_r_check(Complex64::new(x, 0.0))?.kron(&i3))
    };
    let r23 = |x: f64| -> Result<GradedMatrix, AlgebraError> {
        Ok(i3.kron(&build_r_check(Complex64::new(x, 0.0))?))
    };
    let lhs = r12(u)?.matmul(&r23(u + v)?).matmul(&r12(v)?);
    let rhs = r23(v)?.matmul(&r12(u + v)?).matmul(&r23(u)?);
    Ok(lhs.max_abs_diff(&rhs))
}

/// Embed a 9×9 two-site operator acting on sites `(p, q)` (0-based, possibly
/// non-adjacent) of an `n`-site chain.
fn embed_two_site(op: &GradedMatrix, n_sites: usize, p: usize, q: usize) -> GradedMatrix {
    assert_eq!(op.dim(), 9);
    assert!(p != q && p < n_sites && q < n_sites);
    let dim = 3usize.pow(n_sites as u32);
    let pw: Vec<usize> = (0..n_sites)
        .map(|k| 3usize.pow((n_sites - 1 - k) as u32))
        .collect();
    let mut out = GradedMatrix::zeros(dim);
    for s in 0..dim {
        let c = (s / pw[p]) % 3;
        let d = (s / pw[q]) % 3;
        let base = s - c * pw[p] - d * pw[q];
        for a in 0..3 {
            for b in 0..3 {
                let v = op.get(3 * a + b, 3 * c + d);
                if v != Complex64::new(0.0, 0.0) {
                    let s2 = base + a * pw[p] + b * pw[q];
                    let cur = out.get(s2, s);
                    out.set(s2, s, cur + v);
                }
            }
        }
    }
    out
}

/// Periodic-chain Hamiltonian `H = J Σ_{j=1}^{N} (P^g + (2/3) E^g)_{j,j+1}`
/// with `j = N+1` identified with `1`.
///
/// For `N = 2` the literal sum is kept, so the single bond is counted twice.
/// The matrix is real but not symmetric in this basis; its spectrum is real
/// (asserted downstream by the exact-diagonalization module).
pub fn build_hamiltonian(n_sites: usize, coupling: f64) -> Result<GradedMatrix, AlgebraError> {
    if !(2..=MAX_DENSE_SITES).contains(&n_sites) {
        return Err(AlgebraError::SiteCount(n_sites, 2, MAX_DENSE_SITES));
    }
    let h2 = build_graded_permutation().add(&build_e().scale(Complex64::new(2.0 / 3.0, 0.0)));
    let dim = 3usize.pow(n_sites as u32);
    let mut h = GradedMatrix::zeros(dim);
    for j in 0..n_sites {
        h = h.add(&embed_two_site(&h2, n_sites, j, (j + 1) % n_sites));
    }
    Ok(h.scale(Complex64::new(coupling, 0.0)))
}

/// Transfer matrix `T(u) = tr_a [ R_{aN}(iu) ··· R_{a1}(iu) ]` with
/// `R = P Ř` (ungraded `P`), evaluated at real `u`.
///
/// Contracted site-by-site through 3×3 auxiliary-space blocks, never
/// materializing the monodromy on the enlarged space. Its eigenvalues equal
/// `i^N` times the dressed-vacuum-form expression (the per-site normalization
/// between the trace convention here and the analytic eigenvalue formula).
pub fn build_transfer_matrix(u: f64, n_sites: usize) -> Result<GradedMatrix, AlgebraError> {
    if !(2..=MAX_TRANSFER_SITES).contains(&n_sites) {
        return Err(AlgebraError::SiteCount(n_sites, 2, MAX_TRANSFER_SITES));
    }
    let r = build_plain_permutation().matmul(&build_r_check(Complex64::new(0.0, u))?);
    // W[s_out][s_in] is the 3x3 auxiliary block (a_out, a_in).
    let mut w = [[[[Complex64::new(0.0, 0.0); 3]; 3]; 3]; 3];
    for (ao, wo) in w.iter_mut().enumerate() {
        for (so, wos) in wo.iter_mut().enumerate() {
            for (ai, wosa) in wos.iter_mut().enumerate() {
                for (si, entry) in wosa.iter_mut().enumerate() {
                    *entry = r.get(3 * ao + so, 3 * ai + si);
                }
            }
        }
    }
    let dim = 3usize.pow(n_sites as u32);
    let pw: Vec<usize> = (0..n_sites)
        .map(|k| 3usize.pow((n_sites - 1 - k) as u32))
        .collect();
    let mut t = GradedMatrix::zeros(dim);
    let mut digits_out = vec![0usize; n_sites];
    let mut digits_in = vec![0usize; n_sites];
    for sp in 0..dim {
        for (k, d) in digits_out.iter_mut().enumerate() {
            *d = (sp / pw[k]) % 3;
        }
        for s in 0..dim {
            for (k, d) in digits_in.iter_mut().enumerate() {
                *d = (s / pw[k]) % 3;
            }
            // product over sites j = N down to 1 (site j is digit k = j-1)
            let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = Complex64::new(1.0, 0.0);
            }
            for j in (0..n_sites).rev() {
                let blk = &w; // m = m * W[ao][so][ai][si] over aux indices
                let (so, si) = (digits_out[j], digits_in[j]);
                let mut next = [[Complex64::new(0.0, 0.0); 3]; 3];
                for (r_i, nrow) in next.iter_mut().enumerate() {
                    for (c_i, out) in nrow.iter_mut().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for k in 0..3 {
                            acc += m[r_i][k] * blk[k][so][c_i][si];
                        }
                        *out = acc;
                    }
                }
                m = next;
            }
            let tr = m[0][0] + m[1][1] + m[2][2];
            if tr != Complex64::new(0.0, 0.0) {
                t.set(sp, s, tr);
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    const Z: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn alpha_entries_and_inverse() {
        let a = build_alpha();
        let ai = build_alpha_inverse();
        assert_eq!(a.get(0, 2), ONE); // α[1][3] = 1
        let prod = a.matmul(&ai);
        assert!(prod.max_abs_diff(&GradedMatrix::identity(3)) < 1e-15);
        // Σ_{ab} α_{ab} (α⁻¹)_{ab} = −1
        let mut s = Z;
        for r in 0..3 {
            for c in 0..3 {
                s += a.get(r, c) * ai.get(r, c);
            }
        }
        assert!((s - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn graded_permutation_signs_and_square() {
        let p = build_graded_permutation();
        assert_eq!(p.two_site_entry(2, 2, 2, 2), ONE); // bosonic diagonal
        assert_eq!(p.two_site_entry(1, 3, 3, 1), Complex64::new(-1.0, 0.0));
        let p2 = p.matmul(&p);
        assert!(p2.max_abs_diff(&GradedMatrix::identity(9)) < 1e-14);
    }

    #[test]
    fn temperley_lieb_square_and_entries() {
        let e = build_e();
        assert_eq!(e.two_site_entry(2, 2, 2, 2), ONE); // α_22 (α⁻¹)_22 = 1
        assert_eq!(e.two_site_entry(1, 1, 2, 2), Z); // α_11 = 0
        let e2 = e.matmul(&e);
        assert!(e2.max_abs_diff(&e.scale(Complex64::new(-1.0, 0.0))) < 1e-14);
        // P E = E P = E (needed by the Baxterization)
        let p = build_graded_permutation();
        assert!(p.matmul(&e).max_abs_diff(&e) < 1e-14);
        assert!(e.matmul(&p).max_abs_diff(&e) < 1e-14);
    }

    #[test]
    fn r_check_special_points() {
        let r0 = build_r_check(Z).unwrap();
        assert!(r0.max_abs_diff(&GradedMatrix::identity(9)) < 1e-15);
        // Ř(1) = I + P + 2E
        let r1 = build_r_check(ONE).unwrap();
        let expect = GradedMatrix::identity(9)
            .add(&build_graded_permutation())
            .add(&build_e().scale(Complex64::new(2.0, 0.0)));
        assert!(r1.max_abs_diff(&expect) < 1e-15);
        assert!(build_r_check(Complex64::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn ybe_residual_vanishes() {
        assert!(check_graded_ybe(0.3, 0.7).unwrap() < 1e-12);
        // Ř(0) = I makes the residual exact zero up to rounding
        assert!(check_graded_ybe(0.0, 0.63).unwrap() < 1e-13);
        let mut rng = SplitMix64::new(0x5eed);
        for _ in 0..20 {
            let u = rng.next_in(-1.0, 1.0);
            let v = rng.next_in(-1.0, 1.0);
            if (u + v - R_CHECK_POLE).abs() < 1e-3 {
                continue;
            }
            assert!(
                check_graded_ybe(u, v).unwrap() < 1e-12,
                "YBE residual too large at ({u}, {v})"
            );
        }
    }

    #[test]
    fn hamiltonian_pseudo_vacuum_and_linearity() {
        // N=2, J=1: H|11> = -2|11> (the single bond is counted twice)
        let h = build_hamiltonian(2, 1.0).unwrap();
        let mut vac = vec![Z; 9];
        vac[0] = ONE;
        let hv = h.apply(&vac);
        for (i, v) in hv.iter().enumerate() {
            let expect = if i == 0 { Complex64::new(-2.0, 0.0) } else { Z };
            assert!((v - expect).norm() < 1e-14);
        }
        // H(J) = J·H(1)
        let h35 = build_hamiltonian(3, -2.5).unwrap();
        let h31 = build_hamiltonian(3, 1.0).unwrap();
        assert!(h35.max_abs_diff(&h31.scale(Complex64::new(-2.5, 0.0))) < 1e-13);
        // entries are purely real
        assert!(h.max_imag() == 0.0);
        assert!(build_hamiltonian(11, 1.0).is_err());
        assert!(build_hamiltonian(1, 1.0).is_err());
    }

    #[test]
    fn transfer_matrices_commute() {
        let t1 = build_transfer_matrix(0.2, 3).unwrap();
        let t2 = build_transfer_matrix(0.5, 3).unwrap();
        let comm = t1.matmul(&t2).max_abs_diff(&t2.matmul(&t1));
        assert!(comm < 1e-10, "commutator norm {comm}");
        assert!(build_transfer_matrix(0.1, 9).is_err());
    }

    #[test]
    fn transfer_at_zero_is_a_shift() {
        // T(0) = tr_a[P_aN ... P_a1] is the cyclic shift: a permutation matrix
        let t0 = build_transfer_matrix(0.0, 3).unwrap();
        let total: f64 = (0..27)
            .map(|r| (0..27).map(|c| t0.get(r, c).norm()).sum::<f64>())
            .sum();
        assert!((total - 27.0).abs() < 1e-12);
        // one unit entry per row
        for r in 0..27 {
            let row_max: f64 = (0..27).map(|c| t0.get(r, c).norm()).fold(0.0, f64::max);
            assert!((row_max - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_pseudo_vacuum_matches_dvf_normalization() {
        // eigenvalue on |111> at u = 0.4 equals i^N · (Eq. 5 with Q ≡ 1)
        let n = 3;
        let u = 0.4;
        let t = build_transfer_matrix(u, n).unwrap();
        let mut vac = vec![Z; 27];
        vac[0] = ONE;
        let tv = t.apply(&vac);
        // vac must be an eigenvector
        for (i, v) in tv.iter().enumerate().skip(1) {
            assert!(v.norm() < 1e-13, "off-component {i}");
        }
        let uc = Complex64::new(u, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let sign = Complex64::new(-1.0, 0.0); // (-1)^{N-n}, N=3, n=0
        let dvf = sign * (uc + i).powu(3)
            + uc.powu(3)
            + sign * (uc * (uc + 0.5 * i) / (uc + 1.5 * i)).powu(3);
        let expect = i.powu(3) * dvf;
        assert!((tv[0] - expect).norm() < 1e-13);
    }
}
