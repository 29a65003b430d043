//! Bethe-root machinery: Q-functions, dressed-vacuum-form (DVF) eigenvalues,
//! Bethe-equation residuals and Newton solving, string configurations and the
//! logarithmic (counting) form of the equations.
//!
//! The Bethe equations in this normalization read
//! `e(u_k)^N = −(−1)^{N−n} Q(u_k−i/2) Q(u_k+i) / (Q(u_k+i/2) Q(u_k−i))`
//! with `e(u) = (u+i/2)/(u−i/2)` and `Q(u) = Π_j (u − u_j)`.
//!
//! Newton iterates on the pole-free polynomial form
//! `(u_k+i/2)^N Q(u_k+i/2) Q(u_k−i) + (−1)^{N−n} (u_k−i/2)^N Q(u_k−i/2) Q(u_k+i) = 0`
//! with an analytic Jacobian; the literal product form is kept for residual
//! reporting on regular states.

use num_complex::Complex64;
use thiserror::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum allowed pairwise root separation; closer roots invalidate the
/// Q-function ansatz and abort the seed.
pub const ROOT_COLLISION_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum BetheError {
    #[error("roots {0} and {1} collide (separation below 1e-8)")]
    RootCollision(usize, usize),
    #[error("root at ±i/2 makes an e-factor singular")]
    EFactorPole,
    #[error("Q-function zero at a shifted argument; state does not satisfy the pole-free condition")]
    QZero,
    #[error("Newton did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("Jacobian is singular at the current iterate")]
    SingularJacobian,
    #[error("root {0} sits on ±i/2; the energy summand 1/(u²+1/4) is singular")]
    SingularEnergy(usize),
    #[error("energy imaginary part {0} violates the conjugate-pairing bound")]
    PairingViolation(f64),
    #[error("quantum-number shape does not match the string configuration")]
    ShapeMismatch,
}

/// A Bethe state: `n = roots.len()` rapidities on an `N`-site chain.
#[derive(Debug, Clone)]
pub struct BetheState {
    pub n_sites: usize,
    pub roots: Vec<Complex64>,
}

impl BetheState {
    pub fn new(n_sites: usize, roots: Vec<Complex64>) -> Result<Self, BetheError> {
        let s = Self { n_sites, roots };
        s.check_distinct()?;
        Ok(s)
    }

    pub fn quantum_number(&self) -> usize {
        self.roots.len()
    }

    fn check_distinct(&self) -> Result<(), BetheError> {
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                if (self.roots[i] - self.roots[j]).norm() < ROOT_COLLISION_TOL {
                    return Err(BetheError::RootCollision(i, j));
                }
            }
        }
        Ok(())
    }

    /// `(−1)^{N−n}` sign factor of Eqs. (5)-(6); kept literal for every parity.
    fn sign(&self) -> f64 {
        if (self.n_sites - self.quantum_number()) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Monic Q-function `Q(u) = Π_j (u − u_j)`; the empty product is 1.
pub fn q_function(u: Complex64, state: &BetheState) -> Complex64 {
    state.roots.iter().fold(Complex64::new(1.0, 0.0), |acc, &r| acc * (u - r))
}

/// Dressed-vacuum-form eigenvalue (three-term sum with both `(−1)^{N−n}`
/// factors).
///
/// The directly-traced transfer matrix equals `i^N` times this expression;
/// the factor is the per-site normalization of `R(iu)` and drops out of
/// logarithmic derivatives.
pub fn dvf_eigenvalue(u: Complex64, state: &BetheState) -> Result<Complex64, BetheError> {
    let n = state.n_sites as u32;
    let q = |x: Complex64| q_function(x, state);
    let scale = 1.0 + state.roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let d1 = q(u + 0.5 * I);
    let d2 = q(u + I);
    if d1.norm() < 1e-12 * scale || d2.norm() < 1e-12 * scale {
        return Err(BetheError::QZero);
    }
    let s = state.sign();
    let t1 = s * (u + I).powu(n) * q(u - 0.5 * I) / d1;
    let t2 = u.powu(n) * q(u) * q(u + 1.5 * I) / (d1 * d2);
    let t3 = s * (u * (u + 0.5 * I) / (u + 1.5 * I)).powu(n) * q(u + 2.0 * I) / d2;
    Ok(t1 + t2 + t3)
}

/// Literal Bethe-equation residual, component k = LHS_k − RHS_k.
pub fn bae_residual(state: &BetheState) -> Result<Vec<Complex64>, BetheError> {
    state.check_distinct()?;
    let n = state.n_sites as u32;
    let s = state.sign();
    let mut out = Vec::with_capacity(state.roots.len());
    for &u in &state.roots {
        if (u - 0.5 * I).norm() < 1e-12 || (u + 0.5 * I).norm() < 1e-12 {
            return Err(BetheError::EFactorPole);
        }
        let lhs = ((u + 0.5 * I) / (u - 0.5 * I)).powu(n);
        let num = q_function(u - 0.5 * I, state) * q_function(u + I, state);
        let den = q_function(u + 0.5 * I, state) * q_function(u - I, state);
        if den.norm() < 1e-300 {
            return Err(BetheError::QZero);
        }
        let rhs = -s * num / den;
        out.push(lhs - rhs);
    }
    Ok(out)
}

/// Pole-free polynomial residual used by the Newton solver.
fn poly_residual(roots: &[Complex64], n_sites: usize) -> Vec<Complex64> {
    let n = n_sites as u32;
    let s = if (n_sites - roots.len()) % 2 == 0 { 1.0 } else { -1.0 };
    let q = |x: Complex64| roots.iter().fold(Complex64::new(1.0, 0.0), |a, &r| a * (x - r));
    roots
        .iter()
        .map(|&u| {
            (u + 0.5 * I).powu(n) * q(u + 0.5 * I) * q(u - I)
                + s * (u - 0.5 * I).powu(n) * q(u - 0.5 * I) * q(u + I)
        })
        .collect()
}

/// Π_{l≠skip} (x − u_l)
fn prod_skip(x: Complex64, roots: &[Complex64], skip: usize) -> Complex64 {
    roots
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != skip)
        .fold(Complex64::new(1.0, 0.0), |a, (_, &r)| a * (x - r))
}

/// d/du_k Q(u_k + c): the l = k factor is the constant c, the rest each
/// contribute a skipped product.
fn dq_self(x: Complex64, roots: &[Complex64], k: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..roots.len() {
        if m != k {
            acc += prod_skip(x, roots, m);
        }
    }
    acc
}

/// Analytic Jacobian of the polynomial residual, row-major n×n.
fn poly_jacobian(roots: &[Complex64], n_sites: usize) -> Vec<Complex64> {
    let n = roots.len();
    let np = n_sites as u32;
    let s = if (n_sites - n) % 2 == 0 { 1.0 } else { -1.0 };
    let q = |x: Complex64| roots.iter().fold(Complex64::new(1.0, 0.0), |a, &r| a * (x - r));
    let mut jac = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, &u) in roots.iter().enumerate() {
        let pa = (u + 0.5 * I).powu(np);
        let pb = (u - 0.5 * I).powu(np);
        let (xa1, xa2) = (u + 0.5 * I, u - I);
        let (xb1, xb2) = (u - 0.5 * I, u + I);
        let (qa1, qa2) = (q(xa1), q(xa2));
        let (qb1, qb2) = (q(xb1), q(xb2));
        for j in 0..n {
            let d = if j == k {
                let dpa = np as f64 * (u + 0.5 * I).powu(np - 1);
                let dpb = np as f64 * (u - 0.5 * I).powu(np - 1);
                let da = dpa * qa1 * qa2
                    + pa * dq_self(xa1, roots, k) * qa2
                    + pa * qa1 * dq_self(xa2, roots, k);
                let db = dpb * qb1 * qb2
                    + pb * dq_self(xb1, roots, k) * qb2
                    + pb * qb1 * dq_self(xb2, roots, k);
                da + s * db
            } else {
                let da = pa * (-prod_skip(xa1, roots, j) * qa2 - qa1 * prod_skip(xa2, roots, j));
                let db = pb * (-prod_skip(xb1, roots, j) * qb2 - qb1 * prod_skip(xb2, roots, j));
                da + s * db
            };
            jac[k * n + j] = d;
        }
    }
    jac
}

/// Gaussian elimination with partial pivoting for the small Newton systems.
fn solve_dense(mut a: Vec<Complex64>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-14 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / d;
            if factor.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[col * n + c];
                a[r * n + c] -= factor * v;
            }
            let bc = b[col];
            b[r] -= factor * bc;
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for c in col + 1..n {
            acc -= a[col * n + c] * b[c];
        }
        b[col] = acc / a[col * n + col];
    }
    Some(b)
}

/// Result of a Newton solve.
#[derive(Debug, Clone)]
pub struct NewtonReport {
    pub state: BetheState,
    pub iterations: usize,
    /// Sup-norm of the polynomial residual, normalized by the term scale.
    pub poly_residual: f64,
    /// Sup-norm of the literal Eq.-(6) residual, when all denominators are
    /// regular (absent for singular/near-singular string states).
    pub literal_residual: Option<f64>,
}

fn scaled_residual_norm(roots: &[Complex64], n_sites: usize) -> (f64, Vec<Complex64>) {
    let f = poly_residual(roots, n_sites);
    let n = n_sites as u32;
    let q = |x: Complex64| roots.iter().fold(Complex64::new(1.0, 0.0), |a, &r| a * (x - r));
    let mut worst = 0.0f64;
    for (k, &u) in roots.iter().enumerate() {
        let scale = ((u + 0.5 * I).powu(n) * q(u + 0.5 * I) * q(u - I)).norm()
            + ((u - 0.5 * I).powu(n) * q(u - 0.5 * I) * q(u + I)).norm();
        worst = worst.max(f[k].norm() / scale.max(1.0));
    }
    (worst, f)
}

/// Damped Newton iteration on the polynomial form of the Bethe equations.
pub fn solve_bae_newton(
    initial: &BetheState,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonReport, BetheError> {
    initial.check_distinct()?;
    let n_sites = initial.n_sites;
    let mut roots = initial.roots.clone();
    let n = roots.len();
    if n == 0 {
        return Ok(NewtonReport {
            state: BetheState::new(n_sites, roots)?,
            iterations: 0,
            poly_residual: 0.0,
            literal_residual: Some(0.0),
        });
    }
    let mut res = scaled_residual_norm(&roots, n_sites);
    for it in 0..max_iter {
        if res.0 < tol {
            return finish(n_sites, roots, it, res.0);
        }
        let jac = poly_jacobian(&roots, n_sites);
        let step = solve_dense(jac, res.1.clone()).ok_or(BetheError::SingularJacobian)?;
        // backtracking on the scaled residual
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<Complex64> = roots
                .iter()
                .zip(&step)
                .map(|(&r, &s)| r - lambda * s)
                .collect();
            let tr = scaled_residual_norm(&trial, n_sites);
            if tr.0 < res.0 {
                roots = trial;
                res = tr;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(BetheError::NoConvergence {
                iterations: it,
                residual: res.0,
            });
        }
        // collision guard on the new iterate
        let state = BetheState {
            n_sites,
            roots: roots.clone(),
        };
        state.check_distinct()?;
        if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite() || r.norm() > 1e6) {
            return Err(BetheError::NoConvergence {
                iterations: it,
                residual: res.0,
            });
        }
    }
    if res.0 < tol {
        return finish(n_sites, roots, max_iter, res.0);
    }
    Err(BetheError::NoConvergence {
        iterations: max_iter,
        residual: res.0,
    })
}

fn finish(
    n_sites: usize,
    roots: Vec<Complex64>,
    iterations: usize,
    poly_res: f64,
) -> Result<NewtonReport, BetheError> {
    let state = BetheState::new(n_sites, roots)?;
    let literal = bae_residual(&state)
        .ok()
        .map(|v| v.iter().map(|z| z.norm()).fold(0.0, f64::max));
    Ok(NewtonReport {
        state,
        iterations,
        poly_residual: poly_res,
        literal_residual: literal,
    })
}

/// Energy `E = J (Σ_j 1/(u_j² + 1/4) − N)`.
///
/// For complex roots the sum must be real by conjugate pairing; the imaginary
/// part is asserted below 1e−10 (relative) and discarded.
pub fn energy_from_roots(state: &BetheState, coupling: f64) -> Result<f64, BetheError> {
    let mut total = Complex64::new(0.0, 0.0);
    for (j, &u) in state.roots.iter().enumerate() {
        let den = u * u + 0.25;
        if den.norm() < 1e-12 {
            return Err(BetheError::SingularEnergy(j));
        }
        total += 1.0 / den;
    }
    let scale = total.norm().max(1.0);
    if total.im.abs() > 1e-10 * scale {
        return Err(BetheError::PairingViolation(total.im));
    }
    Ok(coupling * (total.re - state.n_sites as f64))
}

/// m-string roots `u^{m,α} = center + (i/2)(m + 1 − 2α)`, α = 1..m.
pub fn expand_string(m: usize, center: f64) -> Vec<Complex64> {
    (1..=m)
        .map(|alpha| Complex64::new(center, 0.5 * (m as f64 + 1.0 - 2.0 * alpha as f64)))
        .collect()
}

/// e(u) = (u + i/2)/(u − i/2)
fn e_factor(u: Complex64) -> Complex64 {
    (u + 0.5 * I) / (u - 0.5 * I)
}

/// Exponent pattern shared by the string-string scattering amplitude and its
/// logarithmic phase: list of `(j, c_j)` with `E_{ml}(u) = Π_j e(u/j)^{c_j}`.
fn takahashi_exponents(m: usize, l: usize) -> Vec<(usize, i32)> {
    let mut out = Vec::new();
    if m == l {
        for j in 1..m {
            out.push((2 * j, 2));
        }
        out.push((2 * m, 1));
        for j in 1..=m {
            out.push((2 * j - 1, -1));
        }
    } else {
        let a = m.abs_diff(l);
        let b = m + l;
        out.push((a, 1));
        let mut j = a + 2;
        while j <= b - 2 {
            out.push((j, 2));
            j += 2;
        }
        out.push((b, 1));
        let mut j = a + 1;
        while j <= b - 1 {
            out.push((j, -1));
            j += 2;
        }
    }
    out
}

/// String-string scattering amplitude `E_{ml}(u)`; unimodular for real `u`.
pub fn scattering_e(m: usize, l: usize, u: f64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (j, c) in takahashi_exponents(m, l) {
        let e = e_factor(Complex64::new(u / j as f64, 0.0));
        let p = match c {
            1 => e,
            2 => e * e,
            -1 => 1.0 / e,
            _ => unreachable!(),
        };
        acc *= p;
    }
    acc
}

/// θ(u) = 2 arctan(2u); odd, increasing onto (−π, π).
pub fn theta(u: f64) -> f64 {
    2.0 * (2.0 * u).atan()
}

/// dθ/du = 4/(1 + 4u²)
pub fn theta_prime(u: f64) -> f64 {
    4.0 / (1.0 + 4.0 * u * u)
}

/// Takahashi phase `Θ_{ml}(u)`: same `(j, c_j)` pattern as `E_{ml}` with
/// `e(u/j)^{c_j} → c_j θ(u/j)`. Odd and symmetric in `(m, l)`.
pub fn big_theta(m: usize, l: usize, u: f64) -> f64 {
    takahashi_exponents(m, l)
        .into_iter()
        .map(|(j, c)| c as f64 * theta(u / j as f64))
        .sum()
}

/// dΘ_{ml}/du
pub fn big_theta_prime(m: usize, l: usize, u: f64) -> f64 {
    takahashi_exponents(m, l)
        .into_iter()
        .map(|(j, c)| c as f64 * theta_prime(u / j as f64) / j as f64)
        .sum()
}

/// One group of equal-length strings.
#[derive(Debug, Clone)]
pub struct StringPart {
    pub length: usize,
    pub centers: Vec<f64>,
}

/// A string configuration on an `N`-site chain.
#[derive(Debug, Clone)]
pub struct StringConfig {
    pub n_sites: usize,
    pub parts: Vec<StringPart>,
}

impl StringConfig {
    /// Total number of roots `Σ m·n_m` after expansion.
    pub fn total_roots(&self) -> usize {
        self.parts.iter().map(|p| p.length * p.centers.len()).sum()
    }

    /// All roots from expanding every string.
    pub fn expand(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.total_roots());
        for p in &self.parts {
            for &c in &p.centers {
                out.extend(expand_string(p.length, c));
            }
        }
        out
    }
}

/// Counting-equation residual: component `(m,k)` is
/// `N θ(u_k^m/m) − 2π I_k^m − Σ_{l,j} Θ_{ml}(u_k^m − u_j^l)`.
///
/// `quantum_numbers` mirrors the shape of `config.parts`.
pub fn log_bae_residual(
    config: &StringConfig,
    quantum_numbers: &[Vec<f64>],
) -> Result<Vec<f64>, BetheError> {
    if quantum_numbers.len() != config.parts.len()
        || quantum_numbers
            .iter()
            .zip(&config.parts)
            .any(|(q, p)| q.len() != p.centers.len())
    {
        return Err(BetheError::ShapeMismatch);
    }
    let n = config.n_sites as f64;
    let mut out = Vec::new();
    for (pi, part) in config.parts.iter().enumerate() {
        let m = part.length;
        for (ki, &u) in part.centers.iter().enumerate() {
            let mut r = n * theta(u / m as f64) - 2.0 * std::f64::consts::PI * quantum_numbers[pi][ki];
            for (pl, other) in config.parts.iter().enumerate() {
                let l = other.length;
                for (ji, &v) in other.centers.iter().enumerate() {
                    if pl == pi && ji == ki {
                        continue; // Θ(0) = 0; skipping keeps the self-term explicit
                    }
                    r -= big_theta(m, l, u - v);
                }
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Derivative of [`log_bae_residual`] with respect to the flattened centers
/// (row-major over residual components × centers).
pub fn log_bae_jacobian(config: &StringConfig) -> Vec<f64> {
    let n = config.n_sites as f64;
    let flat: Vec<(usize, f64)> = config
        .parts
        .iter()
        .flat_map(|p| p.centers.iter().map(move |&c| (p.length, c)))
        .collect();
    let dim = flat.len();
    let mut jac = vec![0.0; dim * dim];
    for (row, &(m, u)) in flat.iter().enumerate() {
        for (col, &(l, v)) in flat.iter().enumerate() {
            if row == col {
                let mut d = n * theta_prime(u / m as f64) / m as f64;
                for (other, &(l2, v2)) in flat.iter().enumerate() {
                    if other != row {
                        d -= big_theta_prime(m, l2, u - v2);
                    }
                }
                jac[row * dim + col] = d;
            } else {
                jac[row * dim + col] = big_theta_prime(m, l, u - v);
            }
        }
    }
    jac
}

/// Nearest half-integers `I_k^m` consistent with a solved configuration.
pub fn infer_quantum_numbers(config: &StringConfig) -> Vec<Vec<f64>> {
    let zeros: Vec<Vec<f64>> = config
        .parts
        .iter()
        .map(|p| vec![0.0; p.centers.len()])
        .collect();
    let raw = log_bae_residual(config, &zeros).expect("shape is consistent by construction");
    let mut out = Vec::new();
    let mut idx = 0;
    for p in &config.parts {
        let mut row = Vec::with_capacity(p.centers.len());
        for _ in &p.centers {
            let i_raw = raw[idx] / (2.0 * std::f64::consts::PI);
            row.push((2.0 * i_raw).round() / 2.0);
            idx += 1;
        }
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra;
    use crate::exact;
    use crate::lapack;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q_function_basics() {
        let empty = BetheState::new(4, vec![]).unwrap();
        assert_eq!(q_function(c(1.3, -0.2), &empty), c(1.0, 0.0));
        let st = BetheState::new(4, vec![c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        assert!((q_function(c(0.0, 0.0), &st) - c(0.25, 0.0)).norm() < 1e-15);
        for &r in &st.roots {
            assert!(q_function(r, &st).norm() < 1e-15);
        }
    }

    #[test]
    fn collision_guard() {
        assert!(matches!(
            BetheState::new(4, vec![c(0.5, 0.0), c(0.5 + 1e-9, 0.0)]),
            Err(BetheError::RootCollision(0, 1))
        ));
    }

    #[test]
    fn n1_closed_form_roots() {
        // N=4, n=1: e(u)^4 = 1, u = cot(pi k/4)/2 -> {1/2, 0, -1/2}
        for u in [0.5, 0.0, -0.5] {
            let st = BetheState::new(4, vec![c(u, 0.0)]).unwrap();
            let r = bae_residual(&st).unwrap();
            assert!(r[0].norm() < 1e-12, "u={u}: {}", r[0].norm());
        }
        // generic point: nonzero residual
        let st = BetheState::new(4, vec![c(0.3, 0.0)]).unwrap();
        assert!(bae_residual(&st).unwrap()[0].norm() > 1e-3);
        // n=0: empty residual vector
        let empty = BetheState::new(4, vec![]).unwrap();
        assert!(bae_residual(&empty).unwrap().is_empty());
    }

    #[test]
    fn newton_converges_to_closed_form() {
        let seed = BetheState::new(4, vec![c(0.45, 0.0)]).unwrap();
        let rep = solve_bae_newton(&seed, 1e-13, 50).unwrap();
        assert!((rep.state.roots[0] - c(0.5, 0.0)).norm() < 1e-10);
        assert!(rep.literal_residual.unwrap() < 1e-12);
        // seeding at the exact root converges immediately
        let exact_seed = BetheState::new(4, vec![c(0.5, 0.0)]).unwrap();
        let rep2 = solve_bae_newton(&exact_seed, 1e-12, 5).unwrap();
        assert!(rep2.iterations <= 2);
    }

    #[test]
    fn newton_jacobian_matches_finite_differences() {
        let roots = vec![c(0.4, 0.1), c(-0.2, -0.3), c(0.9, 0.0)];
        let n_sites = 6;
        let jac = poly_jacobian(&roots, n_sites);
        let eps = 1e-6;
        for j in 0..roots.len() {
            let mut rp = roots.clone();
            let mut rm = roots.clone();
            rp[j] += c(eps, 0.0);
            rm[j] -= c(eps, 0.0);
            let fp = poly_residual(&rp, n_sites);
            let fm = poly_residual(&rm, n_sites);
            for k in 0..roots.len() {
                let fd = (fp[k] - fm[k]) / (2.0 * eps);
                let an = jac[k * roots.len() + j];
                assert!(
                    (fd - an).norm() < 1e-5 * (1.0 + an.norm()),
                    "d F_{k} / d u_{j}: fd {fd} vs analytic {an}"
                );
            }
        }
    }

    #[test]
    fn two_string_seed_converges_near_string() {
        // N=6 2-string at center 0: {±i/2} solves the polynomial form exactly
        let seed = BetheState::new(6, expand_string(2, 0.0)).unwrap();
        let rep = solve_bae_newton(&seed, 1e-12, 200).unwrap();
        let ideal = expand_string(2, 0.0);
        for (got, want) in rep.state.roots.iter().zip(&ideal) {
            assert!((got - want).norm() < 0.1, "string deviation too large");
        }
    }

    #[test]
    fn energy_values() {
        let empty = BetheState::new(4, vec![]).unwrap();
        assert_eq!(energy_from_roots(&empty, 1.5).unwrap(), -6.0);
        let st = BetheState::new(4, vec![c(0.5, 0.0)]).unwrap();
        assert!((energy_from_roots(&st, 1.0).unwrap() + 2.0).abs() < 1e-14);
        // singular pair {±i/2} is rejected
        let sing = BetheState::new(6, vec![c(0.0, 0.5), c(0.0, -0.5)]).unwrap();
        assert!(matches!(
            energy_from_roots(&sing, 1.0),
            Err(BetheError::SingularEnergy(_))
        ));
    }

    #[test]
    fn string_expansion() {
        assert_eq!(expand_string(1, 0.7), vec![c(0.7, 0.0)]);
        assert_eq!(expand_string(2, 0.0), vec![c(0.0, 0.5), c(0.0, -0.5)]);
        assert_eq!(
            expand_string(3, 1.0),
            vec![c(1.0, 1.0), c(1.0, 0.0), c(1.0, -1.0)]
        );
    }

    #[test]
    fn scattering_amplitude_properties() {
        // |E_{ml}(u)| = 1 on the real line
        assert!((scattering_e(2, 3, 0.7).norm() - 1.0).abs() < 1e-12);
        assert!((scattering_e(4, 4, -1.3).norm() - 1.0).abs() < 1e-12);
        // E(u) E(-u) = 1 since e(-u) = e(u)^{-1}
        let p = scattering_e(2, 3, 0.9) * scattering_e(2, 3, -0.9);
        assert!((p - c(1.0, 0.0)).norm() < 1e-12);
        // m = l = 1 branch: e(u/2) e^{-1}(u)
        let u = 0.37;
        let expect = e_factor(c(u / 2.0, 0.0)) / e_factor(c(u, 0.0));
        assert!((scattering_e(1, 1, u) - expect).norm() < 1e-14);
    }

    #[test]
    fn theta_properties() {
        assert_eq!(theta(0.0), 0.0);
        assert!((theta(1e6) - std::f64::consts::PI).abs() < 1e-5);
        for u in [-1.5, -0.3, 0.2, 2.0] {
            assert!((theta(u) + theta(-u)).abs() < 1e-15);
            assert!((big_theta(2, 3, u) + big_theta(2, 3, -u)).abs() < 1e-13);
            assert!((big_theta(2, 3, u) - big_theta(3, 2, u)).abs() < 1e-13);
            // Θ_11(u) = θ(u/2) − θ(u)
            assert!((big_theta(1, 1, u) - (theta(u / 2.0) - theta(u))).abs() < 1e-14);
        }
    }

    #[test]
    fn log_bae_single_string_at_origin() {
        let cfg = StringConfig {
            n_sites: 4,
            parts: vec![StringPart {
                length: 1,
                centers: vec![0.0],
            }],
        };
        let r = log_bae_residual(&cfg, &[vec![0.0]]).unwrap();
        assert!(r[0].abs() < 1e-15);
        assert!(log_bae_residual(&cfg, &[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn log_bae_solved_states_have_half_integer_quantum_numbers() {
        // N=4, n=1: u = 1/2 carries I = 1
        let cfg = StringConfig {
            n_sites: 4,
            parts: vec![StringPart {
                length: 1,
                centers: vec![0.5],
            }],
        };
        let i = infer_quantum_numbers(&cfg);
        assert_eq!(i[0][0], 1.0);
        assert!(log_bae_residual(&cfg, &i).unwrap()[0].abs() < 1e-10);

        // N=6, n=2: Newton-solved symmetric pair of 1-strings
        let seed = BetheState::new(6, vec![c(0.9, 0.0), c(-0.9, 0.0)]).unwrap();
        let rep = solve_bae_newton(&seed, 1e-13, 100).unwrap();
        let centers: Vec<f64> = rep.state.roots.iter().map(|r| r.re).collect();
        let cfg2 = StringConfig {
            n_sites: 6,
            parts: vec![StringPart {
                length: 1,
                centers,
            }],
        };
        let i2 = infer_quantum_numbers(&cfg2);
        // half-integers, and the residual against them vanishes
        for &q in &i2[0] {
            assert!((2.0 * q - (2.0 * q).round()).abs() < 1e-9);
        }
        let res = log_bae_residual(&cfg2, &i2).unwrap();
        for r in res {
            assert!(r.abs() < 1e-10, "counting residual {r}");
        }
        assert!((i2[0][0].abs() - 1.5).abs() < 1e-9);
    }

    #[test]
    fn log_bae_jacobian_matches_finite_differences() {
        let cfg = StringConfig {
            n_sites: 6,
            parts: vec![
                StringPart {
                    length: 1,
                    centers: vec![0.45, -0.31],
                },
                StringPart {
                    length: 2,
                    centers: vec![0.12],
                },
            ],
        };
        let qn: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![0.0]];
        let jac = log_bae_jacobian(&cfg);
        let dim = 3;
        let eps = 1e-6;
        let mut flat_idx = 0;
        for (pi, part) in cfg.parts.iter().enumerate() {
            for ci in 0..part.centers.len() {
                let mut cp = cfg.clone();
                let mut cm = cfg.clone();
                cp.parts[pi].centers[ci] += eps;
                cm.parts[pi].centers[ci] -= eps;
                let rp = log_bae_residual(&cp, &qn).unwrap();
                let rm = log_bae_residual(&cm, &qn).unwrap();
                for row in 0..dim {
                    let fd = (rp[row] - rm[row]) / (2.0 * eps);
                    let an = jac[row * dim + flat_idx];
                    assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()));
                }
                flat_idx += 1;
            }
        }
    }

    #[test]
    fn dvf_pole_free_residue_cancels_for_solved_state() {
        // contour residue of the DVF at u = u1 - i/2 for the solved N=4 root;
        // a perturbed root leaves a visible residue at its own pole
        let check = |root: f64| -> f64 {
            let st = BetheState::new(4, vec![c(root, 0.0)]).unwrap();
            let pole = c(root, -0.5);
            let radius = 1e-3;
            let steps = 64;
            let mut acc = c(0.0, 0.0);
            for s in 0..steps {
                let phi = 2.0 * std::f64::consts::PI * s as f64 / steps as f64;
                let z = pole + radius * c(phi.cos(), phi.sin());
                acc += dvf_eigenvalue(z, &st).unwrap() * (z - pole);
            }
            (acc / steps as f64).norm()
        };
        assert!(check(0.5) < 1e-8, "solved-state residue {}", check(0.5));
        assert!(check(0.55) > 1e-4, "perturbed residue {}", check(0.55));
    }

    #[test]
    fn conjugation_symmetry_of_solutions() {
        // if {u_j} solves the BAE then so does {conj(u_j)}
        let seed = BetheState::new(6, expand_string(2, 0.3)).unwrap();
        if let Ok(rep) = solve_bae_newton(&seed, 1e-11, 200) {
            let conj: Vec<Complex64> = rep.state.roots.iter().map(|r| r.conj()).collect();
            let (res, _) = scaled_residual_norm(&conj, 6);
            assert!(res < 1e-9, "conjugated residual {res}");
        }
    }

    #[test]
    fn dvf_matches_transfer_spectrum_n4() {
        // every solved state in sectors n=0,1 matches an eigenvalue of T(u)
        // (normalization i^N) and of H
        let n_sites = 4;
        let u0 = 0.3;
        let t = algebra::build_transfer_matrix(u0, n_sites).unwrap();
        let wt = lapack::eig_general_complex(t.dim(), t.as_slice().to_vec()).unwrap();
        let spec = exact::spectrum_cached(n_sites, 1.0).unwrap();
        let i_n = Complex64::new(0.0, 1.0).powu(n_sites as u32);
        let states = [
            BetheState::new(n_sites, vec![]).unwrap(),
            BetheState::new(n_sites, vec![c(0.5, 0.0)]).unwrap(),
            BetheState::new(n_sites, vec![c(0.0, 0.0)]).unwrap(),
            BetheState::new(n_sites, vec![c(-0.5, 0.0)]).unwrap(),
        ];
        for st in &states {
            let lam = i_n * dvf_eigenvalue(c(u0, 0.0), st).unwrap();
            let dmin = wt.iter().map(|w| (w - lam).norm()).fold(f64::MAX, f64::min);
            assert!(dmin < 1e-8, "transfer-spectrum distance {dmin}");
            let e = energy_from_roots(st, 1.0).unwrap();
            let dh = spec
                .eigenvalues
                .iter()
                .map(|&w| (w - e).abs())
                .fold(f64::MAX, f64::min);
            assert!(dh < 1e-8, "Hamiltonian-spectrum distance {dh}");
        }
    }

    #[test]
    fn energy_equals_dvf_log_derivative() {
        // E = J/i d/du ln(i^N dvf)|_0 by central differences (i^N drops out)
        let st = BetheState::new(4, vec![c(0.5, 0.0)]).unwrap();
        let h = 1e-4;
        let lp = dvf_eigenvalue(c(h, 0.0), &st).unwrap().ln();
        let lm = dvf_eigenvalue(c(-h, 0.0), &st).unwrap().ln();
        let deriv = (lp - lm) / (2.0 * h);
        let e = (deriv / I).re;
        assert!((e - energy_from_roots(&st, 1.0).unwrap()).abs() < 1e-6);
    }
}

#[cfg(test)]
mod newton_debug {
    use super::*;
    #[test]
    fn dbg_step() {
        let roots = vec![Complex64::new(0.9, 0.0), Complex64::new(-0.9, 0.0)];
        let f = poly_residual(&roots, 6);
        println!("F = {:?}", f);
        let jac = poly_jacobian(&roots, 6);
        println!("J = {:?}", jac);
        let step = solve_dense(jac.clone(), f.clone()).unwrap();
        println!("step = {:?}", step);
        // fd jacobian
        let eps = 1e-7;
        for j in 0..2 {
            let mut rp = roots.clone(); rp[j] += Complex64::new(eps, 0.0);
            let mut rm = roots.clone(); rm[j] -= Complex64::new(eps, 0.0);
            let fp = poly_residual(&rp, 6);
            let fm = poly_residual(&rm, 6);
            for k in 0..2 {
                println!("fd[{k}][{j}] = {:?}  an = {:?}", (fp[k]-fm[k])/(2.0*eps), jac[k*2+j]);
            }
        }
        let trial: Vec<Complex64> = roots.iter().zip(&step).map(|(&r,&s)| r - s).collect();
        println!("trial = {:?} res {:?}", trial, scaled_residual_norm(&trial, 6).0);
        println!("res0 {:?}", scaled_residual_norm(&roots, 6).0);
    }
}
