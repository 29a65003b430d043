//! Integral kernels and Fourier-side operator algebra: the Lorentzian family
//! `f_m`, the TBA kernel `K`, the free-energy kernel `R`, the Takahashi
//! operators `A_{lm}`, the `B_{ml}` matrix and its banded inverse, plus grid
//! discretization and tail-aware convolution.
//!
//! Fourier convention: `F[g](k) = ∫ g(u) e^{−iku} du`, so `F[f_m](k) =
//! e^{−m|k|/2}`, `F[K](k) = 1/(2 cosh(k/2))` and `F[R](k) =
//! 1/(2 cosh(k/2) − 1)`.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("grid points {0} is not a power of two")]
    PointsNotPowerOfTwo(usize),
    #[error("grid half-extent must be positive, got {0}")]
    NonPositiveExtent(f64),
    #[error("sampled function length {len} does not match grid size {points}")]
    LengthMismatch { len: usize, points: usize },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("tail deviation {dev} at the grid edge exceeds the tolerance {tol}")]
    TailViolation { dev: f64, tol: f64 },
}

/// Uniform symmetric rapidity grid: nodes `u_i = −L + i·h`, `h = 2L/M_g`.
///
/// The grid contains `u = 0` exactly and is symmetric up to the one missing
/// node at `+L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    half_extent: f64,
    points: usize,
}

impl Grid {
    pub fn new(half_extent: f64, points: usize) -> Result<Self, KernelError> {
        if !points.is_power_of_two() {
            return Err(KernelError::PointsNotPowerOfTwo(points));
        }
        if half_extent <= 0.0 {
            return Err(KernelError::NonPositiveExtent(half_extent));
        }
        Ok(Self {
            half_extent,
            points,
        })
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.points as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.node(i))
    }
}

/// Real function sampled on a [`Grid`] with an explicit asymptotic constant
/// for tail handling.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub tail_constant: f64,
}

impl SampledFunction {
    pub fn from_fn(grid: Grid, tail_constant: f64, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.nodes().map(f).collect(),
            tail_constant,
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            tail_constant: c,
        }
    }

    /// `h·Σ values` — the plain rectangle rule, exponentially accurate for
    /// smooth integrands decaying inside the grid.
    pub fn integrate_decaying(&self) -> f64 {
        self.grid.spacing() * self.values.iter().sum::<f64>()
    }

    /// Largest deviation of the two edge samples from `tail_constant`.
    pub fn edge_deviation(&self) -> f64 {
        let first = (self.values[0] - self.tail_constant).abs();
        let last = (self.values[self.values.len() - 1] - self.tail_constant).abs();
        first.max(last)
    }

    pub fn check_tail(&self, tol: f64) -> Result<(), KernelError> {
        let dev = self.edge_deviation();
        if dev > tol {
            return Err(KernelError::TailViolation { dev, tol });
        }
        Ok(())
    }
}

/// Lorentzian string kernel `f_m(u) = m / (2π (u² + (m/2)²))`; even, positive,
/// unit integral.
pub fn f_m_kernel(m: usize, u: f64) -> f64 {
    let mf = m as f64;
    mf / (2.0 * PI * (u * u + 0.25 * mf * mf))
}

/// TBA kernel `K(u) = 1/(2 cosh πu)`; integral 1/2.
pub fn k_kernel(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() > 700.0 {
        return 0.0;
    }
    0.5 / x.cosh()
}

/// Free-energy kernel `R(u) = 2 sinh(4πu/3) / (√3 sinh 2πu)`, with the
/// removable singularity at `u = 0` filled by its limit `4/(3√3)`; integral 1.
pub fn r_kernel(u: f64) -> f64 {
    if u.abs() < 1e-9 {
        return 4.0 / (3.0 * 3.0f64.sqrt());
    }
    if u.abs() > 100.0 {
        // sinh ratio ~ e^{-2π|u|/3}
        return 2.0 / 3.0f64.sqrt() * (-2.0 * PI * u.abs() / 3.0).exp();
    }
    2.0 * (4.0 * PI * u / 3.0).sinh() / (3.0f64.sqrt() * (2.0 * PI * u).sinh())
}

/// `F[f_m](k) = e^{−m|k|/2}`
pub fn fourier_f(m: usize, k: f64) -> f64 {
    (-0.5 * m as f64 * k.abs()).exp()
}

/// `F[K](k) = 1/(2 cosh(k/2))`
pub fn fourier_k(k: f64) -> f64 {
    0.5 / (0.5 * k).cosh()
}

/// `F[R](k) = 1/(2 cosh(k/2) − 1)`
pub fn fourier_r(k: f64) -> f64 {
    1.0 / (2.0 * (0.5 * k).cosh() - 1.0)
}

/// `B_{ml}(k) = (e^{−|l−m||k|/2} − e^{−(l+m)|k|/2}) coth(|k|/2)`, with the
/// analytic `k → 0` limit `2·min(l, m)`.
pub fn fourier_b(m: usize, l: usize, k: f64) -> f64 {
    let ka = k.abs();
    if ka < 1e-8 {
        return 2.0 * m.min(l) as f64;
    }
    let d = m.abs_diff(l) as f64;
    let s = (m + l) as f64;
    ((-0.5 * d * ka).exp() - (-0.5 * s * ka).exp()) * (0.5 * ka).cosh() / (0.5 * ka).sinh()
}

/// `F[A_{ml}](k) = (1 − 1/(2 cosh(k/2))) B_{ml}(k)`; symmetric in `(m, l)`,
/// value `min(l, m)` at `k = 0`.
pub fn fourier_a(m: usize, l: usize, k: f64) -> f64 {
    (1.0 - fourier_k(k)) * fourier_b(m, l, k)
}

/// One row entry of the banded inverse `B^{-1}`: the entry at `(n, m)` is
/// `delta + s_coeff / (2 cosh(k/2))` with the weight kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BInverseEntry {
    pub delta: f64,
    pub s_coeff: f64,
}

/// `B^{-1}_{nm}(k) = δ_{nm} − 1/(2cosh(k/2)) · {δ_{n,m+1} (m = 1);
/// δ_{n,m+1} + δ_{n,m−1} (m ≥ 2)}`.
pub fn b_inverse_entry(n: usize, m: usize) -> BInverseEntry {
    assert!(n >= 1 && m >= 1);
    let delta = if n == m { 1.0 } else { 0.0 };
    let neighbor = if m == 1 {
        n == m + 1
    } else {
        n == m + 1 || n == m - 1
    };
    BInverseEntry {
        delta,
        s_coeff: if neighbor { -1.0 } else { 0.0 },
    }
}

/// Evaluate `B^{-1}_{nm}(k)` numerically.
pub fn b_inverse_at(n: usize, m: usize, k: f64) -> f64 {
    let e = b_inverse_entry(n, m);
    e.delta + e.s_coeff * fourier_k(k)
}

/// Columns with nonzero entries in row `n` of `B^{-1}`.
pub fn b_inverse_row(n: usize) -> Vec<(usize, BInverseEntry)> {
    assert!(n >= 1);
    let mut cols = vec![n];
    if n >= 2 {
        cols.push(n - 1);
        cols.push(n + 1);
    } else {
        cols.push(n + 1);
    }
    cols.sort_unstable();
    cols.dedup();
    cols.into_iter()
        .map(|m| (m, b_inverse_entry(n, m)))
        .filter(|(_, e)| e.delta != 0.0 || e.s_coeff != 0.0)
        .collect()
}

/// Convolution kernels supported by [`Convolver`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `K(u) = 1/(2 cosh πu)`
    K,
    /// `f_j(u)`
    Lorentzian(usize),
}

impl Kernel {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Kernel::K => k_kernel(u),
            Kernel::Lorentzian(j) => f_m_kernel(*j, u),
        }
    }

    /// Exact total integral, used for the analytic constant response.
    pub fn integral(&self) -> f64 {
        match self {
            Kernel::K => 0.5,
            Kernel::Lorentzian(_) => 1.0,
        }
    }
}

/// FFT-backed convolution engine on a fixed grid, with cached kernel spectra.
///
/// The input is split as `g = tail_constant + (g − tail_constant)`; the
/// decaying part is convolved linearly (zero-padding to `2·M_g` suppresses
/// the periodic wraparound) and the constant responds analytically through
/// the kernel integral.
pub struct Convolver {
    grid: Grid,
    padded: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    spectra: Mutex<HashMap<Kernel, Arc<Vec<Complex64>>>>,
}

impl Convolver {
    pub fn new(grid: Grid) -> Self {
        let padded = 2 * grid.len();
        let mut planner = FftPlanner::new();
        Self {
            grid,
            padded,
            fft: planner.plan_fft_forward(padded),
            ifft: planner.plan_fft_inverse(padded),
            spectra: Mutex::new(HashMap::new()),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn kernel_spectrum(&self, kernel: Kernel) -> Arc<Vec<Complex64>> {
        if let Some(s) = self.spectra.lock().unwrap().get(&kernel) {
            return Arc::clone(s);
        }
        let h = self.grid.spacing();
        let n = self.grid.len();
        // kernel sampled on the difference grid d ∈ [−M_g, M_g)·h, stored mod 2M_g
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded];
        for (idx, slot) in buf.iter_mut().enumerate() {
            let d = if idx < n { idx as i64 } else { idx as i64 - self.padded as i64 };
            *slot = Complex64::new(kernel.eval(d as f64 * h) * h, 0.0);
        }
        self.fft.process(&mut buf);
        let arc = Arc::new(buf);
        self.spectra
            .lock()
            .unwrap()
            .entry(kernel)
            .or_insert_with(|| Arc::clone(&arc));
        arc
    }

    /// `(kernel * g)(u)` on the grid of `g`.
    pub fn convolve(&self, kernel: Kernel, g: &SampledFunction) -> Result<SampledFunction, KernelError> {
        if g.grid != self.grid {
            return Err(KernelError::GridMismatch);
        }
        if g.values.len() != self.grid.len() {
            return Err(KernelError::LengthMismatch {
                len: g.values.len(),
                points: self.grid.len(),
            });
        }
        let spectrum = self.kernel_spectrum(kernel);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.padded];
        for (slot, &v) in buf.iter_mut().zip(&g.values) {
            *slot = Complex64::new(v - g.tail_constant, 0.0);
        }
        self.fft.process(&mut buf);
        for (b, s) in buf.iter_mut().zip(spectrum.iter()) {
            *b *= s;
        }
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.padded as f64;
        let base = g.tail_constant * kernel.integral();
        let values: Vec<f64> = buf[..self.grid.len()]
            .iter()
            .map(|z| z.re * scale + base)
            .collect();
        Ok(SampledFunction {
            grid: self.grid,
            values,
            tail_constant: base,
        })
    }
}

/// Coefficients of the Takahashi operator `A_{lm} = Σ_j c_j [j]` with
/// `[0] = identity`: `(j, c_j)` pairs.
pub fn takahashi_a_coeffs(m: usize, l: usize) -> Vec<(usize, i32)> {
    let a = m.abs_diff(l);
    let b = m + l;
    let mut out = vec![(a, 1)];
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
    out
}

/// Real-space action of `A_{ml}` on `g`: the signed sum of `[j]`
/// convolutions, with `[0] g = g`.
pub fn apply_a(
    conv: &Convolver,
    m: usize,
    l: usize,
    g: &SampledFunction,
) -> Result<SampledFunction, KernelError> {
    let mut acc = vec![0.0; g.values.len()];
    let mut tail = 0.0;
    for (j, c) in takahashi_a_coeffs(m, l) {
        let cf = c as f64;
        if j == 0 {
            for (a, &v) in acc.iter_mut().zip(&g.values) {
                *a += cf * v;
            }
            tail += cf * g.tail_constant;
        } else {
            let piece = conv.convolve(Kernel::Lorentzian(j), g)?;
            for (a, &v) in acc.iter_mut().zip(&piece.values) {
                *a += cf * v;
            }
            tail += cf * piece.tail_constant;
        }
    }
    Ok(SampledFunction {
        grid: g.grid,
        values: acc,
        tail_constant: tail,
    })
}
