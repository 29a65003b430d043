//! Thin FFI over the system LAPACK general eigensolvers (dgeev/zgeev).
//!
//! Only eigenvalues are requested. Inputs are row-major; since the spectrum
//! of a matrix equals the spectrum of its transpose, buffers are handed to
//! LAPACK as-is without conversion to column-major.

use num_complex::Complex64;
use std::os::raw::c_int;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigError {
    #[error("LAPACK {routine} failed with info = {info}")]
    LapackInfo { routine: &'static str, info: i32 },
    #[error("matrix buffer length {len} does not match dimension {n}")]
    Shape { len: usize, n: usize },
}

extern "C" {
    fn dgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const c_int,
        a: *mut f64,
        lda: *const c_int,
        wr: *mut f64,
        wi: *mut f64,
        vl: *mut f64,
        ldvl: *const c_int,
        vr: *mut f64,
        ldvr: *const c_int,
        work: *mut f64,
        lwork: *const c_int,
        info: *mut c_int,
    );
    fn zgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const c_int,
        a: *mut Complex64,
        lda: *const c_int,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const c_int,
        vr: *mut Complex64,
        ldvr: *const c_int,
        work: *mut Complex64,
        lwork: *const c_int,
        rwork: *mut f64,
        info: *mut c_int,
    );
}

/// Eigenvalues of a general real `n×n` matrix. Consumes the buffer
/// (LAPACK overwrites it).
pub fn eig_general_real(n: usize, mut a: Vec<f64>) -> Result<Vec<Complex64>, EigError> {
    if a.len() != n * n {
        return Err(EigError::Shape { len: a.len(), n });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let nn = n as c_int;
    let mut wr = vec![0.0f64; n];
    let mut wi = vec![0.0f64; n];
    let mut info: c_int = 0;
    // workspace query
    let mut wkopt = [0.0f64];
    unsafe {
        dgeev_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            std::ptr::null_mut(),
            &nn,
            std::ptr::null_mut(),
            &nn,
            wkopt.as_mut_ptr(),
            &(-1),
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigError::LapackInfo {
            routine: "dgeev (query)",
            info,
        });
    }
    let lwork = wkopt[0] as c_int;
    let mut work = vec![0.0f64; lwork as usize];
    unsafe {
        dgeev_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            std::ptr::null_mut(),
            &nn,
            std::ptr::null_mut(),
            &nn,
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigError::LapackInfo {
            routine: "dgeev",
            info,
        });
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Eigenvalues of a general complex `n×n` matrix. Consumes the buffer.
pub fn eig_general_complex(n: usize, mut a: Vec<Complex64>) -> Result<Vec<Complex64>, EigError> {
    if a.len() != n * n {
        return Err(EigError::Shape { len: a.len(), n });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let nn = n as c_int;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info: c_int = 0;
    let mut wkopt = [Complex64::new(0.0, 0.0)];
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &nn,
            std::ptr::null_mut(),
            &nn,
            wkopt.as_mut_ptr(),
            &(-1),
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigError::LapackInfo {
            routine: "zgeev (query)",
            info,
        });
    }
    let lwork = wkopt[0].re as c_int;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &nn,
            std::ptr::null_mut(),
            &nn,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigError::LapackInfo {
            routine: "zgeev",
            info,
        });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_triangular_eigenvalues() {
        // row-major upper triangular: eigenvalues are the diagonal
        let a = vec![1.0, 5.0, -1.0, 0.0, 2.0, 4.0, 0.0, 0.0, 3.0];
        let mut w = eig_general_real(3, a).unwrap();
        w.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (got, want) in w.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn complex_diagonal_eigenvalues() {
        let mut a = vec![Complex64::new(0.0, 0.0); 4];
        a[0] = Complex64::new(0.0, 1.0);
        a[3] = Complex64::new(2.0, -1.0);
        let w = eig_general_complex(2, a).unwrap();
        let mut got: Vec<_> = w.iter().map(|z| (z.re, z.im)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((got[0].0 - 0.0).abs() < 1e-12 && (got[0].1 - 1.0).abs() < 1e-12);
        assert!((got[1].0 - 2.0).abs() < 1e-12 && (got[1].1 + 1.0).abs() < 1e-12);
    }
}
