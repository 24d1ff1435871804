//! Tridiagonal (Thomas) solves used by the Helmholtz and implicit stepping
//! paths. Both matrices are strictly diagonally dominant, so no pivoting.

use num_complex::Complex64;

/// Solves the tridiagonal system with sub-diagonal `lo`, diagonal `di`,
/// super-diagonal `up` (each of length n; lo[0] and up[n-1] ignored).
/// Overwrites `rhs` with the solution.
pub fn solve_tridiag(lo: &[f64], di: &[Complex64], up: &[f64], rhs: &mut [Complex64]) {
    let n = di.len();
    debug_assert_eq!(lo.len(), n);
    debug_assert_eq!(up.len(), n);
    debug_assert_eq!(rhs.len(), n);
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    scratch[0] = up[0] / di[0];
    rhs[0] /= di[0];
    for i in 1..n {
        let denom = di[i] - scratch[i - 1] * lo[i];
        scratch[i] = up[i] / denom;
        rhs[i] = (rhs[i] - rhs[i - 1] * lo[i]) / denom;
    }
    for i in (0..n - 1).rev() {
        let t = rhs[i + 1];
        rhs[i] -= scratch[i] * t;
    }
}

/// Thomas solve for the Crank-Nicolson rows, whose off-diagonal entries are
/// purely imaginary: `lo` and `up` hold the imaginary parts.
pub fn solve_tridiag_imag(lo: &[f64], di: &[Complex64], up: &[f64], rhs: &mut [Complex64]) {
    let n = di.len();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    scratch[0] = Complex64::new(0.0, up[0]) / di[0];
    rhs[0] /= di[0];
    for i in 1..n {
        let li = Complex64::new(0.0, lo[i]);
        let denom = di[i] - scratch[i - 1] * li;
        scratch[i] = Complex64::new(0.0, up[i]) / denom;
        rhs[i] = (rhs[i] - rhs[i - 1] * li) / denom;
    }
    for i in (0..n - 1).rev() {
        let t = rhs[i + 1];
        rhs[i] -= scratch[i] * t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_solution() {
        let n = 64;
        let lo = vec![-1.0; n];
        let up = vec![-1.0; n];
        let di = vec![Complex64::new(4.0, 0.5); n];
        let x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
            .collect();
        // rhs = A x
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            rhs[i] = di[i] * x[i];
            if i > 0 {
                rhs[i] += lo[i] * x[i - 1];
            }
            if i < n - 1 {
                rhs[i] += up[i] * x[i + 1];
            }
        }
        solve_tridiag(&lo, &di, &up, &mut rhs);
        for i in 0..n {
            assert!((rhs[i] - x[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn imaginary_offdiagonal_solve() {
        let n = 48;
        let lo = vec![0.25; n];
        let up = vec![-0.5; n];
        let di = vec![Complex64::new(2.0, 1.0); n];
        let x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64).cos(), (2.0 + i as f64).sin()))
            .collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            rhs[i] = di[i] * x[i];
            if i > 0 {
                rhs[i] += Complex64::new(0.0, lo[i]) * x[i - 1];
            }
            if i < n - 1 {
                rhs[i] += Complex64::new(0.0, up[i]) * x[i + 1];
            }
        }
        solve_tridiag_imag(&lo, &di, &up, &mut rhs);
        for i in 0..n {
            assert!((rhs[i] - x[i]).norm() < 1e-12);
        }
    }
}
