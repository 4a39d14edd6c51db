//! Cyclic Jacobi eigenvalue routine for the small symmetric and Hermitian
//! matrices that occur here (at most 8×8 after real embedding).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::ComplexMatrix;

const SWEEP_LIMIT: usize = 64;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues of a real symmetric `n×n` matrix given row-major, sorted ascending.
pub fn symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    assert_eq!(matrix.len(), n * n);
    let mut a: Vec<f64> = matrix.to_vec();
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);

    for _ in 0..SWEEP_LIMIT {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    eig
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// `H = X + iY` is embedded as the real symmetric `[[X, -Y], [Y, X]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let big = 2 * n;
    let mut real = alloc::vec![0.0; big * big];
    for i in 0..n {
        for j in 0..n {
            // Symmetrize so tiny Hermitian defects do not bias the result.
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            real[i * big + j] = z.re;
            real[(i + n) * big + (j + n)] = z.re;
            real[i * big + (j + n)] = -z.im;
            real[(i + n) * big + j] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(&real, big);
    doubled.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    hermitian_eigenvalues(m)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::pauli;
    use num_complex::Complex64;

    #[test]
    fn diagonal_spectrum() {
        let eig = symmetric_eigenvalues(&[3.0, 0.0, 0.0, -1.0], 2);
        assert_eq!(eig, [-1.0, 3.0]);
    }

    #[test]
    fn real_symmetric_3x3() {
        // [[2,1,0],[1,2,1],[0,1,2]] has eigenvalues 2-√2, 2, 2+√2
        let eig = symmetric_eigenvalues(&[2., 1., 0., 1., 2., 1., 0., 1., 2.], 3);
        let s = 2.0_f64.sqrt();
        for (got, want) in eig.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn pauli_y_spectrum() {
        let eig = hermitian_eigenvalues(&pauli::y());
        assert!((eig[0] + 1.0).abs() < 1e-12);
        assert!((eig[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_4x4() {
        // σy⊗σy has eigenvalues {-1,-1,1,1}; shift by 0.5·I⊗σz for a nondegenerate check
        let yy = pauli::y().tensor(&pauli::y());
        let eig = hermitian_eigenvalues(&yy);
        for (got, want) in eig.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let m = &yy + &pauli::id().tensor(&pauli::z()).scale(Complex64::new(0.5, 0.0));
        let trace: f64 = hermitian_eigenvalues(&m).iter().sum();
        assert!(trace.abs() < 1e-12);
    }
}
