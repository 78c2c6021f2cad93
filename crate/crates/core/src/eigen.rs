//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Unconditionally stable at the matrix sizes used here (n ≤ 24) and fully
//! deterministic: fixed sweep order, ascending eigenvalue sort with a
//! lexicographic tie-break, and a fixed sign convention for eigenvectors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative off-diagonal mass at which a sweep is declared converged.
const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps; typical inputs converge in well under ten.
const MAX_SWEEPS: usize = 100;
/// Relative tolerance of the input symmetry check.
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigen-decomposition of a real symmetric matrix.
///
/// Returns eigenvalues in ascending order and the orthonormal eigenvector
/// matrix with eigenvector k in column k. The largest-magnitude component of
/// each eigenvector is made positive so the decomposition is unique up to
/// degeneracies.
pub fn symmetric_eigen(matrix: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = matrix.nrows();
    if !matrix.is_square() {
        return Err(Error::Structural(format!(
            "eigensolver needs a square matrix, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    let scale = matrix.amax();
    if !scale.is_finite() {
        return Err(Error::Structural("matrix has non-finite entries".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE)
            {
                return Err(Error::Structural(format!(
                    "matrix asymmetric at ({i}, {j}): {} vs {}",
                    matrix[(i, j)],
                    matrix[(j, i)]
                )));
            }
        }
    }

    let mut a = matrix.clone();
    let mut vecs = DMatrix::<f64>::identity(n, n);
    let norm = matrix.norm(); // Frobenius
    let threshold = OFF_DIAGONAL_TOL * norm;

    let mut converged = norm == 0.0 || n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // classic two-sided rotation (Golub & Van Loan §8.5)
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(p, k)] = a[(k, p)];
                        a[(k, q)] = s * akp + c * akq;
                        a[(q, k)] = a[(k, q)];
                    }
                }
                for k in 0..n {
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp - s * vkq;
                    vecs[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        // final check after the last sweep
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() > threshold {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                // ties broken by the first differing eigenvector component
                for k in 0..n {
                    match vecs[(k, i)].partial_cmp(&vecs[(k, j)]) {
                        Some(std::cmp::Ordering::Equal) | None => continue,
                        Some(ord) => return ord,
                    }
                }
                std::cmp::Ordering::Equal
            })
    });

    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut sorted = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &vecs.column(src));
        // sign convention: largest-magnitude component positive
        let mut arg = 0;
        let mut best = -1.0;
        for k in 0..n {
            let mag = sorted[(k, dst)].abs();
            if mag > best {
                best = mag;
                arg = k;
            }
        }
        if sorted[(arg, dst)] < 0.0 {
            for k in 0..n {
                sorted[(k, dst)] = -sorted[(k, dst)];
            }
        }
    }
    Ok((values, sorted))
}
