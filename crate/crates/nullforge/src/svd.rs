//! One-sided Jacobi singular value decomposition for small dense matrices.
//!
//! Columns of the working copy are rotated pairwise until mutually orthogonal;
//! at convergence the column norms are the singular values and the accumulated
//! rotations form the right singular vectors. Unlike the `sqrt(eig(A^T A))`
//! route, small singular values come out accurate to machine roundoff relative
//! to `sigma_max`, which is what a 1e-10 rank threshold needs.

/// Right singular vectors and singular values of a real matrix.
pub struct Svd {
    /// Singular values, ascending.
    pub sigma: Vec<f64>,
    // Right singular vectors, one per sigma, each of length `cols`.
    vectors: Vec<Vec<f64>>,
}

impl Svd {
    /// Right singular vector belonging to `sigma[k]`.
    pub fn right_vector(&self, k: usize) -> Vec<f64> {
        self.vectors[k].clone()
    }
}

const MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD of a `rows x cols` row-major matrix. Works for any
/// shape; zero columns simply stay zero and their right vectors span the
/// kernel directions accumulated in V.
pub fn jacobi(rows: usize, cols: usize, data: &[f64]) -> Svd {
    assert_eq!(data.len(), rows * cols);
    // Column-major working copy of A and of V = I.
    let mut a: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let tol = 1e-14;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = col_products(&a[p], &a[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[i].partial_cmp(&norms[j]).unwrap());
    let sigma = order.iter().map(|&k| norms[k]).collect();
    let vectors = order.iter().map(|&k| v[k].clone()).collect();
    Svd { sigma, vectors }
}

fn col_products(p: &[f64], q: &[f64]) -> (f64, f64, f64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = 0.0;
    for (x, y) in p.iter().zip(q) {
        alpha += x * x;
        beta += y * y;
        gamma += x * y;
    }
    (alpha, beta, gamma)
}

fn rotate(m: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = m.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = c * *x - s * *y;
        let xq = s * *x + c * *y;
        *x = xp;
        *y = xq;
    }
}
