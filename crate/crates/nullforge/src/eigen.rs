//! Eigenvalue routines: implicit-shift QL for symmetric tridiagonal matrices,
//! Householder reduction for dense symmetric matrices, and Hessenberg + shifted
//! QR for the general real case. The dense paths are derived from the Algol
//! procedures tred2, tql2, orthes and hqr2 (Bowdler, Martin, Reinsch,
//! Wilkinson) via their EISPACK / JAMA descendants, with eigenvector
//! accumulation stripped out.

use num_complex::Complex64;

use crate::matrix::{MatrixError, Spectrum, SpectrumKind};

/// All eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal, ascending. `offdiag[i]` couples `diag[i]` and `diag[i+1]`.
pub fn symmetric_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<Spectrum, MatrixError> {
    if diag.is_empty() || offdiag.len() != diag.len() - 1 {
        return Err(MatrixError::TridiagonalShape { diag: diag.len(), offdiag: offdiag.len() });
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    tql(&mut d, &mut e);
    Ok(Spectrum::new(d, SpectrumKind::Eigen))
}

/// Implicit-shift QL iteration, values only. `e` has a trailing zero sentinel.
fn tql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Find a negligible off-diagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            debug_assert!(iter <= 60, "tridiagonal QL failed to converge");
            // Wilkinson shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Eigenvalues of a dense symmetric matrix: Householder tridiagonalization
/// followed by the QL iteration, ascending.
pub fn symmetric_dense_eigenvalues(n: usize, data: &[f64]) -> Vec<f64> {
    assert_eq!(data.len(), n * n);
    let (mut d, mut e) = householder_tridiagonalize(n, data);
    e.push(0.0);
    tql(&mut d, &mut e);
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

/// Reduces a symmetric matrix to tridiagonal form, returning (diagonal,
/// off-diagonal) with `e[i]` coupling `d[i]` and `d[i+1]`.
pub fn householder_tridiagonalize(n: usize, data: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(data.len(), n * n);
    let mut v = data.to_vec();
    let mut d: Vec<f64> = (0..n).map(|j| v[(n - 1) * n + j]).collect();
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for item in d.iter().take(i) {
            scale += item.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for item in d.iter_mut().take(i) {
                *item /= scale;
                h += *item * *item;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for item in e.iter_mut().take(i) {
                *item = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in (j + 1)..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    for j in 0..n {
        d[j] = v[j * n + j];
    }
    // Shift so e[i] couples d[i] and d[i+1].
    let offdiag = e[1..].to_vec();
    (d, offdiag)
}

/// Eigenvalues of a general real square matrix: orthogonal Hessenberg
/// reduction followed by the shifted double QR iteration.
pub fn hessenberg_eigenvalues(n: usize, data: &[f64]) -> Vec<Complex64> {
    assert_eq!(data.len(), n * n);
    if n == 1 {
        return vec![Complex64::new(data[0], 0.0)];
    }
    let mut h = data.to_vec();
    orthes(n, &mut h);
    hqr(n, &mut h)
}

/// Householder reduction to upper Hessenberg form, in place, no accumulation.
fn orthes(n: usize, h: &mut [f64]) {
    let high = n - 1;
    let mut ort = vec![0.0; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += h[i * n + m - 1].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[i * n + m - 1] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * h[i * n + j];
            }
            f /= hh;
            for i in m..=high {
                h[i * n + j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * h[i * n + j];
            }
            f /= hh;
            for j in m..=high {
                h[i * n + j] -= f * ort[j];
            }
        }
        h[m * n + m - 1] = scale * g;
    }
}

/// Shifted double QR on an upper Hessenberg matrix, eigenvalues only.
fn hqr(nn: usize, h: &mut [f64]) -> Vec<Complex64> {
    let at = |i: usize, j: usize| i * nn + j;
    let mut d = vec![0.0; nn];
    let mut e = vec![0.0; nn];
    let low = 0isize;
    let eps = 2f64.powi(-52);
    let mut exshift = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[at(i, j)].abs();
        }
    }

    let mut n = nn as isize - 1;
    let mut iter = 0;
    while n >= low {
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > low {
            let ul = l as usize;
            let mut s = h[at(ul - 1, ul - 1)].abs() + h[at(ul, ul)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[at(ul, ul - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One real root found.
            let un = n as usize;
            h[at(un, un)] += exshift;
            d[un] = h[at(un, un)];
            e[un] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots from the trailing 2x2 block.
            let un = n as usize;
            let w = h[at(un, un - 1)] * h[at(un - 1, un)];
            p = (h[at(un - 1, un - 1)] - h[at(un, un)]) / 2.0;
            q = p * p + w;
            let mut z = q.abs().sqrt();
            h[at(un, un)] += exshift;
            h[at(un - 1, un - 1)] += exshift;
            let x = h[at(un, un)];
            if q >= 0.0 {
                // Real pair.
                z = if p >= 0.0 { p + z } else { p - z };
                d[un - 1] = x + z;
                d[un] = if z != 0.0 { x - w / z } else { d[un - 1] };
                e[un - 1] = 0.0;
                e[un] = 0.0;
                let xx = h[at(un, un - 1)];
                let mut s = xx.abs() + z.abs();
                p = xx / s;
                q = z / s;
                let rr = (p * p + q * q).sqrt();
                p /= rr;
                q /= rr;
                for j in (un - 1)..nn {
                    s = h[at(un - 1, j)];
                    h[at(un - 1, j)] = q * s + p * h[at(un, j)];
                    h[at(un, j)] = q * h[at(un, j)] - p * s;
                }
                for i in 0..=un {
                    s = h[at(i, un - 1)];
                    h[at(i, un - 1)] = q * s + p * h[at(i, un)];
                    h[at(i, un)] = q * h[at(i, un)] - p * s;
                }
            } else {
                // Complex conjugate pair.
                d[un - 1] = x + p;
                d[un] = x + p;
                e[un - 1] = z;
                e[un] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet: form a shift and run a double QR step.
            let un = n as usize;
            let mut x = h[at(un, un)];
            let mut y = 0.0;
            let mut w = 0.0;
            if l < n {
                y = h[at(un - 1, un - 1)];
                w = h[at(un, un - 1)] * h[at(un - 1, un)];
            }
            if iter == 10 {
                // Exceptional shift.
                exshift += x;
                for i in low..=n {
                    let ui = i as usize;
                    h[at(ui, ui)] -= x;
                }
                let s = h[at(un, un - 1)].abs() + h[at(un - 1, un - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                let mut s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        let ui = i as usize;
                        h[at(ui, ui)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            debug_assert!(iter <= 100, "QR iteration failed to converge");

            // Look for two consecutive small subdiagonal elements.
            let mut m = n - 2;
            while m >= l {
                let um = m as usize;
                let z = h[at(um, um)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[at(um + 1, um)] + h[at(um, um + 1)];
                q = h[at(um + 1, um + 1)] - z - rr - ss;
                r = h[at(um + 2, um + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[at(um, um - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[at(um - 1, um - 1)].abs() + z.abs() + h[at(um + 1, um + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=n {
                let ui = i as usize;
                h[at(ui, ui - 2)] = 0.0;
                if i > m + 2 {
                    h[at(ui, ui - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=n.
            for k in m..n {
                let uk = k as usize;
                let notlast = k != n - 1;
                let mut xscale = 1.0;
                if k != m {
                    p = h[at(uk, uk - 1)];
                    q = h[at(uk + 1, uk - 1)];
                    r = if notlast { h[at(uk + 2, uk - 1)] } else { 0.0 };
                    xscale = p.abs() + q.abs() + r.abs();
                    if xscale == 0.0 {
                        continue;
                    }
                    p /= xscale;
                    q /= xscale;
                    r /= xscale;
                }
                let mut s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[at(uk, uk - 1)] = -s * xscale;
                } else if l != m {
                    h[at(uk, uk - 1)] = -h[at(uk, uk - 1)];
                }
                p += s;
                let x = p / s;
                let y = q / s;
                let z = r / s;
                q /= p;
                r /= p;

                // Row modification.
                for j in uk..nn {
                    let mut pp = h[at(uk, j)] + q * h[at(uk + 1, j)];
                    if notlast {
                        pp += r * h[at(uk + 2, j)];
                        h[at(uk + 2, j)] -= pp * z;
                    }
                    h[at(uk, j)] -= pp * x;
                    h[at(uk + 1, j)] -= pp * y;
                }
                // Column modification.
                let top = (n as usize).min(uk + 3);
                for i in 0..=top {
                    let mut pp = x * h[at(i, uk)] + y * h[at(i, uk + 1)];
                    if notlast {
                        pp += z * h[at(i, uk + 2)];
                        h[at(i, uk + 2)] -= pp * r;
                    }
                    h[at(i, uk)] -= pp;
                    h[at(i, uk + 1)] -= pp * q;
                }
            }
        }
    }

    (0..nn).map(|k| Complex64::new(d[k], e[k])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_toeplitz_closed_form() {
        // Constant (d, e) tridiagonal: eigenvalues d + 2 e cos(k pi / (N + 1)).
        let n = 12;
        let (d, e) = (2.5, -1.25);
        let spec = symmetric_tridiagonal(&vec![d; n], &vec![e; n - 1]).unwrap();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| d + 2.0 * e * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in spec.values().iter().zip(&expect) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn one_by_one() {
        let spec = symmetric_tridiagonal(&[5.0], &[]).unwrap();
        assert_eq!(spec.values(), &[5.0]);
    }

    #[test]
    fn gram_tower_eigenvalues() {
        // The 6x6 Gram matrix of the 7x6 unit link chain: diagonal 2,
        // off-diagonal -1, eigenvalues 4 sin^2(k pi / 14).
        let n = 6;
        let spec = symmetric_tridiagonal(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, got) in spec.values().iter().enumerate() {
            let s = ((k + 1) as f64 * std::f64::consts::PI / 14.0).sin();
            assert!((got - 4.0 * s * s).abs() < 1e-9, "{got}");
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(symmetric_tridiagonal(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn dense_symmetric_matches_tridiagonal_route() {
        // Symmetric 4x4 with known structure, two routes must agree.
        let a = vec![
            4.0, 1.0, 0.5, 0.0,
            1.0, 3.0, 1.0, 0.5,
            0.5, 1.0, 2.0, 1.0,
            0.0, 0.5, 1.0, 1.0,
        ];
        let dense = symmetric_dense_eigenvalues(4, &a);
        let mut general: Vec<f64> = hessenberg_eigenvalues(4, &a).iter().map(|z| z.re).collect();
        general.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for z in hessenberg_eigenvalues(4, &a) {
            assert!(z.im.abs() < 1e-10);
        }
        for (x, y) in dense.iter().zip(&general) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn defective_triple_eigenvalue_converges() {
        // Companion matrix of (x-1)^3: a defective triple eigenvalue at 1.
        // Accuracy for defective roots is only O(eps^(1/3)); the point here is
        // convergence, not precision.
        let a = vec![3.0, -3.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let ev = hessenberg_eigenvalues(3, &a);
        for z in ev {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-4, "{z}");
        }
    }

    #[test]
    fn general_complex_pair() {
        // Companion-style matrix with roots 1, i, -i.
        let a = vec![
            1.0, -1.0, 1.0,
            1.0, 0.0, 0.0,
            0.0, 1.0, 0.0,
        ];
        let mut ev = hessenberg_eigenvalues(3, &a);
        ev.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
        assert!((ev[0].re).abs() < 1e-10 && (ev[0].im + 1.0).abs() < 1e-10);
        assert!((ev[1].re).abs() < 1e-10 && (ev[1].im - 1.0).abs() < 1e-10);
        assert!((ev[2].re - 1.0).abs() < 1e-10 && ev[2].im.abs() < 1e-10);
    }
}
