//! Fixed-size dense matrices (`[[f64; N]; N]`, row-major) and the few
//! factorizations the crate needs.

// std, when linked into the graph, provides these as inherent methods
#[allow(unused_imports)]
use num_traits::Float;

pub type Mat<const N: usize> = [[f64; N]; N];

pub fn identity<const N: usize>() -> Mat<N> {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn transpose<const N: usize>(m: &Mat<N>) -> Mat<N> {
    let mut t = [[0.0; N]; N];
    for i in 0..N {
        for j in 0..N {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut c = [[0.0; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

pub fn trace<const N: usize>(m: &Mat<N>) -> f64 {
    (0..N).map(|i| m[i][i]).sum()
}

/// Largest entry of `|m - m^T|`.
pub fn asymmetry<const N: usize>(m: &Mat<N>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..N {
        for j in (i + 1)..N {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

/// Determinant; closed form for `N <= 3`, partial-pivot elimination otherwise.
pub fn det<const N: usize>(m: &Mat<N>) -> f64 {
    match N {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            let mut a = *m;
            let mut d = 1.0;
            for col in 0..N {
                let pivot = (col..N)
                    .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                    .unwrap_or(col);
                if a[pivot][col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    a.swap(pivot, col);
                    d = -d;
                }
                d *= a[col][col];
                for r in (col + 1)..N {
                    let f = a[r][col] / a[col][col];
                    for c in col..N {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
            d
        }
    }
}

/// Inverse by Gauss-Jordan elimination; `None` for (numerically) singular input.
pub fn inverse<const N: usize>(m: &Mat<N>) -> Option<Mat<N>> {
    let mut a = *m;
    let mut inv = identity::<N>();
    let scale = m.iter().flat_map(|r| r.iter()).fold(0.0_f64, |acc, v| acc.max(v.abs()));
    for col in 0..N {
        let pivot = (col..N).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() <= 1e-300 + 1e-15 * scale {
            return None;
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for c in 0..N {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..N {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..N {
                        a[r][c] -= f * a[col][c];
                        inv[r][c] -= f * inv[col][c];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues<const N: usize>(m: &Mat<N>) -> [f64; N] {
    let mut a = *m;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..N {
            for j in (i + 1)..N {
                off += a[i][j] * a[i][j];
            }
        }
        let diag: f64 = (0..N).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [0.0; N];
    for (i, e) in ev.iter_mut().enumerate() {
        *e = a[i][i];
    }
    ev.sort_by(f64::total_cmp);
    ev
}

/// Rotation of the plane through `angle` embedded in coordinates `(i, j)`.
pub fn givens<const N: usize>(i: usize, j: usize, angle: f64) -> Mat<N> {
    let mut g = identity::<N>();
    let (s, c) = angle.sin_cos();
    g[i][i] = c;
    g[j][j] = c;
    g[i][j] = -s;
    g[j][i] = s;
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_paths_agree() {
        let m: Mat<3> = [[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [1.0, 0.0, -3.0]];
        let mut big = [[0.0; 4]; 4];
        for i in 0..3 {
            for j in 0..3 {
                big[i][j] = m[i][j];
            }
        }
        big[3][3] = 2.0;
        assert!((det(&big) - 2.0 * det(&m)).abs() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let m: Mat<3> = [[2.0, -1.0, 0.5], [0.3, 4.0, 1.0], [1.0, 0.0, -3.0]];
        let inv = inverse(&m).unwrap();
        let p = matmul(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[i][j] - e).abs() < 1e-13);
            }
        }
        assert!(inverse(&[[1.0, 2.0], [2.0, 4.0]]).is_none());
    }

    #[test]
    fn jacobi_recovers_rotated_diagonal() {
        let r = matmul(&givens::<3>(0, 1, 0.4), &givens::<3>(1, 2, -1.1));
        let d = [[5.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, 0.5]];
        let m = matmul(&matmul(&r, &d), &transpose(&r));
        let ev = symmetric_eigenvalues(&m);
        assert!((ev[0] + 2.0).abs() < 1e-12);
        assert!((ev[1] - 0.5).abs() < 1e-12);
        assert!((ev[2] - 5.0).abs() < 1e-12);
    }
}
