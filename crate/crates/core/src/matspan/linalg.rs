//! Small dense decompositions on coordinate matrices.
//!
//! Coordinates are nalgebra matrices; the SVD itself is computed by faer,
//! whose complex SVD stays accurate when singular values repeat.

use faer::Mat;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) type Coords = DMatrix<Complex64>;

struct Svd {
    /// Columns are left singular vectors, in the order of `s`.
    u: Coords,
    /// Descending.
    s: Vec<f64>,
    /// Columns are right singular vectors; all `ncols` of them when `full`.
    v: Coords,
}

fn to_faer(m: &Coords) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> Coords {
    Coords::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn svd(m: &Coords, full: bool) -> Svd {
    let a = to_faer(m);
    let (u, s, v) = if full {
        let d = a.svd().expect("SVD of a finite matrix converges");
        let s: Vec<f64> = d.S().column_vector().iter().map(|z| z.re).collect();
        (from_faer(d.U()), s, from_faer(d.V()))
    } else {
        let d = a.thin_svd().expect("SVD of a finite matrix converges");
        let s: Vec<f64> = d.S().column_vector().iter().map(|z| z.re).collect();
        (from_faer(d.U()), s, from_faer(d.V()))
    };
    let k = s.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let permute = |x: &Coords| {
        let mut cols: Vec<usize> = order.clone();
        cols.extend(k..x.ncols());
        Coords::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, cols[j])])
    };
    Svd {
        u: permute(&u),
        v: permute(&v),
        s: order.iter().map(|&i| s[i]).collect(),
    }
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &Coords) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m, false).s
}

/// Numerical rank with a threshold relative to the largest singular value.
pub(crate) fn rank(m: &Coords, rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel * top).count(),
        _ => 0,
    }
}

/// Left singular vectors with their singular values, descending.
pub(crate) fn left_singular(m: &Coords) -> (Coords, Vec<f64>) {
    let d = svd(m, false);
    (d.u, d.s)
}

/// Orthonormal basis of the kernel, as columns. Singular values at most
/// `threshold` count as zero.
pub(crate) fn null_space(m: &Coords, threshold: f64) -> Coords {
    let n = m.ncols();
    if n == 0 {
        return Coords::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return Coords::identity(n, n);
    }
    let d = svd(m, true);
    let cols: Vec<_> = (0..n)
        .filter(|&k| d.s.get(k).is_none_or(|&s| s <= threshold))
        .map(|k| d.v.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        Coords::zeros(n, 0)
    } else {
        Coords::from_columns(&cols)
    }
}

/// Moore–Penrose inverse with a relative cutoff.
pub(crate) fn pseudo_inverse(m: &Coords, rel: f64) -> Coords {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Coords::zeros(c, r);
    }
    let d = svd(m, false);
    let top = d.s.first().copied().unwrap_or(0.0);
    let mut out = Coords::zeros(c, r);
    for (k, &s) in d.s.iter().enumerate() {
        if top > 0.0 && s > rel * top {
            let scale = Complex64::new(1.0 / s, 0.0);
            out += d.v.column(k) * d.u.column(k).adjoint() * scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rank_and_kernel_of_rank_one() {
        let m = Coords::from_row_slice(2, 3, &[c(1.0), c(2.0), c(3.0), c(2.0), c(4.0), c(6.0)]);
        assert_eq!(rank(&m, 1e-9), 1);
        let k = null_space(&m, 1e-9);
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-12);
    }

    #[test]
    fn repeated_singular_values() {
        // U diag(√12, √12, √12, 2, 0) V* with dense unitaries; repeated
        // values once broke the Penrose identities.
        let n = 5;
        let dft = |n: usize, shift: f64| {
            Coords::from_fn(n, n, |i, j| {
                let t = 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64 + shift * i as f64;
                Complex64::from_polar(1.0 / (n as f64).sqrt(), t)
            })
        };
        let mut s = Coords::zeros(n, 8);
        for (i, x) in [12f64.sqrt(), 12f64.sqrt(), 12f64.sqrt(), 2.0]
            .iter()
            .enumerate()
        {
            s[(i, i)] = c(*x);
        }
        let a = dft(n, 0.3) * s * dft(8, 0.7).adjoint();
        let p = pseudo_inverse(&a, 1e-9);
        assert!((&a * &p * &a - &a).norm() < 1e-12);
        assert!((&p * &a * &p - &p).norm() < 1e-12);
        assert_eq!(rank(&a, 1e-9), 4);
        let k = null_space(&a, 1e-9);
        assert_eq!(k.ncols(), 4);
        assert!((&a * &k).norm() < 1e-12);
        let sv = singular_values(&a);
        assert!((sv[0] - 12f64.sqrt()).abs() < 1e-13 && (sv[2] - 12f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn pseudo_inverse_of_invertible() {
        let m = Coords::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(1.0)]);
        let p = pseudo_inverse(&m, 1e-12);
        assert!((&m * &p - Coords::identity(2, 2)).norm() < 1e-12);
    }
}
