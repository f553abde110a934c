//! Leg numbering and slice maps on tensor products of matrix spaces.

use num_complex::Complex64;

use super::matrix::{CMatrix, ZERO};

/// Index of a basis vector of `⊗ C^{dims[k]}` from its digits, first leg
/// most significant.
fn flat(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

fn digits_of(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

/// Places `op`, acting on the legs listed in `legs` (in that order), inside
/// the tensor product with the given leg dimensions; identity elsewhere.
///
/// `embed(w, &[1, 3], &[n, n, n])` is the usual `W₁₃` (legs 1-based).
pub fn embed(op: &CMatrix, legs: &[usize], dims: &[usize]) -> CMatrix {
    let sub: Vec<usize> = legs.iter().map(|&l| dims[l - 1]).collect();
    let sub_dim: usize = sub.iter().product();
    assert_eq!(
        op.shape(),
        (sub_dim, sub_dim),
        "operator does not match legs"
    );
    let total: usize = dims.iter().product();
    let mut out = CMatrix::zeros(total, total);
    for col in 0..total {
        let cd = digits_of(col, dims);
        let sub_col = flat(&legs.iter().map(|&l| cd[l - 1]).collect::<Vec<_>>(), &sub);
        for sub_row in 0..sub_dim {
            let z = op.get(sub_row, sub_col);
            if z == ZERO {
                continue;
            }
            let rd = digits_of(sub_row, &sub);
            let mut digits = cd.clone();
            for (k, &l) in legs.iter().enumerate() {
                digits[l - 1] = rd[k];
            }
            out.set(flat(&digits, dims), col, z);
        }
    }
    out
}

/// The flip `Σ(ξ⊗η) = η⊗ξ` from `C^a ⊗ C^b` to `C^b ⊗ C^a`.
pub fn flip(a: usize, b: usize) -> CMatrix {
    let mut out = CMatrix::zeros(a * b, a * b);
    for i in 0..a {
        for j in 0..b {
            out.set(j * a + i, i * b + j, Complex64::new(1.0, 0.0));
        }
    }
    out
}

/// `(ω ⊗ id)x` for `x` on `C^a ⊗ C^b`, where `ω(y) = tr(f* y)`.
pub fn slice_first(x: &CMatrix, a: usize, b: usize, f: &CMatrix) -> CMatrix {
    assert_eq!(x.shape(), (a * b, a * b));
    assert_eq!(f.shape(), (a, a));
    let mut out = CMatrix::zeros(b, b);
    for p in 0..a {
        for q in 0..a {
            let w = f.get(p, q).conj();
            if w == ZERO {
                continue;
            }
            for i in 0..b {
                for j in 0..b {
                    let z = x.get(p * b + i, q * b + j);
                    if z != ZERO {
                        out.set(i, j, out.get(i, j) + w * z);
                    }
                }
            }
        }
    }
    out
}

/// `(id ⊗ ω)x` for `x` on `C^a ⊗ C^b`, where `ω(y) = tr(f* y)`.
pub fn slice_second(x: &CMatrix, a: usize, b: usize, f: &CMatrix) -> CMatrix {
    assert_eq!(x.shape(), (a * b, a * b));
    assert_eq!(f.shape(), (b, b));
    let mut out = CMatrix::zeros(a, a);
    for i in 0..a {
        for j in 0..a {
            let mut acc = ZERO;
            for p in 0..b {
                for q in 0..b {
                    let w = f.get(p, q);
                    if w != ZERO {
                        acc += w.conj() * x.get(i * b + p, j * b + q);
                    }
                }
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// All matrix-unit slices `(ω_pq ⊗ id)x`.
pub fn first_leg_slices(x: &CMatrix, a: usize, b: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(a * a);
    for p in 0..a {
        for q in 0..a {
            out.push(x.block(p * b, q * b, b, b));
        }
    }
    out
}

/// All matrix-unit slices `(id ⊗ ω_pq)x`.
pub fn second_leg_slices(x: &CMatrix, a: usize, b: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(b * b);
    for p in 0..b {
        for q in 0..b {
            out.push(CMatrix::from_fn(a, a, |i, j| x.get(i * b + p, j * b + q)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::matrix::pauli::*;
    use super::*;

    #[test]
    fn embed_matches_kron() {
        let x = sigma_x();
        let z = sigma_z();
        let xz = x.kron(&z);
        let dims = [2, 3, 2];
        let e = embed(&xz, &[1, 3], &dims);
        let expect = CMatrix::kron_all(&[&x, &CMatrix::identity(3), &z]);
        assert_eq!(e, expect);
        // Reversed leg order swaps the tensor factors.
        let e = embed(&xz, &[3, 1], &dims);
        let expect = CMatrix::kron_all(&[&z, &CMatrix::identity(3), &x]);
        assert_eq!(e, expect);
    }

    #[test]
    fn flip_swaps_factors() {
        let a = sigma_x();
        let b = CMatrix::identity(3).scale_real(2.0);
        let s = flip(2, 3);
        let lhs = &(&s * &a.kron(&b)) * &s.adjoint();
        assert_eq!(lhs, b.kron(&a));
    }

    #[test]
    fn slices_of_product_tensors() {
        let a = sigma_y();
        let b = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let t = a.kron(&b);
        let f = CMatrix::unit(2, 2, 0, 1);
        // tr(E01* y) = y_01
        assert!(slice_first(&t, 2, 3, &f).distance(&b.scale(a.get(0, 1))) < 1e-15);
        let g = CMatrix::identity(3);
        assert!(slice_second(&t, 2, 3, &g).distance(&a.scale(b.trace())) < 1e-12);
        assert_eq!(first_leg_slices(&t, 2, 3)[1], b.scale(a.get(0, 1)));
        assert_eq!(second_leg_slices(&t, 2, 3)[4], a.scale(b.get(1, 1)));
    }
}
