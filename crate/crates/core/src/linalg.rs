//! Fixed-size complex linear algebra for the 3×3 systems of the normal form.

use num_complex::Complex;

use crate::Scalar;

pub type CVec3<T> = [Complex<T>; 3];
pub type CMat3<T> = [[Complex<T>; 3]; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn complexify<T: Scalar>(m: &Mat3<T>) -> CMat3<T> {
    m.map(|row| row.map(|x| Complex::new(x, T::zero())))
}

pub fn complexify_vec<T: Scalar>(v: &[T; 3]) -> CVec3<T> {
    v.map(|x| Complex::new(x, T::zero()))
}

pub fn mat_vec<T: Scalar>(m: &CMat3<T>, v: &CVec3<T>) -> CVec3<T> {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// `uᵀ m` for a row vector `u`.
pub fn vec_mat<T: Scalar>(u: &CVec3<T>, m: &CMat3<T>) -> CVec3<T> {
    [0, 1, 2].map(|j| u[0] * m[0][j] + u[1] * m[1][j] + u[2] * m[2][j])
}

/// Unconjugated dot product.
pub fn dot<T: Scalar>(a: &CVec3<T>, b: &CVec3<T>) -> Complex<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn conj<T: Scalar>(v: &CVec3<T>) -> CVec3<T> {
    v.map(|z| z.conj())
}

pub fn scale<T: Scalar>(v: &CVec3<T>, s: Complex<T>) -> CVec3<T> {
    v.map(|z| z * s)
}

pub fn sub<T: Scalar>(a: &CVec3<T>, b: &CVec3<T>) -> CVec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Euclidean norm.
pub fn norm<T: Scalar>(v: &CVec3<T>) -> T {
    (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt()
}

/// `a·m1 + b·m2 + c·I`.
pub fn combine<T: Scalar>(
    a: Complex<T>,
    m1: &CMat3<T>,
    b: Complex<T>,
    m2: &CMat3<T>,
    c: Complex<T>,
) -> CMat3<T> {
    let mut out = [[Complex::new(T::zero(), T::zero()); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a * m1[i][j] + b * m2[i][j];
        }
        out[i][i] += c;
    }
    out
}

pub fn det<T: Scalar>(m: &CMat3<T>) -> Complex<T> {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn norm1<T: Scalar>(m: &CMat3<T>) -> T {
    (0..3)
        .map(|j| m[0][j].norm() + m[1][j].norm() + m[2][j].norm())
        .fold(T::zero(), T::max)
}

/// Gaussian elimination with partial pivoting. `None` when a pivot vanishes.
pub fn solve<T: Scalar>(m: &CMat3<T>, rhs: &CVec3<T>) -> Option<CVec3<T>> {
    let mut a = *m;
    let mut b = *rhs;
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        if a[pivot][col].norm() == T::zero() || !a[pivot][col].norm().is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for k in col..3 {
                let delta = factor * a[col][k];
                a[row][k] -= delta;
            }
            let delta = factor * b[col];
            b[row] -= delta;
        }
    }
    let mut x = b;
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// One-norm condition number `‖m‖₁‖m⁻¹‖₁`; infinite for a singular matrix.
pub fn condition<T: Scalar>(m: &CMat3<T>) -> T {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut inv = [[zero; 3]; 3];
    for j in 0..3 {
        let mut e = [zero; 3];
        e[j] = one;
        match solve(m, &e) {
            Some(col) => {
                for i in 0..3 {
                    inv[i][j] = col[i];
                }
            }
            None => return T::infinity(),
        }
    }
    norm1(m) * norm1(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn solve_recovers_known_solution() {
        let m = [
            [c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.5)],
            [c(1e-3, 0.0), c(0.0, 0.0), c(3.0, -1.0)],
            [c(4.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
        ];
        let x = [c(1.0, -2.0), c(0.5, 0.0), c(-3.0, 1.0)];
        let b = mat_vec(&m, &x);
        let got = solve(&m, &b).unwrap();
        assert!(norm(&sub(&got, &x)) < 1e-13);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let m = [
            [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            [c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        ];
        assert!(condition(&m) > 1e12);
        assert!(det(&m).norm() < 1e-14);
    }
}
