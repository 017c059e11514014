//! Real roots of the small polynomials met in the stability analysis.

use crate::Scalar;

/// Evaluates `coeffs[0] + coeffs[1] x + … ` by Horner's rule.
pub fn eval<T: Scalar>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// Real roots of the monic cubic `y³ + a y² + b y + c`, ascending, each
/// polished by Newton iteration on the undepressed cubic.
pub fn cubic_real_roots<T: Scalar>(a: T, b: T, c: T) -> Vec<T> {
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let shift = a / three;
    // y = t - a/3 gives t³ + p t + q.
    let p = b - a * a / three;
    let q = two * a * a * a / T::lit(27.0) - a * b / three + c;

    let mut roots = Vec::with_capacity(3);
    let disc = (q / two).powi(2) + (p / three).powi(3);
    if p == T::zero() && q == T::zero() {
        roots.push(-shift);
    } else if disc > T::zero() {
        let s = disc.sqrt();
        let u = (-q / two + s).cbrt();
        let v = (-q / two - s).cbrt();
        roots.push(u + v - shift);
    } else {
        // Three real roots (possibly repeated): trigonometric form.
        let r = (-p / three).sqrt();
        let arg = ((three * q) / (two * p * r)).max(-T::one()).min(T::one());
        let phi = arg.acos() / three;
        let two_pi_3 = two * T::PI() / three;
        for k in 0..3 {
            roots.push(two * r * (phi - two_pi_3 * T::from_count(k)).cos() - shift);
        }
    }

    let coeffs = [c, b, a, T::one()];
    let deriv = [b, two * a, three];
    for y in roots.iter_mut() {
        for _ in 0..4 {
            let d = eval(&deriv, *y);
            if d == T::zero() {
                break;
            }
            let step = eval(&coeffs, *y) / d;
            if !step.is_finite() {
                break;
            }
            *y -= step;
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let scale = T::one() + a.abs() + b.abs().sqrt() + c.abs().cbrt();
    roots.dedup_by(|x, y| (*x - *y).abs() <= T::lit(1e3) * T::epsilon() * scale);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_distinct_roots() {
        // (y-1)(y-2)(y+3) = y³ - 7y + 6
        let r = cubic_real_roots(0.0_f64, -7.0, 6.0);
        assert_eq!(r.len(), 3);
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn single_real_root() {
        // (y-2)(y²+1) = y³ - 2y² + y - 2
        let r = cubic_real_roots(-2.0_f64, 1.0, -2.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn triple_root() {
        let r = cubic_real_roots(-3.0_f64, 3.0, -1.0);
        assert!(!r.is_empty());
        assert!(r.iter().all(|y| (y - 1.0).abs() < 1e-4));
    }

    proptest! {
        #[test]
        fn roots_of_product_form_are_recovered(
            r1 in -50.0..50.0_f64, r2 in -50.0..50.0_f64, r3 in -50.0..50.0_f64,
        ) {
            let mut want = [r1, r2, r3];
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assume!(want[1] - want[0] > 1e-3 && want[2] - want[1] > 1e-3);
            let a = -(r1 + r2 + r3);
            let b = r1 * r2 + r1 * r3 + r2 * r3;
            let c = -r1 * r2 * r3;
            let got = cubic_real_roots(a, b, c);
            prop_assert_eq!(got.len(), 3);
            for (g, w) in got.iter().zip(want) {
                prop_assert!((g - w).abs() < 1e-7 * (1.0 + w.abs()));
            }
        }
    }
}
