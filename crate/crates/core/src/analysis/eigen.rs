//! Closed-form spectra of 3×3 real matrices.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::state::Mat3;

/// Three eigenvalues ordered by descending real part, ties by descending
/// imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum3 {
    pub values: [Complex64; 3],
}

impl Spectrum3 {
    fn sorted(mut values: [Complex64; 3]) -> Self {
        values.sort_by(|a, b| match b.re.total_cmp(&a.re) {
            Ordering::Equal => b.im.total_cmp(&a.im),
            other => other,
        });
        Self { values }
    }

    pub fn max_real(&self) -> f64 {
        self.values[0].re
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }
}

impl Serialize for Spectrum3 {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Eig {
            re: f64,
            im: f64,
        }
        let mut seq = ser.serialize_seq(Some(3))?;
        for v in &self.values {
            seq.serialize_element(&Eig { re: v.re, im: v.im })?;
        }
        seq.end()
    }
}

/// Monic characteristic polynomial λ³ + c2 λ² + c1 λ + c0 as `[c2, c1, c0]`.
pub fn characteristic_poly(m: &Mat3) -> [f64; 3] {
    [-m.trace(), m.principal_minor_sum(), -m.det()]
}

fn eval_cubic(coef: [f64; 3], z: Complex64) -> Complex64 {
    ((z + coef[0]) * z + coef[1]) * z + coef[2]
}

fn eval_cubic_deriv(coef: [f64; 3], z: Complex64) -> Complex64 {
    (z * 3.0 + 2.0 * coef[0]) * z + coef[1]
}

/// |p(λ)| for the characteristic polynomial of `m`.
pub fn char_residual(m: &Mat3, lambda: Complex64) -> f64 {
    eval_cubic(characteristic_poly(m), lambda).norm()
}

fn polish(coef: [f64; 3], z: Complex64) -> Complex64 {
    let d = eval_cubic_deriv(coef, z);
    if d.norm() == 0.0 {
        return z;
    }
    let next = z - eval_cubic(coef, z) / d;
    if next.is_finite() && eval_cubic(coef, next).norm() <= eval_cubic(coef, z).norm() {
        next
    } else {
        z
    }
}

/// Roots of λ² − trace·λ + det.
fn quadratic_roots(trace: f64, det: f64) -> [Complex64; 2] {
    let half = 0.5 * trace;
    let disc = half * half - det;
    if disc >= 0.0 {
        let q = half + half.signum() * disc.sqrt();
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(det / q, 0.0)]
    } else {
        let w = (-disc).sqrt();
        [Complex64::new(half, w), Complex64::new(half, -w)]
    }
}

fn cubic_roots(coef: [f64; 3]) -> [Complex64; 3] {
    let [c2, c1, c0] = coef;
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let disc = (0.5 * q) * (0.5 * q) + (p / 3.0).powi(3);

    let roots = if disc > 0.0 {
        let sign = if q >= 0.0 { 1.0 } else { -1.0 };
        let a = -sign * (0.5 * q.abs() + disc.sqrt()).cbrt();
        let b = if a == 0.0 { 0.0 } else { -p / (3.0 * a) };
        let real = Complex64::new(a + b - shift, 0.0);
        let pair = Complex64::new(-0.5 * (a + b) - shift, 0.5 * 3f64.sqrt() * (a - b));
        let real = polish(coef, real);
        let pair = polish(coef, pair);
        [real, pair, pair.conj()]
    } else if p == 0.0 {
        [Complex64::new(-shift, 0.0); 3]
    } else {
        let r = (-p / 3.0).sqrt();
        let cos3 = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let phi = cos3.acos() / 3.0;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let u = 2.0 * r * (phi - 2.0 * PI * k as f64 / 3.0).cos();
            *slot = polish(coef, Complex64::new(u - shift, 0.0));
        }
        out
    };
    roots
}

/// Eigenvalues of a 3×3 matrix. Block-triangular matrices are split into an
/// exact diagonal entry and a 2×2 block; everything else goes through the
/// characteristic cubic with one Newton polish per root.
pub fn eigenvalues_3x3(m: &Mat3) -> Spectrum3 {
    let a = m.rows();
    let split = |lone: f64, tr: f64, det: f64| {
        let [r1, r2] = quadratic_roots(tr, det);
        Spectrum3::sorted([Complex64::new(lone, 0.0), r1, r2])
    };
    if (a[2][0] == 0.0 && a[2][1] == 0.0) || (a[0][2] == 0.0 && a[1][2] == 0.0) {
        return split(
            a[2][2],
            a[0][0] + a[1][1],
            a[0][0] * a[1][1] - a[0][1] * a[1][0],
        );
    }
    if (a[0][1] == 0.0 && a[0][2] == 0.0) || (a[1][0] == 0.0 && a[2][0] == 0.0) {
        return split(
            a[0][0],
            a[1][1] + a[2][2],
            a[1][1] * a[2][2] - a[1][2] * a[2][1],
        );
    }
    Spectrum3::sorted(cubic_roots(characteristic_poly(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reals(s: &Spectrum3) -> [f64; 3] {
        [s.values[0].re, s.values[1].re, s.values[2].re]
    }

    #[test]
    fn diagonal_and_identity() {
        let s = eigenvalues_3x3(&Mat3::diag([-1.0, -2.0, -27.0]));
        assert_eq!(reals(&s), [-1.0, -2.0, -27.0]);
        assert!(s.is_real(0.0));
        let s = eigenvalues_3x3(&Mat3::IDENTITY);
        assert_eq!(reals(&s), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn sl_origin_block() {
        let m = Mat3([[-2.0, 2.0, 0.0], [0.3, -1.0, 0.0], [0.0, 0.0, -27.0]]);
        let s = eigenvalues_3x3(&m);
        // quadratic formula oracle for λ² + 3λ + 1.4
        let r1 = (-3.0 + 3.4f64.sqrt()) / 2.0;
        let r2 = (-3.0 - 3.4f64.sqrt()) / 2.0;
        assert!((s.values[0].re - r1).abs() < 1e-12);
        assert!((s.values[1].re - r2).abs() < 1e-12);
        assert_eq!(s.values[2].re, -27.0);
        assert!((r1 + 0.5780456).abs() < 1e-6 && (r2 + 2.4219544).abs() < 1e-6);
    }

    #[test]
    fn general_cubic_path_with_complex_pair() {
        // companion matrix of (λ − 2)(λ² + 2λ + 5) = λ³ + 0λ² + λ − 10
        let m = Mat3([[0.0, 0.0, 10.0], [1.0, 0.0, -1.0], [0.0, 1.0, 0.0]]);
        let s = eigenvalues_3x3(&m);
        assert!((s.values[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((s.values[1] - Complex64::new(-1.0, 2.0)).norm() < 1e-12);
        assert!((s.values[2] - Complex64::new(-1.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn general_cubic_three_real() {
        // similarity transform of diag(3, -1, -5) through a dense matrix
        let d = Mat3::diag([3.0, -1.0, -5.0]);
        let p = Mat3([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]);
        let pinv_cols: Vec<_> = (0..3)
            .map(|j| p.solve(Mat3::IDENTITY.column(j)).unwrap())
            .collect();
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let col = d.mul_vec(pinv_cols[j]);
                m[i][j] = p.0[i][0] * col.x + p.0[i][1] * col.y + p.0[i][2] * col.z;
            }
        }
        let s = eigenvalues_3x3(&Mat3(m));
        for (got, want) in reals(&s).iter().zip([3.0, -1.0, -5.0]) {
            assert!((got - want).abs() < 1e-10, "{s:?}");
        }
    }

    #[test]
    fn residual_bound_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let mut rows = [[0.0; 3]; 3];
            for v in rows.iter_mut().flatten() {
                *v = rng.gen_range(-30.0..30.0);
            }
            let m = Mat3(rows);
            let bound = 1e-9 * m.inf_norm().powi(3).max(1.0);
            let s = eigenvalues_3x3(&m);
            for v in s.values {
                assert!(char_residual(&m, v) <= bound, "{m:?} {v}");
            }
        }
    }
}
