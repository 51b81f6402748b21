//! Small dense determinants and solves.
//!
//! Torsion and kernel determinants have columns of wildly different scale
//! (exponential rows, factorial columns), so rows are first equilibrated by
//! powers of two, which is exact, and then factored with partial pivoting.
//! From dimension 6 upward the elimination runs in double-double arithmetic.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest dimension accepted by [`det`].
pub const MAX_DIM: usize = 8;

/// Dimension from which elimination switches to double-double.
const DD_FROM: usize = 6;

/// Determinant of a square matrix given as rows.
///
/// Returns `NaN` if any entry is not finite. Panics if the matrix is not square.
pub fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return f64::NAN;
    }
    // Scale each row by 2^-e so its largest entry lies in [0.5, 1).
    let mut exp_total: i32 = 0;
    let mut a: Vec<Vec<f64>> = Vec::with_capacity(n);
    for r in rows {
        let m = r.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let e = frexp_exp(m);
        exp_total += e;
        a.push(r.iter().map(|x| ldexp(*x, -e)).collect());
    }
    let d = if n >= DD_FROM { lu_det_dd(a) } else { lu_det(a) };
    scale_by_pow2(d, exp_total)
}

fn lu_det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let piv = a[k][k];
        det *= piv;
        for i in k + 1..n {
            let f = a[i][k] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
    }
    det
}

fn lu_det_dd(rows: Vec<Vec<f64>>) -> f64 {
    let n = rows.len();
    let mut a: Vec<Vec<Dd>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(Dd::from).collect())
        .collect();
    let mut det = Dd::from(1.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].hi.abs().total_cmp(&a[j][k].hi.abs()))
            .unwrap();
        if a[p][k].hi == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let piv = a[k][k];
        det = det * piv;
        for i in k + 1..n {
            let f = a[i][k] / piv;
            for j in k + 1..n {
                let t = f * a[k][j];
                a[i][j] = a[i][j] - t;
            }
        }
    }
    det.hi + det.lo
}

fn frexp_exp(x: f64) -> i32 {
    // exponent e with x = m * 2^e, m in [0.5, 1)
    if x == 0.0 || !x.is_finite() {
        return 0;
    }
    let bits = x.abs().to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i32;
    if raw == 0 {
        // subnormal
        return frexp_exp(x * 2f64.powi(64)) - 64;
    }
    raw - 1022
}

fn ldexp(x: f64, e: i32) -> f64 {
    scale_by_pow2(x, e)
}

fn scale_by_pow2(mut x: f64, mut e: i32) -> f64 {
    // powi(2, e) overflows for |e| > 1023, so step in chunks.
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn det_bareiss(rows: &[Vec<i128>]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    let mut a = rows.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(p, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` for a singular system.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))?;
        if m[p][k] == 0.0 {
            return None;
        }
        m.swap(p, k);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..=n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    Some(x)
}

/// Double-double number: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vandermonde_rows(x: &[f64]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|&xi| (0..x.len()).map(|j| xi.powi(j as i32)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&[]), 1.0);
        assert_eq!(det(&[vec![3.0]]), 3.0);
        assert_eq!(det(&[vec![1.0, 2.0], vec![3.0, 4.0]]), -2.0);
        assert_eq!(det(&[vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
        assert_eq!(det(&[vec![1.0, 2.0], vec![2.0, 4.0]]), 0.0);
    }

    #[test]
    fn vandermonde_matches_product_in_all_dimensions() {
        for n in 1..=MAX_DIM {
            let x: Vec<f64> = (0..n).map(|i| 0.3 + 0.7 * i as f64).collect();
            let mut v = 1.0;
            for i in 0..n {
                for j in i + 1..n {
                    v *= x[j] - x[i];
                }
            }
            let d = det(&vandermonde_rows(&x));
            assert!(((d - v) / v).abs() < 1e-11, "n={n}: {d} vs {v}");
        }
    }

    #[test]
    fn row_scaling_is_exact() {
        let m = vec![vec![1e200, 2e200], vec![3e-200, 5e-200]];
        let d = det(&m);
        assert!((d - (5.0 - 6.0)).abs() < 1e-14);
    }

    #[test]
    fn bareiss_factorial_diagonal() {
        let m: Vec<Vec<i128>> = vec![vec![1, 7, 3], vec![0, 2, 9], vec![0, 0, 6]];
        assert_eq!(det_bareiss(&m), 12);
        let swapped = vec![vec![0, 2, 9], vec![1, 7, 3], vec![0, 0, 6]];
        assert_eq!(det_bareiss(&swapped), -12);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        assert!(solve(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn double_double_keeps_low_bits() {
        let a = Dd::from(1.0) + Dd::from(1e-20);
        assert_eq!(a.hi, 1.0);
        assert_eq!(a.lo, 1e-20);
        let third = Dd::from(1.0) / Dd::from(3.0);
        let back = third * Dd::from(3.0) - Dd::from(1.0);
        assert!((back.hi + back.lo).abs() < 1e-30);
    }
}
