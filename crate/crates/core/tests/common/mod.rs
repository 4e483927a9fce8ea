//! Exact rational oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn f(x: &Q) -> f64 {
    x.to_f64().unwrap()
}

pub fn pmul(a: &[Q], b: &[Q], deg: usize) -> Vec<Q> {
    let mut c = vec![Q::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j <= deg {
                c[i + j] += x * y;
            }
        }
    }
    c
}

pub fn padd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Q::zero) + b.get(i).cloned().unwrap_or_else(Q::zero)
        })
        .collect()
}

pub fn pscale(a: &[Q], s: &Q) -> Vec<Q> {
    a.iter().map(|x| x * s).collect()
}

pub fn pderiv(a: &[Q]) -> Vec<Q> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * Q::from_integer(BigInt::from(k)))
        .collect()
}

/// Generalised binomial coefficient `alpha choose k`.
pub fn binom(alpha: &Q, k: usize) -> Q {
    let mut c = Q::one();
    for j in 0..k {
        c = c * (alpha - Q::from_integer(BigInt::from(j))) / Q::from_integer(BigInt::from(j + 1));
    }
    c
}

/// `(1 + u)^alpha` for `u` without constant term, through degree `deg`.
pub fn binomial_power(u: &[Q], alpha: &Q, deg: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); deg + 1];
    out[0] = Q::one();
    let mut uk = vec![Q::one()];
    for k in 1..=deg {
        uk = pmul(&uk, u, deg);
        out = padd(&out, &pscale(&uk, &binom(alpha, k)));
    }
    out
}

/// Faà di Bruno over integer partitions: coefficient `n` of `r(x)^alpha`
/// with `r0 = 1`.
pub fn partition_coeff(r: &[Q], alpha: &Q, n: usize) -> Q {
    fn rec(part: usize, left: usize, mult: &mut Vec<usize>, r: &[Q], alpha: &Q, acc: &mut Q) {
        if left == 0 {
            let k: usize = mult.iter().sum();
            let mut term = binom(alpha, k);
            // multinomial k! / prod m_j!
            let fact =
                |m: usize| (1..=m).fold(Q::one(), |a, i| a * Q::from_integer(BigInt::from(i)));
            term *= fact(k);
            for (j, &m) in mult.iter().enumerate() {
                term /= fact(m);
                for _ in 0..m {
                    term *= r[j + 1].clone();
                }
            }
            *acc += term;
            return;
        }
        if part == 0 {
            return;
        }
        for m in 0..=left / part {
            mult[part - 1] = m;
            rec(part - 1, left - m * part, mult, r, alpha, acc);
        }
        mult[part - 1] = 0;
    }
    let mut acc = Q::zero();
    let mut mult = vec![0; n];
    rec(n, n, &mut mult, r, alpha, &mut acc);
    acc
}

/// The test series used by the power-recurrence oracles: `r0 = 1`.
pub fn sample_series() -> Vec<Q> {
    vec![
        q(1, 1),
        q(-3, 7),
        q(1, 5),
        q(-2, 9),
        q(5, 13),
        q(-1, 4),
        q(2, 3),
        q(-7, 11),
        q(1, 6),
    ]
}

pub fn exact(x: f64) -> Q {
    Q::from_float(x).expect("finite")
}

/// Determinant of the order-`n` recursion matrix, evaluated exactly from the
/// (exactly represented) f64 inputs.
pub fn exact_det(n: usize, y: f64, r0: f64, w0: f64, r: f64, w: f64, g: f64) -> Q {
    let (y, r0, w0, r, w, g) = (exact(y), exact(r0), exact(w0), exact(r), exact(w), exact(g));
    let nn = Q::from_integer(BigInt::from(n));
    let one = Q::one();
    let two = q(2, 1);
    let gm1 = &g - &one;
    let b = &gm1 * (&two - &g);
    let a4 = q(4, 1) - q(3, 1) * &g;
    let w02 = &w0 * &w0;
    let a11 = &y
        * ((&nn + &one) * &gm1 * &w02 * &r - &two * &nn * &w * &w0 - &two * (&nn - &one) * &w02
            + &gm1 * &w0
            + &b);
    let a12 = &y * &r0 * (-&two * &r * &w0 - &two * &w0 + &b / &w0);
    let a21 = (&y / &r0)
        * (&w02 * &gm1 * (&w - (&a4 - q(3, 1) * &w0)) - &w0 * (&two * &w02 + &gm1 * &w0 + &b));
    let a22 = &y
        * (&nn * &gm1 * &w02 * &r - &two * (&nn + &one) * &w * &w0 - &two * (&nn + q(2, 1)) * &w02
            + &two * &a4 * &w0
            - &b);
    a11 * a22 - a12 * a21
}
