//! Bessel functions of the first kind, orders 0 and 1, and the zeros of J0.

use std::f64::consts::PI;

/// `(J0(x), J1(x))` by Miller's backward recurrence normalised with
/// `J0 + 2 Σ J2k = 1`.
pub fn j0_j1(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (1.0, 0.0);
    }
    let ax = x.abs();
    if ax < 1e-8 {
        return (1.0 - 0.25 * x * x, 0.5 * x);
    }
    let start = {
        let m = (ax + 20.0 + 12.0 * ax.sqrt()) as usize;
        m + (m & 1)
    };
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut even_sum = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        let order = k - 1;
        if order == 1 {
            j1 = cur;
        }
        if order > 0 && order % 2 == 0 {
            even_sum += cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let norm = cur + 2.0 * even_sum;
    let j0 = cur / norm;
    let j1 = j1 / norm;
    (j0, if x < 0.0 { -j1 } else { j1 })
}

pub fn j0(x: f64) -> f64 {
    j0_j1(x).0
}

pub fn j1(x: f64) -> f64 {
    j0_j1(x).1
}

/// The `n`-th positive zero of J0 (1-based), by Newton from McMahon's
/// asymptotic estimate.
pub fn j0_zero(n: usize) -> f64 {
    assert!(n >= 1, "zeros are numbered from 1");
    let b = (n as f64 - 0.25) * PI;
    let b8 = 8.0 * b;
    let mut x = b + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3)) + 120_928.0 / (15.0 * b8.powi(5));
    for _ in 0..50 {
        let (f, d) = j0_j1(x);
        // J0' = -J1
        let dx = f / d;
        x += dx;
        if dx.abs() <= 1e-15 * x {
            break;
        }
    }
    x
}

/// The first `count` zeros of J0.
pub fn j0_zeros(count: usize) -> Vec<f64> {
    (1..=count).map(j0_zero).collect()
}
