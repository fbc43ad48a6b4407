//! Matrix exponential for 3x3 matrices by scaling and squaring.

use crate::algebra::Mat3;

const TAYLOR_ORDER: usize = 16;
const SCALED_NORM: f64 = 0.5;

fn inf_norm(m: &Mat3) -> f64 {
    (0..3)
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(t M)`.
///
/// The argument is halved until its infinity norm is at most 0.5, the
/// truncated Taylor series of order 16 is summed (Horner form), and the result
/// is squared back. Truncation error at that norm is below 1e-20.
pub fn expm3(m: &Mat3, t: f64) -> Mat3 {
    let x = m * t;
    let norm = inf_norm(&x);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let y = x / 2f64.powi(squarings);
    let id = Mat3::identity();
    let mut acc = id;
    for k in (1..=TAYLOR_ORDER).rev() {
        acc = id + (y * acc) / k as f64;
    }
    for _ in 0..squarings {
        acc = acc * acc;
    }
    acc
}
