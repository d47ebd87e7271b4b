//! Independent reference implementations shared by the integration suites.
#![allow(dead_code)]

use biphoton_core::Complex64;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point oracle.
const P: u32 = 1400;

fn fixed(x: f64) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let shift = e + P as i64;
    assert!(shift >= 0, "value too small for the oracle scale");
    let v = BigInt::from(mant) << (shift as usize);
    if neg {
        -v
    } else {
        v
    }
}

fn to_f64(v: &BigInt) -> f64 {
    let keep = 120u32;
    let shifted: BigInt = v >> ((P - keep) as usize);
    shifted.to_f64().unwrap() * 2f64.powi(-(keep as i32))
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> (P as usize)
}

/// `atan(1/k)` in fixed point.
fn atan_inv(k: u32) -> BigInt {
    let one: BigInt = BigInt::one() << (P as usize);
    let k2 = BigInt::from(k * k);
    let mut power = one / BigInt::from(k);
    let mut sum = power.clone();
    let mut n = 1u32;
    loop {
        power /= &k2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    sum
}

fn two_over_sqrt_pi() -> BigInt {
    let pi: BigInt = atan_inv(5) * 16 - atan_inv(239) * 4;
    let sqrt_pi = (pi << (P as usize)).sqrt();
    (BigInt::from(2) << (2 * P as usize)) / sqrt_pi
}

/// erfi from its Maclaurin series in 1400-bit fixed point.
pub fn erfi_oracle(z: Complex64) -> Complex64 {
    let (x, y) = (fixed(z.re), fixed(z.im));
    let (zr, zi) = (mul(&x, &x) - mul(&y, &y), mul(&x, &y) * 2);
    let (mut tr, mut ti) = (x, y);
    let (mut sr, mut si) = (BigInt::zero(), BigInt::zero());
    let tiny: BigInt = BigInt::one() << ((P - 200) as usize);
    let r2 = z.norm_sqr();
    let mut n = 0u64;
    loop {
        let d = BigInt::from(2 * n + 1);
        sr += &tr / &d;
        si += &ti / &d;
        if n as f64 > r2 + 5.0 && tr.abs() < tiny && ti.abs() < tiny {
            break;
        }
        n += 1;
        let nr = mul(&tr, &zr) - mul(&ti, &zi);
        let ni = mul(&tr, &zi) + mul(&ti, &zr);
        tr = nr / BigInt::from(n);
        ti = ni / BigInt::from(n);
    }
    let c = two_over_sqrt_pi();
    Complex64::new(to_f64(&mul(&sr, &c)), to_f64(&mul(&si, &c)))
}

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Half-maximum width found by scanning every adjacent pair for crossings.
pub fn brute_force_fwhm(tau: &[f64], y: &[f64]) -> f64 {
    let peak = y.iter().cloned().fold(f64::MIN, f64::max);
    let h = 0.5 * peak;
    let mut crossings = Vec::new();
    for i in 0..y.len() - 1 {
        let (a, b) = (y[i] - h, y[i + 1] - h);
        if (a < 0.0) != (b < 0.0) {
            crossings.push(tau[i] + (h - y[i]) / (y[i + 1] - y[i]) * (tau[i + 1] - tau[i]));
        }
    }
    crossings.last().unwrap() - crossings.first().unwrap()
}

/// Second derivative from a five-point stencil of step `h`.
pub fn stencil_second_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Fine trapezoid integral of `f` over `[a, b]`.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (inner + 0.5 * (f(a) + f(b)))
}
