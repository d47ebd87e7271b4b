//! Imaginary error function `erfi(z) = -i erf(iz)` for complex arguments.

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use crate::error::{Error, Result};

/// Radius below which the power series is used.
pub const SERIES_RADIUS: f64 = 6.0;

/// Largest `Re(z^2)` for which `e^{z^2}` is representable.
const EXP_LIMIT: f64 = 709.0;

// 2 / sqrt(pi) as a double-double.
const TWO_OVER_SQRT_PI: Dd = Dd {
    hi: std::f64::consts::FRAC_2_SQRT_PI,
    lo: 1.533_545_961_316_588e-17,
};
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `erfi(z)`. Fails with [`Error::Overflow`] when the result is not representable;
/// [`erfi_scaled`] covers that region.
pub fn erfi(z: Complex64) -> Result<Complex64> {
    if z.norm() <= SERIES_RADIUS {
        return Ok(erfi_series(z));
    }
    if (z * z).re > EXP_LIMIT {
        return Err(Error::Overflow { re: z.re, im: z.im });
    }
    Ok(erfi_continued_fraction(z))
}

/// `e^{-z^2} erfi(z)`, finite for every finite `z`.
pub fn erfi_scaled(z: Complex64) -> Complex64 {
    if z.norm() <= SERIES_RADIUS {
        return (-(z * z)).exp() * erfi_series(z);
    }
    let i = Complex64::i();
    let e = (-(z * z)).exp();
    if z.im > 0.0 {
        i * (e - faddeeva_cf(z))
    } else {
        -i * (e - faddeeva_cf(-z))
    }
}

/// Maclaurin series `2/sqrt(pi) sum z^(2n+1) / (n! (2n+1))`, summed in double-double.
/// Accurate to about 1e-15 relative for `|z| <= 6`.
pub fn erfi_series(z: Complex64) -> Complex64 {
    let zz = CDd::new(z.re, z.im);
    let z2 = zz * zz;
    let r2 = z.norm_sqr();
    let mut term = zz;
    let mut sum = CDd::ZERO;
    let mut peak = 0.0f64;
    let mut n = 0u32;
    loop {
        let contrib = term.div_f64((2 * n + 1) as f64);
        sum = sum + contrib;
        let m = contrib.magnitude();
        peak = peak.max(m);
        if (n as f64) > r2 && m <= 1e-33 * peak || m == 0.0 {
            break;
        }
        n += 1;
        term = (term * z2).div_f64(n as f64);
    }
    let s = sum.scale(TWO_OVER_SQRT_PI);
    Complex64::new(s.re.to_f64(), s.im.to_f64())
}

/// erfi through the Faddeeva function `w`; meant for `|z| > 5`.
pub fn erfi_continued_fraction(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let e = (z * z).exp();
    if z.im > 0.0 {
        i * (1.0 - e * faddeeva_cf(z))
    } else {
        -i * (1.0 - e * faddeeva_cf(-z))
    }
}

/// Laplace continued fraction for `w(zeta)`, `Im zeta >= 0`, evaluated backwards.
fn faddeeva_cf(zeta: Complex64) -> Complex64 {
    let r = zeta.norm();
    let depth = if r < 10.0 {
        60
    } else if r < 30.0 {
        24
    } else {
        12
    };
    let mut tail = Complex64::new(0.0, 0.0);
    for k in (1..=depth).rev() {
        tail = (0.5 * k as f64) / (zeta - tail);
    }
    Complex64::i() / (SQRT_PI * (zeta - tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn zero_and_one() {
        assert_eq!(erfi(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let v = erfi(c(1.0, 0.0)).unwrap();
        assert!((v.re - 1.650_425_758_797_542_9).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn frozen_values() {
        // 40-digit references from tools/oracles.py.
        let cases = [
            (c(0.5, 0.5), c(0.457_881_394_435_192_2, 0.642_612_914_854_820_5)),
            (
                c(2.0, -3.0),
                c(-0.000_011_546_724_379_290_603, -0.998_963_278_856_817_3),
            ),
            (c(4.5, 1.0), c(-22_750_052.133_988_775, 17_462_632.312_147_7)),
            (c(-3.0, 5.5), c(-4.628_451_828_032_998e-11, 1.000_000_000_025_422_4)),
            (c(5.9, 0.1), c(50_031_874_240_896.65, 115_660_414_090_006.4)),
            (c(10.0, 10.0), c(-0.010_987_684_608_193_988, 0.961_649_374_272_474_9)),
        ];
        for (z, want) in cases {
            let got = erfi(z).unwrap();
            assert!(rel(got, want) < 1e-13, "{z}: {got} vs {want}");
        }
    }

    #[test]
    fn diagonal_values_stay_bounded() {
        for x in [1.0, 7.0, 50.0, 1e3, 1e6] {
            let v = erfi(c(x, x)).unwrap();
            assert!(v.norm() < 2.0, "{x}: {v}");
            let v = erfi(c(-x, -x)).unwrap();
            assert!(v.norm() < 2.0);
        }
    }

    #[test]
    fn overflow_is_reported() {
        let err = erfi(c(30.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
        assert!(err.to_string().contains("erfi_scaled"));
        let s = erfi_scaled(c(30.0, 1.0));
        assert!(s.is_finite());
        // e^{-z^2} erfi(z) -> 1/(sqrt(pi) z) along the real axis.
        let asym = 1.0 / (SQRT_PI * c(30.0, 1.0));
        assert!(rel(s, asym) < 1e-3);
    }

    #[test]
    fn scaled_matches_unscaled_where_both_exist() {
        for z in [c(0.3, -0.2), c(4.0, 3.0), c(7.0, 2.0), c(-8.0, 0.5), c(3.0, 9.0)] {
            let a = erfi_scaled(z) * (z * z).exp();
            assert!(rel(a, erfi(z).unwrap()) < 1e-12, "{z}");
        }
    }
}
