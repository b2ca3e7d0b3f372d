//! Exact scalars: rationals with big integers, and Gaussian rationals
//! (complex numbers with rational real and imaginary part).  All linear
//! algebra in this crate runs over one of these two fields.

use num::bigint::BigInt;
use num::complex::Complex;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rat = BigRational;
pub type Gauss = Complex<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rat, im: Rat) -> Gauss {
    Complex::new(re, im)
}

pub fn gi(re: i64, im: i64) -> Gauss {
    gauss(rat(re), rat(im))
}

pub fn glift(x: &Rat) -> Gauss {
    gauss(x.clone(), rat(0))
}

/// i^k for any integer k, as an exact Gaussian rational.
pub fn i_pow(k: i64) -> Gauss {
    match k.rem_euclid(4) {
        0 => gi(1, 0),
        1 => gi(0, 1),
        2 => gi(-1, 0),
        _ => gi(0, -1),
    }
}

pub fn is_real(z: &Gauss) -> bool {
    z.im.is_zero()
}

/// Parses "p/q" or "p".  Used by the CLI instance reader.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|e| format!("bad rational {:?}: {}", s, e))
}

/// Renders a rational as "p/q" with the denominator always present.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn fmt_gauss(z: &Gauss) -> String {
    format!("{}+{}i", fmt_rat(&z.re), fmt_rat(&z.im))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// 15 significant digits, scientific notation, locale independent.
pub fn fmt_f64_15(x: f64) -> String {
    format!("{:.14e}", x)
}

pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}

/// |z|^2 = z * conj(z), exact.
pub fn norm_sq(z: &Gauss) -> Rat {
    &z.re * &z.re + &z.im * &z.im
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let x = parse_rat("-3/6").unwrap();
        assert_eq!(x, ratio(-1, 2));
        assert_eq!(fmt_rat(&x), "-1/2");
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn i_powers_cycle() {
        assert_eq!(i_pow(0), gi(1, 0));
        assert_eq!(i_pow(1), gi(0, 1));
        assert_eq!(i_pow(2), gi(-1, 0));
        assert_eq!(i_pow(3), gi(0, -1));
        assert_eq!(i_pow(-1), gi(0, -1));
        assert_eq!(i_pow(-2), gi(-1, 0));
        for k in -8..8 {
            assert_eq!(i_pow(k) * i_pow(-k), gi(1, 0));
        }
    }

    #[test]
    fn gauss_field_ops() {
        let z = gi(1, 2);
        let w = gi(3, -1);
        assert_eq!(z.clone() * w.clone(), gi(5, 5));
        let q = z.clone() / w.clone();
        assert_eq!(q * w, z);
        assert_eq!(z.conj(), gi(1, -2));
        assert_eq!(norm_sq(&gi(3, 4)), rat(25));
    }

    #[test]
    fn f64_rendering() {
        assert_eq!(fmt_f64_15(1.0), "1.00000000000000e0");
        assert_eq!(fmt_f64_15(0.5), "5.00000000000000e-1");
    }
}
