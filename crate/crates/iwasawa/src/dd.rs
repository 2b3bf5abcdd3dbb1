//! Double-double arithmetic (~106-bit significand) for the high-precision
//! polish of the metric solvers. Error-free transformations follow Dekker and
//! Shewchuk; `two_prod` uses the hardware FMA.

use crate::scalar::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
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

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "sqrt of negative double-double");
        // One Karp-Markstein refinement from the f64 estimate.
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let axdd = Dd::from_f64(ax);
        let err = self - axdd * axdd;
        axdd + Dd::from_f64(err.hi * (x * 0.5))
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Exact conversion of a rational (numerator / denominator in double-double).
    pub fn from_rat(r: &Rat) -> Dd {
        let num = bigint_to_dd(r.numer());
        let den = bigint_to_dd(r.denom());
        num / den
    }

    /// Decimal rendering with `sig` significant digits, via the exact dyadic
    /// rational represented by the pair.
    pub fn to_decimal_string(self, sig: usize) -> String {
        let hi = Rat::from_float(self.hi).unwrap_or_else(Rat::zero);
        let lo = Rat::from_float(self.lo).unwrap_or_else(Rat::zero);
        let v = hi + lo;
        rational_to_decimal(&v, sig)
    }
}

fn bigint_to_dd(n: &BigInt) -> Dd {
    let (sign, digits) = n.to_u32_digits();
    let mut acc = Dd::ZERO;
    let base = Dd::from_f64(4294967296.0);
    for d in digits.iter().rev() {
        acc = acc * base + Dd::from_f64(*d as f64);
    }
    if sign == num_bigint::Sign::Minus {
        acc = -acc;
    }
    acc
}

fn rational_to_decimal(v: &Rat, sig: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v.is_negative();
    let a = v.abs();
    // Find the decimal exponent: 10^e ≤ a < 10^{e+1}.
    let ten = Rat::from_integer(10.into());
    let mut e: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled = scaled / ten.clone();
        e += 1;
    }
    let one = Rat::from_integer(1.into());
    while scaled < one {
        scaled = scaled * ten.clone();
        e -= 1;
    }
    // digits of a / 10^e.
    let mut digits = String::new();
    let mut rem = scaled;
    for _ in 0..sig {
        let d = (rem.numer() / rem.denom()).to_i64().unwrap_or(0);
        digits.push_str(&d.to_string());
        rem = (rem - Rat::from_integer(d.into())) * ten.clone();
    }
    let mantissa = format!("{}.{}", &digits[..1], &digits[1..]);
    let sign = if neg { "-" } else { "" };
    if e == 0 {
        format!("{sign}{mantissa}")
    } else {
        format!("{sign}{mantissa}e{e}")
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
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
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
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

impl PartialEq for Dd {
    fn eq(&self, o: &Dd) -> bool {
        self.hi == o.hi && self.lo == o.lo
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn arithmetic_beats_f64() {
        // (1 + 2⁻⁷⁰) - 1 is invisible in f64, visible in Dd.
        let tiny = Dd::from_f64(2f64.powi(-70));
        let x = Dd::ONE + tiny;
        let back = x - Dd::ONE;
        assert_eq!(back.to_f64(), 2f64.powi(-70));

        // 1/3 to ~31 digits: 3 * (1/3) - 1 ≈ 0 well below f64 eps.
        let third = Dd::ONE / Dd::from_f64(3.0);
        let err = (Dd::from_f64(3.0) * third - Dd::ONE).abs();
        assert!(err.to_f64() < 1e-31);
    }

    #[test]
    fn sqrt_accuracy() {
        let two = Dd::from_f64(2.0);
        let s = two.sqrt();
        let err = (s * s - two).abs();
        assert!(err.to_f64() < 1e-30, "err = {}", err.to_f64());
    }

    #[test]
    fn from_rat_exact() {
        let r = rat(1, 3);
        let d = Dd::from_rat(&r);
        let err = (d * Dd::from_f64(3.0) - Dd::ONE).abs();
        assert!(err.to_f64() < 1e-31);
        // Large numerator survives.
        let r = rat(123456789012345678, 1);
        let d = Dd::from_rat(&r);
        assert_eq!(d.hi as i128 + d.lo as i128, 123456789012345678i128);
    }

    #[test]
    fn decimal_strings() {
        let third = Dd::ONE / Dd::from_f64(3.0);
        let s = third.to_decimal_string(30);
        assert!(s.starts_with("3.3333333333333333333333333333"), "{s}");
        assert!(s.ends_with("e-1"), "{s}");
        assert_eq!(Dd::ZERO.to_decimal_string(10), "0");
        let neg = -Dd::from_f64(1.5);
        assert!(neg.to_decimal_string(5).starts_with("-1.5000"));
    }

    #[test]
    fn ordering() {
        let a = Dd::ONE;
        let b = Dd::ONE + Dd::from_f64(1e-25);
        assert!(a < b);
        assert!(b > a);
        assert!(a == a);
    }
}
