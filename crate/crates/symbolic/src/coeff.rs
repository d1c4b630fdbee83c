//! Exact Gaussian-rational coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of Q(i), stored as a pair of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self::new(&self.re / &norm, -&self.im / &norm))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    /// Components as `[re_num, re_den, im_num, im_den]`, if they fit in `i64`.
    pub fn to_i64_parts(&self) -> Option<[i64; 4]> {
        Some([
            self.re.numer().to_i64()?,
            self.re.denom().to_i64()?,
            self.im.numer().to_i64()?,
            self.im.denom().to_i64()?,
        ])
    }

    pub fn from_i64_parts(p: [i64; 4]) -> Option<Self> {
        if p[1] == 0 || p[3] == 0 {
            return None;
        }
        Some(Self::new(
            BigRational::new(p[0].into(), p[1].into()),
            BigRational::new(p[2].into(), p[3].into()),
        ))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-self.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&self.re, f)?;
                if self.im.is_positive() {
                    write!(f, " + ")?;
                    fmt_rational(&self.im, f)?;
                } else {
                    write!(f, " - ")?;
                    fmt_rational(&-self.im.clone(), f)?;
                }
                write!(f, "i)")
            }
        }
    }
}

impl<'a> Add<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn add(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn sub(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn mul(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re, -self.im)
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussQ> for GaussQ {
    fn add_assign(&mut self, o: &GaussQ) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations() {
        let a = GaussQ::from_ratio(3, 4);
        let b = &GaussQ::i() * &GaussQ::from_int(2);
        let p = &a * &b;
        assert_eq!(p, GaussQ::new(BigRational::zero(), BigRational::new(3.into(), 2.into())));
        let q = p.div(&b).unwrap();
        assert_eq!(q, a);
        assert!(GaussQ::zero().recip().is_none());
        let z = &(&a + &b) * &(&a + &b).recip().unwrap();
        assert!(z.is_one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussQ::from_ratio(-1, 24).to_string(), "-1/24");
        assert_eq!((&GaussQ::i() * &GaussQ::from_ratio(1, 24)).to_string(), "1/24i");
        let mixed = &GaussQ::from_int(1) + &(&GaussQ::i() * &GaussQ::from_int(-2));
        assert_eq!(mixed.to_string(), "(1 - 2i)");
    }

    #[test]
    fn i64_parts_round_trip() {
        let c = &GaussQ::from_ratio(5, 6) + &(&GaussQ::i() * &GaussQ::from_ratio(-7, 3));
        let parts = c.to_i64_parts().unwrap();
        assert_eq!(parts, [5, 6, -7, 3]);
        assert_eq!(GaussQ::from_i64_parts(parts).unwrap(), c);
        assert!(GaussQ::from_i64_parts([1, 0, 0, 1]).is_none());
    }
}
