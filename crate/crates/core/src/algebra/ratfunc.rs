//! Rational functions in `t1`, `t2` in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly2::Poly2;
use super::rational::{denom_lcm_numer_gcd, int, Rational};
use crate::error::{Error, Result};

/// `num/den` with `gcd(num, den) = 1`, `den` an integer-primitive polynomial
/// whose leading (t1-major lex) coefficient is positive. Zero is `0/1`.
/// Canonical form makes structural equality coincide with equality of
/// functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc2 {
    num: Poly2,
    den: Poly2,
}

impl RatFunc2 {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Malformed("rational function with zero denominator".into()));
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let (l, g) = denom_lcm_numer_gcd(den.terms().map(|(_, c)| c));
        let mut scale = Rational::new(l, g);
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            scale = -scale;
        }
        RatFunc2 { num: num.scale(&scale), den: den.scale(&scale) }
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self::normalize(p, Poly2::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::from_rational(int(c))
    }

    pub fn zero() -> Self {
        RatFunc2 { num: Poly2::zero(), den: Poly2::one() }
    }

    pub fn one() -> Self {
        RatFunc2 { num: Poly2::one(), den: Poly2::one() }
    }

    pub fn t1() -> Self {
        Self::from_poly(Poly2::t1())
    }

    pub fn t2() -> Self {
        Self::from_poly(Poly2::t2())
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a pure rational, if it is constant.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| self.num.constant_term() / self.den.constant_term())
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly2> {
        self.is_poly().then_some(&self.num)
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        RatFunc2 { num: base.num.pow(e.unsigned_abs() as u32), den: base.den.pow(e.unsigned_abs() as u32) }
            .renormalized()
    }

    fn renormalized(self) -> Self {
        Self::normalize(self.num, self.den)
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Result<Rational> {
        let d = self.den.eval(t1, t2);
        if d.is_zero() {
            return Err(Error::Pole(format!("denominator {} vanishes at t1={t1}, t2={t2}", self.den)));
        }
        Ok(self.num.eval(t1, t2) / d)
    }
}

impl Default for RatFunc2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly2> for RatFunc2 {
    fn from(p: Poly2) -> Self {
        Self::from_poly(p)
    }
}

impl From<Rational> for RatFunc2 {
    fn from(c: Rational) -> Self {
        Self::from_rational(c)
    }
}

impl<'a> Add<&'a RatFunc2> for &'a RatFunc2 {
    type Output = RatFunc2;
    fn add(self, o: &RatFunc2) -> RatFunc2 {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc2::normalize(&self.num + &o.num, self.den.clone());
        }
        RatFunc2::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> Sub<&'a RatFunc2> for &'a RatFunc2 {
    type Output = RatFunc2;
    fn sub(self, o: &RatFunc2) -> RatFunc2 {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc2> for &'a RatFunc2 {
    type Output = RatFunc2;
    fn mul(self, o: &RatFunc2) -> RatFunc2 {
        if self.is_zero() || o.is_zero() {
            return RatFunc2::zero();
        }
        if self.is_poly() && o.is_poly() {
            return RatFunc2::from_poly(&self.num * &o.num);
        }
        RatFunc2::normalize(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RatFunc2> for &'a RatFunc2 {
    type Output = RatFunc2;
    /// Panics on division by zero.
    fn div(self, o: &RatFunc2) -> RatFunc2 {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Neg for &RatFunc2 {
    type Output = RatFunc2;
    fn neg(self) -> RatFunc2 {
        RatFunc2 { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc2 {
    type Output = RatFunc2;
    fn neg(self) -> RatFunc2 {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc2 {
            type Output = RatFunc2;
            fn $m(self, o: RatFunc2) -> RatFunc2 {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl fmt::Display for RatFunc2 {
    /// `num` when the denominator is 1, otherwise `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for RatFunc2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_ratfunc(s)
    }
}

impl Serialize for RatFunc2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RatFunc2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl One for RatFunc2 {
    fn one() -> Self {
        RatFunc2::one()
    }
}

impl Zero for RatFunc2 {
    fn zero() -> Self {
        RatFunc2::zero()
    }
    fn is_zero(&self) -> bool {
        RatFunc2::is_zero(self)
    }
}
