//! Closed-form expressions in `q, s1..sr, t1, t2` and their expansion under
//! `q = -e^{iu}`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gauss::GaussRational;
use super::ratfunc::RatFunc2;
use super::rational::{factorial, fmt_rational, int, Rational};
use super::series::{monomial_name, Orders, TruncSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum QExpr {
    Const(GaussRational),
    Q,
    S(usize),
    T1,
    T2,
    Add(Box<QExpr>, Box<QExpr>),
    Sub(Box<QExpr>, Box<QExpr>),
    Mul(Box<QExpr>, Box<QExpr>),
    Div(Box<QExpr>, Box<QExpr>),
    Neg(Box<QExpr>),
    Pow(Box<QExpr>, i64),
}

impl QExpr {
    pub fn int(n: i64) -> Self {
        QExpr::Const(GaussRational::real(int(n)))
    }

    pub fn rational(c: Rational) -> Self {
        QExpr::Const(GaussRational::real(c))
    }

    pub fn i() -> Self {
        QExpr::Const(GaussRational::i())
    }

    pub fn q() -> Self {
        QExpr::Q
    }

    pub fn s(l: usize) -> Self {
        QExpr::S(l)
    }

    pub fn t1() -> Self {
        QExpr::T1
    }

    pub fn t2() -> Self {
        QExpr::T2
    }

    pub fn pow(self, e: i64) -> Self {
        QExpr::Pow(Box::new(self), e)
    }

    pub fn mentions_q(&self) -> bool {
        match self {
            QExpr::Q => true,
            QExpr::Const(_) | QExpr::S(_) | QExpr::T1 | QExpr::T2 => false,
            QExpr::Add(a, b) | QExpr::Sub(a, b) | QExpr::Mul(a, b) | QExpr::Div(a, b) => {
                a.mentions_q() || b.mentions_q()
            }
            QExpr::Neg(a) | QExpr::Pow(a, _) => a.mentions_q(),
        }
    }

    /// Exact value at a rational point. `q` may be any nonzero rational.
    pub fn eval(&self, t1: &Rational, t2: &Rational, s: &[Rational], q: &Rational) -> Result<GaussRational> {
        Ok(match self {
            QExpr::Const(c) => c.clone(),
            QExpr::Q => GaussRational::real(q.clone()),
            QExpr::S(l) => GaussRational::real(
                s.get(l.wrapping_sub(1))
                    .ok_or(Error::IndexOutOfRange { what: "s-variable", index: *l, max: s.len() })?
                    .clone(),
            ),
            QExpr::T1 => GaussRational::real(t1.clone()),
            QExpr::T2 => GaussRational::real(t2.clone()),
            QExpr::Add(a, b) => &a.eval(t1, t2, s, q)? + &b.eval(t1, t2, s, q)?,
            QExpr::Sub(a, b) => &a.eval(t1, t2, s, q)? - &b.eval(t1, t2, s, q)?,
            QExpr::Mul(a, b) => &a.eval(t1, t2, s, q)? * &b.eval(t1, t2, s, q)?,
            QExpr::Div(a, b) => {
                let d = b.eval(t1, t2, s, q)?;
                let inv = d.inv().ok_or_else(|| Error::Pole(format!("denominator {b} vanishes")))?;
                &a.eval(t1, t2, s, q)? * &inv
            }
            QExpr::Neg(a) => -a.eval(t1, t2, s, q)?,
            QExpr::Pow(a, e) => {
                let base = a.eval(t1, t2, s, q)?;
                let base = if *e < 0 {
                    base.inv().ok_or_else(|| Error::Pole(format!("negative power of zero in {a}")))?
                } else {
                    base
                };
                (0..e.unsigned_abs()).fold(GaussRational::one(), |acc, _| &acc * &base)
            }
        })
    }

    pub fn to_latex(&self) -> String {
        match self {
            QExpr::Const(c) => latex_const(c),
            QExpr::Q => "q".into(),
            QExpr::S(l) => format!("s_{{{l}}}"),
            QExpr::T1 => "t_1".into(),
            QExpr::T2 => "t_2".into(),
            QExpr::Add(a, b) => format!("{} + {}", a.to_latex(), b.to_latex()),
            QExpr::Sub(a, b) => format!("{} - {}", a.to_latex(), wrap_latex(b, 1)),
            QExpr::Mul(a, b) => format!("{} {}", wrap_latex(a, 2), wrap_latex(b, 2)),
            QExpr::Div(a, b) => format!("\\frac{{{}}}{{{}}}", a.to_latex(), b.to_latex()),
            QExpr::Neg(a) => format!("-{}", wrap_latex(a, 2)),
            QExpr::Pow(a, e) => format!("{}^{{{e}}}", wrap_latex(a, 3)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            QExpr::Add(..) | QExpr::Sub(..) => 1,
            QExpr::Mul(..) | QExpr::Div(..) | QExpr::Neg(..) => 2,
            QExpr::Pow(..) => 3,
            QExpr::Const(c) if !c.re.is_zero() && !c.im.is_zero() => 1,
            QExpr::Const(c) if c.re < Rational::zero() || c.im < Rational::zero() => 2,
            _ => 4,
        }
    }
}

fn latex_const(c: &GaussRational) -> String {
    let part = |x: &Rational| {
        if x.is_integer() {
            fmt_rational(x)
        } else {
            let sign = if *x < Rational::zero() { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", x.numer().magnitude(), x.denom())
        }
    };
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => part(&c.re),
        (true, false) if c.im.is_one() => "i".into(),
        (true, false) => format!("{}i", part(&c.im)),
        _ => format!("{} + {}i", part(&c.re), part(&c.im)),
    }
}

fn wrap_latex(e: &QExpr, min: u8) -> String {
    if e.prec() < min {
        format!("\\left({}\\right)", e.to_latex())
    } else {
        e.to_latex()
    }
}

fn wrap(e: &QExpr, min: u8) -> String {
    if e.prec() < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for QExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QExpr::Const(c) => write!(f, "{c}"),
            QExpr::Q => write!(f, "q"),
            QExpr::S(l) => write!(f, "s{l}"),
            QExpr::T1 => write!(f, "t1"),
            QExpr::T2 => write!(f, "t2"),
            QExpr::Add(a, b) => write!(f, "{a} + {b}"),
            QExpr::Sub(a, b) => write!(f, "{a} - {}", wrap(b, 2)),
            QExpr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            QExpr::Div(a, b) => write!(f, "{}/{}", wrap(a, 2), wrap(b, 3)),
            QExpr::Neg(a) => write!(f, "-{}", wrap(a, 3)),
            QExpr::Pow(a, e) => write!(f, "{}^{e}", wrap(a, 4)),
        }
    }
}

macro_rules! qexpr_op {
    ($tr:ident, $m:ident, $var:ident) => {
        impl $tr for QExpr {
            type Output = QExpr;
            fn $m(self, o: QExpr) -> QExpr {
                QExpr::$var(Box::new(self), Box::new(o))
            }
        }
    };
}
qexpr_op!(Add, add, Add);
qexpr_op!(Sub, sub, Sub);
qexpr_op!(Mul, mul, Mul);
qexpr_op!(Div, div, Div);

impl Neg for QExpr {
    type Output = QExpr;
    fn neg(self) -> QExpr {
        QExpr::Neg(Box::new(self))
    }
}

/// A series with Gaussian-rational structure, kept as real and imaginary
/// parts over `Q(t1, t2)`.
#[derive(Clone, Debug, PartialEq)]
struct ComplexSeries {
    re: TruncSeries,
    im: TruncSeries,
}

impl ComplexSeries {
    fn real(re: TruncSeries) -> Self {
        let im = TruncSeries::zero(re.orders().clone());
        ComplexSeries { re, im }
    }

    fn constant(orders: &Orders, c: &GaussRational) -> Self {
        ComplexSeries {
            re: TruncSeries::constant(orders.clone(), RatFunc2::from_rational(c.re.clone())),
            im: TruncSeries::constant(orders.clone(), RatFunc2::from_rational(c.im.clone())),
        }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(ComplexSeries { re: self.re.add(&o.re)?, im: self.im.add(&o.im)? })
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Ok(ComplexSeries { re: self.re.sub(&o.re)?, im: self.im.sub(&o.im)? })
    }

    fn neg(&self) -> Self {
        ComplexSeries { re: self.re.neg(), im: self.im.neg() }
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        let re = self.re.mul(&o.re)?.sub(&self.im.mul(&o.im)?)?;
        let im = self.re.mul(&o.im)?.add(&self.im.mul(&o.re)?)?;
        Ok(ComplexSeries { re, im })
    }

    /// `1/(x + iy) = (x − iy)/(x² + y²)`.
    fn inverse(&self) -> Result<Self> {
        let norm = self.re.mul(&self.re)?.add(&self.im.mul(&self.im)?)?;
        let ninv = norm.inverse()?;
        Ok(ComplexSeries { re: self.re.mul(&ninv)?, im: self.im.neg().mul(&ninv)? })
    }

    fn pow(&self, e: u32) -> Result<Self> {
        let orders = self.re.orders().clone();
        let mut acc = ComplexSeries::real(TruncSeries::one(orders));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// `-e^{iu}` truncated at `u^A`.
fn minus_exp_iu(orders: &Orders) -> ComplexSeries {
    let mut re = TruncSeries::zero(orders.clone());
    let mut im = TruncSeries::zero(orders.clone());
    let mut key = vec![0; orders.r() + 1];
    for m in 0..=orders.u {
        key[0] = m;
        let c = Rational::new(1.into(), factorial(m));
        // -(i^m) u^m / m!
        let ip = GaussRational::i_pow(m as i64);
        let c = RatFunc2::from_rational(-c);
        if !ip.re.is_zero() {
            re.add_coeff(&key, &c.scale(&ip.re));
        } else {
            im.add_coeff(&key, &c.scale(&ip.im));
        }
    }
    ComplexSeries { re, im }
}

fn expand(e: &QExpr, orders: &Orders, q: &ComplexSeries) -> Result<ComplexSeries> {
    Ok(match e {
        QExpr::Const(c) => ComplexSeries::constant(orders, c),
        QExpr::Q => q.clone(),
        QExpr::S(l) => ComplexSeries::real(TruncSeries::s(orders.clone(), *l)?),
        QExpr::T1 => ComplexSeries::real(TruncSeries::constant(orders.clone(), RatFunc2::t1())),
        QExpr::T2 => ComplexSeries::real(TruncSeries::constant(orders.clone(), RatFunc2::t2())),
        QExpr::Add(a, b) => expand(a, orders, q)?.add(&expand(b, orders, q)?)?,
        QExpr::Sub(a, b) => expand(a, orders, q)?.sub(&expand(b, orders, q)?)?,
        QExpr::Mul(a, b) => expand(a, orders, q)?.mul(&expand(b, orders, q)?)?,
        QExpr::Div(a, b) => {
            let den = expand(b, orders, q)?;
            let inv = den
                .inverse()
                .map_err(|_| Error::PoleAtOrigin(format!("denominator {b} vanishes at u = s = 0")))?;
            expand(a, orders, q)?.mul(&inv)?
        }
        QExpr::Neg(a) => expand(a, orders, q)?.neg(),
        QExpr::Pow(a, k) => {
            let base = expand(a, orders, q)?;
            let base = if *k < 0 {
                base.inverse()
                    .map_err(|_| Error::PoleAtOrigin(format!("negative power of {a} at u = s = 0")))?
            } else {
                base
            };
            base.pow(k.unsigned_abs() as u32)?
        }
    })
}

/// Substitutes `q = -e^{iu}` and expands in the box `orders`. The result must
/// be real; a surviving imaginary coefficient is reported, never dropped.
pub fn expand_q_closed_form(e: &QExpr, orders: &Orders) -> Result<TruncSeries> {
    let q = minus_exp_iu(orders);
    let z = expand(e, orders, &q)?;
    if let Some((k, v)) = z.im.terms().next() {
        return Err(Error::RealnessViolation { monomial: monomial_name(k), value: v.to_string() });
    }
    Ok(z.re)
}
