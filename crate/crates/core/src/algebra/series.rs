//! Truncated power series in `u, s1..sr` with rational-function coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ratfunc::RatFunc2;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// Truncation box: `u^a` with `a <= u` and `s_k^{d_k}` with `d_k <= s[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orders {
    pub u: u32,
    pub s: Vec<u32>,
}

impl Orders {
    pub fn new(u: u32, s: Vec<u32>) -> Self {
        Orders { u, s }
    }

    pub fn r(&self) -> usize {
        self.s.len()
    }

    pub fn contains(&self, key: &[u32]) -> bool {
        key.len() == self.s.len() + 1 && key[0] <= self.u && key[1..].iter().zip(&self.s).all(|(d, m)| d <= m)
    }

    /// Every exponent vector in the box, `u` slowest.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &m in std::iter::once(&self.u).chain(&self.s) {
            out = out
                .into_iter()
                .flat_map(|k| {
                    (0..=m).map(move |d| {
                        let mut k = k.clone();
                        k.push(d);
                        k
                    })
                })
                .collect();
        }
        out
    }

    fn total(&self) -> u32 {
        self.u + self.s.iter().sum::<u32>()
    }
}

/// Keys are `[a, d1, .., dr]`. Only nonzero in-box coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct TruncSeries {
    orders: Orders,
    coeffs: BTreeMap<Vec<u32>, RatFunc2>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    u_order: u32,
    s_orders: Vec<u32>,
    terms: Vec<(Vec<u32>, RatFunc2)>,
}

impl From<TruncSeries> for SeriesRepr {
    fn from(s: TruncSeries) -> Self {
        SeriesRepr { u_order: s.orders.u, s_orders: s.orders.s, terms: s.coeffs.into_iter().collect() }
    }
}

impl TryFrom<SeriesRepr> for TruncSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        let mut out = TruncSeries::zero(Orders::new(r.u_order, r.s_orders));
        for (k, c) in r.terms {
            if !out.orders.contains(&k) {
                return Err(Error::Shape(format!("monomial {k:?} outside truncation box")));
            }
            out.add_coeff(&k, &c);
        }
        Ok(out)
    }
}

impl TruncSeries {
    pub fn zero(orders: Orders) -> Self {
        TruncSeries { orders, coeffs: BTreeMap::new() }
    }

    pub fn constant(orders: Orders, c: RatFunc2) -> Self {
        let key = vec![0; orders.r() + 1];
        Self::monomial(orders, &key, c)
    }

    pub fn one(orders: Orders) -> Self {
        Self::constant(orders, RatFunc2::one())
    }

    /// `c·u^a·Π s^d` for `key = [a, d..]`; dropped if outside the box.
    pub fn monomial(orders: Orders, key: &[u32], c: RatFunc2) -> Self {
        let mut s = Self::zero(orders);
        if s.orders.contains(key) {
            s.add_coeff(key, &c);
        }
        s
    }

    pub fn u(orders: Orders) -> Self {
        let mut key = vec![0; orders.r() + 1];
        key[0] = 1;
        Self::monomial(orders, &key, RatFunc2::one())
    }

    /// `s_l` for `1 <= l <= r`.
    pub fn s(orders: Orders, l: usize) -> Result<Self> {
        check_index(l, orders.r())?;
        let mut key = vec![0; orders.r() + 1];
        key[l] = 1;
        Ok(Self::monomial(orders, &key, RatFunc2::one()))
    }

    pub fn orders(&self) -> &Orders {
        &self.orders
    }

    pub fn coeff(&self, key: &[u32]) -> RatFunc2 {
        self.coeffs.get(key).cloned().unwrap_or_else(RatFunc2::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RatFunc2)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c` at `key`; caller guarantees `key` is in the box.
    pub fn add_coeff(&mut self, key: &[u32], c: &RatFunc2) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(key) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.coeffs.remove(key);
                }
            }
            None => {
                self.coeffs.insert(key.to_vec(), c.clone());
            }
        }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.orders != o.orders {
            return Err(Error::Shape(format!(
                "truncation orders differ: {:?} vs {:?}",
                self.orders, o.orders
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_coeff(k, c);
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut out = Self::zero(self.orders.clone());
        let mut key = vec![0; self.orders.r() + 1];
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &o.coeffs {
                for (i, slot) in key.iter_mut().enumerate() {
                    *slot = k1[i] + k2[i];
                }
                if out.orders.contains(&key) {
                    out.add_coeff(&key, &(c1 * c2));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatFunc2) -> Self {
        if c.is_zero() {
            return Self::zero(self.orders.clone());
        }
        self.map(|x| x * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&RatFunc2::from_rational(c.clone()))
    }

    fn map(&self, f: impl Fn(&RatFunc2) -> RatFunc2) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.clone(), f(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        TruncSeries { orders: self.orders.clone(), coeffs }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.orders.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse via the geometric series of the nilpotent part.
    pub fn inverse(&self) -> Result<Self> {
        let zero_key = vec![0; self.orders.r() + 1];
        let c0 = self.coeff(&zero_key);
        let c0_inv = c0
            .inv()
            .ok_or_else(|| Error::PoleAtOrigin("constant term is zero".into()))?;
        let mut nil = self.scale(&c0_inv);
        nil.coeffs.remove(&zero_key);
        let nil = nil.neg();
        let mut acc = Self::one(self.orders.clone());
        let mut power = Self::one(self.orders.clone());
        for _ in 0..self.orders.total() {
            power = power.mul(&nil)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0_inv))
    }

    /// `d/du`. The result has u-order one less, since the top coefficient
    /// would need data beyond the box.
    pub fn d_du(&self) -> Result<Self> {
        if self.orders.u == 0 {
            return Err(Error::EmptyOrder);
        }
        let orders = Orders::new(self.orders.u - 1, self.orders.s.clone());
        let mut out = Self::zero(orders);
        for (k, c) in &self.coeffs {
            if k[0] == 0 {
                continue;
            }
            let mut key = k.clone();
            key[0] -= 1;
            out.add_coeff(&key, &c.scale(&int(k[0] as i64)));
        }
        Ok(out)
    }

    /// `s_l ∂/∂s_l`, which keeps the truncation box.
    pub fn s_scale_d(&self, l: usize) -> Result<Self> {
        check_index(l, self.orders.r())?;
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| k[l] > 0)
            .map(|(k, c)| (k.clone(), c.scale(&int(k[l] as i64))))
            .collect();
        Ok(TruncSeries { orders: self.orders.clone(), coeffs })
    }

    /// Restriction to a smaller box. Errors if `orders` is not contained.
    pub fn truncate(&self, orders: &Orders) -> Result<Self> {
        if orders.r() != self.orders.r()
            || orders.u > self.orders.u
            || orders.s.iter().zip(&self.orders.s).any(|(a, b)| a > b)
        {
            return Err(Error::Shape(format!("cannot truncate {:?} to {:?}", self.orders, orders)));
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| orders.contains(k))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        Ok(TruncSeries { orders: orders.clone(), coeffs })
    }

    /// The part with all `s` exponents zero.
    pub fn at_s_zero(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| k[1..].iter().all(|&d| d == 0))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        TruncSeries { orders: self.orders.clone(), coeffs }
    }

    /// The part with some positive `s` exponent.
    pub fn s_positive_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| k[1..].iter().any(|&d| d > 0))
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        TruncSeries { orders: self.orders.clone(), coeffs }
    }

    /// Evaluates the truncated polynomial at a rational point. This is the
    /// value of the truncation, not of the underlying function.
    pub fn eval_truncated(&self, t1: &Rational, t2: &Rational, u: &Rational, s: &[Rational]) -> Result<Rational> {
        if s.len() != self.orders.r() {
            return Err(Error::Shape(format!("expected {} s-values, got {}", self.orders.r(), s.len())));
        }
        let mut acc = Rational::zero();
        for (k, c) in &self.coeffs {
            let mut m = c.eval(t1, t2)?;
            m *= pow_u(u, k[0]);
            for (x, &d) in s.iter().zip(&k[1..]) {
                m *= pow_u(x, d);
            }
            acc += m;
        }
        Ok(acc)
    }
}

fn pow_u(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |a, _| a * x)
}

fn check_index(l: usize, r: usize) -> Result<()> {
    if l == 0 || l > r {
        return Err(Error::IndexOutOfRange { what: "s-variable", index: l, max: r });
    }
    Ok(())
}

/// Monomial text, e.g. `u^2*s1^3`; `1` for the constant monomial.
pub fn monomial_name(key: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in key.iter().enumerate() {
        let v = if i == 0 { "u".to_string() } else { format!("s{i}") };
        match e {
            0 => {}
            1 => parts.push(v),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("({c})*{}", monomial_name(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn o(u: u32, s: &[u32]) -> Orders {
        Orders::new(u, s.to_vec())
    }

    #[test]
    fn one_plus_u_times_one_minus_u() {
        let one = TruncSeries::one(o(2, &[]));
        let u = TruncSeries::u(o(2, &[]));
        let p = one.add(&u).unwrap().mul(&one.sub(&u).unwrap()).unwrap();
        let expect = one.sub(&u.mul(&u).unwrap()).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn geometric_series_telescopes() {
        let ord = o(0, &[5]);
        let s = TruncSeries::s(ord.clone(), 1).unwrap();
        let mut geo = TruncSeries::zero(ord.clone());
        for d in 0..=5 {
            geo = geo.add(&s.pow(d).unwrap()).unwrap();
        }
        let one = TruncSeries::one(ord);
        assert_eq!(geo.mul(&one.sub(&s).unwrap()).unwrap(), one);
        assert_eq!(one.sub(&s).unwrap().inverse().unwrap(), geo);
    }

    #[test]
    fn truncation_drops_high_terms() {
        let u = TruncSeries::u(o(1, &[]));
        assert!(u.mul(&u).unwrap().is_zero());
        assert!(u.add(&TruncSeries::u(o(2, &[]))).is_err());
    }

    #[test]
    fn derivatives() {
        let ord = o(2, &[]);
        let f = TruncSeries::monomial(ord.clone(), &[2], RatFunc2::int(3));
        assert_eq!(f.d_du().unwrap(), TruncSeries::monomial(o(1, &[]), &[1], RatFunc2::int(6)));
        assert!(TruncSeries::one(ord).d_du().unwrap().is_zero());
        assert_eq!(TruncSeries::one(o(0, &[])).d_du(), Err(Error::EmptyOrder));

        let mut exp = TruncSeries::zero(o(4, &[]));
        for a in 0..=4u32 {
            let c = Rational::new(1.into(), crate::algebra::rational::factorial(a));
            exp.add_coeff(&[a], &RatFunc2::from_rational(c));
        }
        assert_eq!(exp.d_du().unwrap(), exp.truncate(&o(3, &[])).unwrap());
    }

    #[test]
    fn s_scale_derivative() {
        let ord = o(0, &[4, 2]);
        let s1 = TruncSeries::s(ord.clone(), 1).unwrap();
        let s2 = TruncSeries::s(ord.clone(), 2).unwrap();
        let c = s1.pow(3).unwrap();
        assert_eq!(c.s_scale_d(1).unwrap(), c.scale_rational(&int(3)));
        assert!(s2.s_scale_d(1).unwrap().is_zero());
        assert!(s1.s_scale_d(3).is_err());
        let mut log = TruncSeries::zero(ord.clone());
        let mut geo = TruncSeries::zero(ord);
        for d in 1..=4u32 {
            log.add_coeff(&[0, d, 0], &RatFunc2::from_rational(rat(1, d as i64)));
            geo.add_coeff(&[0, d, 0], &RatFunc2::one());
        }
        assert_eq!(log.s_scale_d(1).unwrap(), geo);
    }

    #[test]
    fn json_roundtrip() {
        let ord = o(1, &[2]);
        let mut f = TruncSeries::zero(ord);
        f.add_coeff(&[1, 2], &"(t1 + t2)/(t1*t2)".parse().unwrap());
        f.add_coeff(&[0, 0], &RatFunc2::int(-4));
        let text = serde_json::to_string(&f).unwrap();
        let back: TruncSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
