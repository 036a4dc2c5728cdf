//! Sparse polynomials in the equivariant parameters `t1`, `t2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly1::Poly1;
use super::rational::{fmt_rational, int, Rational};

/// Exponent pair `(deg_t1, deg_t2)`. The derived tuple order is t1-major, so
/// the last key of the map is the lexicographically leading monomial.
pub type Exp2 = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly2 {
    terms: BTreeMap<Exp2, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial((0, 0), c)
    }

    pub fn int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn monomial(e: Exp2, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly2 { terms }
    }

    pub fn t1() -> Self {
        Self::monomial((1, 0), Rational::one())
    }

    pub fn t2() -> Self {
        Self::monomial((0, 1), Rational::one())
    }

    /// `a·t1 + b·t2`
    pub fn linear(a: i64, b: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((1, 0), int(a));
        p.add_term((0, 1), int(b));
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Exp2, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp2, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exp2) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: Exp2, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff((0, 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Exp2, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn deg_t1(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0 + e.1).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn eval(&self, t1: &Rational, t2: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((a, b), c)| {
            acc + c * pow_u(t1, *a) * pow_u(t2, *b)
        })
    }

    /// Reduction modulo `t1 + t2`: substitutes `t2 = -t1`.
    pub fn mod_t1_plus_t2(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a, b), c) in &self.terms {
            let c = if b % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term((a + b, 0), c);
        }
        out
    }

    /// Exact division by lexicographic reduction; `None` if `d` does not
    /// divide `self`.
    pub fn div_exact(&self, d: &Poly2) -> Option<Poly2> {
        let (&(da, db), dc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some((&(ra, rb), rc)) = rem.leading() {
            if ra < da || rb < db {
                return None;
            }
            let e = (ra - da, rb - db);
            let c = rc / dc;
            let step = Poly2::monomial(e, c.clone());
            rem = &rem - &(&step * d);
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// View as a polynomial in `t1` with coefficients in `Q[t2]`.
    fn to_rec(&self) -> Vec<Poly1> {
        let deg = match self.deg_t1() {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut dense: Vec<Vec<Rational>> = vec![Vec::new(); deg + 1];
        for (&(a, b), c) in &self.terms {
            let row = &mut dense[a as usize];
            if row.len() <= b as usize {
                row.resize(b as usize + 1, Rational::zero());
            }
            row[b as usize] = c.clone();
        }
        dense.into_iter().map(Poly1::new).collect()
    }

    fn from_rec(rec: &[Poly1]) -> Poly2 {
        let mut p = Poly2::zero();
        for (a, row) in rec.iter().enumerate() {
            for (b, c) in row.coeffs().iter().enumerate() {
                p.add_term((a as u32, b as u32), c.clone());
            }
        }
        p
    }

    /// A greatest common divisor, up to a rational unit. Recursive
    /// content/primitive-part algorithm over `Q[t2][t1]`.
    pub fn gcd(&self, o: &Poly2) -> Poly2 {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.is_constant() || o.is_constant() {
            return Poly2::one();
        }
        let a = self.to_rec();
        let b = o.to_rec();
        let (ca, pa) = content_pp(&a);
        let (cb, pb) = content_pp(&b);
        let c = ca.gcd(&cb);
        let g = primitive_prs_gcd(pa, pb);
        let mut rec = g;
        for coeff in rec.iter_mut() {
            *coeff = coeff.mul(&c);
        }
        Poly2::from_rec(&rec)
    }
}

fn pow_u(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

fn trim(mut rec: Vec<Poly1>) -> Vec<Poly1> {
    while rec.last().is_some_and(Poly1::is_zero) {
        rec.pop();
    }
    rec
}

fn content_pp(rec: &[Poly1]) -> (Poly1, Vec<Poly1>) {
    let c = rec.iter().fold(Poly1::zero(), |g, x| g.gcd(x));
    if c.is_zero() {
        return (c, Vec::new());
    }
    let pp = rec
        .iter()
        .map(|x| x.div_exact(&c).expect("content divides every coefficient"))
        .collect();
    (c, pp)
}

/// Pseudo-remainder of `a` by `b` as polynomials in `t1`.
fn prem(a: &[Poly1], b: &[Poly1]) -> Vec<Poly1> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = x.mul(lb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&bj.mul(&lr));
        }
        r = trim(r);
    }
    r
}

fn primitive_prs_gcd(mut a: Vec<Poly1>, mut b: Vec<Poly1>) -> Vec<Poly1> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_empty() {
            return a;
        }
        if b.len() == 1 {
            // b is a primitive element of Q[t2], hence a unit.
            return vec![Poly1::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { content_pp(&r).1 };
    }
}

impl<'a> Add<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly2> for &'a Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, o: Poly2) -> Poly2 {
        &self + &o
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, o: Poly2) -> Poly2 {
        &self - &o
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, o: Poly2) -> Poly2 {
        &self * &o
    }
}

impl fmt::Display for Poly2 {
    /// Terms in decreasing t1-major order, e.g. `2*t1^2 - t1*t2 + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (a, b) == (0, 0) {
                factors.push(fmt_rational(&mag));
            }
            for (name, e) in [("t1", a), ("t2", b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> Poly2 {
        Poly2::linear(1, 1)
    }

    #[test]
    fn difference_of_squares_gcd() {
        let a = &Poly2::t1().pow(2) - &Poly2::t2().pow(2);
        let g = a.gcd(&theta());
        assert!(g.div_exact(&theta()).is_some_and(|q| q.is_constant()));
        assert_eq!(a.div_exact(&theta()).unwrap(), Poly2::linear(1, -1));
    }

    #[test]
    fn gcd_with_content_in_t2() {
        // t2*(t1 + 1) and t2^2*(t1 + 1)*(t1 - t2)
        let f = &Poly2::t2() * &(&Poly2::t1() + &Poly2::one());
        let g = &(&f * &Poly2::t2()) * &Poly2::linear(1, -1);
        let d = f.gcd(&g);
        assert!(f.div_exact(&d).unwrap().is_constant());
        assert!(g.div_exact(&d).is_some());
    }

    #[test]
    fn coprime_gcd_is_unit() {
        assert!(Poly2::linear(2, 0).gcd(&Poly2::linear(1, -1)).is_constant());
        assert!(Poly2::linear(1, 1).gcd(&Poly2::linear(1, -1)).is_constant());
    }

    #[test]
    fn display_is_t1_major() {
        let p = Poly2::from_terms([((0, 0), int(1)), ((1, 1), int(-3)), ((2, 0), int(2))]);
        assert_eq!(p.to_string(), "2*t1^2 - 3*t1*t2 + 1");
        assert_eq!(Poly2::linear(-1, 0).to_string(), "-t1");
    }

    #[test]
    fn inexact_division_is_none() {
        assert!(Poly2::t1().div_exact(&Poly2::t2()).is_none());
        assert!(Poly2::t1().div_exact(&theta()).is_none());
    }
}
