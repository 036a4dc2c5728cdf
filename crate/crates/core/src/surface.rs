//! Torus-equivariant geometry of the A_r resolution: fixed-point weights,
//! localized classes, integration and curve classes.

use std::fmt;

use num_traits::Zero;

use crate::algebra::field::{inverse, Matrix};
use crate::algebra::rational::{int, Rational};
use crate::algebra::{Poly2, RatFunc2};
use crate::error::{Error, Result};
use crate::partitions::ClassLabel;

/// Weights `(L_i, R_i)` of the tangent space at the fixed point `x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentWeights {
    r: usize,
    l: Vec<Poly2>,
    rw: Vec<Poly2>,
    /// `L_k R_k`
    euler: Vec<RatFunc2>,
}

impl TangentWeights {
    pub fn new(r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Malformed("A_r needs r >= 1".into()));
        }
        let ri = r as i64;
        let mut l = Vec::with_capacity(r + 1);
        let mut rw = Vec::with_capacity(r + 1);
        for i in 1..=ri + 1 {
            l.push(Poly2::linear(ri - i + 2, 1 - i));
            rw.push(Poly2::linear(-ri + i - 1, i));
        }
        let euler = l.iter().zip(&rw).map(|(a, b)| RatFunc2::from_poly(a * b)).collect();
        Ok(TangentWeights { r, l, rw, euler })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of fixed points, `r + 1`.
    pub fn points(&self) -> usize {
        self.r + 1
    }

    /// `L_k`, 1-based.
    pub fn left(&self, k: usize) -> &Poly2 {
        &self.l[k - 1]
    }

    /// `R_k`, 1-based.
    pub fn right(&self, k: usize) -> &Poly2 {
        &self.rw[k - 1]
    }

    /// `L_k R_k`, 1-based.
    pub fn euler(&self, k: usize) -> &RatFunc2 {
        &self.euler[k - 1]
    }

    fn check_point(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.points() {
            return Err(Error::IndexOutOfRange { what: "fixed point", index: k, max: self.points() });
        }
        Ok(())
    }

    fn check_curve(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.r {
            return Err(Error::IndexOutOfRange { what: "exceptional curve", index: k, max: self.r });
        }
        Ok(())
    }
}

/// A class stored by its restrictions to `x_1..x_{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceClass {
    pub coords: Vec<RatFunc2>,
}

impl SurfaceClass {
    pub fn zero(points: usize) -> Self {
        SurfaceClass { coords: vec![RatFunc2::zero(); points] }
    }

    pub fn add(&self, o: &Self) -> Self {
        SurfaceClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &RatFunc2) -> Self {
        SurfaceClass { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    /// Cup product, pointwise on restrictions.
    pub fn mul(&self, o: &Self) -> Self {
        SurfaceClass { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a * b).collect() }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(RatFunc2::to_string).collect();
        write!(f, "<{}>", s.join("; "))
    }
}

/// The localized class named by `label`.
pub fn class_of(label: &ClassLabel, w: &TangentWeights) -> Result<SurfaceClass> {
    let n = w.points();
    match label {
        ClassLabel::One => Ok(SurfaceClass { coords: vec![RatFunc2::one(); n] }),
        ClassLabel::FixedPt(k) => {
            w.check_point(*k)?;
            let mut c = SurfaceClass::zero(n);
            c.coords[k - 1] = w.euler(*k).clone();
            Ok(c)
        }
        ClassLabel::ECurve(i) => {
            w.check_curve(*i)?;
            let mut c = SurfaceClass::zero(n);
            c.coords[i - 1] = RatFunc2::from_poly(w.left(*i).clone());
            c.coords[*i] = RatFunc2::from_poly(w.right(i + 1).clone());
            Ok(c)
        }
        ClassLabel::Omega(k) => {
            w.check_curve(*k)?;
            let coeffs = omega_coefficients(w)?;
            let mut c = SurfaceClass::zero(n);
            for (j, cj) in coeffs[k - 1].iter().enumerate() {
                c = c.add(&class_of(&ClassLabel::ECurve(j + 1), w)?.scale(cj));
            }
            Ok(c)
        }
        ClassLabel::General(c) => {
            if c.coords.len() != n {
                return Err(Error::Shape(format!("class has {} restrictions, expected {n}", c.coords.len())));
            }
            Ok(c.clone())
        }
    }
}

/// Row `k` holds the coefficients of `ω_{k+1}` on `E_1..E_r`, from the
/// localized Gram system.
fn omega_coefficients(w: &TangentWeights) -> Result<Matrix<RatFunc2>> {
    let gram = e_gram(w)?;
    inverse(&gram)?.ok_or_else(|| Error::DegenerateBasis("exceptional-curve Gram matrix is singular".into()))
}

/// `∫ E_i E_j` by localization.
pub fn e_gram(w: &TangentWeights) -> Result<Matrix<RatFunc2>> {
    let es = (1..=w.r())
        .map(|i| class_of(&ClassLabel::ECurve(i), w))
        .collect::<Result<Vec<_>>>()?;
    Ok(es.iter().map(|a| es.iter().map(|b| integrate(a, b, w)).collect()).collect())
}

/// `Σ_k α_k β_k / (L_k R_k)`
pub fn integrate(a: &SurfaceClass, b: &SurfaceClass, w: &TangentWeights) -> RatFunc2 {
    let mut acc = RatFunc2::zero();
    for (k, (x, y)) in a.coords.iter().zip(&b.coords).enumerate() {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = &acc + &(&(x * y) / w.euler(k + 1));
    }
    acc
}

/// `∫ α`
pub fn integrate1(a: &SurfaceClass, w: &TangentWeights) -> RatFunc2 {
    integrate(a, &class_of(&ClassLabel::One, w).expect("One is always valid"), w)
}

/// The exceptional-curve intersection matrix: −2 on the diagonal, 1 for
/// neighbours.
pub fn cartan_entry(i: usize, j: usize) -> i64 {
    match i.abs_diff(j) {
        0 => -2,
        1 => 1,
        _ => 0,
    }
}

/// A curve class `Σ d_k E_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub d: Vec<i64>,
}

impl CurveClass {
    pub fn zero(r: usize) -> Self {
        CurveClass { d: vec![0; r] }
    }

    /// `d·(E_i + .. + E_j)`
    pub fn chain(r: usize, i: usize, j: usize, d: i64) -> Result<Self> {
        if i == 0 || j > r || i > j {
            return Err(Error::IndexOutOfRange { what: "curve chain", index: j.max(i), max: r });
        }
        let mut c = Self::zero(r);
        for k in i..=j {
            c.d[k - 1] = d;
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    /// `Some((i, j, d))` when the class is `d·E_{ij}` with `d > 0`.
    pub fn as_chain(&self) -> Option<(usize, usize, i64)> {
        let i = self.d.iter().position(|&x| x != 0)?;
        let j = self.d.iter().rposition(|&x| x != 0)?;
        let d = self.d[i];
        (d > 0 && self.d[i..=j].iter().all(|&x| x == d)).then_some((i + 1, j + 1, d))
    }
}

/// Exponents `β·ω_k`, which are the coefficients of `β` on the `E_k`.
pub fn curve_exponents(b: &CurveClass) -> Result<Vec<u32>> {
    b.d.iter()
        .map(|&x| u32::try_from(x).map_err(|_| Error::Malformed(format!("non-effective curve class {:?}", b.d))))
        .collect()
}

/// `E_{ij} · γ` for a label allowed on the connected-invariant path.
pub fn e_dot(g: &ClassLabel, i: usize, j: usize, r: usize) -> Result<Rational> {
    if i == 0 || j > r || i > j {
        return Err(Error::IndexOutOfRange { what: "curve chain", index: j.max(i), max: r });
    }
    let check = |m: usize| {
        if m == 0 || m > r {
            Err(Error::IndexOutOfRange { what: "exceptional curve", index: m, max: r })
        } else {
            Ok(())
        }
    };
    match g {
        ClassLabel::One => Ok(Rational::zero()),
        ClassLabel::ECurve(m) => {
            check(*m)?;
            Ok(int((i..=j).map(|k| cartan_entry(k, *m)).sum()))
        }
        ClassLabel::Omega(m) => {
            check(*m)?;
            Ok(int(i64::from((i..=j).contains(m))))
        }
        other => Err(Error::UnsupportedWeight(format!("{other} is neither 1 nor a divisor"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn rf(s: &str) -> RatFunc2 {
        s.parse().unwrap()
    }

    #[test]
    fn weights_r1() {
        let w = TangentWeights::new(1).unwrap();
        assert_eq!(w.left(1).to_string(), "2*t1");
        assert_eq!(w.left(2).to_string(), "t1 - t2");
        assert_eq!(w.right(1).to_string(), "-t1 + t2");
        assert_eq!(w.right(2).to_string(), "2*t2");
        assert_eq!(TangentWeights::new(2).unwrap().left(1).to_string(), "3*t1");
        assert!(TangentWeights::new(0).is_err());
    }

    #[test]
    fn r1_integrals() {
        let w = TangentWeights::new(1).unwrap();
        let one = class_of(&ClassLabel::One, &w).unwrap();
        let e = class_of(&ClassLabel::ECurve(1), &w).unwrap();
        let x1 = class_of(&ClassLabel::FixedPt(1), &w).unwrap();
        assert_eq!(integrate(&one, &one, &w), rf("1/(2*t1*t2)"));
        assert!(integrate(&e, &one, &w).is_zero());
        assert_eq!(integrate(&e, &e, &w), RatFunc2::int(-2));
        assert_eq!(integrate(&x1, &x1, &w), w.euler(1).clone());
        assert_eq!(integrate(&x1, &one, &w), RatFunc2::one());
        let om = class_of(&ClassLabel::Omega(1), &w).unwrap();
        assert_eq!(om, e.scale(&RatFunc2::from_rational(rat(-1, 2))));
        assert!(class_of(&ClassLabel::ECurve(2), &w).is_err());
    }

    #[test]
    fn e_dot_examples() {
        assert_eq!(e_dot(&ClassLabel::ECurve(1), 1, 1, 2).unwrap(), int(-2));
        assert_eq!(e_dot(&ClassLabel::ECurve(1), 1, 2, 2).unwrap(), int(-1));
        assert_eq!(e_dot(&ClassLabel::One, 1, 2, 2).unwrap(), int(0));
        assert_eq!(e_dot(&ClassLabel::Omega(2), 1, 2, 3).unwrap(), int(1));
        assert!(matches!(e_dot(&ClassLabel::FixedPt(1), 1, 1, 1), Err(Error::UnsupportedWeight(_))));
    }

    #[test]
    fn curve_bookkeeping() {
        let c = CurveClass::chain(4, 2, 3, 5).unwrap();
        assert_eq!(curve_exponents(&c).unwrap(), vec![0, 5, 5, 0]);
        assert_eq!(c.as_chain(), Some((2, 3, 5)));
        assert_eq!(curve_exponents(&CurveClass { d: vec![0, 1, 0] }).unwrap(), vec![0, 1, 0]);
        assert_eq!(curve_exponents(&CurveClass::zero(3)).unwrap(), vec![0, 0, 0]);
        assert_eq!(CurveClass { d: vec![1, 0, 1] }.as_chain(), None);
        assert_eq!(CurveClass { d: vec![1, 2] }.as_chain(), None);
    }
}
