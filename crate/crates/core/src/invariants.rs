//! Two-point extended invariants of nonzero degree and the divisor-equation
//! assembly of three-point functions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{factorial, int, pow_i, Rational};
use crate::algebra::{Orders, Poly2, RatFunc2, TruncSeries};
use crate::chenruan::pairing;
use crate::error::{Error, Result};
use crate::hurwitz::one_part_double_hurwitz;
use crate::partitions::{enumerate_sub_splittings, ClassLabel, WeightedPartition};
use crate::surface::{curve_exponents, e_dot, CurveClass, TangentWeights};

/// `(a, β)`: `a` simple `(2)`-markings and a curve class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedDegree {
    pub a: i64,
    pub beta: CurveClass,
}

impl TwistedDegree {
    pub fn new(a: i64, beta: CurveClass) -> Self {
        TwistedDegree { a, beta }
    }
}

fn check_weights(p: &WeightedPartition) -> Result<()> {
    for l in p.labels() {
        if matches!(l, ClassLabel::FixedPt(_) | ClassLabel::General(_)) {
            return Err(Error::UnsupportedWeight(format!("{l} in {p}: weights must be 1 or divisors")));
        }
    }
    Ok(())
}

fn check_labels_in_range(p: &WeightedPartition, r: usize) -> Result<()> {
    for l in p.labels() {
        if let ClassLabel::ECurve(m) | ClassLabel::Omega(m) = l {
            if *m == 0 || *m > r {
                return Err(Error::IndexOutOfRange { what: "exceptional curve", index: *m, max: r });
            }
        }
    }
    Ok(())
}

/// Connected two-point invariant `⟨μ(γ), ν(δ)⟩^conn_{(a,β)}`, a polynomial
/// in `t1, t2`.
pub fn connected_two_point(
    mu: &WeightedPartition,
    nu: &WeightedPartition,
    t: &TwistedDegree,
    w: &TangentWeights,
) -> Result<Poly2> {
    check_weights(mu)?;
    check_weights(nu)?;
    check_labels_in_range(mu, w.r())?;
    check_labels_in_range(nu, w.r())?;
    if mu.size() != nu.size() {
        return Err(Error::SizeMismatch { expected: mu.size(), found: nu.size() });
    }
    if t.beta.d.len() != w.r() {
        return Err(Error::Shape(format!("curve class has {} entries, expected r = {}", t.beta.d.len(), w.r())));
    }
    if t.beta.is_zero() {
        return Err(Error::OutOfScope("degree-zero invariants come from the zero-degree table".into()));
    }
    let k = mu.size();
    if t.a < 0 || k == 0 {
        return Ok(Poly2::zero());
    }
    let Some((i, j, d)) = t.beta.as_chain() else {
        return Ok(Poly2::zero());
    };
    let a = t.a;
    let twice_g = a - mu.len() as i64 - nu.len() as i64 + 2;
    if twice_g % 2 != 0 {
        return Ok(Poly2::zero());
    }
    let mut dots = Rational::one();
    for l in mu.labels().chain(nu.labels()) {
        dots *= e_dot(l, i, j, w.r())?;
        if dots.is_zero() {
            return Ok(Poly2::zero());
        }
    }
    let (pm, pn) = (mu.partition(), nu.partition());
    let mut hsum = Rational::zero();
    for a1 in 0..=a as u32 {
        let a2 = a as u32 - a1;
        let h1 = one_part_double_hurwitz(&pm, a1);
        if h1.is_zero() {
            continue;
        }
        let h2 = one_part_double_hurwitz(&pn, a2);
        hsum += h1 * h2 / Rational::from_integer(factorial(a1) * factorial(a2));
    }
    if hsum.is_zero() {
        return Ok(Poly2::zero());
    }
    let sign = if (twice_g / 2) % 2 == 0 { int(1) } else { int(-1) };
    let aut = Rational::new(pm.aut_order() * pn.aut_order(), mu.aut_order() * nu.aut_order());
    let c = aut * dots * sign * pow_i(&int(d), a - 1) / pow_i(&int(k as i64), a - 2) * hsum;
    Ok(Poly2::linear(1, 1).scale(&c))
}

/// Disconnected two-point invariant as the splitting sum
/// `Σ ⟨θ(ξ1)|θ(ξ2)⟩ ⟨ν1(γ1), ν2(γ2)⟩^conn`.
pub fn disconnected_two_point(
    m1: &WeightedPartition,
    m2: &WeightedPartition,
    t: &TwistedDegree,
    w: &TangentWeights,
) -> Result<RatFunc2> {
    check_weights(m1)?;
    check_weights(m2)?;
    if m1.size() != m2.size() {
        return Err(Error::SizeMismatch { expected: m1.size(), found: m2.size() });
    }
    if t.beta.is_zero() {
        return Err(Error::OutOfScope("degree-zero invariants come from the zero-degree table".into()));
    }
    if t.a < 0 || t.beta.as_chain().is_none() {
        check_labels_in_range(m1, w.r())?;
        check_labels_in_range(m2, w.r())?;
        return Ok(RatFunc2::zero());
    }
    let s1 = enumerate_sub_splittings(m1);
    let s2 = enumerate_sub_splittings(m2);
    let mut acc = RatFunc2::zero();
    for (th1, nu1) in &s1 {
        if nu1.is_empty() {
            continue;
        }
        let shape = th1.partition();
        for (th2, nu2) in &s2 {
            if th2.partition() != shape {
                continue;
            }
            let conn = connected_two_point(nu1, nu2, t, w)?;
            if conn.is_zero() {
                continue;
            }
            let p = pairing(th1, th2, w)?;
            if p.is_zero() {
                continue;
            }
            acc = &acc + &(&p * &RatFunc2::from_poly(conn));
        }
    }
    Ok(acc)
}

/// Chains `d·E_{ij}` whose exponent vector fits in `orders`, with the
/// corresponding series key tail.
pub fn chains_in_box(orders: &Orders) -> Vec<(CurveClass, Vec<u32>)> {
    let r = orders.r();
    let mut out = Vec::new();
    for i in 1..=r {
        for j in i..=r {
            let dmax = orders.s[i - 1..j].iter().copied().min().unwrap_or(0);
            for d in 1..=dmax {
                let c = CurveClass::chain(r, i, j, d as i64).expect("indices in range");
                let e = curve_exponents(&c).expect("effective");
                out.push((c, e));
            }
        }
    }
    out
}

/// `⟨⟨μ1(η1), μ2(η2)⟩⟩` restricted to `β ≠ 0`, truncated at `orders`.
pub fn two_point_series(
    m1: &WeightedPartition,
    m2: &WeightedPartition,
    orders: &Orders,
    w: &TangentWeights,
) -> Result<TruncSeries> {
    if orders.r() != w.r() {
        return Err(Error::Shape(format!("{} s-orders for r = {}", orders.r(), w.r())));
    }
    let chains = chains_in_box(orders);
    let jobs: Vec<(u32, &CurveClass, &Vec<u32>)> =
        (0..=orders.u).flat_map(|a| chains.iter().map(move |(c, e)| (a, c, e))).collect();
    let vals = jobs
        .par_iter()
        .map(|(a, c, e)| {
            let v = disconnected_two_point(m1, m2, &TwistedDegree::new(*a as i64, (*c).clone()), w)?;
            let mut key = vec![*a];
            key.extend_from_slice(e);
            Ok((key, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = TruncSeries::zero(orders.clone());
    for (k, v) in vals {
        out.add_coeff(&k, &v);
    }
    Ok(out)
}

/// A divisor insertion: the twisted divisor `(2)` or `D_ℓ = 1(1)^{n−1}1(ω_ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorSymbol {
    Twisted,
    D(usize),
}

impl fmt::Display for DivisorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorSymbol::Twisted => write!(f, "(2)"),
            DivisorSymbol::D(l) => write!(f, "D{l}"),
        }
    }
}

impl FromStr for DivisorSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "(2)" || s == "2" {
            return Ok(DivisorSymbol::Twisted);
        }
        s.strip_prefix('D')
            .and_then(|x| x.parse::<usize>().ok())
            .filter(|&l| l > 0)
            .map(DivisorSymbol::D)
            .ok_or_else(|| Error::Parse(format!("unknown divisor '{s}', expected (2) or D<l>")))
    }
}

/// Middle key component used for β = 0 two-point functions, whose
/// u-derivative gives the `(2)` three-point function.
pub const IDENTITY_MARKER: &str = "1";

/// β = 0 parts supplied from outside. Keys are `left|mid|right` with
/// canonical weighted-partition text; `mid` is a divisor (`D1`, ..) or the
/// identity marker. Values are `(a, coefficient)` lists of u-series.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZeroDegreeTable {
    entries: BTreeMap<String, Vec<(u32, RatFunc2)>>,
}

impl ZeroDegreeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn key(left: &WeightedPartition, mid: &str, right: &WeightedPartition) -> String {
        format!("{left}|{mid}|{right}")
    }

    /// Key for the β = 0 part needed by `⟨⟨left, D, right⟩⟩`.
    pub fn key_for(left: &WeightedPartition, d: DivisorSymbol, right: &WeightedPartition) -> String {
        match d {
            DivisorSymbol::Twisted => Self::key(left, IDENTITY_MARKER, right),
            DivisorSymbol::D(_) => Self::key(left, &d.to_string(), right),
        }
    }

    pub fn insert(&mut self, key: String, terms: Vec<(u32, RatFunc2)>) {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.entries.insert(key, terms);
    }

    pub fn get(&self, key: &str) -> Option<&Vec<(u32, RatFunc2)>> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> &BTreeMap<String, Vec<(u32, RatFunc2)>> {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut BTreeMap<String, Vec<(u32, RatFunc2)>> {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry as an `s`-free series in the box, if present. Terms beyond
    /// the u-order are dropped.
    pub fn series(&self, key: &str, orders: &Orders) -> Option<TruncSeries> {
        let terms = self.entries.get(key)?;
        let mut out = TruncSeries::zero(orders.clone());
        let mut k = vec![0; orders.r() + 1];
        for (a, c) in terms {
            if *a <= orders.u {
                k[0] = *a;
                out.add_coeff(&k, c);
            }
        }
        Some(out)
    }
}

/// A three-point function with a divisor insertion, and whether its β = 0
/// part was missing from the table (in which case `series` holds only the
/// β ≠ 0 part).
#[derive(Clone, Debug, PartialEq)]
pub struct ThreePoint {
    pub series: TruncSeries,
    pub gap: bool,
}

/// `⟨⟨α1, D, α2⟩⟩` by the divisor equations: `d/du` of the two-point
/// function for `(2)`, `s_ℓ∂_{s_ℓ}` plus the `s = 0` boundary for `D_ℓ`.
pub fn three_point_divisor_series(
    a1: &WeightedPartition,
    d: DivisorSymbol,
    a2: &WeightedPartition,
    orders: &Orders,
    w: &TangentWeights,
    table: &ZeroDegreeTable,
) -> Result<ThreePoint> {
    let key = ZeroDegreeTable::key_for(a1, d, a2);
    match d {
        DivisorSymbol::Twisted => {
            let up = Orders::new(orders.u + 1, orders.s.clone());
            let nonzero = two_point_series(a1, a2, &up, w)?.d_du()?;
            match table.series(&key, &up) {
                Some(z) => Ok(ThreePoint { series: nonzero.add(&z.d_du()?)?, gap: false }),
                None => Ok(ThreePoint { series: nonzero, gap: true }),
            }
        }
        DivisorSymbol::D(l) => {
            if l == 0 || l > w.r() {
                return Err(Error::IndexOutOfRange { what: "divisor", index: l, max: w.r() });
            }
            let nonzero = two_point_series(a1, a2, orders, w)?.s_scale_d(l)?;
            match table.series(&key, orders) {
                Some(z) => Ok(ThreePoint { series: nonzero.add(&z)?, gap: false }),
                None => Ok(ThreePoint { series: nonzero, gap: true }),
            }
        }
    }
}

/// `H` values used above, exposed for reporting.
pub fn hurwitz_factor_sum(mu: &WeightedPartition, nu: &WeightedPartition, a: u32) -> Rational {
    let (pm, pn) = (mu.partition(), nu.partition());
    (0..=a)
        .map(|a1| {
            one_part_double_hurwitz(&pm, a1) * one_part_double_hurwitz(&pn, a - a1)
                / Rational::from_integer(factorial(a1) * factorial(a - a1))
        })
        .fold(Rational::zero(), |x, y| x + y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn wp(s: &str) -> WeightedPartition {
        s.parse().unwrap()
    }

    fn theta() -> Poly2 {
        Poly2::linear(1, 1)
    }

    fn chain(d: i64) -> CurveClass {
        CurveClass::chain(1, 1, 1, d).unwrap()
    }

    #[test]
    fn connected_examples() {
        let w = TangentWeights::new(1).unwrap();
        for d in 1..=4 {
            let v = connected_two_point(&wp("2(E1)"), &wp("2(E1)"), &TwistedDegree::new(0, chain(d)), &w).unwrap();
            assert_eq!(v, theta().scale(&rat(4, d)));
        }
        let t = TwistedDegree::new(0, chain(1));
        assert!(connected_two_point(&wp("2(1)"), &wp("2(E1)"), &t, &w).unwrap().is_zero());
        let t = TwistedDegree::new(1, chain(1));
        assert!(connected_two_point(&wp("2(E1)"), &wp("2(E1)"), &t, &w).unwrap().is_zero());
        let t = TwistedDegree::new(0, CurveClass::zero(1));
        assert!(matches!(connected_two_point(&wp("2(E1)"), &wp("2(E1)"), &t, &w), Err(Error::OutOfScope(_))));
        let t = TwistedDegree::new(0, chain(1));
        assert!(matches!(
            connected_two_point(&wp("2(x1)"), &wp("2(E1)"), &t, &w),
            Err(Error::UnsupportedWeight(_))
        ));
    }

    #[test]
    fn disconnected_examples() {
        let w = TangentWeights::new(1).unwrap();
        for d in 1..=3 {
            let t = TwistedDegree::new(0, chain(d));
            let v = disconnected_two_point(&wp("2(E1)"), &wp("2(E1)"), &t, &w).unwrap();
            assert_eq!(v, RatFunc2::from_poly(theta().scale(&rat(4, d))));
            let v = disconnected_two_point(&wp("1(E1)+2(E1)"), &wp("1(E1)+2(E1)"), &t, &w).unwrap();
            assert_eq!(v, RatFunc2::from_poly(theta().scale(&rat(-12, d))));
        }
    }

    #[test]
    fn support_gaps_vanish() {
        let w = TangentWeights::new(3).unwrap();
        let t = TwistedDegree::new(0, CurveClass { d: vec![1, 0, 1] });
        assert!(disconnected_two_point(&wp("2(E1)"), &wp("2(E3)"), &t, &w).unwrap().is_zero());
    }

    #[test]
    fn series_and_divisor() {
        let w = TangentWeights::new(1).unwrap();
        let o = Orders::new(0, vec![3]);
        let s = two_point_series(&wp("2(E1)"), &wp("2(E1)"), &o, &w).unwrap();
        for d in 1..=3u32 {
            assert_eq!(s.coeff(&[0, d]), RatFunc2::from_poly(theta().scale(&rat(4, d as i64))));
        }
        let tp = three_point_divisor_series(
            &wp("2(E1)"),
            DivisorSymbol::D(1),
            &wp("2(E1)"),
            &o,
            &w,
            &ZeroDegreeTable::new(),
        )
        .unwrap();
        assert!(tp.gap);
        for d in 1..=3u32 {
            assert_eq!(tp.series.coeff(&[0, d]), RatFunc2::from_poly(theta().scale(&int(4))));
        }
    }

    #[test]
    fn table_json_roundtrip() {
        let mut t = ZeroDegreeTable::new();
        t.insert(
            ZeroDegreeTable::key(&wp("2(E1)"), "D1", &wp("2(1)")),
            vec![(0, RatFunc2::int(-1)), (2, "t1/t2".parse().unwrap())],
        );
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains("\"2(E1)|D1|2(1)\""));
        let back: ZeroDegreeTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!("D3".parse::<DivisorSymbol>().unwrap(), DivisorSymbol::D(3));
        assert_eq!("(2)".parse::<DivisorSymbol>().unwrap(), DivisorSymbol::Twisted);
        assert!("D0".parse::<DivisorSymbol>().is_err());
    }
}
