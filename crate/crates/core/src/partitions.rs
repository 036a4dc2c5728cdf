//! Partitions, cohomology-weighted partitions and fixed-point multipartitions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::rational::factorial;
use crate::error::{Error, Result};
use crate::surface::SurfaceClass;

/// Parts stored weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Malformed("partition with a zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(1^n)`
    pub fn identity(n: u32) -> Self {
        Partition { parts: vec![1; n as usize] }
    }

    /// `(2, 1^{n-2})`
    pub fn transposition(n: u32) -> Self {
        let mut parts = vec![2];
        parts.extend(std::iter::repeat(1).take(n.saturating_sub(2) as usize));
        Partition { parts }
    }

    /// `(n)`
    pub fn full_cycle(n: u32) -> Self {
        Partition { parts: vec![n] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part -> multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `Π m_i!`
    pub fn aut_order(&self) -> BigInt {
        self.multiplicities().values().map(|&m| factorial(m)).product()
    }

    /// `z_σ = Π i^{m_i} m_i!`, the order of the centralizer of a permutation
    /// of this cycle type.
    pub fn centralizer_order(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .map(|(&i, &m)| BigInt::from(i).pow(m) * factorial(m))
            .product()
    }

    /// lcm of the parts; 1 for the empty partition.
    pub fn cycle_order(&self) -> u64 {
        self.parts.iter().fold(1u64, |acc, &p| acc.lcm(&(p as u64)))
    }

    /// `n − ℓ(λ)`.
    pub fn age(&self, n: u32) -> Result<u32> {
        if self.size() != n {
            return Err(Error::SizeMismatch { expected: n, found: self.size() });
        }
        Ok(n - self.len() as u32)
    }

    /// Union of multisets.
    pub fn join(&self, o: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&o.parts);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Multiset difference, `None` unless `o` is contained in `self`.
    pub fn minus(&self, o: &Partition) -> Option<Partition> {
        let mut m = self.multiplicities();
        for &p in &o.parts {
            let slot = m.get_mut(&p)?;
            if *slot == 0 {
                return None;
            }
            *slot -= 1;
        }
        let mut parts: Vec<u32> = m.iter().flat_map(|(&p, &k)| std::iter::repeat(p).take(k as usize)).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Partition { parts })
    }

    pub fn contains(&self, o: &Partition) -> bool {
        self.minus(o).is_some()
    }
}

impl fmt::Display for Partition {
    /// `2+1+1`; the empty partition prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split('+')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part '{p}' in '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n`, in reverse lexicographic order starting at `(n)`.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Weight attached to a part. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    One,
    /// `ω_k`, dual to the exceptional curves.
    Omega(usize),
    /// `E_k`
    ECurve(usize),
    /// `[x_k]`
    FixedPt(usize),
    General(SurfaceClass),
}

impl ClassLabel {
    /// Cohomological degree (complex): 0, 1 or 2. General classes report 0.
    pub fn degree(&self) -> u32 {
        match self {
            ClassLabel::One | ClassLabel::General(_) => 0,
            ClassLabel::Omega(_) | ClassLabel::ECurve(_) => 1,
            ClassLabel::FixedPt(_) => 2,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::One => write!(f, "1"),
            ClassLabel::Omega(k) => write!(f, "w{k}"),
            ClassLabel::ECurve(k) => write!(f, "E{k}"),
            ClassLabel::FixedPt(k) => write!(f, "x{k}"),
            ClassLabel::General(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(ClassLabel::One);
        }
        let bad = || Error::Parse(format!("unknown class label '{s}'"));
        let (head, idx) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let k: usize = idx.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match head {
            "E" => Ok(ClassLabel::ECurve(k)),
            "w" => Ok(ClassLabel::Omega(k)),
            "x" => Ok(ClassLabel::FixedPt(k)),
            _ => Err(bad()),
        }
    }
}

/// Multiset of `(part, label)` pairs, sorted by decreasing part then label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WeightedPartition {
    pairs: Vec<(u32, ClassLabel)>,
}

impl WeightedPartition {
    pub fn new(mut pairs: Vec<(u32, ClassLabel)>) -> Result<Self> {
        if pairs.iter().any(|(p, _)| *p == 0) {
            return Err(Error::Malformed("weighted partition with a zero part".into()));
        }
        sort_pairs(&mut pairs);
        Ok(WeightedPartition { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Every part weighted by the same label.
    pub fn uniform(p: &Partition, label: ClassLabel) -> Self {
        WeightedPartition { pairs: p.parts().iter().map(|&x| (x, label.clone())).collect() }
    }

    pub fn pairs(&self) -> &[(u32, ClassLabel)] {
        &self.pairs
    }

    pub fn partition(&self) -> Partition {
        Partition::new(self.pairs.iter().map(|(p, _)| *p).collect()).expect("parts are positive")
    }

    pub fn size(&self) -> u32 {
        self.pairs.iter().map(|(p, _)| p).sum()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &ClassLabel> {
        self.pairs.iter().map(|(_, l)| l)
    }

    /// Distinct pairs with multiplicities.
    pub fn multiplicities(&self) -> Vec<((u32, ClassLabel), u32)> {
        let mut out: Vec<((u32, ClassLabel), u32)> = Vec::new();
        for pr in &self.pairs {
            match out.last_mut() {
                Some((q, m)) if q == pr => *m += 1,
                _ => out.push((pr.clone(), 1)),
            }
        }
        out
    }

    /// Order of the stabilizer of the pair multiset: `Π m!`.
    pub fn aut_order(&self) -> BigInt {
        self.multiplicities().iter().map(|(_, m)| factorial(*m)).product()
    }

    pub fn join(&self, o: &WeightedPartition) -> WeightedPartition {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&o.pairs);
        sort_pairs(&mut pairs);
        WeightedPartition { pairs }
    }

    /// `age + Σ deg(η)`.
    pub fn grading(&self) -> u32 {
        self.size() - self.len() as u32 + self.labels().map(ClassLabel::degree).sum::<u32>()
    }
}

fn sort_pairs(pairs: &mut [(u32, ClassLabel)]) {
    pairs.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
}

impl fmt::Display for WeightedPartition {
    /// `2(E1)+1(1)`; the empty weighted partition prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.pairs.iter().map(|(p, l)| format!("{p}({l})")).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for WeightedPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(WeightedPartition::empty());
        }
        let mut pairs = Vec::new();
        for item in s.split('+') {
            let item = item.trim();
            let bad = || Error::Parse(format!("expected part(label), got '{item}'"));
            let (p, rest) = item.split_once('(').ok_or_else(bad)?;
            let label = rest.strip_suffix(')').ok_or_else(bad)?;
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            pairs.push((p, label.parse()?));
        }
        WeightedPartition::new(pairs)
    }
}

impl Serialize for WeightedPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightedPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// All ways to write the pair multiset as `θ ∪ ν`, each distinct ordered
/// pair `(θ, ν)` listed once.
pub fn enumerate_sub_splittings(mu: &WeightedPartition) -> Vec<(WeightedPartition, WeightedPartition)> {
    let groups = mu.multiplicities();
    let mut out = vec![(Vec::new(), Vec::new())];
    for (pair, m) in &groups {
        let mut next = Vec::with_capacity(out.len() * (*m as usize + 1));
        for (th, nu) in &out {
            for take in 0..=*m {
                let mut th: Vec<(u32, ClassLabel)> = th.clone();
                let mut nu: Vec<(u32, ClassLabel)> = nu.clone();
                th.extend(std::iter::repeat(pair.clone()).take(take as usize));
                nu.extend(std::iter::repeat(pair.clone()).take((m - take) as usize));
                next.push((th, nu));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(mut th, mut nu)| {
            sort_pairs(&mut th);
            sort_pairs(&mut nu);
            (WeightedPartition { pairs: th }, WeightedPartition { pairs: nu })
        })
        .collect()
}

/// Every weighted partition of `n` with labels drawn from `labels`, each
/// listed once.
pub fn weighted_partitions_of(n: u32, labels: &[ClassLabel]) -> Vec<WeightedPartition> {
    // Multisets of size m from labels[from..].
    fn multisets(labels: &[ClassLabel], m: u32, from: usize) -> Vec<Vec<ClassLabel>> {
        if m == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in from..labels.len() {
            for mut rest in multisets(labels, m - 1, i) {
                rest.insert(0, labels[i].clone());
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in partitions_of(n) {
        let mut acc: Vec<Vec<(u32, ClassLabel)>> = vec![Vec::new()];
        for (part, m) in p.multiplicities() {
            let choices = multisets(labels, m, 0);
            acc = acc
                .iter()
                .flat_map(|pre| {
                    choices.iter().map(move |c| {
                        let mut v = pre.clone();
                        v.extend(c.iter().map(|l| (part, l.clone())));
                        v
                    })
                })
                .collect();
        }
        for mut pairs in acc {
            sort_pairs(&mut pairs);
            out.push(WeightedPartition { pairs });
        }
    }
    out
}

/// A fixed-point class: one partition per fixed point `x_1..x_{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPartition {
    components: Vec<Partition>,
}

impl MultiPartition {
    pub fn new(components: Vec<Partition>) -> Self {
        MultiPartition { components }
    }

    pub fn empty(points: usize) -> Self {
        MultiPartition { components: vec![Partition::empty(); points] }
    }

    pub fn components(&self) -> &[Partition] {
        &self.components
    }

    pub fn points(&self) -> usize {
        self.components.len()
    }

    pub fn size(&self) -> u32 {
        self.components.iter().map(Partition::size).sum()
    }

    pub fn len(&self) -> usize {
        self.components.iter().map(Partition::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.iter().all(Partition::is_empty)
    }

    /// Adds a single part at fixed point `k` (1-based).
    pub fn with_part(&self, k: usize, part: u32) -> Self {
        let mut c = self.components.clone();
        c[k - 1] = c[k - 1].join(&Partition { parts: vec![part] });
        MultiPartition { components: c }
    }

    pub fn join(&self, o: &MultiPartition) -> MultiPartition {
        MultiPartition { components: self.components.iter().zip(&o.components).map(|(a, b)| a.join(b)).collect() }
    }

    /// Componentwise difference, `None` unless `o ⊂ self`.
    pub fn minus(&self, o: &MultiPartition) -> Option<MultiPartition> {
        if o.points() != self.points() {
            return None;
        }
        let components = self
            .components
            .iter()
            .zip(&o.components)
            .map(|(a, b)| a.minus(b))
            .collect::<Option<Vec<_>>>()?;
        Some(MultiPartition { components })
    }

    /// The same class written as a weighted partition with `[x_k]` weights.
    pub fn to_weighted(&self) -> WeightedPartition {
        let mut pairs = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            pairs.extend(c.parts().iter().map(|&p| (p, ClassLabel::FixedPt(k + 1))));
        }
        WeightedPartition::new(pairs).expect("parts are positive")
    }

    /// Inverse of [`to_weighted`](Self::to_weighted); `None` unless every
    /// weight is a fixed point in `1..=points`.
    pub fn from_weighted(w: &WeightedPartition, points: usize) -> Option<Self> {
        let mut m = Self::empty(points);
        for (p, l) in w.pairs() {
            match l {
                ClassLabel::FixedPt(k) if (1..=points).contains(k) => m = m.with_part(*k, *p),
                _ => return None,
            }
        }
        Some(m)
    }

    /// `Π_k 1/z_{σ_k}` as a rational.
    pub fn hurwitz_weight(&self) -> crate::algebra::Rational {
        let z: BigInt = self.components.iter().map(Partition::centralizer_order).product();
        crate::algebra::Rational::new(BigInt::one(), z)
    }

    /// Every sub-multipartition `σ ⊂ self`.
    pub fn sub_multipartitions(&self) -> Vec<MultiPartition> {
        let per: Vec<Vec<Partition>> = self.components.iter().map(sub_partitions).collect();
        let mut out = vec![Vec::new()];
        for opts in per {
            out = out
                .into_iter()
                .flat_map(|pre: Vec<Partition>| {
                    opts.iter().map(move |o| {
                        let mut v = pre.clone();
                        v.push(o.clone());
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiPartition::new).collect()
    }
}

fn sub_partitions(p: &Partition) -> Vec<Partition> {
    let mut out = vec![Vec::new()];
    for (&part, &m) in p.multiplicities().iter() {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<u32>| {
                (0..=m).map(move |k| {
                    let mut v = pre.clone();
                    v.extend(std::iter::repeat(part).take(k as usize));
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Partition::new(v).expect("positive")).collect()
}

impl fmt::Display for MultiPartition {
    /// `[2+1 | () | 1]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.components.iter().map(Partition::to_string).collect();
        write!(f, "[{}]", s.join(" | "))
    }
}

/// All multipartitions of total size `n` over `points` fixed points.
pub fn multipartitions_of(n: u32, points: usize) -> Vec<MultiPartition> {
    fn go(rem: u32, left: usize, cur: &mut Vec<Partition>, out: &mut Vec<MultiPartition>) {
        if left == 1 {
            for p in partitions_of(rem) {
                cur.push(p);
                out.push(MultiPartition::new(cur.clone()));
                cur.pop();
            }
            return;
        }
        for k in 0..=rem {
            for p in partitions_of(k) {
                cur.push(p);
                go(rem - k, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if points > 0 {
        go(n, points, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn w(s: &str) -> WeightedPartition {
        s.parse().unwrap()
    }

    #[test]
    fn aut_and_centralizer() {
        assert_eq!(p("1+1+2").aut_order(), BigInt::from(2));
        assert_eq!(p("3").aut_order(), BigInt::from(1));
        assert_eq!(p("2+2+2").aut_order(), BigInt::from(6));
        assert_eq!(p("2").centralizer_order(), BigInt::from(2));
        assert_eq!(p("2+1").centralizer_order(), BigInt::from(2));
        assert_eq!(p("1+1+1").centralizer_order(), BigInt::from(6));
    }

    #[test]
    fn weighted_aut() {
        assert_eq!(w("1(1)+1(E1)").aut_order(), BigInt::from(1));
        assert_eq!(w("1(1)+1(1)").aut_order(), BigInt::from(2));
        assert_eq!(w("2(E1)+2(E1)+1(E1)").aut_order(), BigInt::from(2));
    }

    #[test]
    fn cycle_order_and_age() {
        assert_eq!(p("2+3").cycle_order(), 6);
        assert_eq!(p("1+1+1+1").cycle_order(), 1);
        assert_eq!(p("4+6").cycle_order(), 12);
        assert_eq!(p("2").age(2).unwrap(), 1);
        assert_eq!(Partition::identity(5).age(5).unwrap(), 0);
        assert_eq!(Partition::transposition(6).age(6).unwrap(), 1);
        assert!(p("2").age(3).is_err());
    }

    #[test]
    fn splittings() {
        assert_eq!(enumerate_sub_splittings(&w("1(1)+2(E1)")).len(), 4);
        let s = enumerate_sub_splittings(&w("1(1)+1(1)"));
        assert_eq!(s.len(), 3);
        assert!(s.contains(&(w("1(1)"), w("1(1)"))));
        assert_eq!(enumerate_sub_splittings(&WeightedPartition::empty()).len(), 1);
    }

    #[test]
    fn text_roundtrip() {
        let x = w("1(1)+2(E1)+1(w2)+3(x3)");
        assert_eq!(x.to_string(), "3(x3)+2(E1)+1(1)+1(w2)");
        assert_eq!(w(&x.to_string()), x);
        assert!("2(E0)".parse::<WeightedPartition>().is_err());
        assert!("2(F1)".parse::<WeightedPartition>().is_err());
        assert!("2E1".parse::<WeightedPartition>().is_err());
        assert_eq!(p("1+2+1").to_string(), "2+1+1");
    }

    #[test]
    fn class_equation() {
        for n in 0..=10u32 {
            let nf = factorial(n);
            let total: BigInt = partitions_of(n).iter().map(|l| &nf / l.centralizer_order()).sum();
            assert_eq!(total, nf);
        }
        assert_eq!(partitions_of(6).len(), 11);
    }

    #[test]
    fn multipartition_counts() {
        // coefficient of x^2 in Π 1/(1-x^k)^2 is 5
        assert_eq!(multipartitions_of(2, 2).len(), 5);
        let m = MultiPartition::new(vec![p("2+1"), p("1")]);
        assert_eq!(m.sub_multipartitions().len(), 8);
        assert_eq!(MultiPartition::from_weighted(&m.to_weighted(), 2), Some(m));
    }

    #[test]
    fn weighted_enumeration_counts() {
        let labels = [ClassLabel::One, ClassLabel::ECurve(1)];
        // (2): 2 choices; (1,1): multisets of size 2 from 2 labels = 3.
        assert_eq!(weighted_partitions_of(2, &labels).len(), 5);
        let all = weighted_partitions_of(3, &labels);
        let mut dedup = all.clone();
        dedup.sort_by_key(|w| w.to_string());
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
        assert_eq!(all.len(), 2 + 2 * 2 + 4);
    }
}
