//! Chen–Ruan classes of the symmetric product: fixed-point expansion,
//! orbifold Poincaré pairing and dual bases.

use std::collections::BTreeMap;


use crate::algebra::field::{inverse, Matrix};
use crate::algebra::rational::{factorial, Rational};
use crate::algebra::RatFunc2;
use crate::error::{Error, Result};
use crate::partitions::{MultiPartition, Partition, WeightedPartition};
use crate::surface::{class_of, integrate, TangentWeights};

/// `Π_k (L_k R_k)^{ℓ(σ_k)}`
pub fn t_weight(s: &MultiPartition, w: &TangentWeights) -> RatFunc2 {
    s.components()
        .iter()
        .enumerate()
        .fold(RatFunc2::one(), |acc, (k, c)| &acc * &w.euler(k + 1).pow(c.len() as i64))
}

/// A combination of fixed-point classes, all of total size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRClass {
    n: u32,
    terms: BTreeMap<MultiPartition, RatFunc2>,
}

impl CRClass {
    pub fn zero(n: u32) -> Self {
        CRClass { n, terms: BTreeMap::new() }
    }

    pub fn fixed(s: MultiPartition) -> Self {
        let n = s.size();
        let mut terms = BTreeMap::new();
        terms.insert(s, RatFunc2::one());
        CRClass { n, terms }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<MultiPartition, RatFunc2> {
        &self.terms
    }

    pub fn coeff(&self, s: &MultiPartition) -> RatFunc2 {
        self.terms.get(s).cloned().unwrap_or_else(RatFunc2::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: MultiPartition, c: RatFunc2) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, c);
            }
        }
    }

    pub fn add(&self, o: &CRClass) -> CRClass {
        let mut out = self.clone();
        for (s, c) in &o.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &RatFunc2) -> CRClass {
        let mut out = CRClass::zero(self.n);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), x * c);
        }
        out
    }
}

/// Compositions of `m` into `parts` nonnegative pieces.
fn compositions(m: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    (0..=m)
        .flat_map(|first| {
            compositions(m - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Writes `λ(η)` in the fixed-point basis. Each cycle `i(η)` is spread over
/// the fixed points through `η = Σ_k η|_{x_k}/(L_k R_k) [x_k]`; identical
/// cycles are grouped so the result has the symmetry factors of both labels.
pub fn expand(lam: &WeightedPartition, w: &TangentWeights) -> Result<CRClass> {
    let points = w.points();
    let mut acc: BTreeMap<MultiPartition, RatFunc2> = BTreeMap::new();
    acc.insert(MultiPartition::empty(points), RatFunc2::one());
    for ((part, label), m) in lam.multiplicities() {
        let cls = class_of(&label, w)?;
        let c: Vec<RatFunc2> = (1..=points).map(|k| &cls.coords[k - 1] / w.euler(k)).collect();
        let mut next: BTreeMap<MultiPartition, RatFunc2> = BTreeMap::new();
        for comp in compositions(m, points) {
            let mut factor = RatFunc2::one();
            for (k, &mk) in comp.iter().enumerate() {
                if mk == 0 {
                    continue;
                }
                let f = c[k].pow(mk as i64).scale(&Rational::new(1.into(), factorial(mk)));
                factor = &factor * &f;
            }
            if factor.is_zero() {
                continue;
            }
            for (s, x) in &acc {
                let mut t = s.clone();
                for (k, &mk) in comp.iter().enumerate() {
                    for _ in 0..mk {
                        t = t.with_part(k + 1, part);
                    }
                }
                let v = &factor * x;
                let slot = next.entry(t).or_insert_with(RatFunc2::zero);
                *slot = &*slot + &v;
            }
        }
        acc = next;
    }
    let mut out = CRClass::zero(lam.size());
    for (s, x) in acc {
        let aut: num_bigint::BigInt = s.components().iter().map(Partition::aut_order).product();
        out.add_term(s, x.scale(&Rational::from_integer(aut)));
    }
    Ok(out)
}

/// `α_{λ(η)}(σ̃)`, the coefficient of `σ̃` in the expansion of `λ(η)`.
pub fn coefficient(lam: &WeightedPartition, s: &MultiPartition, w: &TangentWeights) -> Result<RatFunc2> {
    if lam.size() != s.size() {
        return Err(Error::SizeMismatch { expected: lam.size(), found: s.size() });
    }
    Ok(expand(lam, w)?.coeff(s))
}

/// `⟨σ̃|δ̃⟩ = δ_{σ̃δ̃} Π_k z_{σ_k}^{-1} t(σ̃)`
pub fn pairing_fixed(a: &MultiPartition, b: &MultiPartition, w: &TangentWeights) -> Result<RatFunc2> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch { expected: a.size(), found: b.size() });
    }
    if a != b {
        return Ok(RatFunc2::zero());
    }
    Ok(t_weight(a, w).scale(&a.hurwitz_weight()))
}

/// Pairing of two expanded classes against the diagonal fixed-point pairing.
pub fn pairing_classes(a: &CRClass, b: &CRClass, w: &TangentWeights) -> Result<RatFunc2> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { expected: a.n, found: b.n });
    }
    let mut acc = RatFunc2::zero();
    for (s, x) in &a.terms {
        if let Some(y) = b.terms.get(s) {
            acc = &acc + &(&(x * y) * &pairing_fixed(s, s, w)?);
        }
    }
    Ok(acc)
}

/// Orbifold Poincaré pairing through the fixed-point basis.
pub fn pairing(a: &WeightedPartition, b: &WeightedPartition, w: &TangentWeights) -> Result<RatFunc2> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch { expected: a.size(), found: b.size() });
    }
    if a.partition() != b.partition() {
        return Ok(RatFunc2::zero());
    }
    pairing_classes(&expand(a, w)?, &expand(b, w)?, w)
}

/// Per-sector pairing: `(1/Πλ_i)·1/(|Aut λ(η)||Aut ρ(ε)|)` times the sum over
/// length-preserving matchings of cycles of `Π ∫ η·ε`.
pub fn pairing_direct(a: &WeightedPartition, b: &WeightedPartition, w: &TangentWeights) -> Result<RatFunc2> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch { expected: a.size(), found: b.size() });
    }
    if a.partition() != b.partition() {
        return Ok(RatFunc2::zero());
    }
    let ca = a.pairs().iter().map(|(p, l)| Ok((*p, class_of(l, w)?))).collect::<Result<Vec<_>>>()?;
    let cb = b.pairs().iter().map(|(p, l)| Ok((*p, class_of(l, w)?))).collect::<Result<Vec<_>>>()?;
    let ints: Vec<Vec<Option<RatFunc2>>> = ca
        .iter()
        .map(|(p, x)| cb.iter().map(|(q, y)| (p == q).then(|| integrate(x, y, w))).collect())
        .collect();
    let mut used = vec![false; cb.len()];
    let sum = matchings(&ints, 0, &mut used);
    let prod: u64 = a.pairs().iter().map(|(p, _)| *p as u64).product();
    let norm = Rational::new(1.into(), num_bigint::BigInt::from(prod) * a.aut_order() * b.aut_order());
    Ok(sum.scale(&norm))
}

fn matchings(ints: &[Vec<Option<RatFunc2>>], i: usize, used: &mut [bool]) -> RatFunc2 {
    if i == ints.len() {
        return RatFunc2::one();
    }
    let mut acc = RatFunc2::zero();
    for j in 0..used.len() {
        if used[j] {
            continue;
        }
        let Some(v) = &ints[i][j] else { continue };
        if v.is_zero() {
            continue;
        }
        used[j] = true;
        let rest = matchings(ints, i + 1, used);
        used[j] = false;
        acc = &acc + &(v * &rest);
    }
    acc
}

/// Gram matrix of an ordered basis, with its block structure by underlying
/// partition.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingMatrix {
    pub basis: Vec<WeightedPartition>,
    pub gram: Matrix<RatFunc2>,
}

impl PairingMatrix {
    pub fn new(basis: &[WeightedPartition], w: &TangentWeights) -> Result<Self> {
        let expanded = basis.iter().map(|b| expand(b, w)).collect::<Result<Vec<_>>>()?;
        let n = basis.len();
        let mut gram = vec![vec![RatFunc2::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                if basis[i].partition() != basis[j].partition() {
                    continue;
                }
                let v = pairing_classes(&expanded[i], &expanded[j], w)?;
                gram[j][i] = v.clone();
                gram[i][j] = v;
            }
        }
        Ok(PairingMatrix { basis: basis.to_vec(), gram })
    }

    /// Index sets of the shape blocks, in order of first appearance.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<(Partition, Vec<usize>)> = Vec::new();
        for (i, b) in self.basis.iter().enumerate() {
            let p = b.partition();
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v.push(i),
                None => out.push((p, vec![i])),
            }
        }
        out.into_iter().map(|(_, v)| v).collect()
    }

    /// `G^{-1}`, inverted block by block.
    pub fn inverse(&self) -> Result<Matrix<RatFunc2>> {
        let n = self.basis.len();
        let mut out = vec![vec![RatFunc2::zero(); n]; n];
        for block in self.blocks() {
            let sub: Matrix<RatFunc2> =
                block.iter().map(|&i| block.iter().map(|&j| self.gram[i][j].clone()).collect()).collect();
            let inv = inverse(&sub)?.ok_or_else(|| {
                let names: Vec<String> = block.iter().map(|&i| self.basis[i].to_string()).collect();
                Error::DegenerateBasis(format!("singular Gram block {{{}}}", names.join(", ")))
            })?;
            for (a, &i) in block.iter().enumerate() {
                for (b, &j) in block.iter().enumerate() {
                    out[i][j] = inv[a][b].clone();
                }
            }
        }
        Ok(out)
    }
}

/// Dual classes: `dual_j = Σ_i (G^{-1})_{ij} b_i`, so `⟨b_i|dual_j⟩ = δ_ij`.
pub fn dual_basis(basis: &[WeightedPartition], w: &TangentWeights) -> Result<Vec<CRClass>> {
    let pm = PairingMatrix::new(basis, w)?;
    let ginv = pm.inverse()?;
    let expanded = basis.iter().map(|b| expand(b, w)).collect::<Result<Vec<_>>>()?;
    let n = basis.first().map_or(0, WeightedPartition::size);
    Ok((0..basis.len())
        .map(|j| {
            (0..basis.len())
                .filter(|&i| !ginv[i][j].is_zero())
                .fold(CRClass::zero(n), |acc, i| acc.add(&expanded[i].scale(&ginv[i][j])))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::ClassLabel;

    fn wp(s: &str) -> WeightedPartition {
        s.parse().unwrap()
    }

    fn rf(s: &str) -> RatFunc2 {
        s.parse().unwrap()
    }

    fn mp(parts: &[&str]) -> MultiPartition {
        MultiPartition::new(parts.iter().map(|s| s.parse().unwrap()).collect())
    }

    #[test]
    fn t_weight_r1() {
        let w = TangentWeights::new(1).unwrap();
        let s = mp(&["1", "1"]);
        assert_eq!(t_weight(&s, &w), rf("(2*t1*(t2 - t1))*((t1 - t2)*2*t2)"));
    }

    #[test]
    fn expand_examples() {
        let w = TangentWeights::new(1).unwrap();
        let e = expand(&wp("1(1)"), &w).unwrap();
        assert_eq!(e.coeff(&mp(&["1", "()"])), w.euler(1).inv().unwrap());
        assert_eq!(e.coeff(&mp(&["()", "1"])), w.euler(2).inv().unwrap());
        let e = expand(&wp("1(1)+1(1)"), &w).unwrap();
        assert_eq!(e.coeff(&mp(&["1+1", "()"])), w.euler(1).pow(-2));
        assert_eq!(e.coeff(&mp(&["1", "1"])), (w.euler(1) * w.euler(2)).inv().unwrap());
        let e = expand(&wp("2(x1)"), &w).unwrap();
        assert_eq!(e, CRClass::fixed(mp(&["2", "()"])));
    }

    #[test]
    fn fixed_pairings() {
        let w = TangentWeights::new(1).unwrap();
        let l1r1 = w.euler(1).clone();
        let s = mp(&["1+1", "()"]);
        assert_eq!(pairing_fixed(&s, &s, &w).unwrap(), (&l1r1 * &l1r1).scale(&Rational::new(1.into(), 2.into())));
        let s2 = mp(&["2", "()"]);
        assert_eq!(pairing_fixed(&s2, &s2, &w).unwrap(), l1r1.scale(&Rational::new(1.into(), 2.into())));
        assert!(pairing_fixed(&s, &mp(&["1", "1"]), &w).unwrap().is_zero());
    }

    #[test]
    fn pairing_examples() {
        let w = TangentWeights::new(1).unwrap();
        assert_eq!(pairing(&wp("2(E1)"), &wp("2(E1)"), &w).unwrap(), RatFunc2::int(-1));
        assert_eq!(pairing(&wp("2(1)"), &wp("2(1)"), &w).unwrap(), rf("1/(4*t1*t2)"));
        assert!(pairing(&wp("2(E1)"), &wp("1(1)+1(1)"), &w).unwrap().is_zero());
        for (a, b) in [("2(E1)", "2(E1)"), ("1(1)+1(1)", "1(1)+1(1)"), ("1(E1)+1(1)", "1(1)+1(E1)")] {
            assert_eq!(pairing(&wp(a), &wp(b), &w).unwrap(), pairing_direct(&wp(a), &wp(b), &w).unwrap());
        }
    }

    #[test]
    fn duals() {
        let w = TangentWeights::new(1).unwrap();
        let basis = vec![wp("2(E1)"), wp("2(1)")];
        let d = dual_basis(&basis, &w).unwrap();
        assert_eq!(d[0], expand(&wp("2(E1)"), &w).unwrap().scale(&RatFunc2::int(-1)));
        for (i, b) in basis.iter().enumerate() {
            for (j, dj) in d.iter().enumerate() {
                let v = pairing_classes(&expand(b, &w).unwrap(), dj, &w).unwrap();
                assert_eq!(v, if i == j { RatFunc2::one() } else { RatFunc2::zero() });
            }
        }
        let degenerate = vec![wp("2(E1)"), wp("2(E1)")];
        assert!(matches!(dual_basis(&degenerate, &w), Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn gram_of_example_basis() {
        let w = TangentWeights::new(1).unwrap();
        let basis: Vec<WeightedPartition> =
            ["1(E1)+1(E1)", "2(E1)", "1(1)+1(E1)", "2(1)", "1(1)+1(1)"].iter().map(|s| wp(s)).collect();
        let g = PairingMatrix::new(&basis, &w).unwrap();
        let diag = ["2", "-1", "-1/(t1*t2)", "1/(4*t1*t2)", "1/(8*t1^2*t2^2)"];
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { rf(diag[i]) } else { RatFunc2::zero() };
                assert_eq!(g.gram[i][j], expect, "({i},{j})");
            }
        }
        let _ = ClassLabel::One;
    }
}
