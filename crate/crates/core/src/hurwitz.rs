//! Hurwitz numbers: element-level enumeration, class-algebra convolution and
//! the one-part double Hurwitz generating function.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{factorial, int, pow_i, Rational};
use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition};

/// Environment variable overriding the brute-force bound on `n`. The
/// convolution backend is allowed two more.
pub const BUDGET_ENV: &str = "SYMORB_ENUM_BUDGET";

const DEFAULT_BRUTE_MAX_N: u32 = 8;

pub fn brute_max_n() -> u32 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTE_MAX_N)
}

pub fn fast_max_n() -> u32 {
    brute_max_n() + 2
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HurwitzQuery {
    pub n: u32,
    pub profiles: Vec<Partition>,
}

impl HurwitzQuery {
    pub fn new(n: u32, profiles: Vec<Partition>) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::Malformed("a Hurwitz number needs at least one profile".into()));
        }
        check_sizes(n, &profiles)?;
        Ok(HurwitzQuery { n, profiles })
    }

    /// Profiles sorted, which does not change the count.
    pub fn canonical(&self) -> Self {
        let mut profiles = self.profiles.clone();
        profiles.sort();
        HurwitzQuery { n: self.n, profiles }
    }
}

fn check_sizes(n: u32, profiles: &[Partition]) -> Result<()> {
    for p in profiles {
        if p.size() != n {
            return Err(Error::SizeMismatch { expected: n, found: p.size() });
        }
    }
    Ok(())
}

/// True when `Σ (n − ℓ(η_i))` is odd, which forces the count to vanish.
pub fn parity_obstructed(n: u32, profiles: &[Partition]) -> bool {
    profiles.iter().map(|p| n as usize - p.len()).sum::<usize>() % 2 == 1
}

// ---------------------------------------------------------------------------
// permutations

type Perm = Vec<u8>;

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn all_perms(n: u32) -> Vec<Perm> {
    let mut p: Perm = (0..n as u8).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Lexicographic rank, matching the order of [`all_perms`].
fn rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut r = 0usize;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

fn compose(x: &[u8], g: &[u8]) -> Perm {
    g.iter().map(|&i| x[i as usize]).collect()
}

fn cycle_type(p: &[u8]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts).expect("cycle lengths are positive")
}

/// A permutation with the given cycle type.
fn representative(t: &Partition) -> Perm {
    let mut p = Vec::with_capacity(t.size() as usize);
    let mut start = 0u8;
    for &len in t.parts() {
        let len = len as u8;
        for k in 0..len {
            p.push(start + (k + 1) % len);
        }
        start += len;
    }
    p
}

// ---------------------------------------------------------------------------
// brute force

/// `counts[rank(x)]` = number of tuples of the given types with product `x`.
fn product_counts(n: u32, perms: &[Perm], types: &[Partition], profiles: &[Partition]) -> Result<Vec<u128>> {
    let mut counts = vec![0u128; perms.len()];
    counts[0] = 1;
    for prof in profiles {
        let class: Vec<&Perm> = perms.iter().zip(types).filter(|(_, t)| *t == prof).map(|(p, _)| p).collect();
        let mut next = vec![0u128; perms.len()];
        for (x, &c) in perms.iter().zip(&counts) {
            if c == 0 {
                continue;
            }
            for g in &class {
                let y = rank(&compose(x, g));
                next[y] = next[y].checked_add(c).ok_or_else(|| overflow(n))?;
            }
        }
        counts = next;
    }
    Ok(counts)
}

fn overflow(n: u32) -> Error {
    Error::Budget { what: format!("tuple count overflow at n = {n}"), bound: u128::MAX.min(u64::MAX as u128) as u64 }
}

fn check_brute_budget(n: u32) -> Result<()> {
    let b = brute_max_n();
    if n > b {
        return Err(Error::Budget { what: format!("brute-force enumeration of S_{n}"), bound: b as u64 });
    }
    Ok(())
}

/// `|{(g_1..g_s) : type(g_i) = η_i, g_1⋯g_s = 1}| / n!` by enumerating
/// group elements.
pub fn hurwitz(q: &HurwitzQuery) -> Result<Rational> {
    check_sizes(q.n, &q.profiles)?;
    if q.profiles.is_empty() {
        return Err(Error::Malformed("a Hurwitz number needs at least one profile".into()));
    }
    check_brute_budget(q.n)?;
    if parity_obstructed(q.n, &q.profiles) {
        return Ok(Rational::zero());
    }
    let perms = all_perms(q.n);
    let types: Vec<Partition> = perms.iter().map(|p| cycle_type(p)).collect();
    let (last, init) = q.profiles.split_last().expect("nonempty");
    let counts = product_counts(q.n, &perms, &types, init)?;
    // g_s = x^{-1} has the type of x.
    let total: u128 = counts.iter().zip(&types).filter(|(_, t)| *t == last).map(|(c, _)| *c).sum();
    Ok(Rational::new(BigInt::from(total), factorial(q.n)))
}

/// `H_σ(left | right)`: tuples whose left product has type `σ`, by direct
/// enumeration. The vacuous `σ` gives 1.
pub fn hurwitz_refined(sigma: &Partition, left: &[Partition], right: &[Partition]) -> Result<Rational> {
    let n = sigma.size();
    if n == 0 {
        return Ok(Rational::one());
    }
    check_sizes(n, left)?;
    check_sizes(n, right)?;
    check_brute_budget(n)?;
    let perms = all_perms(n);
    let types: Vec<Partition> = perms.iter().map(|p| cycle_type(p)).collect();
    let vl = product_counts(n, &perms, &types, left)?;
    let vr = product_counts(n, &perms, &types, right)?;
    let mut total = BigInt::zero();
    for (x, t) in perms.iter().zip(&types) {
        if t != sigma {
            continue;
        }
        let l = vl[rank(x)];
        if l == 0 {
            continue;
        }
        let mut inv = vec![0u8; x.len()];
        for (i, &y) in x.iter().enumerate() {
            inv[y as usize] = i as u8;
        }
        total += BigInt::from(l) * BigInt::from(vr[rank(&inv)]);
    }
    Ok(Rational::new(total, factorial(n)))
}

// ---------------------------------------------------------------------------
// class-algebra convolution

/// `a[i][k][j] = #{g ∈ C_i : type(z_k·g) = j}` for class representatives
/// `z_k`. Built once per `n`.
pub struct ClassTable {
    classes: Vec<Partition>,
    index: HashMap<Partition, usize>,
    a: Vec<Vec<Vec<u64>>>,
}

impl ClassTable {
    pub fn build(n: u32) -> Self {
        let classes = partitions_of(n);
        let index: HashMap<Partition, usize> = classes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let c = classes.len();
        let reps: Vec<Perm> = classes.iter().map(representative).collect();
        // For each representative z_k, a pass over S_n.
        let per_k: Vec<Vec<Vec<u64>>> = reps
            .par_iter()
            .map(|z| {
                let mut tab = vec![vec![0u64; c]; c];
                let mut g: Perm = (0..n as u8).collect();
                loop {
                    let i = index[&cycle_type(&g)];
                    let j = index[&cycle_type(&compose(z, &g))];
                    tab[i][j] += 1;
                    if !next_permutation(&mut g) {
                        break;
                    }
                }
                tab
            })
            .collect();
        let a = (0..c).map(|i| (0..c).map(|k| per_k[k][i].clone()).collect()).collect();
        ClassTable { classes, index, a }
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    /// Number of tuples with the given types whose product is a fixed
    /// element of each class.
    pub fn product_class_counts(&self, profiles: &[Partition]) -> Vec<BigInt> {
        let c = self.classes.len();
        let id = self.classes.len() - 1; // (1^n) is enumerated last
        let mut w = vec![BigInt::zero(); c];
        w[id] = BigInt::one();
        for p in profiles {
            let i = self.index[p];
            w = (0..c)
                .map(|k| {
                    self.a[i][k]
                        .iter()
                        .zip(&w)
                        .filter(|(a, x)| **a != 0 && !x.is_zero())
                        .map(|(a, x)| BigInt::from(*a) * x)
                        .sum()
                })
                .collect();
        }
        w
    }
}

/// Same count as [`hurwitz`], through the class algebra.
pub fn hurwitz_fast(q: &HurwitzQuery) -> Result<Rational> {
    HurwitzCache::global().hurwitz(q)
}

/// Memo of Hurwitz numbers and class tables. Reads are concurrent; writes
/// are idempotent, so a racing insert stores the same value.
#[derive(Default)]
pub struct HurwitzCache {
    values: RwLock<HashMap<HurwitzQuery, Rational>>,
    tables: RwLock<HashMap<u32, Arc<ClassTable>>>,
}

impl HurwitzCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static HurwitzCache {
        static CACHE: OnceLock<HurwitzCache> = OnceLock::new();
        CACHE.get_or_init(HurwitzCache::new)
    }

    pub fn table(&self, n: u32) -> Result<Arc<ClassTable>> {
        let bound = fast_max_n();
        if n > bound {
            return Err(Error::Budget { what: format!("class table for S_{n}"), bound: bound as u64 });
        }
        if let Some(t) = self.tables.read().expect("cache lock").get(&n) {
            return Ok(t.clone());
        }
        let t = Arc::new(ClassTable::build(n));
        self.tables.write().expect("cache lock").insert(n, t.clone());
        Ok(t)
    }

    pub fn hurwitz(&self, q: &HurwitzQuery) -> Result<Rational> {
        check_sizes(q.n, &q.profiles)?;
        if q.profiles.is_empty() {
            return Err(Error::Malformed("a Hurwitz number needs at least one profile".into()));
        }
        let key = q.canonical();
        if let Some(v) = self.values.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = if parity_obstructed(q.n, &q.profiles) {
            Rational::zero()
        } else {
            let t = self.table(q.n)?;
            let w = t.product_class_counts(&key.profiles);
            Rational::new(w[t.classes.len() - 1].clone(), factorial(q.n))
        };
        self.values.write().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// ---------------------------------------------------------------------------
// one-part double Hurwitz numbers

/// Coefficients of `sinh(c·t)/(c·t)` up to `t^deg`.
fn sinhc_series(c: &Rational, deg: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); deg + 1];
    let mut m = 0usize;
    while 2 * m <= deg {
        let e = 2 * m as i64;
        out[2 * m] = pow_i(c, e) / Rational::from_integer(factorial(2 * m as u32 + 1));
        m += 1;
    }
    out
}

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let deg = a.len().min(b.len());
    (0..deg).map(|k| (0..=k).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[k - i])).collect()
}

fn series_inv(a: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len()];
    out[0] = a[0].recip();
    for k in 1..a.len() {
        let s = (1..=k).fold(Rational::zero(), |acc, i| acc + &a[i] * &out[k - i]);
        out[k] = -s / &a[0];
    }
    out
}

/// `H(σ, (2)^b, (k))` with `k = |σ|`, from
/// `Σ_b |Aut σ| H / (b! k^{b−1}) t^{b−ℓ+1} = (t/2)/sinh(t/2) Π sinh(σ_i t/2)/(σ_i t/2)`.
pub fn one_part_double_hurwitz(sigma: &Partition, b: u32) -> Rational {
    let k = sigma.size();
    if k == 0 {
        return Rational::zero();
    }
    let exp = b as i64 - sigma.len() as i64 + 1;
    if exp < 0 {
        return Rational::zero();
    }
    let deg = exp as usize;
    let half = Rational::new(1.into(), 2.into());
    let mut f = series_inv(&sinhc_series(&half, deg));
    for &s in sigma.parts() {
        f = series_mul(&f, &sinhc_series(&(&half * int(s as i64)), deg));
    }
    let c = f[deg].clone();
    c * Rational::from_integer(factorial(b)) * pow_i(&int(k as i64), b as i64 - 1)
        / Rational::from_integer(sigma.aut_order())
}

/// `H(σ, (2)^b, (k))` through the convolution backend, for comparison.
pub fn one_part_double_hurwitz_enumerated(sigma: &Partition, b: u32) -> Result<Rational> {
    let k = sigma.size();
    if k < 2 && b > 0 {
        // S_1 has no transpositions.
        return Ok(Rational::zero());
    }
    let mut profiles = vec![sigma.clone()];
    profiles.extend(std::iter::repeat(Partition::transposition(k)).take(b as usize));
    profiles.push(Partition::full_cycle(k));
    HurwitzCache::global().hurwitz(&HurwitzQuery::new(k, profiles)?)
}

/// Convenience: `H` as `f64`, for display only.
pub fn approx(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q(n: u32, ps: &[&str]) -> HurwitzQuery {
        HurwitzQuery::new(n, ps.iter().map(|s| p(s)).collect()).unwrap()
    }

    #[test]
    fn small_brute_values() {
        assert_eq!(hurwitz(&q(2, &["2", "2"])).unwrap(), rat(1, 2));
        assert_eq!(hurwitz(&q(2, &["2", "2", "2"])).unwrap(), rat(0, 1));
        assert_eq!(hurwitz(&q(3, &["3", "3"])).unwrap(), rat(1, 3));
        assert_eq!(hurwitz(&q(1, &["1", "1"])).unwrap(), rat(1, 1));
    }

    #[test]
    fn fast_matches_brute_small() {
        for n in 1..=4u32 {
            let parts = partitions_of(n);
            for a in &parts {
                for b in &parts {
                    for c in &parts {
                        let qq = HurwitzQuery::new(n, vec![a.clone(), b.clone(), c.clone()]).unwrap();
                        assert_eq!(hurwitz(&qq).unwrap(), hurwitz_fast(&qq).unwrap(), "{qq:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn refined_examples() {
        assert_eq!(hurwitz_refined(&p("2"), &[p("2")], &[p("2")]).unwrap(), rat(1, 2));
        assert_eq!(hurwitz_refined(&p("1+1"), &[p("2")], &[p("2")]).unwrap(), rat(0, 1));
        assert_eq!(hurwitz_refined(&Partition::empty(), &[], &[]).unwrap(), rat(1, 1));
    }

    #[test]
    fn gjv_examples() {
        assert_eq!(one_part_double_hurwitz(&p("1+1"), 1), rat(1, 2));
        assert_eq!(one_part_double_hurwitz(&p("2"), 2), rat(1, 2));
        assert_eq!(one_part_double_hurwitz(&p("2"), 1), rat(0, 1));
        assert_eq!(one_part_double_hurwitz(&p("1+1+1"), 0), rat(0, 1));
    }

    #[test]
    fn gjv_normalization_is_k() {
        // the k^{b-1} reading; the n^{b-1} reading would differ here since
        // the Hurwitz numbers live in S_k.
        for k in 1..=4u32 {
            for sigma in partitions_of(k) {
                for b in 0..=4 {
                    assert_eq!(
                        one_part_double_hurwitz(&sigma, b),
                        one_part_double_hurwitz_enumerated(&sigma, b).unwrap(),
                        "sigma={sigma} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_enforced() {
        // far above any bound
        let qq = HurwitzQuery::new(30, vec![Partition::identity(30)]).unwrap();
        assert!(matches!(hurwitz(&qq), Err(Error::Budget { .. })));
        assert!(matches!(hurwitz_fast(&qq), Err(Error::Budget { .. })));
    }

    #[test]
    fn rank_is_enumeration_order() {
        for (i, g) in all_perms(4).iter().enumerate() {
            assert_eq!(rank(g), i);
        }
        assert_eq!(cycle_type(&representative(&p("3+2+2+1"))), p("3+2+2+1"));
    }
}
