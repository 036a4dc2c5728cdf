//! Divisor-operator matrices in a Chen–Ruan basis, the reference n = 2,
//! r = 1 closed form, the L map, and eigenvalue certification.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::field::char_poly;
use crate::algebra::series::monomial_name;
use crate::algebra::{
    expand_q_closed_form, GaussRational, Matrix, Orders, Poly1, QExpr, RatFunc2, Rational, TruncSeries,
};
use crate::chenruan::PairingMatrix;
use crate::error::{Error, Result};
use crate::invariants::{three_point_divisor_series, DivisorSymbol, ZeroDegreeTable};
use crate::partitions::WeightedPartition;
use crate::surface::TangentWeights;

impl Serialize for DivisorSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DivisorSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Matrix of `D ∗ −`: entry `(i, j)` is the coefficient of `basis[i]` in
/// `D ∗ basis[j]`. `gaps` lists entries whose β = 0 part was unavailable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub divisor: DivisorSymbol,
    pub basis: Vec<WeightedPartition>,
    pub orders: Orders,
    pub entries: Vec<Vec<TruncSeries>>,
    pub gaps: BTreeSet<(usize, usize)>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator matrices serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One `row,col,monomial,coefficient` line per nonzero coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,monomial,coefficient\n");
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                for (k, c) in e.terms() {
                    out.push_str(&format!("{},{},{},\"{}\"\n", i + 1, j + 1, monomial_name(k), c));
                }
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|row| row.iter().map(series_latex).collect()).collect();
        latex_table(&self.basis, &cells)
    }

    /// Evaluates every entry as a truncated polynomial. Approximate by
    /// construction: the tail beyond the box is dropped.
    pub fn eval_truncated(&self, t1: &Rational, t2: &Rational, u: &Rational, s: &[Rational]) -> Result<Matrix<Rational>> {
        if !self.gaps.is_empty() {
            return Err(Error::Malformed(format!("{} entries lack their degree-zero part", self.gaps.len())));
        }
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval_truncated(t1, t2, u, s)).collect())
            .collect()
    }
}

/// Assembles `D ∗ −` on `basis`: `M = G^{-1} T` with
/// `T_{γj} = ⟨⟨basis[j], D, basis[γ]⟩⟩`.
pub fn divisor_operator(
    n: u32,
    r: usize,
    d: DivisorSymbol,
    basis: &[WeightedPartition],
    orders: &Orders,
    w: &TangentWeights,
    table: &ZeroDegreeTable,
) -> Result<OperatorMatrix> {
    if w.r() != r || orders.r() != r {
        return Err(Error::Shape(format!("r = {r} but weights have r = {} and orders r = {}", w.r(), orders.r())));
    }
    if let Some(b) = basis.iter().find(|b| b.size() != n) {
        return Err(Error::SizeMismatch { expected: n, found: b.size() });
    }
    let m = basis.len();
    let ginv = PairingMatrix::new(basis, w)?.inverse()?;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|g| (0..m).map(move |j| (g, j))).collect();
    let three = pairs
        .par_iter()
        .map(|&(g, j)| three_point_divisor_series(&basis[j], d, &basis[g], orders, w, table))
        .collect::<Result<Vec<_>>>()?;
    let t = |g: usize, j: usize| &three[g * m + j];
    let mut entries = vec![vec![TruncSeries::zero(orders.clone()); m]; m];
    let mut gaps = BTreeSet::new();
    for i in 0..m {
        for j in 0..m {
            let mut acc = TruncSeries::zero(orders.clone());
            for g in 0..m {
                if ginv[i][g].is_zero() {
                    continue;
                }
                let tp = t(g, j);
                if tp.gap {
                    gaps.insert((i, j));
                }
                acc = acc.add(&tp.series.scale(&ginv[i][g]))?;
            }
            entries[i][j] = acc;
        }
    }
    Ok(OperatorMatrix { divisor: d, basis: basis.to_vec(), orders: orders.clone(), entries, gaps })
}

/// The ordered basis `{1(E1)1(E1), 2(E1), 1(1)1(E1), 2(1), 1(1)1(1)}`.
pub fn basis_a1n2() -> Vec<WeightedPartition> {
    ["1(E1)+1(E1)", "2(E1)", "1(1)+1(E1)", "2(1)", "1(1)+1(1)"]
        .iter()
        .map(|s| s.parse().expect("valid basis label"))
        .collect()
}

/// Closed-form matrix of `D1 ∗ −` for n = 2, r = 1 in [`basis_a1n2`], with
/// `θ = t1 + t2` and `s = s1`.
pub fn paper_matrix_a1n2() -> Vec<Vec<QExpr>> {
    let th = || QExpr::t1() + QExpr::t2();
    let s = || QExpr::s(1);
    let q = QExpr::q;
    let one = || QExpr::int(1);
    let zero = || QExpr::int(0);
    let a = || one() / (one() + s() * q());
    let b = || one() / (one() + s() / q());
    let t1t2 = || QExpr::t1() * QExpr::t2();
    vec![
        vec![
            QExpr::int(2) * th() * (one() - a() - b()),
            QExpr::i() * th() * (a() - b()),
            QExpr::int(-1),
            zero(),
            zero(),
        ],
        vec![
            QExpr::int(-2) * QExpr::i() * th() * (a() - b()),
            th() * (QExpr::int(2) - a() - b() - QExpr::int(2) / (one() - s())),
            zero(),
            QExpr::int(-1),
            zero(),
        ],
        vec![
            QExpr::int(2) * t1t2(),
            zero(),
            -(th() * (one() + s()) / (one() - s())),
            zero(),
            QExpr::rational(Rational::new((-1).into(), 2.into())),
        ],
        vec![zero(), QExpr::int(4) * t1t2(), zero(), zero(), zero()],
        vec![zero(), zero(), QExpr::int(4) * t1t2(), zero(), zero()],
    ]
}

/// LaTeX `pmatrix` of the closed form.
pub fn paper_matrix_latex() -> String {
    let cells: Vec<Vec<String>> =
        paper_matrix_a1n2().iter().map(|row| row.iter().map(QExpr::to_latex).collect()).collect();
    latex_table(&basis_a1n2(), &cells)
}

/// β = 0 parts `T(s = 0) = G · M(s = 0)` of `⟨⟨b_j, D1, b_γ⟩⟩`, read off the
/// closed form.
pub fn zero_degree_table_a1n2() -> Result<ZeroDegreeTable> {
    let basis = basis_a1n2();
    let w = TangentWeights::new(1)?;
    let g = PairingMatrix::new(&basis, &w)?.gram;
    let o = Orders::new(0, vec![0]);
    let m0: Vec<Vec<RatFunc2>> = paper_matrix_a1n2()
        .iter()
        .map(|row| row.iter().map(|e| Ok(expand_q_closed_form(e, &o)?.coeff(&[0, 0]))).collect())
        .collect::<Result<_>>()?;
    let mut table = ZeroDegreeTable::new();
    let n = basis.len();
    for gam in 0..n {
        for j in 0..n {
            let v = (0..n).fold(RatFunc2::zero(), |acc, k| &acc + &(&g[gam][k] * &m0[k][j]));
            table.insert(ZeroDegreeTable::key_for(&basis[j], DivisorSymbol::D(1), &basis[gam]), vec![(0, v)]);
        }
    }
    Ok(table)
}

/// A coefficient where the computed matrix and the closed form disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub monomial: String,
    pub expected: RatFunc2,
    pub computed: RatFunc2,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entry ({},{}) at {}: expected {}, computed {}",
            self.row, self.col, self.monomial, self.expected, self.computed
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub orders: Orders,
    pub entries: usize,
    pub matching: usize,
    pub coefficients_checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// 1-based entries whose β = 0 part was missing from the table.
    pub gaps: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.gaps.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}/{} entries match ({} coefficients checked, u-order {}, s-order {:?})",
            self.matching, self.entries, self.coefficients_checked, self.orders.u, self.orders.s
        )?;
        for m in &self.mismatches {
            writeln!(f, "mismatch: {m}")?;
        }
        for (i, j) in &self.gaps {
            writeln!(f, "gap: entry ({i},{j}) has no degree-zero table value")?;
        }
        Ok(())
    }
}

/// Compares `D1 ∗ −` for n = 2, r = 1 against the expanded closed form.
/// β ≠ 0 coefficients are always compared; the `s = 0` layer only where the
/// table supplied it. Uses [`zero_degree_table_a1n2`] when `table` is `None`.
pub fn verify_a1n2(orders: &Orders, table: Option<&ZeroDegreeTable>) -> Result<VerifyReport> {
    if orders.r() != 1 {
        return Err(Error::Shape(format!("n = 2, r = 1 check needs one s-order, got {}", orders.r())));
    }
    let own;
    let table = match table {
        Some(t) => t,
        None => {
            own = zero_degree_table_a1n2()?;
            &own
        }
    };
    let w = TangentWeights::new(1)?;
    let basis = basis_a1n2();
    let computed = divisor_operator(2, 1, DivisorSymbol::D(1), &basis, orders, &w, table)?;
    let expected: Vec<Vec<TruncSeries>> = paper_matrix_a1n2()
        .par_iter()
        .map(|row| row.iter().map(|e| expand_q_closed_form(e, orders)).collect())
        .collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    let mut matching = 0;
    let keys = orders.monomials();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let gap = computed.gaps.contains(&(i, j));
            let before = mismatches.len();
            for k in &keys {
                if gap && k[1..].iter().all(|&x| x == 0) {
                    continue;
                }
                checked += 1;
                let (e, c) = (expected[i][j].coeff(k), computed.entries[i][j].coeff(k));
                if e != c {
                    mismatches.push(Mismatch {
                        row: i + 1,
                        col: j + 1,
                        monomial: monomial_name(k),
                        expected: e,
                        computed: c,
                    });
                }
            }
            if !gap && mismatches.len() == before {
                matching += 1;
            }
        }
    }
    Ok(VerifyReport {
        orders: orders.clone(),
        entries: basis.len() * basis.len(),
        matching,
        coefficients_checked: checked,
        mismatches,
        gaps: computed.gaps.iter().map(|&(i, j)| (i + 1, j + 1)).collect(),
    })
}

/// Image of a weighted partition under L: `(−i)^{age} a_λ(η)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NakajimaSymbol {
    pub lambda: WeightedPartition,
    /// Exponent of `i`, in `0..4`.
    pub i_power: u8,
}

impl NakajimaSymbol {
    pub fn age(&self) -> u32 {
        self.lambda.size() - self.lambda.len() as u32
    }

    pub fn grading(&self) -> u32 {
        self.lambda.grading()
    }

    pub fn phase(&self) -> GaussRational {
        GaussRational::i_pow(self.i_power as i64)
    }

    /// `⟨λ(η1)|λ(η2)⟩ = sign · (Nakajima pairing)`.
    pub fn pairing_sign(&self) -> i64 {
        if self.age() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for NakajimaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = ["", "i*", "-", "-i*"][self.i_power as usize];
        write!(f, "{phase}a[{}]", self.lambda)
    }
}

pub fn l_map(lambda: &WeightedPartition, n: u32) -> Result<NakajimaSymbol> {
    if lambda.size() != n {
        return Err(Error::SizeMismatch { expected: n, found: lambda.size() });
    }
    let age = (n - lambda.len() as u32) % 4;
    Ok(NakajimaSymbol { lambda: lambda.clone(), i_power: ((4 - age) % 4) as u8 })
}

/// A rational point `(t1, t2, s1..sr, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpec {
    pub t1: Rational,
    pub t2: Rational,
    pub s: Vec<Rational>,
    pub q: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub char_poly: Poly1,
    pub squarefree: bool,
    /// Set when entries came from truncated series rather than closed forms.
    pub approximate: bool,
}

impl fmt::Display for EigenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "characteristic polynomial: {}", self.char_poly)?;
        let verdict = if self.squarefree { "squarefree: distinct eigenvalues" } else { "not squarefree: repeated eigenvalue" };
        write!(f, "{verdict}")?;
        if self.approximate {
            write!(f, " (approximate, from truncated series)")?;
        }
        Ok(())
    }
}

fn real_char_poly(m: &Matrix<GaussRational>) -> Result<Poly1> {
    let cp = char_poly(m)?;
    let mut out = Vec::with_capacity(cp.len());
    for (k, c) in cp.into_iter().enumerate() {
        if !c.is_real() {
            return Err(Error::RealnessViolation { monomial: format!("x^{k}"), value: c.to_string() });
        }
        out.push(c.re);
    }
    Ok(Poly1::new(out))
}

/// Certifies distinct eigenvalues of a closed-form matrix at `spec`. Entries
/// may be complex; the characteristic polynomial must come out real.
pub fn eigen_certify_closed(m: &[Vec<QExpr>], spec: &EigenSpec) -> Result<EigenReport> {
    let vals: Matrix<GaussRational> = m
        .iter()
        .map(|row| row.iter().map(|e| e.eval(&spec.t1, &spec.t2, &spec.s, &spec.q)).collect())
        .collect::<Result<_>>()?;
    if vals.iter().any(|r| r.len() != vals.len()) {
        return Err(Error::NonSquare { rows: vals.len(), cols: vals.first().map_or(0, Vec::len) });
    }
    let p = real_char_poly(&vals)?;
    let squarefree = p.is_squarefree();
    Ok(EigenReport { char_poly: p, squarefree, approximate: false })
}

/// Same certificate from truncated series evaluated at `u`; flagged approximate.
pub fn eigen_certify_series(m: &OperatorMatrix, t1: &Rational, t2: &Rational, u: &Rational, s: &[Rational]) -> Result<EigenReport> {
    let vals = m.eval_truncated(t1, t2, u, s)?;
    let cp = char_poly(&vals)?;
    let p = Poly1::new(cp);
    let squarefree = p.is_squarefree();
    Ok(EigenReport { char_poly: p, squarefree, approximate: true })
}

/// Certificate for a plain rational matrix (used for the identity control).
pub fn eigen_certify_rational(m: &Matrix<Rational>) -> Result<EigenReport> {
    let p = Poly1::new(char_poly(m)?);
    let squarefree = p.is_squarefree();
    Ok(EigenReport { char_poly: p, squarefree, approximate: false })
}

fn latex_exp(s: &str) -> String {
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '^' => {
                let mut e = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    e.push(*d);
                    chars.next();
                }
                out.push_str(&format!("^{{{e}}}"));
            }
            '*' => out.push(' '),
            _ => out.push(c),
        }
    }
    out.replace("t1", "t_1").replace("t2", "t_2")
}

pub fn ratfunc_latex(f: &RatFunc2) -> String {
    if f.den().is_one() {
        latex_exp(&f.num().to_string())
    } else {
        format!("\\frac{{{}}}{{{}}}", latex_exp(&f.num().to_string()), latex_exp(&f.den().to_string()))
    }
}

fn series_latex(e: &TruncSeries) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = e
        .terms()
        .map(|(k, c)| {
            let mon = if k.iter().all(|&x| x == 0) {
                String::new()
            } else {
                latex_exp(&monomial_name(k).replace("s1", "s_1").replace("s2", "s_2"))
            };
            let coef = ratfunc_latex(c);
            match (coef.as_str(), mon.is_empty()) {
                (_, true) => format!("({coef})"),
                ("1", false) => mon,
                _ => format!("({coef})\\,{mon}"),
            }
        })
        .collect();
    parts.join(" + ")
}

fn latex_table(basis: &[WeightedPartition], cells: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str("% basis: ");
    out.push_str(&basis.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(", "));
    out.push_str("\n\\begin{pmatrix}\n");
    for row in cells {
        out.push_str("  ");
        out.push_str(&row.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{pmatrix}\n");
    out
}
