use symorb::algebra::{Orders, RatFunc2, Rational, TruncSeries};
use symorb::chenruan::PairingMatrix;
use symorb::invariants::{three_point_divisor_series, DivisorSymbol, ZeroDegreeTable};
use symorb::operators::{
    basis_a1n2, divisor_operator, eigen_certify_closed, eigen_certify_rational, eigen_certify_series, l_map,
    paper_matrix_a1n2, verify_a1n2, zero_degree_table_a1n2, EigenSpec, OperatorMatrix,
};
use symorb::partitions::{weighted_partitions_of, ClassLabel, WeightedPartition};
use symorb::surface::TangentWeights;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn wp(s: &str) -> WeightedPartition {
    s.parse().unwrap()
}

fn basis(n: u32, r: usize) -> Vec<WeightedPartition> {
    let mut labels = vec![ClassLabel::One];
    labels.extend((1..=r).map(ClassLabel::ECurve));
    weighted_partitions_of(n, &labels)
}

#[test]
fn three_point_functions_are_symmetric_and_g_m_recovers_them() {
    let w = TangentWeights::new(2).unwrap();
    let o = Orders::new(2, vec![1, 1]);
    let b = basis(2, 2);
    let empty = ZeroDegreeTable::new();
    for d in [DivisorSymbol::Twisted, DivisorSymbol::D(1), DivisorSymbol::D(2)] {
        let m = divisor_operator(2, 2, d, &b, &o, &w, &empty).unwrap();
        let g = PairingMatrix::new(&b, &w).unwrap().gram;
        for x in 0..b.len() {
            for y in 0..b.len() {
                let t = three_point_divisor_series(&b[y], d, &b[x], &o, &w, &empty).unwrap().series;
                let back = three_point_divisor_series(&b[x], d, &b[y], &o, &w, &empty).unwrap().series;
                assert_eq!(t, back, "{d}: {} {}", b[x], b[y]);
                let mut gm = TruncSeries::zero(o.clone());
                for i in 0..b.len() {
                    gm = gm.add(&m.entries[i][y].scale(&g[x][i])).unwrap();
                }
                assert_eq!(gm, t, "{d}: row {x}, col {y}");
            }
        }
    }
}

#[test]
fn verify_small_boxes() {
    for (u, s) in [(0, 0), (0, 3), (3, 0), (2, 2)] {
        let rep = verify_a1n2(&Orders::new(u, vec![s]), None).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.matching, 25);
    }
    assert!(verify_a1n2(&Orders::new(1, vec![1, 1]), None).is_err());
}

#[test]
fn missing_table_leaves_gaps_but_nonzero_degree_still_matches() {
    let rep = verify_a1n2(&Orders::new(2, vec![2]), Some(&ZeroDegreeTable::new())).unwrap();
    assert!(!rep.gaps.is_empty());
    assert!(rep.mismatches.is_empty(), "{rep}");
}

#[test]
fn operator_matrix_serialization() {
    let w = TangentWeights::new(1).unwrap();
    let o = Orders::new(1, vec![2]);
    let table = zero_degree_table_a1n2().unwrap();
    let m = divisor_operator(2, 1, DivisorSymbol::D(1), &basis_a1n2(), &o, &w, &table).unwrap();
    assert_eq!(OperatorMatrix::from_json(&m.to_json()).unwrap(), m);
    let terms: usize = m.entries.iter().flatten().map(TruncSeries::num_terms).sum();
    assert_eq!(m.to_csv().lines().count(), terms + 1);
    assert!(m.to_latex().contains("\\begin{pmatrix}"));
    assert!(OperatorMatrix::from_json("{}").is_err());
}

#[test]
fn wrong_sizes_are_rejected() {
    let w = TangentWeights::new(1).unwrap();
    let o = Orders::new(0, vec![1]);
    let e = ZeroDegreeTable::new();
    assert!(divisor_operator(3, 1, DivisorSymbol::D(1), &basis_a1n2(), &o, &w, &e).is_err());
    assert!(divisor_operator(2, 2, DivisorSymbol::D(1), &basis_a1n2(), &o, &w, &e).is_err());
}

#[test]
fn l_map_examples() {
    let s = l_map(&wp("2(1)+1(1)"), 3).unwrap();
    assert_eq!(s.i_power, 3);
    assert_eq!(s.age(), 1);
    assert_eq!(s.pairing_sign(), -1);
    for n in 1..=6u32 {
        let s = l_map(&wp(&format!("{n}(x1)")), n).unwrap();
        assert_eq!(s.age(), n - 1);
        assert_eq!(s.i_power as u32, (4 - (n - 1) % 4) % 4);
    }
    assert!(l_map(&wp("2(1)"), 3).is_err());
    for b in basis(3, 2) {
        let s = l_map(&b, 3).unwrap();
        assert_eq!(s.grading(), b.grading());
        assert!(s.to_string().contains(&b.to_string()));
    }
}

#[test]
fn closed_form_char_poly_is_real() {
    let m = paper_matrix_a1n2();
    assert_eq!(m.len(), 5);
    for (t1, t2, s, q) in [(1, 2, rat(1, 3), rat(1, 5)), (2, 3, rat(1, 7), rat(2, 9)), (-1, 3, rat(2, 5), rat(3, 4))] {
        let spec = EigenSpec { t1: rat(t1, 1), t2: rat(t2, 1), s: vec![s], q };
        let rep = eigen_certify_closed(&m, &spec).unwrap();
        assert_eq!(rep.char_poly.degree(), Some(5));
        assert!(!rep.approximate);
    }
}

#[test]
fn identity_control_is_derogatory() {
    let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| rat((i == j) as i64, 1)).collect()).collect();
    let rep = eigen_certify_rational(&id).unwrap();
    assert!(!rep.squarefree);
    assert!(rep.to_string().contains("repeated"));
}

#[test]
fn series_certificate_is_approximate() {
    let w = TangentWeights::new(1).unwrap();
    let o = Orders::new(3, vec![3]);
    let table = zero_degree_table_a1n2().unwrap();
    let m = divisor_operator(2, 1, DivisorSymbol::D(1), &basis_a1n2(), &o, &w, &table).unwrap();
    let rep = eigen_certify_series(&m, &rat(1, 1), &rat(2, 1), &rat(1, 10), &[rat(1, 10)]).unwrap();
    assert!(rep.approximate);
    assert!(rep.to_string().contains("approximate"));

    let gappy = divisor_operator(2, 1, DivisorSymbol::D(1), &basis_a1n2(), &o, &w, &ZeroDegreeTable::new()).unwrap();
    assert!(eigen_certify_series(&gappy, &rat(1, 1), &rat(2, 1), &rat(0, 1), &[rat(0, 1)]).is_err());
}

#[test]
fn builtin_table_has_no_zero_entries() {
    let t = zero_degree_table_a1n2().unwrap();
    assert!(!t.is_empty());
    for terms in t.entries().values() {
        assert!(terms.iter().all(|(_, c): &(u32, RatFunc2)| !c.is_zero()));
    }
}
