use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use symorb::algebra::rational::factorial;
use symorb::partitions::{
    enumerate_sub_splittings, multipartitions_of, partitions_of, weighted_partitions_of, ClassLabel, MultiPartition,
    Partition, WeightedPartition,
};

#[test]
fn class_equation() {
    for n in 0..=10u32 {
        let total: BigInt = partitions_of(n).iter().map(|l| factorial(n) / l.centralizer_order()).sum();
        assert_eq!(total, factorial(n), "n = {n}");
    }
}

#[test]
fn partition_counts() {
    let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
    for (n, &c) in p.iter().enumerate() {
        assert_eq!(partitions_of(n as u32).len(), c);
    }
    let first = partitions_of(4);
    assert_eq!(first.first().unwrap().parts(), &[4]);
    assert_eq!(first.last().unwrap().parts(), &[1, 1, 1, 1]);
}

#[test]
fn aut_divides_centralizer() {
    for n in 1..=10 {
        for l in partitions_of(n) {
            assert!(l.centralizer_order().is_multiple_of(&l.aut_order()), "{l}");
        }
    }
}

#[test]
fn multipartition_counts() {
    // Generating function Π (1 - x^k)^{-2}: 1, 2, 5, 10, 20.
    let expect = [1, 2, 5, 10, 20];
    for (n, &c) in expect.iter().enumerate() {
        assert_eq!(multipartitions_of(n as u32, 2).len(), c);
    }
}

#[test]
fn ages_and_text() {
    let p: Partition = "2+1+1".parse().unwrap();
    assert_eq!(p.age(4).unwrap(), 1);
    assert!(p.age(5).is_err());
    assert_eq!(p.to_string(), "2+1+1");
    let w: WeightedPartition = "1(E1)+2(x2)+1(1)".parse().unwrap();
    assert_eq!(w.to_string(), "2(x2)+1(1)+1(E1)");
    assert!("2(E0)".parse::<WeightedPartition>().is_err());
    assert!("2(y1)".parse::<WeightedPartition>().is_err());
    assert_eq!(WeightedPartition::empty().to_string(), "()");
}

fn label() -> impl Strategy<Value = ClassLabel> {
    prop_oneof![
        Just(ClassLabel::One),
        (1usize..=2).prop_map(ClassLabel::ECurve),
        (1usize..=2).prop_map(ClassLabel::Omega),
        (1usize..=3).prop_map(ClassLabel::FixedPt),
    ]
}

fn weighted() -> impl Strategy<Value = WeightedPartition> {
    prop::collection::vec((1u32..=3, label()), 0..6).prop_map(|v| WeightedPartition::new(v).unwrap())
}

proptest! {
    #[test]
    fn splitting_count(w in weighted()) {
        let expect: u32 = w.multiplicities().iter().map(|(_, m)| m + 1).product();
        let s = enumerate_sub_splittings(&w);
        prop_assert_eq!(s.len() as u32, expect);
        for (th, nu) in &s {
            prop_assert_eq!(&th.join(nu), &w);
        }
    }

    #[test]
    fn weighted_text_roundtrip(w in weighted()) {
        let back: WeightedPartition = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn join_minus_inverse(a in prop::collection::vec(1u32..=4, 0..5), b in prop::collection::vec(1u32..=4, 0..5)) {
        let (a, b) = (Partition::new(a).unwrap(), Partition::new(b).unwrap());
        let j = a.join(&b);
        prop_assert_eq!(j.minus(&b), Some(a.clone()));
        prop_assert!(j.contains(&a));
    }
}

#[test]
fn weighted_partitions_roundtrip_through_multipartitions() {
    let labels: Vec<ClassLabel> = (1..=3).map(ClassLabel::FixedPt).collect();
    let from_weighted = weighted_partitions_of(3, &labels);
    let direct = multipartitions_of(3, 3);
    assert_eq!(from_weighted.len(), direct.len());
    for m in &direct {
        assert_eq!(MultiPartition::from_weighted(&m.to_weighted(), 3).as_ref(), Some(m));
    }
}
