use std::collections::BTreeSet;

use comblab::ds::{
    ackermann, active_profile, block_decompose, inverse_ackermann, is_ds, lambda_brute, restrict, Partition,
    SymbolSequence, Violation,
};
use comblab::Error;

fn seq(s: &str) -> SymbolSequence<char> {
    SymbolSequence::linear(s.chars().collect())
}

#[test]
fn alternation_positions() {
    assert_eq!(is_ds(&seq("abab"), 2), Err(Violation::Alternation { positions: vec![0, 1, 2, 3] }));
    assert!(is_ds(&seq("abab"), 3).is_ok());
    assert_eq!(is_ds(&seq("abba"), 3), Err(Violation::AdjacentEqual { position: 1 }));
    let circ = SymbolSequence::circular("aba".chars().collect());
    assert_eq!(is_ds(&circ, 3), Err(Violation::AdjacentEqual { position: 2 }));
}

#[test]
fn lambda_table() {
    assert_eq!((1..=5).map(|n| lambda_brute(n, 3).unwrap()).collect::<Vec<_>>(), vec![1, 4, 8, 12, 17]);
    assert_eq!(lambda_brute(4, 2).unwrap(), 7);
    assert!(matches!(lambda_brute(6, 3), Err(Error::Budget(_))));
}

#[test]
fn restriction_and_profile() {
    let s = seq("abcacb");
    let keep: BTreeSet<char> = ['a', 'b'].into();
    assert_eq!(restrict(&s, &keep).elements, vec!['a', 'b', 'a', 'b']);
    assert_eq!(active_profile(&s), vec![1, 2, 3, 2, 1, 0]);
}

#[test]
fn block_decomposition_example() {
    let s = seq("abcbca");
    let part = Partition::new(vec![['a'].into(), ['b', 'c'].into()]).unwrap();
    let d = block_decompose(&s, &part).unwrap();
    assert_eq!(d.class_lengths, vec![1, 4]);
    assert_eq!(d.subsequences.len(), d.total_restricted - d.classes_used + 1);
    assert!(Partition::new(vec![['a'].into(), ['a'].into()]).is_err());
}

#[test]
fn ackermann_growth() {
    assert_eq!(ackermann(1, 5), 32);
    assert_eq!(ackermann(2, 3), 65536);
    assert_eq!(inverse_ackermann(4), 2);
    assert_eq!(inverse_ackermann(16), 2);
    assert_eq!(inverse_ackermann(17), 3);
    assert_eq!(inverse_ackermann(u64::MAX), 3);
}
