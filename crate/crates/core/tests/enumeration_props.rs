use num_bigint::BigUint;
use proptest::prelude::*;
use simplex_quant::enumeration::log2_count;
use simplex_quant::{code_rate, count_types, rank, unrank, Enumerator, TypeIndex, TypePoint};

/// Lexicographic list of compositions built by a plain odometer.
fn lex_oracle(m: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut k = vec![0u32; m];
    k[m - 1] = n;
    loop {
        out.push(k.clone());
        // rightmost slot (excluding the last) that still has mass to its right
        let Some(j) = (0..m - 1)
            .rev()
            .find(|&j| k[j + 1..].iter().any(|&x| x > 0))
        else {
            break;
        };
        let after: u32 = k[j + 1..].iter().sum();
        k[j] += 1;
        k[j + 1..].iter_mut().for_each(|x| *x = 0);
        k[m - 1] = after - 1;
    }
    out
}

#[test]
fn oracle_is_sorted_and_complete() {
    let list = lex_oracle(4, 5);
    assert_eq!(list.len(), 56);
    assert!(list.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn rank_is_lex_position() {
    for m in 2..=6 {
        for n in 1..=7 {
            let list = lex_oracle(m, n);
            assert_eq!(BigUint::from(list.len()), count_types(m, n));
            for variant in [
                Enumerator::new(m, n).unwrap(),
                Enumerator::without_table(m, n).unwrap(),
            ] {
                for (i, k) in list.iter().enumerate() {
                    let point = TypePoint::new(k.clone()).unwrap();
                    assert_eq!(variant.rank(&point).unwrap(), TypeIndex::from(i as u64));
                    assert_eq!(variant.unrank(&TypeIndex::from(i as u64)).unwrap(), point);
                }
            }
        }
    }
}

#[test]
fn out_of_range_index_is_rejected() {
    let e = Enumerator::new(3, 2).unwrap();
    assert!(e.unrank(&TypeIndex::from(6)).is_err());
    assert!(e.unrank(&TypeIndex::from(5)).is_ok());
}

#[test]
fn rate_per_symbol_approaches_asymptote() {
    // log2 C(n+2, 2) / log2 n tends to m - 1 = 2
    let n = 1_000_000u32;
    let exact = log2_count(3, n);
    let asymptote = 2.0 * (n as f64).log2() - 1.0;
    assert!((exact - asymptote).abs() < 0.01, "{exact} vs {asymptote}");
    assert_eq!(code_rate(3, n), exact.ceil() as u64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn round_trip_large(counts in prop::collection::vec(0u32..5000, 2..40)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let point = TypePoint::new(counts).unwrap();
        let idx = rank(&point).unwrap();
        prop_assert!(idx.value() < &count_types(point.m(), point.n()));
        prop_assert_eq!(unrank(&idx, point.m(), point.n()).unwrap(), point);
    }

    #[test]
    fn neighbours_are_ordered(counts in prop::collection::vec(0u32..20, 3..8)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let point = TypePoint::new(counts).unwrap();
        let e = Enumerator::new(point.m(), point.n()).unwrap();
        let idx = e.rank(&point).unwrap().into_inner();
        if idx < e.count() - 1u32 {
            let next = e.unrank(&TypeIndex::from(idx + 1u32)).unwrap();
            prop_assert!(next.counts() > point.counts());
        }
    }
}
