use num_bigint::BigUint;
use proptest::prelude::*;

use hurwitzlab::monodromy::characters::{dimension, factorial, hook_product, partitions_of};
use hurwitzlab::monodromy::counting::count_all;
use hurwitzlab::monodromy::perm::{Certificate, Permutation};
use hurwitzlab::orbifold::associated_cover;
use hurwitzlab::partition::generate_partitions;
use hurwitzlab::{BranchDatum, Partition};

fn partition(max_degree: u32) -> impl Strategy<Value = Partition> {
    (1..=max_degree).prop_flat_map(|d| {
        let shapes = partitions_of(d);
        (0..shapes.len()).prop_map(move |i| shapes[i].clone())
    })
}

fn permutation(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #[test]
    fn partition_text_round_trip(p in partition(30)) {
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(&back, &p);
    }

    #[test]
    fn defect_and_lcm(p in partition(30)) {
        prop_assert!(p.parts().iter().all(|&x| p.lcm() % u64::from(x) == 0));
        let off = p.parts().iter().filter(|&&x| u64::from(x) != p.lcm()).count();
        prop_assert_eq!(p.defect() as usize, off);
        prop_assert_eq!(p.parts().iter().sum::<u32>(), p.degree());
    }

    #[test]
    fn splits_reassemble(p in partition(14), cut in 1u32..14) {
        prop_assume!(cut < p.degree());
        for (a, b) in p.enumerate_splits(cut) {
            prop_assert_eq!(a.degree(), cut);
            let mut parts = a.parts().to_vec();
            parts.extend_from_slice(b.parts());
            prop_assert_eq!(Partition::new(parts).unwrap(), p.clone());
        }
    }

    #[test]
    fn generator_postcondition(d in 1u32..=16, c_max in 0u32..=5, mask in 1u32..(1 << 6)) {
        let allowed: Vec<u32> = (1..=6).filter(|i| mask & (1 << (i - 1)) != 0 && *i <= d).collect();
        prop_assume!(!allowed.is_empty());
        let got = generate_partitions(d, c_max, Some(&allowed), true).unwrap();
        let want: Vec<Partition> = partitions_of(d)
            .iter()
            .filter(|p| p.defect() <= c_max && !p.is_trivial() && p.parts().iter().all(|x| allowed.contains(x)))
            .cloned()
            .collect();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut want_sorted = want;
        want_sorted.sort();
        prop_assert_eq!(got_sorted, want_sorted);
    }

    #[test]
    fn permutation_algebra(a in permutation(9), b in permutation(9), c in permutation(9)) {
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert_eq!(a.cycle_type(), a.inverse().cycle_type());
        prop_assert_eq!(a.cycle_type().degree(), 9);
    }

    #[test]
    fn certificate_json_round_trip(a in permutation(7), b in permutation(7)) {
        let cert = Certificate::from_pair(a, b);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert!(cert.sigma1.then(&cert.sigma2).then(&cert.sigma3).is_identity());
    }

    #[test]
    fn hook_length_formula(p in partition(25)) {
        prop_assert_eq!(dimension(&p) * hook_product(&p), factorial(p.degree()));
    }

    #[test]
    fn counts_ignore_class_order(a in partition(9), seed in 0usize..1000) {
        let d = a.degree();
        let shapes = partitions_of(d);
        let b = &shapes[seed % shapes.len()];
        let c = &shapes[(seed / 7) % shapes.len()];
        let x = count_all([&a, b, c], None).unwrap();
        prop_assert_eq!(&x, &count_all([c, &a, b], None).unwrap());
        prop_assert_eq!(&x, &count_all([b, &a, c], None).unwrap());
        let f: BigUint = factorial(d).magnitude().clone();
        prop_assert!(x <= &f * &f);
    }

    #[test]
    fn datum_text_round_trip(i in 0usize..168) {
        let row = &hurwitzlab::enumeration::golden::rows()[i];
        let back: BranchDatum = row.datum.to_string().parse().unwrap();
        prop_assert_eq!(&back, &row.datum);
        prop_assert!(back.check_rh());
        prop_assert_eq!(associated_cover(&back).unwrap().target.to_string(), row.cover_target.clone());
    }
}
