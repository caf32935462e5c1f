use lagrange_core::lagrange::{jacobi_r4_check, RepresentationSet};
use lagrange_core::localdata::admissible_classes;

fn odd_n_with_classes(start: u64, d: u64) -> u64 {
    (start..)
        .step_by(2)
        .find(|&n| !admissible_classes(n, d).unwrap().is_empty())
        .unwrap()
}

#[test]
fn phi_partitions_f() {
    for d in [3u64, 5, 15] {
        let n = odd_n_with_classes(200_001, d);
        let set = RepresentationSet::enumerate(n).unwrap();
        let by_class: f64 = set.phi_by_class(d).values().sum();
        let f = set.f_of(d);
        assert!((by_class - f).abs() <= 1e-12 * f.max(1.0), "d = {d}: {by_class} vs {f}");
        let direct: f64 = admissible_classes(n, d)
            .unwrap()
            .iter()
            .map(|b| set.phi_of(d, b).unwrap())
            .sum();
        assert!((direct - f).abs() <= 1e-12 * f.max(1.0));
    }
}

#[test]
fn gamma_is_unrestricted_below_three_and_shrinks_in_z() {
    let set = RepresentationSet::enumerate(100_003).unwrap();
    let all = set.f_of(1);
    assert_eq!(set.gamma_sum(3.0), all);
    let mut prev = all;
    for z in [5.0, 10.0, 20.0, 40.0] {
        let g = set.gamma_sum(z);
        assert!(g <= prev && g >= 0.0);
        prev = g;
    }
}

#[test]
fn f_is_below_unrestricted_count() {
    let set = RepresentationSet::enumerate(300_007).unwrap();
    let all = set.f_of(1);
    for d in [3u64, 5, 7, 11, 105] {
        assert!(set.f_of(d) <= all);
    }
}

#[test]
fn main_term_tracks_f_for_d_three_near_ten_million() {
    let n = odd_n_with_classes(10_000_001, 3);
    let set = RepresentationSet::enumerate(n).unwrap();
    let r = set.remainder(3).unwrap();
    assert!(r.m > 0.0);
    assert!(r.relative_error.abs() < 0.25, "{r:?}");
}

#[test]
fn jacobi_count_for_a_prime() {
    let (count, expected) = jacobi_r4_check(10_007).unwrap();
    assert_eq!(count, expected);
    assert_eq!(expected, 8 * 10_008);
}
