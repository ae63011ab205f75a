//! Families enumerated by the library against brute force: every partition
//! up to the weight cap (with a free count of zeros where the family starts
//! at index 0), filtered by the defining conditions written out directly.

use std::collections::BTreeMap;

use pmotion::combinatorics::{enumerate_set, Members, SetSpec};

const CAP: i64 = 14;

/// Frequency vectors `f[1..]` of all partitions with weight at most `cap`.
fn partitions(cap: i64) -> Vec<Vec<u32>> {
    fn go(rest: i64, max_part: i64, f: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(f.clone());
        for p in 1..=max_part.min(rest) {
            f[p as usize] += 1;
            go(rest - p, p, f, out);
            f[p as usize] -= 1;
        }
    }
    let mut out = Vec::new();
    go(cap, cap, &mut vec![0; cap as usize + 2], &mut out);
    out
}

fn weight(f: &[u32]) -> i64 {
    f.iter().enumerate().map(|(i, &c)| i as i64 * c as i64).sum()
}

fn adjacent_ok(f: &[u32], from: usize, k: u32) -> bool {
    (from..f.len() - 1).all(|i| f[i] + f[i + 1] <= k)
}

/// Counts per weight of `f` with `f[0]` ranging over `0..=k`, kept when `keep` holds.
fn brute(k: u32, zeros: bool, keep: impl Fn(&[u32]) -> bool) -> BTreeMap<i64, u64> {
    let mut h = BTreeMap::new();
    for base in partitions(CAP) {
        for f0 in 0..=if zeros { k } else { 0 } {
            let mut f = base.clone();
            f[0] = f0;
            if keep(&f) {
                *h.entry(weight(&f)).or_insert(0) += 1;
            }
        }
    }
    h
}

fn library(spec: SetSpec) -> BTreeMap<i64, u64> {
    let Members::Sequences(v) = enumerate_set(&spec, CAP).unwrap() else {
        panic!("{} is not a sequence family", spec.name());
    };
    let mut h = BTreeMap::new();
    for f in v {
        *h.entry(f.weight()).or_insert(0) += 1;
    }
    h
}

fn parity_even_counts(f: &[u32], odd_parts: bool) -> bool {
    f.iter()
        .enumerate()
        .all(|(i, &c)| (i % 2 == 1) != odd_parts || c % 2 == 0)
}

#[test]
fn w_families_match_brute_force() {
    for k in 1..=3u32 {
        for a in 0..=k {
            let w = brute(k, false, |f| {
                adjacent_ok(f, 1, k) && f[1] <= a && parity_even_counts(f, false)
            });
            assert_eq!(library(SetSpec::W { k, a }), w, "W k={k} a={a}");
            let wbar = brute(k, false, |f| {
                adjacent_ok(f, 1, k) && f[1] <= a && parity_even_counts(f, true)
            });
            assert_eq!(library(SetSpec::Wbar { k, a }), wbar, "W̄ k={k} a={a}");
        }
    }
}

#[test]
fn z_and_y_at_offset_zero_match_brute_force() {
    for k in 1..=3u32 {
        for j in 0..=k {
            for r in 0..=k - j {
                let z = brute(k, true, |f| {
                    let cut = (f[0] as i64 + f[1] as i64 - (k - r) as i64).max(0);
                    adjacent_ok(f, 0, k) && f[0] as i64 <= j as i64 - cut
                });
                assert_eq!(library(SetSpec::Z { j, r, k, u: 0 }), z, "Z j={j} r={r} k={k}");
                let allowed: Vec<i64> = (0..=j as i64).map(|l| l + (l - (j as i64 - r as i64)).max(0)).collect();
                let y = brute(k, true, |f| adjacent_ok(f, 0, k) && allowed.contains(&(f[0] as i64)));
                assert_eq!(library(SetSpec::Y { j, r, k, u: 0 }), y, "Y j={j} r={r} k={k}");
                // The two families are equinumerous weight by weight.
                assert_eq!(z, y);
            }
        }
    }
}

#[test]
fn z_at_offset_one_matches_brute_force() {
    for k in 1..=3u32 {
        for j in 0..=k {
            for r in 0..=k - j {
                let z = brute(k, false, |f| {
                    let cut = (f[1] as i64 + f[2] as i64 - (k - r) as i64).max(0);
                    adjacent_ok(f, 1, k) && f[1] as i64 <= j as i64 - cut
                });
                assert_eq!(library(SetSpec::Z { j, r, k, u: 1 }), z, "Z j={j} r={r} k={k} u=1");
            }
        }
    }
}

#[test]
fn odd_parity_z_matches_brute_force() {
    for k in 1..=3u32 {
        for j in 0..=k {
            for r in 0..=k - j {
                let z = brute(k, true, |f| {
                    let cut = (f[0] as i64 + f[1] as i64 - (k - r) as i64).max(0);
                    adjacent_ok(f, 0, k) && f[0] as i64 <= j as i64 - cut && parity_even_counts(f, true)
                });
                assert_eq!(library(SetSpec::Zo { j, r, k }), z, "Zo j={j} r={r} k={k}");
            }
        }
    }
}
