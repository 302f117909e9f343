use super::*;
use crate::poset::{butterfly, chain, diamond, vee, wedge};
use crate::sets::{level_family, levels_at_most, GroundSet};
use proptest::prelude::*;

fn fam(n: usize, sets: &[&[usize]]) -> Family {
    Family::from_sets(n, sets).unwrap()
}

/// Every injective map, checked by definition.
fn brute_contains(family: &Family, poset: &Poset) -> bool {
    fn go(f: &[u32], p: &Poset, map: &mut Vec<u32>) -> bool {
        let e = map.len();
        if e == p.len() {
            return true;
        }
        for &s in f {
            if map.contains(&s) {
                continue;
            }
            let ok = (0..e).all(|d| {
                let t = map[d];
                (!p.lt(d, e) || (t & s == t && t != s)) && (!p.lt(e, d) || (t & s == s && t != s))
            });
            if ok {
                map.push(s);
                if go(f, p, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(family.masks(), poset, &mut Vec::new())
}

#[test]
fn copy_examples() {
    assert!(find_copy(&fam(3, &[&[], &[1], &[1, 2], &[1, 3]]), &diamond()).is_none());
    let w = find_copy(&Family::cube(3).unwrap(), &butterfly()).unwrap();
    let got: Vec<Vec<usize>> = w.map.iter().map(|s| s.elements()).collect();
    assert_eq!(got, vec![vec![], vec![1], vec![1, 2], vec![1, 3]]);
    assert!(find_copy(&level_family(5, 2).unwrap(), &chain(2).unwrap()).is_none());
}

#[test]
fn freeness_examples() {
    for k in 0..=4 {
        assert!(is_p_free(&level_family(4, k).unwrap(), &chain(2).unwrap()));
    }
    let claim = fam(4, &[&[2], &[3], &[1, 4], &[2, 3], &[1, 2, 4], &[1, 3, 4]]);
    assert!(is_p_free(&claim, &butterfly()));
    let two = level_family(4, 1).unwrap().union(&level_family(4, 2).unwrap()).unwrap();
    assert!(!is_p_free(&two, &vee(2).unwrap()));
    assert!(is_p_free(&two, &butterfly()));
}

#[test]
fn witnesses_replay() {
    let f = Family::cube(4).unwrap();
    for p in [butterfly(), diamond(), vee(3).unwrap()] {
        find_copy(&f, &p).unwrap().validate(&f, &p).unwrap();
    }
    let bad = EmbeddingWitness { map: vec![SubsetMask::new(3, 1).unwrap(); 4] };
    assert!(bad.validate(&Family::cube(3).unwrap(), &butterfly()).is_err());
}

#[test]
fn trace_examples() {
    for n in 2..=6 {
        let f = levels_at_most(n, 1).unwrap();
        for l in 1..=n {
            assert!(is_l_trace_p_free(&f, &wedge(2).unwrap(), l));
        }
    }
    let v = l_trace_violation(&Family::cube(3).unwrap(), &butterfly(), 3).unwrap();
    v.validate(&Family::cube(3).unwrap(), &butterfly()).unwrap();
    let lower6 = fam(6, &[&[], &[1], &[2], &[3], &[4], &[5], &[6], &[1, 2], &[3, 4], &[5, 6]]);
    assert!(is_trace_p_free(&lower6, &butterfly()));
    assert!(is_trace_p_free(&Family::cube(2).unwrap(), &butterfly()));
    for n in 3..=6 {
        for p in [diamond(), wedge(2).unwrap(), wedge(3).unwrap()] {
            let x = crate::params::param_x(&p, n).unwrap().unwrap();
            assert!(is_trace_p_free(&levels_at_most(n, x).unwrap(), &p));
        }
    }
}

#[test]
fn smallest_violating_trace_is_reported() {
    // Only traces keeping both 1 and 2 can see the 2-chain {1} < {1,2}.
    let f = fam(4, &[&[1, 3], &[1, 2, 4]]);
    let v = l_trace_violation(&f, &chain(2).unwrap(), 2).unwrap();
    assert_eq!(v.l_set.elements(), vec![1, 2]);
    v.validate(&f, &chain(2).unwrap()).unwrap();
    let json = WitnessJson::from_witness(&v.witness, Some(v.l_set));
    let (w, l) = json.to_witness(4).unwrap();
    assert_eq!(w, v.witness);
    assert_eq!(l, Some(v.l_set));
}

#[test]
fn mod_class_trace_example() {
    // Middle-level class of [5] with sum ≡ 1 (mod 5): {1,5}, {2,4}.
    let f = fam(5, &[&[1, 5], &[2, 4]]);
    let brute = k_subsets(5, 4).into_iter().all(|x| !brute_contains(&f.trace_bits(x), &chain(2).unwrap()));
    assert_eq!(is_l_trace_p_free(&f, &chain(2).unwrap(), 4), brute);
}

#[test]
fn shattering() {
    let cube = Family::cube(3).unwrap();
    assert_eq!(find_shattered_set(&cube, 3), Some(GroundSet::new(3).unwrap().full()));
    assert_eq!(vc_dim(&cube), Some(3));
    for n in 2..=6 {
        assert_eq!(vc_dim(&levels_at_most(n, 1).unwrap()), Some(1));
        for k in 1..=n {
            assert!(find_shattered_set(&levels_at_most(n, k - 1).unwrap(), k).is_none());
        }
    }
    assert_eq!(vc_dim(&Family::empty(3).unwrap()), None);
    assert_eq!(vc_dim(&fam(3, &[&[2]])), Some(0));
    let lower6 = fam(6, &[&[], &[1], &[2], &[3], &[4], &[5], &[6], &[1, 2], &[3, 4], &[5, 6]]);
    let d = vc_dim(&lower6).unwrap();
    assert_eq!(d, 2);
    assert!(d <= crate::params::param_y(&butterfly(), 4).unwrap() + 1);
}

fn arb_family(n: usize) -> impl Strategy<Value = Family> {
    proptest::collection::vec(0u32..(1 << n), 0..14).prop_map(move |v| Family::new(n, v).unwrap())
}

proptest! {
    #[test]
    fn matcher_agrees_with_brute_force(f in arb_family(4)) {
        for p in [butterfly(), diamond(), vee(2).unwrap(), chain(3).unwrap()] {
            let found = find_copy(&f, &p);
            prop_assert_eq!(found.is_some(), brute_contains(&f, &p));
            if let Some(w) = found {
                prop_assert!(w.validate(&f, &p).is_ok());
            }
        }
    }

    #[test]
    fn trace_freeness_is_self_dual(f in arb_family(5)) {
        for p in [vee(2).unwrap(), diamond(), butterfly()] {
            prop_assert_eq!(is_trace_p_free(&f, &p), is_trace_p_free(&f.complement(), &p.dual()));
        }
    }

    #[test]
    fn reduced_trace_check_matches_naive(f in arb_family(5)) {
        for p in [butterfly(), diamond(), wedge(2).unwrap()] {
            prop_assert_eq!(trace_violation(&f, &p).is_none(), trace_violation_naive(&f, &p).is_none());
        }
    }

    #[test]
    fn sauer_bound_forces_shattering(f in arb_family(5), k in 1usize..=4) {
        if f.len() as u64 > crate::sets::binomial_prefix_sum(5, k as i64 - 1) {
            prop_assert!(find_shattered_set(&f, k).is_some());
        }
    }
}
