use super::*;
use proptest::prelude::*;

fn fam(n: usize, sets: &[&[usize]]) -> Family {
    Family::from_sets(n, sets).unwrap()
}

fn mask(n: usize, e: &[usize]) -> SubsetMask {
    SubsetMask::from_elements(n, e).unwrap()
}

#[test]
fn ground_set_bounds() {
    assert!(GroundSet::new(0).is_err());
    assert!(GroundSet::new(31).is_err());
    assert_eq!(GroundSet::new(30).unwrap().full().bits(), (1 << 30) - 1);
    assert!(SubsetMask::new(3, 0b1000).is_err());
    assert!(SubsetMask::from_elements(3, &[4]).is_err());
}

#[test]
fn set_traces() {
    assert_eq!(mask(3, &[1, 2]).trace(mask(3, &[1, 3])).unwrap(), mask(3, &[1]));
    assert_eq!(mask(4, &[2]).trace(GroundSet::new(4).unwrap().full()).unwrap(), mask(4, &[2]));
    let x = mask(5, &[4]).complement();
    assert_eq!(mask(5, &[1, 2, 4]).trace(x).unwrap(), mask(5, &[1, 2]));
    assert!(mask(3, &[1]).trace(mask(4, &[1])).is_err());
}

#[test]
fn family_traces() {
    let f = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
    assert_eq!(f.trace(mask(3, &[1, 2])).unwrap(), fam(3, &[&[1, 2], &[1], &[2]]));
    let t = Family::cube(3).unwrap().trace(mask(3, &[1, 2])).unwrap();
    assert_eq!(t.len(), 4);
    assert!(f.trace(mask(4, &[1])).is_err());
    // Middle two levels over [3] plus element 4 in some members: trace on [3] has 6 sets.
    let g = fam(4, &[&[1], &[2, 4], &[3], &[1, 2], &[1, 3, 4], &[2, 3]]);
    assert_eq!(g.trace(mask(4, &[1, 2, 3])).unwrap().len(), 6);
}

#[test]
fn compression_examples() {
    assert_eq!(fam(2, &[&[1], &[2]]).down_compress(1).unwrap(), fam(2, &[&[], &[2]]));
    let f = fam(2, &[&[1], &[]]);
    assert_eq!(f.down_compress(1).unwrap(), f);
    let g = fam(2, &[&[1, 2], &[2], &[1]]);
    assert_eq!(g.down_compress(2).unwrap(), fam(2, &[&[1, 2], &[], &[1]]));
    let fix = g.compress_to_downset();
    assert_eq!(fix.len(), 3);
    assert!(fix.is_downward_closed());
    assert!(fam(2, &[&[1]]).down_compress(3).is_err());
}

#[test]
fn closedness() {
    assert!(Family::cube(3).unwrap().is_downward_closed());
    assert!(!fam(3, &[&[1, 2]]).is_downward_closed());
    let b = fam(5, &[&[], &[1], &[2], &[3], &[4], &[5], &[1, 2], &[3, 4]]);
    assert!(b.is_downward_closed());
    assert!(b.complement().is_upward_closed());
    assert!(Family::empty(3).unwrap().is_downward_closed());
}

#[test]
fn closures_and_shadows() {
    assert_eq!(fam(2, &[&[1, 2]]).closure_down(), Family::cube(2).unwrap());
    assert_eq!(fam(2, &[&[1]]).closure_up(), fam(2, &[&[1], &[1, 2]]));
    assert_eq!(level_family(4, 2).unwrap().closure_down(), levels_at_most(4, 2).unwrap());
    assert_eq!(levels_at_most(4, 2).unwrap().len(), 11);
    assert_eq!(fam(3, &[&[1, 2]]).shadow(), fam(3, &[&[1], &[2]]));
    assert!(fam(3, &[&[]]).shadow().is_empty());
    assert_eq!(level_family(4, 2).unwrap().shadow(), level_family(4, 1).unwrap());
}

#[test]
fn complements() {
    for n in 1..=6 {
        assert_eq!(level_family(n, 1).unwrap().complement(), level_family(n, n - 1).unwrap());
    }
    let b = fam(4, &[&[], &[1], &[2], &[3], &[4], &[1, 2], &[3, 4]]);
    let c = b.complement();
    assert_eq!(c.len(), 7);
    assert!(c.is_upward_closed());
}

#[test]
fn level_slices() {
    assert_eq!(level_family(4, 2).unwrap().len(), 6);
    assert_eq!(levels_at_most(5, 1).unwrap().len(), 6);
    assert_eq!(levels_at_least(5, 4).unwrap().len(), 6);
    assert!(level_family(3, 4).is_err());
    assert_eq!(k_subsets(4, 2), vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
}

#[test]
fn binomials() {
    assert_eq!(binomial(10, 5), 252);
    assert_eq!(binomial(30, 15), 155_117_520);
    assert_eq!(binomial(3, 4), 0);
    assert_eq!(binomial_prefix_sum(5, 2), 16);
    assert_eq!(binomial_prefix_sum(5, -1), 0);
}

#[test]
fn canonical_examples() {
    assert_eq!(canonical_form(&fam(3, &[&[2]])), fam(3, &[&[1]]));
    for k in 0..=4 {
        let l = level_family(4, k).unwrap();
        assert_eq!(canonical_form(&l), l);
    }
    let singles = level_family(3, 1).unwrap();
    let mut forms = std::collections::BTreeSet::new();
    for a in singles.masks() {
        for b in singles.masks() {
            if a < b {
                forms.insert(canonical_form(&Family::new(3, [*a, *b]).unwrap()).into_masks());
            }
        }
    }
    assert_eq!(forms.len(), 1);
    let big = fam(9, &[&[9], &[8, 9]]);
    let report = canonical_form_report(&big);
    assert!(report.heuristic);
    assert_eq!(report.family.len(), 2);
}

#[test]
fn permutation_cache() {
    assert_eq!(all_permutations(4).len(), 24);
    assert_eq!(all_permutations(3)[0], vec![0, 1, 2]);
    assert_eq!(apply_permutation(0b011, &[2, 0, 1]), 0b101);
}

#[test]
fn json_forms_round_trip() {
    let f = fam(5, &[&[], &[1, 3], &[2, 4, 5]]);
    let a = f.to_json();
    assert_eq!(Family::from_json_str(&a.to_string()).unwrap(), f);
    let m = serde_json::to_string(&FamilyJson::masks_form(&f)).unwrap();
    assert!(m.contains("\"1a\""));
    assert_eq!(Family::from_json_str(&m).unwrap(), f);
    let prefixed = r#"{"n": 5, "masks": ["0x5", "0"]}"#;
    assert_eq!(Family::from_json_str(prefixed).unwrap(), fam(5, &[&[], &[1, 3]]));
    assert!(Family::from_json_str(r#"{"n": 2, "sets": [[3]]}"#).is_err());
}

fn arb_family(max_n: usize) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0u32..(1 << n), 0..24).prop_map(move |v| Family::new(n, v).unwrap())
    })
}

proptest! {
    #[test]
    fn trace_composes(f in arb_family(6), x in any::<u32>(), y in any::<u32>()) {
        let full = full_mask(f.n());
        let x = x & full;
        let y = y & x;
        prop_assert_eq!(f.trace_bits(x).trace_bits(y), f.trace_bits(y));
        prop_assert!(f.trace_bits(x).len() <= f.len());
    }

    #[test]
    fn compression_keeps_size(f in arb_family(6), i in 1usize..=6) {
        let i = 1 + (i - 1) % f.n();
        prop_assert_eq!(f.down_compress(i).unwrap().len(), f.len());
        let fix = f.compress_to_downset();
        prop_assert_eq!(fix.len(), f.len());
        prop_assert!(fix.is_downward_closed());
    }

    #[test]
    fn compression_keeps_shattering_away(f in arb_family(5), i in 1usize..=5, k in 1usize..=3) {
        let i = 1 + (i - 1) % f.n();
        if crate::embed::find_shattered_set(&f, k).is_none() {
            let g = f.down_compress(i).unwrap();
            prop_assert!(crate::embed::find_shattered_set(&g, k).is_none());
        }
    }

    #[test]
    fn downset_traces_are_restrictions(f in arb_family(6), x in any::<u32>()) {
        let d = f.closure_down();
        let x = x & full_mask(f.n());
        let inside: Vec<u32> = d.masks().iter().copied().filter(|&s| s & !x == 0).collect();
        prop_assert_eq!(d.trace_bits(x).into_masks(), inside);
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(f in arb_family(6), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<u8> = (0..f.n() as u8).collect();
        perm.shuffle(&mut rng);
        let c = canonical_form(&f);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert_eq!(canonical_form(&f.permute(&perm)), c);
    }

    #[test]
    fn closures_are_minimal(f in arb_family(5)) {
        let d = f.closure_down();
        prop_assert!(d.is_downward_closed() && f.is_subfamily_of(&d));
        for &s in d.masks() {
            prop_assert!(f.masks().iter().any(|&m| s & !m == 0));
        }
        let u = f.closure_up();
        prop_assert!(u.is_upward_closed() && f.is_subfamily_of(&u));
    }
}
