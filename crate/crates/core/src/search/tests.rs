use super::*;
use crate::embed::{is_p_free, is_trace_p_free};
use crate::params::{param_x, param_y};
use crate::poset::{butterfly, chain, diamond, vee, wedge};
use crate::sets::{binomial, binomial_prefix_sum, k_subsets};
use std::ops::ControlFlow;

fn exact() -> SearchBudget {
    SearchBudget::default()
}

/// Largest family over `[n]` (n <= 3) passing `pred`, over all 2^(2^n) families.
fn brute_max(n: usize, pred: impl Fn(&Family) -> bool) -> usize {
    let total = 1u32 << n;
    (0u64..1 << total)
        .filter_map(|bits| {
            let f = Family::new(n, (0..total).filter(|&m| bits >> m & 1 == 1)).unwrap();
            pred(&f).then_some(f.len())
        })
        .max()
        .unwrap()
}

#[test]
fn sperner_and_erdos_values() {
    for n in 1..=5 {
        for k in 1..=3 {
            let r = solve_la(n, &chain(k + 1).unwrap(), &exact()).unwrap();
            let mut b: Vec<u64> = (0..=n).map(|i| binomial(n, i)).collect();
            b.sort_unstable_by(|x, y| y.cmp(x));
            assert_eq!(r.value as u64, b.iter().take(k).sum::<u64>(), "n={n} k={k}");
            assert_eq!(r.status, Status::Exact);
            r.check_witness(&chain(k + 1).unwrap()).unwrap();
        }
    }
}

#[test]
fn small_cases_match_brute_force() {
    for p in [butterfly(), diamond(), vee(2).unwrap(), chain(3).unwrap()] {
        for n in 2..=3 {
            let la = solve_la(n, &p, &exact()).unwrap();
            assert_eq!(la.value, brute_max(n, |f| is_p_free(f, &p)), "La({n}, {})", p.label());
            let tr = solve_tr(n, &p, &exact()).unwrap();
            assert_eq!(tr.value, brute_max(n, |f| is_trace_p_free(f, &p)), "Tr({n}, {})", p.label());
            let ld = solve_la_closed(n, &p, Direction::Down, &exact()).unwrap();
            let want = brute_max(n, |f| f.is_downward_closed() && is_p_free(f, &p));
            assert_eq!(ld.value, want, "La_D({n}, {})", p.label());
        }
    }
    assert!(solve_la(3, &butterfly(), &exact()).unwrap().value >= 5);
}

#[test]
fn butterfly_trace_values() {
    for (n, want) in [(3, 6), (4, 7), (5, 8)] {
        let r = solve_tr(n, &butterfly(), &exact()).unwrap();
        assert_eq!((r.value, r.status), (want, Status::Exact));
        r.check_witness(&butterfly()).unwrap();
    }
}

#[test]
fn closed_values() {
    let b = butterfly();
    for d in [Direction::Down, Direction::Up] {
        let r = solve_la_closed(3, &b, d, &exact()).unwrap();
        assert_eq!(r.value, 5);
        r.check_witness(&b).unwrap();
    }
    assert!(solve_la_closed(5, &diamond(), Direction::Down, &exact()).unwrap().value >= 6);
    assert!(solve_la_closed(8, &b, Direction::Down, &exact()).is_err());
}

#[test]
fn symmetry_modes_and_workers_agree() {
    let b = butterfly();
    let base = solve_tr(4, &b, &exact()).unwrap();
    for mode in [SymmetryMode::Heuristic, SymmetryMode::Off] {
        let r = solve_tr(4, &b, &exact().with_symmetry(mode)).unwrap();
        assert_eq!(r.value, base.value);
        r.check_witness(&b).unwrap();
    }
    let par = solve_tr(4, &b, &exact().with_workers(3)).unwrap();
    assert_eq!(par.value, base.value);
    assert_eq!(par.witness, base.witness);
    let la = solve_la(4, &diamond(), &exact()).unwrap();
    let la_off = solve_la(4, &diamond(), &exact().with_symmetry(SymmetryMode::Off)).unwrap();
    assert_eq!(la.value, la_off.value);
}

#[test]
fn budget_exhaustion_is_reported() {
    let r = solve_la(6, &butterfly(), &exact().with_node_limit(1)).unwrap();
    assert_ne!(r.status, Status::Exact);
    r.check_witness(&butterfly()).unwrap();
    assert!(solve_tr(8, &butterfly(), &exact()).is_err());
    assert!(solve_tr_l(4, 5, &butterfly(), &exact()).is_err());
}

#[test]
fn restarts_confirm_optimality() {
    let b = butterfly();
    for n in 3..=5 {
        let r = solve_tr(n, &b, &exact()).unwrap();
        let c = Constraint::tr(n, &b);
        for seed in [1, 7, 42] {
            assert!(refute(n, &b, &c, r.value + 1, seed).unwrap().is_none());
        }
        let again = refute(n, &b, &c, r.value, 3).unwrap().unwrap();
        assert!(is_trace_p_free(&again, &b));
    }
}

#[test]
fn sandwich_and_closed_bounds() {
    for p in [butterfly(), diamond(), vee(2).unwrap(), wedge(2).unwrap()] {
        let y = param_y(&p, 6).unwrap();
        for n in 3..=5 {
            let x = param_x(&p, n).unwrap().unwrap();
            let tr = solve_tr(n, &p, &exact()).unwrap().value as u64;
            let ld = solve_la_closed(n, &p, Direction::Down, &exact()).unwrap().value as u64;
            let lu = solve_la_closed(n, &p, Direction::Up, &exact()).unwrap().value as u64;
            assert!(binomial_prefix_sum(n, x as i64) <= ld, "{} n={n}", p.label());
            assert!(ld <= tr && lu <= tr, "{} n={n}", p.label());
            assert!(tr <= binomial_prefix_sum(n, y as i64), "{} n={n}", p.label());
        }
    }
}

#[test]
fn unique_max_identity() {
    for p in [diamond(), wedge(2).unwrap(), wedge(3).unwrap()] {
        for n in 3..=5 {
            let x = param_x(&p, n).unwrap().unwrap();
            let tr = solve_tr(n, &p, &exact()).unwrap();
            assert_eq!(tr.value as u64, binomial_prefix_sum(n, x as i64), "{} n={n}", p.label());
        }
    }
}

#[test]
fn trace_values_monotone_in_l() {
    let b = butterfly();
    for n in 4..=5 {
        let vals: Vec<usize> = (b.edge_count()..=n).map(|l| solve_tr_l(n, l, &b, &exact()).unwrap().value).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{vals:?}");
    }
    assert_eq!(solve_tr_l(5, 5, &b, &exact()).unwrap().value, solve_la(5, &b, &exact()).unwrap().value);
}

#[test]
fn downset_counts() {
    assert_eq!(count_downsets(3, DownsetFilter::default()).unwrap(), 20);
    assert_eq!(count_downsets(4, DownsetFilter::default()).unwrap(), 168);
    assert_eq!(count_downsets(5, DownsetFilter::default()).unwrap(), 7581);
    for n in 1..=5 {
        assert_eq!(count_downsets(n, DownsetFilter::default()).unwrap(), count_downsets_by_splitting(n).unwrap());
    }
    let mut brute = 0;
    for bits in 0u32..1 << 8 {
        let f = Family::new(3, (0..8).filter(|&m| bits >> m & 1 == 1)).unwrap();
        brute += u32::from(f.is_downward_closed());
    }
    assert_eq!(brute, 20);
    assert!(count_downsets(7, DownsetFilter::default()).is_err());
    assert!(count_downsets(7, DownsetFilter::size(12)).unwrap() > 0);
}

#[test]
fn downsets_are_listed_once() {
    for n in 1..=4 {
        let mut a: Vec<Vec<u32>> = enumerate_downsets(n, DownsetFilter::default(), false)
            .unwrap()
            .into_iter()
            .map(|f| f.into_masks())
            .collect();
        let mut b: Vec<Vec<u32>> = downsets_by_splitting(n).unwrap().into_iter().map(|f| f.into_masks()).collect();
        a.sort();
        b.sort();
        let len = a.len();
        a.dedup();
        assert_eq!(a.len(), len);
        assert_eq!(a, b);
    }
}

#[test]
fn symmetric_enumeration_expands_to_full_count() {
    for n in 1..=5 {
        let reps = enumerate_downsets(n, DownsetFilter::default(), true).unwrap();
        let expanded: u64 = reps.iter().map(orbit_size).sum();
        assert_eq!(expanded, count_downsets(n, DownsetFilter::default()).unwrap());
    }
}

#[test]
fn size_filter() {
    let mut seen = 0;
    for_each_downset(5, DownsetFilter::size(9), false, |d| {
        assert_eq!(d.len(), 9);
        assert!(d.is_downward_closed());
        let best = k_subsets(5, 3).into_iter().map(|x| d.trace_bits(x).len()).max().unwrap();
        assert!(best >= 6);
        seen += 1;
        ControlFlow::Continue(())
    })
    .unwrap();
    assert!(seen > 0);
}

#[test]
fn arrow_relations() {
    for (n, m, k, l) in [(5, 9, 3, 6), (5, 9, 4, 7), (6, 11, 5, 9)] {
        let r = arrow(n, m, k, l, &exact()).unwrap();
        assert!(r.holds && r.status == Status::Exact, "({n},{m})->({k},{l})");
    }
    // C([4], <= 1) has five members and shatters no pair.
    let r = arrow(4, 5, 2, 4, &exact()).unwrap();
    assert!(!r.holds);
    let c = r.counterexample.unwrap();
    assert_eq!(c.len(), 5);
    assert!(c.is_downward_closed());
    assert!(k_subsets(4, 2).into_iter().all(|x| c.trace_bits(x).len() < 4));
}

#[test]
fn degenerate_arrows() {
    assert!(arrow(3, 9, 2, 4, &exact()).unwrap().holds);
    assert!(arrow(3, 4, 2, 0, &exact()).unwrap().holds);
    assert!(!arrow(3, 4, 4, 1, &exact()).unwrap().holds);
    let r = arrow(3, 6, 2, 5, &exact()).unwrap();
    assert!(!r.holds && r.degenerate.is_some() && r.counterexample.is_some());
    assert!(!arrow(3, 2, 2, 3, &exact()).unwrap().holds);
}

#[test]
fn sauer_suite() {
    for (n, k) in [(4, 2), (5, 2), (5, 5), (6, 3)] {
        assert!(sauer_arrow_suite(n, k, &exact()).unwrap().holds, "n={n} k={k}");
    }
    // One member fewer is not enough.
    let m = binomial_prefix_sum(5, 1) as usize;
    assert!(!arrow(5, m, 2, 4, &exact()).unwrap().holds);
}

#[test]
fn arrow_bound_from_smaller_values() {
    // Tr(3, B) = 6 and Tr(4, B) = 7 give an upper bound for Tr(5, B).
    let (bound, m, k) = arrow_upper_bound(5, &[(3, 6), (4, 7)], &exact()).unwrap().unwrap();
    assert_eq!(m, bound + 1);
    assert!(k == 3 || k == 4);
    assert!(bound >= 8);
    assert!(arrow(5, m, k, if k == 3 { 7 } else { 8 }, &exact()).unwrap().holds);
}

#[test]
fn kind_and_mode_parsing() {
    for k in [Kind::La, Kind::LaD, Kind::LaU, Kind::Tr, Kind::TrL, Kind::Arrow] {
        assert_eq!(k.as_str().parse::<Kind>().unwrap(), k);
    }
    assert_eq!("off".parse::<SymmetryMode>().unwrap(), SymmetryMode::Off);
    assert!("sometimes".parse::<SymmetryMode>().is_err());
}
