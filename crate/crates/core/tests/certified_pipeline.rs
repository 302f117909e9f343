//! Solver output replays through the certificate checker for a spread of posets.

use posetrace::certificate::{verify_certificate, Certificate, Claim, Evidence};
use posetrace::embed::trace_violation_naive;
use posetrace::poset::{butterfly, chain, diamond, k_rs, vee, wedge};
use posetrace::search::{solve_la, solve_tr, solve_tr_l};
use posetrace::{ExtremalResult, Poset, PosetJson, SearchBudget, Status};

fn certify(r: &ExtremalResult, p: &Poset) -> Certificate {
    Certificate {
        claim: Claim::Extremal {
            kind: r.kind,
            n: r.n,
            l: r.l,
            poset: PosetJson::relation_of(p),
            value: r.value,
            exact: r.status == Status::Exact,
        },
        evidence: Evidence::Family { family: r.witness.clone().expect("exact results carry a witness") },
    }
}

#[test]
fn solver_witnesses_replay() {
    let budget = SearchBudget::default().with_workers(2);
    let posets = [butterfly(), diamond(), k_rs(2, 2).unwrap(), vee(2).unwrap(), wedge(2).unwrap(), chain(3).unwrap()];
    for p in &posets {
        for n in 3..=5 {
            let tr = solve_tr(n, p, &budget).unwrap();
            assert_eq!(tr.status, Status::Exact);
            let w = tr.witness.as_ref().unwrap();
            assert!(trace_violation_naive(w, p).is_none(), "{} n={n}", p.label());
            let report = verify_certificate(&certify(&tr, p));
            assert!(report.passed, "{report:?}");
            assert_eq!(report.solver_trusted.len(), 1);

            let la = solve_la(n, p, &budget).unwrap();
            assert!(verify_certificate(&certify(&la, p)).passed);
            assert!(la.value >= tr.value, "{} n={n}", p.label());

            let trl = solve_tr_l(n, n, p, &budget).unwrap();
            assert_eq!(trl.value, la.value, "the n-trace of a family is the family");
        }
    }
}

#[test]
fn inflated_claims_fail() {
    let p = butterfly();
    let r = solve_tr(4, &p, &SearchBudget::default()).unwrap();
    let mut cert = certify(&r, &p);
    if let Claim::Extremal { value, .. } = &mut cert.claim {
        *value += 1;
    }
    assert!(!verify_certificate(&cert).passed);
}
