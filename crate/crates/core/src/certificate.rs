//! Certificates: a claim plus evidence that replays with the checkers in
//! [`crate::embed`] and [`crate::chains`] alone.

use serde::{Deserialize, Serialize};

use crate::chains::{chain_graph, replay_violation, symmetric_chain_decomposition, FourCycle};
use crate::embed::{is_l_trace_p_free, is_p_free, is_trace_p_free, WitnessJson};
use crate::poset::PosetJson;
use crate::search::Kind;
use crate::sets::{k_subsets, Family};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "claim", rename_all = "snake_case")]
pub enum Claim {
    /// `kind(n, P) = value` (or `>= value` when `exact` is false).
    Extremal { kind: Kind, n: usize, l: Option<usize>, poset: PosetJson, value: usize, exact: bool },
    /// `(n, m) -> (k, l)` holds or fails.
    Arrow { n: usize, m: usize, k: usize, l: usize, holds: bool },
    /// The family contains `P`, on the trace `L` if given.
    Contains { poset: PosetJson },
    /// The family is not `(n-2)`-trace diamond-free, shown by a chain graph cycle.
    ChainCycle { chain: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "evidence", rename_all = "snake_case")]
pub enum Evidence {
    None,
    Family { family: Family },
    Embedding { family: Family, witness: WitnessJson },
    Cycle { family: Family, cycle: FourCycle },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: Claim,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// Checks that replayed, in order.
    pub checked: Vec<String>,
    /// The first check that failed.
    pub failure: Option<String>,
    /// Parts of the claim that rest on an exhausted search and cannot be
    /// replayed from the evidence.
    pub solver_trusted: Vec<String>,
}

impl VerificationReport {
    fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        let what = what.into();
        if ok {
            self.checked.push(what);
        } else if self.failure.is_none() {
            self.failure = Some(what);
        }
        ok
    }
}

/// Replays a certificate. Never runs a search.
pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    let mut r = VerificationReport::default();
    match (&cert.claim, &cert.evidence) {
        (Claim::Extremal { kind, n, l, poset, value, exact }, Evidence::Family { family }) => {
            let p = match poset.build() {
                Ok(p) => p,
                Err(e) => {
                    r.check(false, format!("poset: {e}"));
                    return finish(r);
                }
            };
            let ok = r.check(family.n() == *n, format!("ground set is [{n}]"))
                && r.check(family.len() == *value, format!("family has {value} members (found {})", family.len()));
            if ok {
                let (pred, holds) = match kind {
                    Kind::La => ("P-free".to_string(), is_p_free(family, &p)),
                    Kind::LaD => {
                        ("downward closed and P-free".into(), family.is_downward_closed() && is_p_free(family, &p))
                    }
                    Kind::LaU => {
                        ("upward closed and P-free".into(), family.is_upward_closed() && is_p_free(family, &p))
                    }
                    Kind::Tr => ("trace P-free".into(), is_trace_p_free(family, &p)),
                    Kind::TrL => {
                        let l = l.unwrap_or(*n);
                        (format!("{l}-trace P-free"), is_l_trace_p_free(family, &p, l))
                    }
                    Kind::Arrow => ("not an extremal quantity".into(), false),
                };
                r.check(holds, format!("witness is {pred} for {}", p.label()));
            }
            if *exact {
                r.solver_trusted.push(format!(
                    "no family of size {} satisfies the {} predicate on [{n}]",
                    value + 1,
                    kind.as_str()
                ));
            }
        }
        (Claim::Arrow { n, m, k, l, holds: false }, Evidence::Family { family }) => {
            let ok = r.check(family.n() == *n, format!("ground set is [{n}]"))
                && r.check(family.len() == *m, format!("counterexample has {m} members"));
            if ok && *k <= *n {
                let worst = k_subsets(*n, *k).into_iter().map(|x| family.trace_bits(x).len()).max().unwrap_or(0);
                r.check(worst < *l, format!("every {k}-set trace has fewer than {l} members (largest {worst})"));
            }
        }
        (Claim::Arrow { n, m, k, l, holds: true }, Evidence::None) => {
            r.checked.push("positive arrow relation carries no replayable evidence".into());
            r.solver_trusted.push(format!("every family of {m} subsets of [{n}] has a {k}-set trace with {l} members"));
        }
        (Claim::Contains { poset }, Evidence::Embedding { family, witness }) => {
            let replay = poset.build().map_err(|e| e.to_string()).and_then(|p| {
                let (w, l_set) = witness.to_witness(family.n()).map_err(|e| e.to_string())?;
                match l_set {
                    Some(x) => w.validate(&family.trace(x).map_err(|e| e.to_string())?, &p),
                    None => w.validate(family, &p),
                }
            });
            let msg = match &replay {
                Ok(()) => "embedding replays".to_string(),
                Err(e) => format!("embedding fails: {e}"),
            };
            r.check(replay.is_ok(), msg);
        }
        (Claim::ChainCycle { chain }, Evidence::Cycle { family, cycle }) => {
            let replay = symmetric_chain_decomposition(family.n())
                .and_then(|scd| chain_graph(family, &scd, *chain))
                .map_err(|e| e.to_string())
                .and_then(|g| {
                    for i in 0..4 {
                        let (a, b) = (cycle.vertices[i], cycle.vertices[(i + 1) % 4]);
                        if g.graph.label(a, b) != Some(cycle.labels[i]) {
                            return Err(format!("edge ({a}, {b}) missing or relabeled"));
                        }
                    }
                    replay_violation(family, &g, cycle)
                });
            let msg = match &replay {
                Ok(d) => format!("cycle replays to a diamond on the trace {}", d.trace_set),
                Err(e) => format!("cycle replay fails: {e}"),
            };
            r.check(replay.is_ok(), msg);
        }
        _ => {
            r.check(false, "evidence does not match the claim");
        }
    }
    finish(r)
}

fn finish(mut r: VerificationReport) -> VerificationReport {
    r.passed = r.failure.is_none();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::check_cycle_label_condition;
    use crate::constructions::butterfly_lower;
    use crate::embed::find_copy;
    use crate::poset::NamedPoset;

    fn b() -> PosetJson {
        PosetJson::Named(NamedPoset::Butterfly)
    }

    fn tr_claim(n: usize, value: usize) -> Claim {
        Claim::Extremal { kind: Kind::Tr, n, l: None, poset: b(), value, exact: true }
    }

    #[test]
    fn extremal_witnesses_replay() {
        let cert =
            Certificate { claim: tr_claim(5, 8), evidence: Evidence::Family { family: butterfly_lower(5).unwrap() } };
        let r = verify_certificate(&cert);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.solver_trusted.len(), 1);
        let cert =
            Certificate { claim: tr_claim(7, 11), evidence: Evidence::Family { family: butterfly_lower(7).unwrap() } };
        assert!(verify_certificate(&cert).passed);
    }

    #[test]
    fn corrupted_witness_fails() {
        let broken = butterfly_lower(5).unwrap().without(0);
        let cert = Certificate { claim: tr_claim(5, 8), evidence: Evidence::Family { family: broken } };
        let r = verify_certificate(&cert);
        assert!(!r.passed);
        assert!(r.failure.unwrap().contains("8 members"));
        let wrong = Family::cube(3).unwrap();
        let cert = Certificate { claim: tr_claim(3, 8), evidence: Evidence::Family { family: wrong } };
        assert!(!verify_certificate(&cert).passed);
    }

    #[test]
    fn arrow_and_embedding_claims() {
        let c = Family::from_sets(4, &[vec![], vec![1], vec![2], vec![3], vec![4]]).unwrap();
        let cert = Certificate {
            claim: Claim::Arrow { n: 4, m: 5, k: 2, l: 4, holds: false },
            evidence: Evidence::Family { family: c.clone() },
        };
        assert!(verify_certificate(&cert).passed);
        let cert = Certificate {
            claim: Claim::Arrow { n: 4, m: 5, k: 2, l: 3, holds: false },
            evidence: Evidence::Family { family: c },
        };
        assert!(!verify_certificate(&cert).passed);
        let cert =
            Certificate { claim: Claim::Arrow { n: 5, m: 9, k: 3, l: 6, holds: true }, evidence: Evidence::None };
        let r = verify_certificate(&cert);
        assert!(r.passed && r.solver_trusted.len() == 1);

        let cube = Family::cube(3).unwrap();
        let w = find_copy(&cube, &crate::poset::butterfly()).unwrap();
        let cert = Certificate {
            claim: Claim::Contains { poset: b() },
            evidence: Evidence::Embedding { family: cube, witness: WitnessJson::from_witness(&w, None) },
        };
        assert!(verify_certificate(&cert).passed);
    }

    #[test]
    fn cycle_claims() {
        let f = Family::from_sets(6, &[vec![2, 3], vec![3, 4], vec![1, 4, 5], vec![2, 5]]).unwrap();
        let scd = symmetric_chain_decomposition(6).unwrap();
        let chain = scd.chains.iter().position(|c| c[0].is_empty()).unwrap();
        let g = chain_graph(&f, &scd, chain).unwrap();
        let cycle = check_cycle_label_condition(&g.graph).unwrap_err();
        let cert = Certificate {
            claim: Claim::ChainCycle { chain },
            evidence: Evidence::Cycle { family: f.clone(), cycle: cycle.clone() },
        };
        assert!(verify_certificate(&cert).passed);
        let mut bent = cycle;
        bent.labels[1] += 1;
        let cert =
            Certificate { claim: Claim::ChainCycle { chain }, evidence: Evidence::Cycle { family: f, cycle: bent } };
        assert!(!verify_certificate(&cert).passed);
    }

    #[test]
    fn mismatched_evidence_fails_and_round_trips() {
        let cert = Certificate { claim: tr_claim(5, 8), evidence: Evidence::None };
        assert!(!verify_certificate(&cert).passed);
        let good =
            Certificate { claim: tr_claim(5, 8), evidence: Evidence::Family { family: butterfly_lower(5).unwrap() } };
        let text = serde_json::to_string(&good).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, good);
    }
}
