use serde::{Deserialize, Serialize};

use super::{NamedPoset, Poset};
use crate::error::{Error, Result};

/// Wire form: either a named poset `{"name": "k_rs", "params": {"r": 2, "s": 3}}`
/// or an explicit relation `{"p": 4, "lt": [[0, 2], ...]}`. The explicit form is
/// transitively closed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetJson {
    Named(NamedPoset),
    Relation { p: usize, lt: Vec<(usize, usize)> },
}

impl PosetJson {
    pub fn build(&self) -> Result<Poset> {
        match self {
            PosetJson::Named(n) => n.build(),
            PosetJson::Relation { p, lt } => {
                let poset = Poset::from_relation(*p, lt)?;
                poset.check_axioms()?;
                Ok(poset)
            }
        }
    }

    pub fn relation_of(p: &Poset) -> Self {
        PosetJson::Relation { p: p.len(), lt: p.relation() }
    }
}

/// Parses a CLI poset argument: a JSON document, or a short name such as
/// `butterfly`, `B`, `diamond`, `chain:3`, `vee:2`, `wedge:2`, `k_rs:2,3`,
/// `k_r1s:2,2`, `p_m:1`.
pub fn parse_poset_arg(arg: &str) -> Result<Poset> {
    let t = arg.trim();
    if t.starts_with('{') {
        let j: PosetJson = serde_json::from_str(t)?;
        return j.build();
    }
    let (head, tail) = match t.split_once(':') {
        Some((h, rest)) => (h, Some(rest)),
        None => (t, None),
    };
    let nums = |want: usize| -> Result<Vec<usize>> {
        let v: Vec<usize> = tail
            .unwrap_or("")
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Format(format!("bad number in {arg:?}"))))
            .collect::<Result<_>>()?;
        if v.len() != want {
            return Err(Error::Format(format!("{head} takes {want} parameter(s): {arg:?}")));
        }
        Ok(v)
    };
    let named = match head.to_ascii_lowercase().as_str() {
        "b" | "butterfly" => NamedPoset::Butterfly,
        "d" | "diamond" => NamedPoset::Diamond,
        "chain" | "p" => NamedPoset::Chain { k: nums(1)?[0] },
        "vee" | "v" => NamedPoset::Vee { s: nums(1)?[0] },
        "wedge" | "w" => NamedPoset::Wedge { r: nums(1)?[0] },
        "k_rs" | "k" => {
            let v = nums(2)?;
            NamedPoset::KRs { r: v[0], s: v[1] }
        }
        "k_r1s" => {
            let v = nums(2)?;
            NamedPoset::KR1s { r: v[0], s: v[1] }
        }
        "p_m" | "gadget" => NamedPoset::PmGadget { m: nums(1)?[0] },
        _ => return Err(Error::Format(format!("unknown poset {arg:?}"))),
    };
    named.build()
}
