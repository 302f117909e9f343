//! Lower-bound families and a verifier that re-checks them with the
//! embedding predicates.

use serde::{Deserialize, Serialize};

use crate::embed::{find_copy, l_trace_violation, trace_violation};
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::sets::{k_subsets, levels_between, Family, GroundSet};

/// `C([n], j+1) ∪ ... ∪ C([n], j+k)`.
pub fn consecutive_levels(n: usize, j: usize, k: usize) -> Result<Family> {
    GroundSet::new(n)?;
    if k == 0 || j + k > n {
        return Err(Error::Param(format!("levels {}..={} do not fit in [{n}]", j + 1, j + k)));
    }
    levels_between(n, j + 1, j + k)
}

/// The empty set, all singletons, and the pairs `{1,2}, {3,4}, ...`.
pub fn butterfly_lower(n: usize) -> Result<Family> {
    GroundSet::new(n)?;
    let mut masks = vec![0u32];
    masks.extend((0..n).map(|i| 1u32 << i));
    masks.extend((0..n / 2).map(|i| 0b11u32 << (2 * i)));
    Family::new(n, masks)
}

/// The middle level split by element sum: class `i` (for `i = 1..=n`, at
/// index `i - 1`) holds the sets whose sum is `i` mod `n`.
pub fn mod_sum_classes(n: usize) -> Result<Vec<Family>> {
    GroundSet::new(n)?;
    if n < 2 {
        return Err(Error::Param("mod-sum classes need n >= 2".into()));
    }
    let mut classes = vec![Vec::new(); n];
    for s in k_subsets(n, n / 2) {
        let sum: usize = (0..n).filter(|&i| s >> i & 1 == 1).map(|i| i + 1).sum();
        // Residue 0 is class n.
        let class = (sum + n - 1) % n;
        classes[class].push(s);
    }
    classes.into_iter().map(|c| Family::new(n, c)).collect()
}

/// Union of the `s` largest classes; ties go to the smaller class index.
pub fn top_classes(n: usize, s: usize) -> Result<Family> {
    if s == 0 || s > n {
        return Err(Error::Param(format!("s = {s} must lie in 1..={n}")));
    }
    let classes = mod_sum_classes(n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(classes[i].len()), i));
    let masks = order[..s].iter().flat_map(|&i| classes[i].masks().to_vec());
    Family::new(n, masks)
}

/// Part sizes for splitting `[n]` into `m` consecutive blocks, larger first.
pub fn almost_equal_parts(n: usize, m: usize) -> Vec<usize> {
    (0..m).map(|i| n / m + usize::from(i < n % m)).collect()
}

/// Sets meeting every block of [`almost_equal_parts`] in at most one element.
pub fn p_m_family(n: usize, m: usize) -> Result<Family> {
    GroundSet::new(n)?;
    if m == 0 || m > n {
        return Err(Error::Param(format!("m = {m} must lie in 1..={n}")));
    }
    let mut blocks = Vec::with_capacity(m);
    let mut start = 0;
    for size in almost_equal_parts(n, m) {
        blocks.push(((1u32 << size) - 1) << start);
        start += size;
    }
    let masks = (0..1u32 << n).filter(|&s| blocks.iter().all(|&b| (s & b).count_ones() <= 1));
    Family::new(n, masks)
}

/// What a construction claims about itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "predicate")]
pub enum Predicate {
    PFree,
    TraceFree,
    LTraceFree { l: usize },
    DownwardClosed,
}

impl Predicate {
    pub fn id(&self) -> String {
        match self {
            Predicate::PFree => "p_free".into(),
            Predicate::TraceFree => "trace_free".into(),
            Predicate::LTraceFree { l } => format!("{l}_trace_free"),
            Predicate::DownwardClosed => "downward_closed".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClaim {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub family: Family,
    pub size: usize,
    pub claimed: SizeClaim,
    pub predicate: String,
    pub poset: Option<String>,
    pub passed: bool,
    /// First failure, in words.
    pub violation: Option<String>,
    /// The predicate held for a reason unrelated to the construction: the
    /// family is smaller or shorter than the poset.
    pub vacuous: bool,
}

/// Checks `family` against a size claim and a predicate using only the
/// general-purpose checkers.
pub fn verify_construction(
    family: &Family,
    claimed: SizeClaim,
    predicate: &Predicate,
    poset: Option<&Poset>,
) -> ConstructionReport {
    let size = family.len();
    let mut violation = match claimed {
        SizeClaim::Exact(v) if v != size => Some(format!("size {size}, claimed {v}")),
        SizeClaim::AtLeast(v) if size < v => Some(format!("size {size}, claimed at least {v}")),
        _ => None,
    };
    // Traces can lengthen chains, so only the cardinality test is sound for them.
    let longest = crate::chains::longest_chain(family).len();
    let vacuous =
        poset.is_some_and(|p| p.len() > size || (matches!(predicate, Predicate::PFree) && p.height() > longest));
    if violation.is_none() {
        violation = match (predicate, poset) {
            (Predicate::DownwardClosed, _) => (!family.is_downward_closed()).then(|| "not downward closed".to_string()),
            (_, None) => Some(format!("predicate {} needs a poset", predicate.id())),
            (Predicate::PFree, Some(p)) => {
                find_copy(family, p).map(|w| format!("copy of {} at {:?}", p.label(), w.map))
            }
            (Predicate::TraceFree, Some(p)) => trace_violation(family, p)
                .map(|v| format!("copy of {} in the trace on {}: {:?}", p.label(), v.l_set, v.witness.map)),
            (Predicate::LTraceFree { l }, Some(p)) => l_trace_violation(family, p, *l)
                .map(|v| format!("copy of {} in the trace on {}: {:?}", p.label(), v.l_set, v.witness.map)),
        };
    }
    ConstructionReport {
        family: family.clone(),
        size,
        claimed,
        predicate: predicate.id(),
        poset: poset.map(Poset::label),
        passed: violation.is_none(),
        violation,
        vacuous,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{is_p_free, is_trace_p_free};
    use crate::poset::{butterfly, chain, p_m_gadget, vee};
    use crate::sets::{binomial, k_subsets};

    #[test]
    fn level_bands() {
        let f = consecutive_levels(5, 1, 2).unwrap();
        assert_eq!(f.len(), 20);
        assert!(is_p_free(&f, &butterfly()));
        // Tracing onto an (n−1)-set widens the band by one level below.
        for n in 5..=6 {
            let f = consecutive_levels(n, 1, 2).unwrap();
            for x in k_subsets(n, n - 1) {
                let t = f.trace_bits(x);
                let sizes: std::collections::BTreeSet<usize> = t.iter().map(|s| s.len()).collect();
                assert_eq!(sizes.into_iter().collect::<Vec<_>>(), vec![1, 2, 3]);
                assert_eq!(t.len() as u64, (1..=3).map(|i| binomial(n - 1, i)).sum::<u64>());
            }
        }
        assert!(consecutive_levels(4, 3, 2).is_err());
        assert!(consecutive_levels(4, 1, 0).is_err());
    }

    #[test]
    fn butterfly_lower_family() {
        for n in 1..=8 {
            let f = butterfly_lower(n).unwrap();
            assert_eq!(f.len(), 3 * n / 2 + 1);
            assert!(f.is_downward_closed());
        }
        assert_eq!(butterfly_lower(4).unwrap().len(), 7);
        assert!(is_trace_p_free(&butterfly_lower(5).unwrap(), &butterfly()));
        assert!(is_trace_p_free(&butterfly_lower(8).unwrap(), &butterfly()));
    }

    #[test]
    fn residue_classes_partition_the_middle() {
        for n in 2..=12 {
            let classes = mod_sum_classes(n).unwrap();
            let total: usize = classes.iter().map(Family::len).sum();
            assert_eq!(total as u64, binomial(n, n / 2));
            let mut all: Vec<u32> = classes.iter().flat_map(|c| c.masks().to_vec()).collect();
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), total);
            let top = top_classes(n, 1).unwrap();
            assert!(top.len() as u64 * n as u64 >= binomial(n, n / 2));
        }
        let four = mod_sum_classes(4).unwrap();
        assert_eq!(four.iter().map(Family::len).sum::<usize>(), 6);
        assert!(top_classes(4, 5).is_err());
    }

    #[test]
    fn top_classes_cover_property() {
        for n in 3..=10 {
            let k = n / 2;
            for s in 1..=3.min(n) {
                let f = top_classes(n, s).unwrap();
                for g in k_subsets(n, k - 1) {
                    let over = f.masks().iter().filter(|&&m| m & g == g).count();
                    assert!(over <= s, "n={n} s={s}");
                }
            }
        }
        let r = verify_construction(
            &top_classes(6, 2).unwrap(),
            SizeClaim::AtLeast(8),
            &Predicate::LTraceFree { l: 5 },
            Some(&vee(2).unwrap()),
        );
        // An antichain has no 2-chain, but its traces can.
        assert!(r.passed && !r.vacuous, "{r:?}");
    }

    #[test]
    fn gadget_families() {
        assert_eq!(almost_equal_parts(7, 3), vec![3, 2, 2]);
        let f = p_m_family(4, 2).unwrap();
        assert_eq!(f.len(), 9);
        for (n, m) in [(3, 1), (5, 2), (6, 2), (7, 3), (8, 2)] {
            let f = p_m_family(n, m).unwrap();
            let want: usize = almost_equal_parts(n, m).iter().map(|a| a + 1).product();
            assert_eq!(f.len(), want);
            assert!(f.is_downward_closed());
        }
        let r = verify_construction(
            &p_m_family(6, 2).unwrap(),
            SizeClaim::Exact(16),
            &Predicate::PFree,
            Some(&p_m_gadget(2).unwrap()),
        );
        assert!(r.passed && !r.vacuous, "{r:?}");
        let r = verify_construction(
            &p_m_family(4, 1).unwrap(),
            SizeClaim::Exact(5),
            &Predicate::PFree,
            Some(&p_m_gadget(1).unwrap()),
        );
        assert!(r.passed && r.vacuous);
        assert!(p_m_family(3, 4).is_err());
    }

    #[test]
    fn verifier_reports_failures() {
        let r = verify_construction(
            &butterfly_lower(6).unwrap(),
            SizeClaim::Exact(10),
            &Predicate::TraceFree,
            Some(&butterfly()),
        );
        assert!(r.passed);
        let r = verify_construction(
            &consecutive_levels(5, 1, 3).unwrap(),
            SizeClaim::Exact(25),
            &Predicate::PFree,
            Some(&butterfly()),
        );
        assert!(!r.passed);
        assert!(r.violation.unwrap().contains("copy"));
        let r = verify_construction(
            &top_classes(5, 2).unwrap(),
            SizeClaim::AtLeast(4),
            &Predicate::LTraceFree { l: 4 },
            Some(&vee(2).unwrap()),
        );
        assert!(r.passed);
        let r = verify_construction(
            &butterfly_lower(6).unwrap(),
            SizeClaim::Exact(11),
            &Predicate::TraceFree,
            Some(&butterfly()),
        );
        assert!(!r.passed);
        let r = verify_construction(&butterfly_lower(6).unwrap(), SizeClaim::Exact(10), &Predicate::PFree, None);
        assert!(!r.passed);
        let r = verify_construction(
            &chain_family(),
            SizeClaim::Exact(3),
            &Predicate::DownwardClosed,
            Some(&chain(2).unwrap()),
        );
        assert!(!r.passed);
    }

    fn chain_family() -> Family {
        Family::from_sets(3, &[vec![1], vec![1, 2], vec![1, 2, 3]]).unwrap()
    }
}
