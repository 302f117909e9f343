//! Finite data points for the conjectured `Tr_{n-k}` asymptotics.

use num::{BigInt, BigRational, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::param_e;
use crate::poset::Poset;
use crate::search::{solve_tr_l, SearchBudget, Status};
use crate::sets::binomial;

/// Envelope over which `e(P)` is measured for probes.
pub const PROBE_E_N: std::ops::RangeInclusive<usize> = 1..=7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub poset: String,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub value: usize,
    pub status: Status,
    pub middle_binomial: u64,
    /// `value / C(n, ⌊n/2⌋)` as a reduced fraction.
    pub ratio: String,
    pub ratio_f64: f64,
    pub e: usize,
    pub e_minus_k: i64,
    pub note: String,
}

/// Computes `Tr_{n-k}(n, P)` exactly and sets it against `e(P) - k`.
pub fn probe_conjecture_1_5(poset: &Poset, n: usize, k: usize, budget: &SearchBudget) -> Result<ProbeReport> {
    if k >= n {
        return Err(Error::Param(format!("k = {k} must be below n = {n}")));
    }
    let l = n - k;
    let res = solve_tr_l(n, l, poset, budget)?;
    let e = param_e(poset, 0..=*PROBE_E_N.end(), PROBE_E_N)?.e;
    let mid = binomial(n, n / 2);
    let ratio = BigRational::new(BigInt::from(res.value), BigInt::from(mid));
    Ok(ProbeReport {
        poset: poset.label(),
        n,
        k,
        l,
        value: res.value,
        status: res.status,
        middle_binomial: mid,
        ratio: ratio.to_string(),
        ratio_f64: ratio.to_f64().unwrap_or(f64::NAN),
        e,
        e_minus_k: e as i64 - k as i64,
        note: format!(
            "finite data point, not evidence of the limit; e measured on levels of 2^[n] for n in {}..={}",
            PROBE_E_N.start(),
            PROBE_E_N.end()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{butterfly, chain, vee};

    #[test]
    fn probes_report_data_points() {
        let b = SearchBudget::default();
        let v = probe_conjecture_1_5(&vee(2).unwrap(), 5, 1, &b).unwrap();
        assert_eq!(v.e_minus_k, 0);
        assert_eq!(v.l, 4);
        assert!(v.note.contains("finite data point"));
        let bf = probe_conjecture_1_5(&butterfly(), 5, 1, &b).unwrap();
        assert_eq!(bf.middle_binomial, 10);
        assert_eq!(bf.e, 2);
        assert_eq!(bf.status, Status::Exact);
        let c = probe_conjecture_1_5(&chain(2).unwrap(), 5, 1, &b).unwrap();
        assert_eq!(c.e, 1);
        assert!(probe_conjecture_1_5(&butterfly(), 5, 5, &b).is_err());
    }
}
