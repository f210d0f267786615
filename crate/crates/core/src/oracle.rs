//! Brute-force reference values computed by enumerating observation strings.
//!
//! Everything here goes through [`Filter::run_from`] and the plain string
//! metrics only, so it shares no code path with the dynamic programs in
//! [`crate::distance`]. Cost is `|Y|^k` runs per query; the limits keep that
//! bounded.

use thiserror::Error;

use crate::filter::{Color, Filter, StateIndex};
use crate::strings::{edit, hamming, EditCosts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_len: usize,
    pub max_labels: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_len: 8,
            max_labels: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("string length {len} exceeds the oracle cap {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("{labels} observation labels exceed the oracle cap {cap}")]
    TooManyLabels { labels: usize, cap: usize },
    #[error("base-case oracle needs one of the two lengths to be 0")]
    NotABaseCase,
}

fn alphabet<'a>(
    f1: &'a Filter,
    f2: &'a Filter,
    limits: &OracleLimits,
) -> Result<Vec<&'a str>, OracleError> {
    let mut labels: Vec<&str> = f1
        .observation_space()
        .iter()
        .chain(f2.observation_space())
        .map(String::as_str)
        .collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() > limits.max_labels {
        return Err(OracleError::TooManyLabels {
            labels: labels.len(),
            cap: limits.max_labels,
        });
    }
    Ok(labels)
}

fn check_len(k: usize, limits: &OracleLimits) -> Result<(), OracleError> {
    if k > limits.max_len {
        Err(OracleError::TooLong {
            len: k,
            cap: limits.max_len,
        })
    } else {
        Ok(())
    }
}

/// Calls `visit` with every string of exactly `len` symbols over `labels`.
fn for_each_string<'a>(labels: &[&'a str], len: usize, mut visit: impl FnMut(&[&'a str])) {
    if len > 0 && labels.is_empty() {
        return;
    }
    let mut digits = vec![0usize; len];
    let mut word: Vec<&str> = vec![labels.first().copied().unwrap_or(""); len];
    loop {
        visit(&word);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < labels.len() {
                word[pos] = labels[digits[pos]];
                break;
            }
            digits[pos] = 0;
            word[pos] = labels[0];
        }
    }
}

/// Largest Hamming distance between the outputs of `f1` from `q1` and `f2`
/// from `q2` over strings of length `k` both can process; 0 if there are none.
pub fn oracle_d_h(
    f1: &Filter,
    q1: StateIndex,
    f2: &Filter,
    q2: StateIndex,
    k: usize,
    limits: &OracleLimits,
) -> Result<u64, OracleError> {
    check_len(k, limits)?;
    let labels = alphabet(f1, f2, limits)?;
    let mut best = 0;
    for_each_string(&labels, k, |s| {
        if let (Ok(a), Ok(b)) = (f1.run_from(q1, s), f2.run_from(q2, s)) {
            best = best.max(hamming(&a, &b).expect("equal lengths"));
        }
    });
    Ok(best)
}

/// Diagonal edit value: both filters read the same string of length `k`.
pub fn oracle_d_e_diag(
    f1: &Filter,
    q1: StateIndex,
    f2: &Filter,
    q2: StateIndex,
    k: usize,
    costs: EditCosts,
    limits: &OracleLimits,
) -> Result<u64, OracleError> {
    check_len(k, limits)?;
    let labels = alphabet(f1, f2, limits)?;
    let mut best = 0;
    for_each_string(&labels, k, |s| {
        if let (Ok(a), Ok(b)) = (f1.run_from(q1, s), f2.run_from(q2, s)) {
            best = best.max(edit(&a, &b, costs));
        }
    });
    Ok(best)
}

/// Edit value when one side reads nothing (`k1 == 0` or `k2 == 0`).
///
/// The idle side outputs its single color; the other side ranges over every
/// string of its length it can process. 0 when it can process none.
#[allow(clippy::too_many_arguments)]
pub fn oracle_d_e_base(
    f1: &Filter,
    q1: StateIndex,
    k1: usize,
    f2: &Filter,
    q2: StateIndex,
    k2: usize,
    costs: EditCosts,
    limits: &OracleLimits,
) -> Result<u64, OracleError> {
    if k1 != 0 && k2 != 0 {
        return Err(OracleError::NotABaseCase);
    }
    check_len(k1.max(k2), limits)?;
    let labels = alphabet(f1, f2, limits)?;
    let single1: [Color; 1] = [f1.color(q1)];
    let single2: [Color; 1] = [f2.color(q2)];
    let mut best = 0;
    if k1 == 0 {
        for_each_string(&labels, k2, |s| {
            if let Ok(b) = f2.run_from(q2, s) {
                best = best.max(edit(&single1, &b, costs));
            }
        });
    } else {
        for_each_string(&labels, k1, |s| {
            if let Ok(a) = f1.run_from(q1, s) {
                best = best.max(edit(&a, &single2, costs));
            }
        });
    }
    Ok(best)
}

/// Shortest string of length at most `max_len` that `f1` processes and `f2`
/// rejects, if any.
pub fn oracle_language_counterexample(
    f1: &Filter,
    f2: &Filter,
    max_len: usize,
) -> Option<Vec<String>> {
    let mut labels: Vec<&str> = f1.observation_space().iter().map(String::as_str).collect();
    labels.sort_unstable();
    for len in 0..=max_len {
        let mut found = None;
        for_each_string(&labels, len, |s| {
            if found.is_none() && f1.in_language(s) && !f2.in_language(s) {
                found = Some(s.iter().map(|y| y.to_string()).collect());
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}
