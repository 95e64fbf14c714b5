//! Rule quality and the total preorder used to pick between rules.

use std::cmp::Ordering;

use crate::dataset::SelectorId;
use crate::error::{Error, Result};

/// m-estimate `(p + m*P/(P+N)) / (p + n + m)`.
///
/// Returns 0 when the denominator vanishes (m = 0 and nothing covered).
pub fn m_estimate(p: u64, n: u64, pos: u64, neg: u64, m: f64) -> f64 {
    let denom = p as f64 + n as f64 + m;
    if denom == 0.0 {
        return 0.0;
    }
    let prior = if pos + neg == 0 { 0.0 } else { pos as f64 / (pos + neg) as f64 };
    (p as f64 + m * prior) / denom
}

pub fn check_m(m: f64) -> Result<f64> {
    if m.is_finite() && m >= 0.0 {
        Ok(m)
    } else {
        Err(Error::Config(format!("m must be a finite value >= 0, got {m}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    /// Predictive selectors, strictly ascending.
    pub body: Vec<SelectorId>,
    pub head: SelectorId,
    pub p: u64,
    pub n: u64,
    pub h: f64,
}

impl Rule {
    /// Whether every body selector occurs in the sorted `selectors`.
    pub fn covers(&self, selectors: &[SelectorId]) -> bool {
        self.body.iter().all(|s| selectors.binary_search(s).is_ok())
    }

    pub fn key(&self) -> (&[SelectorId], SelectorId) {
        (&self.body, self.head)
    }
}

/// `Greater` when `a` is the better rule: higher h, then higher p, then the
/// head that comes first in the selector order.
pub fn compare_rules(a: &Rule, b: &Rule) -> Ordering {
    a.h.partial_cmp(&b.h)
        .unwrap_or(Ordering::Equal)
        .then(a.p.cmp(&b.p))
        .then(b.head.cmp(&a.head))
}

pub fn is_better(a: &Rule, b: &Rule) -> bool {
    compare_rules(a, b) == Ordering::Greater
}

/// [`compare_rules`] made total by falling back to the smaller `(body, head)`.
pub fn compare_rules_total(a: &Rule, b: &Rule) -> Ordering {
    compare_rules(a, b).then_with(|| b.key().cmp(&a.key()))
}
