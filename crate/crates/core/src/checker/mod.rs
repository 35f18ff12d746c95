//! Executable checks of the algebraic statements, as universally quantified
//! predicates swept over a finite universe.
//!
//! Each check in [`MONOID_CHECKS`] is a predicate on a tuple of elements (and
//! optionally an index `k`). A sweep evaluates it on every tuple, or on a
//! seeded sample of tuples when the universe is large, and records each
//! failing tuple so it can be fed back to [`replay`]. Matrix statements are
//! checked on seeded random instances in [`matrix_checks`].

mod matrix_checks;
mod monoid_checks;

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::monoid::{Element, FiniteStarMonoid};
use crate::search::default_k_max;

pub use matrix_checks::{
    matrix_checks, run_matrix_check, MatrixInstance, MatrixSweep, MATRIX_CHECK_IDS,
};
pub use monoid_checks::{CheckDef, MONOID_CHECKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// A tuple on which a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Element ids, or the instance number for matrix checks.
    pub elements: Vec<usize>,
    pub k: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub id: String,
    pub universe: String,
    /// Number of tuples (times `k` values, where applicable) evaluated.
    pub quantified_over: u64,
    pub status: CheckStatus,
    /// Total number of failing tuples; `failures` keeps the first [`MAX_RECORDED_FAILURES`].
    pub failure_count: u64,
    pub failures: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub const MAX_RECORDED_FAILURES: usize = 25;

impl TheoremCheck {
    pub(crate) fn from_failures(
        id: &str,
        universe: String,
        quantified_over: u64,
        mut failures: Vec<Counterexample>,
    ) -> Self {
        let failure_count = failures.len() as u64;
        failures.truncate(MAX_RECORDED_FAILURES);
        TheoremCheck {
            id: id.to_string(),
            universe,
            quantified_over,
            status: if failure_count == 0 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            failure_count,
            failures,
            note: None,
        }
    }

    fn not_applicable(id: &str, universe: String, why: &str) -> Self {
        TheoremCheck {
            id: id.to_string(),
            universe,
            quantified_over: 0,
            status: CheckStatus::NotApplicable,
            failure_count: 0,
            failures: Vec::new(),
            note: Some(why.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Bounds for a monoid sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct SweepConfig {
    /// Largest `k` tried; `None` means `2 · order`.
    pub k_max: Option<usize>,
    /// When set and the tuple space is larger, evaluate this many uniformly drawn tuples instead.
    pub samples: Option<usize>,
    pub seed: u64,
}

/// Shared inputs of a monoid predicate.
pub struct Ctx<'m> {
    pub m: &'m FiniteStarMonoid,
    pub k_max: usize,
}

fn tuples(m: &FiniteStarMonoid, arity: usize, cfg: &SweepConfig) -> (Vec<Vec<Element>>, bool) {
    let n = m.order();
    let total = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    let elements: Vec<Element> = m.elements().collect();
    match cfg.samples {
        Some(s) if s < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let out = (0..s)
                .map(|_| {
                    (0..arity)
                        .map(|_| elements[rng.random_range(0..n)])
                        .collect()
                })
                .collect();
            (out, true)
        }
        _ => {
            let out = (0..total)
                .map(|mut i| {
                    let mut t: Vec<Element> = (0..arity)
                        .map(|_| {
                            let e = elements[i % n];
                            i /= n;
                            e
                        })
                        .collect();
                    t.reverse();
                    t
                })
                .collect();
            (out, false)
        }
    }
}

/// Runs one check over `m`.
pub fn run_check(m: &FiniteStarMonoid, def: &CheckDef, cfg: &SweepConfig) -> TheoremCheck {
    let universe = m.universe().to_string();
    if def.ring_only && !m.has_ring_structure() {
        return TheoremCheck::not_applicable(
            def.id,
            universe,
            "needs additive structure (Z_n only)",
        );
    }
    let ctx = Ctx {
        m,
        k_max: cfg.k_max.unwrap_or_else(|| default_k_max(m)),
    };
    let (tuples, sampled) = tuples(m, def.arity, cfg);
    let ks: Vec<Option<usize>> = if def.per_k {
        (0..=ctx.k_max).map(Some).collect()
    } else {
        vec![None]
    };
    let mut failures: Vec<Counterexample> = tuples
        .par_iter()
        .flat_map_iter(|t| {
            let ctx = &ctx;
            ks.iter().filter_map(move |&k| {
                (def.eval)(ctx, t, k).map(|detail| Counterexample {
                    elements: t.iter().map(|e| e.id()).collect(),
                    k,
                    detail,
                })
            })
        })
        .collect();
    failures.sort_by(|x, y| (&x.elements, x.k).cmp(&(&y.elements, y.k)));
    let quantified = (tuples.len() * ks.len()) as u64;
    let mut check = TheoremCheck::from_failures(def.id, universe, quantified, failures);
    if sampled {
        check.note = Some(format!(
            "{} sampled tuples, seed {}",
            tuples.len(),
            cfg.seed
        ));
    }
    check
}

/// Every monoid check over `m`, in registry order.
pub fn run_monoid_checks(m: &FiniteStarMonoid, cfg: &SweepConfig) -> Vec<TheoremCheck> {
    MONOID_CHECKS
        .iter()
        .map(|def| run_check(m, def, cfg))
        .collect()
}

pub fn find_check(id: &str) -> Option<&'static CheckDef> {
    MONOID_CHECKS.iter().find(|d| d.id == id)
}

/// Re-evaluates a recorded counterexample; `Some(detail)` means it still fails.
pub fn replay(
    m: &FiniteStarMonoid,
    id: &str,
    cx: &Counterexample,
    k_max: Option<usize>,
) -> Option<Option<String>> {
    let def = find_check(id)?;
    let elements = cx
        .elements
        .iter()
        .map(|&i| m.element(i))
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    let ctx = Ctx {
        m,
        k_max: k_max.unwrap_or_else(|| default_k_max(m)),
    };
    Some((def.eval)(&ctx, &elements, cx.k))
}

/// A set of check results with JSON and table renderings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub checks: Vec<TheoremCheck>,
}

impl Ledger {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(TheoremCheck::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }

    pub fn to_table(&self) -> String {
        let id_w = self
            .checks
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(2)
            .max(5);
        let u_w = self
            .checks
            .iter()
            .map(|c| c.universe.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<id_w$}  {:<u_w$}  {:>10}  {:>8}  status",
            "check", "universe", "tuples", "failures"
        );
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotApplicable => "n/a",
            };
            let _ = writeln!(
                out,
                "{:<id_w$}  {:<u_w$}  {:>10}  {:>8}  {status}",
                c.id, c.universe, c.quantified_over, c.failure_count
            );
            if let Some(first) = c.failures.first() {
                let k = first.k.map(|k| format!(" k={k}")).unwrap_or_default();
                let _ = writeln!(out, "    e.g. {:?}{k}: {}", first.elements, first.detail);
            }
        }
        let total = self.checks.len();
        let failed = self.failed().count();
        let _ = writeln!(out, "{} checks, {} failed", total, failed);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_enumerate_lexicographically() {
        let m = FiniteStarMonoid::zn(3).unwrap();
        let (t, sampled) = tuples(&m, 2, &SweepConfig::default());
        assert!(!sampled);
        assert_eq!(t.len(), 9);
        assert_eq!(t[1].iter().map(|e| e.id()).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(t[3].iter().map(|e| e.id()).collect::<Vec<_>>(), vec![1, 0]);
    }

    #[test]
    fn sampling_is_seeded() {
        let m = FiniteStarMonoid::zn(5).unwrap();
        let cfg = SweepConfig {
            samples: Some(10),
            seed: 3,
            ..SweepConfig::default()
        };
        let (a, sampled) = tuples(&m, 3, &cfg);
        assert!(sampled);
        assert_eq!(a, tuples(&m, 3, &cfg).0);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn ring_only_checks_skip_matrix_monoids() {
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        let c = run_check(
            &m,
            find_check("ring_difference").unwrap(),
            &SweepConfig::default(),
        );
        assert_eq!(c.status, CheckStatus::NotApplicable);
        assert!(c.passed());
    }
}
