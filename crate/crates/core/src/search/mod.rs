//! Brute-force generalized inverses over a [`FiniteStarMonoid`].
//!
//! Every search enumerates the whole monoid and tests the defining equations
//! directly, so results are exact. Kinds that can have several solutions
//! (`{1,3}`, `{1,4}`, one-sided `(b,c)`) report the full witness set.

mod classical;
mod core_ep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monoid::{Element, FiniteStarMonoid, MonoidError};

pub use classical::{
    find_along, find_bc, find_bc_one_sided, find_drazin, find_group, find_i13, find_i14, find_mp,
    i13_set, i14_set, in_bsy, in_ysc,
};
pub use core_ep::{
    bc_core_ep_witnesses, default_k_max, dual_witnesses, find_bc_core, find_bc_core_ep, find_core,
    find_core_ep, find_dual_bc_core_ep, find_w_core, find_w_core_ep, is_bc_core_ep_witness,
    is_dual_witness, power_cycle, unit_regular_check, w_core_ep_witnesses, Powers,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("{element} is not w-core invertible for w = {w}")]
    NotWCoreInvertible { element: Element, w: Element },
    #[error("{kind} takes {expected} element argument(s), got {got}")]
    Arity {
        kind: InverseKind,
        expected: usize,
        got: usize,
    },
    #[error("unknown inverse kind {0:?}")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseKind {
    OneThree,
    OneFour,
    MoorePenrose,
    Group,
    Drazin,
    AlongD,
    Bc,
    BcLeft,
    BcRight,
    WCore,
    WCoreEp,
    BcCore,
    BcCoreEp,
    DualBcCoreEp,
}

impl InverseKind {
    pub const ALL: [InverseKind; 14] = [
        InverseKind::OneThree,
        InverseKind::OneFour,
        InverseKind::MoorePenrose,
        InverseKind::Group,
        InverseKind::Drazin,
        InverseKind::AlongD,
        InverseKind::Bc,
        InverseKind::BcLeft,
        InverseKind::BcRight,
        InverseKind::WCore,
        InverseKind::WCoreEp,
        InverseKind::BcCore,
        InverseKind::BcCoreEp,
        InverseKind::DualBcCoreEp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseKind::OneThree => "one_three",
            InverseKind::OneFour => "one_four",
            InverseKind::MoorePenrose => "moore_penrose",
            InverseKind::Group => "group",
            InverseKind::Drazin => "drazin",
            InverseKind::AlongD => "along_d",
            InverseKind::Bc => "bc",
            InverseKind::BcLeft => "bc_left",
            InverseKind::BcRight => "bc_right",
            InverseKind::WCore => "w_core",
            InverseKind::WCoreEp => "w_core_ep",
            InverseKind::BcCore => "bc_core",
            InverseKind::BcCoreEp => "bc_core_ep",
            InverseKind::DualBcCoreEp => "dual_bc_core_ep",
        }
    }

    /// Number of element arguments: `a`, `(a, d)`, `(a, w)` or `(a, b, c)`.
    pub fn arity(self) -> usize {
        match self {
            InverseKind::OneThree
            | InverseKind::OneFour
            | InverseKind::MoorePenrose
            | InverseKind::Group
            | InverseKind::Drazin => 1,
            InverseKind::AlongD | InverseKind::WCore | InverseKind::WCoreEp => 2,
            _ => 3,
        }
    }

    /// Kinds whose solution set may have more than one element.
    pub fn is_multivalued(self) -> bool {
        matches!(
            self,
            InverseKind::OneThree
                | InverseKind::OneFour
                | InverseKind::BcLeft
                | InverseKind::BcRight
        )
    }

    /// Kinds answered with an [`IndexSetReport`] rather than an [`InverseResult`].
    pub fn is_indexed(self) -> bool {
        matches!(
            self,
            InverseKind::WCoreEp | InverseKind::BcCoreEp | InverseKind::DualBcCoreEp
        )
    }
}

impl fmt::Display for InverseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InverseKind {
    type Err = SearchError;

    /// Accepts both `bc_core_ep` and `bc-core-ep`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        InverseKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| SearchError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseStatus {
    Exists,
    NotExists,
    /// The search bound was reached without a member and without covering
    /// the eventual period of the relevant powers.
    NotDetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseResult {
    pub kind: InverseKind,
    pub status: InverseStatus,
    pub witness: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Element>>,
}

impl InverseResult {
    pub(crate) fn from_witnesses(kind: InverseKind, found: Vec<Element>) -> Self {
        let status = if found.is_empty() {
            InverseStatus::NotExists
        } else {
            InverseStatus::Exists
        };
        let witness = found.first().copied();
        // A single-valued kind with several solutions is reported in full so
        // that uniqueness checks can see it.
        let witnesses = (kind.is_multivalued() || found.len() > 1).then_some(found);
        InverseResult {
            kind,
            status,
            witness,
            witnesses,
        }
    }

    pub fn exists(&self) -> bool {
        self.status == InverseStatus::Exists
    }

    /// Every solution found: the full set for multivalued kinds, else the witness.
    pub fn all(&self) -> Vec<Element> {
        match (&self.witnesses, self.witness) {
            (Some(w), _) => w.clone(),
            (None, Some(x)) => vec![x],
            (None, None) => Vec::new(),
        }
    }
}

/// One admissible `k` together with the element that satisfies the system at that `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KWitness {
    pub k: usize,
    pub element: Element,
}

/// Result of scanning `k = 0..=searched_bound` for one of the indexed kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetReport {
    pub kind: InverseKind,
    pub searched_bound: usize,
    pub members: Vec<usize>,
    pub index: Option<usize>,
    /// The witness at the smallest member.
    pub inverse: Option<Element>,
    pub status: InverseStatus,
    /// Every `(k, x)` found. More than one distinct `x` here contradicts uniqueness across `k`.
    pub witnesses: Vec<KWitness>,
}

impl IndexSetReport {
    pub(crate) fn new(
        kind: InverseKind,
        searched_bound: usize,
        witnesses: Vec<KWitness>,
        complete: bool,
    ) -> Self {
        let mut members: Vec<usize> = witnesses.iter().map(|w| w.k).collect();
        members.dedup();
        let status = match (members.is_empty(), complete) {
            (false, _) => InverseStatus::Exists,
            (true, true) => InverseStatus::NotExists,
            (true, false) => InverseStatus::NotDetermined,
        };
        IndexSetReport {
            kind,
            searched_bound,
            index: members.first().copied(),
            inverse: witnesses.first().map(|w| w.element),
            members,
            status,
            witnesses,
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.binary_search(&k).is_ok()
    }

    /// Distinct elements appearing as witnesses for some `k`, sorted.
    pub fn distinct_inverses(&self) -> Vec<Element> {
        let mut v: Vec<Element> = self.witnesses.iter().map(|w| w.element).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn witness_at(&self, k: usize) -> Option<Element> {
        self.witnesses.iter().find(|w| w.k == k).map(|w| w.element)
    }

    /// Whether `members` is `{index, index + 1, ..., searched_bound}`.
    pub fn is_upward_closed(&self) -> bool {
        match self.index {
            None => true,
            Some(i) => self.members.len() == self.searched_bound - i + 1,
        }
    }
}

/// Either kind of search outcome, for callers that dispatch on [`InverseKind`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SearchOutcome {
    Single(InverseResult),
    Indexed(IndexSetReport),
}

/// Runs the search named by `kind` on `args`, which must have [`InverseKind::arity`] elements.
pub fn compute(
    m: &FiniteStarMonoid,
    kind: InverseKind,
    args: &[Element],
    k_max: Option<usize>,
) -> Result<SearchOutcome, SearchError> {
    if args.len() != kind.arity() {
        return Err(SearchError::Arity {
            kind,
            expected: kind.arity(),
            got: args.len(),
        });
    }
    let k_max = k_max.unwrap_or_else(|| default_k_max(m));
    let a = args[0];
    use SearchOutcome::{Indexed, Single};
    Ok(match kind {
        InverseKind::OneThree => Single(find_i13(m, a)),
        InverseKind::OneFour => Single(find_i14(m, a)),
        InverseKind::MoorePenrose => Single(find_mp(m, a)),
        InverseKind::Group => Single(find_group(m, a)),
        InverseKind::Drazin => Single(find_drazin(m, a)),
        InverseKind::AlongD => Single(find_along(m, a, args[1])),
        InverseKind::WCore => Single(find_w_core(m, a, args[1])),
        InverseKind::WCoreEp => Indexed(find_w_core_ep(m, a, args[1], k_max)),
        InverseKind::Bc => Single(find_bc(m, a, args[1], args[2])),
        InverseKind::BcLeft => Single(find_bc_one_sided(
            m,
            a,
            args[1],
            args[2],
            crate::monoid::Side::Left,
        )),
        InverseKind::BcRight => Single(find_bc_one_sided(
            m,
            a,
            args[1],
            args[2],
            crate::monoid::Side::Right,
        )),
        InverseKind::BcCore => Single(find_bc_core(m, a, args[1], args[2])),
        InverseKind::BcCoreEp => Indexed(find_bc_core_ep(m, a, args[1], args[2], k_max)),
        InverseKind::DualBcCoreEp => Indexed(find_dual_bc_core_ep(m, a, args[1], args[2], k_max)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_parse_both_spellings() {
        for k in InverseKind::ALL {
            assert_eq!(k.name().parse::<InverseKind>().unwrap(), k);
            assert_eq!(
                k.name().replace('_', "-").parse::<InverseKind>().unwrap(),
                k
            );
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!("core".parse::<InverseKind>().is_err());
    }

    #[test]
    fn compute_checks_arity() {
        let m = FiniteStarMonoid::zn(8).unwrap();
        let one = m.unity();
        let err = compute(&m, InverseKind::Bc, &[one], None).unwrap_err();
        assert_eq!(
            err,
            SearchError::Arity {
                kind: InverseKind::Bc,
                expected: 3,
                got: 1
            }
        );
        assert!(matches!(
            compute(&m, InverseKind::BcCoreEp, &[one, one, one], Some(2)).unwrap(),
            SearchOutcome::Indexed(_)
        ));
    }
}
