//! Green's preorders, the cancellation-style extended preorders, Drazin's
//! relational annihilators, inner inverses and idempotents.
//!
//! Annihilators come in two flavours. The relational form used by the
//! preorder theory is `ann_r(a) = {(r, s) : ar = as}` and lives only as a
//! predicate here ([`FiniteStarMonoid::annihilator_contained`]) unless a
//! report asks for the explicit pairs. The classical ring form
//! `{x : ax = 0}` is available on monoids with additive structure through
//! [`FiniteStarMonoid::ring_annihilator`].

use serde::{Deserialize, Serialize};

use super::{Element, FiniteStarMonoid, MonoidError, EXT_CACHE_LIMIT};

/// Green's preorders `≤_L`, `≤_R`, `≤_H` and the matching equivalences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GreenKind {
    L,
    R,
    H,
}

/// The extended preorders `≤_{L°}`, `≤_{R°}`, `≤_{H°}`.
///
/// `a ≤_{R°} b` when every right equation `bs = bt` satisfied by `b` is also
/// satisfied by `a`; `L°` is the left-handed mirror and `H°` is both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtKind {
    L,
    R,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A pair `(r, s)` with `a·r = a·s` (right) or `r·a = s·a` (left).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AnnihilatorPair {
    pub r: Element,
    pub s: Element,
}

#[derive(Debug)]
pub(super) struct ExtTables {
    // right[a * order + b] <=> a ≤_{R°} b
    right: Vec<bool>,
    left: Vec<bool>,
}

impl FiniteStarMonoid {
    pub fn green_leq(&self, a: Element, b: Element, kind: GreenKind) -> bool {
        match kind {
            GreenKind::L => self.in_left_ideal(a, b),
            GreenKind::R => self.in_right_ideal(a, b),
            GreenKind::H => self.in_left_ideal(a, b) && self.in_right_ideal(a, b),
        }
    }

    pub fn green_rel(&self, a: Element, b: Element, kind: GreenKind) -> bool {
        self.green_leq(a, b, kind) && self.green_leq(b, a, kind)
    }

    pub fn ext_leq(&self, a: Element, b: Element, kind: ExtKind) -> bool {
        if self.order <= EXT_CACHE_LIMIT {
            let t = self.ext.get_or_init(|| self.ext_tables());
            let i = a.0 * self.order + b.0;
            return match kind {
                ExtKind::R => t.right[i],
                ExtKind::L => t.left[i],
                ExtKind::H => t.right[i] && t.left[i],
            };
        }
        let mut scratch = vec![usize::MAX; self.order];
        match kind {
            ExtKind::R => self.factors_right(a, b, &mut scratch),
            ExtKind::L => self.factors_left(a, b, &mut scratch),
            ExtKind::H => {
                self.factors_right(a, b, &mut scratch) && {
                    scratch.fill(usize::MAX);
                    self.factors_left(a, b, &mut scratch)
                }
            }
        }
    }

    pub fn ext_rel(&self, a: Element, b: Element, kind: ExtKind) -> bool {
        self.ext_leq(a, b, kind) && self.ext_leq(b, a, kind)
    }

    fn ext_tables(&self) -> ExtTables {
        let n = self.order;
        let mut right = vec![false; n * n];
        let mut left = vec![false; n * n];
        let mut scratch = vec![usize::MAX; n];
        for a in self.elements() {
            for b in self.elements() {
                scratch.fill(usize::MAX);
                right[a.0 * n + b.0] = self.factors_right(a, b, &mut scratch);
                scratch.fill(usize::MAX);
                left[a.0 * n + b.0] = self.factors_left(a, b, &mut scratch);
            }
        }
        ExtTables { right, left }
    }

    // a ≤_{R°} b iff s ↦ as factors through s ↦ bs: group s by bs and require
    // as to be constant on each group.
    fn factors_right(&self, a: Element, b: Element, seen: &mut [usize]) -> bool {
        self.elements().all(|s| {
            let key = self.mul(b, s).0;
            let val = self.mul(a, s).0;
            if seen[key] == usize::MAX {
                seen[key] = val;
            }
            seen[key] == val
        })
    }

    fn factors_left(&self, a: Element, b: Element, seen: &mut [usize]) -> bool {
        self.elements().all(|s| {
            let key = self.mul(s, b).0;
            let val = self.mul(s, a).0;
            if seen[key] == usize::MAX {
                seen[key] = val;
            }
            seen[key] == val
        })
    }

    /// `ann(b) ⊆ ann(a)` on the given side, by enumerating every pair `(s, t)`.
    pub fn annihilator_contained(&self, a: Element, b: Element, side: Side) -> bool {
        self.elements().all(|s| {
            self.elements().all(|t| match side {
                Side::Right => self.mul(b, s) != self.mul(b, t) || self.mul(a, s) == self.mul(a, t),
                Side::Left => self.mul(s, b) != self.mul(t, b) || self.mul(s, a) == self.mul(t, a),
            })
        })
    }

    /// Explicit relational annihilator of `a`. Quadratic in the order; meant for reports.
    pub fn annihilator_pairs(&self, a: Element, side: Side) -> Vec<AnnihilatorPair> {
        let mut out = Vec::new();
        for r in self.elements() {
            for s in self.elements() {
                let hit = match side {
                    Side::Right => self.mul(a, r) == self.mul(a, s),
                    Side::Left => self.mul(r, a) == self.mul(s, a),
                };
                if hit {
                    out.push(AnnihilatorPair { r, s });
                }
            }
        }
        out
    }

    /// Classical annihilator `{x : ax = 0}` (right) or `{x : xa = 0}` (left).
    pub fn ring_annihilator(&self, a: Element, side: Side) -> Result<Vec<Element>, MonoidError> {
        let zero = self.zero()?;
        Ok(self
            .elements()
            .filter(|&x| match side {
                Side::Right => self.mul(a, x) == zero,
                Side::Left => self.mul(x, a) == zero,
            })
            .collect())
    }

    /// All `x` with `axa = a`.
    pub fn inner_inverses(&self, a: Element) -> Vec<Element> {
        self.elements()
            .filter(|&x| self.mul(self.mul(a, x), a) == a)
            .collect()
    }

    pub fn is_regular(&self, a: Element) -> bool {
        self.elements().any(|x| self.mul(self.mul(a, x), a) == a)
    }

    pub fn is_idempotent(&self, e: Element) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// Natural partial order on idempotents: `e ≤ f` iff `e = ef = fe`.
    pub fn minus_leq(&self, e: Element, f: Element) -> Result<bool, MonoidError> {
        for x in [e, f] {
            if !self.is_idempotent(x) {
                return Err(MonoidError::NotIdempotent(x.0));
            }
        }
        Ok(self.mul(e, f) == e && self.mul(f, e) == e)
    }
}
