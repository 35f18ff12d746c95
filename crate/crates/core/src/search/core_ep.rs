use crate::monoid::{Element, FiniteStarMonoid, GreenKind};

use super::classical::i13_set;
use super::{IndexSetReport, InverseKind, InverseResult, KWitness, SearchError};

/// The products that appear in the `(b,c)`-core-EP system at a fixed `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Powers {
    pub k: usize,
    pub ca: Element,
    /// `(ca)^k`
    pub ca_k: Element,
    /// `(ca)^k b`
    pub kb: Element,
    /// `(ca)^k c`
    pub kc: Element,
    /// `((ca)^k c)*`
    pub kc_star: Element,
    /// `(ca)^{k+1} b`
    pub next_b: Element,
}

impl Powers {
    pub fn at(m: &FiniteStarMonoid, a: Element, b: Element, c: Element, k: usize) -> Self {
        let ca = m.mul(c, a);
        Self::from_power(m, b, c, ca, k, m.pow(ca, k))
    }

    /// `Powers` for `k = 0, 1, 2, ...`, computed incrementally.
    pub fn sequence<'m>(
        m: &'m FiniteStarMonoid,
        a: Element,
        b: Element,
        c: Element,
    ) -> impl Iterator<Item = Powers> + 'm {
        let ca = m.mul(c, a);
        (0..).scan(m.unity(), move |ca_k, k| {
            let p = Self::from_power(m, b, c, ca, k, *ca_k);
            *ca_k = m.mul(*ca_k, ca);
            Some(p)
        })
    }

    fn from_power(
        m: &FiniteStarMonoid,
        b: Element,
        c: Element,
        ca: Element,
        k: usize,
        ca_k: Element,
    ) -> Self {
        let kb = m.mul(ca_k, b);
        let kc = m.mul(ca_k, c);
        Powers {
            k,
            ca,
            ca_k,
            kb,
            kc,
            kc_star: m.star(kc),
            next_b: m.mul(ca, kb),
        }
    }
}

/// `2 · order`, the default upper end of every index scan.
pub fn default_k_max(m: &FiniteStarMonoid) -> usize {
    2 * m.order()
}

/// `(preperiod, period)` of the power sequence `x^0, x^1, ...`.
pub fn power_cycle(m: &FiniteStarMonoid, x: Element) -> (usize, usize) {
    let mut first_seen = vec![usize::MAX; m.order()];
    let mut p = m.unity();
    for k in 0.. {
        let seen = first_seen[p.id()];
        if seen != usize::MAX {
            return (seen, k - seen);
        }
        first_seen[p.id()] = k;
        p = m.mul(p, x);
    }
    unreachable!()
}

fn scan_complete(m: &FiniteStarMonoid, base: Element, k_max: usize) -> bool {
    let (pre, period) = power_cycle(m, base);
    k_max + 1 >= pre + period
}

/// The defining system at one `k`: `cax(ca)^k c = (ca)^k c`, `x R (ca)^k b`, `x L ((ca)^k c)*`.
pub fn is_bc_core_ep_witness(m: &FiniteStarMonoid, pw: &Powers, x: Element) -> bool {
    m.product([pw.ca, x, pw.kc]) == pw.kc
        && m.green_rel(x, pw.kb, GreenKind::R)
        && m.green_rel(x, pw.kc_star, GreenKind::L)
}

pub fn bc_core_ep_witnesses(m: &FiniteStarMonoid, pw: &Powers) -> Vec<Element> {
    m.elements()
        .filter(|&x| is_bc_core_ep_witness(m, pw, x))
        .collect()
}

fn collect_witnesses(
    m: &FiniteStarMonoid,
    a: Element,
    b: Element,
    c: Element,
    k_max: usize,
    per_k: impl Fn(&Powers) -> Vec<Element>,
) -> Vec<KWitness> {
    Powers::sequence(m, a, b, c)
        .take(k_max + 1)
        .flat_map(|pw| {
            per_k(&pw)
                .into_iter()
                .map(move |element| KWitness { k: pw.k, element })
        })
        .collect()
}

/// Scans `k = 0..=k_max` for the `(b,c)`-core-EP inverse of `a`.
pub fn find_bc_core_ep(
    m: &FiniteStarMonoid,
    a: Element,
    b: Element,
    c: Element,
    k_max: usize,
) -> IndexSetReport {
    let witnesses = collect_witnesses(m, a, b, c, k_max, |pw| bc_core_ep_witnesses(m, pw));
    let complete = scan_complete(m, m.mul(c, a), k_max);
    IndexSetReport::new(InverseKind::BcCoreEp, k_max, witnesses, complete)
}

/// The `(b,c)`-core inverse: `caxc = c`, `xS = bS`, `Sx = Sc*`.
pub fn find_bc_core(m: &FiniteStarMonoid, a: Element, b: Element, c: Element) -> InverseResult {
    let pw = Powers::at(m, a, b, c, 0);
    InverseResult::from_witnesses(InverseKind::BcCore, bc_core_ep_witnesses(m, &pw))
}

/// The `w`-core inverse: `xawa = a`, `awx² = x`, `(awx)* = awx`.
pub fn find_w_core(m: &FiniteStarMonoid, a: Element, w: Element) -> InverseResult {
    let aw = m.mul(a, w);
    let found = m
        .elements()
        .filter(|&x| {
            let awx = m.mul(aw, x);
            m.product([x, aw, a]) == a && m.mul(awx, x) == x && m.star(awx) == awx
        })
        .collect();
    InverseResult::from_witnesses(InverseKind::WCore, found)
}

/// Solutions at one `k` of `awx² = x`, `x(aw)^{k+1}a = (aw)^k a`, `(awx)* = awx`.
pub fn w_core_ep_witnesses(m: &FiniteStarMonoid, a: Element, w: Element, k: usize) -> Vec<Element> {
    let aw = m.mul(a, w);
    let rhs = m.mul(m.pow(aw, k), a);
    let lhs_tail = m.mul(aw, rhs);
    m.elements()
        .filter(|&x| {
            let awx = m.mul(aw, x);
            m.mul(awx, x) == x && m.mul(x, lhs_tail) == rhs && m.star(awx) == awx
        })
        .collect()
}

pub fn find_w_core_ep(
    m: &FiniteStarMonoid,
    a: Element,
    w: Element,
    k_max: usize,
) -> IndexSetReport {
    let witnesses = (0..=k_max)
        .flat_map(|k| {
            w_core_ep_witnesses(m, a, w, k)
                .into_iter()
                .map(move |element| KWitness { k, element })
        })
        .collect();
    let complete = scan_complete(m, m.mul(a, w), k_max);
    IndexSetReport::new(InverseKind::WCoreEp, k_max, witnesses, complete)
}

/// The core inverse, i.e. the `1`-core inverse.
pub fn find_core(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    find_w_core(m, a, m.unity())
}

/// The core-EP inverse, i.e. the `(1,1)`-core-EP inverse.
pub fn find_core_ep(m: &FiniteStarMonoid, a: Element, k_max: usize) -> IndexSetReport {
    find_bc_core_ep(m, a, m.unity(), m.unity(), k_max)
}

/// The dual system at one `k`: `(ca)^k b = (ca)^k b·y·ab`, `yS = ((ca)^k b)*S`, `Sy = S(ca)^k c`.
pub fn is_dual_witness(
    m: &FiniteStarMonoid,
    a: Element,
    b: Element,
    pw: &Powers,
    y: Element,
) -> bool {
    m.product([pw.kb, y, a, b]) == pw.kb
        && m.green_rel(y, m.star(pw.kb), GreenKind::R)
        && m.green_rel(y, pw.kc, GreenKind::L)
}

pub fn dual_witnesses(m: &FiniteStarMonoid, a: Element, b: Element, pw: &Powers) -> Vec<Element> {
    m.elements()
        .filter(|&y| is_dual_witness(m, a, b, pw, y))
        .collect()
}

pub fn find_dual_bc_core_ep(
    m: &FiniteStarMonoid,
    a: Element,
    b: Element,
    c: Element,
    k_max: usize,
) -> IndexSetReport {
    let witnesses = collect_witnesses(m, a, b, c, k_max, |pw| dual_witnesses(m, a, b, pw));
    let complete = scan_complete(m, m.mul(c, a), k_max);
    IndexSetReport::new(InverseKind::DualBcCoreEp, k_max, witnesses, complete)
}

/// Unit-regularity of the `w`-core inverse in a ring.
///
/// True iff, for every `{1,3}`-inverse of `a`, `u = aw + 1 - a·a^{(1,3)}` is a
/// unit, and the `w`-core inverse of `a` has an inner inverse that is a unit.
pub fn unit_regular_check(
    m: &FiniteStarMonoid,
    a: Element,
    w: Element,
) -> Result<bool, SearchError> {
    // Fail on non-ring tables before doing any work.
    m.zero()?;
    let x = find_w_core(m, a, w)
        .witness
        .ok_or(SearchError::NotWCoreInvertible { element: a, w })?;
    let aw = m.mul(a, w);
    let one_plus_aw = m.add(aw, m.unity())?;
    let mut units_ok = true;
    for a13 in i13_set(m, a) {
        let u = m.sub(one_plus_aw, m.mul(a, a13))?;
        units_ok &= m.is_unit(u);
    }
    let unit_inner = m
        .elements()
        .any(|v| m.is_unit(v) && m.product([x, v, x]) == x);
    Ok(units_ok && unit_inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::InverseStatus;

    fn z8() -> FiniteStarMonoid {
        FiniteStarMonoid::zn(8).unwrap()
    }

    fn e(m: &FiniteStarMonoid, i: usize) -> Element {
        m.element(i).unwrap()
    }

    #[test]
    fn z8_worked_example() {
        let m = z8();
        let r = find_bc_core_ep(&m, e(&m, 1), e(&m, 1), e(&m, 2), 10);
        assert_eq!(r.members, (3..=10).collect::<Vec<_>>());
        assert_eq!(r.index, Some(3));
        assert_eq!(r.inverse, Some(e(&m, 0)));
        assert_eq!(r.status, InverseStatus::Exists);

        let r = find_bc_core_ep(&m, e(&m, 1), e(&m, 2), e(&m, 2), 10);
        assert_eq!(r.members, (2..=10).collect::<Vec<_>>());
        assert_eq!(r.index, Some(2));
    }

    #[test]
    fn unity_triple_admits_every_k() {
        let m = z8();
        let one = m.unity();
        let r = find_bc_core_ep(&m, one, one, one, 2);
        assert_eq!(r.members, vec![0, 1, 2]);
        assert_eq!(r.inverse, Some(one));
        assert_eq!(r.distinct_inverses(), vec![one]);
    }

    #[test]
    fn w_core_z8() {
        let m = z8();
        let one = m.unity();
        assert_eq!(find_w_core(&m, one, one).witness, Some(one));
        let r = find_w_core_ep(&m, e(&m, 2), one, 10);
        assert_eq!(r.members, (2..=10).collect::<Vec<_>>());
        assert!(!find_w_core(&m, e(&m, 2), one).exists());
    }

    #[test]
    fn core_and_core_ep_z8() {
        let m = z8();
        assert_eq!(find_core(&m, m.unity()).witness, Some(m.unity()));
        assert_eq!(find_core(&m, e(&m, 3)).witness, Some(e(&m, 3)));
        // 2 is nilpotent of index 3, so the (1,1)-scan starts at 3.
        let r = find_core_ep(&m, e(&m, 2), 10);
        assert_eq!(r.members, (3..=10).collect::<Vec<_>>());
        assert_eq!(r.inverse, Some(e(&m, 0)));
    }

    #[test]
    fn dual_z8() {
        let m = z8();
        let one = m.unity();
        let r = find_dual_bc_core_ep(&m, one, one, one, 0);
        assert_eq!(r.members, vec![0]);
        assert_eq!(r.inverse, Some(one));

        let r = find_dual_bc_core_ep(&m, e(&m, 3), one, one, 0);
        assert_eq!(r.inverse, Some(e(&m, 3)));

        let (a, b, c) = (one, one, e(&m, 2));
        let r = find_dual_bc_core_ep(&m, a, b, c, 10);
        for w in &r.witnesses {
            let pw = Powers::at(&m, a, b, c, w.k);
            assert!(is_dual_witness(&m, a, b, &pw, w.element));
        }
    }

    #[test]
    fn status_reflects_completeness() {
        let m = z8();
        let (one, two) = (m.unity(), e(&m, 2));
        // ca = 2 has preperiod 3 and period 1: k_max = 2 does not reach the cycle.
        assert_eq!(power_cycle(&m, two), (3, 1));
        let r = find_bc_core_ep(&m, one, one, two, 2);
        assert_eq!(r.status, InverseStatus::NotDetermined);
        // ca = 1, b = 2: x R 2 rules out units while x L 1 forces one, at every k.
        let r = find_bc_core_ep(&m, one, two, one, default_k_max(&m));
        assert_eq!(r.status, InverseStatus::NotExists);
        assert_eq!(power_cycle(&m, e(&m, 3)), (0, 2));
    }

    #[test]
    fn unit_regularity() {
        let m = z8();
        let one = m.unity();
        assert!(unit_regular_check(&m, one, one).unwrap());
        assert!(unit_regular_check(&m, e(&m, 3), one).unwrap());
        assert!(matches!(
            unit_regular_check(&m, e(&m, 2), one),
            Err(SearchError::NotWCoreInvertible { .. })
        ));
        let mat = FiniteStarMonoid::matrix(2, 2).unwrap();
        let u = mat.unity();
        assert!(matches!(
            unit_regular_check(&mat, u, u),
            Err(SearchError::Monoid(_))
        ));
    }

    #[test]
    fn powers_sequence_matches_direct() {
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        let (a, b, c) = (e(&m, 5), e(&m, 9), e(&m, 6));
        for pw in Powers::sequence(&m, a, b, c).take(6) {
            assert_eq!(pw, Powers::at(&m, a, b, c, pw.k));
        }
    }
}
