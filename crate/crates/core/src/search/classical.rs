use crate::monoid::{Element, FiniteStarMonoid, GreenKind, Side};

use super::{InverseKind, InverseResult};

fn is_hermitian(m: &FiniteStarMonoid, x: Element) -> bool {
    m.star(x) == x
}

/// All `{1,3}`-inverses: `axa = a` and `(ax)* = ax`.
pub fn i13_set(m: &FiniteStarMonoid, a: Element) -> Vec<Element> {
    m.elements()
        .filter(|&x| {
            let ax = m.mul(a, x);
            m.mul(ax, a) == a && is_hermitian(m, ax)
        })
        .collect()
}

/// All `{1,4}`-inverses: `axa = a` and `(xa)* = xa`.
pub fn i14_set(m: &FiniteStarMonoid, a: Element) -> Vec<Element> {
    m.elements()
        .filter(|&x| m.mul(m.mul(a, x), a) == a && is_hermitian(m, m.mul(x, a)))
        .collect()
}

pub fn find_i13(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    InverseResult::from_witnesses(InverseKind::OneThree, i13_set(m, a))
}

pub fn find_i14(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    InverseResult::from_witnesses(InverseKind::OneFour, i14_set(m, a))
}

pub fn find_mp(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    let found = m
        .elements()
        .filter(|&x| {
            let ax = m.mul(a, x);
            let xa = m.mul(x, a);
            m.mul(ax, a) == a && m.mul(xa, x) == x && is_hermitian(m, ax) && is_hermitian(m, xa)
        })
        .collect();
    InverseResult::from_witnesses(InverseKind::MoorePenrose, found)
}

pub fn find_group(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    let found = m
        .elements()
        .filter(|&x| {
            let ax = m.mul(a, x);
            ax == m.mul(x, a) && m.mul(ax, a) == a && m.mul(m.mul(x, a), x) == x
        })
        .collect();
    InverseResult::from_witnesses(InverseKind::Group, found)
}

/// Drazin inverse: `xax = x`, `ax = xa` and `a^{k+1}x = a^k` for some `k`.
///
/// Powers repeat within `order` steps, so `k ≤ order` is exhaustive.
pub fn find_drazin(m: &FiniteStarMonoid, a: Element) -> InverseResult {
    let found = m
        .elements()
        .filter(|&x| {
            let ax = m.mul(a, x);
            ax == m.mul(x, a)
                && m.mul(m.mul(x, a), x) == x
                && (0..=m.order()).any(|k| {
                    let ak = m.pow(a, k);
                    m.mul(m.mul(ak, a), x) == ak
                })
        })
        .collect();
    InverseResult::from_witnesses(InverseKind::Drazin, found)
}

/// Inverse of `a` along `d`: `bad = d = dab` with `b ≤_H d`.
pub fn find_along(m: &FiniteStarMonoid, a: Element, d: Element) -> InverseResult {
    let found = m
        .elements()
        .filter(|&b| {
            m.product([b, a, d]) == d
                && m.product([d, a, b]) == d
                && m.green_leq(b, d, GreenKind::H)
        })
        .collect();
    InverseResult::from_witnesses(InverseKind::AlongD, found)
}

/// `y ∈ bSy`.
pub fn in_bsy(m: &FiniteStarMonoid, y: Element, b: Element) -> bool {
    m.elements().any(|s| m.product([b, s, y]) == y)
}

/// `y ∈ ySc`.
pub fn in_ysc(m: &FiniteStarMonoid, y: Element, c: Element) -> bool {
    m.elements().any(|s| m.product([y, s, c]) == y)
}

/// Drazin's `(b,c)`-inverse, straight from the definition:
/// `y ∈ bSy ∩ ySc`, `yab = b`, `cay = c`.
pub fn find_bc(m: &FiniteStarMonoid, a: Element, b: Element, c: Element) -> InverseResult {
    let ab = m.mul(a, b);
    let ca = m.mul(c, a);
    let found = m
        .elements()
        .filter(|&y| m.mul(y, ab) == b && m.mul(ca, y) == c && in_bsy(m, y, b) && in_ysc(m, y, c))
        .collect();
    InverseResult::from_witnesses(InverseKind::Bc, found)
}

/// One-sided `(b,c)`-inverses. Left: `x ∈ Sc` with `xab = b`. Right: `x ∈ bS` with `cax = c`.
pub fn find_bc_one_sided(
    m: &FiniteStarMonoid,
    a: Element,
    b: Element,
    c: Element,
    side: Side,
) -> InverseResult {
    let (kind, found) = match side {
        Side::Left => {
            let ab = m.mul(a, b);
            let found = m
                .elements()
                .filter(|&x| m.in_left_ideal(x, c) && m.mul(x, ab) == b)
                .collect();
            (InverseKind::BcLeft, found)
        }
        Side::Right => {
            let ca = m.mul(c, a);
            let found = m
                .elements()
                .filter(|&x| m.in_right_ideal(x, b) && m.mul(ca, x) == c)
                .collect();
            (InverseKind::BcRight, found)
        }
    };
    InverseResult::from_witnesses(kind, found)
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
    fn moore_penrose_z8() {
        let m = z8();
        let r = find_mp(&m, e(&m, 3));
        assert_eq!(r.status, InverseStatus::Exists);
        assert_eq!(r.witness, Some(e(&m, 3)));
        assert_eq!(r.witnesses, None);
        assert_eq!(find_mp(&m, m.unity()).witness, Some(m.unity()));
    }

    #[test]
    fn one_three_needs_regularity() {
        let m = z8();
        assert_eq!(find_i13(&m, e(&m, 2)).status, InverseStatus::NotExists);
        // 0 has every element as a {1,3}-inverse under the identity involution.
        assert_eq!(find_i13(&m, e(&m, 0)).all().len(), 8);
        assert_eq!(find_i14(&m, e(&m, 5)).all(), vec![e(&m, 5)]);
    }

    #[test]
    fn bc_inverse_z8() {
        let m = z8();
        let (one, two, three) = (e(&m, 1), e(&m, 2), e(&m, 3));
        assert_eq!(find_bc(&m, three, one, one).witness, Some(three));
        assert_eq!(find_bc(&m, one, one, two).status, InverseStatus::NotExists);
        assert_eq!(find_bc(&m, one, one, one).witness, Some(one));
    }

    #[test]
    fn one_sided_bc_z8() {
        let m = z8();
        let (one, two) = (e(&m, 1), e(&m, 2));
        // b = 1 ∉ S·2·1: no left inverse; c = 2 ∈ 2·1·S: right inverses exist.
        assert!(!find_bc_one_sided(&m, one, one, two, Side::Left).exists());
        let right = find_bc_one_sided(&m, one, one, two, Side::Right);
        assert!(right.exists());
        assert!(right.all().iter().all(|&x| m.mul(two, x) == two));
    }

    #[test]
    fn along_z8() {
        let m = z8();
        assert_eq!(
            find_along(&m, m.unity(), m.unity()).witness,
            Some(m.unity())
        );
        assert_eq!(find_along(&m, e(&m, 3), e(&m, 1)).witness, Some(e(&m, 3)));
        assert!(!find_along(&m, e(&m, 2), e(&m, 2)).exists());
    }

    #[test]
    fn group_and_drazin_z8() {
        let m = z8();
        assert!(!find_group(&m, e(&m, 2)).exists());
        assert_eq!(find_group(&m, e(&m, 5)).witness, Some(e(&m, 5)));
        // 2 is nilpotent, so its Drazin inverse is 0.
        assert_eq!(find_drazin(&m, e(&m, 2)).witness, Some(e(&m, 0)));
    }

    #[test]
    fn group_inverse_is_inverse_along_itself() {
        for n in 1..=12 {
            let m = FiniteStarMonoid::zn(n).unwrap();
            for a in m.elements() {
                assert_eq!(
                    find_group(&m, a).witness,
                    find_along(&m, a, a).witness,
                    "Z_{n}, a = {a}"
                );
                assert_eq!(
                    find_along(&m, a, a).witness,
                    find_bc(&m, a, a, a).witness,
                    "Z_{n}, a = {a}"
                );
            }
        }
    }
}
