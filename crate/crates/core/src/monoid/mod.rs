//! Finite *-monoids given by an explicit Cayley table and involution table.
//!
//! Every universe the exact engine works in is one of these: the
//! multiplicative monoid of `Z_n` with the identity involution, the full
//! matrix monoid `M_n(Z_m)` with transposition, or an arbitrary table read
//! from JSON. Construction validates associativity, the unity law and the
//! involution laws before anything else can observe the table.

mod json;
mod relations;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::MonoidDocument;
pub use relations::{AnnihilatorPair, ExtKind, GreenKind, Side};

/// Largest order for which [`FiniteStarMonoid::matrix`] will materialize a table.
///
/// Construction checks associativity over all triples, so the cost is cubic in
/// the order; `2^10` keeps that under a couple of seconds.
pub const MAX_GENERATED_ORDER: usize = 1 << 10;

/// Orders up to this bound get a precomputed table for the extended preorders.
const EXT_CACHE_LIMIT: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid order must be positive")]
    EmptyOrder,
    #[error("Z_n requires n >= 1")]
    ZeroModulus,
    #[error("matrix monoid M_{n}(Z_{modulus}) has {modulus}^{} elements, above the limit {limit}", n * n)]
    SizeBound {
        n: usize,
        modulus: usize,
        limit: usize,
    },
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("entry {value} at {location} is not an element index (order {order})")]
    IndexOutOfRange {
        location: String,
        value: usize,
        order: usize,
    },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("unity law fails at element {element}")]
    UnityLaw { element: usize },
    #[error("involution is not an involution at {element}: star(star(x)) != x")]
    NotInvolutive { element: usize },
    #[error("involution does not reverse the product of {a} and {b}")]
    NotAntiMultiplicative { a: usize, b: usize },
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    #[error("element index {id} out of range for a monoid of order {order}")]
    NoSuchElement { id: usize, order: usize },
    #[error("monoid {0} has no additive structure")]
    NoRingStructure(String),
    #[error("unknown universe descriptor {0:?} (expected zn:N, mat:N:M or file:PATH)")]
    BadDescriptor(String),
    #[error("monoid document: {0}")]
    Json(String),
}

/// An element of a [`FiniteStarMonoid`], stored as a dense index.
///
/// The index is only meaningful for the monoid that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(usize);

impl Element {
    pub const fn id(self) -> usize {
        self.0
    }

    #[cfg(test)]
    pub(crate) const fn new(id: usize) -> Self {
        Element(id)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Where a monoid came from. Used for reports and for decoding matrix elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Universe {
    Zn { n: usize },
    Matrix { n: usize, modulus: usize },
    Table,
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::Zn { n } => write!(f, "zn:{n}"),
            Universe::Matrix { n, modulus } => write!(f, "mat:{n}:{modulus}"),
            Universe::Table => f.write_str("table"),
        }
    }
}

/// Addition and negation tables for monoids that are the multiplicative part of a ring.
#[derive(Clone, Debug)]
struct RingTables {
    add: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
}

/// A finite monoid with an involution, stored as dense tables.
///
/// Immutable after construction. Principal one-sided ideals are precomputed so
/// that Green's preorders are O(1) lookups.
#[derive(Debug)]
pub struct FiniteStarMonoid {
    order: usize,
    cayley: Vec<usize>,
    star: Vec<usize>,
    unity: usize,
    universe: Universe,
    ring: Option<RingTables>,
    // in_right[b * order + a] <=> a ∈ bS
    in_right: Vec<bool>,
    // in_left[b * order + a] <=> a ∈ Sb
    in_left: Vec<bool>,
    ext: OnceLock<relations::ExtTables>,
}

impl Clone for FiniteStarMonoid {
    fn clone(&self) -> Self {
        FiniteStarMonoid {
            order: self.order,
            cayley: self.cayley.clone(),
            star: self.star.clone(),
            unity: self.unity,
            universe: self.universe.clone(),
            ring: self.ring.clone(),
            in_right: self.in_right.clone(),
            in_left: self.in_left.clone(),
            ext: OnceLock::new(),
        }
    }
}

impl FiniteStarMonoid {
    /// Builds and validates a monoid from a row-major Cayley table.
    pub fn from_tables(
        order: usize,
        cayley: Vec<usize>,
        star: Vec<usize>,
        unity: usize,
    ) -> Result<Self, MonoidError> {
        Self::build(order, cayley, star, unity, Universe::Table, None)
    }

    /// The multiplicative monoid of `Z_n` with the identity involution.
    pub fn zn(n: usize) -> Result<Self, MonoidError> {
        if n == 0 {
            return Err(MonoidError::ZeroModulus);
        }
        let mut cayley = Vec::with_capacity(n * n);
        let mut add = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                cayley.push(a * b % n);
                add.push((a + b) % n);
            }
        }
        let neg = (0..n).map(|a| (n - a) % n).collect();
        let ring = RingTables { add, neg, zero: 0 };
        // In Z_1 the unity is 0.
        Self::build(
            n,
            cayley,
            (0..n).collect(),
            1 % n,
            Universe::Zn { n },
            Some(ring),
        )
    }

    /// The full matrix monoid `M_n(Z_m)` with the transpose as involution.
    ///
    /// Element `i` is the matrix whose row-major entries are the base-`m`
    /// digits of `i`, least significant first. Index 0 is the zero matrix.
    pub fn matrix(n: usize, modulus: usize) -> Result<Self, MonoidError> {
        if n == 0 || modulus == 0 {
            return Err(MonoidError::EmptyOrder);
        }
        let cells = n * n;
        let order = (0..cells)
            .try_fold(1usize, |acc, _| acc.checked_mul(modulus))
            .filter(|&o| o <= MAX_GENERATED_ORDER)
            .ok_or(MonoidError::SizeBound {
                n,
                modulus,
                limit: MAX_GENERATED_ORDER,
            })?;

        let decoded: Vec<Vec<usize>> = (0..order)
            .map(|i| decode_digits(i, cells, modulus))
            .collect();
        let encode = |m: &[usize]| m.iter().rev().fold(0usize, |acc, &d| acc * modulus + d);

        let mut cayley = Vec::with_capacity(order * order);
        let mut prod = vec![0usize; cells];
        for x in &decoded {
            for y in &decoded {
                for r in 0..n {
                    for c in 0..n {
                        prod[r * n + c] =
                            (0..n).map(|j| x[r * n + j] * y[j * n + c]).sum::<usize>() % modulus;
                    }
                }
                cayley.push(encode(&prod));
            }
        }
        let star = decoded
            .iter()
            .map(|x| {
                let t: Vec<usize> = (0..cells).map(|i| x[(i % n) * n + i / n]).collect();
                encode(&t)
            })
            .collect();
        let mut identity = vec![0usize; cells];
        for i in 0..n {
            identity[i * n + i] = 1 % modulus;
        }
        let unity = encode(&identity);
        Self::build(
            order,
            cayley,
            star,
            unity,
            Universe::Matrix { n, modulus },
            None,
        )
    }

    /// Parses `zn:N`, `mat:N:M` or `file:PATH`.
    pub fn from_descriptor(desc: &str) -> Result<Self, MonoidError> {
        let bad = || MonoidError::BadDescriptor(desc.to_string());
        let parse = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = desc.splitn(2, ':').collect();
        match parts.as_slice() {
            ["zn", n] => Self::zn(parse(n)?),
            ["mat", rest] => {
                let (n, m) = rest.split_once(':').ok_or_else(bad)?;
                Self::matrix(parse(n)?, parse(m)?)
            }
            ["file", path] => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| MonoidError::Json(format!("{path}: {e}")))?;
                Self::from_json(&text)
            }
            _ => Err(bad()),
        }
    }

    fn build(
        order: usize,
        cayley: Vec<usize>,
        star: Vec<usize>,
        unity: usize,
        universe: Universe,
        ring: Option<RingTables>,
    ) -> Result<Self, MonoidError> {
        if order == 0 {
            return Err(MonoidError::EmptyOrder);
        }
        if cayley.len() != order * order {
            return Err(MonoidError::Shape(format!(
                "cayley table has {} entries, expected {}",
                cayley.len(),
                order * order
            )));
        }
        if star.len() != order {
            return Err(MonoidError::Shape(format!(
                "star table has {} entries, expected {order}",
                star.len()
            )));
        }
        if let Some((i, &v)) = cayley.iter().enumerate().find(|(_, &v)| v >= order) {
            return Err(MonoidError::IndexOutOfRange {
                location: format!("cayley[{}][{}]", i / order, i % order),
                value: v,
                order,
            });
        }
        if let Some((i, &v)) = star.iter().enumerate().find(|(_, &v)| v >= order) {
            return Err(MonoidError::IndexOutOfRange {
                location: format!("star[{i}]"),
                value: v,
                order,
            });
        }
        if unity >= order {
            return Err(MonoidError::IndexOutOfRange {
                location: "unity".into(),
                value: unity,
                order,
            });
        }

        let mul = |a: usize, b: usize| cayley[a * order + b];
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(MonoidError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        for a in 0..order {
            if mul(unity, a) != a || mul(a, unity) != a {
                return Err(MonoidError::UnityLaw { element: a });
            }
            if star[star[a]] != a {
                return Err(MonoidError::NotInvolutive { element: a });
            }
        }
        for a in 0..order {
            for b in 0..order {
                if star[mul(a, b)] != mul(star[b], star[a]) {
                    return Err(MonoidError::NotAntiMultiplicative { a, b });
                }
            }
        }

        let mut in_right = vec![false; order * order];
        let mut in_left = vec![false; order * order];
        for b in 0..order {
            for s in 0..order {
                in_right[b * order + mul(b, s)] = true;
                in_left[b * order + mul(s, b)] = true;
            }
        }

        Ok(FiniteStarMonoid {
            order,
            cayley,
            star,
            unity,
            universe,
            ring,
            in_right,
            in_left,
            ext: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn unity(&self) -> Element {
        Element(self.unity)
    }

    pub fn element(&self, id: usize) -> Result<Element, MonoidError> {
        if id < self.order {
            Ok(Element(id))
        } else {
            Err(MonoidError::NoSuchElement {
                id,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Element> + Clone + '_ {
        (0..self.order).map(Element)
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        Element(self.cayley[a.0 * self.order + b.0])
    }

    /// Left-to-right product of a sequence; the empty product is the unity.
    pub fn product<I: IntoIterator<Item = Element>>(&self, factors: I) -> Element {
        factors
            .into_iter()
            .fold(self.unity(), |acc, x| self.mul(acc, x))
    }

    #[inline]
    pub fn star(&self, a: Element) -> Element {
        Element(self.star[a.0])
    }

    pub fn pow(&self, a: Element, k: usize) -> Element {
        (0..k).fold(self.unity(), |acc, _| self.mul(acc, a))
    }

    /// `a ∈ bS`.
    #[inline]
    pub fn in_right_ideal(&self, a: Element, b: Element) -> bool {
        self.in_right[b.0 * self.order + a.0]
    }

    /// `a ∈ Sb`.
    #[inline]
    pub fn in_left_ideal(&self, a: Element, b: Element) -> bool {
        self.in_left[b.0 * self.order + a.0]
    }

    /// Units: elements with a two-sided inverse.
    pub fn unit_inverse(&self, a: Element) -> Option<Element> {
        let one = self.unity();
        self.elements()
            .find(|&v| self.mul(a, v) == one && self.mul(v, a) == one)
    }

    pub fn is_unit(&self, a: Element) -> bool {
        self.unit_inverse(a).is_some()
    }

    /// Dense copy of the Cayley table, row-major.
    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        self.cayley
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn star_table(&self) -> &[usize] {
        &self.star
    }

    pub fn has_ring_structure(&self) -> bool {
        self.ring.is_some()
    }

    fn ring(&self) -> Result<&RingTables, MonoidError> {
        self.ring
            .as_ref()
            .ok_or_else(|| MonoidError::NoRingStructure(self.universe.to_string()))
    }

    pub fn zero(&self) -> Result<Element, MonoidError> {
        Ok(Element(self.ring()?.zero))
    }

    pub fn add(&self, a: Element, b: Element) -> Result<Element, MonoidError> {
        let r = self.ring()?;
        Ok(Element(r.add[a.0 * self.order + b.0]))
    }

    pub fn neg(&self, a: Element) -> Result<Element, MonoidError> {
        Ok(Element(self.ring()?.neg[a.0]))
    }

    pub fn sub(&self, a: Element, b: Element) -> Result<Element, MonoidError> {
        self.add(a, self.neg(b)?)
    }

    /// Decodes a matrix-monoid element into its row-major entries.
    pub fn matrix_entries(&self, a: Element) -> Option<Vec<usize>> {
        match self.universe {
            Universe::Matrix { n, modulus } => Some(decode_digits(a.0, n * n, modulus)),
            _ => None,
        }
    }

    /// Inverse of [`matrix_entries`](Self::matrix_entries).
    pub fn matrix_element(&self, entries: &[usize]) -> Option<Element> {
        match self.universe {
            Universe::Matrix { n, modulus }
                if entries.len() == n * n && entries.iter().all(|&d| d < modulus) =>
            {
                Some(Element(
                    entries.iter().rev().fold(0, |acc, &d| acc * modulus + d),
                ))
            }
            _ => None,
        }
    }

    /// Human-readable name of an element: the residue for `Z_n`, the matrix
    /// rows for `M_n(Z_m)`, the index otherwise.
    pub fn describe(&self, a: Element) -> String {
        match self.universe {
            Universe::Matrix { n, .. } => {
                let e = self.matrix_entries(a).unwrap_or_default();
                let rows: Vec<String> = e
                    .chunks(n)
                    .map(|r| {
                        r.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("[{}]", rows.join("; "))
            }
            _ => a.0.to_string(),
        }
    }
}

fn decode_digits(mut i: usize, cells: usize, modulus: usize) -> Vec<usize> {
    (0..cells)
        .map(|_| {
            let d = i % modulus;
            i /= modulus;
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: &FiniteStarMonoid, i: usize) -> Element {
        m.element(i).unwrap()
    }

    #[test]
    fn z8_products_and_star() {
        let m = FiniteStarMonoid::zn(8).unwrap();
        assert_eq!(m.mul(e(&m, 2), e(&m, 3)), e(&m, 6));
        assert_eq!(m.star(e(&m, 5)), e(&m, 5));
        assert_eq!(m.unity(), e(&m, 1));
    }

    #[test]
    fn z2_order() {
        assert_eq!(FiniteStarMonoid::zn(2).unwrap().order(), 2);
    }

    #[test]
    fn zero_modulus_rejected() {
        assert_eq!(
            FiniteStarMonoid::zn(0).unwrap_err(),
            MonoidError::ZeroModulus
        );
    }

    #[test]
    fn trivial_monoid() {
        let m = FiniteStarMonoid::zn(1).unwrap();
        assert_eq!(m.order(), 1);
        assert_eq!(m.unity(), m.zero().unwrap());
    }

    #[test]
    fn matrix_orders() {
        assert_eq!(FiniteStarMonoid::matrix(2, 2).unwrap().order(), 16);
        assert_eq!(FiniteStarMonoid::matrix(2, 3).unwrap().order(), 81);
    }

    #[test]
    fn matrix_size_bound() {
        let err = FiniteStarMonoid::matrix(3, 3).unwrap_err();
        assert!(matches!(
            err,
            MonoidError::SizeBound {
                n: 3,
                modulus: 3,
                ..
            }
        ));
        assert!(FiniteStarMonoid::matrix(8, 8).is_err());
    }

    #[test]
    fn one_by_one_matrices_match_zn() {
        let a = FiniteStarMonoid::matrix(1, 8).unwrap();
        let b = FiniteStarMonoid::zn(8).unwrap();
        // Element i of M_1(Z_8) is the 1x1 matrix [i]; the identity map is an isomorphism.
        assert_eq!(a.cayley_rows(), b.cayley_rows());
        assert_eq!(a.star_table(), b.star_table());
        assert_eq!(a.unity(), b.unity());
    }

    #[test]
    fn transpose_is_the_involution() {
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        let x = m.matrix_element(&[0, 1, 0, 0]).unwrap();
        assert_eq!(m.matrix_entries(m.star(x)).unwrap(), vec![0, 0, 1, 0]);
        assert_eq!(m.describe(m.unity()), "[1 0; 0 1]");
    }

    #[test]
    fn invalid_tables_rejected() {
        // x*y = x (left-zero band) on two elements has no unity.
        let err = FiniteStarMonoid::from_tables(2, vec![0, 0, 1, 1], vec![0, 1], 0).unwrap_err();
        assert!(matches!(err, MonoidError::UnityLaw { .. }));

        // Z_3 with a star that swaps 1 and 2 breaks star(1) = 1.
        let z3: Vec<usize> = (0..9).map(|i| (i / 3) * (i % 3) % 3).collect();
        let err = FiniteStarMonoid::from_tables(3, z3.clone(), vec![0, 2, 1], 1).unwrap_err();
        assert!(matches!(err, MonoidError::NotAntiMultiplicative { .. }));

        let err = FiniteStarMonoid::from_tables(3, z3.clone(), vec![1, 1, 2], 1).unwrap_err();
        assert!(matches!(err, MonoidError::NotInvolutive { .. }));

        let err = FiniteStarMonoid::from_tables(3, z3, vec![0, 1, 7], 1).unwrap_err();
        assert!(matches!(err, MonoidError::IndexOutOfRange { .. }));

        // a*b = (a + 2b) mod 3 is not associative.
        let t: Vec<usize> = (0..9).map(|i| (i / 3 + 2 * (i % 3)) % 3).collect();
        let err = FiniteStarMonoid::from_tables(3, t, vec![0, 1, 2], 0).unwrap_err();
        assert!(matches!(err, MonoidError::NotAssociative { .. }));
    }

    #[test]
    fn ring_ops_only_on_zn() {
        let z = FiniteStarMonoid::zn(6).unwrap();
        assert_eq!(z.sub(e(&z, 2), e(&z, 5)).unwrap(), e(&z, 3));
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        assert!(matches!(m.zero(), Err(MonoidError::NoRingStructure(_))));
    }

    #[test]
    fn descriptors() {
        assert_eq!(
            FiniteStarMonoid::from_descriptor("zn:8").unwrap().order(),
            8
        );
        assert_eq!(
            FiniteStarMonoid::from_descriptor("mat:2:2")
                .unwrap()
                .order(),
            16
        );
        assert!(FiniteStarMonoid::from_descriptor("zn").is_err());
        assert!(FiniteStarMonoid::from_descriptor("foo:3").is_err());
    }

    #[test]
    fn units_of_z8() {
        let m = FiniteStarMonoid::zn(8).unwrap();
        let units: Vec<usize> = m
            .elements()
            .filter(|&a| m.is_unit(a))
            .map(Element::id)
            .collect();
        assert_eq!(units, vec![1, 3, 5, 7]);
    }
}
