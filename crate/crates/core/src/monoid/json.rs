use serde::{Deserialize, Serialize};

use super::{FiniteStarMonoid, MonoidError};

/// Wire form of a monoid: `{"order": n, "cayley": [[...]], "star": [...], "unity": i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDocument {
    pub order: usize,
    pub cayley: Vec<Vec<usize>>,
    pub star: Vec<usize>,
    pub unity: usize,
}

impl FiniteStarMonoid {
    pub fn to_document(&self) -> MonoidDocument {
        MonoidDocument {
            order: self.order,
            cayley: self.cayley_rows(),
            star: self.star.clone(),
            unity: self.unity,
        }
    }

    pub fn from_document(doc: MonoidDocument) -> Result<Self, MonoidError> {
        if doc.cayley.len() != doc.order {
            return Err(MonoidError::Shape(format!(
                "cayley has {} rows, expected {}",
                doc.cayley.len(),
                doc.order
            )));
        }
        if let Some((i, row)) = doc
            .cayley
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != doc.order)
        {
            return Err(MonoidError::Shape(format!(
                "cayley row {i} has {} entries",
                row.len()
            )));
        }
        let flat = doc.cayley.into_iter().flatten().collect();
        Self::from_tables(doc.order, flat, doc.star, doc.unity)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("monoid document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MonoidError> {
        let doc: MonoidDocument =
            serde_json::from_str(text).map_err(|e| MonoidError::Json(e.to_string()))?;
        Self::from_document(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_document_literal() {
        let m = FiniteStarMonoid::zn(3).unwrap();
        assert_eq!(
            m.to_json(),
            r#"{"order":3,"cayley":[[0,0,0],[0,1,2],[0,2,1]],"star":[0,1,2],"unity":1}"#
        );
    }

    #[test]
    fn roundtrip_matrix_monoid() {
        let m = FiniteStarMonoid::matrix(2, 2).unwrap();
        let back = FiniteStarMonoid::from_json(&m.to_json()).unwrap();
        assert_eq!(back.cayley_rows(), m.cayley_rows());
        assert_eq!(back.star_table(), m.star_table());
        assert_eq!(back.unity(), m.unity());
    }

    #[test]
    fn ragged_and_malformed_documents() {
        let ragged = r#"{"order":2,"cayley":[[0,0],[0]],"star":[0,1],"unity":1}"#;
        assert!(matches!(
            FiniteStarMonoid::from_json(ragged),
            Err(MonoidError::Shape(_))
        ));
        assert!(matches!(
            FiniteStarMonoid::from_json("{"),
            Err(MonoidError::Json(_))
        ));
        let extra = r#"{"order":1,"cayley":[[0]],"star":[0],"unity":0,"x":1}"#;
        assert!(matches!(
            FiniteStarMonoid::from_json(extra),
            Err(MonoidError::Json(_))
        ));
    }
}
