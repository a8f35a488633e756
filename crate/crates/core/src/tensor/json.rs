//! JSON interchange format for tensor fields.
//!
//! ```json
//! {"shape": {"p": 2, "q": 1, "n": 4},
//!  "components": [{"cov": [1, 2], "contra": [1], "poly": "x3"}]}
//! ```
//!
//! Only nonzero components are listed, sorted by index tuple; indices are 1-based.

use serde::{Deserialize, Serialize};

use super::{TensorError, TensorField, TensorShape};
use crate::poly::{self, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorShapeDoc {
    pub p: usize,
    pub q: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorComponent {
    pub cov: Vec<usize>,
    pub contra: Vec<usize>,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorDocument {
    pub shape: TensorShapeDoc,
    pub components: Vec<TensorComponent>,
}

impl TensorDocument {
    pub fn from_field(field: &TensorField) -> Self {
        let shape = field.shape();
        let components = field
            .components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(flat, c)| {
                let idx: Vec<usize> = shape.multi_index(flat).iter().map(|i| i + 1).collect();
                TensorComponent {
                    cov: idx[..shape.covariant].to_vec(),
                    contra: idx[shape.covariant..].to_vec(),
                    poly: c.to_string(),
                }
            })
            .collect();
        TensorDocument {
            shape: TensorShapeDoc {
                p: shape.covariant,
                q: shape.contravariant,
                n: shape.dim,
            },
            components,
        }
    }

    pub fn to_field(&self) -> Result<TensorField, TensorError> {
        let shape = TensorShape::new(self.shape.p, self.shape.q, self.shape.n);
        if shape.dim == 0 {
            return Err(TensorError::Format("dimension must be positive".into()));
        }
        let mut comps = vec![Polynomial::zero(shape.dim); shape.len()];
        let mut seen = vec![false; shape.len()];
        for c in &self.components {
            if c.cov.len() != shape.covariant || c.contra.len() != shape.contravariant {
                return Err(TensorError::Format(format!(
                    "component {:?}/{:?} does not match shape {shape}",
                    c.cov, c.contra
                )));
            }
            let full: Vec<usize> = c.cov.iter().chain(&c.contra).copied().collect();
            if full.iter().any(|&i| i == 0 || i > shape.dim) {
                return Err(TensorError::IndexOutOfRange {
                    index: full,
                    dim: shape.dim,
                });
            }
            let zero_based: Vec<usize> = full.iter().map(|i| i - 1).collect();
            let off = shape.offset(&zero_based);
            if seen[off] {
                return Err(TensorError::DuplicateComponent(full));
            }
            seen[off] = true;
            comps[off] = poly::parse(&c.poly, shape.dim)?;
        }
        TensorField::from_components(shape, comps)
    }
}

impl TensorField {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TensorDocument::from_field(self))
            .expect("tensor documents serialize")
    }

    pub fn from_json(text: &str) -> Result<TensorField, TensorError> {
        let doc: TensorDocument =
            serde_json::from_str(text).map_err(|e| TensorError::Format(e.to_string()))?;
        doc.to_field()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_only_nonzero_sorted_components() {
        let f = TensorField::from_fn(TensorShape::new(2, 1, 3), |c, u| {
            if c == [1, 0] && u == [2] {
                poly::parse("x1 - 2", 3).unwrap()
            } else if c == [0, 2] && u == [0] {
                poly::parse("1/2*x3^2", 3).unwrap()
            } else {
                Polynomial::zero(3)
            }
        });
        let doc = TensorDocument::from_field(&f);
        assert_eq!(doc.components.len(), 2);
        assert_eq!(doc.components[0].cov, vec![1, 3]);
        assert_eq!(doc.components[0].contra, vec![1]);
        assert_eq!(doc.components[1].poly, "-2 + x1");
        assert_eq!(TensorField::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects_malformed_documents() {
        let dup = r#"{"shape":{"p":1,"q":0,"n":2},"components":[
            {"cov":[1],"contra":[],"poly":"x1"},{"cov":[1],"contra":[],"poly":"x2"}]}"#;
        assert!(matches!(
            TensorField::from_json(dup),
            Err(TensorError::DuplicateComponent(_))
        ));
        let range =
            r#"{"shape":{"p":1,"q":0,"n":2},"components":[{"cov":[3],"contra":[],"poly":"1"}]}"#;
        assert!(matches!(
            TensorField::from_json(range),
            Err(TensorError::IndexOutOfRange { .. })
        ));
        let bad_poly =
            r#"{"shape":{"p":1,"q":0,"n":2},"components":[{"cov":[1],"contra":[],"poly":"x3"}]}"#;
        assert!(matches!(
            TensorField::from_json(bad_poly),
            Err(TensorError::Poly(_))
        ));
        assert!(TensorField::from_json("{").is_err());
    }
}
