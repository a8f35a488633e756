use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::poly::{self, Polynomial};
use crate::tensor::{TensorField, TensorShape};

/// Christoffel symbols `Γ^l_ij` of an affine connection; no symmetry is assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    dim: usize,
    // row-major over (l, i, j)
    christoffel: Vec<Polynomial>,
}

/// One entry of a connection file, indices 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelEntry {
    pub upper: usize,
    pub lower: [usize; 2],
    pub poly: String,
}

/// On-disk form: `{"dim": 4, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "x3"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDocument {
    pub dim: usize,
    pub christoffel: Vec<ChristoffelEntry>,
}

impl Connection {
    /// The flat connection (all symbols zero).
    pub fn flat(dim: usize) -> Self {
        Connection {
            dim,
            christoffel: vec![Polynomial::zero(dim); dim * dim * dim],
        }
    }

    /// Builds a connection from a function of 0-based `(l, i, j)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Polynomial) -> Self {
        let mut christoffel = Vec::with_capacity(dim * dim * dim);
        for l in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    let p = f(l, i, j);
                    assert_eq!(p.dim(), dim, "christoffel symbol dimension");
                    christoffel.push(p);
                }
            }
        }
        Connection { dim, christoffel }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^l_ij` for 0-based indices.
    pub fn gamma(&self, l: usize, i: usize, j: usize) -> &Polynomial {
        &self.christoffel[(l * self.dim + i) * self.dim + j]
    }

    /// Sets `Γ^l_ij` (0-based indices).
    pub fn set_gamma(&mut self, l: usize, i: usize, j: usize, value: Polynomial) {
        assert_eq!(value.dim(), self.dim, "christoffel symbol dimension");
        let n = self.dim;
        self.christoffel[(l * n + i) * n + j] = value;
    }

    /// `Γ` as a `(2,1)` field with covariant slots `(i, j)` and contravariant `l`.
    pub fn christoffel_field(&self) -> TensorField {
        TensorField::from_fn(TensorShape::new(2, 1, self.dim), |c, u| {
            self.gamma(u[0], c[0], c[1]).clone()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|l| (0..n).all(|i| (0..i).all(|j| self.gamma(l, i, j) == self.gamma(l, j, i))))
    }

    /// Symmetrized connection `½(Γ^l_ij + Γ^l_ji)`.
    pub fn symmetrized(&self) -> Connection {
        let half = poly::rational(1, 2);
        Connection::from_fn(self.dim, |l, i, j| {
            (self.gamma(l, i, j) + self.gamma(l, j, i)).scale(&half)
        })
    }

    pub fn nonzero_entries(&self) -> usize {
        self.christoffel.iter().filter(|p| !p.is_zero()).count()
    }

    pub fn from_document(doc: &ConnectionDocument) -> Result<Self, GeometryError> {
        let n = doc.dim;
        if n < 2 {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        let mut conn = Connection::flat(n);
        let mut seen = vec![false; n * n * n];
        for (entry, e) in doc.christoffel.iter().enumerate() {
            let [i, j] = e.lower;
            if [e.upper, i, j].iter().any(|&x| x == 0 || x > n) {
                return Err(GeometryError::IndexOutOfRange { entry, dim: n });
            }
            let off = ((e.upper - 1) * n + (i - 1)) * n + (j - 1);
            if seen[off] {
                return Err(GeometryError::DuplicateEntry {
                    upper: e.upper,
                    lower: e.lower,
                });
            }
            seen[off] = true;
            let p = poly::parse(&e.poly, n).map_err(|source| GeometryError::EntryPoly {
                entry,
                upper: e.upper,
                lower: e.lower,
                source,
            })?;
            conn.christoffel[off] = p;
        }
        Ok(conn)
    }

    pub fn to_document(&self) -> ConnectionDocument {
        let n = self.dim;
        let mut christoffel = Vec::new();
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let p = self.gamma(l, i, j);
                    if !p.is_zero() {
                        christoffel.push(ChristoffelEntry {
                            upper: l + 1,
                            lower: [i + 1, j + 1],
                            poly: p.to_string(),
                        });
                    }
                }
            }
        }
        ConnectionDocument {
            dim: n,
            christoffel,
        }
    }

    /// Parses a connection file. JSON errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let doc: ConnectionDocument =
            serde_json::from_str(text).map_err(|e| GeometryError::Json(e.to_string()))?;
        Connection::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("connection documents serialize")
    }

    /// The test connection on ℝ⁴: `Γ¹₁₂ = x₃`, `Γ³₄₃ = x₁x₄`, `Γ³₃₁ = x₂x₄`.
    pub fn example() -> Self {
        Connection::from_json(EXAMPLE_CONNECTION).expect("bundled connection file is valid")
    }
}

/// Contents of `testdata/example_connection.json`.
pub const EXAMPLE_CONNECTION: &str = include_str!("../../../../testdata/example_connection.json");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_example_has_three_entries() {
        let c = Connection::example();
        assert_eq!(c.dim(), 4);
        assert_eq!(c.nonzero_entries(), 3);
        assert_eq!(c.gamma(0, 0, 1), &poly::parse("x3", 4).unwrap());
        assert_eq!(c.gamma(2, 3, 2), &poly::parse("x1*x4", 4).unwrap());
        assert_eq!(c.gamma(2, 2, 0), &poly::parse("x2*x4", 4).unwrap());
        assert_eq!(Connection::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_files() {
        let dup = r#"{"dim": 4, "christoffel": [
            {"upper": 1, "lower": [1, 2], "poly": "x3"},
            {"upper": 1, "lower": [1, 2], "poly": "x1"}]}"#;
        assert_eq!(
            Connection::from_json(dup),
            Err(GeometryError::DuplicateEntry {
                upper: 1,
                lower: [1, 2]
            })
        );
        let range = r#"{"dim": 2, "christoffel": [{"upper": 3, "lower": [1, 2], "poly": "1"}]}"#;
        assert!(matches!(
            Connection::from_json(range),
            Err(GeometryError::IndexOutOfRange { entry: 0, dim: 2 })
        ));
        let small = r#"{"dim": 1, "christoffel": []}"#;
        assert_eq!(
            Connection::from_json(small),
            Err(GeometryError::UnsupportedDimension(1))
        );
        let bad_poly =
            r#"{"dim": 2, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "x1 +"}]}"#;
        assert!(matches!(
            Connection::from_json(bad_poly),
            Err(GeometryError::EntryPoly { entry: 0, .. })
        ));
        let syntax = "{\"dim\": 2,\n \"christoffel\": [}";
        match Connection::from_json(syntax) {
            Err(GeometryError::Json(msg)) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"dim": 2, "christoffel": [], "extra": 1}"#;
        assert!(matches!(
            Connection::from_json(unknown),
            Err(GeometryError::Json(_))
        ));
    }
}
