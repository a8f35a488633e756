use crate::tensor::{TensorError, TensorField, TensorShape};

use super::GeometryError;

fn all_pairs(k: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 1..=k {
        for b in a + 1..=k {
            pairs.push((a, b));
        }
    }
    pairs
}

/// A vector-valued `k`-form: a `(k,1)` field alternating in all covariant slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorValuedForm {
    degree: usize,
    field: TensorField,
}

impl VectorValuedForm {
    pub fn new(field: TensorField) -> Result<Self, GeometryError> {
        let shape = field.shape();
        if shape.contravariant != 1 {
            return Err(GeometryError::WrongShape {
                expected: "a (k,1) field",
                found: shape,
            });
        }
        let degree = shape.covariant;
        let field = field.with_antisymmetry(&all_pairs(degree))?;
        Ok(VectorValuedForm { degree, field })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> &TensorField {
        &self.field
    }

    pub fn into_field(self) -> TensorField {
        self.field
    }

    pub fn try_sub(&self, other: &VectorValuedForm) -> Result<VectorValuedForm, TensorError> {
        Ok(VectorValuedForm {
            degree: self.degree,
            field: self.field.try_sub(&other.field)?,
        })
    }
}

/// An endomorphism-valued `k`-form: a `(k+1,1)` field with slots
/// `(form_1..form_k, endo-input; endo-output)`, alternating in the form slots only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndValuedForm {
    degree: usize,
    field: TensorField,
}

impl EndValuedForm {
    pub fn new(field: TensorField, degree: usize) -> Result<Self, GeometryError> {
        let shape = field.shape();
        if shape.contravariant != 1 || shape.covariant != degree + 1 {
            return Err(GeometryError::WrongShape {
                expected: "a (k+1,1) field",
                found: shape,
            });
        }
        let field = field.with_antisymmetry(&all_pairs(degree))?;
        Ok(EndValuedForm { degree, field })
    }

    /// Zero form of the given degree.
    pub fn zero(dim: usize, degree: usize) -> Self {
        EndValuedForm {
            degree,
            field: TensorField::zeros(TensorShape::new(degree + 1, 1, dim)),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> &TensorField {
        &self.field
    }

    pub fn into_field(self) -> TensorField {
        self.field
    }
}
