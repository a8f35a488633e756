//! Dense `(p, q)` tensor fields with polynomial components.
//!
//! Components are stored in one flat row-major array over the `p + q` indices,
//! covariant indices first, each running over `0..n`. Slot numbers in the
//! public API (`contract`, `permute_covariant`, `antisymmetrize_pair`, ...) are
//! 1-based; coordinate values passed to [`TensorField::get`] and
//! [`TensorField::from_fn`] are 0-based.

mod json;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{PolyError, Polynomial, Rational};

pub use json::{TensorComponent, TensorDocument, TensorShapeDoc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch {
        expected: TensorShape,
        found: TensorShape,
    },
    #[error("{kind} slot {slot} out of range 1..={count}")]
    SlotOutOfRange {
        kind: SlotKind,
        slot: usize,
        count: usize,
    },
    #[error("{0:?} is not a permutation of 1..={1}")]
    NotAPermutation(Vec<usize>, usize),
    #[error("antisymmetrization needs two distinct slots, got {0} twice")]
    RepeatedSlot(usize),
    #[error("field is not antisymmetric in covariant slots ({0}, {1})")]
    AntisymmetryViolated(usize, usize),
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error("index {index:?} out of range for dimension {dim}")]
    IndexOutOfRange { index: Vec<usize>, dim: usize },
    #[error("duplicate component {0:?}")]
    DuplicateComponent(Vec<usize>),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("malformed tensor document: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    Covariant,
    Contravariant,
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotKind::Covariant => write!(f, "covariant"),
            SlotKind::Contravariant => write!(f, "contravariant"),
        }
    }
}

/// Type `(p, q)` of a tensor over an `n`-dimensional chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorShape {
    pub covariant: usize,
    pub contravariant: usize,
    pub dim: usize,
}

impl fmt::Display for TensorShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}) over n={}",
            self.covariant, self.contravariant, self.dim
        )
    }
}

impl TensorShape {
    pub fn new(covariant: usize, contravariant: usize, dim: usize) -> Self {
        TensorShape {
            covariant,
            contravariant,
            dim,
        }
    }

    pub fn order(&self) -> usize {
        self.covariant + self.contravariant
    }

    pub fn len(&self) -> usize {
        self.dim.pow(self.order() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat offset of a full multi-index (covariant indices then contravariant).
    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.order());
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Inverse of [`offset`](Self::offset).
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.order()];
        for slot in out.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        out
    }

    fn check_slot(&self, kind: SlotKind, slot: usize) -> Result<usize, TensorError> {
        let count = match kind {
            SlotKind::Covariant => self.covariant,
            SlotKind::Contravariant => self.contravariant,
        };
        if slot == 0 || slot > count {
            return Err(TensorError::SlotOutOfRange { kind, slot, count });
        }
        Ok(slot - 1)
    }
}

/// A tensor field with polynomial components and optional antisymmetry metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorField {
    shape: TensorShape,
    components: Vec<Polynomial>,
    antisym_pairs: Vec<(usize, usize)>,
}

impl TensorField {
    pub fn zeros(shape: TensorShape) -> Self {
        TensorField {
            shape,
            components: vec![Polynomial::zero(shape.dim); shape.len()],
            antisym_pairs: Vec::new(),
        }
    }

    /// Builds a field from a function of the (0-based) covariant and contravariant indices.
    pub fn from_fn<F>(shape: TensorShape, mut f: F) -> Self
    where
        F: FnMut(&[usize], &[usize]) -> Polynomial,
    {
        let p = shape.covariant;
        let components = (0..shape.len())
            .map(|flat| {
                let idx = shape.multi_index(flat);
                let c = f(&idx[..p], &idx[p..]);
                debug_assert_eq!(c.dim(), shape.dim);
                c
            })
            .collect();
        TensorField {
            shape,
            components,
            antisym_pairs: Vec::new(),
        }
    }

    pub fn from_components(
        shape: TensorShape,
        components: Vec<Polynomial>,
    ) -> Result<Self, TensorError> {
        if components.len() != shape.len() {
            return Err(TensorError::ComponentCount {
                expected: shape.len(),
                found: components.len(),
            });
        }
        if let Some(c) = components.iter().find(|c| c.dim() != shape.dim) {
            return Err(TensorError::DimensionMismatch {
                left: shape.dim,
                right: c.dim(),
            });
        }
        Ok(TensorField {
            shape,
            components,
            antisym_pairs: Vec::new(),
        })
    }

    pub fn scalar(value: Polynomial) -> Self {
        let shape = TensorShape::new(0, 0, value.dim());
        TensorField {
            shape,
            components: vec![value],
            antisym_pairs: Vec::new(),
        }
    }

    /// The Kronecker delta as a `(1,1)` field.
    pub fn kronecker(dim: usize) -> Self {
        TensorField::from_fn(TensorShape::new(1, 1, dim), |a, b| {
            if a[0] == b[0] {
                Polynomial::one(dim)
            } else {
                Polynomial::zero(dim)
            }
        })
    }

    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    /// Component at 0-based covariant and contravariant indices.
    pub fn get(&self, cov: &[usize], contra: &[usize]) -> &Polynomial {
        assert_eq!(cov.len(), self.shape.covariant, "covariant index length");
        assert_eq!(
            contra.len(),
            self.shape.contravariant,
            "contravariant index length"
        );
        let off = cov
            .iter()
            .chain(contra)
            .fold(0, |acc, &i| acc * self.shape.dim + i);
        &self.components[off]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.components.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn antisym_pairs(&self) -> &[(usize, usize)] {
        &self.antisym_pairs
    }

    /// Declares antisymmetry in the given 1-based covariant slot pairs, checking each exactly.
    pub fn with_antisymmetry(mut self, pairs: &[(usize, usize)]) -> Result<Self, TensorError> {
        for &(a, b) in pairs {
            if !self.is_antisymmetric(a, b)? {
                return Err(TensorError::AntisymmetryViolated(a, b));
            }
            let pair = (a.min(b), a.max(b));
            if !self.antisym_pairs.contains(&pair) {
                self.antisym_pairs.push(pair);
            }
        }
        self.antisym_pairs.sort_unstable();
        Ok(self)
    }

    /// Re-checks every declared antisymmetric pair.
    pub fn validate_antisymmetry(&self) -> Result<(), TensorError> {
        for &(a, b) in &self.antisym_pairs {
            if !self.is_antisymmetric(a, b)? {
                return Err(TensorError::AntisymmetryViolated(a, b));
            }
        }
        Ok(())
    }

    pub fn is_antisymmetric(&self, s1: usize, s2: usize) -> Result<bool, TensorError> {
        let swapped = self.swap_covariant(s1, s2)?;
        Ok(self
            .components
            .iter()
            .zip(&swapped.components)
            .all(|(a, b)| (a + b).is_zero()))
    }

    fn check_shape(&self, other: &TensorField) -> Result<(), TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch {
                expected: self.shape,
                found: other.shape,
            });
        }
        Ok(())
    }

    /// Componentwise equality of canonical polynomials.
    pub fn equal(&self, other: &TensorField) -> Result<bool, TensorError> {
        self.check_shape(other)?;
        Ok(self.components == other.components)
    }

    fn common_pairs(&self, other: &TensorField) -> Vec<(usize, usize)> {
        self.antisym_pairs
            .iter()
            .filter(|p| other.antisym_pairs.contains(p))
            .copied()
            .collect()
    }

    pub fn try_add(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.check_shape(other)?;
        Ok(TensorField {
            shape: self.shape,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
            antisym_pairs: self.common_pairs(other),
        })
    }

    pub fn try_sub(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        self.check_shape(other)?;
        Ok(TensorField {
            shape: self.shape,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
            antisym_pairs: self.common_pairs(other),
        })
    }

    pub fn scale(&self, c: &Rational) -> TensorField {
        TensorField {
            shape: self.shape,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
            antisym_pairs: if c.is_zero() {
                Vec::new()
            } else {
                self.antisym_pairs.clone()
            },
        }
    }

    pub fn neg(&self) -> TensorField {
        TensorField {
            shape: self.shape,
            components: self.components.iter().map(|p| -p).collect(),
            antisym_pairs: self.antisym_pairs.clone(),
        }
    }

    /// `Σ c_i · f_i` over fields of a common shape.
    pub fn linear_combination(
        terms: &[(Rational, &TensorField)],
    ) -> Result<TensorField, TensorError> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| TensorError::Format("linear combination of zero fields".to_string()))?;
        let mut out = TensorField::zeros(first.shape);
        for (c, f) in terms {
            out.check_shape(f)?;
            for (acc, v) in out.components.iter_mut().zip(&f.components) {
                acc.add_scaled(c, v);
            }
        }
        Ok(out)
    }

    /// `a ⊗ b`: shape `(p1+p2, q1+q2)`, with `a`'s slots before `b`'s in each group.
    pub fn tensor_product(&self, other: &TensorField) -> Result<TensorField, TensorError> {
        if self.dim() != other.dim() {
            return Err(TensorError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let (pa, qa) = (self.shape.covariant, self.shape.contravariant);
        let (pb, qb) = (other.shape.covariant, other.shape.contravariant);
        let shape = TensorShape::new(pa + pb, qa + qb, self.dim());
        let out = TensorField::from_fn(shape, |cov, contra| {
            let a = self.get(&cov[..pa], &contra[..qa]);
            if a.is_zero() {
                return Polynomial::zero(shape.dim);
            }
            let b = other.get(&cov[pa..], &contra[qa..]);
            a * b
        });
        debug_assert_eq!(out.shape.contravariant, qa + qb);
        Ok(out)
    }

    /// Contracts a covariant slot against a contravariant slot (both 1-based).
    pub fn contract(
        &self,
        cov_slot: usize,
        contra_slot: usize,
    ) -> Result<TensorField, TensorError> {
        let ci = self.shape.check_slot(SlotKind::Covariant, cov_slot)?;
        let ui = self
            .shape
            .check_slot(SlotKind::Contravariant, contra_slot)?;
        let n = self.dim();
        let shape = TensorShape::new(self.shape.covariant - 1, self.shape.contravariant - 1, n);
        let mut cov_full = vec![0; self.shape.covariant];
        let mut contra_full = vec![0; self.shape.contravariant];
        Ok(TensorField::from_fn(shape, |cov, contra| {
            let mut acc = Polynomial::zero(n);
            for m in 0..n {
                splice(&mut cov_full, cov, ci, m);
                splice(&mut contra_full, contra, ui, m);
                let c = self.get(&cov_full, &contra_full);
                if !c.is_zero() {
                    acc = &acc + c;
                }
            }
            acc
        }))
    }

    /// Reindexes covariant slots: `out[i_1..i_p] = a[i_{perm(1)}..i_{perm(p)}]` (1-based `perm`).
    ///
    /// So `perm = [2, 3, 1]` turns `C_{ijk}` into the field with components `C_{jki}`.
    pub fn permute_covariant(&self, perm: &[usize]) -> Result<TensorField, TensorError> {
        let p = self.shape.covariant;
        let perm0 = check_permutation(perm, p)?;
        let shape = self.shape;
        let mut src = vec![0; p];
        let mut out = TensorField::from_fn(shape, |cov, contra| {
            for (s, &from) in perm0.iter().enumerate() {
                src[s] = cov[from];
            }
            self.get(&src, contra).clone()
        });
        // input slot s is fed by output slot perm(s)
        out.antisym_pairs = self
            .antisym_pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm0[a - 1] + 1, perm0[b - 1] + 1);
                (x.min(y), x.max(y))
            })
            .collect();
        out.antisym_pairs.sort_unstable();
        Ok(out)
    }

    /// Same convention as [`permute_covariant`](Self::permute_covariant), on contravariant slots.
    pub fn permute_contravariant(&self, perm: &[usize]) -> Result<TensorField, TensorError> {
        let q = self.shape.contravariant;
        let perm0 = check_permutation(perm, q)?;
        let mut src = vec![0; q];
        let mut out = TensorField::from_fn(self.shape, |cov, contra| {
            for (s, &from) in perm0.iter().enumerate() {
                src[s] = contra[from];
            }
            self.get(cov, &src).clone()
        });
        out.antisym_pairs = self.antisym_pairs.clone();
        Ok(out)
    }

    fn swap_covariant(&self, s1: usize, s2: usize) -> Result<TensorField, TensorError> {
        self.shape.check_slot(SlotKind::Covariant, s1)?;
        self.shape.check_slot(SlotKind::Covariant, s2)?;
        let mut perm: Vec<usize> = (1..=self.shape.covariant).collect();
        perm.swap(s1 - 1, s2 - 1);
        self.permute_covariant(&perm)
    }

    /// `a ⊗ δ ⊗ ... ⊗ δ` with `r` Kronecker factors appended.
    pub fn insert_delta(&self, r: usize) -> TensorField {
        let delta = TensorField::kronecker(self.dim());
        let mut out = self.clone();
        for _ in 0..r {
            out = out
                .tensor_product(&delta)
                .expect("kronecker shares dimension");
        }
        out.antisym_pairs = self.antisym_pairs.clone();
        out
    }

    /// `a - a∘swap(s1, s2)`, with no factor of one half.
    pub fn antisymmetrize_pair(&self, s1: usize, s2: usize) -> Result<TensorField, TensorError> {
        if s1 == s2 {
            self.shape.check_slot(SlotKind::Covariant, s1)?;
            return Err(TensorError::RepeatedSlot(s1));
        }
        let swapped = self.swap_covariant(s1, s2)?;
        let mut out = self.try_sub(&swapped)?;
        out.antisym_pairs = vec![(s1.min(s2), s1.max(s2))];
        Ok(out)
    }
}

fn splice(full: &mut [usize], reduced: &[usize], at: usize, value: usize) {
    full[..at].copy_from_slice(&reduced[..at]);
    full[at] = value;
    full[at + 1..].copy_from_slice(&reduced[at..]);
}

fn check_permutation(perm: &[usize], len: usize) -> Result<Vec<usize>, TensorError> {
    let bad = || TensorError::NotAPermutation(perm.to_vec(), len);
    if perm.len() != len {
        return Err(bad());
    }
    let mut seen = vec![false; len];
    let mut out = Vec::with_capacity(len);
    for &s in perm {
        if s == 0 || s > len || seen[s - 1] {
            return Err(bad());
        }
        seen[s - 1] = true;
        out.push(s - 1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, rational};

    fn poly(s: &str) -> Polynomial {
        parse(s, 4).unwrap()
    }

    /// A (3,1) field with no symmetries, built from distinct monomials.
    fn generic31() -> TensorField {
        TensorField::from_fn(TensorShape::new(3, 1, 4), |c, u| {
            let k = (c[0] * 64 + c[1] * 16 + c[2] * 4 + u[0]) as i64;
            Polynomial::from_int(4, k + 1) * poly(&format!("x{}", (k % 4) + 1))
        })
    }

    fn torsion_like() -> TensorField {
        // T^l_ij = a^l_ij - a^l_ji for a generic a
        let a = TensorField::from_fn(TensorShape::new(2, 1, 4), |c, u| {
            Polynomial::from_int(4, (c[0] * 16 + c[1] * 4 + u[0]) as i64 * 3 + 1)
                * poly(&format!("x{}", c[1] + 1))
        });
        a.antisymmetrize_pair(1, 2).unwrap()
    }

    #[test]
    fn offsets_round_trip() {
        let s = TensorShape::new(3, 2, 4);
        assert_eq!(s.len(), 1024);
        for flat in [0, 1, 17, 1023] {
            assert_eq!(s.offset(&s.multi_index(flat)), flat);
        }
    }

    #[test]
    fn product_with_unit_scalar() {
        let t = generic31();
        let one = TensorField::scalar(Polynomial::one(4));
        assert_eq!(one.tensor_product(&t).unwrap(), t);
        assert_eq!(t.tensor_product(&one).unwrap(), t);
    }

    #[test]
    fn delta_squared_full_trace() {
        let dd = TensorField::kronecker(4)
            .tensor_product(&TensorField::kronecker(4))
            .unwrap();
        let full = dd.contract(2, 2).unwrap().contract(1, 1).unwrap();
        assert_eq!(full.components()[0], Polynomial::from_int(4, 16));
    }

    #[test]
    fn trace_of_identity() {
        let t = TensorField::kronecker(3).contract(1, 1).unwrap();
        assert_eq!(t.shape(), TensorShape::new(0, 0, 3));
        assert_eq!(t.components()[0], Polynomial::from_int(3, 3));
    }

    #[test]
    fn contract_matches_einstein_sum() {
        let t = generic31();
        let c = t.contract(2, 1).unwrap();
        for i in 0..4 {
            for k in 0..4 {
                let mut expected = Polynomial::zero(4);
                for m in 0..4 {
                    expected = &expected + t.get(&[i, m, k], &[m]);
                }
                assert_eq!(c.get(&[i, k], &[]), &expected);
            }
        }
        assert!(matches!(
            t.contract(4, 1),
            Err(TensorError::SlotOutOfRange {
                kind: SlotKind::Covariant,
                slot: 4,
                count: 3
            })
        ));
        assert!(t.contract(1, 2).is_err());
    }

    #[test]
    fn permutation_group_law() {
        let t = generic31();
        let jki = [2, 3, 1];
        let twice = t
            .permute_covariant(&jki)
            .unwrap()
            .permute_covariant(&jki)
            .unwrap();
        let kij = t.permute_covariant(&[3, 1, 2]).unwrap();
        assert_eq!(twice, kij);
        assert_eq!(t.permute_covariant(&[1, 2, 3]).unwrap(), t);
        assert_eq!(
            t.permute_covariant(&jki).unwrap().get(&[0, 1, 2], &[3]),
            t.get(&[1, 2, 0], &[3])
        );
        assert!(t.permute_covariant(&[1, 1, 2]).is_err());
        assert!(t.permute_covariant(&[1, 2]).is_err());
    }

    #[test]
    fn swap_negates_torsion_like() {
        let tor = torsion_like();
        assert!(tor
            .equal(&tor.permute_covariant(&[2, 1]).unwrap().neg())
            .unwrap());
    }

    #[test]
    fn antisymmetrize_examples() {
        let sym = TensorField::from_fn(TensorShape::new(2, 0, 4), |c, _| {
            poly(&format!("x{}*x{}", c[0] + 1, c[1] + 1))
        });
        assert!(sym.antisymmetrize_pair(1, 2).unwrap().is_zero());

        let tor = torsion_like();
        assert_eq!(
            tor.antisymmetrize_pair(1, 2).unwrap(),
            tor.scale(&rational(2, 1))
                .with_antisymmetry(&[(1, 2)])
                .unwrap()
        );

        let first = generic31().antisymmetrize_pair(1, 3).unwrap();
        let again = first.antisymmetrize_pair(1, 3).unwrap();
        assert!(again.equal(&first.scale(&rational(2, 1))).unwrap());

        assert!(matches!(
            first.antisymmetrize_pair(2, 2),
            Err(TensorError::RepeatedSlot(2))
        ));
        assert!(first.antisymmetrize_pair(1, 4).is_err());
    }

    #[test]
    fn insert_delta_examples() {
        let theta = TensorField::from_fn(TensorShape::new(1, 0, 4), |c, _| {
            poly(&format!("x{}", c[0] + 1))
        });
        assert_eq!(theta.insert_delta(0), theta);
        let td = theta.insert_delta(1);
        assert_eq!(td.shape(), TensorShape::new(2, 1, 4));
        for i in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let expected = if k == l {
                        theta.get(&[i], &[]).clone()
                    } else {
                        Polynomial::zero(4)
                    };
                    assert_eq!(td.get(&[i, k], &[l]), &expected);
                }
            }
        }
        let one = TensorField::scalar(Polynomial::one(4)).insert_delta(1);
        assert_eq!(
            one.contract(1, 1).unwrap().components()[0],
            Polynomial::from_int(4, 4)
        );
    }

    #[test]
    fn antisymmetry_metadata_is_validated() {
        let t = generic31();
        assert!(matches!(
            t.clone().with_antisymmetry(&[(1, 2)]),
            Err(TensorError::AntisymmetryViolated(1, 2))
        ));
        let a = t.antisymmetrize_pair(1, 2).unwrap();
        a.validate_antisymmetry().unwrap();
        // permuting moves the declared pair along with the slots
        let moved = a.permute_covariant(&[3, 1, 2]).unwrap();
        assert_eq!(moved.antisym_pairs(), &[(1, 3)]);
        moved.validate_antisymmetry().unwrap();
    }

    #[test]
    fn equal_requires_same_shape() {
        let a = TensorField::zeros(TensorShape::new(2, 1, 4));
        let b = TensorField::zeros(TensorShape::new(3, 1, 4));
        assert!(a.equal(&a).unwrap());
        assert!(matches!(
            a.equal(&b),
            Err(TensorError::ShapeMismatch { .. })
        ));
    }
}
