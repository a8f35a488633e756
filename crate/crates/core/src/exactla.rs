//! Exact rational linear algebra over flattened tensor fields.
//!
//! A list of polynomial tensor fields of one shape is flattened into a matrix
//! whose rows are `(component, monomial)` pairs and whose columns are the
//! fields. Rank and kernel are computed with fraction-free (Bareiss)
//! elimination over big integers after clearing row denominators, which
//! leaves both the row space and the right kernel unchanged.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial, Rational};
use crate::tensor::{TensorField, TensorShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("cannot flatten an empty list of fields")]
    Empty,
    #[error("shape mismatch: {expected} vs {found}")]
    ShapeMismatch {
        expected: TensorShape,
        found: TensorShape,
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Panics if the columns have different lengths.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &RationalMatrix) -> Result<RationalMatrix, LinAlgError> {
        if self.cols != other.cols {
            return Err(LinAlgError::LengthMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn scale_column(&mut self, j: usize, c: &Rational) {
        for i in 0..self.rows {
            let v = self.get(i, j) * c;
            self.set(i, j, v);
        }
    }

    /// Row echelon form of the integer matrix obtained by clearing each row's denominators.
    fn echelon(&self) -> Echelon {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| integer_row(self.row(i)))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(s) = (r..a.len()).find(|&s| !a[s][c].is_zero()) else {
                continue;
            };
            a.swap(r, s);
            let (top, rest) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let p = pivot_row[c].clone();
            for row in rest.iter_mut() {
                let lead = std::mem::take(&mut row[c]);
                for j in c + 1..self.cols {
                    let num = &p * &row[j] - &lead * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
            }
            prev = p;
            pivots.push(c);
            r += 1;
            if r == a.len() {
                break;
            }
        }
        a.truncate(r);
        Echelon { rows: a, pivots }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space, one vector per free column (that entry set to 1).
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for (r, &pc) in ech.pivots.iter().enumerate().rev() {
                    let row = &ech.rows[r];
                    let mut s = Rational::zero();
                    for j in pc + 1..self.cols {
                        if !row[j].is_zero() && !x[j].is_zero() {
                            s += Rational::from_integer(row[j].clone()) * &x[j];
                        }
                    }
                    x[pc] = -s / Rational::from_integer(row[pc].clone());
                }
                x
            })
            .collect()
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

/// Row labels of a flattened matrix: `(flat component offset, monomial)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlattenManifest {
    shape: TensorShape,
    labels: Vec<(usize, Monomial)>,
}

impl FlattenManifest {
    pub fn shape(&self) -> TensorShape {
        self.shape
    }

    pub fn labels(&self) -> &[(usize, Monomial)] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Rebuilds the field whose coordinates against this manifest are `coords`.
    pub fn reconstruct(&self, coords: &[Rational]) -> Result<TensorField, LinAlgError> {
        if coords.len() != self.labels.len() {
            return Err(LinAlgError::LengthMismatch {
                expected: self.labels.len(),
                found: coords.len(),
            });
        }
        let n = self.shape.dim;
        let mut comps: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); self.shape.len()];
        for ((off, m), c) in self.labels.iter().zip(coords) {
            comps[*off].push((m.clone(), c.clone()));
        }
        let comps = comps
            .into_iter()
            .map(|terms| Polynomial::from_terms(n, terms).expect("manifest monomials match n"))
            .collect();
        Ok(TensorField::from_components(self.shape, comps).expect("manifest shape"))
    }
}

/// Flattens fields of a common shape into columns against the union of their monomial supports.
///
/// Rows are ordered by component (row-major, covariant first) and then by graded-lex monomial.
pub fn flatten(fields: &[&TensorField]) -> Result<(FlattenManifest, RationalMatrix), LinAlgError> {
    let first = fields.first().ok_or(LinAlgError::Empty)?;
    let shape = first.shape();
    for f in fields {
        if f.shape() != shape {
            return Err(LinAlgError::ShapeMismatch {
                expected: shape,
                found: f.shape(),
            });
        }
    }
    let mut support = BTreeSet::new();
    for f in fields {
        for (off, p) in f.components().iter().enumerate() {
            for (m, _) in p.terms() {
                support.insert((off, m.clone()));
            }
        }
    }
    let labels: Vec<(usize, Monomial)> = support.into_iter().collect();
    let mut matrix = RationalMatrix::zeros(labels.len(), fields.len());
    for (i, (off, m)) in labels.iter().enumerate() {
        for (j, f) in fields.iter().enumerate() {
            let c = f.components()[*off].coefficient(m);
            if !c.is_zero() {
                matrix.set(i, j, c);
            }
        }
    }
    Ok((FlattenManifest { shape, labels }, matrix))
}

/// Rank of a list of fields after flattening. The empty list has rank 0.
pub fn field_rank(fields: &[&TensorField]) -> Result<usize, LinAlgError> {
    if fields.is_empty() {
        return Ok(0);
    }
    Ok(flatten(fields)?.1.rank())
}

/// If `v` is a rational combination of `basis`, returns coefficients `c` with `Σ c_i basis_i = v`.
///
/// The certificate is re-multiplied before it is returned.
pub fn in_span(
    v: &[Rational],
    basis: &[Vec<Rational>],
) -> Result<Option<Vec<Rational>>, LinAlgError> {
    for b in basis {
        if b.len() != v.len() {
            return Err(LinAlgError::LengthMismatch {
                expected: v.len(),
                found: b.len(),
            });
        }
    }
    if v.iter().all(Zero::is_zero) {
        return Ok(Some(vec![Rational::zero(); basis.len()]));
    }
    let mut columns = basis.to_vec();
    columns.push(v.to_vec());
    let m = RationalMatrix::from_columns(&columns);
    let k = basis.len();
    // the free-variable basis has exactly one vector with a nonzero last entry iff v is dependent
    let Some(w) = m.kernel_basis().into_iter().find(|w| !w[k].is_zero()) else {
        return Ok(None);
    };
    let scale = -w[k].clone();
    let coeffs: Vec<Rational> = w[..k].iter().map(|c| c / &scale).collect();
    let check = RationalMatrix::from_columns(basis).mul_vec(&coeffs)?;
    assert_eq!(check, v, "span certificate failed to re-multiply");
    Ok(Some(coeffs))
}

/// Outcome of comparing two spans by mutual membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanComparison {
    pub rank_a: usize,
    pub rank_b: usize,
    /// For each vector of `a`, its coefficients against `b` (if it lies in span `b`).
    pub a_in_b: Vec<Option<Vec<Rational>>>,
    /// For each vector of `b`, its coefficients against `a`.
    pub b_in_a: Vec<Option<Vec<Rational>>>,
}

impl SpanComparison {
    pub fn equal(&self) -> bool {
        self.rank_a == self.rank_b
            && self.a_in_b.iter().all(Option::is_some)
            && self.b_in_a.iter().all(Option::is_some)
    }
}

/// Compares `span(a)` and `span(b)` via ranks and mutual `in_span` certificates.
pub fn compare_spans(
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
) -> Result<SpanComparison, LinAlgError> {
    let rank = |vs: &[Vec<Rational>]| {
        if vs.is_empty() {
            0
        } else {
            RationalMatrix::from_columns(vs).rank()
        }
    };
    Ok(SpanComparison {
        rank_a: rank(a),
        rank_b: rank(b),
        a_in_b: a.iter().map(|v| in_span(v, b)).collect::<Result<_, _>>()?,
        b_in_a: b.iter().map(|v| in_span(v, a)).collect::<Result<_, _>>()?,
    })
}

/// Unit vector `e_i` (0-based `i`) of length `len`.
pub fn unit_vector(len: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[i] = Rational::one();
    v
}

/// Scales a rational vector to a primitive integer vector whose first nonzero entry is positive.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map_or(BigInt::one(), |x| {
            if x.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            }
        });
    ints.iter().map(|x| x / &g * &sign).collect()
}
