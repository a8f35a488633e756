//! Calculus of an affine connection on a single polynomial chart.
//!
//! Index conventions:
//! - `Γ^l_ij` is the coefficient of `∂_l` in `∇_{∂_i} ∂_j`.
//! - `Tor^l_ij = Γ^l_ij - Γ^l_ji`.
//! - `R^l_ijk` is the `∂_l` component of `R(∂_i, ∂_j) ∂_k`, i.e.
//!   `∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^m_jk Γ^l_im - Γ^m_ik Γ^l_jm`.
//! - Covariant derivatives append the differentiation direction as the last
//!   covariant slot: `(∇T)_{i..k}` is `∇_k` applied to `T_{i..}`.
//! - Exterior covariant differentials use the coordinate-frame alternating sum
//!   (coordinate brackets vanish), without `1/k!` prefactors.

mod connection;
mod forms;

pub use connection::{ChristoffelEntry, Connection, ConnectionDocument, EXAMPLE_CONNECTION};
pub use forms::{EndValuedForm, VectorValuedForm};

use num_traits::One;
use thiserror::Error;

use crate::poly::{rational, PolyError, Polynomial, Rational};
use crate::tensor::{TensorError, TensorField, TensorShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid connection file: {0}")]
    Json(String),
    #[error("dimension {0} is outside the supported range (n >= 2)")]
    UnsupportedDimension(usize),
    #[error("christoffel entry {entry}: index out of range 1..={dim}")]
    IndexOutOfRange { entry: usize, dim: usize },
    #[error("duplicate christoffel entry for upper {upper}, lower {lower:?}")]
    DuplicateEntry { upper: usize, lower: [usize; 2] },
    #[error("christoffel entry {entry} (upper {upper}, lower {lower:?}): {source}")]
    EntryPoly {
        entry: usize,
        upper: usize,
        lower: [usize; 2],
        source: PolyError,
    },
    #[error("dimension mismatch: connection has n={connection}, field has n={field}")]
    DimensionMismatch { connection: usize, field: usize },
    #[error("expected {expected}, found shape {found}")]
    WrongShape {
        expected: &'static str,
        found: TensorShape,
    },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

fn check_dim(conn: &Connection, field: &TensorField) -> Result<(), GeometryError> {
    if conn.dim() != field.dim() {
        return Err(GeometryError::DimensionMismatch {
            connection: conn.dim(),
            field: field.dim(),
        });
    }
    Ok(())
}

fn derivative(p: &Polynomial, coord: usize) -> Polynomial {
    p.partial_derivative(coord + 1)
        .expect("coordinate index within dimension")
}

/// `Tor^l_ij = Γ^l_ij - Γ^l_ji`.
pub fn torsion(conn: &Connection) -> VectorValuedForm {
    let field = TensorField::from_fn(TensorShape::new(2, 1, conn.dim()), |c, u| {
        conn.gamma(u[0], c[0], c[1]) - conn.gamma(u[0], c[1], c[0])
    });
    VectorValuedForm::new(field).expect("torsion is antisymmetric")
}

/// Curvature `R^l_ijk` as an endomorphism-valued 2-form (form slots `i, j`, endo input `k`).
pub fn curvature(conn: &Connection) -> EndValuedForm {
    let n = conn.dim();
    let field = TensorField::from_fn(TensorShape::new(3, 1, n), |c, u| {
        let (i, j, k, l) = (c[0], c[1], c[2], u[0]);
        let mut acc = derivative(conn.gamma(l, j, k), i) - derivative(conn.gamma(l, i, k), j);
        for m in 0..n {
            acc.add_product(conn.gamma(m, j, k), conn.gamma(l, i, m));
            acc.add_product(&-conn.gamma(m, i, k), conn.gamma(l, j, m));
        }
        acc
    });
    EndValuedForm::new(field, 2).expect("curvature is antisymmetric in its form slots")
}

/// `∇T` of shape `(p+1, q)`, the differentiation direction in the last covariant slot.
pub fn covariant_derivative(
    conn: &Connection,
    t: &TensorField,
) -> Result<TensorField, GeometryError> {
    check_dim(conn, t)?;
    let n = conn.dim();
    let shape = t.shape();
    let (p, q) = (shape.covariant, shape.contravariant);
    let out_shape = TensorShape::new(p + 1, q, n);
    let mut cov_buf = vec![0; p];
    let mut con_buf = vec![0; q];
    Ok(TensorField::from_fn(out_shape, |c, u| {
        let k = c[p];
        let base = &c[..p];
        let mut acc = derivative(t.get(base, u), k);
        for a in 0..p {
            cov_buf.copy_from_slice(base);
            for m in 0..n {
                cov_buf[a] = m;
                acc.add_product(&-conn.gamma(m, k, base[a]), t.get(&cov_buf, u));
            }
        }
        for b in 0..q {
            con_buf.copy_from_slice(u);
            for m in 0..n {
                con_buf[b] = m;
                acc.add_product(conn.gamma(u[b], k, m), t.get(base, &con_buf));
            }
        }
        acc
    }))
}

/// Calls `f(a, sign, omitted)` for each position `a` of `index`, where `omitted`
/// is `index` without entry `a` and `sign = (-1)^a`.
fn alternating_terms(index: &[usize], mut f: impl FnMut(usize, bool, &[usize])) {
    let mut omitted = Vec::with_capacity(index.len().saturating_sub(1));
    for a in 0..index.len() {
        omitted.clear();
        omitted.extend(
            index
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &v)| v),
        );
        f(a, a % 2 == 1, &omitted);
    }
}

/// `d_∇α` for a vector-valued `k`-form:
/// `Σ_a (-1)^a [∂_{i_a} α^l_{..î_a..} + Γ^l_{i_a m} α^m_{..î_a..}]`.
///
/// For `k = 2` this is the cyclic sum over `(i, j, k)`.
pub fn ext_cov_deriv_vector(
    conn: &Connection,
    alpha: &VectorValuedForm,
) -> Result<VectorValuedForm, GeometryError> {
    let field = alpha.field();
    check_dim(conn, field)?;
    let n = conn.dim();
    let k = alpha.degree();
    let mut con = [0usize; 1];
    let out = TensorField::from_fn(TensorShape::new(k + 1, 1, n), |c, u| {
        let l = u[0];
        let mut acc = Polynomial::zero(n);
        alternating_terms(c, |a, negative, rest| {
            let dir = c[a];
            let mut term = derivative(field.get(rest, u), dir);
            for m in 0..n {
                con[0] = m;
                term.add_product(conn.gamma(l, dir, m), field.get(rest, &con));
            }
            acc = if negative { &acc - &term } else { &acc + &term };
        });
        acc
    });
    VectorValuedForm::new(out)
}

/// `d_∇β` for an endomorphism-valued `k`-form with endo-input slot `e`:
/// `Σ_a (-1)^a [∂_{i_a} β^l_{..î_a..,e} + Γ^l_{i_a m} β^m_{..,e} - Γ^m_{i_a e} β^l_{..,m}]`.
pub fn ext_cov_deriv_endo(
    conn: &Connection,
    beta: &EndValuedForm,
) -> Result<EndValuedForm, GeometryError> {
    let field = beta.field();
    check_dim(conn, field)?;
    let n = conn.dim();
    let k = beta.degree();
    let mut src = vec![0usize; k + 1];
    let mut con = [0usize; 1];
    let out = TensorField::from_fn(TensorShape::new(k + 2, 1, n), |c, u| {
        let l = u[0];
        let e = c[k + 1];
        let forms = &c[..=k];
        let mut acc = Polynomial::zero(n);
        alternating_terms(forms, |a, negative, rest| {
            let dir = forms[a];
            src[..k].copy_from_slice(rest);
            src[k] = e;
            let mut term = derivative(field.get(&src, u), dir);
            for m in 0..n {
                con[0] = m;
                term.add_product(conn.gamma(l, dir, m), field.get(&src, &con));
            }
            for m in 0..n {
                src[k] = m;
                term.add_product(&-conn.gamma(m, dir, e), field.get(&src, u));
            }
            acc = if negative { &acc - &term } else { &acc + &term };
        });
        acc
    });
    EndValuedForm::new(out, k + 1)
}

/// `β ∧ I` for an endomorphism-valued `k`-form, a vector-valued `(k+1)`-form:
/// `Σ_a (-1)^(k-a) β^l_{..î_a.., i_a}`; for `k = 2` the cyclic sum
/// `β^l_ij,k + β^l_jk,i + β^l_ki,j`.
pub fn wedge_endo_identity(beta: &EndValuedForm) -> VectorValuedForm {
    let field = beta.field();
    let n = field.dim();
    let k = beta.degree();
    let mut src = vec![0usize; k + 1];
    let out = TensorField::from_fn(TensorShape::new(k + 1, 1, n), |c, u| {
        let mut acc = Polynomial::zero(n);
        alternating_terms(c, |a, _, rest| {
            src[..k].copy_from_slice(rest);
            src[k] = c[a];
            let v = field.get(&src, u);
            acc = if (k - a) % 2 == 1 { &acc - v } else { &acc + v };
        });
        acc
    });
    VectorValuedForm::new(out).expect("wedge with the identity is alternating")
}

fn check_scalar_form(field: &TensorField, degree: Option<usize>) -> Result<usize, GeometryError> {
    let s = field.shape();
    let ok = s.contravariant == 0 && degree.is_none_or(|d| d == s.covariant);
    if !ok {
        return Err(GeometryError::WrongShape {
            expected: if degree == Some(1) {
                "a 1-form (shape (1,0))"
            } else {
                "a scalar form (shape (k,0))"
            },
            found: s,
        });
    }
    Ok(s.covariant)
}

/// `(θ ∧ I)^l_ij = θ_i δ^l_j - θ_j δ^l_i` for a 1-form `θ`.
pub fn wedge_oneform_identity(theta: &TensorField) -> Result<VectorValuedForm, GeometryError> {
    check_scalar_form(theta, Some(1))?;
    let n = theta.dim();
    let out = TensorField::from_fn(TensorShape::new(2, 1, n), |c, u| {
        let mut acc = Polynomial::zero(n);
        if c[1] == u[0] {
            acc = &acc + theta.get(&c[..1], &[]);
        }
        if c[0] == u[0] {
            acc = &acc - theta.get(&c[1..], &[]);
        }
        acc
    });
    VectorValuedForm::new(out)
}

/// `ω ⊗ I` for a scalar `k`-form: components `ω_{i..} δ^l_a`.
pub fn tensor_identity(omega: &TensorField) -> Result<EndValuedForm, GeometryError> {
    let k = check_scalar_form(omega, None)?;
    EndValuedForm::new(omega.insert_delta(1), k)
}

/// Exterior derivative of a scalar `k`-form: `Σ_a (-1)^a ∂_{i_a} ω_{..î_a..}`.
pub fn exterior_derivative(omega: &TensorField) -> Result<TensorField, GeometryError> {
    let k = check_scalar_form(omega, None)?;
    let n = omega.dim();
    Ok(TensorField::from_fn(
        TensorShape::new(k + 1, 0, n),
        |c, _| {
            let mut acc = Polynomial::zero(n);
            alternating_terms(c, |a, negative, rest| {
                let term = derivative(omega.get(rest, &[]), c[a]);
                acc = if negative { &acc - &term } else { &acc + &term };
            });
            acc
        },
    ))
}

/// The identity endomorphism viewed as a vector-valued 1-form, `δ^l_i`.
pub fn identity_form(dim: usize) -> VectorValuedForm {
    VectorValuedForm::new(TensorField::kronecker(dim)).expect("1-forms are trivially alternating")
}

/// `θ_j = Tor^m_mj`, the trace of a vector-valued 2-form over its first slot.
pub fn torsion_trace(tor: &VectorValuedForm) -> TensorField {
    tor.field().contract(1, 1).expect("2-form has slots 1/1")
}

/// `R^k_ijk`, the trace of an endomorphism-valued 2-form over its endo slots.
pub fn curvature_trace(r: &EndValuedForm) -> TensorField {
    r.field().contract(3, 1).expect("(3,1) field")
}

/// Normal tensor of order zero: `N⁰ = ½ Tor`.
pub fn normal0(conn: &Connection) -> TensorField {
    torsion(conn)
        .field()
        .scale(&rational(1, 2))
        .with_antisymmetry(&[(1, 2)])
        .expect("half torsion is antisymmetric")
}

/// Normal tensor of order one in terms of `R`, `Tor` and `∇Tor`:
///
/// `N^l_ijk = -1/6 (-3R^l_kij + R^l_jki - R^l_ijk - 2(∇Tor)^l_ijk - 2(∇Tor)^l_kji
///            + Tor^m_kj Tor^l_mi + ½ Tor^m_ij Tor^l_km)`
pub fn normal1(conn: &Connection) -> TensorField {
    let n = conn.dim();
    let tor = torsion(conn);
    let tor = tor.field();
    let r = curvature(conn);
    let r = r.field();
    let ntor = covariant_derivative(conn, tor).expect("same dimension");
    let half = rational(1, 2);
    let two = rational(2, 1);
    let three = rational(3, 1);
    let prefactor = rational(-1, 6);
    TensorField::from_fn(TensorShape::new(3, 1, n), |c, u| {
        let (i, j, k) = (c[0], c[1], c[2]);
        let mut acc = Polynomial::zero(n);
        acc.add_scaled(&-&three, r.get(&[k, i, j], u));
        acc.add_scaled(&Rational::one(), r.get(&[j, k, i], u));
        acc.add_scaled(&-Rational::one(), r.get(&[i, j, k], u));
        acc.add_scaled(&-&two, ntor.get(&[i, j, k], u));
        acc.add_scaled(&-&two, ntor.get(&[k, j, i], u));
        for m in 0..n {
            acc.add_product(tor.get(&[k, j], &[m]), tor.get(&[m, i], u));
            acc.add_product(&tor.get(&[i, j], &[m]).scale(&half), tor.get(&[k, m], u));
        }
        acc.scale(&prefactor)
    })
}

#[cfg(test)]
mod tests;
