use proptest::prelude::*;

use super::*;
use crate::poly::parse;

// Nonzero components of the test connection, keyed [l, i, j, k] (1-based).
const CURVATURE: &[([usize; 4], &str)] = &[
    ([1, 1, 3, 2], "-1"),
    ([1, 3, 1, 2], "1"),
    ([3, 1, 3, 2], "-x2*x3*x4"),
    ([3, 1, 4, 3], "x4"),
    ([3, 2, 3, 1], "x4"),
    ([3, 3, 1, 2], "x2*x3*x4"),
    ([3, 3, 2, 1], "-x4"),
    ([3, 3, 4, 1], "-x1*x2*x4^2 - x2"),
    ([3, 4, 1, 3], "-x4"),
    ([3, 4, 3, 1], "x1*x2*x4^2 + x2"),
];
const NABLA_TORSION: &[([usize; 4], &str)] = &[
    ([1, 1, 2, 3], "1"),
    ([1, 2, 1, 3], "-1"),
    ([3, 1, 2, 3], "x2*x3*x4"),
    ([3, 1, 3, 2], "-x4"),
    ([3, 1, 3, 4], "-x2"),
    ([3, 1, 4, 3], "x1*x2*x4^2"),
    ([3, 2, 1, 3], "-x2*x3*x4"),
    ([3, 2, 3, 1], "x2*x3*x4"),
    ([3, 3, 1, 2], "x4"),
    ([3, 3, 1, 4], "x2"),
    ([3, 3, 2, 1], "-x2*x3*x4"),
    ([3, 3, 4, 1], "-x4"),
    ([3, 3, 4, 4], "-x1"),
    ([3, 4, 1, 3], "-x1*x2*x4^2"),
    ([3, 4, 3, 1], "x4"),
    ([3, 4, 3, 4], "x1"),
];
const NORMAL1: &[([usize; 4], &str)] = &[
    ([1, 1, 2, 2], "1/12*x3^2"),
    ([1, 1, 2, 3], "5/6"),
    ([1, 1, 3, 2], "-1/6"),
    ([1, 2, 1, 2], "1/12*x3^2"),
    ([1, 2, 1, 3], "-1/6"),
    ([1, 2, 2, 1], "-1/6*x3^2"),
    ([1, 2, 3, 1], "-1/6"),
    ([1, 3, 1, 2], "-1/6"),
    ([1, 3, 2, 1], "-1/6"),
    ([3, 1, 1, 3], "-1/6*x2^2*x4^2"),
    ([3, 1, 2, 3], "5/12*x2*x3*x4 - 1/6*x4"),
    ([3, 1, 3, 1], "1/12*x2^2*x4^2"),
    ([3, 1, 3, 2], "1/6*x2*x3*x4 - 1/6*x4"),
    ([3, 1, 3, 4], "1/12*x1*x2*x4^2 - 1/6*x2 - 1/6*x4"),
    ([3, 1, 4, 3], "1/3*x1*x2*x4^2 - 1/6*x2 - 1/6*x4"),
    ([3, 2, 1, 3], "-1/12*x2*x3*x4 - 1/6*x4"),
    ([3, 2, 3, 1], "1/6*x2*x3*x4 - 1/6*x4"),
    ([3, 3, 1, 1], "1/12*x2^2*x4^2"),
    ([3, 3, 1, 2], "-1/3*x2*x3*x4 + 5/6*x4"),
    ([3, 3, 1, 4], "1/12*x1*x2*x4^2 + 5/6*x2 - 1/6*x4"),
    ([3, 3, 2, 1], "-1/3*x2*x3*x4 - 1/6*x4"),
    ([3, 3, 4, 1], "1/12*x1*x2*x4^2 - 1/6*x2 - 1/6*x4"),
    ([3, 3, 4, 4], "1/12*x1^2*x4^2 - 1/3*x1"),
    ([3, 4, 1, 3], "-2/3*x1*x2*x4^2 - 1/6*x2 - 1/6*x4"),
    ([3, 4, 3, 1], "1/12*x1*x2*x4^2 - 1/6*x2 + 5/6*x4"),
    ([3, 4, 3, 4], "1/12*x1^2*x4^2 + 2/3*x1"),
    ([3, 4, 4, 3], "-1/6*x1^2*x4^2 - 1/3*x1"),
];

fn poly4(s: &str) -> Polynomial {
    parse(s, 4).unwrap()
}

fn assert_matches_table(field: &TensorField, table: &[([usize; 4], &str)]) {
    assert_eq!(field.nonzero_count(), table.len());
    for (key, value) in table {
        let cov = [key[1] - 1, key[2] - 1, key[3] - 1];
        assert_eq!(
            field.get(&cov, &[key[0] - 1]),
            &poly4(value),
            "component {key:?}"
        );
    }
}

#[test]
fn torsion_of_example() {
    let conn = Connection::example();
    let tor = torsion(&conn);
    assert_eq!(tor.degree(), 2);
    let t = tor.field();
    assert_eq!(t.nonzero_count(), 6);
    assert_eq!(t.get(&[0, 1], &[0]), &poly4("x3"));
    assert_eq!(t.get(&[1, 0], &[0]), &poly4("-x3"));
    assert_eq!(t.get(&[3, 2], &[2]), &poly4("x1*x4"));
    assert_eq!(t.get(&[2, 0], &[2]), &poly4("x2*x4"));
    assert_eq!(t.get(&[0, 2], &[2]), &poly4("-x2*x4"));
}

#[test]
fn curvature_of_example() {
    assert_matches_table(curvature(&Connection::example()).field(), CURVATURE);
}

#[test]
fn covariant_derivative_of_torsion() {
    let conn = Connection::example();
    let ntor = covariant_derivative(&conn, torsion(&conn).field()).unwrap();
    assert_matches_table(&ntor, NABLA_TORSION);
}

#[test]
fn normal1_of_example() {
    assert_matches_table(&normal1(&Connection::example()), NORMAL1);
}

#[test]
fn normal0_is_half_torsion() {
    let conn = Connection::example();
    let n0 = normal0(&conn);
    assert_eq!(n0.get(&[0, 1], &[0]), &poly4("1/2*x3"));
    assert_eq!(n0.scale(&rational(2, 1)), *torsion(&conn).field());
}

#[test]
fn flat_connection_is_trivial() {
    let flat = Connection::flat(3);
    assert!(torsion(&flat).field().is_zero());
    assert!(curvature(&flat).field().is_zero());
    assert!(normal0(&flat).is_zero());
    assert!(normal1(&flat).is_zero());
    let scalar = TensorField::from_fn(TensorShape::new(0, 0, 3), |_, _| {
        parse("x1^2*x3", 3).unwrap()
    });
    let grad = covariant_derivative(&flat, &scalar).unwrap();
    assert_eq!(grad.get(&[0], &[]), &parse("2*x1*x3", 3).unwrap());
    assert_eq!(grad.get(&[2], &[]), &parse("x1^2", 3).unwrap());
    assert!(grad.get(&[1], &[]).is_zero());
}

#[test]
fn symmetric_connection_has_no_torsion() {
    let sym = Connection::example().symmetrized();
    assert!(sym.is_symmetric());
    assert!(!Connection::example().is_symmetric());
    assert!(torsion(&sym).field().is_zero());
    assert!(normal0(&sym).is_zero());
}

#[test]
fn identity_form_differential_is_torsion() {
    let conn = Connection::example();
    let d = ext_cov_deriv_vector(&conn, &identity_form(4)).unwrap();
    assert_eq!(d, torsion(&conn));
}

#[test]
fn one_form_wedge_trace() {
    let theta = TensorField::from_fn(TensorShape::new(1, 0, 4), |c, _| {
        parse(["x2", "1", "0", "x1*x3"][c[0]], 4).unwrap()
    });
    let w = wedge_oneform_identity(&theta).unwrap();
    assert_eq!(torsion_trace(&w), theta.scale(&rational(-3, 1)));
    assert!(wedge_oneform_identity(&TensorField::zeros(TensorShape::new(2, 0, 4))).is_err());
}

#[test]
fn exterior_derivative_of_coordinate_form() {
    let theta = TensorField::from_fn(TensorShape::new(1, 0, 3), |c, _| {
        if c[0] == 0 {
            parse("x2", 3).unwrap()
        } else {
            Polynomial::zero(3)
        }
    });
    let d = exterior_derivative(&theta).unwrap();
    assert_eq!(d.nonzero_count(), 2);
    assert_eq!(d.get(&[0, 1], &[]), &Polynomial::from_int(3, -1));
    assert_eq!(d.get(&[1, 0], &[]), &Polynomial::from_int(3, 1));
}

#[test]
fn wrong_shapes_are_rejected() {
    let conn = Connection::flat(3);
    assert!(matches!(
        covariant_derivative(&conn, &TensorField::zeros(TensorShape::new(1, 0, 4))),
        Err(GeometryError::DimensionMismatch {
            connection: 3,
            field: 4
        })
    ));
    assert!(VectorValuedForm::new(TensorField::zeros(TensorShape::new(2, 0, 3))).is_err());
    assert!(EndValuedForm::new(TensorField::zeros(TensorShape::new(2, 1, 3)), 2).is_err());
    let not_alternating =
        TensorField::from_fn(TensorShape::new(2, 1, 2), |_, _| Polynomial::one(2));
    assert!(VectorValuedForm::new(not_alternating).is_err());
    assert!(exterior_derivative(&TensorField::kronecker(2)).is_err());
}

fn small_poly(dim: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=1, dim)), 0..=2).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(Polynomial::zero(dim), |acc, (c, exps)| {
                    let m =
                        Polynomial::monomial(dim, crate::poly::Monomial::new(exps), rational(c, 1));
                    &acc + &m
                })
        },
    )
}

fn connection(dim: usize) -> impl Strategy<Value = Connection> {
    prop::collection::vec((0..dim, 0..dim, 0..dim, small_poly(dim)), 0..=5).prop_map(
        move |entries| {
            let mut conn = Connection::flat(dim);
            for (l, i, j, p) in entries {
                conn.set_gamma(l, i, j, p);
            }
            conn
        },
    )
}

fn one_form(dim: usize) -> impl Strategy<Value = TensorField> {
    prop::collection::vec(small_poly(dim), dim).prop_map(move |ps| {
        TensorField::from_fn(TensorShape::new(1, 0, dim), |c, _| ps[c[0]].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bianchi_identities(conn in connection(3)) {
        let tor = torsion(&conn);
        let r = curvature(&conn);
        prop_assert_eq!(ext_cov_deriv_vector(&conn, &tor).unwrap(), wedge_endo_identity(&r));
        prop_assert!(ext_cov_deriv_endo(&conn, &r).unwrap().field().is_zero());
        prop_assert_eq!(ext_cov_deriv_vector(&conn, &identity_form(3)).unwrap(), tor);
    }

    #[test]
    fn normal1_full_symmetrization_vanishes(conn in connection(3)) {
        let n1 = normal1(&conn);
        let mut sum = TensorField::zeros(n1.shape());
        for perm in [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]] {
            sum = sum.try_add(&n1.permute_covariant(&perm).unwrap()).unwrap();
        }
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn d_squared_vanishes(theta in one_form(3)) {
        let dd = exterior_derivative(&exterior_derivative(&theta).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn differential_of_scalar_times_identity(conn in connection(3), theta in one_form(3)) {
        let lhs = ext_cov_deriv_endo(&conn, &tensor_identity(&theta).unwrap()).unwrap();
        let rhs = tensor_identity(&exterior_derivative(&theta).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_trace_is_dimension_minus_one(theta in one_form(3)) {
        // trace over (m, l) of θ_m δ^l_j - θ_j δ^l_m, with the form slot first
        let w = wedge_oneform_identity(&theta).unwrap();
        prop_assert_eq!(w.field().contract(2, 1).unwrap(), theta.scale(&rational(2, 1)));
    }
}
