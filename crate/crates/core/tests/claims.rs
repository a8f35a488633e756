use tcpair::generators::{build_t_list, GeneratorOptions, Variant};
use tcpair::geometry::{
    curvature, curvature_trace, exterior_derivative, normal0, normal1, tensor_identity, torsion,
    torsion_trace, Connection,
};
use tcpair::verify::{self, RandomConnectionSpec, Target, VerifyError};

fn example() -> Connection {
    Connection::example()
}

#[test]
fn example_passes_everything() {
    let verdicts = verify::verify_all(&example(), &RandomConnectionSpec::default()).unwrap();
    let ids: Vec<&str> = verdicts.iter().map(|v| v.claim_id.as_str()).collect();
    assert_eq!(
        ids,
        [
            "lemma-3.1",
            "dropped-generator",
            "thm-3.2",
            "thm-3.2-identification",
            "lemma-3.4",
            "lemma-3.5",
            "thm-3.5",
            "bianchi",
            "schemes"
        ]
    );
    assert!(
        verify::all_pass(&verdicts),
        "{}",
        verify::render_text(&verdicts)
    );
}

#[test]
fn flat_connection_fails_only_example_claims() {
    let verdicts =
        verify::verify_all(&Connection::flat(4), &RandomConnectionSpec::default()).unwrap();
    for v in &verdicts {
        let identity_claim = matches!(v.claim_id.as_str(), "bianchi" | "schemes");
        assert_eq!(v.pass, identity_claim, "{}: {}", v.claim_id, v.observed);
    }
    assert_eq!(
        verdicts[2].observed,
        "kernel of dimension 19, span equal: false"
    );
}

#[test]
fn small_dimension_is_refused() {
    let err =
        verify::verify_all(&Connection::flat(3), &RandomConnectionSpec::default()).unwrap_err();
    assert_eq!(err, VerifyError::DimensionTooSmall(3));
    assert!(err.to_string().contains("n >= 4"));
}

#[test]
fn symmetric_connections_lose_the_quadratic_generators() {
    for conn in RandomConnectionSpec::default().generate(3) {
        let sym = conn.symmetrized();
        let fam =
            build_t_list(&normal0(&sym), &normal1(&sym), GeneratorOptions::default()).unwrap();
        assert!((12..=19).all(|i| fam.get(i).is_zero()));
        assert_eq!(
            verify::verify_generator_rank(&sym).unwrap().observed,
            "rank 4"
        );
        // only (C31 R⊗I)∧I survives
        let v = verify::verify_three_forms(&sym).unwrap();
        assert_eq!(v.observed, "rank 1");
        assert_eq!(
            v.certificate["zero"],
            serde_json::json!([true, false, true, true])
        );
    }
}

#[test]
fn traceless_torsion_kills_h() {
    let mut conn = Connection::flat(4);
    conn.set_gamma(0, 1, 2, tcpair::poly::parse("x1", 4).unwrap());
    assert!(torsion_trace(&torsion(&conn)).is_zero());
    let v = verify::verify_torsion_h(&conn).unwrap();
    assert!(!v.pass);
    assert_eq!(v.observed, "rank 1");
    assert_eq!(v.certificate["h_is_zero"], true);
}

#[test]
fn generator_variants() {
    let conn = example();
    let v = verify::verify_generator_rank(&conn).unwrap();
    let variants = &v.certificate["variants"];
    assert_eq!(variants["t16_literal_t19_skew"]["rank"], 18);
    assert_eq!(variants["t16_literal_t19_skew"]["t16_is_zero"], true);
    assert_eq!(variants["t16_skew_t19_literal"]["rank"], 19);
    assert_eq!(
        variants["t16_skew_t19_literal"]["not_antisymmetric"],
        serde_json::json!(["T19"])
    );
    let literal = build_t_list(
        &normal0(&conn),
        &normal1(&conn),
        GeneratorOptions {
            t16: Variant::Literal,
            t19: Variant::Literal,
        },
    )
    .unwrap();
    assert!(literal.get(16).is_zero());
}

#[test]
fn identification_holds_on_random_connections() {
    for conn in RandomConnectionSpec::default().generate(5) {
        let fam = build_t_list(
            &normal0(&conn),
            &normal1(&conn),
            GeneratorOptions::default(),
        )
        .unwrap();
        let r = curvature(&conn);
        let ricci = tensor_identity(&curvature_trace(&r)).unwrap().into_field();
        let dtheta =
            tensor_identity(&exterior_derivative(&torsion_trace(&torsion(&conn))).unwrap())
                .unwrap()
                .into_field();
        assert_eq!(&fam.get(2).try_sub(fam.get(13)).unwrap(), r.field());
        assert_eq!(fam.get(4), &dtheta.neg().try_sub(&ricci).unwrap());
        assert_eq!(fam.get(7), &ricci.neg());
    }
}

#[test]
fn closed_combinations_satisfy_the_beta_block() {
    let v = verify::verify_uniqueness(&example()).unwrap();
    assert_eq!(v.certificate["closed_beta_dimension"], 3);
    assert_eq!(v.certificate["solutions_rechecked"], true);
}

#[test]
fn dropped_generator_coefficients() {
    let v = verify::verify_dropped_generator(&example()).unwrap();
    assert!(v.pass);
    assert_eq!(
        v.certificate["coefficients"],
        serde_json::json!(["1", "-1", "1", "-1", "1"])
    );
}

#[test]
fn reports_are_deterministic() {
    let spec = RandomConnectionSpec {
        seed: 5,
        ..Default::default()
    };
    let a = verify::run_target(Target::ClosedGenerators, &example(), &spec, 3).unwrap();
    let b = verify::run_target(Target::ClosedGenerators, &example(), &spec, 3).unwrap();
    assert_eq!(verify::render_json(&a), verify::render_json(&b));
    assert_eq!(verify::render_text(&a), verify::render_text(&b));
}

#[test]
fn bianchi_with_other_seeds() {
    let spec = RandomConnectionSpec {
        seed: 7,
        ..Default::default()
    };
    let v = verify::verify_bianchi(&spec, 5).unwrap();
    assert!(v.pass);
    assert_eq!(v.certificate["passed"]["torsion_bianchi"], 5);
    let sym: Vec<Connection> = spec
        .generate(3)
        .iter()
        .map(Connection::symmetrized)
        .collect();
    for c in &sym {
        let counts = verify::check_identities(c).unwrap();
        assert_eq!(counts.torsion_bianchi, 1);
    }
}
