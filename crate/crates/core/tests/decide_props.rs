use std::collections::BTreeMap;

use proptest::prelude::*;
use surfcob::decide::{
    consistency_audit, decide, decide_cobordant, decide_cobordant_rel_boundary, decide_concordant,
    decide_extends_cobordism, random_queries, AmbientSpec, BoundaryCobordismSpec, Query, Question,
};
use surfcob::framing::{Ambient, Framing, Link};
use surfcob::homology::AbelianGroupPresentation;
use surfcob::json::JsonInt;
use surfcob::surfaces::{ComponentSpec, SurfaceSpec, Verdict};

fn outcome(v: &Verdict) -> (surfcob::surfaces::Answer, Vec<surfcob::surfaces::Obstruction>) {
    (v.answer, v.obstructions.clone())
}

#[test]
fn audit_is_clean_on_random_instances() {
    let mut holds = 0;
    for q in random_queries(11, 2000) {
        let report = consistency_audit(&q);
        assert!(report.is_clean(), "{}\n{}", serde_json::to_string(&q).unwrap(), serde_json::to_string(&report).unwrap());
        holds += report.checks.iter().filter(|c| c.status == surfcob::decide::AuditStatus::Holds).count();
    }
    assert!(holds > 200, "too few non-vacuous checks: {holds}");
}

#[test]
fn audit_of_empty_data_is_empty() {
    let q = Query::new(Question::SpanningExtends, AmbientSpec::s4(), vec![]);
    assert!(consistency_audit(&q).checks.is_empty());
}

#[test]
fn symmetric_questions_ignore_order() {
    for q in random_queries(12, 2000) {
        assert!(q.question.is_symmetric());
        let (v, w) = (decide(&q), decide(&q.swapped()));
        match (v, w) {
            (Ok(v), Ok(w)) => assert_eq!(outcome(&v), outcome(&w)),
            (Err(_), Err(_)) => {}
            (v, w) => panic!("asymmetric failure: {v:?} vs {w:?}"),
        }
    }
}

/// Two surfaces with boundary on a shared link, each with its own base
/// framing, in a connected orientable manifold with boundary.
fn bounded_instance() -> impl Strategy<Value = (AmbientSpec, SurfaceSpec, SurfaceSpec, Option<Vec<JsonInt>>)> {
    (
        1usize..4,
        any::<bool>(),
        proptest::collection::vec(-3i64..=3, 6),
        -6i64..=6,
        -6i64..=6,
        0i64..2,
        0i64..2,
        0i64..2,
    )
        .prop_map(|(k, orientable, offs, ea, eb, ca, cb, u)| {
            let names: Vec<String> = (0..k).map(|i| format!("K{i}")).collect();
            let link = Link::new(names.clone(), Ambient::Generic).unwrap();
            let framing = |shift: usize| {
                Framing::new(
                    link.clone(),
                    names.iter().enumerate().map(|(i, n)| (n.clone(), offs[(i + shift) % 6])).collect(),
                )
                .unwrap()
            };
            let surface = |id: &str, e: i64, c: i64, shift: usize| {
                let mut s = SurfaceSpec {
                    id: id.into(),
                    components: vec![ComponentSpec {
                        id: None,
                        orientable,
                        euler_characteristic: if orientable { 2 - k as i64 } else { 1 - k as i64 },
                        boundary: names.clone(),
                        euler: e,
                    }],
                    boundary_framing: Some(framing(shift)),
                    ..Default::default()
                };
                s.class_mod2 = Some(vec![JsonInt(c.into())]);
                s.class_int = Some(vec![JsonInt(c.into())]);
                s
            };
            let x = AmbientSpec::with_groups(
                true,
                true,
                AbelianGroupPresentation::f2(1),
                AbelianGroupPresentation::free(1),
            );
            (x, surface("a", ea, ca, 0), surface("b", eb, cb, 3), Some(vec![JsonInt(u.into())]))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn product_concordance_matches_rel_boundary((x, a, b, u) in bounded_instance()) {
        let z = BoundaryCobordismSpec::product(&a, &b, u.clone()).unwrap();
        let ext = decide_extends_cobordism(&x, &a, &b, &z).unwrap();
        let rel = decide_cobordant_rel_boundary(&x, &a, &b, u.as_ref()).unwrap();
        prop_assert_eq!(ext.is_yes(), rel.is_yes());
    }

    #[test]
    fn verdicts_survive_common_twist((x, a, b, u) in bounded_instance(), n in -5i64..=5) {
        let (a2, b2) = (a.rebase(n), b.rebase(n));
        let z = BoundaryCobordismSpec {
            e_z: 1,
            ..BoundaryCobordismSpec::product(&a, &b, u.clone()).unwrap()
        };
        let z2 = z.rebase(n);
        prop_assert_eq!(
            outcome(&decide_cobordant_rel_boundary(&x, &a, &b, u.as_ref()).unwrap()),
            outcome(&decide_cobordant_rel_boundary(&x, &a2, &b2, u.as_ref()).unwrap())
        );
        prop_assert_eq!(
            outcome(&decide_extends_cobordism(&x, &a, &b, &z).unwrap()),
            outcome(&decide_extends_cobordism(&x, &a2, &b2, &z2).unwrap())
        );
        prop_assert_eq!(
            outcome(&decide_cobordant(&x, &a, &b).unwrap()),
            outcome(&decide_cobordant(&x, &a2, &b2).unwrap())
        );
        prop_assert_eq!(
            outcome(&decide_concordant(&x, &a, &b, None, u.as_ref()).unwrap()),
            outcome(&decide_concordant(&x, &a2, &b2, None, u.as_ref()).unwrap())
        );
    }

    #[test]
    fn rel_boundary_is_symmetric((x, a, b, u) in bounded_instance()) {
        prop_assert_eq!(
            outcome(&decide_cobordant_rel_boundary(&x, &a, &b, u.as_ref()).unwrap()),
            outcome(&decide_cobordant_rel_boundary(&x, &b, &a, u.as_ref()).unwrap())
        );
    }
}

#[test]
fn query_json_round_trip() {
    let text = r#"{
        "schema_version": "1.0",
        "question": "spanning_extends",
        "ambient": {"orientable": true, "simply_connected": true, "boundary_nonempty": true,
                    "groups": {"h2_f2": {"f2_dim": 1}}},
        "surfaces": [{"id": "s", "components": [{"id": "d", "orientable": true, "euler_characteristic": 1,
                      "boundary": ["K"], "euler": 0}],
                      "boundary_framing": {"link": {"components": ["K"], "ambient": "S3"}, "offsets": {"K": 0}}}],
        "z": {"from": {"components": ["K"], "ambient": "S3"}, "class_f2": [0], "seifert_euler": {"d": 0}}
    }"#;
    let q: Query = serde_json::from_str(text).unwrap();
    let v = decide(&q).unwrap();
    assert!(v.is_yes());
    let back: Query = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
    assert_eq!(back, q);
    let _: BTreeMap<String, i64> = q.z.unwrap().seifert_euler;
}
