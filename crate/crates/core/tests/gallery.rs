use ndschaos::gallery::{load_from_manifest, load_gallery, AnySystem, GALLERY_IDS, GALLERY_JSON};
use ndschaos::{weak_mixing_probe, Error, OrbitCursor};

#[test]
fn every_entry_loads_and_reverifies() {
    for id in GALLERY_IDS {
        let g = load_gallery(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(g.id, id);
        assert!(!g.periodic_points.is_empty(), "{id}");
    }
    assert!(matches!(load_gallery("henon"), Err(Error::UnknownGallery(_))));
}

#[test]
fn real_periodic_points_return_closely() {
    for id in ["logistic-autonomous", "tent", "doubling", "expanding-family"] {
        let g = load_gallery(id).unwrap();
        let sys = g.real().unwrap();
        for (p, k) in &g.periodic_points {
            let x = p.as_real().unwrap();
            let mut c = OrbitCursor::new(sys, x).unwrap();
            let back = *c.advance_to(*k).unwrap();
            assert!((back - x).abs() <= 1e-12, "{id} {x} -> {back}");
        }
    }
}

#[test]
fn mixing_claims_reproduce() {
    for id in GALLERY_IDS {
        let g = load_gallery(id).unwrap();
        let (Some(m), AnySystem::Real(sys)) = (&g.mixing, &g.system) else { continue };
        let w = weak_mixing_probe(
            sys,
            (((m.u1[0], m.u1[1]), (m.v1[0], m.v1[1])), ((m.u2[0], m.u2[1]), (m.v2[0], m.v2[1]))),
            m.horizon,
            m.sample_density,
        )
        .unwrap()
        .unwrap_or_else(|| panic!("{id}: no witness"));
        let mut a = OrbitCursor::new(sys, w.x1).unwrap();
        let x = *a.advance_to(w.n).unwrap();
        assert!(m.v1[0] < x && x < m.v1[1], "{id}");
    }
}

#[test]
fn user_manifests_fail_closed() {
    let mut v: serde_json::Value = serde_json::from_str(GALLERY_JSON).unwrap();
    let tent = v["systems"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["id"] == "tent")
        .unwrap();
    tent["separated_pairs"][0]["delta"] = serde_json::json!("1/2");
    let text = serde_json::to_string(&v).unwrap();
    assert!(matches!(load_from_manifest(&text, "tent"), Err(Error::CorruptGallery(_))));

    let mut v: serde_json::Value = serde_json::from_str(GALLERY_JSON).unwrap();
    let doubling = v["systems"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|s| s["id"] == "doubling")
        .unwrap();
    // B_2 no longer sits inside the image of B_1
    doubling["nested"]["levels"][1]["b"] = serde_json::json!(["5/8", "9/8"]);
    let text = serde_json::to_string(&v).unwrap();
    assert!(load_from_manifest(&text, "doubling").is_err());
}
