//! Pins the serialized forms of the public interchange types. These shapes
//! are consumed by external tooling; changing them is a breaking change.

use specdec::oracle::{CampaignConfig, run_campaign};
use specdec::{
    GraphSpec, HerglotzRational, Multiplicity, OperatorSpec, SpectralPoint, SpectrumSet,
};

#[test]
fn graph_spec_shape() {
    let spec: GraphSpec = serde_json::from_str(r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[0,3]],"root":0}"#).unwrap();
    assert_eq!(spec.n, 4);
    assert_eq!(spec.root, Some(0));
    let g = spec.to_graph().unwrap();
    assert_eq!(g.edge_count(), 4);

    // root is optional and omitted when absent
    let unrooted = GraphSpec::new(2, vec![[0, 1]], None);
    assert_eq!(serde_json::to_string(&unrooted).unwrap(), r#"{"n":2,"edges":[[0,1]]}"#);
}

#[test]
fn operator_spec_dense_shape() {
    let spec: OperatorSpec =
        serde_json::from_str(r#"{"dim":2,"entries":[[1.0,-1.0],[-1.0,1.0]]}"#).unwrap();
    let op = spec.resolve(|_| unreachable!("dense form loads no files")).unwrap();
    assert_eq!(op.dim(), 2);
    assert_eq!(op.get(0, 1), -1.0);
}

#[test]
fn operator_spec_laplacian_shapes() {
    let inline: OperatorSpec =
        serde_json::from_str(r#"{"laplacian_of":{"n":3,"edges":[[0,1],[1,2],[0,2]]}}"#).unwrap();
    let op = inline.resolve(|_| unreachable!("inline form loads no files")).unwrap();
    assert_eq!(op.get(0, 0), 2.0);

    let by_path: OperatorSpec = serde_json::from_str(r#"{"laplacian_of":"base.json"}"#).unwrap();
    let op = by_path
        .resolve(|path| {
            assert_eq!(path, "base.json");
            Ok(GraphSpec::new(2, vec![[0, 1]], None))
        })
        .unwrap();
    assert_eq!(op.get(0, 0), 1.0);
}

#[test]
fn herglotz_map_shape() {
    let map = HerglotzRational::new(-2.0, vec![1.0], vec![2.0]).unwrap();
    let json = serde_json::to_value(&map).unwrap();
    assert_eq!(json["c"], -2.0);
    assert_eq!(json["poles"][0], 1.0);
    assert_eq!(json["weights"][0], 2.0);
    let back: HerglotzRational = serde_json::from_value(json).unwrap();
    assert_eq!(back, map);
}

#[test]
fn spectrum_shape_with_both_multiplicity_forms() {
    let set = SpectrumSet::new(
        vec![[0.0, 1.5], [3.0, 4.0]],
        vec![
            SpectralPoint { value: 3.0, multiplicity: Multiplicity::Extensive },
            SpectralPoint { value: 5.0, multiplicity: Multiplicity::Finite(2) },
        ],
    )
    .unwrap();
    let json = serde_json::to_string(&set).unwrap();
    assert_eq!(
        json,
        r#"{"intervals":[[0.0,1.5],[3.0,4.0]],"points":[{"value":3.0,"multiplicity":"extensive"},{"value":5.0,"multiplicity":2}]}"#
    );
    let back: SpectrumSet = serde_json::from_str(&json).unwrap();
    assert_eq!(back, set);
}

#[test]
fn campaign_report_shape() {
    let config = CampaignConfig { cases: 2, seed: 9, ..CampaignConfig::default() };
    let report = run_campaign(&config).unwrap();
    let json = serde_json::to_value(&report).unwrap();
    assert_eq!(json["seed"], 9);
    assert_eq!(json["cases"].as_array().unwrap().len(), 2);
    let case = &json["cases"][0];
    assert!(case["descriptor"].is_string());
    let check = &case["checks"][0];
    for key in ["name", "pass", "max_error", "tol"] {
        assert!(!check[key].is_null(), "check is missing {key}");
    }
    let passed = json["summary"]["passed"].as_u64().unwrap();
    let failed = json["summary"]["failed"].as_u64().unwrap();
    assert_eq!(passed + failed, 2);
}
