use gdrst_workbench::{generate_dataset, Dataset, GeneratorSpec};

#[test]
fn full_scale_preset_counts_and_connectivity() {
    let data = generate_dataset(&GeneratorSpec::full_scale(1)).unwrap();
    assert_eq!(data.edge_count, 21_693);
    let ds = Dataset::from_text(&data.nodes, &data.edges, &data.pois, None).unwrap();
    let net = &ds.network;
    assert_eq!(net.node_count(), 21_050);
    assert_eq!(net.edge_count(), 21_693);
    assert!(net.edges().all(|(_, _, t)| t >= 1));

    let start = net.node_ids().next().unwrap();
    let mut seen = std::collections::HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for (v, _) in net.neighbors(u) {
            if seen.insert(v) {
                stack.push(v);
            }
        }
    }
    assert_eq!(seen.len(), 21_050);
}

#[test]
fn small_spec_is_deterministic() {
    let mut spec = GeneratorSpec::full_scale(7);
    spec.node_count = 10;
    spec.edge_factor = 1.5;
    let a = generate_dataset(&spec).unwrap();
    let b = generate_dataset(&spec).unwrap();
    assert_eq!((a.nodes, a.edges, a.pois), (b.nodes, b.edges, b.pois));
    assert_eq!(a.edge_count, 15);
}
