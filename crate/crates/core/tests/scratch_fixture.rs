use tokrep::syntax::{ingest_dir, repetition_stats, FilterRuleSet};

#[test]
fn scratch_fixture_ingest() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/java");
    let (functions, summary) = ingest_dir(&dir, &FilterRuleSet::standard()).unwrap();
    eprintln!("files parsed {} skipped {:?}", summary.files_parsed, summary.files_skipped);
    eprintln!("functions {} events {}", summary.functions, summary.events);
    let stats = repetition_stats(&functions, 25).unwrap();
    eprintln!("cared fraction {:.4}", stats.cared_fraction);
    eprintln!("class rates: {:?}", stats.classes.iter().map(|c| (c.name.clone(), c.total, (c.rate*1000.0).round()/1000.0)).collect::<Vec<_>>());
    let mi = stats.bucket(tokrep::syntax::NodeClass::FilteredSimpleName, "MethodInvocation");
    eprintln!("method-name bucket: {:?}", mi.map(|b| (b.total, b.repeated, b.rate)));
    assert!(summary.files_skipped.is_empty(), "all fixture files must parse");
}
