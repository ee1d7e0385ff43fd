use hopfzero::goldens::{self, ORIGINS};

#[test]
fn corpus_parses_and_every_check_has_an_origin() {
    let dir = goldens::default_dir();
    let paths = goldens::fixture_paths(&dir).unwrap();
    assert!(paths.len() >= 10);
    for p in paths {
        let case = goldens::load_fixture(&p).unwrap();
        assert!(!case.checks.is_empty(), "{}", case.name);
        assert!(case.checks.iter().all(|c| ORIGINS.contains(&c.origin.as_str())));
    }
}

#[test]
fn immediate_and_computed_expectations_hold() {
    for origin in ["immediate", "computed"] {
        let report = goldens::run_goldens(Some(origin)).unwrap();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn published_family38_expectations_hold() {
    let report = goldens::run_goldens(Some("published")).unwrap();
    println!("{report}");
    for case in report.cases.iter().filter(|c| c.name.starts_with("family38_b") || c.name == "family37_integrable") {
        assert!(case.passed(), "{}", case.name);
    }
}

#[test]
fn parse_errors_carry_the_fixture_location() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("broken.hz"),
        "dx = -2*y\ndy = 2*x\ndz = x^2 + y^2\nexpect\n  origin computed\n  obstruction jacobi-h 2 =\nend\n",
    )
    .unwrap();
    let report = goldens::run_goldens_in(dir.path(), None).unwrap();
    assert!(!report.passed());
    let e = report.cases[0].error.as_deref().unwrap();
    assert!(e.contains("broken.hz") && e.contains("line 6"), "{e}");
}
