use std::time::Instant;

fn main() {
    let dir = hopfzero::goldens::default_dir();
    for path in hopfzero::goldens::fixture_paths(&dir).unwrap() {
        let t = Instant::now();
        let case = hopfzero::goldens::load_fixture(&path).unwrap();
        let out = hopfzero::goldens::run_case(&case, None);
        let report = hopfzero::goldens::GoldenReport { cases: vec![out] };
        print!("{report}");
        println!("  ({:.1?})", t.elapsed());
    }
}
