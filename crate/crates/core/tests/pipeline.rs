mod common;

use popcolor::bnb::MipStatus;
use popcolor::pipeline::{bench, read_csv, run_instance, write_csv, Bound, PipelineError, SolveOptions};
use popcolor::{ModelKind, Rational};

fn copy_data(names: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for name in names {
        let file = format!("{name}.col");
        std::fs::copy(common::data_dir().join(&file), dir.path().join(&file)).unwrap();
    }
    dir
}

fn finite(v: usize) -> Bound {
    Bound::Finite(Rational::from(v))
}

#[test]
fn myciel3_under_poph2() {
    let recs =
        run_instance(&common::data_dir().join("myciel3.col"), &[ModelKind::Poph2], &SolveOptions::default()).unwrap();
    assert_eq!((recs[0].lb.clone(), recs[0].ub.clone()), (finite(4), finite(4)));
    assert_eq!((recs[0].v, recs[0].e, recs[0].density_class), (11, 20, 4));
}

#[test]
fn queen5_5_under_pop2() {
    let recs =
        run_instance(&common::data_dir().join("queen5_5.col"), &[ModelKind::Pop2], &SolveOptions::default()).unwrap();
    assert_eq!((recs[0].lb.clone(), recs[0].ub.clone()), (finite(5), finite(5)));
    assert_eq!(recs[0].status, MipStatus::Optimal);
}

#[test]
fn bench_directory_sweep() {
    let dir = copy_data(&["myciel3", "queen5_5"]);
    let kinds = [ModelKind::Ass, ModelKind::Pop2, ModelKind::Poph2];
    let report = bench(dir.path(), &kinds, &SolveOptions::default(), 2).unwrap();
    assert_eq!(report.records.len(), 6);
    let order: Vec<(&str, ModelKind)> = report.records.iter().map(|r| (r.instance.as_str(), r.model)).collect();
    assert_eq!(order[0], ("myciel3", ModelKind::Ass));
    assert_eq!(order[5], ("queen5_5", ModelKind::Poph2));
    for kind in kinds {
        let (solved, attempted) = report
            .summary
            .iter()
            .filter(|((k, _), _)| *k == kind)
            .fold((0, 0), |(s, a), (_, (ds, da))| (s + ds, a + da));
        assert_eq!((solved, attempted), (2, 2));
    }
    for r in &report.records {
        assert!(r.lb <= r.ub);
    }

    let mut buf = Vec::new();
    write_csv(&report.records, &mut buf).unwrap();
    assert_eq!(read_csv(buf.as_slice()).unwrap(), report.records);
}

#[test]
fn empty_directory_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = bench(dir.path(), &[ModelKind::Ass], &SolveOptions::default(), 1).unwrap_err();
    assert!(matches!(err, PipelineError::EmptyDirectory(_)));
    assert!(err.is_input_error());
}

#[test]
fn unreadable_and_malformed_files() {
    let err = run_instance(std::path::Path::new("/no/such/file.col"), &[ModelKind::Ass], &SolveOptions::default());
    assert!(matches!(err, Err(PipelineError::Io { .. })));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "p edge 2 1\ne 1 3\n").unwrap();
    let err = run_instance(&bad, &[ModelKind::Ass], &SolveOptions::default()).unwrap_err();
    assert!(matches!(err, PipelineError::Parse { .. }) && err.is_input_error());
}
