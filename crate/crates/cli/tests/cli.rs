use std::process::{Command, Output};

use negacirc_core::census::CensusReport;
use negacirc_core::report::{parse_envelope, parse_survey_csv, ClassificationDoc, CodeDoc, FactorReportDoc};
use negacirc_core::{classify, FactorCase};

fn run(args: &[&str], seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_negacirc"));
    cmd.args(args).env("RUST_LOG", "error").env_remove("NEGACIRC_SEED");
    if let Some(s) = seed {
        cmd.env("NEGACIRC_SEED", s);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_exit_codes() {
    let o = run(&["classify", "--p", "7", "--q", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let env = parse_envelope::<ClassificationDoc>(&stdout(&o)).unwrap();
    assert_eq!(env.result.case, FactorCase::SelfReciprocalPair);
    assert_eq!(env.result.to_report().unwrap(), classify(7, 3).unwrap());

    let o = run(&["classify", "--p", "11", "--q", "3"], None);
    assert_eq!(o.status.code(), Some(1));
    let env = parse_envelope::<ClassificationDoc>(&stdout(&o)).unwrap();
    assert_eq!(env.result.case, FactorCase::ReciprocalPair);

    assert_eq!(run(&["classify", "--p", "3", "--q", "5"], None).status.code(), Some(1));
    assert_eq!(run(&["classify", "--p", "9", "--q", "3"], None).status.code(), Some(2));
    assert_eq!(run(&["classify", "--p", "7", "--q", "6"], None).status.code(), Some(2));
    assert_eq!(run(&["classify", "--p", "7"], None).status.code(), Some(2));
    assert_eq!(run(&["classify", "--p", "7", "--q", "3", "--format", "csv"], None).status.code(), Some(2));
}

#[test]
fn census_double_exhaustive() {
    let o = run(&["census-double", "--p", "3", "--q", "11", "--mode", "exhaustive"], None);
    assert_eq!(o.status.code(), Some(0));
    let env = parse_envelope::<CensusReport>(&stdout(&o)).unwrap();
    assert_eq!(env.result.exhaustive_count.unwrap().to_string(), "1728");
    assert!(env.result.agree);
    assert_eq!(env.config.parameters["mode"], "exhaustive");

    let o = run(&["census-double", "--p", "11", "--q", "3"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypotheses not met"));
}

#[test]
fn seed_from_environment_and_flag() {
    let args = ["census-four", "--p", "3", "--q", "11", "--mode", "sample", "--samples", "20"];
    let a = parse_envelope::<CensusReport>(&stdout(&run(&args, Some("77")))).unwrap();
    assert_eq!(a.config.seed, 77);
    assert_eq!(a.result.samples.as_ref().unwrap().seed, 77);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    let b = parse_envelope::<CensusReport>(&stdout(&run(&with_flag, Some("77")))).unwrap();
    assert_eq!(b.config.seed, 5);
}

#[test]
fn out_file_and_survey_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("survey.csv");
    let o = run(
        &["survey", "--q", "3", "--p-max", "50", "--format", "csv", "--workers", "2", "--out", path.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# schema_version=1 command=survey seed=20240101 workers=2\n"));
    let primitive: Vec<u64> = parse_survey_csv(&text).unwrap().into_iter().filter(|r| r.primitive).map(|r| r.p).collect();
    assert_eq!(primitive, [7, 19, 31, 43]);
    assert_eq!(run(&["survey", "--q", "9", "--p-max", "2000000"], None).status.code(), Some(2));
    assert_eq!(run(&["survey", "--q", "4", "--p-max", "50"], None).status.code(), Some(2));
}

#[test]
fn factor_and_mindist() {
    let o = run(&["factor", "--q", "11", "--poly", "1,0,0,0,0,0,1"], None);
    let env = parse_envelope::<FactorReportDoc>(&stdout(&o)).unwrap();
    let polys: Vec<&str> = env.result.factorization.factors.iter().map(|f| f.poly.as_str()).collect();
    assert_eq!(polys, ["1,0,1", "1,5,1", "1,6,1"]);
    assert_eq!(run(&["factor", "--q", "11", "--poly", "1,x"], None).status.code(), Some(2));

    // a self-dual [12, 6] code from the (3, 11) census
    let o = run(&["mindist", "--q", "11", "--n", "6", "--a", "1,5,1"], None);
    assert_eq!(o.status.code(), Some(0));
    let code = parse_envelope::<CodeDoc>(&stdout(&o)).unwrap().result;
    assert_eq!((code.length, code.dimension), (12, 6));

    let o = run(&["mindist", "--q", "11", "--n", "6", "--a", "1,5,1", "--budget", "1000"], None);
    assert_eq!(o.status.code(), Some(1));
}
