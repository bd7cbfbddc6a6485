//! Black-box tests of the `primesine` binary: exit codes, output schemas,
//! environment handling. Every invocation scrubs the PRIMESINE_* variables
//! first so tests are hermetic regardless of the caller's shell.

use std::process::{Command, Output};

use serde_json::Value;

const ENV_VARS: [&str; 7] = [
    "PRIMESINE_STRATEGY",
    "PRIMESINE_OUTPUT",
    "PRIMESINE_MAX_TABLE_M",
    "PRIMESINE_PI_CAP",
    "PRIMESINE_OMEGA_CAP",
    "PRIMESINE_SIEVE_CAP",
    "PRIMESINE_FACTORIZE_CAP",
];

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_primesine"));
    for var in ENV_VARS {
        cmd.env_remove(var);
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_str(stdout_of(out).trim()).expect("one JSON record on stdout")
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["chi", "1"],                          // below the n >= 2 precondition
        &["verify", "--max", "1"],              // sweep needs max >= 2
        &["pi", "10", "--bootstrap"],           // bootstrap is a v2 concept
        &["chi"],                               // missing positional
        &["chi", "29", "--nope"],               // unknown flag
        &["chi", "29", "--strategy", "wild"],   // unknown strategy
        &["chi", "29", "--strategy", "highprec:52"], // below the 53-bit floor
        &["nope"],                              // unknown subcommand
        &[
            "precision", "--m-max", "5", "--n-max", "5", "--find-first", "--dump-factors",
        ], // the two modes conflict
        &["precision", "--m-max", "5"],         // --n-max is required
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn cap_errors_exit_3() {
    let cases: &[&[&str]] = &[
        &["pi", "200000"],                       // default pi cap is 10^5
        &["pi", "100", "--pi-cap", "50"],        // explicit tighter cap
        &["chi", "127", "--max-table-m", "5"],   // prime forces m up to 11
        &["omega", "20000"],                     // default omega cap is 10^4
        &["pi", "100", "--form", "v2", "--sieve-cap", "5"], // inner sieve to 10
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(3), "args {args:?}");
    }
}

#[test]
fn chi_json_record_shape() {
    let out = run(&["chi", "29", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["command"], "chi");
    assert_eq!(v["inputs"]["n"], 29);
    assert_eq!(v["inputs"]["form"], "integers");
    assert_eq!(v["result"]["chi"], 1);
    assert_eq!(v["result"]["terms_evaluated"], 4);
    assert_eq!(v["strategy"], "reduced");
    assert!(v["elapsed_ns"].is_u64());
}

#[test]
fn csv_payloads_are_byte_stable() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["chi", "29", "--output", "csv"],
            "n,chi,form,terms_evaluated,strategy\n29,1,integers,4,reduced\n",
        ),
        (
            &["pi", "100", "--output", "csv"],
            "x,count,form,source,strategy\n100,25,v1,direct,reduced\n",
        ),
        (
            &["pi", "100", "--form", "v2", "--output", "csv"],
            "x,count,form,source,strategy\n100,25,v2,oracle,reduced\n",
        ),
        (
            &["omega", "30", "--output", "csv"],
            "n,omega,contributing_primes,strategy\n30,3,2 3 5,reduced\n",
        ),
        (
            &["precision", "--m-max", "2", "--n-max", "50", "--output", "csv"],
            "m,n_lo,n_hi,strategy,max_deviation,misclassification_count\n2,1,50,reduced,0,0\n",
        ),
        (
            &[
                "precision", "--m-max", "5", "--n-max", "100", "--find-first", "--output", "csv",
            ],
            "n,m,raw_product\n",
        ),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "args {args:?}");
        assert_eq!(stdout_of(&out), *expected, "args {args:?}");
    }
}

#[test]
fn text_lines_are_stable() {
    let out = run(&["chi", "29"]);
    assert_eq!(
        stdout_of(&out),
        "chi(29) = 1  [form=integers terms=4 strategy=reduced]\n"
    );
    let out = run(&["omega", "30"]);
    assert_eq!(stdout_of(&out), "omega(30) = 3  [primes=2,3,5]\n");
}

#[test]
fn strategy_env_is_used_and_flag_wins() {
    let out = run_env(
        &["chi", "29", "--output", "json"],
        &[("PRIMESINE_STRATEGY", "naive")],
    );
    assert_eq!(json_of(&out)["strategy"], "naive");

    let out = run_env(
        &["chi", "29", "--strategy", "reduced", "--output", "json"],
        &[("PRIMESINE_STRATEGY", "naive")],
    );
    assert_eq!(json_of(&out)["strategy"], "reduced");

    let out = run_env(
        &["chi", "29", "--output", "json"],
        &[("PRIMESINE_STRATEGY", "highprec:64")],
    );
    assert_eq!(json_of(&out)["strategy"], "highprec:64");
}

#[test]
fn cap_env_is_used_and_flag_wins() {
    let out = run_env(&["pi", "100"], &[("PRIMESINE_PI_CAP", "50")]);
    assert_eq!(out.status.code(), Some(3));

    let out = run_env(
        &["pi", "100", "--pi-cap", "1000"],
        &[("PRIMESINE_PI_CAP", "50")],
    );
    assert_eq!(out.status.code(), Some(0));

    let out = run_env(&["chi", "29", "--output", "csv"], &[("PRIMESINE_OUTPUT", "json")]);
    assert!(stdout_of(&out).starts_with("n,chi"), "flag beats env output");
}

#[test]
fn json_payloads_are_deterministic_modulo_elapsed() {
    let args = [
        "precision", "--m-max", "10", "--n-max", "200", "--strategy", "naive", "--output", "json",
    ];
    let mut canonical = Vec::new();
    for _ in 0..2 {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        let mut v = json_of(&out);
        assert!(v["elapsed_ns"].is_u64());
        v.as_object_mut().unwrap().remove("elapsed_ns");
        canonical.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(canonical[0], canonical[1]);
}

#[test]
fn dump_factors_csv_lists_every_factor() {
    let out = run(&[
        "precision", "--m-lo", "5", "--m-max", "5", "--n-lo", "6", "--n-max", "7",
        "--dump-factors", "--strategy", "naive", "--output", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("m,n,j,numerator_arg,numerator,denominator,ratio")
    );
    // Two values of n, four factors each — the dump never short-circuits.
    assert_eq!(lines.count(), 8);
}

#[test]
fn bench_reports_agreeing_counts() {
    let out = run(&["bench", "--x", "1000", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["counts_agree"], true);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row["count"], 168, "row {row}");
        assert!(row["elapsed_ns"].is_u64());
    }
}

#[test]
fn bench_csv_schema() {
    let out = run(&["bench", "--x", "100", "--forms", "v1,sieve", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "form,x,count,elapsed_ns");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("v1,100,25,"));
    assert!(lines[2].starts_with("sieve,100,25,"));
}

#[test]
fn help_and_version_exit_0() {
    for args in [&["--help"][..], &["--version"][..], &["chi", "--help"][..]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "args {args:?}");
    }
}

#[test]
fn verify_summary_counts_the_swept_range() {
    let out = run(&["verify", "--max", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(
        text.starts_with("299/299 agree\n"),
        "unexpected summary: {text}"
    );
    assert!(text.contains("v1=62 v2=62 sieve=62"));
}
