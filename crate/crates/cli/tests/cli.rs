use std::process::Command;

use homvar_cli::{run, Outcome};

fn homvar(args: &[&str]) -> Outcome {
    run(std::iter::once("homvar").chain(args.iter().copied()))
}

#[test]
fn euler_lagrange_components() {
    let out = homvar(&["el", "--dim", "2", "--lagrangian", "q1'^2/2 + q1*q2'"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "epsilon_1 = q2' - q1''\nepsilon_2 = -q1'\n");
    assert!(out.stderr.is_empty());
}

#[test]
fn hilbert_and_delta() {
    let out = homvar(&["hilbert", "--dim", "1", "--lagrangian", "q1''^2/2"]);
    assert_eq!(out.stdout, "theta = -q1'''*dq1 + q1''*dq1'\n");
    let out = homvar(&["delta", "--dim", "1", "--lagrangian", "q1'^2/2"]);
    assert_eq!(out.stdout, "delta = -q1''*dq1\n");
    let out = homvar(&["delta", "--dim", "1", "--form", "-q1''"]);
    assert_eq!(out.stdout, "delta = 0\n");
}

#[test]
fn helmholtz_report() {
    let out = homvar(&["helmholtz", "--dim", "2", "--form", "0; q1"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout,
        "helmholtz = dq1/\\dq2\ndq1/\\dq2 = 1\nvariational = false\n"
    );
    let out = homvar(&["helmholtz", "--dim", "1", "--form", "-q1''"]);
    assert_eq!(out.stdout, "helmholtz = 0\nvariational = true\n");
}

#[test]
fn recovery_modes() {
    let out = homvar(&[
        "recover-first-order",
        "--dim",
        "2",
        "--form",
        "-q1''; -q2''",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("lagrangian = q1'^2/2 + q2'^2/2\n"));
    assert!(out.stdout.ends_with("order = 1\nverified = true\n"));

    let out = homvar(&["recover", "--dim", "1", "--form", "0"]);
    assert_eq!(
        out.stdout,
        "lagrangian = 0\nkappa = 0\norder = none\nverified = true\n"
    );
}

#[test]
fn homogeneity_modes() {
    let out = homvar(&["homogenize", "--dim", "2", "--lagrangian", "q2'^2/2"]);
    assert_eq!(out.stdout, "lagrangian = q2'^2/(2*q1')\n");
    let out = homvar(&[
        "check-homogeneous",
        "--dim",
        "1",
        "--order",
        "1",
        "--lagrangian",
        "q1'^2/2",
    ]);
    assert_eq!(out.stdout, "residual_1 = q1'^2/2\nhomogeneous = false\n");
    let out = homvar(&[
        "check-homogeneous",
        "--dim",
        "1",
        "--order",
        "2",
        "--lagrangian",
        "q1'",
    ]);
    assert_eq!(
        out.stdout,
        "residual_1 = 0\nresidual_2 = 0\nhomogeneous = true\n"
    );
}

#[test]
fn input_errors_exit_one_and_name_the_position() {
    let out = homvar(&["el", "--dim", "1", "--lagrangian", "q1' +* 2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("position 5"), "{}", out.stderr);
    assert!(out.stdout.is_empty());

    let out = homvar(&["recover", "--dim", "2", "--form", "q1; q3"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("position 4"), "{}", out.stderr);

    for args in [
        &["el", "--dim", "0", "--lagrangian", "q1"][..],
        &["el", "--dim", "1"],
        &["recover", "--dim", "2", "--form", "q1"],
        &["check-homogeneous", "--dim", "1", "--lagrangian", "q1'"],
        &[
            "check-homogeneous",
            "--dim",
            "1",
            "--order",
            "1",
            "--lagrangian",
            "q1''",
        ],
        &["el", "--dim", "1", "--order", "1", "--lagrangian", "q1"],
        &["recover", "--dim", "1", "--form", "q1*dq1'"],
        &["unknown", "--dim", "1"],
    ] {
        assert_eq!(homvar(args).code, 1, "{args:?}");
    }
}

#[test]
fn unsupported_inputs_exit_three() {
    for args in [
        &["recover", "--dim", "1", "--form", "-q1'' - sin(q1)"][..],
        &["recover-first-order", "--dim", "1", "--form", "q1''^2"],
        &["recover-first-order", "--dim", "1", "--form", "q1''''"],
        &["homogenize", "--dim", "2", "--lagrangian", "q2''"],
    ] {
        let out = homvar(args);
        assert!(out.code == 3 || out.code == 2, "{args:?}: {out:?}");
    }
    assert_eq!(
        homvar(&["recover-first-order", "--dim", "1", "--form", "q1'''"]).code,
        3
    );
    assert_eq!(
        homvar(&["recover", "--dim", "1", "--form", "-q1'' - sin(q1)"]).code,
        3
    );
}

#[test]
fn not_variational_exits_two_with_report() {
    let out = homvar(&["recover", "--dim", "1", "--form", "q1'*dq1", "--json"]);
    assert_eq!(out.code, 2);
    assert_eq!(
        out.stdout,
        "{\"mode\":\"recover\",\"dim\":1,\"result\":[{\"key\":\"helmholtz\",\"expr\":\"-dq1/\\\\dq1'\"},{\"key\":\"dq1/\\\\dq1'\",\"expr\":\"-1\"}],\"error\":\"not variational\"}\n"
    );
    assert!(out
        .stderr
        .starts_with("error: source form is not variational"));
}

#[test]
fn quiet_suppresses_stdout_only() {
    let out = homvar(&["el", "--dim", "1", "--lagrangian", "q1'^2/2", "--quiet"]);
    assert_eq!((out.code, out.stdout.as_str()), (0, ""));
    let out = homvar(&["recover", "--dim", "1", "--form", "q1'", "--quiet"]);
    assert_eq!((out.code, out.stdout.as_str()), (2, ""));
    assert!(!out.stderr.is_empty());
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(homvar(&["--help"]).code, 0);
    assert!(homvar(&["--version"]).stdout.starts_with("homvar "));
}

#[test]
fn binary_matches_library() {
    let output = Command::new(env!("CARGO_BIN_EXE_homvar"))
        .args(["el", "--dim", "1", "--lagrangian", "q1'^2/2"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(output.stdout).unwrap(),
        "epsilon_1 = -q1''\n"
    );

    let output = Command::new(env!("CARGO_BIN_EXE_homvar"))
        .args(["recover", "--dim", "1", "--form", "q1'*dq1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
