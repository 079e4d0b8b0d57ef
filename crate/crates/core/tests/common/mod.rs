#![allow(dead_code)]

pub mod gen;

use std::path::{Path, PathBuf};

pub struct GoldenCase {
    pub name: &'static str,
    pub session: &'static str,
    pub args: &'static [&'static str],
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "example_a_report.txt",
        session: "example_a.json",
        args: &["report"],
    },
    GoldenCase {
        name: "example_a_report.json",
        session: "example_a.json",
        args: &["report", "--json"],
    },
    GoldenCase {
        name: "example_a_value.txt",
        session: "example_a.json",
        args: &["value", "-e", "x^2+x*y"],
    },
    GoldenCase {
        name: "example_a_residue.txt",
        session: "example_a.json",
        args: &["residue", "-e", "(x+y)/y", "-e", "x*y/(x^2+y^2)", "-e", "x^3/y^2"],
    },
    GoldenCase {
        name: "example_a_realize.txt",
        session: "example_a.json",
        args: &["realize"],
    },
    GoldenCase {
        name: "example_a_adjoin.json",
        session: "example_a.json",
        args: &["adjoin", "--json", "-e", "x/y", "-e", "y^2/x"],
    },
    GoldenCase {
        name: "injective_report.txt",
        session: "injective.json",
        args: &["report"],
    },
    GoldenCase {
        name: "injective_report.json",
        session: "injective.json",
        args: &["report", "--json"],
    },
    GoldenCase {
        name: "injective_value.txt",
        session: "injective.json",
        args: &["value", "--digits", "6", "-e", "x + y^2", "-e", "x*y/(x^2 + y)"],
    },
    GoldenCase {
        name: "swap_group.txt",
        session: "swap.json",
        args: &[
            "group-check",
            "-e",
            "(x^2+y^2)/(x*y)",
            "-e",
            "x/y",
            "-e",
            "(x^4+y^4)/(x^2*y^2)",
        ],
    },
    GoldenCase {
        name: "swap_group.json",
        session: "swap.json",
        args: &["group-check", "--json", "-e", "(x^2+y^2)/(x*y)"],
    },
    GoldenCase {
        name: "swap_report.txt",
        session: "swap.json",
        args: &["report"],
    },
];

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

/// Runs a golden case in-process; returns (exit code, stdout).
pub fn run_case(case: &GoldenCase) -> (i32, String) {
    let session = tests_dir().join("data").join(case.session);
    let mut args = vec![
        "monoval".to_string(),
        "--session".into(),
        session.display().to_string(),
    ];
    args.extend(case.args.iter().map(|a| a.to_string()));
    let out = monoval::cli::run(args);
    (out.code, out.stdout)
}

/// Compares a case against its golden file, rewriting it when
/// `UPDATE_GOLDEN` is set. Returns a description of the mismatch, if any.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let (code, first) = run_case(case);
    if code != 0 {
        return Err(format!("{}: exit code {code}", case.name));
    }
    let (_, second) = run_case(case);
    if first != second {
        return Err(format!("{}: output differs between runs", case.name));
    }
    let path = tests_dir().join("golden").join(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != first {
        return Err(format!("{}: output differs from golden file", case.name));
    }
    Ok(())
}
