//! End-to-end tests of the `gddtool` binary: subcommand behaviour and the
//! exit-code contract (0 ok, 1 usage, 2 verification failure, 3 not-exists /
//! exhausted, 4 open / timeout, 5 missing ingredient).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn catalog_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn gddtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gddtool"))
        .args(args)
        .env("GDDTOOL_CATALOG", catalog_dir())
        .output()
        .expect("spawn gddtool")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn status_exit_codes() {
    let refuted = gddtool(&["status", "2", "6", "5"]);
    assert_eq!(refuted.status.code(), Some(3));
    assert!(stdout(&refuted).contains("NotExists"));

    assert_eq!(gddtool(&["status", "14", "9", "11"]).status.code(), Some(0));
    assert_eq!(
        gddtool(&["status", "56", "9", "206"]).status.code(),
        Some(4)
    );
    assert_eq!(gddtool(&["status", "2", "5"]).status.code(), Some(3));
    assert_eq!(gddtool(&["status", "3", "5"]).status.code(), Some(0));

    let json = gddtool(&["status", "2", "6", "5", "--json"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(payload["verdict"], "NotExists");
    assert!(payload["congruences"].is_object());
}

#[test]
fn expand_then_verify_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let out_path = tmp.path().join("d.gddx");
    let spec = catalog_dir().join("4^5_10^2.gdd");
    let expand = gddtool(&[
        "expand",
        spec.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        expand.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&expand.stderr)
    );

    let verify = gddtool(&["verify", out_path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("110 blocks"));

    // corrupt the expansion: drop a block line
    let text = std::fs::read_to_string(&out_path).unwrap();
    let cut = text
        .lines()
        .filter(|l| !l.starts_with("block: 0 1"))
        .collect::<Vec<_>>()
        .join("\n");
    let bad_path = tmp.path().join("bad.gddx");
    std::fs::write(&bad_path, cut).unwrap();
    let bad = gddtool(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn search_exit_codes_and_output() {
    let refuted = gddtool(&["search", "2^4"]);
    assert_eq!(refuted.status.code(), Some(3));
    assert!(stdout(&refuted).contains("Exhausted"));

    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("3^4.gddx");
    let found = gddtool(&["search", "3^4", "-o", path.to_str().unwrap()]);
    assert_eq!(found.status.code(), Some(0));
    let verify = gddtool(&["verify", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));

    let no_symmetry = gddtool(&["search", "2^4", "--no-symmetry"]);
    assert_eq!(no_symmetry.status.code(), Some(3));
}

#[test]
fn construct_recipe_and_missing_ingredient() {
    let tmp = tempfile::tempdir().unwrap();
    let rcp = tmp.path().join("pipeline.rcp");
    std::fs::write(
        &rcp,
        "# hole-filling pipeline\n(fill_holes\n  (wfc_inflate_dgdd (td 4 3) h=1 u=4\n    (remove_parallel_class (rgdd 4 4) 0))\n  m=3 fill=(search 3^4_3^1))\n",
    )
    .unwrap();
    let out_path = tmp.path().join("12^4_3^1.gddx");
    let run = gddtool(&[
        "construct",
        rcp.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout(&run).contains("fill_holes m=3 -> 12^4 3^1"));
    assert_eq!(
        gddtool(&["verify", out_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    let bad = tmp.path().join("missing.rcp");
    std::fs::write(&bad, "(inflate_uniform (td 4 3) r=6)\n").unwrap();
    let run = gddtool(&["construct", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&run.stderr).contains("6^4"));
}

#[test]
fn algebra_commands() {
    let mols = gddtool(&["mols", "5"]);
    assert_eq!(mols.status.code(), Some(0));
    assert_eq!(stdout(&mols).matches("square").count(), 4);

    let tmp = tempfile::tempdir().unwrap();
    let td_path = tmp.path().join("td.gddx");
    assert_eq!(
        gddtool(&["td", "4", "5", "-o", td_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        gddtool(&["verify", td_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    let rgdd_path = tmp.path().join("rgdd.gddx");
    assert_eq!(
        gddtool(&["rgdd", "4", "4", "-o", rgdd_path.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let verify = gddtool(&["verify", rgdd_path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("resolution"));

    assert_eq!(gddtool(&["mols", "6"]).status.code(), Some(1));
}

#[test]
fn catalog_commands() {
    let list = gddtool(&["catalog", "list"]);
    assert_eq!(list.status.code(), Some(0));
    assert!(stdout(&list).lines().count() >= 45);

    let verify = gddtool(&["catalog", "verify", "--threads", "2"]);
    assert_eq!(verify.status.code(), Some(0), "{}", stdout(&verify));
    assert!(stdout(&verify).contains("0 failures"));

    let json = gddtool(&["catalog", "verify", "--json"]);
    let payload: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(payload["failures"], 0);
}

#[test]
fn corrupted_catalog_entry_is_caught() {
    // copy the catalog, flip one base-block point, expect a pair witness
    let tmp = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(catalog_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.is_file() {
            std::fs::copy(&path, tmp.path().join(path.file_name().unwrap())).unwrap();
        }
    }
    let victim = tmp.path().join("4^5_10^2.gdd");
    let text = std::fs::read_to_string(&victim).unwrap();
    let corrupted = text.replacen("block 0 1 20 39", "block 0 1 20 38", 1);
    assert_ne!(text, corrupted);
    std::fs::write(&victim, corrupted).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_gddtool"))
        .args(["catalog", "verify"])
        .env("GDDTOOL_CATALOG", tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("4^5_10^2") && text.contains("FAIL"), "{text}");
}

#[test]
fn signatureless_entry_warns_but_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let src = catalog_dir().join("4^5_10^2.gdd");
    let text = std::fs::read_to_string(src).unwrap();
    let stripped: String = text
        .lines()
        .filter(|l| !l.starts_with("sig"))
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(tmp.path().join("4^5_10^2.gdd"), stripped).unwrap();

    let out = Command::new(env!("CARGO_BIN_EXE_gddtool"))
        .args(["catalog", "verify"])
        .env("GDDTOOL_CATALOG", tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("no sig") || text.contains("no signature"),
        "{text}"
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(gddtool(&["nonsense"]).status.code(), Some(1));
    assert_eq!(gddtool(&["status"]).status.code(), Some(1));
    assert_eq!(gddtool(&["search", "2^x"]).status.code(), Some(1));
    assert_eq!(gddtool(&["--help"]).status.code(), Some(0));
}
