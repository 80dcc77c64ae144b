use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn header() -> String {
    std::fs::read_to_string(manifest_dir().join("include/bandit_lab.h")).unwrap()
}

#[test]
fn header_declares_the_api() {
    let text = header();
    for symbol in [
        "typedef struct BlEnvironment BlEnvironment;",
        "typedef struct BlSummary BlSummary;",
        "BL_STATUS_OK = 0",
        "BL_STATUS_INFEASIBLE = 3",
        "BL_POLICY_UCB_DT_MU = 1",
        "bl_environment_from_preset(",
        "bl_run_batch(",
        "bl_bargain_analyze(",
        "bl_lambert_w(",
        "bl_last_error_message(void)",
    ] {
        assert!(text.contains(symbol), "missing {symbol}");
    }
}

fn static_library() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    profile_dir.join("libbandit_lab_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let lib = static_library();
    assert!(lib.exists(), "{} not built", lib.display());
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let compile = Command::new("cc")
        .arg(manifest_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("cc is required for this test");
    assert!(compile.status.success(), "{}", String::from_utf8_lossy(&compile.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(stdout, "n_full 7922.790042\nn_bargain 758.186058\narms 2\nregret_positive 1\nbad_preset 2 message\n");
}
