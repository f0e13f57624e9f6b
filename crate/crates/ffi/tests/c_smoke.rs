use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "chaoscope.h"

int main(void) {
    ChaoscopeMap *tent = NULL;
    char *out = NULL;
    if (chaoscope_map_builtin("tent", &tent) != CHAOSCOPE_STATUS_OK) return 1;
    if (chaoscope_map_eval(tent, "3/7", &out) != CHAOSCOPE_STATUS_OK) return 2;
    if (strcmp(out, "6/7") != 0) return 3;
    chaoscope_string_free(out);
    if (chaoscope_map_eval(tent, "5", &out) != CHAOSCOPE_STATUS_DOMAIN) return 4;
    if (chaoscope_last_error_message() == NULL) return 5;
    if (!chaoscope_sharkovsky_precedes(3, 5)) return 6;
    chaoscope_map_free(tent);
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler on PATH; skipping");
        return;
    }
    // Test builds only produce the rlib, so build the archive in a side
    // target directory (a separate lock from the running cargo).
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = manifest.join("../../target/c-smoke");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let built = Command::new(cargo)
        .args([
            "build",
            "--offline",
            "--lib",
            "-p",
            "chaoscope-ffi",
            "--target-dir",
        ])
        .arg(&target)
        .current_dir(&manifest)
        .output()
        .unwrap();
    assert!(
        built.status.success(),
        "{}",
        String::from_utf8_lossy(&built.stderr)
    );
    let lib = target.join("debug/libchaoscope_ffi.a");
    let include = manifest.join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let build = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
