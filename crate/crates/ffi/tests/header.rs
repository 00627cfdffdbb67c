//! Compiles and runs a small C client against the generated header and the
//! static library. Skipped when no C compiler or static library is found.

use std::path::{Path, PathBuf};
use std::process::Command;

const CLIENT: &str = r#"
#include <math.h>
#include <stdio.h>
#include "gic.h"

int main(void) {
    GicChannel *c = NULL;
    if (gic_channel_new(10.0, 10.0, 0.25, 0.25, &c) != GIC_STATUS_OK) return 10;
    GicBounds b;
    if (gic_bounds(c, &b) != GIC_STATUS_OK) return 11;
    if (b.regime != GIC_REGIME_LOW_INTERFERENCE_EXACT || !b.has_exact_capacity) return 12;
    GicGenie g;
    if (gic_genie_construct(c, &g) != GIC_STATUS_OK) return 13;
    double r = 0.0;
    if (gic_genie_aided_sum_rate(c, &g, &r) != GIC_STATUS_OK) return 14;
    if (fabs(r - b.tin_lower) > 1e-9) return 15;
    gic_channel_free(c);
    if (gic_channel_new(-1.0, 1.0, 0.0, 0.0, &c) != GIC_STATUS_INVALID_PARAMETER) return 16;
    printf("%.10f %s\n", r, gic_last_error());
    return 0;
}
"#;

fn target_dir() -> Option<PathBuf> {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().ok()?;
    Some(exe.parent()?.parent()?.to_path_buf())
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc)
        .arg("--version")
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|_| cc)
}

#[test]
fn c_client_compiles_and_runs() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let (Some(cc), Some(dir)) = (compiler(), target_dir()) else {
        eprintln!("skipping: no C compiler");
        return;
    };
    let lib = dir.join("libgic_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let work = dir.join("gic-ffi-header-test");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("client.c");
    let exe = work.join("client");
    std::fs::write(&src, CLIENT).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "C client exited with {:?}",
        out.status
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("2.8387190"), "{text}");
    assert!(text.contains("p1"), "{text}");
}
