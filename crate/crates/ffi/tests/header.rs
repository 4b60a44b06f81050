use std::path::Path;
use std::process::Command;

const EXPORTED: &[&str] = &[
    "hs_last_error",
    "hs_grid_new",
    "hs_grid_free",
    "hs_grid_d_bound",
    "hs_grid_growth",
    "hs_grid_ring_size",
    "hs_grid_distance",
    "hs_dhrg_generate",
    "hs_dhrg_free",
    "hs_dhrg_size",
    "hs_dhrg_edges",
    "hs_dhrg_loglik",
    "hs_dhrg_local_search",
    "hs_dhrg_betweenness",
];

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hyperseg.h")
}

#[test]
fn declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTED {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct HsGrid HsGrid;"));
}

#[test]
fn compiles_as_c() {
    let Ok(out) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"]).arg(header()).output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
