use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn pslab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("PSLAB_SEED")
        .output()
        .expect("spawn pslab")
}

/// The only run directory under `out`.
pub fn run_dir(out: &Path) -> PathBuf {
    let dirs: Vec<PathBuf> = fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

/// Compares against `tests/golden/<name>`; `PSLAB_BLESS=1` rewrites it.
#[allow(dead_code)]
pub fn assert_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("PSLAB_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}
