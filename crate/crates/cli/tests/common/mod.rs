use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fdint"))
}

pub fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// TOML snippet for an entangled table profile filled from `f`.
#[allow(dead_code)] // shared helper; not every test binary builds tables
pub fn table_toml(side: usize, symmetric: bool, f: impl Fn(usize, usize) -> f64) -> String {
    let rows: Vec<String> = (0..side)
        .map(|i| {
            let cells: Vec<String> = (0..side).map(|j| format!("{:?}", f(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!(
        "[profile]\nkind = \"table\"\nsymmetric = {symmetric}\ntable = [{}]\n",
        rows.join(", ")
    )
}
