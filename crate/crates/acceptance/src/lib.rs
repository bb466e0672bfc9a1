//! Locates the `torsionlab` executable for the acceptance run.

use std::path::PathBuf;
use std::process::Command;

/// The executable built next to the running test, building it if absent.
pub fn cli_binary() -> PathBuf {
    let exe = std::env::current_exe().expect("test executable path");
    // <target>/<profile>/deps/acceptance-<hash>
    let profile_dir = exe.parent().and_then(|d| d.parent()).expect("profile directory");
    let bin = profile_dir.join(format!("torsionlab{}", std::env::consts::EXE_SUFFIX));
    if !bin.exists() {
        let profile = match profile_dir.file_name().and_then(|n| n.to_str()) {
            Some("debug") | None => "dev",
            Some(other) => other,
        };
        let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
        let status = Command::new(cargo)
            .args(["build", "-p", "torsionlab-cli", "--bin", "torsionlab", "--profile", profile])
            .status()
            .expect("cargo runs");
        assert!(status.success(), "building the torsionlab binary failed");
    }
    bin
}
