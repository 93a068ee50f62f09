use std::process::Command;

fn main() {
    // git-describe-style version string for report headers; falls back to the
    // package version alone when git metadata is unavailable.
    let describe = Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string());
    println!("cargo:rustc-env=GAUGEQUAD_GIT_DESCRIBE={describe}");
    println!("cargo:rerun-if-changed=build.rs");
}
