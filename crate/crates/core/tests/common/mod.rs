#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use robust_chaos::robustfamily::{find_seed, trace_curve, FamilyCurve, Seed, SeedBox, DEFAULT_SEED_GRID};

pub const STEP: f64 = 1e-3;
pub const MAX_SAMPLES: usize = 2000;

pub fn default_seed() -> Seed {
    find_seed(&SeedBox::default(), DEFAULT_SEED_GRID).expect("default box contains a seed")
}

pub fn robust_curve() -> FamilyCurve {
    let seed = default_seed();
    trace_curve((seed.a, seed.b), STEP, MAX_SAMPLES).expect("trace from default seed")
}

pub fn data_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn cli<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    let out =
        Command::new(env!("CARGO_BIN_EXE_robust-chaos")).args(args).output().expect("spawn robust-chaos");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}
