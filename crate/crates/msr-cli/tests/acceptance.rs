//! End-to-end acceptance: a 64 KiB random file through encode, erasure,
//! decode, and per-node repair, driving the actual binary.

use std::path::Path;
use std::process::Command;

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn msrc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_msrc"))
}

fn run_ok(cmd: &mut Command) {
    let out = cmd.output().expect("spawn msrc");
    assert!(
        out.status.success(),
        "command failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn criterion_09_end_to_end_64kib() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("input.bin");
    let container = dir.path().join("input.msrc");

    let mut rng = StdRng::seed_from_u64(0x64c1);
    let data: Vec<u8> = (0..64 * 1024).map(|_| rng.gen()).collect();
    std::fs::write(&input, &data).unwrap();

    // byte mode auto-selects GF(257) for (6,3,4)
    run_ok(msrc().args([
        "encode",
        path_str(&input),
        path_str(&container),
        "-n",
        "6",
        "-k",
        "3",
        "-d",
        "4",
    ]));
    let encoded = std::fs::read(&container).unwrap();
    assert_eq!(&encoded[6..8], &257u16.to_le_bytes());

    // delete any 3 nodes: decode from every surviving 3-subset
    for keep in (0..6usize).combinations(3) {
        let out = dir.path().join(format!("out-{keep:?}.bin"));
        let keep_args: Vec<String> = keep.iter().map(|i| i.to_string()).collect();
        let mut cmd = msrc();
        cmd.args([
            "decode",
            path_str(&container),
            path_str(&out),
            "--available",
        ]);
        cmd.args(&keep_args);
        run_ok(&mut cmd);
        let decoded = std::fs::read(&out).unwrap();
        assert_eq!(decoded, data, "decode from nodes {keep:?}");
    }

    // fail and repair each node in turn; container must stay identical
    for failed in 0..6usize {
        let repaired = dir.path().join(format!("repaired-{failed}.msrc"));
        let helpers: Vec<String> = (0..6)
            .filter(|&j| j != failed)
            .take(4)
            .map(|j| j.to_string())
            .collect();
        let mut cmd = msrc();
        cmd.args([
            "repair",
            path_str(&container),
            path_str(&repaired),
            "--fail",
            &failed.to_string(),
            "--helpers",
        ]);
        cmd.args(&helpers);
        run_ok(&mut cmd);
        let got = std::fs::read(&repaired).unwrap();
        assert_eq!(
            got, encoded,
            "repair of node {failed} must be byte-identical"
        );
    }

    println!("[PASS] criterion 9: 64 KiB file encode/decode/repair round trips byte-identically");
}
