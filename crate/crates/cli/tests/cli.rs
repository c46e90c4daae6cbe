use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mpms::{SigncryptionPackage, Toy11_23};

fn mpms(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpms"))
        .current_dir(dir)
        .env_remove("MPMS_SUITE")
        .args(args)
        .output()
        .expect("spawn mpms")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = mpms(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn setup(dir: &Path, suite: &str) {
    for (i, (id, role)) in
        [("A1", "original"), ("A2", "original"), ("P1", "proxy"), ("P2", "proxy"), ("C", "unsigncrypter")]
            .iter()
            .enumerate()
    {
        let seed = (i + 1).to_string();
        ok(
            dir,
            &["--suite", suite, "keygen", "--role", role, "--id", id, "--out", &format!("{id}.key"), "--seed", &seed],
        );
    }
    ok(
        dir,
        &[
            "registry",
            "--keys",
            "A1.key.pub",
            "A2.key.pub",
            "P1.key.pub",
            "P2.key.pub",
            "C.key.pub",
            "--out",
            "reg.txt",
        ],
    );
    fs::write(dir.join("msg"), b"pay the bearer").unwrap();
    ok(dir, &["warrant", "--originals", "A1,A2", "--proxies", "P1,P2", "--message", "msg", "--out", "w.hex"]);
    ok(
        dir,
        &[
            "delegate",
            "--warrant",
            "w.hex",
            "--keys",
            "A1.key",
            "A2.key",
            "P1.key",
            "P2.key",
            "--registry",
            "reg.txt",
            "--out-shares",
            "shares",
            "--out-proxykeys",
            "pk",
        ],
    );
}

fn signcrypt(dir: &Path, out: &str, seed: &str) {
    ok(
        dir,
        &[
            "signcrypt",
            "--warrant",
            "w.hex",
            "--proxykeys",
            "pk/P1.proxykey",
            "pk/P2.proxykey",
            "--recipient-pk",
            "C.key.pub",
            "--message",
            "msg",
            "--out-package",
            out,
            "--seed",
            seed,
        ],
    );
}

#[test]
fn file_based_happy_path() {
    for suite in ["toy", "bls12-381"] {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        setup(dir, suite);
        assert!(ok(
            dir,
            &["verify-share", "--registry", "reg.txt", "--warrant", "w.hex", "--share", "shares/A2.share"]
        )
        .starts_with("valid A2"));
        signcrypt(dir, "pkg.hex", "9");
        let text = ok(
            dir,
            &[
                "unsigncrypt",
                "--package",
                "pkg.hex",
                "--sk",
                "C.key",
                "--registry",
                "reg.txt",
                "--out-plaintext",
                "m.out",
            ],
        );
        assert!(text.contains("accepted true"), "{text}");
        assert!(text.contains("violations none"));
        assert_eq!(fs::read(dir.join("m.out")).unwrap(), b"pay the bearer");
    }
}

#[test]
fn wrong_recipient_key_exits_one_without_plaintext() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    setup(dir, "bls");
    signcrypt(dir, "pkg.hex", "4");
    let out = mpms(
        dir,
        &[
            "unsigncrypt",
            "--package",
            "pkg.hex",
            "--sk",
            "P1.key",
            "--registry",
            "reg.txt",
            "--out-plaintext",
            "m.out",
            "--format",
            "json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["accepted"], false);
    assert!(v["plaintext"].is_null());
    assert!(!dir.join("m.out").exists());
}

#[test]
fn truncated_package_is_a_decode_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    setup(dir, "toy");
    signcrypt(dir, "pkg.hex", "1");
    let armored = fs::read_to_string(dir.join("pkg.hex")).unwrap();
    fs::write(dir.join("short.hex"), &armored.trim_end()[..(armored.len() / 2) & !1]).unwrap();
    let out = mpms(dir, &["unsigncrypt", "--package", "short.hex", "--sk", "C.key", "--registry", "reg.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: decode error"), "{err}");
}

#[test]
fn tampered_share_is_invalid() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    setup(dir, "bls");
    // Present A1's share against a warrant it was not made for.
    ok(dir, &["warrant", "--originals", "A1,A2", "--proxies", "P1", "--out", "w2.hex"]);
    let out =
        mpms(dir, &["verify-share", "--registry", "reg.txt", "--warrant", "w2.hex", "--share", "shares/A1.share"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("invalid A1"));
}

#[test]
fn seeded_signcryption_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    setup(dir, "bls");
    signcrypt(dir, "a.hex", "17");
    signcrypt(dir, "b.hex", "17");
    signcrypt(dir, "c.hex", "18");
    let read = |p: &str| fs::read(dir.join(p)).unwrap();
    assert_eq!(read("a.hex"), read("b.hex"));
    assert_ne!(read("a.hex"), read("c.hex"));
}

#[test]
fn reference_vector_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let listing = ok(dir, &["vectors", "--out-dir", "v"]);
    for line in ["S_A 6", "k 03", "c 42", "r_p 3", "u_p 1", "S 6", "accepted true"] {
        assert!(listing.lines().any(|l| l == line), "missing {line}");
    }

    let armored = fs::read_to_string(dir.join("v/package.hex")).unwrap();
    let pkg = SigncryptionPackage::<Toy11_23>::decode(&mpms::wire::dearmor(&armored).unwrap()).unwrap();
    assert_eq!(pkg.s.value(), 6);
    assert_eq!(pkg.ciphertext, vec![0x42]);
    assert_eq!(pkg.r_p.value(), 3);
    assert_eq!(pkg.u_p.value(), 1);

    let text = ok(
        dir,
        &["unsigncrypt", "--package", "v/package.hex", "--sk", "v/C.key", "--registry", "v/registry.txt", "--now", "1"],
    );
    assert!(text.contains("plaintext 41"), "{text}");

    let out = mpms(dir, &["--suite", "bls", "vectors"]);
    assert_eq!(out.status.code(), Some(2));
}
