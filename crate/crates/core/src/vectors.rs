//! The toy reference vector: `x_a = {3, 7}`, `x_p = {2}`, `x_c = 6`,
//! `t_1 = 5`, `m = 0x41`, with the warrant policy chosen so `H2(m_w) = 5`.

use std::fmt::Write as _;

use crate::algebra::{PairingSuite, Toy11_23};
use crate::error::Result;
use crate::session::{run_protocol, ProtocolConfig, ProtocolRun, SecretSource};

pub const TOY_SECRETS: [u64; 5] = [3, 7, 2, 6, 5];
pub const TOY_MESSAGE: u8 = 0x41;
pub const TOY_H2: u8 = 5;

/// First one-byte policy that makes `H2(m_w) = 5`.
pub fn toy_reference_config() -> ProtocolConfig {
    let mut cfg = ProtocolConfig::new(2, 1, SecretSource::Scripted(TOY_SECRETS.to_vec()), vec![TOY_MESSAGE]);
    for b in 0..=255u8 {
        cfg.terms.policy = vec![b];
        let bytes = cfg.warrant().encode().expect("fixed warrant is well formed");
        if Toy11_23::h2(&bytes).value() == TOY_H2 {
            return cfg;
        }
    }
    unreachable!("a byte sum hits every residue")
}

pub fn toy_reference() -> Result<ProtocolRun<Toy11_23>> {
    run_protocol(&toy_reference_config())
}

/// `name value` lines; group elements and scalars as integers, byte
/// strings as hex.
pub fn render_toy(run: &ProtocolRun<Toy11_23>) -> String {
    let mut out = String::new();
    let ints = |it: &mut dyn Iterator<Item = u8>| it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    let pkg = &run.package;
    let mut line = |k: &str, v: String| writeln!(out, "{k} {v}").expect("write to string");
    line("suite", Toy11_23::ID.into());
    line("x_a", ints(&mut run.originals.iter().map(|k| k.secret().value())));
    line("x_p", ints(&mut run.proxies.iter().map(|k| k.secret().value())));
    line("x_c", run.recipient.secret().value().to_string());
    line("warrant", hex::encode(&pkg.warrant_bytes));
    line("h2_warrant", Toy11_23::h2(&pkg.warrant_bytes).value().to_string());
    line("S_a", ints(&mut run.shares.iter().map(|s| s.share.value())));
    line("S_A", run.delegation.aggregate.value().to_string());
    line("S_p", ints(&mut run.proxy_keys.iter().map(|k| k.key.value())));
    line("r_pj", ints(&mut run.commitments.iter().map(|c| c.value.value())));
    line("k", hex::encode(run.session_keys[0].as_bytes()));
    line("m", hex::encode([TOY_MESSAGE]));
    line("c", hex::encode(&pkg.ciphertext));
    line("r_p", pkg.r_p.value().to_string());
    line("u_p", pkg.u_p.value().to_string());
    line("S", pkg.s.value().to_string());
    line("package", hex::encode(pkg.encode()));
    line("accepted", run.result.accepted.to_string());
    out
}
