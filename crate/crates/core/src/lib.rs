//! Multi-proxy multi-signcryption over bilinear pairings.
//!
//! A group of `n` original signcrypters jointly delegates to a group of
//! `l` proxy signcrypters through a warrant. All proxies then cooperate to
//! signcrypt a message that only the designated unsigncrypter can decrypt
//! and verify.
//!
//! The phases map onto modules:
//!
//! * [`parties`]: key pairs, the warrant and the identity registry;
//! * [`delegation`]: delegation shares, their verification and proxy keys;
//! * [`signcrypt`]: per-proxy commitments and partials, clerk aggregation;
//! * [`unsigncrypt`]: key recovery, decryption and acceptance;
//! * [`session`]: end-to-end orchestration over a message transcript.
//!
//! Everything is generic over a [`PairingSuite`]; [`Toy11_23`] gives
//! hand-checkable values and [`Bls12_381Suite`] is the real backend.

pub mod algebra;
pub mod cipher;
pub mod delegation;
pub mod error;
pub mod parties;
pub mod session;
pub mod signcrypt;
pub mod unsigncrypt;
pub mod vectors;
pub mod wire;

pub use algebra::{Bls12_381Suite, PairingSuite, ScalarField, SourceGroup, TargetGroup, Toy11_23};
pub use cipher::{CipherKind, SymmetricKey};
pub use delegation::{
    aggregate_delegation, derive_proxy_key, make_delegation_share, verify_delegation_share, AggregatedDelegation,
    DelegationShare, ProxyKey,
};
pub use error::{DecodeError, Error, Result};
pub use parties::{KeyPair, KeyRegistry, PublicKey, Role, Violation, Warrant};
pub use session::{
    replay, run_protocol, MessageKind, ProtocolConfig, ProtocolRun, SecretSource, Tamper, Transcript, WarrantTerms,
};
pub use signcrypt::{
    clerk_aggregate, clerk_verify_partial, derive_session_key, proxy_commit, Commitment, PartialSigncryption,
    ProxySession, SigncryptionPackage,
};
pub use unsigncrypt::{recover_key, unsigncrypt, UnsigncryptResult};
