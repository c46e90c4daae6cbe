//! Key pairs, the warrant `m_w` and the identity registry.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::algebra::{require_nonzero, PairingSuite};
use crate::error::{DecodeError, Error, Result};
use crate::wire::{dearmor, Reader, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Original,
    Proxy,
    Unsigncrypter,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Original => "original",
            Role::Proxy => "proxy",
            Role::Unsigncrypter => "unsigncrypter",
        }
    }

    fn tag(self) -> u8 {
        match self {
            Role::Original => 1,
            Role::Proxy => 2,
            Role::Unsigncrypter => 3,
        }
    }

    fn from_tag(tag: u8) -> Result<Self, DecodeError> {
        match tag {
            1 => Ok(Role::Original),
            2 => Ok(Role::Proxy),
            3 => Ok(Role::Unsigncrypter),
            tag => Err(DecodeError::InvalidTag { field: "role", tag }),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Role {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, DecodeError> {
        match s {
            "original" => Ok(Role::Original),
            "proxy" => Ok(Role::Proxy),
            "unsigncrypter" => Ok(Role::Unsigncrypter),
            other => Err(DecodeError::Malformed(format!("unknown role {other:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PublicKey<S: PairingSuite> {
    pub id: String,
    pub role: Role,
    pub pk: S::G1,
}

impl<S: PairingSuite> fmt::Debug for PublicKey<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PublicKey").field("id", &self.id).field("role", &self.role).field("pk", &self.pk).finish()
    }
}

/// `(x, y = xP)` for one party.
#[derive(Clone, PartialEq, Eq)]
pub struct KeyPair<S: PairingSuite> {
    pub id: String,
    pub role: Role,
    sk: S::Scalar,
    pub pk: S::G1,
}

impl<S: PairingSuite> fmt::Debug for KeyPair<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyPair")
            .field("id", &self.id)
            .field("role", &self.role)
            .field("pk", &self.pk)
            .finish_non_exhaustive()
    }
}

const HAS_SECRET: u8 = 1;

impl<S: PairingSuite> KeyPair<S> {
    pub fn generate<R: RngCore + ?Sized>(rng: &mut R, role: Role, id: impl Into<String>) -> Self {
        let sk = S::random_nonzero_scalar(rng);
        Self::from_secret(sk, role, id).expect("nonzero by construction")
    }

    pub fn from_secret(sk: S::Scalar, role: Role, id: impl Into<String>) -> Result<Self> {
        let sk = require_nonzero::<S>(sk, "secret key")?;
        Ok(Self { id: id.into(), role, sk, pk: S::generator() * sk })
    }

    pub fn secret(&self) -> S::Scalar {
        self.sk
    }

    pub fn public(&self) -> PublicKey<S> {
        PublicKey { id: self.id.clone(), role: self.role, pk: self.pk }
    }

    /// Key file: header, role, id, flags, secret, public key.
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.u8(self.role.tag())
            .str(&self.id)
            .u8(HAS_SECRET)
            .bytes(&S::encode_scalar(&self.sk))
            .bytes(&S::encode_g1(&self.pk));
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let role = Role::from_tag(r.u8()?)?;
        let id = r.str("id")?;
        if r.u8()? != HAS_SECRET {
            return Err(DecodeError::Malformed("key file has no secret key".into()).into());
        }
        let sk = S::decode_scalar(r.bytes()?)?;
        let pk_bytes = r.bytes()?;
        r.finish()?;
        let pair = Self::from_secret(sk, role, id)?;
        if S::encode_g1(&pair.pk) != pk_bytes {
            return Err(DecodeError::Malformed("public key does not match secret key".into()).into());
        }
        Ok(pair)
    }
}

impl<S: PairingSuite> PublicKey<S> {
    /// Public half of the key-file format (flags = 0, no secret).
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.u8(self.role.tag()).str(&self.id).u8(0).bytes(&S::encode_g1(&self.pk));
        w.finish()
    }

    /// Accepts both public and secret key files.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let role = Role::from_tag(r.u8()?)?;
        let id = r.str("id")?;
        match r.u8()? {
            0 => {
                let pk = S::decode_g1(r.bytes()?)?;
                r.finish()?;
                Ok(Self { id, role, pk })
            }
            HAS_SECRET => Ok(KeyPair::<S>::decode(bytes)?.public()),
            tag => Err(DecodeError::InvalidTag { field: "key flags", tag }.into()),
        }
    }
}

/// The delegation document `m_w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Warrant {
    pub original_ids: Vec<String>,
    pub proxy_ids: Vec<String>,
    /// SHA-256 commitment to the plaintext the proxies may signcrypt.
    pub message_digest: Option<Vec<u8>>,
    /// Unix seconds, inclusive.
    pub not_before: u64,
    pub not_after: u64,
    pub policy: Vec<u8>,
}

const WARRANT_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    NotYetValid,
    Expired,
    UnresolvedIdentity(String),
    RoleMismatch(String),
    DuplicateIdentity(String),
    NoOriginals,
    NoProxies,
    MessageDigestMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotYetValid => f.write_str("not yet valid"),
            Violation::Expired => f.write_str("expired"),
            Violation::UnresolvedIdentity(id) => write!(f, "unresolved identity: {id}"),
            Violation::RoleMismatch(id) => write!(f, "role mismatch: {id}"),
            Violation::DuplicateIdentity(id) => write!(f, "duplicate identity: {id}"),
            Violation::NoOriginals => f.write_str("no original signcrypters"),
            Violation::NoProxies => f.write_str("no proxy signcrypters"),
            Violation::MessageDigestMismatch => f.write_str("message digest mismatch"),
        }
    }
}

impl Warrant {
    pub fn new(original_ids: Vec<String>, proxy_ids: Vec<String>, not_before: u64, not_after: u64) -> Self {
        Self { original_ids, proxy_ids, message_digest: None, not_before, not_after, policy: Vec::new() }
    }

    pub fn digest_message(message: &[u8]) -> Vec<u8> {
        Sha256::digest(message).to_vec()
    }

    /// Commits the warrant to `message`.
    pub fn with_message(mut self, message: &[u8]) -> Self {
        self.message_digest = Some(Self::digest_message(message));
        self
    }

    pub fn with_policy(mut self, policy: impl Into<Vec<u8>>) -> Self {
        self.policy = policy.into();
        self
    }

    /// `None` when the warrant carries no message commitment.
    pub fn commits_to(&self, message: &[u8]) -> Option<bool> {
        self.message_digest.as_ref().map(|d| *d == Self::digest_message(message))
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.original_ids.is_empty() {
            out.push(Violation::NoOriginals);
        }
        if self.proxy_ids.is_empty() {
            out.push(Violation::NoProxies);
        }
        let mut seen = HashSet::new();
        for id in self.original_ids.iter().chain(&self.proxy_ids) {
            if !seen.insert(id.as_str()) {
                out.push(Violation::DuplicateIdentity(id.clone()));
            }
        }
        out
    }

    fn check_structure(&self) -> Result<()> {
        if let Some(v) = self.structural_violations().into_iter().next() {
            return Err(Error::InvalidWarrant(v.to_string()));
        }
        if self.not_before > self.not_after {
            return Err(Error::InvalidWarrant("empty validity window".into()));
        }
        Ok(())
    }

    /// Canonical bytes: fixed field order, every variable field length-prefixed.
    pub fn encode(&self) -> Result<Vec<u8>> {
        self.check_structure()?;
        let mut w = Writer::new();
        w.u8(WARRANT_VERSION);
        for ids in [&self.original_ids, &self.proxy_ids] {
            w.u32(ids.len() as u32);
            for id in ids {
                w.str(id);
            }
        }
        match &self.message_digest {
            None => w.u8(0),
            Some(d) => w.u8(1).bytes(d),
        };
        w.u64(self.not_before).u64(self.not_after).bytes(&self.policy);
        Ok(w.finish())
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let version = r.u8()?;
        if version != WARRANT_VERSION {
            return Err(DecodeError::UnsupportedVersion(version).into());
        }
        let mut lists = [Vec::new(), Vec::new()];
        for ids in &mut lists {
            let count = r.u32()?;
            for _ in 0..count {
                ids.push(r.str("identity")?);
            }
        }
        let message_digest = match r.u8()? {
            0 => None,
            1 => Some(r.bytes()?.to_vec()),
            tag => return Err(DecodeError::InvalidTag { field: "digest", tag }.into()),
        };
        let not_before = r.u64()?;
        let not_after = r.u64()?;
        let policy = r.bytes()?.to_vec();
        r.finish()?;
        let [original_ids, proxy_ids] = lists;
        let w = Self { original_ids, proxy_ids, message_digest, not_before, not_after, policy };
        w.check_structure()?;
        Ok(w)
    }

    /// Policy findings; an empty list means the warrant is usable at `now`.
    pub fn validate<S: PairingSuite>(&self, now: u64, reg: &KeyRegistry<S>) -> Vec<Violation> {
        let mut out = self.structural_violations();
        if now < self.not_before {
            out.push(Violation::NotYetValid);
        }
        if now > self.not_after {
            out.push(Violation::Expired);
        }
        let expected = self
            .original_ids
            .iter()
            .map(|id| (id, Role::Original))
            .chain(self.proxy_ids.iter().map(|id| (id, Role::Proxy)));
        for (id, role) in expected {
            match reg.get(id) {
                None => out.push(Violation::UnresolvedIdentity(id.clone())),
                Some(e) if e.role != role => out.push(Violation::RoleMismatch(id.clone())),
                Some(_) => {}
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct RegistryEntry<S: PairingSuite> {
    pub role: Role,
    pub pk: S::G1,
}

impl<S: PairingSuite> fmt::Debug for RegistryEntry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.role, self.pk)
    }
}

/// Identity -> (public key, role).
///
/// Text form: `#` comments, an optional `suite <id>` line, then one
/// `id role hex-pk` record per line.
#[derive(Clone, PartialEq, Eq)]
pub struct KeyRegistry<S: PairingSuite> {
    entries: BTreeMap<String, RegistryEntry<S>>,
}

impl<S: PairingSuite> Default for KeyRegistry<S> {
    fn default() -> Self {
        Self { entries: BTreeMap::new() }
    }
}

impl<S: PairingSuite> fmt::Debug for KeyRegistry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl<S: PairingSuite> KeyRegistry<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_keys(keys: impl IntoIterator<Item = PublicKey<S>>) -> Result<Self> {
        let mut reg = Self::new();
        for key in keys {
            reg.insert(key)?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, key: PublicKey<S>) -> Result<()> {
        if self.entries.contains_key(&key.id) {
            return Err(Error::DuplicateEntry(key.id));
        }
        self.entries.insert(key.id, RegistryEntry { role: key.role, pk: key.pk });
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&RegistryEntry<S>> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Public key of `id`, which must be registered with `role`.
    pub fn resolve(&self, id: &str, role: Role) -> Result<S::G1> {
        let e = self.get(id).ok_or_else(|| Error::UnresolvedIdentity(id.to_owned()))?;
        if e.role != role {
            return Err(Error::RoleMismatch { id: id.to_owned(), expected: role.as_str(), found: e.role.as_str() });
        }
        Ok(e.pk)
    }

    pub fn record_line(key: &PublicKey<S>) -> String {
        format!("{} {} {}", key.id, key.role, hex::encode(S::encode_g1(&key.pk)))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {}\n", S::ID);
        for (id, e) in &self.entries {
            out.push_str(&Self::record_line(&PublicKey { id: id.clone(), role: e.role, pk: e.pk }));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut reg = Self::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["suite", id] => {
                    if *id != S::ID {
                        return Err(Error::SuiteMismatch { expected: S::ID.into(), found: (*id).into() });
                    }
                }
                [id, role, pk] => {
                    let role = role.parse()?;
                    let pk = S::decode_g1(&dearmor(pk)?)?;
                    reg.insert(PublicKey { id: (*id).into(), role, pk })?;
                }
                _ => {
                    return Err(DecodeError::Malformed(format!(
                        "registry line {}: expected `id role hex-pk`",
                        lineno + 1
                    ))
                    .into())
                }
            }
        }
        Ok(reg)
    }
}
