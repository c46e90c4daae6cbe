//! In-process run of all four phases over a shared transcript.
//!
//! Every broadcast or send is an append to the [`Transcript`]; each party
//! reads its inputs back out of it, so a tampered record affects exactly
//! the parties that consume it.

use rand::rngs::OsRng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::algebra::{PairingSuite, ScalarField};
use crate::cipher::SymmetricKey;
use crate::delegation::{
    aggregate_delegation, derive_proxy_key, make_delegation_share, AggregatedDelegation, DelegationShare, ProxyKey,
};
use crate::error::{DecodeError, Error, Result};
use crate::parties::{KeyPair, KeyRegistry, Role, Warrant};
use crate::signcrypt::{
    check_participants, clerk_aggregate, derive_session_key, Commitment, PartialSigncryption, ProxySession,
    SigncryptionPackage,
};
use crate::unsigncrypt::{unsigncrypt, UnsigncryptResult};
use crate::wire::{Reader, Writer};

pub const RECIPIENT_ID: &str = "C";

pub fn original_id(i: usize) -> String {
    format!("A{}", i + 1)
}

pub fn proxy_id(j: usize) -> String {
    format!("P{}", j + 1)
}

/// Where secrets and ephemerals come from. Draw order is fixed:
/// `A1..An`, `P1..Pl`, `C`, then `t_1..t_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretSource {
    Seed(u64),
    /// Values taken in order and reduced into the scalar field; values that
    /// reduce to zero are skipped.
    Scripted(Vec<u64>),
    Entropy,
}

enum SecretStream {
    Seeded(Box<ChaCha20Rng>),
    Scripted(std::vec::IntoIter<u64>),
    Entropy,
}

impl SecretStream {
    fn new(src: &SecretSource) -> Self {
        match src {
            SecretSource::Seed(seed) => SecretStream::Seeded(Box::new(ChaCha20Rng::seed_from_u64(*seed))),
            SecretSource::Scripted(v) => SecretStream::Scripted(v.clone().into_iter()),
            SecretSource::Entropy => SecretStream::Entropy,
        }
    }

    fn next<S: PairingSuite>(&mut self) -> Result<S::Scalar> {
        match self {
            SecretStream::Seeded(rng) => Ok(S::random_nonzero_scalar(rng)),
            SecretStream::Entropy => Ok(S::random_nonzero_scalar(&mut OsRng)),
            SecretStream::Scripted(it) => {
                it.map(S::Scalar::from_u64).find(|s| !s.is_zero()).ok_or(Error::SecretsExhausted)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarrantTerms {
    pub not_before: u64,
    pub not_after: u64,
    pub policy: Vec<u8>,
    /// Bind the warrant to a digest of the message.
    pub commit_message: bool,
}

impl Default for WarrantTerms {
    fn default() -> Self {
        Self { not_before: 0, not_after: u64::MAX, policy: Vec::new(), commit_message: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageKind {
    Warrant,
    DelegationShare,
    Commitment,
    /// The clerk's `c`, so a replay can rebuild the package.
    Ciphertext,
    Partial,
    Package,
}

impl MessageKind {
    pub const ALL: [MessageKind; 6] = [
        MessageKind::Warrant,
        MessageKind::DelegationShare,
        MessageKind::Commitment,
        MessageKind::Ciphertext,
        MessageKind::Partial,
        MessageKind::Package,
    ];

    fn tag(self) -> u8 {
        match self {
            MessageKind::Warrant => 1,
            MessageKind::DelegationShare => 2,
            MessageKind::Commitment => 3,
            MessageKind::Ciphertext => 4,
            MessageKind::Partial => 5,
            MessageKind::Package => 6,
        }
    }

    fn from_tag(tag: u8) -> Result<Self, DecodeError> {
        Self::ALL.into_iter().find(|k| k.tag() == tag).ok_or(DecodeError::InvalidTag { field: "message kind", tag })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MessageKind::Warrant => "warrant",
            MessageKind::DelegationShare => "delegation-share",
            MessageKind::Commitment => "commitment",
            MessageKind::Ciphertext => "ciphertext",
            MessageKind::Partial => "partial",
            MessageKind::Package => "package",
        }
    }
}

/// Flips one payload bit of the `occurrence`-th message of `kind` as it is
/// appended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tamper {
    pub kind: MessageKind,
    pub occurrence: usize,
    pub bit: usize,
}

#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub originals: usize,
    pub proxies: usize,
    pub secrets: SecretSource,
    pub terms: WarrantTerms,
    pub message: Vec<u8>,
    /// Clock used for warrant validation at the recipient.
    pub now: u64,
    pub tamper: Option<Tamper>,
}

impl ProtocolConfig {
    pub fn new(originals: usize, proxies: usize, secrets: SecretSource, message: impl Into<Vec<u8>>) -> Self {
        Self {
            originals,
            proxies,
            secrets,
            terms: WarrantTerms::default(),
            message: message.into(),
            now: 0,
            tamper: None,
        }
    }

    pub fn warrant(&self) -> Warrant {
        let w = Warrant::new(
            (0..self.originals).map(original_id).collect(),
            (0..self.proxies).map(proxy_id).collect(),
            self.terms.not_before,
            self.terms.not_after,
        )
        .with_policy(self.terms.policy.clone());
        if self.terms.commit_message {
            w.with_message(&self.message)
        } else {
            w
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub sender: String,
    pub kind: MessageKind,
    pub payload: Vec<u8>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
    tamper: Option<Tamper>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    fn with_tamper(tamper: Option<Tamper>) -> Self {
        Self { entries: Vec::new(), tamper }
    }

    pub fn push(&mut self, sender: &str, kind: MessageKind, mut payload: Vec<u8>) -> Result<()> {
        if let Some(t) = self.tamper {
            if t.kind == kind && self.of_kind(kind).count() == t.occurrence {
                let byte = payload
                    .get_mut(t.bit / 8)
                    .ok_or_else(|| DecodeError::Malformed("tamper bit out of range".into()))?;
                *byte ^= 1 << (t.bit % 8);
            }
        }
        self.entries.push(TranscriptEntry { sender: sender.to_owned(), kind, payload });
        Ok(())
    }

    pub fn of_kind(&self, kind: MessageKind) -> impl Iterator<Item = &TranscriptEntry> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    fn single(&self, kind: MessageKind) -> Result<&TranscriptEntry> {
        let mut it = self.of_kind(kind);
        let first = it.next().ok_or_else(|| Error::Missing { what: kind.as_str(), id: "transcript".into() })?;
        if let Some(extra) = it.next() {
            return Err(Error::Duplicate { what: kind.as_str(), id: extra.sender.clone() });
        }
        Ok(first)
    }

    /// Decodes every record of `kind`, checking that each claims its sender.
    fn collect<T>(
        &self,
        kind: MessageKind,
        decode: impl Fn(&[u8]) -> Result<T>,
        claimed: impl Fn(&T) -> &str,
    ) -> Result<Vec<T>> {
        self.of_kind(kind)
            .map(|e| {
                let v = decode(&e.payload).map_err(|err| err.by_party(&e.sender))?;
                if claimed(&v) != e.sender {
                    return Err(
                        Error::Unexpected { what: kind.as_str(), id: claimed(&v).to_owned() }.by_party(&e.sender)
                    );
                }
                Ok(v)
            })
            .collect()
    }

    pub fn encode<S: PairingSuite>(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.u32(self.entries.len() as u32);
        for e in &self.entries {
            w.str(&e.sender).u8(e.kind.tag()).bytes(&e.payload);
        }
        w.finish()
    }

    pub fn decode<S: PairingSuite>(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let count = r.u32()?;
        let mut entries = Vec::new();
        for _ in 0..count {
            let sender = r.str("sender")?;
            let kind = MessageKind::from_tag(r.u8()?)?;
            let payload = r.bytes()?.to_vec();
            entries.push(TranscriptEntry { sender, kind, payload });
        }
        r.finish()?;
        Ok(Self { entries, tamper: None })
    }
}

/// Everything a run produced, intermediate values included.
#[derive(Debug, Clone)]
pub struct ProtocolRun<S: PairingSuite> {
    pub transcript: Transcript,
    pub registry: KeyRegistry<S>,
    pub originals: Vec<KeyPair<S>>,
    pub proxies: Vec<KeyPair<S>>,
    pub recipient: KeyPair<S>,
    pub shares: Vec<DelegationShare<S>>,
    pub delegation: AggregatedDelegation<S>,
    pub proxy_keys: Vec<ProxyKey<S>>,
    pub commitments: Vec<Commitment<S>>,
    /// `t_j P` per proxy.
    pub public_nonces: Vec<S::G1>,
    /// `k` as derived by each proxy.
    pub session_keys: Vec<SymmetricKey>,
    pub partials: Vec<PartialSigncryption<S>>,
    pub package: SigncryptionPackage<S>,
    pub result: UnsigncryptResult,
}

fn decode_warrant(bytes: &[u8]) -> Result<Vec<u8>> {
    Warrant::decode(bytes)?;
    Ok(bytes.to_vec())
}

/// Runs keygen, delegation, signcryption and unsigncryption in order.
///
/// The first proxy in warrant order acts as clerk. Errors carry the phase
/// name and, where one is to blame, the party id.
pub fn run_protocol<S: PairingSuite>(cfg: &ProtocolConfig) -> Result<ProtocolRun<S>> {
    let mut draw = SecretStream::new(&cfg.secrets);
    let mut transcript = Transcript::with_tamper(cfg.tamper);

    // keygen
    let keygen = |draw: &mut SecretStream, role, id: String| -> Result<KeyPair<S>> {
        KeyPair::from_secret(draw.next::<S>()?, role, id)
    };
    let mut step = || -> Result<_> {
        let originals = (0..cfg.originals)
            .map(|i| keygen(&mut draw, Role::Original, original_id(i)))
            .collect::<Result<Vec<_>>>()?;
        let proxies =
            (0..cfg.proxies).map(|j| keygen(&mut draw, Role::Proxy, proxy_id(j))).collect::<Result<Vec<_>>>()?;
        let recipient = keygen(&mut draw, Role::Unsigncrypter, RECIPIENT_ID.into())?;
        let registry = KeyRegistry::from_keys(
            originals.iter().chain(&proxies).chain(std::iter::once(&recipient)).map(KeyPair::public),
        )?;
        Ok((originals, proxies, recipient, registry))
    };
    let (originals, proxies, recipient, registry) = step().map_err(|e| e.in_phase("keygen"))?;

    // delegation
    let (shares, delegation, proxy_keys) = (|| -> Result<_> {
        let warrant = cfg.warrant().encode()?;
        transcript.push(&originals[0].id, MessageKind::Warrant, warrant)?;
        for a in &originals {
            let mw = decode_warrant(&transcript.single(MessageKind::Warrant)?.payload)?;
            let share = make_delegation_share::<S>(&a.id, a.secret(), &mw).map_err(|e| e.by_party(&a.id))?;
            transcript.push(&a.id, MessageKind::DelegationShare, share.encode())?;
        }
        let mw = decode_warrant(&transcript.single(MessageKind::Warrant)?.payload)?;
        let shares =
            transcript.collect(MessageKind::DelegationShare, DelegationShare::<S>::decode, |s| &s.signer_id)?;
        let delegation = aggregate_delegation(&shares, &mw, &registry)?;
        let proxy_keys = proxies
            .iter()
            .map(|p| derive_proxy_key(&delegation, &p.id, p.secret()).map_err(|e| e.by_party(&p.id)))
            .collect::<Result<Vec<_>>>()?;
        Ok((shares, delegation, proxy_keys))
    })()
    .map_err(|e| e.in_phase("delegation"))?;

    // signcryption
    let (commitments, public_nonces, session_keys, partials) = (|| -> Result<_> {
        let mut sessions = Vec::with_capacity(proxies.len());
        for p in &proxies {
            let session = ProxySession::<S>::with_nonce(&p.id, draw.next::<S>()?, &recipient.pk)
                .map_err(|e| e.by_party(&p.id))?;
            transcript.push(&p.id, MessageKind::Commitment, session.commitment().encode())?;
            sessions.push(session);
        }
        let commitments = transcript.collect(MessageKind::Commitment, Commitment::<S>::decode, |c| &c.proxy_id)?;
        let proxy_ids = &delegation.warrant.proxy_ids;
        let mut session_keys = Vec::new();
        let mut outputs = Vec::new();
        for (session, key) in sessions.iter_mut().zip(&proxy_keys) {
            let id = key.proxy_id.clone();
            let k = derive_session_key(&commitments, proxy_ids).map_err(|e| e.by_party(&id))?;
            let out = session.partial_signcrypt(key, &cfg.message, &k).map_err(|e| e.by_party(&id))?;
            if outputs.is_empty() {
                transcript.push(&id, MessageKind::Ciphertext, out.ciphertext.clone())?;
            }
            transcript.push(&id, MessageKind::Partial, out.partial.encode())?;
            session_keys.push(k);
            outputs.push(out);
        }
        let public_nonces = sessions.iter().map(ProxySession::public_nonce).collect();
        Ok((commitments, public_nonces, session_keys, outputs))
    })()
    .map_err(|e| e.in_phase("signcryption"))?;

    let clerk = &proxies[0].id;
    let package = (|| -> Result<_> {
        let c = &transcript.single(MessageKind::Ciphertext)?.payload;
        let received = transcript.collect(MessageKind::Partial, PartialSigncryption::<S>::decode, |p| &p.proxy_id)?;
        let own = &partials[0];
        let pkg = clerk_aggregate(&received, &delegation, c, own.r_p).map_err(|e| e.by_party(clerk))?;
        transcript.push(clerk, MessageKind::Package, pkg.encode())?;
        Ok(pkg)
    })()
    .map_err(|e| e.in_phase("aggregation"))?;

    let result = (|| -> Result<_> {
        let pkg = SigncryptionPackage::<S>::decode(&transcript.single(MessageKind::Package)?.payload)?;
        unsigncrypt(&pkg, recipient.secret(), &registry, cfg.now)
    })()
    .map_err(|e| e.in_phase("unsigncryption"))?;

    Ok(ProtocolRun {
        transcript,
        registry,
        originals,
        proxies,
        recipient,
        shares,
        delegation,
        proxy_keys,
        commitments,
        public_nonces,
        session_keys,
        partials: partials.into_iter().map(|o| o.partial).collect(),
        package,
        result,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay<S: PairingSuite> {
    /// Package rebuilt from the recorded shares, ciphertext and partials.
    pub rebuilt: SigncryptionPackage<S>,
    /// Package as recorded, if the transcript holds one.
    pub recorded: Option<SigncryptionPackage<S>>,
    /// Decision on the rebuilt package.
    pub result: UnsigncryptResult,
}

/// Feeds a recorded transcript through fresh verifiers and a fresh clerk.
pub fn replay<S: PairingSuite>(
    transcript: &Transcript,
    registry: &KeyRegistry<S>,
    recipient_sk: S::Scalar,
    now: u64,
) -> Result<Replay<S>> {
    let mw = decode_warrant(&transcript.single(MessageKind::Warrant)?.payload)?;
    let shares = transcript.collect(MessageKind::DelegationShare, DelegationShare::<S>::decode, |s| &s.signer_id)?;
    let delegation = aggregate_delegation(&shares, &mw, registry).map_err(|e| e.in_phase("delegation"))?;
    let commitments = transcript.collect(MessageKind::Commitment, Commitment::<S>::decode, |c| &c.proxy_id)?;
    check_participants("commitment", &delegation.warrant.proxy_ids, commitments.iter().map(|c| c.proxy_id.as_str()))
        .map_err(|e| e.in_phase("signcryption"))?;
    let c = &transcript.single(MessageKind::Ciphertext)?.payload;
    let partials = transcript.collect(MessageKind::Partial, PartialSigncryption::<S>::decode, |p| &p.proxy_id)?;
    let r_p = partials
        .first()
        .map(|p| p.r_p)
        .ok_or_else(|| Error::Missing { what: "partial", id: delegation.warrant.proxy_ids[0].clone() })?;
    let rebuilt = clerk_aggregate(&partials, &delegation, c, r_p).map_err(|e| e.in_phase("aggregation"))?;
    let recorded = transcript
        .of_kind(MessageKind::Package)
        .next()
        .map(|e| SigncryptionPackage::<S>::decode(&e.payload))
        .transpose()?;
    let result = unsigncrypt(&rebuilt, recipient_sk, registry, now).map_err(|e| e.in_phase("unsigncryption"))?;
    Ok(Replay { rebuilt, recorded, result })
}
