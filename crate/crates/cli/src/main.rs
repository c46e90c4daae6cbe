//! `mpms`: file-based front end to the multi-proxy multi-signcryption library.
//!
//! Binary objects are stored as hex armor, registries as `id role hex-pk`
//! lines. Exit status is 0 on success, 1 when a verification rejects and 2
//! on malformed input or I/O failure.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use mpms::session::{run_protocol, ProtocolConfig, SecretSource};
use mpms::wire::{armor, dearmor, peek_suite_id};
use mpms::{
    aggregate_delegation, clerk_aggregate, derive_proxy_key, derive_session_key, make_delegation_share, proxy_commit,
    unsigncrypt, verify_delegation_share, Bls12_381Suite, DelegationShare, KeyPair, KeyRegistry, PairingSuite,
    ProxyKey, PublicKey, Role, ScalarField, SigncryptionPackage, Toy11_23, UnsigncryptResult, Warrant,
};
use rand::rngs::OsRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[derive(Parser)]
#[command(name = "mpms", version, about = "Multi-proxy multi-signcryption over bilinear pairings")]
struct Cli {
    /// BLS12-381 or TOY-11-23 (also `bls`, `toy`). Inferred from input
    /// files when not given.
    #[arg(long, global = true, env = "MPMS_SUITE")]
    suite: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair; writes OUT and OUT.pub and prints the registry line.
    Keygen {
        #[arg(long)]
        role: Role,
        #[arg(long)]
        id: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Use this secret instead of drawing one.
        #[arg(long, conflicts_with = "seed")]
        secret: Option<u64>,
    },
    /// Build a registry file from key files.
    Registry {
        #[arg(long, num_args = 1.., required = true)]
        keys: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a warrant.
    Warrant {
        #[arg(long, value_delimiter = ',', required = true)]
        originals: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        proxies: Vec<String>,
        #[arg(long, default_value_t = 0)]
        not_before: u64,
        #[arg(long, default_value_t = u64::MAX)]
        not_after: u64,
        /// Free-form policy bytes, hex.
        #[arg(long)]
        policy: Option<String>,
        /// Bind the warrant to the digest of this file.
        #[arg(long)]
        message: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Make delegation shares for original keys and, given proxy keys,
    /// verify all shares and derive proxy signcryption keys.
    Delegate {
        #[arg(long)]
        warrant: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        keys: Vec<PathBuf>,
        /// Shares made elsewhere.
        #[arg(long, num_args = 1..)]
        shares: Vec<PathBuf>,
        /// Defaults to the public halves of --keys.
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long)]
        out_shares: Option<PathBuf>,
        #[arg(long)]
        out_proxykeys: Option<PathBuf>,
    },
    /// Check one delegation share against the registry.
    VerifyShare {
        #[arg(long)]
        registry: PathBuf,
        #[arg(long)]
        warrant: PathBuf,
        #[arg(long)]
        share: PathBuf,
    },
    /// Signcrypt with the whole proxy group; the first proxy acts as clerk.
    Signcrypt {
        /// Must match the warrant inside the proxy keys.
        #[arg(long)]
        warrant: Option<PathBuf>,
        #[arg(long, num_args = 1.., required = true)]
        proxykeys: Vec<PathBuf>,
        #[arg(long)]
        recipient_pk: PathBuf,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        out_package: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decrypt and verify a package.
    Unsigncrypt {
        #[arg(long)]
        package: PathBuf,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        registry: PathBuf,
        /// Written only when the package is accepted without findings.
        #[arg(long)]
        out_plaintext: Option<PathBuf>,
        /// Seconds since the epoch; defaults to the system clock.
        #[arg(long)]
        now: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the toy reference vector; optionally write its files.
    Vectors {
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run every party in-process.
    Simulate {
        #[arg(long, default_value_t = 2)]
        originals: usize,
        #[arg(long, default_value_t = 2)]
        proxies: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        message: Option<PathBuf>,
        #[arg(long)]
        out_transcript: Option<PathBuf>,
        #[arg(long)]
        out_package: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Suite {
    Toy,
    Bls,
}

impl Suite {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "toy" | "toy-11-23" => Ok(Suite::Toy),
            "bls" | "bls12-381" | "bls12_381" => Ok(Suite::Bls),
            _ => Err(CliError::Usage(format!("unknown suite {s:?}"))),
        }
    }
}

enum CliError {
    Mpms(mpms::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Mpms(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "io error: {}: {e}", p.display()),
            CliError::Usage(s) => write!(f, "usage error: {s}"),
        }
    }
}

impl<E: Into<mpms::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Mpms(e.into())
    }
}

type CliResult<T = ExitCode> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Io(path.into(), e))
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))
}

fn read_armored(path: &Path) -> CliResult<Vec<u8>> {
    Ok(dearmor(&read_text(path)?)?)
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.into(), e))
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::Io(path.into(), e))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    s.into()
}

fn rng_for(seed: Option<u64>) -> Box<dyn RngCore> {
    match seed {
        Some(s) => Box::new(ChaCha20Rng::seed_from_u64(s)),
        None => Box::new(OsRng),
    }
}

/// The file whose header decides the suite when `--suite` is absent.
fn primary_input(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Registry { keys, .. } | Command::Delegate { keys, .. } => keys.first().map(PathBuf::as_path),
        Command::VerifyShare { share, .. } => Some(share),
        Command::Signcrypt { proxykeys, .. } => proxykeys.first().map(PathBuf::as_path),
        Command::Unsigncrypt { package, .. } => Some(package),
        _ => None,
    }
}

fn resolve_suite(cli: &Cli) -> CliResult<Suite> {
    if let Some(s) = &cli.suite {
        return Suite::parse(s);
    }
    if matches!(cli.command, Command::Vectors { .. }) {
        return Ok(Suite::Toy);
    }
    match primary_input(&cli.command) {
        Some(path) => Suite::parse(&peek_suite_id(&read_armored(path)?)?),
        None => Ok(Suite::Bls),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve_suite(&cli).and_then(|suite| match suite {
        Suite::Toy => execute::<Toy11_23>(cli.command),
        Suite::Bls => execute::<Bls12_381Suite>(cli.command),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute<S: PairingSuite>(cmd: Command) -> CliResult {
    match cmd {
        Command::Keygen { role, id, out, seed, secret } => {
            let pair = match secret {
                Some(v) => KeyPair::<S>::from_secret(S::Scalar::from_u64(v), role, id)?,
                None => KeyPair::<S>::generate(&mut rng_for(seed), role, id),
            };
            write(&out, armor(&pair.encode()))?;
            write(&with_suffix(&out, ".pub"), armor(&pair.public().encode()))?;
            println!("{}", KeyRegistry::record_line(&pair.public()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Registry { keys, out } => {
            let publics =
                keys.iter().map(|p| Ok(PublicKey::<S>::decode(&read_armored(p)?)?)).collect::<CliResult<Vec<_>>>()?;
            let reg = KeyRegistry::from_keys(publics)?;
            write(&out, reg.to_text())?;
            println!("{} entries", reg.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Warrant { originals, proxies, not_before, not_after, policy, message, out } => {
            let mut w = Warrant::new(originals, proxies, not_before, not_after);
            if let Some(hex_policy) = policy {
                w = w.with_policy(dearmor(&hex_policy)?);
            }
            if let Some(m) = message {
                w = w.with_message(&read(&m)?);
            }
            write(&out, armor(&w.encode()?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Delegate { warrant, keys, shares, registry, out_shares, out_proxykeys } => delegate::<S>(
            &warrant,
            &keys,
            &shares,
            registry.as_deref(),
            out_shares.as_deref(),
            out_proxykeys.as_deref(),
        ),
        Command::VerifyShare { registry, warrant, share } => {
            let reg = KeyRegistry::<S>::from_text(&read_text(&registry)?)?;
            let mw = read_armored(&warrant)?;
            let share = DelegationShare::<S>::decode(&read_armored(&share)?)?;
            let named = Warrant::decode(&mw)?.original_ids.contains(&share.signer_id);
            let pk = reg.resolve(&share.signer_id, Role::Original)?;
            if named && verify_delegation_share::<S>(&pk, &mw, &share) {
                println!("valid {}", share.signer_id);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("invalid {}", share.signer_id);
                Ok(ExitCode::from(1))
            }
        }
        Command::Signcrypt { warrant, proxykeys, recipient_pk, message, out_package, seed } => {
            signcrypt::<S>(warrant.as_deref(), &proxykeys, &recipient_pk, &message, &out_package, seed)
        }
        Command::Unsigncrypt { package, sk, registry, out_plaintext, now, format } => {
            let pkg = SigncryptionPackage::<S>::decode(&read_armored(&package)?)?;
            let key = KeyPair::<S>::decode(&read_armored(&sk)?)?;
            let reg = KeyRegistry::<S>::from_text(&read_text(&registry)?)?;
            let now = now.unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
            let res = unsigncrypt(&pkg, key.secret(), &reg, now)?;
            if let (Some(path), true) = (&out_plaintext, res.is_clean()) {
                write(path, res.plaintext.as_deref().unwrap_or_default())?;
            }
            print!("{}", render_result(&res, format));
            Ok(if res.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Vectors { out_dir } => vectors::<S>(out_dir.as_deref()),
        Command::Simulate { originals, proxies, seed, message, out_transcript, out_package } => {
            let message = message.map(|m| read(&m)).transpose()?.unwrap_or_default();
            let secrets = seed.map_or(SecretSource::Entropy, SecretSource::Seed);
            let run = run_protocol::<S>(&ProtocolConfig::new(originals, proxies, secrets, message))?;
            if let Some(p) = out_transcript {
                write(&p, armor(&run.transcript.encode::<S>()))?;
            }
            if let Some(p) = out_package {
                write(&p, armor(&run.package.encode()))?;
            }
            print!("{}", render_result(&run.result, Format::Text));
            Ok(if run.result.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn delegate<S: PairingSuite>(
    warrant: &Path,
    keys: &[PathBuf],
    share_files: &[PathBuf],
    registry: Option<&Path>,
    out_shares: Option<&Path>,
    out_proxykeys: Option<&Path>,
) -> CliResult {
    let mw = read_armored(warrant)?;
    Warrant::decode(&mw)?;
    let pairs = keys.iter().map(|p| Ok(KeyPair::<S>::decode(&read_armored(p)?)?)).collect::<CliResult<Vec<_>>>()?;
    let reg = match registry {
        Some(p) => KeyRegistry::<S>::from_text(&read_text(p)?)?,
        None => KeyRegistry::from_keys(pairs.iter().map(KeyPair::public))?,
    };

    let mut shares = share_files
        .iter()
        .map(|p| Ok(DelegationShare::<S>::decode(&read_armored(p)?)?))
        .collect::<CliResult<Vec<_>>>()?;
    let mut proxies = Vec::new();
    for pair in &pairs {
        match pair.role {
            Role::Original => {
                let share = make_delegation_share::<S>(&pair.id, pair.secret(), &mw)?;
                if let Some(dir) = out_shares {
                    create_dir(dir)?;
                    let path = dir.join(format!("{}.share", pair.id));
                    write(&path, armor(&share.encode()))?;
                    println!("share {} {}", pair.id, path.display());
                }
                shares.push(share);
            }
            Role::Proxy => proxies.push(pair),
            Role::Unsigncrypter => {
                return Err(CliError::Usage(format!("{} is an unsigncrypter key", pair.id)));
            }
        }
    }
    if proxies.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    let dir = out_proxykeys.ok_or_else(|| CliError::Usage("proxy keys given without --out-proxykeys".into()))?;
    let agg = aggregate_delegation(&shares, &mw, &reg)?;
    create_dir(dir)?;
    for pair in proxies {
        let key = derive_proxy_key(&agg, &pair.id, pair.secret())?;
        let path = dir.join(format!("{}.proxykey", pair.id));
        write(&path, armor(&key.encode()))?;
        println!("proxykey {} {}", pair.id, path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn signcrypt<S: PairingSuite>(
    warrant: Option<&Path>,
    proxykeys: &[PathBuf],
    recipient_pk: &Path,
    message: &Path,
    out_package: &Path,
    seed: Option<u64>,
) -> CliResult {
    let keys =
        proxykeys.iter().map(|p| Ok(ProxyKey::<S>::decode(&read_armored(p)?)?)).collect::<CliResult<Vec<_>>>()?;
    let delegation = keys[0].delegation.clone();
    if let Some(k) = keys.iter().find(|k| {
        k.delegation.aggregate != delegation.aggregate || k.delegation.warrant_bytes != delegation.warrant_bytes
    }) {
        return Err(CliError::Usage(format!("proxy key of {} comes from a different delegation", k.proxy_id)));
    }
    if let Some(w) = warrant {
        if read_armored(w)? != delegation.warrant_bytes {
            return Err(CliError::Usage("--warrant differs from the proxy keys' warrant".into()));
        }
    }
    let recipient = PublicKey::<S>::decode(&read_armored(recipient_pk)?)?;
    if recipient.role != Role::Unsigncrypter {
        return Err(mpms::Error::RoleMismatch {
            id: recipient.id,
            expected: Role::Unsigncrypter.as_str(),
            found: recipient.role.as_str(),
        }
        .into());
    }
    let m = read(message)?;

    // Warrant order, so a seed fixes every ephemeral.
    let mut ordered = Vec::new();
    for id in &delegation.warrant.proxy_ids {
        match keys.iter().find(|k| &k.proxy_id == id) {
            Some(k) => ordered.push(k),
            None => return Err(mpms::Error::Missing { what: "proxy key", id: id.clone() }.into()),
        }
    }
    let mut rng = rng_for(seed);
    let mut sessions = ordered
        .iter()
        .map(|k| proxy_commit::<S, _>(&mut rng, &k.proxy_id, &recipient.pk))
        .collect::<mpms::Result<Vec<_>>>()?;
    let commitments: Vec<_> = sessions.iter().map(|s| s.commitment()).collect();
    let k = derive_session_key(&commitments, &delegation.warrant.proxy_ids)?;
    let outputs = sessions
        .iter_mut()
        .zip(&ordered)
        .map(|(s, key)| s.partial_signcrypt(key, &m, &k))
        .collect::<mpms::Result<Vec<_>>>()?;
    let clerk = &outputs[0];
    let partials: Vec<_> = outputs.iter().map(|o| o.partial.clone()).collect();
    let pkg = clerk_aggregate(&partials, &delegation, &clerk.ciphertext, clerk.r_p)?;
    write(out_package, armor(&pkg.encode()))?;
    println!("package {}", out_package.display());
    Ok(ExitCode::SUCCESS)
}

fn vectors<S: PairingSuite>(out_dir: Option<&Path>) -> CliResult {
    if S::ID != Toy11_23::ID {
        return Err(CliError::Usage(format!("reference vectors exist only for {}", Toy11_23::ID)));
    }
    let run = mpms::vectors::toy_reference()?;
    print!("{}", mpms::vectors::render_toy(&run));
    if let Some(dir) = out_dir {
        create_dir(dir)?;
        write(&dir.join("package.hex"), armor(&run.package.encode()))?;
        write(&dir.join("warrant.hex"), armor(&run.package.warrant_bytes))?;
        write(&dir.join("transcript.hex"), armor(&run.transcript.encode::<Toy11_23>()))?;
        write(&dir.join("registry.txt"), run.registry.to_text())?;
        for pair in run.originals.iter().chain(&run.proxies).chain([&run.recipient]) {
            write(&dir.join(format!("{}.key", pair.id)), armor(&pair.encode()))?;
            write(&dir.join(format!("{}.key.pub", pair.id)), armor(&pair.public().encode()))?;
        }
        for key in &run.proxy_keys {
            write(&dir.join(format!("{}.proxykey", key.proxy_id)), armor(&key.encode()))?;
        }
        for share in &run.shares {
            write(&dir.join(format!("{}.share", share.signer_id)), armor(&share.encode()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render_result(res: &UnsigncryptResult, format: Format) -> String {
    let plaintext = res.plaintext.as_ref().filter(|_| res.is_clean()).map(|p| hex_string(p));
    let violations: Vec<String> = res.violations.iter().map(ToString::to_string).collect();
    match format {
        Format::Json => {
            let v = serde_json::json!({
                "accepted": res.accepted,
                "plaintext": plaintext,
                "violations": violations,
                "originals": res.originals,
                "proxies": res.proxies,
            });
            format!("{v}\n")
        }
        Format::Text => {
            let violations = if violations.is_empty() { "none".to_string() } else { violations.join("; ") };
            format!(
                "accepted {}\nplaintext {}\nviolations {}\noriginals {}\nproxies {}\n",
                res.accepted,
                plaintext.as_deref().unwrap_or("-"),
                violations,
                res.originals.join(" "),
                res.proxies.join(" "),
            )
        }
    }
}

fn hex_string(bytes: &[u8]) -> String {
    armor(bytes).trim_end().to_string()
}
