//! Command-line front end: key management, the exchange demo, file
//! encryption and signing, hardness exports, and the benchmark.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 validation error,
//! 3 verification reject.

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Num;
use rand::rngs::OsRng;
use rand::{CryptoRng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use moddiv::hardness::{self, InversionInstance};
use moddiv::params::{KeyPair, ParamSet, Variant};
use moddiv::{keyfile, kex, pke, sig};
use moddiv_cli::bench;

#[derive(Parser)]
#[command(name = "moddiv", version, about = "Window cryptosystem toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate parameters, sample Z, and write a parameter file.
    ParamsGen {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        /// Defaults to l + m - p.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// kexenc or sig.
        #[arg(long, default_value = "kexenc")]
        variant: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Required to use --seed for key material.
        #[arg(long)]
        insecure_seed: bool,
    },
    /// Generate a key pair under an existing parameter file.
    Keygen {
        #[arg(long)]
        params: PathBuf,
        /// Private key file (contains X; keep it secret).
        #[arg(long)]
        out: PathBuf,
        /// Public key file (parameters plus U only).
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        insecure_seed: bool,
    },
    /// Run one full key exchange and print every intermediate value.
    KexDemo {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a file to a public key.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        insecure_seed: bool,
    },
    /// Decrypt a ciphertext file with a private key.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sign a message file (detached signature).
    Sign {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        insecure_seed: bool,
    },
    /// Verify a detached signature against a message file.
    Verify {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        /// Accept windows that differ by at most this much (testing
        /// escape hatch; strict equality by default).
        #[arg(long, default_value_t = 0)]
        tolerance: u64,
    },
    /// Export an inversion instance as DIMACS CNF.
    ExportSat {
        /// Known multiplier (decimal or 0x hex).
        #[arg(long)]
        a: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// Observed window value (decimal or 0x hex).
        #[arg(long)]
        u: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export an inversion instance as polynomials over F(2).
    ExportAnf {
        #[arg(long)]
        a: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: String,
        #[arg(long)]
        out: PathBuf,
        /// Raise the symbolic-expansion guard (hard cap 32).
        #[arg(long, default_value_t = hardness::ANF_VAR_LIMIT)]
        max_vars: u32,
    },
    /// Enumerate every solution of an inversion instance.
    Bruteforce {
        #[arg(long)]
        a: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        u: String,
    },
    /// Size statistics of an exported DIMACS instance.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Measure the shared-secret agreement rate over many exchanges.
    ProbTest {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = 0)]
        r: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Time the window operations against a modexp baseline.
    Bench {
        /// Comma-separated bit widths, each at least 256.
        #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096")]
        widths: Vec<u32>,
        #[arg(long, default_value_t = 7)]
        repeats: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
}

struct CmdError {
    code: i32,
    msg: String,
}

impl From<moddiv::Error> for CmdError {
    fn from(e: moddiv::Error) -> Self {
        CmdError {
            code: 2,
            msg: e.to_string(),
        }
    }
}

impl From<bench::BenchError> for CmdError {
    fn from(e: bench::BenchError) -> Self {
        CmdError {
            code: 2,
            msg: e.to_string(),
        }
    }
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> CmdError {
    CmdError {
        code: 1,
        msg: format!("{}: {e}", path.display()),
    }
}

fn usage(msg: impl Into<String>) -> CmdError {
    CmdError {
        code: 1,
        msg: msg.into(),
    }
}

enum Entropy {
    Os(OsRng),
    Seeded(Box<ChaCha20Rng>),
}

impl RngCore for Entropy {
    fn next_u32(&mut self) -> u32 {
        match self {
            Entropy::Os(r) => r.next_u32(),
            Entropy::Seeded(r) => r.next_u32(),
        }
    }
    fn next_u64(&mut self) -> u64 {
        match self {
            Entropy::Os(r) => r.next_u64(),
            Entropy::Seeded(r) => r.next_u64(),
        }
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        match self {
            Entropy::Os(r) => r.fill_bytes(dest),
            Entropy::Seeded(r) => r.fill_bytes(dest),
        }
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        match self {
            Entropy::Os(r) => r.try_fill_bytes(dest),
            Entropy::Seeded(r) => r.try_fill_bytes(dest),
        }
    }
}

impl CryptoRng for Entropy {}

/// Entropy for commands that materialize secrets: a seed is refused
/// unless the caller also passes --insecure-seed.
fn key_entropy(seed: Option<u64>, insecure_ok: bool) -> Result<Entropy, CmdError> {
    match seed {
        None => Ok(Entropy::Os(OsRng)),
        Some(s) if insecure_ok => Ok(Entropy::Seeded(Box::new(ChaCha20Rng::seed_from_u64(s)))),
        Some(_) => Err(usage(
            "--seed produces predictable keys; pass --insecure-seed to confirm",
        )),
    }
}

/// Entropy for demos and experiments: a bare seed is fine.
fn demo_entropy(seed: Option<u64>) -> Entropy {
    match seed {
        None => Entropy::Os(OsRng),
        Some(s) => Entropy::Seeded(Box::new(ChaCha20Rng::seed_from_u64(s))),
    }
}

fn parse_nat(s: &str, what: &str) -> Result<BigUint, CmdError> {
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => BigUint::from_str_radix(hex, 16),
        None => BigUint::from_str_radix(s, 10),
    };
    parsed.map_err(|_| usage(format!("{what}: expected decimal or 0x hex, got `{s}`")))
}

fn demo_params(l: u32, m: u32, p: u32, q: Option<u32>, r: u32, rng: &mut Entropy) -> Result<ParamSet, CmdError> {
    let q = q.unwrap_or_else(|| (l + m).saturating_sub(p));
    Ok(ParamSet::generate(l, m, p, q, r, Variant::KexEnc, rng)?)
}

fn hex(v: &BigUint) -> String {
    format!("0x{:x}", v)
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprint!("{e}");
            return 1;
        }
    };
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            e.code
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CmdError> {
    match cmd {
        Command::ParamsGen {
            l,
            m,
            p,
            q,
            r,
            variant,
            out,
            seed,
            insecure_seed,
        } => {
            let variant = Variant::parse(&variant)
                .ok_or_else(|| usage(format!("unknown variant `{variant}`")))?;
            let mut rng = key_entropy(seed, insecure_seed)?;
            let q = q.unwrap_or_else(|| (l + m).saturating_sub(p));
            let params = ParamSet::generate(l, m, p, q, r, variant, &mut rng)?;
            fs::write(&out, keyfile::write_params(&params)).map_err(|e| io_err(&out, e))?;
            println!("wrote parameters to {}", out.display());
            Ok(0)
        }
        Command::Keygen {
            params,
            out,
            public,
            seed,
            insecure_seed,
        } => {
            let text = fs::read_to_string(&params).map_err(|e| io_err(&params, e))?;
            let params = keyfile::parse_params(&text)?;
            let mut rng = key_entropy(seed, insecure_seed)?;
            let pair = KeyPair::generate(&params, &mut rng)?;
            fs::write(&out, keyfile::write_keypair(&pair)).map_err(|e| io_err(&out, e))?;
            fs::write(&public, keyfile::write_public(&pair.public_key()))
                .map_err(|e| io_err(&public, e))?;
            println!("wrote private key to {}", out.display());
            println!("wrote public key to {}", public.display());
            Ok(0)
        }
        Command::KexDemo { l, m, p, q, r, seed } => {
            let mut rng = demo_entropy(seed);
            let params = demo_params(l, m, p, q, r, &mut rng)?;
            let x = kex::gen_private(&params, &mut rng)?;
            let y = kex::gen_private(&params, &mut rng)?;
            let u = kex::share(&params, &x)?;
            let v = kex::share(&params, &y)?;
            let wa = kex::derive(&params, &x, &v)?;
            let wb = kex::derive(&params, &y, &u)?;
            println!("l={}", params.l);
            println!("m={}", params.m);
            println!("p={}", params.p);
            println!("q={}", params.q);
            println!("r={}", params.r);
            println!("Z={}", hex(&params.z));
            println!("X={}", hex(&x));
            println!("Y={}", hex(&y));
            println!("U={}", hex(&u));
            println!("V={}", hex(&v));
            println!("Wa={}", hex(&wa));
            println!("Wb={}", hex(&wb));
            println!("match={}", wa == wb);
            Ok(0)
        }
        Command::Encrypt {
            public,
            input,
            out,
            seed,
            insecure_seed,
        } => {
            let text = fs::read_to_string(&public).map_err(|e| io_err(&public, e))?;
            let key = keyfile::parse_public(&text)?;
            let plaintext = fs::read(&input).map_err(|e| io_err(&input, e))?;
            let mut rng = key_entropy(seed, insecure_seed)?;
            let ct = pke::encrypt(&key, &plaintext, &mut rng)?;
            fs::write(&out, keyfile::write_ciphertext(&ct)).map_err(|e| io_err(&out, e))?;
            println!("wrote ciphertext to {}", out.display());
            Ok(0)
        }
        Command::Decrypt { key, input, out } => {
            let text = fs::read_to_string(&key).map_err(|e| io_err(&key, e))?;
            let pair = keyfile::parse_keypair(&text)?;
            let ct_text = fs::read_to_string(&input).map_err(|e| io_err(&input, e))?;
            let ct = keyfile::parse_ciphertext(&ct_text)?;
            let plaintext = pke::decrypt(&pair, &ct)?;
            fs::write(&out, plaintext).map_err(|e| io_err(&out, e))?;
            println!("wrote plaintext to {}", out.display());
            Ok(0)
        }
        Command::Sign {
            key,
            input,
            out,
            seed,
            insecure_seed,
        } => {
            let text = fs::read_to_string(&key).map_err(|e| io_err(&key, e))?;
            let pair = keyfile::parse_keypair(&text)?;
            let message = fs::read(&input).map_err(|e| io_err(&input, e))?;
            let mut rng = key_entropy(seed, insecure_seed)?;
            let signature = sig::sign(&pair, &message, &mut rng)?;
            fs::write(&out, keyfile::write_signature(&signature)).map_err(|e| io_err(&out, e))?;
            println!("wrote signature to {}", out.display());
            Ok(0)
        }
        Command::Verify {
            public,
            input,
            sig: sig_path,
            tolerance,
        } => {
            let text = fs::read_to_string(&public).map_err(|e| io_err(&public, e))?;
            let key = keyfile::parse_public(&text)?;
            let message = fs::read(&input).map_err(|e| io_err(&input, e))?;
            let sig_text = fs::read_to_string(&sig_path).map_err(|e| io_err(&sig_path, e))?;
            let signature = keyfile::parse_signature(&sig_text)?;
            match sig::verify_with_tolerance(&key, &message, &signature, tolerance)? {
                Ok(()) => {
                    println!("accept");
                    Ok(0)
                }
                Err(reason) => {
                    println!("reject");
                    eprintln!("{reason}");
                    Ok(3)
                }
            }
        }
        Command::ExportSat { a, m, p, q, u, out } => {
            let inst = parse_instance(&a, m, p, q, &u)?;
            let cnf = hardness::export_cnf(&inst)?;
            fs::write(&out, cnf.to_dimacs()).map_err(|e| io_err(&out, e))?;
            let stats = cnf.stats();
            println!(
                "wrote {} vars, {} clauses to {}",
                stats.vars,
                stats.clauses,
                out.display()
            );
            Ok(0)
        }
        Command::ExportAnf {
            a,
            m,
            p,
            q,
            u,
            out,
            max_vars,
        } => {
            let inst = parse_instance(&a, m, p, q, &u)?;
            let system = hardness::export_anf_with_limit(&inst, max_vars)?;
            fs::write(&out, system.to_text()).map_err(|e| io_err(&out, e))?;
            println!(
                "wrote {} polynomials in {} variables to {}",
                system.polys.len(),
                system.num_vars,
                out.display()
            );
            Ok(0)
        }
        Command::Bruteforce { a, m, p, q, u } => {
            let inst = parse_instance(&a, m, p, q, &u)?;
            for x in hardness::brute_force_invert(&inst)? {
                println!("{x}");
            }
            Ok(0)
        }
        Command::Stats { input } => {
            let text = fs::read_to_string(&input).map_err(|e| io_err(&input, e))?;
            let parsed = hardness::parse_dimacs(&text)?;
            let inst = parsed.instance()?;
            let cnf = hardness::export_cnf(&inst)?;
            if cnf.num_vars != parsed.num_vars || cnf.clauses.len() != parsed.clauses.len() {
                return Err(CmdError {
                    code: 2,
                    msg: "file does not match the instance its header describes".into(),
                });
            }
            let stats = cnf.stats();
            println!("vars={}", stats.vars);
            println!("clauses={}", stats.clauses);
            println!("ratio={:.4}", stats.ratio);
            println!("xor_chains={}", stats.xor_chain_count);
            Ok(0)
        }
        Command::ProbTest {
            l,
            m,
            p,
            q,
            r,
            trials,
            seed,
        } => {
            let mut rng = demo_entropy(seed);
            let params = demo_params(l, m, p, q, r, &mut rng)?;
            let report = kex::agreement_experiment(&params, trials, &mut rng)?;
            println!("trials={}", report.trials);
            println!("mismatches={}", report.mismatches);
            println!("mismatch_rate={:.6}", report.mismatch_rate());
            println!("max_abs_diff={}", hex(&report.max_abs_diff));
            Ok(0)
        }
        Command::Bench {
            widths,
            repeats,
            seed,
        } => {
            let mut rng = demo_entropy(seed);
            let report = bench::bench_run(&widths, repeats, &mut rng)?;
            for e in &report.entries {
                println!(
                    "width={} share_ns={:.0} derive_ns={:.0} modexp_ns={:.0} modexp_mults={} ratio={:.1}",
                    e.width, e.share_ns, e.derive_ns, e.modexp_ns, e.modexp_mults, e.ratio
                );
            }
            println!(
                "ratio_increasing={}",
                report.ratio_strictly_increasing()
            );
            Ok(0)
        }
    }
}

fn parse_instance(a: &str, m: u32, p: u32, q: u32, u: &str) -> Result<InversionInstance, CmdError> {
    let a = parse_nat(a, "--a")?;
    let u = parse_nat(u, "--u")?;
    Ok(InversionInstance::new(a, m, p, q, u)?)
}
