//! Command-line front end: key generation, encryption, decryption, KAT
//! generation/verification, parameter listing and failure-probability
//! reports.
//!
//! Exit codes: 0 success, 1 usage/input error, 2 decode/decrypt/KAT
//! verification failure.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use qcrypta::analysis;
use qcrypta::hqc::{self, Hqc, HqcCiphertext, HqcPublicKey, HqcSecretKey, ParameterSet};
use qcrypta::kat;
use qcrypta::rank_field::{vector_from_bytes, vector_to_bytes};
use qcrypta::rng::{seed_from_hex, Seed};
use qcrypta::rqc::{self, Rqc, RqcCiphertext, RqcPublicKey, RqcSecretKey};

#[derive(Parser)]
#[command(name = "qcrypta", version, about = "Code-based public-key encryption tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Hqc,
    Rqc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct InstanceArgs {
    /// Scheme to operate on
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Instance name: Toy/Low/Medium/Strong (hqc) or RQC-I/II/III (rqc)
    #[arg(long)]
    instance: String,
    /// Use the quantum-security parameter table (hqc only)
    #[arg(long)]
    quantum: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair
    Keygen {
        #[command(flatten)]
        inst: InstanceArgs,
        /// 32-byte hex seed (falls back to QCRYPTA_SEED)
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        pk_out: PathBuf,
        #[arg(long)]
        sk_out: PathBuf,
    },
    /// Encrypt a plaintext file (k bits for hqc, k*m bits for rqc)
    Encrypt {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file
    Decrypt {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Known-answer test files
    Kat {
        #[command(subcommand)]
        action: KatAction,
    },
    /// Parameter tables
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Failure-probability and simulation reports (hqc)
    Analyze {
        /// All classical-table rows
        #[arg(long)]
        all_classical: bool,
        /// All quantum-table rows
        #[arg(long)]
        all_quantum: bool,
        /// Single instance name
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        quantum: bool,
        /// Monte-Carlo trials comparing the error model to simulation
        #[arg(long)]
        simulate: Option<usize>,
        #[arg(long)]
        seed: Option<String>,
        /// Evaluate the rank attack workfactor instead: n,k,m,q,r
        #[arg(long, value_delimiter = ',')]
        workfactor: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum KatAction {
    /// Generate a KAT file
    Gen {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, default_value_t = kat::KAT_COUNT)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a KAT file bit-exactly
    Verify {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum ParamsAction {
    /// Print every named parameter row
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// Errors carrying their process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
    fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<qcrypta::Error> for CliError {
    fn from(e: qcrypta::Error) -> Self {
        use qcrypta::Error::*;
        match e {
            DecodeFailure | DecryptFailure | Integrity(_) => CliError::failure(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn resolve_seed(arg: &Option<String>) -> Result<Seed, CliError> {
    let hex = match arg {
        Some(s) => s.clone(),
        None => std::env::var("QCRYPTA_SEED")
            .map_err(|_| CliError::usage("no --seed given and QCRYPTA_SEED is unset"))?,
    };
    Ok(seed_from_hex(&hex)?)
}

fn hqc_params(inst: &InstanceArgs) -> Result<ParameterSet, CliError> {
    Ok(hqc::setup(&inst.instance, inst.quantum)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Keygen {
            inst,
            seed,
            pk_out,
            sk_out,
        } => {
            let seed = resolve_seed(&seed)?;
            match inst.scheme {
                Scheme::Hqc => {
                    let params = hqc_params(&inst)?;
                    let scheme = Hqc::new(&params)?;
                    let (pk, sk) = scheme.keygen(&seed)?;
                    fs::write(&pk_out, pk.to_bytes(&params))?;
                    fs::write(&sk_out, sk.to_bytes(&params))?;
                }
                Scheme::Rqc => {
                    let scheme = Rqc::new(&rqc::rqc_setup(&inst.instance)?)?;
                    let (pk, sk) = scheme.keygen(&seed)?;
                    fs::write(&pk_out, pk.to_bytes(&scheme))?;
                    fs::write(&sk_out, sk.to_bytes(&scheme))?;
                }
            }
            Ok(())
        }
        Command::Encrypt {
            inst,
            seed,
            pk,
            msg,
            out,
        } => {
            let seed = resolve_seed(&seed)?;
            let pk_bytes = fs::read(&pk)?;
            let msg_bytes = fs::read(&msg)?;
            match inst.scheme {
                Scheme::Hqc => {
                    let params = hqc_params(&inst)?;
                    let scheme = Hqc::new(&params)?;
                    let pk = HqcPublicKey::from_bytes(&params, &pk_bytes)?;
                    let bits = read_bit_payload(&msg_bytes, params.k)?;
                    let ct = scheme.encrypt(&pk, &bits, &seed)?;
                    fs::write(&out, ct.to_bytes(&params))?;
                }
                Scheme::Rqc => {
                    let scheme = Rqc::new(&rqc::rqc_setup(&inst.instance)?)?;
                    let pk = RqcPublicKey::from_bytes(&scheme, &pk_bytes)?;
                    let p = scheme.params();
                    let eb = (p.m as usize).div_ceil(8);
                    let mut padded = msg_bytes.clone();
                    if padded.len() > p.k * eb {
                        return Err(CliError::usage(format!(
                            "plaintext is {} bytes, limit is {}",
                            padded.len(),
                            p.k * eb
                        )));
                    }
                    padded.resize(p.k * eb, 0);
                    let msg = vector_from_bytes(scheme.field(), p.k, &padded)?;
                    let ct = scheme.encrypt(&pk, &msg, &seed)?;
                    fs::write(&out, ct.to_bytes(&scheme))?;
                }
            }
            Ok(())
        }
        Command::Decrypt { inst, sk, ct, out } => {
            let sk_bytes = fs::read(&sk)?;
            let ct_bytes = fs::read(&ct)?;
            match inst.scheme {
                Scheme::Hqc => {
                    let params = hqc_params(&inst)?;
                    let scheme = Hqc::new(&params)?;
                    let sk = HqcSecretKey::from_bytes(&params, &sk_bytes)?;
                    let ct = HqcCiphertext::from_bytes(&params, &ct_bytes)?;
                    let bits = scheme.decrypt(&sk, &ct)?;
                    fs::write(&out, kat::pack_bits(&bits))?;
                }
                Scheme::Rqc => {
                    let scheme = Rqc::new(&rqc::rqc_setup(&inst.instance)?)?;
                    let sk = RqcSecretKey::from_bytes(&scheme, &sk_bytes)?;
                    let ct = RqcCiphertext::from_bytes(&scheme, &ct_bytes)?;
                    let msg = scheme.decrypt(&sk, &ct)?;
                    fs::write(&out, vector_to_bytes(scheme.field(), &msg))?;
                }
            }
            Ok(())
        }
        Command::Kat { action } => run_kat(action),
        Command::Params { action } => {
            let ParamsAction::List { format } = action;
            params_list(format);
            Ok(())
        }
        Command::Analyze {
            all_classical,
            all_quantum,
            instance,
            quantum,
            simulate,
            seed,
            workfactor,
            format,
        } => analyze(
            all_classical,
            all_quantum,
            instance,
            quantum,
            simulate,
            seed,
            workfactor,
            format,
        ),
    }
}

/// Reads a packed-bit plaintext of exactly `k` bits, tolerating a shorter
/// file (zero right-padding) but rejecting oversize or dirty padding bits.
fn read_bit_payload(bytes: &[u8], k: usize) -> Result<Vec<u8>, CliError> {
    let want = k.div_ceil(8);
    if bytes.len() > want {
        return Err(CliError::usage(format!(
            "plaintext is {} bytes, limit is {want} ({k} bits)",
            bytes.len()
        )));
    }
    let mut padded = bytes.to_vec();
    padded.resize(want, 0);
    Ok(kat::unpack_bits(&padded, k)?)
}

fn run_kat(action: KatAction) -> Result<(), CliError> {
    match action {
        KatAction::Gen {
            inst,
            seed,
            count,
            out,
        } => {
            let seed = resolve_seed(&seed)?;
            let vectors = match inst.scheme {
                Scheme::Hqc => {
                    let scheme = Hqc::new(&hqc_params(&inst)?)?;
                    kat::generate_hqc(&scheme, &seed, count)?
                }
                Scheme::Rqc => {
                    let scheme = Rqc::new(&rqc::rqc_setup(&inst.instance)?)?;
                    kat::generate_rqc(&scheme, &seed, count)?
                }
            };
            fs::write(&out, kat::to_text(&vectors))?;
            println!("wrote {} vectors to {}", vectors.len(), out.display());
            Ok(())
        }
        KatAction::Verify { inst, file } => {
            let text = fs::read_to_string(&file)?;
            let vectors = kat::from_text(&text)?;
            match inst.scheme {
                Scheme::Hqc => {
                    let scheme = Hqc::new(&hqc_params(&inst)?)?;
                    kat::verify_hqc(&scheme, &vectors)?;
                }
                Scheme::Rqc => {
                    let scheme = Rqc::new(&rqc::rqc_setup(&inst.instance)?)?;
                    kat::verify_rqc(&scheme, &vectors)?;
                }
            }
            println!("verified {} vectors: pass", vectors.len());
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ParamsReport {
    hqc: Vec<HqcRow>,
    rqc: Vec<RqcRow>,
}

#[derive(Serialize)]
struct HqcRow {
    name: String,
    quantum: bool,
    n1: usize,
    n2: usize,
    n: usize,
    k: usize,
    delta: usize,
    w: usize,
    eps_w: usize,
    security_bits: u32,
}

#[derive(Serialize)]
struct RqcRow {
    name: String,
    n: usize,
    k: usize,
    m: u32,
    q: u32,
    w: usize,
    eps_w: usize,
    security_bits: u32,
    key_size_bits: usize,
    plaintext_bits: usize,
}

fn params_list(format: Format) {
    let report = ParamsReport {
        hqc: hqc::HQC_CLASSICAL
            .iter()
            .chain(hqc::HQC_QUANTUM.iter())
            .map(|p| HqcRow {
                name: p.name.to_string(),
                quantum: p.quantum,
                n1: p.n1,
                n2: p.n2,
                n: p.n,
                k: p.k,
                delta: p.delta,
                w: p.w,
                eps_w: p.eps_w,
                security_bits: p.security_bits,
            })
            .collect(),
        rqc: rqc::RQC_ROWS
            .iter()
            .map(|p| RqcRow {
                name: p.name.to_string(),
                n: p.n,
                k: p.k,
                m: p.m,
                q: p.q,
                w: p.w,
                eps_w: p.eps_w,
                security_bits: p.security_bits,
                key_size_bits: p.key_size_bits(),
                plaintext_bits: p.plaintext_bits(),
            })
            .collect(),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Text => {
            println!("hqc (classical + quantum tables):");
            for r in &report.hqc {
                println!(
                    "  {:<8} {:<9} n1={:<4} n2={:<4} n={:<6} k={:<4} delta={:<3} w={:<4} eps={:<4} lambda={}",
                    r.name,
                    if r.quantum { "quantum" } else { "classical" },
                    r.n1, r.n2, r.n, r.k, r.delta, r.w, r.eps_w, r.security_bits
                );
            }
            println!("rqc:");
            for r in &report.rqc {
                println!(
                    "  {:<8} n={:<3} k={:<3} m={:<3} q={} w={} eps={} key_bits={} pt_bits={} lambda={}",
                    r.name, r.n, r.k, r.m, r.q, r.w, r.eps_w, r.key_size_bits,
                    r.plaintext_bits, r.security_bits
                );
            }
        }
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    rows: Vec<RowReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulation: Option<SimReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    workfactor_log2: Option<f64>,
}

#[derive(Serialize)]
struct RowReport {
    name: String,
    quantum: bool,
    log2_pfail: f64,
    claimed_log2_bound: f64,
    meets_claim: bool,
    primitive_prime: bool,
}

#[derive(Serialize)]
struct SimReport {
    trials: usize,
    empirical_mean_weight: f64,
    model_mean_weight: f64,
    three_sigma: f64,
    within_three_sigma: bool,
}

fn row_report(p: &ParameterSet) -> RowReport {
    let report = analysis::p_fail(p);
    let bound = -(p.security_bits as f64);
    RowReport {
        name: p.name.to_string(),
        quantum: p.quantum,
        log2_pfail: report.log2_pfail,
        claimed_log2_bound: bound,
        meets_claim: report.log2_pfail <= bound,
        primitive_prime: analysis::is_primitive_prime(p.n as u64),
    }
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    all_classical: bool,
    all_quantum: bool,
    instance: Option<String>,
    quantum: bool,
    simulate: Option<usize>,
    seed: Option<String>,
    workfactor: Option<Vec<u64>>,
    format: Format,
) -> Result<(), CliError> {
    let mut report = AnalyzeReport {
        rows: Vec::new(),
        simulation: None,
        workfactor_log2: None,
    };
    if let Some(wf) = &workfactor {
        if wf.len() != 5 {
            return Err(CliError::usage("--workfactor needs exactly n,k,m,q,r"));
        }
        let (n, k, m, q, r) = (wf[0], wf[1], wf[2], wf[3], wf[4]);
        report.workfactor_log2 = Some(analysis::rank_attack_workfactor(n, k, m, q, r));
    }
    if all_classical {
        report.rows.extend(hqc::HQC_CLASSICAL.iter().map(row_report));
    }
    if all_quantum {
        report.rows.extend(hqc::HQC_QUANTUM.iter().map(row_report));
    }
    if let Some(name) = &instance {
        let p = hqc::setup(name, quantum)?;
        report.rows.push(row_report(&p));
        if let Some(trials) = simulate {
            if trials == 0 {
                return Err(CliError::usage("--simulate needs at least 1 trial"));
            }
            let seed = resolve_seed(&seed)?;
            let weights = analysis::simulate_error_weights(p.n, p.w, p.eps_w, trials, &seed)?;
            let mean = weights.iter().sum::<usize>() as f64 / trials as f64;
            let ps = analysis::p_star(p.n, p.w, p.eps_w);
            let model = p.n as f64 * ps;
            let sigma = (p.n as f64 * ps * (1.0 - ps) / trials as f64).sqrt();
            report.simulation = Some(SimReport {
                trials,
                empirical_mean_weight: mean,
                model_mean_weight: model,
                three_sigma: 3.0 * sigma,
                within_three_sigma: (mean - model).abs() <= 3.0 * sigma,
            });
        }
    } else if simulate.is_some() {
        return Err(CliError::usage("--simulate requires --instance"));
    }
    if report.rows.is_empty() && report.workfactor_log2.is_none() {
        return Err(CliError::usage(
            "nothing to analyze: give --all-classical, --all-quantum, --instance or --workfactor",
        ));
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Text => {
            for r in &report.rows {
                println!(
                    "{:<8} {:<9} log2_pfail={:>9.3} claimed<={:>6.0} {} primitive_prime={}",
                    r.name,
                    if r.quantum { "quantum" } else { "classical" },
                    r.log2_pfail,
                    r.claimed_log2_bound,
                    if r.meets_claim { "pass" } else { "FAIL" },
                    r.primitive_prime
                );
            }
            if let Some(s) = &report.simulation {
                println!(
                    "simulation: trials={} empirical_mean={:.3} model_mean={:.3} 3sigma={:.3} {}",
                    s.trials,
                    s.empirical_mean_weight,
                    s.model_mean_weight,
                    s.three_sigma,
                    if s.within_three_sigma { "within" } else { "OUTSIDE" }
                );
            }
            if let Some(wf) = report.workfactor_log2 {
                println!("workfactor_log2 = {wf:.3}");
            }
        }
    }
    Ok(())
}
