//! Command-line front end.

pub mod pnm;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::attack::{
    bitplane_diff_report, differential_pattern, one_bit_delta, verify_lemmas, Channel,
    EquivalentKey,
};
use crate::chaos::SecretKey;
use crate::cipher::{Cipher, Scheme};
use crate::error::{Error, Result};
use crate::image::RgbImage;
use crate::stats::run_table1_experiment;

pub use pnm::{load_image, save_image};

/// Parses a key given as `x0,y0,K,N`.
pub fn parse_key(spec: &str) -> Result<SecretKey> {
    spec.parse()
}

#[derive(Debug, Parser)]
#[command(
    name = "ppscrack",
    version,
    about = "Chaotic standard/logistic-map image ciphers and their equivalent-key attack"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CipherArgs {
    /// pps09 or mpps09
    #[arg(long, default_value = "pps09", value_parser = parse_scheme)]
    pub cipher: Scheme,
    /// Secret key as x0,y0,K,N
    #[arg(long, value_parser = parse_key_arg, allow_hyphen_values = true)]
    pub key: SecretKey,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EqKeyArgs {
    /// Equivalent key image produced by attack-derive
    #[arg(long)]
    pub eqkey: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a P6 image
    Encrypt(CipherArgs),
    /// Decrypt a P6 image
    Decrypt(CipherArgs),
    /// Derive the equivalent key from a known plaintext/ciphertext pair
    AttackDerive {
        #[arg(long)]
        plain: PathBuf,
        #[arg(long = "cipher-img")]
        cipher_img: PathBuf,
        #[arg(long = "out-eqkey")]
        out_eqkey: PathBuf,
    },
    /// Decrypt with an equivalent key
    AttackDecrypt(EqKeyArgs),
    /// Encrypt with an equivalent key
    AttackEncrypt(EqKeyArgs),
    /// Ciphertext difference VD(HD(delta)) caused by a plaintext difference
    DiffPattern {
        /// Plaintext difference image
        #[arg(long, conflicts_with = "flip", required_unless_present = "flip")]
        delta: Option<PathBuf>,
        /// One-bit difference CH,i,j,bit (CH in R/G/B, bit 0 = LSB, 7 = MSB)
        #[arg(long)]
        flip: Option<String>,
        /// Image height for --flip
        #[arg(long, default_value_t = 256)]
        height: usize,
        /// Image width for --flip
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count differing bits per channel and bitplane
    BitplaneReport {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Check the linear-structure identities on random inputs
    VerifyLemmas {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the keystream randomness battery over random keys
    Randomness {
        #[arg(long, default_value_t = 100)]
        keys: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "csv-out")]
        csv_out: Option<PathBuf>,
    },
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_key_arg(s: &str) -> std::result::Result<SecretKey, String> {
    parse_key(s).map_err(|e| e.to_string())
}

fn parse_flip(spec: &str) -> Result<(Channel, usize, usize, u8)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || Error::InvalidParameter(format!("--flip expects CH,i,j,bit, got {spec:?}"));
    match parts.as_slice() {
        [ch, i, j, bit] => Ok((
            ch.parse()?,
            i.parse().map_err(|_| bad())?,
            j.parse().map_err(|_| bad())?,
            bit.parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn cipher_for(args: &CipherArgs, img: &RgbImage) -> Result<Cipher> {
    Cipher::new(args.cipher, &args.key, img.height(), img.width())
}

/// Executes one parsed command, writing human-readable output to `out`.
/// Returns `Ok(false)` when a check ran but failed.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.command {
        Command::Encrypt(args) => {
            let img = load_image(&args.input)?;
            save_image(&cipher_for(&args, &img)?.encrypt(&img)?, &args.out)?;
        }
        Command::Decrypt(args) => {
            let img = load_image(&args.input)?;
            save_image(&cipher_for(&args, &img)?.decrypt(&img)?, &args.out)?;
        }
        Command::AttackDerive {
            plain,
            cipher_img,
            out_eqkey,
        } => {
            let ek = EquivalentKey::derive(&load_image(plain)?, &load_image(cipher_img)?)?;
            save_image(ek.image(), out_eqkey)?;
        }
        Command::AttackDecrypt(args) => {
            let ek = EquivalentKey::from_image(load_image(&args.eqkey)?);
            save_image(&ek.decrypt(&load_image(&args.input)?)?, &args.out)?;
        }
        Command::AttackEncrypt(args) => {
            let ek = EquivalentKey::from_image(load_image(&args.eqkey)?);
            save_image(&ek.encrypt(&load_image(&args.input)?)?, &args.out)?;
        }
        Command::DiffPattern {
            delta,
            flip,
            height,
            width,
            out: out_path,
        } => {
            let delta = match (delta, flip) {
                (Some(path), _) => load_image(path)?,
                (None, Some(spec)) => {
                    let (ch, i, j, bit) = parse_flip(&spec)?;
                    one_bit_delta(height, width, ch, i, j, bit)?
                }
                (None, None) => {
                    return Err(Error::InvalidParameter("give --delta or --flip".into()))
                }
            };
            let pattern = differential_pattern(&delta);
            let zero = RgbImage::zeros(pattern.height(), pattern.width())?;
            writeln!(out, "{}", bitplane_diff_report(&pattern, &zero)?)?;
            save_image(&pattern, out_path)?;
        }
        Command::BitplaneReport { a, b } => {
            let report = bitplane_diff_report(&load_image(a)?, &load_image(b)?)?;
            writeln!(out, "{report}")?;
        }
        Command::VerifyLemmas { trials, seed } => {
            if trials == 0 {
                return Err(Error::InvalidParameter(
                    "--trials must be at least 1".into(),
                ));
            }
            let report = verify_lemmas(trials, seed);
            writeln!(out, "{report}")?;
            return Ok(report.all_passed());
        }
        Command::Randomness {
            keys,
            height,
            width,
            seed,
            csv_out,
        } => {
            let report = run_table1_experiment(keys, height, width, seed)?;
            write!(out, "{report}")?;
            if let Some(path) = csv_out {
                report.write_csv(io::BufWriter::new(File::create(path)?))?;
            }
        }
    }
    Ok(true)
}
