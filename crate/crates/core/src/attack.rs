//! The equivalent-key known/chosen-plaintext attack, executable checks of the
//! linear-structure identities it rests on, and differential (bitplane)
//! analysis.
//!
//! For both ciphers the encryption function collapses to
//! `C = VD(HD(P)) ^ E` where `E` depends on the secret key and the image size
//! only. One known pair therefore yields `E = VD(HD(P)) ^ C`, which then
//! encrypts and decrypts any other image of that size. The same code path
//! serves PPS09 and mPPS09.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chaos::{cks_image, xkey_image, DiffusionKeySet, SecretKey};
use crate::cipher::{encrypt_mpps09, Scheme};
use crate::diffusion::{
    horizontal_diffuse, keyed_horizontal_diffuse, keyed_vertical_diffuse, linear_core,
    linear_core_inverse, vertical_diffuse,
};
use crate::error::{Error, Result};
use crate::image::{Pixel, RgbImage};

/// An image that stands in for the secret key on all traffic of its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentKey {
    image: RgbImage,
}

impl EquivalentKey {
    pub fn from_image(image: RgbImage) -> Self {
        EquivalentKey { image }
    }

    pub fn image(&self) -> &RgbImage {
        &self.image
    }

    pub fn into_image(self) -> RgbImage {
        self.image
    }

    pub fn dims(&self) -> (usize, usize) {
        self.image.dims()
    }

    /// `VD(HD(plain)) ^ cipher`.
    pub fn derive(plain: &RgbImage, cipher: &RgbImage) -> Result<Self> {
        plain.same_dims(cipher)?;
        let mut image = linear_core(plain);
        image ^= cipher;
        Ok(EquivalentKey { image })
    }

    pub fn decrypt(&self, cipher: &RgbImage) -> Result<RgbImage> {
        Ok(linear_core_inverse(&cipher.try_xor(&self.image)?))
    }

    pub fn encrypt(&self, plain: &RgbImage) -> Result<RgbImage> {
        self.image.same_dims(plain)?;
        let mut out = linear_core(plain);
        out ^= &self.image;
        Ok(out)
    }
}

pub fn derive_equivalent_key(plain: &RgbImage, cipher: &RgbImage) -> Result<EquivalentKey> {
    EquivalentKey::derive(plain, cipher)
}

pub fn decrypt_with_equivalent_key(cipher: &RgbImage, ek: &EquivalentKey) -> Result<RgbImage> {
    ek.decrypt(cipher)
}

pub fn encrypt_with_equivalent_key(plain: &RgbImage, ek: &EquivalentKey) -> Result<RgbImage> {
    ek.encrypt(plain)
}

/// The equivalent key computed directly from the secret key:
/// `VD(HD(I_xkey)) ^ I_cks` for PPS09, plus `VD(mHD(0)) ^ mVD(0)` for mPPS09.
pub fn closed_form_equivalent_key(
    scheme: Scheme,
    key: &SecretKey,
    height: usize,
    width: usize,
) -> Result<EquivalentKey> {
    closed_form_with(&DiffusionPasses::default(), scheme, key, height, width)
}

fn closed_form_with(
    passes: &DiffusionPasses,
    scheme: Scheme,
    key: &SecretKey,
    height: usize,
    width: usize,
) -> Result<EquivalentKey> {
    let xkey = xkey_image(key, height, width)?;
    let mut image = (passes.vd)(&(passes.hd)(&xkey));
    image ^= &cks_image(key, height, width)?;
    if scheme == Scheme::Mpps09 {
        let dk = DiffusionKeySet::from_key(key);
        let zero = RgbImage::zeros(height, width)?;
        image ^= &(passes.vd)(&(passes.keyed_hd)(&zero, &dk));
        image ^= &(passes.keyed_vd)(&zero, &dk);
    }
    Ok(EquivalentKey { image })
}

/// `VD(HD(delta))`: the ciphertext difference produced by any plaintext
/// difference `delta`, under every key and both ciphers.
pub fn differential_pattern(delta: &RgbImage) -> RgbImage {
    linear_core(delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Channel::Red => 'R',
            Channel::Green => 'G',
            Channel::Blue => 'B',
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "R" | "RED" => Ok(Channel::Red),
            "G" | "GREEN" => Ok(Channel::Green),
            "B" | "BLUE" => Ok(Channel::Blue),
            other => Err(Error::InvalidParameter(format!(
                "unknown channel {other:?}"
            ))),
        }
    }
}

/// An all-zero image with a single bit set. `bit` 0 is the LSB, 7 the MSB.
pub fn one_bit_delta(
    height: usize,
    width: usize,
    channel: Channel,
    i: usize,
    j: usize,
    bit: u8,
) -> Result<RgbImage> {
    let mut img = RgbImage::zeros(height, width)?;
    if i >= height || j >= width {
        return Err(Error::InvalidParameter(format!(
            "pixel ({i}, {j}) outside a {height}x{width} image"
        )));
    }
    if bit > 7 {
        return Err(Error::InvalidParameter(format!(
            "bit index {bit} outside 0..=7"
        )));
    }
    let mut c = [0u8; 3];
    c[channel.index()] = 1 << bit;
    img.set(i, j, Pixel::from_channels(c));
    Ok(img)
}

/// Per channel and bit index, how many pixel positions differ.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitplaneDiffReport {
    /// `counts[channel][bit]`, bit 0 being the least significant.
    pub counts: [[u64; 8]; 3],
    pub changed_pixels: u64,
    pub total_pixels: u64,
}

impl BitplaneDiffReport {
    pub fn count(&self, channel: Channel, bit: usize) -> u64 {
        self.counts[channel.index()][bit]
    }

    pub fn total_changed_bits(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Bits changed at index `bit` summed over the three channels.
    pub fn plane_total(&self, bit: usize) -> u64 {
        self.counts.iter().map(|c| c[bit]).sum()
    }

    /// True when every changed bit sits at index `bit`.
    pub fn confined_to(&self, bit: usize) -> bool {
        (0..8)
            .filter(|&b| b != bit)
            .all(|b| self.plane_total(b) == 0)
    }
}

impl fmt::Display for BitplaneDiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "channel")?;
        for bit in (0..8).rev() {
            write!(f, " {:>8}", format!("bit{bit}"))?;
        }
        writeln!(f)?;
        for ch in Channel::ALL {
            write!(f, "{:<7}", ch.letter())?;
            for bit in (0..8).rev() {
                write!(f, " {:>8}", self.count(ch, bit))?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "changed pixels: {} / {}, changed bits: {}",
            self.changed_pixels,
            self.total_pixels,
            self.total_changed_bits()
        )
    }
}

pub fn bitplane_diff_report(a: &RgbImage, b: &RgbImage) -> Result<BitplaneDiffReport> {
    a.same_dims(b)?;
    let mut report = BitplaneDiffReport {
        total_pixels: a.len() as u64,
        ..Default::default()
    };
    for (&pa, &pb) in a.pixels().iter().zip(b.pixels()) {
        let d = pa ^ pb;
        if d == Pixel::ZERO {
            continue;
        }
        report.changed_pixels += 1;
        for (c, byte) in d.channels().into_iter().enumerate() {
            for bit in 0..8 {
                report.counts[c][bit] += u64::from((byte >> bit) & 1);
            }
        }
    }
    Ok(report)
}

type Pass = fn(&RgbImage) -> RgbImage;
type KeyedPass = fn(&RgbImage, &DiffusionKeySet) -> RgbImage;

/// The four diffusion passes under test by [`verify_lemmas_with`].
#[derive(Clone, Copy)]
pub struct DiffusionPasses {
    pub hd: Pass,
    pub vd: Pass,
    pub keyed_hd: KeyedPass,
    pub keyed_vd: KeyedPass,
}

impl Default for DiffusionPasses {
    fn default() -> Self {
        DiffusionPasses {
            hd: horizontal_diffuse,
            vd: vertical_diffuse,
            keyed_hd: keyed_horizontal_diffuse,
            keyed_vd: keyed_vertical_diffuse,
        }
    }
}

/// Pass counts of the structural identities over a batch of random trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LemmaReport {
    pub trials: usize,
    /// `HD(X^Y) = HD(X)^HD(Y)` and the same for `VD`.
    pub linearity: usize,
    /// `mHD(X) = HD(X) ^ mHD(0)`.
    pub lemma1: usize,
    /// `mVD(X) = VD(X) ^ mVD(0)`.
    pub lemma2: usize,
    /// Real mPPS09 ciphertext equals `VD(HD(I)) ^` the closed-form equivalent key.
    pub proposition: usize,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        [self.linearity, self.lemma1, self.lemma2, self.proposition]
            .iter()
            .all(|&n| n == self.trials)
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.trials;
        writeln!(f, "xor-linearity of HD/VD : {}/{n}", self.linearity)?;
        writeln!(f, "mHD = HD + mHD(0)      : {}/{n}", self.lemma1)?;
        writeln!(f, "mVD = VD + mVD(0)      : {}/{n}", self.lemma2)?;
        write!(f, "mPPS09 closed form     : {}/{n}", self.proposition)
    }
}

/// Default trial sizes: three degenerate shapes followed by random ones up to
/// 16x16.
pub fn default_trial_size(trial: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    match trial % 4 {
        0 => (1, 1),
        1 => (1, rng.random_range(2..=16)),
        2 => (rng.random_range(2..=16), 1),
        _ => (rng.random_range(1..=16), rng.random_range(1..=16)),
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn random_image(rng: &mut impl Rng, h: usize, w: usize) -> RgbImage {
    let mut raw = vec![0u8; 3 * h * w];
    rng.fill(&mut raw[..]);
    RgbImage::from_raw(h, w, &raw).expect("dimensions are positive")
}

/// Runs the linearity, Lemma-style and closed-form checks on `trials` random
/// images and keys using the real diffusion passes.
pub fn verify_lemmas(trials: usize, seed: u64) -> LemmaReport {
    verify_lemmas_with(
        trials,
        seed,
        &DiffusionPasses::default(),
        default_trial_size,
    )
}

/// Same as [`verify_lemmas`] with substitutable passes and size picker. The
/// closed-form check always compares against the real mPPS09 cipher, so a
/// faulty pass shows up there even when it is internally consistent.
/// Trials run in parallel; each draws from its own ChaCha stream, so the
/// report depends only on `seed`.
pub fn verify_lemmas_with(
    trials: usize,
    seed: u64,
    passes: &DiffusionPasses,
    size: fn(usize, &mut ChaCha8Rng) -> (usize, usize),
) -> LemmaReport {
    let outcomes: Vec<[bool; 4]> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let (h, w) = size(t, &mut rng);
            let x = random_image(&mut rng, h, w);
            let y = random_image(&mut rng, h, w);
            let zero = RgbImage::zeros(h, w).expect("dimensions are positive");
            let dk = DiffusionKeySet(rng.random());
            let key = SecretKey::random(&mut rng);

            let linear = (passes.hd)(&(&x ^ &y)) == &(passes.hd)(&x) ^ &(passes.hd)(&y)
                && (passes.vd)(&(&x ^ &y)) == &(passes.vd)(&x) ^ &(passes.vd)(&y);
            let lemma1 =
                (passes.keyed_hd)(&x, &dk) == &(passes.hd)(&x) ^ &(passes.keyed_hd)(&zero, &dk);
            let lemma2 =
                (passes.keyed_vd)(&x, &dk) == &(passes.vd)(&x) ^ &(passes.keyed_vd)(&zero, &dk);
            let proposition = match (
                encrypt_mpps09(&x, &key),
                closed_form_with(passes, Scheme::Mpps09, &key, h, w),
            ) {
                (Ok(c), Ok(ek)) => c == &(passes.vd)(&(passes.hd)(&x)) ^ ek.image(),
                _ => false,
            };
            [linear, lemma1, lemma2, proposition]
        })
        .collect();

    let tally = |i: usize| outcomes.iter().filter(|o| o[i]).count();
    LemmaReport {
        trials,
        linearity: tally(0),
        lemma1: tally(1),
        lemma2: tally(2),
        proposition: tally(3),
    }
}
