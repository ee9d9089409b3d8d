//! Chaotic map iteration and the key schedule: the four XOR keys, the sixteen
//! diffusion keys, and the two mask images `I_xkey` and `I_cks`.
//!
//! All arithmetic is IEEE-754 double precision. The standard map is updated
//! sequentially: the new `x` is computed first and the `y` update adds that new
//! `x` together with `K * sin(y_old)`.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::image::{check_dims, Pixel, RgbImage};

/// Number of decimal digits taken from each of `x0`, `y0` and `K`.
pub const KEY_DIGITS: usize = 15;

/// Upper bound on `K` used when sampling random keys.
pub const RANDOM_K_MAX: f64 = 2000.0;

/// The secret key `(x0, y0, K, N)`.
///
/// Keys are built from decimal strings so that the digit expansions used by
/// the diffusion-key schedule are exact. For `x0` and `y0` the first digit is
/// the integer-part digit followed by the first 14 fractional digits; for `K`
/// the first digit is the one immediately left of the decimal point. Inputs
/// with fewer than 14 fractional digits are right-padded with zeros, longer
/// ones are truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct SecretKey {
    x0: f64,
    y0: f64,
    k: f64,
    n: u32,
    x0_digits: [u8; KEY_DIGITS],
    y0_digits: [u8; KEY_DIGITS],
    k_digits: [u8; KEY_DIGITS],
    text: [String; 4],
}

impl SecretKey {
    /// Parses and validates the four components.
    pub fn parse(x0: &str, y0: &str, k: &str, n: &str) -> Result<Self> {
        let (x0_val, x0_digits) = parse_decimal("x0", x0)?;
        let (y0_val, y0_digits) = parse_decimal("y0", y0)?;
        let (k_val, k_digits) = parse_decimal("K", k)?;
        let n_text = n.trim();
        if n_text.is_empty() || !n_text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::KeyFormat(format!(
                "N must be a decimal integer, got {n:?}"
            )));
        }
        let n_val: u32 = n_text
            .parse()
            .map_err(|_| Error::KeyRange(format!("N must satisfy 100 < N < 1100, got {n_text}")))?;

        if !(x0_val > 0.0 && x0_val < TAU) {
            return Err(Error::KeyRange(format!(
                "x0 must satisfy 0 < x0 < 2*pi, got {x0_val}"
            )));
        }
        if !(y0_val > 0.0 && y0_val < TAU) {
            return Err(Error::KeyRange(format!(
                "y0 must satisfy 0 < y0 < 2*pi, got {y0_val}"
            )));
        }
        if !(k_val > 18.0 && k_val.is_finite()) {
            return Err(Error::KeyRange(format!(
                "K must satisfy K > 18, got {k_val}"
            )));
        }
        if !(n_val > 100 && n_val < 1100) {
            return Err(Error::KeyRange(format!(
                "N must satisfy 100 < N < 1100, got {n_val}"
            )));
        }

        Ok(SecretKey {
            x0: x0_val,
            y0: y0_val,
            k: k_val,
            n: n_val,
            x0_digits,
            y0_digits,
            k_digits,
            text: [
                x0.trim().to_owned(),
                y0.trim().to_owned(),
                k.trim().to_owned(),
                n_text.to_owned(),
            ],
        })
    }

    /// Builds a key from numeric values by formatting each real with 14
    /// fractional digits. Fails if rounding pushes a value out of range.
    pub fn from_values(x0: f64, y0: f64, k: f64, n: u32) -> Result<Self> {
        Self::parse(
            &format!("{x0:.14}"),
            &format!("{y0:.14}"),
            &format!("{k:.14}"),
            &n.to_string(),
        )
    }

    /// Samples a key uniformly from `x0, y0 in (0, 2pi)`, `K in (18, RANDOM_K_MAX]`,
    /// `N in (100, 1100)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x0 = rng.random::<f64>() * TAU;
            let y0 = rng.random::<f64>() * TAU;
            let k = RANDOM_K_MAX - rng.random::<f64>() * (RANDOM_K_MAX - 18.0);
            let n = rng.random_range(101..1100);
            if let Ok(key) = Self::from_values(x0, y0, k, n) {
                return key;
            }
        }
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x0_digits(&self) -> &[u8; KEY_DIGITS] {
        &self.x0_digits
    }

    pub fn y0_digits(&self) -> &[u8; KEY_DIGITS] {
        &self.y0_digits
    }

    pub fn k_digits(&self) -> &[u8; KEY_DIGITS] {
        &self.k_digits
    }
}

impl fmt::Display for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text.join(","))
    }
}

/// Parses `"x0,y0,K,N"`.
impl FromStr for SecretKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        match parts.as_slice() {
            [x0, y0, k, n] => Self::parse(x0, y0, k, n),
            _ => Err(Error::KeyFormat(format!(
                "expected four comma-separated values x0,y0,K,N, got {} field(s)",
                parts.len()
            ))),
        }
    }
}

fn parse_decimal(name: &str, s: &str) -> Result<(f64, [u8; KEY_DIGITS])> {
    let s = s.trim();
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let well_formed = !(int_part.is_empty() && frac_part.is_empty())
        && int_part.bytes().all(|b| b.is_ascii_digit())
        && frac_part.bytes().all(|b| b.is_ascii_digit());
    if !well_formed {
        return Err(Error::KeyFormat(format!(
            "{name} must be a plain decimal number like 3.14159, got {s:?}"
        )));
    }

    let mut digits = [0u8; KEY_DIGITS];
    digits[0] = int_part.bytes().last().map_or(0, |b| b - b'0');
    for (slot, b) in digits[1..].iter_mut().zip(frac_part.bytes()) {
        *slot = b - b'0';
    }
    let value: f64 = s
        .parse()
        .map_err(|_| Error::KeyFormat(format!("{name}: cannot parse {s:?}")))?;
    Ok((value, digits))
}

/// One step of the standard map.
#[inline]
pub fn standard_step(x: f64, y: f64, k: f64) -> (f64, f64) {
    let kick = k * y.sin();
    let x_new = wrap_angle(x + kick);
    let y_new = wrap_angle(y + x_new + kick);
    (x_new, y_new)
}

/// One step of the logistic map with control parameter 4.
#[inline]
pub fn logistic_step(z: f64) -> f64 {
    4.0 * z * (1.0 - z)
}

#[inline]
fn wrap_angle(v: f64) -> f64 {
    let r = v.rem_euclid(TAU);
    // rem_euclid may round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// The `n` states following `(x, y)` under the standard map with parameter `k`.
pub fn iterate_standard_map(x: f64, y: f64, k: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    if !(x.is_finite() && y.is_finite() && k.is_finite()) {
        return Err(Error::InvalidState(format!(
            "standard map needs finite inputs, got x={x}, y={y}, K={k}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "orbit length must be at least 1".into(),
        ));
    }
    let mut state = (x, y);
    Ok((0..n)
        .map(|_| {
            state = standard_step(state.0, state.1, k);
            state
        })
        .collect())
}

/// The `n` values following `z` under the logistic map.
pub fn iterate_logistic(z: f64, n: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidState(format!(
            "logistic state must lie in [0, 1], got {z}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter(
            "orbit length must be at least 1".into(),
        ));
    }
    let mut state = z;
    Ok((0..n)
        .map(|_| {
            state = logistic_step(state);
            state
        })
        .collect())
}

/// `floor(256 * v / 2pi)` clamped to 255.
#[inline]
pub fn quantize_angle(v: f64) -> u8 {
    (256.0 * v / TAU).floor().clamp(0.0, 255.0) as u8
}

/// `floor(256 * z)` clamped to 255.
#[inline]
pub fn quantize_unit(z: f64) -> u8 {
    (256.0 * z).floor().clamp(0.0, 255.0) as u8
}

/// The four XOR keys, stored 0-based (entry `i` is the key numbered `i + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XorKeySet(pub [u8; 4]);

impl XorKeySet {
    pub fn from_key(key: &SecretKey) -> Self {
        let k1 = ((256.0 * key.x0 / TAU).floor() as u32 % 256) as u8;
        let k2 = ((256.0 * key.y0 / TAU).floor() as u32 % 256) as u8;
        let k3 = key.k.rem_euclid(256.0).floor() as u8;
        let k4 = (key.n % 256) as u8;
        XorKeySet([k1, k2, k3, k4])
    }

    /// Tiles the keys over an `H x W` image: the pixel at raster index `k`
    /// takes keys `3k, 3k+1, 3k+2` (mod 4) on R, G, B.
    pub fn image(&self, height: usize, width: usize) -> Result<RgbImage> {
        check_dims(height, width)?;
        let ks = self.0;
        let pixels = (0..height * width)
            .map(|k| Pixel::new(ks[(3 * k) % 4], ks[(3 * k + 1) % 4], ks[(3 * k + 2) % 4]))
            .collect();
        RgbImage::new(height, width, pixels)
    }
}

pub fn xor_keys(key: &SecretKey) -> XorKeySet {
    XorKeySet::from_key(key)
}

pub fn xkey_image(key: &SecretKey, height: usize, width: usize) -> Result<RgbImage> {
    XorKeySet::from_key(key).image(height, width)
}

/// The chaotic keystream image.
///
/// The standard map runs `N` discarded steps from `(x0, y0)` and then `HW`
/// recorded ones. The post-discard state seeds the logistic map through
/// `z0 = (x0' + y0') mod 1`, which likewise runs `N` discarded and `HW`
/// recorded steps. Raster pixel `k` gets the quantized `x`, `y` and `z` of the
/// `(k+1)`-th recorded state.
pub fn cks_image(key: &SecretKey, height: usize, width: usize) -> Result<RgbImage> {
    check_dims(height, width)?;
    let len = height * width;

    let (mut x, mut y) = (key.x0, key.y0);
    for _ in 0..key.n {
        (x, y) = standard_step(x, y, key.k);
    }
    let mut z = (x + y).rem_euclid(1.0);

    let mut pixels = Vec::with_capacity(len);
    for _ in 0..len {
        (x, y) = standard_step(x, y, key.k);
        pixels.push(Pixel::new(quantize_angle(x), quantize_angle(y), 0));
    }
    for _ in 0..key.n {
        z = logistic_step(z);
    }
    for p in &mut pixels {
        z = logistic_step(z);
        p.b = quantize_unit(z);
    }
    RgbImage::new(height, width, pixels)
}

/// The sixteen diffusion keys, stored 0-based (entry `i` is the key
/// numbered `i + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DiffusionKeySet(pub [u8; 16]);

impl DiffusionKeySet {
    pub const ZERO: DiffusionKeySet = DiffusionKeySet([0; 16]);

    /// Keys 1..5, 6..10 and 11..15 are the three-digit groups of `x0`, `y0`
    /// and `K` reduced mod 256; key 16 is `N mod 256`.
    pub fn from_key(key: &SecretKey) -> Self {
        let mut out = [0u8; 16];
        let sources = [&key.x0_digits, &key.y0_digits, &key.k_digits];
        for (s, digits) in sources.iter().enumerate() {
            for (g, group) in digits.chunks_exact(3).enumerate() {
                let v = 100 * group[0] as u32 + 10 * group[1] as u32 + group[2] as u32;
                out[5 * s + g] = (v % 256) as u8;
            }
        }
        out[15] = (key.n % 256) as u8;
        DiffusionKeySet(out)
    }

    /// Entry at 0-based position `m mod 16`.
    #[inline]
    pub fn at(&self, m: usize) -> u8 {
        self.0[m % 16]
    }
}

pub fn diffusion_keys(key: &SecretKey) -> DiffusionKeySet {
    DiffusionKeySet::from_key(key)
}
