//! PPS09 and mPPS09 encryption pipelines.
//!
//! Both ciphers mask the plaintext with `I_xkey`, run a horizontal and a
//! vertical diffusion pass and mask the result with `I_cks`. mPPS09 swaps the
//! diffusion passes for their keyed variants.

use std::fmt;
use std::str::FromStr;

use crate::chaos::{cks_image, xkey_image, DiffusionKeySet, SecretKey};
use crate::diffusion::{
    horizontal_diffuse, horizontal_undiffuse, keyed_horizontal_diffuse, keyed_horizontal_undiffuse,
    keyed_vertical_diffuse, keyed_vertical_undiffuse, vertical_diffuse, vertical_undiffuse,
};
use crate::error::{Error, Result};
use crate::image::RgbImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Unkeyed diffusion.
    Pps09,
    /// Diffusion passes keyed by the sixteen diffusion keys.
    Mpps09,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Pps09, Scheme::Mpps09];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Pps09 => "pps09",
            Scheme::Mpps09 => "mpps09",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pps09" => Ok(Scheme::Pps09),
            "mpps09" => Ok(Scheme::Mpps09),
            other => Err(Error::InvalidParameter(format!(
                "unknown cipher {other:?}, expected pps09 or mpps09"
            ))),
        }
    }
}

/// A cipher instance bound to one key and one image size, holding the
/// precomputed mask images. `I_cks` has exactly `H * W` pixels, so an instance
/// only accepts images of the size it was built for.
#[derive(Debug, Clone)]
pub struct Cipher {
    scheme: Scheme,
    xkey: RgbImage,
    cks: RgbImage,
    dkeys: DiffusionKeySet,
}

impl Cipher {
    pub fn new(scheme: Scheme, key: &SecretKey, height: usize, width: usize) -> Result<Self> {
        Ok(Cipher {
            scheme,
            xkey: xkey_image(key, height, width)?,
            cks: cks_image(key, height, width)?,
            dkeys: DiffusionKeySet::from_key(key),
        })
    }

    /// Replaces the diffusion keys derived from the secret key. Only affects
    /// [`Scheme::Mpps09`].
    pub fn with_diffusion_keys(mut self, dkeys: DiffusionKeySet) -> Self {
        self.dkeys = dkeys;
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn dims(&self) -> (usize, usize) {
        self.xkey.dims()
    }

    pub fn xkey_image(&self) -> &RgbImage {
        &self.xkey
    }

    pub fn cks_image(&self) -> &RgbImage {
        &self.cks
    }

    pub fn diffusion_keys(&self) -> &DiffusionKeySet {
        &self.dkeys
    }

    pub fn encrypt(&self, plain: &RgbImage) -> Result<RgbImage> {
        self.xkey.same_dims(plain)?;
        let masked = plain ^ &self.xkey;
        let mut out = match self.scheme {
            Scheme::Pps09 => vertical_diffuse(&horizontal_diffuse(&masked)),
            Scheme::Mpps09 => {
                keyed_vertical_diffuse(&keyed_horizontal_diffuse(&masked, &self.dkeys), &self.dkeys)
            }
        };
        out ^= &self.cks;
        Ok(out)
    }

    pub fn decrypt(&self, cipher: &RgbImage) -> Result<RgbImage> {
        self.cks.same_dims(cipher)?;
        let unmasked = cipher ^ &self.cks;
        let mut out = match self.scheme {
            Scheme::Pps09 => horizontal_undiffuse(&vertical_undiffuse(&unmasked)),
            Scheme::Mpps09 => keyed_horizontal_undiffuse(
                &keyed_vertical_undiffuse(&unmasked, &self.dkeys),
                &self.dkeys,
            ),
        };
        out ^= &self.xkey;
        Ok(out)
    }
}

pub fn encrypt(scheme: Scheme, plain: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    Cipher::new(scheme, key, plain.height(), plain.width())?.encrypt(plain)
}

pub fn decrypt(scheme: Scheme, cipher: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    Cipher::new(scheme, key, cipher.height(), cipher.width())?.decrypt(cipher)
}

pub fn encrypt_pps09(plain: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    encrypt(Scheme::Pps09, plain, key)
}

pub fn decrypt_pps09(cipher: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    decrypt(Scheme::Pps09, cipher, key)
}

pub fn encrypt_mpps09(plain: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    encrypt(Scheme::Mpps09, plain, key)
}

pub fn decrypt_mpps09(cipher: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    decrypt(Scheme::Mpps09, cipher, key)
}
