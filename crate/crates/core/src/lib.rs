//! Chaotic standard/logistic-map image ciphers (PPS09 and its keyed-diffusion
//! variant mPPS09), the equivalent-key known/chosen-plaintext attack that
//! breaks both, and the keystream randomness and differential analyses that
//! expose their remaining weaknesses.
//!
//! Every cipher in this crate has the shape
//! `I' = VD(HD(I ^ I_xkey)) ^ I_cks` where the diffusion passes are XOR-linear,
//! so a single known (plaintext, ciphertext) pair yields an image that
//! encrypts and decrypts all other traffic of the same size.

pub mod attack;
pub mod chaos;
pub mod cipher;
pub mod cli;
pub mod diffusion;
mod error;
pub mod image;
pub mod stats;

pub use attack::{BitplaneDiffReport, EquivalentKey};
pub use chaos::{DiffusionKeySet, SecretKey, XorKeySet};
pub use cipher::Scheme;
pub use error::{Error, Result};
pub use image::{Pixel, RgbImage};
