//! The horizontal and vertical XOR-chaining passes, their keyed variants and
//! exact inverses.
//!
//! Horizontal passes walk the image row by row from the top-left pixel and
//! mask each pixel with its already-diffused predecessor. Vertical passes walk
//! column by column from the bottom-right pixel backwards and mask each pixel
//! with the channel mix ([`overline`]) of its already-diffused successor.
//! Every pass is affine over GF(2); the unkeyed passes are linear.

use crate::chaos::DiffusionKeySet;
use crate::image::{Pixel, RgbImage};

/// Channel mixer `(r, g, b) -> (g^b, r^b, r^g)`.
#[inline]
pub fn overline(p: Pixel) -> Pixel {
    Pixel::new(p.g ^ p.b, p.r ^ p.b, p.r ^ p.g)
}

/// Raster index of column-major scan position `k`.
#[inline]
fn column_major(k: usize, height: usize, width: usize) -> usize {
    (k % height) * width + k / height
}

/// Key pixel for horizontal step `m = k - 1`: all channels equal key `m mod 16`.
#[inline]
fn horizontal_key(dk: &DiffusionKeySet, m: usize) -> Pixel {
    Pixel::splat(dk.at(m))
}

/// Key pixel for vertical step `m = HW - 2 - k`.
#[inline]
fn vertical_key(dk: &DiffusionKeySet, m: usize) -> Pixel {
    Pixel::new(dk.at(3 * m), dk.at(3 * m + 1), dk.at(3 * m + 2))
}

fn hd_impl(img: &RgbImage, dk: Option<&DiffusionKeySet>) -> RgbImage {
    let mut out = img.clone();
    let px = out.pixels_mut();
    for k in 1..px.len() {
        let mut v = px[k] ^ px[k - 1];
        if let Some(dk) = dk {
            v ^= horizontal_key(dk, k - 1);
        }
        px[k] = v;
    }
    out
}

fn hd_inverse_impl(img: &RgbImage, dk: Option<&DiffusionKeySet>) -> RgbImage {
    let src = img.pixels();
    let mut out = img.clone();
    let px = out.pixels_mut();
    for k in 1..src.len() {
        let mut v = src[k] ^ src[k - 1];
        if let Some(dk) = dk {
            v ^= horizontal_key(dk, k - 1);
        }
        px[k] = v;
    }
    out
}

fn vd_impl(img: &RgbImage, dk: Option<&DiffusionKeySet>) -> RgbImage {
    let (h, w) = img.dims();
    let total = h * w;
    let mut out = img.clone();
    let px = out.pixels_mut();
    for k in (0..total - 1).rev() {
        let cur = column_major(k, h, w);
        let prev = column_major(k + 1, h, w);
        let mut v = px[cur] ^ overline(px[prev]);
        if let Some(dk) = dk {
            v ^= vertical_key(dk, total - 2 - k);
        }
        px[cur] = v;
    }
    out
}

fn vd_inverse_impl(img: &RgbImage, dk: Option<&DiffusionKeySet>) -> RgbImage {
    let (h, w) = img.dims();
    let total = h * w;
    let src = img.pixels();
    let mut out = img.clone();
    let px = out.pixels_mut();
    for k in 0..total - 1 {
        let cur = column_major(k, h, w);
        let prev = column_major(k + 1, h, w);
        let mut v = src[cur] ^ overline(src[prev]);
        if let Some(dk) = dk {
            v ^= vertical_key(dk, total - 2 - k);
        }
        px[cur] = v;
    }
    out
}

pub fn horizontal_diffuse(img: &RgbImage) -> RgbImage {
    hd_impl(img, None)
}

pub fn horizontal_undiffuse(img: &RgbImage) -> RgbImage {
    hd_inverse_impl(img, None)
}

pub fn vertical_diffuse(img: &RgbImage) -> RgbImage {
    vd_impl(img, None)
}

pub fn vertical_undiffuse(img: &RgbImage) -> RgbImage {
    vd_inverse_impl(img, None)
}

/// Horizontal pass that additionally masks raster position `k >= 1` with
/// diffusion key `(k - 1) mod 16` on all three channels.
pub fn keyed_horizontal_diffuse(img: &RgbImage, dk: &DiffusionKeySet) -> RgbImage {
    hd_impl(img, Some(dk))
}

pub fn keyed_horizontal_undiffuse(img: &RgbImage, dk: &DiffusionKeySet) -> RgbImage {
    hd_inverse_impl(img, Some(dk))
}

/// Vertical pass that additionally masks scan position `k < HW - 1` with
/// diffusion keys `3m, 3m+1, 3m+2` (mod 16) where `m = HW - 2 - k`.
pub fn keyed_vertical_diffuse(img: &RgbImage, dk: &DiffusionKeySet) -> RgbImage {
    vd_impl(img, Some(dk))
}

pub fn keyed_vertical_undiffuse(img: &RgbImage, dk: &DiffusionKeySet) -> RgbImage {
    vd_inverse_impl(img, Some(dk))
}

/// `VD(HD(img))`, the key-independent linear core shared by both ciphers.
pub fn linear_core(img: &RgbImage) -> RgbImage {
    vertical_diffuse(&horizontal_diffuse(img))
}

/// Inverse of [`linear_core`].
pub fn linear_core_inverse(img: &RgbImage) -> RgbImage {
    horizontal_undiffuse(&vertical_undiffuse(img))
}
