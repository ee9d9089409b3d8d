//! Three-channel byte images, the carrier for plaintexts, ciphertexts,
//! keystream pseudo-images and equivalent keys alike.

use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// An RGB pixel. XOR is componentwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Pixel {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Pixel {
    pub const ZERO: Pixel = Pixel { r: 0, g: 0, b: 0 };

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Pixel { r, g, b }
    }

    /// A pixel with the same byte on all three channels.
    pub const fn splat(v: u8) -> Self {
        Pixel { r: v, g: v, b: v }
    }

    pub const fn channels(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }

    pub const fn from_channels(c: [u8; 3]) -> Self {
        Pixel {
            r: c[0],
            g: c[1],
            b: c[2],
        }
    }
}

impl BitXor for Pixel {
    type Output = Pixel;

    #[inline]
    fn bitxor(self, rhs: Pixel) -> Pixel {
        Pixel {
            r: self.r ^ rhs.r,
            g: self.g ^ rhs.g,
            b: self.b ^ rhs.b,
        }
    }
}

impl BitXorAssign for Pixel {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Pixel) {
        *self = *self ^ rhs;
    }
}

/// An `H x W` image stored row-major: pixel `(i, j)` lives at `i * W + j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RgbImage {
    height: usize,
    width: usize,
    pixels: Vec<Pixel>,
}

impl RgbImage {
    pub fn new(height: usize, width: usize, pixels: Vec<Pixel>) -> Result<Self> {
        check_dims(height, width)?;
        if pixels.len() != height * width {
            return Err(Error::InvalidParameter(format!(
                "expected {} pixels for {height}x{width}, got {}",
                height * width,
                pixels.len()
            )));
        }
        Ok(RgbImage {
            height,
            width,
            pixels,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        check_dims(height, width)?;
        Ok(RgbImage {
            height,
            width,
            pixels: vec![Pixel::ZERO; height * width],
        })
    }

    /// Builds an image from interleaved `RGBRGB...` bytes in raster order.
    pub fn from_raw(height: usize, width: usize, bytes: &[u8]) -> Result<Self> {
        check_dims(height, width)?;
        if bytes.len() != 3 * height * width {
            return Err(Error::InvalidParameter(format!(
                "expected {} bytes for {height}x{width}, got {}",
                3 * height * width,
                bytes.len()
            )));
        }
        let pixels = bytes
            .chunks_exact(3)
            .map(|c| Pixel::new(c[0], c[1], c[2]))
            .collect();
        Ok(RgbImage {
            height,
            width,
            pixels,
        })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> Pixel,
    ) -> Result<Self> {
        check_dims(height, width)?;
        let mut pixels = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Ok(RgbImage {
            height,
            width,
            pixels,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; an image has at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [Pixel] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<Pixel> {
        self.pixels
    }

    pub fn get(&self, i: usize, j: usize) -> Pixel {
        self.pixels[i * self.width + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Pixel) {
        self.pixels[i * self.width + j] = p;
    }

    /// Interleaved `RGBRGB...` bytes in raster order.
    pub fn to_raw(&self) -> Vec<u8> {
        self.pixels.iter().flat_map(|p| p.channels()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.pixels.iter().all(|&p| p == Pixel::ZERO)
    }

    pub fn same_dims(&self, other: &RgbImage) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                left_h: self.height,
                left_w: self.width,
                right_h: other.height,
                right_w: other.width,
            });
        }
        Ok(())
    }

    /// Pixelwise XOR, failing on a size mismatch.
    pub fn try_xor(&self, other: &RgbImage) -> Result<RgbImage> {
        self.same_dims(other)?;
        Ok(self ^ other)
    }
}

/// Panics when the sizes differ; use [`RgbImage::try_xor`] for untrusted input.
impl BitXor for &RgbImage {
    type Output = RgbImage;

    fn bitxor(self, rhs: &RgbImage) -> RgbImage {
        assert_eq!(self.dims(), rhs.dims(), "XOR of differently sized images");
        RgbImage {
            height: self.height,
            width: self.width,
            pixels: self
                .pixels
                .iter()
                .zip(&rhs.pixels)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }
}

impl BitXorAssign<&RgbImage> for RgbImage {
    fn bitxor_assign(&mut self, rhs: &RgbImage) {
        assert_eq!(self.dims(), rhs.dims(), "XOR of differently sized images");
        for (a, &b) in self.pixels.iter_mut().zip(&rhs.pixels) {
            *a ^= b;
        }
    }
}

pub(crate) fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(Error::Dimension { height, width });
    }
    Ok(())
}
