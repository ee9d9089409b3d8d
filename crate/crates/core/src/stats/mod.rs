//! Randomness battery for the blue-channel keystream (the logistic-map bytes
//! of `I_cks`).
//!
//! A batch experiment samples random secret keys, serializes the blue channel
//! of each keystream image to bits (raster order, most significant bit first)
//! and runs five SP 800-22 tests on every sequence. A sequence passes a test
//! when its p-value is at least [`SIGNIFICANCE`].

pub mod nist;
pub mod special;

use std::fmt;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chaos::{cks_image, SecretKey};
use crate::error::{Error, Result};

pub use nist::{
    approximate_entropy_test, block_frequency_test, cusum_forward_test, frequency_test, runs_test,
};

pub const SIGNIFICANCE: f64 = 0.01;
pub const BLOCK_FREQUENCY_M: usize = 100;
pub const APPROXIMATE_ENTROPY_M: usize = 10;

/// A non-empty sequence of bits, one per byte with value 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InsufficientData("bit sequence is empty".into()));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "bit sequence holds {} at position {pos}",
                bits[pos]
            )));
        }
        Ok(BitSequence { bits })
    }

    /// Expands bytes most significant bit first.
    pub fn from_bytes_msb_first(bytes: &[u8]) -> Result<Self> {
        let bits = bytes
            .iter()
            .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1))
            .collect();
        Self::new(bits)
    }

    /// Parses a string of `'0'` and `'1'` characters.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidParameter(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Blue channel of `cks_image(key, H, W)` as an `8·H·W`-bit sequence.
pub fn extract_blue_bits(key: &SecretKey, height: usize, width: usize) -> Result<BitSequence> {
    let cks = cks_image(key, height, width)?;
    let bytes: Vec<u8> = cks.pixels().iter().map(|p| p.b).collect();
    BitSequence::from_bytes_msb_first(&bytes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestKind {
    Frequency,
    BlockFrequency,
    CusumForward,
    Runs,
    ApproximateEntropy,
}

impl TestKind {
    pub const ALL: [TestKind; 5] = [
        TestKind::Frequency,
        TestKind::BlockFrequency,
        TestKind::CusumForward,
        TestKind::Runs,
        TestKind::ApproximateEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestKind::Frequency => "frequency",
            TestKind::BlockFrequency => "block_frequency",
            TestKind::CusumForward => "cusum_forward",
            TestKind::Runs => "runs",
            TestKind::ApproximateEntropy => "approximate_entropy",
        }
    }

    pub fn run(self, s: &BitSequence) -> Result<f64> {
        match self {
            TestKind::Frequency => Ok(frequency_test(s)),
            TestKind::BlockFrequency => block_frequency_test(s, BLOCK_FREQUENCY_M),
            TestKind::CusumForward => Ok(cusum_forward_test(s)),
            TestKind::Runs => Ok(runs_test(s)),
            TestKind::ApproximateEntropy => approximate_entropy_test(s, APPROXIMATE_ENTROPY_M),
        }
    }
}

/// p-values of every test on every sampled key.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub key_count: usize,
    pub height: usize,
    pub width: usize,
    pub seed: u64,
    /// `p_values[key][test]`, tests in [`TestKind::ALL`] order.
    pub p_values: Vec<[f64; 5]>,
}

impl TestReport {
    pub fn sequence_bits(&self) -> usize {
        8 * self.height * self.width
    }

    pub fn p_values_of(&self, test: TestKind) -> impl Iterator<Item = f64> + '_ {
        let idx = test_index(test);
        self.p_values.iter().map(move |row| row[idx])
    }

    pub fn passes(&self, test: TestKind) -> usize {
        self.p_values_of(test)
            .filter(|&p| p >= SIGNIFICANCE)
            .count()
    }

    /// Writes one row per key and test, then one summary row per test and a
    /// trailing metadata row:
    ///
    /// ```text
    /// key_index,test,p_value,pass
    /// 0,frequency,0.4321...,1
    /// ...
    /// summary,frequency,95,100
    /// meta,sequence_bits=262144,seed=1,significance=0.01
    /// ```
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(["key_index", "test", "p_value", "pass"])?;
        for (i, row) in self.p_values.iter().enumerate() {
            for (test, &p) in TestKind::ALL.iter().zip(row) {
                w.write_record([
                    i.to_string(),
                    test.name().to_string(),
                    format!("{p:.10e}"),
                    u8::from(p >= SIGNIFICANCE).to_string(),
                ])?;
            }
        }
        for test in TestKind::ALL {
            w.write_record([
                "summary".to_string(),
                test.name().to_string(),
                self.passes(test).to_string(),
                self.key_count.to_string(),
            ])?;
        }
        w.write_record([
            "meta".to_string(),
            format!("sequence_bits={}", self.sequence_bits()),
            format!("seed={}", self.seed),
            format!("significance={SIGNIFICANCE}"),
        ])?;
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} keys, {}x{} blue channel ({} bits each), seed {}",
            self.key_count,
            self.height,
            self.width,
            self.sequence_bits(),
            self.seed
        )?;
        for test in TestKind::ALL {
            writeln!(
                f,
                "{:<20} {:>5} / {}",
                test.name(),
                self.passes(test),
                self.key_count
            )?;
        }
        Ok(())
    }
}

fn test_index(test: TestKind) -> usize {
    TestKind::ALL
        .iter()
        .position(|&t| t == test)
        .expect("listed")
}

/// The key used for sequence `index` of an experiment seeded with `seed`.
pub fn experiment_key(seed: u64, index: usize) -> SecretKey {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    SecretKey::random(&mut rng)
}

/// Samples `key_count` keys and runs all five tests on each blue-channel
/// sequence. Keys are processed in parallel; each draws from its own RNG
/// stream so the report does not depend on scheduling.
pub fn run_table1_experiment(
    key_count: usize,
    height: usize,
    width: usize,
    seed: u64,
) -> Result<TestReport> {
    if key_count == 0 {
        return Err(Error::InvalidParameter(
            "key count must be at least 1".into(),
        ));
    }
    let p_values = (0..key_count)
        .into_par_iter()
        .map(|i| {
            let bits = extract_blue_bits(&experiment_key(seed, i), height, width)?;
            let mut row = [0.0; 5];
            for (slot, test) in row.iter_mut().zip(TestKind::ALL) {
                *slot = test.run(&bits)?;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TestReport {
        key_count,
        height,
        width,
        seed,
        p_values,
    })
}
