//! The one-time pad shared by a sensor and its defender.
//!
//! Pads are generated from a seeded ChaCha stream so experiments can be
//! replayed. A deployed sensor must draw its pad from a cryptographically
//! secure source and keep it secret; the seed then becomes key material.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::Rng as _;
use thiserror::Error;

use crate::rng::seeded_rng;

#[derive(Debug, Error)]
pub enum PadError {
    #[error("pad length must be at least 1")]
    Empty,
    #[error("invalid character {found:?} at position {position}")]
    InvalidChar { position: usize, found: char },
    #[error("pad has {have} bits, need at least {need}")]
    TooShort { have: usize, need: usize },
    #[error("pad file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

const BITS_PER_LINE: usize = 64;

/// Secret bit sequence `k_1..k_n`; bit `i` signs the distortion at slot `i`.
///
/// `Debug` only shows the length so pads do not leak into logs.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretPad {
    bits: Vec<bool>,
}

impl SecretPad {
    pub fn new(bits: Vec<bool>) -> Result<Self, PadError> {
        if bits.is_empty() {
            return Err(PadError::Empty);
        }
        Ok(Self { bits })
    }

    /// Pad from `0`/`1` integers; any non-zero value counts as 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self, PadError> {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// First `len` bits as a new pad.
    pub fn prefix(&self, len: usize) -> Result<Self, PadError> {
        self.segment(0, len)
    }

    /// Bits `start..start + len`. Used to hand each tumbling window its own
    /// unused part of the pad.
    pub fn segment(&self, start: usize, len: usize) -> Result<Self, PadError> {
        let need = start.saturating_add(len);
        if need > self.len() {
            return Err(PadError::TooShort { have: self.len(), need });
        }
        Self::new(self.bits[start..need].to_vec())
    }

    /// Fails unless the pad covers `len` slots.
    pub fn ensure_covers(&self, len: usize) -> Result<(), PadError> {
        if self.len() < len {
            Err(PadError::TooShort {
                have: self.len(),
                need: len,
            })
        } else {
            Ok(())
        }
    }

    /// Text form: `0`/`1` characters, a newline after every 64 bits.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.len() + self.len() / BITS_PER_LINE + 1);
        for chunk in self.bits.chunks(BITS_PER_LINE) {
            s.extend(chunk.iter().map(|&b| if b { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    /// Parse the text form. Whitespace is ignored; positions in errors are
    /// 1-based character offsets.
    pub fn from_text(text: &str) -> Result<Self, PadError> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                found => return Err(PadError::InvalidChar { position: i + 1, found }),
            }
        }
        Self::new(bits)
    }
}

impl fmt::Debug for SecretPad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecretPad")
            .field("len", &self.len())
            .finish_non_exhaustive()
    }
}

/// `n` fair, independent bits from `seed`.
pub fn generate_pad(n: usize, seed: u64) -> Result<SecretPad, PadError> {
    if n == 0 {
        return Err(PadError::Empty);
    }
    let mut bits = Vec::with_capacity(n);
    fill_pad_bits(&mut bits, n, seed);
    SecretPad::new(bits)
}

/// Append `n` pad bits from `seed` to `out`; same stream as [`generate_pad`].
pub(crate) fn fill_pad_bits(out: &mut Vec<bool>, n: usize, seed: u64) {
    let mut rng = seeded_rng(seed);
    let mut left = n;
    while left > 0 {
        let word: u64 = rng.random();
        let take = left.min(64);
        out.extend((0..take).map(|j| (word >> j) & 1 == 1));
        left -= take;
    }
}

pub fn load_pad(path: impl AsRef<Path>) -> Result<SecretPad, PadError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| PadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    SecretPad::from_text(&text)
}

pub fn save_pad(pad: &SecretPad, path: impl AsRef<Path>) -> Result<(), PadError> {
    let path = path.as_ref();
    fs::write(path, pad.to_text()).map_err(|source| PadError::Io {
        path: path.display().to_string(),
        source,
    })
}
