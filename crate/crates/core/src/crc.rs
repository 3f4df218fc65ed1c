//! Cyclic redundancy checks appended to the message before encoding.
//!
//! The generator polynomial is written most-significant coefficient first,
//! so `"1011"` is x^3 + x + 1. The register starts at zero and the remainder
//! of m(x) * x^L modulo g(x) is appended after the message bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcConfig {
    /// Coefficients, highest degree first. Length is `len + 1`.
    pub poly: String,
    pub len: usize,
}

impl CrcConfig {
    pub fn new(poly: &str) -> Result<Self> {
        let cfg = CrcConfig {
            len: poly.len().saturating_sub(1),
            poly: poly.to_string(),
        };
        cfg.check()?;
        Ok(cfg)
    }

    /// The 11-bit polynomial D^11 + D^10 + D^9 + D^5 + 1 used with 5G uplink polar codes.
    pub fn crc11() -> Self {
        CrcConfig::new("111000100001").expect("valid constant")
    }

    pub fn check(&self) -> Result<()> {
        let bits = self.poly.as_bytes();
        if bits.len() != self.len + 1 || self.len == 0 {
            return Err(Error::InvalidCode(format!(
                "crc polynomial {:?} does not have degree {}",
                self.poly, self.len
            )));
        }
        if bits.iter().any(|&c| c != b'0' && c != b'1') {
            return Err(Error::InvalidCode(format!("crc polynomial {:?} is not binary", self.poly)));
        }
        if bits[0] != b'1' || bits[self.len] != b'1' {
            return Err(Error::InvalidCode(format!(
                "crc polynomial {:?} must have leading and constant terms",
                self.poly
            )));
        }
        Ok(())
    }

    fn taps(&self) -> Vec<u8> {
        self.poly.bytes().skip(1).map(|c| c - b'0').collect()
    }

    /// Remainder bits for `msg`, highest degree first.
    pub fn remainder(&self, msg: &[u8]) -> Vec<u8> {
        let taps = self.taps();
        let mut reg = vec![0u8; self.len];
        for &b in msg {
            let fb = (b & 1) ^ reg[0];
            reg.rotate_left(1);
            reg[self.len - 1] = 0;
            if fb == 1 {
                for (r, t) in reg.iter_mut().zip(&taps) {
                    *r ^= t;
                }
            }
        }
        reg
    }

    /// Message followed by its remainder.
    pub fn append(&self, msg: &[u8]) -> Vec<u8> {
        let mut out = msg.to_vec();
        out.extend(self.remainder(msg));
        out
    }

    /// True if the trailing `len` bits are the remainder of the leading ones.
    pub fn verify(&self, word: &[u8]) -> bool {
        if word.len() < self.len {
            return false;
        }
        let (msg, rem) = word.split_at(word.len() - self.len);
        self.remainder(msg) == rem
    }
}
