//! Binary-input channel models and their LLR conventions.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// |LLR| used for perfectly known bits (shortened or unerased positions).
pub const LLR_SATURATION: f64 = (1u64 << 20) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelModel {
    Bec { epsilon: f64 },
    /// BPSK over AWGN, x -> 1 - 2x, unit symbol energy.
    Awgn { sigma: f64 },
}

impl ChannelModel {
    pub fn bec(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidArgument(format!("erasure probability {epsilon} outside [0,1]")));
        }
        Ok(ChannelModel::Bec { epsilon })
    }

    pub fn awgn_sigma(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise deviation {sigma} must be positive")));
        }
        Ok(ChannelModel::Awgn { sigma })
    }

    /// AWGN at a given Es/N0 in dB: sigma^2 = 1 / (2 Es/N0).
    pub fn awgn_esn0_db(db: f64) -> Self {
        let esn0 = 10f64.powf(db / 10.0);
        ChannelModel::Awgn {
            sigma: (1.0 / (2.0 * esn0)).sqrt(),
        }
    }

    /// AWGN where the SNR is defined as 1 / sigma^2.
    pub fn awgn_inverse_variance_db(db: f64) -> Self {
        ChannelModel::Awgn {
            sigma: 10f64.powf(-db / 20.0),
        }
    }

    /// Es/N0 in dB of an AWGN channel.
    pub fn esn0_db(&self) -> Option<f64> {
        match self {
            ChannelModel::Awgn { sigma } => Some(10.0 * (1.0 / (2.0 * sigma * sigma)).log10()),
            ChannelModel::Bec { .. } => None,
        }
    }

    /// Mean channel LLR given a transmitted zero.
    pub fn mean_llr(&self) -> f64 {
        match *self {
            ChannelModel::Awgn { sigma } => 2.0 / (sigma * sigma),
            ChannelModel::Bec { epsilon } => {
                if epsilon >= 1.0 {
                    0.0
                } else {
                    LLR_SATURATION
                }
            }
        }
    }

    /// Channel LLR for one codeword bit.
    pub fn transmit<R: Rng + ?Sized>(&self, bit: u8, rng: &mut R) -> f64 {
        let s = 1.0 - 2.0 * (bit & 1) as f64;
        match *self {
            ChannelModel::Bec { epsilon } => {
                if rng.random::<f64>() < epsilon {
                    0.0
                } else {
                    s * LLR_SATURATION
                }
            }
            ChannelModel::Awgn { sigma } => {
                let n: f64 = rng.sample(StandardNormal);
                let y = s + sigma * n;
                2.0 * y / (sigma * sigma)
            }
        }
    }

    pub fn transmit_word<R: Rng + ?Sized>(&self, x: &[u8], rng: &mut R) -> Vec<f64> {
        x.iter().map(|&b| self.transmit(b, rng)).collect()
    }

    /// Parses `bec:EPS` or `awgn:DB` (Es/N0 in dB).
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, val) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("channel {s:?} should look like bec:0.5 or awgn:2.0")))?;
        let v: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad channel parameter {val:?}")))?;
        match kind.trim().to_ascii_lowercase().as_str() {
            "bec" => ChannelModel::bec(v),
            "awgn" => Ok(ChannelModel::awgn_esn0_db(v)),
            "awgn-sigma" => ChannelModel::awgn_sigma(v),
            other => Err(Error::Parse(format!("unknown channel kind {other:?}"))),
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::Bec { epsilon } => write!(f, "bec:{epsilon}"),
            ChannelModel::Awgn { .. } => write!(f, "awgn:{:.4}", self.esn0_db().unwrap_or(f64::NAN)),
        }
    }
}
