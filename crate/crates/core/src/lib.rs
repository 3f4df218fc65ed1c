//! Stitched polar codes.
//!
//! A stitched polar code is described by a coupling sequence of 2x2 kernel
//! applications on arbitrary index pairs, which gives codes of any length
//! without puncturing or shortening. The crate covers encoding, decodability
//! checks, reliability estimation, code construction by stitching, SC and
//! SCL decoding, code analysis and a Monte-Carlo harness.

pub mod analysis;
pub mod channel;
pub mod codeword;
pub mod construction;
pub mod crc;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod io;
pub mod reliability;

pub use channel::{ChannelModel, LLR_SATURATION};
pub use codeword::{
    brs_pattern, qup_pattern, CodeSpec, CouplingPair, CouplingSequence, Decodability, RateMatchMode,
    RateMatchedCode,
};
pub use crc::CrcConfig;
pub use decoder::{CheckRule, Decoded, Decoder, DecoderConfig, Schedule};
pub use error::{Error, Result};
pub use gf2::BitMatrix;
pub use reliability::{Density, ReliabilityProfile};
