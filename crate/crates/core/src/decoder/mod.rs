//! SC and SCL decoding of stitched and rate-matched codes.

mod sc;
mod schedule;
mod scl;

pub use sc::{f_exact, f_minsum, g, hard, run_sc, sc_decode, sc_genie, sc_trace, CheckRule, PathState, ScOutput};
pub use schedule::{Op, Schedule};
pub use scl::{scl_decode, ListCandidate};

use serde::{Deserialize, Serialize};

use crate::channel::LLR_SATURATION;
use crate::codeword::{CodeSpec, RateMatchedCode};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub list_size: usize,
    pub rule: CheckRule,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            list_size: 1,
            rule: CheckRule::Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    /// Estimated message bits, CRC removed.
    pub message: Vec<u8>,
    /// Estimated input vector of the mother code.
    pub u_hat: Vec<u8>,
    /// Estimated mother codeword.
    pub x_hat: Vec<u8>,
    pub metric: f64,
    /// Whether the chosen path passed the CRC, if the code has one.
    pub crc_ok: Option<bool>,
}

/// A compiled decoder bound to one code.
#[derive(Clone, Debug)]
pub struct Decoder {
    code: RateMatchedCode,
    schedule: Schedule,
    config: DecoderConfig,
}

impl Decoder {
    pub fn new(code: &RateMatchedCode, config: DecoderConfig) -> Result<Self> {
        let schedule = Schedule::compile(code.mother().sequence())?;
        Ok(Decoder {
            code: code.clone(),
            schedule,
            config,
        })
    }

    pub fn for_code(code: &CodeSpec, config: DecoderConfig) -> Result<Self> {
        Self::new(&RateMatchedCode::plain(code.clone()), config)
    }

    pub fn code(&self) -> &RateMatchedCode {
        &self.code
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn message_of(&self, u: &[u8]) -> Vec<u8> {
        let mother = self.code.mother();
        let mut bits = mother.extract_info(u);
        bits.truncate(mother.k());
        bits
    }

    /// All surviving list paths, best metric first.
    pub fn decode_list(&self, llr: &[f64]) -> Result<Vec<ListCandidate>> {
        let full = self.code.expand_llr(llr, LLR_SATURATION)?;
        Ok(scl_decode(
            &self.schedule,
            self.config.rule,
            self.code.mother().frozen_mask(),
            &full,
            self.config.list_size,
        ))
    }

    /// Decodes one received word given as transmitted-length LLRs.
    pub fn decode(&self, llr: &[f64]) -> Result<Decoded> {
        let mother = self.code.mother();
        if self.config.list_size <= 1 {
            let full = self.code.expand_llr(llr, LLR_SATURATION)?;
            let out = sc_decode(&self.schedule, self.config.rule, mother.frozen_mask(), &full);
            let crc_ok = mother.crc().map(|c| c.verify(&mother.extract_info(&out.u_hat)));
            return Ok(Decoded {
                message: self.message_of(&out.u_hat),
                u_hat: out.u_hat,
                x_hat: out.x_hat,
                metric: 0.0,
                crc_ok,
            });
        }
        let list = self.decode_list(llr)?;
        let pick = match mother.crc() {
            Some(c) => list
                .iter()
                .position(|cand| c.verify(&mother.extract_info(&cand.u_hat)))
                .map(|i| (i, Some(true)))
                .unwrap_or((0, Some(false))),
            None => (0, None),
        };
        let best = list.into_iter().nth(pick.0).expect("list is never empty");
        Ok(Decoded {
            message: self.message_of(&best.u_hat),
            u_hat: best.u_hat,
            x_hat: best.x_hat,
            metric: best.metric,
            crc_ok: pick.1,
        })
    }
}
