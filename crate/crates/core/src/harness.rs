//! Monte-Carlo BLER simulation, SNR bisection and length sweeps.
//!
//! Trial `i` draws all of its randomness from a ChaCha stream keyed by the
//! master seed with stream number `i`, so results depend only on the seed
//! and the trial count. Trials run in fixed-size rounds and the stopping
//! rule is only checked between rounds, which keeps error counts identical
//! for any number of worker threads.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{min_unpolarized_stitched, Scheme, DEFAULT_BAND};
use crate::channel::ChannelModel;
use crate::codeword::{CodeSpec, RateMatchMode, RateMatchedCode};
use crate::construction::{brs_code, partially_stitched, qup_code, CodeFamily};
use crate::decoder::{Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::reliability::{profile_on, select_info_set};

/// Trials per round between stopping checks.
pub const DEFAULT_ROUND: u64 = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_trials: u64,
    /// Stop once this many block errors have been seen.
    pub max_errors: Option<u64>,
    /// Stop once the 95% interval of the BLER excludes this value.
    #[serde(default)]
    pub exclude: Option<f64>,
}

impl StopRule {
    pub fn trials(n: u64) -> Self {
        StopRule {
            max_trials: n,
            max_errors: None,
            exclude: None,
        }
    }

    /// True once the counts so far end the run.
    pub fn done(&self, trials: u64, errors: u64) -> bool {
        if trials >= self.max_trials || self.max_errors.is_some_and(|e| errors >= e) {
            return true;
        }
        self.exclude.is_some_and(|p| {
            let (lo, hi) = wilson_interval(errors, trials);
            trials > 0 && (p < lo || p > hi)
        })
    }
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_trials: 10_000_000,
            max_errors: Some(100),
            exclude: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub channel: ChannelModel,
    pub decoder: DecoderConfig,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    pub round: u64,
}

impl SimConfig {
    pub fn new(channel: ChannelModel, decoder: DecoderConfig, stop: StopRule, seed: u64) -> Self {
        SimConfig {
            channel,
            decoder,
            stop,
            seed,
            threads: 0,
            round: DEFAULT_ROUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub n: usize,
    pub k: usize,
    pub channel: ChannelModel,
    pub esn0_db: Option<f64>,
    pub decoder: DecoderConfig,
    pub seed: u64,
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub bler: f64,
    pub ber: f64,
    pub ci95: (f64, f64),
    pub elapsed_s: f64,
}

/// Wilson score interval for `errors` out of `trials` at 95 % confidence.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let denom = 1.0 + z * z / n;
    if errors == 0 {
        return (0.0, (z * z / n) / denom);
    }
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Random generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Channel output for `codeword` as LLRs.
pub fn channel_transmit<R: Rng + ?Sized>(codeword: &[u8], channel: &ChannelModel, rng: &mut R) -> Vec<f64> {
    channel.transmit_word(codeword, rng)
}

fn run_trial(decoder: &Decoder, channel: &ChannelModel, seed: u64, trial: u64) -> Result<(bool, u64)> {
    let code = decoder.code();
    let mut rng = trial_rng(seed, trial);
    let msg: Vec<u8> = (0..code.k()).map(|_| rng.random::<bool>() as u8).collect();
    let x = code.encode(&msg)?;
    let llr = channel.transmit_word(&x, &mut rng);
    let out = decoder.decode(&llr)?;
    let bit_errors = msg.iter().zip(&out.message).filter(|(a, b)| a != b).count() as u64;
    Ok((bit_errors > 0, bit_errors))
}

/// Estimates the block error rate of `code` under `cfg`.
pub fn simulate_bler(code: &RateMatchedCode, cfg: &SimConfig) -> Result<SimResult> {
    let decoder = Decoder::new(code, cfg.decoder)?;
    simulate_with(&decoder, cfg)
}

/// Like [`simulate_bler`] with a decoder compiled once by the caller.
pub fn simulate_with(decoder: &Decoder, cfg: &SimConfig) -> Result<SimResult> {
    let start = Instant::now();
    let round = cfg.round.max(1);
    let run = || -> Result<(u64, u64, u64)> {
        let (mut trials, mut errors, mut bits) = (0u64, 0u64, 0u64);
        while !cfg.stop.done(trials, errors) {
            let end = (trials + round).min(cfg.stop.max_trials);
            let (e, b) = (trials..end)
                .into_par_iter()
                .map(|t| run_trial(decoder, &cfg.channel, cfg.seed, t).map(|(blk, b)| (blk as u64, b)))
                .try_reduce(|| (0, 0), |x, y| Ok((x.0 + y.0, x.1 + y.1)))?;
            errors += e;
            bits += b;
            trials = end;
        }
        Ok((trials, errors, bits))
    };
    let (trials, block_errors, bit_errors) = if cfg.threads == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?
    };
    let code = decoder.code();
    let k = code.k();
    Ok(SimResult {
        n: code.n(),
        k,
        channel: cfg.channel,
        esn0_db: cfg.channel.esn0_db(),
        decoder: cfg.decoder,
        seed: cfg.seed,
        trials,
        block_errors,
        bit_errors,
        bler: if trials == 0 { 0.0 } else { block_errors as f64 / trials as f64 },
        ber: if trials == 0 || k == 0 {
            0.0
        } else {
            bit_errors as f64 / (trials as f64 * k as f64)
        },
        ci95: wilson_interval(block_errors, trials),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Midpoint of the final bracket.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Every (parameter, measured value) pair, in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

impl SearchResult {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection for the parameter at which a monotone `f` crosses `target`.
pub fn bisect_target<F>(mut f: F, target: f64, lo: f64, hi: f64, tol: f64) -> Result<SearchResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo)?;
    let fhi = f(hi)?;
    let mut evaluations = vec![(lo, flo), (hi, fhi)];
    let side_lo = flo > target;
    if side_lo == (fhi > target) {
        return Err(Error::NotBracketed {
            lo,
            hi,
            lo_val: flo,
            hi_val: fhi,
            target,
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        evaluations.push((mid, fm));
        if (fm > target) == side_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SearchResult {
        value: 0.5 * (lo + hi),
        lo,
        hi,
        evaluations,
    })
}

/// Es/N0 (dB) at which the simulated BLER reaches `target`. Every point
/// reuses the same seed, so the noise realisations are shared, and a point
/// also stops as soon as its 95% interval lies on one side of the target.
pub fn snr_search(
    code: &RateMatchedCode,
    decoder: DecoderConfig,
    target: f64,
    bracket: (f64, f64),
    stop: StopRule,
    seed: u64,
    tol_db: f64,
) -> Result<SearchResult> {
    let dec = Decoder::new(code, decoder)?;
    let stop = StopRule {
        exclude: Some(target),
        ..stop
    };
    bisect_target(
        |db| {
            let cfg = SimConfig::new(ChannelModel::awgn_esn0_db(db), decoder, stop, seed);
            Ok(simulate_with(&dec, &cfg)?.bler)
        },
        target,
        bracket.0,
        bracket.1,
        tol_db,
    )
}

/// Builds a length-`n` code of the given scheme. Baselines and block rate
/// allocation are designed on `design`.
pub fn build_scheme(
    scheme: Scheme,
    n: usize,
    k: usize,
    design: &ChannelModel,
    family: Option<&CodeFamily>,
    s: u32,
) -> Result<RateMatchedCode> {
    match scheme {
        Scheme::Qup => qup_code(n, k, design),
        Scheme::Brs => brs_code(n, k, design),
        Scheme::Regular => {
            if !n.is_power_of_two() {
                return Err(Error::InvalidArgument(format!("regular codes need a power-of-two length, got {n}")));
            }
            brs_code(n, k, design)
        }
        Scheme::Stc => {
            let fam = family.ok_or_else(|| Error::InvalidArgument("stitched codes need a family".into()))?;
            let (code, _) = partially_stitched(n, k, s, fam, design)?;
            Ok(RateMatchedCode::plain(code))
        }
        Scheme::StcMin => {
            let fam = family.ok_or_else(|| Error::InvalidArgument("stitched codes need a family".into()))?;
            let seq = min_unpolarized_stitched(n, s, fam, &fam.channel(), DEFAULT_BAND)?;
            let profile = profile_on(&seq, design, RateMatchMode::None, &[]);
            let info = select_info_set(&profile, k, &[])?;
            Ok(RateMatchedCode::plain(CodeSpec::new(seq, info, None)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub n: usize,
    pub k: usize,
    pub esn0_db: f64,
    pub ebn0_db: f64,
    pub bracket_width_db: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rate: f64,
    pub target: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,n,k,rate,target_bler,esn0_db,ebn0_db,bracket_width_db\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.6},{},{:.4},{:.4},{:.4}\n",
                r.scheme.as_str(),
                r.n,
                r.k,
                r.k as f64 / r.n as f64,
                self.target,
                r.esn0_db,
                r.ebn0_db,
                r.bracket_width_db
            ));
        }
        out
    }
}

/// Settings shared by every point of a sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub decoder: DecoderConfig,
    pub target: f64,
    pub bracket: (f64, f64),
    pub stop: StopRule,
    pub seed: u64,
    pub tol_db: f64,
    pub design: ChannelModel,
    pub s: u32,
}

/// Required Es/N0 of each scheme at each length, with K = round(rate * N).
pub fn sweep_lengths(
    rate: f64,
    lengths: &[usize],
    schemes: &[Scheme],
    family: Option<&CodeFamily>,
    cfg: &SweepConfig,
) -> Result<SweepResult> {
    let mut rows = Vec::new();
    for &n in lengths {
        let k = (rate * n as f64).round() as usize;
        for &scheme in schemes {
            let code = build_scheme(scheme, n, k, &cfg.design, family, cfg.s)?;
            let r = snr_search(&code, cfg.decoder, cfg.target, cfg.bracket, cfg.stop, cfg.seed, cfg.tol_db)?;
            let coderate = k as f64 / n as f64;
            rows.push(SweepRow {
                scheme,
                n,
                k,
                esn0_db: r.value,
                ebn0_db: r.value - 10.0 * coderate.log10(),
                bracket_width_db: r.width(),
            });
        }
    }
    Ok(SweepResult {
        rate,
        target: cfg.target,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codeword::{CodeSpec, CouplingSequence};

    fn single_bit() -> RateMatchedCode {
        RateMatchedCode::plain(CodeSpec::new(CouplingSequence::empty(1), vec![0], None).unwrap())
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((0.5 - lo - (hi - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn single_bit_over_erasures() {
        let cfg = SimConfig::new(
            ChannelModel::Bec { epsilon: 0.4 },
            DecoderConfig::default(),
            StopRule::trials(40_000),
            7,
        );
        let r = simulate_bler(&single_bit(), &cfg).unwrap();
        assert_eq!(r.trials, 40_000);
        // erased bits decode to 0, so half of them are wrong
        let sd = (0.2f64 * 0.8 / 40_000.0).sqrt();
        assert!((r.bler - 0.2).abs() < 4.0 * sd, "bler {}", r.bler);
    }

    #[test]
    fn error_stop_is_checked_between_rounds() {
        let mut cfg = SimConfig::new(
            ChannelModel::Bec { epsilon: 1.0 },
            DecoderConfig::default(),
            StopRule {
                max_trials: 1_000_000,
                max_errors: Some(10),
                exclude: None,
            },
            1,
        );
        cfg.round = 100;
        let r = simulate_bler(&single_bit(), &cfg).unwrap();
        assert_eq!(r.trials, 100);
    }

    #[test]
    fn bisection_on_analytic_curve() {
        // BLER falls like Q(x); crossing of 0.01 is at Q^-1(0.01) = 2.326348
        let f = |x: f64| Ok(crate::reliability::q_function(x));
        let r = bisect_target(f, 0.01, 0.0, 5.0, 0.02).unwrap();
        assert!(r.width() <= 0.02);
        assert!((r.value - 2.326_347_874).abs() <= 0.02);
        assert!(bisect_target(f, 0.01, 3.0, 5.0, 0.02).is_err());
    }
}
