//! Per-position reliability of stitched codes: density evolution on the BEC
//! and the Gaussian approximation on the AWGN channel.
//!
//! Both trackers walk the coupling sequence from the channel side back to the
//! message side. For the BEC the metric is the erasure probability z and a
//! pair maps (z_a, z_b) to (z_a + z_b - z_a z_b, z_a z_b). For the AWGN channel
//! the metric is the mean LLR of a consistent Gaussian and a pair maps
//! (m_a, m_b) to (phi^-1(1 - (1 - phi(m_a))(1 - phi(m_b))), m_a + m_b).

use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codeword::{CouplingPair, CouplingSequence, RateMatchMode};
use crate::error::{Error, Result};

/// Mean LLR assigned to shortened positions in the Gaussian tracker.
pub const SHORTENED_MEAN: f64 = 1000.0;

/// Largest mean LLR the Gaussian tracker will report.
pub const MEAN_CAP: f64 = 1.0e7;

const PHI_A: f64 = 0.4527;
const PHI_B: f64 = 0.86;
const PHI_C: f64 = 0.0218;
/// Where phi switches from the power-law fit to the asymptotic form.
pub const PHI_SWITCH: f64 = 10.0;

/// ln phi(x) for the two-piece approximation of
/// phi(x) = 1 - E[tanh(L/2)], L ~ N(x, 2x).
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_SWITCH {
        (-PHI_A * x.powf(PHI_B) + PHI_C).min(0.0)
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (-10.0 / (7.0 * x)).ln_1p()
    }
}

pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp()
}

/// Inverse of [`ln_phi`]: the mean whose phi value is exp(l).
pub fn inv_ln_phi(l: f64) -> f64 {
    if l >= 0.0 {
        return 0.0;
    }
    if l == f64::NEG_INFINITY {
        return MEAN_CAP;
    }
    let switch = -PHI_A * PHI_SWITCH.powf(PHI_B) + PHI_C;
    if l >= switch {
        return ((PHI_C - l) / PHI_A).powf(1.0 / PHI_B);
    }
    // the asymptotic piece is decreasing on [10, inf) and below -x/4 there
    let (mut lo, mut hi) = (PHI_SWITCH, (-4.0 * l).max(PHI_SWITCH) + 1.0);
    if hi > MEAN_CAP {
        return MEAN_CAP;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > l {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn log_add_exp(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Check-node update of the Gaussian approximation.
pub fn ga_check(ma: f64, mb: f64) -> f64 {
    let la = ln_phi(ma);
    let lb = ln_phi(mb);
    // 1 - (1-pa)(1-pb) = pa + pb (1 - pa), kept in the log domain
    let l = log_add_exp(la, lb + (-la.exp()).ln_1p());
    inv_ln_phi(l.min(0.0))
}

/// Gaussian Q function.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Which metric a profile carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Density {
    /// Erasure probability on the BEC.
    Bec,
    /// Mean LLR of a consistent Gaussian.
    Gaussian,
}

impl Density {
    pub fn for_channel(ch: &ChannelModel) -> Self {
        match ch {
            ChannelModel::Bec { .. } => Density::Bec,
            ChannelModel::Awgn { .. } => Density::Gaussian,
        }
    }

    /// Metric of a transmitted position.
    pub fn channel_value(&self, ch: &ChannelModel) -> f64 {
        match (self, ch) {
            (Density::Bec, ChannelModel::Bec { epsilon }) => *epsilon,
            (Density::Gaussian, c @ ChannelModel::Awgn { .. }) => c.mean_llr(),
            (Density::Bec, ChannelModel::Awgn { .. }) => {
                // Bhattacharyya parameter of the AWGN channel
                (-ch.mean_llr() / 4.0).exp()
            }
            (Density::Gaussian, ChannelModel::Bec { .. }) => ch.mean_llr(),
        }
    }

    pub fn punctured(&self) -> f64 {
        match self {
            Density::Bec => 1.0,
            Density::Gaussian => 0.0,
        }
    }

    pub fn shortened(&self) -> f64 {
        match self {
            Density::Bec => 0.0,
            Density::Gaussian => SHORTENED_MEAN,
        }
    }

    #[inline]
    pub fn combine(&self, a: f64, b: f64) -> (f64, f64) {
        match self {
            Density::Bec => (a + b - a * b, a * b),
            Density::Gaussian => (ga_check(a, b), (a + b).min(MEAN_CAP)),
        }
    }

    /// Decision error probability implied by a metric value.
    pub fn pe(&self, v: f64) -> f64 {
        match self {
            Density::Bec => v,
            Density::Gaussian => q_function((v / 2.0).sqrt()),
        }
    }

    /// Capacity-like quantity in [0, 1], used for polarization counting.
    pub fn capacity(&self, v: f64) -> f64 {
        match self {
            Density::Bec => 1.0 - v,
            Density::Gaussian => 1.0 - 2.0 * q_function((v / 2.0).sqrt()),
        }
    }
}

/// Runs the tracker over `pairs`, all shifted by `offset`, in place.
pub fn evolve_pairs(density: Density, pairs: &[CouplingPair], offset: usize, metric: &mut [f64]) {
    for p in pairs.iter().rev() {
        let (a, b) = (p.a + offset, p.b + offset);
        let (na, nb) = density.combine(metric[a], metric[b]);
        metric[a] = na;
        metric[b] = nb;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityProfile {
    pub density: Density,
    pub metric: Vec<f64>,
    pub pe: Vec<f64>,
}

impl ReliabilityProfile {
    pub fn from_metric(density: Density, metric: Vec<f64>) -> Self {
        let pe = metric.iter().map(|&v| density.pe(v)).collect();
        ReliabilityProfile { density, metric, pe }
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }
}

/// Tracker output for `seq` with the given channel-side metric per position.
pub fn evolve(density: Density, seq: &CouplingSequence, channel_metric: &[f64]) -> Result<ReliabilityProfile> {
    if channel_metric.len() != seq.n() {
        return Err(Error::LengthMismatch { expected: seq.n(), got: channel_metric.len() });
    }
    let mut m = channel_metric.to_vec();
    evolve_pairs(density, seq.pairs(), 0, &mut m);
    Ok(ReliabilityProfile::from_metric(density, m))
}

/// Density evolution on the BEC with per-position erasure probabilities.
pub fn de_bec(seq: &CouplingSequence, erasure: &[f64]) -> Result<ReliabilityProfile> {
    evolve(Density::Bec, seq, erasure)
}

/// Gaussian approximation with per-position channel mean LLRs.
pub fn ga_awgn(seq: &CouplingSequence, means: &[f64]) -> Result<ReliabilityProfile> {
    evolve(Density::Gaussian, seq, means)
}

/// Channel-side metric vector for a channel and rate-matching pattern.
pub fn channel_metric(
    density: Density,
    channel: &ChannelModel,
    n: usize,
    mode: RateMatchMode,
    pattern: &[usize],
) -> Vec<f64> {
    let mut m = vec![density.channel_value(channel); n];
    let fill = match mode {
        RateMatchMode::None => return m,
        RateMatchMode::Puncture => density.punctured(),
        RateMatchMode::Shorten => density.shortened(),
    };
    for &p in pattern {
        m[p] = fill;
    }
    m
}

/// Profile of `seq` on `channel`, BEC tracker for BEC and Gaussian otherwise.
pub fn profile_on(
    seq: &CouplingSequence,
    channel: &ChannelModel,
    mode: RateMatchMode,
    pattern: &[usize],
) -> ReliabilityProfile {
    let d = Density::for_channel(channel);
    let mut m = channel_metric(d, channel, seq.n(), mode, pattern);
    evolve_pairs(d, seq.pairs(), 0, &mut m);
    ReliabilityProfile::from_metric(d, m)
}

/// The `k` positions with the smallest error probability, lowest index first
/// on ties, returned in ascending order. Positions in `exclude` are skipped.
pub fn select_info_set(profile: &ReliabilityProfile, k: usize, exclude: &[usize]) -> Result<Vec<usize>> {
    let n = profile.len();
    let mut banned = vec![false; n];
    for &e in exclude {
        if e < n {
            banned[e] = true;
        }
    }
    let mut idx: Vec<usize> = (0..n).filter(|&i| !banned[i]).collect();
    if k > idx.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot pick {k} information positions out of {}",
            idx.len()
        )));
    }
    idx.sort_by(|&x, &y| profile.pe[x].total_cmp(&profile.pe[y]).then(x.cmp(&y)));
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// ln of the product of (1 - Pe) over `info`.
pub fn log_success(profile: &ReliabilityProfile, info: &[usize]) -> f64 {
    info.iter().map(|&i| (-profile.pe[i]).ln_1p()).sum()
}

/// Product of (1 - Pe) over `info`.
pub fn success_probability(profile: &ReliabilityProfile, info: &[usize]) -> f64 {
    log_success(profile, info).exp()
}

/// Union-free block error estimate 1 - prod(1 - Pe).
pub fn block_error_estimate(profile: &ReliabilityProfile, info: &[usize]) -> f64 {
    -log_success(profile, info).exp_m1()
}
