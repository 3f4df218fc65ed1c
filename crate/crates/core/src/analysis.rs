//! Coset spectra, minimum distances and polarization counting.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codeword::{brs_pattern, qup_pattern, CouplingSequence, RateMatchMode};
use crate::construction::{brs_code, partially_stitched, CodeFamily, StitchedMother};
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::reliability::{evolve_pairs, profile_on, Density, ReliabilityProfile};

/// Capacity band treated as un-polarized.
pub const DEFAULT_BAND: (f64, f64) = (0.01, 0.99);

/// Largest length accepted by the exhaustive enumerations.
pub const MAX_ENUM_LEN: usize = 20;

fn packed_rows(g: &BitMatrix) -> Result<Vec<u64>> {
    if g.cols() > 64 {
        return Err(Error::InvalidArgument(format!("enumeration supports at most 64 columns, got {}", g.cols())));
    }
    Ok((0..g.rows()).map(|r| g.row_words(r)[0]).collect())
}

/// Minimum weight of `base` plus any combination of `rows`, by Gray code.
fn min_coset_weight(base: u64, rows: &[u64]) -> u32 {
    let mut acc = base;
    let mut best = acc.count_ones();
    for step in 1u64..(1u64 << rows.len()) {
        acc ^= rows[step.trailing_zeros() as usize];
        best = best.min(acc.count_ones());
    }
    best
}

/// D_i: distance from row i to the span of the rows below it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSpectrum(pub Vec<usize>);

pub fn coset_spectrum(g: &BitMatrix) -> Result<CosetSpectrum> {
    if g.rows() > MAX_ENUM_LEN {
        return Err(Error::InvalidArgument(format!(
            "coset spectrum limited to {MAX_ENUM_LEN} rows, got {}",
            g.rows()
        )));
    }
    let rows = packed_rows(g)?;
    let d = (0..rows.len())
        .map(|i| min_coset_weight(rows[i], &rows[i + 1..]) as usize)
        .collect();
    Ok(CosetSpectrum(d))
}

/// Minimum weight over nonzero combinations of the `info` rows; `None` for
/// a zero-dimensional code.
pub fn min_distance(g: &BitMatrix, info: &[usize]) -> Result<Option<usize>> {
    if info.len() > MAX_ENUM_LEN {
        return Err(Error::InvalidArgument(format!(
            "minimum distance limited to {MAX_ENUM_LEN} information rows, got {}",
            info.len()
        )));
    }
    if info.is_empty() {
        return Ok(None);
    }
    let all = packed_rows(g)?;
    let rows: Vec<u64> = info.iter().map(|&i| all[i]).collect();
    let mut acc = 0u64;
    let mut best = u32::MAX;
    for step in 1u64..(1u64 << rows.len()) {
        acc ^= rows[step.trailing_zeros() as usize];
        best = best.min(acc.count_ones());
    }
    Ok(Some(best as usize))
}

/// Number of positions whose capacity lies in `band`, and that number
/// divided by `normalizer`.
pub fn count_unpolarized(profile: &ReliabilityProfile, band: (f64, f64), normalizer: usize) -> Result<(usize, f64)> {
    if profile.density != Density::Bec {
        return Err(Error::InvalidArgument("polarization counting needs an erasure profile".into()));
    }
    let (a, b) = band;
    if !(0.0 < a && a < b && b < 1.0) {
        return Err(Error::InvalidArgument(format!("band [{a}, {b}] must satisfy 0 < a < b < 1")));
    }
    let count = profile
        .metric
        .iter()
        .filter(|&&z| {
            let c = 1.0 - z;
            c >= a && c <= b
        })
        .count();
    Ok((count, count as f64 / normalizer.max(1) as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingEstimate {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    /// Intercept of log2 alpha at m = 0, an estimate of log2 c.
    pub intercept: f64,
    pub mu: f64,
    pub lambda: f64,
}

/// Least-squares line through (m, log2 alpha).
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingEstimate> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument("scaling fit needs at least three points".into()));
    }
    if points.iter().any(|&(_, a)| !(a > 0.0)) {
        return Err(Error::InvalidArgument("scaling fit needs alpha > 0".into()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("scaling fit needs distinct m values".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let mu = -1.0 / slope;
    Ok(ScalingEstimate {
        points: points.to_vec(),
        slope,
        intercept: my - slope * mx,
        mu,
        lambda: 1.0 - 1.0 / mu,
    })
}

/// Code construction whose polarization is being measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Regular,
    Qup,
    Brs,
    Stc,
    /// Partially stitched with every block chosen to minimize its own
    /// in-band count.
    StcMin,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "regular" => Ok(Scheme::Regular),
            "qup" => Ok(Scheme::Qup),
            "brs" => Ok(Scheme::Brs),
            "stc" => Ok(Scheme::Stc),
            "stc-min" => Ok(Scheme::StcMin),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Regular => "regular",
            Scheme::Qup => "qup",
            Scheme::Brs => "brs",
            Scheme::Stc => "stc",
            Scheme::StcMin => "stc-min",
        }
    }
}

/// Partially stitched sequence of length `n` whose sub-blocks each take the
/// candidate with the fewest positions in `band` on their actual input
/// profile. Candidates are every family sequence of the block length, the
/// regular sequence when that length is a power of two and the
/// bit-reversal shortened regular code; earlier candidates win ties.
pub fn min_unpolarized_stitched(
    n: usize,
    s: u32,
    family: &CodeFamily,
    channel: &ChannelModel,
    band: (f64, f64),
) -> Result<CouplingSequence> {
    let (lo, hi) = band;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::InvalidArgument(format!("band [{lo}, {hi}] must satisfy 0 < a < b < 1")));
    }
    let mother = StitchedMother::new(n, s, channel)?;
    if mother.density != Density::Bec {
        return Err(Error::InvalidArgument("polarization counting needs an erasure channel".into()));
    }
    let mut candidates: BTreeMap<usize, Vec<CouplingSequence>> = BTreeMap::new();
    for pos in mother.blocks.iter().filter(|b| !b.is_empty()) {
        let len = pos.len();
        if candidates.contains_key(&len) {
            continue;
        }
        let mut list = Vec::new();
        if len.is_power_of_two() {
            list.push(CouplingSequence::regular(len.trailing_zeros()));
        }
        list.push(brs_code(len, 0, channel)?.flatten()?.sequence().clone());
        if len <= family.max_len() {
            for k in 0..=len {
                list.push(family.code(len, k)?.sequence().clone());
            }
        }
        candidates.insert(len, list);
    }
    let in_band = |z: &f64| (lo..=hi).contains(&(1.0 - z));
    let profiles = mother.block_profiles();
    let picks: Vec<&CouplingSequence> = profiles
        .par_iter()
        .filter(|p| !p.is_empty())
        .map(|prof| {
            let mut best: Option<(usize, &CouplingSequence)> = None;
            for seq in &candidates[&prof.len()] {
                let mut z = prof.clone();
                evolve_pairs(Density::Bec, seq.pairs(), 0, &mut z);
                let count = z.iter().filter(|z| in_band(z)).count();
                if best.is_none_or(|(c, _)| count < c) {
                    best = Some((count, seq));
                }
            }
            best.expect("every block has a candidate").1
        })
        .collect();
    let parts: Vec<(&CouplingSequence, &[usize])> = picks.into_iter().map(|seq| (seq, &[][..])).collect();
    Ok(mother.assemble(n, &parts)?.0)
}

/// Erasure profile over BEC(epsilon) of a length-`n` code of the given
/// scheme, covering every mother input position. Partially stitched codes
/// use dimension n/2 and block exponent `s`; the minimizing variant counts
/// on the default band.
pub fn scheme_profile(
    scheme: Scheme,
    n: usize,
    epsilon: f64,
    family: Option<&CodeFamily>,
    s: u32,
) -> Result<ReliabilityProfile> {
    let ch = ChannelModel::bec(epsilon)?;
    let n0 = n.next_power_of_two();
    let m = n0.trailing_zeros();
    match scheme {
        Scheme::Regular => {
            if n != n0 {
                return Err(Error::InvalidArgument(format!("regular codes need a power-of-two length, got {n}")));
            }
            let mut z = vec![epsilon; n];
            evolve_pairs(Density::Bec, CouplingSequence::regular(m).pairs(), 0, &mut z);
            Ok(ReliabilityProfile::from_metric(Density::Bec, z))
        }
        Scheme::Qup => {
            let pat = qup_pattern(n0, n0 - n)?;
            Ok(profile_on(&CouplingSequence::regular(m), &ch, RateMatchMode::Puncture, &pat))
        }
        Scheme::Brs => {
            let pat = brs_pattern(n0, n0 - n)?;
            Ok(profile_on(&CouplingSequence::regular(m), &ch, RateMatchMode::Shorten, &pat))
        }
        Scheme::Stc => {
            let fam = family.ok_or_else(|| Error::InvalidArgument("partially stitched codes need a family".into()))?;
            let (code, _) = partially_stitched(n, n / 2, s, fam, &ch)?;
            Ok(profile_on(code.sequence(), &ch, RateMatchMode::None, &[]))
        }
        Scheme::StcMin => {
            let fam = family.ok_or_else(|| Error::InvalidArgument("partially stitched codes need a family".into()))?;
            let seq = min_unpolarized_stitched(n, s, fam, &ch, DEFAULT_BAND)?;
            Ok(profile_on(&seq, &ch, RateMatchMode::None, &[]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Second oracle: enumerate every message on the suffix and take the
    /// smallest weight of a codeword whose leading one is at row i.
    fn suffix_oracle(g: &BitMatrix) -> Vec<usize> {
        let n = g.rows();
        let mut d = vec![usize::MAX; n];
        for msg in 1u32..(1 << n) {
            let lead = (0..n).find(|&i| (msg >> i) & 1 == 1).unwrap();
            let u: Vec<u8> = (0..n).map(|i| ((msg >> i) & 1) as u8).collect();
            let w = g.mul_vec(&u).iter().filter(|&&b| b == 1).count();
            d[lead] = d[lead].min(w);
        }
        d
    }

    #[test]
    fn kernel_power_spectrum() {
        let g = BitMatrix::kernel_power(2);
        assert_eq!(coset_spectrum(&g).unwrap().0, vec![1, 2, 2, 4]);
        assert_eq!(coset_spectrum(&BitMatrix::identity(6)).unwrap().0, vec![1; 6]);
    }

    #[test]
    fn spectrum_matches_suffix_oracle() {
        for m in 1..=3 {
            let g = BitMatrix::kernel_power(m);
            assert_eq!(coset_spectrum(&g).unwrap().0, suffix_oracle(&g));
        }
        let seq = CouplingSequence::from_one_based(6, &[(2, 3), (4, 5), (1, 2), (3, 5), (4, 6), (1, 4), (2, 6)]).unwrap();
        let g = seq.generator_matrix();
        assert_eq!(coset_spectrum(&g).unwrap().0, suffix_oracle(&g));
    }

    #[test]
    fn distances() {
        let g = BitMatrix::kernel_power(3);
        assert_eq!(min_distance(&g, &[3, 5, 6, 7]).unwrap(), Some(4));
        assert_eq!(min_distance(&g, &[]).unwrap(), None);
        assert!(coset_spectrum(&BitMatrix::identity(21)).is_err());
    }

    #[test]
    fn counting_regular_four() {
        let p = scheme_profile(Scheme::Regular, 4, 0.5, None, 0).unwrap();
        assert_eq!(count_unpolarized(&p, (0.01, 0.99), 4).unwrap(), (4, 1.0));
        let p = scheme_profile(Scheme::Regular, 4, 1e-9, None, 0).unwrap();
        assert_eq!(count_unpolarized(&p, (0.01, 0.99), 4).unwrap().0, 0);
        assert!(count_unpolarized(&p, (0.5, 0.2), 4).is_err());
    }

    #[test]
    fn exact_line_fit() {
        let pts: Vec<(f64, f64)> = (4..10).map(|m| (m as f64, 2f64.powf(-(m as f64) / 4.0))).collect();
        let f = scaling_fit(&pts).unwrap();
        assert!((f.mu - 4.0).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert!(scaling_fit(&[(1.0, 0.5), (1.0, 0.4), (1.0, 0.3)]).is_err());
    }
}
