//! Building stitched codes: left and right stitching, recursive code
//! families and partially stitched codes for long lengths.
//!
//! Stitching places two component codes side by side. A left stitch couples
//! them at the message side, interleaving the upper code into the lower one;
//! a right stitch couples them at the channel side, with the upper code on
//! positions 0..N' and the lower one on N'..N'+N''.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::codeword::{brs_pattern, qup_pattern, CodeSpec, CouplingPair, CouplingSequence, RateMatchMode, RateMatchedCode};
use crate::error::{Error, Result};
use crate::reliability::{evolve_pairs, profile_on, select_info_set, Density};

fn check_positions(positions: &[usize], count: usize, range: usize) -> Result<()> {
    if positions.len() != count {
        return Err(Error::InvalidArgument(format!(
            "need {count} stitch positions, got {}",
            positions.len()
        )));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("stitch positions must be strictly increasing".into()));
    }
    if positions.last().is_some_and(|&p| p >= range) {
        return Err(Error::InvalidArgument(format!("stitch position outside [{range}]")));
    }
    Ok(())
}

/// Position maps of a left stitch: where the upper and lower code indices go.
fn left_maps(n1: usize, n2: usize, gamma: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let upper_map: Vec<usize> = gamma.iter().enumerate().map(|(t, &g)| g + t).collect();
    let mut taken = vec![false; n1 + n2];
    for &p in &upper_map {
        taken[p] = true;
    }
    let lower_map = (0..n1 + n2).filter(|&p| !taken[p]).collect();
    (upper_map, lower_map)
}

/// h_L(upper, lower, gamma) with N' <= N'', gamma a subset of the lower
/// code's positions of size N'.
pub fn stitch_left(upper: &CouplingSequence, lower: &CouplingSequence, gamma: &[usize]) -> Result<CouplingSequence> {
    let (n1, n2) = (upper.n(), lower.n());
    if n1 > n2 {
        return Err(Error::InvalidArgument(format!(
            "left stitch needs N' <= N'', got {n1} > {n2}"
        )));
    }
    check_positions(gamma, n1, n2)?;
    let (um, lm) = left_maps(n1, n2, gamma);
    let mut pairs: Vec<CouplingPair> = um.iter().map(|&p| CouplingPair::new(p, p + 1)).collect();
    pairs.extend(upper.relabel(n1 + n2, &um)?.pairs());
    pairs.extend(lower.relabel(n1 + n2, &lm)?.pairs());
    CouplingSequence::new(n1 + n2, pairs)
}

/// h_R(upper, lower, positions). With N' <= N'' the positions index the
/// lower code and pair i of the upper code with lower position gamma'_i;
/// otherwise they index the upper code and pair gamma''_i with lower i.
pub fn stitch_right(upper: &CouplingSequence, lower: &CouplingSequence, positions: &[usize]) -> Result<CouplingSequence> {
    let (n1, n2) = (upper.n(), lower.n());
    let mut pairs = upper.pairs().to_vec();
    pairs.extend(lower.pairs().iter().map(|p| CouplingPair::new(p.a + n1, p.b + n1)));
    if n1 <= n2 {
        check_positions(positions, n1, n2)?;
        pairs.extend(positions.iter().enumerate().map(|(i, &g)| CouplingPair::new(i, g + n1)));
    } else {
        check_positions(positions, n2, n1)?;
        pairs.extend(positions.iter().enumerate().map(|(i, &g)| CouplingPair::new(g, i + n1)));
    }
    CouplingSequence::new(n1 + n2, pairs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StitchSide {
    Left,
    Right,
}

/// A stitch of two codes, kept together with the composed information set.
#[derive(Clone, Debug, PartialEq)]
pub struct StitchSpec {
    pub side: StitchSide,
    pub upper: CodeSpec,
    pub lower: CodeSpec,
    pub positions: Vec<usize>,
}

impl StitchSpec {
    pub fn sequence(&self) -> Result<CouplingSequence> {
        match self.side {
            StitchSide::Left => stitch_left(self.upper.sequence(), self.lower.sequence(), &self.positions),
            StitchSide::Right => stitch_right(self.upper.sequence(), self.lower.sequence(), &self.positions),
        }
    }

    /// The stitched code carrying both components' information sets.
    pub fn code(&self) -> Result<CodeSpec> {
        let seq = self.sequence()?;
        let (n1, n2) = (self.upper.n(), self.lower.n());
        let info: Vec<usize> = match self.side {
            StitchSide::Left => {
                let (um, lm) = left_maps(n1, n2, &self.positions);
                self.upper
                    .info()
                    .iter()
                    .map(|&i| um[i])
                    .chain(self.lower.info().iter().map(|&i| lm[i]))
                    .collect()
            }
            StitchSide::Right => self
                .upper
                .info()
                .iter()
                .copied()
                .chain(self.lower.info().iter().map(|&i| i + n1))
                .collect(),
        };
        CodeSpec::new(seq, info, None)
    }
}

/// Number of 2x2 kernels in a sequence.
pub fn transform_count(seq: &CouplingSequence) -> usize {
    seq.len()
}

/// (N/2) log2 N, the kernel budget of a length-N regular code.
pub fn transform_bound(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        n as f64 / 2.0 * (n as f64).log2()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyEntry {
    pub code: CodeSpec,
    /// Estimated block error 1 - prod(1 - Pe) on the design channel.
    pub error: f64,
}

/// Codes C_{N,K} for every 1 <= N <= max_len and 0 <= K <= N.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeFamily {
    max_len: usize,
    channel: ChannelModel,
    // entries[N - 1][K]
    entries: Vec<Vec<FamilyEntry>>,
}

impl CodeFamily {
    pub fn from_entries(max_len: usize, channel: ChannelModel, entries: Vec<Vec<FamilyEntry>>) -> Result<Self> {
        if entries.len() != max_len {
            return Err(Error::InvalidCode(format!("family needs lengths 1..={max_len}")));
        }
        for (i, row) in entries.iter().enumerate() {
            let n = i + 1;
            if row.len() != n + 1 {
                return Err(Error::InvalidCode(format!("family length {n} needs dimensions 0..={n}")));
            }
            for (k, e) in row.iter().enumerate() {
                if e.code.n() != n || e.code.k() != k {
                    return Err(Error::InvalidCode(format!(
                        "family entry ({n},{k}) holds a ({},{}) code",
                        e.code.n(),
                        e.code.k()
                    )));
                }
            }
        }
        Ok(CodeFamily {
            max_len,
            channel,
            entries,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn channel(&self) -> ChannelModel {
        self.channel
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&FamilyEntry> {
        self.entries.get(n.checked_sub(1)?)?.get(k)
    }

    pub fn code(&self, n: usize, k: usize) -> Result<&CodeSpec> {
        self.get(n, k)
            .map(|e| &e.code)
            .ok_or(Error::MissingFamilyEntry { n, k })
    }

    pub fn iter(&self) -> impl Iterator<Item = &FamilyEntry> {
        self.entries.iter().flatten()
    }
}

/// ln success probability of a right-stitch candidate without building it.
fn candidate_log_success(
    density: Density,
    value: f64,
    upper: &CodeSpec,
    lower: &CodeSpec,
    buf: &mut Vec<f64>,
) -> f64 {
    let (n1, n2) = (upper.n(), lower.n());
    buf.clear();
    buf.resize(n1 + n2, value);
    for i in 0..n1.min(n2) {
        let (a, b) = density.combine(buf[i], buf[n1 + i]);
        buf[i] = a;
        buf[n1 + i] = b;
    }
    evolve_pairs(density, lower.sequence().pairs(), n1, buf);
    evolve_pairs(density, upper.sequence().pairs(), 0, buf);
    let up: f64 = upper.info().iter().map(|&i| (-density.pe(buf[i])).ln_1p()).sum();
    let lo: f64 = lower.info().iter().map(|&i| (-density.pe(buf[n1 + i])).ln_1p()).sum();
    up + lo
}

/// Recursive right-stitch search. For each (N, K) every split (N', K') is
/// tried with the stitch positions fixed to the first min(N', N - N')
/// indices, and the candidate with the smallest estimated block error is
/// kept; earlier candidates win ties.
pub fn build_family(max_len: usize, channel: &ChannelModel) -> Result<CodeFamily> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("family length must be at least 1".into()));
    }
    let density = Density::for_channel(channel);
    let value = density.channel_value(channel);
    let unit = |k: usize| -> Result<FamilyEntry> {
        let code = CodeSpec::new(CouplingSequence::empty(1), (0..k).collect(), None)?;
        let error = if k == 0 { 0.0 } else { density.pe(value) };
        Ok(FamilyEntry { code, error })
    };
    let mut entries: Vec<Vec<FamilyEntry>> = vec![vec![unit(0)?, unit(1)?]];
    for n in 2..=max_len {
        let row: Result<Vec<FamilyEntry>> = (0..=n)
            .into_par_iter()
            .map(|k| {
                let mut buf = Vec::with_capacity(n);
                let mut best: Option<(f64, usize, usize)> = None;
                for n1 in 1..n {
                    let n2 = n - n1;
                    for k1 in k.saturating_sub(n2)..=k.min(n1) {
                        let up = &entries[n1 - 1][k1].code;
                        let lo = &entries[n2 - 1][k - k1].code;
                        let ls = candidate_log_success(density, value, up, lo, &mut buf);
                        if best.is_none_or(|(b, _, _)| ls > b) {
                            best = Some((ls, n1, k1));
                        }
                    }
                }
                let (ls, n1, k1) = best.expect("n >= 2 has at least one split");
                let positions: Vec<usize> = (0..n1.min(n - n1)).collect();
                let code = StitchSpec {
                    side: StitchSide::Right,
                    upper: entries[n1 - 1][k1].code.clone(),
                    lower: entries[n - n1 - 1][k - k1].code.clone(),
                    positions,
                }
                .code()?;
                Ok(FamilyEntry {
                    code,
                    error: -ls.exp_m1(),
                })
            })
            .collect();
        entries.push(row?);
    }
    CodeFamily::from_entries(max_len, *channel, entries)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartiallyStitchedLayout {
    pub n: usize,
    pub n0: usize,
    /// Block exponent actually used; block size is 2^s.
    pub s: u32,
    pub block_lengths: Vec<usize>,
    pub block_dims: Vec<usize>,
    /// Shortened mother positions, 0-based.
    pub pattern: Vec<usize>,
}

impl PartiallyStitchedLayout {
    /// Blocks whose outer length falls outside [2^(s-1), 2^s].
    pub fn irregular_blocks(&self) -> Vec<usize> {
        let size = 1usize << self.s;
        let lo = size.div_ceil(2);
        self.block_lengths
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < lo || l > size)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Greedy one-bit-at-a-time rate allocation. `block_profiles[i]` holds the
/// channel-side metric of every position of block i.
pub fn allocate_rates(
    block_profiles: &[Vec<f64>],
    block_lengths: &[usize],
    k: usize,
    family: &CodeFamily,
    density: Density,
) -> Result<Vec<usize>> {
    if block_profiles.len() != block_lengths.len() {
        return Err(Error::LengthMismatch {
            expected: block_lengths.len(),
            got: block_profiles.len(),
        });
    }
    let total: usize = block_lengths.iter().sum();
    if k > total {
        return Err(Error::InvalidArgument(format!("cannot place {k} bits in {total} positions")));
    }
    let table: Vec<Vec<f64>> = block_profiles
        .par_iter()
        .zip(block_lengths.par_iter())
        .map(|(prof, &ni)| -> Result<Vec<f64>> {
            if prof.len() != ni {
                return Err(Error::LengthMismatch { expected: ni, got: prof.len() });
            }
            let mut out = vec![0.0; ni + 1];
            for (ki, slot) in out.iter_mut().enumerate().skip(1) {
                let code = family.code(ni, ki)?;
                let mut m = prof.clone();
                evolve_pairs(density, code.sequence().pairs(), 0, &mut m);
                *slot = code.info().iter().map(|&i| (-density.pe(m[i])).ln_1p()).sum();
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut dims = vec![0usize; block_lengths.len()];
    for _ in 0..k {
        let mut pick: Option<(usize, f64)> = None;
        for (i, &ki) in dims.iter().enumerate() {
            if ki >= block_lengths[i] {
                continue;
            }
            let gain = table[i][ki + 1] - table[i][ki];
            let gain = if gain.is_nan() { f64::NEG_INFINITY } else { gain };
            if pick.is_none_or(|(_, g)| gain > g) {
                pick = Some((i, gain));
            }
        }
        dims[pick.expect("k <= total keeps a block open").0] += 1;
    }
    Ok(dims)
}

/// Shortened regular mother of length 2^ceil(log2 N) after its channel-side
/// stages of span 2^s and above, split into length-2^s sub-blocks.
#[derive(Clone, Debug)]
pub(crate) struct StitchedMother {
    pub n0: usize,
    pub s: u32,
    pub pattern: Vec<usize>,
    pub shortened: Vec<bool>,
    pub coarse: Vec<CouplingPair>,
    pub density: Density,
    /// Metric of every mother position after the coarse stages.
    pub metric: Vec<f64>,
    /// Unshortened mother positions of each sub-block.
    pub blocks: Vec<Vec<usize>>,
}

impl StitchedMother {
    pub fn new(n: usize, s: u32, channel: &ChannelModel) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("code length must be positive".into()));
        }
        let n0 = n.next_power_of_two();
        let m = n0.trailing_zeros();
        let s = s.min(m);
        let block = 1usize << s;
        let pattern = brs_pattern(n0, n0 - n)?;
        let mut shortened = vec![false; n0];
        for &p in &pattern {
            shortened[p] = true;
        }
        let coarse: Vec<CouplingPair> = CouplingSequence::regular(m)
            .pairs()
            .iter()
            .copied()
            .filter(|p| p.b - p.a >= block)
            .collect();
        let density = Density::for_channel(channel);
        let mut metric: Vec<f64> = (0..n0)
            .map(|i| {
                if shortened[i] {
                    density.shortened()
                } else {
                    density.channel_value(channel)
                }
            })
            .collect();
        evolve_pairs(density, &coarse, 0, &mut metric);
        let blocks = (0..n0 / block)
            .map(|b| (b * block..(b + 1) * block).filter(|&i| !shortened[i]).collect())
            .collect();
        Ok(StitchedMother { n0, s, pattern, shortened, coarse, density, metric, blocks })
    }

    pub fn block_profiles(&self) -> Vec<Vec<f64>> {
        self.blocks.iter().map(|pos| pos.iter().map(|&i| self.metric[i]).collect()).collect()
    }

    /// Length-`n` sequence with one (sequence, info) part per nonempty
    /// block followed by the coarse stages, relabelled onto [n].
    pub fn assemble(&self, n: usize, parts: &[(&CouplingSequence, &[usize])]) -> Result<(CouplingSequence, Vec<usize>)> {
        let blocks: Vec<&Vec<usize>> = self.blocks.iter().filter(|b| !b.is_empty()).collect();
        if blocks.len() != parts.len() {
            return Err(Error::LengthMismatch { expected: blocks.len(), got: parts.len() });
        }
        let mut pairs: Vec<CouplingPair> = Vec::new();
        let mut info = Vec::new();
        for (pos, (seq, part_info)) in blocks.iter().zip(parts) {
            pairs.extend(seq.relabel(self.n0, pos)?.pairs());
            info.extend(part_info.iter().map(|&i| pos[i]));
        }
        pairs.extend(self.coarse.iter().filter(|p| !self.shortened[p.a] && !self.shortened[p.b]));

        let mut map = vec![usize::MAX; self.n0];
        let mut next = 0;
        for (i, slot) in map.iter_mut().enumerate() {
            if !self.shortened[i] {
                *slot = next;
                next += 1;
            }
        }
        let pairs = pairs.iter().map(|p| CouplingPair::new(map[p.a], map[p.b])).collect();
        let info = info.iter().map(|&i| map[i]).collect();
        Ok((CouplingSequence::new(n, pairs)?, info))
    }
}

/// Length-N code from a shortened regular mother of length 2^ceil(log2 N)
/// whose length-2^s sub-blocks are replaced by family codes. Returned as a
/// plain stitched code of length N: the kernels touching shortened
/// positions are removed.
pub fn partially_stitched(
    n: usize,
    k: usize,
    s: u32,
    family: &CodeFamily,
    channel: &ChannelModel,
) -> Result<(CodeSpec, PartiallyStitchedLayout)> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 0 <= K <= N and N >= 1, got ({n},{k})")));
    }
    let mother = StitchedMother::new(n, s, channel)?;
    let block = 1usize << mother.s;
    if block > family.max_len() {
        return Err(Error::InvalidArgument(format!(
            "block size {block} exceeds family length {}",
            family.max_len()
        )));
    }
    let profiles = mother.block_profiles();
    let block_lengths: Vec<usize> = mother.blocks.iter().map(Vec::len).collect();
    let dims = allocate_rates(&profiles, &block_lengths, k, family, mother.density)?;
    let parts = mother
        .blocks
        .iter()
        .zip(&dims)
        .filter(|(pos, _)| !pos.is_empty())
        .map(|(pos, &ki)| family.code(pos.len(), ki).map(|c| (c.sequence(), c.info())))
        .collect::<Result<Vec<_>>>()?;
    let (seq, info) = mother.assemble(n, &parts)?;
    let code = CodeSpec::new(seq, info, None)?;
    let StitchedMother { n0, s, pattern, .. } = mother;
    let layout = PartiallyStitchedLayout {
        n,
        n0,
        s,
        block_lengths,
        block_dims: dims,
        pattern,
    };
    Ok((code, layout))
}

/// Regular mother code punctured on its first N0 - N positions, with the
/// information set chosen on `design`.
pub fn qup_code(n: usize, k: usize, design: &ChannelModel) -> Result<RateMatchedCode> {
    rate_matched_baseline(n, k, design, RateMatchMode::Puncture)
}

/// Regular mother code shortened on the bit-reversal pattern, with the
/// information set chosen on `design`.
pub fn brs_code(n: usize, k: usize, design: &ChannelModel) -> Result<RateMatchedCode> {
    rate_matched_baseline(n, k, design, RateMatchMode::Shorten)
}

fn rate_matched_baseline(n: usize, k: usize, design: &ChannelModel, mode: RateMatchMode) -> Result<RateMatchedCode> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 0 <= K <= N and N >= 1, got ({n},{k})")));
    }
    let n0 = n.next_power_of_two();
    let seq = CouplingSequence::regular(n0.trailing_zeros());
    let pattern = match mode {
        RateMatchMode::Puncture => qup_pattern(n0, n0 - n)?,
        _ => brs_pattern(n0, n0 - n)?,
    };
    let mode = if pattern.is_empty() { RateMatchMode::None } else { mode };
    let profile = profile_on(&seq, design, mode, &pattern);
    let info = select_info_set(&profile, k, &pattern)?;
    RateMatchedCode::new(CodeSpec::new(seq, info, None)?, mode, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitMatrix;

    fn seq(n: usize, p: &[(usize, usize)]) -> CouplingSequence {
        CouplingSequence::from_one_based(n, p).unwrap()
    }

    #[test]
    fn left_stitch_into_four() {
        let s = stitch_left(&CouplingSequence::empty(1), &CouplingSequence::regular(2), &[2]).unwrap();
        assert_eq!(s.to_one_based(), vec![(3, 4), (1, 4), (2, 5), (1, 2), (4, 5)]);
        let g = s.generator_matrix();
        let want = BitMatrix::from_rows(&["10000", "11000", "00100", "10110", "11011"]).unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn right_stitch_two_and_three() {
        let s = stitch_right(&seq(2, &[(1, 2)]), &seq(3, &[(1, 3), (1, 2)]), &[0, 2]).unwrap();
        assert_eq!(s.to_one_based(), vec![(1, 2), (3, 5), (3, 4), (1, 3), (2, 5)]);
    }

    #[test]
    fn right_stitch_wider_upper() {
        let s = stitch_right(&seq(3, &[(2, 3), (1, 2)]), &seq(2, &[(1, 2)]), &[0, 1]).unwrap();
        let want = BitMatrix::from_rows(&["10000", "11000", "11100", "10010", "11011"]).unwrap();
        assert_eq!(s.generator_matrix(), want);
    }

    #[test]
    fn stitch_position_errors() {
        let r = CouplingSequence::regular(1);
        assert!(stitch_left(&CouplingSequence::regular(2), &r, &[0, 1, 2, 3]).is_err());
        assert!(stitch_left(&r, &r, &[1, 0]).is_err());
        assert!(stitch_right(&r, &r, &[0]).is_err());
        assert!(stitch_right(&r, &r, &[0, 2]).is_err());
    }

    #[test]
    fn family_of_two() {
        let f = build_family(2, &ChannelModel::Bec { epsilon: 0.5 }).unwrap();
        let c = f.code(2, 1).unwrap();
        assert_eq!(c.sequence().to_one_based(), vec![(1, 2)]);
        assert_eq!(c.info(), &[1]);
        assert!((f.get(2, 1).unwrap().error - 0.25).abs() < 1e-15);
    }

    #[test]
    fn allocation_edges() {
        let f = build_family(4, &ChannelModel::Bec { epsilon: 0.5 }).unwrap();
        let prof = vec![vec![0.5; 4], vec![0.5; 4]];
        assert_eq!(allocate_rates(&prof, &[4, 4], 0, &f, Density::Bec).unwrap(), vec![0, 0]);
        assert_eq!(allocate_rates(&prof, &[4, 4], 1, &f, Density::Bec).unwrap(), vec![1, 0]);
        assert_eq!(allocate_rates(&prof, &[4, 4], 8, &f, Density::Bec).unwrap(), vec![4, 4]);
        assert!(allocate_rates(&prof, &[4, 4], 9, &f, Density::Bec).is_err());
    }

    #[test]
    fn partially_stitched_twelve() {
        let ch = ChannelModel::Bec { epsilon: 0.5 };
        let f = build_family(4, &ch).unwrap();
        let (code, layout) = partially_stitched(12, 6, 2, &f, &ch).unwrap();
        assert_eq!(layout.pattern, vec![3, 7, 11, 15]);
        assert_eq!(layout.block_lengths, vec![3, 3, 3, 3]);
        assert_eq!(layout.block_dims.iter().sum::<usize>(), 6);
        assert_eq!(code.n(), 12);
        assert_eq!(code.k(), 6);
        assert!(code.sequence().validate().is_valid());
    }

    #[test]
    fn baselines_freeze_their_patterns() {
        let ch = ChannelModel::Bec { epsilon: 0.5 };
        let q = qup_code(5, 2, &ch).unwrap();
        assert_eq!(q.pattern(), &[0, 1, 2]);
        assert_eq!(q.n(), 5);
        let b = brs_code(5, 2, &ch).unwrap();
        assert_eq!(b.pattern(), &[3, 5, 7]);
        assert_eq!(b.k(), 2);
        let full = brs_code(8, 4, &ch).unwrap();
        assert_eq!(full.mode(), RateMatchMode::None);
        assert_eq!(full.mother().info(), &[3, 5, 6, 7]);
    }

    #[test]
    fn single_block_is_family_code() {
        let ch = ChannelModel::Bec { epsilon: 0.5 };
        let f = build_family(8, &ch).unwrap();
        let (code, layout) = partially_stitched(6, 3, 3, &f, &ch).unwrap();
        assert_eq!(layout.block_lengths, vec![6]);
        assert_eq!(&code, f.code(6, 3).unwrap());
    }
}
