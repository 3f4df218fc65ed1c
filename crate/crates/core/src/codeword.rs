//! Coupling sequences, stitched codes and rate matching.
//!
//! A coupling sequence of length N is an ordered list of pairs (a, b) with
//! a < b. Encoding starts from the input vector u and applies `x[a] ^= x[b]`
//! for every pair in order, so the first pair sits closest to the message and
//! the last one closest to the channel. All indices in this module are
//! 0-based; file formats and the CLI use 1-based indices.

use std::collections::BTreeSet;

use crate::crc::CrcConfig;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CouplingPair {
    pub a: usize,
    pub b: usize,
}

impl CouplingPair {
    pub fn new(a: usize, b: usize) -> Self {
        CouplingPair { a, b }
    }

    pub fn touches(&self, i: usize) -> bool {
        self.a == i || self.b == i
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingSequence {
    n: usize,
    pairs: Vec<CouplingPair>,
}

/// Outcome of the SC-decodability check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decodability {
    Valid,
    /// Index (0-based, in encoding order) of the first pair met in reverse
    /// order whose two observation sets overlap.
    Invalid { pair: usize },
}

impl Decodability {
    pub fn is_valid(&self) -> bool {
        matches!(self, Decodability::Valid)
    }
}

/// Observation sets and side-information counts after the reverse sweep.
#[derive(Clone, Debug)]
pub struct ValidationState {
    pub observations: Vec<BitSet>,
    pub side_info: Vec<usize>,
    pub outcome: Decodability,
}

impl CouplingSequence {
    pub fn new(n: usize, pairs: Vec<CouplingPair>) -> Result<Self> {
        for p in &pairs {
            if p.a >= p.b || p.b >= n {
                return Err(Error::BadPair { a: p.a + 1, b: p.b + 1, n });
            }
        }
        Ok(CouplingSequence { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        CouplingSequence { n, pairs: Vec::new() }
    }

    /// Builds a sequence from 1-based pairs.
    pub fn from_one_based(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a == 0 || b == 0 {
                return Err(Error::BadPair { a, b, n });
            }
            out.push(CouplingPair::new(a - 1, b - 1));
        }
        Self::new(n, out)
    }

    pub fn to_one_based(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|p| (p.a + 1, p.b + 1)).collect()
    }

    /// Sequence whose generator is the m-fold Kronecker power of [[1,0],[1,1]].
    pub fn regular(m: u32) -> Self {
        let n = 1usize << m;
        let mut pairs = Vec::with_capacity(n / 2 * m as usize);
        for level in (0..m).rev() {
            let span = 1usize << level;
            for start in (0..n).step_by(2 * span) {
                for i in start..start + span {
                    pairs.push(CouplingPair::new(i, i + span));
                }
            }
        }
        CouplingSequence { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[CouplingPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn encode_in_place(&self, x: &mut [u8]) {
        for p in &self.pairs {
            x[p.a] ^= x[p.b];
        }
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: u.len() });
        }
        let mut x = u.to_vec();
        self.encode_in_place(&mut x);
        Ok(x)
    }

    /// Generator matrix; row i is the codeword of the i-th unit vector.
    pub fn generator_matrix(&self) -> BitMatrix {
        let mut g = BitMatrix::identity(self.n);
        for p in &self.pairs {
            g.add_column(p.a, p.b);
        }
        g
    }

    pub fn validation_state(&self) -> ValidationState {
        let n = self.n;
        let mut obs: Vec<BitSet> = (0..n).map(|j| BitSet::singleton(n, j)).collect();
        let mut side = vec![0usize; n];
        for (idx, p) in self.pairs.iter().enumerate().rev() {
            if obs[p.a].intersects(&obs[p.b]) {
                return ValidationState {
                    observations: obs,
                    side_info: side,
                    outcome: Decodability::Invalid { pair: idx },
                };
            }
            let ob = obs[p.b].clone();
            obs[p.a].union_with(&ob);
            obs[p.b] = obs[p.a].clone();
            // disjoint observations carry disjoint side information
            let merged = side[p.a] + side[p.b];
            side[p.a] = merged;
            side[p.b] = merged + 1;
        }
        ValidationState {
            observations: obs,
            side_info: side,
            outcome: Decodability::Valid,
        }
    }

    pub fn validate(&self) -> Decodability {
        self.validation_state().outcome
    }

    /// The same pairs relabelled through `map` onto a sequence of length `n`.
    /// `map` must be strictly increasing so that a < b is preserved.
    pub fn relabel(&self, n: usize, map: &[usize]) -> Result<CouplingSequence> {
        let pairs = self
            .pairs
            .iter()
            .map(|p| CouplingPair::new(map[p.a], map[p.b]))
            .collect();
        CouplingSequence::new(n, pairs)
    }
}

/// A stitched code: coupling sequence, information set and optional CRC.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    seq: CouplingSequence,
    info: Vec<usize>,
    frozen_mask: Vec<bool>,
    crc: Option<CrcConfig>,
}

impl CodeSpec {
    /// `info` holds every non-frozen position, CRC bits included.
    pub fn new(seq: CouplingSequence, info: Vec<usize>, crc: Option<CrcConfig>) -> Result<Self> {
        let n = seq.n();
        let set: BTreeSet<usize> = info.iter().copied().collect();
        if set.len() != info.len() {
            return Err(Error::InvalidCode("information set has duplicates".into()));
        }
        if let Some(&max) = set.iter().next_back() {
            if max >= n {
                return Err(Error::InvalidCode(format!("information index {} exceeds N={n}", max + 1)));
            }
        }
        if let Some(c) = &crc {
            c.check()?;
            if c.len > set.len() {
                return Err(Error::InvalidCode(format!(
                    "crc length {} exceeds information set size {}",
                    c.len,
                    set.len()
                )));
            }
        }
        let mut frozen_mask = vec![true; n];
        for &i in &set {
            frozen_mask[i] = false;
        }
        Ok(CodeSpec {
            seq,
            info: set.into_iter().collect(),
            frozen_mask,
            crc,
        })
    }

    pub fn n(&self) -> usize {
        self.seq.n()
    }

    /// Number of message bits, excluding CRC.
    pub fn k(&self) -> usize {
        self.info.len() - self.crc_len()
    }

    pub fn crc_len(&self) -> usize {
        self.crc.as_ref().map_or(0, |c| c.len)
    }

    pub fn sequence(&self) -> &CouplingSequence {
        &self.seq
    }

    pub fn info(&self) -> &[usize] {
        &self.info
    }

    pub fn crc(&self) -> Option<&CrcConfig> {
        self.crc.as_ref()
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.frozen_mask[i]).collect()
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    pub fn with_crc(&self, crc: Option<CrcConfig>) -> Result<CodeSpec> {
        CodeSpec::new(self.seq.clone(), self.info.clone(), crc)
    }

    /// Input vector u carrying `msg` (plus CRC) on the information set.
    pub fn input_vector(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), got: msg.len() });
        }
        let word = match &self.crc {
            Some(c) => c.append(msg),
            None => msg.to_vec(),
        };
        let mut u = vec![0u8; self.n()];
        for (&i, &b) in self.info.iter().zip(&word) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let mut u = self.input_vector(msg)?;
        self.seq.encode_in_place(&mut u);
        Ok(u)
    }

    /// Reads the information-set bits (with CRC) out of an input vector.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info.iter().map(|&i| u[i]).collect()
    }

    pub fn generator_matrix(&self) -> BitMatrix {
        self.seq.generator_matrix()
    }
}

/// Bit reversal of the low `m` bits of `j`.
pub fn bit_reverse(j: usize, m: u32) -> usize {
    if m == 0 {
        0
    } else {
        j.reverse_bits() >> (usize::BITS - m)
    }
}

/// The bit-reversal permutation of length 2^m, 0-based.
pub fn bit_reversal_permutation(m: u32) -> Vec<usize> {
    (0..1usize << m).map(|j| bit_reverse(j, m)).collect()
}

fn log2_exact(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("{n} is not a power of two")));
    }
    Ok(n.trailing_zeros())
}

/// Quasi-uniform puncturing: the first `p` positions.
pub fn qup_pattern(n0: usize, p: usize) -> Result<Vec<usize>> {
    log2_exact(n0)?;
    if p > n0 {
        return Err(Error::InvalidArgument(format!("cannot puncture {p} of {n0} positions")));
    }
    Ok((0..p).collect())
}

/// Bit-reversal shortening: the last `s` entries of the bit-reversal
/// permutation, sorted.
pub fn brs_pattern(n0: usize, s: usize) -> Result<Vec<usize>> {
    let m = log2_exact(n0)?;
    if s > n0 {
        return Err(Error::InvalidArgument(format!("cannot shorten {s} of {n0} positions")));
    }
    let q = bit_reversal_permutation(m);
    let mut pat: Vec<usize> = q[n0 - s..].to_vec();
    pat.sort_unstable();
    Ok(pat)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateMatchMode {
    None,
    Puncture,
    Shorten,
}

impl RateMatchMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateMatchMode::None => "none",
            RateMatchMode::Puncture => "puncture",
            RateMatchMode::Shorten => "shorten",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RateMatchMode::None),
            "puncture" => Ok(RateMatchMode::Puncture),
            "shorten" => Ok(RateMatchMode::Shorten),
            other => Err(Error::Parse(format!("unknown rate-match mode {other:?}"))),
        }
    }
}

/// A mother code with some codeword positions punctured or shortened.
#[derive(Clone, Debug, PartialEq)]
pub struct RateMatchedCode {
    mother: CodeSpec,
    mode: RateMatchMode,
    pattern: Vec<usize>,
    transmitted: Vec<usize>,
}

impl RateMatchedCode {
    pub fn plain(code: CodeSpec) -> Self {
        let transmitted = (0..code.n()).collect();
        RateMatchedCode {
            mother: code,
            mode: RateMatchMode::None,
            pattern: Vec::new(),
            transmitted,
        }
    }

    pub fn new(mother: CodeSpec, mode: RateMatchMode, pattern: Vec<usize>) -> Result<Self> {
        let n0 = mother.n();
        let set: BTreeSet<usize> = pattern.iter().copied().collect();
        if set.len() != pattern.len() || set.iter().any(|&p| p >= n0) {
            return Err(Error::InvalidCode("rate-matching pattern is not a subset of [N]".into()));
        }
        if mode == RateMatchMode::None && !set.is_empty() {
            return Err(Error::InvalidCode("pattern given without a rate-matching mode".into()));
        }
        for &p in &set {
            if !mother.is_frozen(p) {
                return Err(Error::InvalidCode(format!(
                    "rate-matched position {} must be frozen",
                    p + 1
                )));
            }
        }
        if mode == RateMatchMode::Shorten {
            let g = mother.generator_matrix();
            for &i in mother.info() {
                if let Some(&p) = set.iter().find(|&&p| g.get(i, p)) {
                    return Err(Error::InvalidCode(format!(
                        "information row {} is not zero on shortened position {}",
                        i + 1,
                        p + 1
                    )));
                }
            }
        }
        let transmitted = (0..n0).filter(|i| !set.contains(i)).collect();
        Ok(RateMatchedCode {
            mother,
            mode,
            pattern: set.into_iter().collect(),
            transmitted,
        })
    }

    pub fn mother(&self) -> &CodeSpec {
        &self.mother
    }

    pub fn mode(&self) -> RateMatchMode {
        self.mode
    }

    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    /// Mother positions that reach the channel, ascending.
    pub fn transmitted(&self) -> &[usize] {
        &self.transmitted
    }

    /// Transmitted length.
    pub fn n(&self) -> usize {
        self.transmitted.len()
    }

    pub fn k(&self) -> usize {
        self.mother.k()
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        let x = self.mother.encode(msg)?;
        Ok(self.transmitted.iter().map(|&i| x[i]).collect())
    }

    /// Generator of the transmitted code, one row per information position.
    pub fn info_generator(&self) -> BitMatrix {
        self.mother
            .generator_matrix()
            .select(self.mother.info(), &self.transmitted)
    }

    /// Mother generator with the pattern rows and columns removed.
    pub fn outer_generator(&self) -> BitMatrix {
        self.mother
            .generator_matrix()
            .select(&self.transmitted, &self.transmitted)
    }

    /// Information positions as row indices of [`Self::outer_generator`].
    pub fn outer_info(&self) -> Vec<usize> {
        self.mother
            .info()
            .iter()
            .map(|i| self.transmitted.binary_search(i).expect("information positions are transmitted"))
            .collect()
    }

    /// Mother-length LLR vector with rate-matched positions filled in.
    pub fn expand_llr(&self, llr: &[f64], saturation: f64) -> Result<Vec<f64>> {
        if llr.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: llr.len() });
        }
        if self.mode == RateMatchMode::None {
            return Ok(llr.to_vec());
        }
        let fill = match self.mode {
            RateMatchMode::Shorten => saturation,
            _ => 0.0,
        };
        let mut out = vec![fill; self.mother.n()];
        for (&i, &l) in self.transmitted.iter().zip(llr) {
            out[i] = l;
        }
        Ok(out)
    }

    /// Equivalent length-N stitched code obtained by dropping every pair that
    /// touches the pattern and relabelling the remaining positions. Fails if
    /// the result does not generate the same code.
    pub fn flatten(&self) -> Result<CodeSpec> {
        if self.mode == RateMatchMode::None {
            return Ok(self.mother.clone());
        }
        let n0 = self.mother.n();
        let mut map = vec![usize::MAX; n0];
        for (j, &i) in self.transmitted.iter().enumerate() {
            map[i] = j;
        }
        let pairs = self
            .mother
            .sequence()
            .pairs()
            .iter()
            .filter(|p| map[p.a] != usize::MAX && map[p.b] != usize::MAX)
            .map(|p| CouplingPair::new(map[p.a], map[p.b]))
            .collect();
        let seq = CouplingSequence::new(self.n(), pairs)?;
        let info = self.mother.info().iter().map(|&i| map[i]).collect();
        let flat = CodeSpec::new(seq, info, self.mother.crc().cloned())?;
        let g = flat.generator_matrix().select(flat.info(), &(0..flat.n()).collect::<Vec<_>>());
        if g != self.info_generator() {
            return Err(Error::InvalidCode("pattern cannot be removed by dropping pairs".into()));
        }
        Ok(flat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_order_for_four() {
        let s = CouplingSequence::regular(2);
        assert_eq!(s.to_one_based(), vec![(1, 3), (2, 4), (1, 2), (3, 4)]);
    }

    #[test]
    fn regular_generator_is_kernel_power() {
        for m in 0..=6 {
            assert_eq!(
                CouplingSequence::regular(m).generator_matrix(),
                BitMatrix::kernel_power(m),
                "m={m}"
            );
        }
    }

    #[test]
    fn counter_example_fails_at_first_pair() {
        let s = CouplingSequence::from_one_based(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(s.validate(), Decodability::Invalid { pair: 0 });
    }

    #[test]
    fn side_information_counts() {
        let st = CouplingSequence::regular(1).validation_state();
        assert_eq!(st.side_info, vec![0, 1]);
        assert_eq!(st.observations[1].iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn bit_reversal_small() {
        assert_eq!(bit_reversal_permutation(2), vec![0, 2, 1, 3]);
        assert_eq!(bit_reversal_permutation(3), vec![0, 4, 2, 6, 1, 5, 3, 7]);
        assert_eq!(bit_reversal_permutation(0), vec![0]);
    }

    #[test]
    fn shortening_patterns() {
        assert_eq!(brs_pattern(8, 2).unwrap(), vec![3, 7]);
        assert_eq!(brs_pattern(16, 4).unwrap(), vec![3, 7, 11, 15]);
        assert_eq!(brs_pattern(8, 3).unwrap(), vec![3, 5, 7]);
        assert_eq!(qup_pattern(8, 3).unwrap(), vec![0, 1, 2]);
        assert!(brs_pattern(12, 1).is_err());
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(CouplingSequence::from_one_based(4, &[(2, 2)]).is_err());
        assert!(CouplingSequence::from_one_based(4, &[(3, 1)]).is_err());
        assert!(CouplingSequence::from_one_based(4, &[(1, 5)]).is_err());
        assert!(CouplingSequence::from_one_based(4, &[(0, 2)]).is_err());
    }

    #[test]
    fn crc_is_carried_on_last_info_positions() {
        let crc = CrcConfig::new("11").unwrap();
        let code = CodeSpec::new(CouplingSequence::empty(4), vec![1, 2, 3], Some(crc)).unwrap();
        assert_eq!(code.k(), 2);
        assert_eq!(code.input_vector(&[1, 0]).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(code.input_vector(&[1, 1]).unwrap(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn shortening_requires_zero_columns() {
        let seq = CouplingSequence::regular(2);
        let ok = CodeSpec::new(seq.clone(), vec![0, 1], None).unwrap();
        assert!(RateMatchedCode::new(ok, RateMatchMode::Shorten, vec![3]).is_ok());
        let bad = CodeSpec::new(seq, vec![1, 2], None).unwrap();
        assert!(RateMatchedCode::new(bad.clone(), RateMatchMode::Shorten, vec![0]).is_err());
        assert!(RateMatchedCode::new(bad, RateMatchMode::Puncture, vec![2]).is_err());
    }
}
