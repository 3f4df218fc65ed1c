#![allow(dead_code)]

use stitched_polar::{CodeSpec, CouplingSequence};

/// A printed short code: 1-based pairs, 1-based information set and the
/// generator matrix rows.
pub struct Tabled {
    pub name: &'static str,
    pub n: usize,
    pub pairs: &'static [(usize, usize)],
    pub info: &'static [usize],
    pub rows: &'static [&'static str],
}

impl Tabled {
    pub fn sequence(&self) -> CouplingSequence {
        CouplingSequence::from_one_based(self.n, self.pairs).unwrap()
    }

    pub fn code(&self) -> CodeSpec {
        CodeSpec::new(self.sequence(), self.info.iter().map(|i| i - 1).collect(), None).unwrap()
    }
}

pub const EXAMPLE_5_2: Tabled = Tabled {
    name: "example (5,2)",
    n: 5,
    pairs: &[(3, 4), (1, 2), (3, 5), (1, 3), (2, 5)],
    info: &[4, 5],
    rows: &["10000", "11000", "10100", "10110", "11101"],
};

pub const TABLE: &[Tabled] = &[
    Tabled {
        name: "C(4,2)",
        n: 4,
        pairs: &[(2, 3), (1, 3), (1, 4)],
        info: &[3, 4],
        rows: &["1000", "0100", "1110", "1001"],
    },
    EXAMPLE_5_2,
    Tabled {
        name: "C(5,3)",
        n: 5,
        pairs: &[(2, 3), (1, 2), (4, 5), (1, 4), (2, 5)],
        info: &[3, 4, 5],
        rows: &["10000", "11000", "11100", "10010", "11011"],
    },
    Tabled {
        name: "C(6,2)",
        n: 6,
        pairs: &[(2, 3), (4, 5), (1, 2), (3, 5), (4, 6), (1, 4), (2, 6)],
        info: &[5, 6],
        rows: &["100000", "110000", "111000", "100100", "101110", "110101"],
    },
    Tabled {
        name: "C(6,3)",
        n: 6,
        pairs: &[(2, 3), (4, 5), (1, 2), (3, 5), (4, 6), (1, 4), (2, 6)],
        info: &[3, 5, 6],
        rows: &["100000", "110000", "111000", "100100", "101110", "110101"],
    },
    Tabled {
        name: "C(6,4)",
        n: 6,
        pairs: &[(2, 3), (4, 5), (1, 2), (3, 5), (4, 6), (1, 4), (2, 6)],
        info: &[3, 4, 5, 6],
        rows: &["100000", "110000", "111000", "100100", "101110", "110101"],
    },
    Tabled {
        name: "C(7,2)",
        n: 7,
        pairs: &[(1, 2), (3, 4), (5, 6), (1, 3), (4, 6), (5, 7), (1, 5), (2, 4), (3, 7)],
        info: &[6, 7],
        rows: &["1000000", "1100000", "1010000", "1111000", "1000100", "1101110", "1010101"],
    },
    Tabled {
        name: "C(7,5)",
        n: 7,
        pairs: &[(2, 3), (4, 5), (6, 7), (1, 2), (3, 5), (4, 6), (1, 4), (2, 6), (3, 7)],
        info: &[3, 4, 5, 6, 7],
        rows: &["1000000", "1100000", "1110000", "1001000", "1011100", "1101010", "1111011"],
    },
    Tabled {
        name: "C(8,2)",
        n: 8,
        pairs: &[(2, 3), (4, 5), (6, 7), (2, 4), (3, 5), (6, 8), (1, 2), (4, 8), (1, 6), (3, 7)],
        info: &[7, 8],
        rows: &[
            "10000000", "01000000", "01100000", "01010000", "01011000", "11000100", "11101110", "11010101",
        ],
    },
    Tabled {
        name: "C(8,3)",
        n: 8,
        pairs: &[(4, 5), (1, 2), (3, 4), (6, 7), (1, 3), (2, 4), (6, 8), (1, 6), (2, 7), (3, 8)],
        info: &[5, 7, 8],
        rows: &[
            "10000000", "11000000", "10100000", "11110000", "11111000", "10000100", "11000110", "10100101",
        ],
    },
    Tabled {
        name: "C(8,5)",
        n: 8,
        pairs: &[(4, 5), (2, 3), (4, 6), (7, 8), (1, 2), (3, 6), (4, 7), (1, 4), (2, 7), (3, 8)],
        info: &[3, 5, 6, 7, 8],
        rows: &[
            "10000000", "11000000", "11100000", "10010000", "10011000", "11110100", "11010010", "11110011",
        ],
    },
    Tabled {
        name: "C(8,6)",
        n: 8,
        pairs: &[(2, 3), (5, 6), (2, 4), (5, 7), (1, 2), (4, 7), (5, 8), (1, 5), (2, 8), (3, 6)],
        info: &[3, 4, 5, 6, 7, 8],
        rows: &[
            "10000000", "11000000", "11100000", "11010000", "10001000", "10101100", "10011010", "11001001",
        ],
    },
];

use rand::Rng;
use stitched_polar::construction::{stitch_left, stitch_right};

/// Grows a sequence one random kernel at a time on the message side,
/// keeping only kernels that leave it decodable.
pub fn random_valid_sequence<R: Rng>(rng: &mut R, n: usize, attempts: usize) -> CouplingSequence {
    let mut pairs = Vec::new();
    if n < 2 {
        return CouplingSequence::empty(n);
    }
    for _ in 0..attempts {
        let a = rng.random_range(0..n - 1);
        let b = rng.random_range(a + 1..n);
        let mut trial = vec![stitched_polar::CouplingPair::new(a, b)];
        trial.extend_from_slice(&pairs);
        let seq = CouplingSequence::new(n, trial.clone()).unwrap();
        if seq.validate().is_valid() && Schedule::compile(&seq).is_ok() {
            pairs = trial;
        }
    }
    CouplingSequence::new(n, pairs).unwrap()
}

/// Random composition of left and right stitches down to single bits.
pub fn random_stitched<R: Rng>(rng: &mut R, n: usize) -> CouplingSequence {
    if n == 1 {
        return CouplingSequence::empty(1);
    }
    let n1 = rng.random_range(1..n);
    let n2 = n - n1;
    let upper = random_stitched(rng, n1);
    let lower = random_stitched(rng, n2);
    if n1 <= n2 && rng.random_bool(0.3) {
        let gamma = random_subset(rng, n2, n1);
        stitch_left(&upper, &lower, &gamma).unwrap()
    } else {
        let positions = random_subset(rng, n1.max(n2), n1.min(n2));
        stitch_right(&upper, &lower, &positions).unwrap()
    }
}

/// Sorted random subset of [n] of the given size.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut out = all[..size].to_vec();
    out.sort_unstable();
    out
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

/// A random code on a random valid sequence, mixing grown and stitched
/// structures.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, k: usize) -> CodeSpec {
    let seq = if rng.random_bool(0.5) {
        random_valid_sequence(rng, n, 4 * n)
    } else {
        random_stitched(rng, n)
    };
    let info = random_subset(rng, n, k);
    CodeSpec::new(seq, info, None).unwrap()
}

use stitched_polar::decoder::{hard, sc_decode, sc_genie, CheckRule};
use stitched_polar::decoder::scl_decode;
use stitched_polar::{Schedule, LLR_SATURATION};

/// Every input vector of length n with its codeword.
pub fn all_codewords(seq: &CouplingSequence) -> Vec<(Vec<u8>, Vec<u8>)> {
    let n = seq.n();
    (0..1u32 << n)
        .map(|v| {
            let u: Vec<u8> = (0..n).map(|j| (v >> j & 1) as u8).collect();
            let x = seq.encode(&u).unwrap();
            (u, x)
        })
        .collect()
}

#[derive(Debug, Default, Clone, Copy)]
pub struct PosteriorTally {
    pub decided: usize,
    pub tied: usize,
    pub mismatches: usize,
}

/// Runs SC on an erasure pattern and compares each decision with the
/// posterior over all inputs consistent with the received word and the
/// earlier decisions. A position is tied when both values stay possible.
pub fn check_posterior(code: &CodeSpec, x: &[u8], erased: &[bool]) -> PosteriorTally {
    let seq = code.sequence();
    let sched = Schedule::compile(seq).unwrap();
    let llr: Vec<f64> = x
        .iter()
        .zip(erased)
        .map(|(&b, &e)| if e { 0.0 } else if b == 0 { LLR_SATURATION } else { -LLR_SATURATION })
        .collect();
    let out = sc_decode(&sched, CheckRule::Exact, code.frozen_mask(), &llr);
    let mut alive: Vec<Vec<u8>> = all_codewords(seq)
        .into_iter()
        .filter(|(_, c)| c.iter().zip(x).zip(erased).all(|((a, b), &e)| e || a == b))
        .map(|(u, _)| u)
        .collect();
    let mut tally = PosteriorTally::default();
    for &p in sched.decision_order() {
        // a frozen bit can contradict an earlier tied guess
        if alive.is_empty() {
            break;
        }
        let ones = alive.iter().filter(|u| u[p] == 1).count();
        let zeros = alive.len() - ones;
        let l = out.decision_llr[p];
        if ones > 0 && zeros > 0 {
            tally.tied += 1;
            if l.abs() > 1e-9 {
                tally.mismatches += 1;
            }
        } else {
            tally.decided += 1;
            let forced = (ones > 0) as u8;
            if l.abs() < LLR_SATURATION / 4.0 || hard(l) != forced {
                tally.mismatches += 1;
            }
        }
        alive.retain(|u| u[p] == out.u_hat[p]);
    }
    tally
}

/// Largest deviation between list-decoder metrics with an unbounded list
/// and the correlation discrepancy of each codeword, after removing the
/// common offset.
pub fn scl_ml_gap(code: &CodeSpec, llr: &[f64]) -> f64 {
    let sched = Schedule::compile(code.sequence()).unwrap();
    let k = code.info().len();
    let list = scl_decode(&sched, CheckRule::MinSum, code.frozen_mask(), llr, 1 << k);
    let cost = |x: &[u8]| -> f64 {
        x.iter().zip(llr).map(|(&b, &l)| if b != hard(l) { l.abs() } else { 0.0 }).sum()
    };
    let best_cost = (0..1u32 << k)
        .map(|v| {
            let msg: Vec<u8> = (0..k).map(|j| (v >> j & 1) as u8).collect();
            cost(&code.sequence().encode(&code.input_vector(&msg).unwrap()).unwrap())
        })
        .fold(f64::INFINITY, f64::min);
    if list.len() != 1 << k {
        return f64::INFINITY;
    }
    let offset = list[0].metric - best_cost;
    let mut gap = (cost(&list[0].x_hat) - best_cost).abs();
    for cand in &list {
        gap = gap.max((cand.metric - offset - cost(&cand.x_hat)).abs());
    }
    gap
}

/// Path metric of an input under any rule, from the genie-aided run.
pub fn genie_metric(sched: &Schedule, rule: CheckRule, u: &[u8], llr: &[f64]) -> f64 {
    let out = sc_genie(sched, rule, u, llr);
    (0..u.len())
        .map(|p| {
            let l = out.decision_llr[p];
            if u[p] != hard(l) {
                l.abs()
            } else {
                0.0
            }
        })
        .sum()
}
