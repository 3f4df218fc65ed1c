//! Compilation of a coupling sequence into an SC message-passing schedule.
//!
//! Every pair is a 2x2 element with two LLR inputs arriving from the channel
//! side and two bit inputs arriving from the message side. The compiler
//! simulates message flow: an element fires `f` once both LLRs are present,
//! `g` once the bit for its `a` side is known, and the bit combination `⊕`
//! once both bits are known. A position is decided as soon as an LLR reaches
//! its message end. Ready operations run in FIFO order and each decision is
//! placed directly after the operation that produced its LLR.
//!
//! Storage uses one LLR slot and one bit slot per element side (slots 2i and
//! 2i+1 for pair i) plus one slot per position (2n+p) that holds the decision
//! LLR and, on the bit side, the re-encoded codeword bit.

use std::collections::VecDeque;
use std::fmt;

use crate::codeword::{CouplingPair, CouplingSequence, Decodability};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// Check-node update of pair i towards its `a` position.
    F(u32),
    /// Variable-node update of pair i towards its `b` position.
    G(u32),
    /// Bit re-encoding of pair i towards the channel.
    Xor(u32),
    /// Hard decision of position p.
    Decide(u32),
}

#[derive(Clone, Debug)]
pub struct Schedule {
    n: usize,
    pairs: Vec<CouplingPair>,
    ops: Vec<Op>,
    chan_slot: Vec<u32>,
    f_out: Vec<u32>,
    g_out: Vec<u32>,
    xa_out: Vec<u32>,
    xb_out: Vec<u32>,
    dec_out: Vec<u32>,
    decision_order: Vec<usize>,
    peak_llrs: usize,
}

const NONE: u32 = u32::MAX;

impl Schedule {
    pub fn compile(seq: &CouplingSequence) -> Result<Schedule> {
        let n = seq.n();
        let np = seq.len();
        let pairs = seq.pairs().to_vec();
        let base = (2 * np) as u32;
        let slot = |e: usize, p: usize| -> u32 { (2 * e + (pairs[e].b == p) as usize) as u32 };

        // elements touching each position, message side first
        let mut first = vec![NONE; n];
        let mut last = vec![NONE; n];
        let mut f_out = vec![0u32; np];
        let mut g_out = vec![0u32; np];
        let mut xa_out = vec![0u32; np];
        let mut xb_out = vec![0u32; np];
        for (e, pr) in pairs.iter().enumerate() {
            for (pos, out) in [(pr.a, &mut f_out), (pr.b, &mut g_out)] {
                let prev = last[pos];
                if prev == NONE {
                    first[pos] = e as u32;
                    out[e] = base + pos as u32;
                } else {
                    let pe = prev as usize;
                    out[e] = slot(pe, pos);
                    if pairs[pe].a == pos {
                        xa_out[pe] = slot(e, pos);
                    } else {
                        xb_out[pe] = slot(e, pos);
                    }
                }
                last[pos] = e as u32;
            }
        }
        let mut chan_slot = vec![0u32; n];
        let mut dec_out = vec![0u32; n];
        for p in 0..n {
            if last[p] == NONE {
                chan_slot[p] = base + p as u32;
                dec_out[p] = base + p as u32;
            } else {
                let l = last[p] as usize;
                chan_slot[p] = slot(l, p);
                if pairs[l].a == p {
                    xa_out[l] = base + p as u32;
                } else {
                    xb_out[l] = base + p as u32;
                }
                dec_out[p] = slot(first[p] as usize, p);
            }
        }

        let mut sched = Schedule {
            n,
            pairs,
            ops: Vec::with_capacity(3 * np + n),
            chan_slot,
            f_out,
            g_out,
            xa_out,
            xb_out,
            dec_out,
            decision_order: Vec::with_capacity(n),
            peak_llrs: 0,
        };
        sched.simulate();
        if sched.ops.len() != 3 * np + n {
            // valid sequences can still stall on a cyclic bit dependency
            let index = match seq.validate() {
                Decodability::Invalid { pair } => pair,
                Decodability::Valid => {
                    let mut fired = vec![false; np];
                    for op in &sched.ops {
                        if let Op::Xor(e) = *op {
                            fired[e as usize] = true;
                        }
                    }
                    fired.iter().position(|&f| !f).unwrap_or(0)
                }
            };
            let p = seq.pairs().get(index).copied().unwrap_or(CouplingPair::new(0, 0));
            return Err(Error::NotDecodable { index: index + 1, a: p.a + 1, b: p.b + 1 });
        }
        Ok(sched)
    }

    fn simulate(&mut self) {
        let np = self.pairs.len();
        let base = 2 * np;
        let mut llr_ready = vec![false; base];
        let mut queue: VecDeque<Op> = VecDeque::new();
        let mut live = 0usize;
        let mut peak = 0usize;

        // closures cannot borrow self mutably twice, so work on locals
        let mut ops = std::mem::take(&mut self.ops);
        let mut order = std::mem::take(&mut self.decision_order);

        fn deliver_bit(slot: u32, base: usize, queue: &mut VecDeque<Op>) {
            let s = slot as usize;
            if s < base {
                let e = (s / 2) as u32;
                queue.push_back(if s % 2 == 0 { Op::G(e) } else { Op::Xor(e) });
            }
        }

        macro_rules! deliver_llr {
            ($slot:expr) => {{
                let s = $slot as usize;
                if s >= base {
                    let p = s - base;
                    ops.push(Op::Decide(p as u32));
                    order.push(p);
                    deliver_bit(self.dec_out[p], base, &mut queue);
                } else {
                    llr_ready[s] = true;
                    live += 1;
                    peak = peak.max(live);
                    let e = s / 2;
                    if llr_ready[2 * e] && llr_ready[2 * e + 1] {
                        queue.push_back(Op::F(e as u32));
                    }
                }
            }};
        }

        for p in 0..self.n {
            deliver_llr!(self.chan_slot[p]);
        }
        while let Some(op) = queue.pop_front() {
            ops.push(op);
            match op {
                Op::F(e) => deliver_llr!(self.f_out[e as usize]),
                Op::G(e) => {
                    live -= 2;
                    deliver_llr!(self.g_out[e as usize]);
                }
                Op::Xor(e) => {
                    deliver_bit(self.xa_out[e as usize], base, &mut queue);
                    deliver_bit(self.xb_out[e as usize], base, &mut queue);
                }
                Op::Decide(_) => unreachable!("decisions are never queued"),
            }
        }
        self.ops = ops;
        self.decision_order = order;
        self.peak_llrs = peak;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    /// Positions in the order they are decided.
    pub fn decision_order(&self) -> &[usize] {
        &self.decision_order
    }

    /// Largest number of element LLR registers holding a value at once.
    pub fn peak_llr_registers(&self) -> usize {
        self.peak_llrs
    }

    /// Size of the LLR and bit buffers an executor needs.
    pub fn num_slots(&self) -> usize {
        2 * self.pairs.len() + self.n
    }

    #[inline]
    pub(crate) fn chan_slot(&self, p: usize) -> usize {
        self.chan_slot[p] as usize
    }

    #[inline]
    pub(crate) fn f_out(&self, e: usize) -> usize {
        self.f_out[e] as usize
    }

    #[inline]
    pub(crate) fn g_out(&self, e: usize) -> usize {
        self.g_out[e] as usize
    }

    #[inline]
    pub(crate) fn xa_out(&self, e: usize) -> usize {
        self.xa_out[e] as usize
    }

    #[inline]
    pub(crate) fn xb_out(&self, e: usize) -> usize {
        self.xb_out[e] as usize
    }

    #[inline]
    pub(crate) fn dec_out(&self, p: usize) -> usize {
        self.dec_out[p] as usize
    }

    #[inline]
    pub(crate) fn decision_slot(&self, p: usize) -> usize {
        2 * self.pairs.len() + p
    }

    /// A single operation in 1-based pair notation, e.g. `(1,3,f)` or `(4,d)`.
    pub fn describe(&self, op: Op) -> String {
        let pair = |e: u32| self.pairs[e as usize];
        match op {
            Op::F(e) => format!("({},{},f)", pair(e).a + 1, pair(e).b + 1),
            Op::G(e) => format!("({},{},g)", pair(e).a + 1, pair(e).b + 1),
            Op::Xor(e) => format!("({},{},⊕)", pair(e).a + 1, pair(e).b + 1),
            Op::Decide(p) => format!("({},d)", p + 1),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|&op| self.describe(op)).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(pairs: &[(usize, usize)], n: usize) -> String {
        let seq = CouplingSequence::from_one_based(n, pairs).unwrap();
        Schedule::compile(&seq).unwrap().to_string()
    }

    #[test]
    fn regular_four() {
        let got = text(&[(1, 3), (2, 4), (1, 2), (3, 4)], 4);
        let want = "(1,2,f),(3,4,f),(1,3,f),(1,d),(1,3,g),(3,d),(1,3,⊕),(1,2,g),(3,4,g),\
                    (2,4,f),(2,d),(2,4,g),(4,d),(2,4,⊕),(1,2,⊕),(3,4,⊕)";
        assert_eq!(got, want);
    }

    #[test]
    fn five_position_example() {
        let got = text(&[(3, 4), (1, 2), (3, 5), (1, 3), (2, 5)], 5);
        let want = "(1,3,f),(2,5,f),(1,2,f),(1,d),(1,2,g),(2,d),(1,2,⊕),(1,3,g),(2,5,g),\
                    (3,5,f),(3,4,f),(3,d),(3,4,g),(4,d),(3,4,⊕),(3,5,g),(5,d),(3,5,⊕),\
                    (1,3,⊕),(2,5,⊕)";
        assert_eq!(got, want);
    }

    #[test]
    fn untouched_positions_are_decided_directly() {
        let s = Schedule::compile(&CouplingSequence::empty(3)).unwrap();
        assert_eq!(s.to_string(), "(1,d),(2,d),(3,d)");
        assert_eq!(s.peak_llr_registers(), 0);
    }

    #[test]
    fn cyclic_bit_dependency_is_rejected() {
        // observations are disjoint at every pair, yet each of the first two
        // pairs waits on a bit that only the other can produce
        let seq = CouplingSequence::from_one_based(4, &[(2, 3), (1, 4), (1, 2), (3, 4)]).unwrap();
        assert!(seq.validate().is_valid());
        match Schedule::compile(&seq) {
            Err(Error::NotDecodable { index, a, b }) => assert_eq!((index, a, b), (1, 2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_sequence_is_rejected() {
        let seq = CouplingSequence::from_one_based(3, &[(1, 2), (1, 3), (2, 3)]).unwrap();
        match Schedule::compile(&seq) {
            Err(Error::NotDecodable { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
