//! Schedule executor for successive-cancellation decoding.

use serde::{Deserialize, Serialize};

use super::schedule::{Op, Schedule};

/// Check-node rule used by the f operation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckRule {
    #[default]
    Exact,
    MinSum,
}

#[inline]
fn sign_min(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// 2 atanh(tanh(a/2) tanh(b/2)) without overflow for large inputs.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    sign_min(a, b) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

#[inline]
pub fn f_minsum(a: f64, b: f64) -> f64 {
    sign_min(a, b)
}

#[inline]
pub fn g(a: f64, b: f64, u: u8) -> f64 {
    if u & 1 == 0 {
        b + a
    } else {
        b - a
    }
}

#[inline]
pub fn hard(l: f64) -> u8 {
    (l < 0.0) as u8
}

impl CheckRule {
    #[inline]
    pub fn f(&self, a: f64, b: f64) -> f64 {
        match self {
            CheckRule::Exact => f_exact(a, b),
            CheckRule::MinSum => f_minsum(a, b),
        }
    }
}

/// LLR and bit buffers for one decoding path.
#[derive(Clone, Debug)]
pub struct PathState {
    pub llr: Vec<f64>,
    pub bits: Vec<u8>,
    pub u: Vec<u8>,
    pub metric: f64,
}

impl PathState {
    pub fn new(s: &Schedule, channel: &[f64]) -> Self {
        let mut llr = vec![0.0; s.num_slots()];
        for (p, &l) in channel.iter().enumerate() {
            llr[s.chan_slot(p)] = l;
        }
        PathState {
            llr,
            bits: vec![0; s.num_slots()],
            u: vec![0; s.n()],
            metric: 0.0,
        }
    }

    /// Executes a non-decision operation.
    #[inline]
    pub fn step(&mut self, s: &Schedule, rule: CheckRule, op: Op) {
        match op {
            Op::F(e) => {
                let e = e as usize;
                self.llr[s.f_out(e)] = rule.f(self.llr[2 * e], self.llr[2 * e + 1]);
            }
            Op::G(e) => {
                let e = e as usize;
                self.llr[s.g_out(e)] = g(self.llr[2 * e], self.llr[2 * e + 1], self.bits[2 * e]);
            }
            Op::Xor(e) => {
                let e = e as usize;
                let (ua, ub) = (self.bits[2 * e], self.bits[2 * e + 1]);
                self.bits[s.xa_out(e)] = ua ^ ub;
                self.bits[s.xb_out(e)] = ub;
            }
            Op::Decide(_) => unreachable!("decisions are handled by the caller"),
        }
    }

    #[inline]
    pub fn decision_llr(&self, s: &Schedule, p: usize) -> f64 {
        self.llr[s.decision_slot(p)]
    }

    #[inline]
    pub fn commit(&mut self, s: &Schedule, p: usize, u: u8) {
        self.u[p] = u;
        self.bits[s.dec_out(p)] = u;
    }

    /// Re-encoded codeword once every operation has run.
    pub fn codeword(&self, s: &Schedule) -> Vec<u8> {
        (0..s.n()).map(|p| self.bits[s.decision_slot(p)]).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScOutput {
    pub u_hat: Vec<u8>,
    pub x_hat: Vec<u8>,
    /// LLR seen by each position at its decision.
    pub decision_llr: Vec<f64>,
}

/// Runs the schedule once. `decide(p, llr)` supplies each bit.
pub fn run_sc<D: FnMut(usize, f64) -> u8>(s: &Schedule, rule: CheckRule, channel: &[f64], mut decide: D) -> ScOutput {
    let mut st = PathState::new(s, channel);
    let mut dllr = vec![0.0; s.n()];
    for &op in s.ops() {
        if let Op::Decide(p) = op {
            let p = p as usize;
            let l = st.decision_llr(s, p);
            dllr[p] = l;
            let u = decide(p, l);
            st.commit(s, p, u);
        } else {
            st.step(s, rule, op);
        }
    }
    let x_hat = st.codeword(s);
    ScOutput {
        u_hat: st.u,
        x_hat,
        decision_llr: dllr,
    }
}

/// Plain SC: frozen positions are zero, others take the hard decision.
pub fn sc_decode(s: &Schedule, rule: CheckRule, frozen: &[bool], channel: &[f64]) -> ScOutput {
    run_sc(s, rule, channel, |p, l| if frozen[p] { 0 } else { hard(l) })
}

/// SC with every decision forced to the true input bit.
pub fn sc_genie(s: &Schedule, rule: CheckRule, u_true: &[u8], channel: &[f64]) -> ScOutput {
    run_sc(s, rule, channel, |p, _| u_true[p])
}

/// Plain SC that also returns the output LLR of every f and g, in order.
pub fn sc_trace(s: &Schedule, rule: CheckRule, frozen: &[bool], channel: &[f64]) -> (ScOutput, Vec<(Op, f64)>) {
    let mut st = PathState::new(s, channel);
    let mut dllr = vec![0.0; s.n()];
    let mut trace = Vec::with_capacity(2 * s.num_pairs());
    for &op in s.ops() {
        match op {
            Op::Decide(p) => {
                let p = p as usize;
                let l = st.decision_llr(s, p);
                dllr[p] = l;
                st.commit(s, p, if frozen[p] { 0 } else { hard(l) });
            }
            Op::F(e) => {
                st.step(s, rule, op);
                trace.push((op, st.llr[s.f_out(e as usize)]));
            }
            Op::G(e) => {
                st.step(s, rule, op);
                trace.push((op, st.llr[s.g_out(e as usize)]));
            }
            Op::Xor(_) => st.step(s, rule, op),
        }
    }
    let x_hat = st.codeword(s);
    let out = ScOutput {
        u_hat: st.u,
        x_hat,
        decision_llr: dllr,
    };
    (out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codeword::CouplingSequence;

    #[test]
    fn exact_f_matches_tanh_rule() {
        for &(a, b) in &[(1.0, 2.0), (-3.0, 0.5), (0.0, 4.0), (-7.0, -7.5), (12.0, -0.01)] {
            let want = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((f_exact(a, b) - want).abs() < 1e-12, "({a},{b})");
        }
        // no overflow at saturation
        let big = (1u64 << 20) as f64;
        assert!((f_exact(big, -big) + big).abs() < 1.0);
    }

    #[test]
    fn five_position_trace() {
        let seq = CouplingSequence::from_one_based(5, &[(3, 4), (1, 2), (3, 5), (1, 3), (2, 5)]).unwrap();
        let s = Schedule::compile(&seq).unwrap();
        let frozen = [true, true, true, false, false];
        let out = sc_decode(&s, CheckRule::MinSum, &frozen, &[2.0, 7.5, -4.0, -9.0, 3.5]);
        assert_eq!(out.decision_llr[0], -2.0);
        assert_eq!(out.decision_llr[1], 1.5);
        // min-cost difference between u4 = 0 (13) and u4 = 1 (2)
        assert_eq!(out.decision_llr[3], -11.0);
        assert_eq!(&out.u_hat[3..], &[1, 0]);
        assert_eq!(seq.encode(&out.u_hat).unwrap(), out.x_hat);
    }
}
