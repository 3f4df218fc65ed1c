//! Successive-cancellation list decoding over a compiled schedule.

use super::sc::{CheckRule, PathState};
use super::schedule::{Op, Schedule};

/// One surviving path at the end of list decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct ListCandidate {
    pub u_hat: Vec<u8>,
    pub x_hat: Vec<u8>,
    pub metric: f64,
}

/// Decodes with list size `list`. Paths are split at every information
/// position; the copy taking bit 1 is appended after all existing paths and
/// the list is cut back to `list` by a stable sort on the path metric.
/// Returns the final list ordered by metric, best first.
pub fn scl_decode(
    s: &Schedule,
    rule: CheckRule,
    frozen: &[bool],
    channel: &[f64],
    list: usize,
) -> Vec<ListCandidate> {
    let list = list.max(1);
    let mut paths = vec![PathState::new(s, channel)];
    for &op in s.ops() {
        let Op::Decide(p) = op else {
            for st in paths.iter_mut() {
                st.step(s, rule, op);
            }
            continue;
        };
        let p = p as usize;
        if frozen[p] {
            for st in paths.iter_mut() {
                let l = st.decision_llr(s, p);
                if l < 0.0 {
                    st.metric -= l;
                }
                st.commit(s, p, 0);
            }
            continue;
        }
        let s0 = paths.len();
        for i in 0..s0 {
            let l = paths[i].decision_llr(s, p);
            let mut one = paths[i].clone();
            if l < 0.0 {
                paths[i].metric -= l;
            } else {
                one.metric += l;
            }
            paths[i].commit(s, p, 0);
            one.commit(s, p, 1);
            paths.push(one);
        }
        if paths.len() > list {
            paths.sort_by(|x, y| x.metric.total_cmp(&y.metric));
            paths.truncate(list);
        }
    }
    paths.sort_by(|x, y| x.metric.total_cmp(&y.metric));
    paths
        .into_iter()
        .map(|st| ListCandidate {
            x_hat: st.codeword(s),
            u_hat: st.u,
            metric: st.metric,
        })
        .collect()
}
