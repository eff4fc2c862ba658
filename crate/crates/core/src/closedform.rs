//! Closed-form answers for `TF_α` and `TF_{α-1}`, computed straight from the
//! dimension sequence with no spectral sequence in sight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gold::{theta, GoldMonomial};
use crate::group::{GradedGroup, GroupSummand};
use crate::prism::{CyclicIdeal, PrismKind, PrismScalar};
use crate::rep::{Shift, VirtualRep};

/// `e_r = min(d_r, s_r)` and `s_r = Σ_{i>r} (-e_i)`, filled right to left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ESequence {
    pub e: Vec<i64>,
    pub s: Vec<i64>,
}

pub fn e_sequence(alpha: &VirtualRep) -> Result<ESequence> {
    if alpha.d_inf() < 0 {
        return Err(Error::Contract(format!("e_sequence needs d_inf >= 0, got {alpha}")));
    }
    let l = alpha.len();
    let (mut e, mut s) = (vec![0; l], vec![0; l]);
    let mut acc = 0;
    for r in (0..l).rev() {
        s[r] = acc;
        e[r] = alpha.d(r).min(acc);
        acc -= e[r];
    }
    Ok(ESequence { e, s })
}

/// Maximal runs `(s, r)` of nonnegative `d_i`. With `d_∞ ≥ 0` a run may not
/// reach the top index.
pub fn subsequences_transversal(alpha: &VirtualRep) -> Vec<(usize, usize)> {
    let d = alpha.dims();
    let l = d.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < l {
        if d[i] < 0 {
            i += 1;
            continue;
        }
        let s = i;
        while i + 1 < l && d[i + 1] >= 0 {
            i += 1;
        }
        if i + 1 < l || alpha.d_inf() < 0 {
            out.push((s, i));
        }
        i += 1;
    }
    out
}

/// Which half of the "no intermediate index" condition is enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainRule {
    Both,
    LeftOnly,
    RightOnly,
}

struct ChainData {
    qualifying: Vec<usize>,
    weight: Vec<i64>,
    prefix: Vec<i64>,
    free: bool,
}

impl ChainData {
    fn new(alpha: &VirtualRep) -> Self {
        let d = alpha.dims();
        let mut prefix = vec![0];
        for x in d {
            prefix.push(prefix.last().unwrap() + x);
        }
        let weight = if alpha.d_inf() < 0 {
            d.to_vec()
        } else {
            e_sequence(alpha).expect("d_inf >= 0").e
        };
        ChainData {
            qualifying: (0..d.len()).filter(|i| weight[*i] > 0).collect(),
            weight,
            prefix,
            free: alpha.d_inf() >= 0,
        }
    }

    /// Gap condition between consecutive chain members `i < j`.
    fn adjacent(&self, i: usize, j: usize) -> bool {
        if self.free {
            self.prefix[j + 1] - self.prefix[i + 1] == self.weight[j]
        } else {
            self.prefix[j] - self.prefix[i + 1] == 0
        }
    }

    fn blocked(&self, i: usize, j: usize, rule: ChainRule) -> bool {
        self.qualifying
            .iter()
            .filter(|h| i < **h && **h < j)
            .any(|&h| match rule {
                ChainRule::Both => self.adjacent(i, h) || self.adjacent(h, j),
                ChainRule::LeftOnly => self.adjacent(i, h),
                ChainRule::RightOnly => self.adjacent(h, j),
            })
    }

    fn chains(&self, rule: ChainRule) -> Vec<Vec<usize>> {
        let q = &self.qualifying;
        let mut next: Vec<Option<usize>> = vec![None; q.len()];
        let mut taken = vec![false; q.len()];
        for a in 0..q.len() {
            let found = (a + 1..q.len())
                .find(|&b| !taken[b] && self.adjacent(q[a], q[b]) && !self.blocked(q[a], q[b], rule));
            if let Some(b) = found {
                next[a] = Some(b);
                taken[b] = true;
            }
        }
        let mut out = Vec::new();
        for start in (0..q.len()).filter(|a| !taken[*a]) {
            let mut chain = vec![q[start]];
            let mut cur = start;
            while let Some(nx) = next[cur] {
                chain.push(q[nx]);
                cur = nx;
            }
            out.push(chain);
        }
        out
    }
}

/// Index chains indexing the crystalline summands of `TF_{α-1}`.
pub fn chains_crystalline(alpha: &VirtualRep) -> Vec<Vec<usize>> {
    ChainData::new(alpha).chains(ChainRule::Both)
}

pub fn chains_with_rule(alpha: &VirtualRep, rule: ChainRule) -> Vec<Vec<usize>> {
    ChainData::new(alpha).chains(rule)
}

/// Chain weight `o`: the sum of `d_{i_j}` (or `e_{i_j}` when `d_∞ ≥ 0`).
pub fn chain_weight(alpha: &VirtualRep, chain: &[usize]) -> i64 {
    let data = ChainData::new(alpha);
    chain.iter().map(|i| data.weight[*i]).sum()
}

fn phi_product(kind: PrismKind, factors: impl Iterator<Item = (usize, i64)>) -> Result<PrismScalar> {
    let mut o = PrismScalar::one(kind);
    for (i, e) in factors {
        if e > 0 {
            o = o.mul(&PrismScalar::phi_or_p(kind, i as u32, e as u64))?;
        }
    }
    Ok(o)
}

/// Generator of the free group `TF_α` when `d_∞ ≥ 0`.
pub fn even_generator(alpha: &VirtualRep, kind: PrismKind) -> Result<GoldMonomial> {
    let mut g = GoldMonomial::one();
    match kind {
        PrismKind::Transversal => {
            for (i, &d) in alpha.dims().iter().enumerate() {
                g = if d > 0 { g.times_u(i as u32, d) } else { g.times_a(i as u32, -d) };
            }
        }
        PrismKind::Crystalline => {
            let es = e_sequence(alpha)?;
            for (i, &d) in alpha.dims().iter().enumerate() {
                g = g.times_u(i as u32, d - es.e[i]).times_a(i as u32, -es.e[i]);
            }
        }
    }
    Ok(g.times_ulam(alpha.len() as i32 - 1, alpha.d_inf()))
}

pub fn closed_tf(alpha: &VirtualRep, kind: PrismKind) -> Result<GradedGroup> {
    let l = alpha.len();
    let d = alpha.dims();
    let mut summands = Vec::new();
    match alpha.shift() {
        Shift::Zero => {
            if alpha.d_inf() >= 0 {
                summands.push(GroupSummand {
                    ideal: CyclicIdeal::zero(),
                    generator: even_generator(alpha, kind)?,
                    origin: 0,
                });
            }
        }
        Shift::MinusOne => match kind {
            PrismKind::Transversal => {
                for (s, r) in subsequences_transversal(alpha) {
                    let Some(top) = (s..=r).rev().find(|i| d[*i] > 0) else {
                        continue;
                    };
                    let o = phi_product(kind, (s..=r).map(|i| (i, d[i])))?;
                    let ideal = if alpha.d_inf() < 0 {
                        CyclicIdeal::principal(o)
                    } else {
                        let f = phi_product(kind, (r + 1..l).map(|i| (i, -d[i])))?;
                        CyclicIdeal::pair(o, f)
                    };
                    summands.push(GroupSummand {
                        ideal,
                        generator: theta(alpha, r as i64)?.with_suspension(Shift::MinusOne),
                        origin: l - top,
                    });
                }
            }
            PrismKind::Crystalline => {
                for chain in chains_crystalline(alpha) {
                    let last = *chain.last().expect("chains are nonempty");
                    summands.push(GroupSummand {
                        ideal: CyclicIdeal::principal(PrismScalar::p(chain_weight(alpha, &chain) as u64)),
                        generator: theta(alpha, last as i64)?.with_suspension(Shift::MinusOne),
                        origin: l - last,
                    });
                }
            }
        },
    }
    GradedGroup::new(alpha.clone(), kind, summands)
}
