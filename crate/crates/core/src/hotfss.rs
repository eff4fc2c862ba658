//! The homotopy-orbits-to-TF spectral sequence.
//!
//! For `α = (d_0,…,d_{L-1};d_∞)` the `E¹` page has torsion rows
//! `A/φ^r(ξ)^{d_r}⟨Σ^{-1}ϑ_r⟩` at filtration `L - r` (when `d_r > 0`) in
//! column `-1`, and a free row `A⟨ϑ_{L-1}⟩` at filtration 0 (when `d_∞ ≥ 0`).
//! Every differential leaves the free row, so page `k` has at most one: into
//! filtration `k`. Extensions on `E^∞` are found by matching names.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gold::{divide_names, theta, GoldMonomial};
use crate::group::{GradedGroup, GroupSummand};
use crate::prism::{kernel_cokernel, CyclicIdeal, PrismKind, PrismScalar};
use crate::rep::{Shift, VirtualRep};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub ideal: CyclicIdeal,
    pub generator: GoldMonomial,
    pub filtration: usize,
}

/// A chain of `E^∞` torsion rows glued into one cyclic summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionLink {
    /// Filtrations of the glued rows, highest first.
    pub rows: Vec<usize>,
    pub ideal: CyclicIdeal,
    pub generator: GoldMonomial,
}

impl ExtensionLink {
    /// Consecutive `(higher, lower)` filtration pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    pub page: usize,
    pub is_final: bool,
    pub alpha: VirtualRep,
    pub kind: PrismKind,
    /// Column `-1`, keyed by filtration.
    pub torsion: BTreeMap<usize, Summand>,
    /// Column `0`, filtration 0.
    pub free: Option<Summand>,
    /// Filled on the final page only.
    pub extension_links: Vec<ExtensionLink>,
}

pub fn e1_page(alpha: &VirtualRep, kind: PrismKind) -> Result<SpectralPage> {
    let l = alpha.len();
    let mut torsion = BTreeMap::new();
    for (r, &d) in alpha.dims().iter().enumerate() {
        if d > 0 {
            let filtration = l - r;
            torsion.insert(
                filtration,
                Summand {
                    ideal: CyclicIdeal::principal(PrismScalar::phi_or_p(kind, r as u32, d as u64)),
                    generator: theta(alpha, r as i64)?.with_suspension(Shift::MinusOne),
                    filtration,
                },
            );
        }
    }
    let free = if alpha.d_inf() >= 0 {
        Some(Summand {
            ideal: CyclicIdeal::zero(),
            generator: theta(alpha, l as i64 - 1)?,
            filtration: 0,
        })
    } else {
        None
    };
    Ok(SpectralPage {
        page: 1,
        is_final: false,
        alpha: alpha.clone(),
        kind,
        torsion,
        free,
        extension_links: Vec::new(),
    })
}

/// Multiplies the surviving free generator by the kernel of `d^{L-r}`,
/// realized as the gold pair `(a_r u_r)^k`.
pub fn rename_kernel_generator(g: &GoldMonomial, r: u32, kernel: &PrismScalar) -> GoldMonomial {
    let k = kernel.exponent_at(r) as i64;
    g.clone().times_a(r, k).times_u(r, k)
}

/// Runs every differential and returns `E¹, E², …, E^{L+1} = E^∞`.
pub fn run_pages(alpha: &VirtualRep, kind: PrismKind) -> Result<Vec<SpectralPage>> {
    let l = alpha.len();
    let mut pages = vec![e1_page(alpha, kind)?];
    for k in 1..=l {
        let r = l - k;
        let mut next = pages.last().expect("nonempty").clone();
        next.page = k + 1;
        if let (Some(free), Some(row)) = (next.free.as_mut(), next.torsion.get(&k)) {
            let target = theta(alpha, r as i64)?;
            let map = divide_names(&free.generator, &target, kind).map_err(|e| {
                Error::Internal(format!("d^{k} from {} to row {k}: {e}; page {:?}", free.generator, pages.last()))
            })?;
            let (kernel, quotient) = kernel_cokernel(&map, r as u32, alpha.d(r) as u64, kind)?;
            let new_gen = rename_kernel_generator(&free.generator, r as u32, &kernel);
            free.generator = new_gen;
            if quotient.is_unit() {
                next.torsion.remove(&k);
            } else {
                let row = row.clone();
                next.torsion.insert(k, Summand { ideal: quotient, ..row });
            }
        }
        pages.push(next);
    }
    let last = pages.last_mut().expect("nonempty");
    last.is_final = true;
    last.extension_links = glue(last)?
        .into_iter()
        .filter(|c| c.rows.len() > 1)
        .collect();
    Ok(pages)
}

fn leading(ideal: &CyclicIdeal) -> &PrismScalar {
    &ideal.gens()[0]
}

/// Whether the upper row could sit on top of the lower one in a single
/// cyclic summand: `upper = o_lower · lower` as names.
fn names_match(upper: &Summand, lower: &Summand, kind: PrismKind) -> bool {
    let Ok(ratio) = divide_names(&upper.generator, &lower.generator, kind) else {
        return false;
    };
    ratio == *leading(&lower.ideal) && upper.ideal.gens().get(1) == lower.ideal.gens().get(1)
}

/// Groups the final page's torsion rows into chains (singletons included).
fn glue(page: &SpectralPage) -> Result<Vec<ExtensionLink>> {
    // highest filtration (smallest r) first
    let rows: Vec<&Summand> = page.torsion.values().rev().collect();
    let n = rows.len();
    let m: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i < j && names_match(rows[i], rows[j], page.kind)).collect())
        .collect();
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut has_prev = vec![false; n];
    for s in 0..n {
        for r in s + 1..n {
            if m[s][r] && !(s + 1..r).any(|h| m[s][h] || m[h][r]) {
                if next[s].is_some() || has_prev[r] {
                    return Err(Error::Internal(format!("ambiguous gluing on {:?}", page.alpha)));
                }
                next[s] = Some(r);
                has_prev[r] = true;
            }
        }
    }
    let mut out = Vec::new();
    for start in (0..n).filter(|i| !has_prev[*i]) {
        let mut chain = vec![start];
        while let Some(nx) = next[*chain.last().expect("nonempty")] {
            chain.push(nx);
        }
        let last = rows[*chain.last().expect("nonempty")];
        let ideal = if chain.len() == 1 {
            last.ideal.clone()
        } else {
            let mut o = PrismScalar::one(page.kind);
            for i in &chain {
                o = o.mul(leading(&rows[*i].ideal))?;
            }
            match last.ideal.gens().get(1) {
                Some(f) => CyclicIdeal::pair(o, f.clone()),
                None => CyclicIdeal::principal(o),
            }
        };
        out.push(ExtensionLink {
            rows: chain.iter().map(|i| rows[*i].filtration).collect(),
            ideal,
            generator: last.generator.clone(),
        });
    }
    Ok(out)
}

/// Reads the group in the grading of `alpha` (including its shift) off `E^∞`.
pub fn resolve_extensions(einf: &SpectralPage, alpha: &VirtualRep, kind: PrismKind) -> Result<GradedGroup> {
    let summands = match alpha.shift() {
        Shift::Zero => einf
            .free
            .iter()
            .map(|s| GroupSummand {
                ideal: s.ideal.clone(),
                generator: s.generator.clone(),
                origin: 0,
            })
            .collect(),
        Shift::MinusOne => glue(einf)?
            .into_iter()
            .map(|c| GroupSummand {
                origin: *c.rows.last().expect("nonempty"),
                ideal: c.ideal,
                generator: c.generator,
            })
            .collect(),
    };
    GradedGroup::new(alpha.clone(), kind, summands)
}

/// `TF` in the grading of `alpha` via the spectral sequence.
pub fn tf(alpha: &VirtualRep, kind: PrismKind) -> Result<GradedGroup> {
    let pages = run_pages(alpha, kind)?;
    resolve_extensions(pages.last().expect("nonempty"), alpha, kind)
}
