//! Randomized agreement between the spectral sequence and the closed form,
//! and an exact search for homomorphisms between finite cyclic `p`-groups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closedform::{chains_with_rule, closed_tf, ChainRule};
use crate::error::{Error, Result};
use crate::group::GradedGroup;
use crate::hotfss;
use crate::prism::PrismKind;
use crate::rep::{Shift, VirtualRep};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub samples: usize,
    pub seed: u64,
    pub max_len: usize,
    pub max_coeff: i64,
    pub max_dinf: i64,
    pub kinds: Vec<PrismKind>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 1000,
            seed: 0,
            max_len: 8,
            max_coeff: 5,
            max_dinf: 3,
            kinds: vec![PrismKind::Transversal, PrismKind::Crystalline],
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &'static str, v: i64| Error::Range {
            what,
            value: v,
            lo: 1,
            hi: i64::MAX,
        };
        if self.samples == 0 {
            return Err(bad("samples", 0));
        }
        if self.max_len == 0 {
            return Err(bad("max_len", 0));
        }
        if self.max_coeff < 1 {
            return Err(bad("max_coeff", self.max_coeff));
        }
        if self.max_dinf < 1 {
            return Err(bad("max_dinf", self.max_dinf));
        }
        if self.kinds.is_empty() {
            return Err(Error::Contract("no prism kinds selected".into()));
        }
        Ok(())
    }
}

/// The representation drawn for sample `index`; every sample has its own
/// stream, so any single failure can be replayed.
pub fn sample_rep(cfg: &CheckConfig, index: usize) -> VirtualRep {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let len = rng.gen_range(1..=cfg.max_len);
    let dims = (0..len).map(|_| rng.gen_range(-cfg.max_coeff..=cfg.max_coeff)).collect();
    let d_inf = rng.gen_range(-cfg.max_dinf..=cfg.max_dinf);
    VirtualRep::new(dims, d_inf).expect("length is at least one")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub sample: usize,
    pub rep: String,
    pub shift: i64,
    pub kind: PrismKind,
    pub check: &'static str,
    pub detail: String,
}

/// A representation where the two halves of the "no intermediate index"
/// condition would pick different chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainFinding {
    pub sample: usize,
    pub rep: String,
    pub rule: ChainRule,
    pub both: Vec<Vec<usize>>,
    pub variant: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub samples: usize,
    /// Engine against closed form, one per (sample, kind, shift).
    pub agreement: Tally,
    /// One per emitted summand.
    pub degree: Tally,
    pub padding: Tally,
    /// Crystalline `TF_{α-1}` with `d_∞ < 0`.
    pub length: Tally,
    pub mismatches: Vec<Mismatch>,
    pub findings: Vec<ChainFinding>,
}

impl CheckReport {
    pub fn failures(&self) -> u64 {
        self.agreement.failed + self.degree.failed + self.padding.failed + self.length.failed
    }
}

fn degree_ok(g: &GradedGroup) -> (u64, u64) {
    let bad = g
        .summands()
        .iter()
        .filter(|s| !s.generator.degree().same_grading(g.grading()))
        .count() as u64;
    (g.summands().len() as u64, bad)
}

fn padded_names(g: &GradedGroup, top: i32) -> Vec<(crate::CyclicIdeal, crate::GoldMonomial)> {
    let mut v: Vec<_> = g
        .summands()
        .iter()
        .map(|s| (s.ideal.clone(), s.generator.canonicalize_padding(top)))
        .collect();
    v.sort();
    v
}

pub fn crosscheck(cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut report = CheckReport {
        seed: cfg.seed,
        samples: cfg.samples,
        agreement: Tally::default(),
        degree: Tally::default(),
        padding: Tally::default(),
        length: Tally::default(),
        mismatches: Vec::new(),
        findings: Vec::new(),
    };
    for index in 0..cfg.samples {
        let base = sample_rep(cfg, index);
        for &kind in &cfg.kinds {
            for shift in [Shift::Zero, Shift::MinusOne] {
                let alpha = base.clone().with_shift(shift);
                let mut fail = |check: &'static str, detail: String| {
                    report.mismatches.push(Mismatch {
                        sample: index,
                        rep: base.to_string(),
                        shift: shift.as_i64(),
                        kind,
                        check,
                        detail,
                    })
                };
                let (engine, closed) = match (hotfss::tf(&alpha, kind), closed_tf(&alpha, kind)) {
                    (Ok(e), Ok(c)) => (e, c),
                    (e, c) => {
                        report.agreement.record(false);
                        fail("agreement", format!("engine {:?}, closed form {:?}", e.err(), c.err()));
                        continue;
                    }
                };
                let same = engine.multiset() == closed.multiset();
                report.agreement.record(same);
                if !same {
                    fail("agreement", format!("engine {engine}; closed form {closed}"));
                }
                for g in [&engine, &closed] {
                    let (n, bad) = degree_ok(g);
                    report.degree.checked += n;
                    report.degree.failed += bad;
                    if bad > 0 {
                        fail("degree", g.to_string());
                    }
                }
                let padded = alpha.pad(alpha.len() + 1)?.with_shift(shift);
                match hotfss::tf(&padded, kind) {
                    Ok(p) => {
                        let ok = padded_names(&engine, alpha.len() as i32 - 1) == p.multiset();
                        report.padding.record(ok);
                        if !ok {
                            fail("padding", format!("{engine} vs {p}"));
                        }
                    }
                    Err(e) => {
                        report.padding.record(false);
                        fail("padding", e.to_string());
                    }
                }
                if kind == PrismKind::Crystalline && shift == Shift::MinusOne && base.d_inf() < 0 {
                    let want: i64 = base.dims().iter().filter(|d| **d > 0).sum();
                    let ok = engine.p_length() == Some(want as u64);
                    report.length.record(ok);
                    if !ok {
                        fail("length", format!("{engine} has length {:?}, expected {want}", engine.p_length()));
                    }
                }
            }
        }
        if cfg.kinds.contains(&PrismKind::Crystalline) {
            let both = chains_with_rule(&base, ChainRule::Both);
            for rule in [ChainRule::LeftOnly, ChainRule::RightOnly] {
                let variant = chains_with_rule(&base, rule);
                if variant != both {
                    report.findings.push(ChainFinding {
                        sample: index,
                        rep: base.to_string(),
                        rule,
                        both: both.clone(),
                        variant,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Find `A: ⊕Z/p^{a_j} → ⊕Z/p^{b_i}` and `U` back with `AU = p^{c_i}` on the
/// target summands and `UA = p^{c'_j}` on the source summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionProblem {
    pub p: u64,
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    /// Diagonal of `AU`, one exponent per target summand.
    pub composite_au: Vec<u32>,
    /// Diagonal of `UA`, one exponent per source summand.
    pub composite_ua: Vec<u32>,
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
}

impl ObstructionProblem {
    /// Every composite is multiplication by `p^c`.
    pub fn uniform(p: u64, source: Vec<u32>, target: Vec<u32>, c: u32) -> Self {
        ObstructionProblem {
            p,
            composite_au: vec![c; target.len()],
            composite_ua: vec![c; source.len()],
            source,
            target,
            budget: 50_000_000,
        }
    }

    /// Number of candidate pairs `(A, U)`, as a decimal string.
    pub fn space_size(&self) -> String {
        let mut digits = 0u64;
        for a in &self.source {
            for b in &self.target {
                digits += 2 * (*a).min(*b) as u64;
            }
        }
        let mut n: u128 = 1;
        for _ in 0..digits {
            match n.checked_mul(self.p as u128) {
                Some(m) => n = m,
                None => return format!("{}^{}", self.p, digits),
            }
        }
        n.to_string()
    }
}

/// `A[i][j]` and `U[j][i]` as generator coefficients: the component
/// `Z/p^a → Z/p^b` sends `1` to `p^{max(b-a,0)} t` with `0 ≤ t < p^{min(a,b)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub a: Vec<Vec<u64>>,
    pub u: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Obstruction {
    Infeasible { nodes: u64 },
    Witness { witness: Witness, nodes: u64 },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

#[derive(Clone, Copy)]
struct Var {
    shift: u32,
    digits: u32,
}

/// One entry of a composite: `Σ_k y_{left k} y_{right k} ≡ δ p^c (mod p^m)`.
struct Constraint {
    modulus: u32,
    target: u128,
    terms: Vec<(usize, usize)>,
}

struct Search<'a> {
    prob: &'a ObstructionProblem,
    vars: Vec<Var>,
    n_a: usize,
    constraints: Vec<Constraint>,
    levels: u32,
    nodes: u64,
}

impl Search<'_> {
    fn value(&self, t: &[u128], v: usize) -> u128 {
        pow(self.prob.p, self.vars[v].shift) * t[v]
    }

    /// Residual digit `((δp^c - Σ y y) / p^ℓ) mod p` of a constraint.
    fn residual(&self, t: &[u128], c: &Constraint, level: u32) -> Option<u64> {
        let m = pow(self.prob.p, level + 1);
        let mut s: u128 = 0;
        for (x, y) in &c.terms {
            s = (s + (self.value(t, *x) % m) * (self.value(t, *y) % m)) % m;
        }
        let r = (c.target % m + m - s) % m;
        let low = pow(self.prob.p, level);
        (r % low == 0).then(|| (r / low) as u64)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.prob.budget {
            return Err(Error::SearchTooLarge {
                estimate: self.prob.space_size(),
                ceiling: self.prob.budget,
            });
        }
        Ok(())
    }

    /// The linear system in the level-`ℓ` digits of `unknowns`.
    fn system(&self, t: &[u128], level: u32, unknowns: &[usize]) -> Option<Vec<Vec<u64>>> {
        let p = self.prob.p;
        let col: std::collections::HashMap<usize, usize> =
            unknowns.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut rows = Vec::new();
        for c in &self.constraints {
            if c.modulus <= level {
                continue;
            }
            let rhs = self.residual(t, c, level)?;
            let mut row = vec![0u64; unknowns.len() + 1];
            row[unknowns.len()] = rhs;
            for (x, y) in &c.terms {
                if self.vars[*x].shift + self.vars[*y].shift > 0 {
                    continue;
                }
                if let Some(k) = col.get(x) {
                    row[*k] = (row[*k] + (t[*y] % p as u128) as u64) % p;
                }
                if let Some(k) = col.get(y) {
                    row[*k] = (row[*k] + (t[*x] % p as u128) as u64) % p;
                }
            }
            rows.push(row);
        }
        Some(rows)
    }

    fn descend(&mut self, t: &mut Vec<u128>, level: u32) -> Result<bool> {
        self.tick()?;
        if level == self.levels {
            return Ok(true);
        }
        let live = |vars: &[Var], range: std::ops::Range<usize>| -> Vec<usize> {
            range.filter(|v| vars[*v].digits > level).collect()
        };
        if level == 0 {
            // the level-0 equations are bilinear: fix the A digits, solve for U
            let a_vars = live(&self.vars, 0..self.n_a);
            let u_vars = live(&self.vars, self.n_a..self.vars.len());
            let p = self.prob.p;
            let total = (p as u128).checked_pow(a_vars.len() as u32).ok_or(Error::SearchTooLarge {
                estimate: self.prob.space_size(),
                ceiling: self.prob.budget,
            })?;
            for code in 0..total {
                let mut c = code;
                for v in &a_vars {
                    t[*v] = c % p as u128;
                    c /= p as u128;
                }
                if self.branch(t, level, &u_vars)? {
                    return Ok(true);
                }
            }
            for v in &a_vars {
                t[*v] = 0;
            }
            Ok(false)
        } else {
            let unknowns = live(&self.vars, 0..self.vars.len());
            self.branch(t, level, &unknowns)
        }
    }

    fn branch(&mut self, t: &mut Vec<u128>, level: u32, unknowns: &[usize]) -> Result<bool> {
        let Some(rows) = self.system(t, level, unknowns) else {
            return Ok(false);
        };
        let Some((base, kernel)) = solve_mod_p(rows, unknowns.len(), self.prob.p) else {
            return Ok(false);
        };
        let p = self.prob.p;
        let scale = pow(p, level);
        let count = (p as u128).checked_pow(kernel.len() as u32).ok_or(Error::SearchTooLarge {
            estimate: self.prob.space_size(),
            ceiling: self.prob.budget,
        })?;
        for code in 0..count {
            let mut x = base.clone();
            let mut c = code;
            for k in &kernel {
                let coef = (c % p as u128) as u64;
                c /= p as u128;
                for (xi, ki) in x.iter_mut().zip(k) {
                    *xi = (*xi + coef * ki) % p;
                }
            }
            for (v, d) in unknowns.iter().zip(&x) {
                t[*v] += scale * *d as u128;
            }
            if self.descend(t, level + 1)? {
                return Ok(true);
            }
            for (v, d) in unknowns.iter().zip(&x) {
                t[*v] -= scale * *d as u128;
            }
        }
        Ok(false)
    }
}

/// Solves an augmented system over `F_p`; returns a particular solution and
/// a kernel basis, or `None` when inconsistent.
fn solve_mod_p(mut rows: Vec<Vec<u64>>, n: usize, p: u64) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let inv = |a: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|k| rows[*k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let f = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * f % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in 0..=n {
                    rows[k][j] = (rows[k][j] + p * p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut base = vec![0; n];
    for (k, c) in pivots.iter().enumerate() {
        base[*c] = rows[k][n];
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (k, c) in pivots.iter().enumerate() {
                v[*c] = (p - rows[k][f]) % p;
            }
            v
        })
        .collect();
    Some((base, kernel))
}

fn validate(prob: &ObstructionProblem) -> Result<()> {
    if !is_prime(prob.p) {
        return Err(Error::Contract(format!("{} is not prime", prob.p)));
    }
    if prob.source.is_empty() || prob.target.is_empty() {
        return Err(Error::Contract("exponent lists must be nonempty".into()));
    }
    if prob.composite_au.len() != prob.target.len() || prob.composite_ua.len() != prob.source.len() {
        return Err(Error::Contract("one composite exponent per summand".into()));
    }
    let top = prob.source.iter().chain(&prob.target).max().copied().unwrap_or(0);
    if (prob.p as u128).checked_pow(2 * top + 2).is_none() {
        return Err(Error::Contract("exponents too large for exact arithmetic".into()));
    }
    Ok(())
}

/// Decides the problem exactly by lifting solutions one `p`-adic digit at
/// a time. Deterministic: the first witness in a fixed order is returned.
pub fn obstruction_search(prob: &ObstructionProblem) -> Result<Obstruction> {
    validate(prob)?;
    let (ns, nt) = (prob.source.len(), prob.target.len());
    let mut vars = Vec::new();
    // A[i][j] at i*ns + j, then U[j][i] at n_a + j*nt + i
    for &b in &prob.target {
        for &a in &prob.source {
            vars.push(Var {
                shift: b.saturating_sub(a),
                digits: a.min(b),
            });
        }
    }
    let n_a = vars.len();
    for &a in &prob.source {
        for &b in &prob.target {
            vars.push(Var {
                shift: a.saturating_sub(b),
                digits: a.min(b),
            });
        }
    }
    let av = |i: usize, j: usize| i * ns + j;
    let uv = |j: usize, i: usize| n_a + j * nt + i;
    let mut constraints = Vec::new();
    for i in 0..nt {
        for k in 0..nt {
            let modulus = prob.target[i];
            constraints.push(Constraint {
                modulus,
                target: if i == k { pow(prob.p, prob.composite_au[i]) % pow(prob.p, modulus) } else { 0 },
                terms: (0..ns).map(|j| (av(i, j), uv(j, k))).collect(),
            });
        }
    }
    for j in 0..ns {
        for k in 0..ns {
            let modulus = prob.source[j];
            constraints.push(Constraint {
                modulus,
                target: if j == k { pow(prob.p, prob.composite_ua[j]) % pow(prob.p, modulus) } else { 0 },
                terms: (0..nt).map(|i| (uv(j, i), av(i, k))).collect(),
            });
        }
    }
    let levels = constraints.iter().map(|c| c.modulus).max().unwrap_or(0);
    let mut search = Search {
        prob,
        vars,
        n_a,
        constraints,
        levels,
        nodes: 0,
    };
    let mut t = vec![0u128; search.vars.len()];
    if search.descend(&mut t, 0)? {
        let a = (0..nt).map(|i| (0..ns).map(|j| t[av(i, j)] as u64).collect()).collect();
        let u = (0..ns).map(|j| (0..nt).map(|i| t[uv(j, i)] as u64).collect()).collect();
        Ok(Obstruction::Witness {
            witness: Witness { a, u },
            nodes: search.nodes,
        })
    } else {
        Ok(Obstruction::Infeasible { nodes: search.nodes })
    }
}

/// Checks a candidate directly by composing the homomorphisms.
pub fn verify_witness(prob: &ObstructionProblem, w: &Witness) -> bool {
    let p = prob.p;
    let (ns, nt) = (prob.source.len(), prob.target.len());
    let ya = |i: usize, j: usize| pow(p, prob.target[i].saturating_sub(prob.source[j])) * w.a[i][j] as u128;
    let yu = |j: usize, i: usize| pow(p, prob.source[j].saturating_sub(prob.target[i])) * w.u[j][i] as u128;
    let in_range = (0..nt).all(|i| {
        (0..ns).all(|j| {
            let top = pow(p, prob.source[j].min(prob.target[i]));
            (w.a[i][j] as u128) < top && (w.u[j][i] as u128) < top
        })
    });
    let au = (0..nt).all(|i| {
        (0..nt).all(|k| {
            let m = pow(p, prob.target[i]);
            let s = (0..ns).map(|j| ya(i, j) * yu(j, k)).sum::<u128>() % m;
            s == if i == k { pow(p, prob.composite_au[i]) % m } else { 0 }
        })
    });
    let ua = (0..ns).all(|j| {
        (0..ns).all(|k| {
            let m = pow(p, prob.source[j]);
            let s = (0..nt).map(|i| yu(j, i) * ya(i, k)).sum::<u128>() % m;
            s == if j == k { pow(p, prob.composite_ua[j]) % m } else { 0 }
        })
    });
    in_range && au && ua
}
