//! Gold-element monomials `∏ a_i^{·} u_i^{·} u_{λ_j}^{·}` naming classes.
//!
//! `a_i` lowers `d_i` by one, `u_i` raises it, and `u_{λ_j}` raises every
//! `d_r` with `r > j` together with `d_∞`. The only relation applied here is
//! the q-gold relation `a_i u_i = φ^i(ξ)`, and only when asked.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::prism::{PrismKind, PrismScalar};
use crate::rep::{Shift, VirtualRep};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoldMonomial {
    a: BTreeMap<u32, i64>,
    u: BTreeMap<u32, i64>,
    ulam: BTreeMap<i32, i64>,
    suspension: Shift,
}

fn bump<K: Ord + Copy>(m: &mut BTreeMap<K, i64>, k: K, e: i64) {
    if e == 0 {
        return;
    }
    let v = m.entry(k).or_insert(0);
    *v += e;
    if *v == 0 {
        m.remove(&k);
    }
}

fn get<K: Ord>(m: &BTreeMap<K, i64>, k: &K) -> i64 {
    m.get(k).copied().unwrap_or(0)
}

impl GoldMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn a(i: u32, e: i64) -> Self {
        Self::one().times_a(i, e)
    }

    pub fn u(i: u32, e: i64) -> Self {
        Self::one().times_u(i, e)
    }

    pub fn ulam(j: i32, e: i64) -> Self {
        Self::one().times_ulam(j, e)
    }

    pub fn times_a(mut self, i: u32, e: i64) -> Self {
        bump(&mut self.a, i, e);
        self
    }

    pub fn times_u(mut self, i: u32, e: i64) -> Self {
        bump(&mut self.u, i, e);
        self
    }

    pub fn times_ulam(mut self, j: i32, e: i64) -> Self {
        assert!(j >= -1, "u_lambda index below -1");
        bump(&mut self.ulam, j, e);
        self
    }

    pub fn with_suspension(mut self, s: Shift) -> Self {
        self.suspension = s;
        self
    }

    pub fn a_exp(&self, i: u32) -> i64 {
        get(&self.a, &i)
    }

    pub fn u_exp(&self, i: u32) -> i64 {
        get(&self.u, &i)
    }

    pub fn ulam_exp(&self, j: i32) -> i64 {
        get(&self.ulam, &j)
    }

    pub fn a_exps(&self) -> &BTreeMap<u32, i64> {
        &self.a
    }

    pub fn u_exps(&self) -> &BTreeMap<u32, i64> {
        &self.u
    }

    pub fn ulam_exps(&self) -> &BTreeMap<i32, i64> {
        &self.ulam
    }

    pub fn suspension(&self) -> Shift {
        self.suspension
    }

    pub fn is_one(&self) -> bool {
        self.a.is_empty() && self.u.is_empty() && self.ulam.is_empty()
    }

    /// Free commutative product of names.
    pub fn mul(&self, other: &GoldMonomial) -> Result<GoldMonomial> {
        let mut out = self.clone();
        for (i, e) in &other.a {
            bump(&mut out.a, *i, *e);
        }
        for (i, e) in &other.u {
            bump(&mut out.u, *i, *e);
        }
        for (j, e) in &other.ulam {
            bump(&mut out.ulam, *j, *e);
        }
        out.suspension = self.suspension.add(other.suspension)?;
        Ok(out)
    }

    /// Exponentwise inverse, keeping the suspension.
    pub fn inverse_name(&self) -> GoldMonomial {
        GoldMonomial {
            a: self.a.iter().map(|(k, v)| (*k, -v)).collect(),
            u: self.u.iter().map(|(k, v)| (*k, -v)).collect(),
            ulam: self.ulam.iter().map(|(k, v)| (*k, -v)).collect(),
            suspension: self.suspension,
        }
    }

    fn max_index(&self) -> Option<i64> {
        let a = self.a.keys().next_back().map(|i| *i as i64);
        let u = self.u.keys().next_back().map(|i| *i as i64);
        let l = self.ulam.keys().next_back().map(|j| *j as i64);
        [a, u, l].into_iter().flatten().max()
    }

    /// The grading this name lives in.
    pub fn degree(&self) -> VirtualRep {
        let len = self.max_index().map_or(1, |m| (m + 1).max(1) as usize);
        let mut dims = vec![0i64; len];
        let mut d_inf = 0;
        for (i, e) in &self.a {
            dims[*i as usize] -= e;
        }
        for (i, e) in &self.u {
            dims[*i as usize] += e;
        }
        for (j, e) in &self.ulam {
            for (r, d) in dims.iter_mut().enumerate() {
                if r as i64 > *j as i64 {
                    *d += e;
                }
            }
            d_inf += e;
        }
        VirtualRep::new(dims, d_inf)
            .expect("length is at least one")
            .with_shift(self.suspension)
    }

    /// Extracts every `a_i u_i` pair into `φ^i(ξ)`; no cross-index rewriting.
    pub fn normalize(&self) -> (PrismScalar, GoldMonomial) {
        let mut out = self.clone();
        let mut scalar = BTreeMap::new();
        for (i, ea) in &self.a {
            let eu = get(&self.u, i);
            let k = (*ea).min(eu);
            if k > 0 {
                scalar.insert(*i, k as u64);
                bump(&mut out.a, *i, -k);
                bump(&mut out.u, *i, -k);
            }
        }
        (PrismScalar::Phi(scalar), out)
    }

    /// Rewrites the top `u_{λ_n}` as `u_{n+1} u_{λ_{n+1}}`, matching a
    /// one-step padding of the encoding.
    pub fn canonicalize_padding(&self, n: i32) -> GoldMonomial {
        let k = get(&self.ulam, &n);
        if k == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        bump(&mut out.ulam, n, -k);
        bump(&mut out.u, (n + 1) as u32, k);
        bump(&mut out.ulam, n + 1, k);
        out
    }
}

/// `ϑ_r^α = a_0^{-d_0} ⋯ a_r^{-d_r} u_{r+1}^{d_{r+1}} ⋯ u_{L-1}^{d_{L-1}} u_{λ_{L-1}}^{d_∞}`.
///
/// `r = -1` gives the all-`u` name. The shift of `alpha` is ignored.
pub fn theta(alpha: &VirtualRep, r: i64) -> Result<GoldMonomial> {
    let l = alpha.len() as i64;
    if r < -1 || r > l - 1 {
        return Err(Error::Range {
            what: "r",
            value: r,
            lo: -1,
            hi: l - 1,
        });
    }
    let mut m = GoldMonomial::one();
    for (i, d) in alpha.dims().iter().enumerate() {
        if (i as i64) <= r {
            m = m.times_a(i as u32, -d);
        } else {
            m = m.times_u(i as u32, *d);
        }
    }
    Ok(m.times_ulam((l - 1) as i32, alpha.d_inf()))
}

/// Expresses `num / den` as a scalar, if it is a product of gold pairs.
///
/// The ratio must be `∏ (a_i u_i)^{k_i}`. Transversally each `k_i ≥ 0` and
/// the answer is `∏ φ^i(ξ)^{k_i}`; crystalline names also satisfy
/// `a_i^{-1} a_j = u_i u_j^{-1}`, so only `Σ k_i ≥ 0` is needed and the
/// answer is `p^{Σ k_i}`.
pub fn divide_names(num: &GoldMonomial, den: &GoldMonomial, kind: PrismKind) -> Result<PrismScalar> {
    if num.suspension != den.suspension {
        return Err(Error::Contract("divide_names: suspensions differ".into()));
    }
    let incomparable = || Error::NamesIncomparable {
        num: num.to_string(),
        den: den.to_string(),
    };
    let ratio = num.mul(&den.inverse_name().with_suspension(Shift::Zero))?;
    if !ratio.ulam.is_empty() {
        return Err(incomparable());
    }
    let mut pairs = BTreeMap::new();
    for i in ratio.a.keys().chain(ratio.u.keys()) {
        let (ea, eu) = (ratio.a_exp(*i), ratio.u_exp(*i));
        if ea != eu {
            return Err(incomparable());
        }
        pairs.insert(*i, ea);
    }
    match kind {
        PrismKind::Transversal => {
            if pairs.values().any(|k| *k < 0) {
                return Err(incomparable());
            }
            Ok(PrismScalar::Phi(pairs.into_iter().map(|(i, k)| (i, k as u64)).collect()))
        }
        PrismKind::Crystalline => {
            let total: i64 = pairs.values().sum();
            if total < 0 {
                return Err(incomparable());
            }
            Ok(PrismScalar::P(total as u64))
        }
    }
}

impl fmt::Display for GoldMonomial {
    /// `S^-1 a_0^-2 u_1 u_2^-2 u_3^3 u_l3`; the empty name is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.suspension == Shift::MinusOne {
            parts.push("S^-1".into());
        }
        let pow = |base: String, e: i64| if e == 1 { base } else { format!("{base}^{e}") };
        for (i, e) in &self.a {
            parts.push(pow(format!("a_{i}"), *e));
        }
        for (i, e) in &self.u {
            parts.push(pow(format!("u_{i}"), *e));
        }
        for (j, e) in &self.ulam {
            parts.push(pow(format!("u_l{j}"), *e));
        }
        if self.is_one() {
            parts.push("1".into());
        }
        f.write_str(&parts.join(" "))
    }
}
