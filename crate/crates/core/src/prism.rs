//! Scalars and cyclic modules over the prism `A`.
//!
//! Transversal scalars are formal monomials `∏ φ^i(ξ)^{k_i}`; distinct
//! `φ^i(ξ)` are treated as mutually regular, which is all the kernel
//! computations need. Crystalline scalars are powers of `p`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrismKind {
    Transversal,
    Crystalline,
}

impl PrismKind {
    pub fn name(self) -> &'static str {
        match self {
            PrismKind::Transversal => "transversal",
            PrismKind::Crystalline => "crystalline",
        }
    }
}

impl std::str::FromStr for PrismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transversal" => Ok(PrismKind::Transversal),
            "crystalline" => Ok(PrismKind::Crystalline),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown prism kind {s:?}"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrismScalar {
    /// `∏ φ^i(ξ)^{k}`; zero exponents are never stored.
    Phi(BTreeMap<u32, u64>),
    /// `p^k`.
    P(u64),
}

impl PrismScalar {
    pub fn one(kind: PrismKind) -> Self {
        match kind {
            PrismKind::Transversal => PrismScalar::Phi(BTreeMap::new()),
            PrismKind::Crystalline => PrismScalar::P(0),
        }
    }

    /// `φ^i(ξ)^e`.
    pub fn phi(i: u32, e: u64) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(i, e);
        }
        PrismScalar::Phi(m)
    }

    pub fn p(e: u64) -> Self {
        PrismScalar::P(e)
    }

    /// `φ^i(ξ)^e` in the transversal backend, `p^e` in the crystalline one.
    pub fn phi_or_p(kind: PrismKind, i: u32, e: u64) -> Self {
        match kind {
            PrismKind::Transversal => PrismScalar::phi(i, e),
            PrismKind::Crystalline => PrismScalar::P(e),
        }
    }

    /// `[p^n]_A = ξ φ(ξ) ⋯ φ^{n-1}(ξ)`, or `p^n`.
    pub fn q_analog(n: u32, kind: PrismKind) -> Self {
        match kind {
            PrismKind::Transversal => PrismScalar::Phi((0..n).map(|i| (i, 1)).collect()),
            PrismKind::Crystalline => PrismScalar::P(n as u64),
        }
    }

    /// `φ([p^n]_A) = φ(ξ) ⋯ φ^n(ξ)`, or `p^n`.
    pub fn frobenius_q_analog(n: u32, kind: PrismKind) -> Self {
        match kind {
            PrismKind::Transversal => PrismScalar::Phi((1..=n).map(|i| (i, 1)).collect()),
            PrismKind::Crystalline => PrismScalar::P(n as u64),
        }
    }

    pub fn kind(&self) -> PrismKind {
        match self {
            PrismScalar::Phi(_) => PrismKind::Transversal,
            PrismScalar::P(_) => PrismKind::Crystalline,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            PrismScalar::Phi(m) => m.is_empty(),
            PrismScalar::P(k) => *k == 0,
        }
    }

    /// Exponent of `φ^i(ξ)` (transversal) or of `p` (crystalline, any `i`).
    pub fn exponent_at(&self, i: u32) -> u64 {
        match self {
            PrismScalar::Phi(m) => m.get(&i).copied().unwrap_or(0),
            PrismScalar::P(k) => *k,
        }
    }

    /// Total degree; the `p`-adic length once specialized.
    pub fn total_exponent(&self) -> u64 {
        match self {
            PrismScalar::Phi(m) => m.values().sum(),
            PrismScalar::P(k) => *k,
        }
    }

    pub fn mul(&self, other: &PrismScalar) -> Result<PrismScalar> {
        match (self, other) {
            (PrismScalar::Phi(x), PrismScalar::Phi(y)) => {
                let mut out = x.clone();
                for (i, e) in y {
                    *out.entry(*i).or_insert(0) += e;
                }
                Ok(PrismScalar::Phi(out))
            }
            (PrismScalar::P(x), PrismScalar::P(y)) => Ok(PrismScalar::P(x + y)),
            _ => Err(Error::Contract("scalar kind mismatch".into())),
        }
    }

    /// Collapses every `φ^i(ξ)` to `p`.
    pub fn specialize(&self) -> PrismScalar {
        PrismScalar::P(self.total_exponent())
    }

    pub fn to_kind(&self, kind: PrismKind) -> PrismScalar {
        match kind {
            PrismKind::Transversal => self.clone(),
            PrismKind::Crystalline => self.specialize(),
        }
    }

    pub fn divides(&self, other: &PrismScalar) -> bool {
        match (self, other) {
            (PrismScalar::Phi(x), PrismScalar::Phi(_)) => {
                x.iter().all(|(i, e)| other.exponent_at(*i) >= *e)
            }
            (PrismScalar::P(x), PrismScalar::P(y)) => x <= y,
            _ => false,
        }
    }

    /// Exact quotient `self / other`; `None` unless `other` divides `self`.
    pub fn div_exact(&self, other: &PrismScalar) -> Option<PrismScalar> {
        if !other.divides(self) {
            return None;
        }
        Some(match (self, other) {
            (PrismScalar::Phi(x), PrismScalar::Phi(_)) => PrismScalar::Phi(
                x.iter()
                    .filter_map(|(i, e)| {
                        let r = e - other.exponent_at(*i);
                        (r > 0).then_some((*i, r))
                    })
                    .collect(),
            ),
            (PrismScalar::P(x), PrismScalar::P(y)) => PrismScalar::P(x - y),
            _ => unreachable!(),
        })
    }

    /// `self / gcd(self, other)`: generator of the colon ideal `(self) : other`.
    pub fn colon(&self, other: &PrismScalar) -> Result<PrismScalar> {
        match (self, other) {
            (PrismScalar::Phi(x), PrismScalar::Phi(_)) => Ok(PrismScalar::Phi(
                x.iter()
                    .filter_map(|(i, e)| {
                        let r = e.saturating_sub(other.exponent_at(*i));
                        (r > 0).then_some((*i, r))
                    })
                    .collect(),
            )),
            (PrismScalar::P(x), PrismScalar::P(y)) => Ok(PrismScalar::P(x.saturating_sub(*y))),
            _ => Err(Error::Contract("scalar kind mismatch".into())),
        }
    }

    pub fn phi_exponents(&self) -> Vec<(u32, u64)> {
        match self {
            PrismScalar::Phi(m) => m.iter().map(|(i, e)| (*i, *e)).collect(),
            PrismScalar::P(_) => Vec::new(),
        }
    }
}

impl fmt::Display for PrismScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrismScalar::P(0) => f.write_str("1"),
            PrismScalar::P(1) => f.write_str("p"),
            PrismScalar::P(k) => write!(f, "p^{k}"),
            PrismScalar::Phi(m) if m.is_empty() => f.write_str("1"),
            PrismScalar::Phi(m) => {
                for (n, (i, e)) in m.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" ")?;
                    }
                    match i {
                        0 => f.write_str("xi")?,
                        1 => f.write_str("phi(xi)")?,
                        _ => write!(f, "phi^{i}(xi)")?,
                    }
                    if *e != 1 {
                        write!(f, "^{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// The annihilator of a cyclic summand `A/I`: zero, one or two generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicIdeal {
    gens: Vec<PrismScalar>,
}

impl CyclicIdeal {
    /// The zero ideal (the summand is free).
    pub fn zero() -> Self {
        CyclicIdeal { gens: Vec::new() }
    }

    pub fn principal(s: PrismScalar) -> Self {
        CyclicIdeal { gens: vec![s] }
    }

    /// `(x, y)`, kept unreduced.
    pub fn pair(x: PrismScalar, y: PrismScalar) -> Self {
        CyclicIdeal { gens: vec![x, y] }
    }

    pub fn gens(&self) -> &[PrismScalar] {
        &self.gens
    }

    pub fn is_free(&self) -> bool {
        self.gens.is_empty()
    }

    /// True when `A/I = 0`.
    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(PrismScalar::is_one)
    }

    pub fn kind(&self) -> Option<PrismKind> {
        self.gens.first().map(PrismScalar::kind)
    }

    pub fn specialize(&self) -> CyclicIdeal {
        match self.gens.iter().map(PrismScalar::total_exponent).min() {
            None => CyclicIdeal::zero(),
            Some(k) => CyclicIdeal::principal(PrismScalar::P(k)),
        }
    }

    /// Length of `A/I` over `A/p` for crystalline ideals; `None` for free
    /// modules or transversal ideals.
    pub fn p_length(&self) -> Option<u64> {
        if self.gens.is_empty() {
            return None;
        }
        self.gens
            .iter()
            .map(|g| match g {
                PrismScalar::P(k) => Some(*k),
                PrismScalar::Phi(_) => None,
            })
            .try_fold(u64::MAX, |acc, k| k.map(|k| acc.min(k)))
    }
}

impl fmt::Display for CyclicIdeal {
    /// Renders the module `A/I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gens.as_slice() {
            [] => f.write_str("A"),
            [g] if matches!(g, PrismScalar::Phi(m) if m.len() > 1) => write!(f, "A/({g})"),
            [g] => write!(f, "A/{g}"),
            gs => {
                f.write_str("A/(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Kernel and cokernel of `A → A/φ^r(ξ)^d` (or `A → A/p^d`), `1 ↦ map_scalar`.
///
/// Returns the kernel generator and the surviving quotient ideal of the target.
pub fn kernel_cokernel(
    map_scalar: &PrismScalar,
    r: u32,
    d: u64,
    kind: PrismKind,
) -> Result<(PrismScalar, CyclicIdeal)> {
    if map_scalar.kind() != kind {
        return Err(Error::Contract("scalar kind mismatch".into()));
    }
    match map_scalar {
        PrismScalar::Phi(_) => {
            if map_scalar.exponent_at(r) > 0 {
                return Err(Error::Contract(format!(
                    "map scalar {map_scalar} is not regular on A/phi^{r}(xi)^{d}"
                )));
            }
            let target = PrismScalar::phi(r, d);
            Ok((target.clone(), CyclicIdeal::pair(target, map_scalar.clone())))
        }
        PrismScalar::P(s) => Ok((
            PrismScalar::P(d.saturating_sub(*s)),
            CyclicIdeal::principal(PrismScalar::P(d.min(*s))),
        )),
    }
}
