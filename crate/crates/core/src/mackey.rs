//! Symbolic `T`-Mackey functors built from `W̲` and their values at
//! `T/C_{p^n}`, plus the `E¹` page of the homotopy-orbits-to-`TR̲`
//! spectral sequence.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gold::{theta, GoldMonomial};
use crate::prism::{CyclicIdeal, PrismKind, PrismScalar};
use crate::rep::{Shift, VirtualRep};

/// `Φ^{-1} W̲` is `W̲` itself, so `r = -1` is allowed and normalized away.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MackeySymbol {
    W,
    /// `tr_m W̲`
    Tr(u32),
    /// `Φ^r W̲`, `r ≥ 0`
    Phi(u32),
    /// `Φ^r W̲ / s`
    PhiQuot(i32, PrismScalar),
    /// `tr_m Φ^r W̲`, `r ≥ 0`
    TrPhi(u32, u32),
}

impl MackeySymbol {
    pub fn phi(r: i32) -> Self {
        if r < 0 {
            MackeySymbol::W
        } else {
            MackeySymbol::Phi(r as u32)
        }
    }

    pub fn tr_phi(m: u32, r: i32) -> Self {
        if r < 0 {
            MackeySymbol::Tr(m)
        } else {
            MackeySymbol::TrPhi(m, r as u32)
        }
    }

    pub fn phi_quot(r: i32, s: PrismScalar) -> Self {
        MackeySymbol::PhiQuot(r.max(-1), s)
    }

    /// The module left once the Mackey structure is forgotten: the torsion
    /// summand `A/s` for a scalar quotient, `A` otherwise.
    pub fn erase(&self) -> CyclicIdeal {
        match self {
            MackeySymbol::PhiQuot(_, s) => CyclicIdeal::principal(s.clone()),
            _ => CyclicIdeal::zero(),
        }
    }

    /// Figure glyph name: `Witt`, `dual`, `bullet`, `bullet_i`, with the
    /// crystalline decorations `dual_m` and `bullet^r`.
    pub fn glyph(&self) -> String {
        match self {
            MackeySymbol::W => "Witt".into(),
            MackeySymbol::Tr(0) => "dual".into(),
            MackeySymbol::Tr(m) => format!("dual_{m}"),
            MackeySymbol::Phi(0) => "bullet".into(),
            MackeySymbol::Phi(r) => format!("bullet^{r}"),
            MackeySymbol::PhiQuot(_, s) => format!("bullet_{}", s.total_exponent()),
            MackeySymbol::TrPhi(m, r) => format!("dual_{m} bullet^{r}"),
        }
    }
}

impl fmt::Display for MackeySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MackeySymbol::W => f.write_str("W"),
            MackeySymbol::Tr(m) => write!(f, "tr_{m} W"),
            MackeySymbol::Phi(r) => write!(f, "Phi^{r} W"),
            MackeySymbol::PhiQuot(-1, s) => write!(f, "W/{s}"),
            MackeySymbol::PhiQuot(r, s) => write!(f, "Phi^{r} W/{s}"),
            MackeySymbol::TrPhi(m, r) => write!(f, "tr_{m} Phi^{r} W"),
        }
    }
}

/// A level value `A/I`, optionally realized as the submodule generated by
/// `generator` inside the ambient `W̲(T/C_{p^n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelValue {
    Value {
        ideal: CyclicIdeal,
        generator: Option<PrismScalar>,
    },
    /// The value is not determined by what is known about `W̲`.
    Unpinned { symbol: String, level: u32 },
}

impl LevelValue {
    fn plain(ideal: CyclicIdeal) -> Self {
        LevelValue::Value { ideal, generator: None }
    }

    pub fn ideal(&self) -> Option<&CyclicIdeal> {
        match self {
            LevelValue::Value { ideal, .. } => Some(ideal),
            LevelValue::Unpinned { .. } => None,
        }
    }
}

impl fmt::Display for LevelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelValue::Value { ideal, generator } => {
                if ideal.is_unit() {
                    return f.write_str("0");
                }
                write!(f, "{ideal}")?;
                match generator {
                    Some(g) if !g.is_one() => write!(f, " on {g}"),
                    _ => Ok(()),
                }
            }
            LevelValue::Unpinned { symbol, level } => write!(f, "unpinned({symbol} at level {level})"),
        }
    }
}

fn p_ideal(k: i64) -> CyclicIdeal {
    CyclicIdeal::principal(PrismScalar::p(k.max(0) as u64))
}

/// Value of `sym` at `T/C_{p^n}`.
pub fn evaluate_level(sym: &MackeySymbol, n: u32, kind: PrismKind) -> LevelValue {
    let ni = n as i64;
    match kind {
        PrismKind::Crystalline => match sym {
            MackeySymbol::W => LevelValue::plain(p_ideal(ni + 1)),
            MackeySymbol::Tr(m) => LevelValue::Value {
                ideal: p_ideal(ni.min(*m as i64) + 1),
                generator: Some(PrismScalar::p((ni - *m as i64).max(0) as u64)),
            },
            MackeySymbol::Phi(r) => LevelValue::plain(p_ideal(ni - *r as i64)),
            MackeySymbol::PhiQuot(r, s) => {
                let base = (ni - *r as i64).max(0);
                LevelValue::plain(p_ideal(base.min(s.total_exponent() as i64)))
            }
            MackeySymbol::TrPhi(m, r) => LevelValue::Value {
                ideal: p_ideal(ni.min(*m as i64) - *r as i64),
                generator: Some(PrismScalar::p((ni - *m as i64).max(0) as u64)),
            },
        },
        PrismKind::Transversal => {
            let fq = PrismScalar::frobenius_q_analog(n, kind);
            match sym {
                MackeySymbol::W => LevelValue::plain(CyclicIdeal::principal(PrismScalar::q_analog(n + 1, kind))),
                MackeySymbol::Tr(0) => LevelValue::Value {
                    ideal: CyclicIdeal::principal(PrismScalar::phi(0, 1)),
                    generator: Some(fq),
                },
                MackeySymbol::Phi(0) => LevelValue::plain(CyclicIdeal::principal(fq)),
                MackeySymbol::PhiQuot(0, s) => LevelValue::plain(if fq.is_one() {
                    CyclicIdeal::principal(fq)
                } else {
                    CyclicIdeal::pair(fq, s.clone())
                }),
                MackeySymbol::PhiQuot(-1, s) => LevelValue::plain(CyclicIdeal::pair(
                    PrismScalar::q_analog(n + 1, kind),
                    s.clone(),
                )),
                other => LevelValue::Unpinned {
                    symbol: other.to_string(),
                    level: n,
                },
            }
        }
    }
}

/// `C_p` Lewis diagram: value at `T/C_p` over value at `T/e`, with the
/// restriction and transfer as multiplication by the given scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LewisDiagram {
    pub symbol: MackeySymbol,
    pub top: LevelValue,
    pub bottom: LevelValue,
    pub res: Option<PrismScalar>,
    pub tr: Option<PrismScalar>,
}

/// Lewis diagrams for the four transversal shapes drawn in the glossary of
/// hieroglyphics. Maps are only known for those.
pub fn lewis_diagram(sym: &MackeySymbol) -> Result<LewisDiagram> {
    let (res, tr) = match sym {
        MackeySymbol::W => (Some(PrismScalar::one(PrismKind::Transversal)), Some(PrismScalar::phi(1, 1))),
        MackeySymbol::Tr(0) => (Some(PrismScalar::p(1)), Some(PrismScalar::one(PrismKind::Transversal))),
        MackeySymbol::Phi(0) => (None, None),
        MackeySymbol::PhiQuot(0, s) if matches!(s, PrismScalar::Phi(m) if m.keys().all(|i| *i == 0)) => (None, None),
        other => return Err(Error::Contract(format!("no Lewis diagram is known for {other}"))),
    };
    Ok(LewisDiagram {
        symbol: sym.clone(),
        top: evaluate_level(sym, 1, PrismKind::Transversal),
        bottom: evaluate_level(sym, 0, PrismKind::Transversal),
        res,
        tr,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyEntry {
    pub symbol: MackeySymbol,
    pub generator: GoldMonomial,
}

/// One filtration of the `E¹` page: column `0` (transfer part or the free
/// row) and column `-1` (torsion).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyRow {
    pub even: Option<MackeyEntry>,
    pub odd: Option<MackeyEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyPage {
    pub alpha: VirtualRep,
    pub kind: PrismKind,
    pub rows: BTreeMap<usize, MackeyRow>,
}

impl MackeyPage {
    /// Column `-1` with the Mackey structure forgotten.
    pub fn erased_torsion(&self) -> BTreeMap<usize, (CyclicIdeal, GoldMonomial)> {
        self.rows
            .iter()
            .filter_map(|(f, row)| row.odd.as_ref().map(|e| (*f, (e.symbol.erase(), e.generator.clone()))))
            .collect()
    }
}

pub fn mackey_e1(alpha: &VirtualRep, kind: PrismKind) -> Result<MackeyPage> {
    let l = alpha.len();
    let mut rows = BTreeMap::new();
    for (r, &d) in alpha.dims().iter().enumerate() {
        if d <= 0 {
            continue;
        }
        let m = match kind {
            PrismKind::Transversal => r as u32,
            PrismKind::Crystalline => (r as i64 + d) as u32,
        };
        rows.insert(
            l - r,
            MackeyRow {
                even: Some(MackeyEntry {
                    symbol: MackeySymbol::tr_phi(m, r as i32 - 1),
                    generator: theta(alpha, r as i64 - 1)?,
                }),
                odd: Some(MackeyEntry {
                    symbol: MackeySymbol::phi_quot(r as i32, PrismScalar::phi_or_p(kind, r as u32, d as u64)),
                    generator: theta(alpha, r as i64)?.with_suspension(Shift::MinusOne),
                }),
            },
        );
    }
    if alpha.d_inf() >= 0 {
        rows.insert(
            0,
            MackeyRow {
                even: Some(MackeyEntry {
                    symbol: MackeySymbol::phi(l as i32 - 1),
                    generator: theta(alpha, l as i64 - 1)?,
                }),
                odd: None,
            },
        );
    }
    Ok(MackeyPage {
        alpha: alpha.clone(),
        kind,
        rows,
    })
}

/// A level-`n` group `A/I⟨c·g⟩`, `c` a scalar coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGroup {
    pub ideal: CyclicIdeal,
    pub coefficient: PrismScalar,
    pub generator: GoldMonomial,
}

impl LevelGroup {
    pub fn is_zero(&self) -> bool {
        self.ideal.is_unit()
    }
}

impl fmt::Display for LevelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.coefficient.is_one() {
            write!(f, "{}⟨{}⟩", self.ideal, self.generator)
        } else {
            write!(f, "{}⟨{} {}⟩", self.ideal, self.coefficient, self.generator)
        }
    }
}

/// Level-`n` homotopy of the pieces of the isotropy separation square for
/// `α = (d_0; d_∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarmupTable {
    pub n: u32,
    pub homotopy_fixed: LevelGroup,
    pub tate: LevelGroup,
    pub orbits_even: LevelGroup,
    pub orbits_odd: LevelGroup,
}

pub fn warmup_tables(alpha: &VirtualRep, n: u32, kind: PrismKind) -> Result<WarmupTable> {
    if alpha.len() != 1 {
        return Err(Error::Contract(format!("warmup tables need a length-one encoding, got {alpha}")));
    }
    let (d0, dinf) = (alpha.d(0), alpha.d_inf());
    let u_gen = GoldMonomial::u(0, d0).times_ulam(0, dinf);
    let a_gen = GoldMonomial::a(0, -d0).times_ulam(0, dinf);
    let one = PrismScalar::one(kind);
    let zero_group = |g: &GoldMonomial| LevelGroup {
        ideal: CyclicIdeal::principal(one.clone()),
        coefficient: one.clone(),
        generator: g.clone(),
    };
    let q = CyclicIdeal::principal(PrismScalar::q_analog(n + 1, kind));
    let fq = PrismScalar::frobenius_q_analog(n, kind);
    let tate = LevelGroup {
        ideal: CyclicIdeal::principal(fq.clone()),
        coefficient: one.clone(),
        generator: a_gen.clone(),
    };
    let homotopy_fixed = if d0 >= 0 {
        LevelGroup {
            ideal: q,
            coefficient: one.clone(),
            generator: u_gen.clone(),
        }
    } else {
        tate.clone()
    };
    let odd_gen = a_gen.clone().with_suspension(Shift::MinusOne);
    let (orbits_even, orbits_odd) = if d0 < 0 {
        (zero_group(&u_gen), zero_group(&odd_gen))
    } else {
        match kind {
            PrismKind::Transversal => (
                LevelGroup {
                    ideal: CyclicIdeal::principal(PrismScalar::phi(0, 1)),
                    coefficient: fq.clone(),
                    generator: u_gen.clone(),
                },
                LevelGroup {
                    ideal: if fq.is_one() || d0 == 0 {
                        CyclicIdeal::principal(one.clone())
                    } else {
                        CyclicIdeal::pair(fq.clone(), PrismScalar::phi(0, d0 as u64))
                    },
                    coefficient: one.clone(),
                    generator: odd_gen,
                },
            ),
            PrismKind::Crystalline => {
                let k = (n as i64).min(d0);
                (
                    LevelGroup {
                        ideal: p_ideal(k + 1),
                        coefficient: PrismScalar::p((n as i64 - k) as u64),
                        generator: u_gen.clone(),
                    },
                    LevelGroup {
                        ideal: p_ideal(k),
                        coefficient: one.clone(),
                        generator: odd_gen,
                    },
                )
            }
        }
    };
    Ok(WarmupTable {
        n,
        homotopy_fixed,
        tate,
        orbits_even,
        orbits_odd,
    })
}
