//! Virtual T-representations in dimension-sequence form.
//!
//! A complex virtual representation `α = k_0 λ_0 + … + k_{L-1} λ_{L-1} + k_∞ λ_∞`
//! is stored by its fixed-point dimensions `d_r = k_∞ + Σ_{i≥r} k_i`, written
//! `(d_0,…,d_{L-1};d_∞)`. The real grading `α − 1` is the same sequence with
//! [`Shift::MinusOne`].
//!
//! The encoding length is significant: `(1;0)` and `(1,0;0)` name the same
//! grading but drive different spectral sequences, so equality is exact and
//! [`VirtualRep::same_grading`] compares up to padding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The integer shift separating the complex grading `α` from `α − 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shift {
    #[default]
    Zero,
    MinusOne,
}

impl Shift {
    pub fn as_i64(self) -> i64 {
        match self {
            Shift::Zero => 0,
            Shift::MinusOne => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            0 => Ok(Shift::Zero),
            -1 => Ok(Shift::MinusOne),
            _ => Err(Error::Range {
                what: "shift",
                value: v,
                lo: -1,
                hi: 0,
            }),
        }
    }

    /// Sum of two shifts; `-2` has no meaning here and is rejected.
    pub fn add(self, other: Shift) -> Result<Shift> {
        Shift::from_i64(self.as_i64() + other.as_i64())
            .map_err(|_| Error::Contract("combined suspension below -1".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VirtualRep {
    dims: Vec<i64>,
    d_inf: i64,
    shift: Shift,
}

/// Irreducible decomposition `k_0 λ_0 + … + k_{L-1} λ_{L-1} + k_∞ λ_∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IrredDecomp {
    pub coeffs: Vec<i64>,
    pub k_inf: i64,
}

impl IrredDecomp {
    pub fn to_rep(&self) -> Result<VirtualRep> {
        let mut dims = vec![0; self.coeffs.len()];
        let mut acc = self.k_inf;
        for (i, k) in self.coeffs.iter().enumerate().rev() {
            acc += k;
            dims[i] = acc;
        }
        VirtualRep::new(dims, self.k_inf)
    }
}

impl VirtualRep {
    pub fn new(dims: Vec<i64>, d_inf: i64) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Contract("dimension sequence needs at least one entry".into()));
        }
        Ok(VirtualRep {
            dims,
            d_inf,
            shift: Shift::Zero,
        })
    }

    /// The zero representation of encoding length `len`.
    pub fn zero(len: usize) -> Self {
        VirtualRep {
            dims: vec![0; len.max(1)],
            d_inf: 0,
            shift: Shift::Zero,
        }
    }

    /// The irreducible `λ_i`, encoded with length `max(len, i + 1)`.
    pub fn lambda(i: usize, len: usize) -> Self {
        let n = len.max(i + 1);
        let dims = (0..n).map(|r| if r <= i { 1 } else { 0 }).collect();
        VirtualRep {
            dims,
            d_inf: 0,
            shift: Shift::Zero,
        }
    }

    pub fn with_shift(mut self, shift: Shift) -> Self {
        self.shift = shift;
        self
    }

    pub fn dims(&self) -> &[i64] {
        &self.dims
    }

    pub fn d_inf(&self) -> i64 {
        self.d_inf
    }

    pub fn shift(&self) -> Shift {
        self.shift
    }

    /// Encoding length `L` (the top index is `L - 1`).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `d_r`, reading past the end of the encoding as `d_∞`.
    pub fn d(&self, r: usize) -> i64 {
        self.dims.get(r).copied().unwrap_or(self.d_inf)
    }

    pub fn irreducible_coeffs(&self) -> IrredDecomp {
        let l = self.dims.len();
        let coeffs = (0..l)
            .map(|i| {
                let next = if i + 1 < l { self.dims[i + 1] } else { self.d_inf };
                self.dims[i] - next
            })
            .collect();
        IrredDecomp {
            coeffs,
            k_inf: self.d_inf,
        }
    }

    /// `α^{(r)}`: drops the first `r` entries, so `d_k(α^{(r)}) = d_{k+r}(α)`.
    pub fn fixed_part(&self, r: usize) -> Result<Self> {
        if r >= self.dims.len() {
            return Err(Error::Range {
                what: "r",
                value: r as i64,
                lo: 0,
                hi: self.dims.len() as i64 - 1,
            });
        }
        Ok(VirtualRep {
            dims: self.dims[r..].to_vec(),
            d_inf: self.d_inf,
            shift: self.shift,
        })
    }

    /// Appends copies of `d_∞` up to length `new_len` (adds `0 λ_L + …`).
    pub fn pad(&self, new_len: usize) -> Result<Self> {
        if new_len < self.dims.len() {
            return Err(Error::Contract(format!(
                "cannot pad length {} down to {new_len}",
                self.dims.len()
            )));
        }
        let mut dims = self.dims.clone();
        dims.resize(new_len, self.d_inf);
        Ok(VirtualRep {
            dims,
            d_inf: self.d_inf,
            shift: self.shift,
        })
    }

    pub fn add(&self, other: &VirtualRep) -> Result<Self> {
        if self.shift != Shift::Zero || other.shift != Shift::Zero {
            return Err(Error::Contract("add_rep requires shift 0 on both operands".into()));
        }
        let n = self.len().max(other.len());
        let dims = (0..n).map(|r| self.d(r) + other.d(r)).collect();
        Ok(VirtualRep {
            dims,
            d_inf: self.d_inf + other.d_inf,
            shift: Shift::Zero,
        })
    }

    /// `α + λ_i`: raises `d_0, …, d_i` by one, padding first when `i ≥ L`.
    pub fn add_lambda(&self, i: usize) -> Self {
        let mut out = self.pad(self.len().max(i + 1)).expect("padding up never fails");
        for d in &mut out.dims[..=i] {
            *d += 1;
        }
        out
    }

    /// Raises or lowers the single entry `d_i` (the degree of `u_i` or `a_i^{-1}`).
    pub fn bump(&self, i: usize, by: i64) -> Self {
        let mut out = self.pad(self.len().max(i + 1)).expect("padding up never fails");
        out.dims[i] += by;
        out
    }

    /// Equality as gradings: agree after padding to a common length, same shift.
    pub fn same_grading(&self, other: &VirtualRep) -> bool {
        let n = self.len().max(other.len());
        self.shift == other.shift
            && self.d_inf == other.d_inf
            && (0..n).all(|r| self.d(r) == other.d(r))
    }
}

impl fmt::Display for VirtualRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ";{})", self.d_inf)
    }
}

/// Parses `'(' int (',' int)* ';' int ')'`, ASCII whitespace allowed between tokens.
pub fn parse_rep(text: &str) -> Result<VirtualRep> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    p.expect(b'(')?;
    let mut dims = vec![p.int()?];
    loop {
        p.skip_ws();
        match p.peek() {
            Some(b',') => {
                p.pos += 1;
                dims.push(p.int()?);
            }
            Some(b';') => {
                p.pos += 1;
                break;
            }
            _ => return Err(p.err("expected ',' or ';'")),
        }
    }
    let d_inf = p.int()?;
    p.expect(b')')?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    VirtualRep::new(dims, d_inf)
}

impl FromStr for VirtualRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rep(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let tok = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        tok.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("integer {tok} does not fit in 64 bits"),
        })
    }
}
