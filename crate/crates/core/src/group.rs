use crate::error::{Error, Result};
use crate::gold::GoldMonomial;
use crate::prism::{CyclicIdeal, PrismKind};
use crate::rep::VirtualRep;

/// One cyclic summand `A/I⟨g⟩` of a homotopy group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSummand {
    pub ideal: CyclicIdeal,
    pub generator: GoldMonomial,
    /// Filtration of the spectral-sequence row the summand comes from.
    pub origin: usize,
}

/// `TF_α` or `TF_{α-1}` as a direct sum of cyclic `A`-modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGroup {
    grading: VirtualRep,
    kind: PrismKind,
    summands: Vec<GroupSummand>,
}

impl GradedGroup {
    /// Builds the group, dropping zero summands, ordering by descending
    /// origin, and checking every generator lives in `grading`.
    pub fn new(grading: VirtualRep, kind: PrismKind, summands: Vec<GroupSummand>) -> Result<Self> {
        let mut summands: Vec<_> = summands.into_iter().filter(|s| !s.ideal.is_unit()).collect();
        summands.sort_by(|x, y| y.origin.cmp(&x.origin));
        for s in &summands {
            if !s.generator.degree().same_grading(&grading) {
                return Err(Error::Internal(format!(
                    "generator {} has degree {} (shift {}) but the group is graded by {} (shift {})",
                    s.generator,
                    s.generator.degree(),
                    s.generator.degree().shift().as_i64(),
                    grading,
                    grading.shift().as_i64()
                )));
            }
        }
        Ok(GradedGroup {
            grading,
            kind,
            summands,
        })
    }

    pub fn zero(grading: VirtualRep, kind: PrismKind) -> Self {
        GradedGroup {
            grading,
            kind,
            summands: Vec::new(),
        }
    }

    pub fn grading(&self) -> &VirtualRep {
        &self.grading
    }

    pub fn kind(&self) -> PrismKind {
        self.kind
    }

    pub fn summands(&self) -> &[GroupSummand] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// The summands as a sorted multiset of `(annihilator, generator)` pairs.
    pub fn multiset(&self) -> Vec<(CyclicIdeal, GoldMonomial)> {
        let mut v: Vec<_> = self
            .summands
            .iter()
            .map(|s| (s.ideal.clone(), s.generator.clone()))
            .collect();
        v.sort();
        v
    }

    pub fn annihilators(&self) -> Vec<CyclicIdeal> {
        let mut v: Vec<_> = self.summands.iter().map(|s| s.ideal.clone()).collect();
        v.sort();
        v
    }

    /// Total `p`-adic length of a crystalline torsion group.
    pub fn p_length(&self) -> Option<u64> {
        self.summands.iter().map(|s| s.ideal.p_length()).sum()
    }
}

impl std::fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊕ ")?;
            }
            write!(f, "{}⟨{}⟩", s.ideal, s.generator)?;
        }
        Ok(())
    }
}
