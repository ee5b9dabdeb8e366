//! Mayer-Vietoris calculus for the decompositions of the framed space.
//!
//! Exactness gives `h_r = |coker lambda_r| + |ker lambda_{r-1}|` for the
//! connecting-comparison maps `lambda_r`, whose Künneth expansion is built by
//! [`build_ab`]. Realizations come from [`zigzag`], reductions from
//! [`eliminate`], and the search over unknown ranks from [`infer`].

pub mod diagram;
pub mod infer;
pub mod zigzag;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::betti::{m_signed, BettiTable, BigCount, Field, Space};
use crate::error::{Error, Result};
use crate::f2la::BitMatrix;
use crate::moduli::{ConstraintKind, GenusData, MapKind};

pub use diagram::{build_1g, build_2g, build_ab, eliminate, realize, Diagram, Edge, Payload, Summand};
pub use infer::{infer, max_rank_assignment, InferQuery, InferReport, MaxRankSplit, Split};
pub use zigzag::{Reading, Witness, WitnessSpace};

/// Kernel and cokernel dimensions of a map, possibly only bounded.
///
/// `coker - ker = cod - dom` always, so one interval determines the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KerCoker {
    pub dom: u64,
    pub cod: u64,
    pub ker_lo: u64,
    pub ker_hi: u64,
}

impl KerCoker {
    pub fn exact(dom: u64, cod: u64, ker: u64) -> Self {
        Self {
            dom,
            cod,
            ker_lo: ker,
            ker_hi: ker,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.ker_lo == self.ker_hi
    }

    pub fn ker(&self) -> Option<u64> {
        self.is_exact().then_some(self.ker_lo)
    }

    pub fn coker(&self) -> Option<u64> {
        self.ker().map(|k| k + self.cod - self.dom)
    }

    pub fn ker_range(&self) -> (u64, u64) {
        (self.ker_lo, self.ker_hi)
    }

    pub fn coker_range(&self) -> (u64, u64) {
        (
            self.ker_lo + self.cod - self.dom,
            self.ker_hi + self.cod - self.dom,
        )
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &KerCoker) -> Result<KerCoker> {
        if (self.dom, self.cod) != (other.dom, other.cod) {
            return Err(Error::Dimension(format!(
                "cannot merge maps {}->{} and {}->{}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(Self {
            ker_lo: self.ker_lo.min(other.ker_lo),
            ker_hi: self.ker_hi.max(other.ker_hi),
            ..*self
        })
    }
}

pub fn ker_coker(m: &BitMatrix) -> KerCoker {
    KerCoker::exact(m.cols() as u64, m.rows() as u64, m.kernel_dim() as u64)
}

fn small(v: BigInt, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Consistency(format!("{what} is negative or too large: {v}")))
}

/// Closed-form kernel and cokernel of `lambda_r^{1,g}` where they are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma4 {
    Covered { ker: u64, coker: u64 },
    NotCovered,
}

/// For `r < 3g+1` with `r ≡ 1, 2 (mod 3)`, for `r = 3g+1`, and for
/// `r >= 3g+4` with `r ≡ 0, 1 (mod 3)`; `h` is the genus-`g` framed table.
pub fn lemma4(r: i64, h: &BettiTable) -> Result<Lemma4> {
    let g = h.genus();
    let gi = g as i64;
    let hs = |k: i64| h.signed(k);
    let m = |k: i64| m_signed(g, k);
    let (ker, coker) = if r < 3 * gi + 1 && matches!(r.rem_euclid(3), 1 | 2) {
        (
            hs(r - 1) - m(r - 1),
            2 * hs(r - 3) + hs(r - 4) + m(r - 2),
        )
    } else if r == 3 * gi + 1 {
        (hs(3 * gi), 2 * hs(3 * gi - 2) + hs(3 * gi - 3) + m(3 * gi))
    } else if r >= 3 * gi + 4 && matches!(r.rem_euclid(3), 0 | 1) {
        (
            hs(r - 1) + m(r),
            2 * hs(r - 3) + hs(r - 4) - m(r - 1),
        )
    } else {
        return Ok(Lemma4::NotCovered);
    };
    Ok(Lemma4::Covered {
        ker: small(ker, "kernel")?,
        coker: small(coker, "cokernel")?,
    })
}

/// Source of `|ker rho_r ∩ ker nu_{r-2}|` in [`kernel_formula_with_intersection`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    /// The equality case: the intersection is zero.
    AssumeZero,
    Given(u64),
    /// Read from a kernel-intersection constraint on `rho_r` and `nu_{r-2}`.
    FromConstraints,
}

/// `|ker lambda_r^{1,g}| = |ker rho_{r-3}| + |ker mu_{r-1}| + |ker rho_r ∩ ker nu_{r-2}|`
/// for `r >= 3g+4`, `r ≡ 2 (mod 3)`.
pub fn kernel_formula_with_intersection(
    r: i64,
    data: &GenusData,
    intersection: Intersection,
) -> Result<u64> {
    let g = data.genus as i64;
    if r < 3 * g + 4 || r.rem_euclid(3) != 2 {
        return Err(Error::Validation(format!(
            "formula holds for r >= {} with r ≡ 2 mod 3, got r = {r}",
            3 * g + 4
        )));
    }
    let delta = match intersection {
        Intersection::AssumeZero => 0,
        Intersection::Given(d) => d,
        Intersection::FromConstraints => data
            .constraints
            .iter()
            .find(|c| {
                c.kind == ConstraintKind::KernelIntersectionDim
                    && c.operands.len() == 2
                    && c.operands.iter().any(|o| o.map.kind == MapKind::Rho && o.map.degree == r)
                    && c.operands.iter().any(|o| o.map.kind == MapKind::Nu && o.map.degree == r - 2)
            })
            .map(|c| c.value)
            .ok_or_else(|| {
                Error::NeedsConstraint(format!(
                    "no recorded value for |ker rho_{r} ∩ ker nu_{}|",
                    r - 2
                ))
            })?,
    };
    Ok(data.rho(r - 3).kernel() + data.mu(r - 1).kernel() + delta)
}

/// Kernel of `lambda_r^{1,g}` below the middle when every `nu` there is
/// surjective: `h_{r-1} - m_{r-1} - m_{r-3}`.
pub fn surjectivity_mode_kernel(r: i64, h: &BettiTable) -> Result<u64> {
    let g = h.genus();
    small(
        h.signed(r - 1) - m_signed(g, r - 1) - m_signed(g, r - 3),
        "kernel",
    )
}

/// `h_r = |coker lambda_r| + |ker lambda_{r-1}|` for the genus-`genus`
/// framed space. Missing entries count as zero; the result must satisfy
/// duality and have Euler characteristic zero.
pub fn glue(genus: u32, cokers: &[u64], kers: &[u64]) -> Result<BettiTable> {
    if genus == 0 {
        return Err(Error::Validation("genus must be at least 1".into()));
    }
    let len = Space::Framed.table_len(genus);
    let at = |v: &[u64], r: i64| usize::try_from(r).ok().and_then(|r| v.get(r)).copied().unwrap_or(0);
    let reach = cokers.len().max(kers.len() + 1);
    if let Some(r) = (len..reach).find(|&r| at(cokers, r as i64) + at(kers, r as i64 - 1) != 0) {
        return Err(Error::Validation(format!(
            "degree {r} lies above the top degree {} but receives a nonzero contribution",
            len - 1
        )));
    }
    let values: Vec<BigCount> = (0..len as i64)
        .map(|r| BigCount::from(at(cokers, r) + at(kers, r - 1)))
        .collect();
    let table = BettiTable::new(genus, Field::F2, Space::Framed, values)?;
    if table.at(0) != BigCount::from(1u32) {
        return Err(Error::Validation(format!(
            "degree 0 must be 1 for a connected space, got {}",
            table.at(0)
        )));
    }
    if let Some(r) = table.first_duality_violation() {
        return Err(Error::Validation(format!(
            "duality fails at degree {r}: {} vs {}",
            table.at(r as i64),
            table.at(len as i64 - 1 - r as i64)
        )));
    }
    let chi = table.euler_characteristic();
    if chi != BigInt::from(0) {
        return Err(Error::Validation(format!("Euler characteristic is {chi}, not 0")));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::mod2_table;
    use crate::golden;
    use crate::moduli::genus1_data;

    #[test]
    fn lemma4_examples() {
        let h2 = mod2_table(2);
        assert_eq!(lemma4(7, &h2).unwrap(), Lemma4::Covered { ker: 5, coker: 21 });
        assert_eq!(lemma4(5, &h2).unwrap(), Lemma4::Covered { ker: 5, coker: 6 });
        assert_eq!(lemma4(6, &h2).unwrap(), Lemma4::NotCovered);
        match lemma4(4, &mod2_table(1)).unwrap() {
            Lemma4::Covered { ker, .. } => assert_eq!(ker, 1),
            Lemma4::NotCovered => panic!("r = 3g+1 is covered"),
        }
    }

    #[test]
    fn intersection_formula() {
        let d1 = genus1_data();
        assert_eq!(kernel_formula_with_intersection(8, &d1, Intersection::AssumeZero).unwrap(), 1);
        assert_eq!(kernel_formula_with_intersection(8, &d1, Intersection::Given(2)).unwrap(), 3);
        assert!(matches!(
            kernel_formula_with_intersection(8, &d1, Intersection::FromConstraints),
            Err(Error::NeedsConstraint(_))
        ));
        assert!(kernel_formula_with_intersection(6, &d1, Intersection::AssumeZero).is_err());
    }

    #[test]
    fn surjectivity_kernel() {
        assert_eq!(surjectivity_mode_kernel(6, &mod2_table(2)).unwrap(), 1);
        assert_eq!(surjectivity_mode_kernel(3, &mod2_table(1)).unwrap(), 0);
        // r = 2: h_1 only, no m terms in range besides m_{-1}
        assert_eq!(surjectivity_mode_kernel(2, &mod2_table(3)).unwrap(), 0);
    }

    #[test]
    fn glue_published_rows() {
        let h = glue(4, &golden::LAMBDA22_COKER, &golden::LAMBDA22_KER).unwrap();
        assert_eq!(h.to_counts().unwrap(), golden::LAMBDA22_H4);
        assert_eq!(h.count(9).unwrap(), 93);
    }

    #[test]
    fn glue_rejects_zero_input() {
        let err = glue(2, &[0; 10], &[0; 10]).unwrap_err();
        assert!(err.to_string().contains("degree 0"), "{err}");
        let err = glue(2, &[1, 0, 1, 5, 5, 5, 5, 1, 0, 0], &[]).unwrap_err();
        assert!(err.to_string().contains("duality"), "{err}");
    }

    #[test]
    fn ker_coker_lockstep() {
        let k = KerCoker {
            dom: 6,
            cod: 10,
            ker_lo: 0,
            ker_hi: 2,
        };
        assert_eq!(k.coker_range(), (4, 6));
        assert_eq!(k.ker(), None);
        assert_eq!(KerCoker::exact(6, 10, 1).coker(), Some(5));
    }
}
