//! Framed Betti numbers from the mod-2 cohomology of the unframed space.
//!
//! The framing fibration `SO(3) -> N^# -> N` has a Leray-Serre spectral
//! sequence whose `E_2` differential is cup product with the degree-2 class
//! `alpha`, and which collapses at `E_3`. Only the ranks of `alpha` matter.

use std::path::Path;

use serde::Deserialize;

use crate::betti::{BettiTable, BigCount, Field, Space};
use crate::error::{Error, Result};
use crate::f2la::BitMatrix;

/// Cup product with `alpha` on `H^*(N_g; Z/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaAction {
    genus: u32,
    dims: Vec<u64>,
    ranks: Vec<u64>,
    matrices: Option<Vec<BitMatrix>>,
}

impl AlphaAction {
    /// Degrees `0..=6g-6` for `dims`, `0..=6g-8` for `ranks`.
    pub fn from_ranks(genus: u32, dims: Vec<u64>, ranks: Vec<u64>) -> Result<Self> {
        let a = Self {
            genus,
            dims,
            ranks,
            matrices: None,
        };
        a.validate()?;
        Ok(a)
    }

    /// `matrices[k]` maps degree `k` to degree `k + 2`; ranks are read off.
    pub fn from_matrices(genus: u32, dims: Vec<u64>, matrices: Vec<BitMatrix>) -> Result<Self> {
        let ranks = matrices.iter().map(|m| m.rank() as u64).collect();
        let a = Self {
            genus,
            dims,
            ranks,
            matrices: Some(matrices),
        };
        a.validate()?;
        Ok(a)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    pub fn matrices(&self) -> Option<&[BitMatrix]> {
        self.matrices.as_deref()
    }

    /// `dim H^k(N_g)`, zero outside `0..=6g-6`.
    pub fn dim(&self, k: i64) -> u64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.dims.get(k))
            .copied()
            .unwrap_or(0)
    }

    /// Rank of `alpha` out of degree `s`; zero when either end is a zero space.
    pub fn rank(&self, s: i64) -> u64 {
        usize::try_from(s)
            .ok()
            .and_then(|s| self.ranks.get(s))
            .copied()
            .unwrap_or(0)
    }

    /// Every violated invariant, in check order.
    pub fn violations(&self) -> Vec<String> {
        let g = self.genus;
        let mut out = Vec::new();
        if g == 0 {
            return vec!["genus: must be at least 1".into()];
        }
        let n = 6 * g as usize - 5;
        if self.dims.len() != n {
            out.push(format!("length: {n} dims expected, got {}", self.dims.len()));
            return out;
        }
        let nr = n.saturating_sub(2);
        if self.ranks.len() != nr {
            out.push(format!("length: {nr} alpha ranks expected, got {}", self.ranks.len()));
            return out;
        }
        if self.dims[0] != 1 || (n > 1 && self.dims[1] != 0) {
            out.push(format!(
                "simple connectivity: dims[0] = 1 and dims[1] = 0 required, got {} and {}",
                self.dims[0],
                self.dims.get(1).copied().unwrap_or(0)
            ));
        }
        let top = n - 1;
        if let Some(r) = (0..n).find(|&r| self.dims[r] != self.dims[top - r]) {
            out.push(format!(
                "duality: dims[{r}] = {} but dims[{}] = {}",
                self.dims[r],
                top - r,
                self.dims[top - r]
            ));
        }
        // alpha out of degree k is dual to alpha out of degree top-2-k
        if let Some(k) = (0..nr).find(|&k| self.ranks[k] != self.ranks[nr - 1 - k]) {
            out.push(format!(
                "duality: alpha rank {} out of degree {k} but {} out of degree {}",
                self.ranks[k],
                self.ranks[nr - 1 - k],
                nr - 1 - k
            ));
        }
        for (k, &rk) in self.ranks.iter().enumerate() {
            let bound = self.dims[k].min(self.dims[k + 2]);
            if rk > bound {
                out.push(format!(
                    "rank bound: alpha out of degree {k} has rank {rk} > min({}, {})",
                    self.dims[k],
                    self.dims[k + 2]
                ));
            }
        }
        if let Some(ms) = &self.matrices {
            if ms.len() != nr {
                out.push(format!("length: {nr} alpha matrices expected, got {}", ms.len()));
                return out;
            }
            for (k, m) in ms.iter().enumerate() {
                if m.cols() as u64 != self.dims[k] || m.rows() as u64 != self.dims[k + 2] {
                    out.push(format!(
                        "matrix shape: alpha out of degree {k} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        self.dims[k + 2],
                        self.dims[k]
                    ));
                }
            }
            if out.is_empty() {
                let steps = g as usize;
                for start in 0..nr {
                    if start + 2 * steps > top {
                        break;
                    }
                    let mut acc = BitMatrix::identity(self.dims[start] as usize);
                    for j in 0..steps {
                        acc = ms[start + 2 * j].compose(&acc).expect("shapes checked");
                    }
                    if !acc.is_zero() {
                        out.push(format!(
                            "nilpotency: alpha^{g} is nonzero on degree {start}"
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::Validation(v)),
        }
    }
}

/// `|coker alpha_s|`, with a zero source below degree 0.
fn coker(a: &AlphaAction, s: i64) -> u64 {
    a.dim(s + 2) - a.rank(s)
}

/// `|ker alpha_s|`, with a zero target above the top degree.
fn ker(a: &AlphaAction, s: i64) -> u64 {
    a.dim(s) - a.rank(s)
}

/// `h_r = |coker a_{r-2}| + |ker a_{r-1}| + |coker a_{r-4}| + |ker a_{r-3}|`.
pub fn serre_betti(a: &AlphaAction) -> Result<BettiTable> {
    a.validate()?;
    let len = 6 * a.genus as i64 - 2;
    let values = (0..len)
        .map(|r| {
            BigCount::from(coker(a, r - 2) + ker(a, r - 1) + coker(a, r - 4) + ker(a, r - 3))
        })
        .collect();
    BettiTable::new(a.genus, Field::F2, Space::Framed, values)
}

/// The genus-2 ring: `alpha` in degree 2, `psi_1..psi_4` in degree 3,
/// `delta` in degree 4, with `alpha^2 = 0` and `alpha * delta` the top class.
pub fn genus2_ring() -> AlphaAction {
    let one = BitMatrix::identity(1);
    let matrices = vec![
        one.clone(),
        BitMatrix::zeros(4, 0),
        BitMatrix::zeros(1, 1),
        BitMatrix::zeros(0, 4),
        one,
    ];
    AlphaAction::from_matrices(2, vec![1, 0, 1, 4, 1, 0, 1], matrices)
        .expect("the genus-2 ring is valid")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    genus: u32,
    dims: Vec<u64>,
    alpha_ranks: Vec<u64>,
    #[serde(default)]
    alpha_matrices: Option<Vec<Vec<Vec<u8>>>>,
}

/// Parses and validates an alpha profile given as JSON text.
pub fn parse_alpha_profile(text: &str) -> Result<AlphaAction> {
    let raw: ProfileFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.genus == 0 {
        return Err(Error::Parse("genus must be at least 1".into()));
    }
    let n = 6 * raw.genus as usize - 5;
    if raw.dims.len() != n {
        return Err(Error::Parse(format!(
            "dims: expected {n} entries for genus {}, got {}",
            raw.genus,
            raw.dims.len()
        )));
    }
    if raw.alpha_ranks.len() != n.saturating_sub(2) {
        return Err(Error::Parse(format!(
            "alpha_ranks: expected {} entries, got {}",
            n.saturating_sub(2),
            raw.alpha_ranks.len()
        )));
    }
    match raw.alpha_matrices {
        None => AlphaAction::from_ranks(raw.genus, raw.dims, raw.alpha_ranks),
        Some(ms) => {
            if ms.len() != raw.alpha_ranks.len() {
                return Err(Error::Parse(format!(
                    "alpha_matrices: expected {} entries, got {}",
                    raw.alpha_ranks.len(),
                    ms.len()
                )));
            }
            let mut mats = Vec::with_capacity(ms.len());
            for (k, rows) in ms.iter().enumerate() {
                let cols = raw.dims[k] as usize;
                if rows.len() as u64 != raw.dims[k + 2] {
                    return Err(Error::Parse(format!(
                        "alpha_matrices[{k}]: expected {} rows, got {}",
                        raw.dims[k + 2],
                        rows.len()
                    )));
                }
                if rows.iter().flatten().any(|&b| b > 1) {
                    return Err(Error::Parse(format!("alpha_matrices[{k}]: entries must be 0 or 1")));
                }
                mats.push(
                    BitMatrix::from_rows(rows, cols)
                        .map_err(|e| Error::Parse(format!("alpha_matrices[{k}]: {e}")))?,
                );
            }
            AlphaAction::from_matrices(raw.genus, raw.dims, mats)
        }
    }
}

pub fn load_alpha_profile(path: impl AsRef<Path>) -> Result<AlphaAction> {
    parse_alpha_profile(&std::fs::read_to_string(path)?)
}
