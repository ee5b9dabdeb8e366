//! Deductions of unknown ranks from known Betti numbers.
//!
//! Each assignment of ranks to the unknown `nu` slots is tested against every
//! admissible realization of the boundary maps; an assignment survives when
//! some realization makes `coker lambda_r + ker lambda_{r-1}` equal the
//! target Betti numbers in every checked degree.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::betti::BettiTable;
use crate::error::{Error, Result};
use crate::moduli::{GenusData, MapKind, MapRef};

use super::diagram::{build_ab, realize};
use super::zigzag::{Reading, Witness, WitnessSpace};
use super::{ker_coker, KerCoker};

/// A decomposition `a + b` of the genus `a + b` framed space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Split {
    pub a: u32,
    pub b: u32,
}

impl Split {
    pub fn genus(&self) -> u32 {
        self.a + self.b
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.a, self.b)
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected A+B, got `{s}`"));
        let (a, b) = s.split_once('+').ok_or_else(bad)?;
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || b == 0 {
            return Err(bad());
        }
        Ok(Self { a, b })
    }
}

#[derive(Debug, Clone)]
pub struct InferQuery {
    pub split: Split,
    pub unknowns: Vec<MapRef>,
    /// Framed table of genus `a + b`.
    pub target: BettiTable,
    pub reading: Reading,
    /// Degrees of the target that must match; all when `None`.
    pub degrees: Option<Vec<i64>>,
    /// Cap on barcodes enumerated per genus.
    pub limit: usize,
}

impl InferQuery {
    pub fn new(split: Split, unknowns: Vec<MapRef>, target: BettiTable) -> Self {
        Self {
            split,
            unknowns,
            target,
            reading: Reading::Corrected,
            degrees: None,
            limit: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub map: MapRef,
    pub rank: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub assignment: Vec<Slot>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InferReport {
    pub split: Split,
    pub reading: Reading,
    pub feasible: Vec<Vec<Slot>>,
    pub rejected: Vec<Rejection>,
    /// Per degree `r`, the range of `ker lambda_r` over every realization
    /// that matches the target; `None` when nothing matches.
    pub rows: Vec<Option<KerCoker>>,
    /// The same ranges over every admissible realization, matching or not.
    pub rows_unfiltered: Vec<Option<KerCoker>>,
    pub realizations_checked: usize,
    pub realizations_matching: usize,
    /// False when some barcode enumeration hit the limit.
    pub exhaustive: bool,
}

impl InferReport {
    pub fn is_consistent(&self) -> bool {
        !self.feasible.is_empty()
    }

    /// The assignment when exactly one survives.
    pub fn unique(&self) -> Option<&[Slot]> {
        match self.feasible.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    /// Degrees whose kernel (and hence cokernel) is the same in every match.
    pub fn pinned_rows(&self) -> Vec<i64> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, k)| k.is_some_and(|k| k.is_exact()))
            .map(|(r, _)| r as i64)
            .collect()
    }
}

fn find(data: &[GenusData], genus: u32) -> Result<&GenusData> {
    data.iter()
        .find(|d| d.genus == genus)
        .ok_or_else(|| Error::Validation(format!("no boundary data supplied for genus {genus}")))
}

fn cartesian(ranges: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &hi in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=hi).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// `ker lambda_r` for every degree of the target genus.
fn lambda_profile(da: &GenusData, db: &GenusData, ws: &[&Witness]) -> Result<Vec<KerCoker>> {
    let top = 6 * (da.genus + db.genus) as i64 - 3;
    (0..=top)
        .map(|r| {
            let d = build_ab(r, da, db);
            realize(&d, ws).map(|m| ker_coker(&m))
        })
        .collect()
}

fn first_mismatch(rows: &[KerCoker], target: &BettiTable, degrees: &[i64]) -> Option<String> {
    for &d in degrees {
        let coker = rows.get(d as usize).and_then(|k| k.coker()).unwrap_or(0);
        let ker = if d >= 1 {
            rows.get(d as usize - 1).and_then(|k| k.ker()).unwrap_or(0)
        } else {
            0
        };
        let want = target.count(d).unwrap_or(u64::MAX);
        if coker + ker != want {
            return Some(format!(
                "degree {d}: coker {coker} + ker {ker} = {} but target is {want}",
                coker + ker
            ));
        }
    }
    None
}

fn merge(acc: &mut [Option<KerCoker>], rows: &[KerCoker]) -> Result<()> {
    for (slot, row) in acc.iter_mut().zip(rows) {
        *slot = Some(match slot {
            None => *row,
            Some(prev) => prev.hull(row)?,
        });
    }
    Ok(())
}

/// Enumerates rank assignments to the unknown slots consistent with the target.
pub fn infer(q: &InferQuery, data: &[GenusData]) -> Result<InferReport> {
    let Split { a, b } = q.split;
    if q.target.genus() != a + b {
        return Err(Error::Validation(format!(
            "target has genus {}, split {} needs genus {}",
            q.target.genus(),
            q.split,
            a + b
        )));
    }
    let base_a = find(data, a)?.clone();
    let base_b = find(data, b)?.clone();
    let mut ranges = Vec::new();
    for u in &q.unknowns {
        if u.kind != MapKind::Nu {
            return Err(Error::Validation(format!(
                "only nu ranks can be unknown; rho and mu follow from the Betti numbers ({u})"
            )));
        }
        if u.genus != a && u.genus != b {
            return Err(Error::Validation(format!("{u} is not part of split {}", q.split)));
        }
        let d = if u.genus == a { &base_a } else { &base_b };
        if !(0..=d.top_degree()).contains(&u.degree) {
            return Err(Error::Validation(format!("{u} has no degree slot")));
        }
        ranges.push(d.h(u.degree).min(d.nplus(u.degree)));
    }
    let degrees: Vec<i64> = q
        .degrees
        .clone()
        .unwrap_or_else(|| (0..q.target.len() as i64).collect());

    let mut report = InferReport {
        split: q.split,
        reading: q.reading,
        feasible: Vec::new(),
        rejected: Vec::new(),
        rows: vec![None; 6 * (a + b) as usize - 2],
        rows_unfiltered: vec![None; 6 * (a + b) as usize - 2],
        realizations_checked: 0,
        realizations_matching: 0,
        exhaustive: true,
    };

    'assignments: for ranks in cartesian(&ranges) {
        let slots: Vec<Slot> = q
            .unknowns
            .iter()
            .zip(&ranks)
            .map(|(&map, &rank)| Slot { map, rank })
            .collect();
        let mut da = base_a.clone();
        let mut db = base_b.clone();
        for s in &slots {
            let target = if s.map.genus == a { &mut da } else { &mut db };
            *target = target.clone().forget_nu(s.map.degree);
        }
        for s in &slots {
            let apply = |d: &GenusData| d.clone().with_nu(s.map.degree, s.rank);
            let res = if s.map.genus == a { apply(&da) } else { apply(&db) };
            match res {
                Ok(d) => {
                    if s.map.genus == a {
                        da = d.clone();
                    }
                    if s.map.genus == b {
                        db = d;
                    }
                }
                Err(e) => {
                    report.rejected.push(Rejection {
                        assignment: slots.clone(),
                        reason: e.to_string(),
                    });
                    continue 'assignments;
                }
            }
        }
        let space_a = match WitnessSpace::new(&da, q.reading, q.limit) {
            Ok(s) => s,
            Err(e) => {
                report.rejected.push(Rejection {
                    assignment: slots,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let space_b = if a == b {
            None
        } else {
            match WitnessSpace::new(&db, q.reading, q.limit) {
                Ok(s) => Some(s),
                Err(e) => {
                    report.rejected.push(Rejection {
                        assignment: slots,
                        reason: e.to_string(),
                    });
                    continue;
                }
            }
        };
        report.exhaustive &= space_a.exhaustive && space_b.as_ref().is_none_or(|s| s.exhaustive);

        let mut combos: Vec<Vec<Witness>> = Vec::new();
        for i in 0..space_a.len() {
            match &space_b {
                None => combos.push(vec![space_a.witness(i, 0)]),
                Some(sb) => {
                    for j in 0..sb.len() {
                        combos.push(vec![space_a.witness(i, 0), sb.witness(j, 0)]);
                    }
                }
            }
        }
        let db_ref = if a == b { &da } else { &db };
        let mut matched = false;
        let mut reason = None;
        for ws in &combos {
            let refs: Vec<&Witness> = ws.iter().collect();
            let rows = lambda_profile(&da, db_ref, &refs)?;
            report.realizations_checked += 1;
            merge(&mut report.rows_unfiltered, &rows)?;
            match first_mismatch(&rows, &q.target, &degrees) {
                None => {
                    matched = true;
                    report.realizations_matching += 1;
                    merge(&mut report.rows, &rows)?;
                }
                Some(why) => {
                    reason.get_or_insert(why);
                }
            }
        }
        if matched {
            report.feasible.push(slots);
        } else {
            report.rejected.push(Rejection {
                assignment: slots,
                reason: reason.unwrap_or_else(|| "no realization".into()),
            });
        }
    }
    Ok(report)
}

/// Where a maximal-rank hypothesis switches from surjective to injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaxRankSplit {
    /// Surjective through degree `3g-3`, the middle of `0..=6g-6`.
    HalfOfBase,
    /// Surjective through degree `3g-2`, the middle of `0..=6g-3`.
    Middle,
}

impl FromStr for MaxRankSplit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-of-base" => Ok(Self::HalfOfBase),
            "middle" => Ok(Self::Middle),
            _ => Err(Error::Parse(format!(
                "expected half-of-base or middle, got `{s}`"
            ))),
        }
    }
}

/// Fills every `nu` with the maximal-rank choice for the given split.
pub fn max_rank_assignment(data: &GenusData, split: MaxRankSplit) -> Result<GenusData> {
    let g = data.genus as i64;
    let last_surjective = match split {
        MaxRankSplit::HalfOfBase => 3 * g - 3,
        MaxRankSplit::Middle => 3 * g - 2,
    };
    let mut out = data.clone();
    for r in 0..=data.top_degree() {
        let rank = if r <= last_surjective {
            data.nplus(r)
        } else {
            data.h(r)
        };
        out = out.forget_nu(r).with_nu(r, rank).map_err(|e| {
            Error::Infeasible(format!(
                "maximal rank with split {split:?} fails at degree {r}: {e}"
            ))
        })?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::mod2_table;
    use crate::moduli::{genus1_data, genus2_data};

    #[test]
    fn split_parsing() {
        let s: Split = "1+2".parse().unwrap();
        assert_eq!((s.a, s.b, s.genus()), (1, 2, 3));
        assert_eq!(s.to_string(), "1+2");
        assert!("0+2".parse::<Split>().is_err());
        assert!("12".parse::<Split>().is_err());
    }

    #[test]
    fn middle_split_reproduces_genus2_ranks() {
        let d = genus2_data();
        let m = max_rank_assignment(&d, MaxRankSplit::Middle).unwrap();
        assert_eq!(m.nu, d.nu);
        let err = max_rank_assignment(&d, MaxRankSplit::HalfOfBase).unwrap_err();
        assert!(err.to_string().contains("degree 4"), "{err}");
    }

    #[test]
    fn nothing_unknown_matches_genus2() {
        let d1 = genus1_data();
        let q = InferQuery::new("1+1".parse().unwrap(), vec![], mod2_table(2));
        let rep = infer(&q, &[d1]).unwrap();
        assert_eq!(rep.feasible, vec![Vec::<Slot>::new()]);
        assert!(rep.rows.iter().all(|r| r.is_some_and(|k| k.is_exact())));
    }
}
