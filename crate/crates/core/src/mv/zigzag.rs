//! Explicit matrices for the boundary maps of one genus.
//!
//! Per degree parity the maps form a zigzag
//! `P_p <- V_p -> P_{p+2} <- V_{p+2} -> ...` with `V_k = H_k(N^#)`,
//! `P_k = H_k(N^+)`, `nu_k : V_k -> P_k` and `rho_{k+2} : V_k -> P_{k+2}`.
//! Every representation of such a quiver is a sum of interval modules, so a
//! realization up to isomorphism is a barcode. The ranks of `nu`, `rho` and
//! `mu` fix the number of bars through each arrow and each sink; the
//! remaining freedom is which bars run further. Kernels and cokernels of the
//! Mayer-Vietoris maps are isomorphism invariants, so enumerating barcodes
//! enumerates every realization that matters.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2la::{column_space_intersection_dim, BitMatrix};
use crate::moduli::{ConstraintKind, GenusData, MapKind, MapRef, SideConstraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Node {
    /// `H_k(N^+)`
    P(i64),
    /// `H_k(N^#)`
    V(i64),
}

/// One parity class of the boundary maps, as a linear quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub parity: i64,
    pub nodes: Vec<Node>,
    pub dims: Vec<u64>,
    /// Rank of the arrow between node `i` and node `i + 1`.
    pub ranks: Vec<u64>,
    /// At a sink with two neighbours, the number of bars through both arrows.
    pub overlaps: Vec<u64>,
}

impl Chain {
    pub fn new(data: &GenusData, parity: i64) -> Result<Self> {
        let unknown = data.unknown_nu();
        if !unknown.is_empty() {
            return Err(Error::NeedsConstraint(format!(
                "nu^{} unknown at degrees {unknown:?}",
                data.genus
            )));
        }
        let top = data.top_degree();
        let mut nodes = Vec::new();
        let mut dims = Vec::new();
        let mut ranks = Vec::new();
        let mut overlaps = Vec::new();
        let mut k = parity;
        while k <= top {
            let nu = data.nu(k).expect("all known");
            let rho = data.rho(k);
            let mu = data.mu(k);
            if mu.rank < nu.rank.max(rho.rank) || mu.rank > nu.rank + rho.rank {
                return Err(Error::Consistency(format!(
                    "mu_{k} = {mu} cannot be the sum of nu_{k} = {nu} and rho_{k} = {rho}"
                )));
            }
            nodes.push(Node::P(k));
            dims.push(data.nplus(k));
            overlaps.push(nu.rank + rho.rank - mu.rank);
            if k > parity {
                ranks.push(rho.rank);
            }
            nodes.push(Node::V(k));
            dims.push(data.h(k));
            overlaps.push(0);
            ranks.push(nu.rank);
            k += 2;
        }
        Ok(Self {
            parity,
            nodes,
            dims,
            ranks,
            overlaps,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `mult` copies of the interval module supported on nodes `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bar {
    pub start: usize,
    pub end: usize,
    pub mult: u64,
}

pub type Barcode = Vec<Bar>;

/// Distributions of `total` continuing bars over start classes with the
/// given capacities, oldest classes filled first.
fn compositions(caps: &[u64], total: u64) -> Vec<Vec<u64>> {
    fn go(caps: &[u64], total: u64, rest_cap: &[u64], acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if caps.is_empty() {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let rest = rest_cap[1];
        let hi = caps[0].min(total);
        let lo = total.saturating_sub(rest);
        if lo > hi {
            return;
        }
        for c in (lo..=hi).rev() {
            acc.push(c);
            go(&caps[1..], total - c, &rest_cap[1..], acc, out);
            acc.pop();
        }
    }
    let mut rest_cap = vec![0; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        rest_cap[i] = rest_cap[i + 1] + caps[i];
    }
    let mut out = Vec::new();
    go(caps, total, &rest_cap, &mut Vec::new(), &mut out);
    out
}

struct Search<'a> {
    chain: &'a Chain,
    limit: usize,
    rng: Option<ChaCha8Rng>,
    out: Vec<Barcode>,
    truncated: bool,
}

impl Search<'_> {
    fn step(&mut self, pos: usize, mut open: Vec<u64>, bars: &mut Vec<Bar>) {
        if self.out.len() >= self.limit {
            self.truncated = true;
            return;
        }
        let c = self.chain;
        let carried: u64 = open.iter().sum();
        let Some(fresh) = c.dims[pos].checked_sub(carried) else {
            return;
        };
        open.push(fresh);
        let close = |bars: &mut Vec<Bar>, s: usize, n: u64| {
            if n > 0 {
                bars.push(Bar {
                    start: s,
                    end: pos,
                    mult: n,
                });
            }
        };
        if pos + 1 == c.len() {
            let mark = bars.len();
            for (s, &n) in open.iter().enumerate() {
                close(bars, s, n);
            }
            let mut code = bars.clone();
            code.sort();
            self.out.push(code);
            bars.truncate(mark);
            return;
        }
        let r = c.ranks[pos];
        let mut options = match c.nodes[pos] {
            Node::P(_) if pos > 0 => {
                let o = c.overlaps[pos];
                if o > carried || r < o || r - o > fresh {
                    return;
                }
                compositions(&open[..pos], o)
                    .into_iter()
                    .map(|mut v| {
                        v.push(r - o);
                        v
                    })
                    .collect()
            }
            _ => compositions(&open, r),
        };
        if let Some(rng) = self.rng.as_mut() {
            options.shuffle(rng);
        }
        for choice in options {
            let mark = bars.len();
            for (s, (&n, &keep)) in open.iter().zip(&choice).enumerate() {
                close(bars, s, n - keep);
            }
            self.step(pos + 1, choice, bars);
            bars.truncate(mark);
            if self.out.len() >= self.limit || (self.rng.is_some() && !self.out.is_empty()) {
                if self.out.len() >= self.limit {
                    self.truncated = true;
                }
                return;
            }
        }
    }
}

/// Every barcode consistent with the chain's ranks, up to `limit`.
/// The flag is true when the list is complete.
pub fn enumerate_barcodes(chain: &Chain, limit: usize) -> (Vec<Barcode>, bool) {
    if chain.is_empty() {
        return (vec![Vec::new()], true);
    }
    let mut s = Search {
        chain,
        limit,
        rng: None,
        out: Vec::new(),
        truncated: false,
    };
    s.step(0, Vec::new(), &mut Vec::new());
    let complete = !s.truncated;
    (s.out, complete)
}

/// One barcode chosen by a random walk through the choices.
pub fn sample_barcode(chain: &Chain, seed: u64) -> Option<Barcode> {
    if chain.is_empty() {
        return Some(Vec::new());
    }
    let mut s = Search {
        chain,
        limit: 1,
        rng: Some(ChaCha8Rng::seed_from_u64(seed)),
        out: Vec::new(),
        truncated: false,
    };
    s.step(0, Vec::new(), &mut Vec::new());
    s.out.pop()
}

/// Explicit `nu_k` and `rho_k` for one genus, `k = 0..=6g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub genus: u32,
    pub nu: Vec<BitMatrix>,
    pub rho: Vec<BitMatrix>,
}

impl Witness {
    /// Realizes one barcode per parity. `seed == 0` keeps the bar bases;
    /// other seeds change basis independently at every node.
    pub fn from_barcodes(data: &GenusData, chains: &[Chain; 2], codes: [&Barcode; 2], seed: u64) -> Self {
        let top = data.top_degree();
        let mut nu: Vec<BitMatrix> = (0..=top)
            .map(|k| BitMatrix::zeros(data.nplus(k) as usize, data.h(k) as usize))
            .collect();
        let mut rho: Vec<BitMatrix> = (0..=top)
            .map(|k| BitMatrix::zeros(data.nplus(k) as usize, data.h(k - 2) as usize))
            .collect();
        let mut rng = (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed));
        for (chain, code) in chains.iter().zip(codes) {
            // index of every bar copy at every node it covers
            let mut basis: Vec<Vec<(usize, u64)>> = vec![Vec::new(); chain.len()];
            for (b, bar) in code.iter().enumerate() {
                for copy in 0..bar.mult {
                    for slot in basis.iter_mut().take(bar.end + 1).skip(bar.start) {
                        slot.push((b, copy));
                    }
                }
            }
            let change: Vec<BitMatrix> = chain
                .dims
                .iter()
                .map(|&d| match rng.as_mut() {
                    Some(rng) => BitMatrix::random_invertible(d as usize, rng),
                    None => BitMatrix::identity(d as usize),
                })
                .collect();
            for i in 0..chain.len().saturating_sub(1) {
                let (src, dst) = match (chain.nodes[i], chain.nodes[i + 1]) {
                    (Node::P(_), Node::V(_)) => (i + 1, i),
                    _ => (i, i + 1),
                };
                let mut m = BitMatrix::zeros(basis[dst].len(), basis[src].len());
                for (c, key) in basis[src].iter().enumerate() {
                    if let Some(r) = basis[dst].iter().position(|k| k == key) {
                        m.set(r, c, true);
                    }
                }
                let m = change[dst]
                    .compose(&m)
                    .and_then(|x| x.compose(&change[src]))
                    .expect("shapes agree");
                match chain.nodes[dst] {
                    Node::P(k) if matches!(chain.nodes[src], Node::V(j) if j == k) => {
                        nu[k as usize] = m
                    }
                    Node::P(k) => rho[k as usize] = m,
                    Node::V(_) => unreachable!("arrows point into P nodes"),
                }
            }
        }
        Self {
            genus: data.genus,
            nu,
            rho,
        }
    }

    /// The matrix of a boundary map; `mu_r` has domain `V_r ⊕ V_{r-2}`.
    pub fn map(&self, m: MapRef) -> Option<BitMatrix> {
        if m.genus != self.genus {
            return None;
        }
        let k = usize::try_from(m.degree).ok()?;
        match m.kind {
            MapKind::Nu => self.nu.get(k).cloned(),
            MapKind::Rho => self.rho.get(k).cloned(),
            MapKind::Mu => {
                let (a, b) = (self.nu.get(k)?, self.rho.get(k)?);
                BitMatrix::hstack(&[a, b]).ok()
            }
        }
    }
}

/// How the printed side constraints are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// Operands are taken in the data's own genus, and a `mu` kernel paired
    /// with a map on one summand is projected onto that summand.
    Corrected,
    /// Operands are taken exactly as written.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Holds,
    Fails { observed: u64 },
    IllTyped(String),
}

/// Domain of a boundary map of the given genus, as `(component degrees)`.
fn domain_parts(m: MapRef) -> Vec<i64> {
    match m.kind {
        MapKind::Nu => vec![m.degree],
        MapKind::Rho => vec![m.degree - 2],
        MapKind::Mu => vec![m.degree, m.degree - 2],
    }
}

/// Columns spanning `{y in V_part : some (x, y) in ker mu}` (projection of `ker mu`).
fn projected_mu_kernel(w: &Witness, d: i64, part: i64) -> Option<BitMatrix> {
    let mu = w.map(MapRef::mu(w.genus, d))?;
    let basis = mu.kernel_basis();
    let nv = w.nu[d as usize].cols();
    let (r0, rows) = if part == d {
        (0, nv)
    } else {
        (nv, basis.rows() - nv)
    };
    Some(basis.submatrix(r0, 0, rows, basis.cols()))
}

fn embed(basis: &BitMatrix, parts: &[(i64, usize)], part: i64) -> Option<BitMatrix> {
    let mut offset = 0;
    let total: usize = parts.iter().map(|p| p.1).sum();
    for &(deg, dim) in parts {
        if deg == part {
            let mut out = BitMatrix::zeros(total, basis.cols());
            for r in 0..dim {
                for c in 0..basis.cols() {
                    out.set(offset + r, c, basis.get(r, c));
                }
            }
            return Some(out);
        }
        offset += dim;
    }
    None
}

/// Evaluates a side constraint on a witness of the same genus as the data.
pub fn evaluate(c: &SideConstraint, w: &Witness, reading: Reading) -> Outcome {
    let ops: Vec<(MapRef, bool)> = match reading {
        Reading::Corrected => c
            .operands
            .iter()
            .map(|o| {
                (
                    MapRef {
                        genus: w.genus,
                        ..o.map
                    },
                    o.inverse,
                )
            })
            .collect(),
        Reading::Literal => c.operands.iter().map(|o| (o.map, o.inverse)).collect(),
    };
    for (m, _) in &ops {
        if m.genus != w.genus {
            return Outcome::IllTyped(format!(
                "{m} belongs to genus {}, not to the genus-{} data carrying the constraint",
                m.genus, w.genus
            ));
        }
        if w.map(*m).is_none() {
            return Outcome::IllTyped(format!("{m} has no degree slot"));
        }
    }
    let get = |m: MapRef| w.map(m).expect("checked");
    let verdict = |observed: u64| {
        if observed == c.value {
            Outcome::Holds
        } else {
            Outcome::Fails { observed }
        }
    };
    match c.kind {
        ConstraintKind::KernelIntersectionDim => {
            let [(a, _), (b, _)] = ops[..] else {
                return Outcome::IllTyped("expects two operands".into());
            };
            let (pa, pb) = (domain_parts(a), domain_parts(b));
            let dims = |m: MapRef| -> Vec<(i64, usize)> {
                let ps = domain_parts(m);
                let sizes: Vec<usize> = ps
                    .iter()
                    .map(|&k| if k < 0 { 0 } else { w.nu.get(k as usize).map_or(0, |x| x.cols()) })
                    .collect();
                ps.into_iter().zip(sizes).collect()
            };
            let (ka, kb) = (get(a).kernel_basis(), get(b).kernel_basis());
            let dim = if pa == pb {
                column_space_intersection_dim(&ka, &kb)
            } else if pa.len() == 1 && pb.contains(&pa[0]) {
                match reading {
                    Reading::Corrected => match projected_mu_kernel(w, b.degree, pa[0]) {
                        Some(proj) => column_space_intersection_dim(&ka, &proj),
                        None => return Outcome::IllTyped("projection failed".into()),
                    },
                    Reading::Literal => match embed(&ka, &dims(b), pa[0]) {
                        Some(e) => column_space_intersection_dim(&e, &kb),
                        None => return Outcome::IllTyped("embedding failed".into()),
                    },
                }
            } else if pb.len() == 1 && pa.contains(&pb[0]) {
                match reading {
                    Reading::Corrected => match projected_mu_kernel(w, a.degree, pb[0]) {
                        Some(proj) => column_space_intersection_dim(&kb, &proj),
                        None => return Outcome::IllTyped("projection failed".into()),
                    },
                    Reading::Literal => match embed(&kb, &dims(a), pb[0]) {
                        Some(e) => column_space_intersection_dim(&e, &ka),
                        None => return Outcome::IllTyped("embedding failed".into()),
                    },
                }
            } else {
                return Outcome::IllTyped(format!("kernels of {a} and {b} lie in different spaces"));
            };
            match dim {
                Ok(d) => verdict(d as u64),
                Err(e) => Outcome::IllTyped(e.to_string()),
            }
        }
        ConstraintKind::ImageContainment => {
            let [(a, _), (b, _)] = ops[..] else {
                return Outcome::IllTyped("expects two operands".into());
            };
            let (ma, mb) = (get(a), get(b));
            match BitMatrix::hstack(&[&ma, &mb]) {
                Ok(j) if j.rank() == mb.rank() => Outcome::Holds,
                Ok(j) => Outcome::Fails {
                    observed: (j.rank() - mb.rank()) as u64,
                },
                Err(_) => Outcome::IllTyped(format!("{a} and {b} have different codomains")),
            }
        }
        ConstraintKind::CompositeKernelDim => {
            let mut acc: Option<BitMatrix> = None;
            for &(m, inverse) in ops.iter().rev() {
                let mut f = get(m);
                if inverse {
                    match f.inverse() {
                        Ok(inv) => f = inv,
                        Err(_) => return Outcome::IllTyped(format!("{m} is not invertible")),
                    }
                }
                acc = Some(match acc {
                    None => f,
                    Some(prev) => match f.compose(&prev) {
                        Ok(x) => x,
                        Err(_) => return Outcome::IllTyped(format!("{m} does not compose")),
                    },
                });
            }
            match acc {
                Some(m) => verdict(m.kernel_dim() as u64),
                None => Outcome::IllTyped("no operands".into()),
            }
        }
    }
}

/// All realizations of one genus's data that satisfy its side constraints.
#[derive(Debug, Clone)]
pub struct WitnessSpace {
    pub data: GenusData,
    pub reading: Reading,
    pub chains: [Chain; 2],
    /// Admissible barcode pairs (even parity, odd parity).
    pub codes: Vec<[Barcode; 2]>,
    /// False when enumeration was cut off at the limit.
    pub exhaustive: bool,
}

impl WitnessSpace {
    pub fn new(data: &GenusData, reading: Reading, limit: usize) -> Result<Self> {
        let chains = [Chain::new(data, 0)?, Chain::new(data, 1)?];
        let (even, e_done) = enumerate_barcodes(&chains[0], limit);
        let (odd, o_done) = enumerate_barcodes(&chains[1], limit);
        if even.is_empty() || odd.is_empty() {
            return Err(Error::Infeasible(format!(
                "genus {} ranks admit no realization",
                data.genus
            )));
        }
        let mut codes = Vec::new();
        let mut failures: Vec<Vec<String>> = Vec::new();
        let mut exhaustive = e_done && o_done;
        'outer: for e in &even {
            for o in &odd {
                if codes.len() + failures.len() >= limit {
                    exhaustive = false;
                    break 'outer;
                }
                let w = Witness::from_barcodes(data, &chains, [e, o], 0);
                let bad: Vec<String> = data
                    .constraints
                    .iter()
                    .filter_map(|c| match evaluate(c, &w, reading) {
                        Outcome::Holds => None,
                        Outcome::Fails { observed } => {
                            Some(format!("{c} (observed {observed})"))
                        }
                        Outcome::IllTyped(why) => Some(format!("{c} (ill-typed: {why})")),
                    })
                    .collect();
                if bad.is_empty() {
                    codes.push([e.clone(), o.clone()]);
                } else {
                    failures.push(bad);
                }
            }
        }
        if codes.is_empty() {
            let mut common = failures.first().cloned().unwrap_or_default();
            common.retain(|c| failures.iter().all(|f| f.contains(c)));
            if common.is_empty() {
                common = failures.concat();
                common.sort();
                common.dedup();
            }
            return Err(Error::Infeasible(format!(
                "genus {} under the {reading:?} reading: {}",
                data.genus,
                common.join("; ")
            )));
        }
        Ok(Self {
            data: data.clone(),
            reading,
            chains,
            codes,
            exhaustive,
        })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn witness(&self, index: usize, seed: u64) -> Witness {
        let [e, o] = &self.codes[index % self.codes.len()];
        Witness::from_barcodes(&self.data, &self.chains, [e, o], seed)
    }

    /// Seed 0 is the first barcode in its bar basis; seed `s` uses barcode
    /// `s mod len` in a basis scrambled by `s`.
    pub fn seeded(&self, seed: u64) -> Witness {
        self.witness((seed % self.codes.len() as u64) as usize, seed)
    }

    /// A witness drawn by random walk, for data too large to enumerate.
    /// Side constraints are not imposed.
    pub fn sampled(data: &GenusData, seed: u64) -> Result<Witness> {
        let chains = [Chain::new(data, 0)?, Chain::new(data, 1)?];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = sample_barcode(&chains[0], rng.gen()).ok_or_else(|| {
            Error::Infeasible(format!("genus {} even ranks admit no realization", data.genus))
        })?;
        let o = sample_barcode(&chains[1], rng.gen()).ok_or_else(|| {
            Error::Infeasible(format!("genus {} odd ranks admit no realization", data.genus))
        })?;
        Ok(Witness::from_barcodes(data, &chains, [&e, &o], seed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{genus1_data, genus2_data};

    fn ranks_match(data: &GenusData, w: &Witness) {
        for k in 0..=data.top_degree() {
            let nu = data.nu(k).unwrap();
            assert_eq!(w.nu[k as usize].rank() as u64, nu.rank, "nu_{k}");
            assert_eq!(w.rho[k as usize].rank() as u64, data.rho(k).rank, "rho_{k}");
            let mu = w.map(MapRef::mu(data.genus, k)).unwrap();
            assert_eq!(mu.rank() as u64, data.mu(k).rank, "mu_{k}");
        }
    }

    #[test]
    fn compositions_fill_oldest_first() {
        assert_eq!(compositions(&[2, 1], 2), vec![vec![2, 0], vec![1, 1]]);
        assert_eq!(compositions(&[1, 1], 3), Vec::<Vec<u64>>::new());
        assert_eq!(compositions(&[], 0), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn genus1_realization_is_unique() {
        let d = genus1_data();
        let space = WitnessSpace::new(&d, Reading::Corrected, 1000).unwrap();
        assert!(space.exhaustive);
        assert_eq!(space.len(), 1);
        for seed in 0..5 {
            ranks_match(&d, &space.seeded(seed));
        }
    }

    #[test]
    fn genus2_realizations_match_ranks() {
        let d = genus2_data();
        let space = WitnessSpace::new(&d, Reading::Corrected, 1000).unwrap();
        assert!(space.exhaustive);
        assert!(!space.is_empty());
        for i in 0..space.len() {
            ranks_match(&d, &space.witness(i, 0));
            ranks_match(&d, &space.witness(i, 7 + i as u64));
        }
    }

    #[test]
    fn literal_reading_of_genus2_facts_is_infeasible() {
        let err = WitnessSpace::new(&genus2_data(), Reading::Literal, 1000).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
    }

    #[test]
    fn image_containment_in_genus1() {
        let d = genus1_data();
        let w = WitnessSpace::new(&d, Reading::Corrected, 10).unwrap().seeded(3);
        let stacked = BitMatrix::hstack(&[&w.nu[3], &w.rho[3]]).unwrap();
        assert_eq!(stacked.rank(), 1);
    }

    #[test]
    fn sampled_witness_has_right_ranks() {
        let d = genus2_data();
        ranks_match(&d, &WitnessSpace::sampled(&d, 11).unwrap());
    }
}
