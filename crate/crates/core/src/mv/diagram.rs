//! Diagrams of graded summands joined by linear maps.
//!
//! A diagram stands for one block matrix from the direct sum of its domain
//! summands to the direct sum of its codomain summands. Over GF(2) the
//! Mayer-Vietoris difference map has no signs, so the block matrix is the
//! plain sum of the edge payloads.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2la::{block_assemble, BitMatrix};
use crate::moduli::{GenusData, MapProfile, MapRef};

use super::zigzag::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Explicit(BitMatrix),
    /// `I_left ⊗ f ⊗ I_right` for a boundary map `f`; `profile` is `None`
    /// where the rank of `f` is unknown.
    Map {
        map: MapRef,
        profile: Option<MapProfile>,
        dom: usize,
        cod: usize,
        left: usize,
        right: usize,
    },
}

impl Payload {
    /// `(rows, cols)`
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Payload::Explicit(m) => (m.rows(), m.cols()),
            Payload::Map {
                dom,
                cod,
                left,
                right,
                ..
            } => (left * cod * right, left * dom * right),
        }
    }

    /// Invertibility when it is decidable without realizing anything.
    pub fn is_iso(&self) -> Option<bool> {
        match self {
            Payload::Explicit(m) => Some(m.rows() == m.cols() && m.rank() == m.rows()),
            Payload::Map { profile, .. } => profile.map(|p| p.is_iso()),
        }
    }

    /// `explicit`, or the tensor shape of a boundary-map payload.
    pub fn describe(&self) -> String {
        match self {
            Payload::Explicit(_) => "explicit".into(),
            Payload::Map {
                map, left, right, ..
            } => format!("I{left} ⊗ {map} ⊗ I{right}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub domain: Vec<Summand>,
    pub codomain: Vec<Summand>,
    pub edges: Vec<Edge>,
}

#[derive(Serialize)]
struct EdgeDump<'a> {
    from: &'a str,
    to: &'a str,
    payload: String,
    rows: usize,
    cols: usize,
}

#[derive(Serialize)]
struct DiagramDump<'a> {
    domain: &'a [Summand],
    codomain: &'a [Summand],
    edges: Vec<EdgeDump<'a>>,
}

impl Diagram {
    pub fn dom_dim(&self) -> usize {
        self.domain.iter().map(|s| s.dim).sum()
    }

    pub fn cod_dim(&self) -> usize {
        self.codomain.iter().map(|s| s.dim).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty() && self.codomain.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            let (Some(src), Some(dst)) = (self.domain.get(e.from), self.codomain.get(e.to)) else {
                return Err(Error::Dimension(format!("edge {i} points outside the diagram")));
            };
            if e.payload.shape() != (dst.dim, src.dim) {
                let (r, c) = e.payload.shape();
                return Err(Error::Dimension(format!(
                    "edge {i} ({} -> {}) carries a {r}x{c} payload, expected {}x{}",
                    src.label, dst.label, dst.dim, src.dim
                )));
            }
        }
        if let Some(s) = self.domain.iter().chain(&self.codomain).find(|s| s.dim == 0) {
            return Err(Error::Dimension(format!("summand {} is zero-dimensional", s.label)));
        }
        Ok(())
    }

    /// Summand labels, dimensions and payload kinds as JSON.
    pub fn dump_json(&self) -> String {
        let dump = DiagramDump {
            domain: &self.domain,
            codomain: &self.codomain,
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let (rows, cols) = e.payload.shape();
                    EdgeDump {
                        from: &self.domain[e.from].label,
                        to: &self.codomain[e.to].label,
                        payload: e.payload.describe(),
                        rows,
                        cols,
                    }
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("plain data serializes")
    }

    /// Replaces every map payload by its matrix under the given witnesses.
    pub fn materialize(&self, witnesses: &[&Witness]) -> Result<Diagram> {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.payload = Payload::Explicit(payload_matrix(&e.payload, witnesses)?);
        }
        Ok(out)
    }
}

fn payload_matrix(p: &Payload, witnesses: &[&Witness]) -> Result<BitMatrix> {
    match p {
        Payload::Explicit(m) => Ok(m.clone()),
        Payload::Map {
            map, left, right, ..
        } => {
            let f = witnesses
                .iter()
                .find_map(|w| w.map(*map))
                .ok_or_else(|| Error::NeedsConstraint(format!("no witness for {map}")))?;
            Ok(BitMatrix::identity(*left)
                .kron(&f)
                .kron(&BitMatrix::identity(*right)))
        }
    }
}

/// The block matrix of a diagram, map payloads taken from the witnesses.
pub fn realize(d: &Diagram, witnesses: &[&Witness]) -> Result<BitMatrix> {
    d.validate()?;
    let mut grid: Vec<Vec<Option<BitMatrix>>> = vec![vec![None; d.domain.len()]; d.codomain.len()];
    for e in &d.edges {
        let m = payload_matrix(&e.payload, witnesses)?;
        let slot = &mut grid[e.to][e.from];
        *slot = Some(match slot.take() {
            None => m,
            Some(prev) => prev.add(&m)?,
        });
    }
    let rows: Vec<usize> = d.codomain.iter().map(|s| s.dim).collect();
    let cols: Vec<usize> = d.domain.iter().map(|s| s.dim).collect();
    block_assemble(&grid, &rows, &cols)
}

/// The Künneth expansion of the connecting map `lambda_r^{a,b}` for the
/// decomposition of the genus `a + b` framed space into
/// `N_a^+ × N_b^#` and `N_a^# × N_b^+`, glued along `S^2 × N_a^# × N_b^#`.
///
/// Domain summands are `H_i(S^2) ⊗ H_j(N_a^#) ⊗ H_{r-i-j}(N_b^#)`. The first
/// factor of the codomain receives `nu^a ⊗ id` from `i = 0` and
/// `rho^a ⊗ id` from `i = 2`; the second receives `id ⊗ nu^b` and
/// `id ⊗ rho^b`.
pub fn build_ab(r: i64, da: &GenusData, db: &GenusData) -> Diagram {
    let (a, b) = (da.genus, db.genus);
    let ha = |k: i64| da.h(k) as usize;
    let hb = |k: i64| db.h(k) as usize;
    let na = |k: i64| da.nplus(k) as usize;
    let nb = |k: i64| db.nplus(k) as usize;
    let top_a = 6 * a as i64 - 3;
    let top_a_plus = 6 * a as i64;

    let mut d = Diagram::default();
    let mut dom_index = std::collections::HashMap::new();
    for i in [0i64, 2] {
        for j in 0..=top_a {
            let dim = ha(j) * hb(r - i - j);
            if dim > 0 {
                dom_index.insert((i, j), d.domain.len());
                d.domain.push(Summand {
                    label: format!("H{i}(S2)⊗H{j}(N{a}#)⊗H{}(N{b}#)", r - i - j),
                    dim,
                });
            }
        }
    }
    let mut red = std::collections::HashMap::new();
    for k in 0..=top_a_plus {
        let dim = na(k) * hb(r - k);
        if dim > 0 {
            red.insert(k, d.codomain.len());
            d.codomain.push(Summand {
                label: format!("H{k}(N{a}+)⊗H{}(N{b}#)", r - k),
                dim,
            });
        }
    }
    let mut blue = std::collections::HashMap::new();
    for j in 0..=top_a {
        let dim = ha(j) * nb(r - j);
        if dim > 0 {
            blue.insert(j, d.codomain.len());
            d.codomain.push(Summand {
                label: format!("H{j}(N{a}#)⊗H{}(N{b}+)", r - j),
                dim,
            });
        }
    }
    let mut edge = |from: Option<&usize>, to: Option<&usize>, payload: Payload| {
        if let (Some(&from), Some(&to)) = (from, to) {
            d.edges.push(Edge { from, to, payload });
        }
    };
    for j in 0..=top_a {
        // i = 0: W_j ⊗ V_{r-j}
        let src = dom_index.get(&(0, j));
        edge(
            src,
            red.get(&j),
            Payload::Map {
                map: MapRef::nu(a, j),
                profile: da.nu(j),
                dom: ha(j),
                cod: na(j),
                left: 1,
                right: hb(r - j),
            },
        );
        edge(
            src,
            blue.get(&j),
            Payload::Map {
                map: MapRef::nu(b, r - j),
                profile: db.nu(r - j),
                dom: hb(r - j),
                cod: nb(r - j),
                left: ha(j),
                right: 1,
            },
        );
        // i = 2: W_j ⊗ V_{r-2-j}
        let src = dom_index.get(&(2, j));
        edge(
            src,
            red.get(&(j + 2)),
            Payload::Map {
                map: MapRef::rho(a, j + 2),
                profile: Some(da.rho(j + 2)),
                dom: ha(j),
                cod: na(j + 2),
                left: 1,
                right: hb(r - 2 - j),
            },
        );
        edge(
            src,
            blue.get(&j),
            Payload::Map {
                map: MapRef::rho(b, r - j),
                profile: Some(db.rho(r - j)),
                dom: hb(r - j - 2),
                cod: nb(r - j),
                left: ha(j),
                right: 1,
            },
        );
    }
    d
}

pub fn build_1g(r: i64, d1: &GenusData, dg: &GenusData) -> Result<Diagram> {
    if d1.genus != 1 {
        return Err(Error::Validation(format!(
            "first factor must have genus 1, got {}",
            d1.genus
        )));
    }
    Ok(build_ab(r, d1, dg))
}

pub fn build_2g(r: i64, d2: &GenusData, dg: &GenusData) -> Result<Diagram> {
    if d2.genus != 2 {
        return Err(Error::Validation(format!(
            "first factor must have genus 2, got {}",
            d2.genus
        )));
    }
    Ok(build_ab(r, d2, dg))
}

fn remove_nodes(d: &mut Diagram, x: usize, y: usize) {
    d.edges.retain(|e| e.from != x && e.to != y);
    d.domain.remove(x);
    d.codomain.remove(y);
    for e in &mut d.edges {
        if e.from > x {
            e.from -= 1;
        }
        if e.to > y {
            e.to -= 1;
        }
    }
}

/// One elimination step, or `None` at a fixpoint.
fn eliminate_once(d: &Diagram) -> Option<Diagram> {
    // an isomorphism whose codomain no other edge touches
    for e in &d.edges {
        if e.payload.is_iso() != Some(true) {
            continue;
        }
        if d.edges.iter().filter(|o| o.to == e.to).count() == 1 {
            let mut out = d.clone();
            remove_nodes(&mut out, e.from, e.to);
            return Some(out);
        }
    }
    // an explicit isomorphism with explicit neighbours: Schur complement
    for e in &d.edges {
        let Payload::Explicit(f) = &e.payload else {
            continue;
        };
        if e.payload.is_iso() != Some(true) {
            continue;
        }
        let touching = d.edges.iter().filter(|o| o.from == e.from || o.to == e.to);
        if touching
            .clone()
            .any(|o| !matches!(o.payload, Payload::Explicit(_)))
        {
            continue;
        }
        let f_inv = f.inverse().ok()?;
        let mut out = d.clone();
        let into_y: Vec<(usize, BitMatrix)> = d
            .edges
            .iter()
            .filter(|o| o.to == e.to && o.from != e.from)
            .map(|o| match &o.payload {
                Payload::Explicit(m) => (o.from, m.clone()),
                Payload::Map { .. } => unreachable!(),
            })
            .collect();
        let out_of_x: Vec<(usize, BitMatrix)> = d
            .edges
            .iter()
            .filter(|o| o.from == e.from && o.to != e.to)
            .map(|o| match &o.payload {
                Payload::Explicit(m) => (o.to, m.clone()),
                Payload::Map { .. } => unreachable!(),
            })
            .collect();
        for (x2, g) in &into_y {
            for (y2, h) in &out_of_x {
                let corr = h
                    .compose(&f_inv)
                    .and_then(|t| t.compose(g))
                    .expect("shapes agree");
                match out.edges.iter_mut().find(|o| o.from == *x2 && o.to == *y2) {
                    Some(o) => {
                        let Payload::Explicit(m) = &o.payload else {
                            unreachable!()
                        };
                        o.payload = Payload::Explicit(m.add(&corr).expect("same shape"));
                    }
                    None => out.edges.push(Edge {
                        from: *x2,
                        to: *y2,
                        payload: Payload::Explicit(corr),
                    }),
                }
            }
        }
        remove_nodes(&mut out, e.from, e.to);
        out.edges.retain(|o| match &o.payload {
            Payload::Explicit(m) => !m.is_zero(),
            Payload::Map { .. } => true,
        });
        return Some(out);
    }
    None
}

/// Gaussian elimination of a diagram to a fixpoint. Kernel and cokernel of
/// the realized block matrix are unchanged.
///
/// An isomorphism whose codomain no other edge touches is removed with its
/// domain and codomain. An explicit isomorphism `f : X -> Y` whose
/// neighbours are all explicit is removed too, after adding `h f^{-1} g` to
/// every path `X' -g-> Y`, `X -h-> Y'`.
pub fn eliminate(d: &Diagram) -> Diagram {
    let mut cur = d.clone();
    while let Some(next) = eliminate_once(&cur) {
        cur = next;
    }
    cur
}
