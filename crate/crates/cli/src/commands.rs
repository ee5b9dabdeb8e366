use std::path::Path;

use framed_betti::betti::{m_coeff, middle_closed_form, mod2_tables, rational_tables, total_rank_closed_form, verify_step};
use framed_betti::golden;
use framed_betti::moduli::{
    compare_with_printed, genus1_data, genus2_data, mu_kernel_dim, nhat_betti, nplus_betti, PrintedRow,
    Severity,
};
use framed_betti::mv::{
    build_ab, glue, ker_coker, lemma4, max_rank_assignment, realize, InferQuery, Lemma4, MaxRankSplit,
    Reading, Split, Witness, WitnessSpace,
};
use framed_betti::serre::{genus2_ring, load_alpha_profile, serre_betti};
use framed_betti::{
    mod2_table, rational_table, BettiTable, Error, Field, GenusData, KerCoker, MapProfile, MapRef, Result,
};

use crate::output::{Cell, Document, Section};
use crate::{Outcome, EXIT_INCONSISTENT, EXIT_OK};

fn table(g: u32, field: Field) -> BettiTable {
    match field {
        Field::F2 => mod2_table(g),
        Field::Q => rational_table(g),
    }
}

fn field_name(field: Field) -> &'static str {
    match field {
        Field::F2 => "Z/2",
        Field::Q => "Q",
    }
}

pub fn betti(g: u32, field: Field) -> Result<Document> {
    let t = table(g, field);
    let mut s = Section::new(format!("{} Betti numbers, framed genus {g}", field_name(field)), &["r", "h"]);
    for (r, v) in t.values().iter().enumerate() {
        s.row(vec![r.into(), v.clone().into()]);
    }
    let mut doc = Document::new("betti");
    doc.push(s);
    Ok(doc)
}

pub fn tables(max_g: u32, full: bool, field: Option<Field>) -> Document {
    let fields = match field {
        Some(f) => vec![f],
        None => vec![Field::F2, Field::Q],
    };
    let mut doc = Document::new("tables");
    for f in fields {
        let cols = match f {
            Field::F2 => mod2_tables(max_g),
            Field::Q => rational_tables(max_g),
        };
        let shown = |t: &BettiTable| if full { t.values().len() } else { t.half().len() };
        let depth = cols.iter().map(shown).max().unwrap_or(0);
        let names: Vec<String> = std::iter::once("r".to_string())
            .chain((1..=max_g).map(|g| format!("g={g}")))
            .collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let extent = if full { "" } else { ", lower half" };
        let mut s = Section::new(format!("{} framed Betti numbers{extent}", field_name(f)), &names);
        for r in 0..depth {
            let mut row: Vec<Cell> = vec![r.into()];
            for t in &cols {
                row.push(if r < shown(t) { t.values()[r].clone().into() } else { Cell::Empty });
            }
            s.row(row);
        }
        if !full {
            s.note("column g lists degrees 0..=3g-2; the rest follows from h_r = h_{6g-3-r}");
        }
        doc.push(s);
    }
    doc
}

pub fn nplus(g: u32) -> Result<Document> {
    let h = mod2_table(g);
    let np = nplus_betti(&h)?;
    let nh = nhat_betti(&h)?;
    let mut s = Section::new(
        format!("plus piece of genus {g}, Z/2 coefficients"),
        &["r", "h", "m", "n_plus", "n_rel", "ker_mu"],
    );
    let depth = np.len().max(nh.len()).max(h.len());
    for r in 0..depth as i64 {
        s.row(vec![
            r.into(),
            h.at(r).into(),
            m_coeff(g, r).into(),
            np.at(r).into(),
            nh.at(r).into(),
            mu_kernel_dim(&h, r).into(),
        ]);
    }
    s.note("n_rel counts the pair (plus piece, boundary); ker_mu is the kernel of the boundary inclusion");
    let mut doc = Document::new("nplus");
    doc.push(s);
    Ok(doc)
}

fn published_data(g: u32) -> Result<GenusData> {
    match g {
        1 => Ok(genus1_data()),
        2 => Ok(genus2_data()),
        _ => GenusData::derive(&mod2_table(g)),
    }
}

fn reference_rows(g: u32) -> Option<&'static [PrintedRow]> {
    match g {
        1 => Some(golden::GENUS1_ROWS),
        2 => Some(golden::GENUS2_ROWS),
        _ => None,
    }
}

pub fn profiles(g: u32) -> Result<Document> {
    let data = published_data(g)?;
    let mut s = Section::new(
        format!("boundary maps of genus {g} (rank_dom^cod)"),
        &["r", "h", "n_plus", "mu", "rho", "nu"],
    );
    for r in 0..=data.top_degree() {
        s.row(vec![
            r.into(),
            data.h(r).into(),
            data.nplus(r).into(),
            data.mu(r).to_string().into(),
            data.rho(r).to_string().into(),
            data.nu(r).map_or("?".into(), |p| p.to_string()).into(),
        ]);
    }
    for c in &data.constraints {
        s.note(format!("constraint: {c}"));
    }
    if !data.unknown_nu().is_empty() {
        s.note("nu ranks marked ? are not determined by the Betti numbers alone");
    }
    let mut doc = Document::new("profiles");
    doc.push(s);
    if let Some(rows) = reference_rows(g) {
        let diags = compare_with_printed(&data, rows);
        let mut d = Section::new("comparison with reference rows", &["code", "severity", "message"]);
        for x in &diags {
            d.row(vec![x.code.clone().into(), severity(x.severity).into(), x.message.clone().into()]);
        }
        if diags.is_empty() {
            d.note("every entry matches");
        }
        doc.push(d);
    }
    Ok(doc)
}

fn severity(s: Severity) -> &'static str {
    match s {
        Severity::Info => "info",
        Severity::Error => "error",
    }
}

pub fn serre(genus: Option<u32>, ring_file: Option<&Path>) -> Result<Outcome> {
    let action = match ring_file {
        Some(p) => load_alpha_profile(p).map_err(|e| match e {
            Error::Io(io) => Error::Validation(format!("cannot read ring file {}: {io}", p.display())),
            other => other,
        })?,
        None => {
            debug_assert_eq!(genus, Some(2));
            genus2_ring()
        }
    };
    let g = action.genus();
    let h = serre_betti(&action)?;
    let mut s = Section::new(
        format!("framed genus {g} from the action of the degree-2 class"),
        &["r", "base", "alpha_rank", "h"],
    );
    for r in 0..h.len() as i64 {
        s.row(vec![r.into(), action.dim(r).into(), action.rank(r).into(), h.at(r).into()]);
    }
    let expected = mod2_table(g);
    let off: Vec<String> = (0..h.len() as i64)
        .filter(|&r| h.at(r) != expected.at(r))
        .map(|r| r.to_string())
        .collect();
    let code = if off.is_empty() {
        s.note("agrees with the recursive Z/2 table");
        EXIT_OK
    } else {
        s.note(format!("differs from the recursive Z/2 table at degrees {}", off.join(", ")));
        EXIT_INCONSISTENT
    };
    let mut doc = Document::new("serre");
    doc.push(s);
    Ok(Outcome { document: doc, code })
}

fn boundary_data(g: u32, max_rank: Option<MaxRankSplit>) -> Result<GenusData> {
    let base = published_data(g)?;
    match max_rank {
        Some(split) => max_rank_assignment(&base, split),
        None if g >= 3 => Err(Error::NeedsConstraint(format!(
            "the nu ranks of genus {g} are unknown; pass --max-rank"
        ))),
        None => Ok(base),
    }
}

/// Enumerated and constrained for published data, a random walk otherwise.
fn witness(data: &GenusData, seed: u64) -> Result<Witness> {
    if data.genus <= 2 {
        Ok(WitnessSpace::new(data, Reading::Corrected, 4096)?.seeded(seed))
    } else {
        WitnessSpace::sampled(data, seed)
    }
}

fn span(lo: u64, hi: u64) -> Cell {
    if lo == hi {
        lo.into()
    } else {
        format!("{lo}..{hi}").into()
    }
}

pub struct MvArgs {
    pub split: Split,
    pub degree: Option<i64>,
    pub seed: u64,
    pub samples: u64,
    pub max_rank: Option<MaxRankSplit>,
    pub dump: bool,
}

pub fn mv(a: &MvArgs) -> Result<Outcome> {
    let Split { a: ga, b: gb } = a.split;
    let g = ga + gb;
    let da = boundary_data(ga, a.max_rank)?;
    let db = boundary_data(gb, a.max_rank)?;
    let top = 6 * g as i64 - 3;
    let degrees: Vec<i64> = match a.degree {
        Some(r) if (0..=top).contains(&r) => vec![r],
        Some(r) => {
            return Err(Error::Validation(format!(
                "degree {r} is outside 0..={top} for split {}",
                a.split
            )))
        }
        None => (0..=top).collect(),
    };
    let last = a
        .seed
        .checked_add(a.samples - 1)
        .ok_or_else(|| Error::Validation("seed range overflows".into()))?;

    let mut runs: Vec<Vec<KerCoker>> = Vec::new();
    for seed in a.seed..=last {
        let wa = witness(&da, seed)?;
        let wb = if ga == gb { None } else { Some(witness(&db, seed)?) };
        let ws: Vec<&Witness> = std::iter::once(&wa).chain(wb.as_ref()).collect();
        let rows = degrees
            .iter()
            .map(|&r| realize(&build_ab(r, &da, &db), &ws).map(|m| ker_coker(&m)))
            .collect::<Result<Vec<_>>>()?;
        runs.push(rows);
    }

    let mut columns = vec!["r", "dom", "cod", "ker", "coker"];
    if ga == 1 {
        columns.extend(["closed_ker", "closed_coker"]);
    }
    let mut s = Section::new(format!("lambda^{{{ga},{gb}}}, seeds {}..={last}", a.seed), &columns);
    let mut varying = Vec::new();
    let mut disagreements = Vec::new();
    for (i, &r) in degrees.iter().enumerate() {
        let mut hull = runs[0][i];
        for run in &runs[1..] {
            hull = hull.hull(&run[i])?;
        }
        if !hull.is_exact() {
            varying.push(r.to_string());
        }
        let (klo, khi) = hull.ker_range();
        let (clo, chi) = hull.coker_range();
        let mut row = vec![r.into(), hull.dom.into(), hull.cod.into(), span(klo, khi), span(clo, chi)];
        if ga == 1 {
            match lemma4(r, &db.h)? {
                Lemma4::Covered { ker, coker } => {
                    if hull.ker() != Some(ker) || hull.coker() != Some(coker) {
                        disagreements.push(r.to_string());
                    }
                    row.extend([ker.into(), coker.into()]);
                }
                Lemma4::NotCovered => row.extend([Cell::Empty, Cell::Empty]),
            }
        }
        s.row(row);
    }
    if varying.is_empty() {
        s.note(format!("identical across {} seed(s)", a.samples));
    } else {
        s.note(format!("witness-dependent at degrees {}", varying.join(", ")));
    }
    if !disagreements.is_empty() {
        s.note(format!("closed form disagrees at degrees {}", disagreements.join(", ")));
    }
    let mut doc = Document::new("mv");
    doc.push(s);

    if a.degree.is_none() {
        let expected = mod2_table(g);
        let mut glued = Section::new(format!("glued Z/2 table, genus {g}"), &["r", "h_glued", "h_expected"]);
        let mut matching = 0;
        let mut first: Option<BettiTable> = None;
        let mut failure = None;
        for run in &runs {
            let kers: Vec<u64> = run.iter().map(|k| k.ker_lo).collect();
            let cokers: Vec<u64> = run.iter().map(|k| k.coker_range().0).collect();
            match glue(g, &cokers, &kers) {
                Ok(t) => {
                    matching += usize::from(t == expected);
                    first.get_or_insert(t);
                }
                Err(e) => {
                    failure.get_or_insert(e.to_string());
                }
            }
        }
        for r in 0..expected.len() as i64 {
            glued.row(vec![r.into(), first.as_ref().map(|t| t.at(r)).into(), expected.at(r).into()]);
        }
        glued.note(format!(
            "the glued table equals the Z/2 table for {matching} of {} seed(s)",
            runs.len()
        ));
        if let Some(f) = failure {
            glued.note(format!("glue rejected a realization: {f}"));
        }
        doc.push(glued);
    }

    if a.dump {
        let d = build_ab(degrees[0], &da, &db);
        let mut dom = Section::new("domain summands", &["label", "dim"]);
        for x in &d.domain {
            dom.row(vec![x.label.clone().into(), x.dim.into()]);
        }
        let mut cod = Section::new("codomain summands", &["label", "dim"]);
        for x in &d.codomain {
            cod.row(vec![x.label.clone().into(), x.dim.into()]);
        }
        let mut edges = Section::new("edges", &["from", "to", "payload", "rows", "cols"]);
        for e in &d.edges {
            let (rows, cols) = e.payload.shape();
            edges.row(vec![
                d.domain[e.from].label.clone().into(),
                d.codomain[e.to].label.clone().into(),
                e.payload.describe().into(),
                rows.into(),
                cols.into(),
            ]);
        }
        doc.push(dom);
        doc.push(cod);
        doc.push(edges);
    }
    let code = if disagreements.is_empty() { EXIT_OK } else { EXIT_INCONSISTENT };
    Ok(Outcome { document: doc, code })
}

pub struct InferArgs {
    pub split: Split,
    pub unknowns: Vec<MapRef>,
    pub reading: Reading,
    pub max_rank: Option<MaxRankSplit>,
    pub degrees: Option<Vec<i64>>,
    pub limit: usize,
}

fn classify(data: &[GenusData], map: MapRef, rank: u64) -> String {
    let Some(d) = data.iter().find(|d| d.genus == map.genus) else {
        return String::new();
    };
    match MapProfile::new(rank, d.h(map.degree), d.nplus(map.degree)) {
        Ok(p) if p.is_iso() => "iso".into(),
        Ok(p) if p.is_injective() => "injective".into(),
        Ok(p) if p.is_surjective() => "surjective".into(),
        Ok(_) => "neither injective nor surjective".into(),
        Err(e) => e.to_string(),
    }
}

pub fn infer(a: &InferArgs) -> Result<Outcome> {
    let Split { a: ga, b: gb } = a.split;
    let mut data = vec![boundary_data(ga, a.max_rank)?];
    if gb != ga {
        data.push(boundary_data(gb, a.max_rank)?);
    }
    let mut q = InferQuery::new(a.split, a.unknowns.clone(), mod2_table(ga + gb));
    q.reading = a.reading;
    q.degrees = a.degrees.clone();
    q.limit = a.limit;
    let report = framed_betti::mv::infer(&q, &data)?;

    let mut asg = Section::new("rank assignments", &["assignment", "status", "detail"]);
    let describe = |slots: &[framed_betti::mv::infer::Slot]| -> String {
        if slots.is_empty() {
            "(no unknowns)".into()
        } else {
            slots.iter().map(|s| format!("{} = {}", s.map, s.rank)).collect::<Vec<_>>().join(", ")
        }
    };
    for f in &report.feasible {
        let detail = f
            .iter()
            .map(|s| format!("{} {}", s.map, classify(&data, s.map, s.rank)))
            .collect::<Vec<_>>()
            .join("; ");
        asg.row(vec![describe(f).into(), "feasible".into(), detail.into()]);
    }
    for r in &report.rejected {
        asg.row(vec![describe(&r.assignment).into(), "rejected".into(), r.reason.clone().into()]);
    }
    match report.unique() {
        Some(u) if !u.is_empty() => asg.note(format!("unique outcome: {}", describe(u))),
        Some(_) => asg.note("the boundary data is consistent with the target"),
        None if report.feasible.is_empty() => asg.note("no assignment is consistent with the target"),
        None => asg.note(format!("{} assignments remain feasible", report.feasible.len())),
    }
    let reading = match report.reading {
        Reading::Corrected => "corrected",
        Reading::Literal => "literal",
    };
    asg.note(format!(
        "{reading} reading; {} of {} realizations match{}",
        report.realizations_matching,
        report.realizations_checked,
        if report.exhaustive { "" } else { "; barcode enumeration was truncated" }
    ));

    let mut rows = Section::new(
        format!("lambda^{{{ga},{gb}}} over matching realizations"),
        &["r", "dom", "cod", "ker", "coker", "pinned"],
    );
    for (r, k) in report.rows.iter().enumerate() {
        let cells = match k {
            Some(k) => {
                let (klo, khi) = k.ker_range();
                let (clo, chi) = k.coker_range();
                vec![
                    r.into(),
                    k.dom.into(),
                    k.cod.into(),
                    span(klo, khi),
                    span(clo, chi),
                    if k.is_exact() { "yes" } else { "no" }.into(),
                ]
            }
            None => vec![r.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, "no".into()],
        };
        rows.row(cells);
    }
    let pinned = report.pinned_rows();
    rows.note(format!("{} of {} rows pinned uniquely", pinned.len(), report.rows.len()));

    let mut doc = Document::new("infer");
    doc.push(asg);
    doc.push(rows);
    let code = if report.is_consistent() { EXIT_OK } else { EXIT_INCONSISTENT };
    Ok(Outcome { document: doc, code })
}

struct Checks {
    section: Section,
    failed: usize,
}

impl Checks {
    fn add(&mut self, name: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.failed += usize::from(!holds);
        self.section.row(vec![
            name.into().into(),
            if holds { "pass" } else { "FAIL" }.into(),
            detail.into().into(),
        ]);
    }
}

fn same(got: &[framed_betti::BigCount], want: &[u64]) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(a, &b)| *a == b.into())
}

fn counts_text(t: &[framed_betti::BigCount]) -> String {
    t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// `lambda^{1,g}` realized at seed 0 against the closed form, every covered degree.
fn closed_form_mismatches(dg: &GenusData) -> Result<(usize, Vec<i64>)> {
    let d1 = genus1_data();
    let w1 = witness(&d1, 0)?;
    let wg = witness(dg, 0)?;
    let ws: Vec<&Witness> = if dg.genus == 1 { vec![&w1] } else { vec![&w1, &wg] };
    let mut covered = 0;
    let mut bad = Vec::new();
    for r in 0..=6 * (1 + dg.genus as i64) - 3 {
        if let Lemma4::Covered { ker, coker } = lemma4(r, &dg.h)? {
            covered += 1;
            let k = ker_coker(&realize(&build_ab(r, &d1, dg), &ws)?);
            if k.ker() != Some(ker) || k.coker() != Some(coker) {
                bad.push(r);
            }
        }
    }
    Ok((covered, bad))
}

pub fn verify(max_g: u32) -> Outcome {
    let mut c = Checks {
        section: Section::new("checks", &["check", "status", "detail"]),
        failed: 0,
    };
    let f2s = mod2_tables(max_g);
    let qs = rational_tables(max_g);
    for g in 1..=max_g {
        let (f2, q) = (&f2s[g as usize - 1], &qs[g as usize - 1]);
        if let (Some(want2), Some(wantq)) = (
            golden::REFERENCE_F2_HALVES.get(g as usize - 1),
            golden::REFERENCE_Q_HALVES.get(g as usize - 1),
        ) {
            c.add(format!("reference-f2-g{g}"), same(f2.half(), want2), counts_text(f2.half()));
            c.add(format!("reference-q-g{g}"), same(q.half(), wantq), counts_text(q.half()));
        }
        c.add(
            format!("duality-g{g}"),
            f2.satisfies_duality() && q.satisfies_duality(),
            "h_r = h_{6g-3-r} in both fields",
        );
        let chi = (f2.euler_characteristic(), q.euler_characteristic());
        c.add(
            format!("euler-g{g}"),
            chi.0 == 0.into() && chi.1 == 0.into(),
            format!("{} and {}", chi.0, chi.1),
        );
        let (s2, sq2) = (f2.total(), q.total() * 2u32);
        let closed = total_rank_closed_form(g);
        c.add(
            format!("total-rank-g{g}"),
            s2 == sq2 && s2 == closed,
            format!("sum Z/2 = {s2}, 2 sum Q = {sq2}, closed form {closed}"),
        );
        if g >= 2 {
            let mid = middle_closed_form(g);
            let c3 = 3 * g as i64;
            let holds = (c3 - 3..=c3).all(|r| f2.at(r) == mid);
            c.add(format!("middle-g{g}"), holds, format!("four middle degrees equal {mid}"));
            let edge = 2 * g as i64 - 1;
            let holds = (0..edge).all(|r| f2.at(r) == q.at(r)) && f2.at(edge) == q.at(edge) + 1u32;
            c.add(
                format!("field-agreement-g{g}"),
                holds,
                format!("equal below degree {edge}, differ by 1 there"),
            );
        }
        if g < max_g {
            match verify_step(f2, &f2s[g as usize]) {
                Ok(rep) => {
                    let bad: Vec<String> = rep.failures().map(|v| v.name.clone()).collect();
                    c.add(
                        format!("recursion-g{g}-to-g{}", g + 1),
                        bad.is_empty(),
                        if bad.is_empty() {
                            format!("{} relations hold", rep.verdicts.len())
                        } else {
                            format!("violated: {}", bad.join(", "))
                        },
                    );
                }
                Err(e) => c.add(format!("recursion-g{g}-to-g{}", g + 1), false, e.to_string()),
            }
        }
    }

    let mut diags = Section::new("diagnostics", &["code", "severity", "message"]);
    if max_g >= 2 {
        match serre_betti(&genus2_ring()) {
            Ok(h) => c.add("serre-genus2", h == mod2_table(2), counts_text(h.values())),
            Err(e) => c.add("serre-genus2", false, e.to_string()),
        }
    }
    for g in 1..=max_g.min(2) {
        let data = published_data(g).expect("published data is well formed");
        let problems = data.check_invariants();
        c.add(format!("invariants-genus{g}"), problems.is_empty(), problems.join("; "));
        let found = compare_with_printed(&data, reference_rows(g).expect("rows exist for genus 1 and 2"));
        let errors = found.iter().filter(|d| d.severity == Severity::Error).count();
        c.add(
            format!("reference-rows-genus{g}"),
            errors == 0,
            format!("{errors} mismatches, {} known misprints", found.len() - errors),
        );
        for d in found {
            diags.row(vec![d.code.into(), severity(d.severity).into(), d.message.into()]);
        }
    }
    if max_g >= 2 {
        let glued = (|| -> Result<BettiTable> {
            let d1 = genus1_data();
            let w = witness(&d1, 0)?;
            let mut kers = Vec::new();
            let mut cokers = Vec::new();
            for r in 0..=9 {
                let k = ker_coker(&realize(&build_ab(r, &d1, &d1), &[&w])?);
                kers.push(k.ker_lo);
                cokers.push(k.coker_range().0);
            }
            glue(2, &cokers, &kers)
        })();
        match glued {
            Ok(t) => c.add("glue-1+1", t == mod2_table(2), counts_text(t.values())),
            Err(e) => c.add("glue-1+1", false, e.to_string()),
        }
    }
    for g in 1..max_g.min(3) {
        let dg = published_data(g).expect("published data is well formed");
        let name = format!("closed-form-1+{g}");
        match closed_form_mismatches(&dg) {
            Ok((n, bad)) if bad.is_empty() => c.add(name, true, format!("{n} covered degrees agree")),
            Ok((_, bad)) => c.add(name, false, format!("degrees {bad:?} disagree")),
            Err(e) => c.add(name, false, e.to_string()),
        }
    }
    if max_g >= 4 {
        match glue(4, &golden::LAMBDA22_COKER, &golden::LAMBDA22_KER) {
            Ok(t) => c.add("glue-2+2-reference", t == mod2_table(4), counts_text(t.values())),
            Err(e) => c.add("glue-2+2-reference", false, e.to_string()),
        }
    }

    let errors = diags.rows.iter().filter(|r| r[1] == Cell::from("error")).count();
    let failed = c.failed;
    c.section.note(format!(
        "{} checks, {failed} failed",
        c.section.rows.len()
    ));
    if diags.rows.is_empty() {
        diags.note("none");
    }
    let mut doc = Document::new("verify");
    doc.push(c.section);
    doc.push(diags);
    let code = if failed == 0 && errors == 0 { EXIT_OK } else { EXIT_INCONSISTENT };
    Outcome { document: doc, code }
}
