//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};

use framed_betti::f2la::BitMatrix;
use framed_betti::golden;
use framed_betti::moduli::{compare_with_printed, genus1_data, genus2_data, nplus_betti, Severity};
use framed_betti::mv::diagram::{Edge, Payload, Summand};
use framed_betti::mv::{
    build_ab, eliminate, glue, infer, ker_coker, lemma4, max_rank_assignment, realize, Diagram,
    InferQuery, Lemma4, MaxRankSplit, Reading, Witness, WitnessSpace,
};
use framed_betti::serre::{genus2_ring, serre_betti, AlphaAction};
use framed_betti::{mod2_table, rational_table, BigCount, GenusData, MapProfile, MapRef};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("framed-betti").chain(args.iter().copied());
    let code = framed_betti_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn counts(t: &framed_betti::BettiTable) -> Vec<u64> {
    t.to_counts().unwrap()
}

/// Central binomial coefficients by the multiplicative formula, independent of the library.
fn choose(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn reference_tables() -> Check {
    for g in 1..=6u32 {
        let i = g as usize - 1;
        let f2: Vec<u64> = mod2_table(g).half().iter().map(|v| u64::try_from(v).unwrap()).collect();
        let q: Vec<u64> = rational_table(g).half().iter().map(|v| u64::try_from(v).unwrap()).collect();
        ensure!(f2 == golden::REFERENCE_F2_HALVES[i], "Z/2 column g={g}: {f2:?}");
        ensure!(q == golden::REFERENCE_Q_HALVES[i], "Q column g={g}: {q:?}");
    }
    let g6 = [1, 0, 1, 12, 1, 12, 67, 12, 67, 232, 67, 233, 574, 299, 794, 1586, 1586];
    let (code, text) = cli(&["tables", "--max-genus", "6", "--field", "f2", "--format", "json"]);
    ensure!(code == 0, "tables exited {code}");
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let col: Vec<u64> = v["sections"][0]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[6].as_u64().unwrap())
        .collect();
    ensure!(col == g6, "CLI g=6 column {col:?}");
    Ok(())
}

fn total_rank() -> Check {
    for g in 1..=10u32 {
        let s2 = mod2_table(g).total();
        let sq = rational_table(g).total();
        let g = g as u128;
        let closed = BigCount::from(2 * g * choose(2 * g, g));
        ensure!(s2 == closed && sq * 2u32 == closed, "g={g}: {s2} vs {closed}");
    }
    Ok(())
}

fn middle() -> Check {
    for g in 2..=10u32 {
        let t = mod2_table(g);
        let gg = g as u128;
        let want = BigCount::from((1u128 << (2 * gg - 1)) - choose(2 * gg - 1, gg));
        let c = 3 * g as i64;
        for r in c - 3..=c {
            ensure!(t.at(r) == want, "g={g} r={r}: {} vs {want}", t.at(r));
        }
    }
    Ok(())
}

fn serre_engine() -> Check {
    let h = serre_betti(&genus2_ring()).map_err(|e| e.to_string())?;
    ensure!(counts(&h) == [1, 0, 1, 5, 5, 5, 5, 1, 0, 1], "genus-2 ring gives {h:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..50 {
        let g: u32 = rng.gen_range(2..=5);
        let n = 6 * g as usize - 5;
        let mut b = vec![0u64; n];
        for r in 0..=n / 2 {
            let v = match r {
                0 => 1,
                1 => 0,
                _ => rng.gen_range(0..100),
            };
            b[r] = v;
            b[n - 1 - r] = v;
        }
        let a = AlphaAction::from_ranks(g, b.clone(), vec![0; n - 2]).map_err(|e| e.to_string())?;
        let h = counts(&serre_betti(&a).map_err(|e| e.to_string())?);
        let at = |k: i64| if (0..n as i64).contains(&k) { b[k as usize] } else { 0 };
        for (r, &hr) in h.iter().enumerate() {
            let r = r as i64;
            let want = at(r) + at(r - 1) + at(r - 2) + at(r - 3);
            ensure!(hr == want, "case {case}, g={g}, r={r}: {hr} vs {want}");
        }
    }
    Ok(())
}

fn boundary_formulas() -> Check {
    let np = nplus_betti(&mod2_table(2)).map_err(|e| e.to_string())?;
    for row in golden::GENUS2_ROWS {
        ensure!(np.count(row.r).ok() == Some(row.nplus), "n_plus r={}", row.r);
    }
    let d1 = compare_with_printed(&genus1_data(), golden::GENUS1_ROWS);
    let d2 = compare_with_printed(&genus2_data(), golden::GENUS2_ROWS);
    ensure!(d2.is_empty(), "genus 2 mismatches: {d2:?}");
    ensure!(
        d1.len() == 1 && d1[0].code == "genus1-nplus-r5" && d1[0].severity == Severity::Info,
        "genus 1 diagnostics: {d1:?}"
    );
    let (code, text) = cli(&["verify", "--max-genus", "6", "--format", "json"]);
    ensure!(code == 0, "verify exited {code}");
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let diags = &v["sections"][1]["rows"];
    let named = diags
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r[0] == "genus1-nplus-r5" && r[1] == "info");
    ensure!(named, "verify does not name the r=5 diagnostic: {diags}");
    Ok(())
}

fn seeded(data: &GenusData, seed: u64) -> Witness {
    WitnessSpace::new(data, Reading::Corrected, 4096).unwrap().seeded(seed)
}

fn mayer_vietoris() -> Check {
    let d1 = genus1_data();
    let rows = |seed: u64| -> Vec<(u64, u64)> {
        let w = seeded(&d1, seed);
        (0..=9)
            .map(|r| {
                let k = ker_coker(&realize(&build_ab(r, &d1, &d1), &[&w]).unwrap());
                (k.coker().unwrap(), k.ker().unwrap())
            })
            .collect()
    };
    let base = rows(0);
    for (r, &(coker, ker)) in golden::LAMBDA11_LOW.iter().enumerate() {
        ensure!(base[r].0 == coker, "r={r}: coker {}", base[r].0);
        if let Some(k) = ker {
            ensure!(base[r].1 == k, "r={r}: ker {}", base[r].1);
        }
    }
    let cokers: Vec<u64> = base.iter().map(|p| p.0).collect();
    let kers: Vec<u64> = base.iter().map(|p| p.1).collect();
    let h = glue(2, &cokers, &kers).map_err(|e| e.to_string())?;
    ensure!(h == mod2_table(2), "glue gives {h:?}");
    for seed in 1..=24 {
        ensure!(rows(seed) == base, "seed {seed} differs");
    }
    Ok(())
}

fn closed_form() -> Check {
    let d1 = genus1_data();
    let w1 = seeded(&d1, 0);
    let d3 = max_rank_assignment(&GenusData::derive(&mod2_table(3)).unwrap(), MaxRankSplit::Middle)
        .map_err(|e| e.to_string())?;
    for (dg, wg) in [
        (genus2_data(), seeded(&genus2_data(), 0)),
        (d3.clone(), WitnessSpace::sampled(&d3, 0).map_err(|e| e.to_string())?),
    ] {
        let g = dg.genus;
        let mut covered = 0;
        for r in 0..=6 * (1 + g as i64) - 3 {
            if let Lemma4::Covered { ker, coker } = lemma4(r, &dg.h).map_err(|e| e.to_string())? {
                covered += 1;
                let k = ker_coker(&realize(&build_ab(r, &d1, &dg), &[&w1, &wg]).unwrap());
                ensure!(
                    k.ker() == Some(ker) && k.coker() == Some(coker),
                    "g={g} r={r}: realized {k:?}, closed form ({ker}, {coker})"
                );
            }
        }
        ensure!(covered > 0, "g={g}: nothing covered");
    }
    Ok(())
}

fn two_plus_two() -> Check {
    let q = InferQuery::new("2+2".parse().unwrap(), vec![], mod2_table(4));
    let rep = infer(&q, &[genus2_data()]).map_err(|e| e.to_string())?;
    ensure!(rep.is_consistent(), "no realization matches");
    for r in 0..22 {
        let k = rep.rows[r].ok_or(format!("r={r}: no interval"))?;
        let (klo, khi) = k.ker_range();
        let (clo, chi) = k.coker_range();
        let (kp, cp) = (golden::LAMBDA22_KER[r], golden::LAMBDA22_COKER[r]);
        ensure!((klo..=khi).contains(&kp), "r={r}: ker {kp} outside {klo}..={khi}");
        ensure!((clo..=chi).contains(&cp), "r={r}: coker {cp} outside {clo}..={chi}");
    }
    // the pair summing to h_9: coker at 9 and ker at 8
    let pair = (rep.rows[9].unwrap().coker(), rep.rows[8].unwrap().ker());
    ensure!(pair == (Some(68), Some(25)), "h_9 contributions {pair:?}");
    let h = glue(4, &golden::LAMBDA22_COKER, &golden::LAMBDA22_KER).map_err(|e| e.to_string())?;
    ensure!(counts(&h) == golden::LAMBDA22_H4 && h.count(9).ok() == Some(93), "glue gives {h:?}");
    let (code, text) = cli(&["infer", "--split", "2+2", "--format", "csv"]);
    ensure!(code == 0, "infer exited {code}");
    ensure!(
        text.contains(&format!("{} of 22 rows pinned uniquely", rep.pinned_rows().len())),
        "report does not state the pinned rows"
    );
    Ok(())
}

fn unique_rank(split: &str, map: MapRef, data: &[GenusData]) -> Result<MapProfile, String> {
    let split: framed_betti::mv::Split = split.parse().unwrap();
    let q = InferQuery::new(split, vec![map], mod2_table(split.genus()));
    let rep = infer(&q, data).map_err(|e| e.to_string())?;
    let slots = rep.unique().ok_or(format!("{map}: {} feasible", rep.feasible.len()))?;
    let d = data.iter().find(|d| d.genus == map.genus).unwrap();
    MapProfile::new(slots[0].rank, d.h(map.degree), d.nplus(map.degree)).map_err(|e| e.to_string())
}

fn deductions() -> Check {
    let (d1, d2) = (genus1_data(), genus2_data());
    let p = unique_rank("1+1", MapRef::nu(1, 2), std::slice::from_ref(&d1))?;
    ensure!(p.is_iso(), "nu_2^1 is {p}");
    let p = unique_rank("1+1", MapRef::nu(1, 3), std::slice::from_ref(&d1))?;
    ensure!(p.is_injective(), "nu_3^1 is {p}");
    for r in [2, 9] {
        let p = unique_rank("1+2", MapRef::nu(2, r), &[d1.clone(), d2.clone()])?;
        ensure!(p.is_iso(), "nu_{r}^2 is {p}");
    }
    Ok(())
}

fn random_diagram(rng: &mut ChaCha8Rng) -> Diagram {
    let side = |rng: &mut ChaCha8Rng, tag: &str| -> Vec<Summand> {
        (0..rng.gen_range(1..6))
            .map(|i| Summand {
                label: format!("{tag}{i}"),
                dim: rng.gen_range(1..4),
            })
            .collect()
    };
    let domain = side(rng, "x");
    let codomain = side(rng, "y");
    let mut edges = Vec::new();
    for (i, x) in domain.iter().enumerate() {
        for (j, y) in codomain.iter().enumerate() {
            if rng.gen_bool(0.5) {
                let m = if x.dim == y.dim && rng.gen_bool(0.6) {
                    BitMatrix::random_invertible(x.dim, rng)
                } else {
                    BitMatrix::random(y.dim, x.dim, rng)
                };
                edges.push(Edge {
                    from: i,
                    to: j,
                    payload: Payload::Explicit(m),
                });
            }
        }
    }
    Diagram {
        domain,
        codomain,
        edges,
    }
}

fn properties() -> Check {
    for g in 1..=12 {
        for t in [mod2_table(g), rational_table(g)] {
            ensure!(t.satisfies_duality(), "duality g={g}");
            ensure!(t.euler_characteristic() == BigInt::from(0), "Euler g={g}");
        }
        for r in 0..=6 * g as i64 {
            ensure!(
                framed_betti::betti::m_coeff(g, r) == framed_betti::betti::m_coeff(g, 6 * g as i64 - r),
                "m symmetry g={g} r={r}"
            );
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let (rows, cols) = (rng.gen_range(0..50), rng.gen_range(0..130));
        let m = BitMatrix::random(rows, cols, &mut rng);
        ensure!(m.rank() + m.kernel_dim() == cols, "rank-nullity {rows}x{cols}");
    }
    for seed in 0..100 {
        let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(seed));
        let before = ker_coker(&realize(&d, &[]).unwrap());
        let after = ker_coker(&realize(&eliminate(&d), &[]).unwrap());
        ensure!(
            (before.ker(), before.coker()) == (after.ker(), after.coker()),
            "elimination changed ker/coker, seed {seed}"
        );
    }
    for g in 2..=10u32 {
        let (f2, q) = (mod2_table(g), rational_table(g));
        let edge = 2 * g as i64 - 1;
        ensure!((0..edge).all(|r| f2.at(r) == q.at(r)), "fields differ below {edge}, g={g}");
        ensure!(f2.at(edge) == q.at(edge) + 1u32, "difference at {edge}, g={g}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 reference tables for g = 1..6", reference_tables),
        ("2 total-rank identity for g = 1..10", total_rank),
        ("3 middle closed form for g = 2..10", middle),
        ("4 spectral-sequence engine", serre_engine),
        ("5 boundary formulas and reference rows", boundary_formulas),
        ("6 Mayer-Vietoris 1+1 suite", mayer_vietoris),
        ("7 closed-form kernels for g = 2, 3", closed_form),
        ("8 2+2 table", two_plus_two),
        ("9 inference deductions", deductions),
        ("10 property suite", properties),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, f) in criteria {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(()) => println!("PASS criterion {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
