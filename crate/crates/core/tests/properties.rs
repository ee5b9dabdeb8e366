use framed_betti::betti::{m_coeff, mod2_table, rational_table};
use framed_betti::f2la::{block_assemble, synth_with_rank, BitMatrix};
use framed_betti::moduli::{genus1_data, genus2_data};
use framed_betti::mv::diagram::{Edge, Payload, Summand};
use framed_betti::mv::{build_ab, eliminate, ker_coker, realize, Diagram, Reading, WitnessSpace};
use framed_betti::serre::{serre_betti, AlphaAction};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize, seed: u64) -> BitMatrix {
    BitMatrix::random(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn permuted(m: &BitMatrix, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rp: Vec<usize> = (0..m.rows()).collect();
    let mut cp: Vec<usize> = (0..m.cols()).collect();
    for i in (1..rp.len()).rev() {
        rp.swap(i, rng.gen_range(0..=i));
    }
    for i in (1..cp.len()).rev() {
        cp.swap(i, rng.gen_range(0..=i));
    }
    let mut out = BitMatrix::zeros(m.rows(), m.cols());
    for (r, &pr) in rp.iter().enumerate() {
        for (c, &pc) in cp.iter().enumerate() {
            out.set(pr, pc, m.get(r, c));
        }
    }
    out
}

proptest! {
    #[test]
    fn rank_is_permutation_invariant(rows in 0usize..40, cols in 0usize..90, seed: u64) {
        let m = matrix(rows, cols, seed);
        prop_assert_eq!(m.rank(), permuted(&m, seed ^ 0x5a5a).rank());
    }

    #[test]
    fn rank_nullity(rows in 0usize..40, cols in 0usize..90, seed: u64) {
        let m = matrix(rows, cols, seed);
        prop_assert_eq!(m.rank() + m.kernel_dim(), cols);
        prop_assert!(m.rank() <= rows.min(cols));
        prop_assert!(m.padding_is_clean());
    }

    #[test]
    fn single_block_keeps_rank(rows in 1usize..20, cols in 1usize..20, seed: u64) {
        let m = matrix(rows, cols, seed);
        let b = block_assemble(&[vec![Some(m.clone())]], &[rows], &[cols]).unwrap();
        prop_assert_eq!(b.rank(), m.rank());
    }

    #[test]
    fn synth_is_reproducible(rows in 0usize..12, cols in 0usize..12, seed: u64) {
        let r = rows.min(cols) / 2;
        let a = synth_with_rank(rows, cols, r, seed).unwrap();
        prop_assert_eq!(&a, &synth_with_rank(rows, cols, r, seed).unwrap());
        prop_assert_eq!(a.rank(), r);
    }

    #[test]
    fn serre_output_is_dual_with_zero_euler(g in 2u32..5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 6 * g as usize - 5;
        let mut dims = vec![0u64; n];
        for r in 0..=n / 2 {
            let v = if r == 0 { 1 } else if r == 1 { 0 } else { rng.gen_range(0..6) };
            dims[r] = v;
            dims[n - 1 - r] = v;
        }
        let nr = n - 2;
        let mut ranks = vec![0u64; nr];
        for k in 0..=nr / 2 {
            let v = rng.gen_range(0..=dims[k].min(dims[k + 2]));
            ranks[k] = v;
            ranks[nr - 1 - k] = v;
        }
        let a = AlphaAction::from_ranks(g, dims.clone(), ranks.clone()).unwrap();
        let h = serre_betti(&a).unwrap();
        prop_assert!(h.satisfies_duality());
        prop_assert_eq!(h.euler_characteristic(), BigInt::from(0));
        let total: u64 = h.to_counts().unwrap().iter().sum();
        let sd: u64 = dims.iter().sum();
        let sr: u64 = ranks.iter().sum();
        prop_assert_eq!(total, 4 * sd - 4 * sr);
    }

    #[test]
    fn zero_action_convolves_with_so3(g in 2u32..5, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 6 * g as usize - 5;
        let mut dims = vec![0u64; n];
        for r in 0..=n / 2 {
            let v = if r == 0 { 1 } else if r == 1 { 0 } else { rng.gen_range(0..50) };
            dims[r] = v;
            dims[n - 1 - r] = v;
        }
        let a = AlphaAction::from_ranks(g, dims.clone(), vec![0; n - 2]).unwrap();
        let h = serre_betti(&a).unwrap().to_counts().unwrap();
        for (r, &hr) in h.iter().enumerate() {
            let want: u64 = (0..4).filter_map(|i| r.checked_sub(i)).filter_map(|k| dims.get(k)).sum();
            prop_assert_eq!(hr, want);
        }
    }
}

#[test]
fn m_is_symmetric() {
    for g in 1..=12u32 {
        for r in 0..=6 * g as i64 {
            assert_eq!(m_coeff(g, r), m_coeff(g, 6 * g as i64 - r), "g={g} r={r}");
        }
    }
}

#[test]
fn tables_are_dual_with_zero_euler() {
    for g in 1..=12 {
        for t in [mod2_table(g), rational_table(g)] {
            assert!(t.satisfies_duality(), "genus {g} {:?}", t.field());
            assert_eq!(t.euler_characteristic(), BigInt::from(0));
        }
    }
}

#[test]
fn fields_agree_below_2g_minus_1() {
    for g in 2..=10u32 {
        let (f2, q) = (mod2_table(g), rational_table(g));
        let edge = 2 * g as i64 - 1;
        for r in 0..edge {
            assert_eq!(f2.at(r), q.at(r), "g={g} r={r}");
        }
        assert_eq!(f2.at(edge), q.at(edge) + 1u32, "g={g}");
    }
}

fn random_diagram(rng: &mut ChaCha8Rng) -> Diagram {
    let summands = |rng: &mut ChaCha8Rng, tag: &str| -> Vec<Summand> {
        (0..rng.gen_range(1..6))
            .map(|i| Summand {
                label: format!("{tag}{i}"),
                dim: rng.gen_range(1..4),
            })
            .collect()
    };
    let domain = summands(rng, "x");
    let codomain = summands(rng, "y");
    let mut edges = Vec::new();
    for (i, x) in domain.iter().enumerate() {
        for (j, y) in codomain.iter().enumerate() {
            if rng.gen_bool(0.45) {
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

#[test]
fn elimination_preserves_kernel_and_cokernel() {
    let mut reduced_something = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng);
        let e = eliminate(&d);
        let before = ker_coker(&realize(&d, &[]).unwrap());
        let after = ker_coker(&realize(&e, &[]).unwrap());
        assert_eq!(before.ker(), after.ker(), "seed {seed}");
        assert_eq!(before.coker(), after.coker(), "seed {seed}");
        if e.dom_dim() < d.dom_dim() {
            reduced_something += 1;
        }
    }
    assert!(reduced_something > 50);
}

#[test]
fn elimination_of_boundary_diagrams_preserves_kernel_and_cokernel() {
    let (d1, d2) = (genus1_data(), genus2_data());
    let w1 = WitnessSpace::new(&d1, Reading::Corrected, 100).unwrap().seeded(0);
    let s2 = WitnessSpace::new(&d2, Reading::Corrected, 100).unwrap();
    for seed in 0..4 {
        let w2 = s2.seeded(seed);
        for r in 0..=16 {
            let d = build_ab(r, &d1, &d2);
            let before = ker_coker(&realize(&d, &[&w1, &w2]).unwrap());
            let profile_only = eliminate(&d);
            let after = ker_coker(&realize(&profile_only, &[&w1, &w2]).unwrap());
            assert_eq!((before.ker(), before.coker()), (after.ker(), after.coker()), "r={r} profile");
            let full = eliminate(&d.materialize(&[&w1, &w2]).unwrap());
            let after = ker_coker(&realize(&full, &[]).unwrap());
            assert_eq!((before.ker(), before.coker()), (after.ker(), after.coker()), "r={r} explicit");
        }
    }
}

#[test]
fn diagram_index_matches_dimensions() {
    let (d1, d2) = (genus1_data(), genus2_data());
    let w1 = WitnessSpace::new(&d1, Reading::Corrected, 100).unwrap().seeded(0);
    let w2 = WitnessSpace::new(&d2, Reading::Corrected, 100).unwrap().seeded(0);
    for (a, b) in [(&d1, &d1), (&d1, &d2), (&d2, &d2)] {
        for r in 0..=6 * (a.genus + b.genus) as i64 - 3 {
            let d = build_ab(r, a, b);
            let k = ker_coker(&realize(&d, &[&w1, &w2]).unwrap());
            let (ker, coker) = (k.ker().unwrap() as i64, k.coker().unwrap() as i64);
            assert_eq!(ker - coker, d.dom_dim() as i64 - d.cod_dim() as i64);
        }
    }
}

#[test]
fn one_plus_two_is_witness_independent() {
    let (d1, d2) = (genus1_data(), genus2_data());
    let s1 = WitnessSpace::new(&d1, Reading::Corrected, 100).unwrap();
    let s2 = WitnessSpace::new(&d2, Reading::Corrected, 100).unwrap();
    for r in 0..=15 {
        let d = build_ab(r, &d1, &d2);
        let base = ker_coker(&realize(&d, &[&s1.seeded(0), &s2.seeded(0)]).unwrap());
        for seed in 1..=20 {
            let k = ker_coker(&realize(&d, &[&s1.seeded(seed), &s2.seeded(seed)]).unwrap());
            assert_eq!(k, base, "r={r} seed={seed}");
        }
    }
}
