//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fertaper_core::codeword::{
    auto_improve, check_simulation, four_body_simulator, two_body_simulator, CodeEncoding,
};
use fertaper_core::decode::{brute_force_decode, build_tables, mitm_decode};
use fertaper_core::dense::{self, spectra_match};
use fertaper_core::fermion::Variant;
use fertaper_core::firstq::{
    bin_terms, build_tuhperp, codespace_leak, codespace_spectrum, default_penalty,
    hperp_spectrum_check, rao_hamming_oa, RegisterEncoding,
};
use fertaper_core::fixtures::{h2_pauli_table, random_hamiltonian, H2_TRANSFORMED_PAULIS};
use fertaper_core::graph::{
    cycle_chord_graph, graph_decode, greedy_high_girth, injectivity_from_girth, BipartiteGraph,
};
use fertaper_core::mappings::{build_encoding, encode_hamiltonian, EncodingKind};
use fertaper_core::taper::{
    enumerate_sectors, find_symmetries, prepare, taper, PivotPreference, Sector,
};
use fertaper_core::{BitMatrix, BitVector, FermionHamiltonian, PauliOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn a1() -> Outcome {
    let group = find_symmetries(&h2_pauli_table());
    let expect: Vec<PauliOperator> = ["ZZII", "ZIZI", "ZIIZ"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    ensure(group.same_group(&expect), || {
        format!("found {:?}", group.generators)
    })
}

fn a2() -> Outcome {
    let (_, plan, transformed) =
        prepare(&h2_pauli_table(), PivotPreference::Highest).map_err(err)?;
    let mut expect: Vec<String> = H2_TRANSFORMED_PAULIS
        .iter()
        .map(|s| s.to_string())
        .collect();
    expect.sort();
    ensure(transformed.operator_set() == expect, || {
        format!("transformed set {:?}", transformed.operator_set())
    })?;
    for sector in Sector::all(plan.k()) {
        let tapered = taper(&transformed, &plan, &sector).map_err(err)?;
        ensure(tapered.num_qubits() == 1, || {
            format!("sector {sector} has {} qubits", tapered.num_qubits())
        })?;
    }
    Ok(())
}

fn a3() -> Outcome {
    let bk = build_encoding(EncodingKind::BinaryTree, 4).map_err(err)?;
    let par = build_encoding(EncodingKind::Parity, 4).map_err(err)?;
    let bk_expect = BitMatrix::from_strs(&["1000", "1100", "0010", "1111"]).map_err(err)?;
    let par_expect = BitMatrix::from_strs(&["1000", "1100", "1110", "1111"]).map_err(err)?;
    ensure(*bk.matrix() == bk_expect, || {
        format!("binary tree:\n{}", bk.matrix())
    })?;
    ensure(*par.matrix() == par_expect, || {
        format!("parity:\n{}", par.matrix())
    })
}

fn spectral_instances() -> Vec<FermionHamiltonian> {
    let mut rng = ChaCha20Rng::seed_from_u64(0xa4);
    (0..20)
        .map(|k| {
            let modes = 3 + k % 4;
            random_hamiltonian(&mut rng, modes, modes / 2).expect("valid sizes")
        })
        .collect()
}

fn a4() -> Outcome {
    for (k, h) in spectral_instances().iter().enumerate() {
        let fock = dense::eigenvalues(&h.dense_fock_matrix().map_err(err)?);
        for kind in [
            EncodingKind::JordanWigner,
            EncodingKind::Parity,
            EncodingKind::BinaryTree,
        ] {
            let e = build_encoding(kind, h.modes()).map_err(err)?;
            let spec = encode_hamiltonian(h, &e)
                .map_err(err)?
                .spectrum()
                .map_err(err)?;
            ensure(spectra_match(&spec, &fock, 1e-9), || {
                format!("instance {k} (M={}) under {kind}", h.modes())
            })?;
        }
    }
    Ok(())
}

fn a5() -> Outcome {
    for (k, h) in spectral_instances().iter().enumerate() {
        let e = build_encoding(EncodingKind::JordanWigner, h.modes()).map_err(err)?;
        let q = encode_hamiltonian(h, &e).map_err(err)?;
        let original = q.spectrum().map_err(err)?;
        let (_, plan, transformed) = prepare(&q, PivotPreference::Highest).map_err(err)?;
        let mut union: Vec<f64> = enumerate_sectors(&transformed, &plan)
            .map_err(err)?
            .into_iter()
            .flat_map(|r| r.spectrum)
            .collect();
        union.sort_by(f64::total_cmp);
        ensure(spectra_match(&union, &original, 1e-9), || {
            format!("instance {k} (M={}, {} symmetries)", h.modes(), plan.k())
        })?;
    }
    Ok(())
}

fn a6() -> Outcome {
    let g = greedy_high_girth(12, 2, 1000, 0).map_err(err)?;
    ensure(g.num_edges() >= 16, || {
        format!("(12,2) reached M={}", g.num_edges())
    })?;
    let g = greedy_high_girth(20, 3, 1000, 0).map_err(err)?;
    ensure(g.num_edges() >= 25, || {
        format!("(20,3) reached M={}", g.num_edges())
    })?;
    let g = cycle_chord_graph(10, 3).map_err(err)?;
    let got = (g.num_edges(), g.num_vertices(), g.girth());
    ensure(got == (25, 20, Some(8)), || {
        format!("cycle_chord(10,3) gave {got:?}")
    })
}

fn girth6_code() -> BipartiteGraph {
    cycle_chord_graph(8, 2).expect("valid parameters")
}

fn a7() -> Outcome {
    let mut codes = vec![(girth6_code(), 2)];
    for (q, n, seed) in [(10, 2, 1), (14, 2, 2), (16, 3, 3)] {
        let g = greedy_high_girth(q, n, 200, seed).map_err(err)?;
        ensure(injectivity_from_girth(&g, n), || {
            format!("greedy ({q},{n}) is not girth-certified")
        })?;
        codes.push((g, n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0xa7);
    for (g, n) in &codes {
        let enc = CodeEncoding::from_graph(g, *n).map_err(err)?;
        let m = enc.modes();
        let variant = |rng: &mut ChaCha20Rng| {
            if rng.random() {
                Variant::Plus
            } else {
                Variant::MinusI
            }
        };
        let mut sims = Vec::new();
        for _ in 0..10 {
            let a = rng.random_range(1..=m);
            let b = loop {
                let b = rng.random_range(1..=m);
                if b != a {
                    break b;
                }
            };
            let v = variant(&mut rng);
            sims.push((2, two_body_simulator(&enc, a, b, v).map_err(err)?));
        }
        for _ in 0..5 {
            let idx: Vec<usize> = (0..4).map(|_| rng.random_range(1..=m)).collect();
            let v = variant(&mut rng);
            sims.push((
                4,
                four_body_simulator(&enc, idx[0], idx[1], idx[2], idx[3], v).map_err(err)?,
            ));
        }
        for (body, sim) in sims {
            let sim = auto_improve(&sim, &enc)
                .map_err(err)?
                .materialize()
                .map_err(err)?;
            let label = format!("{:?} on Q={} M={m}", sim.observable, enc.qubits());
            ensure(check_simulation(&enc, &sim), || {
                format!("simulation condition fails for {label}")
            })?;
            let bound = if body == 2 { 2 } else { 32 };
            ensure(sim.sparsity() <= bound, || {
                format!("sparsity {} > {bound} for {label}", sim.sparsity())
            })?;
            ensure(
                sim.max_abs_entry() <= num_rational::Rational64::from_integer(1),
                || {
                    format!(
                        "diagonal entry {} outside [-1,1] for {label}",
                        sim.max_abs_entry()
                    )
                },
            )?;
        }
    }
    Ok(())
}

fn decoders_agree(
    g: &BipartiteGraph,
    n: usize,
    syndromes: impl Iterator<Item = BitVector>,
) -> Outcome {
    let a = g.incidence_matrix();
    let tables = build_tables(&a, n).map_err(err)?;
    for s in syndromes {
        let brute = brute_force_decode(&a, n, &s).map_err(err)?;
        let mitm = mitm_decode(&tables, &s);
        let graph = graph_decode(g, &s, n).map_err(err)?;
        ensure(brute == mitm && brute == graph, || {
            format!("syndrome {s}: brute {brute:?}, mitm {mitm:?}, graph {graph:?}")
        })?;
    }
    Ok(())
}

fn a8() -> Outcome {
    let g = girth6_code();
    let q = g.num_vertices();
    decoders_agree(&g, 2, (0..1u64 << q).map(|i| BitVector::from_index(q, i)))?;
    let mut rng = ChaCha20Rng::seed_from_u64(0xa8);
    for (q, n, seed) in [(14, 2, 4), (16, 3, 5), (18, 3, 6), (20, 4, 7)] {
        let g = greedy_high_girth(q, n, 200, seed).map_err(err)?;
        let a = g.incidence_matrix();
        let m = g.num_edges();
        let mut samples: Vec<BitVector> = (0..1000)
            .map(|_| BitVector::from_index(q, rng.random_range(0..1u64 << q)))
            .collect();
        for _ in 0..1000 {
            let mut x = BitVector::zeros(m);
            while x.weight() < n {
                x.set(rng.random_range(1..=m), true);
            }
            samples.push(a.matvec(&x).map_err(err)?);
        }
        decoders_agree(&g, n, samples.into_iter())?;
    }
    Ok(())
}

fn a9() -> Outcome {
    for n in 1..=4 {
        for m in 1..=4 {
            let r = hperp_spectrum_check(n, m).map_err(err)?;
            ensure(r.passed(), || {
                format!(
                    "N={n} M={m}: expected {:?}, dense {:?}, exact {}, gap {:?}",
                    r.expected, r.dense, r.exact_ok, r.gap
                )
            })?;
        }
    }
    Ok(())
}

fn a10() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(0xa10);
    let enc = RegisterEncoding::new(4, 2).map_err(err)?;
    for k in 0..10 {
        let h = random_hamiltonian(&mut rng, 4, 2).map_err(err)?;
        let parts = build_tuhperp(&h, &enc).map_err(err)?;
        let spec = codespace_spectrum(&parts).map_err(err)?;
        ensure(
            spectra_match(&spec, &h.sector_spectrum().map_err(err)?, 1e-9),
            || format!("instance {k}: codespace spectrum differs from the sector"),
        )?;
        let g = default_penalty(&h, &parts).map_err(err)?;
        let leak = codespace_leak(&parts, g).map_err(err)?;
        ensure(leak < 1e-10, || {
            format!("instance {k}: ground-state leak {leak:e} at g={g}")
        })?;
    }
    Ok(())
}

fn a11() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(0xa11);
    for m in 1..=2 {
        let oa = rao_hamming_oa(m).map_err(err)?;
        ensure(oa.verify(), || format!("array for m={m} is not orthogonal"))?;
        let modes = 1 << m;
        for n in 1..=modes.min(3) {
            let h = random_hamiltonian(&mut rng, modes, n).map_err(err)?;
            let parts =
                build_tuhperp(&h, &RegisterEncoding::new(modes, n).map_err(err)?).map_err(err)?;
            let sim = parts
                .assemble(default_penalty(&h, &parts).map_err(err)?)
                .map_err(err)?;
            let bins = bin_terms(&sim, n, &oa).map_err(err)?;
            ensure(bins.len() <= 9usize.pow(m as u32), || {
                format!("m={m} N={n}: {} bins", bins.len())
            })?;
            let assigned: usize = bins.iter().map(|b| b.terms.len()).sum();
            ensure(assigned == sim.len(), || {
                format!("m={m} N={n}: {assigned} of {} terms", sim.len())
            })?;
            ensure(bins.iter().all(|b| b.is_diagonal()), || {
                format!("m={m} N={n}: non-diagonal bin")
            })?;
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("A1", a1, 1),
        ("A2", a2, 1),
        ("A3", a3, 1),
        ("A4", a4, 30),
        ("A5", a5, 60),
        ("A6", a6, 300),
        ("A7", a7, 300),
        ("A8", a8, 120),
        ("A9", a9, 60),
        ("A10", a10, 120),
        ("A11", a11, 30),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(limit), || {
                format!("took {elapsed:.2?}, limit {limit}s")
            })
        });
        match outcome {
            Ok(()) => println!("PASS {name} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({elapsed:.2?}): {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
