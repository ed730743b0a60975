//! Self-contained verification suites over generated instances.

use fertaper_core::codeword::{
    auto_improve, check_simulation, four_body_simulator, two_body_simulator, CodeEncoding,
};
use fertaper_core::decode::{brute_force_decode, build_tables, mitm_decode};
use fertaper_core::dense;
use fertaper_core::fermion::Variant;
use fertaper_core::firstq::{
    bin_terms, build_tuhperp, codespace_leak, codespace_spectrum, default_penalty,
    hperp_spectrum_check, rao_hamming_oa, simulation_residual, RegisterEncoding,
};
use fertaper_core::fixtures::{
    h2_hamiltonian, h2_pauli_table, random_hamiltonian, H2_TRANSFORMED_PAULIS,
};
use fertaper_core::graph::{
    cycle_chord_graph, graph_decode, greedy_high_girth, injectivity_from_girth,
};
use fertaper_core::mappings::{build_encoding, encode_hamiltonian, EncodingKind};
use fertaper_core::taper::{enumerate_sectors, find_symmetries, prepare, PivotPreference};
use fertaper_core::{BipartiteGraph, BitMatrix, BitVector, PauliOperator, Result};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::config::{substream, Stream, VerificationLevel};
use crate::pipeline::TOL;
use crate::report::{Check, RunReport, Stopwatch};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    H2,
    Spectra,
    Oa,
    Graph,
    Decode,
    Firstq,
    Hperp,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::H2 => "h2",
            Suite::Spectra => "spectra",
            Suite::Oa => "oa",
            Suite::Graph => "graph",
            Suite::Decode => "decode",
            Suite::Firstq => "firstq",
            Suite::Hperp => "hperp",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Modes for the spectra and first-quantized suites.
    pub modes: Option<usize>,
    /// Particles for the spectra, first-quantized and penalty suites.
    pub particles: Option<usize>,
    /// Field degree for the array suite.
    pub m: Option<usize>,
    /// Random instances per size.
    pub instances: usize,
    /// Greedy trials in the graph suite.
    pub trials: usize,
    pub seed: u64,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: Suite::All,
            modes: None,
            particles: None,
            m: None,
            instances: 3,
            trials: 1000,
            seed: 0,
            timings: false,
        }
    }
}

/// Runs the selected suite; every check name carries its suite prefix.
pub fn verify(cfg: &VerifyConfig) -> Result<RunReport> {
    let mut report = RunReport::new(
        format!("verify {}", cfg.suite.name()),
        cfg.seed,
        VerificationLevel::DenseOracle,
    );
    let mut clock = Stopwatch::new(cfg.timings);
    let suites = match cfg.suite {
        Suite::All => vec![
            Suite::H2,
            Suite::Spectra,
            Suite::Oa,
            Suite::Graph,
            Suite::Decode,
            Suite::Firstq,
            Suite::Hperp,
        ],
        s => vec![s],
    };
    for s in suites {
        let checks = clock.time(s.name(), || match s {
            Suite::H2 => h2(),
            Suite::Spectra => spectra(cfg),
            Suite::Oa => oa(cfg),
            Suite::Graph => graph(cfg),
            Suite::Decode => decode(cfg),
            Suite::Firstq => firstq(cfg),
            Suite::Hperp => hperp(cfg),
            Suite::All => unreachable!("expanded above"),
        })?;
        for c in checks {
            report.push(c.prefixed(s.name()));
        }
    }
    clock.finish(&mut report);
    Ok(report)
}

fn paulis(strs: &[&str]) -> Vec<PauliOperator> {
    strs.iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect()
}

fn set_difference(a: &[String], b: &[String]) -> usize {
    a.iter().filter(|x| !b.contains(x)).count() + b.iter().filter(|x| !a.contains(x)).count()
}

fn h2() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let table = h2_pauli_table();
    let group = find_symmetries(&table);
    out.push(Check::flag(
        "symmetry_group",
        group.same_group(&paulis(&["ZZII", "ZIZI", "ZIIZ"])),
    ));
    let (_, plan, transformed) = prepare(&table, PivotPreference::Highest)?;
    let expect: Vec<String> = H2_TRANSFORMED_PAULIS
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.push(Check::count(
        "transformed_operators",
        set_difference(&transformed.operator_set(), &expect),
    ));
    let sectors = enumerate_sectors(&transformed, &plan)?;
    let wide = sectors
        .iter()
        .filter(|r| r.hamiltonian.num_qubits() != 1)
        .count();
    out.push(Check::count("every_sector_one_qubit", wide));

    let bk = build_encoding(EncodingKind::BinaryTree, 4)?;
    let par = build_encoding(EncodingKind::Parity, 4)?;
    let bk_ok = *bk.matrix() == BitMatrix::from_strs(&["1000", "1100", "0010", "1111"])?;
    let par_ok = *par.matrix() == BitMatrix::from_strs(&["1000", "1100", "1110", "1111"])?;
    out.push(Check::flag("binary_tree_matrix", bk_ok));
    out.push(Check::flag("parity_matrix", par_ok));

    let h = h2_hamiltonian();
    let jw = encode_hamiltonian(&h, &build_encoding(EncodingKind::JordanWigner, 4)?)?;
    let mut encoded: Vec<String> = jw.operator_set();
    encoded.retain(|s| s != "IIII");
    out.push(Check::count(
        "jordan_wigner_operator_set",
        set_difference(&encoded, &table.operator_set()),
    ));
    let (_, plan, transformed) = prepare(&jw, PivotPreference::Highest)?;
    let results = enumerate_sectors(&transformed, &plan)?;
    let mut union: Vec<f64> = results
        .iter()
        .flat_map(|r| r.spectrum.iter().copied())
        .collect();
    union.sort_by(f64::total_cmp);
    out.push(Check::spectra(
        "sector_union_matches_spectrum",
        &union,
        &jw.spectrum()?,
        TOL,
    ));
    let ground = results
        .iter()
        .map(|r| r.ground_energy())
        .fold(f64::INFINITY, f64::min);
    let sector_ground = h.sector_spectrum()?[0];
    out.push(Check::within(
        "ground_energy_matches_two_electron_block",
        (ground - sector_ground).abs(),
        TOL,
    ));
    Ok(out)
}

fn spectra(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let modes = cfg.modes.unwrap_or(5);
    let particles = cfg.particles.unwrap_or(modes / 2);
    let mut rng = substream(cfg.seed, Stream::Spectra);
    let mut out = Vec::new();
    for k in 0..cfg.instances {
        let h = random_hamiltonian(&mut rng, modes, particles)?;
        let fock = dense::eigenvalues(&h.dense_fock_matrix()?);
        for kind in [
            EncodingKind::JordanWigner,
            EncodingKind::Parity,
            EncodingKind::BinaryTree,
        ] {
            let q = encode_hamiltonian(&h, &build_encoding(kind, modes)?)?;
            let spec = q.spectrum()?;
            out.push(Check::spectra(
                format!("{kind}_matches_fock_{k}"),
                &spec,
                &fock,
                TOL,
            ));
            let (_, plan, transformed) = prepare(&q, PivotPreference::Highest)?;
            let mut union: Vec<f64> = enumerate_sectors(&transformed, &plan)?
                .into_iter()
                .flat_map(|r| r.spectrum)
                .collect();
            union.sort_by(f64::total_cmp);
            out.push(Check::spectra(
                format!("{kind}_sector_union_{k}"),
                &union,
                &spec,
                TOL,
            ));
        }
    }
    Ok(out)
}

fn oa(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let degrees = match cfg.m {
        Some(m) => vec![m],
        None => vec![1, 2],
    };
    let mut out = Vec::new();
    for m in degrees {
        let array = rao_hamming_oa(m)?;
        out.push(Check::flag(format!("strength_two_m{m}"), array.verify()));
        let shape = (array.num_rows(), array.num_cols());
        let q = 3usize.pow(m as u32);
        out.push(Check::flag(format!("shape_m{m}"), shape == (q * q, q + 1)));
    }
    Ok(out)
}

fn girth6_code() -> Result<BipartiteGraph> {
    cycle_chord_graph(8, 2)
}

fn random_variant(rng: &mut ChaCha20Rng) -> Variant {
    if rng.random() {
        Variant::Plus
    } else {
        Variant::MinusI
    }
}

fn graph(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let g = cycle_chord_graph(10, 3)?;
    out.push(Check::flag(
        "cycle_chord_10_3",
        (g.num_edges(), g.num_vertices(), g.girth()) == (25, 20, Some(8)),
    ));
    let code = girth6_code()?;
    out.push(Check::flag(
        "cycle_chord_8_2",
        (code.num_edges(), code.num_vertices(), code.girth()) == (16, 12, Some(6)),
    ));
    for (q, n, floor) in [(12, 2, 16usize), (20, 3, 25)] {
        let g = greedy_high_girth(q, n, cfg.trials, cfg.seed)?;
        out.push(
            Check::within(
                format!("greedy_{q}_{n}_shortfall"),
                floor.saturating_sub(g.num_edges()) as f64,
                0.0,
            )
            .with_detail(format!("M={}", g.num_edges())),
        );
        out.push(Check::flag(
            format!("greedy_{q}_{n}_certified"),
            injectivity_from_girth(&g, n),
        ));
    }
    let enc = CodeEncoding::from_graph(&code, 2)?;
    let m = enc.modes();
    let mut rng = substream(cfg.seed, Stream::Codeword);
    let (mut r2, mut r4, mut failures) = (0, 0, 0);
    for _ in 0..10 {
        let a = rng.random_range(1..=m);
        let b = (a + rng.random_range(1..m) - 1) % m + 1;
        let v = random_variant(&mut rng);
        let sim = auto_improve(&two_body_simulator(&enc, a, b, v)?, &enc)?;
        r2 = r2.max(sim.sparsity());
        failures += usize::from(!check_simulation(&enc, &sim));
    }
    for _ in 0..5 {
        let idx: Vec<usize> = (0..4).map(|_| rng.random_range(1..=m)).collect();
        let v = random_variant(&mut rng);
        let sim = auto_improve(
            &four_body_simulator(&enc, idx[0], idx[1], idx[2], idx[3], v)?,
            &enc,
        )?;
        r4 = r4.max(sim.sparsity());
        failures += usize::from(!check_simulation(&enc, &sim));
    }
    out.push(Check::within("two_body_sparsity", r2 as f64, 2.0));
    out.push(Check::within("four_body_sparsity", r4 as f64, 32.0));
    out.push(Check::count("simulation_condition", failures));
    Ok(out)
}

fn decoders_disagree(g: &BipartiteGraph, n: usize, syndromes: &[BitVector]) -> Result<usize> {
    let a = g.incidence_matrix();
    let tables = build_tables(&a, n)?;
    let mut bad = 0;
    for s in syndromes {
        let brute = brute_force_decode(&a, n, s)?;
        let agree = mitm_decode(&tables, s) == brute && graph_decode(g, s, n)? == brute;
        bad += usize::from(!agree);
    }
    Ok(bad)
}

fn decode(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let code = girth6_code()?;
    let q = code.num_vertices();
    let all: Vec<BitVector> = (0..1u64 << q)
        .map(|i| BitVector::from_index(q, i))
        .collect();
    out.push(Check::count(
        "all_syndromes_8_2",
        decoders_disagree(&code, 2, &all)?,
    ));
    let mut rng = substream(cfg.seed, Stream::Decode);
    for (q, n) in [(14, 2), (16, 3)] {
        let g = greedy_high_girth(q, n, 50, cfg.seed)?;
        let a = g.incidence_matrix();
        let mut samples: Vec<BitVector> = (0..200)
            .map(|_| BitVector::from_index(q, rng.random_range(0..1u64 << q)))
            .collect();
        for _ in 0..200 {
            let mut x = BitVector::zeros(g.num_edges());
            while x.weight() < n {
                x.set(rng.random_range(1..=g.num_edges()), true);
            }
            samples.push(a.matvec(&x)?);
        }
        out.push(Check::count(
            format!("greedy_{q}_{n}"),
            decoders_disagree(&g, n, &samples)?,
        ));
    }
    Ok(out)
}

fn firstq(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let modes = cfg.modes.unwrap_or(4);
    let particles = cfg.particles.unwrap_or(2);
    let enc = RegisterEncoding::new(modes, particles)?;
    let array = rao_hamming_oa(enc.register_qubits())?;
    let mut rng = substream(cfg.seed, Stream::FirstQuantized);
    let mut out = Vec::new();
    for k in 0..cfg.instances {
        let h = random_hamiltonian(&mut rng, modes, particles)?;
        let parts = build_tuhperp(&h, &enc)?;
        out.push(Check::within(
            format!("simulation_condition_{k}"),
            simulation_residual(&h, &parts)?,
            1e-10,
        ));
        out.push(Check::spectra(
            format!("codespace_spectrum_{k}"),
            &codespace_spectrum(&parts)?,
            &h.sector_spectrum()?,
            TOL,
        ));
        let g = default_penalty(&h, &parts)?;
        out.push(Check::within(
            format!("ground_space_in_codespace_{k}"),
            codespace_leak(&parts, g)?,
            1e-10,
        ));
        let sim = parts.assemble(g)?;
        let bins = bin_terms(&sim, particles, &array)?;
        let assigned: usize = bins.iter().map(|b| b.terms.len()).sum();
        let bad = bins.iter().filter(|b| !b.is_diagonal()).count() + assigned.abs_diff(sim.len());
        out.push(
            Check::count(format!("bins_{k}"), bad).with_detail(format!("{} bins", bins.len())),
        );
    }
    Ok(out)
}

fn hperp(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let sizes: Vec<(usize, usize)> = match (cfg.particles, cfg.modes) {
        (Some(n), Some(m)) => vec![(n, m)],
        _ => (1..=4).flat_map(|n| (1..=4).map(move |m| (n, m))).collect(),
    };
    let mut out = Vec::new();
    for (n, m) in sizes {
        let r = hperp_spectrum_check(n, m)?;
        out.push(Check::flag(format!("spectrum_n{n}_m{m}"), r.passed()));
    }
    Ok(out)
}
