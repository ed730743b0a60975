//! Hamiltonian pipelines: encode, taper, codeword simulation and the
//! first-quantized construction.

use std::collections::BTreeMap;
use std::path::Path;

use fertaper_core::bits::{binomial, span_rank};
use fertaper_core::codeword::{build_simulator_hamiltonian, FramedDiagonal, SimulatorHamiltonian};
use fertaper_core::decode::{
    brute_force_decode, build_tables, mitm_decode, BRUTE_FORCE_MAX_COLUMNS,
};
use fertaper_core::dense;
use fertaper_core::firstq::{
    bin_terms, build_tuhperp, codespace_leak, codespace_spectrum, default_penalty,
    minimal_penalty_on_grid, rao_hamming_oa, simulation_residual, RegisterEncoding, TermBin,
};
use fertaper_core::graph::{graph_decode, read_pcm};
use fertaper_core::mappings::{build_encoding, encode_hamiltonian, EncodingKind};
use fertaper_core::taper::{argmin_sector, enumerate_sectors, prepare, taper};
use fertaper_core::{
    BipartiteGraph, BitVector, CodeEncoding, Error, FermionHamiltonian, QubitHamiltonian, Result,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    substream, CodeSource, EncodingChoice, PipelineConfig, SectorPolicy, Stream, TaperOptions,
    VerificationLevel,
};
use crate::report::{Check, RunReport, SectorEnergy, Sparsity, Stopwatch};

/// Tolerance for floating-point identities between exact constructions.
pub const TOL: f64 = 1e-9;

/// Largest generator count whose `2^k` sectors are enumerated.
pub const MAX_ENUMERATED_GENERATORS: usize = 16;

/// Largest register for which codeword diagonals are written out densely.
pub const FRAMED_DENSE_MAX_QUBITS: usize = 16;

/// Largest register on which the codeword penalty is checked by a full
/// dense diagonalization.
pub const FULL_SPACE_MAX_QUBITS: usize = 10;

/// Random syndromes drawn by the decoder cross-check.
pub const DECODE_SAMPLES: usize = 512;

/// Runs the configured pipeline and returns its report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    let mut clock = Stopwatch::new(cfg.timings);
    let mut report = RunReport::new(cfg.command(), cfg.seed, cfg.verification);
    match &cfg.encoding {
        EncodingChoice::Standard(kind) => encode(cfg, *kind, &mut report, &mut clock)?,
        EncodingChoice::Qubit => {
            let q = clock.time("read", || QubitHamiltonian::read(&cfg.input))?;
            report.qubits_before = Some(q.num_qubits());
            report.terms = Some(q.canonical().len());
            let opts = cfg.taper.clone().unwrap_or(TaperOptions {
                policy: SectorPolicy::Enumerate,
                pivot: Default::default(),
            });
            let tapered = taper_stage(&q, &opts, cfg.verification, &mut report, &mut clock)?;
            if let Some(p) = &cfg.outputs.tapered {
                tapered.write(p)?;
            }
        }
        EncodingChoice::Code { source, lazy } => {
            codesim(cfg, source, *lazy, &mut report, &mut clock)?
        }
        EncodingChoice::FirstQuantized { sweep } => firstq(cfg, *sweep, &mut report, &mut clock)?,
    }
    clock.finish(&mut report);
    Ok(report)
}

/// `l1` norm of `H - H^dagger`.
pub fn hermiticity_residual(q: &QubitHamiltonian) -> Result<f64> {
    Ok(q.add(&q.adjoint().scale(Complex64::new(-1.0, 0.0)))?
        .canonical()
        .l1_norm())
}

fn encode(
    cfg: &PipelineConfig,
    kind: EncodingKind,
    report: &mut RunReport,
    clock: &mut Stopwatch,
) -> Result<()> {
    let h = clock.time("read", || FermionHamiltonian::read(&cfg.input))?;
    let e = build_encoding(kind, h.modes())?;
    let q = clock.time("encode", || encode_hamiltonian(&h, &e))?;
    report.qubits_before = Some(h.modes());
    report.qubits_after = Some(q.num_qubits());
    report.terms = Some(q.len());
    report.set("map", kind.to_string());
    report.set("particles", h.particles());
    if cfg.verification.structural() {
        report.push(Check::within(
            "encoded_hamiltonian_hermitian",
            hermiticity_residual(&q)?,
            TOL,
        ));
    }
    if cfg.verification.dense() {
        let fock = clock.time("fock_oracle", || {
            h.dense_fock_matrix().map(|m| dense::eigenvalues(&m))
        })?;
        report.push(Check::spectra(
            "spectrum_matches_fock_space",
            &q.spectrum()?,
            &fock,
            TOL,
        ));
    }
    if let Some(p) = &cfg.outputs.hamiltonian {
        q.write(p)?;
    }
    if let Some(opts) = &cfg.taper {
        let tapered = taper_stage(&q, opts, cfg.verification, report, clock)?;
        if let Some(p) = &cfg.outputs.tapered {
            tapered.write(p)?;
        }
    }
    Ok(())
}

/// Finds the symmetries of `q`, tapers according to `opts` and returns the
/// selected sector's Hamiltonian.
pub fn taper_stage(
    q: &QubitHamiltonian,
    opts: &TaperOptions,
    level: VerificationLevel,
    report: &mut RunReport,
    clock: &mut Stopwatch,
) -> Result<QubitHamiltonian> {
    let (group, plan, transformed) = clock.time("symmetries", || prepare(q, opts.pivot))?;
    report.degenerate = group.degenerate;
    report.generators = plan.generators.iter().map(|g| g.to_string()).collect();
    report.paired_qubits = plan.qubits.clone();
    report.qubits_after = Some(plan.tapered_qubits());
    if level.structural() {
        let mut outside = 0;
        let mut clashing = 0;
        for (i, g) in plan.generators.iter().enumerate() {
            outside += usize::from(!q.commutes_with(g)?);
            for other in &plan.generators[i + 1..] {
                clashing += usize::from(!g.commutes(other)?);
            }
        }
        report.push(Check::count("generators_commute_with_hamiltonian", outside));
        report.push(Check::count("generators_commute_pairwise", clashing));
        let vectors: Vec<BitVector> = plan.generators.iter().map(|g| g.symplectic()).collect();
        report.push(Check::count(
            "generators_independent",
            plan.k() - span_rank(&vectors),
        ));
    }
    match &opts.policy {
        SectorPolicy::Enumerate => {
            if plan.k() > MAX_ENUMERATED_GENERATORS {
                return Err(Error::Precondition(format!(
                    "{} symmetries give 2^{} sectors; select one with --sector",
                    plan.k(),
                    plan.k()
                )));
            }
            let results = clock.time("sectors", || enumerate_sectors(&transformed, &plan))?;
            report.sectors = results
                .iter()
                .map(|r| SectorEnergy {
                    sector: r.sector.to_string(),
                    qubits: r.hamiltonian.num_qubits(),
                    ground_energy: Some(r.ground_energy()),
                })
                .collect();
            let best = argmin_sector(&results).expect("at least the empty sector");
            report.set("selected_sector", best.sector.to_string());
            if level.dense() {
                let mut union: Vec<f64> = results
                    .iter()
                    .flat_map(|r| r.spectrum.iter().copied())
                    .collect();
                union.sort_by(f64::total_cmp);
                let full = clock.time("full_spectrum", || q.spectrum())?;
                report.push(Check::spectra(
                    "sector_union_matches_spectrum",
                    &union,
                    &full,
                    TOL,
                ));
            }
            Ok(best.hamiltonian.clone())
        }
        SectorPolicy::Fixed(sector) => {
            let tapered = taper(&transformed, &plan, sector)?;
            report.set("selected_sector", sector.to_string());
            let mut ground = None;
            if level.dense() {
                let spec = clock.time("sector_spectrum", || tapered.spectrum())?;
                let full = clock.time("full_spectrum", || q.spectrum())?;
                let worst = spec
                    .iter()
                    .map(|e| {
                        full.iter()
                            .map(|f| (e - f).abs())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max);
                report.push(Check::within("sector_spectrum_within_spectrum", worst, TOL));
                ground = spec.first().copied();
            }
            report.sectors = vec![SectorEnergy {
                sector: sector.to_string(),
                qubits: tapered.num_qubits(),
                ground_energy: ground,
            }];
            Ok(tapered)
        }
    }
}

/// The code from a parity-check or graph file. Weight-two columns that form
/// a bipartite graph also supply the row bipartition.
pub fn load_code(
    source: &CodeSource,
    particles: usize,
) -> Result<(CodeEncoding, Option<BipartiteGraph>)> {
    match source {
        CodeSource::ParityCheck(path) => {
            let a = read_pcm(path)?;
            let enc = CodeEncoding::new(a.clone(), particles)?;
            match BipartiteGraph::from_incidence(&a) {
                Ok(g) => Ok((enc.with_bipartition(&g.left_vertices())?, None)),
                Err(_) => Ok((enc, None)),
            }
        }
        CodeSource::Graph(path) => {
            let g = BipartiteGraph::read(path)?;
            Ok((CodeEncoding::from_graph(&g, particles)?, Some(g)))
        }
    }
}

/// Compares the encoding's decoder, an independent reference (brute force
/// when affordable, meet-in-the-middle otherwise) and, for graph codes, the
/// matching decoder. Returns the number of disagreeing syndromes.
pub fn decode_disagreements(
    enc: &CodeEncoding,
    graph: Option<&BipartiteGraph>,
    rng: &mut ChaCha20Rng,
) -> Result<(usize, usize)> {
    let a = enc.matrix();
    let n = enc.particles();
    let q = enc.qubits();
    let mut samples: Vec<BitVector> = enc.codewords().into_iter().map(|(_, s)| s).collect();
    if samples.len() > 4 * DECODE_SAMPLES {
        let keep: Vec<BitVector> = (0..4 * DECODE_SAMPLES)
            .map(|_| samples[rng.random_range(0..samples.len())].clone())
            .collect();
        samples = keep;
    }
    for _ in 0..DECODE_SAMPLES {
        let mut s = BitVector::zeros(q);
        for i in 1..=q {
            s.set(i, rng.random());
        }
        samples.push(s);
    }
    let brute = a.ncols() <= BRUTE_FORCE_MAX_COLUMNS && binomial(a.ncols(), n) <= 1 << 16;
    let tables = if brute {
        None
    } else {
        Some(build_tables(a, n)?)
    };
    let bad = samples
        .par_iter()
        .map(|s| -> Result<bool> {
            let reference = match &tables {
                Some(t) => mitm_decode(t, s),
                None => brute_force_decode(a, n, s)?,
            };
            let mut agree = enc.decoder().decode(s) == reference;
            if let Some(g) = graph {
                agree &= graph_decode(g, s, n)? == reference;
            }
            Ok(!agree)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok((bad, samples.len()))
}

/// Largest deviation from `H_sim E = E H` over all codewords, computed from
/// the sparse actions.
pub fn codeword_simulation_residual(
    h: &FermionHamiltonian,
    enc: &CodeEncoding,
    sim: &SimulatorHamiltonian,
) -> f64 {
    enc.codewords()
        .par_iter()
        .map(|(x, s)| {
            let mut diff: BTreeMap<BitVector, Complex64> = sim.apply(s);
            for (amp, y) in h.action(x) {
                *diff.entry(enc.flip_syndrome(&y)).or_default() -= amp;
            }
            diff.values().map(|c| c.norm()).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn codesim(
    cfg: &PipelineConfig,
    source: &CodeSource,
    lazy: bool,
    report: &mut RunReport,
    clock: &mut Stopwatch,
) -> Result<()> {
    let h = clock.time("read", || FermionHamiltonian::read(&cfg.input))?;
    let (enc, graph) = clock.time("code", || load_code(source, h.particles()))?;
    let materialize = !lazy && enc.qubits() <= FRAMED_DENSE_MAX_QUBITS;
    let sim = clock.time("simulate", || {
        build_simulator_hamiltonian(&h, &enc, cfg.penalty, materialize)
    })?;
    report.qubits_before = Some(h.modes());
    report.qubits_after = Some(enc.qubits());
    report.terms = Some(sim.sparsity());
    report.sparsity = Some(Sparsity {
        r: sim.sparsity(),
        r2: sim.r2,
        r4: sim.r4,
    });
    report.set("particles", h.particles());
    report.set("penalty", sim.penalty);
    report.set("bipartite", enc.is_bipartite());
    report.set("max_column_weight", enc.max_column_weight());
    if cfg.verification.structural() {
        use fertaper_core::codeword::sparsity_bound;
        use fertaper_core::fermion::ObservableKind;
        let (w, bip) = (enc.max_column_weight(), enc.is_bipartite());
        let two = sparsity_bound(w, ObservableKind::TwoBody, bip);
        let four = sparsity_bound(w, ObservableKind::FourBody, bip);
        report.push(Check::within(
            "two_body_sparsity_bound",
            sim.r2 as f64,
            two as f64,
        ));
        report.push(Check::within(
            "four_body_sparsity_bound",
            sim.r4 as f64,
            four as f64,
        ));
        let residual = clock.time("simulation_check", || {
            codeword_simulation_residual(&h, &enc, &sim)
        });
        report.push(Check::within("simulation_condition", residual, TOL));
        let mut rng = substream(cfg.seed, Stream::Decode);
        let (bad, total) = clock.time("decode_check", || {
            decode_disagreements(&enc, graph.as_ref(), &mut rng)
        })?;
        report.push(
            Check::count("decode_cross_check", bad).with_detail(format!("{total} syndromes")),
        );
    }
    if cfg.verification.dense() {
        let words = enc.codewords();
        dense::guard(usize::BITS as usize - words.len().leading_zeros() as usize)?;
        let fock: Vec<BitVector> = words.iter().map(|(x, _)| x.clone()).collect();
        let block = h.matrix_on(&fock);
        let coded = sim.codespace_matrix(&enc);
        let target = dense::eigenvalues(&block);
        report.push(Check::spectra(
            "codespace_spectrum_matches_sector",
            &dense::eigenvalues(&coded),
            &target,
            TOL,
        ));
        if enc.qubits() <= FULL_SPACE_MAX_QUBITS {
            let full = clock.time("full_spectrum", || {
                sim.dense_matrix().map(|m| dense::eigenvalues(&m))
            })?;
            let gap = (full[0] - target[0]).abs();
            report.push(Check::within(
                "penalized_ground_energy_matches_sector",
                gap,
                TOL,
            ));
        }
    }
    if let Some(p) = &cfg.outputs.framed {
        write_framed(p, &sim, h.particles())?;
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum DiagonalOut {
    Dense(Vec<f64>),
    Lazy(&'static str),
}

#[derive(Serialize)]
struct FramedEntry {
    weight: f64,
    frame: String,
    complement: Vec<usize>,
    diagonal: DiagonalOut,
}

#[derive(Serialize)]
struct FramedFile {
    qubits: usize,
    particles: usize,
    penalty: f64,
    projector: FramedEntry,
    terms: Vec<FramedEntry>,
}

fn framed_entry(weight: f64, d: &FramedDiagonal) -> FramedEntry {
    let (frame, sign) = d.frame_letters();
    let diagonal = if d.is_materialized() {
        DiagonalOut::Dense(
            d.entries()
                .iter()
                .map(|e| *e.numer() as f64 / *e.denom() as f64)
                .collect(),
        )
    } else {
        DiagonalOut::Lazy("lazy")
    };
    FramedEntry {
        weight: weight * f64::from(sign),
        frame,
        complement: d.complement().to_vec(),
        diagonal,
    }
}

/// Framed diagonals as JSON: frame letters, weight (sign folded in),
/// complement qubits and the diagonal or the `"lazy"` marker.
pub fn write_framed(path: &Path, sim: &SimulatorHamiltonian, particles: usize) -> Result<()> {
    let file = FramedFile {
        qubits: sim.qubits,
        particles,
        penalty: sim.penalty,
        projector: framed_entry(sim.penalty, &sim.penalty_term),
        terms: sim.terms.iter().map(|(w, d)| framed_entry(*w, d)).collect(),
    };
    fertaper_core::write_file(path, serde_json::to_string(&file)? + "\n")?;
    Ok(())
}

#[derive(Serialize)]
struct BinOut {
    row: usize,
    basis: String,
    terms: Vec<(f64, f64, String)>,
}

/// Measurement bins as JSON: array row, per-qubit basis and the terms.
pub fn write_bins(path: &Path, bins: &[TermBin]) -> Result<()> {
    let out: Vec<BinOut> = bins
        .iter()
        .map(|b| BinOut {
            row: b.row,
            basis: b.basis_string(),
            terms: b
                .terms
                .terms()
                .iter()
                .map(|(c, p)| (c.re, c.im, p.letter_string()))
                .collect(),
        })
        .collect();
    fertaper_core::write_file(path, serde_json::to_string_pretty(&out)? + "\n")?;
    Ok(())
}

/// Geometric grid of `points` values from `hi / 2^10` to `hi`.
pub fn penalty_grid(hi: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    (0..points)
        .map(|i| hi * 2f64.powf(-10.0 * (points - 1 - i) as f64 / (points - 1) as f64))
        .collect()
}

fn firstq(
    cfg: &PipelineConfig,
    sweep: bool,
    report: &mut RunReport,
    clock: &mut Stopwatch,
) -> Result<()> {
    let h = clock.time("read", || FermionHamiltonian::read(&cfg.input))?;
    let enc = RegisterEncoding::new(h.modes(), h.particles())?;
    let parts = clock.time("build", || build_tuhperp(&h, &enc))?;
    let g_default = default_penalty(&h, &parts)?;
    let g = cfg.penalty.unwrap_or(g_default);
    let sim = parts.assemble(g)?;
    report.qubits_before = Some(h.modes());
    report.qubits_after = Some(enc.qubits());
    report.terms = Some(sim.len());
    report.set("particles", h.particles());
    report.set("register_qubits", enc.register_qubits());
    report.set("penalty", g);
    report.set("default_penalty", g_default);
    let oa = clock.time("array", || rao_hamming_oa(enc.register_qubits()))?;
    let bins = clock.time("bins", || bin_terms(&sim, h.particles(), &oa))?;
    report.set("bins", bins.len());
    report.set("array_rows", oa.num_rows());
    if cfg.verification.structural() {
        report.push(Check::flag(
            "array_strength_two",
            clock.time("array_check", || oa.verify()),
        ));
        report.push(Check::count(
            "bins_diagonal",
            bins.iter().filter(|b| !b.is_diagonal()).count(),
        ));
        let assigned: usize = bins.iter().map(|b| b.terms.len()).sum();
        report.push(Check::count(
            "bins_cover_terms",
            assigned.abs_diff(sim.len()),
        ));
        report.push(Check::within(
            "bin_count_within_rows",
            bins.len() as f64,
            oa.num_rows() as f64,
        ));
    }
    if cfg.verification.dense() {
        let residual = clock.time("simulation_check", || simulation_residual(&h, &parts))?;
        report.push(Check::within("simulation_condition", residual, TOL));
        let spec = clock.time("codespace_spectrum", || codespace_spectrum(&parts))?;
        report.push(Check::spectra(
            "codespace_spectrum_matches_sector",
            &spec,
            &h.sector_spectrum()?,
            TOL,
        ));
        let leak = clock.time("leak", || codespace_leak(&parts, g))?;
        report.push(Check::within("ground_space_in_codespace", leak, 1e-10));
    }
    if sweep {
        let grid = penalty_grid(g_default, 41);
        let found = clock.time("sweep", || minimal_penalty_on_grid(&parts, &grid, 1e-10))?;
        report.set("minimal_penalty_on_grid", found);
    }
    if let Some(p) = &cfg.outputs.hamiltonian {
        sim.write(p)?;
    }
    if let Some(p) = &cfg.outputs.bins {
        write_bins(p, &bins)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_ascending_and_ends_at_bound() {
        let g = penalty_grid(8.0, 11);
        assert_eq!(g.len(), 11);
        assert!((g[10] - 8.0).abs() < 1e-12);
        assert!((g[0] - 8.0 / 1024.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
