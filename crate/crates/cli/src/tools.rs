//! Standalone subcommands: graph generation and tables, decoding, orthogonal
//! arrays and the antisymmetrizing-penalty spectrum.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use fertaper_core::decode::Decoder as _;
use fertaper_core::decode::{
    brute_force_decode, build_tables, is_n_injective, mitm_decode, LookupDecoder,
};
use fertaper_core::firstq::{e_lambda, hperp_spectrum_check, partitions, rao_hamming_oa};
use fertaper_core::graph::{
    graph_decode, greedy_high_girth, injectivity_from_girth, is_maximal, read_pcm,
};
use fertaper_core::{BipartiteGraph, BitMatrix, BitVector, Error, Result};
use num_rational::Rational64;

use crate::config::{CodeSource, VerificationLevel};
use crate::report::{Check, RunReport, Stopwatch};

/// Shared run options of the standalone subcommands.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub verification: VerificationLevel,
    pub timings: bool,
}

impl RunOptions {
    fn report(&self, command: &str) -> (RunReport, Stopwatch) {
        (
            RunReport::new(command, self.seed, self.verification),
            Stopwatch::new(self.timings),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphGenConfig {
    pub qubits: usize,
    pub particles: usize,
    pub trials: usize,
    pub output: Option<PathBuf>,
    pub run: RunOptions,
}

/// Best greedy high-girth graph; the run seed seeds the trial streams.
pub fn graphgen(cfg: &GraphGenConfig) -> Result<RunReport> {
    let (mut report, mut clock) = cfg.run.report("graphgen");
    let g = clock.time("greedy", || {
        greedy_high_girth(cfg.qubits, cfg.particles, cfg.trials, cfg.run.seed)
    })?;
    report.qubits_after = Some(g.num_vertices());
    report.set("particles", cfg.particles);
    report.set("trials", cfg.trials);
    report.set("modes", g.num_edges());
    report.set("girth", g.girth());
    report.set("left", g.left_vertices().len());
    report.set("right", g.right_vertices().len());
    if cfg.run.verification.structural() {
        report.push(Check::flag(
            "girth_certifies_injectivity",
            injectivity_from_girth(&g, cfg.particles),
        ));
        report.push(Check::flag(
            "maximal",
            clock.time("maximality", || is_maximal(&g, cfg.particles)),
        ));
    }
    if cfg.run.verification.dense() {
        let ok = clock.time("injectivity", || {
            is_n_injective(&g.incidence_matrix(), cfg.particles)
        })?;
        report.push(Check::flag("injective_by_kernel_search", ok));
    }
    if let Some(p) = &cfg.output {
        g.write(p)?;
    }
    clock.finish(&mut report);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphTableConfig {
    pub qmin: usize,
    pub qmax: usize,
    pub nmax: usize,
    pub trials: usize,
    pub output: Option<PathBuf>,
    pub run: RunOptions,
}

/// CSV of the best greedy mode count per `(Q, N)`: each cell is a lower
/// bound on the largest `N`-injective graph code with `Q` qubits.
pub fn graphtable(cfg: &GraphTableConfig) -> Result<(RunReport, String)> {
    if cfg.qmin < 2 || cfg.qmin > cfg.qmax || cfg.nmax == 0 {
        return Err(Error::Precondition(format!(
            "need 2 <= qmin <= qmax and nmax >= 1, got qmin={} qmax={} nmax={}",
            cfg.qmin, cfg.qmax, cfg.nmax
        )));
    }
    let (mut report, mut clock) = cfg.run.report("graphtable");
    let mut csv = String::from("qubits,particles,modes,girth,modes_per_qubit\n");
    let mut uncertified = 0;
    let mut rows = 0;
    for n in 1..=cfg.nmax {
        for q in cfg.qmin..=cfg.qmax {
            let g = clock.time("greedy", || {
                greedy_high_girth(q, n, cfg.trials, cfg.run.seed)
            })?;
            uncertified += usize::from(!injectivity_from_girth(&g, n));
            let girth = g
                .girth()
                .map_or_else(|| "inf".to_string(), |x| x.to_string());
            let ratio = g.num_edges() as f64 / q as f64;
            writeln!(csv, "{q},{n},{},{girth},{ratio:.4}", g.num_edges()).expect("string write");
            rows += 1;
        }
    }
    report.set("rows", rows);
    report.set("trials", cfg.trials);
    if cfg.run.verification.structural() {
        report.push(Check::count("girth_certifies_injectivity", uncertified));
    }
    if let Some(p) = &cfg.output {
        fertaper_core::write_file(p, &csv)?;
    }
    clock.finish(&mut report);
    Ok((report, csv))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum DecodeMethod {
    /// Matching decoder for graph files, meet-in-the-middle otherwise.
    #[default]
    Auto,
    Lookup,
    Mitm,
    Brute,
    Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeConfig {
    pub source: CodeSource,
    pub particles: usize,
    pub syndrome: BitVector,
    pub method: DecodeMethod,
    pub run: RunOptions,
}

fn load_matrix(source: &CodeSource) -> Result<(BitMatrix, Option<BipartiteGraph>)> {
    match source {
        CodeSource::ParityCheck(p) => Ok((read_pcm(p)?, None)),
        CodeSource::Graph(p) => {
            let g = BipartiteGraph::read(p)?;
            Ok((g.incidence_matrix(), Some(g)))
        }
    }
}

fn run_method(
    method: DecodeMethod,
    a: &BitMatrix,
    graph: Option<&BipartiteGraph>,
    n: usize,
    s: &BitVector,
) -> Result<Option<BitVector>> {
    match method {
        DecodeMethod::Auto => match graph {
            Some(_) => run_method(DecodeMethod::Graph, a, graph, n, s),
            None => run_method(DecodeMethod::Mitm, a, graph, n, s),
        },
        DecodeMethod::Lookup => Ok(LookupDecoder::new(a, n)?.decode(s)),
        DecodeMethod::Mitm => Ok(mitm_decode(&build_tables(a, n)?, s)),
        DecodeMethod::Brute => brute_force_decode(a, n, s),
        DecodeMethod::Graph => match graph {
            Some(g) => graph_decode(g, s, n),
            None => Err(Error::Precondition(
                "the matching decoder needs --graph".into(),
            )),
        },
    }
}

/// Unique weight-`N` preimage of a syndrome. Structural verification runs
/// every other applicable decoder and counts disagreements.
pub fn decode(cfg: &DecodeConfig) -> Result<RunReport> {
    let (mut report, mut clock) = cfg.run.report("decode");
    let (a, graph) = load_matrix(&cfg.source)?;
    if cfg.syndrome.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: cfg.syndrome.len(),
        });
    }
    let n = cfg.particles;
    let found = clock.time("decode", || {
        run_method(cfg.method, &a, graph.as_ref(), n, &cfg.syndrome)
    })?;
    report.qubits_before = Some(a.ncols());
    report.qubits_after = Some(a.nrows());
    report.set("particles", n);
    report.set("syndrome", cfg.syndrome.to_string());
    report.set("decoded", found.as_ref().map(|x| x.to_string()));
    report.set(
        "occupied",
        found.as_ref().map(|x| x.ones().collect::<Vec<_>>()),
    );
    if cfg.run.verification.structural() {
        let mut others = vec![DecodeMethod::Mitm, DecodeMethod::Brute];
        if graph.is_some() {
            others.push(DecodeMethod::Graph);
        }
        let mut disagree = Vec::new();
        for m in others {
            let other = clock.time("cross_check", || {
                run_method(m, &a, graph.as_ref(), n, &cfg.syndrome)
            })?;
            if other != found {
                disagree.push(format!("{m:?}"));
            }
        }
        let check = Check::count("decoders_agree", disagree.len());
        report.push(if disagree.is_empty() {
            check
        } else {
            check.with_detail(disagree.join(", "))
        });
    }
    clock.finish(&mut report);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OaConfig {
    pub m: usize,
    pub verify: bool,
    pub output: Option<PathBuf>,
    pub run: RunOptions,
}

/// The `9^m x (3^m + 1)` array over `GF(3^m)`; `output` receives the field
/// elements as one row per line.
pub fn oa(cfg: &OaConfig) -> Result<RunReport> {
    let (mut report, mut clock) = cfg.run.report("oa");
    let array = clock.time("build", || rao_hamming_oa(cfg.m))?;
    report.set("m", cfg.m);
    report.set("field_order", array.field().order());
    report.set("modulus", array.field().modulus());
    report.set("rows", array.num_rows());
    report.set("cols", array.num_cols());
    if cfg.verify {
        report.push(Check::flag(
            "strength_two",
            clock.time("verify", || array.verify()),
        ));
        let q = array.field().order() as u32;
        let mut missing = 0;
        for c1 in 1..=array.num_cols() {
            for c2 in c1 + 1..=array.num_cols() {
                for (e1, e2) in (0..q).flat_map(|x| (0..q).map(move |y| (x, y))) {
                    let ok = array
                        .row_for(&[(c1, e1), (c2, e2)])
                        .is_some_and(|r| array.entry(r, c1) == e1 && array.entry(r, c2) == e2);
                    missing += usize::from(!ok);
                }
            }
        }
        report.push(Check::count("row_lookup", missing));
    }
    if let Some(p) = &cfg.output {
        let mut text = format!("{} {}\n", array.num_rows(), array.num_cols());
        for r in 1..=array.num_rows() {
            let row: Vec<String> = (1..=array.num_cols())
                .map(|c| array.entry(r, c).to_string())
                .collect();
            text.push_str(&row.join(" "));
            text.push('\n');
        }
        fertaper_core::write_file(p, text)?;
    }
    clock.finish(&mut report);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HperpConfig {
    pub particles: usize,
    pub labels: usize,
    pub spectrum: bool,
    pub run: RunOptions,
}

fn rational(r: &Rational64) -> String {
    r.to_string()
}

/// Eigenvalues of the antisymmetrizing penalty on `N` registers of `M`
/// labels against the closed form per column partition.
pub fn hperp(cfg: &HperpConfig) -> Result<RunReport> {
    let (mut report, mut clock) = cfg.run.report("hperp");
    let r = clock.time("check", || hperp_spectrum_check(cfg.particles, cfg.labels))?;
    report.set("particles", cfg.particles);
    report.set("labels", cfg.labels);
    let sectors: BTreeMap<String, String> = partitions(cfg.particles)
        .into_iter()
        .filter(|p| p.longest() <= cfg.labels)
        .map(|p| (p.to_string(), rational(&e_lambda(&p))))
        .collect();
    report.set("partitions", sectors);
    report.set(
        "expected",
        r.expected.iter().map(rational).collect::<Vec<_>>(),
    );
    report.set("gap", r.gap.as_ref().map(rational));
    report.push(Check::flag("young_vectors_exact", r.exact_ok));
    report.push(Check::flag("gap_is_half_particles", r.gap_ok));
    if cfg.spectrum {
        report.set("dense", &r.dense);
        let residual = if r.dense.len() == r.expected.len() {
            r.dense
                .iter()
                .zip(&r.expected)
                .map(|(x, e)| (x - *e.numer() as f64 / *e.denom() as f64).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        report.push(Check::within("dense_spectrum_matches", residual, 1e-9));
    }
    clock.finish(&mut report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hperp_report_lists_partitions() {
        let r = hperp(&HperpConfig {
            particles: 3,
            labels: 4,
            spectrum: true,
            run: RunOptions::default(),
        })
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.data["partitions"].as_object().unwrap().len(), 3);
        assert_eq!(r.data["gap"], serde_json::json!("3/2"));
    }

    #[test]
    fn oa_lookup_covers_every_pair() {
        let r = oa(&OaConfig {
            m: 1,
            verify: true,
            output: None,
            run: RunOptions::default(),
        })
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.data["rows"], serde_json::json!(9));
        assert_eq!(r.data["cols"], serde_json::json!(4));
    }
}
