use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fertaper_bench::hamiltonian;
use fertaper_core::taper::prepare;
use fertaper_core::{
    build_encoding, build_simulator_hamiltonian, build_tables, encode_hamiltonian, graph_decode,
    greedy_high_girth, hperp_spectrum_check, mitm_decode, pauli_multiply, rao_hamming_oa,
    BitVector, CodeEncoding, EncodingKind, PauliOperator, PivotPreference,
};
use std::hint::black_box;

fn pauli(c: &mut Criterion) {
    let a: PauliOperator = "XYZIXYZIXYZIXYZIXYZIXYZIXYZIXYZI".parse().unwrap();
    let b: PauliOperator = "ZZXXYYIIZZXXYYIIZZXXYYIIZZXXYYII".parse().unwrap();
    c.bench_function("pauli_multiply_32", |bch| {
        bch.iter(|| pauli_multiply(black_box(&a), black_box(&b)))
    });
}

fn encode_and_taper(c: &mut Criterion) {
    let mut g = c.benchmark_group("encode");
    for modes in [6, 10] {
        let h = hamiltonian(modes, modes / 2, 1);
        for kind in [
            EncodingKind::JordanWigner,
            EncodingKind::Parity,
            EncodingKind::BinaryTree,
        ] {
            let e = build_encoding(kind, modes).unwrap();
            g.bench_with_input(
                BenchmarkId::new(format!("{kind:?}"), modes),
                &h,
                |bch, h| bch.iter(|| encode_hamiltonian(h, &e).unwrap()),
            );
        }
        let q = encode_hamiltonian(
            &h,
            &build_encoding(EncodingKind::JordanWigner, modes).unwrap(),
        )
        .unwrap();
        g.bench_with_input(BenchmarkId::new("taper_prepare", modes), &q, |bch, q| {
            bch.iter(|| prepare(q, PivotPreference::Highest).unwrap())
        });
    }
    g.finish();
}

fn decoding(c: &mut Criterion) {
    let mut g = c.benchmark_group("decode");
    for (q, n) in [(16, 2), (20, 3)] {
        let graph = greedy_high_girth(q, n, 200, 1).unwrap();
        let enc = CodeEncoding::from_graph(&graph, n).unwrap();
        let modes = enc.modes();
        let x = BitVector::from_positions(modes, (1..=n).map(|i| i * modes / n));
        let s = enc.encode_state(&x).unwrap();
        let tables = build_tables(enc.matrix(), n).unwrap();
        let id = format!("Q{q}_N{n}");
        g.bench_function(BenchmarkId::new("mitm", &id), |bch| {
            bch.iter(|| mitm_decode(&tables, black_box(&s)))
        });
        g.bench_function(BenchmarkId::new("graph", &id), |bch| {
            bch.iter(|| graph_decode(&graph, black_box(&s), n).unwrap())
        });
        g.bench_function(BenchmarkId::new("tables", &id), |bch| {
            bch.iter(|| build_tables(enc.matrix(), n).unwrap())
        });
    }
    g.finish();
}

fn graphs(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy_high_girth");
    g.sample_size(10);
    for (q, n) in [(12, 2), (20, 3)] {
        g.bench_function(
            BenchmarkId::from_parameter(format!("Q{q}_N{n}_100trials")),
            |bch| bch.iter(|| greedy_high_girth(q, n, 100, 7).unwrap()),
        );
    }
    g.finish();
}

fn simulator(c: &mut Criterion) {
    let graph = greedy_high_girth(12, 2, 200, 1).unwrap();
    let enc = CodeEncoding::from_graph(&graph, 2).unwrap();
    let h = hamiltonian(enc.modes(), 2, 2);
    let mut g = c.benchmark_group("simulator_hamiltonian");
    g.sample_size(10);
    g.bench_function("lazy", |bch| {
        bch.iter(|| build_simulator_hamiltonian(&h, &enc, None, false).unwrap())
    });
    g.bench_function("materialized", |bch| {
        bch.iter(|| build_simulator_hamiltonian(&h, &enc, None, true).unwrap())
    });
    g.finish();
}

fn first_quantized(c: &mut Criterion) {
    let mut g = c.benchmark_group("first_quantized");
    for m in [2, 3] {
        g.bench_function(BenchmarkId::new("oa_build_verify", m), |bch| {
            bch.iter(|| rao_hamming_oa(m).unwrap().verify())
        });
    }
    g.sample_size(10);
    g.bench_function("hperp_spectrum_N3_d4", |bch| {
        bch.iter(|| hperp_spectrum_check(3, 4).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    pauli,
    encode_and_taper,
    decoding,
    graphs,
    simulator,
    first_quantized
);
criterion_main!(benches);
