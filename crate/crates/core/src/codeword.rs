//! Codeword encodings `|x> -> |Ax>` of the `N`-particle sector and sparse
//! simulators of few-body observables.
//!
//! An observable `O = i^eps (M +- M^dagger)` toggles a fixed set of modes
//! `f`. On codewords it acts as `i^eps X(F) Gamma` with `F = A f` and
//! `Gamma` diagonal, `Gamma |Ax> = g(Ax) |Ax>`, `g` in `{-1, 0, +1}`.
//! Expanding `Gamma` in `Z(t)` over the qubits of `F` (a Walsh-Hadamard
//! transform) writes the simulator as a sum of terms
//! `i^eps X(F) Z(t) (x) Gamma(t)`, each diagonal in a product basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::bits::{binomial, combinations, BitMatrix, BitVector};
use crate::decode::{build_tables, Decoder, LookupDecoder, DEFAULT_BUDGET};
use crate::dense::{self, CMatrix};
use crate::error::{Error, Result};
use crate::fermion::{FermionHamiltonian, FermionObservable, FockState, ObservableKind, Variant};
use crate::graph::{BipartiteGraph, GraphDecoder};
use crate::pauli::PauliOperator;

/// Largest qubit count for which diagonals are materialized densely.
pub const MATERIALIZE_MAX_QUBITS: usize = 24;

/// Exact complex amplitude.
pub type ExactAmplitude = Complex<Rational64>;

/// Encoding `|x> -> |Ax>` of weight-`N` occupation vectors.
#[derive(Clone)]
pub struct CodeEncoding {
    a: BitMatrix,
    n: usize,
    columns: Vec<BitVector>,
    left: Option<BitVector>,
    decoder: Arc<dyn Decoder>,
}

impl std::fmt::Debug for CodeEncoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeEncoding")
            .field("a", &self.a)
            .field("n", &self.n)
            .field("left", &self.left)
            .finish_non_exhaustive()
    }
}

impl CodeEncoding {
    /// Checks injectivity by building the full syndrome table; falls back to
    /// meet-in-the-middle tables (which only check the half weights) when
    /// the full table exceeds the entry budget.
    pub fn new(a: BitMatrix, n: usize) -> Result<Self> {
        if n > a.ncols() {
            return Err(Error::Precondition(format!(
                "{n} particles exceed {} modes",
                a.ncols()
            )));
        }
        let decoder: Arc<dyn Decoder> = if binomial(a.ncols(), n) <= DEFAULT_BUDGET {
            Arc::new(LookupDecoder::new(&a, n)?)
        } else {
            log::warn!(
                "injectivity of a {}x{} matrix is not fully verified",
                a.nrows(),
                a.ncols()
            );
            Arc::new(build_tables(&a, n)?)
        };
        Ok(Self::with_decoder(a, n, decoder))
    }

    /// Uses the given decoder without re-checking injectivity.
    pub fn with_decoder(a: BitMatrix, n: usize, decoder: Arc<dyn Decoder>) -> Self {
        let columns = a.columns();
        CodeEncoding {
            a,
            n,
            columns,
            left: None,
            decoder,
        }
    }

    /// Incidence-matrix code of a graph whose girth certifies injectivity,
    /// with the graph's sides as row bipartition and the matching decoder.
    pub fn from_graph(g: &BipartiteGraph, n: usize) -> Result<Self> {
        let decoder = GraphDecoder::new(g.clone(), n)?;
        let enc = Self::with_decoder(g.incidence_matrix(), n, Arc::new(decoder));
        enc.with_bipartition(&g.left_vertices())
    }

    /// Row bipartition `L` (given) and `R` (the rest); every column must meet
    /// both sides in an odd number of rows.
    pub fn with_bipartition(mut self, left_rows: &[usize]) -> Result<Self> {
        let q = self.qubits();
        let left = BitVector::from_positions(q, left_rows.iter().copied());
        let right = &left ^ &BitVector::ones_vector(q);
        for (j, col) in self.columns.iter().enumerate() {
            if col.and_weight(&left) % 2 != 1 || col.and_weight(&right) % 2 != 1 {
                return Err(Error::Precondition(format!(
                    "column {} meets a side of the bipartition in an even number of rows",
                    j + 1
                )));
            }
        }
        self.left = Some(left);
        Ok(self)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.a
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.a.ncols()
    }

    pub fn qubits(&self) -> usize {
        self.a.nrows()
    }

    pub fn column(&self, alpha: usize) -> &BitVector {
        &self.columns[alpha - 1]
    }

    pub fn column_weights(&self) -> Vec<usize> {
        self.columns.iter().map(BitVector::weight).collect()
    }

    /// `c(A)`, the largest column weight.
    pub fn max_column_weight(&self) -> usize {
        self.columns
            .iter()
            .map(BitVector::weight)
            .max()
            .unwrap_or(0)
    }

    /// Filling fraction `N / M`.
    pub fn filling(&self) -> f64 {
        self.n as f64 / self.modes() as f64
    }

    /// Qubits per mode `Q / M`.
    pub fn qubit_ratio(&self) -> f64 {
        self.qubits() as f64 / self.modes() as f64
    }

    pub fn is_bipartite(&self) -> bool {
        self.left.is_some()
    }

    /// `(L, R)` as row masks.
    pub fn bipartition(&self) -> Option<(BitVector, BitVector)> {
        self.left
            .as_ref()
            .map(|l| (l.clone(), l ^ &BitVector::ones_vector(self.qubits())))
    }

    pub fn decoder(&self) -> &Arc<dyn Decoder> {
        &self.decoder
    }

    /// `s = Ax` for a weight-`N` occupation vector.
    pub fn encode_state(&self, x: &FockState) -> Result<BitVector> {
        if x.len() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                actual: x.len(),
            });
        }
        if x.weight() != self.n {
            return Err(Error::Precondition(format!(
                "state has weight {}, expected {}",
                x.weight(),
                self.n
            )));
        }
        Ok(self.flip_syndrome(x))
    }

    /// `A f` for any mode set `f`.
    pub fn flip_syndrome(&self, f: &BitVector) -> BitVector {
        let mut s = BitVector::zeros(self.qubits());
        for alpha in f.ones() {
            s ^= &self.columns[alpha - 1];
        }
        s
    }

    pub fn decode(&self, s: &BitVector) -> Option<FockState> {
        self.decoder.decode(s)
    }

    /// All weight-`N` occupation vectors (lexicographic by occupied modes)
    /// paired with their codewords.
    pub fn codewords(&self) -> Vec<(FockState, BitVector)> {
        combinations(self.modes(), self.n)
            .map(|c| {
                let x = BitVector::from_positions(self.modes(), c);
                let s = self.flip_syndrome(&x);
                (x, s)
            })
            .collect()
    }

    /// Restriction to a subset of modes (columns), keeping the bipartition.
    pub fn restrict_modes(&self, keep: &[usize], n: usize) -> Result<Self> {
        let a = self.a.select_columns(keep);
        let enc = CodeEncoding::new(a, n)?;
        match &self.left {
            Some(l) => enc.with_bipartition(&l.ones().collect::<Vec<_>>()),
            None => Ok(enc),
        }
    }
}

/// `O |x> = c(x) |x + f>`; returns `c(x) / (i^eps * divisor)` as an integer.
fn transition_value(obs: &FermionObservable, divisor: i64, x: &FockState) -> i64 {
    let flip = obs.monomial.flip_set(x.len());
    let target = x ^ &flip;
    let amp: num_complex::Complex64 = obs
        .action(x)
        .into_iter()
        .filter(|(_, y)| *y == target)
        .map(|(a, _)| a)
        .sum();
    let real = if obs.epsilon() == 1 { amp.im } else { amp.re };
    let v = real / divisor as f64;
    debug_assert!((v - v.round()).abs() < 1e-12);
    v.round() as i64
}

/// `g(s)`: zero unless `s` decodes to a weight-`N` state `x` on which the
/// observable acts, else the sign of that transition (with `i^eps` removed).
pub fn gamma_value(enc: &CodeEncoding, obs: &FermionObservable, s: &BitVector) -> i8 {
    let divisor = if obs.monomial.flip_set(enc.modes()).is_zero() {
        2
    } else {
        1
    };
    match enc.decode(s) {
        Some(x) => transition_value(obs, divisor, &x) as i8,
        None => 0,
    }
}

/// In-place unnormalized Walsh-Hadamard transform:
/// `v[t] <- sum_u (-1)^{t.u} v[u]`.
pub fn walsh_hadamard(v: &mut [i64]) {
    let n = v.len();
    assert!(n.is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

#[derive(Clone)]
struct LazyGamma {
    enc: CodeEncoding,
    obs: FermionObservable,
    divisor: i64,
}

impl LazyGamma {
    fn g(&self, s: &BitVector) -> i64 {
        match self.enc.decode(s) {
            Some(x) => transition_value(&self.obs, self.divisor, &x),
            None => 0,
        }
    }
}

#[derive(Clone)]
enum Diagonal {
    /// Numerators over `2^log2_den`, indexed by the complement bits.
    Dense { numerators: Vec<i64>, log2_den: u32 },
    /// `scale * 2^-k * sum_u (-1)^{t.u} g(u, s')`, evaluated on demand.
    Lazy { source: Arc<LazyGamma>, scale: i64 },
    /// `1 - [s decodes]` (`complement = false`) or `[s decodes]`.
    Projector { enc: CodeEncoding, complement: bool },
}

/// Hermitian term `i^eps X(F) Z(t) (x) Gamma(t)`, where `Gamma(t)` is
/// diagonal on the qubits outside `F`.
#[derive(Clone)]
pub struct FramedDiagonal {
    flip: BitVector,
    t: BitVector,
    epsilon: u8,
    complement: Vec<usize>,
    diagonal: Diagonal,
}

impl std::fmt::Debug for FramedDiagonal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FramedDiagonal")
            .field("frame", &self.frame())
            .field("materialized", &self.is_materialized())
            .finish()
    }
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

impl FramedDiagonal {
    pub fn num_qubits(&self) -> usize {
        self.flip.len()
    }

    /// `X`-support `F` of the frame.
    pub fn flip(&self) -> &BitVector {
        &self.flip
    }

    /// `Z`-part `t` of the frame, a subset of `F`.
    pub fn z_part(&self) -> &BitVector {
        &self.t
    }

    /// `t` restricted to `F` (in ascending qubit order).
    pub fn t_on_support(&self) -> BitVector {
        self.t.select(&self.flip.ones().collect::<Vec<_>>())
    }

    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    /// Qubits outside `F`, ascending; the diagonal is indexed by their bits.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// `i^eps X(F) Z(t)` in product form; Hermitian by construction.
    pub fn frame(&self) -> PauliOperator {
        PauliOperator::new(self.flip.clone(), self.t.clone(), self.epsilon).expect("equal lengths")
    }

    /// Frame as a letter string and the sign that relates it to
    /// [`FramedDiagonal::frame`].
    pub fn frame_letters(&self) -> (String, i8) {
        let p = self.frame();
        let s = if p.letter_phase() == 0 { 1 } else { -1 };
        (p.letter_string(), s)
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.diagonal, Diagonal::Dense { .. })
    }

    fn k(&self) -> usize {
        self.flip.weight()
    }

    /// Diagonal entry at complement bits `sc` (first complement qubit is the
    /// most significant bit).
    pub fn entry(&self, sc: u64) -> Rational64 {
        match &self.diagonal {
            Diagonal::Dense {
                numerators,
                log2_den,
            } => Rational64::new(numerators[sc as usize], 1i64 << log2_den),
            Diagonal::Lazy { source, scale } => {
                let k = self.k();
                let support: Vec<usize> = self.flip.ones().collect();
                let rest = BitVector::from_index(self.complement.len(), sc);
                let t = self.t_on_support();
                let mut acc = 0i64;
                for u in 0..1u64 << k {
                    let ub = BitVector::from_index(k, u);
                    let mut s = BitVector::zeros(self.num_qubits());
                    s.scatter(&support, &ub);
                    s.scatter(&self.complement, &rest);
                    acc += sign(t.dot(&ub)) * source.g(&s);
                }
                Rational64::new(scale * acc, 1i64 << k)
            }
            Diagonal::Projector { enc, complement } => {
                let s = BitVector::from_index(self.complement.len(), sc);
                let inside = enc.decode(&s).is_some();
                Rational64::from_integer(i64::from(inside != *complement))
            }
        }
    }

    /// Diagonal entries in complement-index order.
    pub fn entries(&self) -> Vec<Rational64> {
        (0..1u64 << self.complement.len())
            .map(|i| self.entry(i))
            .collect()
    }

    /// Dense copy of the diagonal; refuses more than
    /// [`MATERIALIZE_MAX_QUBITS`] qubits.
    pub fn materialize(&self) -> Result<FramedDiagonal> {
        if self.is_materialized() {
            return Ok(self.clone());
        }
        if self.num_qubits() > MATERIALIZE_MAX_QUBITS {
            return Err(Error::SizeGuard {
                qubits: self.num_qubits(),
                limit: MATERIALIZE_MAX_QUBITS,
            });
        }
        let k = self.k() as u32;
        let numerators = (0..1u64 << self.complement.len())
            .into_par_iter()
            .map(|i| {
                let e = self.entry(i) * Rational64::from_integer(1i64 << k);
                debug_assert!(e.is_integer());
                e.to_integer()
            })
            .collect();
        Ok(FramedDiagonal {
            diagonal: Diagonal::Dense {
                numerators,
                log2_den: k,
            },
            ..self.clone()
        })
    }

    pub fn max_abs_entry(&self) -> Rational64 {
        self.entries()
            .into_iter()
            .map(|e| {
                if e < Rational64::from_integer(0) {
                    -e
                } else {
                    e
                }
            })
            .max()
            .unwrap_or_else(|| Rational64::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        self.entries()
            .iter()
            .all(|e| *e == Rational64::from_integer(0))
    }

    /// `D |s> = amplitude |s + F>`.
    pub fn apply(&self, s: &BitVector) -> (ExactAmplitude, BitVector) {
        let h = self.entry(s.select(&self.complement).to_index());
        let h = h * Rational64::from_integer(sign(self.t.dot(s)));
        let zero = Rational64::from_integer(0);
        let amp = match self.epsilon % 4 {
            0 => Complex::new(h, zero),
            1 => Complex::new(zero, h),
            2 => Complex::new(-h, zero),
            _ => Complex::new(zero, -h),
        };
        (amp, s ^ &self.flip)
    }

    pub fn dense_matrix(&self) -> Result<CMatrix> {
        let q = self.num_qubits();
        dense::guard(q)?;
        let dim = 1usize << q;
        let mut m = CMatrix::zeros(dim, dim);
        self.add_to_dense(&mut m, 1.0);
        Ok(m)
    }

    /// `m += weight * D`; `m` must be `2^Q x 2^Q`.
    pub fn add_to_dense(&self, m: &mut CMatrix, weight: f64) {
        let q = self.num_qubits();
        for col in 0..1usize << q {
            let s = BitVector::from_index(q, col as u64);
            let (amp, out) = self.apply(&s);
            m[(out.to_index() as usize, col)] += to_complex64(&amp) * weight;
        }
    }
}

pub fn to_complex64(a: &ExactAmplitude) -> num_complex::Complex64 {
    let f = |r: &Rational64| *r.numer() as f64 / *r.denom() as f64;
    num_complex::Complex64::new(f(&a.re), f(&a.im))
}

/// Simulator `O_sim = multiplier * sum_i D_i` of one observable.
#[derive(Clone, Debug)]
pub struct SimulatorOp {
    pub observable: FermionObservable,
    pub frames: Vec<FramedDiagonal>,
    /// 2 for diagonal observables `M + M^dagger = 2M`, else 1.
    pub multiplier: i64,
    /// Whether the bipartite reduction has been applied.
    pub improved: bool,
}

impl SimulatorOp {
    /// Sparsity `r`: the number of framed diagonal terms.
    pub fn sparsity(&self) -> usize {
        self.frames.len()
    }

    pub fn kind(&self) -> ObservableKind {
        self.observable.kind()
    }

    /// Exact action on a basis state, merged by output state.
    pub fn apply(&self, s: &BitVector) -> BTreeMap<BitVector, ExactAmplitude> {
        let mut out: BTreeMap<BitVector, ExactAmplitude> = BTreeMap::new();
        let m = Rational64::from_integer(self.multiplier);
        for d in &self.frames {
            let (amp, y) = d.apply(s);
            let e = out.entry(y).or_insert_with(|| {
                Complex::new(Rational64::from_integer(0), Rational64::from_integer(0))
            });
            *e += amp * Complex::new(m, Rational64::from_integer(0));
        }
        out.retain(|_, a| {
            !(a.re == Rational64::from_integer(0) && a.im == Rational64::from_integer(0))
        });
        out
    }

    pub fn dense_matrix(&self, qubits: usize) -> Result<CMatrix> {
        dense::guard(qubits)?;
        let dim = 1usize << qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for d in &self.frames {
            d.add_to_dense(&mut m, self.multiplier as f64);
        }
        Ok(m)
    }

    pub fn materialize(&self) -> Result<SimulatorOp> {
        Ok(SimulatorOp {
            frames: self
                .frames
                .iter()
                .map(FramedDiagonal::materialize)
                .collect::<Result<_>>()?,
            ..self.clone()
        })
    }

    /// Largest `|entry|` over all materialized diagonals.
    pub fn max_abs_entry(&self) -> Rational64 {
        self.frames
            .iter()
            .map(FramedDiagonal::max_abs_entry)
            .max()
            .unwrap_or_else(|| Rational64::from_integer(0))
    }
}

/// Whether `O_sim E = E O` holds exactly on every weight-`N` state.
pub fn check_simulation(enc: &CodeEncoding, sim: &SimulatorOp) -> bool {
    enc.codewords().par_iter().all(|(x, s)| {
        let lhs = sim.apply(s);
        let mut rhs: BTreeMap<BitVector, ExactAmplitude> = BTreeMap::new();
        for (amp, y) in sim.observable.action(x) {
            // fermionic amplitudes are Gaussian integers
            let re = Rational64::from_integer(amp.re.round() as i64);
            let im = Rational64::from_integer(amp.im.round() as i64);
            rhs.insert(enc.flip_syndrome(&y), Complex::new(re, im));
        }
        lhs == rhs
    })
}

/// `2^{2c - 1}` for two-body and `2^{4c - 1}` for four-body observables;
/// the exponent drops by two for bipartite codes.
pub fn sparsity_bound(max_column_weight: usize, kind: ObservableKind, bipartite: bool) -> usize {
    let body = match kind {
        ObservableKind::TwoBody => 2,
        ObservableKind::FourBody => 4,
    };
    let exp = (body * max_column_weight) as i64 - if bipartite { 3 } else { 1 };
    1usize << exp.max(0)
}

/// Simulator for any supported observable. Diagonals are materialized when
/// `materialize` is set, otherwise evaluated lazily through the decoder.
pub fn simulate_observable(
    enc: &CodeEncoding,
    obs: &FermionObservable,
    materialize: bool,
) -> Result<SimulatorOp> {
    obs.validate(enc.modes())?;
    let q = enc.qubits();
    let f = obs.monomial.flip_set(enc.modes());
    let big_f = enc.flip_syndrome(&f);
    let empty = SimulatorOp {
        observable: obs.clone(),
        frames: Vec::new(),
        multiplier: 1,
        improved: false,
    };
    if !f.is_zero() && big_f.is_zero() {
        if f.weight() <= 2 * enc.particles() {
            return Err(Error::Precondition(format!(
                "columns of modes {:?} cancel, so the code cannot be {}-injective",
                f.ones().collect::<Vec<_>>(),
                enc.particles()
            )));
        }
        // the transition joins two weight-N states with equal syndrome, so it
        // never fires on the sector
        return Ok(empty);
    }
    let diagonal = f.is_zero();
    if diagonal && obs.variant == Variant::MinusI {
        return Ok(empty);
    }
    let divisor = if diagonal { 2 } else { 1 };
    let source = Arc::new(LazyGamma {
        enc: enc.clone(),
        obs: obs.clone(),
        divisor,
    });
    let support: Vec<usize> = big_f.ones().collect();
    let k = support.len();
    let complement: Vec<usize> = (1..=q).filter(|i| !big_f.get(*i)).collect();
    let odd = obs.variant == Variant::MinusI;
    let frames: Vec<FramedDiagonal> = (0..1u64 << k)
        .filter(|t| (t.count_ones() % 2 == 1) == odd)
        .map(|t| {
            let mut tz = BitVector::zeros(q);
            tz.scatter(&support, &BitVector::from_index(k, t));
            FramedDiagonal {
                flip: big_f.clone(),
                t: tz,
                epsilon: obs.epsilon(),
                complement: complement.clone(),
                diagonal: Diagonal::Lazy {
                    source: source.clone(),
                    scale: 1,
                },
            }
        })
        .collect();
    let mut sim = SimulatorOp {
        observable: obs.clone(),
        frames,
        multiplier: divisor,
        improved: false,
    };
    if materialize {
        materialize_from_codewords(enc, &mut sim, &source)?;
    }
    Ok(sim)
}

/// Dense diagonals from the forward map `x -> Ax` over all weight-`N`
/// states followed by one Walsh-Hadamard transform per complement pattern.
fn materialize_from_codewords(
    enc: &CodeEncoding,
    sim: &mut SimulatorOp,
    source: &LazyGamma,
) -> Result<()> {
    let q = enc.qubits();
    if q > MATERIALIZE_MAX_QUBITS {
        return Err(Error::SizeGuard {
            qubits: q,
            limit: MATERIALIZE_MAX_QUBITS,
        });
    }
    let Some(first) = sim.frames.first() else {
        return Ok(());
    };
    let support: Vec<usize> = first.flip.ones().collect();
    let complement = first.complement.clone();
    let k = support.len();
    let rest = complement.len();
    // g indexed as (u, s') -> s' * 2^k + u
    let mut g = vec![0i64; 1usize << q];
    for (x, s) in enc.codewords() {
        let v = transition_value(&source.obs, source.divisor, &x);
        if v != 0 {
            let u = s.select(&support).to_index() as usize;
            let sc = s.select(&complement).to_index() as usize;
            g[(sc << k) | u] = v;
        }
    }
    g.par_chunks_mut(1 << k).for_each(walsh_hadamard);
    for frame in &mut sim.frames {
        let t = frame.t_on_support().to_index() as usize;
        let numerators = (0..1usize << rest).map(|sc| g[(sc << k) | t]).collect();
        frame.diagonal = Diagonal::Dense {
            numerators,
            log2_den: k as u32,
        };
    }
    Ok(())
}

/// `i^eps (a+_alpha a_beta +- a+_beta a_alpha)` for `alpha != beta`.
pub fn two_body_simulator(
    enc: &CodeEncoding,
    alpha: usize,
    beta: usize,
    variant: Variant,
) -> Result<SimulatorOp> {
    if alpha == beta {
        return Err(Error::Precondition(
            "two-body simulator needs distinct modes".into(),
        ));
    }
    if enc.column(alpha) == enc.column(beta) {
        return Err(Error::Precondition(format!(
            "modes {alpha} and {beta} have equal columns"
        )));
    }
    simulate_observable(
        enc,
        &FermionObservable::two_body(alpha, beta, variant),
        true,
    )
}

/// `i^eps (a+_a a+_b a_c a_d +- h.c.)`. Coincident indices are handled by
/// the generic flip-set construction.
pub fn four_body_simulator(
    enc: &CodeEncoding,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    variant: Variant,
) -> Result<SimulatorOp> {
    simulate_observable(
        enc,
        &FermionObservable::four_body(a, b, c, d, variant),
        true,
    )
}

/// Cancels the frame's `Z` on qubits `i in F & L` and `j in F & R` by
/// multiplying terms with `Z(L)`, `Z(R)` or `Z(L) Z(R)` (signed by `(-1)^N`
/// where needed), which act trivially on codewords. Requires dense
/// diagonals; lazy simulators are materialized first.
pub fn bipartite_improve(
    sim: &SimulatorOp,
    enc: &CodeEncoding,
    i: usize,
    j: usize,
) -> Result<SimulatorOp> {
    let (left, right) = enc
        .bipartition()
        .ok_or_else(|| Error::Precondition("encoding has no bipartition".into()))?;
    let Some(first) = sim.frames.first() else {
        return Ok(sim.clone());
    };
    let big_f = first.flip.clone();
    if !(big_f.get(i) && left.get(i)) || !(big_f.get(j) && right.get(j)) {
        return Err(Error::Precondition(format!(
            "qubits {i} and {j} must lie in the flip support on the left and right side"
        )));
    }
    let sim = sim.materialize()?;
    let f_left = &big_f & &left;
    let f_right = &big_f & &right;
    let complement = first.complement.clone();
    let rest = complement.len();
    let nsign = enc.particles() % 2 == 1;
    let left_c = left.select(&complement);
    let right_c = right.select(&complement);

    let mut grouped: BTreeMap<BitVector, Vec<i64>> = BTreeMap::new();
    let mut log2_den = 0;
    for frame in &sim.frames {
        let Diagonal::Dense {
            numerators,
            log2_den: den,
        } = &frame.diagonal
        else {
            unreachable!("materialized above");
        };
        log2_den = *den;
        let a = frame.t.get(i);
        let b = frame.t.get(j);
        let mut t = frame.t.clone();
        if a {
            t ^= &f_left;
        }
        if b {
            t ^= &f_right;
        }
        let acc = grouped.entry(t).or_insert_with(|| vec![0; 1 << rest]);
        for (sc, &v) in numerators.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let s = BitVector::from_index(rest, sc as u64);
            let mut odd = false;
            if a {
                odd ^= nsign ^ s.dot(&left_c);
            }
            if b {
                odd ^= nsign ^ s.dot(&right_c);
            }
            acc[sc] += sign(odd) * v;
        }
    }
    let frames = grouped
        .into_iter()
        .map(|(t, numerators)| FramedDiagonal {
            flip: big_f.clone(),
            t,
            epsilon: first.epsilon,
            complement: complement.clone(),
            diagonal: Diagonal::Dense {
                numerators,
                log2_den,
            },
        })
        .collect();
    Ok(SimulatorOp {
        frames,
        improved: true,
        ..sim
    })
}

/// Lazy counterpart of [`bipartite_improve`]: on codewords
/// `s(L) = s(R) = N mod 2`, so the regrouped diagonal equals four times the
/// original `Gamma(t)` for every kept `t`.
fn bipartite_improve_lazy(sim: &SimulatorOp, i: usize, j: usize) -> SimulatorOp {
    let frames = sim
        .frames
        .iter()
        .filter(|d| !d.t.get(i) && !d.t.get(j))
        .map(|d| {
            let mut d = d.clone();
            if let Diagonal::Lazy { scale, .. } = &mut d.diagonal {
                *scale *= 4;
            }
            d
        })
        .collect();
    SimulatorOp {
        frames,
        improved: true,
        ..sim.clone()
    }
}

/// Pair of qubits `(min F & L, min F & R)` used for the bipartite
/// reduction, if the code is bipartite and both sets are nonempty.
pub fn improvement_pair(sim: &SimulatorOp, enc: &CodeEncoding) -> Option<(usize, usize)> {
    let (left, right) = enc.bipartition()?;
    let f = &sim.frames.first()?.flip;
    let i = (f & &left).ones().next()?;
    let j = (f & &right).ones().next()?;
    Some((i, j))
}

/// Applies the bipartite reduction when possible.
pub fn auto_improve(sim: &SimulatorOp, enc: &CodeEncoding) -> Result<SimulatorOp> {
    match improvement_pair(sim, enc) {
        None => Ok(sim.clone()),
        Some((i, j)) if sim.frames.iter().all(FramedDiagonal::is_materialized) => {
            bipartite_improve(sim, enc, i, j)
        }
        Some((i, j)) => Ok(bipartite_improve_lazy(sim, i, j)),
    }
}

/// Diagonal (identity frame) projector onto the codespace.
pub fn codespace_projector_diag(enc: &CodeEncoding) -> FramedDiagonal {
    projector_diag(enc, false)
}

fn projector_diag(enc: &CodeEncoding, complement: bool) -> FramedDiagonal {
    let q = enc.qubits();
    FramedDiagonal {
        flip: BitVector::zeros(q),
        t: BitVector::zeros(q),
        epsilon: 0,
        complement: (1..=q).collect(),
        diagonal: Diagonal::Projector {
            enc: enc.clone(),
            complement,
        },
    }
}

/// `H_sim = g (I - E E^dagger) + sum_i w_i D_i`.
#[derive(Clone, Debug)]
pub struct SimulatorHamiltonian {
    pub qubits: usize,
    pub terms: Vec<(f64, FramedDiagonal)>,
    pub penalty: f64,
    pub penalty_term: FramedDiagonal,
    pub r2: usize,
    pub r4: usize,
}

impl SimulatorHamiltonian {
    /// Number of framed diagonal terms, excluding the penalty.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn dense_matrix(&self) -> Result<CMatrix> {
        dense::guard(self.qubits)?;
        let dim = 1usize << self.qubits;
        let mut m = CMatrix::zeros(dim, dim);
        self.penalty_term.add_to_dense(&mut m, self.penalty);
        for (w, d) in &self.terms {
            d.add_to_dense(&mut m, *w);
        }
        Ok(m)
    }

    /// `H_sim |s>` as a sparse vector.
    pub fn apply(&self, s: &BitVector) -> BTreeMap<BitVector, num_complex::Complex64> {
        let mut out: BTreeMap<BitVector, num_complex::Complex64> = BTreeMap::new();
        let (amp, y) = self.penalty_term.apply(s);
        *out.entry(y).or_default() += to_complex64(&amp) * self.penalty;
        for (w, d) in &self.terms {
            let (amp, y) = d.apply(s);
            *out.entry(y).or_default() += to_complex64(&amp) * *w;
        }
        out
    }

    /// `E^dagger H_sim E` in the order of [`CodeEncoding::codewords`].
    pub fn codespace_matrix(&self, enc: &CodeEncoding) -> CMatrix {
        let words = enc.codewords();
        let position: std::collections::HashMap<&BitVector, usize> =
            words.iter().enumerate().map(|(i, (_, s))| (s, i)).collect();
        let mut m = CMatrix::zeros(words.len(), words.len());
        for (col, (_, s)) in words.iter().enumerate() {
            for (y, amp) in self.apply(s) {
                if let Some(&row) = position.get(&y) {
                    m[(row, col)] += amp;
                }
            }
        }
        m
    }
}

/// Penalty large enough that the ground state lies in the codespace: the
/// simulator terms preserve the codespace, so `g > 2 ||sum_i w_i D_i||`
/// suffices, and `||D_i||` is its largest diagonal entry.
pub fn default_penalty(terms: &[(f64, FramedDiagonal)]) -> f64 {
    let norm: f64 = terms
        .iter()
        .map(|(w, d)| {
            let e = if d.is_materialized() {
                let m = d.max_abs_entry();
                *m.numer() as f64 / *m.denom() as f64
            } else {
                1.0
            };
            w.abs() * e
        })
        .sum();
    2.0 * norm + 1.0
}

/// Simulator Hamiltonian of `h` under `enc`. The bipartite reduction is
/// applied where possible; `penalty = None` selects [`default_penalty`].
pub fn build_simulator_hamiltonian(
    h: &FermionHamiltonian,
    enc: &CodeEncoding,
    penalty: Option<f64>,
    materialize: bool,
) -> Result<SimulatorHamiltonian> {
    if h.modes() != enc.modes() {
        return Err(Error::DimensionMismatch {
            expected: enc.modes(),
            actual: h.modes(),
        });
    }
    let sims: Vec<(f64, SimulatorOp)> = h
        .hermitian_observables()
        .into_par_iter()
        .map(|(w, obs)| {
            let sim = simulate_observable(enc, &obs, materialize)?;
            Ok((w, auto_improve(&sim, enc)?))
        })
        .collect::<Result<_>>()?;
    let mut r2 = 0;
    let mut r4 = 0;
    let mut terms = Vec::new();
    for (w, sim) in sims {
        match sim.kind() {
            ObservableKind::TwoBody => r2 = r2.max(sim.sparsity()),
            ObservableKind::FourBody => r4 = r4.max(sim.sparsity()),
        }
        for d in sim.frames {
            terms.push((w * sim.multiplier as f64, d));
        }
    }
    let penalty = penalty.unwrap_or_else(|| default_penalty(&terms));
    let mut penalty_term = projector_diag(enc, true);
    if materialize {
        penalty_term = penalty_term.materialize()?;
    }
    Ok(SimulatorHamiltonian {
        qubits: enc.qubits(),
        terms,
        penalty,
        penalty_term,
        r2,
        r4,
    })
}
