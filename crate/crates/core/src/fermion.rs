//! Second-quantized fermionic Hamiltonians and their Fock-space action.
//!
//! `H = sum t[a,b] a+_a a_b + sum u[a,b,c,d] a+_a a+_b a_c a_d` over modes
//! `1..=M`. Basis states are occupation strings with mode 1 leftmost (the most
//! significant bit of the basis index) and `|1>` meaning occupied.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::{combinations, BitVector};
use crate::dense::{self, CMatrix};
use crate::error::{Error, Result};

pub type FockState = BitVector;

/// Hermiticity tolerance applied when loading coefficients.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `a_alpha |x>`: `None` if mode `alpha` is empty, otherwise the sign
/// `(-1)^(x_1 + ... + x_{alpha-1})` and the new state.
pub fn apply_annihilate(x: &FockState, alpha: usize) -> Option<(i8, FockState)> {
    if !x.get(alpha) {
        return None;
    }
    let mut y = x.clone();
    y.flip(alpha);
    Some((parity_before(x, alpha), y))
}

pub fn apply_create(x: &FockState, alpha: usize) -> Option<(i8, FockState)> {
    if x.get(alpha) {
        return None;
    }
    let mut y = x.clone();
    y.flip(alpha);
    Some((parity_before(x, alpha), y))
}

fn parity_before(x: &FockState, alpha: usize) -> i8 {
    if x.ones().take_while(|&i| i < alpha).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Normal-ordered product `a+_{c_1} ... a+_{c_k} a_{d_1} ... a_{d_l}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LadderMonomial {
    pub creators: Vec<usize>,
    pub annihilators: Vec<usize>,
}

impl LadderMonomial {
    pub fn new(creators: Vec<usize>, annihilators: Vec<usize>) -> Self {
        LadderMonomial {
            creators,
            annihilators,
        }
    }

    /// Sorts creators and annihilators ascending. Returns the permutation
    /// sign, or `None` if an index repeats within either group (the product
    /// vanishes).
    pub fn canonical(&self) -> Option<(i8, LadderMonomial)> {
        let (s1, c) = sort_with_sign(&self.creators)?;
        let (s2, a) = sort_with_sign(&self.annihilators)?;
        Some((s1 * s2, LadderMonomial::new(c, a)))
    }

    /// Adjoint of the monomial, reordered into the same normal form. For
    /// sorted groups the reordering sign cancels, so the result is exact.
    pub fn adjoint(&self) -> LadderMonomial {
        let mut c = self.annihilators.clone();
        let mut a = self.creators.clone();
        c.reverse();
        a.reverse();
        LadderMonomial::new(c, a)
    }

    /// Modes whose occupation the monomial toggles.
    pub fn flip_set(&self, modes: usize) -> BitVector {
        let mut f = BitVector::zeros(modes);
        for &i in self.creators.iter().chain(&self.annihilators) {
            f.flip(i);
        }
        f
    }

    pub fn max_mode(&self) -> usize {
        self.creators
            .iter()
            .chain(&self.annihilators)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Applies the monomial to a basis state (rightmost operator first).
    pub fn apply(&self, x: &FockState) -> Option<(i8, FockState)> {
        let mut sign = 1;
        let mut y = x.clone();
        for &d in self.annihilators.iter().rev() {
            let (s, next) = apply_annihilate(&y, d)?;
            sign *= s;
            y = next;
        }
        for &c in self.creators.iter().rev() {
            let (s, next) = apply_create(&y, c)?;
            sign *= s;
            y = next;
        }
        Some((sign, y))
    }
}

impl Default for LadderMonomial {
    fn default() -> Self {
        LadderMonomial::new(Vec::new(), Vec::new())
    }
}

fn sort_with_sign(v: &[usize]) -> Option<(i8, Vec<usize>)> {
    let mut out = v.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting transpositions
    for i in 1..out.len() {
        let mut j = i;
        while j > 0 && out[j - 1] > out[j] {
            out.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if out.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, out))
}

/// `M + M^dagger` or `i (M - M^dagger)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus_i")]
    MinusI,
}

impl Variant {
    pub fn epsilon(self) -> u8 {
        match self {
            Variant::Plus => 0,
            Variant::MinusI => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservableKind {
    TwoBody,
    FourBody,
}

/// Hermitian observable `i^eps (M +- M^dagger)` built from a ladder monomial
/// `M`, with `eps = 0` for the sum and `eps = 1` for the difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FermionObservable {
    pub monomial: LadderMonomial,
    pub variant: Variant,
}

impl FermionObservable {
    /// `i^eps (a+_alpha a_beta +- a+_beta a_alpha)`.
    pub fn two_body(alpha: usize, beta: usize, variant: Variant) -> Self {
        FermionObservable {
            monomial: LadderMonomial::new(vec![alpha], vec![beta]),
            variant,
        }
    }

    /// `i^eps (a+_a a+_b a_c a_d +- a+_d a+_c a_b a_a)`.
    pub fn four_body(a: usize, b: usize, c: usize, d: usize, variant: Variant) -> Self {
        FermionObservable {
            monomial: LadderMonomial::new(vec![a, b], vec![c, d]),
            variant,
        }
    }

    pub fn kind(&self) -> ObservableKind {
        if self.monomial.creators.len() <= 1 {
            ObservableKind::TwoBody
        } else {
            ObservableKind::FourBody
        }
    }

    pub fn epsilon(&self) -> u8 {
        self.variant.epsilon()
    }

    pub fn validate(&self, modes: usize) -> Result<()> {
        let m = &self.monomial;
        if m.creators.len() != m.annihilators.len() || !(1..=2).contains(&m.creators.len()) {
            return Err(Error::InvalidObservable(format!(
                "unsupported monomial {m:?}"
            )));
        }
        if let Some(&bad) = m
            .creators
            .iter()
            .chain(&m.annihilators)
            .find(|&&i| i == 0 || i > modes)
        {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: modes,
            });
        }
        Ok(())
    }

    /// `(coefficient of M, coefficient of M^dagger)`.
    pub fn weights(&self) -> (Complex64, Complex64) {
        match self.variant {
            Variant::Plus => (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            Variant::MinusI => (Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)),
        }
    }

    /// Sparse action on a basis state, merged and with zero amplitudes dropped.
    pub fn action(&self, x: &FockState) -> Vec<(Complex64, FockState)> {
        let (wm, wd) = self.weights();
        let mut out: Vec<(Complex64, FockState)> = Vec::with_capacity(2);
        for (w, m) in [(wm, &self.monomial), (wd, &self.monomial.adjoint())] {
            if let Some((s, y)) = m.apply(x) {
                let amp = w * s as f64;
                match out.iter_mut().find(|(_, z)| *z == y) {
                    Some(e) => e.0 += amp,
                    None => out.push((amp, y)),
                }
            }
        }
        out.retain(|(a, _)| a.norm() > 0.0);
        out
    }

    pub fn dense_fock_matrix(&self, modes: usize) -> Result<CMatrix> {
        dense::guard(modes)?;
        let dim = 1usize << modes;
        let mut m = CMatrix::zeros(dim, dim);
        for s in 0..dim {
            let x = BitVector::from_index(modes, s as u64);
            for (amp, y) in self.action(&x) {
                m[(y.to_index() as usize, s)] += amp;
            }
        }
        Ok(m)
    }
}

pub fn observable_action(o: &FermionObservable, x: &FockState) -> Vec<(Complex64, FockState)> {
    o.action(x)
}

/// Coefficients of a number-conserving Hamiltonian with one- and two-body terms.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionHamiltonian {
    modes: usize,
    particles: usize,
    /// Row-major `M x M`, 0-based storage.
    t: Vec<Complex64>,
    /// Keys are 1-based `[a, b, c, d]`.
    u: BTreeMap<[usize; 4], Complex64>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianFile {
    modes: usize,
    particles: usize,
    #[serde(default)]
    t: Vec<(usize, usize, f64, f64)>,
    #[serde(default)]
    u: Vec<(usize, usize, usize, usize, f64, f64)>,
}

impl FermionHamiltonian {
    /// Zero Hamiltonian on `modes` modes with `particles` particles.
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        if modes == 0 || particles > modes {
            return Err(Error::InvalidHamiltonian(format!(
                "need 1 <= M and N <= M, got M={modes}, N={particles}"
            )));
        }
        Ok(FermionHamiltonian {
            modes,
            particles,
            t: vec![Complex64::new(0.0, 0.0); modes * modes],
            u: BTreeMap::new(),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn with_particles(&self, particles: usize) -> Result<Self> {
        if particles > self.modes {
            return Err(Error::InvalidHamiltonian(format!(
                "N={particles} exceeds M={}",
                self.modes
            )));
        }
        let mut h = self.clone();
        h.particles = particles;
        Ok(h)
    }

    /// Filling fraction `N / M`.
    pub fn filling(&self) -> f64 {
        self.particles as f64 / self.modes as f64
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.modes {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.modes,
            });
        }
        Ok(())
    }

    pub fn t(&self, alpha: usize, beta: usize) -> Complex64 {
        self.t[(alpha - 1) * self.modes + beta - 1]
    }

    pub fn u(&self, a: usize, b: usize, c: usize, d: usize) -> Complex64 {
        self.u.get(&[a, b, c, d]).copied().unwrap_or_default()
    }

    pub fn u_entries(&self) -> impl Iterator<Item = ([usize; 4], Complex64)> + '_ {
        self.u.iter().map(|(k, v)| (*k, *v))
    }

    pub fn t_entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let m = self.modes;
        self.t
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(move |(k, c)| (k / m + 1, k % m + 1, *c))
    }

    /// Adds to `t[alpha, beta]` only; callers supply both Hermitian partners.
    pub fn add_t(&mut self, alpha: usize, beta: usize, c: Complex64) -> Result<()> {
        self.check_mode(alpha)?;
        self.check_mode(beta)?;
        self.t[(alpha - 1) * self.modes + beta - 1] += c;
        Ok(())
    }

    pub fn add_u(&mut self, a: usize, b: usize, c: usize, d: usize, v: Complex64) -> Result<()> {
        for i in [a, b, c, d] {
            self.check_mode(i)?;
        }
        *self.u.entry([a, b, c, d]).or_default() += v;
        Ok(())
    }

    /// Adds `c` to `t[a,b]` and `conj(c)` to `t[b,a]` (once if `a == b`).
    pub fn add_t_hermitian(&mut self, a: usize, b: usize, c: Complex64) -> Result<()> {
        if a == b {
            self.add_t(a, a, Complex64::new(c.re, 0.0))
        } else {
            self.add_t(a, b, c)?;
            self.add_t(b, a, c.conj())
        }
    }

    /// Adds `v` to `u[a,b,c,d]` and `conj(v)` to `u[d,c,b,a]` (once if they coincide).
    pub fn add_u_hermitian(
        &mut self,
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        v: Complex64,
    ) -> Result<()> {
        if [a, b, c, d] == [d, c, b, a] {
            self.add_u(a, b, c, d, Complex64::new(v.re, 0.0))
        } else {
            self.add_u(a, b, c, d, v)?;
            self.add_u(d, c, b, a, v.conj())
        }
    }

    /// Checks `t[b,a] = conj t[a,b]` and `u[d,c,b,a] = conj u[a,b,c,d]`.
    pub fn validate(&self) -> Result<()> {
        for a in 1..=self.modes {
            for b in 1..=self.modes {
                let d = (self.t(b, a) - self.t(a, b).conj()).norm();
                if d > HERMITIAN_TOL {
                    return Err(Error::InvalidHamiltonian(format!(
                        "t[{b},{a}] is not conj(t[{a},{b}]) (off by {d:e})"
                    )));
                }
            }
        }
        for (&[a, b, c, d], v) in &self.u {
            let diff = (self.u(d, c, b, a) - v.conj()).norm();
            if diff > HERMITIAN_TOL {
                return Err(Error::InvalidHamiltonian(format!(
                    "u[{d},{c},{b},{a}] is not conj(u[{a},{b},{c},{d}]) (off by {diff:e})"
                )));
            }
        }
        Ok(())
    }

    /// Number of coefficients with magnitude above one; each is logged.
    pub fn scale_warnings(&self) -> usize {
        let mut count = 0;
        for (a, b, c) in self.t_entries() {
            if c.norm() > 1.0 {
                log::warn!("|t[{a},{b}]| = {} exceeds 1", c.norm());
                count += 1;
            }
        }
        for ([a, b, c, d], v) in self.u_entries() {
            if v.norm() > 1.0 {
                log::warn!("|u[{a},{b},{c},{d}]| = {} exceeds 1", v.norm());
                count += 1;
            }
        }
        count
    }

    /// `sum |t| + sum |u|`.
    pub fn l1_norm(&self) -> (f64, f64) {
        (
            self.t.iter().map(|c| c.norm()).sum(),
            self.u.values().map(|c| c.norm()).sum(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|c| c.norm() == 0.0) && self.u.values().all(|c| c.norm() == 0.0)
    }

    /// Terms as normal-ordered monomials with sorted creator and annihilator
    /// groups, merged; vanishing products are dropped.
    pub fn monomials(&self) -> BTreeMap<LadderMonomial, Complex64> {
        let mut out: BTreeMap<LadderMonomial, Complex64> = BTreeMap::new();
        for (a, b, c) in self.t_entries() {
            *out.entry(LadderMonomial::new(vec![a], vec![b]))
                .or_default() += c;
        }
        for ([a, b, c, d], v) in self.u_entries() {
            if let Some((s, m)) = LadderMonomial::new(vec![a, b], vec![c, d]).canonical() {
                *out.entry(m).or_default() += v * s as f64;
            }
        }
        out.retain(|_, c| c.norm() > 0.0);
        out
    }

    /// The Hamiltonian as `sum_k w_k O_k` with real `w_k` and Hermitian
    /// observables `O_k` of the form `M + M^dagger` or `i (M - M^dagger)`.
    pub fn hermitian_observables(&self) -> Vec<(f64, FermionObservable)> {
        let mono = self.monomials();
        let mut out = Vec::new();
        for (m, &c) in &mono {
            let adj = m
                .adjoint()
                .canonical()
                .expect("adjoint of a canonical monomial is nonzero")
                .1;
            if adj == *m {
                // c M with c real; (c/2)(M + M^dagger)
                if c.re.abs() > 0.0 {
                    out.push((
                        c.re / 2.0,
                        FermionObservable {
                            monomial: m.clone(),
                            variant: Variant::Plus,
                        },
                    ));
                }
            } else if *m < adj {
                // c M + conj(c) M^dagger = Re c (M + M^dagger) + Im c i (M - M^dagger)
                if c.re != 0.0 {
                    out.push((
                        c.re,
                        FermionObservable {
                            monomial: m.clone(),
                            variant: Variant::Plus,
                        },
                    ));
                }
                if c.im != 0.0 {
                    out.push((
                        c.im,
                        FermionObservable {
                            monomial: m.clone(),
                            variant: Variant::MinusI,
                        },
                    ));
                }
            }
        }
        out
    }

    /// Action on a basis state via the stored coefficients.
    pub fn action(&self, x: &FockState) -> Vec<(Complex64, FockState)> {
        let mut acc: BTreeMap<FockState, Complex64> = BTreeMap::new();
        for (m, c) in self.monomials() {
            if let Some((s, y)) = m.apply(x) {
                *acc.entry(y).or_default() += c * s as f64;
            }
        }
        acc.into_iter()
            .map(|(y, c)| (c, y))
            .filter(|(c, _)| c.norm() > 0.0)
            .collect()
    }

    /// Exact `2^M x 2^M` matrix in the occupation basis.
    pub fn dense_fock_matrix(&self) -> Result<CMatrix> {
        dense::guard(self.modes)?;
        let dim = 1usize << self.modes;
        let mono = self.monomials();
        let mut m = CMatrix::zeros(dim, dim);
        for s in 0..dim {
            let x = BitVector::from_index(self.modes, s as u64);
            for (mon, c) in &mono {
                if let Some((sign, y)) = mon.apply(&x) {
                    m[(y.to_index() as usize, s)] += c * sign as f64;
                }
            }
        }
        Ok(m)
    }

    /// Spectrum of the `N`-particle block.
    pub fn sector_spectrum(&self) -> Result<Vec<f64>> {
        let full = self.dense_fock_matrix()?;
        Ok(dense::eigenvalues(&restrict_to_sector(
            &full,
            self.modes,
            self.particles,
        )))
    }

    /// `<y|H|x>` for `x, y` in `basis`, built from the sparse action so the
    /// Fock space is never materialized. Amplitude leaving the span is dropped.
    pub fn matrix_on(&self, basis: &[FockState]) -> CMatrix {
        let position: std::collections::HashMap<&FockState, usize> =
            basis.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mono = self.monomials();
        let mut m = CMatrix::zeros(basis.len(), basis.len());
        for (col, x) in basis.iter().enumerate() {
            for (mon, c) in &mono {
                if let Some((sign, y)) = mon.apply(x) {
                    if let Some(&row) = position.get(&y) {
                        m[(row, col)] += c * sign as f64;
                    }
                }
            }
        }
        m
    }

    /// Restriction to the modes in `keep` (renumbered `1..`), dropping every
    /// term that touches another mode.
    pub fn restrict_modes(&self, keep: &[usize], particles: usize) -> Result<Self> {
        let pos = |i: usize| keep.iter().position(|&k| k == i).map(|p| p + 1);
        let mut h = FermionHamiltonian::new(keep.len(), particles)?;
        for (a, b, c) in self.t_entries() {
            if let (Some(a), Some(b)) = (pos(a), pos(b)) {
                h.add_t(a, b, c)?;
            }
        }
        for ([a, b, c, d], v) in self.u_entries() {
            if let (Some(a), Some(b), Some(c), Some(d)) = (pos(a), pos(b), pos(c), pos(d)) {
                h.add_u(a, b, c, d, v)?;
            }
        }
        Ok(h)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: HamiltonianFile = serde_json::from_str(text)?;
        let mut h = FermionHamiltonian::new(f.modes, f.particles)?;
        for (a, b, re, im) in f.t {
            h.add_t(a, b, Complex64::new(re, im))?;
        }
        for (a, b, c, d, re, im) in f.u {
            h.add_u(a, b, c, d, Complex64::new(re, im))?;
        }
        h.validate()?;
        h.scale_warnings();
        Ok(h)
    }

    pub fn to_json(&self) -> String {
        let f = HamiltonianFile {
            modes: self.modes,
            particles: self.particles,
            t: self
                .t_entries()
                .map(|(a, b, c)| (a, b, c.re, c.im))
                .collect(),
            u: self
                .u_entries()
                .filter(|(_, v)| v.norm() > 0.0)
                .map(|([a, b, c, d], v)| (a, b, c, d, v.re, v.im))
                .collect(),
        };
        serde_json::to_string_pretty(&f).expect("plain data serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_json(&crate::error::read_file(path)?).map_err(|e| e.in_file(path))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::error::write_file(path.as_ref(), self.to_json())
    }
}

pub fn dense_fock_matrix(h: &FermionHamiltonian) -> Result<CMatrix> {
    h.dense_fock_matrix()
}

/// Basis indices of weight-`n` strings on `modes` modes, ascending (which is
/// lexicographic order on the strings).
pub fn sector_indices(modes: usize, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = combinations(modes, n)
        .map(|c| BitVector::from_positions(modes, c).to_index() as usize)
        .collect();
    v.sort_unstable();
    v
}

/// Block of a Fock-space matrix on the weight-`n` subspace.
pub fn restrict_to_sector(m: &CMatrix, modes: usize, n: usize) -> CMatrix {
    dense::restrict(m, &sector_indices(modes, n))
}

/// `N = sum a+_a a_a` as a dense matrix.
pub fn number_operator(modes: usize) -> Result<CMatrix> {
    dense::guard(modes)?;
    let dim = 1usize << modes;
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new((r as u64).count_ones() as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn annihilate_examples() {
        assert_eq!(apply_annihilate(&bv("1000"), 1), Some((1, bv("0000"))));
        assert_eq!(apply_annihilate(&bv("1100"), 2), Some((-1, bv("1000"))));
        assert_eq!(apply_annihilate(&bv("0110"), 4), None);
    }

    #[test]
    fn hopping_action() {
        let o = FermionObservable::two_body(1, 2, Variant::Plus);
        assert_eq!(
            o.action(&bv("01")),
            vec![(Complex64::new(1.0, 0.0), bv("10"))]
        );
        assert!(o.action(&bv("11")).is_empty());
        assert!(o.action(&bv("00")).is_empty());
    }

    #[test]
    fn hopping_across_occupied_mode_picks_up_sign() {
        // a+_1 a_4 |0111> : a_4 passes two occupied modes, a+_1 none
        let o = FermionObservable::two_body(1, 4, Variant::Plus);
        assert_eq!(
            o.action(&bv("0111")),
            vec![(Complex64::new(1.0, 0.0), bv("1110"))]
        );
        // a+_1 a_4 |0101> : one occupied mode in between
        assert_eq!(
            o.action(&bv("0101")),
            vec![(Complex64::new(-1.0, 0.0), bv("1100"))]
        );
    }

    #[test]
    fn canonical_monomial_sign() {
        let m = LadderMonomial::new(vec![2, 1], vec![3, 4]);
        assert_eq!(
            m.canonical(),
            Some((-1, LadderMonomial::new(vec![1, 2], vec![3, 4])))
        );
        assert_eq!(
            LadderMonomial::new(vec![1, 1], vec![2, 3]).canonical(),
            None
        );
    }

    #[test]
    fn identity_t_is_number_operator() {
        let mut h = FermionHamiltonian::new(3, 1).unwrap();
        for a in 1..=3 {
            h.add_t(a, a, Complex64::new(1.0, 0.0)).unwrap();
        }
        assert_eq!(h.dense_fock_matrix().unwrap(), number_operator(3).unwrap());
    }

    #[test]
    fn sector_sizes() {
        let n = number_operator(4).unwrap();
        assert_eq!(restrict_to_sector(&n, 4, 0).nrows(), 1);
        let block = restrict_to_sector(&n, 4, 2);
        assert_eq!(block.nrows(), 6);
        assert_eq!(block, CMatrix::identity(6, 6) * Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let text = r#"{"modes":2,"particles":1,"t":[[1,2,0.5,0.0]],"u":[]}"#;
        assert!(matches!(
            FermionHamiltonian::from_json(text),
            Err(Error::InvalidHamiltonian(_))
        ));
        let text = r#"{"modes":2,"particles":1,"t":[[1,2,0.5,0.1],[2,1,0.5,-0.1]],"u":[]}"#;
        let h = FermionHamiltonian::from_json(text).unwrap();
        assert_eq!(FermionHamiltonian::from_json(&h.to_json()).unwrap(), h);
    }

    #[test]
    fn sparse_block_equals_dense_restriction() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        let h = crate::fixtures::random_hamiltonian(&mut rng, 5, 2).unwrap();
        let basis: Vec<FockState> = sector_indices(5, 2)
            .into_iter()
            .map(|i| BitVector::from_index(5, i as u64))
            .collect();
        let dense = restrict_to_sector(&h.dense_fock_matrix().unwrap(), 5, 2);
        assert!(dense::max_abs(&(h.matrix_on(&basis) - dense)) < 1e-12);
    }
}
