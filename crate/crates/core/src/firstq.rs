//! First-quantized encoding on `N` registers of `m` qubits, the simulator
//! `T + U + g H_perp`, orthogonal-array binning of its Pauli terms and the
//! spectrum of the exchange penalty `H_perp`.
//!
//! Mode `a` is stored in a register as the `m`-bit binary form of `a - 1`.
//! Register 1 holds the most significant qubits of a basis index, so a basis
//! index is the base-`2^m` number formed by the register labels.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::bits::binomial;
use crate::dense::{self, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::fermion::{restrict_to_sector, sector_indices, FermionHamiltonian, FockState};
use crate::hamiltonian::QubitHamiltonian;
use crate::pauli::{Letter, PauliOperator};

/// Largest particle count whose `N!` antisymmetrization is enumerated.
pub const MAX_ANTISYMMETRIZED_PARTICLES: usize = 10;

/// Largest register-space dimension accepted by [`hperp_spectrum_check`].
pub const HPERP_CHECK_MAX_DIM: usize = 4096;

/// Register layout: `N` registers of `m` qubits, `2^m >= M` labels each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegisterEncoding {
    modes: usize,
    m: usize,
    particles: usize,
}

impl RegisterEncoding {
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::Precondition(
                "first-quantized encoding needs at least one mode".into(),
            ));
        }
        if particles > modes {
            return Err(Error::Precondition(format!(
                "{particles} particles exceed {modes} modes"
            )));
        }
        let m = (usize::BITS - (modes - 1).leading_zeros()).max(1) as usize;
        Ok(RegisterEncoding {
            modes,
            m,
            particles,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Qubits per register.
    pub fn register_qubits(&self) -> usize {
        self.m
    }

    /// Labels per register, `2^m`.
    pub fn padded_modes(&self) -> usize {
        1 << self.m
    }

    pub fn is_padded(&self) -> bool {
        self.padded_modes() != self.modes
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn qubits(&self) -> usize {
        self.m * self.particles
    }

    /// 1-based qubit positions of register `i` (1-based).
    pub fn register(&self, i: usize) -> Vec<usize> {
        ((i - 1) * self.m + 1..=i * self.m).collect()
    }

    /// The `m` bits of mode `a`, most significant first.
    fn label_bits(&self, a: usize) -> Vec<bool> {
        (0..self.m)
            .map(|k| ((a - 1) >> (self.m - 1 - k)) & 1 == 1)
            .collect()
    }
}

/// All permutations of `0..n` with their signs.
fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn recurse(p: &mut Vec<usize>, k: usize, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            recurse(p, k + 1, if i == k { sign } else { -sign }, out);
            p.swap(k, i);
        }
    }
    let mut out = Vec::new();
    recurse(&mut (0..n).collect(), 0, 1, &mut out);
    out
}

fn digits_to_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

fn index_digit(s: usize, i: usize, n: usize, d: usize) -> usize {
    (s / d.pow((n - 1 - i) as u32)) % d
}

/// Exchanges the labels of registers `i` and `j` (0-based) in basis index `s`.
fn swap_digits(s: usize, i: usize, j: usize, n: usize, d: usize) -> usize {
    let (pi, pj) = (d.pow((n - 1 - i) as u32), d.pow((n - 1 - j) as u32));
    let (a, b) = ((s / pi) % d, (s / pj) % d);
    s - a * pi - b * pj + b * pi + a * pj
}

fn check_particles(n: usize) -> Result<()> {
    if n > MAX_ANTISYMMETRIZED_PARTICLES {
        return Err(Error::Budget {
            what: "antisymmetrization over permutations",
            needed: n as u128,
            budget: MAX_ANTISYMMETRIZED_PARTICLES as u128,
        });
    }
    Ok(())
}

/// `(1/sqrt N!) sum_pi sgn(pi) |a_pi(1), ..., a_pi(N)>` for the occupied
/// modes `a_1 < ... < a_N` of `x`.
pub fn encode_first_quantized(x: &FockState, enc: &RegisterEncoding) -> Result<CVector> {
    if x.len() != enc.modes() {
        return Err(Error::DimensionMismatch {
            expected: enc.modes(),
            actual: x.len(),
        });
    }
    if x.weight() != enc.particles() {
        return Err(Error::Precondition(format!(
            "state has weight {}, expected {}",
            x.weight(),
            enc.particles()
        )));
    }
    check_particles(enc.particles())?;
    dense::guard(enc.qubits())?;
    let labels: Vec<usize> = x.ones().map(|a| a - 1).collect();
    let d = enc.padded_modes();
    let perms = signed_permutations(labels.len());
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let mut v = CVector::zeros(1 << enc.qubits());
    for (p, sign) in perms {
        let digits: Vec<usize> = p.iter().map(|&k| labels[k]).collect();
        v[digits_to_index(&digits, d)] += Complex64::new(sign as f64 * norm, 0.0);
    }
    Ok(v)
}

/// Columns are the encoded weight-`N` Fock states in sector order.
pub fn codespace_isometry(enc: &RegisterEncoding) -> Result<CMatrix> {
    dense::guard(enc.qubits())?;
    let indices = sector_indices(enc.modes(), enc.particles());
    let mut v = CMatrix::zeros(1 << enc.qubits(), indices.len());
    for (col, &idx) in indices.iter().enumerate() {
        let x = FockState::from_index(enc.modes(), idx as u64);
        v.set_column(col, &encode_first_quantized(&x, enc)?);
    }
    Ok(v)
}

/// Pauli expansion of `|ket><bra|` placed on `qubits` of an `n`-qubit system.
fn outer_product_terms(
    n: usize,
    qubits: &[usize],
    ket: &[bool],
    bra: &[bool],
) -> Vec<(Complex64, PauliOperator)> {
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    let mut terms = vec![(Complex64::new(1.0, 0.0), PauliOperator::identity(n))];
    for (k, &q) in qubits.iter().enumerate() {
        let choices = match (ket[k], bra[k]) {
            (false, false) => [(half, Letter::I), (half, Letter::Z)],
            (true, true) => [(half, Letter::I), (-half, Letter::Z)],
            (false, true) => [(half, Letter::X), (half_i, Letter::Y)],
            (true, false) => [(half, Letter::X), (-half_i, Letter::Y)],
        };
        terms = terms
            .into_iter()
            .flat_map(|(c, p)| {
                choices.iter().map(move |&(w, l)| {
                    let mut p = p.clone();
                    p.set_letter(q, l);
                    (c * w, p)
                })
            })
            .collect();
    }
    terms
}

/// Every `m`-qubit letter string, `4^m` of them.
fn all_letter_strings(m: usize) -> Vec<Vec<Letter>> {
    const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    (0..1usize << (2 * m))
        .map(|code| {
            (0..m)
                .map(|k| LETTERS[(code >> (2 * (m - 1 - k))) & 3])
                .collect()
        })
        .collect()
}

/// The pieces `T`, `U`, `H_perp` and the padded-label penalty as qubit
/// Hamiltonians on `Q = mN` qubits.
#[derive(Clone, Debug)]
pub struct FirstQuantizedParts {
    pub encoding: RegisterEncoding,
    pub t: QubitHamiltonian,
    pub u: QubitHamiltonian,
    pub hperp: QubitHamiltonian,
    /// `(N/2) sum_i sum_{a > M} |a><a|_i`; empty when `M` is a power of two.
    pub padding: QubitHamiltonian,
}

impl FirstQuantizedParts {
    /// `T + U`.
    pub fn target(&self) -> Result<QubitHamiltonian> {
        Ok(self.t.add(&self.u)?.canonical())
    }

    /// `T + U + g (H_perp + padding)`.
    pub fn assemble(&self, g: f64) -> Result<QubitHamiltonian> {
        let penalty = self.hperp.add(&self.padding)?.scale(Complex64::new(g, 0.0));
        Ok(self.t.add(&self.u)?.add(&penalty)?.canonical())
    }
}

/// `T = sum_i sum t_ab |a><b|_i`, `U = -sum_{i != j} sum u_abcd |a,b><c,d|_{i,j}`
/// and `H_perp = sum_{i<j} (I + SWAP_ij)/2` with
/// `SWAP_ij = 2^-m sum_s s_i s_j` over all `m`-qubit Pauli strings `s`.
pub fn build_tuhperp(
    h: &FermionHamiltonian,
    enc: &RegisterEncoding,
) -> Result<FirstQuantizedParts> {
    if h.modes() != enc.modes() || h.particles() != enc.particles() {
        return Err(Error::Precondition(format!(
            "Hamiltonian has {} modes and {} particles, encoding has {} and {}",
            h.modes(),
            h.particles(),
            enc.modes(),
            enc.particles()
        )));
    }
    let n = enc.particles();
    let q = enc.qubits();
    let bits: Vec<Vec<bool>> = (1..=enc.padded_modes())
        .map(|a| enc.label_bits(a))
        .collect();

    let mut t = QubitHamiltonian::new(q);
    for i in 1..=n {
        let reg = enc.register(i);
        for (a, b, c) in h.t_entries() {
            for (w, p) in outer_product_terms(q, &reg, &bits[a - 1], &bits[b - 1]) {
                t.add_term(c * w, p)?;
            }
        }
    }

    let mut u = QubitHamiltonian::new(q);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let qubits = [enc.register(i), enc.register(j)].concat();
            for ([a, b, c, d], v) in h.u_entries() {
                if v.norm() == 0.0 {
                    continue;
                }
                let ket = [bits[a - 1].clone(), bits[b - 1].clone()].concat();
                let bra = [bits[c - 1].clone(), bits[d - 1].clone()].concat();
                for (w, p) in outer_product_terms(q, &qubits, &ket, &bra) {
                    u.add_term(-v * w, p)?;
                }
            }
        }
    }

    let mut hperp = QubitHamiltonian::new(q);
    let strings = all_letter_strings(enc.register_qubits());
    let swap_weight = 0.5 / enc.padded_modes() as f64;
    for i in 1..=n {
        for j in i + 1..=n {
            hperp.add_term(Complex64::new(0.5, 0.0), PauliOperator::identity(q))?;
            let qubits = [enc.register(i), enc.register(j)].concat();
            for s in &strings {
                let p =
                    PauliOperator::from_letters(&[s.clone(), s.clone()].concat()).embed(q, &qubits);
                hperp.add_term(Complex64::new(swap_weight, 0.0), p)?;
            }
        }
    }

    let mut padding = QubitHamiltonian::new(q);
    let weight = Complex64::new(n as f64 / 2.0, 0.0);
    for i in 1..=n {
        let reg = enc.register(i);
        for a in enc.modes() + 1..=enc.padded_modes() {
            for (w, p) in outer_product_terms(q, &reg, &bits[a - 1], &bits[a - 1]) {
                padding.add_term(weight * w, p)?;
            }
        }
    }

    Ok(FirstQuantizedParts {
        encoding: *enc,
        t: t.canonical(),
        u: u.canonical(),
        hperp: hperp.canonical(),
        padding: padding.canonical(),
    })
}

/// Upper bound on `||T + U||`: the smaller of `N sum|t| + N(N-1) sum|u|`
/// and the Pauli l1 norm of `T + U`.
pub fn target_norm_bound(h: &FermionHamiltonian, parts: &FirstQuantizedParts) -> Result<f64> {
    let n = parts.encoding.particles() as f64;
    let (lt, lu) = h.l1_norm();
    let coefficient_bound = n * lt + n * (n - 1.0) * lu;
    Ok(coefficient_bound.min(parts.target()?.l1_norm()))
}

/// `g = (4B + 1)/N` for the norm bound `B`, so that `g N/2 > 2B`.
pub fn default_penalty(h: &FermionHamiltonian, parts: &FirstQuantizedParts) -> Result<f64> {
    let n = parts.encoding.particles().max(1) as f64;
    Ok((4.0 * target_norm_bound(h, parts)? + 1.0) / n)
}

/// Largest entry of `(T + U) V - V H_sector` for the codespace isometry `V`.
pub fn simulation_residual(h: &FermionHamiltonian, parts: &FirstQuantizedParts) -> Result<f64> {
    let enc = &parts.encoding;
    let v = codespace_isometry(enc)?;
    let sim = parts.target()?.dense_matrix()?;
    let target = restrict_to_sector(&h.dense_fock_matrix()?, enc.modes(), enc.particles());
    Ok(dense::max_abs(&(&sim * &v - &v * target)))
}

/// Spectrum of `T + U` restricted to the codespace.
pub fn codespace_spectrum(parts: &FirstQuantizedParts) -> Result<Vec<f64>> {
    let v = codespace_isometry(&parts.encoding)?;
    let sim = parts.target()?.dense_matrix()?;
    Ok(dense::eigenvalues(&(v.adjoint() * sim * &v)))
}

/// Largest weight outside the codespace over the ground eigenspace of
/// `T + U + g (H_perp + padding)`.
pub fn codespace_leak(parts: &FirstQuantizedParts, g: f64) -> Result<f64> {
    let v = codespace_isometry(&parts.encoding)?;
    let (values, vectors) = dense::eigh(&parts.assemble(g)?.dense_matrix()?);
    let ground = values[0];
    let projector = &v * v.adjoint();
    let mut leak: f64 = 0.0;
    for (k, &e) in values.iter().enumerate() {
        if e - ground > 1e-9 {
            break;
        }
        let psi = vectors.column(k).into_owned();
        let outside = &psi - &projector * &psi;
        leak = leak.max(outside.norm_squared());
    }
    Ok(leak)
}

/// Smallest `g` on the grid whose ground state stays in the codespace.
pub fn minimal_penalty_on_grid(
    parts: &FirstQuantizedParts,
    grid: &[f64],
    tol: f64,
) -> Result<Option<f64>> {
    for &g in grid {
        if codespace_leak(parts, g)? < tol {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Monic irreducible moduli over GF(3), coefficients from `x^0` upward.
const MODULI: [&[u8]; 4] = [&[0, 1], &[1, 0, 1], &[1, 2, 0, 1], &[2, 1, 0, 0, 1]];

fn trim(mut p: Vec<u8>) -> Vec<u8> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(3).
fn poly_rem(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - db;
        for (k, &c) in b.iter().enumerate() {
            r[shift + k] = (r[shift + k] + 3 - (lead * c) % 3) % 3;
        }
        r = trim(r);
    }
    r
}

/// Whether the monic polynomial `p` (coefficients from `x^0`) has no monic
/// factor of degree `1..=deg/2` over GF(3).
pub fn is_irreducible_gf3(p: &[u8]) -> bool {
    let deg = p.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..3usize.pow(d as u32) {
            let mut f: Vec<u8> = (0..d)
                .map(|k| ((code / 3usize.pow(k as u32)) % 3) as u8)
                .collect();
            f.push(1);
            if poly_rem(p, &f).is_empty() {
                return false;
            }
        }
    }
    deg >= 1
}

/// GF(3^m) with elements encoded as base-3 integers, digit `k` holding the
/// coefficient of `x^k`.
#[derive(Clone, Debug)]
pub struct GaloisField {
    m: usize,
    q: usize,
    mul: Vec<u32>,
}

impl GaloisField {
    /// Supports `1 <= m <= 4`; the modulus is checked for irreducibility.
    pub fn new(m: usize) -> Result<Self> {
        if !(1..=MODULI.len()).contains(&m) {
            return Err(Error::Unsupported(format!(
                "GF(3^{m}) (supported degrees are 1..=4)"
            )));
        }
        let modulus = MODULI[m - 1];
        if !is_irreducible_gf3(modulus) {
            return Err(Error::Precondition(format!(
                "modulus {modulus:?} is reducible"
            )));
        }
        let q = 3usize.pow(m as u32);
        let digits = |v: usize| -> Vec<u8> {
            (0..m)
                .map(|k| ((v / 3usize.pow(k as u32)) % 3) as u8)
                .collect()
        };
        let mut mul = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let mut prod = vec![0u8; 2 * m];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % 3;
                    }
                }
                let r = poly_rem(&prod, modulus);
                mul[a * q + b] = r
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c as u32 * 3u32.pow(k as u32))
                    .sum();
            }
        }
        Ok(GaloisField { m, q, mul })
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &'static [u8] {
        MODULI[self.m - 1]
    }

    fn digitwise(&self, a: u32, b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.m {
            out += f(a % 3, b % 3) % 3 * place;
            a /= 3;
            b /= 3;
            place *= 3;
        }
        out
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| x + y)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| x + 3 - y)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (0..self.q as u32).find(|&b| self.mul(a, b) == 1)
    }
}

/// Letters of a register basis: digit `k` of the element sets qubit `k + 1`,
/// with `0 -> X`, `1 -> Y`, `2 -> Z`.
pub fn element_letters(e: u32, m: usize) -> Vec<Letter> {
    (0..m)
        .map(|k| match (e / 3u32.pow(k as u32)) % 3 {
            0 => Letter::X,
            1 => Letter::Y,
            _ => Letter::Z,
        })
        .collect()
}

/// Inverse of [`element_letters`]; identity letters resolve to `Z`.
pub fn letters_element(letters: &[Letter]) -> u32 {
    letters
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let digit = match l {
                Letter::X => 0,
                Letter::Y => 1,
                Letter::Z | Letter::I => 2,
            };
            digit * 3u32.pow(k as u32)
        })
        .sum()
}

/// Strength-2, index-1 orthogonal array with `9^m` rows and `3^m + 1`
/// columns over GF(3^m). Row `(a, b)` has entry `a c + b` in column `c` and
/// `a` in the last column; rows are ordered lexicographically by `(a, b)`.
#[derive(Clone, Debug)]
pub struct OrthogonalArray {
    field: GaloisField,
    entries: Vec<u32>,
}

pub fn rao_hamming_oa(m: usize) -> Result<OrthogonalArray> {
    let field = GaloisField::new(m)?;
    let q = field.order();
    let k = q + 1;
    let mut entries = vec![0u32; q * q * k];
    for a in 0..q as u32 {
        for b in 0..q as u32 {
            let row = (a as usize * q + b as usize) * k;
            for c in 0..q as u32 {
                entries[row + c as usize] = field.add(field.mul(a, c), b);
            }
            entries[row + q] = a;
        }
    }
    Ok(OrthogonalArray { field, entries })
}

impl OrthogonalArray {
    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn num_rows(&self) -> usize {
        self.field.order() * self.field.order()
    }

    pub fn num_cols(&self) -> usize {
        self.field.order() + 1
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> u32 {
        self.entries[(row - 1) * self.num_cols() + col - 1]
    }

    pub fn letters(&self, row: usize, col: usize) -> Vec<Letter> {
        element_letters(self.entry(row, col), self.degree())
    }

    /// Product basis of row `row` over the first `registers` columns.
    pub fn basis(&self, row: usize, registers: usize) -> Vec<Letter> {
        (1..=registers).flat_map(|c| self.letters(row, c)).collect()
    }

    /// Every ordered pair of distinct columns contains each word exactly once.
    pub fn verify(&self) -> bool {
        let q = self.field.order();
        let k = self.num_cols();
        (1..=k).into_par_iter().all(|c1| {
            (1..=k).filter(|&c2| c2 != c1).all(|c2| {
                let mut seen = vec![0u32; q * q];
                for row in 1..=self.num_rows() {
                    seen[self.entry(row, c1) as usize * q + self.entry(row, c2) as usize] += 1;
                }
                seen.iter().all(|&n| n == 1)
            })
        })
    }

    /// Smallest row matching at most two `(col, element)` constraints on
    /// distinct columns, solved over the field.
    pub fn row_for(&self, constraints: &[(usize, u32)]) -> Option<usize> {
        let f = &self.field;
        let q = f.order();
        let row_of = |a: u32, b: u32| a as usize * q + b as usize + 1;
        // column c (1-based) is the field element c - 1, the last one is the extra column
        let extra = q + 1;
        match constraints {
            [] => Some(1),
            &[(c, e)] => Some(if c == extra {
                row_of(e, 0)
            } else {
                row_of(0, e)
            }),
            &[(c1, e1), (c2, e2)] if c1 != c2 => {
                let ((c1, e1), (c2, e2)) = if c2 == extra {
                    ((c2, e2), (c1, e1))
                } else {
                    ((c1, e1), (c2, e2))
                };
                let (a, b) = if c1 == extra {
                    (e1, f.sub(e2, f.mul(e1, (c2 - 1) as u32)))
                } else {
                    let (x1, x2) = ((c1 - 1) as u32, (c2 - 1) as u32);
                    let a = f.mul(f.sub(e1, e2), f.inv(f.sub(x1, x2))?);
                    (a, f.sub(e1, f.mul(a, x1)))
                };
                Some(row_of(a, b))
            }
            _ => None,
        }
    }
}

/// Terms that share the product basis of one orthogonal-array row.
#[derive(Clone, Debug)]
pub struct TermBin {
    /// 1-based row of the orthogonal array.
    pub row: usize,
    pub basis: Vec<Letter>,
    pub terms: QubitHamiltonian,
}

impl TermBin {
    pub fn basis_string(&self) -> String {
        self.basis.iter().map(|l| l.as_char()).collect()
    }

    /// Every term is `I` or the basis letter on each qubit.
    pub fn is_diagonal(&self) -> bool {
        self.terms.paulis().all(|p| diagonal_in(p, &self.basis))
    }
}

fn diagonal_in(p: &PauliOperator, basis: &[Letter]) -> bool {
    p.letters()
        .iter()
        .zip(basis)
        .all(|(&l, &b)| l == Letter::I || l == b)
}

/// Assigns every term of `h` on `registers` registers of `oa.degree()`
/// qubits to one orthogonal-array row whose product basis diagonalizes it.
/// Identity letters inside a touched register resolve to `Z`; ties go to
/// the smallest row. Terms touching more than two registers are rejected.
pub fn bin_terms(
    h: &QubitHamiltonian,
    registers: usize,
    oa: &OrthogonalArray,
) -> Result<Vec<TermBin>> {
    let m = oa.degree();
    if h.num_qubits() != registers * m {
        return Err(Error::DimensionMismatch {
            expected: registers * m,
            actual: h.num_qubits(),
        });
    }
    if registers > oa.num_cols() {
        return Err(Error::Precondition(format!(
            "{registers} registers exceed the {} columns of the array",
            oa.num_cols()
        )));
    }
    let mut bins: BTreeMap<usize, Vec<(Complex64, PauliOperator)>> = BTreeMap::new();
    for (c, p) in h.terms() {
        let letters = p.letters();
        let constraints: Vec<(usize, u32)> = (1..=registers)
            .filter_map(|i| {
                let block = &letters[(i - 1) * m..i * m];
                block
                    .iter()
                    .any(|&l| l != Letter::I)
                    .then(|| (i, letters_element(block)))
            })
            .collect();
        if constraints.len() > 2 {
            return Err(Error::Unassignable(format!(
                "{p} touches {} registers",
                constraints.len()
            )));
        }
        let row = oa
            .row_for(&constraints)
            .ok_or_else(|| Error::Unassignable(format!("no row matches {p}")))?;
        if !diagonal_in(p, &oa.basis(row, registers)) {
            return Err(Error::Unassignable(format!(
                "row {row} does not diagonalize {p}"
            )));
        }
        bins.entry(row).or_default().push((*c, p.clone()));
    }
    bins.into_iter()
        .map(|(row, terms)| {
            Ok(TermBin {
                row,
                basis: oa.basis(row, registers),
                terms: QubitHamiltonian::from_terms(h.num_qubits(), terms)?,
            })
        })
        .collect()
}

/// Young diagram given by its column lengths `l_1 >= ... >= l_d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnPartition(Vec<usize>);

impl ColumnPartition {
    pub fn new(columns: Vec<usize>) -> Result<Self> {
        if columns.contains(&0) || columns.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "column lengths {columns:?} must be positive and weakly decreasing"
            )));
        }
        Ok(ColumnPartition(columns))
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Length of the first column, 0 for the empty diagram.
    pub fn longest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }
}

impl std::fmt::Display for ColumnPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<ColumnPartition> {
    fn recurse(rest: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<ColumnPartition>) {
        if rest == 0 {
            out.push(ColumnPartition(prefix.clone()));
            return;
        }
        for part in (1..=rest.min(cap)).rev() {
            prefix.push(part);
            recurse(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    recurse(n, n, &mut Vec::new(), &mut out);
    out
}

/// `H_perp` eigenvalue on the sector of `p`:
/// `(C(N,2) - sum_a C(l_a,2) + sum_{a<b} l_b) / 2`.
pub fn e_lambda(p: &ColumnPartition) -> Rational64 {
    let c2 = |x: usize| binomial(x, 2) as i64;
    let later: i64 = p.0.iter().enumerate().map(|(b, &l)| (b * l) as i64).sum();
    let same: i64 = p.0.iter().map(|&l| c2(l)).sum();
    Rational64::new(c2(p.size()) - same + later, 2)
}

fn register_dimension(d: usize, n: usize) -> Result<usize> {
    d.checked_pow(n as u32).ok_or(Error::Budget {
        what: "register space dimension",
        needed: u128::MAX,
        budget: usize::MAX as u128,
    })
}

/// `psi_lambda` with integer amplitudes `+-1` on `N` registers of dimension
/// `d`: the product over columns of the antisymmetrized `|1, 2, ..., l_a>`.
/// Its squared norm is `prod_a l_a!`.
pub fn psi_lambda_sparse(p: &ColumnPartition, d: usize) -> Result<BTreeMap<usize, i64>> {
    if p.longest() > d {
        return Err(Error::Precondition(format!(
            "column of length {} exceeds {d} labels",
            p.longest()
        )));
    }
    check_particles(p.longest())?;
    register_dimension(d, p.size())?;
    let mut states: Vec<(Vec<usize>, i64)> = vec![(Vec::new(), 1)];
    for &l in p.columns() {
        let perms = signed_permutations(l);
        states = states
            .into_iter()
            .flat_map(|(digits, s)| {
                perms
                    .iter()
                    .map(move |(perm, sign)| ([digits.clone(), perm.clone()].concat(), s * sign))
            })
            .collect();
    }
    Ok(states
        .into_iter()
        .map(|(digits, s)| (digits_to_index(&digits, d), s))
        .collect())
}

/// Normalized `psi_lambda` as a dense vector of dimension `d^N`.
pub fn psi_lambda(p: &ColumnPartition, d: usize) -> Result<CVector> {
    let dim = register_dimension(d, p.size())?;
    if dim > 1usize << dense::max_dense_qubits() {
        return Err(Error::SizeGuard {
            qubits: (dim as f64).log2().ceil() as usize,
            limit: dense::max_dense_qubits(),
        });
    }
    let sparse = psi_lambda_sparse(p, d)?;
    let norm = (sparse.len() as f64).sqrt();
    let mut v = CVector::zeros(dim);
    for (&s, &c) in &sparse {
        v[s] = Complex64::new(c as f64 / norm, 0.0);
    }
    Ok(v)
}

/// `2 H_perp v = sum_{i<j} (v + SWAP_ij v)` on integer vectors.
pub fn hperp_apply_doubled(v: &BTreeMap<usize, i128>, n: usize, d: usize) -> BTreeMap<usize, i128> {
    let mut out: BTreeMap<usize, i128> = BTreeMap::new();
    for (&s, &c) in v {
        for i in 0..n {
            for j in i + 1..n {
                *out.entry(s).or_default() += c;
                *out.entry(swap_digits(s, i, j, n, d)).or_default() += c;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Whether `H_perp psi_lambda = e_lambda psi_lambda` holds exactly.
pub fn psi_lambda_is_eigenvector(p: &ColumnPartition, d: usize) -> Result<bool> {
    let psi: BTreeMap<usize, i128> = psi_lambda_sparse(p, d)?
        .into_iter()
        .map(|(s, c)| (s, c as i128))
        .collect();
    let twice = e_lambda(p) * 2;
    let e2 = *twice.numer() as i128;
    let lhs = hperp_apply_doubled(&psi, p.size(), d);
    let rhs: BTreeMap<usize, i128> = psi
        .iter()
        .map(|(&s, &c)| (s, c * e2))
        .filter(|(_, c)| *c != 0)
        .collect();
    Ok(lhs == rhs)
}

/// `H_perp` on `N` registers of dimension `d`, built from register swaps.
pub fn hperp_matrix(n: usize, d: usize) -> Result<CMatrix> {
    let dim = register_dimension(d, n)?;
    if dim > 1usize << dense::max_dense_qubits() {
        return Err(Error::SizeGuard {
            qubits: (dim as f64).log2().ceil() as usize,
            limit: dense::max_dense_qubits(),
        });
    }
    let mut m = CMatrix::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..n {
            for j in i + 1..n {
                m[(s, s)] += Complex64::new(0.5, 0.0);
                m[(swap_digits(s, i, j, n, d), s)] += Complex64::new(0.5, 0.0);
            }
        }
    }
    Ok(m)
}

/// Outcome of comparing the `H_perp` spectrum with `{e_lambda}`.
#[derive(Clone, Debug)]
pub struct HperpSpectrum {
    pub particles: usize,
    pub labels: usize,
    /// Distinct `e_lambda` over partitions with `l_1 <= labels`, ascending.
    pub expected: Vec<Rational64>,
    /// Each `psi_lambda` is an exact eigenvector and the product of
    /// `(H_perp - e)` over the expected values annihilates the space.
    pub exact_ok: bool,
    /// Distinct eigenvalues of the dense blocks, ascending.
    pub dense: Vec<f64>,
    pub dense_ok: bool,
    /// Smallest nonzero expected eigenvalue.
    pub gap: Option<Rational64>,
    /// `gap = N/2`, required whenever `2 <= N <= labels`.
    pub gap_ok: bool,
}

impl HperpSpectrum {
    pub fn passed(&self) -> bool {
        self.exact_ok && self.dense_ok && self.gap_ok
    }
}

/// Exact and dense checks that the eigenvalues of `H_perp` on `N` registers
/// of dimension `d` are exactly `{e_lambda : l_1 <= d}`.
pub fn hperp_spectrum_check(n: usize, d: usize) -> Result<HperpSpectrum> {
    if d == 0 {
        return Err(Error::Precondition(
            "registers need at least one label".into(),
        ));
    }
    let dim = register_dimension(d, n)?;
    if dim > HPERP_CHECK_MAX_DIM {
        return Err(Error::Budget {
            what: "H_perp spectrum check",
            needed: dim as u128,
            budget: HPERP_CHECK_MAX_DIM as u128,
        });
    }
    let sectors: Vec<ColumnPartition> = partitions(n)
        .into_iter()
        .filter(|p| p.longest() <= d)
        .collect();
    let mut expected: Vec<Rational64> = sectors.iter().map(e_lambda).collect();
    expected.sort();
    expected.dedup();

    let mut exact_ok = true;
    for p in &sectors {
        exact_ok &= psi_lambda_is_eigenvector(p, d)?;
    }
    // p(H) e_w = 0 for one word w per label-count type suffices: every basis
    // vector is a register permutation of such a word and H_perp commutes
    // with register permutations.
    for counts in partitions(n).into_iter().filter(|c| c.columns().len() <= d) {
        let word: Vec<usize> = counts
            .columns()
            .iter()
            .enumerate()
            .flat_map(|(label, &c)| std::iter::repeat_n(label, c))
            .collect();
        let mut v: BTreeMap<usize, i128> = BTreeMap::from([(digits_to_index(&word, d), 1)]);
        for e in &expected {
            let e2 = *(*e * 2).numer() as i128;
            let mut next = hperp_apply_doubled(&v, n, d);
            for (&s, &c) in &v {
                *next.entry(s).or_default() -= e2 * c;
            }
            next.retain(|_, c| *c != 0);
            v = next;
        }
        exact_ok &= v.is_empty();
    }

    let full = hperp_matrix(n, d)?;
    let mut blocks: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for s in 0..dim {
        let mut key: Vec<usize> = (0..n).map(|i| index_digit(s, i, n, d)).collect();
        key.sort_unstable();
        blocks.entry(key).or_default().push(s);
    }
    let mut values: Vec<f64> = blocks
        .into_values()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map(|idx| dense::eigenvalues(&dense::restrict(&full, idx)))
        .collect();
    values.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for x in values {
        if distinct.last().is_none_or(|&y| x - y > 1e-9) {
            distinct.push(x);
        }
    }
    let dense_ok = distinct.len() == expected.len()
        && distinct
            .iter()
            .zip(&expected)
            .all(|(&x, e)| (x - *e.numer() as f64 / *e.denom() as f64).abs() < 1e-9);

    let gap = expected
        .iter()
        .copied()
        .find(|e| *e != Rational64::from_integer(0));
    let gap_ok = !(2..=d).contains(&n) || gap == Some(Rational64::new(n as i64, 2));
    Ok(HperpSpectrum {
        particles: n,
        labels: d,
        expected,
        exact_ok,
        dense: distinct,
        dense_ok,
        gap,
        gap_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{h2_hamiltonian, random_hamiltonian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn swap_registers(v: &CVector, i: usize, j: usize, n: usize, d: usize) -> CVector {
        let mut out = CVector::zeros(v.len());
        for s in 0..v.len() {
            out[swap_digits(s, i, j, n, d)] = v[s];
        }
        out
    }

    #[test]
    fn register_layout() {
        let enc = RegisterEncoding::new(5, 2).unwrap();
        assert_eq!(
            (enc.register_qubits(), enc.padded_modes(), enc.qubits()),
            (3, 8, 6)
        );
        assert!(enc.is_padded());
        assert_eq!(enc.register(2), vec![4, 5, 6]);
        assert_eq!(enc.label_bits(6), vec![true, false, true]);
        assert_eq!(RegisterEncoding::new(1, 1).unwrap().register_qubits(), 1);
        assert!(!RegisterEncoding::new(4, 2).unwrap().is_padded());
        assert!(RegisterEncoding::new(2, 3).is_err());
    }

    #[test]
    fn single_particle_is_a_basis_state() {
        let enc = RegisterEncoding::new(4, 1).unwrap();
        let v = encode_first_quantized(&"0010".parse().unwrap(), &enc).unwrap();
        let mut expect = CVector::zeros(4);
        expect[2] = c(1.0);
        assert_eq!(v, expect);
    }

    #[test]
    fn two_particles_antisymmetrize() {
        let enc = RegisterEncoding::new(4, 2).unwrap();
        let v = encode_first_quantized(&"1100".parse().unwrap(), &enc).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((v[1] - c(r)).norm() < 1e-15);
        assert!((v[4] - c(-r)).norm() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!((swap_registers(&v, 0, 1, 2, 4) + &v).norm() < 1e-15);
    }

    #[test]
    fn encoded_states_are_antisymmetric_and_orthonormal() {
        let enc = RegisterEncoding::new(5, 3).unwrap();
        let v = codespace_isometry(&enc).unwrap();
        let gram = v.adjoint() * &v;
        assert!((gram - CMatrix::identity(10, 10)).norm() < 1e-12);
        for col in 0..v.ncols() {
            let psi = v.column(col).into_owned();
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                assert!((swap_registers(&psi, i, j, 3, 8) + &psi).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn outer_products_expand_exactly() {
        for (ket, bra) in [
            ([false, true], [true, true]),
            ([true, false], [false, true]),
            ([false, false], [false, false]),
        ] {
            let h = QubitHamiltonian::from_terms(3, outer_product_terms(3, &[1, 3], &ket, &bra))
                .unwrap();
            let m = h.dense_matrix().unwrap();
            let idx = |b: [bool; 2], mid: usize| (b[0] as usize) * 4 + mid * 2 + b[1] as usize;
            for r in 0..8 {
                for col in 0..8 {
                    let mid_r = (r >> 1) & 1;
                    let mid_c = (col >> 1) & 1;
                    let expect = if r == idx(ket, mid_r) && col == idx(bra, mid_c) && mid_r == mid_c
                    {
                        1.0
                    } else {
                        0.0
                    };
                    assert!(
                        (m[(r, col)] - c(expect)).norm() < 1e-15,
                        "{ket:?} {bra:?} {r} {col}"
                    );
                }
            }
        }
    }

    #[test]
    fn pauli_hperp_equals_swap_construction() {
        for (modes, n) in [(2, 2), (4, 2), (3, 3), (4, 3)] {
            let h = FermionHamiltonian::new(modes, n).unwrap();
            let enc = RegisterEncoding::new(modes, n).unwrap();
            let parts = build_tuhperp(&h, &enc).unwrap();
            let direct = hperp_matrix(n, enc.padded_modes()).unwrap();
            assert!((parts.hperp.dense_matrix().unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn two_register_hperp_spectrum() {
        let h = FermionHamiltonian::new(4, 2).unwrap();
        let parts = build_tuhperp(&h, &RegisterEncoding::new(4, 2).unwrap()).unwrap();
        let spec = parts.hperp.spectrum().unwrap();
        assert!(spec
            .iter()
            .all(|&e| e.abs() < 1e-12 || (e - 1.0).abs() < 1e-12));
        assert_eq!(spec.iter().filter(|&&e| e.abs() < 1e-12).count(), 6);
    }

    #[test]
    fn diagonal_hopping_gives_diagonal_t() {
        let mut h = FermionHamiltonian::new(4, 2).unwrap();
        for a in 1..=4 {
            h.add_t(a, a, c(a as f64 * 0.1)).unwrap();
        }
        let parts = build_tuhperp(&h, &RegisterEncoding::new(4, 2).unwrap()).unwrap();
        assert!(parts.t.paulis().all(|p| p.is_z_type()));
        assert!(parts.u.is_empty());
    }

    #[test]
    fn codespace_block_reproduces_the_sector() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for (modes, n) in [(4, 2), (3, 2), (4, 3), (5, 2)] {
            let h = random_hamiltonian(&mut rng, modes, n).unwrap();
            let parts = build_tuhperp(&h, &RegisterEncoding::new(modes, n).unwrap()).unwrap();
            assert!(parts.target().unwrap().is_hermitian(1e-12));
            assert!(
                simulation_residual(&h, &parts).unwrap() < 1e-10,
                "{modes} {n}"
            );
            let spec = codespace_spectrum(&parts).unwrap();
            assert!(dense::spectra_match(
                &spec,
                &h.sector_spectrum().unwrap(),
                1e-9
            ));
        }
        let h = h2_hamiltonian();
        let parts = build_tuhperp(&h, &RegisterEncoding::new(4, 2).unwrap()).unwrap();
        assert!(simulation_residual(&h, &parts).unwrap() < 1e-10);
    }

    #[test]
    fn default_penalty_confines_the_ground_state() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for (modes, n) in [(4, 2), (3, 2), (3, 1), (4, 3)] {
            let h = random_hamiltonian(&mut rng, modes, n).unwrap();
            let parts = build_tuhperp(&h, &RegisterEncoding::new(modes, n).unwrap()).unwrap();
            let g = default_penalty(&h, &parts).unwrap();
            assert!(codespace_leak(&parts, g).unwrap() < 1e-10, "{modes} {n}");
        }
    }

    #[test]
    fn penalty_grid_search() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let h = random_hamiltonian(&mut rng, 4, 2).unwrap();
        let parts = build_tuhperp(&h, &RegisterEncoding::new(4, 2).unwrap()).unwrap();
        let g = default_penalty(&h, &parts).unwrap();
        let grid: Vec<f64> = (0..=20).map(|k| g * k as f64 / 20.0).collect();
        let found = minimal_penalty_on_grid(&parts, &grid, 1e-10)
            .unwrap()
            .unwrap();
        assert!(found <= g);
    }

    #[test]
    fn moduli_are_irreducible() {
        for p in MODULI {
            assert!(is_irreducible_gf3(p));
        }
        // x^2 + 2 = (x + 1)(x + 2)
        assert!(!is_irreducible_gf3(&[2, 0, 1]));
        // x^4 + 2x^2 + 1 = (x^2 + 1)^2 has no roots but is reducible
        assert!(!is_irreducible_gf3(&[1, 0, 2, 0, 1]));
    }

    #[test]
    fn fields_have_inverses() {
        for m in 1..=4 {
            let f = GaloisField::new(m).unwrap();
            for a in 1..f.order() as u32 {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(b, a), 1);
            }
            assert_eq!(
                f.add(f.sub(5 % f.order() as u32, 2), 2),
                5 % f.order() as u32
            );
        }
        assert!(matches!(GaloisField::new(5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn letters_round_trip() {
        for e in 0..81 {
            assert_eq!(letters_element(&element_letters(e, 4)), e);
        }
        assert_eq!(element_letters(5, 2), vec![Letter::Z, Letter::Y]);
        assert_eq!(letters_element(&[Letter::X, Letter::I]), 6);
    }

    #[test]
    fn small_arrays_are_orthogonal() {
        let oa = rao_hamming_oa(1).unwrap();
        assert_eq!((oa.num_rows(), oa.num_cols()), (9, 4));
        assert!(oa.verify());
        let oa = rao_hamming_oa(2).unwrap();
        assert_eq!((oa.num_rows(), oa.num_cols()), (81, 10));
        assert!(oa.verify());
        assert!(rao_hamming_oa(3).unwrap().verify());
        for c1 in 1..=oa.num_cols() {
            for c2 in c1 + 1..=oa.num_cols() {
                assert!((1..=oa.num_rows()).any(|r| oa.entry(r, c1) != oa.entry(r, c2)));
            }
        }
    }

    #[test]
    fn solved_rows_match_a_scan() {
        for m in 1..=2 {
            let oa = rao_hamming_oa(m).unwrap();
            let q = oa.field().order() as u32;
            let k = oa.num_cols();
            let scan = |cs: &[(usize, u32)]| {
                (1..=oa.num_rows()).find(|&r| cs.iter().all(|&(c, e)| oa.entry(r, c) == e))
            };
            for c1 in 1..=k {
                for e1 in 0..q {
                    assert_eq!(oa.row_for(&[(c1, e1)]), scan(&[(c1, e1)]));
                    for c2 in (1..=k).filter(|&c2| c2 != c1) {
                        for e2 in 0..q {
                            assert_eq!(
                                oa.row_for(&[(c1, e1), (c2, e2)]),
                                scan(&[(c1, e1), (c2, e2)])
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zz_term_lands_on_a_zz_row() {
        let oa = rao_hamming_oa(1).unwrap();
        let h = QubitHamiltonian::from_strs(3, &[(1.0, "ZIZ")]);
        let bins = bin_terms(&h, 3, &oa).unwrap();
        assert_eq!(bins.len(), 1);
        assert_eq!(bins[0].basis[0], Letter::Z);
        assert_eq!(bins[0].basis[2], Letter::Z);
        assert!(bins[0].is_diagonal());
    }

    #[test]
    fn identity_positions_resolve_to_z() {
        let oa = rao_hamming_oa(2).unwrap();
        let h = QubitHamiltonian::from_strs(4, &[(1.0, "XIII")]);
        let bins = bin_terms(&h, 2, &oa).unwrap();
        let expect = (1..=oa.num_rows())
            .find(|&r| oa.letters(r, 1) == vec![Letter::X, Letter::Z])
            .unwrap();
        assert_eq!(bins[0].row, expect);
    }

    #[test]
    fn three_register_terms_are_rejected() {
        let oa = rao_hamming_oa(1).unwrap();
        let h = QubitHamiltonian::from_strs(3, &[(1.0, "XYZ")]);
        assert!(matches!(bin_terms(&h, 3, &oa), Err(Error::Unassignable(_))));
    }

    #[test]
    fn simulator_terms_fit_in_9_to_the_m_bins() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for (modes, n, m) in [(2, 2, 1), (4, 2, 2), (4, 3, 2)] {
            let h = random_hamiltonian(&mut rng, modes, n).unwrap();
            let parts = build_tuhperp(&h, &RegisterEncoding::new(modes, n).unwrap()).unwrap();
            let sim = parts.assemble(1.0).unwrap();
            let oa = rao_hamming_oa(m).unwrap();
            let bins = bin_terms(&sim, n, &oa).unwrap();
            assert!(bins.len() <= 9usize.pow(m as u32));
            assert_eq!(bins.iter().map(|b| b.terms.len()).sum::<usize>(), sim.len());
            assert!(bins.iter().all(TermBin::is_diagonal));
            let total = bins
                .iter()
                .try_fold(QubitHamiltonian::new(sim.num_qubits()), |acc, b| {
                    acc.add(&b.terms)
                })
                .unwrap()
                .canonical();
            assert_eq!(total, sim);
        }
    }

    #[test]
    fn partition_enumeration() {
        let counts: Vec<usize> = (0..=7).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions(3)[0].columns(), &[3]);
        assert!(ColumnPartition::new(vec![1, 2]).is_err());
        assert!(ColumnPartition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn e_lambda_values() {
        let p = |v: &[usize]| ColumnPartition::new(v.to_vec()).unwrap();
        for n in 1..=8 {
            assert_eq!(e_lambda(&p(&[n])), Rational64::from_integer(0));
            assert_eq!(
                e_lambda(&p(&vec![1; n])),
                Rational64::from_integer(binomial(n, 2) as i64)
            );
            if n >= 2 {
                let mut v = vec![n - 1, 1];
                v.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(e_lambda(&p(&v)), Rational64::new(n as i64, 2));
            }
        }
        assert_eq!(e_lambda(&p(&[4, 2, 1])), Rational64::from_integer(9));
        assert_eq!(e_lambda(&p(&[2, 1])), Rational64::new(3, 2));
    }

    #[test]
    fn psi_lambda_eigenvalues_by_dense_application() {
        let p = ColumnPartition::new(vec![2, 1]).unwrap();
        let psi = psi_lambda(&p, 2).unwrap();
        let h = hperp_matrix(3, 2).unwrap();
        assert!((&h * &psi - psi.scale(1.5)).norm() < 1e-12);

        let p = ColumnPartition::new(vec![4, 2, 1]).unwrap();
        let psi = psi_lambda(&p, 4).unwrap();
        let out = hperp_apply_doubled(
            &psi_lambda_sparse(&p, 4)
                .unwrap()
                .into_iter()
                .map(|(s, c)| (s, c as i128))
                .collect(),
            7,
            4,
        );
        assert_eq!(out.len(), 48);
        for (s, c2) in out {
            assert!((c2 as f64 / 2.0 / (48f64).sqrt() - 9.0 * psi[s].re).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_lambda_is_exact_for_small_n() {
        for n in 1..=5 {
            for p in partitions(n) {
                assert!(psi_lambda_is_eigenvector(&p, n).unwrap(), "{p}");
            }
        }
        assert!(psi_lambda_sparse(&ColumnPartition::new(vec![3]).unwrap(), 2).is_err());
    }

    #[test]
    fn hperp_spectra() {
        let check = hperp_spectrum_check(2, 2).unwrap();
        assert!(check.passed());
        assert_eq!(
            check.expected,
            vec![Rational64::from_integer(0), Rational64::from_integer(1)]
        );

        let check = hperp_spectrum_check(3, 4).unwrap();
        assert!(check.passed());
        assert_eq!(
            check.expected,
            vec![
                Rational64::from_integer(0),
                Rational64::new(3, 2),
                Rational64::from_integer(3)
            ]
        );

        let check = hperp_spectrum_check(4, 4).unwrap();
        assert!(check.passed());
        assert_eq!(check.gap, Some(Rational64::from_integer(2)));

        for n in 1..=4 {
            for d in 1..=4 {
                assert!(hperp_spectrum_check(n, d).unwrap().passed(), "{n} {d}");
            }
        }
        assert!(matches!(
            hperp_spectrum_check(7, 4),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn wrong_candidate_set_is_detected() {
        // dropping the largest eigenvalue must leave a nonzero residual
        let n = 3;
        let d = 3;
        let mut v: BTreeMap<usize, i128> = BTreeMap::from([(digits_to_index(&[0, 1, 2], d), 1)]);
        for e2 in [0i128, 3] {
            let mut next = hperp_apply_doubled(&v, n, d);
            for (&s, &c) in &v {
                *next.entry(s).or_default() -= e2 * c;
            }
            next.retain(|_, c| *c != 0);
            v = next;
        }
        assert!(!v.is_empty());
    }
}
