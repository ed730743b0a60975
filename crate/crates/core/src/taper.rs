//! Pauli Z2 symmetries and qubit tapering.
//!
//! Symmetries of a qubit Hamiltonian are the Paulis commuting with every
//! term, i.e. the kernel of the check matrix `E` whose rows are the terms'
//! `(z | x)` vectors. A maximal commuting subset of the kernel is taken as the
//! symmetry group, mapped to single-qubit `X` operators by the Cliffords
//! `U_i = (X_q(i) + tau_i) / sqrt 2`, and those qubits are replaced by their
//! eigenvalues.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVector};
use crate::dense;
use crate::error::{Error, Result};
use crate::hamiltonian::QubitHamiltonian;
use crate::mappings::{EncodingKind, StandardEncoding};
use crate::pauli::{symplectic_form, Letter, PauliOperator};

/// Check matrix `E = [E_x | E_z]` with `E_x = G_z^T`, `E_z = G_x^T`, where the
/// columns of `G = [G_x; G_z]` are the terms' symplectic vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckMatrix {
    pub e: BitMatrix,
    pub g: BitMatrix,
}

impl CheckMatrix {
    pub fn from_hamiltonian(h: &QubitHamiltonian) -> CheckMatrix {
        let n = h.num_qubits();
        let cols: Vec<BitVector> = h.paulis().map(|p| p.symplectic()).collect();
        let g = BitMatrix::from_columns(&cols, 2 * n).expect("uniform widths");
        let rows: Vec<BitVector> = h.paulis().map(|p| p.z().concat(p.x())).collect();
        let e = BitMatrix::from_rows(rows, 2 * n).expect("uniform widths");
        CheckMatrix { e, g }
    }

    /// Basis of `ker E`, as `(x | z)` vectors.
    pub fn kernel(&self) -> Vec<BitVector> {
        self.e.kernel()
    }
}

/// Result of symplectic Gram-Schmidt: vectors commuting with the whole span,
/// and anticommuting pairs `(v, w)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymplecticBasis {
    pub center: Vec<BitVector>,
    pub pairs: Vec<(BitVector, BitVector)>,
}

impl SymplecticBasis {
    /// A maximal isotropic subset of the span: the center plus the first
    /// vector of each pair, in processing order.
    pub fn isotropic(&self) -> Vec<BitVector> {
        let mut out = self.center.clone();
        out.extend(self.pairs.iter().map(|(v, _)| v.clone()));
        out.sort();
        out
    }
}

/// Symplectic Gram-Schmidt over `(x | z)` vectors, processed in ascending
/// lexicographic order. Each step takes the first remaining vector `v` and
/// the first `w` with `<v, w> = 1`; without a partner `v` joins the center,
/// otherwise the remaining vectors are made orthogonal to both.
pub fn symplectic_gram_schmidt(vectors: &[BitVector]) -> SymplecticBasis {
    let mut pool: Vec<BitVector> = vectors.to_vec();
    pool.sort();
    let mut out = SymplecticBasis::default();
    while !pool.is_empty() {
        let v = pool.remove(0);
        if v.is_zero() {
            continue;
        }
        match pool.iter().position(|w| symplectic_form(&v, w)) {
            None => out.center.push(v),
            Some(k) => {
                let w = pool.remove(k);
                for u in pool.iter_mut() {
                    let with_w = symplectic_form(u, &w);
                    let with_v = symplectic_form(u, &v);
                    if with_w {
                        *u ^= &v;
                    }
                    if with_v {
                        *u ^= &w;
                    }
                }
                out.pairs.push((v, w));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub num_qubits: usize,
    pub generators: Vec<PauliOperator>,
    /// Set when the Hamiltonian has no non-identity term, so every Pauli is a
    /// symmetry and the group is just the full Z group.
    pub degenerate: bool,
}

impl SymmetryGroup {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether two generator lists span the same group (as `(x|z)` spaces,
    /// all generators having letter phase zero).
    pub fn same_group(&self, other: &[PauliOperator]) -> bool {
        let mine: Vec<BitVector> = self.generators.iter().map(|p| p.symplectic()).collect();
        let theirs: Vec<BitVector> = other.iter().map(|p| p.symplectic()).collect();
        let r = crate::bits::span_rank(&mine);
        r == crate::bits::span_rank(&theirs)
            && r == crate::bits::span_rank(&[mine.clone(), theirs].concat())
    }
}

/// Symmetry generators of `h`: a maximal commuting subset of `ker E`.
pub fn find_symmetries(h: &QubitHamiltonian) -> SymmetryGroup {
    let h = h.canonical();
    let n = h.num_qubits();
    let check = CheckMatrix::from_hamiltonian(&h);
    let kernel = check.kernel();
    let basis = symplectic_gram_schmidt(&kernel);
    let generators = basis
        .isotropic()
        .into_iter()
        .map(|v| {
            let lo: Vec<usize> = (1..=n).collect();
            let hi: Vec<usize> = (n + 1..=2 * n).collect();
            PauliOperator::from_symplectic(v.select(&lo), v.select(&hi)).expect("equal halves")
        })
        .collect();
    let degenerate = h.paulis().all(PauliOperator::is_identity);
    SymmetryGroup {
        num_qubits: n,
        generators,
        degenerate,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotPreference {
    #[default]
    #[serde(rename = "highest")]
    Highest,
    #[serde(rename = "lowest")]
    Lowest,
}

impl FromStr for PivotPreference {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "highest" => Ok(PivotPreference::Highest),
            "lowest" => Ok(PivotPreference::Lowest),
            other => Err(Error::Unsupported(format!(
                "unknown pivot preference {other:?}"
            ))),
        }
    }
}

/// Generators `tau_i`, paired qubits `q(i)`, and the single-qubit basis
/// changes that made the generators Z-type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaperingPlan {
    pub num_qubits: usize,
    /// Generators in the original frame, after recombination.
    pub generators: Vec<PauliOperator>,
    /// The same generators after the basis changes (all Z-type).
    pub z_generators: Vec<PauliOperator>,
    /// Paired qubits; `X_q(i)` anticommutes with `tau_i` only.
    pub qubits: Vec<usize>,
    /// `(qubit, letter)`: the letter exchanged with Z on that qubit.
    pub rotations: Vec<(usize, Letter)>,
}

impl TaperingPlan {
    pub fn k(&self) -> usize {
        self.qubits.len()
    }

    pub fn tapered_qubits(&self) -> usize {
        self.num_qubits - self.k()
    }

    /// `U_i = (X_q(i) + tau_i) / sqrt 2` as Pauli pairs, in the rotated frame.
    pub fn cliffords(&self) -> Vec<(PauliOperator, PauliOperator)> {
        self.qubits
            .iter()
            .zip(&self.z_generators)
            .map(|(&q, t)| {
                (
                    PauliOperator::single(self.num_qubits, q, Letter::X),
                    t.clone(),
                )
            })
            .collect()
    }

    /// Dense `U_i` on the rotated frame; for verification only.
    pub fn clifford_matrix(&self, i: usize) -> Result<dense::CMatrix> {
        let (x, tau) = &self.cliffords()[i];
        let r = std::f64::consts::FRAC_1_SQRT_2;
        QubitHamiltonian::from_terms(
            self.num_qubits,
            [
                (Complex64::new(r, 0.0), x.clone()),
                (Complex64::new(r, 0.0), tau.clone()),
            ],
        )?
        .dense_matrix()
    }
}

/// Exchanges `letter` and Z on qubit `q` of `sigma` via `(letter + Z)/sqrt 2`.
fn rotate_qubit(sigma: &PauliOperator, q: usize, letter: Letter) -> PauliOperator {
    let n = sigma.num_qubits();
    conjugate(
        sigma,
        &PauliOperator::single(n, q, letter),
        &PauliOperator::single(n, q, Letter::Z),
    )
}

/// `R sigma R` for `R = (A + B)/sqrt 2` with `A, B` anticommuting Hermitian
/// Paulis: `sigma [ (s_A + s_B)/2 + (s_A - s_B)/2 AB ]` where `A sigma = s_A sigma A`.
pub fn conjugate(sigma: &PauliOperator, a: &PauliOperator, b: &PauliOperator) -> PauliOperator {
    let s_a = a.commutes(sigma).expect("equal widths");
    let s_b = b.commutes(sigma).expect("equal widths");
    match (s_a, s_b) {
        (true, true) => sigma.clone(),
        (false, false) => sigma.scale_phase(2),
        (true, false) => sigma
            .multiply(&a.multiply(b).expect("equal widths"))
            .expect("equal widths"),
        (false, true) => sigma
            .multiply(&a.multiply(b).expect("equal widths"))
            .expect("equal widths")
            .scale_phase(2),
    }
}

fn conjugate_hamiltonian(
    h: &QubitHamiltonian,
    f: impl Fn(&PauliOperator) -> PauliOperator,
) -> QubitHamiltonian {
    QubitHamiltonian::from_terms(h.num_qubits(), h.terms().iter().map(|(c, p)| (*c, f(p))))
        .expect("conjugation keeps widths")
}

/// Builds the plan for `s`: rotates generators to Z-type where possible,
/// then row-reduces their z-block so it is the identity on the pivot qubits.
pub fn build_plan(s: &SymmetryGroup, pivot: PivotPreference) -> Result<TaperingPlan> {
    let n = s.num_qubits;
    let mut rotations = Vec::new();
    for q in 1..=n {
        let mut letters: Vec<Letter> = s
            .generators
            .iter()
            .map(|g| g.letter(q))
            .filter(|&l| l != Letter::I)
            .collect();
        letters.sort();
        letters.dedup();
        match letters[..] {
            [] | [Letter::Z] => {}
            [l] => rotations.push((q, l)),
            _ => {
                return Err(Error::NotZReducible(format!(
                    "qubit {q} carries letters {:?} across generators",
                    letters
                )))
            }
        }
    }
    let rotate_all = |p: &PauliOperator| {
        rotations
            .iter()
            .fold(p.clone(), |acc, &(q, l)| rotate_qubit(&acc, q, l))
    };
    let z_rows: Vec<BitVector> = s
        .generators
        .iter()
        .map(|g| {
            let r = rotate_all(g);
            debug_assert!(r.is_z_type());
            r.z().clone()
        })
        .collect();

    // Row reduction scanning columns in preference order.
    let order: Vec<usize> = match pivot {
        PivotPreference::Highest => (1..=n).rev().collect(),
        PivotPreference::Lowest => (1..=n).collect(),
    };
    let mut rows = z_rows;
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for &c in &order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                *row ^= &pr;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r != rows.len() {
        return Err(Error::Precondition(
            "symmetry generators are not independent".into(),
        ));
    }
    let mut paired: Vec<(usize, BitVector)> = pivots.into_iter().zip(rows).collect();
    paired.sort_by_key(|(q, _)| *q);
    let z_generators: Vec<PauliOperator> = paired
        .iter()
        .map(|(_, z)| PauliOperator::z_type(z.clone()))
        .collect();
    // Rotations are self-inverse, so the same map takes them back.
    let generators = z_generators.iter().map(rotate_all).collect();
    Ok(TaperingPlan {
        num_qubits: n,
        generators,
        z_generators,
        qubits: paired.into_iter().map(|(q, _)| q).collect(),
        rotations,
    })
}

/// `U^dagger H U` for `U = V U_1 ... U_k` where `V` is the plan's basis change.
pub fn clifford_transform(h: &QubitHamiltonian, plan: &TaperingPlan) -> QubitHamiltonian {
    let cliffords = plan.cliffords();
    conjugate_hamiltonian(h, |p| {
        let rotated = plan
            .rotations
            .iter()
            .fold(p.clone(), |acc, &(q, l)| rotate_qubit(&acc, q, l));
        cliffords
            .iter()
            .fold(rotated, |acc, (x, tau)| conjugate(&acc, x, tau))
    })
}

/// Symmetry eigenvalues, one `+1`/`-1` per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sector(pub Vec<i8>);

impl Sector {
    /// The `index`-th of `2^k` sectors; bit `i` (from the most significant)
    /// set means eigenvalue `-1` for generator `i`.
    pub fn from_index(k: usize, index: usize) -> Sector {
        Sector(
            (0..k)
                .map(|i| {
                    if (index >> (k - 1 - i)) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect(),
        )
    }

    pub fn all(k: usize) -> Vec<Sector> {
        (0..1usize << k).map(|i| Sector::from_index(k, i)).collect()
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Parse {
                    line: 0,
                    message: format!("bad sector sign {other:?}"),
                }),
            })
            .collect::<Result<Vec<i8>>>()
            .map(Sector)
    }
}

/// Replaces `X_q(i)` by `sector[i]` and deletes the paired qubits.
pub fn taper(
    h_transformed: &QubitHamiltonian,
    plan: &TaperingPlan,
    sector: &Sector,
) -> Result<QubitHamiltonian> {
    if sector.0.len() != plan.k() {
        return Err(Error::DimensionMismatch {
            expected: plan.k(),
            actual: sector.0.len(),
        });
    }
    let n = h_transformed.num_qubits();
    let mut out = QubitHamiltonian::new(n - plan.k());
    for (c, p) in h_transformed.terms() {
        let mut coeff = *c;
        for (i, &q) in plan.qubits.iter().enumerate() {
            match p.letter(q) {
                Letter::I => {}
                Letter::X => coeff *= sector.0[i] as f64,
                other => {
                    return Err(Error::Precondition(format!(
                        "term {p} acts on paired qubit {q} by {}",
                        other.as_char()
                    )))
                }
            }
        }
        out.add_term(coeff, p.remove_qubits(&plan.qubits))?;
    }
    Ok(out.canonical())
}

/// Eigenvalues of Z-type generators on a computational basis state.
pub fn sector_from_basis_state(z_generators: &[PauliOperator], s: &BitVector) -> Result<Sector> {
    z_generators
        .iter()
        .map(|g| {
            if !g.is_z_type() {
                return Err(Error::Precondition(format!("generator {g} is not Z-type")));
            }
            Ok(if g.z().dot(s) { -1 } else { 1 })
        })
        .collect::<Result<Vec<i8>>>()
        .map(Sector)
}

/// `((-1)^N_up, (-1)^(N_up + N_down))`, the eigenvalues of `Z_{M/2}` and
/// `Z_M` for parity and binary-tree encodings with spin-up modes first.
pub fn spin_sector_signs(n_up: usize, n_down: usize, e: &StandardEncoding) -> Result<(i8, i8)> {
    let m = e.modes();
    match e.kind() {
        EncodingKind::Parity if m.is_multiple_of(2) => {}
        EncodingKind::BinaryTree if m.is_power_of_two() && m >= 2 => {}
        kind => {
            return Err(Error::Unsupported(format!(
                "spin parities need parity or binary-tree encoding with even M (power of two for binary tree); got {kind} with M={m}"
            )))
        }
    }
    let sign = |k: usize| if k.is_multiple_of(2) { 1 } else { -1 };
    Ok((sign(n_up), sign(n_up + n_down)))
}

/// `Z_{M/2}` and `Z_M` on `M` qubits.
pub fn spin_parity_operators(modes: usize) -> (PauliOperator, PauliOperator) {
    (
        PauliOperator::single(modes, modes / 2, Letter::Z),
        PauliOperator::single(modes, modes, Letter::Z),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorResult {
    pub sector: Sector,
    pub hamiltonian: QubitHamiltonian,
    pub spectrum: Vec<f64>,
}

impl SectorResult {
    pub fn ground_energy(&self) -> f64 {
        self.spectrum.first().copied().unwrap_or(0.0)
    }
}

/// Largest tapered width for which every sector is diagonalized.
pub const ENUMERATE_MAX_QUBITS: usize = 12;

/// Tapers and diagonalizes every sector in parallel.
pub fn enumerate_sectors(
    h_transformed: &QubitHamiltonian,
    plan: &TaperingPlan,
) -> Result<Vec<SectorResult>> {
    let width = plan.tapered_qubits();
    if width > ENUMERATE_MAX_QUBITS {
        return Err(Error::SizeGuard {
            qubits: width,
            limit: ENUMERATE_MAX_QUBITS,
        });
    }
    Sector::all(plan.k())
        .into_par_iter()
        .map(|sector| {
            let hamiltonian = taper(h_transformed, plan, &sector)?;
            let spectrum = dense::eigenvalues(&hamiltonian.dense_matrix()?);
            Ok(SectorResult {
                sector,
                hamiltonian,
                spectrum,
            })
        })
        .collect()
}

/// Sector with the lowest ground energy (first in sector order on ties).
pub fn argmin_sector(results: &[SectorResult]) -> Option<&SectorResult> {
    results
        .iter()
        .min_by(|a, b| a.ground_energy().total_cmp(&b.ground_energy()))
}

/// Symmetry search, plan and transform in one call.
pub fn prepare(
    h: &QubitHamiltonian,
    pivot: PivotPreference,
) -> Result<(SymmetryGroup, TaperingPlan, QubitHamiltonian)> {
    let group = find_symmetries(h);
    let plan = build_plan(&group, pivot)?;
    let transformed = clifford_transform(&h.canonical(), &plan).canonical();
    Ok((group, plan, transformed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{h2_pauli_table, H2_TRANSFORMED_PAULIS};

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn h2_kernel_is_printed_basis() {
        let e = CheckMatrix::from_hamiltonian(&h2_pauli_table().canonical());
        let mut k: Vec<String> = e.kernel().iter().map(|v| v.to_string()).collect();
        k.sort();
        assert_eq!(k, vec!["00001001", "00001010", "00001100"]);
        assert_eq!(e.e.rank(), 5);
    }

    #[test]
    fn h2_plan_and_transform() {
        let (group, plan, transformed) =
            prepare(&h2_pauli_table(), PivotPreference::Highest).unwrap();
        assert!(group.same_group(&[p("ZZII"), p("ZIZI"), p("ZIIZ")]));
        assert_eq!(plan.qubits, vec![2, 3, 4]);
        assert_eq!(plan.generators, vec![p("ZZII"), p("ZIZI"), p("ZIIZ")]);
        let mut expect: Vec<String> = H2_TRANSFORMED_PAULIS
            .iter()
            .map(|s| s.to_string())
            .collect();
        expect.sort();
        assert_eq!(transformed.operator_set(), expect);
        for sector in Sector::all(3) {
            assert_eq!(taper(&transformed, &plan, &sector).unwrap().num_qubits(), 1);
        }
    }

    #[test]
    fn single_x_is_its_own_symmetry() {
        let h = QubitHamiltonian::from_strs(1, &[(1.0, "X")]);
        let g = find_symmetries(&h);
        assert_eq!(g.generators, vec![p("X")]);
        let plan = build_plan(&g, PivotPreference::Highest).unwrap();
        assert_eq!(plan.rotations, vec![(1, Letter::X)]);
        let t = clifford_transform(&h, &plan);
        assert_eq!(t.operator_set(), vec!["X".to_string()]);
    }

    #[test]
    fn pivot_tie_breaks() {
        let group = |gens: Vec<PauliOperator>| SymmetryGroup {
            num_qubits: gens[0].num_qubits(),
            generators: gens,
            degenerate: false,
        };
        let plan = build_plan(&group(vec![p("ZI")]), PivotPreference::Highest).unwrap();
        assert_eq!(plan.qubits, vec![1]);
        let plan = build_plan(&group(vec![p("ZZ")]), PivotPreference::Highest).unwrap();
        assert_eq!(plan.qubits, vec![2]);
        let plan = build_plan(&group(vec![p("ZZ")]), PivotPreference::Lowest).unwrap();
        assert_eq!(plan.qubits, vec![1]);
    }

    #[test]
    fn generator_maps_to_paired_x() {
        let (_, plan, _) = prepare(&h2_pauli_table(), PivotPreference::Highest).unwrap();
        let tau = QubitHamiltonian::from_strs(4, &[(1.0, "ZZII")]);
        let t = clifford_transform(&tau, &plan);
        assert_eq!(t.terms()[0].1, p("IXII"));
        assert_eq!(t.terms()[0].0, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn mixed_letters_are_rejected() {
        let g = SymmetryGroup {
            num_qubits: 2,
            generators: vec![p("XX"), p("ZZ")],
            degenerate: false,
        };
        assert!(matches!(
            build_plan(&g, PivotPreference::Highest),
            Err(Error::NotZReducible(_))
        ));
    }

    #[test]
    fn empty_hamiltonian_is_degenerate() {
        let g = find_symmetries(&QubitHamiltonian::new(3));
        assert!(g.degenerate);
        assert_eq!(g.len(), 3);
        assert!(g.generators.iter().all(PauliOperator::is_z_type));
    }

    #[test]
    fn spin_signs() {
        let e = crate::mappings::build_encoding(EncodingKind::Parity, 4).unwrap();
        assert_eq!(spin_sector_signs(1, 1, &e).unwrap(), (-1, 1));
        assert_eq!(spin_sector_signs(0, 0, &e).unwrap(), (1, 1));
        assert_eq!(spin_sector_signs(2, 1, &e).unwrap(), (1, -1));
        let jw = crate::mappings::build_encoding(EncodingKind::JordanWigner, 4).unwrap();
        assert!(spin_sector_signs(1, 1, &jw).is_err());
    }

    #[test]
    fn sector_strings() {
        let s: Sector = "++-".parse().unwrap();
        assert_eq!(s.0, vec![1, 1, -1]);
        assert_eq!(s.to_string(), "++-");
        assert_eq!(Sector::from_index(3, 1), s);
    }
}
