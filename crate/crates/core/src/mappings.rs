//! Jordan-Wigner, parity and binary-tree encodings.
//!
//! Each encoding is a state map `|x> -> |Ax>` with `A` invertible over GF(2),
//! together with the images of the ladder operators as Pauli sums.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::fermion::{FermionHamiltonian, LadderMonomial};
use crate::hamiltonian::QubitHamiltonian;
use crate::pauli::{Letter, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingKind {
    #[serde(rename = "jw")]
    JordanWigner,
    #[serde(rename = "parity")]
    Parity,
    #[serde(rename = "bintree")]
    BinaryTree,
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingKind::JordanWigner => "jw",
            EncodingKind::Parity => "parity",
            EncodingKind::BinaryTree => "bintree",
        })
    }
}

impl FromStr for EncodingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jw" | "jordan_wigner" => Ok(EncodingKind::JordanWigner),
            "parity" => Ok(EncodingKind::Parity),
            "bintree" | "binary_tree" | "bk" => Ok(EncodingKind::BinaryTree),
            other => Err(Error::Unsupported(format!("unknown encoding {other:?}"))),
        }
    }
}

/// Update, parity, flip and remainder sets of one mode (1-based, ascending).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpfSets {
    pub update: Vec<usize>,
    pub parity: Vec<usize>,
    pub flip: Vec<usize>,
    pub remainder: Vec<usize>,
}

impl UpfSets {
    fn new(mut update: Vec<usize>, mut parity: Vec<usize>, mut flip: Vec<usize>) -> Self {
        update.sort_unstable();
        parity.sort_unstable();
        flip.sort_unstable();
        let remainder = parity
            .iter()
            .copied()
            .filter(|i| !flip.contains(i))
            .collect();
        UpfSets {
            update,
            parity,
            flip,
            remainder,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardEncoding {
    kind: EncodingKind,
    modes: usize,
    matrix: BitMatrix,
    inverse: BitMatrix,
    sets: Vec<UpfSets>,
}

/// `A_m` of size `2^m`: `A_0 = [1]`, `A_k = [[A_{k-1}, 0], [B_{k-1}, A_{k-1}]]`
/// where `B` has its last row filled with ones.
pub fn bintree_matrix(m: u32) -> BitMatrix {
    let mut a = BitMatrix::identity(1);
    for _ in 0..m {
        let h = a.nrows();
        let mut next = BitMatrix::zeros(2 * h, 2 * h);
        for i in 1..=h {
            for j in a.row(i).ones() {
                next.set(i, j, true);
                next.set(i + h, j + h, true);
            }
        }
        for j in 1..=h {
            next.set(2 * h, j, true);
        }
        a = next;
    }
    a
}

pub fn parity_matrix(modes: usize) -> BitMatrix {
    let mut a = BitMatrix::zeros(modes, modes);
    for i in 1..=modes {
        for j in 1..=i {
            a.set(i, j, true);
        }
    }
    a
}

fn padded_exponent(modes: usize) -> u32 {
    modes.next_power_of_two().trailing_zeros()
}

/// Update/parity/flip sets of mode `j` for `M` a power of two, from the
/// recursion over halves: with `h = M/2`,
/// `U_M(j) = U_h(j) + {M}` and `P, F` unchanged for `j <= h`;
/// `U_M(j) = U_h(j-h)+h`, `P_M(j) = (P_h(j-h)+h) + {h}`, `F_M(j) = F_h(j-h)+h`
/// (plus `{h}` when `j = M`) for `j > h`.
pub fn upf_sets(modes: usize, j: usize) -> Result<UpfSets> {
    if !modes.is_power_of_two() {
        return Err(Error::Precondition(format!(
            "M={modes} is not a power of two"
        )));
    }
    if j == 0 || j > modes {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: modes,
        });
    }
    let (u, p, f) = upf_rec(modes, j);
    Ok(UpfSets::new(u, p, f))
}

fn upf_rec(m: usize, j: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    if m == 1 {
        return (Vec::new(), Vec::new(), Vec::new());
    }
    let h = m / 2;
    if j <= h {
        let (mut u, p, f) = upf_rec(h, j);
        u.push(m);
        (u, p, f)
    } else {
        let (u, p, f) = upf_rec(h, j - h);
        let shift = |v: Vec<usize>| v.into_iter().map(|i| i + h).collect::<Vec<_>>();
        let u = shift(u);
        let mut p = shift(p);
        p.push(h);
        let mut f = shift(f);
        if j == m {
            f.push(h);
        }
        (u, p, f)
    }
}

/// Sets read off an invertible lower-triangular `A`: `U(j)` are the rows
/// below `j` in column `j`, `F(j)` is row `j` of `A^-1` without `j`, and
/// `P(j)` is the support of the sum of rows `i < j` of `A^-1`.
pub fn sets_from_matrix(a: &BitMatrix) -> Result<Vec<UpfSets>> {
    let inv = a
        .inverse()
        .ok_or_else(|| Error::Precondition("encoding matrix is singular".into()))?;
    let m = a.nrows();
    let mut acc = BitVector::zeros(m);
    let mut out = Vec::with_capacity(m);
    for j in 1..=m {
        let update = a.column(j).ones().filter(|&i| i > j).collect();
        let flip = inv.row(j).ones().filter(|&i| i != j).collect();
        out.push(UpfSets::new(update, acc.ones().collect(), flip));
        acc ^= inv.row(j);
    }
    Ok(out)
}

impl StandardEncoding {
    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &BitMatrix {
        &self.inverse
    }

    /// Update/parity/flip/remainder sets of mode `j`.
    pub fn sets(&self, j: usize) -> &UpfSets {
        &self.sets[j - 1]
    }

    pub fn encode_state(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.matvec(x)
    }

    pub fn decode_state(&self, s: &BitVector) -> Result<BitVector> {
        self.inverse.matvec(s)
    }

    /// `perm[index(x)] = index(Ax)` over all `2^M` basis states.
    pub fn basis_permutation(&self) -> Vec<usize> {
        let dim = 1usize << self.modes;
        (0..dim)
            .map(|i| {
                let x = BitVector::from_index(self.modes, i as u64);
                self.matrix.matvec(&x).expect("square matrix").to_index() as usize
            })
            .collect()
    }

    /// Image of `a_j` (or `a+_j`) under the encoding's defining formula.
    pub fn mode_op(&self, j: usize, dagger: bool) -> Result<QubitHamiltonian> {
        if j == 0 || j > self.modes {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.modes,
            });
        }
        let m = self.modes;
        let half = Complex64::new(0.5, 0.0);
        let pm_i = Complex64::new(0.0, if dagger { -0.5 } else { 0.5 });
        let (first, second) = match self.kind {
            EncodingKind::JordanWigner => {
                // Z_1..Z_{j-1} (X_j +- i Y_j) / 2
                let mut a = PauliOperator::identity(m);
                for i in 1..j {
                    a.set_letter(i, Letter::Z);
                }
                let mut b = a.clone();
                a.set_letter(j, Letter::X);
                b.set_letter(j, Letter::Y);
                (a, b)
            }
            EncodingKind::Parity => {
                // [Z_{j-1} X_j X_{>j} +- i Y_j X_{>j}] / 2
                let mut tail = PauliOperator::identity(m);
                for i in j + 1..=m {
                    tail.set_letter(i, Letter::X);
                }
                let mut a = tail.clone();
                if j > 1 {
                    a.set_letter(j - 1, Letter::Z);
                }
                a.set_letter(j, Letter::X);
                let mut b = tail;
                b.set_letter(j, Letter::Y);
                (a, b)
            }
            EncodingKind::BinaryTree => {
                // X(U) [X_j Z(P) +- i Y_j Z(R)] / 2
                let sets = self.sets(j);
                let mut a = PauliOperator::identity(m);
                for &i in &sets.update {
                    a.set_letter(i, Letter::X);
                }
                let mut b = a.clone();
                for &i in &sets.parity {
                    a.set_letter(i, Letter::Z);
                }
                for &i in &sets.remainder {
                    b.set_letter(i, Letter::Z);
                }
                a.set_letter(j, Letter::X);
                b.set_letter(j, Letter::Y);
                (a, b)
            }
        };
        QubitHamiltonian::from_terms(m, [(half, first), (pm_i, second)])
    }

    /// Image of `a_j` (or `a+_j`) computed from `A` alone:
    /// `a_j -> X(A e_j) Z(p_j) (I - Z(r_j)) / 2` where `r_j` is row `j` of
    /// `A^-1` and `p_j` the sum of its earlier rows.
    pub fn mode_op_via_matrix(&self, j: usize, dagger: bool) -> Result<QubitHamiltonian> {
        mode_op_for_matrix(&self.matrix, &self.inverse, j, dagger)
    }
}

pub fn mode_op_for_matrix(
    a: &BitMatrix,
    inv: &BitMatrix,
    j: usize,
    dagger: bool,
) -> Result<QubitHamiltonian> {
    let m = a.nrows();
    if j == 0 || j > m {
        return Err(Error::IndexOutOfRange { index: j, len: m });
    }
    let col = a.column(j);
    let mut p = BitVector::zeros(m);
    for i in 1..j {
        p ^= inv.row(i);
    }
    let pr = &p ^ inv.row(j);
    let h = QubitHamiltonian::from_terms(
        m,
        [
            (
                Complex64::new(0.5, 0.0),
                PauliOperator::new(col.clone(), p, 0)?,
            ),
            (Complex64::new(-0.5, 0.0), PauliOperator::new(col, pr, 0)?),
        ],
    )?;
    Ok(if dagger { h.adjoint() } else { h })
}

pub fn build_encoding(kind: EncodingKind, modes: usize) -> Result<StandardEncoding> {
    if modes == 0 {
        return Err(Error::Precondition("need at least one mode".into()));
    }
    let matrix = match kind {
        EncodingKind::JordanWigner => BitMatrix::identity(modes),
        EncodingKind::Parity => parity_matrix(modes),
        EncodingKind::BinaryTree => bintree_matrix(padded_exponent(modes)).truncate(modes, modes),
    };
    let inverse = matrix.inverse().expect("standard encodings are invertible");
    let sets = match kind {
        EncodingKind::BinaryTree => {
            let padded = modes.next_power_of_two();
            (1..=modes)
                .map(|j| {
                    let mut s = upf_sets(padded, j)?;
                    s.update.retain(|&i| i <= modes);
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => sets_from_matrix(&matrix)?,
    };
    Ok(StandardEncoding {
        kind,
        modes,
        matrix,
        inverse,
        sets,
    })
}

pub fn mode_op_to_pauli(e: &StandardEncoding, j: usize, dagger: bool) -> Result<QubitHamiltonian> {
    e.mode_op(j, dagger)
}

/// Qubit image of a ladder monomial, multiplying mapped factors left to right.
pub fn encode_monomial(
    m: &LadderMonomial,
    creators: &[QubitHamiltonian],
    annihilators: &[QubitHamiltonian],
) -> Result<QubitHamiltonian> {
    let n = creators.first().map_or(0, QubitHamiltonian::num_qubits);
    let mut acc =
        QubitHamiltonian::from_terms(n, [(Complex64::new(1.0, 0.0), PauliOperator::identity(n))])?;
    for &c in &m.creators {
        acc = acc.mul(&creators[c - 1])?;
    }
    for &d in &m.annihilators {
        acc = acc.mul(&annihilators[d - 1])?;
    }
    Ok(acc)
}

/// Maps every monomial of `h` and collects the result into a canonical
/// qubit Hamiltonian on `M` qubits.
pub fn encode_hamiltonian(
    h: &FermionHamiltonian,
    e: &StandardEncoding,
) -> Result<QubitHamiltonian> {
    if h.modes() != e.modes() {
        return Err(Error::DimensionMismatch {
            expected: e.modes(),
            actual: h.modes(),
        });
    }
    let m = e.modes();
    let creators: Vec<QubitHamiltonian> =
        (1..=m).map(|j| e.mode_op(j, true)).collect::<Result<_>>()?;
    let annihilators: Vec<QubitHamiltonian> = (1..=m)
        .map(|j| e.mode_op(j, false))
        .collect::<Result<_>>()?;
    let monomials: Vec<(LadderMonomial, Complex64)> = h.monomials().into_iter().collect();
    let parts: Vec<QubitHamiltonian> = monomials
        .par_iter()
        .map(|(mono, c)| Ok(encode_monomial(mono, &creators, &annihilators)?.scale(*c)))
        .collect::<Result<_>>()?;
    let mut total = QubitHamiltonian::new(m);
    for part in parts {
        for (c, p) in part.terms() {
            total.add_term(*c, p.clone())?;
        }
    }
    Ok(total.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;

    #[test]
    fn printed_matrices() {
        let bk = build_encoding(EncodingKind::BinaryTree, 4).unwrap();
        assert_eq!(
            *bk.matrix(),
            BitMatrix::from_strs(&["1000", "1100", "0010", "1111"]).unwrap()
        );
        let par = build_encoding(EncodingKind::Parity, 4).unwrap();
        assert_eq!(
            *par.matrix(),
            BitMatrix::from_strs(&["1000", "1100", "1110", "1111"]).unwrap()
        );
        let jw = build_encoding(EncodingKind::JordanWigner, 5).unwrap();
        assert_eq!(*jw.matrix(), BitMatrix::identity(5));
    }

    #[test]
    fn matvec_examples() {
        let par = build_encoding(EncodingKind::Parity, 4).unwrap();
        assert_eq!(
            par.encode_state(&"1000".parse().unwrap())
                .unwrap()
                .to_string(),
            "1111"
        );
        let bk = build_encoding(EncodingKind::BinaryTree, 4).unwrap();
        assert_eq!(
            bk.encode_state(&"0100".parse().unwrap())
                .unwrap()
                .to_string(),
            "0101"
        );
    }

    #[test]
    fn two_mode_sets() {
        let s1 = upf_sets(2, 1).unwrap();
        assert_eq!((s1.update, s1.parity, s1.flip), (vec![2], vec![], vec![]));
        let s2 = upf_sets(2, 2).unwrap();
        assert_eq!(
            (s2.update, s2.parity, s2.flip, s2.remainder),
            (vec![], vec![1], vec![1], vec![])
        );
    }

    #[test]
    fn recursion_matches_matrix_sets() {
        for m in [1usize, 2, 4, 8, 16, 32] {
            let from_matrix = sets_from_matrix(&bintree_matrix(m.trailing_zeros())).unwrap();
            for j in 1..=m {
                assert_eq!(upf_sets(m, j).unwrap(), from_matrix[j - 1], "M={m} j={j}");
            }
        }
    }

    #[test]
    fn jw_second_mode() {
        let jw = build_encoding(EncodingKind::JordanWigner, 3).unwrap();
        let op = jw.mode_op(2, false).unwrap().canonical();
        let expect = QubitHamiltonian::from_terms(
            3,
            [
                (Complex64::new(0.5, 0.0), "ZXI".parse().unwrap()),
                (Complex64::new(0.0, 0.5), "ZYI".parse().unwrap()),
            ],
        )
        .unwrap()
        .canonical();
        assert_eq!(op, expect);
    }

    #[test]
    fn parity_first_mode_has_no_z() {
        let par = build_encoding(EncodingKind::Parity, 2).unwrap();
        let op = par.mode_op(1, false).unwrap();
        assert!(op.paulis().all(|p| p.letter(2) == Letter::X));
        assert_eq!(op.len(), 2);
    }

    #[test]
    fn both_routes_agree_densely() {
        for kind in [
            EncodingKind::JordanWigner,
            EncodingKind::Parity,
            EncodingKind::BinaryTree,
        ] {
            for m in 1..=6 {
                let e = build_encoding(kind, m).unwrap();
                for j in 1..=m {
                    for dagger in [false, true] {
                        let a = e.mode_op(j, dagger).unwrap().dense_matrix().unwrap();
                        let b = e
                            .mode_op_via_matrix(j, dagger)
                            .unwrap()
                            .dense_matrix()
                            .unwrap();
                        assert!(dense::max_abs(&(a - b)) < 1e-15, "{kind} M={m} j={j}");
                    }
                }
            }
        }
    }
}
