//! Weighted sums of Pauli operators.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bits::BitVector;
use crate::dense::{self, CMatrix, CVector};
use crate::error::{parse_err, Error, Result};
use crate::pauli::{i_pow, PauliOperator};

pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

/// `sum_j c_j P_j` over `n` qubits. Every stored Pauli is a plain letter string
/// (letter phase zero); phases are folded into the coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitHamiltonian {
    n: usize,
    terms: Vec<(Complex64, PauliOperator)>,
}

impl QubitHamiltonian {
    pub fn new(n: usize) -> Self {
        QubitHamiltonian {
            n,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Complex64, PauliOperator)>,
    ) -> Result<Self> {
        let mut h = QubitHamiltonian::new(n);
        for (c, p) in terms {
            h.add_term(c, p)?;
        }
        Ok(h)
    }

    /// Builds from `(coefficient, "ZZII")` pairs; panics on malformed strings.
    pub fn from_strs(n: usize, terms: &[(f64, &str)]) -> Self {
        Self::from_terms(
            n,
            terms.iter().map(|&(c, s)| {
                (
                    Complex64::new(c, 0.0),
                    s.parse().expect("valid Pauli string"),
                )
            }),
        )
        .expect("consistent qubit counts")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Complex64, PauliOperator)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coeff: Complex64, op: PauliOperator) -> Result<()> {
        if op.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: op.num_qubits(),
            });
        }
        let c = coeff * i_pow(op.letter_phase());
        self.terms.push((c, op.letters_only()));
        Ok(())
    }

    /// Merges equal Paulis, drops `|c| < tol`, sorts by `(x | z)`.
    pub fn canonicalize(&self, tol: f64) -> QubitHamiltonian {
        let mut merged: BTreeMap<(BitVector, BitVector), (Complex64, PauliOperator)> =
            BTreeMap::new();
        for (c, p) in &self.terms {
            merged
                .entry((p.x().clone(), p.z().clone()))
                .and_modify(|e| e.0 += c)
                .or_insert_with(|| (*c, p.clone()));
        }
        QubitHamiltonian {
            n: self.n,
            terms: merged
                .into_values()
                .filter(|(c, _)| c.norm() >= tol)
                .collect(),
        }
    }

    pub fn canonical(&self) -> QubitHamiltonian {
        self.canonicalize(DEFAULT_PRUNE_TOL)
    }

    pub fn add(&self, other: &QubitHamiltonian) -> Result<QubitHamiltonian> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out.canonical())
    }

    pub fn scale(&self, c: Complex64) -> QubitHamiltonian {
        QubitHamiltonian {
            n: self.n,
            terms: self.terms.iter().map(|(a, p)| (a * c, p.clone())).collect(),
        }
    }

    /// Operator product, canonicalized.
    pub fn mul(&self, other: &QubitHamiltonian) -> Result<QubitHamiltonian> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let mut out = QubitHamiltonian::new(self.n);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                out.add_term(a * b, p.multiply(q)?)?;
            }
        }
        Ok(out.canonical())
    }

    pub fn adjoint(&self) -> QubitHamiltonian {
        QubitHamiltonian {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(c, p)| (c.conj(), p.clone()))
                .collect(),
        }
    }

    /// Whether every canonical coefficient is real to within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.canonical()
            .terms
            .iter()
            .all(|(c, _)| c.im.abs() <= tol)
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(_, p)| p.is_identity())
            .map(|(c, _)| *c)
            .sum()
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }

    pub fn paulis(&self) -> impl Iterator<Item = &PauliOperator> {
        self.terms.iter().map(|(_, p)| p)
    }

    /// Non-identity Paulis as letter strings, sorted.
    pub fn operator_set(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .canonical()
            .terms
            .iter()
            .filter(|(_, p)| !p.is_identity())
            .map(|(_, p)| p.letter_string())
            .collect();
        v.sort();
        v
    }

    pub fn commutes_with(&self, op: &PauliOperator) -> Result<bool> {
        for (_, p) in &self.terms {
            if !p.commutes(op)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies the operator to a state vector of dimension `2^n`.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        let dim = 1usize << self.n;
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: v.len(),
            });
        }
        let mut out = CVector::zeros(dim);
        for (c, p) in &self.terms {
            for s in 0..dim {
                if v[s] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let (amp, t) = p.apply_index(s as u64);
                out[t as usize] += c * amp * v[s];
            }
        }
        Ok(out)
    }

    /// Exact `2^n x 2^n` matrix; qubit 1 is the most significant factor.
    pub fn dense_matrix(&self) -> Result<CMatrix> {
        dense::guard(self.n)?;
        let dim = 1usize << self.n;
        let mut m = CMatrix::zeros(dim, dim);
        for (c, p) in &self.terms {
            for s in 0..dim {
                let (amp, t) = p.apply_index(s as u64);
                m[(t as usize, s)] += c * amp;
            }
        }
        Ok(m)
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(dense::eigenvalues(&self.dense_matrix()?))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        crate::error::read_file(path)?
            .parse()
            .map_err(|e: crate::Error| e.in_file(path))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::error::write_file(path.as_ref(), self.to_string())
    }
}

pub fn canonicalize(h: &QubitHamiltonian, tol: f64) -> QubitHamiltonian {
    h.canonicalize(tol)
}

pub fn dense_matrix(h: &QubitHamiltonian) -> Result<CMatrix> {
    h.dense_matrix()
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl fmt::Display for QubitHamiltonian {
    /// One `re im PAULI` line per term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits {}", self.n)?;
        for (c, p) in &self.terms {
            writeln!(f, "{} {} {}", clean(c.re), clean(c.im), p.letter_string())?;
        }
        Ok(())
    }
}

impl FromStr for QubitHamiltonian {
    type Err = Error;

    /// Lines of `re im PAULI`; `#` starts a comment. A `# qubits n` header is
    /// honored so empty Hamiltonians keep their width.
    fn from_str(s: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut terms = Vec::new();
        for (k, raw) in s.lines().enumerate() {
            let line_no = k + 1;
            let (body, comment) = match raw.find('#') {
                Some(i) => (&raw[..i], Some(&raw[i + 1..])),
                None => (raw, None),
            };
            if let Some(rest) = comment.and_then(|c| c.trim().strip_prefix("qubits")) {
                if let Ok(q) = rest.trim().parse::<usize>() {
                    n.get_or_insert(q);
                }
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            // a zero-qubit term has no letters
            let (re, im, pauli) = match fields[..] {
                [re, im, pauli] => (re, im, Some(pauli)),
                [re, im] if n == Some(0) => (re, im, None),
                _ => return Err(parse_err(line_no, "expected `re im PAULI`")),
            };
            let re: f64 = re
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad real part {re:?}")))?;
            let im: f64 = im
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad imaginary part {im:?}")))?;
            let p = match pauli {
                Some(text) => text
                    .parse::<PauliOperator>()
                    .map_err(|e| parse_err(line_no, e.to_string()))?,
                None => PauliOperator::identity(0),
            };
            let width = *n.get_or_insert(p.num_qubits());
            if p.num_qubits() != width {
                return Err(parse_err(
                    line_no,
                    format!("Pauli has {} qubits, expected {width}", p.num_qubits()),
                ));
            }
            terms.push((Complex64::new(re, im), p));
        }
        QubitHamiltonian::from_terms(n.unwrap_or(0), terms)
    }
}
