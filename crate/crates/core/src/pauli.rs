//! Pauli operators in symplectic form.
//!
//! A [`PauliOperator`] is `i^phase * X(x) Z(z)` where `X(x)` and `Z(z)` are
//! tensor products over the set bits of `x` and `z`. With this product form
//! multiplication is a pair of XORs plus a phase update, and `Y = i X Z`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bits::BitVector;
use crate::error::{parse_err, Error, Result};

/// `i^p` for `p` taken mod 4.
pub fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVector,
    z: BitVector,
    phase: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }
}

impl PauliOperator {
    /// `i^phase X(x) Z(z)`.
    pub fn new(x: BitVector, z: BitVector, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: z.len(),
            });
        }
        Ok(PauliOperator {
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
            phase: 0,
        }
    }

    /// Hermitian letter string with unit coefficient, e.g. `[Z, I, Y]`.
    pub fn from_letters(letters: &[Letter]) -> Self {
        let n = letters.len();
        let mut p = PauliOperator::identity(n);
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q + 1, l);
        }
        p
    }

    /// A single letter on qubit `q` (1-based) of `n`.
    pub fn single(n: usize, q: usize, letter: Letter) -> Self {
        let mut p = PauliOperator::identity(n);
        p.set_letter(q, letter);
        p
    }

    pub fn x_type(x: BitVector) -> Self {
        let n = x.len();
        PauliOperator {
            x,
            z: BitVector::zeros(n),
            phase: 0,
        }
    }

    pub fn z_type(z: BitVector) -> Self {
        let n = z.len();
        PauliOperator {
            x: BitVector::zeros(n),
            z,
            phase: 0,
        }
    }

    /// Hermitian letter operator with X on `x`-only bits, Z on `z`-only bits and
    /// Y where both are set.
    pub fn from_symplectic(x: BitVector, z: BitVector) -> Result<Self> {
        let y = x.and_weight(&z);
        Self::new(x, z, (y % 4) as u8)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVector {
        &self.x
    }

    pub fn z(&self) -> &BitVector {
        &self.z
    }

    /// Exponent of `i` in the product form `i^p X(x) Z(z)`.
    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    fn y_count(&self) -> usize {
        self.x.and_weight(&self.z)
    }

    /// Exponent of `i` in front of the letter string (the `Y`-based form).
    pub fn letter_phase(&self) -> u8 {
        ((self.phase as usize + 4 - self.y_count() % 4) % 4) as u8
    }

    /// Same letters with letter phase zero.
    pub fn letters_only(&self) -> PauliOperator {
        PauliOperator {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (self.y_count() % 4) as u8,
        }
    }

    pub fn with_letter_phase(mut self, p: u8) -> Self {
        self.phase = ((self.y_count() + p as usize) % 4) as u8;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.letter_phase().is_multiple_of(2)
    }

    pub fn letter(&self, q: usize) -> Letter {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn letters(&self) -> Vec<Letter> {
        (1..=self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    /// Replaces the letter on qubit `q`, keeping the letter phase.
    pub fn set_letter(&mut self, q: usize, letter: Letter) {
        let lp = self.letter_phase();
        let (bx, bz) = letter.bits();
        self.x.set(q, bx);
        self.z.set(q, bz);
        self.phase = ((self.y_count() + lp as usize) % 4) as u8;
    }

    pub fn support(&self) -> Vec<usize> {
        (&self.x | &self.z).ones().collect()
    }

    pub fn weight(&self) -> usize {
        (&self.x | &self.z).weight()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    /// The symplectic vector `(x | z)`.
    pub fn symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_len(other)?;
        let swaps = self.z.and_weight(&other.x);
        Ok(PauliOperator {
            x: &self.x ^ &other.x,
            z: &self.z ^ &other.z,
            phase: ((self.phase as usize + other.phase as usize + 2 * swaps) % 4) as u8,
        })
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_len(other)?;
        Ok(!symplectic_product(self, other))
    }

    pub fn adjoint(&self) -> PauliOperator {
        // (i^p X Z)^dagger = i^-p Z X = i^-p (-1)^{|x.z|} X Z
        let overlap = self.y_count();
        PauliOperator {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: ((8 - self.phase as usize + 2 * overlap) % 4) as u8,
        }
    }

    pub fn scale_phase(&self, p: u8) -> PauliOperator {
        PauliOperator {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (self.phase + p) % 4,
        }
    }

    /// Action on a basis state: `P |s> = amplitude |s'>`.
    pub fn apply(&self, s: &BitVector) -> (Complex64, BitVector) {
        let sign = if self.z.dot(s) { 2 } else { 0 };
        (i_pow(self.phase + sign), s ^ &self.x)
    }

    /// Action on a basis index (qubit 1 is the most significant bit).
    pub fn apply_index(&self, s: u64) -> (Complex64, u64) {
        let (x, z) = self.masks();
        let sign = if (z & s).count_ones() % 2 == 1 { 2 } else { 0 };
        (i_pow(self.phase + sign), s ^ x)
    }

    /// `(x, z)` as basis-index masks; requires at most 64 qubits.
    pub fn masks(&self) -> (u64, u64) {
        (self.x.to_index(), self.z.to_index())
    }

    /// Restriction to the listed 1-based qubits (phase kept).
    pub fn select(&self, qubits: &[usize]) -> PauliOperator {
        PauliOperator {
            x: self.x.select(qubits),
            z: self.z.select(qubits),
            phase: self.phase,
        }
    }

    pub fn remove_qubits(&self, qubits: &[usize]) -> PauliOperator {
        PauliOperator {
            x: self.x.remove_positions(qubits),
            z: self.z.remove_positions(qubits),
            phase: self.phase,
        }
    }

    /// Tensor product `self (x) other`.
    pub fn tensor(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            phase: (self.phase + other.phase) % 4,
        }
    }

    /// Places this operator on the given qubits of an `n`-qubit register.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> PauliOperator {
        assert_eq!(qubits.len(), self.num_qubits());
        let mut x = BitVector::zeros(n);
        let mut z = BitVector::zeros(n);
        x.scatter(qubits, &self.x);
        z.scatter(qubits, &self.z);
        PauliOperator {
            x,
            z,
            phase: self.phase,
        }
    }

    /// Letters-only string, e.g. `ZZIX`.
    pub fn letter_string(&self) -> String {
        self.letters().into_iter().map(Letter::as_char).collect()
    }

    fn check_len(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                actual: other.num_qubits(),
            });
        }
        Ok(())
    }
}

/// `a_x . b_z + a_z . b_x mod 2`; true means the operators anticommute.
pub fn symplectic_product(a: &PauliOperator, b: &PauliOperator) -> bool {
    a.x.dot(&b.z) ^ a.z.dot(&b.x)
}

/// Symplectic form on `(x | z)` vectors of length `2n`.
pub fn symplectic_form(a: &BitVector, b: &BitVector) -> bool {
    let n = a.len() / 2;
    let lo: Vec<usize> = (1..=n).collect();
    let hi: Vec<usize> = (n + 1..=2 * n).collect();
    a.select(&lo).dot(&b.select(&hi)) ^ a.select(&hi).dot(&b.select(&lo))
}

pub fn pauli_multiply(a: &PauliOperator, b: &PauliOperator) -> Result<PauliOperator> {
    a.multiply(b)
}

pub fn commutes(a: &PauliOperator, b: &PauliOperator) -> Result<bool> {
    a.commutes(b)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.letter_phase() {
            0 => {}
            1 => f.write_str("+i")?,
            2 => f.write_str("-1")?,
            _ => f.write_str("-i")?,
        }
        f.write_str(&self.letter_string())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Letters over `IXYZ`, qubit 1 leftmost, with an optional `+i`, `-1`,
    /// `-i` (or `+1`, `+`, `-`) prefix.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (lp, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix("-1") {
            (2, r)
        } else if let Some(r) = s.strip_prefix("+1") {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else {
            (0, s)
        };
        let letters: Vec<Letter> = rest
            .chars()
            .map(|c| {
                Letter::from_char(c)
                    .ok_or_else(|| parse_err(0, format!("bad Pauli letter {c:?} in {s:?}")))
            })
            .collect::<Result<_>>()?;
        if letters.is_empty() {
            return Err(parse_err(0, format!("empty Pauli string {s:?}")));
        }
        Ok(PauliOperator::from_letters(&letters).with_letter_phase(lp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let r = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(r, p("-iY"));
        assert_eq!(r.to_string(), "-iY");
    }

    #[test]
    fn z_strings_multiply_without_phase() {
        assert_eq!(p("ZZI").multiply(&p("ZIZ")).unwrap(), p("IZZ"));
    }

    #[test]
    fn commutation_examples() {
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(!p("XI").commutes(&p("ZZ")).unwrap());
        assert!(p("X").commutes(&p("ZZ")).is_err());
    }

    #[test]
    fn letters_round_trip() {
        for s in ["IXYZ", "-1YY", "+iZ", "-iXY"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!(p("YY").is_hermitian());
        assert!(!p("+iY").is_hermitian());
    }

    #[test]
    fn adjoint_inverts_phase() {
        let a = p("+iXYZ");
        let prod = a.multiply(&a.adjoint()).unwrap();
        assert!(prod.is_identity());
        assert_eq!(prod.letter_phase(), 0);
    }

    #[test]
    fn apply_y_on_zero() {
        // Y|0> = i|1>
        let (amp, s) = p("Y").apply(&"0".parse().unwrap());
        assert_eq!(amp, Complex64::new(0.0, 1.0));
        assert_eq!(s.to_string(), "1");
    }
}
