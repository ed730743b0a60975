//! Reference Hamiltonians and seeded random instances.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::fermion::FermionHamiltonian;
use crate::hamiltonian::QubitHamiltonian;

/// Minimal-basis hydrogen molecule on four spin orbitals
/// `1 = g up, 2 = g down, 3 = u up, 4 = u down`, two electrons.
///
/// Built from the spatial integrals `h_gg, h_uu` and the chemist-notation
/// two-electron integrals `(pq|rs)` via
/// `H = sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q`.
pub fn h2_hamiltonian() -> FermionHamiltonian {
    const H_GG: f64 = -1.252477;
    const H_UU: f64 = -0.475934;
    const GGGG: f64 = 0.674493;
    const UUUU: f64 = 0.697397;
    const GGUU: f64 = 0.663472;
    const GUGU: f64 = 0.181287;

    let spatial = |p: usize| (p - 1) / 2;
    let spin = |p: usize| (p - 1) % 2;
    let one = [H_GG, H_UU];
    let two = |p: usize, q: usize, r: usize, s: usize| -> f64 {
        match (p, q, r, s) {
            (0, 0, 0, 0) => GGGG,
            (1, 1, 1, 1) => UUUU,
            (0, 0, 1, 1) | (1, 1, 0, 0) => GGUU,
            (0, 1, 0, 1) | (0, 1, 1, 0) | (1, 0, 0, 1) | (1, 0, 1, 0) => GUGU,
            _ => 0.0,
        }
    };

    let mut h = FermionHamiltonian::new(4, 2).expect("valid sizes");
    for p in 1..=4 {
        h.add_t(p, p, Complex64::new(one[spatial(p)], 0.0))
            .expect("in range");
    }
    for p in 1..=4 {
        for q in 1..=4 {
            for r in 1..=4 {
                for s in 1..=4 {
                    if spin(p) != spin(q) || spin(r) != spin(s) {
                        continue;
                    }
                    let v = two(spatial(p), spatial(q), spatial(r), spatial(s));
                    if v != 0.0 {
                        h.add_u(p, r, s, q, Complex64::new(0.5 * v, 0.0))
                            .expect("in range");
                    }
                }
            }
        }
    }
    h
}

/// The fourteen non-identity Pauli operators of the hydrogen Hamiltonian
/// under Jordan-Wigner.
pub const H2_PAULIS: [&str; 14] = [
    "ZIII", "IZII", "IIZI", "IIIZ", "ZZII", "ZIZI", "ZIIZ", "IZZI", "IZIZ", "IIZZ", "YYXX", "XYYX",
    "YXXY", "XXYY",
];

/// The same operators after conjugation by the tapering Clifford.
pub const H2_TRANSFORMED_PAULIS: [&str; 14] = [
    "ZIII", "ZXII", "ZIXI", "ZIIX", "IXII", "IIXI", "IIIX", "IXXI", "IXIX", "IIXX", "XIXX", "XIIX",
    "XXXI", "XXII",
];

/// Unit-coefficient qubit Hamiltonian over the fourteen operators.
pub fn h2_pauli_table() -> QubitHamiltonian {
    let terms: Vec<(f64, &str)> = H2_PAULIS.iter().map(|&s| (1.0, s)).collect();
    QubitHamiltonian::from_strs(4, &terms)
}

fn random_complex<R: Rng + ?Sized>(rng: &mut R, real: bool) -> Complex64 {
    let re = rng.random_range(-1.0..1.0);
    let im = if real {
        0.0
    } else {
        rng.random_range(-1.0..1.0)
    };
    Complex64::new(re, im)
}

/// Random Hermitian Hamiltonian: dense `t` and `2M` random two-body
/// coefficients (each added with its Hermitian partner), all entries of
/// magnitude below one.
pub fn random_hamiltonian<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    particles: usize,
) -> Result<FermionHamiltonian> {
    let mut h = FermionHamiltonian::new(modes, particles)?;
    for a in 1..=modes {
        for b in a..=modes {
            h.add_t_hermitian(a, b, random_complex(rng, a == b) * 0.5)?;
        }
    }
    for _ in 0..2 * modes {
        let idx: Vec<usize> = (0..4).map(|_| rng.random_range(1..=modes)).collect();
        h.add_u_hermitian(
            idx[0],
            idx[1],
            idx[2],
            idx[3],
            random_complex(rng, false) * 0.25,
        )?;
    }
    Ok(h)
}

/// Random real Hamiltonian that conserves spin, with spin-up modes
/// `1..=M/2` and spin-down modes `M/2+1..=M`. `modes` must be even.
pub fn random_spin_hamiltonian<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    particles: usize,
) -> Result<FermionHamiltonian> {
    assert!(
        modes.is_multiple_of(2),
        "spin Hamiltonians need an even mode count"
    );
    let half = modes / 2;
    let up = |i: usize| i <= half;
    let mut h = FermionHamiltonian::new(modes, particles)?;
    for a in 1..=modes {
        for b in a..=modes {
            if up(a) == up(b) {
                h.add_t_hermitian(a, b, random_complex(rng, true) * 0.5)?;
            }
        }
    }
    let mut added = 0;
    while added < 2 * modes {
        let idx: Vec<usize> = (0..4).map(|_| rng.random_range(1..=modes)).collect();
        let ups_out = idx[..2].iter().filter(|&&i| up(i)).count();
        let ups_in = idx[2..].iter().filter(|&&i| up(i)).count();
        if ups_out != ups_in {
            continue;
        }
        h.add_u_hermitian(
            idx[0],
            idx[1],
            idx[2],
            idx[3],
            random_complex(rng, true) * 0.25,
        )?;
        added += 1;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_is_hermitian() {
        let h = h2_hamiltonian();
        h.validate().unwrap();
        assert_eq!(h.scale_warnings(), 2);
    }

    #[test]
    fn h2_jordan_wigner_term_set() {
        use crate::mappings::{build_encoding, encode_hamiltonian, EncodingKind};
        let jw = build_encoding(EncodingKind::JordanWigner, 4).unwrap();
        let q = encode_hamiltonian(&h2_hamiltonian(), &jw).unwrap();
        let mut expect: Vec<String> = H2_PAULIS.iter().map(|s| s.to_string()).collect();
        expect.sort();
        assert_eq!(q.operator_set(), expect);
        assert!(q.is_hermitian(1e-12));
    }
}
