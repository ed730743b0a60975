//! Shared inputs for the criterion benchmarks.

use fertaper_core::fixtures::random_hamiltonian;
use fertaper_core::FermionHamiltonian;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Seeded random `M`-mode, `N`-particle Hamiltonian.
pub fn hamiltonian(modes: usize, particles: usize, seed: u64) -> FermionHamiltonian {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_hamiltonian(&mut rng, modes, particles).expect("valid fixture size")
}
