pub mod bits;
pub mod codeword;
pub mod decode;
pub mod dense;
pub mod error;
pub mod fermion;
pub mod firstq;
pub mod fixtures;
pub mod graph;
pub mod hamiltonian;
pub mod mappings;
pub mod pauli;
pub mod taper;

pub use bits::{gf2_kernel, gf2_matvec, BitMatrix, BitVector};
pub use codeword::{
    build_simulator_hamiltonian, four_body_simulator, simulate_observable, two_body_simulator,
    CodeEncoding, FramedDiagonal, SimulatorHamiltonian, SimulatorOp,
};
pub use decode::{
    brute_force_decode, build_tables, is_n_injective, mitm_decode, Decoder, SyndromeTables,
};
pub use dense::{CMatrix, CVector};
pub use error::{read_file, write_file, Error, Result};
pub use fermion::{FermionHamiltonian, FermionObservable, FockState, LadderMonomial, Variant};
pub use firstq::{
    bin_terms, build_tuhperp, e_lambda, encode_first_quantized, hperp_spectrum_check, psi_lambda,
    rao_hamming_oa, ColumnPartition, FirstQuantizedParts, OrthogonalArray, RegisterEncoding,
};
pub use graph::{
    cycle_chord_graph, girth, graph_decode, greedy_high_girth, BipartiteGraph, GraphDecoder,
};
pub use hamiltonian::{canonicalize, dense_matrix, QubitHamiltonian};
pub use mappings::{build_encoding, encode_hamiltonian, EncodingKind, StandardEncoding};
pub use pauli::{commutes, pauli_multiply, Letter, PauliOperator};
pub use taper::{
    build_plan, clifford_transform, find_symmetries, taper, PivotPreference, Sector, SymmetryGroup,
    TaperingPlan,
};
