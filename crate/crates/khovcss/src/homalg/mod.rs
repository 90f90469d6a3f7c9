//! Exact linear and homological algebra over F₂.

mod bitmatrix;
mod complex;
mod io;
mod ops;
mod weight;

pub use bitmatrix::{BitMatrix, BitVec, Echelon};
pub use complex::{homology_dims, induced_rank, ChainComplex, Generator, HomologySummary};
pub use io::{read_matrix_market, write_matrix_market};
pub use ops::{cone, cone_exactness_report, dual, is_chain_map, tensor, ConeDegreeReport};
pub use weight::{
    certify_min_weight, min_homology_weight, min_weight_outside, DistanceMode, MinWeight, SearchMethod,
    WeightCertificate, DEFAULT_BUDGET, DEFAULT_W_MAX,
};
