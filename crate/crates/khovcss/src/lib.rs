//! CSS quantum codes read off Khovanov chain complexes of link diagrams.
//!
//! The pipeline is: a [`diagram::PlanarDiagram`] is resolved into its cube
//! of smoothings, [`khovanov`] turns the cube into a chain complex over F₂,
//! [`csscode`] slices three consecutive degrees into a pair `(H_X, H_Z)`,
//! and [`homalg`] does the exact linear algebra (ranks, homology, minimum
//! weight of nontrivial classes). [`families`] knows the closed forms for
//! the unknot, unlink and (2,ℓ) torus families and [`asymptotics`] checks
//! the growth estimates behind them.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --example diagrams        # generate and inspect the three families
//! cargo run --example complex         # build a complex, dims and homology
//! cargo run --example change_of_basis # 1/X versus ± differentials
//! cargo run --example css_code        # slice a complex into a CSS code and export it
//! cargo run --example params          # [[n;k;d]] with exact distance search
//! cargo run --example witness         # explicit torus codewords and their certificates
//! cargo run --example verify_family   # closed forms against computation
//! cargo run --example asymptotics     # growth estimates and the best-slice inequality
//! cargo run --example weights         # minimum weights across Reidemeister moves
//! ```
//!
//! The `khovcss` binary exposes the same operations on the command line.

pub mod asymptotics;
pub mod cli;
pub mod csscode;
pub mod diagram;
pub mod families;
pub mod homalg;
pub mod khovanov;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    Structural(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("empty code: degree {0} has no generators")]
    EmptyCode(i32),
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
