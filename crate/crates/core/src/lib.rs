#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod convcode;
pub mod error;
pub mod gf;
pub mod lsys;
pub mod matrix;
pub mod poly;
pub mod polymat;
pub mod realize;
pub mod search;
pub mod toeplitz;

pub use convcode::{Budget, CodeParams, ConvCode};
pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use lsys::{Realization, Trajectory};
pub use matrix::Mat;
pub use poly::Poly;
pub use polymat::PolyMat;
pub use realize::MarkovSeq;
pub use search::{search, Distances, FieldSpec, OracleMode, SearchConfig, SearchResult};
pub use toeplitz::{CertOptions, Certificate, Property, SubmatrixIndex, Toeplitz};
