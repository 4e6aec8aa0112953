//! Third-order tensor algebra under the cosine-transform product (C-product):
//! the product itself, tensor factorizations, Moore-Penrose, Drazin, group
//! and along-`G` inverses, and higher-order Markov chain limits.
//!
//! Operations that depend on one tube length share a [`TransformContext`].
//!
//! ```
//! use ctensor::{cproduct, geninv, Tensor3, TransformContext};
//!
//! let a = Tensor3::from_real_slices(&[&[&[2.0, 0.0], &[0.0, 1.0]], &[&[1.0, 1.0], &[0.0, 1.0]]]);
//! let ctx = TransformContext::new(a.n3());
//! let x = geninv::mp_inverse(&a, &ctx, geninv::MpMethod::Slicewise).unwrap();
//! assert!(x.passed());
//! let id = cproduct::identity_tensor(2, &ctx);
//! assert!(cproduct::cprod(&a, &x.x, &ctx).unwrap().approx_eq(&id, 1e-12));
//! ```

pub mod cli;
pub mod cproduct;
pub mod decomp;
pub mod error;
pub mod geninv;
pub mod io;
pub mod kernels;
pub mod markov;
pub mod matrix;
pub mod tensor;
pub mod transform;

pub use error::{Error, Result};
pub use matrix::{Matrix, C64};
pub use tensor::{BlockPartition2x2, Tensor3};
pub use transform::TransformContext;
