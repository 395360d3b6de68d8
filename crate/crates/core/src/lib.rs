//! Exact entropy computations for endomorphisms of finitely representable
//! abelian groups: finite groups `⊕ Z(m_i)`, lattices `Z^n`, and the window
//! groups `K^(I)` and `K^I` over `I ∈ {N, Z}`.
//!
//! Every entropy is `log α` for an integer `α` and is computed exactly. The
//! core is generic over the integer scalar; the aliases below fix it to
//! [`BigInt`], and [`small`] fixes it to `i64` for fast exhaustive runs.

pub mod duality;
pub mod entropy;
pub mod error;
pub mod finab;
pub mod linalg;
pub mod scalar;
pub mod topology;
pub mod window;

pub use num_bigint::{BigInt, BigUint};

pub use error::{Error, Result};

pub type Group = finab::FinAbGroup<BigInt>;
pub type Element = finab::GroupElement<BigInt>;
pub type Hom = finab::Homomorphism<BigInt>;
pub type Sub = finab::Subgroup<BigInt>;
pub type Banded = window::BandedEndo<BigInt>;
pub type Windows = window::WindowGroup<BigInt>;
pub type Endo = entropy::Endomorphism<BigInt>;
pub type Base = topology::TopologyBase<BigInt>;

/// The same aliases over `i64`, which overflow checks keep honest.
pub mod small {
    pub type Group = crate::finab::FinAbGroup<i64>;
    pub type Element = crate::finab::GroupElement<i64>;
    pub type Hom = crate::finab::Homomorphism<i64>;
    pub type Sub = crate::finab::Subgroup<i64>;
    pub type Banded = crate::window::BandedEndo<i64>;
    pub type Windows = crate::window::WindowGroup<i64>;
    pub type Endo = crate::entropy::Endomorphism<i64>;
    pub type Base = crate::topology::TopologyBase<i64>;
}
