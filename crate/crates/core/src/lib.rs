//! Exact Weingarten integration over easy compact quantum groups and their
//! affine homogeneous spaces.
//!
//! The six categories `S, O, U, S+, O+, U+` are supported. Haar integrals of
//! colored monomials are computed as exact rationals from Gram matrices
//! `G(π, σ) = N^{|π ∨ σ|}` and their (generalized) inverses.
//!
//! ```
//! use weingarten::{group_moment, GroupSpec, MomentQuery, WeingartenCache};
//!
//! let cache = WeingartenCache::new();
//! let group: GroupSpec = "O+:4".parse().unwrap();
//! let q = MomentQuery::new("oooo".parse().unwrap(), vec![1; 4], vec![1; 4]).unwrap();
//! assert_eq!(group_moment(&cache, &group, &q).unwrap().to_string(), "1/10");
//! ```

pub mod characters;
pub mod error;
pub mod exact_linalg;
pub mod integrator;
pub mod oracles;
pub mod partitions;
pub mod spaces;

pub use characters::{
    bp_compare, char_moment_asymptotic, char_moment_direct, char_moment_exact, convergence_profile,
    limit_law_moments, BpRow, CharacterQuery, LimitKind, LimitLaw, ProfileRow, SpaceFamily, TRule,
};
pub use error::{Error, Result};
pub use exact_linalg::{
    gram_matrix, reconstruction_operator, solve_inverse, weingarten_matrix, ExactScalar, GramMatrix,
    RationalMatrix, WeingartenCache, WeingartenMatrix,
};
pub use integrator::{
    group_moment, k_vector, product_group_moment, space_moment, Coordinate, GroupSpec, IndexSet,
    MomentQuery, SpaceIntegrator, Unscaled,
};
pub use partitions::{
    enumerate_intersection, enumerate_partitions, is_member, CategoryId, Color, ColoredWord, SetPartition,
};
pub use spaces::{
    preset, relation_set, verify_relations, IndexMode, Preset, Relation, SpaceSpec, VerificationReport,
};
