//! Finite algebras, terms, constructions and homomorphism search.

mod construct;
mod finite;
mod hom;
mod signature;
mod term;

pub use construct::{
    all_subuniverses, product, product_coords, product_element, quotient, sg, subalgebra, trivial,
    tuples,
};
pub(crate) use construct::for_each_tuple;
pub use finite::{FiniteAlgebra, DEFAULT_SIZE_CAP};
pub(crate) use finite::{odometer, table_len};
pub use hom::{
    automorphisms, embeddings_metered, enumerate_embeddings, enumerate_homs, find_embedding,
    for_each_hom, generating_set, homs_metered, is_isomorphic, isomorphic, Homomorphism,
};
pub use signature::{Signature, Symbol};
pub(crate) use term::CTerm;
pub use term::{eval_term, term_table, Term};
mod raw;
pub use raw::{to_raw, validate_algebra, RawAlgebra};
