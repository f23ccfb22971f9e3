//! Quotient maps of finite subgroups of PGL2 over finite fields, the
//! Q-transform of polynomials, and certificates for how transformed
//! irreducibles factor into orbits.

pub mod factor;
pub mod field;
pub mod invariant;
pub mod pgl2;
pub mod poly;
pub mod quotient;
pub mod resultant;
pub mod text;

pub use factor::{factor, irreducibles_of_degree, is_irreducible, random_irreducible, FactorError, Factorization};
pub use field::{embed, Elem, Embedding, Field, FieldElement, FieldError};
pub use invariant::{
    decompose_invariant, exceptional_locus, facfin_check, is_invariant, main_factorization, orbit_poly,
    pushforward_minpoly, Decomposition, ExceptionalLocus, FacfinReport, InvariantError, OrbitCertificate,
};
pub use pgl2::{GroupError, ProjElement, Subgroup, SubgroupKind};
pub use poly::{P1Value, Poly, PolyError};
pub use quotient::{
    q_transform, quotient_map, quotient_map_bluher, quotient_map_closed_form, quotient_map_fg, verify_generator,
    QuotientError, QuotientMap, RationalFunction,
};
pub use resultant::resultant_in_y;
pub use text::ParseError;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
