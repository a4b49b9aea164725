//! Computational toolkit for finite monoids and their right acts:
//! congruence closure with rewrite certificates, equation-system
//! consistency, purity classification, variable elimination, the
//! Fountain monoid family, and canonical pure extension towers.

pub mod act;
pub mod congruence;
pub mod elimination;
pub mod equation;
pub mod io;
pub mod monoid;
pub mod purity;
pub mod tower;

pub use tower::{
    catalog, extend_morphism, retract_through_build, stage_one, theorem57_check, tower,
    BuildTrace, ExtendedMorphism, ExtensionStage, SystemCatalog, Theorem57Report, TowerError,
    DEFAULT_SIZE_CAP,
};

pub use elimination::{
    case_diagnostics, eliminate_variable, forbidden_patterns, fountain_sigma_prime,
    solve_by_elimination, CaseDiagnostics, ElimError, EliminationStep, ForbiddenPatternReport,
    FountainReduction, HRecord, KRecord, LRecord,
};

pub use purity::{
    check_purity_at, equation_universe, is_almost_pure, is_n_absolutely_pure, is_n_pure_naive,
    SystemEnumerator,
};

pub use equation::{
    assignment_satisfies, identity_embedding, solution_to_retraction, solve_in, EqError, EqSystem,
    Equation, SigmaComplex,
};

pub use congruence::{
    annihilator, certify, close, close_naive, enumerate_congruences, principal_intersection,
    ActCongruence, HSequence, PrincipalIntersection,
};

pub use act::{
    acts_isomorphic, amalgamate, disjoint_union, find_retraction, quotient_act, subact_generated,
    ActError, ActMorphism, FiniteAct, FreeAct,
};

pub use monoid::{
    fountain_monoid, quotient_monoid, small_monoid_catalog, FiniteMonoid, FountainDescriptor,
    FountainElement, MonoidCongruence, MonoidError,
};
