//! The quadratic pencil `L(λ, η) = λ²M − ληG − A`: validation, evaluation,
//! spectra and type classification.

pub mod bounds;
pub mod spec;
pub mod spectrum;

pub use bounds::{nonreal_region, nonsimple_real_interval, Rect};
pub use spec::{validate_condition_i, Clause, ConditionReport, Pencil, PencilSpec, RankOne};
pub use spectrum::{
    classify_type, geometric_multiplicity, is_semisimple, is_semisimple_with, spectrum, spectrum_with, EigenRecord,
    SpectrumOptions, SpectrumResult, TypeStatus,
};
