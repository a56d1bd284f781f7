//! Nodal plane curves, their Riemann–Roch spaces, and the graded modules of
//! sections they define.

pub mod builtin;
pub mod curve;
pub mod divisor;
pub mod forms;
pub mod graded;
pub mod model;
pub mod model_file;
pub mod place;
pub mod rr;
pub mod series;

pub use builtin::{builtin, builtin_names, DEFAULT_PRIMES, DEFAULT_SEED};
pub use curve::{PlaneCurve, DEFAULT_PRECISION_CAP};
pub use divisor::Divisor;
pub use forms::Form;
pub use graded::{build_graded_module, CurveModule};
pub use model::{
    fresh_point, random_nodal_curve, sample_pencil_pair, Base, CurveModel, DivisorExpr, Model, Synthetic,
};
pub use model_file::{load_model, model_to_json, parse_model, save_model, ModelFile};
pub use place::{expand_branch, form_valuation, Place, PlaceKey};
pub use rr::{h0_of, normalize_divisor, riemann_roch_space, Certificate, LinearSystem, Normalized};
