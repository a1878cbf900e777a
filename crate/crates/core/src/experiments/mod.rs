//! Convergence experiments: the test-function corpus, parameter sweeps,
//! rate fitting, and CSV output.

mod corpus;
mod csv_io;
mod fit;
mod sweep;

pub use corpus::{corpus, FunctionId, FunctionKind, TestFunction};
pub use csv_io::{
    emit_csv, emit_singular_profile, parse_csv, read_csv, singular_profile, write_csv, write_singular_profile,
    ProfileRow, CSV_HEADER, PROFILE_HEADER,
};
pub use fit::{detect_plateau, final_level, fit_rate, points_from_rows, FitWindow, RateFit, RateModel};
pub use sweep::{run_sweep, ExperimentSpec, ParamTuple, ResultRow, RowStatus};
