//! Step functions, rearrangements, maximal and level functions, and
//! derived evaluable functions.

mod csv_io;
mod distribution;
mod eval;
mod grid;
mod level;
mod maximal;
mod step;

pub use csv_io::{read_pairs, step_from_csv, step_from_path, step_to_csv};
pub use distribution::Distribution;
pub use eval::{EvalFunction, Formula, Monotonicity, Piece, OPERATOR_FLOOR};
pub use grid::{log_grid, merge_points, refine_dyadic, GridFunction, GRID_REL_TOL};
pub use level::level_function;
pub use maximal::{maximal_fn, oscillation, star_pieces, StarPiece};
pub use step::{Rearranged, StepFunction};
