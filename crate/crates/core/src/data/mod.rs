//! Design sets, CSV ingestion and feature scaling.

mod design_set;
mod ingest;
mod scale;

pub use design_set::{ColumnNames, DesignSet};
pub use ingest::{load_design_set, read_design_set, write_design_set, ObjectiveDirection, Role, Schema};
pub use scale::{scale_features, ScaleMethod, ScaleStats, Scaled};
