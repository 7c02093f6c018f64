//! Exact counting: restricted partition tables, family counts by peak
//! decomposition, and generating-function coefficients.

mod family;
mod gf;
mod store;
mod table;

pub use family::{
    count_family, decomposition, family_series, peak_bounded_count, peak_bounded_series, CountSeries,
    Decomposition, ExactTables, Half, SeriesKind, TableSet, WideTables,
};
pub use gf::gf_coefficients;
pub use store::{ln_biguint, CellStore, LimbArena, Weight, WideStore};
pub use table::{
    bounded_distinct_table, bounded_partition_table, BoundedTable, MemoryBudget, TableKind,
    TriangularTable, WideTable, MEMORY_ENV,
};
