//! Diagnostics: separation ratio and empirical state-divergence bound checks.

mod bounds;
mod separation;

pub use bounds::{esn_bound, esn_bound_ratio, tdr_bound, tdr_bound_ratio, BoundRatioSeries, ReservoirKind};
pub use separation::{separation_ratio, SeparationSeries, SeparationVariant};

use std::io::Write;

use crate::error::Result;

/// Write `(t, value)` pairs as a two-column CSV with a `t,value` header.
pub fn write_series_csv<W: Write>(out: W, series: impl IntoIterator<Item = (usize, f64)>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "value"])?;
    for (t, v) in series {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
