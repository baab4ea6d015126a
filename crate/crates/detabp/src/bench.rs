//! Bound-versus-measurement tables: convert every instance of a parameter
//! sweep and record the measured resources next to the bounds.

use std::fmt::Write as _;
use std::time::Instant;

use detabp_core::convert::{general_to_abp, ConvertOptions};
use detabp_core::{ConvertError, FieldSpec};
use thiserror::Error;

use crate::family::{generate_pencil, Family, FamilyError, Params, Range};

pub const CSV_HEADER: &str = "family,n,d,s,r,path,out_size,out_width,bound_size,ratio,millis";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub r: usize,
    pub path: &'static str,
    pub out_size: usize,
    pub out_width: usize,
    pub bound_size: u128,
    /// `out_size / (d^5 s)` to six decimals.
    pub ratio: String,
    pub millis: u128,
}

impl BenchRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.n,
            self.d,
            self.s,
            self.r,
            self.path,
            self.out_size,
            self.out_width,
            self.bound_size,
            self.ratio,
            self.millis
        )
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("{params:?}: {source}")]
    Convert { params: Params, source: ConvertError },
}

/// One row per value of `range`, in range order.
pub fn run(
    family: Family,
    base: &Params,
    range: &Range,
    field: FieldSpec,
    opts: &ConvertOptions,
) -> Result<Vec<BenchRow>, BenchError> {
    range
        .values()
        .map(|v| {
            let params = range.apply(base, v);
            let pencil = generate_pencil(family, &params, field)?;
            let start = Instant::now();
            let (_, report) =
                general_to_abp(&pencil, params.d, opts).map_err(|source| BenchError::Convert { params, source })?;
            let millis = start.elapsed().as_millis();
            Ok(BenchRow {
                family,
                n: params.n,
                d: params.d,
                s: report.s,
                r: report.r,
                path: report.path.as_str(),
                out_size: report.out_size,
                out_width: report.out_width,
                bound_size: report.bound_size,
                ratio: report.ratio_string(),
                millis,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv_line());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sum_sweep() {
        let base = Params { n: 2, d: 3, w: 2, blocks: 2, seed: 0 };
        let range: Range = "n=2..4".parse().unwrap();
        let rows = run(Family::PowerSum, &base, &range, FieldSpec::Rational, &ConvertOptions::default()).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert_eq!(row.path, "Regular");
            assert_eq!(row.out_size, (row.d - 1) * (row.s - 1));
        }
        let csv = to_csv(&rows);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("powersum,2,3,"));
    }

    #[test]
    fn bad_parameters_surface() {
        let base = Params { n: 2, d: 1, w: 2, blocks: 2, seed: 0 };
        let range: Range = "n=2..3".parse().unwrap();
        let err = run(Family::PowerSum, &base, &range, FieldSpec::Rational, &ConvertOptions::default());
        assert!(matches!(err, Err(BenchError::Family(_))));
    }
}
