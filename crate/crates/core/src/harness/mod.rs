//! Verification campaigns: corpora, per-inequality checks and versioned
//! JSON/CSV reports.

mod corpus;
mod nets;
mod report;
mod su2;
mod torus;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

pub use corpus::{
    su2_corpus, su2_corpus_json, torus_corpus, torus_corpus_json, CorpusSpec, Item, TorusPoly, DECAYS,
};
pub use nets::{
    embedding_trend, net_corpus, random_generic_lattice, verify_embedding, verify_kfunc_upper, KFUNC_SLACK,
};
pub use report::{exponent_json, ReportRow, Stability, Status, TrendPoint, VerificationReport, BOUND_TOLERANCE, SCHEMA};
pub use su2::{
    converse_weight, printed_converse_weight, su2_converse_lhs, su2_converse_lhs_weighted, su2_converse_trend,
    verify_char_forward_su2, verify_char_forward_torus, verify_su2_converse, CONVERSE_CROSS_CHECK,
    FORWARD_TOLERANCE,
};
pub use torus::{verify_comparison_torus, verify_hl_torus, verify_ned_torus};

use crate::error::{NetspaceError, Result};
use crate::families::{SegmentMeasure, SubsetFamily};
use crate::lattice::Lattice;

/// A family named on the command line or in a config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    AllSubsets,
    Progressions,
    Segments,
    SegmentsTopLambda,
    File(PathBuf),
}

impl FromStr for FamilySpec {
    type Err = NetspaceError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-subsets" => Ok(FamilySpec::AllSubsets),
            "progressions" | "arithmetic-progressions" => Ok(FamilySpec::Progressions),
            "segments" => Ok(FamilySpec::Segments),
            "segments-top-lambda" => Ok(FamilySpec::SegmentsTopLambda),
            _ => match s.strip_prefix("file:") {
                Some(p) => Ok(FamilySpec::File(PathBuf::from(p))),
                None => Err(NetspaceError::Parse(format!(
                    "unknown family {s:?} (expected all-subsets, progressions, segments, segments-top-lambda or file:PATH)"
                ))),
            },
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::AllSubsets => f.write_str("all-subsets"),
            FamilySpec::Progressions => f.write_str("progressions"),
            FamilySpec::Segments => f.write_str("segments"),
            FamilySpec::SegmentsTopLambda => f.write_str("segments-top-lambda"),
            FamilySpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FamilySpec {
    pub fn build(&self, lattice: Arc<Lattice>) -> Result<SubsetFamily> {
        match self {
            FamilySpec::AllSubsets => Ok(SubsetFamily::all_subsets(lattice)),
            FamilySpec::Progressions => SubsetFamily::progressions(lattice),
            FamilySpec::Segments => Ok(SubsetFamily::segments(lattice)),
            FamilySpec::SegmentsTopLambda => Ok(SubsetFamily::segments_with_measure(lattice, SegmentMeasure::TopLambda)),
            FamilySpec::File(p) => SubsetFamily::explicit_from_json_file(lattice, p),
        }
    }
}

/// Runs `f` on a dedicated rayon pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| NetspaceError::domain(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(f))
}
