//! Text format, JSON reports and Petri-net documents.

pub mod petri;
pub mod report;
pub mod text;

pub use petri::{petri_export, petri_from_json, petri_import, petri_to_json, PetriError, PetriNet};
pub use report::{emit_report, AnalysisReport, Format, ReportError};
pub use text::{parse_complex, parse_crn, print_crn, CrnDocument, ParseError};
