//! Cut-path enumeration and the Schrödinger-Feynman cost estimate.

pub mod cost;
pub mod gates;
pub mod paths;

pub use cost::{evaluate_gates, evaluate_path, log2_cost, sfa_cost, CostScratch, SfaBreakdown, SfaResult};
pub use gates::{cross_gates, detect_dcd, detect_wedges, detect_wedges_excluding, CrossGate, DcdMatch, WedgeMatch};
pub use paths::{enumerate_cut_paths, CatalogSummary, CutCatalog, CutClass, PathSearchConfig};
