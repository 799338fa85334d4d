//! One-way classical simulation protocols and their audit.

pub mod audit;
pub mod fixtures;
pub mod tabulated;
pub mod tb;

pub use audit::{
    audit, coverage_check, lemma1_check, message_bound_check, support_sets, verify_equivalence_sampled,
    verify_equivalence_tabulated, AuditConfig, AuditReport, CheckOutcome, CheckStatus, CoverageReport,
    EquivalenceReport, Lemma1Report, Lemma1Violation, MessageBoundReport, PairDeviation, SupportSet,
};
pub use tabulated::{ProtocolTables, SharedEntry, TabulatedProtocol};
pub use tb::{
    lune_solid_angles, tb_decode, tb_encode, tb_simulate, Calibration, MessageBits, SharedPair, Sign,
    SimulationReport, TonerBacon,
};
