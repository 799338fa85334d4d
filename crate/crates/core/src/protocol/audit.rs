//! Checks a protocol against the requirements any exact one-way simulation
//! must meet: reproduction of the Born rule, orthogonality-free message
//! supports, full coverage of the state space, and `R V >= 1`.

use std::fmt;

use serde::Serialize;

use super::tabulated::TabulatedProtocol;
use super::tb::TonerBacon;
use crate::capgeom::{log2_real_cap_volume, CapKind};
use crate::hilbert::{bloch_from_state, born_probability, PureState, RandomStream, ORTHOGONALITY_TOLERANCE};
use crate::Result;

/// Encoder probabilities above this count as "nonzero".
pub const DEFAULT_EPS_SUPP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AuditConfig {
    pub eps_supp: f64,
    pub tol_orth: f64,
    pub tol_equivalence: f64,
    pub tol_coverage: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            eps_supp: DEFAULT_EPS_SUPP,
            tol_orth: ORTHOGONALITY_TOLERANCE,
            tol_equivalence: 1e-9,
            tol_coverage: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Warning,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Warning => "WARNING",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairDeviation {
    pub state: usize,
    pub measurement: usize,
    pub model: f64,
    pub quantum: f64,
    pub deviation: f64,
    /// Present for sampled protocols.
    pub std_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub pairs: Vec<PairDeviation>,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl EquivalenceReport {
    fn new(pairs: Vec<PairDeviation>, tolerance: f64) -> Self {
        let max_deviation = pairs.iter().map(|p| p.deviation).fold(0.0, f64::max);
        Self {
            pairs,
            max_deviation,
            tolerance,
        }
    }

    pub fn flagged(&self) -> impl Iterator<Item = &PairDeviation> {
        self.pairs.iter().filter(move |p| p.deviation > self.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.flagged().next().is_none()
    }
}

/// Exact left-hand side `sum_x rho(x) sum_k rho(k|x,psi) P(phi|k,x)` for every
/// (state, measurement) pair of the grid, against `|<phi|psi>|^2`.
pub fn verify_equivalence_tabulated(tp: &TabulatedProtocol, tolerance: f64) -> Result<EquivalenceReport> {
    let mut pairs = Vec::with_capacity(tp.states().len() * tp.measurements().len());
    for (s, psi) in tp.states().iter().enumerate() {
        for (m, phi) in tp.measurements().iter().enumerate() {
            let mut model = 0.0;
            for (x, entry) in tp.shared().iter().enumerate() {
                let inner: f64 = (0..tp.message_count())
                    .map(|k| tp.encoder(x, s, k) * tp.decoder(x, k, m))
                    .sum();
                model += entry.weight * inner;
            }
            let quantum = born_probability(psi, phi)?;
            pairs.push(PairDeviation {
                state: s,
                measurement: m,
                model,
                quantum,
                deviation: (model - quantum).abs(),
                std_error: None,
            });
        }
    }
    Ok(EquivalenceReport::new(pairs, tolerance))
}

/// Monte Carlo estimate of the model probability for each `(psi, phi)` pair,
/// with a binomial standard error. Pair `i` uses child stream `i` of `rng`.
pub fn verify_equivalence_sampled(
    protocol: &TonerBacon,
    pairs: &[(PureState, PureState)],
    trials: u64,
    rng: &RandomStream,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    let mut out = Vec::with_capacity(pairs.len());
    for (i, (psi, phi)) in pairs.iter().enumerate() {
        let x = bloch_from_state(psi)?;
        let y = bloch_from_state(phi)?;
        let hits = protocol.count_plus(&x, &y, trials, &rng.child(i as u64))?;
        let model = hits as f64 / trials as f64;
        let quantum = born_probability(psi, phi)?;
        out.push(PairDeviation {
            state: i,
            measurement: i,
            model,
            quantum,
            deviation: (model - quantum).abs(),
            std_error: Some((quantum * (1.0 - quantum) / trials as f64).sqrt()),
        });
    }
    Ok(EquivalenceReport::new(out, tolerance))
}

/// States to which the encoder gives message `message` with probability above
/// the threshold, for shared value `shared`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub message: usize,
    pub shared: usize,
    pub label: String,
    pub members: Vec<usize>,
}

/// One support per `(shared value, message)`, ordered by shared value, then message.
pub fn support_sets(tp: &TabulatedProtocol, eps_supp: f64) -> Vec<SupportSet> {
    let mut out = Vec::with_capacity(tp.shared().len() * tp.message_count());
    for (x, entry) in tp.shared().iter().enumerate() {
        for k in 0..tp.message_count() {
            let members = (0..tp.states().len()).filter(|&s| tp.encoder(x, s, k) > eps_supp).collect();
            out.push(SupportSet {
                message: k,
                shared: x,
                label: entry.label.clone(),
                members,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Violation {
    pub message: usize,
    pub shared: usize,
    pub label: String,
    pub state_a: usize,
    pub state_b: usize,
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub supports_checked: usize,
    pub violations: Vec<Lemma1Violation>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans every support for a pair of states with `|<a|b>| <= tol_orth`.
///
/// Every listed shared value is checked; a finite table has no measure-zero
/// set of shared values to exempt.
pub fn lemma1_check(tp: &TabulatedProtocol, eps_supp: f64, tol_orth: f64) -> Result<Lemma1Report> {
    let supports = support_sets(tp, eps_supp);
    let states = tp.states();
    let mut violations = Vec::new();
    for sup in &supports {
        for (i, &a) in sup.members.iter().enumerate() {
            for &b in &sup.members[i + 1..] {
                let overlap = states[a].inner(&states[b])?.norm();
                if overlap <= tol_orth {
                    violations.push(Lemma1Violation {
                        message: sup.message,
                        shared: sup.shared,
                        label: sup.label.clone(),
                        state_a: a,
                        state_b: b,
                        overlap,
                    });
                }
            }
        }
    }
    Ok(Lemma1Report {
        supports_checked: supports.len(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub status: CheckStatus,
    /// `sum_k V[support(k, x)]` for each shared value; empty when no weights.
    pub per_shared: Vec<f64>,
    pub tolerance: f64,
    pub note: String,
}

/// Sums the caller-declared volumes of the supports for each shared value.
/// The union of supports must cover the whole state space, so each sum must
/// reach 1.
pub fn coverage_check(tp: &TabulatedProtocol, eps_supp: f64, tolerance: f64) -> CoverageReport {
    let Some(weights) = tp.support_weights() else {
        return CoverageReport {
            status: CheckStatus::Warning,
            per_shared: Vec::new(),
            tolerance,
            note: "skipped: protocol declares no support_weights".into(),
        };
    };
    let mut per_shared = vec![0.0; tp.shared().len()];
    for sup in support_sets(tp, eps_supp) {
        per_shared[sup.shared] += sup.members.iter().map(|&s| weights[s]).sum::<f64>();
    }
    let worst = per_shared.iter().copied().fold(f64::INFINITY, f64::min);
    let status = if worst >= 1.0 - tolerance {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CoverageReport {
        status,
        per_shared,
        tolerance,
        note: format!("minimum covered volume {worst}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MessageBoundReport {
    pub message_count: usize,
    pub dimension: usize,
    pub kind: CapKind,
    pub log2_volume: f64,
    /// `R * V`, zero if `V` underflows.
    pub product: f64,
    pub log2_r: f64,
    /// `-log2 V`
    pub bound_bits: f64,
    pub passed: bool,
}

/// `R V >= 1`, using the real double-cap volume `V_N` or the complex one `U_N`.
pub fn message_bound_check(message_count: usize, dimension: usize, kind: CapKind) -> Result<MessageBoundReport> {
    if message_count < 1 {
        return Err(crate::Error::param("message count must be at least 1"));
    }
    let log2_volume = match kind {
        CapKind::Real => log2_real_cap_volume(dimension)?,
        CapKind::Complex => {
            crate::capgeom::complex_cap_volume_closed(dimension)?;
            1.0 - dimension as f64
        }
    };
    let log2_r = (message_count as f64).log2();
    Ok(MessageBoundReport {
        message_count,
        dimension,
        kind,
        log2_volume,
        product: message_count as f64 * log2_volume.exp2(),
        log2_r,
        bound_bits: -log2_volume,
        passed: log2_r + log2_volume >= -1e-12,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<CheckOutcome>,
}

impl AuditReport {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn status(&self, check: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.check == check).map(|c| c.status)
    }
}

fn pass_fail(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Runs every check on a validated protocol. The probability-constraint check
/// always passes here because validation already enforced it.
pub fn audit(tp: &TabulatedProtocol, config: &AuditConfig) -> Result<AuditReport> {
    let mut checks = vec![CheckOutcome {
        check: "constraints",
        status: CheckStatus::Pass,
        detail: format!(
            "{} shared values, {} states, {} messages, {} measurements",
            tp.shared().len(),
            tp.states().len(),
            tp.message_count(),
            tp.measurements().len()
        ),
    }];

    let eq = verify_equivalence_tabulated(tp, config.tol_equivalence)?;
    let detail = match eq.flagged().max_by(|a, b| a.deviation.total_cmp(&b.deviation)) {
        Some(p) => format!(
            "{} pairs off by more than {}; worst state {} measurement {}: model {} vs born {}",
            eq.flagged().count(),
            config.tol_equivalence,
            p.state,
            p.measurement,
            p.model,
            p.quantum
        ),
        None => format!("max deviation {}", eq.max_deviation),
    };
    checks.push(CheckOutcome {
        check: "equivalence",
        status: pass_fail(eq.passed()),
        detail,
    });

    let l1 = lemma1_check(tp, config.eps_supp, config.tol_orth)?;
    let detail = match l1.violations.first() {
        Some(v) => format!(
            "{} orthogonal pairs; first: message {} shared {} ({}) states {} and {} (overlap {})",
            l1.violations.len(),
            v.message,
            v.shared,
            v.label,
            v.state_a,
            v.state_b,
            v.overlap
        ),
        None => format!("{} supports free of orthogonal pairs", l1.supports_checked),
    };
    checks.push(CheckOutcome {
        check: "lemma1",
        status: pass_fail(l1.passed()),
        detail,
    });

    let cov = coverage_check(tp, config.eps_supp, config.tol_coverage);
    checks.push(CheckOutcome {
        check: "coverage",
        status: cov.status,
        detail: cov.note,
    });

    let mb = message_bound_check(tp.message_count(), tp.dimension(), CapKind::Complex)?;
    checks.push(CheckOutcome {
        check: "message_bound",
        status: pass_fail(mb.passed),
        detail: format!(
            "R = {}, R*U = {}, log2 R = {} vs bound {} bits",
            mb.message_count, mb.product, mb.log2_r, mb.bound_bits
        ),
    });

    Ok(AuditReport { checks })
}
