//! Measure–broadcast–correct protocols, evaluated by exhaustive enumeration
//! of measurement outcomes.
//!
//! Zero-probability outcomes are kept as branches with no post-state, so a
//! Bell measurement on `d`-dimensional registers always yields `d²` branches.

mod superadditivity;
mod teleport;
mod transcript;
mod unlock;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::factory::{generalized_bell_state, heisenberg_weyl, pauli_sigma, sigma_bell_state, SigmaIndex, WeylLabel};
use crate::layout::SubsystemLayout;
use crate::matrix::ComplexMatrix;
use crate::state::DensityOperator;

pub use superadditivity::{
    mean_fidelity, superadditivity_assignment, superadditivity_layout, superadditivity_protocol, superadditivity_state,
    superadditivity_with,
    MessageSet,
};
pub use teleport::{equivalence_check, equivalence_report, teleport_view, EquivalenceReport, LabelComparison};
pub use transcript::{Transcript, TranscriptEvent};
pub use unlock::{unlock, unlock_with_corrector};

/// Outcomes below this probability carry no post-state.
pub const ZERO_BRANCH_PROB: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartyId(String);

impl PartyId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PartyId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// Which party holds each subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterAssignment {
    owner: BTreeMap<String, PartyId>,
}

impl RegisterAssignment {
    /// Each subsystem is held by a party of the same name.
    pub fn one_per_register(layout: &SubsystemLayout) -> Self {
        Self {
            owner: layout
                .labels()
                .iter()
                .map(|l| (l.clone(), PartyId::new(l.as_str())))
                .collect(),
        }
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Self {
            owner: pairs
                .iter()
                .map(|(reg, party)| ((*reg).to_owned(), PartyId::new(*party)))
                .collect(),
        }
    }

    pub fn owner(&self, register: &str) -> Option<&PartyId> {
        self.owner.get(register)
    }

    /// Registers held by `party`, in layout order.
    pub fn registers_of<'a>(&self, layout: &'a SubsystemLayout, party: &PartyId) -> Vec<&'a str> {
        layout
            .labels()
            .iter()
            .filter(|l| self.owner.get(l.as_str()) == Some(party))
            .map(String::as_str)
            .collect()
    }

    /// Distinct parties, sorted by name.
    pub fn parties(&self) -> Vec<PartyId> {
        let mut v: Vec<PartyId> = self.owner.values().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        for l in layout.labels() {
            if !self.owner.contains_key(l) {
                return Err(Error::Argument(format!("register {l} has no owner")));
            }
        }
        if let Some(extra) = self.owner.keys().find(|k| !layout.contains(k)) {
            return Err(Error::Argument(format!("assignment names unknown register {extra}")));
        }
        Ok(())
    }
}

/// Classical outcome of a Bell measurement, also used to name the
/// correction operator it calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeLabel {
    Sigma(SigmaIndex),
    Weyl(WeylLabel),
}

impl OutcomeLabel {
    pub fn dim(self) -> usize {
        match self {
            OutcomeLabel::Sigma(_) => 2,
            OutcomeLabel::Weyl(w) => w.dim(),
        }
    }

    pub fn operator(self) -> ComplexMatrix {
        match self {
            OutcomeLabel::Sigma(s) => pauli_sigma(s),
            OutcomeLabel::Weyl(w) => heisenberg_weyl(w),
        }
    }

    pub fn sigma(self) -> Option<SigmaIndex> {
        match self {
            OutcomeLabel::Sigma(s) => Some(s),
            OutcomeLabel::Weyl(_) => None,
        }
    }

    pub fn weyl(self) -> WeylLabel {
        match self {
            OutcomeLabel::Sigma(s) => s.weyl(),
            OutcomeLabel::Weyl(w) => w,
        }
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeLabel::Sigma(s) => write!(f, "{s}"),
            OutcomeLabel::Weyl(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: OutcomeLabel,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub post_state: Option<DensityOperator>,
}

/// The Bell basis used for `d`-dimensional register pairs, with labels.
///
/// Qubits use the σ-indexed basis `β_k` (Ψ⁻, Ψ⁺, Φ⁺, Φ⁻); larger `d` uses
/// the generalized Bell states in Weyl-label order.
pub fn bell_basis(d: usize) -> Result<Vec<(OutcomeLabel, ComplexMatrix)>> {
    if d == 2 {
        return Ok(SigmaIndex::ALL
            .iter()
            .map(|&k| {
                let v = sigma_bell_state(k);
                (OutcomeLabel::Sigma(k), ComplexMatrix::outer(v.amplitudes(), v.amplitudes()))
            })
            .collect());
    }
    Ok(WeylLabel::all(d)?
        .into_iter()
        .map(|w| {
            let v = generalized_bell_state(w);
            (OutcomeLabel::Weyl(w), ComplexMatrix::outer(v.amplitudes(), v.amplitudes()))
        })
        .collect())
}

/// Projective measurement of `registers` in the Bell basis; one branch per
/// basis element, in basis order.
pub fn bell_basis_measurement(
    state: &DensityOperator,
    registers: (&str, &str),
    d: usize,
) -> Result<Vec<MeasurementBranch>> {
    let (r1, r2) = registers;
    if r1 == r2 {
        return Err(Error::Argument(format!("Bell measurement needs two registers, got {r1} twice")));
    }
    for r in [r1, r2] {
        let dim = state.layout().dim_of(r)?;
        if dim != d {
            return Err(Error::Argument(format!("register {r} has dimension {dim}, expected {d}")));
        }
    }
    bell_basis(d)?
        .into_iter()
        .map(|(outcome, projector)| {
            let (probability, post_state) = state.project(&[r1, r2], &projector, ZERO_BRANCH_PROB)?;
            Ok(MeasurementBranch {
                outcome,
                probability,
                post_state,
            })
        })
        .collect()
}

/// `U ρ U†` with `U` the σ or Weyl operator named by `label`, on `register` only.
pub fn apply_correction(state: &DensityOperator, register: &str, label: OutcomeLabel) -> Result<DensityOperator> {
    let dim = state.layout().dim_of(register)?;
    if dim != label.dim() {
        return Err(Error::Argument(format!(
            "{label} acts on dimension {}, register {register} has dimension {dim}",
            label.dim()
        )));
    }
    state.apply_local(&[register], &label.operator())
}

/// Pick the branch a sampled uniform number `u ∈ [0,1)` falls into, by
/// cumulative probability. Used for seeded demonstration runs only.
pub fn sample_branch(transcripts: &[Transcript], u: f64) -> Option<&Transcript> {
    let mut acc = 0.0;
    let mut last = None;
    for t in transcripts.iter().filter(|t| t.probability > ZERO_BRANCH_PROB) {
        acc += t.probability;
        last = Some(t);
        if u < acc {
            return Some(t);
        }
    }
    last
}
