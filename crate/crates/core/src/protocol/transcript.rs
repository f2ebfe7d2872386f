use std::fmt;

use crate::error::Result;
use crate::state::{DensityOperator, StateVector};

use super::OutcomeLabel;

#[derive(Debug, Clone, PartialEq)]
pub enum TranscriptEvent {
    Measurement {
        party: String,
        registers: Vec<String>,
        outcome: OutcomeLabel,
        /// Conditional on all earlier events of the branch.
        probability: f64,
    },
    Message {
        sender: String,
        receivers: Vec<String>,
        payload: String,
    },
    Correction {
        party: String,
        register: String,
        operator: OutcomeLabel,
    },
}

impl fmt::Display for TranscriptEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranscriptEvent::Measurement {
                party,
                registers,
                outcome,
                probability,
            } => write!(
                f,
                "{party} measures ({}) -> {outcome} [p={probability:.6}]",
                registers.join(",")
            ),
            TranscriptEvent::Message {
                sender,
                receivers,
                payload,
            } => write!(f, "{sender} -> {}: {payload}", receivers.join(",")),
            TranscriptEvent::Correction {
                party,
                register,
                operator,
            } => write!(f, "{party} applies {operator} on {register}"),
        }
    }
}

/// One fully enumerated branch of a protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub steps: Vec<TranscriptEvent>,
    /// Joint probability of the branch.
    pub probability: f64,
    /// Post-correction state; `None` for a zero-probability branch.
    pub final_state: Option<DensityOperator>,
    pub target_registers: Vec<String>,
    /// Pure state the target registers should hold, on a layout of exactly those registers.
    pub target: StateVector,
    pub certified_fidelity: Option<f64>,
}

impl Transcript {
    pub(crate) fn finish(
        steps: Vec<TranscriptEvent>,
        probability: f64,
        final_state: Option<DensityOperator>,
        target_registers: Vec<String>,
        target: StateVector,
    ) -> Result<Self> {
        let mut t = Self {
            steps,
            probability,
            final_state,
            target_registers,
            target,
            certified_fidelity: None,
        };
        t.certified_fidelity = t.recompute_fidelity().transpose()?;
        Ok(t)
    }

    /// Reduced final state on the target registers.
    pub fn target_state(&self) -> Option<Result<DensityOperator>> {
        self.final_state
            .as_ref()
            .map(|s| s.partial_trace(&self.target_registers))
    }

    pub fn recompute_fidelity(&self) -> Option<Result<f64>> {
        self.target_state()
            .map(|r| r.and_then(|reduced| reduced.fidelity_pure(&self.target)))
    }

    pub fn outcomes(&self) -> Vec<OutcomeLabel> {
        self.steps
            .iter()
            .filter_map(|e| match e {
                TranscriptEvent::Measurement { outcome, .. } => Some(*outcome),
                _ => None,
            })
            .collect()
    }

    pub fn is_null(&self) -> bool {
        self.final_state.is_none()
    }

    /// Every correction is preceded by a message to the correcting party.
    pub fn is_causally_ordered(&self) -> bool {
        self.steps.iter().enumerate().all(|(k, e)| match e {
            TranscriptEvent::Correction { party, .. } => self.steps[..k].iter().any(|prev| {
                matches!(prev, TranscriptEvent::Message { receivers, .. } if receivers.contains(party))
            }),
            _ => true,
        })
    }
}
