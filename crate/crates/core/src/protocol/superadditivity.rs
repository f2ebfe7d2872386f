//! Two copies of the four-party state, `ρ^{A₁B₁C₁D} ⊗ ρ^{A₂B₂C₂E}`, with A,
//! B and C each holding one register of each copy. A, B and C Bell-measure
//! their own register pairs and broadcast the outcomes; E rotates its
//! register so that D and E share Ψ⁻.
//!
//! Bell measurement of halves of `β_i` and `β_j` leaves the partner halves
//! in `β_{i∘j∘k}` for outcome `k` (Klein four-group composition of σ
//! labels). A's and B's outcomes together fix `i∘j`, C's measurement swaps
//! `β_{i∘j∘k_C}` onto (D, E), and E applies `σ_{k_A∘k_B∘k_C}`.

use crate::error::Result;
use crate::factory::{bell_state, smolin_state, BellKind, SigmaIndex};
use crate::layout::SubsystemLayout;
use crate::state::DensityOperator;

use super::{
    apply_correction, bell_basis_measurement, OutcomeLabel, RegisterAssignment, Transcript, TranscriptEvent,
    ZERO_BRANCH_PROB,
};

pub const COPY_ONE: [&str; 4] = ["A1", "B1", "C1", "D"];
pub const COPY_TWO: [&str; 4] = ["A2", "B2", "C2", "E"];

/// Which measuring parties' messages E uses for its correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageSet {
    All,
    WithoutA,
    WithoutB,
    WithoutC,
}

impl MessageSet {
    pub const ABLATIONS: [MessageSet; 3] = [MessageSet::WithoutA, MessageSet::WithoutB, MessageSet::WithoutC];

    fn uses(self, party: &str) -> bool {
        !matches!(
            (self, party),
            (MessageSet::WithoutA, "A") | (MessageSet::WithoutB, "B") | (MessageSet::WithoutC, "C")
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            MessageSet::All => "all",
            MessageSet::WithoutA => "without-A",
            MessageSet::WithoutB => "without-B",
            MessageSet::WithoutC => "without-C",
        }
    }
}

pub fn superadditivity_layout() -> SubsystemLayout {
    let labels: Vec<&str> = COPY_ONE.iter().chain(&COPY_TWO).copied().collect();
    SubsystemLayout::qubits(&labels).expect("static layout")
}

/// The 8-qubit, 256-dimensional two-copy state.
pub fn superadditivity_state() -> Result<DensityOperator> {
    let one = smolin_state().relabel(SubsystemLayout::qubits(&COPY_ONE)?)?;
    let two = smolin_state().relabel(SubsystemLayout::qubits(&COPY_TWO)?)?;
    one.tensor(&two)
}

pub fn superadditivity_assignment() -> RegisterAssignment {
    RegisterAssignment::from_pairs(&[
        ("A1", "A"),
        ("A2", "A"),
        ("B1", "B"),
        ("B2", "B"),
        ("C1", "C"),
        ("C2", "C"),
        ("D", "D"),
        ("E", "E"),
    ])
}

const MEASUREMENTS: [(&str, &str, &str); 3] = [("A", "A1", "A2"), ("B", "B1", "B2"), ("C", "C1", "C2")];

struct Partial {
    steps: Vec<TranscriptEvent>,
    outcomes: Vec<SigmaIndex>,
    probability: f64,
    state: Option<DensityOperator>,
}

pub fn superadditivity_protocol() -> Result<Vec<Transcript>> {
    superadditivity_with(MessageSet::All)
}

/// Run the protocol with E's correction built from `messages` only; 64
/// branches in (k_A, k_B, k_C) order.
pub fn superadditivity_with(messages: MessageSet) -> Result<Vec<Transcript>> {
    let initial = superadditivity_state()?;
    let assignment = superadditivity_assignment();
    assignment.validate(initial.layout())?;

    let mut frontier = vec![Partial {
        steps: Vec::new(),
        outcomes: Vec::new(),
        probability: 1.0,
        state: Some(initial),
    }];
    for (party, r1, r2) in MEASUREMENTS {
        let mut next = Vec::with_capacity(frontier.len() * 4);
        for node in frontier {
            let branches: Vec<(SigmaIndex, f64, Option<DensityOperator>)> = match &node.state {
                Some(s) => bell_basis_measurement(s, (r1, r2), 2)?
                    .into_iter()
                    .map(|b| (b.outcome.sigma().expect("qubit outcome"), b.probability, b.post_state))
                    .collect(),
                None => SigmaIndex::ALL.iter().map(|&k| (k, 0.0, None)).collect(),
            };
            for (k, p, post) in branches {
                let mut steps = node.steps.clone();
                steps.push(TranscriptEvent::Measurement {
                    party: party.into(),
                    registers: vec![r1.into(), r2.into()],
                    outcome: OutcomeLabel::Sigma(k),
                    probability: p,
                });
                if messages.uses(party) {
                    steps.push(TranscriptEvent::Message {
                        sender: party.into(),
                        receivers: vec!["D".into(), "E".into()],
                        payload: k.to_string(),
                    });
                }
                let mut outcomes = node.outcomes.clone();
                outcomes.push(k);
                let probability = node.probability * p;
                next.push(Partial {
                    steps,
                    outcomes,
                    probability,
                    state: post.filter(|_| probability > ZERO_BRANCH_PROB),
                });
            }
        }
        frontier = next;
    }

    let target = bell_state(BellKind::PsiMinus).relabel(SubsystemLayout::qubits(&["D", "E"])?)?;
    frontier
        .into_iter()
        .map(|node| {
            let correction = MEASUREMENTS
                .iter()
                .zip(&node.outcomes)
                .filter(|((party, _, _), _)| messages.uses(party))
                .fold(SigmaIndex::ALL[0], |acc, (_, &k)| acc.compose(k));
            let mut steps = node.steps;
            steps.push(TranscriptEvent::Correction {
                party: "E".into(),
                register: "E".into(),
                operator: OutcomeLabel::Sigma(correction),
            });
            let final_state = node
                .state
                .map(|s| apply_correction(&s, "E", OutcomeLabel::Sigma(correction)))
                .transpose()?;
            Transcript::finish(
                steps,
                node.probability,
                final_state,
                vec!["D".into(), "E".into()],
                target.clone(),
            )
        })
        .collect()
}

/// Probability-weighted fidelity over branches.
pub fn mean_fidelity(transcripts: &[Transcript]) -> f64 {
    transcripts
        .iter()
        .filter_map(|t| t.certified_fidelity.map(|f| f * t.probability))
        .sum()
}
