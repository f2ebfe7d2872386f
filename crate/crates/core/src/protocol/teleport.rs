//! The teleportation reading of unlocking by the B+D pair.
//!
//! A and B' share Ψ⁻ and C and D' share Ψ⁻; the same σᵢ is applied to B'
//! and to D'. Since `(σᵢ ⊗ σᵢ)` maps every Bell state to itself up to phase,
//! a Bell measurement on (B', D') is unaffected by the two rotations, and
//! the run is plain teleportation of B' to C with a `σⱼ` correction at C.

use crate::error::{Error, Result};
use crate::factory::{bell_state, pauli_sigma, smolin_state, BellKind, SigmaIndex};
use crate::layout::SubsystemLayout;
use crate::state::{DensityOperator, StateVector};

use super::{
    apply_correction, bell_basis_measurement, unlock_with_corrector, PartyId, RegisterAssignment,
    Transcript, TranscriptEvent,
};

pub const SENDER: &str = "B'";
pub const RECEIVER: &str = "C";
pub const RESOURCE_HALF: &str = "D'";

/// Teleport `input` from B' to C through a σ-rotated singlet.
///
/// B' holds `σ_r|input⟩` and the resource is `(I_C ⊗ σ_r)|Ψ⁻⟩` on (C, D').
/// B and D Bell-measure (B', D'), send the outcome `j` to C, and C applies
/// `σⱼ`. Every branch should leave C holding `input`.
pub fn teleport_view(input: &StateVector, resource: SigmaIndex) -> Result<Vec<Transcript>> {
    if input.layout().dims() != [2] {
        return Err(Error::Argument(format!(
            "teleport input must be a single qubit, got layout {}",
            input.layout()
        )));
    }
    let sigma = pauli_sigma(resource);
    let sender_layout = SubsystemLayout::qubits(&[SENDER])?;
    let rotated_input = input.relabel(sender_layout)?.apply_local(&[SENDER], &sigma)?;
    let pair = bell_state(BellKind::PsiMinus)
        .relabel(SubsystemLayout::qubits(&[RECEIVER, RESOURCE_HALF])?)?
        .apply_local(&[RESOURCE_HALF], &sigma)?;
    let initial = rotated_input.tensor(&pair)?.projector();
    let target = input.relabel(SubsystemLayout::qubits(&[RECEIVER])?)?;
    measure_and_correct(&initial, target, vec![RECEIVER.to_owned()])
}

/// (B', D') Bell measurement by the merged B+D lab, then `σⱼ` at C.
fn measure_and_correct(
    initial: &DensityOperator,
    target: StateVector,
    target_registers: Vec<String>,
) -> Result<Vec<Transcript>> {
    let lab = "B+D".to_owned();
    let receivers: Vec<String> = initial
        .layout()
        .labels()
        .iter()
        .filter(|l| *l != SENDER && *l != RESOURCE_HALF)
        .cloned()
        .collect();
    bell_basis_measurement(initial, (SENDER, RESOURCE_HALF), 2)?
        .into_iter()
        .map(|branch| {
            let steps = vec![
                TranscriptEvent::Measurement {
                    party: lab.clone(),
                    registers: vec![SENDER.into(), RESOURCE_HALF.into()],
                    outcome: branch.outcome,
                    probability: branch.probability,
                },
                TranscriptEvent::Message {
                    sender: lab.clone(),
                    receivers: receivers.clone(),
                    payload: branch.outcome.to_string(),
                },
                TranscriptEvent::Correction {
                    party: RECEIVER.into(),
                    register: RECEIVER.into(),
                    operator: branch.outcome,
                },
            ];
            let final_state = branch
                .post_state
                .map(|s| apply_correction(&s, RECEIVER, branch.outcome))
                .transpose()?;
            Transcript::finish(steps, branch.probability, final_state, target_registers.clone(), target.clone())
        })
        .collect()
}

/// The four-qubit state of the teleportation picture for label `i`:
/// `(I⊗σᵢ)|Ψ⁻⟩^{AB'} ⊗ (I⊗σᵢ)|Ψ⁻⟩^{CD'}`.
pub fn rotated_singlet_pairs(i: SigmaIndex) -> Result<StateVector> {
    let sigma = pauli_sigma(i);
    let singlet = bell_state(BellKind::PsiMinus);
    let ab = singlet
        .relabel(SubsystemLayout::qubits(&["A", SENDER])?)?
        .apply_local(&[SENDER], &sigma)?;
    let cd = singlet
        .relabel(SubsystemLayout::qubits(&[RECEIVER, RESOURCE_HALF])?)?
        .apply_local(&[RESOURCE_HALF], &sigma)?;
    ab.tensor(&cd)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelComparison {
    pub label: SigmaIndex,
    /// Largest |p_teleport(j) - p_unlock(j)| over outcomes j.
    pub max_probability_gap: f64,
    /// Largest Frobenius distance between the corrected A–C states.
    pub max_state_gap: f64,
    pub teleport_probabilities: Vec<f64>,
    pub min_teleport_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub comparisons: Vec<LabelComparison>,
    pub unlock_probabilities: Vec<f64>,
    pub min_unlock_fidelity: f64,
    /// Distance between the uniform mixture of the teleportation-picture
    /// states (B' read as B, D' as D) and the four-party state.
    pub mixture_distance: f64,
    pub tolerance: f64,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        let tol = self.tolerance;
        self.mixture_distance <= tol
            && (1.0 - self.min_unlock_fidelity).abs() <= tol
            && self.comparisons.iter().all(|c| {
                c.max_probability_gap <= tol && c.max_state_gap <= tol && (1.0 - c.min_teleport_fidelity).abs() <= tol
            })
    }
}

fn corrected_ac(t: &Transcript) -> Result<DensityOperator> {
    t.target_state()
        .ok_or_else(|| Error::Invariant("unexpected zero-probability branch".into()))?
}

/// Compare unlocking by B+D (correction at C) on the four-party state with
/// the teleportation picture, for every σ label.
pub fn equivalence_report(tol: f64) -> Result<EquivalenceReport> {
    let rho = smolin_state();
    let assignment = RegisterAssignment::one_per_register(rho.layout());
    let unlocked = unlock_with_corrector(
        &rho,
        (&PartyId::new("B"), &PartyId::new("D")),
        &assignment,
        Some(&PartyId::new(RECEIVER)),
    )?;
    let unlock_probabilities: Vec<f64> = unlocked.iter().map(|t| t.probability).collect();
    let unlock_states = unlocked.iter().map(corrected_ac).collect::<Result<Vec<_>>>()?;
    let min_unlock_fidelity = unlocked
        .iter()
        .map(|t| t.certified_fidelity.unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min);

    let singlet_ac = bell_state(BellKind::PsiMinus).relabel(SubsystemLayout::qubits(&["A", RECEIVER])?)?;
    let smolin_layout = rho.layout().clone();
    let mut mixture: Vec<StateVector> = Vec::new();
    let mut comparisons = Vec::new();
    for i in SigmaIndex::ALL {
        let pure = rotated_singlet_pairs(i)?;
        // A, B', C, D' in that order is the A, B, C, D layout position by position
        mixture.push(pure.relabel(smolin_layout.clone())?);
        let runs = measure_and_correct(&pure.projector(), singlet_ac.clone(), vec!["A".into(), RECEIVER.into()])?;
        let mut max_probability_gap: f64 = 0.0;
        let mut max_state_gap: f64 = 0.0;
        for (run, (u, u_state)) in runs.iter().zip(unlocked.iter().zip(&unlock_states)) {
            debug_assert_eq!(run.outcomes(), u.outcomes());
            max_probability_gap = max_probability_gap.max((run.probability - u.probability).abs());
            max_state_gap = max_state_gap.max(corrected_ac(run)?.distance(u_state)?);
        }
        comparisons.push(LabelComparison {
            label: i,
            max_probability_gap,
            max_state_gap,
            teleport_probabilities: runs.iter().map(|t| t.probability).collect(),
            min_teleport_fidelity: runs
                .iter()
                .map(|t| t.certified_fidelity.unwrap_or(0.0))
                .fold(f64::INFINITY, f64::min),
        });
    }
    let weighted: Vec<(f64, &StateVector)> = mixture.iter().map(|s| (0.25, s)).collect();
    let mixture_distance = DensityOperator::mixture(&weighted)?.distance(&rho)?;
    Ok(EquivalenceReport {
        comparisons,
        unlock_probabilities,
        min_unlock_fidelity,
        mixture_distance,
        tolerance: tol,
    })
}

/// True iff outcome distributions and corrected A–C states of the two
/// pictures agree within `1e-10` for every σ label.
pub fn equivalence_check() -> bool {
    equivalence_report(1e-10).is_ok_and(|r| r.passed())
}
