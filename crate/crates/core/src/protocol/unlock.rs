//! Two parties merge, Bell-measure their registers and broadcast the
//! outcome; one of the remaining two parties rotates its register so that
//! the remaining pair holds a fixed maximally entangled state.
//!
//! Qubits: outcome `σ_k` leaves the remaining pair in `β_k`, and `σ_k` on
//! either side maps it to Ψ⁻.
//!
//! Qudits: outcome `(a,b)` leaves the remaining pair in `B_{a,-b}`; the
//! first remaining register is corrected with `W(a,b)` or the second with
//! `W(-a,b)`, giving `Σₖ|kk⟩/√d`. Only merges that pair a register of the
//! AB copy with its partner position are supported (AB, CD, AC, BD). For
//! AD and BC the remaining pair is not left in a Bell state.

use crate::error::{Error, Result};
use crate::factory::{bell_state, canonical_max_entangled, BellKind, WeylLabel};
use crate::state::DensityOperator;

use super::{bell_basis_measurement, OutcomeLabel, PartyId, RegisterAssignment, Transcript, TranscriptEvent};

/// Unlock with the correction made by the alphabetically first remaining party.
pub fn unlock(
    state: &DensityOperator,
    merged: (&PartyId, &PartyId),
    assignment: &RegisterAssignment,
) -> Result<Vec<Transcript>> {
    unlock_with_corrector(state, merged, assignment, None)
}

pub fn unlock_with_corrector(
    state: &DensityOperator,
    merged: (&PartyId, &PartyId),
    assignment: &RegisterAssignment,
    corrector: Option<&PartyId>,
) -> Result<Vec<Transcript>> {
    let layout = state.layout();
    assignment.validate(layout)?;
    let (p, q) = merged;
    if p == q {
        return Err(Error::Argument(format!("merged pair names {p} twice")));
    }
    let parties = assignment.parties();
    for m in [p, q] {
        if !parties.contains(m) {
            return Err(Error::Argument(format!("unknown party {m}")));
        }
    }
    let single = |party: &PartyId| -> Result<&str> {
        match assignment.registers_of(layout, party).as_slice() {
            [r] => Ok(*r),
            regs => Err(Error::Argument(format!(
                "party {party} holds {} registers, unlocking needs exactly one",
                regs.len()
            ))),
        }
    };
    let remaining: Vec<&PartyId> = parties.iter().filter(|x| *x != p && *x != q).collect();
    if remaining.len() != 2 {
        return Err(Error::Argument(format!(
            "unlocking needs exactly two remaining parties, found {}",
            remaining.len()
        )));
    }
    let mut measured = [single(p)?, single(q)?];
    let mut targets = [single(remaining[0])?, single(remaining[1])?];
    measured.sort_by_key(|r| layout.position(r).unwrap_or(usize::MAX));
    targets.sort_by_key(|r| layout.position(r).unwrap_or(usize::MAX));

    let d = layout.dim_of(measured[0])?;
    for r in measured.iter().chain(&targets) {
        if layout.dim_of(r)? != d {
            return Err(Error::Argument("all four registers must share one local dimension".into()));
        }
    }
    if d > 2 {
        let mut pos = [layout.position(measured[0])?, layout.position(measured[1])?];
        pos.sort_unstable();
        if matches!(pos, [0, 3] | [1, 2]) {
            return Err(Error::Unsupported(format!(
                "qudit unlocking by the {}{} pair",
                measured[0], measured[1]
            )));
        }
    }

    let corrector = match corrector {
        Some(c) if remaining.contains(&c) => c.clone(),
        Some(c) => {
            return Err(Error::Argument(format!(
                "corrector {c} is not one of the remaining parties"
            )))
        }
        None => remaining[0].clone(),
    };
    let correct_register = single(&corrector)?;
    let corrects_first = correct_register == targets[0];

    let target_layout = layout.restrict(&[layout.position(targets[0])?, layout.position(targets[1])?])?;
    let target = if d == 2 {
        bell_state(BellKind::PsiMinus).relabel(target_layout)?
    } else {
        canonical_max_entangled(d)?.relabel(target_layout)?
    };

    let lab = format!("{p}+{q}");
    let receivers: Vec<String> = remaining.iter().map(|r| r.to_string()).collect();

    bell_basis_measurement(state, (measured[0], measured[1]), d)?
        .into_iter()
        .map(|branch| {
            let correction = correction_for(branch.outcome, corrects_first)?;
            let steps = vec![
                TranscriptEvent::Measurement {
                    party: lab.clone(),
                    registers: measured.iter().map(|r| r.to_string()).collect(),
                    outcome: branch.outcome,
                    probability: branch.probability,
                },
                TranscriptEvent::Message {
                    sender: lab.clone(),
                    receivers: receivers.clone(),
                    payload: branch.outcome.to_string(),
                },
                TranscriptEvent::Correction {
                    party: corrector.to_string(),
                    register: correct_register.to_owned(),
                    operator: correction,
                },
            ];
            let final_state = branch
                .post_state
                .map(|s| super::apply_correction(&s, correct_register, correction))
                .transpose()?;
            Transcript::finish(
                steps,
                branch.probability,
                final_state,
                targets.iter().map(|t| t.to_string()).collect(),
                target.clone(),
            )
        })
        .collect()
}

fn correction_for(outcome: OutcomeLabel, corrects_first: bool) -> Result<OutcomeLabel> {
    Ok(match outcome {
        OutcomeLabel::Sigma(k) => OutcomeLabel::Sigma(k),
        OutcomeLabel::Weyl(w) => {
            let (d, a, b) = (w.dim(), w.a() as i64, w.b() as i64);
            if corrects_first {
                OutcomeLabel::Weyl(WeylLabel::wrapping(d, a, b)?)
            } else {
                OutcomeLabel::Weyl(WeylLabel::wrapping(d, -a, b)?)
            }
        }
    })
}
