//! Evidence for the separability structure of the unlockable state: partial
//! transpose spectra per cut, negativity, permutation symmetry, the
//! bitstring-expansion comparison, and explicit separable ensembles for the
//! three 2:2 cuts.
//!
//! A PPT result is a necessary condition for separability only. Separability
//! is claimed solely for cuts with an explicit ensemble that reconstructs
//! the state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factory::{bell_state, smolin_state, BellKind, SMOLIN_LABELS};
use crate::layout::{Cut, PermutationMap, SubsystemLayout};
use crate::matrix::hermitian_eigenvalues;
use crate::state::{DensityOperator, StateVector};

/// Eigenvalues at or above `-PPT_TOL` count as nonnegative.
pub const PPT_TOL: f64 = 1e-10;

/// Largest allowed Frobenius error for an ensemble reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PptReport {
    pub cut: Cut,
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub tolerance: f64,
}

impl PptReport {
    pub fn negativity(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&x| x < 0.0)
            .map(|x| -x)
            .sum()
    }
}

pub fn ppt_check(state: &DensityOperator, cut: &Cut, tol: f64) -> Result<PptReport> {
    let pt = state.partial_transpose(cut)?;
    let eigenvalues = hermitian_eigenvalues(&pt)?;
    let min_eigenvalue = eigenvalues.last().copied().unwrap_or(0.0);
    Ok(PptReport {
        cut: cut.clone(),
        min_eigenvalue,
        is_ppt: min_eigenvalue >= -tol,
        eigenvalues,
        tolerance: tol,
    })
}

/// Sum of |negative eigenvalues| of the partial transpose across `cut`.
///
/// Eigenvalues within [`PPT_TOL`] of zero are treated as zero so that a PPT
/// state reports exactly `0`.
pub fn negativity(state: &DensityOperator, cut: &Cut) -> Result<f64> {
    let report = ppt_check(state, cut, PPT_TOL)?;
    Ok(report
        .eigenvalues
        .iter()
        .filter(|&&x| x < -PPT_TOL)
        .map(|x| -x)
        .sum())
}

pub fn permutation_invariant(state: &DensityOperator, perm: &PermutationMap, tol: f64) -> Result<bool> {
    let image = state.permute_subsystems(perm)?;
    Ok(state.distance(&image)? <= tol)
}

/// Every permutation of the layout with its distance from the original.
pub fn symmetry_orbit(state: &DensityOperator) -> Result<Vec<(PermutationMap, f64)>> {
    PermutationMap::all(state.layout())
        .into_iter()
        .map(|p| {
            let d = state.distance(&state.permute_subsystems(&p)?)?;
            Ok((p, d))
        })
        .collect()
}

/// A signed bitstring term `±|b_A b_B b_C b_D⟩`.
type Term = (i8, [u8; 4]);

/// The four unnormalized Bell⊗Bell vectors written out as bitstrings, with
/// AB and CD paired.
pub const PAIRED_AB_CD: [[Term; 4]; 4] = [
    [(1, [0, 0, 0, 0]), (1, [0, 0, 1, 1]), (1, [1, 1, 0, 0]), (1, [1, 1, 1, 1])],
    [(1, [0, 0, 0, 0]), (-1, [0, 0, 1, 1]), (-1, [1, 1, 0, 0]), (1, [1, 1, 1, 1])],
    [(1, [0, 1, 0, 1]), (1, [0, 1, 1, 0]), (1, [1, 0, 0, 1]), (1, [1, 0, 1, 0])],
    [(1, [0, 1, 0, 1]), (-1, [0, 1, 1, 0]), (-1, [1, 0, 0, 1]), (1, [1, 0, 1, 0])],
];

/// The same vectors with the B and C indices interchanged, so AC and BD pair.
pub const PAIRED_AC_BD: [[Term; 4]; 4] = [
    [(1, [0, 0, 0, 0]), (1, [0, 1, 0, 1]), (1, [1, 0, 1, 0]), (1, [1, 1, 1, 1])],
    [(1, [0, 0, 0, 0]), (-1, [0, 1, 0, 1]), (-1, [1, 0, 1, 0]), (1, [1, 1, 1, 1])],
    [(1, [0, 0, 1, 1]), (1, [0, 1, 1, 0]), (1, [1, 0, 0, 1]), (1, [1, 1, 0, 0])],
    [(1, [0, 0, 1, 1]), (-1, [0, 1, 1, 0]), (-1, [1, 0, 0, 1]), (1, [1, 1, 0, 0])],
];

fn abcd() -> SubsystemLayout {
    SubsystemLayout::qubits(&SMOLIN_LABELS).expect("static layout")
}

/// Builds the vector for a list of signed bitstrings with the `1/2` prefactor.
pub fn expanded_vector(terms: &[Term; 4]) -> Result<StateVector> {
    let layout = abcd();
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for &(sign, bits) in terms {
        amps[layout.index_of_digits(&bits.map(usize::from))] += Complex64::new(0.5 * f64::from(sign), 0.0);
    }
    StateVector::new(layout, amps)
}

/// Uniform mixture of the projectors onto the given expanded vectors.
pub fn expanded_mixture(vectors: &[[Term; 4]; 4]) -> Result<DensityOperator> {
    let states = vectors.iter().map(expanded_vector).collect::<Result<Vec<_>>>()?;
    let weighted: Vec<(f64, &StateVector)> = states.iter().map(|s| (0.25, s)).collect();
    DensityOperator::mixture(&weighted)
}

/// Distance between the AB|CD-paired and AC|BD-paired mixtures.
pub fn expansion_distance() -> Result<f64> {
    expanded_mixture(&PAIRED_AB_CD)?.distance(&expanded_mixture(&PAIRED_AC_BD)?)
}

/// True iff the two bitstring mixtures agree within [`RECONSTRUCTION_TOL`]:
/// the sign-carrying cross terms cancel and the surviving terms coincide.
pub fn expansion_equality_check() -> bool {
    expansion_distance().is_ok_and(|d| d <= RECONSTRUCTION_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleTerm {
    pub weight: f64,
    pub left: StateVector,
    pub right: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableEnsemble {
    pub cut: Cut,
    pub terms: Vec<EnsembleTerm>,
}

impl SeparableEnsemble {
    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// Mixture of `|left⟩⟨left| ⊗ |right⟩⟨right|`, mapped back into `layout` order.
    pub fn reconstruct(&self, layout: &SubsystemLayout) -> Result<DensityOperator> {
        let n = layout.total_dim();
        let mut acc = crate::matrix::ComplexMatrix::zeros(n, n);
        for t in &self.terms {
            let joint = t.left.tensor(&t.right)?;
            let ordered = reorder_vector(&joint, layout)?;
            let proj = ordered.projector();
            acc = &acc + &proj.matrix().scale(Complex64::new(t.weight, 0.0));
        }
        DensityOperator::new(layout.clone(), acc)
    }

    pub fn reconstruction_error(&self, target: &DensityOperator) -> Result<f64> {
        self.reconstruct(target.layout())?.distance(target)
    }
}

/// Move amplitudes of `v` (whose layout is some ordering of `target`'s labels)
/// into `target` order.
fn reorder_vector(v: &StateVector, target: &SubsystemLayout) -> Result<StateVector> {
    let src = v.layout();
    if src.len() != target.len() {
        return Err(Error::Layout("ensemble term does not cover the layout".into()));
    }
    let map = src
        .labels()
        .iter()
        .map(|l| target.position(l))
        .collect::<Result<Vec<_>>>()?;
    let mut amps = vec![Complex64::new(0.0, 0.0); target.total_dim()];
    for (idx, &a) in v.amplitudes().iter().enumerate() {
        let digits = src.digits(idx);
        let mut out = vec![0; target.len()];
        for (k, &p) in map.iter().enumerate() {
            out[p] = digits[k];
        }
        amps[target.index_of_digits(&out)] = a;
    }
    StateVector::new(target.clone(), amps)
}

/// Explicit product ensemble of the four-party state across AB:CD, AC:BD or AD:BC.
///
/// AB:CD is the defining mixture. The other two are its images under the
/// B↔C and B↔D relabelings, which leave the state unchanged.
pub fn separable_ensemble_for_cut(cut: &Cut) -> Result<SeparableEnsemble> {
    let layout = abcd();
    cut.validate(&layout)?;
    let cuts = Cut::two_two_cuts(&layout)?;
    // partner of A on the left side of each supported cut
    let partner = cuts
        .iter()
        .position(|c| c == cut || c.swapped() == *cut)
        .map(|k| ["B", "C", "D"][k])
        .ok_or_else(|| Error::Unsupported(format!("no separable ensemble is claimed for cut {cut}")))?;
    let (rest_1, rest_2) = match partner {
        "B" => ("C", "D"),
        "C" => ("B", "D"),
        _ => ("B", "C"),
    };
    let left_layout = SubsystemLayout::qubits(&["A", partner])?;
    let right_layout = SubsystemLayout::qubits(&[rest_1, rest_2])?;
    let terms = BellKind::ALL
        .iter()
        .map(|&k| {
            let b = bell_state(k);
            Ok(EnsembleTerm {
                weight: 0.25,
                left: b.relabel(left_layout.clone())?,
                right: b.relabel(right_layout.clone())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ensemble = SeparableEnsemble {
        cut: Cut::new(&layout, &["A", partner], &[rest_1, rest_2])?,
        terms,
    };
    if *cut != ensemble.cut {
        // requested with sides swapped: present the terms the same way round
        return Ok(SeparableEnsemble {
            cut: cut.clone(),
            terms: ensemble
                .terms
                .into_iter()
                .map(|t| EnsembleTerm {
                    weight: t.weight,
                    left: t.right,
                    right: t.left,
                })
                .collect(),
        });
    }
    Ok(ensemble)
}

/// Reconstruction error of [`separable_ensemble_for_cut`] against the state.
pub fn ensemble_reconstruction_error(cut: &Cut) -> Result<f64> {
    separable_ensemble_for_cut(cut)?.reconstruction_error(&smolin_state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::smolin_state;

    fn rho_layout() -> SubsystemLayout {
        abcd()
    }

    #[test]
    fn smolin_ppt_across_ab_cd() {
        let rho = smolin_state();
        let r = ppt_check(&rho, &Cut::parse(&rho_layout(), "AB:CD").unwrap(), PPT_TOL).unwrap();
        assert!(r.is_ppt);
        assert_eq!(r.eigenvalues.len(), 16);
    }

    #[test]
    fn smolin_npt_across_a_bcd() {
        let rho = smolin_state();
        let r = ppt_check(&rho, &Cut::parse(&rho_layout(), "A:BCD").unwrap(), PPT_TOL).unwrap();
        assert!(!r.is_ppt);
        assert!(r.min_eigenvalue < -1e-6);
    }

    #[test]
    fn bell_pair_npt() {
        let rho = bell_state(BellKind::PhiPlus).projector();
        let cut = Cut::parse(rho.layout(), "A:B").unwrap();
        let r = ppt_check(&rho, &cut, PPT_TOL).unwrap();
        assert!(!r.is_ppt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!((negativity(&rho, &cut).unwrap() - 0.5).abs() < 1e-12);
        assert!((r.negativity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let l = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let rho = StateVector::normalized(
            l.clone(),
            vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap()
        .projector();
        assert_eq!(negativity(&rho, &Cut::parse(&l, "A:B").unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn invalid_cut_is_rejected() {
        let rho = bell_state(BellKind::PhiPlus).projector();
        let other = abcd();
        let cut = Cut::parse(&other, "AB:CD").unwrap();
        assert!(ppt_check(&rho, &cut, PPT_TOL).is_err());
        assert!(negativity(&rho, &cut).is_err());
    }

    #[test]
    fn negativity_symmetric_under_side_swap() {
        let rho = smolin_state();
        for cut in Cut::one_three_cuts(rho.layout()).unwrap() {
            let a = negativity(&rho, &cut).unwrap();
            let b = negativity(&rho, &cut.swapped()).unwrap();
            assert!(a > 0.0);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn invariance_examples() {
        let rho = smolin_state();
        let l = rho_layout();
        assert!(permutation_invariant(&rho, &PermutationMap::swap(&l, "B", "C").unwrap(), 1e-12).unwrap());
        assert!(permutation_invariant(&rho, &PermutationMap::swap(&l, "B", "D").unwrap(), 1e-12).unwrap());
        let ab = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let basis = StateVector::basis(ab.clone(), 1).unwrap().projector();
        assert!(!permutation_invariant(&basis, &PermutationMap::swap(&ab, "A", "B").unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn full_symmetry_orbit_of_smolin_state() {
        let orbit = symmetry_orbit(&smolin_state()).unwrap();
        assert_eq!(orbit.len(), 24);
        assert!(orbit.iter().all(|(_, d)| *d <= 1e-12));
    }

    #[test]
    fn expansion_vectors_are_normalized_and_match_state() {
        for set in [&PAIRED_AB_CD, &PAIRED_AC_BD] {
            for v in set {
                let s = expanded_vector(v).unwrap();
                let norm: f64 = s.amplitudes().iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-15);
            }
        }
        let m = expanded_mixture(&PAIRED_AB_CD).unwrap();
        assert!(m.distance(&smolin_state()).unwrap() < 1e-15);
        assert!(expansion_equality_check());
    }

    #[test]
    fn expanded_vectors_match_bell_products() {
        let order = [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];
        for (k, kind) in order.iter().enumerate() {
            let b = bell_state(*kind);
            let prod = b.tensor(&b.relabel(SubsystemLayout::qubits(&["C", "D"]).unwrap()).unwrap()).unwrap();
            let e = expanded_vector(&PAIRED_AB_CD[k]).unwrap();
            assert!((prod.inner(&e).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ensembles_for_supported_cuts() {
        let l = rho_layout();
        for text in ["AB:CD", "AC:BD", "AD:BC", "CD:AB"] {
            let cut = Cut::parse(&l, text).unwrap();
            let e = separable_ensemble_for_cut(&cut).unwrap();
            assert_eq!(e.terms.len(), 4);
            assert!(e.terms.iter().all(|t| t.weight == 0.25));
            assert!((e.weight_sum() - 1.0).abs() < 1e-15);
            assert_eq!(e.cut, cut);
            assert!(e.reconstruction_error(&smolin_state()).unwrap() <= RECONSTRUCTION_TOL, "{text}");
        }
    }

    #[test]
    fn ensemble_for_unsupported_cut() {
        let l = rho_layout();
        let cut = Cut::parse(&l, "A:BCD").unwrap();
        assert!(matches!(separable_ensemble_for_cut(&cut), Err(Error::Unsupported(_))));
    }
}
