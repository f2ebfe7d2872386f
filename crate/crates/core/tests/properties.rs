use proptest::prelude::*;

use unlockable_core::analysis::negativity;
use unlockable_core::factory::{SigmaIndex, WeylLabel};
use unlockable_core::state::partial_transpose_matrix;
use unlockable_core::{
    frobenius_distance, hermitian_eigenvalues, pauli_sigma, Complex64, Cut, DensityOperator, PermutationMap,
    StateVector, SubsystemLayout,
};

fn four_qubits() -> SubsystemLayout {
    SubsystemLayout::qubits(&["A", "B", "C", "D"]).unwrap()
}

fn amplitudes(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Rank-≤3 mixed state on four qubits.
fn mixed_state() -> impl Strategy<Value = DensityOperator> {
    (prop::collection::vec(amplitudes(16), 1..=3), prop::collection::vec(0.05f64..1.0, 3)).prop_map(|(vs, ws)| {
        let states: Vec<StateVector> = vs
            .into_iter()
            .map(|v| StateVector::normalized(four_qubits(), v).unwrap())
            .collect();
        let total: f64 = ws[..states.len()].iter().sum();
        let terms: Vec<(f64, &StateVector)> = ws.iter().zip(&states).map(|(w, s)| (w / total, s)).collect();
        DensityOperator::mixture(&terms).unwrap()
    })
}

fn any_cut() -> impl Strategy<Value = Cut> {
    let l = four_qubits();
    let mut cuts = Cut::two_two_cuts(&l).unwrap();
    cuts.extend(Cut::one_three_cuts(&l).unwrap());
    prop::sample::select(cuts)
}

fn any_permutation() -> impl Strategy<Value = PermutationMap> {
    prop::sample::select(PermutationMap::all(&four_qubits()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_round_trip(rho in mixed_state(), p in any_permutation()) {
        let back = rho.permute_subsystems(&p).unwrap().permute_subsystems(&p.inverse()).unwrap();
        prop_assert!(back.distance(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn permutations_compose_like_maps(rho in mixed_state(), p in any_permutation(), q in any_permutation()) {
        let labels = four_qubits().labels().to_vec();
        let images: Vec<&str> = labels.iter().map(|l| q.image(p.image(l).unwrap()).unwrap()).collect();
        let pq = PermutationMap::from_images(&four_qubits(), &images).unwrap();
        let stepwise = rho.permute_subsystems(&p).unwrap().permute_subsystems(&q).unwrap();
        prop_assert!(stepwise.distance(&rho.permute_subsystems(&pq).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_trace_preserving_involution(rho in mixed_state(), cut in any_cut()) {
        let l = rho.layout();
        let pos = l.positions_of(&cut.right().iter().collect::<Vec<_>>()).unwrap();
        let once = partial_transpose_matrix(l, rho.matrix(), &pos);
        prop_assert!((once.trace() - rho.matrix().trace()).norm() < 1e-12);
        prop_assert!(once.is_hermitian(1e-12));
        let twice = partial_transpose_matrix(l, &once, &pos);
        prop_assert!(frobenius_distance(&twice, rho.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn transposing_either_side_gives_the_same_spectrum(rho in mixed_state(), cut in any_cut()) {
        let a = hermitian_eigenvalues(&rho.partial_transpose(&cut).unwrap()).unwrap();
        let b = hermitian_eigenvalues(&rho.partial_transpose(&cut.swapped()).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let na = negativity(&rho, &cut).unwrap();
        let nb = negativity(&rho, &cut.swapped()).unwrap();
        prop_assert!((na - nb).abs() < 1e-10);
    }

    #[test]
    fn eigenvalues_sum_to_trace(rho in mixed_state()) {
        let ev = rho.eigenvalues().unwrap();
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(rho.invariants().unwrap().holds(1e-10));
    }

    #[test]
    fn partial_trace_of_product(
        a in amplitudes(4),
        b in amplitudes(4),
    ) {
        let ab = StateVector::normalized(SubsystemLayout::qubits(&["A", "B"]).unwrap(), a).unwrap();
        let cd = StateVector::normalized(SubsystemLayout::qubits(&["C", "D"]).unwrap(), b).unwrap();
        let rho = ab.tensor(&cd).unwrap().projector();
        prop_assert!(rho.partial_trace(&["A", "B"]).unwrap().distance(&ab.projector()).unwrap() < 1e-12);
        prop_assert!(rho.partial_trace(&["C", "D"]).unwrap().distance(&cd.projector()).unwrap() < 1e-12);
        prop_assert!(rho.partial_trace::<&str>(&[]).is_err());
    }

    #[test]
    fn local_unitaries_keep_invariants(rho in mixed_state(), k in 0u8..4, reg in prop::sample::select(vec!["A", "B", "C", "D"])) {
        let u = pauli_sigma(SigmaIndex::new(k).unwrap());
        let out = rho.apply_local(&[reg], &u).unwrap();
        prop_assert!(out.invariants().unwrap().holds(1e-10));
        prop_assert!((out.purity() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn sigma_labels_compose_like_the_operators(a in 0u8..4, b in 0u8..4) {
        let (sa, sb) = (SigmaIndex::new(a).unwrap(), SigmaIndex::new(b).unwrap());
        let prod = &pauli_sigma(sa) * &pauli_sigma(sb);
        let target = pauli_sigma(sa.compose(sb));
        // equal up to a global phase: |tr(T† P)| = 2 for 2x2 unitaries
        let overlap = (&target.adjoint() * &prod).trace();
        prop_assert!((overlap.norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn weyl_operators_are_unitary(d in 2usize..=5, a in 0i64..5, b in 0i64..5) {
        let w = unlockable_core::heisenberg_weyl(WeylLabel::wrapping(d, a, b).unwrap());
        prop_assert!(w.is_unitary(1e-12));
    }
}
