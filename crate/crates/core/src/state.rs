//! Pure and mixed states over a [`SubsystemLayout`], and the subsystem-wise
//! operations on them: permutation, partial trace, partial transpose, local
//! operators and pure-target fidelity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::{Cut, PermutationMap, SubsystemLayout};
use crate::matrix::{frobenius_distance, hermitian_eigenvalues, kron, kron_vec, ComplexMatrix, C0};

/// Default absolute tolerance for state invariants and equality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SubsystemLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Amplitudes must already be normalized within [`DEFAULT_TOL`].
    pub fn new(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::Argument(format!(
                "{} amplitudes for a layout of dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Invariant(format!("squared norm is {norm}, expected 1")));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Normalizes the given amplitudes.
    pub fn normalized(layout: SubsystemLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Argument("zero vector cannot be normalized".into()));
        }
        Self::new(layout, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub fn basis(layout: SubsystemLayout, index: usize) -> Result<Self> {
        let mut amps = vec![C0; layout.total_dim()];
        *amps
            .get_mut(index)
            .ok_or_else(|| Error::Argument(format!("basis index {index} out of range")))? =
            Complex64::new(1.0, 0.0);
        Self::new(layout, amps)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self {
            layout,
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        })
    }

    /// Same amplitudes under new subsystem names/dimensions of equal total size.
    pub fn relabel(&self, layout: SubsystemLayout) -> Result<StateVector> {
        Self::new(layout, self.amplitudes.clone())
    }

    /// Apply `op` to the listed subsystems (in the listed order).
    pub fn apply_local(&self, labels: &[&str], op: &ComplexMatrix) -> Result<StateVector> {
        let plan = LocalPlan::new(&self.layout, labels, op)?;
        let mut out = vec![C0; self.amplitudes.len()];
        for &base in &plan.bases {
            for (t, &ot) in plan.offsets.iter().enumerate() {
                out[base + ot] = plan
                    .offsets
                    .iter()
                    .enumerate()
                    .map(|(s, &os)| op[(t, s)] * self.amplitudes[base + os])
                    .sum();
            }
        }
        Self::normalized(self.layout.clone(), out)
    }

    pub fn projector(&self) -> DensityOperator {
        DensityOperator {
            layout: self.layout.clone(),
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }
}

/// Result of checking the density-operator invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    pub hermitian_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

impl InvariantReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.hermitian_deviation <= tol && self.trace_deviation <= tol && self.min_eigenvalue >= -tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: SubsystemLayout,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Checks Hermiticity, unit trace and positivity at [`DEFAULT_TOL`].
    pub fn new(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::from_parts(layout, matrix)?;
        let report = rho.invariants()?;
        if !report.holds(DEFAULT_TOL) {
            return Err(Error::Invariant(format!("not a density operator: {report:?}")));
        }
        Ok(rho)
    }

    /// Shape check only. Callers own the physical invariants.
    pub(crate) fn from_parts(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Argument(format!(
                "{}x{} matrix for a layout of dimension {n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { layout, matrix })
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let n = layout.total_dim();
        Self {
            layout,
            matrix: ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)),
        }
    }

    /// Weighted mixture of pure states; weights are renormalized.
    pub fn mixture(terms: &[(f64, &StateVector)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::Argument("empty mixture".into()))?;
        let layout = first.layout().clone();
        let total: f64 = terms.iter().map(|(w, _)| *w).sum();
        if terms.iter().any(|(w, _)| *w < 0.0) || total <= 0.0 {
            return Err(Error::Argument("mixture weights must be nonnegative with positive sum".into()));
        }
        let n = layout.total_dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (w, psi) in terms {
            if psi.layout() != &layout {
                return Err(Error::Layout("mixture terms have different layouts".into()));
            }
            let amps = psi.amplitudes();
            let s = w / total;
            for i in 0..n {
                if amps[i] == C0 {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += amps[i] * amps[j].conj() * s;
                }
            }
        }
        Ok(Self { layout, matrix: m })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn invariants(&self) -> Result<InvariantReport> {
        let eig = hermitian_eigenvalues(&self.matrix)?;
        let tr = self.matrix.trace();
        Ok(InvariantReport {
            hermitian_deviation: self.matrix.hermitian_deviation(),
            trace_deviation: (tr - Complex64::new(1.0, 0.0)).norm(),
            min_eigenvalue: eig.last().copied().unwrap_or(0.0),
        })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.frobenius_norm().powi(2)
    }

    pub fn distance(&self, other: &DensityOperator) -> Result<f64> {
        frobenius_distance(&self.matrix, &other.matrix)
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: kron(&self.matrix, &other.matrix)?,
        })
    }

    /// Same matrix under different subsystem names/dimensions of equal total size.
    pub fn relabel(&self, layout: SubsystemLayout) -> Result<DensityOperator> {
        Self::from_parts(layout, self.matrix.clone())
    }

    /// `P ρ P†` with `P` moving subsystem `x` to `perm(x)`.
    pub fn permute_subsystems(&self, perm: &PermutationMap) -> Result<DensityOperator> {
        let targets = perm.position_map(&self.layout)?;
        let dims = self.layout.dims();
        let strides = self.layout.strides();
        let n = self.layout.total_dim();
        let new_index: Vec<usize> = (0..n)
            .map(|idx| {
                self.layout
                    .digits(idx)
                    .iter()
                    .enumerate()
                    .map(|(k, &dig)| dig * strides[targets[k]])
                    .sum()
            })
            .collect();
        debug_assert!(targets.iter().enumerate().all(|(k, &t)| dims[k] == dims[t]));
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(new_index[r], new_index[c])] = self.matrix[(r, c)];
            }
        }
        Ok(Self {
            layout: self.layout.clone(),
            matrix: out,
        })
    }

    /// Reduced state on `keep`, in layout order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityOperator> {
        let kept = self.layout.positions_of(keep)?;
        let traced: Vec<usize> = (0..self.layout.len()).filter(|p| !kept.contains(p)).collect();
        let reduced_layout = self.layout.restrict(&kept)?;
        if traced.is_empty() {
            return Ok(self.clone());
        }
        let kept_off = offsets_for(&self.layout, &kept);
        let traced_off = offsets_for(&self.layout, &traced);
        let m = reduced_layout.total_dim();
        let mut out = ComplexMatrix::zeros(m, m);
        for (i, &ri) in kept_off.iter().enumerate() {
            for (j, &cj) in kept_off.iter().enumerate() {
                out[(i, j)] = traced_off
                    .iter()
                    .map(|&t| self.matrix[(ri + t, cj + t)])
                    .sum();
            }
        }
        Ok(Self {
            layout: reduced_layout,
            matrix: out,
        })
    }

    /// Transpose on the right-hand side of `cut`.
    pub fn partial_transpose(&self, cut: &Cut) -> Result<ComplexMatrix> {
        cut.validate(&self.layout)?;
        let right: Vec<&String> = cut.right().iter().collect();
        let positions = self.layout.positions_of(&right)?;
        Ok(partial_transpose_matrix(&self.layout, &self.matrix, &positions))
    }

    /// `U ρ U†` with `op` acting on the listed subsystems in the listed order.
    pub fn apply_local(&self, labels: &[&str], op: &ComplexMatrix) -> Result<DensityOperator> {
        let plan = LocalPlan::new(&self.layout, labels, op)?;
        let left = plan.left_multiply(&self.matrix, op);
        let out = plan.right_multiply(&left, &op.adjoint());
        Ok(Self {
            layout: self.layout.clone(),
            matrix: out,
        })
    }

    /// Projects with `projector` on `labels`; returns the outcome probability
    /// and, when it exceeds `min_prob`, the renormalized post-measurement state.
    pub fn project(
        &self,
        labels: &[&str],
        projector: &ComplexMatrix,
        min_prob: f64,
    ) -> Result<(f64, Option<DensityOperator>)> {
        let plan = LocalPlan::new(&self.layout, labels, projector)?;
        let left = plan.left_multiply(&self.matrix, projector);
        let both = plan.right_multiply(&left, &projector.adjoint());
        let p = both.trace().re.max(0.0);
        if p <= min_prob {
            return Ok((p, None));
        }
        Ok((
            p,
            Some(Self {
                layout: self.layout.clone(),
                matrix: both.scale(Complex64::new(1.0 / p, 0.0)),
            }),
        ))
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, target: &StateVector) -> Result<f64> {
        if target.layout() != &self.layout {
            return Err(Error::Argument(format!(
                "target layout {} differs from state layout {}",
                target.layout(),
                self.layout
            )));
        }
        let v = self.matrix.apply(target.amplitudes())?;
        Ok(target
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }
}

pub fn permute_subsystems(state: &DensityOperator, perm: &PermutationMap) -> Result<DensityOperator> {
    state.permute_subsystems(perm)
}

pub fn partial_trace<S: AsRef<str>>(state: &DensityOperator, keep: &[S]) -> Result<DensityOperator> {
    state.partial_trace(keep)
}

pub fn partial_transpose(state: &DensityOperator, cut: &Cut) -> Result<ComplexMatrix> {
    state.partial_transpose(cut)
}

pub fn fidelity_pure(state: &DensityOperator, target: &StateVector) -> Result<f64> {
    state.fidelity_pure(target)
}

/// Partial transpose of a raw matrix over `positions` of `layout`.
pub fn partial_transpose_matrix(
    layout: &SubsystemLayout,
    m: &ComplexMatrix,
    positions: &[usize],
) -> ComplexMatrix {
    let part = layout.partial_offsets(positions);
    let n = layout.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let r2 = r - part[r] + part[c];
            let c2 = c - part[c] + part[r];
            out[(r2, c2)] = m[(r, c)];
        }
    }
    out
}

/// Index offsets of every configuration of the subsystems at `positions`,
/// enumerated in big-endian order over those positions.
fn offsets_for(layout: &SubsystemLayout, positions: &[usize]) -> Vec<usize> {
    let strides = layout.strides();
    let dims = layout.dims();
    let mut out = vec![0usize];
    for &p in positions {
        let stride = strides[p];
        out = out
            .iter()
            .flat_map(|&o| (0..dims[p]).map(move |dig| o + dig * stride))
            .collect();
    }
    out
}

/// Index bookkeeping for an operator acting on a subset of subsystems.
struct LocalPlan {
    offsets: Vec<usize>,
    bases: Vec<usize>,
}

impl LocalPlan {
    fn new(layout: &SubsystemLayout, labels: &[&str], op: &ComplexMatrix) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Argument("local operator needs at least one subsystem".into()));
        }
        let positions = labels
            .iter()
            .map(|l| layout.position(l))
            .collect::<Result<Vec<_>>>()?;
        let mut uniq = positions.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != positions.len() {
            return Err(Error::Argument(format!("repeated subsystem in {labels:?}")));
        }
        let k: usize = positions.iter().map(|&p| layout.dims()[p]).product();
        if op.rows() != k || op.cols() != k {
            return Err(Error::Argument(format!(
                "{}x{} operator on subsystems {labels:?} of dimension {k}",
                op.rows(),
                op.cols()
            )));
        }
        let rest: Vec<usize> = (0..layout.len()).filter(|p| !positions.contains(p)).collect();
        Ok(Self {
            offsets: offsets_for(layout, &positions),
            bases: offsets_for(layout, &rest),
        })
    }

    /// `(op ⊗ I) m`.
    fn left_multiply(&self, m: &ComplexMatrix, op: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        let k = self.offsets.len();
        for &base in &self.bases {
            for t in 0..k {
                let dst_row = base + self.offsets[t];
                for s in 0..k {
                    let w = op[(t, s)];
                    if w == C0 {
                        continue;
                    }
                    let src = m.row(base + self.offsets[s]).to_vec();
                    let dst = &mut out.as_mut_slice()[dst_row * n..(dst_row + 1) * n];
                    for (d, x) in dst.iter_mut().zip(src) {
                        *d += w * x;
                    }
                }
            }
        }
        out
    }

    /// `m (op ⊗ I)`.
    fn right_multiply(&self, m: &ComplexMatrix, op: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        let k = self.offsets.len();
        for r in 0..n {
            let row = m.row(r);
            for &base in &self.bases {
                for t in 0..k {
                    let mut acc = C0;
                    for s in 0..k {
                        acc += row[base + self.offsets[s]] * op[(s, t)];
                    }
                    out[(r, base + self.offsets[t])] = acc;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ab() -> SubsystemLayout {
        SubsystemLayout::qubits(&["A", "B"]).unwrap()
    }

    fn phi_plus() -> StateVector {
        let h = 0.5f64.sqrt();
        StateVector::new(ab(), vec![c(h), C0, C0, c(h)]).unwrap()
    }

    #[test]
    fn rejects_unnormalized_vectors() {
        assert!(matches!(
            StateVector::new(ab(), vec![c(1.0), c(1.0), C0, C0]),
            Err(Error::Invariant(_))
        ));
        assert!(StateVector::new(ab(), vec![c(1.0)]).is_err());
    }

    #[test]
    fn density_operator_validation() {
        let not_psd = ComplexMatrix::diagonal(&[c(1.5), c(-0.5), C0, C0]);
        assert!(matches!(DensityOperator::new(ab(), not_psd), Err(Error::Invariant(_))));
        let bad_trace = ComplexMatrix::identity(4);
        assert!(DensityOperator::new(ab(), bad_trace).is_err());
        assert!(DensityOperator::new(ab(), ComplexMatrix::identity(2)).is_err());
        assert!(DensityOperator::new(ab(), phi_plus().projector().into_matrix()).is_ok());
    }

    #[test]
    fn swap_relabels_basis_state() {
        let rho = StateVector::basis(ab(), 0b01).unwrap().projector();
        let swapped = rho.permute_subsystems(&PermutationMap::swap(&ab(), "A", "B").unwrap()).unwrap();
        let expected = StateVector::basis(ab(), 0b10).unwrap().projector();
        assert!(swapped.distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn identity_permutation_is_noop() {
        let rho = phi_plus().projector();
        let out = rho.permute_subsystems(&PermutationMap::identity(&ab())).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn three_cycle_moves_content() {
        // |0⟩_A|1⟩_B|2⟩_C with A->B, B->C, C->A on a qutrit register
        let l = SubsystemLayout::uniform(&["A", "B", "C"], 3).unwrap();
        let src = l.index_of_digits(&[0, 1, 2]);
        let rho = StateVector::basis(l.clone(), src).unwrap().projector();
        let p = PermutationMap::from_images(&l, &["B", "C", "A"]).unwrap();
        let out = rho.permute_subsystems(&p).unwrap();
        let dst = l.index_of_digits(&[2, 0, 1]);
        assert_eq!(out.matrix()[(dst, dst)], c(1.0));
    }

    #[test]
    fn partial_trace_of_bell_pair_is_maximally_mixed() {
        // Index-sum oracle: (ρ_A)_{ij} = Σ_k ρ_{(i,k),(j,k)}.
        let rho = phi_plus().projector();
        let mut oracle = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    oracle[(i, j)] += rho.matrix()[(2 * i + k, 2 * j + k)];
                }
            }
        }
        let reduced = rho.partial_trace(&["A"]).unwrap();
        assert!(frobenius_distance(reduced.matrix(), &oracle).unwrap() < 1e-15);
        let half = ComplexMatrix::identity(2).scale(c(0.5));
        assert!(frobenius_distance(reduced.matrix(), &half).unwrap() < 1e-15);
        assert_eq!(reduced.layout().labels(), &["A".to_string()]);
    }

    #[test]
    fn partial_trace_argument_errors() {
        let rho = phi_plus().projector();
        assert!(rho.partial_trace::<&str>(&[]).is_err());
        assert!(rho.partial_trace(&["Z"]).is_err());
    }

    #[test]
    fn partial_trace_of_product_returns_factor() {
        let a = StateVector::normalized(
            SubsystemLayout::qubits(&["A"]).unwrap(),
            vec![c(0.6), Complex64::new(0.0, 0.8)],
        )
        .unwrap();
        let b = StateVector::basis(SubsystemLayout::uniform(&["B"], 3).unwrap(), 2).unwrap();
        let prod = a.projector().tensor(&b.projector()).unwrap();
        let back = prod.partial_trace(&["A"]).unwrap();
        assert!(back.distance(&a.projector()).unwrap() < 1e-15);
        let back_b = prod.partial_trace(&["B"]).unwrap();
        assert!(back_b.distance(&b.projector()).unwrap() < 1e-15);
    }

    #[test]
    fn partial_transpose_of_bell_pair() {
        let rho = phi_plus().projector();
        let cut = Cut::parse(&ab(), "A:B").unwrap();
        let pt = rho.partial_transpose(&cut).unwrap();
        // Brute force: (ρ^{T_B})_{(i,j),(k,l)} = ρ_{(i,l),(k,j)}.
        let mut oracle = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        oracle[(2 * i + j, 2 * k + l)] = rho.matrix()[(2 * i + l, 2 * k + j)];
                    }
                }
            }
        }
        assert!(frobenius_distance(&pt, &oracle).unwrap() < 1e-15);
        let ev = hermitian_eigenvalues(&pt).unwrap();
        for (got, want) in ev.iter().zip([0.5, 0.5, 0.5, -0.5]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn partial_transpose_of_product_is_psd() {
        let a = StateVector::normalized(ab(), vec![c(1.0), c(1.0), c(1.0), c(1.0)]).unwrap();
        let cut = Cut::parse(&ab(), "A:B").unwrap();
        let pt = a.projector().partial_transpose(&cut).unwrap();
        assert!(hermitian_eigenvalues(&pt).unwrap().iter().all(|&x| x >= -1e-12));
    }

    #[test]
    fn local_operator_matches_full_kron() {
        let l = SubsystemLayout::new(&["A", "B", "C"], &[2, 3, 2]).unwrap();
        let psi = StateVector::normalized(
            l.clone(),
            (0..12).map(|k| Complex64::new(k as f64 + 1.0, (k % 3) as f64)).collect(),
        )
        .unwrap();
        let rho = psi.projector();
        let h = 0.5f64.sqrt();
        let u = ComplexMatrix::from_rows(&[vec![c(h), c(h)], vec![c(h), c(-h)]]).unwrap();
        let full = kron(&kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap(), &u).unwrap();
        let expected = &(&full * rho.matrix()) * &full.adjoint();
        let got = rho.apply_local(&["C"], &u).unwrap();
        assert!(frobenius_distance(got.matrix(), &expected).unwrap() < 1e-12);
        let got_vec = psi.apply_local(&["C"], &u).unwrap();
        assert!(got_vec.projector().distance(&got).unwrap() < 1e-12);
    }

    #[test]
    fn local_operator_respects_label_order() {
        // CNOT with control B, target A, given as labels ["B", "A"].
        let cnot = ComplexMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let rho = StateVector::basis(ab(), 0b01).unwrap().projector();
        let out = rho.apply_local(&["B", "A"], &cnot).unwrap();
        assert_eq!(out.matrix()[(3, 3)], c(1.0));
        assert!(rho.apply_local(&["A", "A"], &cnot).is_err());
        assert!(rho.apply_local(&["A"], &cnot).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let rho = phi_plus().projector();
        assert!((rho.fidelity_pure(&phi_plus()).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(ab());
        assert!((mixed.fidelity_pure(&phi_plus()).unwrap() - 0.25).abs() < 1e-15);
        let other = StateVector::basis(SubsystemLayout::qubits(&["A", "C"]).unwrap(), 0).unwrap();
        assert!(rho.fidelity_pure(&other).is_err());
    }

    #[test]
    fn projection_probability_and_null_branch() {
        let rho = StateVector::basis(ab(), 0).unwrap().projector();
        let p1 = ComplexMatrix::diagonal(&[C0, c(1.0)]);
        let (p, post) = rho.project(&["A"], &p1, 1e-12).unwrap();
        assert_eq!(p, 0.0);
        assert!(post.is_none());
        let p0 = ComplexMatrix::diagonal(&[c(1.0), C0]);
        let (p, post) = rho.project(&["B"], &p0, 1e-12).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert_eq!(post.unwrap(), rho);
    }
}
