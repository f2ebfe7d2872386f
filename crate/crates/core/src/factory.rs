//! Constructors for the Bell basis, the σ rotations, Heisenberg–Weyl
//! operators and the four-party unlockable state with its qudit analog.
//!
//! # σ labels
//!
//! The σ set is indexed in the order that maps each Bell state to the
//! singlet, `(I ⊗ σᵢ)|βᵢ⟩ ∝ |Ψ⁻⟩`:
//!
//! | index | matrix            | conventional name | Bell state βᵢ | Weyl label (a,b) |
//! |-------|-------------------|-------------------|---------------|------------------|
//! | 0     | `[[1,0],[0,1]]`   | I                 | Ψ⁻            | (0,0)            |
//! | 1     | `[[1,0],[0,-1]]`  | Z                 | Ψ⁺            | (0,1)            |
//! | 2     | `[[0,-1],[1,0]]`  | XZ = −iY          | Φ⁺            | (1,1)            |
//! | 3     | `[[0,1],[1,0]]`   | X                 | Φ⁻            | (1,0)            |
//!
//! The Weyl column gives the operator as `W(a,b) = XᵃZᵇ` at `d = 2`.
//!
//! # Ψ± convention
//!
//! `|Ψ±⟩ = (|01⟩ ± |10⟩)/√2`. Printing both terms as `|01⟩` would make Ψ±
//! collinear, so this is the only choice compatible with orthonormality
//! and with the σ table above.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::layout::SubsystemLayout;
use crate::matrix::{kron_vec, ComplexMatrix, C0};
use crate::state::{DensityOperator, StateVector};

/// Largest qudit dimension supported by [`smolin_qudit_state`].
pub const MAX_QUDIT_DIM: usize = 5;

pub const SMOLIN_LABELS: [&str; 4] = ["A", "B", "C", "D"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// The σ that rotates this Bell state into Ψ⁻.
    pub fn sigma(self) -> SigmaIndex {
        match self {
            BellKind::PsiMinus => SigmaIndex(0),
            BellKind::PsiPlus => SigmaIndex(1),
            BellKind::PhiPlus => SigmaIndex(2),
            BellKind::PhiMinus => SigmaIndex(3),
        }
    }

    pub fn from_sigma(s: SigmaIndex) -> Self {
        match s.0 {
            0 => BellKind::PsiMinus,
            1 => BellKind::PsiPlus,
            2 => BellKind::PhiPlus,
            _ => BellKind::PhiMinus,
        }
    }

    /// Weyl label `(a,b)` with `|B_ab⟩ = |this⟩` exactly.
    pub fn weyl(self) -> WeylLabel {
        let (a, b) = match self {
            BellKind::PhiPlus => (0, 0),
            BellKind::PhiMinus => (0, 1),
            BellKind::PsiPlus => (1, 0),
            BellKind::PsiMinus => (1, 1),
        };
        WeylLabel { d: 2, a, b }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PhiPlus => "Φ+",
            BellKind::PhiMinus => "Φ-",
            BellKind::PsiPlus => "Ψ+",
            BellKind::PsiMinus => "Ψ-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaIndex(u8);

impl SigmaIndex {
    pub const ALL: [SigmaIndex; 4] = [SigmaIndex(0), SigmaIndex(1), SigmaIndex(2), SigmaIndex(3)];

    pub fn new(i: u8) -> Result<Self> {
        if i < 4 {
            Ok(Self(i))
        } else {
            Err(Error::Argument(format!("σ index {i} outside 0..4")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// (x, z) exponents with σ ∝ XˣZᶻ.
    fn bits(self) -> (u8, u8) {
        match self.0 {
            0 => (0, 0),
            1 => (0, 1),
            2 => (1, 1),
            _ => (1, 0),
        }
    }

    fn from_bits(x: u8, z: u8) -> Self {
        match (x & 1, z & 1) {
            (0, 0) => Self(0),
            (0, 1) => Self(1),
            (1, 1) => Self(2),
            _ => Self(3),
        }
    }

    /// Klein four-group product: `σₐσᵦ ∝ σ_{a∘b}`.
    pub fn compose(self, other: SigmaIndex) -> SigmaIndex {
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        Self::from_bits(x1 ^ x2, z1 ^ z2)
    }

    pub fn conventional_name(self) -> &'static str {
        ["I", "Z", "XZ", "X"][self.0 as usize]
    }

    pub fn weyl(self) -> WeylLabel {
        let (a, b) = self.bits();
        WeylLabel {
            d: 2,
            a: a as usize,
            b: b as usize,
        }
    }
}

impl fmt::Display for SigmaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylLabel {
    d: usize,
    a: usize,
    b: usize,
}

impl WeylLabel {
    pub fn new(d: usize, a: usize, b: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Argument(format!("Weyl dimension {d} below 2")));
        }
        if a >= d || b >= d {
            return Err(Error::Argument(format!("Weyl label ({a},{b}) outside [0,{d})")));
        }
        Ok(Self { d, a, b })
    }

    /// Reduces `a`, `b` modulo `d`.
    pub fn wrapping(d: usize, a: i64, b: i64) -> Result<Self> {
        let m = d as i64;
        Self::new(d, a.rem_euclid(m) as usize, b.rem_euclid(m) as usize)
    }

    /// All `d²` labels, `a` major.
    pub fn all(d: usize) -> Result<Vec<Self>> {
        WeylLabel::new(d, 0, 0)?;
        Ok((0..d)
            .flat_map(|a| (0..d).map(move |b| WeylLabel { d, a, b }))
            .collect())
    }

    pub fn dim(self) -> usize {
        self.d
    }

    pub fn a(self) -> usize {
        self.a
    }

    pub fn b(self) -> usize {
        self.b
    }

    pub fn negated(self) -> Self {
        Self {
            d: self.d,
            a: (self.d - self.a) % self.d,
            b: (self.d - self.b) % self.d,
        }
    }
}

impl fmt::Display for WeylLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}({},{})", self.d, self.a, self.b)
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn two_qubits() -> SubsystemLayout {
    SubsystemLayout::qubits(&["A", "B"]).expect("static layout")
}

pub fn bell_state(kind: BellKind) -> StateVector {
    let h = real(FRAC_1_SQRT_2);
    let amps = match kind {
        BellKind::PhiPlus => vec![h, C0, C0, h],
        BellKind::PhiMinus => vec![h, C0, C0, -h],
        BellKind::PsiPlus => vec![C0, h, h, C0],
        BellKind::PsiMinus => vec![C0, h, -h, C0],
    };
    StateVector::new(two_qubits(), amps).expect("Bell states are normalized")
}

pub fn pauli_sigma(i: SigmaIndex) -> ComplexMatrix {
    let rows: [[f64; 4]; 4] = [
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, -1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
    ];
    ComplexMatrix::from_vec(2, 2, rows[i.0 as usize].iter().map(|&x| real(x)).collect())
        .expect("2x2")
}

/// `XᵃZᵇ` with `X|k⟩ = |k+1 mod d⟩` and `Z = diag(ωᵏ)`, `ω = e^{2πi/d}`.
pub fn heisenberg_weyl(label: WeylLabel) -> ComplexMatrix {
    let d = label.d;
    let omega = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
    let mut m = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        // column k: Z^b|k⟩ = ω^{bk}|k⟩, then X^a sends it to |k+a⟩
        m[((k + label.a) % d, k)] = omega((label.b * k) % d);
    }
    m
}

/// `Σₖ|kk⟩/√d` on subsystems A, B.
pub fn canonical_max_entangled(d: usize) -> Result<StateVector> {
    let layout = SubsystemLayout::uniform(&["A", "B"], d)?;
    let s = real(1.0 / (d as f64).sqrt());
    let mut amps = vec![C0; d * d];
    for k in 0..d {
        amps[k * d + k] = s;
    }
    StateVector::new(layout, amps)
}

/// `(I ⊗ W(a,b)) Σₖ|kk⟩/√d`.
pub fn generalized_bell_state(label: WeylLabel) -> StateVector {
    let d = label.d;
    let w = heisenberg_weyl(label);
    let s = real(1.0 / (d as f64).sqrt());
    let mut amps = vec![C0; d * d];
    for k in 0..d {
        for j in 0..d {
            amps[k * d + j] = s * w[(j, k)];
        }
    }
    let layout = SubsystemLayout::uniform(&["A", "B"], d).expect("d validated by WeylLabel");
    StateVector::new(layout, amps).expect("Weyl operators are unitary")
}

/// `β_k`, the Bell state singled out by σ-index `k` (`(I⊗σ_k)β_k ∝ Ψ⁻`).
pub fn sigma_bell_state(k: SigmaIndex) -> StateVector {
    bell_state(BellKind::from_sigma(k))
}

/// The four-party unlockable state on A, B, C, D: AB and CD hold the same,
/// uniformly random Bell state.
pub fn smolin_state() -> DensityOperator {
    let layout = SubsystemLayout::qubits(&SMOLIN_LABELS).expect("static layout");
    let terms: Vec<StateVector> = BellKind::ALL
        .iter()
        .map(|&k| {
            let b = bell_state(k);
            StateVector::new(layout.clone(), kron_vec(b.amplitudes(), b.amplitudes()))
                .expect("product of normalized vectors")
        })
        .collect();
    let weighted: Vec<(f64, &StateVector)> = terms.iter().map(|t| (0.25, t)).collect();
    DensityOperator::mixture(&weighted).expect("nonempty mixture")
}

/// Qudit analog on A, B, C, D with local dimension `d`: a uniform mixture of
/// `|B_ab⟩^{AB} ⊗ |B_ab⟩*^{CD}` over all `d²` Weyl labels.
///
/// The CD copy is complex-conjugated (`|B_ab⟩* = |B_{a,-b}⟩`). At `d = 2` the
/// two copies coincide; for `d ≥ 3` only the conjugate pairing is symmetric
/// under exchanging B and C.
pub fn smolin_qudit_state(d: usize) -> Result<DensityOperator> {
    if !(2..=MAX_QUDIT_DIM).contains(&d) {
        return Err(Error::Capacity(format!(
            "qudit dimension {d} outside 2..={MAX_QUDIT_DIM}"
        )));
    }
    let layout = SubsystemLayout::uniform(&SMOLIN_LABELS, d)?;
    let terms = WeylLabel::all(d)?
        .into_iter()
        .map(|label| {
            let ab = generalized_bell_state(label);
            let cd: Vec<Complex64> = ab.amplitudes().iter().map(|z| z.conj()).collect();
            StateVector::new(layout.clone(), kron_vec(ab.amplitudes(), &cd))
        })
        .collect::<Result<Vec<_>>>()?;
    let w = 1.0 / (d * d) as f64;
    let weighted: Vec<(f64, &StateVector)> = terms.iter().map(|t| (w, t)).collect();
    DensityOperator::mixture(&weighted)
}
