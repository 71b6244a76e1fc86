//! Gates: the elementary set `{H, R(±2π/2^k), ΛZ}`, derived gates that
//! expand into it, and explicit small-unitary composites.

use std::f64::consts::FRAC_1_SQRT_2;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::phase::DyadicPhase;

/// Composite gates may touch at most this many qubits.
pub const COMPOSITE_ARITY_CAP: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Hadamard.
    H(usize),
    /// Phase shift `R(θ) = diag(1, e^{iθ})` with `θ = ±2π/2^k`.
    R { q: usize, phase: DyadicPhase },
    /// Controlled-Z; symmetric in its qubits.
    CZ(usize, usize),
    /// CNOT, a derived gate: `(I⊗H)·ΛZ·(I⊗H)` with `H` on the target.
    Cnot { control: usize, target: usize },
    /// Controlled phase shift `diag(1,1,1,e^{iθ})`, a derived gate.
    CR {
        control: usize,
        target: usize,
        phase: DyadicPhase,
    },
    /// Pauli X, a derived gate: `H·R(π)·H`.
    X(usize),
    /// An explicit unitary on an ordered qubit tuple. Row/column index `r`
    /// reads the listed qubits msb first: bit `i` of `r` (from the top) is
    /// the basis value of `qubits[i]`.
    U { qubits: Vec<usize>, matrix: CMat },
}

impl Gate {
    pub fn h(q: usize) -> Gate {
        Gate::H(q)
    }

    /// `R(sign·2π/2^k)`.
    pub fn r(q: usize, sign: i8, k: u32) -> Result<Gate> {
        Ok(Gate::R {
            q,
            phase: DyadicPhase::new(sign, k)?,
        })
    }

    pub fn phase_shift(q: usize, phase: DyadicPhase) -> Result<Gate> {
        if phase.sign_level().is_none() {
            return Err(Error::Contract(format!(
                "phase-shift gates carry unit phases ±2π/2^k, got {phase}"
            )));
        }
        Ok(Gate::R { q, phase })
    }

    /// `Z = R(π)`.
    pub fn z(q: usize) -> Gate {
        Gate::R {
            q,
            phase: DyadicPhase::pi(),
        }
    }

    /// `P = R(π/2)`.
    pub fn p(q: usize) -> Gate {
        Gate::R {
            q,
            phase: DyadicPhase::new(1, 2).expect("level 2 is valid"),
        }
    }

    pub fn x(q: usize) -> Gate {
        Gate::X(q)
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::CZ(a, b)
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn cr(control: usize, target: usize, sign: i8, k: u32) -> Result<Gate> {
        Ok(Gate::CR {
            control,
            target,
            phase: DyadicPhase::new(sign, k)?,
        })
    }

    /// An explicit unitary on the listed qubits. Checks arity, distinctness
    /// and unitarity (max-entry norm of `U†U - I` at most 1e-9).
    pub fn composite(qubits: Vec<usize>, matrix: CMat) -> Result<Gate> {
        if qubits.is_empty() || qubits.len() > COMPOSITE_ARITY_CAP {
            return Err(Error::InvalidCircuit(format!(
                "composite arity {} outside 1..={COMPOSITE_ARITY_CAP}",
                qubits.len()
            )));
        }
        let dim = 1usize << qubits.len();
        if matrix.dim() != (dim, dim) {
            return Err(Error::InvalidCircuit(format!(
                "composite on {} qubits needs a {dim}x{dim} matrix, got {:?}",
                qubits.len(),
                matrix.dim()
            )));
        }
        let gate = Gate::U { qubits, matrix };
        gate.check_well_formed()?;
        Ok(gate)
    }

    /// Qubits the gate acts on, in listed order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::R { q, .. } | Gate::X(q) => vec![*q],
            Gate::CZ(a, b) => vec![*a, *b],
            Gate::Cnot { control, target }
            | Gate::CR {
                control, target, ..
            } => {
                vec![*control, *target]
            }
            Gate::U { qubits, .. } => qubits.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::H(_) | Gate::R { .. } | Gate::X(_) => 1,
            Gate::CZ(..) | Gate::Cnot { .. } | Gate::CR { .. } => 2,
            Gate::U { qubits, .. } => qubits.len(),
        }
    }

    /// Structural validity: distinct qubits, unit phases, unitary composites.
    pub fn check_well_formed(&self) -> Result<()> {
        let qs = self.qubits();
        for i in 0..qs.len() {
            for j in i + 1..qs.len() {
                if qs[i] == qs[j] {
                    return Err(Error::InvalidCircuit(format!(
                        "duplicate qubit {} in {self:?}",
                        qs[i]
                    )));
                }
            }
        }
        match self {
            Gate::R { phase, .. } | Gate::CR { phase, .. } => {
                if phase.sign_level().is_none() {
                    return Err(Error::InvalidCircuit(format!(
                        "gate phase {phase} is not of the form ±2π/2^k"
                    )));
                }
            }
            Gate::U { qubits, matrix } => {
                if qubits.len() > COMPOSITE_ARITY_CAP {
                    return Err(Error::InvalidCircuit(format!(
                        "composite arity {} exceeds cap {COMPOSITE_ARITY_CAP}",
                        qubits.len()
                    )));
                }
                let defect = linalg::unitarity_defect(matrix);
                if defect > 1e-9 {
                    return Err(Error::InvalidCircuit(format!(
                        "composite matrix is not unitary (defect {defect:.3e})"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The gate's matrix in the computational basis, qubit order as listed.
    pub fn unitary(&self) -> CMat {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Gate::H(_) => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                Array2::from_shape_vec((2, 2), vec![h, h, h, -h]).unwrap()
            }
            Gate::R { phase, .. } => {
                let mut m = Array2::zeros((2, 2));
                m[(0, 0)] = one;
                m[(1, 1)] = phase.phase_factor();
                m
            }
            Gate::X(_) => {
                let mut m = Array2::zeros((2, 2));
                m[(0, 1)] = one;
                m[(1, 0)] = one;
                m
            }
            Gate::CZ(..) => {
                let mut m = linalg::eye(4);
                m[(3, 3)] = -one;
                m
            }
            Gate::CR { phase, .. } => {
                let mut m = linalg::eye(4);
                m[(3, 3)] = phase.phase_factor();
                m
            }
            Gate::Cnot { .. } => {
                let mut m: CMat = Array2::zeros((4, 4));
                m[(0, 0)] = one;
                m[(1, 1)] = one;
                m[(2, 3)] = one;
                m[(3, 2)] = one;
                m
            }
            Gate::U { matrix, .. } => matrix.clone(),
        }
    }

    /// The adjoint gate. Closed on the gate kinds: self-adjoint gates stay,
    /// phases flip sign, composite matrices are conjugate-transposed.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::H(_) | Gate::CZ(..) | Gate::Cnot { .. } | Gate::X(_) => self.clone(),
            Gate::R { q, phase } => Gate::R {
                q: *q,
                phase: -*phase,
            },
            Gate::CR {
                control,
                target,
                phase,
            } => Gate::CR {
                control: *control,
                target: *target,
                phase: -*phase,
            },
            Gate::U { qubits, matrix } => Gate::U {
                qubits: qubits.clone(),
                matrix: linalg::dagger(matrix),
            },
        }
    }

    /// Deterministic expansion of derived gates into elementary ones.
    /// `H`, `R` and `CZ` are already elementary; composites stay as they
    /// are. Fails only if a controlled phase cannot be halved within the
    /// level cap.
    pub fn elementary(&self) -> Result<Vec<Gate>> {
        Ok(match self {
            Gate::H(_) | Gate::R { .. } | Gate::CZ(..) | Gate::U { .. } => vec![self.clone()],
            Gate::X(q) => vec![Gate::H(*q), Gate::z(*q), Gate::H(*q)],
            Gate::Cnot { control, target } => vec![
                Gate::H(*target),
                Gate::CZ(*control, *target),
                Gate::H(*target),
            ],
            Gate::CR {
                control,
                target,
                phase,
            } => {
                // diag(1,1,1,e^{iθ}) = R(θ/2)⊗R(θ/2) · CNOT · I⊗R(-θ/2) · CNOT,
                // with the CNOTs expanded through H·ΛZ·H.
                let half = phase.half()?;
                let mut gates = vec![
                    Gate::R {
                        q: *control,
                        phase: half,
                    },
                    Gate::R {
                        q: *target,
                        phase: half,
                    },
                ];
                gates.extend(Gate::cnot(*control, *target).elementary()?);
                gates.push(Gate::R {
                    q: *target,
                    phase: -half,
                });
                gates.extend(Gate::cnot(*control, *target).elementary()?);
                gates
            }
        })
    }

    /// Relabels qubits through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::R { q, phase } => Gate::R {
                q: f(*q),
                phase: *phase,
            },
            Gate::X(q) => Gate::X(f(*q)),
            Gate::CZ(a, b) => Gate::CZ(f(*a), f(*b)),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::CR {
                control,
                target,
                phase,
            } => Gate::CR {
                control: f(*control),
                target: f(*target),
                phase: *phase,
            },
            Gate::U { qubits, matrix } => Gate::U {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                matrix: matrix.clone(),
            },
        }
    }
}
