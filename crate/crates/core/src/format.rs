//! Circuit interchange format: UTF-8 JSON.
//!
//! Top level: `{"qubits": n, "roles": [...], "outputs": [...],
//! "postselect": [...], "gates": [...]}`. Roles are `"input"`, `"zero"` or
//! `{"state": [[re,im],[re,im]]}`. Gates are tagged objects: `H`, `R`
//! (sign/k give the angle `sign·2π/2^k`), `CZ`, `CR`, `CNOT`, `X`, and `U`
//! with a row-major `[re,im]` matrix.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Role};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::linalg::CMat;

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    qubits: usize,
    roles: Vec<RoleDoc>,
    outputs: Vec<usize>,
    postselect: Vec<usize>,
    gates: Vec<GateDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RoleDoc {
    Named(String),
    Product { state: [[f64; 2]; 2] },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
#[allow(clippy::upper_case_acronyms)]
enum GateDoc {
    H {
        q: usize,
    },
    R {
        q: usize,
        sign: i8,
        k: u32,
    },
    CZ {
        a: usize,
        b: usize,
    },
    CR {
        control: usize,
        target: usize,
        sign: i8,
        k: u32,
    },
    CNOT {
        control: usize,
        target: usize,
    },
    X {
        q: usize,
    },
    U {
        qubits: Vec<usize>,
        matrix: Vec<[f64; 2]>,
    },
}

fn role_to_doc(role: &Role) -> RoleDoc {
    match role {
        Role::Input => RoleDoc::Named("input".into()),
        Role::Zero => RoleDoc::Named("zero".into()),
        Role::Product(s) => RoleDoc::Product {
            state: [[s[0].re, s[0].im], [s[1].re, s[1].im]],
        },
    }
}

fn role_from_doc(doc: &RoleDoc) -> Result<Role> {
    match doc {
        RoleDoc::Named(name) => match name.as_str() {
            "input" => Ok(Role::Input),
            "zero" => Ok(Role::Zero),
            other => Err(Error::Contract(format!("unknown role {other:?}"))),
        },
        RoleDoc::Product { state } => Ok(Role::Product([
            Complex64::new(state[0][0], state[0][1]),
            Complex64::new(state[1][0], state[1][1]),
        ])),
    }
}

fn gate_to_doc(gate: &Gate) -> Result<GateDoc> {
    Ok(match gate {
        Gate::H(q) => GateDoc::H { q: *q },
        Gate::R { q, phase } => {
            let (sign, k) = phase.sign_level().ok_or_else(|| {
                Error::Contract(format!("phase {phase} is not serializable as ±2π/2^k"))
            })?;
            GateDoc::R { q: *q, sign, k }
        }
        Gate::CZ(a, b) => GateDoc::CZ { a: *a, b: *b },
        Gate::CR {
            control,
            target,
            phase,
        } => {
            let (sign, k) = phase.sign_level().ok_or_else(|| {
                Error::Contract(format!("phase {phase} is not serializable as ±2π/2^k"))
            })?;
            GateDoc::CR {
                control: *control,
                target: *target,
                sign,
                k,
            }
        }
        Gate::Cnot { control, target } => GateDoc::CNOT {
            control: *control,
            target: *target,
        },
        Gate::X(q) => GateDoc::X { q: *q },
        Gate::U { qubits, matrix } => GateDoc::U {
            qubits: qubits.clone(),
            matrix: matrix.iter().map(|z| [z.re, z.im]).collect(),
        },
    })
}

fn gate_from_doc(doc: GateDoc) -> Result<Gate> {
    Ok(match doc {
        GateDoc::H { q } => Gate::H(q),
        GateDoc::R { q, sign, k } => Gate::r(q, sign, k)?,
        GateDoc::CZ { a, b } => Gate::CZ(a, b),
        GateDoc::CR {
            control,
            target,
            sign,
            k,
        } => Gate::cr(control, target, sign, k)?,
        GateDoc::CNOT { control, target } => Gate::Cnot { control, target },
        GateDoc::X { q } => Gate::X(q),
        GateDoc::U { qubits, matrix } => {
            let dim = 1usize << qubits.len();
            if matrix.len() != dim * dim {
                return Err(Error::Contract(format!(
                    "U on {} qubits needs {} entries, got {}",
                    qubits.len(),
                    dim * dim,
                    matrix.len()
                )));
            }
            let entries: Vec<Complex64> = matrix
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            let matrix: CMat =
                Array2::from_shape_vec((dim, dim), entries).expect("shape checked above");
            Gate::U { qubits, matrix }
        }
    })
}

/// Serializes a validated circuit.
pub fn to_json(circuit: &Circuit) -> Result<String> {
    circuit.validate()?;
    let doc = CircuitDoc {
        qubits: circuit.n_qubits(),
        roles: circuit.roles().iter().map(role_to_doc).collect(),
        outputs: circuit.outputs().to_vec(),
        postselect: circuit.postselect().to_vec(),
        gates: circuit
            .gates()
            .iter()
            .map(gate_to_doc)
            .collect::<Result<_>>()?,
    };
    Ok(serde_json::to_string_pretty(&doc).expect("circuit doc serializes"))
}

/// Parses and validates a circuit.
pub fn from_json(text: &str) -> Result<Circuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut circuit = Circuit::new(doc.qubits);
    for (q, role) in doc.roles.iter().enumerate() {
        if q >= doc.qubits {
            return Err(Error::Contract("more roles than qubits".into()));
        }
        circuit.set_role(q, role_from_doc(role)?);
    }
    if doc.roles.len() != doc.qubits {
        return Err(Error::Contract(format!(
            "{} roles for {} qubits",
            doc.roles.len(),
            doc.qubits
        )));
    }
    circuit.set_outputs(doc.outputs);
    circuit.set_postselect(doc.postselect);
    for gate in doc.gates {
        circuit.push(gate_from_doc(gate)?);
    }
    circuit.validate()?;
    Ok(circuit)
}
