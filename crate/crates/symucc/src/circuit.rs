//! Trotterized ansatz compilation: one exponentiated-Pauli rotation per
//! Jordan-Wigner string of each pool generator, plus the CNOT-ladder gate
//! decomposition used for resource estimates and circuit export.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermionics::{generator, Excitation};
use crate::integrals::IntegralTable;
use crate::pauli_jw::jw_map;

/// One factor `exp(i * coeff * theta[param] * P)` of the Trotter product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub x_mask: u64,
    pub z_mask: u64,
    /// Real prefactor pulled out of the anti-Hermitian generator.
    pub coeff: f64,
    /// Index into the shared parameter vector.
    pub param: usize,
}

impl Rotation {
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }
}

/// An ordered single-Trotter-step ansatz circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzCircuit {
    pub rotations: Vec<Rotation>,
    pub n_parameters: usize,
    pub n_qubits: usize,
}

/// Build the first-order Trotterized ansatz for a (possibly filtered) pool.
///
/// Excitations are processed in pool order; within one excitation the
/// Jordan-Wigner strings are emitted in ascending (x_mask, z_mask) order, so
/// two builds from identical inputs are identical.
pub fn build_ansatz(pool: &[Excitation], table: &IntegralTable) -> Result<AnsatzCircuit> {
    let n_qubits = table.n_qubits();
    let mut rotations = Vec::new();
    for (param, exc) in pool.iter().enumerate() {
        let mapped = jw_map(&generator(exc), n_qubits)?;
        for term in mapped.iter() {
            if term.coeff.re.abs() > 1e-12 {
                return Err(Error::ContractViolation(format!(
                    "generator {} mapped to a non-anti-Hermitian string {}",
                    exc.describe(),
                    term.label()
                )));
            }
            debug_assert!(term.x_mask | term.z_mask != 0);
            rotations.push(Rotation {
                x_mask: term.x_mask,
                z_mask: term.z_mask,
                coeff: term.coeff.im,
                param,
            });
        }
    }
    Ok(AnsatzCircuit {
        rotations,
        n_parameters: pool.len(),
        n_qubits,
    })
}

impl AnsatzCircuit {
    /// Stable textual form (one line per rotation); byte-identical across
    /// rebuilds from the same inputs.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "qubits={} parameters={} rotations={}",
            self.n_qubits,
            self.n_parameters,
            self.rotations.len()
        );
        for r in &self.rotations {
            let _ = writeln!(
                out,
                "x={:016x} z={:016x} coeff={:+.17e} param={}",
                r.x_mask, r.z_mask, r.coeff, r.param
            );
        }
        out
    }

    /// Bind parameters and export as OpenQASM 2 text.
    pub fn to_qasm(&self, params: &[f64]) -> Result<String> {
        if params.len() != self.n_parameters {
            return Err(Error::ContractViolation(format!(
                "{} parameters supplied for a {}-parameter circuit",
                params.len(),
                self.n_parameters
            )));
        }
        let mut out = String::new();
        out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let _ = writeln!(out, "qreg q[{}];", self.n_qubits);
        for r in &self.rotations {
            let angle = r.coeff * params[r.param];
            for gate in decompose_rotation(r.x_mask, r.z_mask, angle)? {
                let _ = writeln!(out, "{}", gate.qasm());
            }
        }
        Ok(out)
    }
}

/// Elementary gates used by the decomposition and the noisy simulator path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Cnot { control: usize, target: usize },
    Rz { target: usize, angle: f64 },
}

impl Gate {
    pub fn qasm(&self) -> String {
        match *self {
            Gate::H(q) => format!("h q[{q}];"),
            Gate::S(q) => format!("s q[{q}];"),
            Gate::Sdg(q) => format!("sdg q[{q}];"),
            Gate::Cnot { control, target } => format!("cx q[{control}],q[{target}];"),
            Gate::Rz { target, angle } => format!("rz({angle:.17e}) q[{target}];"),
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::Rz { target, angle } => Gate::Rz {
                target,
                angle: -angle,
            },
            g => g,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

/// Decompose `exp(i * angle * P)` into basis changes, a CNOT ladder onto the
/// highest involved qubit, and one Rz.
///
/// Gate count: `2 * (w - 1)` CNOTs, one Rz, and two basis-change layers over
/// the non-Z qubits (a Y qubit needs an extra phase gate next to its
/// Hadamard). `rz(lambda)` follows the `exp(-i lambda Z / 2)` convention,
/// hence `lambda = -2 * angle`.
pub fn decompose_rotation(x_mask: u64, z_mask: u64, angle: f64) -> Result<Vec<Gate>> {
    let support = x_mask | z_mask;
    if support == 0 {
        return Err(Error::DegenerateRotation);
    }
    let qubits: Vec<usize> = (0..64).filter(|q| support & (1 << q) != 0).collect();
    let mut gates = Vec::new();
    for &q in &qubits {
        let bit = 1u64 << q;
        if x_mask & bit != 0 {
            if z_mask & bit != 0 {
                gates.push(Gate::Sdg(q));
            }
            gates.push(Gate::H(q));
        }
    }
    for w in qubits.windows(2) {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    gates.push(Gate::Rz {
        target: *qubits.last().unwrap(),
        angle: -2.0 * angle,
    });
    for w in qubits.windows(2).rev() {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    for &q in qubits.iter().rev() {
        let bit = 1u64 << q;
        if x_mask & bit != 0 {
            gates.push(Gate::H(q));
            if z_mask & bit != 0 {
                gates.push(Gate::S(q));
            }
        }
    }
    Ok(gates)
}

/// Gate-level totals for a compiled circuit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub parameters: usize,
    pub rotations: usize,
    pub rz: usize,
    pub cnot: usize,
    /// Basis-change conjugations (one per non-Z qubit per side).
    pub h_like: usize,
    /// Serial depth upper bound: sum of per-rotation depths.
    pub depth: usize,
}

pub fn resource_report(circuit: &AnsatzCircuit) -> ResourceReport {
    let mut report = ResourceReport {
        parameters: circuit.n_parameters,
        rotations: circuit.rotations.len(),
        ..Default::default()
    };
    for r in &circuit.rotations {
        let w = r.weight() as usize;
        let non_z = (r.x_mask).count_ones() as usize;
        report.rz += 1;
        report.cnot += 2 * (w - 1);
        report.h_like += 2 * non_z;
        report.depth += 2 * (w - 1) + 1 + if non_z > 0 { 2 } else { 0 };
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionics::enumerate_pool;
    use crate::integrals::parse_fcidump;
    use crate::symmetry::{filter_pool, IrrepLabel};

    fn beh2_like() -> IntegralTable {
        parse_fcidump("&FCI NORB=7,NELEC=6,MS2=0,ORBSYM=1,1,5,3,2,1,5,ISYM=1 &END\n").unwrap()
    }

    #[test]
    fn filtered_beh2_ansatz_has_23_parameters_and_fewer_rotations() {
        let t = beh2_like();
        let pool = enumerate_pool(&t);
        let filtered = filter_pool(&pool, &t, IrrepLabel::TOTALLY_SYMMETRIC);
        let full = build_ansatz(&pool, &t).unwrap();
        let reduced = build_ansatz(&filtered, &t).unwrap();
        assert_eq!(full.n_parameters, 90);
        assert_eq!(reduced.n_parameters, 23);
        assert!(reduced.rotations.len() < full.rotations.len());
        let rf = resource_report(&full);
        let rr = resource_report(&reduced);
        assert!(rr.cnot < rf.cnot);
        assert!(rr.rz < rf.rz);
        assert!(rr.depth < rf.depth);
    }

    #[test]
    fn single_excitation_emits_two_rotations_per_spin_channel() {
        let t = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n").unwrap();
        let pool = vec![Excitation::single(0, 1, 0)];
        let c = build_ansatz(&pool, &t).unwrap();
        assert_eq!(c.rotations.len(), 4);
        assert!(c.rotations.iter().all(|r| r.param == 0));
    }

    #[test]
    fn mixed_double_emits_eight_rotations_per_spin_realization() {
        let t = parse_fcidump("&FCI NORB=4,NELEC=4,MS2=0,ORBSYM=1,1,1,1,ISYM=1 &END\n").unwrap();
        let pool = vec![Excitation::double((0, 2), (1, 3), 0)];
        let c = build_ansatz(&pool, &t).unwrap();
        // four S_z-conserving realizations, eight strings each
        assert_eq!(c.rotations.len(), 32);
    }

    #[test]
    fn builds_are_deterministic() {
        let t = beh2_like();
        let pool = enumerate_pool(&t);
        let a = build_ansatz(&pool, &t).unwrap().describe();
        let b = build_ansatz(&pool, &t).unwrap().describe();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_pool_gives_identity_circuit() {
        let t = beh2_like();
        let c = build_ansatz(&[], &t).unwrap();
        assert!(c.rotations.is_empty());
        assert_eq!(c.n_parameters, 0);
        let r = resource_report(&c);
        assert_eq!(r, ResourceReport::default());
    }

    #[test]
    fn z_ladder_decomposition_matches_the_expected_gate_count() {
        // Z1 Z2 Z3 Z4
        let z_mask = 0b11110;
        let gates = decompose_rotation(0, z_mask, 0.7).unwrap();
        let cnots = gates.iter().filter(|g| g.is_two_qubit()).count();
        let rzs = gates
            .iter()
            .filter(|g| matches!(g, Gate::Rz { .. }))
            .count();
        assert_eq!((cnots, rzs, gates.len()), (6, 1, 7));
    }

    #[test]
    fn single_z_collapses_to_one_rz() {
        let gates = decompose_rotation(0, 0b1, 0.3).unwrap();
        assert_eq!(gates.len(), 1);
        assert!(matches!(gates[0], Gate::Rz { target: 0, .. }));
    }

    #[test]
    fn x0z1_uses_one_conjugated_qubit_and_two_cnots() {
        let gates = decompose_rotation(0b01, 0b10, 0.3).unwrap();
        assert_eq!(
            gates,
            vec![
                Gate::H(0),
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::Rz {
                    target: 1,
                    angle: -0.6
                },
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::H(0),
            ]
        );
    }

    #[test]
    fn identity_rotation_is_degenerate() {
        assert!(matches!(
            decompose_rotation(0, 0, 0.1),
            Err(Error::DegenerateRotation)
        ));
    }

    #[test]
    fn qasm_export_binds_parameters() {
        let t = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n").unwrap();
        let pool = vec![Excitation::single(0, 1, 0)];
        let c = build_ansatz(&pool, &t).unwrap();
        let qasm = c.to_qasm(&[0.25]).unwrap();
        assert!(qasm.starts_with("OPENQASM 2.0;"));
        assert!(qasm.contains("qreg q[4];"));
        assert!(qasm.contains("rz("));
        assert!(c.to_qasm(&[]).is_err());
    }
}
