//! Dense statevector engine: exact exponentiated-Pauli application, PauliSum
//! expectations, analytic reverse-sweep gradients, and a Monte Carlo
//! depolarizing-noise path with finite-shot sampling and gate folding.
//!
//! Basis convention: qubit `q` is bit `q` of the amplitude index (bit 0 is
//! the lowest). Pauli rotations act as `cos(a) I + i sin(a) P` directly on
//! the amplitudes; the gate decomposition from [`crate::circuit`] is used
//! only by the noisy path, which inserts random Pauli errors behind each
//! elementary gate.

use num_complex::Complex64;
use rand::distributions::Distribution;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuit::{decompose_rotation, AnsatzCircuit, Gate};
use crate::error::{Error, Result};
use crate::integrals::ReferenceDeterminant;
use crate::pauli_jw::{PauliSum, PauliTerm};

/// Refuse to allocate statevectors beyond this many qubits unless the caller
/// raises the cap explicitly.
pub const DEFAULT_QUBIT_CAP: usize = 26;

/// Run rotation kernels in parallel once the amplitude array is this large.
const PARALLEL_AMPLITUDE_THRESHOLD: usize = 1 << 17;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub amps: Vec<Complex64>,
    pub n_qubits: usize,
}

fn unit_phase(power: u32) -> Complex64 {
    match power % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl Statevector {
    /// A computational basis state `|bits>`; fails above the qubit cap.
    pub fn basis_state(n_qubits: usize, bits: u64) -> Result<Statevector> {
        Self::basis_state_with_cap(n_qubits, bits, DEFAULT_QUBIT_CAP)
    }

    pub fn basis_state_with_cap(n_qubits: usize, bits: u64, cap: usize) -> Result<Statevector> {
        if n_qubits > cap {
            return Err(Error::Capacity(format!(
                "{n_qubits} qubits exceed the statevector cap of {cap}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(Statevector { amps, n_qubits })
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<N> = sum_i |a_i|^2 popcount(i)` (occupied spin-orbital count).
    pub fn particle_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * (i.count_ones() as f64))
            .sum()
    }

    /// In-place application of a unit Pauli string.
    pub fn apply_pauli(&mut self, x_mask: u64, z_mask: u64) {
        let y_count = (x_mask & z_mask).count_ones();
        let unit = unit_phase(y_count);
        if x_mask == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                if (i as u64 & z_mask).count_ones() % 2 == 1 {
                    *a = -*a;
                }
            }
            return;
        }
        let high = 63 - x_mask.leading_zeros() as usize;
        let half = 1usize << high;
        let x_low = (x_mask & (half as u64 - 1)) as usize;
        let chunk_len = half << 1;
        let kernel = |chunk_idx: usize, chunk: &mut [Complex64]| {
            let base = chunk_idx * chunk_len;
            for local in 0..half {
                let i = local;
                let j = (local ^ x_low) | half;
                let gi = (base + i) as u64;
                let gj = (base + j) as u64;
                let sign_i = if (gi & z_mask).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let sign_j = if (gj & z_mask).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let ai = chunk[i];
                let aj = chunk[j];
                chunk[i] = unit * sign_j * aj;
                chunk[j] = unit * sign_i * ai;
            }
        };
        if self.amps.len() >= PARALLEL_AMPLITUDE_THRESHOLD {
            self.amps
                .par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(c, chunk)| kernel(c, chunk));
        } else {
            for (c, chunk) in self.amps.chunks_mut(chunk_len).enumerate() {
                kernel(c, chunk);
            }
        }
    }

    /// `state <- cos(angle) state + i sin(angle) P state`; errors on the
    /// identity Pauli (pure global phase).
    pub fn apply_pauli_rotation(&mut self, x_mask: u64, z_mask: u64, angle: f64) -> Result<()> {
        if x_mask | z_mask == 0 {
            return Err(Error::DegenerateRotation);
        }
        let (cos, sin) = (angle.cos(), angle.sin());
        let y_count = (x_mask & z_mask).count_ones();
        // i * sin * i^y
        let factor = unit_phase(y_count + 1) * sin;
        if x_mask == 0 {
            let kernel = |i: u64, a: &mut Complex64| {
                let phase = if (i & z_mask).count_ones() % 2 == 1 {
                    cos_minus(cos, factor)
                } else {
                    cos_plus(cos, factor)
                };
                *a *= phase;
            };
            if self.amps.len() >= PARALLEL_AMPLITUDE_THRESHOLD {
                self.amps
                    .par_iter_mut()
                    .enumerate()
                    .for_each(|(i, a)| kernel(i as u64, a));
            } else {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    kernel(i as u64, a);
                }
            }
            return Ok(());
        }
        let high = 63 - x_mask.leading_zeros() as usize;
        let half = 1usize << high;
        let x_low = (x_mask & (half as u64 - 1)) as usize;
        let chunk_len = half << 1;
        let kernel = |chunk_idx: usize, chunk: &mut [Complex64]| {
            let base = chunk_idx * chunk_len;
            for local in 0..half {
                let i = local;
                let j = (local ^ x_low) | half;
                let gi = (base + i) as u64;
                let gj = (base + j) as u64;
                let sign_i = if (gi & z_mask).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let sign_j = if (gj & z_mask).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                let ai = chunk[i];
                let aj = chunk[j];
                chunk[i] = cos * ai + factor * sign_j * aj;
                chunk[j] = cos * aj + factor * sign_i * ai;
            }
        };
        if self.amps.len() >= PARALLEL_AMPLITUDE_THRESHOLD {
            self.amps
                .par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(c, chunk)| kernel(c, chunk));
        } else {
            for (c, chunk) in self.amps.chunks_mut(chunk_len).enumerate() {
                kernel(c, chunk);
            }
        }
        Ok(())
    }

    /// Expectation of one unit Pauli string.
    pub fn pauli_expectation(&self, x_mask: u64, z_mask: u64) -> Complex64 {
        let unit = unit_phase((x_mask & z_mask).count_ones());
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            let j = i ^ x_mask as usize;
            let sign = if (j as u64 & z_mask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            acc += a.conj() * (unit * sign) * self.amps[j];
        }
        acc
    }

    /// Elementary-gate application for the noisy path.
    pub fn apply_gate(&mut self, gate: Gate) {
        match gate {
            Gate::H(q) => {
                let bit = 1usize << q;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..self.amps.len() {
                    if i & bit == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | bit];
                        self.amps[i] = s * (a + b);
                        self.amps[i | bit] = s * (a - b);
                    }
                }
            }
            Gate::S(q) => {
                let bit = 1usize << q;
                let ph = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & bit != 0 {
                        self.amps[i] *= ph;
                    }
                }
            }
            Gate::Sdg(q) => {
                let bit = 1usize << q;
                let ph = Complex64::new(0.0, -1.0);
                for i in 0..self.amps.len() {
                    if i & bit != 0 {
                        self.amps[i] *= ph;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cb = 1usize << control;
                let tb = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
            Gate::Rz { target, angle } => {
                let bit = 1usize << target;
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = Complex64::from_polar(1.0, angle / 2.0);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a *= if i & bit == 0 { lo } else { hi };
                }
            }
        }
    }
}

fn cos_plus(cos: f64, factor: Complex64) -> Complex64 {
    Complex64::new(cos, 0.0) + factor
}

fn cos_minus(cos: f64, factor: Complex64) -> Complex64 {
    Complex64::new(cos, 0.0) - factor
}

/// The reference determinant as a basis state: occupied spatial orbital `i`
/// sets qubits `2i` (alpha) and `2i + 1` (beta).
pub fn prepare_reference(n_qubits: usize, reference: &ReferenceDeterminant) -> Result<Statevector> {
    prepare_reference_with_cap(n_qubits, reference, DEFAULT_QUBIT_CAP)
}

pub fn prepare_reference_with_cap(
    n_qubits: usize,
    reference: &ReferenceDeterminant,
    cap: usize,
) -> Result<Statevector> {
    let mut bits = 0u64;
    for &orb in &reference.occupied_spatial {
        if 2 * orb + 1 >= n_qubits {
            return Err(Error::Index(format!(
                "occupied spatial orbital {orb} does not fit in {n_qubits} qubits"
            )));
        }
        bits |= 1 << (2 * orb);
        bits |= 1 << (2 * orb + 1);
    }
    Statevector::basis_state_with_cap(n_qubits, bits, cap)
}

/// Expectation of a Hermitian PauliSum.
pub fn expectation(state: &Statevector, observable: &PauliSum) -> Result<f64> {
    if !observable.is_hermitian(1e-10) {
        return Err(Error::ContractViolation(
            "expectation requires a Hermitian observable".into(),
        ));
    }
    let terms: Vec<PauliTerm> = observable.iter().collect();
    let total: Complex64 = terms
        .par_iter()
        .map(|t| t.coeff * state.pauli_expectation(t.x_mask, t.z_mask))
        .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);
    debug_assert!(total.im.abs() < 1e-8, "imaginary residue {}", total.im);
    Ok(total.re)
}

/// `observable * state` into a fresh buffer.
pub fn apply_sum(state: &Statevector, observable: &PauliSum) -> Statevector {
    let mut out = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for t in observable.iter() {
        let unit = unit_phase((t.x_mask & t.z_mask).count_ones()) * t.coeff;
        for (i, a) in state.amps.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let sign = if (i as u64 & t.z_mask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            out[i ^ t.x_mask as usize] += unit * sign * a;
        }
    }
    Statevector {
        amps: out,
        n_qubits: state.n_qubits,
    }
}

/// Run the ansatz at the given parameters.
pub fn apply_circuit(
    params: &[f64],
    circuit: &AnsatzCircuit,
    state0: &Statevector,
) -> Result<Statevector> {
    if params.len() != circuit.n_parameters {
        return Err(Error::ContractViolation(format!(
            "{} parameters supplied for a {}-parameter circuit",
            params.len(),
            circuit.n_parameters
        )));
    }
    let mut state = state0.clone();
    for r in &circuit.rotations {
        state.apply_pauli_rotation(r.x_mask, r.z_mask, r.coeff * params[r.param])?;
    }
    Ok(state)
}

/// Energy and its exact parameter gradient via one forward pass and a
/// reverse sweep (adjoint differentiation): after the forward run, walk the
/// rotations backwards, accumulating `-2 Im <lambda|P|psi>` per rotation into
/// its parameter slot while un-applying the rotation from both vectors.
pub fn energy_and_gradient(
    params: &[f64],
    circuit: &AnsatzCircuit,
    hamiltonian: &PauliSum,
    state0: &Statevector,
) -> Result<(f64, Vec<f64>)> {
    let mut psi = apply_circuit(params, circuit, state0)?;
    let mut lambda = apply_sum(&psi, hamiltonian);
    let energy = psi
        .amps
        .iter()
        .zip(&lambda.amps)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re;
    let mut grad = vec![0.0; circuit.n_parameters];
    for r in circuit.rotations.iter().rev() {
        // t = <lambda|P|psi>
        let unit = unit_phase((r.x_mask & r.z_mask).count_ones());
        let mut t = Complex64::new(0.0, 0.0);
        for (i, l) in lambda.amps.iter().enumerate() {
            let j = i ^ r.x_mask as usize;
            let sign = if (j as u64 & r.z_mask).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            t += l.conj() * (unit * sign) * psi.amps[j];
        }
        grad[r.param] += r.coeff * (-2.0 * t.im);
        let angle = r.coeff * params[r.param];
        psi.apply_pauli_rotation(r.x_mask, r.z_mask, -angle)?;
        lambda.apply_pauli_rotation(r.x_mask, r.z_mask, -angle)?;
    }
    Ok((energy, grad))
}

/// Per-basis-state irrep weights: basis states are classified by the XOR of
/// the orbital labels of their occupied spin-orbitals.
pub fn irrep_sector_weights(state: &Statevector, orbsym: &[u8]) -> [f64; 8] {
    let mut weights = [0.0; 8];
    for (i, a) in state.amps.iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let mut irrep = 0u8;
        let mut bits = i;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            irrep ^= orbsym[q / 2] - 1;
            bits &= bits - 1;
        }
        weights[irrep as usize] += w;
    }
    weights
}

/// Depolarizing-noise and measurement model.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    /// Single-qubit depolarizing probability per elementary gate.
    pub p1: f64,
    /// Two-qubit depolarizing probability per CNOT.
    pub p2: f64,
    /// Measurement repetitions per Pauli term; 0 means exact expectations.
    pub shots: u64,
    /// Monte Carlo trajectory count.
    pub trajectories: usize,
    /// Odd, ascending gate-folding factors for zero-noise extrapolation.
    pub fold_factors: Vec<usize>,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        NoiseSpec {
            p1: 0.0,
            p2: 0.0,
            shots: 0,
            trajectories: 1,
            fold_factors: vec![1, 3, 5],
        }
    }
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p1) || !(0.0..=1.0).contains(&self.p2) {
            return Err(Error::ContractViolation(
                "depolarizing probabilities must lie in [0, 1]".into(),
            ));
        }
        if self.trajectories == 0 {
            return Err(Error::ContractViolation(
                "at least one trajectory is required".into(),
            ));
        }
        let mut prev = 0usize;
        for &f in &self.fold_factors {
            if f % 2 == 0 || f <= prev {
                return Err(Error::ContractViolation(
                    "fold factors must be odd and strictly ascending".into(),
                ));
            }
            prev = f;
        }
        Ok(())
    }
}

fn single_qubit_paulis(q: usize) -> [(u64, u64); 3] {
    let bit = 1u64 << q;
    [(bit, 0), (bit, bit), (0, bit)] // X, Y, Z
}

fn gate_qubits(gate: Gate) -> (usize, Option<usize>) {
    match gate {
        Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => (q, None),
        Gate::Rz { target, .. } => (target, None),
        Gate::Cnot { control, target } => (control, Some(target)),
    }
}

/// Sample-or-exact energy of a state under the term-by-term measurement
/// model: equal `shots` per Pauli term, binomial outcomes from the exact
/// single-term distribution.
fn measured_energy(
    state: &Statevector,
    hamiltonian: &PauliSum,
    shots: u64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    if shots == 0 {
        return expectation(state, hamiltonian).expect("Hermitian Hamiltonian");
    }
    let mut energy = 0.0;
    for t in hamiltonian.iter() {
        if t.x_mask | t.z_mask == 0 {
            energy += t.coeff.re;
            continue;
        }
        let mu = state.pauli_expectation(t.x_mask, t.z_mask).re.clamp(-1.0, 1.0);
        let p_up = (1.0 + mu) / 2.0;
        let ups = rand_distr::Binomial::new(shots, p_up)
            .expect("probability in range")
            .sample(rng);
        let estimate = 2.0 * ups as f64 / shots as f64 - 1.0;
        energy += t.coeff.re * estimate;
    }
    energy
}

/// Monte Carlo noisy energy with gate folding; returns (mean, standard error
/// over trajectories). Identical seeds give identical results regardless of
/// thread count.
pub fn noisy_energy_folded(
    params: &[f64],
    circuit: &AnsatzCircuit,
    hamiltonian: &PauliSum,
    state0: &Statevector,
    noise: &NoiseSpec,
    seed: u64,
    fold: usize,
) -> Result<(f64, f64)> {
    noise.validate()?;
    if fold % 2 == 0 {
        return Err(Error::ContractViolation(
            "fold factor must be odd (G (G' G)^k shape)".into(),
        ));
    }
    let noiseless_gates = noise.p1 == 0.0 && noise.p2 == 0.0;
    // The exact rotation kernels realize the same unitary as the gate
    // decomposition, so the gate-level path is only needed when Pauli errors
    // are actually inserted between gates.
    let gates: Vec<Gate> = if noiseless_gates {
        Vec::new()
    } else {
        let mut all = Vec::new();
        for r in &circuit.rotations {
            all.extend(decompose_rotation(
                r.x_mask,
                r.z_mask,
                r.coeff * params[r.param],
            )?);
        }
        let mut folded = all.clone();
        for _ in 0..(fold - 1) / 2 {
            folded.extend(all.iter().rev().map(|g| g.inverse()));
            folded.extend(all.iter().copied());
        }
        folded
    };
    let energies: Vec<f64> = (0..noise.trajectories)
        .into_par_iter()
        .map(|traj| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(traj as u64 + 1);
            let state = if noiseless_gates {
                let mut s = apply_circuit(params, circuit, state0)?;
                for _ in 0..(fold - 1) / 2 {
                    for r in circuit.rotations.iter().rev() {
                        s.apply_pauli_rotation(r.x_mask, r.z_mask, -r.coeff * params[r.param])?;
                    }
                    for r in &circuit.rotations {
                        s.apply_pauli_rotation(r.x_mask, r.z_mask, r.coeff * params[r.param])?;
                    }
                }
                s
            } else {
                let mut s = state0.clone();
                for g in &gates {
                    s.apply_gate(*g);
                    let (q1, q2) = gate_qubits(*g);
                    match q2 {
                        None => {
                            if noise.p1 > 0.0 && rng.gen::<f64>() < noise.p1 {
                                let (x, z) = single_qubit_paulis(q1)[rng.gen_range(0..3)];
                                s.apply_pauli(x, z);
                            }
                        }
                        Some(q2) => {
                            if noise.p2 > 0.0 && rng.gen::<f64>() < noise.p2 {
                                // one of the 15 non-identity two-qubit Paulis
                                let k = rng.gen_range(1..16usize);
                                let (a, b) = (k % 4, k / 4);
                                let mut x = 0u64;
                                let mut z = 0u64;
                                for (op, q) in [(a, q1), (b, q2)] {
                                    match op {
                                        1 => x |= 1 << q,
                                        2 => {
                                            x |= 1 << q;
                                            z |= 1 << q;
                                        }
                                        3 => z |= 1 << q,
                                        _ => {}
                                    }
                                }
                                s.apply_pauli(x, z);
                            }
                        }
                    }
                }
                s
            };
            Ok(measured_energy(&state, hamiltonian, noise.shots, &mut rng))
        })
        .collect::<Result<_>>()?;
    let n = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / n;
    let stderr = if energies.len() > 1 {
        let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

/// Unfolded noisy energy.
pub fn noisy_energy(
    params: &[f64],
    circuit: &AnsatzCircuit,
    hamiltonian: &PauliSum,
    state0: &Statevector,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<(f64, f64)> {
    noisy_energy_folded(params, circuit, hamiltonian, state0, noise, seed, 1)
}

/// Least-squares linear fit of energy against fold factor, evaluated at zero
/// noise.
pub fn zne_extrapolate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::ContractViolation(
            "zero-noise extrapolation needs at least two fold factors".into(),
        ));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::ContractViolation(
            "zero-noise extrapolation needs two distinct fold factors".into(),
        ));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok(intercept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::parse_fcidump;

    #[test]
    fn h2_reference_is_0b0011() {
        let t = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n").unwrap();
        let s = prepare_reference(4, &t.reference_determinant()).unwrap();
        assert_eq!(s.amps[0b0011], Complex64::new(1.0, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beh2_reference_sets_six_of_fourteen_bits() {
        let t =
            parse_fcidump("&FCI NORB=7,NELEC=6,MS2=0,ORBSYM=1,1,5,3,2,1,5,ISYM=1 &END\n").unwrap();
        let s = prepare_reference(14, &t.reference_determinant()).unwrap();
        let idx = s
            .amps
            .iter()
            .position(|a| a.norm_sqr() > 0.5)
            .unwrap();
        assert_eq!(idx.count_ones(), 6);
        assert_eq!(idx, 0b111111);
    }

    #[test]
    fn zero_angle_rotation_is_identity() {
        let mut s = Statevector::basis_state(3, 0b101).unwrap();
        let before = s.clone();
        s.apply_pauli_rotation(0b011, 0b100, 0.0).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn pi_rotation_on_z_is_a_global_phase() {
        let mut s = Statevector::basis_state(1, 0).unwrap();
        s.apply_pauli_rotation(0, 1, std::f64::consts::PI).unwrap();
        // exp(i pi Z)|0> = -|0> up to sign convention; expectation unchanged
        assert!((s.amps[0].norm() - 1.0).abs() < 1e-12);
        assert!((s.pauli_expectation(0, 1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_rotation_errors() {
        let mut s = Statevector::basis_state(1, 0).unwrap();
        assert!(matches!(
            s.apply_pauli_rotation(0, 0, 0.1),
            Err(Error::DegenerateRotation)
        ));
    }

    #[test]
    fn z0_expectation_on_zero_state_is_plus_one() {
        let s = Statevector::basis_state(2, 0).unwrap();
        assert!((s.pauli_expectation(0, 1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_sum_expectation_returns_the_coefficient() {
        let s = Statevector::basis_state(2, 0b01).unwrap();
        let mut h = PauliSum::new(2);
        h.add(PauliTerm::identity(Complex64::new(-1.25, 0.0)));
        assert!((expectation(&s, &h).unwrap() + 1.25).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_observable_is_rejected() {
        let s = Statevector::basis_state(1, 0).unwrap();
        let mut h = PauliSum::new(1);
        h.add(PauliTerm {
            x_mask: 1,
            z_mask: 0,
            coeff: Complex64::new(0.0, 1.0),
        });
        assert!(matches!(
            expectation(&s, &h),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn qubit_cap_is_enforced() {
        assert!(matches!(
            Statevector::basis_state_with_cap(5, 0, 4),
            Err(Error::Capacity(_))
        ));
        assert!(Statevector::basis_state_with_cap(5, 0, 5).is_ok());
    }

    #[test]
    fn x_gate_equivalence_via_pauli_application() {
        let mut s = Statevector::basis_state(2, 0b00).unwrap();
        s.apply_pauli(0b10, 0); // X1
        assert_eq!(s.amps[0b10], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cnot_and_h_build_a_bell_state() {
        let mut s = Statevector::basis_state(2, 0).unwrap();
        s.apply_gate(Gate::H(0));
        s.apply_gate(Gate::Cnot {
            control: 0,
            target: 1,
        });
        assert!((s.amps[0b00].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amps[0b11].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn zne_flat_line_returns_the_energy() {
        assert!((zne_extrapolate(&[(1.0, -1.5), (3.0, -1.5)]).unwrap() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn zne_linear_fit_arithmetic() {
        let e = zne_extrapolate(&[(1.0, -1.0), (3.0, -0.9)]).unwrap();
        assert!((e + 1.05).abs() < 1e-12);
    }

    #[test]
    fn zne_needs_two_points() {
        assert!(zne_extrapolate(&[(1.0, -1.0)]).is_err());
        assert!(zne_extrapolate(&[(1.0, -1.0), (1.0, -1.1)]).is_err());
    }

    #[test]
    fn noise_spec_validation() {
        let mut n = NoiseSpec::default();
        assert!(n.validate().is_ok());
        n.fold_factors = vec![1, 2];
        assert!(n.validate().is_err());
        n.fold_factors = vec![3, 1];
        assert!(n.validate().is_err());
        n.fold_factors = vec![1, 3, 5];
        n.p1 = 1.5;
        assert!(n.validate().is_err());
    }

    #[test]
    fn sector_weights_classify_basis_states() {
        // two spatial orbitals with labels 1 and 5 (bits 0 and 4)
        let mut s = Statevector::basis_state(4, 0b0011).unwrap();
        s.amps[0b0011] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        s.amps[0b0110] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let w = irrep_sector_weights(&s, &[1, 5]);
        assert!((w[0] - 0.5).abs() < 1e-12); // both alpha+beta of orbital 0
        assert!((w[4] - 0.5).abs() < 1e-12); // one from each orbital
    }
}
