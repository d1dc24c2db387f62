//! Classical optimization and exact-diagonalization oracles: the VQE loop
//! (BFGS with analytic gradients), sector-restricted FCI, ADAPT-style
//! operator-pool growth, and potential-energy-surface scans over fixture
//! files.

use std::collections::HashMap;
use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{build_ansatz, AnsatzCircuit};
use crate::error::{Error, Result};
use crate::fermionics::{enumerate_pool, generator, Excitation};
use crate::integrals::IntegralTable;
use crate::pauli_jw::{jw_map, qubit_hamiltonian, PauliSum};
use crate::simulator::{
    apply_circuit, apply_sum, energy_and_gradient, expectation, prepare_reference, Statevector,
};
use crate::symmetry::filter_pool;

#[derive(Debug, Clone, Copy)]
pub struct VqeOptions {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for VqeOptions {
    fn default() -> Self {
        VqeOptions {
            max_iter: 2000,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub e: f64,
    pub gnorm: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Deltas {
    pub vs_fci: Option<f64>,
    pub vs_hf: Option<f64>,
    pub vs_unfiltered: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VqeReport {
    pub iterations: Vec<IterationRecord>,
    pub final_params: Vec<f64>,
    pub final_energy: f64,
    pub converged: bool,
    pub n_parameters: usize,
    pub deltas: Deltas,
}

/// Quasi-Newton minimization of the circuit energy from theta = 0.
///
/// Converged when both the energy change and the gradient max-norm drop
/// below `tol`; gives up (converged = false) after `max_iter` accepted
/// iterations.
pub fn vqe_minimize(
    circuit: &AnsatzCircuit,
    hamiltonian: &PauliSum,
    state0: &Statevector,
    options: VqeOptions,
) -> Result<VqeReport> {
    vqe_minimize_from(circuit, hamiltonian, state0, None, options)
}

/// As [`vqe_minimize`], but warm-started (used by the adaptive loop).
pub fn vqe_minimize_from(
    circuit: &AnsatzCircuit,
    hamiltonian: &PauliSum,
    state0: &Statevector,
    initial: Option<&[f64]>,
    options: VqeOptions,
) -> Result<VqeReport> {
    if options.tol <= 0.0 {
        return Err(Error::ContractViolation("tolerance must be positive".into()));
    }
    if circuit.n_parameters == 0 {
        let energy = expectation(state0, hamiltonian)?;
        return Ok(VqeReport {
            iterations: vec![IterationRecord {
                k: 0,
                e: energy,
                gnorm: 0.0,
            }],
            final_params: Vec::new(),
            final_energy: energy,
            converged: true,
            n_parameters: 0,
            deltas: Deltas::default(),
        });
    }
    let x0 = match initial {
        Some(x) => x.to_vec(),
        None => vec![0.0; circuit.n_parameters],
    };
    let mut records = Vec::new();
    let result = bfgs(
        |x| energy_and_gradient(x, circuit, hamiltonian, state0),
        &x0,
        options,
        &mut records,
    )?;
    Ok(VqeReport {
        iterations: records,
        final_params: result.x,
        final_energy: result.f,
        converged: result.converged,
        n_parameters: circuit.n_parameters,
        deltas: Deltas::default(),
    })
}

struct BfgsResult {
    x: Vec<f64>,
    f: f64,
    converged: bool,
}

fn max_norm(g: &[f64]) -> f64 {
    g.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Dense inverse-BFGS with a strong-Wolfe line search.
fn bfgs<F>(
    mut eval: F,
    x0: &[f64],
    options: VqeOptions,
    records: &mut Vec<IterationRecord>,
) -> Result<BfgsResult>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let (mut f, g) = eval(x.as_slice())?;
    let mut g = DVector::from_vec(g);
    if !f.is_finite() {
        return Err(Error::OptimizerDiverged(format!(
            "non-finite energy {f} at the initial point"
        )));
    }
    records.push(IterationRecord {
        k: 0,
        e: f,
        gnorm: max_norm(g.as_slice()),
    });
    if max_norm(g.as_slice()) < options.tol {
        return Ok(BfgsResult {
            x: x.as_slice().to_vec(),
            f,
            converged: true,
        });
    }
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut converged = false;
    for k in 1..=options.max_iter {
        let mut direction = -(&h_inv * &g);
        if direction.dot(&g) >= 0.0 {
            h_inv = DMatrix::identity(n, n);
            direction = -g.clone();
        }
        let (alpha, f_new, g_new, trace) =
            line_search_strong_wolfe(&mut eval, &x, f, &g, &direction)?;
        let Some(alpha) = alpha else {
            // line search failed to make progress; treat as converged if the
            // gradient is already tiny, otherwise report divergence
            if max_norm(g.as_slice()) < options.tol.max(1e-8) {
                converged = true;
                break;
            }
            return Err(Error::OptimizerDiverged(format!(
                "line search stalled at iteration {k}; trace: {trace}"
            )));
        };
        let g_new = DVector::from_vec(g_new);
        let step = alpha * &direction;
        let x_new = &x + &step;
        let y = &g_new - &g;
        let sy = step.dot(&y);
        if sy > 1e-12 {
            // inverse BFGS update
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            h_inv += (sy + yhy) * rho * rho * (&step * step.transpose());
            let correction = rho * (&hy * step.transpose());
            h_inv -= &correction + correction.transpose();
        } else {
            h_inv = DMatrix::identity(n, n);
        }
        let delta_e = (f - f_new).abs();
        x = x_new;
        g = g_new;
        f = f_new;
        let gnorm = max_norm(g.as_slice());
        records.push(IterationRecord { k, e: f, gnorm });
        if delta_e < options.tol && gnorm < options.tol {
            converged = true;
            break;
        }
    }
    Ok(BfgsResult {
        x: x.as_slice().to_vec(),
        f,
        converged,
    })
}

/// Strong-Wolfe line search (Nocedal-Wright bracketing plus zoom with
/// bisection); returns the accepted step and its evaluation, or None when no
/// acceptable step exists within the budget.
#[allow(clippy::type_complexity)]
fn line_search_strong_wolfe<F>(
    eval: &mut F,
    x: &DVector<f64>,
    f0: f64,
    g0: &DVector<f64>,
    direction: &DVector<f64>,
) -> Result<(Option<f64>, f64, Vec<f64>, String)>
where
    F: FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
{
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    const MAX_EVALS: usize = 40;
    let d0 = g0.dot(direction);
    if d0 >= 0.0 {
        return Ok((None, f0, g0.as_slice().to_vec(), "non-descent direction".into()));
    }
    let mut trace = String::new();
    let mut evals = 0usize;
    let mut probe = |alpha: f64, evals: &mut usize| -> Result<(f64, Vec<f64>, f64)> {
        *evals += 1;
        let xt = x + alpha * direction;
        let (f, g) = eval(xt.as_slice())?;
        if !f.is_finite() {
            return Err(Error::OptimizerDiverged(format!(
                "non-finite energy at step {alpha}"
            )));
        }
        let slope = DVector::from_column_slice(&g).dot(direction);
        Ok((f, g, slope))
    };

    let mut alpha_prev = 0.0;
    let mut f_prev = f0;
    let mut alpha = 1.0;
    let mut bracket: Option<(f64, f64, f64, f64)> = None; // (lo, f_lo, hi, f_hi)
    let mut last = None;
    for _ in 0..12 {
        let (f, g, slope) = probe(alpha, &mut evals)?;
        if f > f0 + C1 * alpha * d0 || (alpha_prev > 0.0 && f >= f_prev) {
            bracket = Some((alpha_prev, f_prev, alpha, f));
            break;
        }
        if slope.abs() <= -C2 * d0 {
            return Ok((Some(alpha), f, g, trace));
        }
        if slope >= 0.0 {
            bracket = Some((alpha, f, alpha_prev, f_prev));
            break;
        }
        last = Some((alpha, f, g.clone()));
        alpha_prev = alpha;
        f_prev = f;
        alpha *= 2.0;
        if evals > MAX_EVALS {
            break;
        }
    }
    if bracket.is_none() {
        // ran out of expansion budget: accept the best sufficient-decrease
        // point if any
        if let Some((a, f, g)) = last {
            if f < f0 {
                return Ok((Some(a), f, g, trace));
            }
        }
        trace.push_str("no bracket found; ");
        return Ok((None, f0, g0.as_slice().to_vec(), trace));
    }
    let (mut lo, mut f_lo, mut hi, mut f_hi) = bracket.unwrap();
    for _ in 0..30 {
        if evals > MAX_EVALS {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() < 1e-14 || mid == lo || mid == hi {
            break;
        }
        let (f, g, slope) = probe(mid, &mut evals)?;
        if f > f0 + C1 * mid * d0 || f >= f_lo {
            hi = mid;
            f_hi = f;
        } else {
            if slope.abs() <= -C2 * d0 {
                return Ok((Some(mid), f, g, trace));
            }
            if slope * (hi - lo) >= 0.0 {
                hi = lo;
                f_hi = f_lo;
            }
            lo = mid;
            f_lo = f;
        }
        let _ = f_hi;
    }
    // fall back to the low end of the bracket if it decreases the energy
    if f_lo < f0 && lo > 0.0 {
        let (f, g, _) = probe(lo, &mut evals)?;
        trace.push_str("zoom budget exhausted; accepted bracket low point; ");
        return Ok((Some(lo), f, g, trace));
    }
    trace.push_str("zoom failed; ");
    Ok((None, f0, g0.as_slice().to_vec(), trace))
}

// ---------------------------------------------------------------------------
// Sector-restricted exact diagonalization.
// ---------------------------------------------------------------------------

/// Number of Sz = 0 determinants for `n_spatial` orbitals and `n_electrons`
/// electrons.
pub fn sector_dimension(n_spatial: usize, n_electrons: usize) -> usize {
    let k = binomial(n_spatial, n_electrons / 2);
    k * k
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn spatial_combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

const FCI_QUBIT_LIMIT: usize = 16;
const FCI_DENSE_LIMIT: usize = 4096;
const FCI_RESIDUAL: f64 = 1e-10;

struct SectorMatrix {
    dim: usize,
    // CSR over columns (symmetric, so row/column view is interchangeable)
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    vals: Vec<f64>,
}

impl SectorMatrix {
    fn matvec(&self, v: &[f64], out: &mut [f64]) {
        out.par_iter_mut().enumerate().for_each(|(c, o)| {
            let mut acc = 0.0;
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                acc += self.vals[k] * v[self.rows[k] as usize];
            }
            *o = acc;
        });
    }
}

/// Exact lowest eigenpair of the qubit Hamiltonian restricted to the sector
/// with the given particle number and spin projection (`twice_sz` = 2 Sz).
///
/// Dense diagonalization below dimension 4096, Lanczos with full
/// reorthogonalization above; the returned vector lives on the full qubit
/// register.
pub fn fci_solve(
    hamiltonian: &PauliSum,
    n_electrons: usize,
    twice_sz: i32,
) -> Result<(f64, Statevector)> {
    let n_qubits = hamiltonian.n_qubits;
    if n_qubits > FCI_QUBIT_LIMIT {
        return Err(Error::Capacity(format!(
            "FCI sector solve supports at most {FCI_QUBIT_LIMIT} qubits, got {n_qubits}"
        )));
    }
    if n_qubits % 2 != 0 {
        return Err(Error::ContractViolation(
            "qubit register must hold an integer number of spatial orbitals".into(),
        ));
    }
    let n_spatial = n_qubits / 2;
    let na_twice = n_electrons as i32 + twice_sz;
    if na_twice % 2 != 0 || na_twice < 0 {
        return Err(Error::ContractViolation(format!(
            "incompatible electron count {n_electrons} and 2Sz = {twice_sz}"
        )));
    }
    let n_alpha = (na_twice / 2) as usize;
    let n_beta = n_electrons - n_alpha;
    if n_alpha > n_spatial || n_beta > n_spatial {
        return Err(Error::ContractViolation(
            "more electrons per spin than spatial orbitals".into(),
        ));
    }

    let alpha_masks: Vec<u64> = spatial_combinations(n_spatial, n_alpha)
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &orb| m | 1 << (2 * orb)))
        .collect();
    let beta_masks: Vec<u64> = spatial_combinations(n_spatial, n_beta)
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &orb| m | 1 << (2 * orb + 1)))
        .collect();
    let mut basis = Vec::with_capacity(alpha_masks.len() * beta_masks.len());
    for &a in &alpha_masks {
        for &b in &beta_masks {
            basis.push(a | b);
        }
    }
    let index: HashMap<u64, u32> = basis
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let dim = basis.len();

    // column-wise sparse build
    let terms: Vec<_> = hamiltonian.iter().collect();
    let columns: Vec<Vec<(u32, f64)>> = basis
        .par_iter()
        .map(|&s| {
            let mut entries: HashMap<u32, Complex64> = HashMap::new();
            for t in &terms {
                let target = s ^ t.x_mask;
                if let Some(&row) = index.get(&target) {
                    let y = (t.x_mask & t.z_mask).count_ones();
                    let mut phase = match y % 4 {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    };
                    if (s & t.z_mask).count_ones() % 2 == 1 {
                        phase = -phase;
                    }
                    *entries.entry(row).or_insert(Complex64::new(0.0, 0.0)) += t.coeff * phase;
                }
            }
            let mut col: Vec<(u32, f64)> = entries
                .into_iter()
                .filter(|(_, v)| v.norm() > 1e-14)
                .map(|(r, v)| {
                    debug_assert!(v.im.abs() < 1e-10);
                    (r, v.re)
                })
                .collect();
            col.sort_unstable_by_key(|e| e.0);
            col
        })
        .collect();

    let energy;
    let sector_vec: Vec<f64>;
    if dim < FCI_DENSE_LIMIT {
        let mut mat = DMatrix::<f64>::zeros(dim, dim);
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                mat[(r as usize, c)] = v;
            }
        }
        let eig = mat.symmetric_eigen();
        let mut best = 0;
        for i in 1..dim {
            if eig.eigenvalues[i] < eig.eigenvalues[best] {
                best = i;
            }
        }
        energy = eig.eigenvalues[best];
        sector_vec = eig.eigenvectors.column(best).iter().copied().collect();
    } else {
        let mut col_ptr = Vec::with_capacity(dim + 1);
        let mut rows = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for col in &columns {
            for &(r, v) in col {
                rows.push(r);
                vals.push(v);
            }
            col_ptr.push(rows.len());
        }
        let matrix = SectorMatrix {
            dim,
            col_ptr,
            rows,
            vals,
        };
        // start from the aufbau determinant when it lives in this sector
        let mut start = vec![0.0; dim];
        let hf_mask = {
            let mut m = 0u64;
            for orb in 0..n_alpha {
                m |= 1 << (2 * orb);
            }
            for orb in 0..n_beta {
                m |= 1 << (2 * orb + 1);
            }
            m
        };
        match index.get(&hf_mask) {
            Some(&i) => start[i as usize] = 1.0,
            None => start.iter_mut().for_each(|v| *v = 1.0),
        }
        let (e, v) = lanczos_ground(&matrix, &start)?;
        energy = e;
        sector_vec = v;
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (i, &s) in basis.iter().enumerate() {
        amps[s as usize] = Complex64::new(sector_vec[i], 0.0);
    }
    Ok((
        energy,
        Statevector {
            amps,
            n_qubits,
        },
    ))
}

/// Lanczos with full reorthogonalization targeting the lowest eigenpair.
fn lanczos_ground(matrix: &SectorMatrix, start: &[f64]) -> Result<(f64, Vec<f64>)> {
    let dim = matrix.dim;
    let max_outer = 8;
    let max_inner = 250.min(dim);
    let mut v0: Vec<f64> = start.to_vec();
    for _restart in 0..max_outer {
        let norm = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::OptimizerDiverged(
                "Lanczos start vector vanished".into(),
            ));
        }
        v0.iter_mut().for_each(|x| *x /= norm);
        let mut basis: Vec<Vec<f64>> = vec![v0.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        matrix.matvec(&basis[0], &mut w);
        for k in 0..max_inner {
            let vk = &basis[k];
            let alpha = vk.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            alphas.push(alpha);
            for (wi, vi) in w.iter_mut().zip(vk) {
                *wi -= alpha * vi;
            }
            // full reorthogonalization, twice for numerical hygiene
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>();
                    if overlap != 0.0 {
                        for (wi, bi) in w.iter_mut().zip(b) {
                            *wi -= overlap * bi;
                        }
                    }
                }
            }
            let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let m = alphas.len();
            let check_now = beta < 1e-12 || m == max_inner || m % 5 == 0;
            if check_now {
                let (theta, s) = tridiag_ground(&alphas, &betas);
                let residual = beta * s[m - 1].abs();
                if residual < FCI_RESIDUAL || beta < 1e-12 || m == max_inner {
                    let mut x = vec![0.0; dim];
                    for (coef, b) in s.iter().zip(&basis) {
                        for (xi, bi) in x.iter_mut().zip(b) {
                            *xi += coef * bi;
                        }
                    }
                    if residual < FCI_RESIDUAL || beta < 1e-12 {
                        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                        x.iter_mut().for_each(|v| *v /= nx);
                        return Ok((theta, x));
                    }
                    // restart from the best Ritz vector
                    v0 = x;
                    break;
                }
            }
            betas.push(beta);
            let vnext: Vec<f64> = w.iter().map(|x| x / beta).collect();
            matrix.matvec(&vnext, &mut w);
            basis.push(vnext);
        }
    }
    Err(Error::OptimizerDiverged(
        "Lanczos did not reach the residual target".into(),
    ))
}

/// Ground eigenpair of a symmetric tridiagonal matrix (diag `alphas`,
/// off-diagonal `betas`).
fn tridiag_ground(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..m {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    (
        eig.eigenvalues[best],
        eig.eigenvectors.column(best).iter().copied().collect(),
    )
}

// ---------------------------------------------------------------------------
// ADAPT-style pool growth.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AdaptRound {
    pub round: usize,
    pub avg_gradient: f64,
    pub max_gradient: f64,
    /// Pool index of the operator appended this round (None on the final,
    /// terminating screening round).
    pub selected: Option<usize>,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct AdaptReport {
    pub selected: Vec<Excitation>,
    pub rounds: Vec<AdaptRound>,
    pub final_params: Vec<f64>,
    pub final_energy: f64,
    pub pool_size: usize,
}

/// Gradient-screened adaptive ansatz growth.
///
/// Each round evaluates `|dE/d theta|` at `theta = 0` for every pool operator
/// appended to the current circuit, stops when the pool-average gradient
/// drops below `epsilon`, and otherwise appends the max-gradient operator
/// (lowest pool index on ties, re-selection across rounds permitted) and
/// re-optimizes every parameter from its previous value.
pub fn adapt_vqe(
    pool: &[Excitation],
    table: &IntegralTable,
    hamiltonian: &PauliSum,
    state0: &Statevector,
    epsilon: f64,
    options: VqeOptions,
) -> Result<AdaptReport> {
    if epsilon <= 0.0 {
        return Err(Error::ContractViolation("epsilon must be positive".into()));
    }
    let n_qubits = table.n_qubits();
    let pool_sums: Vec<PauliSum> = pool
        .iter()
        .map(|exc| jw_map(&generator(exc), n_qubits))
        .collect::<Result<_>>()?;

    let mut selected: Vec<Excitation> = Vec::new();
    let mut params: Vec<f64> = Vec::new();
    let mut rounds: Vec<AdaptRound> = Vec::new();
    let mut energy = expectation(state0, hamiltonian)?;
    let max_rounds = 4 * pool.len().max(1);

    for round in 0..max_rounds {
        let circuit = build_ansatz(&selected, table)?;
        let psi = apply_circuit(&params, &circuit, state0)?;
        let lambda = apply_sum(&psi, hamiltonian);
        // dE/d theta_k at 0 for operator k appended: 2 Re <lambda|G_k|psi>
        let grads: Vec<f64> = pool_sums
            .par_iter()
            .map(|g| {
                let gpsi = apply_sum(&psi, g);
                let inner: Complex64 = lambda
                    .amps
                    .iter()
                    .zip(&gpsi.amps)
                    .map(|(l, v)| l.conj() * v)
                    .sum();
                2.0 * inner.re
            })
            .collect();
        let avg = grads.iter().map(|g| g.abs()).sum::<f64>() / grads.len().max(1) as f64;
        let (mut best, mut best_val) = (0usize, -1.0f64);
        for (i, g) in grads.iter().enumerate() {
            if g.abs() > best_val {
                best_val = g.abs();
                best = i;
            }
        }
        if avg < epsilon {
            rounds.push(AdaptRound {
                round,
                avg_gradient: avg,
                max_gradient: best_val,
                selected: None,
                energy,
            });
            break;
        }
        selected.push(pool[best].clone());
        params.push(0.0);
        let circuit = build_ansatz(&selected, table)?;
        let report = vqe_minimize_from(&circuit, hamiltonian, state0, Some(&params), options)?;
        params = report.final_params.clone();
        energy = report.final_energy;
        rounds.push(AdaptRound {
            round,
            avg_gradient: avg,
            max_gradient: best_val,
            selected: Some(best),
            energy,
        });
    }

    Ok(AdaptReport {
        selected,
        rounds,
        final_params: params,
        final_energy: energy,
        pool_size: pool.len(),
    })
}

// ---------------------------------------------------------------------------
// Potential-energy-surface scans.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMethod {
    Vqe,
    Fci,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub label: String,
    pub energy: Option<f64>,
    pub error: Option<String>,
}

/// Independent per-fixture solves; failures are recorded per row and the
/// scan continues.
pub fn pes_scan(
    fixtures: &[PathBuf],
    method: ScanMethod,
    filter: bool,
    options: VqeOptions,
) -> Vec<ScanRow> {
    fixtures
        .iter()
        .map(|path| {
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            match scan_one(path, method, filter, options) {
                Ok(energy) => ScanRow {
                    label,
                    energy: Some(energy),
                    error: None,
                },
                Err(e) => ScanRow {
                    label,
                    energy: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn scan_one(
    path: &PathBuf,
    method: ScanMethod,
    filter: bool,
    options: VqeOptions,
) -> Result<f64> {
    let table = IntegralTable::from_file(path)?;
    let hamiltonian = qubit_hamiltonian(&table)?;
    match method {
        ScanMethod::Fci => Ok(fci_solve(&hamiltonian, table.n_electrons, 0)?.0),
        ScanMethod::Vqe => {
            let reference = table.reference_determinant();
            let state0 = prepare_reference(table.n_qubits(), &reference)?;
            let pool = enumerate_pool(&table);
            let pool = if filter {
                filter_pool(&pool, &table, reference.irrep)
            } else {
                pool
            };
            let circuit = build_ansatz(&pool, &table)?;
            Ok(vqe_minimize(&circuit, &hamiltonian, &state0, options)?.final_energy)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::parse_fcidump;

    #[test]
    fn zero_rotation_circuit_reports_the_reference_energy_in_one_iteration() {
        let t = parse_fcidump(
            "&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n 0.5 1 1 0 0\n 1.0 0 0 0 0\n",
        )
        .unwrap();
        let h = qubit_hamiltonian(&t).unwrap();
        let state0 = prepare_reference(4, &t.reference_determinant()).unwrap();
        let circuit = build_ansatz(&[], &t).unwrap();
        let report = vqe_minimize(&circuit, &h, &state0, VqeOptions::default()).unwrap();
        assert_eq!(report.iterations.len(), 1);
        assert!(report.converged);
        assert!((report.final_energy - t.hf_energy()).abs() < 1e-12);
    }

    #[test]
    fn bfgs_minimizes_a_quadratic() {
        let mut records = Vec::new();
        let result = bfgs(
            |x| {
                let f = (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
                let g = vec![2.0 * (x[0] - 1.0), 20.0 * (x[1] + 2.0)];
                Ok((f, g))
            },
            &[0.0, 0.0],
            VqeOptions {
                max_iter: 100,
                tol: 1e-9,
            },
            &mut records,
        )
        .unwrap();
        assert!(result.converged);
        assert!((result.x[0] - 1.0).abs() < 1e-6);
        assert!((result.x[1] + 2.0).abs() < 1e-6);
        // descent: energies non-increasing across accepted iterations
        for w in records.windows(2) {
            assert!(w[1].e <= w[0].e + 1e-12);
        }
    }

    #[test]
    fn sector_dimension_matches_the_combinatorial_identity() {
        assert_eq!(sector_dimension(7, 6), 1225); // C(7,3)^2
        assert_eq!(sector_dimension(2, 2), 4);
        assert_eq!(sector_dimension(6, 4), 225);
    }

    #[test]
    fn fci_rejects_oversized_registers() {
        let h = PauliSum::new(18);
        assert!(matches!(
            fci_solve(&h, 10, 0),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn zne_shape_of_adapt_epsilon_contract() {
        let t = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n").unwrap();
        let h = qubit_hamiltonian(&t).unwrap();
        let state0 = prepare_reference(4, &t.reference_determinant()).unwrap();
        let pool = enumerate_pool(&t);
        assert!(matches!(
            adapt_vqe(&pool, &t, &h, &state0, 0.0, VqeOptions::default()),
            Err(Error::ContractViolation(_))
        ));
    }
}
