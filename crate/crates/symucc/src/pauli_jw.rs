//! Phase-tracked Pauli-string algebra and the Jordan-Wigner mapping.
//!
//! A Pauli string is a pair of bit masks: qubit `q` carries X when only the
//! x-bit is set, Z when only the z-bit is set, Y when both are set. The
//! stored coefficient multiplies the literal string of sigma matrices.
//!
//! Jordan-Wigner convention: qubit index equals spin-orbital index, an
//! occupied spin-orbital is |1>, and
//! `a^dag_p = (X_p - iY_p)/2 (x) Z_{p-1} ... Z_0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermionics::FermionTermList;
use crate::integrals::IntegralTable;

pub const COEFF_PRUNE_THRESHOLD: f64 = 1e-12;

/// One Pauli string with a complex coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub x_mask: u64,
    pub z_mask: u64,
    pub coeff: Complex64,
}

impl PauliTerm {
    pub fn identity(coeff: Complex64) -> PauliTerm {
        PauliTerm {
            x_mask: 0,
            z_mask: 0,
            coeff,
        }
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    fn y_count(self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    /// Matrix product `self * other` with the phase tracked through the
    /// {1, i, -1, -i} cycle.
    pub fn mul(self, other: PauliTerm) -> PauliTerm {
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // via the X^x Z^z normal form: each Y contributes i, commuting
        // X^x2 through Z^z1 contributes (-1)^{|z1 & x2|}
        let mut phase = (self.y_count() + other.y_count()) as i64
            - PauliTerm {
                x_mask: x,
                z_mask: z,
                coeff: Complex64::new(1.0, 0.0),
            }
            .y_count() as i64;
        phase += 2 * (self.z_mask & other.x_mask).count_ones() as i64;
        let unit = match phase.rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliTerm {
            x_mask: x,
            z_mask: z,
            coeff: self.coeff * other.coeff * unit,
        }
    }

    /// Symplectic commutation test: even overlap parity means the strings
    /// commute.
    pub fn commutes_with(self, other: PauliTerm) -> bool {
        let overlap = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        overlap % 2 == 0
    }

    /// Render as e.g. `X0 Z2 Y3` (identity renders as `I`).
    pub fn label(self) -> String {
        let mut out = String::new();
        let support = self.x_mask | self.z_mask;
        if support == 0 {
            return "I".into();
        }
        for q in 0..64 {
            let bit = 1u64 << q;
            if support & bit == 0 {
                continue;
            }
            let letter = match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
                (false, false) => unreachable!(),
            };
            if !out.is_empty() {
                out.push(' ');
            }
            let _ = write!(out, "{letter}{q}");
        }
        out
    }
}

/// A linear combination of Pauli strings over a fixed qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    terms: BTreeMap<(u64, u64), Complex64>,
    pub n_qubits: usize,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> PauliSum {
        PauliSum {
            terms: BTreeMap::new(),
            n_qubits,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, term: PauliTerm) {
        let entry = self
            .terms
            .entry((term.x_mask, term.z_mask))
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += term.coeff;
    }

    pub fn add_sum(&mut self, other: &PauliSum) {
        for t in other.iter() {
            self.add(t);
        }
    }

    /// Drop entries with |coefficient| below the pruning threshold.
    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() > COEFF_PRUNE_THRESHOLD);
    }

    /// Terms in ascending (x_mask, z_mask) order.
    pub fn iter(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|(&(x, z), &c)| PauliTerm {
            x_mask: x,
            z_mask: z,
            coeff: c,
        })
    }

    pub fn coefficient(&self, x_mask: u64, z_mask: u64) -> Complex64 {
        self.terms
            .get(&(x_mask, z_mask))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Hermitian iff every coefficient is real (Pauli strings are Hermitian).
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// All coefficients purely imaginary (anti-Hermitian sum).
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    pub fn scale(&mut self, factor: Complex64) {
        for c in self.terms.values_mut() {
            *c *= factor;
        }
    }

    /// One line per term, `{re:+e}{im:+e}i X0 Z1 ...`, sorted by mask for
    /// reproducible diffs.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for t in self.iter() {
            let _ = writeln!(
                out,
                "{:+.12e}{:+.12e}i {}",
                t.coeff.re,
                t.coeff.im,
                t.label()
            );
        }
        out
    }
}

/// Jordan-Wigner image of one ladder operator: two half-weight strings with a
/// Z chain on every lower qubit.
fn jw_ladder(index: usize, create: bool) -> [PauliTerm; 2] {
    let bit = 1u64 << index;
    let chain = bit - 1; // Z on qubits 0..index
    let y_sign = if create { -0.5 } else { 0.5 };
    [
        PauliTerm {
            x_mask: bit,
            z_mask: chain,
            coeff: Complex64::new(0.5, 0.0),
        },
        PauliTerm {
            // Y = both masks set; stored coefficient multiplies the Y string
            x_mask: bit,
            z_mask: chain | bit,
            coeff: Complex64::new(0.0, y_sign),
        },
    ]
}

/// Map a ladder-operator term list onto the qubit register.
pub fn jw_map(terms: &FermionTermList, n_qubits: usize) -> Result<PauliSum> {
    let mut sum = PauliSum::new(n_qubits);
    for term in &terms.terms {
        for &(index, _) in &term.ops {
            if index >= n_qubits {
                return Err(Error::Index(format!(
                    "spin-orbital {index} does not fit in {n_qubits} qubits"
                )));
            }
        }
        let mut expansion = vec![PauliTerm::identity(term.coeff)];
        for &(index, create) in &term.ops {
            let factors = jw_ladder(index, create);
            let mut next = Vec::with_capacity(expansion.len() * 2);
            for lhs in &expansion {
                for rhs in &factors {
                    next.push(lhs.mul(*rhs));
                }
            }
            expansion = next;
        }
        for t in expansion {
            sum.add(t);
        }
    }
    sum.simplify();
    Ok(sum)
}

/// The qubit Hamiltonian of an integral table (JW over 2 * n_spatial qubits).
pub fn qubit_hamiltonian(table: &IntegralTable) -> Result<PauliSum> {
    jw_map(
        &crate::fermionics::hamiltonian_terms(table),
        table.n_qubits(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionics::{generator, Excitation, FermionTermList};

    fn x(q: usize) -> PauliTerm {
        PauliTerm {
            x_mask: 1 << q,
            z_mask: 0,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    fn y(q: usize) -> PauliTerm {
        PauliTerm {
            x_mask: 1 << q,
            z_mask: 1 << q,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    fn z(q: usize) -> PauliTerm {
        PauliTerm {
            x_mask: 0,
            z_mask: 1 << q,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn single_qubit_products() {
        let xy = x(0).mul(y(0));
        assert_eq!((xy.x_mask, xy.z_mask), (0, 1));
        assert_eq!(xy.coeff, Complex64::new(0.0, 1.0)); // X*Y = iZ
        let zz = z(0).mul(z(0));
        assert_eq!((zz.x_mask, zz.z_mask), (0, 0));
        assert_eq!(zz.coeff, Complex64::new(1.0, 0.0)); // involution
        let yx = y(0).mul(x(0));
        assert_eq!(yx.coeff, Complex64::new(0.0, -1.0)); // Y*X = -iZ
    }

    #[test]
    fn multi_qubit_product_with_phase() {
        // (X0 Z1) * (Z0 Z1) = -i Y0
        let a = x(0).mul(z(1));
        let b = z(0).mul(z(1));
        let p = a.mul(b);
        assert_eq!((p.x_mask, p.z_mask), (1, 1));
        assert_eq!(p.coeff, Complex64::new(0.0, -1.0));
    }

    #[test]
    fn commutation_predicate_matches_pauli_rules() {
        assert!(!x(0).commutes_with(z(0)));
        assert!(x(0).commutes_with(x(0)));
        assert!(x(0).commutes_with(z(1)));
        // XX vs ZZ on two qubits: two anticommuting sites -> commute
        assert!(x(0).mul(x(1)).commutes_with(z(0).mul(z(1))));
    }

    #[test]
    fn number_operator_maps_to_half_one_minus_z() {
        let mut t = FermionTermList::default();
        t.push(Complex64::new(1.0, 0.0), vec![(2, true), (2, false)]);
        let sum = jw_map(&t, 4).unwrap();
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.coefficient(0, 0), Complex64::new(0.5, 0.0));
        assert_eq!(sum.coefficient(0, 1 << 2), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn single_excitation_generator_expands_to_two_strings_per_spin() {
        // alpha channel of the 0 -> 2 single: qubits 0 and 4, Z chain between
        let g = generator(&Excitation::single(0, 2, 0));
        let sum = jw_map(&g, 6).unwrap();
        // two spin channels, two strings each
        assert_eq!(sum.len(), 4);
        let chain = 0b01110u64; // Z on qubits 1..=3 for the alpha channel
        let xy = sum.coefficient(0b10001, chain | 0b00001);
        let yx = sum.coefficient(0b10001, chain | 0b10000);
        // i/2 (X_a Y_i - Y_a X_i) (x) Z-chain
        assert_eq!(xy, Complex64::new(0.0, 0.5));
        assert_eq!(yx, Complex64::new(0.0, -0.5));
        assert!(sum.is_anti_hermitian(0.0));
    }

    #[test]
    fn adjacent_single_excitation_has_no_z_chain() {
        let mut t = FermionTermList::default();
        t.push(Complex64::new(1.0, 0.0), vec![(1, true), (0, false)]);
        t.push(Complex64::new(-1.0, 0.0), vec![(0, true), (1, false)]);
        let sum = jw_map(&t, 2).unwrap();
        assert_eq!(sum.len(), 2);
        assert_eq!(sum.coefficient(0b11, 0b01), Complex64::new(0.0, 0.5)); // X1 Y0
        assert_eq!(sum.coefficient(0b11, 0b10), Complex64::new(0.0, -0.5)); // Y1 X0
    }

    #[test]
    fn paired_double_generator_expands_to_eight_weight_four_strings() {
        let g = generator(&Excitation::double((0, 1), (0, 1), 0));
        let sum = jw_map(&g, 4).unwrap();
        assert_eq!(sum.len(), 8);
        for t in sum.iter() {
            assert_eq!(t.weight(), 4);
            assert!((t.coeff.im.abs() - 0.125).abs() < 1e-15);
            assert_eq!(t.coeff.re, 0.0);
        }
    }

    #[test]
    fn jw_is_linear() {
        let mut a = FermionTermList::default();
        a.push(Complex64::new(1.0, 0.0), vec![(0, true), (1, false)]);
        let mut b = FermionTermList::default();
        b.push(Complex64::new(1.0, 0.0), vec![(2, true), (2, false)]);
        let mut ab = a.clone();
        ab.extend(b.clone().scaled(Complex64::new(2.0, 0.0)));
        let sum_a = jw_map(&a, 4).unwrap();
        let mut sum_b = jw_map(&b, 4).unwrap();
        sum_b.scale(Complex64::new(2.0, 0.0));
        let mut expect = sum_a;
        expect.add_sum(&sum_b);
        expect.simplify();
        let got = jw_map(&ab, 4).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn out_of_range_index_is_an_error() {
        let mut t = FermionTermList::default();
        t.push(Complex64::new(1.0, 0.0), vec![(5, true)]);
        assert!(matches!(jw_map(&t, 4), Err(Error::Index(_))));
    }

    #[test]
    fn core_only_hamiltonian_maps_to_identity() {
        let table = crate::integrals::parse_fcidump(
            "&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n 1.0 0 0 0 0\n",
        )
        .unwrap();
        let h = qubit_hamiltonian(&table).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.coefficient(0, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dump_is_sorted_and_stable() {
        let mut sum = PauliSum::new(2);
        sum.add(z(1));
        sum.add(x(0));
        let d1 = sum.dump();
        let d2 = sum.dump();
        assert_eq!(d1, d2);
        let lines: Vec<&str> = d1.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].ends_with("Z1"));
        assert!(lines[1].ends_with("X0"));
    }
}
