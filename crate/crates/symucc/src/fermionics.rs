//! Spin-adapted excitation pool enumeration and second-quantized operators.
//!
//! Spin-orbital convention: index `2*spatial + spin` with spin 0 = alpha,
//! 1 = beta (interleaved). Each pool entry owns exactly one variational
//! parameter; spin adaptation shares that parameter across all S_z-conserving
//! spin realizations of the spatial excitation pattern.

use num_complex::Complex64;

use crate::integrals::IntegralTable;

/// A spatial-orbital excitation pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExcitationKind {
    /// One electron promoted from occupied `occ` to virtual `virt`.
    Single { occ: usize, virt: usize },
    /// Two single-excitation pairs `(i, a)` and `(j, b)`, stored in
    /// nondecreasing lexicographic order; `pair1 == pair2` is the paired
    /// excitation that moves both electrons of one orbital.
    Double {
        pair1: (usize, usize),
        pair2: (usize, usize),
    },
}

/// A pool entry: an excitation pattern plus its position in the shared
/// parameter vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    pub kind: ExcitationKind,
    pub parameter_index: usize,
}

impl Excitation {
    pub fn single(occ: usize, virt: usize, parameter_index: usize) -> Excitation {
        Excitation {
            kind: ExcitationKind::Single { occ, virt },
            parameter_index,
        }
    }

    pub fn double(pair1: (usize, usize), pair2: (usize, usize), parameter_index: usize) -> Excitation {
        let (pair1, pair2) = if pair1 <= pair2 {
            (pair1, pair2)
        } else {
            (pair2, pair1)
        };
        Excitation {
            kind: ExcitationKind::Double { pair1, pair2 },
            parameter_index,
        }
    }

    pub fn is_single(&self) -> bool {
        matches!(self.kind, ExcitationKind::Single { .. })
    }

    /// Short human-readable form, e.g. `s[2->4]` or `d[(0,3)(1,4)]`.
    pub fn describe(&self) -> String {
        match self.kind {
            ExcitationKind::Single { occ, virt } => format!("s[{occ}->{virt}]"),
            ExcitationKind::Double { pair1, pair2 } => {
                format!("d[({},{})({},{})]", pair1.0, pair1.1, pair2.0, pair2.1)
            }
        }
    }
}

/// One ladder operator: spin-orbital index plus creation flag.
pub type FermionOp = (usize, bool);

/// A scalar multiple of an ordered product of ladder operators. The operator
/// string applies right-to-left, matrix style.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coeff: Complex64,
    pub ops: Vec<FermionOp>,
}

/// A linear combination of ladder-operator strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionTermList {
    pub terms: Vec<FermionTerm>,
}

impl FermionTermList {
    pub fn push(&mut self, coeff: Complex64, ops: Vec<FermionOp>) {
        self.terms.push(FermionTerm { coeff, ops });
    }

    /// The Hermitian conjugate: every string reversed with creation flags
    /// flipped and coefficients conjugated.
    pub fn dagger(&self) -> FermionTermList {
        FermionTermList {
            terms: self
                .terms
                .iter()
                .map(|t| FermionTerm {
                    coeff: t.coeff.conj(),
                    ops: t.ops.iter().rev().map(|&(p, c)| (p, !c)).collect(),
                })
                .collect(),
        }
    }

    pub fn extend(&mut self, other: FermionTermList) {
        self.terms.extend(other.terms);
    }

    pub fn scaled(&self, factor: Complex64) -> FermionTermList {
        FermionTermList {
            terms: self
                .terms
                .iter()
                .map(|t| FermionTerm {
                    coeff: t.coeff * factor,
                    ops: t.ops.clone(),
                })
                .collect(),
        }
    }
}

/// Alpha spin-orbital of spatial orbital `p`.
pub fn alpha(p: usize) -> usize {
    2 * p
}

/// Beta spin-orbital of spatial orbital `p`.
pub fn beta(p: usize) -> usize {
    2 * p + 1
}

/// Enumerate the restricted closed-shell singles-and-doubles pool.
///
/// With `n` occupied and `m` virtual spatial orbitals this yields `m*n`
/// singles followed by `m*n + C(m*n, 2)` doubles (pairs of single patterns in
/// nondecreasing lexicographic order), every entry carrying one parameter.
pub fn enumerate_pool(table: &IntegralTable) -> Vec<Excitation> {
    let n_occ = table.n_occ();
    let n = table.n_spatial;
    let mut singles = Vec::new();
    for occ in 0..n_occ {
        for virt in n_occ..n {
            singles.push((occ, virt));
        }
    }
    let mut pool = Vec::new();
    for &(occ, virt) in &singles {
        let idx = pool.len();
        pool.push(Excitation::single(occ, virt, idx));
    }
    for i in 0..singles.len() {
        for j in i..singles.len() {
            let idx = pool.len();
            pool.push(Excitation::double(singles[i], singles[j], idx));
        }
    }
    pool
}

fn one(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The theta-free anti-Hermitian generator `G = t - t^dagger` of an
/// excitation, as a ladder-operator term list over interleaved spin-orbitals.
///
/// Singles sum the alpha and beta channels; doubles sum every S_z-conserving
/// spin assignment of `a^dag_a a^dag_b a_j a_i` (same-spin assignments are
/// kept only when they do not annihilate by fermion antisymmetry, and the
/// paired pattern keeps the single surviving mixed-spin assignment).
pub fn generator(exc: &Excitation) -> FermionTermList {
    let mut t = FermionTermList::default();
    match exc.kind {
        ExcitationKind::Single { occ: i, virt: a } => {
            t.push(one(1.0), vec![(alpha(a), true), (alpha(i), false)]);
            t.push(one(1.0), vec![(beta(a), true), (beta(i), false)]);
        }
        ExcitationKind::Double {
            pair1: (i, a),
            pair2: (j, b),
        } => {
            let paired = (i, a) == (j, b);
            if paired {
                t.push(
                    one(1.0),
                    vec![
                        (alpha(a), true),
                        (beta(b), true),
                        (beta(j), false),
                        (alpha(i), false),
                    ],
                );
            } else {
                // mixed-spin assignments (alpha,beta) and (beta,alpha)
                t.push(
                    one(1.0),
                    vec![
                        (alpha(a), true),
                        (beta(b), true),
                        (beta(j), false),
                        (alpha(i), false),
                    ],
                );
                t.push(
                    one(1.0),
                    vec![
                        (beta(a), true),
                        (alpha(b), true),
                        (alpha(j), false),
                        (beta(i), false),
                    ],
                );
                // same-spin assignments vanish when the pattern repeats an index
                if a != b && i != j {
                    t.push(
                        one(1.0),
                        vec![
                            (alpha(a), true),
                            (alpha(b), true),
                            (alpha(j), false),
                            (alpha(i), false),
                        ],
                    );
                    t.push(
                        one(1.0),
                        vec![
                            (beta(a), true),
                            (beta(b), true),
                            (beta(j), false),
                            (beta(i), false),
                        ],
                    );
                }
            }
        }
    }
    let mut g = t.clone();
    g.extend(t.dagger().scaled(one(-1.0)));
    g
}

/// The second-quantized Hamiltonian as a ladder-operator term list:
/// core energy, `h_pq` lifted to both spins, and the chemists' `(pq|rs)`
/// integrals placed as `1/2 (pq|rs) a^dag_{p sigma} a^dag_{r tau} a_{s tau}
/// a_{q sigma}` summed over spin pairs.
pub fn hamiltonian_terms(table: &IntegralTable) -> FermionTermList {
    let n = table.n_spatial;
    let mut list = FermionTermList::default();
    if table.core_energy != 0.0 {
        list.push(one(table.core_energy), vec![]);
    }
    for p in 0..n {
        for q in 0..n {
            let v = table.h(p, q);
            if v == 0.0 {
                continue;
            }
            for spin in 0..2 {
                list.push(one(v), vec![(2 * p + spin, true), (2 * q + spin, false)]);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = table.g(p, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            list.push(
                                one(0.5 * v),
                                vec![
                                    (2 * p + sigma, true),
                                    (2 * r + tau, true),
                                    (2 * s + tau, false),
                                    (2 * q + sigma, false),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::parse_fcidump;

    fn table(norb: usize, nelec: usize) -> IntegralTable {
        let orbsym: Vec<String> = vec!["1".into(); norb];
        parse_fcidump(&format!(
            "&FCI NORB={norb},NELEC={nelec},MS2=0,ORBSYM={},ISYM=1 &END\n",
            orbsym.join(",")
        ))
        .unwrap()
    }

    fn pool_size(n_occ: usize, m_virt: usize) -> usize {
        let mn = n_occ * m_virt;
        mn + mn + mn * (mn - 1) / 2
    }

    #[test]
    fn pool_sizes_match_the_closed_shell_count() {
        // LiH: n=2, m=4
        assert_eq!(enumerate_pool(&table(6, 4)).len(), 44);
        assert_eq!(pool_size(2, 4), 44);
        // BeH2: n=3, m=4
        assert_eq!(enumerate_pool(&table(7, 6)).len(), 90);
        // C2H4: n=8, m=6
        assert_eq!(enumerate_pool(&table(14, 16)).len(), 1224);
        assert_eq!(pool_size(8, 6), 1224);
    }

    #[test]
    fn degenerate_pools_are_empty() {
        assert!(enumerate_pool(&table(3, 6)).is_empty()); // no virtuals
        assert!(enumerate_pool(&table(3, 0)).is_empty()); // no electrons
    }

    #[test]
    fn pool_order_is_singles_then_doubles_with_contiguous_indices() {
        let pool = enumerate_pool(&table(4, 4));
        let n_singles = pool.iter().take_while(|e| e.is_single()).count();
        assert_eq!(n_singles, 4);
        assert!(pool[n_singles..].iter().all(|e| !e.is_single()));
        for (k, exc) in pool.iter().enumerate() {
            assert_eq!(exc.parameter_index, k);
        }
    }

    #[test]
    fn single_generator_lifts_both_spins() {
        let g = generator(&Excitation::single(0, 1, 0));
        // a+_2 a_0 + a+_3 a_1 - a+_0 a_2 - a+_1 a_3
        assert_eq!(g.terms.len(), 4);
        assert_eq!(g.terms[0].ops, vec![(2, true), (0, false)]);
        assert_eq!(g.terms[1].ops, vec![(3, true), (1, false)]);
        assert_eq!(g.terms[2].ops, vec![(0, true), (2, false)]);
        assert_eq!(g.terms[3].ops, vec![(1, true), (3, false)]);
        assert_eq!(g.terms[2].coeff, Complex64::new(-1.0, 0.0));
        assert_eq!(g.terms[3].coeff, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn paired_double_generator_has_one_spin_realization() {
        let g = generator(&Excitation::double((0, 1), (0, 1), 0));
        assert_eq!(g.terms.len(), 2);
        assert_eq!(
            g.terms[0].ops,
            vec![(2, true), (3, true), (1, false), (0, false)]
        );
    }

    #[test]
    fn mixed_double_generator_counts_spin_realizations() {
        // distinct orbitals on both sides: 4 realizations
        let g = generator(&Excitation::double((0, 2), (1, 3), 0));
        assert_eq!(g.terms.len(), 8);
        // shared occupied orbital: same-spin assignments drop out
        let g = generator(&Excitation::double((0, 2), (0, 3), 0));
        assert_eq!(g.terms.len(), 4);
    }

    #[test]
    fn generators_are_anti_hermitian_as_term_lists() {
        for exc in [
            Excitation::single(0, 2, 0),
            Excitation::double((0, 2), (1, 3), 0),
            Excitation::double((1, 2), (1, 2), 0),
        ] {
            let g = generator(&exc);
            let mut sum = g.clone();
            sum.extend(g.dagger());
            // G + G^dagger must cancel string-by-string
            let mut canceled = 0usize;
            for t in &sum.terms {
                for u in &sum.terms {
                    if t.ops == u.ops && (t.coeff + u.coeff).norm() < 1e-15 && !std::ptr::eq(t, u)
                    {
                        canceled += 1;
                        break;
                    }
                }
            }
            assert_eq!(canceled, sum.terms.len());
        }
    }

    #[test]
    fn core_only_hamiltonian_is_a_single_identity_term() {
        let mut t = table(2, 2);
        t.core_energy = 1.0;
        let h = hamiltonian_terms(&t);
        assert_eq!(h.terms.len(), 1);
        assert!(h.terms[0].ops.is_empty());
        assert_eq!(h.terms[0].coeff, Complex64::new(1.0, 0.0));
    }
}
