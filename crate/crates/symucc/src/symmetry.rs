//! Abelian point-group irrep algebra and the symmetry filter for
//! excitation-operator pools.
//!
//! Irrep labels use the Molpro/FCIDUMP binary convention: the internal 3-bit
//! value is `ORBSYM - 1`, and the direct product of two irreps is the XOR of
//! their bit patterns. Label 0 is the totally symmetric irrep. An excitation
//! operator survives the filter exactly when the determinant it produces has
//! the same irrep as the reference determinant.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::fermionics::{Excitation, ExcitationKind};
use crate::integrals::IntegralTable;

/// A 3-bit irreducible-representation label of an Abelian point group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrrepLabel(pub u8);

impl IrrepLabel {
    pub const TOTALLY_SYMMETRIC: IrrepLabel = IrrepLabel(0);

    /// From a 1-based ORBSYM value.
    pub fn from_orbsym(value: u8) -> IrrepLabel {
        debug_assert!((1..=8).contains(&value));
        IrrepLabel(value - 1)
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

impl Mul for IrrepLabel {
    type Output = IrrepLabel;

    fn mul(self, rhs: IrrepLabel) -> IrrepLabel {
        IrrepLabel(self.0 ^ rhs.0)
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// Direct product of two irreps (XOR of the bit labels).
pub fn irrep_product(a: IrrepLabel, b: IrrepLabel) -> IrrepLabel {
    a * b
}

/// A supported Abelian point group with its Molpro-ordered irrep names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointGroup {
    pub name: &'static str,
    pub order: usize,
    irrep_names: &'static [&'static str],
}

const GROUPS: &[PointGroup] = &[
    PointGroup {
        name: "D2h",
        order: 8,
        irrep_names: &["Ag", "B3u", "B2u", "B1g", "B1u", "B2g", "B3g", "Au"],
    },
    PointGroup {
        name: "C2v",
        order: 4,
        irrep_names: &["A1", "B1", "B2", "A2"],
    },
    PointGroup {
        name: "C2h",
        order: 4,
        irrep_names: &["Ag", "Au", "Bu", "Bg"],
    },
    PointGroup {
        name: "D2",
        order: 4,
        irrep_names: &["A", "B3", "B2", "B1"],
    },
    PointGroup {
        name: "C2",
        order: 2,
        irrep_names: &["A", "B"],
    },
    PointGroup {
        name: "Cs",
        order: 2,
        irrep_names: &["A'", "A''"],
    },
    PointGroup {
        name: "Ci",
        order: 2,
        irrep_names: &["Ag", "Au"],
    },
    PointGroup {
        name: "C1",
        order: 1,
        irrep_names: &["A"],
    },
];

impl PointGroup {
    /// Look up a group by name (case-insensitive). Non-Abelian groups and
    /// unknown names are rejected.
    pub fn from_name(name: &str) -> Result<&'static PointGroup> {
        let lower = name.to_ascii_lowercase();
        for g in GROUPS {
            if g.name.to_ascii_lowercase() == lower {
                return Ok(g);
            }
        }
        const NON_ABELIAN: &[&str] = &[
            "c3v", "c4v", "c5v", "c6v", "d3", "d4", "d6", "d3h", "d4h", "d6h", "d3d", "c3h",
            "s4", "s6", "td", "oh", "ih", "dooh", "coov", "d*h", "c*v",
        ];
        if NON_ABELIAN.contains(&lower.as_str()) {
            return Err(Error::UnsupportedGroup(format!(
                "{name} is not Abelian; supported groups: D2h, C2v, C2h, D2, C2, Cs, Ci, C1"
            )));
        }
        Err(Error::UnsupportedGroup(format!(
            "unknown point group {name}; supported groups: D2h, C2v, C2h, D2, C2, Cs, Ci, C1"
        )))
    }

    /// Mulliken display name for a label (labels beyond the group order keep
    /// their numeric form).
    pub fn irrep_name(&self, label: IrrepLabel) -> String {
        self.irrep_names
            .get(label.0 as usize)
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("{}", label.0 + 1))
    }

    /// Check that every orbital label fits inside this group.
    pub fn validate_orbsym(&self, orbsym: &[u8]) -> Result<()> {
        if let Some(&bad) = orbsym.iter().find(|&&s| s as usize > self.order) {
            return Err(Error::Parse(format!(
                "ORBSYM entry {bad} exceeds the order {} of group {}",
                self.order, self.name
            )));
        }
        Ok(())
    }
}

/// Irrep of an excitation operator: the direct product of the labels of every
/// spatial orbital it touches, counted with multiplicity over both spin
/// channels (a paired excitation therefore contributes each orbital twice).
pub fn excitation_irrep(exc: &Excitation, table: &IntegralTable) -> IrrepLabel {
    let lab = |orb: usize| IrrepLabel::from_orbsym(table.orbsym[orb]);
    match exc.kind {
        ExcitationKind::Single { occ, virt } => lab(occ) * lab(virt),
        ExcitationKind::Double { pair1, pair2 } => {
            lab(pair1.0) * lab(pair1.1) * lab(pair2.0) * lab(pair2.1)
        }
    }
}

/// Keep exactly the excitations whose excited determinant carries the target
/// (reference) irrep; order-preserving.
pub fn filter_pool(
    pool: &[Excitation],
    table: &IntegralTable,
    target: IrrepLabel,
) -> Vec<Excitation> {
    pool.iter()
        .filter(|e| target * excitation_irrep(e, table) == target)
        .cloned()
        .collect()
}

/// Count (singles, doubles) per operator irrep.
pub fn irrep_census(
    pool: &[Excitation],
    table: &IntegralTable,
) -> BTreeMap<IrrepLabel, (usize, usize)> {
    let mut census: BTreeMap<IrrepLabel, (usize, usize)> = BTreeMap::new();
    for exc in pool {
        let entry = census.entry(excitation_irrep(exc, table)).or_default();
        match exc.kind {
            ExcitationKind::Single { .. } => entry.0 += 1,
            ExcitationKind::Double { .. } => entry.1 += 1,
        }
    }
    census
}

/// Survivor counts for one set of integrals under several subgroup ORBSYM
/// relabellings. Each entry pairs a group with a full replacement ORBSYM
/// vector for the same orbital ordering.
pub fn subgroup_scan(
    table: &IntegralTable,
    groups: &[(&'static PointGroup, Vec<u8>)],
) -> Result<Vec<(&'static PointGroup, usize)>> {
    let pool = crate::fermionics::enumerate_pool(table);
    let mut out = Vec::with_capacity(groups.len());
    for (group, orbsym) in groups {
        group.validate_orbsym(orbsym)?;
        let relabelled = table.with_orbsym(orbsym.clone())?;
        let survivors = filter_pool(&pool, &relabelled, relabelled.reference_determinant().irrep);
        out.push((*group, survivors.len()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermionics::enumerate_pool;
    use crate::integrals::parse_fcidump;

    fn d2h() -> &'static PointGroup {
        PointGroup::from_name("D2h").unwrap()
    }

    fn label_by_name(group: &PointGroup, name: &str) -> IrrepLabel {
        for bits in 0..group.order as u8 {
            if group.irrep_name(IrrepLabel(bits)) == name {
                return IrrepLabel(bits);
            }
        }
        panic!("no irrep named {name}");
    }

    #[test]
    fn product_of_b1g_and_b2g_is_b3g() {
        let g = d2h();
        let b1g = label_by_name(g, "B1g");
        let b2g = label_by_name(g, "B2g");
        assert_eq!(g.irrep_name(b1g * b2g), "B3g");
    }

    #[test]
    fn totally_symmetric_is_the_identity() {
        for x in 0..8 {
            let x = IrrepLabel(x);
            assert_eq!(IrrepLabel::TOTALLY_SYMMETRIC * x, x);
        }
    }

    #[test]
    fn bit_product_is_xor() {
        assert_eq!(IrrepLabel(3) * IrrepLabel(5), IrrepLabel(6));
    }

    #[test]
    fn labels_form_an_elementary_abelian_group() {
        for a in 0..8u8 {
            for b in 0..8u8 {
                let (a, b) = (IrrepLabel(a), IrrepLabel(b));
                assert_eq!(a * b, b * a);
                assert_eq!(a * a, IrrepLabel::TOTALLY_SYMMETRIC);
                for c in 0..8u8 {
                    let c = IrrepLabel(c);
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
        }
    }

    /// BeH2-shaped table: occupied ag, ag, b1u; virtuals b2u, b3u, ag, b1u.
    fn beh2_like() -> IntegralTable {
        parse_fcidump("&FCI NORB=7,NELEC=6,MS2=0,ORBSYM=1,1,5,3,2,1,5,ISYM=1 &END\n").unwrap()
    }

    #[test]
    fn single_b1u_to_b2u_is_b3g() {
        let t = beh2_like();
        let exc = Excitation::single(2, 3, 0); // b1u -> b2u
        let g = d2h();
        assert_eq!(g.irrep_name(excitation_irrep(&exc, &t)), "B3g");
    }

    #[test]
    fn paired_double_is_totally_symmetric() {
        let t = beh2_like();
        for occ in 0..3 {
            for virt in 3..7 {
                let exc = Excitation::double((occ, virt), (occ, virt), 0);
                assert_eq!(
                    excitation_irrep(&exc, &t),
                    IrrepLabel::TOTALLY_SYMMETRIC
                );
            }
        }
    }

    #[test]
    fn beh2_pool_filters_to_23() {
        let t = beh2_like();
        let pool = enumerate_pool(&t);
        assert_eq!(pool.len(), 90);
        let kept = filter_pool(&pool, &t, t.reference_determinant().irrep);
        assert_eq!(kept.len(), 23);
    }

    #[test]
    fn c1_filter_keeps_everything() {
        let t = beh2_like().with_orbsym(vec![1; 7]).unwrap();
        let pool = enumerate_pool(&t);
        let kept = filter_pool(&pool, &t, IrrepLabel::TOTALLY_SYMMETRIC);
        assert_eq!(kept.len(), pool.len());
    }

    #[test]
    fn filter_is_idempotent_and_order_preserving() {
        let t = beh2_like();
        let pool = enumerate_pool(&t);
        let once = filter_pool(&pool, &t, IrrepLabel::TOTALLY_SYMMETRIC);
        let twice = filter_pool(&once, &t, IrrepLabel::TOTALLY_SYMMETRIC);
        assert_eq!(once, twice);
        let mut indices: Vec<usize> = once.iter().map(|e| e.parameter_index).collect();
        indices.dedup();
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        assert_eq!(indices, sorted);
    }

    #[test]
    fn census_counts_sum_to_pool_size() {
        let t = beh2_like();
        let pool = enumerate_pool(&t);
        let census = irrep_census(&pool, &t);
        let singles: usize = census.values().map(|v| v.0).sum();
        let doubles: usize = census.values().map(|v| v.1).sum();
        assert_eq!((singles, doubles), (12, 78));
        assert_eq!(
            census[&IrrepLabel::TOTALLY_SYMMETRIC].0 + census[&IrrepLabel::TOTALLY_SYMMETRIC].1,
            23
        );
    }

    #[test]
    fn empty_census_is_empty() {
        let t = beh2_like();
        assert!(irrep_census(&[], &t).is_empty());
    }

    #[test]
    fn non_abelian_groups_are_rejected() {
        assert!(matches!(
            PointGroup::from_name("C3v"),
            Err(Error::UnsupportedGroup(_))
        ));
        assert!(matches!(
            PointGroup::from_name("Td"),
            Err(Error::UnsupportedGroup(_))
        ));
        assert!(PointGroup::from_name("d2h").is_ok());
    }

    #[test]
    fn subgroup_scan_rejects_inconsistent_orbsym() {
        let t = beh2_like();
        let g = PointGroup::from_name("C2").unwrap();
        let bad = vec![1u8; 6]; // wrong length
        assert!(matches!(
            subgroup_scan(&t, &[(g, bad)]),
            Err(Error::Parse(_))
        ));
    }
}
