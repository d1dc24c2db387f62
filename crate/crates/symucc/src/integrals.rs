//! FCIDUMP parsing and the closed-shell Hartree-Fock reference.
//!
//! Integrals arrive pre-computed in the molecular-orbital basis as a
//! Molpro-convention FCIDUMP file: a `&FCI ... &END` namelist header followed
//! by `value i j k l` records (1-based indices, chemists' `(ij|kl)` ordering
//! for the two-electron part, `k = l = 0` for one-electron `h_ij`, and
//! `i = j = k = l = 0` for the core energy).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::symmetry::IrrepLabel;

/// One- and two-electron integrals plus orbital symmetry labels.
///
/// Two-electron integrals are held under their canonical 8-fold-symmetric
/// representative; lookups resolve all eight index permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTable {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub ms2: i32,
    pub core_energy: f64,
    /// 1-based irrep labels, one per spatial orbital (Molpro convention).
    pub orbsym: Vec<u8>,
    one_body: BTreeMap<(usize, usize), f64>,
    two_body: BTreeMap<(usize, usize, usize, usize), f64>,
}

/// The closed-shell reference determinant: the first `n_electrons / 2`
/// spatial orbitals, each doubly occupied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceDeterminant {
    pub occupied_spatial: Vec<usize>,
    pub irrep: IrrepLabel,
}

fn canon1(p: usize, q: usize) -> (usize, usize) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

fn canon2(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let a = canon1(p, q);
    let b = canon1(r, s);
    if a <= b {
        (a.0, a.1, b.0, b.1)
    } else {
        (b.0, b.1, a.0, a.1)
    }
}

impl IntegralTable {
    pub fn n_occ(&self) -> usize {
        self.n_electrons / 2
    }

    pub fn n_virt(&self) -> usize {
        self.n_spatial - self.n_occ()
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_spatial
    }

    /// One-electron integral `h_pq` (symmetric lookup).
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.one_body.get(&canon1(p, q)).copied().unwrap_or(0.0)
    }

    /// Two-electron integral `(pq|rs)` in chemists' notation (8-fold lookup).
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body
            .get(&canon2(p, q, r, s))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn set_h(&mut self, p: usize, q: usize, value: f64) {
        self.one_body.insert(canon1(p, q), value);
    }

    pub fn set_g(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        self.two_body.insert(canon2(p, q, r, s), value);
    }

    /// Empty table (no integrals set) for the given sizes.
    pub fn empty(n_spatial: usize, n_electrons: usize, orbsym: Vec<u8>) -> Result<Self> {
        let t = IntegralTable {
            n_spatial,
            n_electrons,
            ms2: 0,
            core_energy: 0.0,
            orbsym,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.n_electrons % 2 != 0 {
            return Err(Error::UnsupportedReference(format!(
                "NELEC = {} is odd; only closed-shell references are supported",
                self.n_electrons
            )));
        }
        if self.ms2 != 0 {
            return Err(Error::UnsupportedReference(format!(
                "MS2 = {} != 0; only closed-shell references are supported",
                self.ms2
            )));
        }
        if self.orbsym.len() != self.n_spatial {
            return Err(Error::Parse(format!(
                "ORBSYM has {} entries but NORB = {}",
                self.orbsym.len(),
                self.n_spatial
            )));
        }
        if let Some(&bad) = self.orbsym.iter().find(|&&s| !(1..=8).contains(&s)) {
            return Err(Error::Parse(format!(
                "ORBSYM entry {bad} outside the Abelian range 1..=8"
            )));
        }
        if self.n_electrons / 2 > self.n_spatial {
            return Err(Error::Parse(format!(
                "NELEC = {} does not fit in NORB = {} spatial orbitals",
                self.n_electrons, self.n_spatial
            )));
        }
        Ok(())
    }

    /// Replace the orbital symmetry labels (subgroup relabelling).
    pub fn with_orbsym(&self, orbsym: Vec<u8>) -> Result<Self> {
        if orbsym.len() != self.n_spatial {
            return Err(Error::Parse(format!(
                "orbsym relabelling has {} entries but NORB = {}",
                orbsym.len(),
                self.n_spatial
            )));
        }
        let mut t = self.clone();
        t.orbsym = orbsym;
        t.validate()?;
        Ok(t)
    }

    /// Copy of the table with every stored integral of magnitude below
    /// `threshold` dropped.
    pub fn thresholded(&self, threshold: f64) -> Self {
        let mut t = self.clone();
        t.one_body.retain(|_, v| v.abs() >= threshold);
        t.two_body.retain(|_, v| v.abs() >= threshold);
        t
    }

    /// The closed-shell reference: first `n_electrons / 2` orbitals in file
    /// order, each doubly occupied, hence totally symmetric.
    pub fn reference_determinant(&self) -> ReferenceDeterminant {
        let occ: Vec<usize> = (0..self.n_occ()).collect();
        let mut irrep = IrrepLabel::TOTALLY_SYMMETRIC;
        for &i in &occ {
            let lab = IrrepLabel::from_orbsym(self.orbsym[i]);
            // doubly occupied: each orbital enters the product twice
            irrep = irrep * lab * lab;
        }
        ReferenceDeterminant {
            occupied_spatial: occ,
            irrep,
        }
    }

    /// Restricted Hartree-Fock energy of the reference determinant:
    /// `E_core + sum_i 2 h_ii + sum_ij [2 (ii|jj) - (ij|ji)]`.
    pub fn hf_energy(&self) -> f64 {
        let occ = self.n_occ();
        let mut e = self.core_energy;
        for i in 0..occ {
            e += 2.0 * self.h(i, i);
            for j in 0..occ {
                e += 2.0 * self.g(i, i, j, j) - self.g(i, j, j, i);
            }
        }
        e
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        parse_fcidump(&text)
    }

    /// Serialize back to FCIDUMP text. Round-trips exactly: stored canonical
    /// entries are written with 17 significant digits.
    pub fn to_fcidump(&self) -> String {
        let mut out = String::new();
        let orbsym: Vec<String> = self.orbsym.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            out,
            "&FCI NORB={},NELEC={},MS2={},",
            self.n_spatial, self.n_electrons, self.ms2
        );
        let _ = writeln!(out, "  ORBSYM={},", orbsym.join(","));
        let _ = writeln!(out, "  ISYM=1,");
        let _ = writeln!(out, "&END");
        fn fmt_value(v: f64) -> String {
            if v.is_sign_negative() {
                format!("{v:.16e}")
            } else {
                format!(" {v:.16e}")
            }
        }
        for (&(p, q, r, s), &v) in &self.two_body {
            let _ = writeln!(
                out,
                " {} {:3} {:3} {:3} {:3}",
                fmt_value(v),
                p + 1,
                q + 1,
                r + 1,
                s + 1
            );
        }
        for (&(p, q), &v) in &self.one_body {
            let _ = writeln!(out, " {} {:3} {:3}   0   0", fmt_value(v), p + 1, q + 1);
        }
        let _ = writeln!(out, " {}   0   0   0   0", fmt_value(self.core_energy));
        out
    }
}

/// Parse Molpro-convention FCIDUMP text.
///
/// The namelist accepts comma- or whitespace-separated values and
/// case-insensitive keys; duplicate integral records overwrite (last wins).
pub fn parse_fcidump(text: &str) -> Result<IntegralTable> {
    let start = text
        .find('&')
        .ok_or_else(|| Error::Parse("missing &FCI namelist header".into()))?;
    let after = &text[start..];
    if !after[1..].to_ascii_uppercase().starts_with("FCI") {
        return Err(Error::Parse("header does not start with &FCI".into()));
    }
    let upper = after.to_ascii_uppercase();
    let (hdr_end, body_start) = if let Some(p) = upper.find("&END") {
        (p, p + 4)
    } else if let Some(p) = upper[1..].find('/') {
        (p + 1, p + 2)
    } else {
        return Err(Error::Parse("namelist not terminated by &END or /".into()));
    };
    let header = &after[4..hdr_end];
    let body = &after[body_start..];

    // normalize "KEY = v" to "KEY=v", then split on commas/whitespace
    let mut norm = String::with_capacity(header.len());
    let mut chars = header.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_whitespace() {
            // drop whitespace adjacent to '='
            if norm.ends_with('=') {
                continue;
            }
            while let Some(&n) = chars.peek() {
                if n.is_whitespace() {
                    chars.next();
                } else {
                    break;
                }
            }
            if chars.peek() == Some(&'=') {
                continue;
            }
            norm.push(' ');
        } else {
            norm.push(c);
        }
    }

    let mut fields: Vec<(String, Vec<String>)> = Vec::new();
    for token in norm.split(|c: char| c == ',' || c.is_whitespace()) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if let Some(eq) = token.find('=') {
            let key = token[..eq].to_ascii_uppercase();
            let val = token[eq + 1..].to_string();
            let mut vals = Vec::new();
            if !val.is_empty() {
                vals.push(val);
            }
            fields.push((key, vals));
        } else if let Some(last) = fields.last_mut() {
            last.1.push(token.to_string());
        } else {
            return Err(Error::Parse(format!(
                "stray header token {token:?} before any KEY="
            )));
        }
    }

    let mut norb: Option<usize> = None;
    let mut nelec: Option<usize> = None;
    let mut ms2: i32 = 0;
    let mut orbsym: Option<Vec<u8>> = None;
    for (key, vals) in &fields {
        let single = || -> Result<&str> {
            if vals.len() == 1 {
                Ok(vals[0].as_str())
            } else {
                Err(Error::Parse(format!(
                    "header field {key} expects one value, got {}",
                    vals.len()
                )))
            }
        };
        match key.as_str() {
            "NORB" => {
                norb = Some(single()?.parse().map_err(|_| {
                    Error::Parse(format!("bad NORB value {:?}", vals))
                })?)
            }
            "NELEC" => {
                nelec = Some(single()?.parse().map_err(|_| {
                    Error::Parse(format!("bad NELEC value {:?}", vals))
                })?)
            }
            "MS2" => {
                ms2 = single()?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad MS2 value {:?}", vals)))?
            }
            "ORBSYM" => {
                let mut syms = Vec::with_capacity(vals.len());
                for v in vals {
                    syms.push(v.parse::<u8>().map_err(|_| {
                        Error::Parse(format!("bad ORBSYM entry {v:?}"))
                    })?);
                }
                orbsym = Some(syms);
            }
            // ISYM and any emitter-specific keys are tolerated
            _ => {}
        }
    }
    let n_spatial = norb.ok_or_else(|| Error::Parse("header missing NORB".into()))?;
    let n_electrons = nelec.ok_or_else(|| Error::Parse("header missing NELEC".into()))?;
    let orbsym = orbsym.unwrap_or_else(|| vec![1; n_spatial]);

    let mut table = IntegralTable {
        n_spatial,
        n_electrons,
        ms2,
        core_energy: 0.0,
        orbsym,
        one_body: BTreeMap::new(),
        two_body: BTreeMap::new(),
    };
    table.validate()?;

    for (lineno, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!(
                "integral record {:?} (line {} after header) does not have 5 fields",
                line,
                lineno + 1
            )));
        }
        let value: f64 = parts[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| Error::Parse(format!("bad integral value {:?}", parts[0])))?;
        let idx: Vec<usize> = parts[1..]
            .iter()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad orbital index {t:?}")))
            })
            .collect::<Result<_>>()?;
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        for &ix in &idx {
            if ix > n_spatial {
                return Err(Error::Parse(format!(
                    "orbital index {ix} out of range 1..={n_spatial}"
                )));
            }
        }
        match (i, j, k, l) {
            (0, 0, 0, 0) => table.core_energy = value,
            (_, _, 0, 0) if i > 0 && j > 0 => table.set_h(i - 1, j - 1, value),
            _ if i > 0 && j > 0 && k > 0 && l > 0 => {
                table.set_g(i - 1, j - 1, k - 1, l - 1, value)
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unsupported index pattern {i} {j} {k} {l}"
                )))
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n";

    #[test]
    fn parses_minimal_header_and_core_energy() {
        let text = format!("{HEADER} 0.70 0 0 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.n_spatial, 2);
        assert_eq!(t.n_electrons, 2);
        assert_eq!(t.core_energy, 0.70);
        assert_eq!(t.orbsym, vec![1, 1]);
    }

    #[test]
    fn one_body_lookup_is_symmetric() {
        let text = format!("{HEADER} 0.5 1 2 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.h(0, 1), 0.5);
        assert_eq!(t.h(1, 0), 0.5);
        assert_eq!(t.h(0, 0), 0.0);
    }

    #[test]
    fn two_body_lookup_resolves_all_eight_permutations() {
        let text = "&FCI NORB=4,NELEC=2,MS2=0,ORBSYM=1,1,1,1,ISYM=1 &END\n 0.25 1 2 3 4\n";
        let t = parse_fcidump(text).unwrap();
        let perms = [
            (0, 1, 2, 3),
            (1, 0, 2, 3),
            (0, 1, 3, 2),
            (1, 0, 3, 2),
            (2, 3, 0, 1),
            (3, 2, 0, 1),
            (2, 3, 1, 0),
            (3, 2, 1, 0),
        ];
        for (p, q, r, s) in perms {
            assert_eq!(t.g(p, q, r, s), 0.25, "({p}{q}|{r}{s})");
        }
        assert_eq!(t.g(0, 2, 1, 3), 0.0);
    }

    #[test]
    fn header_variants_parse() {
        // whitespace-separated values, case-insensitive keys, slash terminator
        let text = "&FCI norb = 3 nelec=2 ms2=0\n orbsym=1 2 1\n isym=1\n/\n 1.5 0 0 0 0\n";
        let t = parse_fcidump(text).unwrap();
        assert_eq!(t.n_spatial, 3);
        assert_eq!(t.orbsym, vec![1, 2, 1]);
        assert_eq!(t.core_energy, 1.5);
    }

    #[test]
    fn fortran_exponents_are_accepted() {
        let text = format!("{HEADER} 0.25D+01 1 1 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.h(0, 0), 2.5);
    }

    #[test]
    fn duplicate_records_last_wins() {
        let text = format!("{HEADER} 0.5 1 2 0 0\n 0.75 2 1 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.h(0, 1), 0.75);
    }

    #[test]
    fn odd_nelec_is_rejected() {
        let text = "&FCI NORB=2,NELEC=3,MS2=0,ORBSYM=1,1,ISYM=1 &END\n";
        assert!(matches!(
            parse_fcidump(text),
            Err(Error::UnsupportedReference(_))
        ));
    }

    #[test]
    fn nonzero_ms2_is_rejected() {
        let text = "&FCI NORB=2,NELEC=2,MS2=2,ORBSYM=1,1,ISYM=1 &END\n";
        assert!(matches!(
            parse_fcidump(text),
            Err(Error::UnsupportedReference(_))
        ));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let text = format!("{HEADER} 0.5 1 3 0 0\n");
        assert!(matches!(parse_fcidump(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn orbsym_length_mismatch_is_rejected() {
        let text = "&FCI NORB=3,NELEC=2,MS2=0,ORBSYM=1,1,ISYM=1 &END\n";
        assert!(matches!(parse_fcidump(text), Err(Error::Parse(_))));
    }

    #[test]
    fn reference_determinant_is_totally_symmetric() {
        let text = "&FCI NORB=4,NELEC=4,MS2=0,ORBSYM=1,5,3,7,ISYM=1 &END\n";
        let t = parse_fcidump(text).unwrap();
        let r = t.reference_determinant();
        assert_eq!(r.occupied_spatial, vec![0, 1]);
        assert_eq!(r.irrep, IrrepLabel::TOTALLY_SYMMETRIC);
    }

    #[test]
    fn hf_energy_of_core_only_table() {
        let text = format!("{HEADER} 1.0 0 0 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.hf_energy(), 1.0);
    }

    #[test]
    fn round_trip_preserves_table() {
        let text = format!(
            "{HEADER} 0.5 1 2 0 0\n 0.25 1 2 1 2\n 1.25e-13 2 2 2 2\n 0.7 0 0 0 0\n"
        );
        let t = parse_fcidump(&text).unwrap();
        let t2 = parse_fcidump(&t.to_fcidump()).unwrap();
        assert_eq!(t, t2);
        // tiny values are stored, not dropped
        assert_eq!(t2.g(1, 1, 1, 1), 1.25e-13);
    }

    #[test]
    fn thresholding_is_explicit() {
        let text = format!("{HEADER} 1e-13 1 1 0 0\n 0.5 2 2 0 0\n");
        let t = parse_fcidump(&text).unwrap();
        assert_eq!(t.h(0, 0), 1e-13);
        let t2 = t.thresholded(1e-12);
        assert_eq!(t2.h(0, 0), 0.0);
        assert_eq!(t2.h(1, 1), 0.5);
    }
}
