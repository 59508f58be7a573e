use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::mesh::{Domain, DomainSpec, ElementKind, Resolution};

/// Version of the case registry layout.
pub const REGISTRY_FORMAT: u32 = 1;

const BUILTIN: &str = include_str!("cases.json");

/// A reference eigenvalue `k0^2` with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub value: f64,
    pub multiplicity: usize,
    /// Eigenvalue with a singular eigenfunction, missed by the nodal potential formulation.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub singular: bool,
}

/// One slot of the reference list expanded by multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSlot {
    pub value: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkCase {
    pub name: String,
    pub domain: DomainSpec,
    pub reference: Vec<ReferenceValue>,
    /// Citation tag of the reference values.
    pub source: String,
    /// Resolutions of the published comparison meshes. On the circular domains the quad
    /// kinds stand for mixed meshes with their triangle partners.
    pub table: BTreeMap<ElementKind, Resolution>,
    /// Meshes of the normal-versus-distorted comparison.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub distortion: BTreeMap<ElementKind, Resolution>,
    /// First rung of the refinement ladder; rung `j` scales every count by `j`.
    pub ladder: BTreeMap<ElementKind, Resolution>,
}

impl BenchmarkCase {
    /// Largest computed value considered for matching with a window of `window_pct`.
    pub fn cutoff(&self, window_pct: f64) -> f64 {
        self.reference.last().map_or(0.0, |r| r.value) * (1.0 + window_pct / 100.0)
    }

    /// Reference list expanded by multiplicity.
    pub fn slots(&self) -> Vec<ReferenceSlot> {
        self.reference
            .iter()
            .flat_map(|r| {
                std::iter::repeat_n(
                    ReferenceSlot {
                        value: r.value,
                        singular: r.singular,
                    },
                    r.multiplicity,
                )
            })
            .collect()
    }

    pub fn table_resolution(&self, kind: ElementKind) -> Result<Resolution, Error> {
        self.table
            .get(&kind)
            .copied()
            .ok_or_else(|| Error::Bench(format!("case {} has no published mesh for {kind}", self.name)))
    }

    pub fn distortion_resolution(&self, kind: ElementKind) -> Result<Resolution, Error> {
        self.distortion
            .get(&kind)
            .copied()
            .ok_or_else(|| Error::Bench(format!("case {} has no distortion mesh for {kind}", self.name)))
    }

    /// Resolution of ladder rung `level` (1-based).
    pub fn ladder_resolution(&self, kind: ElementKind, level: usize) -> Result<Resolution, Error> {
        let base = self
            .ladder
            .get(&kind)
            .ok_or_else(|| Error::Bench(format!("case {} has no ladder for {kind}", self.name)))?;
        Ok(Resolution {
            n: base.n * level,
            m: base.m.map(|m| m * level),
        })
    }

    fn validate(&self) -> Result<(), Error> {
        let bad = |msg: String| Err(Error::Bench(format!("case {}: {msg}", self.name)));
        if self.reference.is_empty() {
            return bad("empty reference list".into());
        }
        for w in self.reference.windows(2) {
            if w[1].value < w[0].value {
                return bad("reference values must be ascending".into());
            }
        }
        if let Some(r) = self.reference.iter().find(|r| r.multiplicity == 0 || !(r.value > 0.0)) {
            return bad(format!("invalid reference entry {r:?}"));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RegistryFile {
    format: u32,
    cases: Vec<CaseEntry>,
}

#[derive(Deserialize)]
struct CaseEntry {
    name: String,
    domain: Domain,
    source: String,
    reference: Vec<ReferenceValue>,
    #[serde(default)]
    table: BTreeMap<ElementKind, Resolution>,
    #[serde(default)]
    distortion: BTreeMap<ElementKind, Resolution>,
    #[serde(default)]
    ladder: BTreeMap<ElementKind, Resolution>,
}

/// Parses a registry document.
pub fn parse_registry(text: &str) -> Result<Vec<BenchmarkCase>, Error> {
    let file: RegistryFile =
        serde_json::from_str(text).map_err(|e| Error::Bench(format!("case registry: {e}")))?;
    if file.format != REGISTRY_FORMAT {
        return Err(Error::Bench(format!(
            "case registry format {} is not supported (expected {REGISTRY_FORMAT})",
            file.format
        )));
    }
    let mut out: Vec<BenchmarkCase> = Vec::with_capacity(file.cases.len());
    for e in file.cases {
        if out.iter().any(|c| c.name == e.name) {
            return Err(Error::Bench(format!("duplicate case {}", e.name)));
        }
        let case = BenchmarkCase {
            name: e.name,
            domain: DomainSpec::new(e.domain),
            reference: e.reference,
            source: e.source,
            table: e.table,
            distortion: e.distortion,
            ladder: e.ladder,
        };
        case.validate()?;
        out.push(case);
    }
    Ok(out)
}

/// The built-in cases.
pub fn registry() -> &'static [BenchmarkCase] {
    static CASES: OnceLock<Vec<BenchmarkCase>> = OnceLock::new();
    CASES.get_or_init(|| parse_registry(BUILTIN).expect("built-in case registry is valid"))
}

pub fn find_case(name: &str) -> Result<&'static BenchmarkCase, Error> {
    let key = name.to_ascii_lowercase().replace('-', "_");
    registry()
        .iter()
        .find(|c| c.name == key)
        .ok_or_else(|| Error::Bench(format!("unknown case {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_loads() {
        let cases = registry();
        assert_eq!(cases.len(), 6);
        for c in cases {
            assert_eq!(c.domain.domain.name(), c.name);
            let singular = c.slots().iter().filter(|s| s.singular).count();
            assert_eq!(singular, usize::from(c.domain.domain.is_nonconvex()), "{}", c.name);
        }
    }

    #[test]
    fn square_slots_are_the_analytical_multiset() {
        let s: Vec<f64> = find_case("square").unwrap().slots().iter().map(|s| s.value).collect();
        let mut expected = Vec::new();
        for m in 0..5u32 {
            for n in 0..5u32 {
                let v = m * m + n * n;
                if v > 0 && v <= 16 {
                    expected.push(v as f64);
                }
            }
        }
        expected.sort_by(f64::total_cmp);
        assert_eq!(s, expected);
    }

    #[test]
    fn ladders_scale_every_count() {
        let c = find_case("curved-l").unwrap();
        let r = c.ladder_resolution(ElementKind::EQ4, 3).unwrap();
        assert_eq!((r.n, r.m), (3, Some(6)));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_registry("{}").is_err());
        assert!(parse_registry(r#"{"format": 9, "cases": []}"#).is_err());
        let unsorted = r#"{"format": 1, "cases": [{"name": "x", "domain": "square", "source": "s",
            "reference": [{"value": 2.0, "multiplicity": 1}, {"value": 1.0, "multiplicity": 1}]}]}"#;
        assert!(parse_registry(unsorted).is_err());
        assert!(find_case("none").is_err());
    }
}
