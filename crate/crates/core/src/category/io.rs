//! JSON file formats for categories, algebras and modules (`"format": 1`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CategoryData, FSymbolSet, RSymbolSet, DEFAULT_TOLERANCE};
use crate::error::{structural, Error, Result};
use crate::fusion_ring::{FPDimData, FusionRing};
use crate::numeral::Numeral;

pub const FORMAT_VERSION: u32 = 1;

/// A label given either by index or by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelRef {
    Index(usize),
    Name(String),
}

impl LabelRef {
    pub fn resolve(&self, labels: &[String]) -> Result<usize> {
        match self {
            LabelRef::Index(i) if *i < labels.len() => Ok(*i),
            LabelRef::Index(i) => Err(structural(format!("label index {i} out of range"))),
            LabelRef::Name(s) => labels
                .iter()
                .position(|l| l == s)
                .or_else(|| s.parse::<usize>().ok().filter(|&i| i < labels.len()))
                .ok_or_else(|| structural(format!("unknown label `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct CategoryFile {
    pub format: u32,
    pub rank: usize,
    pub labels: Vec<String>,
    #[serde(default)]
    pub unit: usize,
    pub dual: Vec<LabelRef>,
    pub N: Vec<(LabelRef, LabelRef, LabelRef, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims_hint: Option<Vec<f64>>,
    #[serde(default)]
    pub F: Vec<(LabelRef, LabelRef, LabelRef, LabelRef, LabelRef, LabelRef, Numeral)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub R: Option<Vec<(LabelRef, LabelRef, LabelRef, Numeral)>>,
    #[serde(default = "default_tol")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub partial: bool,
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub format: u32,
    pub support: Vec<LabelRef>,
    pub mu: Vec<(LabelRef, LabelRef, LabelRef, Numeral)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub format: u32,
    pub support: Vec<LabelRef>,
    pub rho: Vec<(LabelRef, LabelRef, LabelRef, Numeral)>,
}

fn check_format(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(structural(format!("unsupported format version {v}")));
    }
    Ok(())
}

impl CategoryFile {
    pub fn from_category(cd: &CategoryData) -> Self {
        let ring = &cd.ring;
        let idx = LabelRef::Index;
        CategoryFile {
            format: FORMAT_VERSION,
            rank: ring.rank(),
            labels: ring.labels().to_vec(),
            unit: 0,
            dual: ring.duals().iter().map(|&d| idx(d)).collect(),
            N: ring
                .triples()
                .into_iter()
                .map(|(a, b, c, n)| (idx(a), idx(b), idx(c), n as i64))
                .collect(),
            dims_hint: cd.partial.then(|| cd.dims.dims.clone()),
            F: cd
                .f
                .entries()
                .into_iter()
                .map(|((a, b, c, d, e, f), v)| (idx(a), idx(b), idx(c), idx(d), idx(e), idx(f), v))
                .collect(),
            R: cd.r.as_ref().map(|r| {
                r.entries()
                    .into_iter()
                    .map(|((a, b, c), v)| (idx(a), idx(b), idx(c), v))
                    .collect()
            }),
            tolerance: cd.tolerance,
            partial: cd.partial,
        }
    }

    /// Builds category data; structural checks always run, coherence checks only if `validate`.
    pub fn into_category(self, validate: bool) -> Result<CategoryData> {
        check_format(self.format)?;
        if self.labels.len() != self.rank || self.dual.len() != self.rank {
            return Err(structural("labels and dual must have length `rank`"));
        }
        if self.unit != 0 {
            return Err(structural("the unit must be label 0"));
        }
        let labels = self.labels;
        let res = |l: &LabelRef| l.resolve(&labels);
        let dual = self.dual.iter().map(res).collect::<Result<Vec<_>>>()?;
        let mut triples = Vec::with_capacity(self.N.len());
        for (a, b, c, n) in &self.N {
            triples.push((res(a)?, res(b)?, res(c)?, *n));
        }
        let ring = FusionRing::from_triples(labels.clone(), dual, &triples)?;
        if self.partial {
            let mut cd = CategoryData::new(ring, FSymbolSet::empty(self.rank), None)?;
            if let Some(d) = self.dims_hint {
                if d.len() != self.rank {
                    return Err(structural("dims_hint must have length `rank`"));
                }
                cd.dims = FPDimData::from_dims(d);
            }
            cd.partial = true;
            cd.tolerance = self.tolerance;
            return Ok(cd);
        }
        let mut fe = Vec::with_capacity(self.F.len());
        for (a, b, c, d, e, f, v) in &self.F {
            fe.push(((res(a)?, res(b)?, res(c)?, res(d)?, res(e)?, res(f)?), *v));
        }
        let fs = FSymbolSet::from_entries(&ring, &fe)?;
        let rs = match &self.R {
            Some(entries) => {
                let mut re = Vec::with_capacity(entries.len());
                for (a, b, c, v) in entries {
                    re.push(((res(a)?, res(b)?, res(c)?), *v));
                }
                Some(RSymbolSet::from_entries(&ring, &re)?)
            }
            None => None,
        };
        let mut cd = CategoryData::new(ring, fs, rs)?;
        cd.tolerance = self.tolerance;
        if let Some(hint) = &self.dims_hint {
            let off = hint.iter().zip(&cd.dims.dims).any(|(h, d)| (h - d).abs() > 1e-6);
            if hint.len() != cd.rank() || off {
                return Err(Error::Validation("dims_hint disagrees with Frobenius-Perron dimensions".into()));
            }
        }
        if validate {
            cd.validated()
        } else {
            cd.deferred_validation = true;
            Ok(cd)
        }
    }
}

pub fn load_category_str(text: &str, validate: bool) -> Result<CategoryData> {
    let file: CategoryFile = serde_json::from_str(text).map_err(|e| structural(format!("category file: {e}")))?;
    file.into_category(validate)
}

pub fn load_category(path: impl AsRef<Path>, validate: bool) -> Result<CategoryData> {
    let text = std::fs::read_to_string(path)?;
    load_category_str(&text, validate)
}

pub fn save_category_string(cd: &CategoryData) -> String {
    serde_json::to_string_pretty(&CategoryFile::from_category(cd)).expect("category serializes")
}

pub fn save_category(cd: &CategoryData, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, save_category_string(cd) + "\n")?;
    Ok(())
}

pub fn load_algebra_file(path: impl AsRef<Path>) -> Result<AlgebraFile> {
    let text = std::fs::read_to_string(path)?;
    let f: AlgebraFile = serde_json::from_str(&text).map_err(|e| structural(format!("algebra file: {e}")))?;
    check_format(f.format)?;
    Ok(f)
}

pub fn load_module_file(path: impl AsRef<Path>) -> Result<ModuleFile> {
    let text = std::fs::read_to_string(path)?;
    let f: ModuleFile = serde_json::from_str(&text).map_err(|e| structural(format!("module file: {e}")))?;
    check_format(f.format)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::catalog;

    #[test]
    fn round_trip_is_exact() {
        for name in ["fibonacci", "ising", "toric_code", "z5q"] {
            let cd = catalog(name).unwrap();
            let text = save_category_string(&cd);
            let back = load_category_str(&text, true).unwrap();
            assert_eq!(back.ring, cd.ring);
            assert_eq!(back.f.entries(), cd.f.entries());
            assert_eq!(back.r.unwrap().entries(), cd.r.unwrap().entries());
            assert_eq!(save_category_string(&catalog(name).unwrap()), text);
        }
    }

    #[test]
    fn inadmissible_f_entry_is_named() {
        let cd = catalog("fibonacci").unwrap();
        let mut file = CategoryFile::from_category(&cd);
        let idx = LabelRef::Index;
        file.F.push((idx(0), idx(0), idx(0), idx(0), idx(1), idx(0), Numeral::ONE));
        let err = file.into_category(true).unwrap_err();
        assert!(matches!(&err, Error::Structural(m) if m.contains("(0, 0, 0, 0, 1, 0)")), "{err}");
    }

    #[test]
    fn deferred_validation() {
        let cd = catalog("fibonacci").unwrap();
        let mut file = CategoryFile::from_category(&cd);
        for entry in file.R.as_mut().unwrap() {
            if entry.0 == LabelRef::Index(1) && entry.2 == LabelRef::Index(1) {
                entry.3 = Numeral::rou(1, 7);
            }
        }
        let strict = file.clone().into_category(true);
        assert!(matches!(strict, Err(Error::Validation(_))));
        let lax = file.into_category(false).unwrap();
        assert!(lax.deferred_validation);
        assert!(!lax.validate().is_empty());
    }

    #[test]
    fn labels_by_name() {
        let text = r#"{"format":1,"rank":2,"labels":["1","t"],"dual":["1","t"],
            "N":[["1","1","1",1],["1","t","t",1],["t","1","t",1],["t","t","1",1],["t","t","t",1]],
            "partial":true}"#;
        let cd = load_category_str(text, true).unwrap();
        assert!(cd.partial);
        assert!((cd.dim(1) - 1.618_033_988_749_895).abs() < 1e-12);
    }
}
