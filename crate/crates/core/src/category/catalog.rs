//! Built-in categories.

use super::{pointed_from_quadratic_form, CategoryData, FSymbolSet, QuadraticForm, RSymbolSet};
use crate::error::{structural, Result};
use crate::fusion_ring::FusionRing;
use crate::numeral::Numeral;

pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> CategoryData,
}

impl CatalogEntry {
    pub fn build(&self) -> CategoryData {
        (self.build)()
    }
}

const PHI: f64 = 1.618_033_988_749_895;

fn unit() -> CategoryData {
    let ring = FusionRing::from_triples(vec!["1".into()], vec![0], &[(0, 0, 0, 1)]).unwrap();
    let f = FSymbolSet::from_fn(&ring, |_, _, _, _, _, _| Numeral::ONE).unwrap();
    let r = RSymbolSet::from_fn(&ring, |_, _, _| Numeral::ONE).unwrap();
    CategoryData::new(ring, f, Some(r)).unwrap()
}

fn fibonacci() -> CategoryData {
    let ring = FusionRing::from_triples(
        vec!["1".into(), "t".into()],
        vec![0, 1],
        &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 1)],
    )
    .unwrap();
    let f = FSymbolSet::from_fn(&ring, |a, b, c, d, e, f| {
        if (a, b, c, d) == (1, 1, 1, 1) {
            match (e, f) {
                (0, 0) => Numeral::real(1.0 / PHI),
                (1, 1) => Numeral::real(-1.0 / PHI),
                _ => Numeral::real(1.0 / PHI.sqrt()),
            }
        } else {
            Numeral::ONE
        }
    })
    .unwrap();
    let r = RSymbolSet::from_fn(&ring, |a, b, c| match (a, b, c) {
        (1, 1, 0) => Numeral::rou(-2, 5),
        (1, 1, 1) => Numeral::rou(3, 10),
        _ => Numeral::ONE,
    })
    .unwrap();
    CategoryData::new(ring, f, Some(r)).unwrap()
}

fn ising() -> CategoryData {
    let (s, p) = (1usize, 2usize);
    let t = [
        (0, 0, 0),
        (0, s, s),
        (0, p, p),
        (s, 0, s),
        (p, 0, p),
        (s, s, 0),
        (s, s, p),
        (s, p, s),
        (p, s, s),
        (p, p, 0),
    ];
    let t: Vec<_> = t.iter().map(|&(a, b, c)| (a, b, c, 1)).collect();
    let ring = FusionRing::from_triples(vec!["1".into(), "s".into(), "p".into()], vec![0, 1, 2], &t).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let f = FSymbolSet::from_fn(&ring, |a, b, c, d, e, f| match (a, b, c, d) {
        (1, 1, 1, 1) => {
            if e == p && f == p {
                Numeral::RootOfUnity {
                    k: 1,
                    n: 2,
                    coeff: Some(h),
                }
            } else {
                Numeral::RootOfUnity {
                    k: 0,
                    n: 1,
                    coeff: Some(h),
                }
            }
        }
        (1, 2, 1, 2) | (2, 1, 2, 1) => Numeral::rou(1, 2),
        _ => Numeral::ONE,
    })
    .unwrap();
    let r = RSymbolSet::from_fn(&ring, |a, b, c| match (a, b, c) {
        (1, 1, 0) => Numeral::rou(-1, 16),
        (1, 1, 2) => Numeral::rou(3, 16),
        (1, 2, 1) | (2, 1, 1) => Numeral::rou(-1, 4),
        (2, 2, 0) => Numeral::rou(1, 2),
        _ => Numeral::ONE,
    })
    .unwrap();
    CategoryData::new(ring, f, Some(r)).unwrap()
}

fn relabel(mut cd: CategoryData, labels: &[&str]) -> CategoryData {
    cd.ring = cd
        .ring
        .clone()
        .with_labels(labels.iter().map(|s| s.to_string()).collect())
        .unwrap();
    cd
}

fn semion() -> CategoryData {
    relabel(pointed_from_quadratic_form(&QuadraticForm::cyclic(2, 1)).unwrap(), &["1", "s"])
}

/// The toric code `Z(Vec_{Z/2})` as `Vec_{Z/2⊕Z/2}` with `q(e)=q(m)=1, q(f)=-1`.
pub fn toric_code_form() -> QuadraticForm {
    QuadraticForm {
        group: vec![2, 2],
        t: vec![0, 0],
        cross: vec![vec![0, 1], vec![0, 0]],
    }
}

fn toric_code() -> CategoryData {
    relabel(pointed_from_quadratic_form(&toric_code_form()).unwrap(), &["1", "e", "m", "f"])
}

fn cyclic(n: u64, nondegenerate: bool) -> CategoryData {
    let t = match (nondegenerate, n % 2) {
        (false, _) => 0,
        (true, 0) => 1,
        (true, _) => 2,
    };
    pointed_from_quadratic_form(&QuadraticForm::cyclic(n, t)).unwrap()
}

macro_rules! cyc {
    ($name:literal, $desc:literal, $n:literal, $q:literal) => {
        CatalogEntry {
            name: $name,
            description: $desc,
            build: || cyclic($n, $q),
        }
    };
}

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "unit",
        description: "Hilbert spaces (rank 1)",
        build: unit,
    },
    CatalogEntry {
        name: "fibonacci",
        description: "Fibonacci category, t⊗t = 1⊕t",
        build: fibonacci,
    },
    CatalogEntry {
        name: "ising",
        description: "Ising category, s⊗s = 1⊕p",
        build: ising,
    },
    CatalogEntry {
        name: "semion",
        description: "Vec_{Z/2} with q(1) = i",
        build: semion,
    },
    CatalogEntry {
        name: "toric_code",
        description: "Vec_{Z/2×Z/2} with q(e)=q(m)=1, q(f)=-1",
        build: toric_code,
    },
    cyc!("z2", "Vec_{Z/2}, symmetric (t=0)", 2, false),
    cyc!("z3", "Vec_{Z/3}, symmetric (t=0)", 3, false),
    cyc!("z4", "Vec_{Z/4}, symmetric (t=0)", 4, false),
    cyc!("z5", "Vec_{Z/5}, symmetric (t=0)", 5, false),
    cyc!("z6", "Vec_{Z/6}, symmetric (t=0)", 6, false),
    cyc!("z3q", "Vec_{Z/3} with q(a) = exp(2πi a²/3)", 3, true),
    cyc!("z4q", "Vec_{Z/4} with q(a) = exp(πi a²/4)", 4, true),
    cyc!("z5q", "Vec_{Z/5} with q(a) = exp(2πi a²/5)", 5, true),
    cyc!("z6q", "Vec_{Z/6} with q(a) = exp(πi a²/6)", 6, true),
];

pub fn catalog_names() -> impl Iterator<Item = &'static CatalogEntry> {
    CATALOG.iter()
}

pub fn catalog(name: &str) -> Result<CategoryData> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .map(CatalogEntry::build)
        .ok_or_else(|| structural(format!("unknown catalog category `{name}`")))
}
