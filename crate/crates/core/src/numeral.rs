//! Complex numerals as they appear in category files.
//!
//! A numeral is either a float pair `[re, im]` or an exact root of unity
//! `{"rou": [k, n]}` meaning `exp(2πik/n)`, optionally scaled by a real `coeff`.
//! The original representation is kept so files round-trip bit-exactly.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Numeral {
    Pair(f64, f64),
    RootOfUnity { k: i64, n: i64, coeff: Option<f64> },
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `exp(2πik/n)`, exact whenever the angle is a multiple of a quarter turn.
pub fn root_of_unity(k: i64, n: i64) -> C64 {
    assert!(n != 0, "root of unity with zero order");
    let (k, n) = if n < 0 { (-k, -n) } else { (k, n) };
    let r = k.rem_euclid(n);
    if (4 * r) % n == 0 {
        return match 4 * r / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * (r as f64) / (n as f64);
    C64::new(theta.cos(), theta.sin())
}

impl Numeral {
    pub const ONE: Numeral = Numeral::RootOfUnity {
        k: 0,
        n: 1,
        coeff: None,
    };

    pub fn from_complex(z: C64) -> Self {
        Numeral::Pair(z.re, z.im)
    }

    pub fn real(x: f64) -> Self {
        Numeral::Pair(x, 0.0)
    }

    /// Reduced root-of-unity numeral.
    pub fn rou(k: i64, n: i64) -> Self {
        let (k, n) = if n < 0 { (-k, -n) } else { (k, n) };
        let k = k.rem_euclid(n);
        let g = gcd(k, n).max(1);
        Numeral::RootOfUnity {
            k: k / g,
            n: n / g,
            coeff: None,
        }
    }

    pub fn value(&self) -> C64 {
        match *self {
            Numeral::Pair(re, im) => C64::new(re, im),
            Numeral::RootOfUnity { k, n, coeff } => root_of_unity(k, n) * coeff.unwrap_or(1.0),
        }
    }

    pub fn mul(&self, other: &Numeral) -> Numeral {
        match (*self, *other) {
            (
                Numeral::RootOfUnity { k: k1, n: n1, coeff: c1 },
                Numeral::RootOfUnity { k: k2, n: n2, coeff: c2 },
            ) => {
                let Numeral::RootOfUnity { k, n, .. } = Numeral::rou(k1 * n2 + k2 * n1, n1 * n2) else {
                    unreachable!()
                };
                let coeff = match (c1, c2) {
                    (None, None) => None,
                    (a, b) => Some(a.unwrap_or(1.0) * b.unwrap_or(1.0)),
                };
                Numeral::RootOfUnity { k, n, coeff }
            }
            _ => Numeral::from_complex(self.value() * other.value()),
        }
    }

    pub fn conj(&self) -> Numeral {
        match *self {
            Numeral::Pair(re, im) => Numeral::Pair(re, -im),
            Numeral::RootOfUnity { k, n, coeff } => {
                let Numeral::RootOfUnity { k, n, .. } = Numeral::rou(-k, n) else {
                    unreachable!()
                };
                Numeral::RootOfUnity { k, n, coeff }
            }
        }
    }

    pub fn inv(&self) -> Numeral {
        match *self {
            Numeral::Pair(..) => Numeral::from_complex(self.value().inv()),
            Numeral::RootOfUnity { k, n, coeff } => {
                let Numeral::RootOfUnity { k, n, .. } = Numeral::rou(-k, n) else {
                    unreachable!()
                };
                Numeral::RootOfUnity {
                    k,
                    n,
                    coeff: coeff.map(|c| 1.0 / c),
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumeralRepr {
    Pair([f64; 2]),
    Rou {
        rou: [i64; 2],
        #[serde(skip_serializing_if = "Option::is_none", default)]
        coeff: Option<f64>,
    },
}

impl Serialize for Numeral {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Numeral::Pair(re, im) => NumeralRepr::Pair([re, im]).serialize(s),
            Numeral::RootOfUnity { k, n, coeff } => NumeralRepr::Rou { rou: [k, n], coeff }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Numeral {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match NumeralRepr::deserialize(d)? {
            NumeralRepr::Pair([re, im]) => Ok(Numeral::Pair(re, im)),
            NumeralRepr::Rou { rou: [k, n], coeff } => {
                if n == 0 {
                    return Err(serde::de::Error::custom("root of unity with order 0"));
                }
                Ok(Numeral::RootOfUnity { k, n, coeff })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(root_of_unity(1, 4), C64::new(0.0, 1.0));
        assert_eq!(root_of_unity(3, 4), C64::new(0.0, -1.0));
        assert_eq!(root_of_unity(-1, 2), C64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(2, 8), C64::new(0.0, 1.0));
    }

    #[test]
    fn rou_arithmetic_stays_exact() {
        let a = Numeral::rou(1, 4);
        let b = Numeral::rou(1, 4);
        assert_eq!(a.mul(&b), Numeral::rou(1, 2));
        assert_eq!(a.conj(), Numeral::rou(3, 4));
        assert_eq!(a.inv().value(), C64::new(0.0, -1.0));
    }

    #[test]
    fn serde_forms() {
        let n: Numeral = serde_json::from_str(r#"{"rou":[1,4]}"#).unwrap();
        assert_eq!(n.value(), C64::new(0.0, 1.0));
        let n: Numeral = serde_json::from_str(r#"{"rou":[0,1],"coeff":0.5}"#).unwrap();
        assert_eq!(n.value(), C64::new(0.5, 0.0));
        let n: Numeral = serde_json::from_str("[0.25,-1.5]").unwrap();
        assert_eq!(serde_json::to_string(&n).unwrap(), "[0.25,-1.5]");
        assert!(serde_json::from_str::<Numeral>(r#"{"rou":[1,0]}"#).is_err());
    }
}
