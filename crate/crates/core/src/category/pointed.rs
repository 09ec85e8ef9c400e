//! Pointed braided categories `Vec_A^q` from quadratic forms on finite abelian groups.

use serde::{Deserialize, Serialize};

use super::{CategoryData, FSymbolSet, RSymbolSet};
use crate::error::{precondition, Error, Result};
use crate::fusion_ring::FusionRing;
use crate::numeral::{Numeral, C64};

/// A quadratic form on `A = ⊕ Z/n_i`.
///
/// For `g = Σ g_i e_i`, `q(g) = Π_i exp(πi t_i g_i²/n_i) · Π_{i<j} exp(2πi c_ij g_i g_j / gcd(n_i, n_j))`
/// where `c_ij = cross[i][j]` (entries with `i >= j` are ignored).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub group: Vec<u64>,
    pub t: Vec<i64>,
    #[serde(default)]
    pub cross: Vec<Vec<i64>>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl QuadraticForm {
    pub fn cyclic(n: u64, t: i64) -> Self {
        QuadraticForm {
            group: vec![n],
            t: vec![t],
            cross: vec![],
        }
    }

    pub fn order(&self) -> usize {
        self.group.iter().product::<u64>() as usize
    }

    fn cross_coeff(&self, i: usize, j: usize) -> i64 {
        self.cross.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0)
    }

    /// Coordinates of element index `g`, first factor varying fastest.
    pub fn coords(&self, mut g: usize) -> Vec<u64> {
        self.group
            .iter()
            .map(|&n| {
                let x = g as u64 % n;
                g /= n as usize;
                x
            })
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        let mut idx = 0usize;
        for (i, &n) in self.group.iter().enumerate().rev() {
            idx = idx * n as usize + (coords[i] % n) as usize;
        }
        idx
    }

    pub fn add(&self, g: usize, h: usize) -> usize {
        let (x, y) = (self.coords(g), self.coords(h));
        let s: Vec<u64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        self.index(&s)
    }

    pub fn neg(&self, g: usize) -> usize {
        let x = self.coords(g);
        let s: Vec<u64> = x.iter().zip(&self.group).map(|(a, n)| (n - a) % n).collect();
        self.index(&s)
    }

    fn denominator(&self) -> u64 {
        let k = self.group.len();
        let mut l = 1u64;
        for i in 0..k {
            l = lcm(l, 2 * self.group[i]);
            for j in i + 1..k {
                l = lcm(l, gcd(self.group[i], self.group[j]));
            }
        }
        l
    }

    /// The braiding scalar `R(g,h)` as an exact root of unity.
    pub fn braiding_numeral(&self, g: usize, h: usize) -> Numeral {
        let (x, y) = (self.coords(g), self.coords(h));
        let l = self.denominator();
        let k = self.group.len();
        let mut num: i128 = 0;
        for i in 0..k {
            let n = self.group[i];
            num += self.t[i] as i128 * (x[i] * y[i]) as i128 * (l / (2 * n)) as i128;
            for j in i + 1..k {
                let gij = gcd(n, self.group[j]);
                num += self.cross_coeff(i, j) as i128 * (x[i] * y[j]) as i128 * (l / gij) as i128;
            }
        }
        Numeral::rou(num.rem_euclid(l as i128) as i64, l as i64)
    }

    /// The associator scalar `F(a,b,c)`.
    pub fn associator_numeral(&self, a: usize, b: usize, c: usize) -> Numeral {
        let (x, y, z) = (self.coords(a), self.coords(b), self.coords(c));
        let mut k: i64 = 0;
        for i in 0..self.group.len() {
            let carry = u64::from(y[i] + z[i] >= self.group[i]);
            k += self.t[i] * (x[i] * carry) as i64;
        }
        Numeral::rou(k, 2)
    }

    pub fn q(&self, g: usize) -> C64 {
        self.braiding_numeral(g, g).value()
    }

    /// `b(g,h) = q(g+h) / (q(g) q(h))`.
    pub fn bilinear(&self, g: usize, h: usize) -> C64 {
        self.q(self.add(g, h)) / (self.q(g) * self.q(h))
    }

    /// Checks shape, `q(g) = q(-g)`, and that `b` is additive in its first slot.
    pub fn check(&self) -> Result<()> {
        let k = self.group.len();
        if k == 0 || self.group.iter().any(|&n| n == 0) || self.t.len() != k {
            return Err(precondition("quadratic form: group orders must be positive and t must match"));
        }
        let tol = 1e-12;
        let order = self.order();
        for g in 0..order {
            if (self.q(g) - self.q(self.neg(g))).norm() > tol {
                return Err(precondition(format!(
                    "quadratic form not symmetric at {:?} (t_i·n_i must be even)",
                    self.coords(g)
                )));
            }
        }
        let gens: Vec<usize> = (0..k)
            .map(|i| {
                let mut c = vec![0u64; k];
                c[i] = 1;
                self.index(&c)
            })
            .collect();
        for g in 0..order {
            for &e in &gens {
                for h in 0..order {
                    let lhs = self.bilinear(self.add(g, e), h);
                    let rhs = self.bilinear(g, h) * self.bilinear(e, h);
                    if (lhs - rhs).norm() > tol {
                        return Err(precondition(format!(
                            "b is not a bicharacter at g={:?}, h={:?}",
                            self.coords(g),
                            self.coords(h)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn labels(&self) -> Vec<String> {
        (0..self.order())
            .map(|g| {
                let c = self.coords(g);
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
            })
            .collect()
    }
}

/// The pointed braided category on `A` with the closed-form F and R of `qf`.
pub fn pointed_from_quadratic_form(qf: &QuadraticForm) -> Result<CategoryData> {
    qf.check()?;
    let order = qf.order();
    let dual = (0..order).map(|g| qf.neg(g)).collect();
    let triples: Vec<_> = (0..order)
        .flat_map(|a| (0..order).map(move |b| (a, b)))
        .map(|(a, b)| (a, b, qf.add(a, b), 1))
        .collect();
    let ring = FusionRing::from_triples(qf.labels(), dual, &triples)?;
    let f = FSymbolSet::from_fn(&ring, |a, b, c, _, _, _| qf.associator_numeral(a, b, c))?;
    let r = RSymbolSet::from_fn(&ring, |a, b, _| qf.braiding_numeral(a, b))?;
    CategoryData::new(ring, f, Some(r))
}

/// Self-braiding scalar `R^{gg}_{g⊗g}` of a pointed braided category.
pub fn kappa_of(cd: &CategoryData, g: usize) -> Result<C64> {
    if !cd.is_pointed() {
        return Err(precondition("kappa_of requires a pointed category"));
    }
    let rs = cd.r.as_ref().ok_or(Error::MissingBraiding)?;
    let gg = cd.fuse(g, g)[0];
    Ok(rs.get(g, g, gg).expect("pointed channel"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semion_closed_forms() {
        let cd = pointed_from_quadratic_form(&QuadraticForm::cyclic(2, 1)).unwrap();
        assert_eq!(cd.r.as_ref().unwrap().get(1, 1, 0).unwrap(), C64::new(0.0, 1.0));
        assert_eq!(cd.f.get(1, 1, 1, 1, 0, 0).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(kappa_of(&cd, 1).unwrap(), C64::new(0.0, 1.0));
        assert_eq!(kappa_of(&cd, 0).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn trivial_z2() {
        let cd = pointed_from_quadratic_form(&QuadraticForm::cyclic(2, 0)).unwrap();
        for (_, v) in cd.f.entries() {
            assert_eq!(v.value(), C64::new(1.0, 0.0));
        }
        for (_, v) in cd.r.as_ref().unwrap().entries() {
            assert_eq!(v.value(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn odd_t_on_odd_group_is_rejected() {
        assert!(matches!(
            pointed_from_quadratic_form(&QuadraticForm::cyclic(3, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn toric_code_form() {
        let qf = QuadraticForm {
            group: vec![2, 2],
            t: vec![0, 0],
            cross: vec![vec![0, 1], vec![0, 0]],
        };
        let e = qf.index(&[1, 0]);
        let m = qf.index(&[0, 1]);
        let f = qf.index(&[1, 1]);
        assert_eq!(qf.q(e), C64::new(1.0, 0.0));
        assert_eq!(qf.q(m), C64::new(1.0, 0.0));
        assert_eq!(qf.q(f), C64::new(-1.0, 0.0));
        let cd = pointed_from_quadratic_form(&qf).unwrap();
        assert_eq!(kappa_of(&cd, f).unwrap(), C64::new(-1.0, 0.0));
    }
}
