use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use tensorcat::category::{kappa_of, CategoryData, QuadraticForm};
use tensorcat::C64;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Non-decreasing factor lists `[n_1 ≤ n_2 ≤ …]`, `n_i ≥ 2`, with product at most `max`.
pub fn factorizations(max: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, min: u64, left: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        for n in min..=left {
            prefix.push(n);
            go(prefix, n, left / n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 2, max, &mut out);
    out.retain(|f| !f.is_empty());
    out.insert(0, vec![1]);
    out
}

/// Every `(t, cross)` on a factor list, or a seeded sample of `per_group` of them.
pub fn forms(group: &[u64], per_group: usize, rng: &mut ChaCha8Rng) -> Vec<QuadraticForm> {
    let k = group.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let mut ranges: Vec<u64> = group.iter().map(|&n| 2 * n).collect();
    ranges.extend(pairs.iter().map(|&(i, j)| gcd(group[i], group[j])));
    let total: u64 = ranges.iter().product();
    let mut codes: Vec<u64> = (0..total).collect();
    if codes.len() > per_group {
        codes.shuffle(rng);
        codes.truncate(per_group);
        codes.sort_unstable();
    }
    codes
        .into_iter()
        .map(|mut code| {
            let mut digits = ranges.iter().map(|&r| {
                let d = code % r;
                code /= r;
                d as i64
            });
            let t: Vec<i64> = (0..k).map(|_| digits.next().unwrap()).collect();
            let mut cross = vec![vec![0i64; k]; k];
            for &(i, j) in &pairs {
                cross[i][j] = digits.next().unwrap();
            }
            QuadraticForm { group: group.to_vec(), t, cross }
        })
        .collect()
}

pub fn kappa_residual(cd: &CategoryData) -> f64 {
    let r = cd.rank();
    let rs = cd.r.as_ref().unwrap();
    let k: Vec<C64> = (0..r).map(|g| kappa_of(cd, g).unwrap()).collect();
    let mut worst = 0.0f64;
    for g in 0..r {
        for h in 0..r {
            let gh = cd.fuse(g, h)[0];
            let b = rs.get(g, h, gh).unwrap() * rs.get(h, g, gh).unwrap();
            worst = worst.max((k[g] * k[h] * b - k[gh]).norm());
        }
    }
    worst
}
