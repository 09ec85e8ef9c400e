use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::category::catalog;

const PHI: f64 = 1.618_033_988_749_895;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn loops_give_dimensions() {
    for name in ["fibonacci", "ising", "z3q", "toric_code"] {
        let cd = catalog(name).unwrap();
        for a in 0..cd.rank() {
            let l = cd.label(a).to_string();
            let v = evaluate_str(&format!("cap[{l}] . cup[{l}]"), &cd, &Env::new()).unwrap();
            assert!(close(v.scalar().unwrap(), C64::new(cd.dim(a), 0.0), 1e-12), "{name} {l}");
        }
    }
    let cd = catalog("fibonacci").unwrap();
    let v = evaluate_str("cap[t] . cup[t]", &cd, &Env::new()).unwrap();
    assert!((v.scalar().unwrap().re - PHI).abs() < 1e-12);
}

#[test]
fn inverse_braid_and_yang_baxter() {
    let env = Env::new();
    for (name, x) in [("fibonacci", "t"), ("ising", "s"), ("ising", "p")] {
        let cd = catalog(name).unwrap();
        let e = Evaluator::new(&cd);
        let v = e.eval_str(&format!("ibraid[{x},{x}] . braid[{x},{x}]"), &env).unwrap();
        let id = e.identity(&[1, 1].map(|_| cd.ring.label_index(x).unwrap()));
        assert!(v.max_abs_diff(&id).unwrap() < 1e-12);
        let b = format!("braid[{x},{x}]");
        let i = format!("id[{x}]");
        let lhs = e.eval_str(&format!("({b}*{i}).({i}*{b}).({b}*{i})"), &env).unwrap();
        let rhs = e.eval_str(&format!("({i}*{b}).({b}*{i}).({i}*{b})"), &env).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9, "{name}");
    }
    let cd = catalog("ising").unwrap();
    let e = Evaluator::new(&cd);
    let lhs = e.eval_str("(braid[s,p]*id[s]).(id[s]*braid[s,p]).(braid[s,s]*id[p])", &env).unwrap();
    let rhs = e.eval_str("(id[p]*braid[s,s]).(braid[s,p]*id[s]).(id[s]*braid[s,p])", &env).unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9);
}

/// Braiding past a vertex: `c_{a,b⊗c} (1⊗V^{bc}_f) = (V^{bc}_f ⊗ 1) c_{a,f}`.
#[test]
fn braiding_is_natural_in_vertices() {
    for name in ["fibonacci", "ising", "z4q", "toric_code"] {
        let cd = catalog(name).unwrap();
        let e = Evaluator::new(&cd);
        let env = vertex_env(&cd.ring);
        let r = cd.rank();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for &f in cd.fuse(b, c) {
                        let l = |x: usize| cd.label(x).to_string();
                        let (la, lb, lc, lf) = (l(a), l(b), l(c), l(f));
                        let lhs = format!("(id[{lb}]*braid[{la},{lc}]).(braid[{la},{lb}]*id[{lc}]).(id[{la}]*v[{lb},{lc},{lf}])");
                        let rhs = format!("(v[{lb},{lc},{lf}]*id[{la}]).braid[{la},{lf}]");
                        let d = e.eval_str(&lhs, &env).unwrap().max_abs_diff(&e.eval_str(&rhs, &env).unwrap()).unwrap();
                        assert!(d < 1e-9, "{name} {a} {b} {c} {f}: {d}");
                    }
                    for &f in cd.fuse(a, b) {
                        let l = |x: usize| cd.label(x).to_string();
                        let (la, lb, lc, lf) = (l(a), l(b), l(c), l(f));
                        let lhs = format!("(braid[{la},{lc}]*id[{lb}]).(id[{la}]*braid[{lb},{lc}]).(v[{la},{lb},{lf}]*id[{lc}])");
                        let rhs = format!("(id[{lc}]*v[{la},{lb},{lf}]).braid[{lf},{lc}]");
                        let d = e.eval_str(&lhs, &env).unwrap().max_abs_diff(&e.eval_str(&rhs, &env).unwrap()).unwrap();
                        assert!(d < 1e-9, "{name} {a} {b} {c} {f}: {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn vertex_associativity_matches_f() {
    let cd = catalog("fibonacci").unwrap();
    let e = Evaluator::new(&cd);
    let env = vertex_env(&cd.ring);
    for ee in 0..2 {
        let lhs = e.eval_str(&format!("(v[t,t,{ee}]*id[t]).v[{ee},t,t]", ee = cd.label(ee)), &env).unwrap();
        let mut rhs = MorphismValue::zero(&cd.ring, vec![1], vec![1, 1, 1]);
        for f in 0..2 {
            let r = e.eval_str(&format!("(id[t]*v[t,t,{f}]).v[t,{f},t]", f = cd.label(f)), &env).unwrap();
            rhs = rhs.add(&r.scale(cd.f.get(1, 1, 1, 1, ee, f).unwrap())).unwrap();
        }
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
    }
}

#[test]
fn zigzag_gives_frobenius_schur_sign() {
    for (name, kappa) in [("fibonacci", 1.0), ("semion", -1.0), ("ising", 1.0)] {
        let cd = catalog(name).unwrap();
        let a = 1;
        let l = cd.label(a).to_string();
        let v = evaluate_str(&format!("(cap[{l}]*id[{l}]).(id[{l}]*cup[{l}])"), &cd, &Env::new()).unwrap();
        let id = MorphismValue::identity(&cd.ring, vec![a]);
        assert!(v.max_abs_diff(&id.scale(C64::new(kappa, 0.0))).unwrap() < 1e-12, "{name}");
    }
}

#[test]
fn traces() {
    let cd = catalog("fibonacci").unwrap();
    let e = Evaluator::new(&cd);
    let env = Env::new();
    let t = categorical_trace(&e.eval_str("id[t]", &env).unwrap(), &cd).unwrap();
    assert!(close(t, C64::new(PHI, 0.0), 1e-12));
    let t = categorical_trace(&e.eval_str("id[]", &env).unwrap(), &cd).unwrap();
    assert_eq!(t, C64::new(1.0, 0.0));
    let t = categorical_trace(&e.eval_str("id[t,t,t]", &env).unwrap(), &cd).unwrap();
    assert!(close(t, C64::new(PHI.powi(3), 0.0), 1e-12));
    // Σ_c d_c R^{tt}_c R^{tt}_c = e^{2πi/5} + φ e^{6πi/5}
    let t = categorical_trace(&e.eval_str("braid[t,t] . braid[t,t]", &env).unwrap(), &cd).unwrap();
    let want = crate::numeral::root_of_unity(1, 5) + crate::numeral::root_of_unity(3, 5) * PHI;
    assert!(close(t, want, 1e-12));
    assert!(close(t, C64::new(-1.0, 0.0), 1e-12));
    assert!(categorical_trace(&e.eval_str("cup[t]", &env).unwrap(), &cd).is_err());
}

#[test]
fn typecheck_examples() {
    let cd = catalog("ising").unwrap();
    let env = Env::new();
    let s = 1;
    let (src, tgt) = typecheck(&parse_diagram("braid[s,s]").unwrap(), &cd.ring, &env).unwrap();
    assert_eq!((src, tgt), (vec![s, s], vec![s, s]));
    let fib = catalog("fibonacci").unwrap();
    let (src, tgt) = typecheck(&parse_diagram("cap[t] . cup[t]").unwrap(), &fib.ring, &env).unwrap();
    assert!(src.is_empty() && tgt.is_empty());
    let err = typecheck(&parse_diagram("id[t] . id[1]").unwrap(), &fib.ring, &env).unwrap_err();
    assert!(matches!(&err, Error::Type { expr, .. } if expr.contains("id[t]")), "{err}");
    assert!(typecheck(&parse_diagram("id[q]").unwrap(), &fib.ring, &env).is_err());
    assert!(typecheck(&parse_diagram("m").unwrap(), &fib.ring, &env).is_err());
    let mut partial = fib.clone();
    partial.r = None;
    assert!(matches!(evaluate_str("braid[t,t]", &partial, &env), Err(Error::MissingBraiding)));
    assert!(matches!(
        evaluate_str("id[t,t,t,t,t,t,t,t,t]", &fib, &env),
        Err(Error::Overflow(_))
    ));
    assert!(Evaluator::new(&fib).with_max_word(9).eval_str("id[t,t,t,t,t,t,t,t,t]", &env).is_ok());
}

fn random_atom(rng: &mut ChaCha8Rng, cd: &CategoryData, e: &Evaluator, env: &Env) -> MorphismValue {
    let r = cd.rank();
    let a = rng.gen_range(1..r);
    let b = rng.gen_range(0..r);
    match rng.gen_range(0..5) {
        0 => e.braid(a, b, false).unwrap(),
        1 => e.braid(a, b, true).unwrap(),
        2 => e.cup(a),
        3 => {
            let ts = cd.ring.triples();
            let (x, y, z, _) = ts[rng.gen_range(0..ts.len())];
            env[&env_key(&cd.ring, "v", &[x, y, z])].clone()
        }
        _ => e.identity(&[a]),
    }
}

fn random_bracketing(rng: &mut ChaCha8Rng, e: &Evaluator, xs: &[MorphismValue]) -> MorphismValue {
    if xs.len() == 1 {
        return xs[0].clone();
    }
    let k = rng.gen_range(1..xs.len());
    let l = random_bracketing(rng, e, &xs[..k]);
    let r = random_bracketing(rng, e, &xs[k..]);
    e.tensor(&l, &r).unwrap()
}

/// Tensor products do not depend on how the factors are bracketed.
#[test]
fn tensor_is_independent_of_association() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["fibonacci", "ising", "z3q"] {
        let cd = catalog(name).unwrap();
        let e = Evaluator::new(&cd);
        let env = vertex_env(&cd.ring);
        for _ in 0..20 {
            let n = rng.gen_range(2..5);
            let xs: Vec<_> = (0..n).map(|_| random_atom(&mut rng, &cd, &e, &env)).collect();
            let reference = random_bracketing(&mut rng, &e, &xs);
            for _ in 0..3 {
                let other = random_bracketing(&mut rng, &e, &xs);
                assert!(reference.max_abs_diff(&other).unwrap() < 1e-10, "{name}");
            }
        }
    }
}

#[test]
fn functoriality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cd = catalog("ising").unwrap();
    let e = Evaluator::new(&cd);
    let env = vertex_env(&cd.ring);
    for _ in 0..30 {
        let f = random_atom(&mut rng, &cd, &e, &env);
        let g = random_atom(&mut rng, &cd, &e, &env);
        let h = random_atom(&mut rng, &cd, &e, &env);
        let k = random_atom(&mut rng, &cd, &e, &env);
        let fg = e.tensor(&f, &g).unwrap();
        let hk = e.tensor(&h, &k).unwrap();
        // interchange law, whenever it typechecks
        if h.target == f.source && k.target == g.source {
            let lhs = fg.compose(&hk).unwrap();
            let rhs = e.tensor(&f.compose(&h).unwrap(), &g.compose(&k).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        }
        let d = e.tensor(&f.dagger(), &g.dagger()).unwrap();
        assert!(d.max_abs_diff(&fg.dagger()).unwrap() < 1e-12);
    }
    let lhs = e.eval_str("(braid[s,s] . braid[s,s])†", &env).unwrap();
    let rhs = e.eval_str("braid[s,s]† . braid[s,s]†", &env).unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-12);
}

#[test]
fn hom_dims_count_trees() {
    let cd = catalog("fibonacci").unwrap();
    assert_eq!(hom_dims(&cd.ring, &[1; 8]), vec![13, 21]);
    let e = Evaluator::new(&cd);
    let b = e.tree_basis(&[1, 1, 1], 1);
    assert_eq!(b, vec![vec![1, 0, 1], vec![1, 1, 1]]);
}
