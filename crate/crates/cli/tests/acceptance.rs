//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lgpair::checks::{run_selfcheck, SelfcheckInput};
use lgpair::homotopy::{perturb_drd, random_perturbation_instance, verify_drd};
use lgpair::ideals::{groebner_basis, quotient_basis};
use lgpair::mf::{ext_basis, random_sop, ExtOptions, MFMorphism, MatrixFactorisation};
use lgpair::pairing::{boundary_bulk, formula, gram_matrix, jacobi_algebra, kl_trace, pretrace, FormulaInput};
use lgpair::random::{random_integer, random_polynomial};
use lgpair::rational::{int, rat};
use lgpair::residues::{residue_symbol, ResidueError};
use lgpair::{parse_poly, Monomial, PolyMatrix, Polynomial, Ring};
use lgpair_cli::manifest::{load_manifest, Manifest};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn manifest(name: &str) -> Manifest {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../manifests").join(name);
    load_manifest(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn object(m: &Manifest) -> Arc<MatrixFactorisation> {
    m.objects[0].object.clone()
}

fn test_objects() -> Vec<(&'static str, Manifest)> {
    ["a1.json", "a2.json", "d5.json"].into_iter().map(|n| (n, manifest(n))).collect()
}

fn trace_classes(x: &Arc<MatrixFactorisation>, options: &ExtOptions) -> Result<Vec<MFMorphism>, String> {
    let parity = (x.nvars() % 2) as u8;
    Ok(ext_basis(x, x, parity, options).map_err(|e| e.to_string())?.representatives)
}

type Outcome = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let out = match (out, limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {:.2?}, limit {:.2?}", elapsed, l)),
        (o, _) => o,
    };
    (out, elapsed)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn d5_golden() -> Outcome {
    let m = manifest("d5.json");
    let psi = &m.morphism("psi").map_err(|e| e.to_string())?.morphism;
    let y_psi = &m.morphism("y_psi").map_err(|e| e.to_string())?.morphism;
    let a = kl_trace(psi).map_err(|e| e.to_string())?;
    let b = kl_trace(y_psi).map_err(|e| e.to_string())?;
    ensure(a == int(0) && b == int(-1), || format!("<psi> = {a}, <y psi> = {b}"))?;
    Ok(format!("<psi> = {a}, <y psi> = {b}"))
}

fn d5_functional() -> Outcome {
    let r = Ring::new(["x", "y"]);
    let den = [parse_poly("2*x*y", &r).unwrap(), parse_poly("x^2 + 4*y^3", &r).unwrap()];
    let expected = |f: &Polynomial| {
        rat(-1, 2) * f.coefficient(&Monomial::new(vec![2, 0])) + rat(1, 8) * f.coefficient(&Monomial::new(vec![0, 3]))
    };
    let basis = quotient_basis(&groebner_basis(&den).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(basis.dimension() == 5, || format!("Jacobi dimension {}", basis.dimension()))?;
    let mut inputs: Vec<Polynomial> =
        basis.monomials().iter().map(|m| Polynomial::term(&r, int(1), m.clone())).collect();
    inputs.push(parse_poly("y^3", &r).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    inputs.extend((0..20).map(|_| random_polynomial(&r, 6, 0.4, 9, &mut rng)));
    for f in &inputs {
        let got = residue_symbol(f, &den).map_err(|e| e.to_string())?;
        ensure(got == expected(f), || format!("Res[{f}] = {got}, expected {}", expected(f)))?;
    }
    Ok(format!("{} numerators (5 basis monomials, y^3, 20 random)", inputs.len()))
}

fn normalisation() -> Outcome {
    let mut count = 0;
    for n in 1..=3usize {
        let r = Ring::new((0..n).map(|i| format!("x{i}")));
        let xs: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(&r, i)).collect();
        let one = residue_symbol(&Polynomial::one(&r), &xs).map_err(|e| e.to_string())?;
        ensure(one == int(1), || format!("Res[1 / x] = {one} for n = {n}"))?;
        let cap = if n == 3 { 3 } else { 4 };
        let boxes: Vec<Vec<u32>> = lgpair::random::monomials_up_to(n, n as u32 * cap)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .filter(|v| v.iter().all(|&e| e < cap))
            .collect();
        for e in boxes.iter().filter(|v| v.iter().all(|&e| e >= 1)) {
            let denoms: Vec<Polynomial> = (0..n).map(|i| xs[i].pow(e[i])).collect();
            for a in &boxes {
                let g = Polynomial::term(&r, int(1), Monomial::new(a.clone()));
                let want = if a.iter().zip(e).all(|(a, e)| a + 1 == *e) { int(1) } else { int(0) };
                let got = residue_symbol(&g, &denoms).map_err(|x| x.to_string())?;
                ensure(got == want, || format!("Res[x^{a:?} / x^{e:?}] = {got}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} exponent pairs for n <= 3"))
}

/// `f_i = x_i^{e_i}` plus random terms of higher degree.
fn random_system(r: &Arc<Ring>, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    (0..r.nvars())
        .map(|i| {
            let e = rng.gen_range(1..=2u32);
            let noise = random_polynomial(r, e + 1, 0.3, 3, rng);
            let noise = Polynomial::from_terms(r, noise.terms().filter(|(m, _)| m.degree() > e).map(|(m, c)| (m.clone(), c.clone())));
            &Polynomial::var(r, i).pow(e) + &noise
        })
        .collect()
}

fn transformation_rule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut done, mut skipped) = (0, 0);
    while done < 100 {
        ensure(skipped < 400, || format!("only {done} usable instances"))?;
        let n = if done % 3 == 0 { 1 } else { 2 };
        let r = Ring::new((0..n).map(|i| format!("x{i}")));
        let f = random_system(&r, &mut rng);
        let g = random_polynomial(&r, 4, 0.5, 5, &mut rng);
        let m = PolyMatrix::from_fn(&r, n, n, |i, j| {
            let c = if i == j { int(1) } else { random_integer(2, &mut rng) };
            let lin = random_polynomial(&r, 1, 0.5, 2, &mut rng);
            let lin = Polynomial::from_terms(&r, lin.terms().filter(|(m, _)| m.degree() == 1).map(|(m, c)| (m.clone(), c.clone())));
            &Polynomial::constant(&r, c) + &lin
        });
        let mf: Vec<Polynomial> = (0..n)
            .map(|i| (0..n).fold(Polynomial::zero(&r), |acc, j| &acc + &(m.get(i, j) * &f[j])))
            .collect();
        let lhs = residue_symbol(&g, &f);
        let rhs = residue_symbol(&(&g * &m.determinant()), &mf);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) => {
                ensure(a == b, || format!("g = {g}, f = {f:?}: {a} != {b}"))?;
                done += 1;
            }
            (Err(ResidueError::NotZeroDimensional { .. }), _) | (_, Err(ResidueError::NotZeroDimensional { .. })) => {
                skipped += 1
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
        }
    }
    Ok(format!("{done} instances, {skipped} skipped with positive-dimensional zero sets"))
}

fn formula_equivalence() -> Outcome {
    let mut count = 0;
    for (name, m) in test_objects() {
        let x = object(&m);
        ensure(m.seeds.len() >= 3, || format!("{name}: fewer than 3 seeds"))?;
        for alpha in trace_classes(&x, &m.bounds.ext_options(None))? {
            let kl = kl_trace(&alpha).map_err(|e| e.to_string())?;
            for &seed in &m.seeds[..3] {
                let c = random_sop(x.potential(), seed, m.bounds.sop_attempts).map_err(|e| e.to_string())?;
                let pt = pretrace(&alpha, &c).map_err(|e| format!("{name}: {e}"))?;
                ensure(pt.scalar == kl, || format!("{name} seed {seed}: pretrace {} vs {kl}", pt.scalar))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (class, seed) pairs on A1, A2, D5"))
}

fn nondegeneracy() -> Outcome {
    let kl = formula("kapustin-li").map_err(|e| e.to_string())?;
    let mut dims = Vec::new();
    for (name, m) in test_objects() {
        let x = object(&m);
        for p in 0..2u8 {
            let g = gram_matrix(&x, &x, p, &m.bounds.ext_options(None), kl, &FormulaInput::default())
                .map_err(|e| format!("{name} parity {p}: {e}"))?;
            ensure(g.left.len() == g.right.len(), || format!("{name}: Ext dimensions {} vs {}", g.left.len(), g.right.len()))?;
            ensure(g.rank == g.dimension(), || format!("{name} parity {p}: rank {} of {}", g.rank, g.dimension()))?;
            dims.push(format!("{}:{}", name.trim_end_matches(".json"), g.dimension()));
        }
    }
    Ok(format!("full rank, dimensions {}", dims.join(" ")))
}

fn frobenius() -> Outcome {
    let cases = [("x", "x^2", 1), ("x", "x^3", 2), ("x", "x^4", 3), ("xy", "x^2*y + y^4", 5), ("xy", "x^3 + y^3", 4)];
    for (vars, w, milnor) in cases {
        let r = if vars == "x" { Ring::new(["x"]) } else { Ring::new(["x", "y"]) };
        let w = parse_poly(w, &r).unwrap();
        let ja = jacobi_algebra(&w).map_err(|e| e.to_string())?;
        let partials: Vec<Polynomial> = (0..r.nvars()).map(|i| w.diff(i).unwrap()).collect();
        let oracle = quotient_basis(&groebner_basis(&partials).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(ja.dimension() == milnor && oracle.dimension() == milnor, || format!("{w}: Milnor {} / {}", ja.dimension(), oracle.dimension()))?;
        ensure(ja.is_frobenius(), || format!("{w}: Gram rank {} of {milnor}", ja.rank))?;
    }
    Ok("Milnor numbers 1, 2, 3, 5, 4 with full-rank Jacobi Gram".into())
}

fn invariance_suite() -> Outcome {
    let manifests = ["a1.json", "a2.json", "d5.json", "xy_z2.json"].map(manifest);
    let objects: Vec<_> = manifests.iter().map(object).collect();
    let input = SelfcheckInput { objects, seed: 7, trials: 3, ext: ExtOptions::default() };
    let names = ["cyclicity", "shift-sign", "homotopy-invariance", "lambda-permutation", "choice-independence"];
    let reports = run_selfcheck(&input, &names).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for r in &reports {
        ensure(r.passed(), || format!("{}: {}", r.name, r.failures.join("; ")))?;
        summary.push(format!("{} {}", r.name, r.cases));
    }
    Ok(format!("shift sign exponent n-1; cases: {}", summary.join(", ")))
}

fn perturbation() -> Outcome {
    for seed in 0..50 {
        let inst = random_perturbation_instance(seed);
        let out = perturb_drd(&inst.datum, &inst.mu, None).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(verify_drd(&out).map_err(|e| e.to_string())?, || format!("seed {seed}: identities fail"))?;
    }
    Ok("50 perturbed retracts verified".into())
}

fn bulk_factorisation() -> Outcome {
    let mut count = 0;
    for (name, m) in test_objects() {
        let x = object(&m);
        let ja = jacobi_algebra(x.potential()).map_err(|e| e.to_string())?;
        let mut classes = trace_classes(&x, &m.bounds.ext_options(None))?;
        classes.extend(m.morphisms.iter().map(|nm| nm.morphism.clone()).filter(|f| f.parity() as usize == x.nvars() % 2));
        for alpha in classes {
            let kl = kl_trace(&alpha).map_err(|e| e.to_string())?;
            let via = ja.gamma_of(&boundary_bulk(&alpha).map_err(|e| e.to_string())?);
            ensure(kl == via, || format!("{name}: {kl} vs {via}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} classes on A1, A2, D5"))
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 10] = [
        ("D5 golden values", Some(1), d5_golden),
        ("D5 residue functional", Some(1), d5_functional),
        ("normalisation", None, normalisation),
        ("transformation rule", Some(30), transformation_rule),
        ("formula equivalence", None, formula_equivalence),
        ("nondegeneracy", None, nondegeneracy),
        ("Frobenius property", None, frobenius),
        ("invariance suite", Some(60), invariance_suite),
        ("perturbation lemma", None, perturbation),
        ("bulk factorisation", None, bulk_factorisation),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let (out, took) = timed(limit.map(Duration::from_secs), f);
        let limit = limit.map(|l| format!(", limit {l}s")).unwrap_or_default();
        match out {
            Ok(msg) => println!("PASS  {:>2}. {name} ({took:.2?}{limit}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} ({took:.2?}{limit}): {msg}", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
