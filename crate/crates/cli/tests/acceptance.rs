//! The acceptance suite. Each criterion prints one PASS or FAIL line; the
//! test fails if any criterion does. Run with `--nocapture` to see them.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::Command;

use hicat_core::catalog::{self, Group};
use hicat_core::coeff::{base_pairs, covariance_match, Assignment, CoefficientSystem, ComplexField, MatrixAlgebra, MatchResult};
use hicat_core::conjugation::{validate_conjugation, verify_folding_laws, ConjugationFlags};
use hicat_core::convolution::{validate_embedded_category, ConvolutionAlgebra, PositivityOutcome, Section};
use hicat_core::cstar::{cstar_suite, eh_collapse_all, norm_equivalence, CheckConfig};
use hicat_core::hypermatrix::{from_section, hinvol, hmul, hnorm, product_inversion, to_section, unit, Hypermatrix, HypermatrixSystem};
use hicat_core::involutive::InvolutionSpec;
use hicat_core::linalg::CMat;
use hicat_core::ncat::{build_pair_groupoid, build_product, build_terminal, check_exchange, check_nc_exchange, CellId, LevelSet, MultiCategory};
use hicat_core::sampling::{gaussian_vec, integer_vec, rng_from_seed, structured_matrix};
use hicat_core::{Complex64, FiniteGlobularCategory};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn pair_inverse(n: usize) -> InvolutionSpec {
    InvolutionSpec::new((0..n * n).map(|c| CellId((c % n) * n + c / n)).collect(), [0])
}

/// Row-major product summing the middle index upward from zero.
fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = zero();
            for k in 0..n {
                s += a[i * n + k] * b[k * n + j];
            }
            out[i * n + j] = s;
        }
    }
    out
}

fn matrix_recovery() -> Outcome {
    for n in 2..=4 {
        let alg = ConvolutionAlgebra::new(build_pair_groupoid(n).unwrap(), ComplexField, vec![pair_inverse(n)]).map_err(|e| e.to_string())?;
        let mut rng = rng_from_seed(1000 + n as u64);
        for s in 0..100 {
            let a = gaussian_vec(&mut rng, n * n);
            let b = gaussian_vec(&mut rng, n * n);
            let c = alg.convolve(0, &Section::new(a.clone()), &Section::new(b.clone())).map_err(|e| e.to_string())?;
            ensure!(c.values == matmul(&a, &b, n), "N={n} sample {s}: product differs");
            let star = alg.involve(0, &Section::new(a.clone())).map_err(|e| e.to_string())?;
            let adj: Vec<Complex64> = (0..n * n).map(|c| a[(c % n) * n + c / n].conj()).collect();
            ensure!(star.values == adj, "N={n} sample {s}: involution differs");
        }
    }
    Ok("N=2,3,4 x 100 sections, bitwise".into())
}

fn eckmann_hilton() -> Outcome {
    let fixtures: Vec<(&str, FiniteGlobularCategory)> = vec![
        ("terminal(2)", build_terminal(2).unwrap()),
        ("terminal(3)", build_terminal(3).unwrap()),
        ("Z3 doubly delooped", catalog::cyclic_delooping(3, 2).unwrap()),
        ("Z4 triply delooped", catalog::cyclic_delooping(4, 3).unwrap()),
        ("S3 abelian 2-group", catalog::abelian_two_group(&Group::symmetric3(), 2).unwrap()),
    ];
    let mut blocks = 0;
    for (name, cat) in &fixtures {
        ensure!((2..=3).contains(&cat.depth()), "{name}: depth {}", cat.depth());
        ensure!(cat.len() <= 64, "{name}: {} cells", cat.len());
        ensure!(check_exchange(cat).is_none(), "{name}: exchange fails");
        let reports = eh_collapse_all(cat);
        ensure!(!reports.is_empty(), "{name}: no diagonal blocks");
        for r in &reports {
            ensure!(r.collapse == Some(true), "{name}: block at {:?} q={} p={} does not collapse", r.object, r.q, r.p);
        }
        blocks += reports.len();
    }
    Ok(format!("5 fixtures, {blocks} diagonal blocks collapse"))
}

fn nc_exchange_necessity() -> Outcome {
    let alg = ConvolutionAlgebra::new(build_terminal(2).unwrap(), MatrixAlgebra::new(2), vec![]).map_err(|e| e.to_string())?;
    let mut sample = vec![CMat::zeros(2, 2)];
    for i in 0..2 {
        for j in 0..2 {
            sample.push(CMat::unit(2, i, j));
        }
    }
    let rep = validate_embedded_category(&alg, &sample).map_err(|e| e.to_string())?;
    ensure!(rep.laws.is_ok(), "embedded cells fail the category laws");
    let cat = &rep.category;
    let w = check_exchange(cat).ok_or("no exchange counterexample")?;
    let lhs = cat.compose(w.q, cat.compose(w.p, w.x, w.y).unwrap(), cat.compose(w.p, w.w, w.z).unwrap());
    let rhs = cat.compose(w.p, cat.compose(w.q, w.x, w.w).unwrap(), cat.compose(w.q, w.y, w.z).unwrap());
    ensure!(lhs != rhs, "witness does not witness a failure");
    let nc = check_nc_exchange(cat);
    ensure!(nc.is_ok(), "nc exchange fails: {:?}", nc.violations.first());
    Ok(format!(
        "witness x={} y={} w={} z={}, nc-exchange clean",
        cat.cell_name(w.x),
        cat.cell_name(w.y),
        cat.cell_name(w.w),
        cat.cell_name(w.z)
    ))
}

fn covariance_obstruction() -> Outcome {
    let s3 = Group::symmetric3();
    let base = catalog::codiscrete_two_group(&s3).unwrap();
    let family = catalog::codiscrete_two_group_involutions(&s3);
    let pairs = base_pairs(base.composition_count(), &family);
    let (k, m) = (base.composition_count(), family.len());
    ensure!(
        matches!(covariance_match(&pairs, k, m, &MatrixAlgebra::new(2)), MatchResult::Blocked { .. }),
        "M2 is not obstructed"
    );
    let honours = |asg: &Assignment, a: &dyn Fn(usize, usize) -> (bool, bool)| {
        pairs.iter().all(|p| {
            let (co, contra) = a(asg.products[p.composition], asg.involutions[p.involution]);
            if p.contravariant {
                contra
            } else {
                co
            }
        })
    };
    let found = covariance_match(&pairs, k, m, &ComplexField);
    let asg = found.assignment().ok_or("C has no assignment")?;
    ensure!(honours(asg, &|p, i| { let c = ComplexField.covariance(p, i); (c.covariant, c.contravariant) }), "C assignment breaks a pair");
    let products = vec![LevelSet::from_levels(&[1]), LevelSet::from_levels(&[2]), LevelSet::from_levels(&[1, 2])];
    for h in [HypermatrixSystem::new(&[2, 2]).unwrap(), HypermatrixSystem::with_products(&[2, 2], products).unwrap()] {
        let asg = covariance_match(&pairs, k, m, &h).assignment().cloned().ok_or("hypermatrices have no assignment")?;
        ensure!(honours(&asg, &|p, i| { let c = h.covariance(p, i); (c.covariant, c.contravariant) }), "hypermatrix assignment breaks a pair");
    }
    Ok("M2 blocked; C and H(2,2) assigned".into())
}

fn hyper_sample(rng: &mut hicat_core::sampling::SampleRng, i: usize) -> Hypermatrix {
    Hypermatrix::from_vec(&[2, 2], structured_matrix(rng, 4, i).data().to_vec()).unwrap()
}

type HyperNorm = Box<dyn Fn(&Hypermatrix) -> f64 + Sync>;

fn hypermatrix_cstar() -> Outcome {
    let dims = [2usize, 2];
    let gammas: Vec<LevelSet> = LevelSet::all_subsets(2).collect();
    let mut rng = rng_from_seed(5);
    let ints: Vec<Hypermatrix> = (0..60).map(|_| Hypermatrix::from_vec(&dims, integer_vec(&mut rng, 16, 5)).unwrap()).collect();
    let cfg = CheckConfig { samples: 1000, seed: 7, tol: 1e-9, ..Default::default() };
    let mut worst: f64 = 0.0;
    for &g in &gammas {
        let u = unit(&dims, g).unwrap();
        for t in ints.windows(3) {
            let (x, y, z) = (&t[0], &t[1], &t[2]);
            let l = hmul(g, &hmul(g, x, y).unwrap(), z).unwrap();
            let r = hmul(g, x, &hmul(g, y, z).unwrap()).unwrap();
            ensure!(l == r, "{g}: associativity fails on integers");
            ensure!(hmul(g, &u, x).unwrap() == *x && hmul(g, x, &u).unwrap() == *x, "{g}: unit fails");
        }
        let r = cstar_suite(
            |a: &Hypermatrix, b: &Hypermatrix| hmul(g, a, b).unwrap(),
            |a: &Hypermatrix| hinvol(g, a).unwrap(),
            |a: &Hypermatrix| hnorm(g, a).unwrap(),
            hyper_sample,
            &cfg,
        );
        ensure!(r.passed, "{g}: {:?}", r.laws.iter().find(|l| !l.passed));
        worst = worst.max(r.worst_slack);
    }
    let norms: Vec<(String, HyperNorm)> = gammas
        .iter()
        .map(|&g| (g.to_string(), Box::new(move |x: &Hypermatrix| hnorm(g, x).unwrap()) as HyperNorm))
        .collect();
    let bound = |i: usize, _: usize| Some(gammas[i].iter().map(|k| dims[k] as f64).product::<f64>());
    let eq = norm_equivalence(&norms, bound, hyper_sample, &cfg);
    ensure!(eq.passed, "norm ratios exceed their bounds: {:?}", eq.ratios);
    Ok(format!("4 products, 1000 samples, worst slack {worst:.1e}"))
}

fn full_depth_identification() -> Outcome {
    let dims = [2usize, 2];
    let base = build_product(&[build_pair_groupoid(2).unwrap(), build_pair_groupoid(2).unwrap()]).unwrap();
    let family: Vec<InvolutionSpec> = LevelSet::all_subsets(2).map(|g| product_inversion(&base, &dims, g).unwrap()).collect();
    let alg = ConvolutionAlgebra::new(base.clone(), ComplexField, family).map_err(|e| e.to_string())?;
    let mut rng = rng_from_seed(6);
    for s in 0..50 {
        let data = |rng: &mut _| if s % 2 == 0 { integer_vec(rng, 16, 6) } else { gaussian_vec(rng, 16) };
        let x = Hypermatrix::from_vec(&dims, data(&mut rng)).unwrap();
        let y = Hypermatrix::from_vec(&dims, data(&mut rng)).unwrap();
        let (sx, sy) = (to_section(&x, &base).unwrap(), to_section(&y, &base).unwrap());
        for g in LevelSet::all_subsets(2) {
            let held = g.complement(2).0 as usize;
            let conv = from_section(&alg.convolve(held, &sx, &sy).unwrap(), &base, &dims).unwrap();
            ensure!(conv == hmul(g, &x, &y).unwrap(), "sample {s}: product {g} differs");
            let inv = from_section(&alg.involve(g.0 as usize, &sx).unwrap(), &base, &dims).unwrap();
            ensure!(inv == hinvol(g, &x).unwrap(), "sample {s}: involution {g} differs");
        }
    }
    Ok("4 products and 4 involutions, 50 sample pairs, exact".into())
}

fn conjugation_calculus() -> Outcome {
    let s3 = Group::symmetric3();
    let cat = catalog::delooped_group(&s3).unwrap();
    let data = catalog::delooped_group_conjugation(&s3);
    let flags = ConjugationFlags::all();
    ensure!(flags.tensorial, "tensorial flag not set");
    let r = validate_conjugation(&cat, &data, flags).map_err(|e| e.to_string())?;
    ensure!(r.is_ok(), "conjugation: {:?}", r.violations.first());
    let r = verify_folding_laws(&cat, &data, flags).map_err(|e| e.to_string())?;
    ensure!(r.is_ok(), "folding: {:?}", r.violations.first());
    let mut mutations = 0;
    for x in cat.cells().filter(|&x| cat.is_identity(1, x)) {
        let r0 = data.conjugate(x).ok_or("missing conjugate")?.r;
        for c in cat.cells().filter(|&c| c != r0) {
            let bad = data.clone().with_r(x, c);
            let caught = !validate_conjugation(&cat, &bad, flags).map_err(|e| e.to_string())?.is_ok()
                || !verify_folding_laws(&cat, &bad, flags).map_err(|e| e.to_string())?.is_ok();
            ensure!(caught, "R_{} -> {} went unnoticed", cat.cell_name(x), cat.cell_name(c));
            mutations += 1;
        }
    }
    Ok(format!("S3 clean; {mutations} single R mutations all caught"))
}

fn positivity() -> Outcome {
    let s3 = Group::symmetric3();
    let group_inverse = InvolutionSpec::new((0..6).map(|x| CellId(s3.inverse(x))).collect(), [0]);
    let bases = vec![
        ("pair groupoid 3", build_pair_groupoid(3).unwrap(), pair_inverse(3)),
        ("S3", catalog::group_category(&s3).unwrap(), group_inverse),
    ];
    let cfg = CheckConfig::default();
    let mut worst: f64 = 0.0;
    for (name, base, inv) in bases {
        let alg = ConvolutionAlgebra::new(base, MatrixAlgebra::new(2), vec![inv]).map_err(|e| e.to_string())?;
        let mut rng = rng_from_seed(8);
        for i in 0..100 {
            let s = alg.random_section(&mut rng, i);
            let defect = alg.adjoint_defect(0, 0, &s).map_err(|e| e.to_string())?;
            ensure!(defect <= 1e-10, "{name} sample {i}: adjoint defect {defect:e}");
            match alg.positivity(0, 0, &s, &cfg).map_err(|e| e.to_string())? {
                PositivityOutcome::Checked(p) => {
                    ensure!(p.min_eigenvalue >= -1e-9 * p.norm, "{name} sample {i}: eigenvalue {:e}", p.min_eigenvalue);
                    worst = worst.min(p.min_eigenvalue / p.norm.max(1e-300));
                }
                other => return Err(format!("{name} sample {i}: {other:?}")),
            }
        }
    }
    Ok(format!("200 sections, worst eigenvalue/norm {worst:.1e}"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn determinism() -> Outcome {
    let pg = fixture("pairgroupoid3.cat");
    let s3 = fixture("s3_group.cat");
    let t2 = fixture("terminal2.cat");
    let suites: Vec<Vec<&str>> = vec![
        vec!["suite", "cstar", "--hyper", "2,2", "--samples", "200", "--seed", "7"],
        vec!["suite", "cstar", "--base", &pg, "--coeff", "M2", "--samples", "100", "--seed", "3"],
        vec!["suite", "equivalence", "--hyper", "2,3", "--samples", "100", "--seed", "4"],
        vec!["suite", "positivity", "--base", &s3, "--coeff", "M2", "--samples", "50", "--seed", "9"],
        vec!["suite", "collapse", &t2],
    ];
    let bin = env!("CARGO_BIN_EXE_hicat");
    for args in &suites {
        let runs: Vec<Vec<u8>> = ["1", "4", "4"]
            .iter()
            .map(|t| Command::new(bin).env("HICAT_THREADS", t).args(args).output().unwrap().stdout)
            .collect();
        ensure!(!runs[0].is_empty(), "{}: no output", args[1]);
        ensure!(runs.windows(2).all(|w| w[0] == w[1]), "{} {}: reports differ between runs", args[0], args[1]);
        let in_process = hicat_cli::run(std::iter::once("hicat").chain(args.iter().copied()));
        ensure!(in_process.stdout.as_bytes() == runs[0].as_slice(), "{}: in-process report differs", args[1]);
    }
    Ok(format!("{} suites byte-identical across runs and thread counts", suites.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 matrix-algebra recovery", matrix_recovery),
        ("2 Eckmann-Hilton collapse", eckmann_hilton),
        ("3 nc-exchange necessity", nc_exchange_necessity),
        ("4 covariance obstruction", covariance_obstruction),
        ("5 hypermatrix C*-structure", hypermatrix_cstar),
        ("6 full-depth identification", full_depth_identification),
        ("7 conjugation calculus", conjugation_calculus),
        ("8 positivity", positivity),
        ("9 determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (name, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => writeln!(err, "PASS  {name}: {detail}").unwrap(),
            Err(why) => {
                writeln!(err, "FAIL  {name}: {why}").unwrap();
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
