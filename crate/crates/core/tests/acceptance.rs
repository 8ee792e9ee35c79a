//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use bandpos::bandmat::{
    assemble_block_diagonal, conjugate_by_permutation, even_odd_permutation, split_pentadiagonal, BandSymMatrix,
    DenseSymMatrix, SymMatrix,
};
use bandpos::chainseq::{comparison_dominates, is_chain_sequence, wall_wetzel_pd};
use bandpos::graphs::{chordal_critical_exponent, is_chordal, is_chordless_cycle, SimpleGraph};
use bandpos::positivity::eigen::jacobi_eigenvalues;
use bandpos::positivity::{classify_positivity, determinant, min_eigenvalue, sym_tridiag_eigenvalues, PositivityClass};
use bandpos::preservers::{
    boundary_pentadiagonal, id_numeric_probe, is_id_pentadiagonal, is_id_tridiagonal, random_pd_pattern,
    random_pd_pentadiagonal, sample_rng, Family, Probe, DEFAULT_R_GRID, DEFAULT_ZERO_TOL,
};
use bandpos::{PowerSet, DEFAULT_TOL};
use rand::{Rng, RngExt};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const R_SET: [f64; 6] = [0.1, 0.5, 0.9, 1.0, 2.0, 3.7];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_close(got: f64, want: f64, tol: f64) -> bool {
    if want == 0.0 {
        got.abs() <= tol
    } else {
        (got - want).abs() <= tol * want.abs()
    }
}

fn golden_tridiagonal_determinant() -> Outcome {
    let mut worst = 0.0_f64;
    for eps in [0.01, 0.1, 1.0, 10.0] {
        let a = BandSymMatrix::tridiagonal(vec![1.0, 2.0 + eps, 1.0], vec![1.0, 1.0]).map_err(|e| e.to_string())?;
        for r in R_SET {
            let got = determinant(&a.hadamard_power(r).map_err(|e| e.to_string())?);
            let want = (2.0 + eps).powf(r) - 2.0;
            ensure(rel_close(got, want, 1e-12), || {
                format!("eps={eps} r={r}: {got} vs {want}")
            })?;
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    Ok(format!("24 cases, worst relative error {worst:.1e}"))
}

fn golden_pentadiagonal_determinant() -> Outcome {
    let p = boundary_pentadiagonal();
    let mut worst = 0.0_f64;
    for r in R_SET {
        let got = determinant(&p.hadamard_power(r).map_err(|e| e.to_string())?);
        let want = 2.0 - 3.0 * 2f64.powf(r) + 4f64.powf(r);
        ensure(rel_close(got, want, 1e-12), || format!("r={r}: {got} vs {want}"))?;
        if want != 0.0 {
            worst = worst.max((got - want).abs() / want.abs());
        }
    }
    for k in 1..=9 {
        let r = k as f64 / 10.0;
        let det = determinant(&p.hadamard_power(r).map_err(|e| e.to_string())?);
        ensure(det < 0.0, || format!("det at r={r} is {det}, expected negative"))?;
    }
    let at_one = determinant(&p);
    ensure(at_one.abs() <= 1e-12, || format!("det at r=1 is {at_one}"))?;
    Ok(format!(
        "6 cases, worst relative error {worst:.1e}; negative on 0.1..0.9; det at r=1 is {at_one:e}"
    ))
}

fn random_tridiagonal<R: Rng>(rng: &mut R, n: usize) -> BandSymMatrix {
    let d = (0..n).map(|_| rng.random_range(-0.2..3.0)).collect();
    let e = (0..n - 1)
        .map(|_| {
            if rng.random_bool(0.1) {
                0.0
            } else {
                rng.random_range(0.0..2.0)
            }
        })
        .collect();
    BandSymMatrix::tridiagonal(d, e).expect("valid sizes")
}

fn wall_wetzel_equivalence() -> Outcome {
    let (mut compared, mut pd) = (0, 0);
    for i in 0..1000 {
        let mut rng = sample_rng(3, i);
        let n = rng.random_range(1..=10);
        let t = random_tridiagonal(&mut rng, n);
        let oracle = classify_positivity(&t, DEFAULT_TOL).map_err(|e| e.to_string())?;
        if oracle.min_eigenvalue.abs() <= 10.0 * DEFAULT_TOL {
            continue;
        }
        let chain = wall_wetzel_pd(&t).map_err(|e| e.to_string())?;
        let is_pd = oracle.class == PositivityClass::Pd;
        ensure(chain == is_pd, || {
            format!("sample {i}: chain says {chain}, oracle {:?} for {t:?}", oracle.class)
        })?;
        compared += 1;
        pd += usize::from(is_pd);
    }
    Ok(format!("{compared} of 1000 compared ({pd} PD), all agree"))
}

fn run_probe(family: Family, r: f64, seed: u64, min: usize, max: usize) -> Result<f64, String> {
    let report = Probe::new(family, r)
        .samples(500)
        .seed(seed)
        .tol(DEFAULT_TOL)
        .orders(min, max)
        .run()
        .map_err(|e| e.to_string())?;
    ensure(report.violations == 0, || {
        format!(
            "r={r}: {} violations, min {}",
            report.violations, report.min_over_samples
        )
    })?;
    Ok(report.min_over_samples)
}

fn tridiagonal_probe() -> Outcome {
    let mut lowest = f64::INFINITY;
    for (k, r) in [1.0, 1.3, 2.0, std::f64::consts::E, 5.0].into_iter().enumerate() {
        lowest = lowest.min(run_probe(Family::Tridiagonal, r, 40 + k as u64, 1, 12)?);
    }
    Ok(format!(
        "5 x 500 samples, no violations, lowest eigenvalue {lowest:.3e}"
    ))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn pentadiagonal_probe() -> Outcome {
    let mut lowest = f64::INFINITY;
    for (k, r) in [1.0, 1.3, 2.0, std::f64::consts::E, 5.0].into_iter().enumerate() {
        lowest = lowest.min(run_probe(Family::Pentadiagonal, r, 50 + k as u64, 5, 8)?);
    }
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let mut rng = sample_rng(5, i);
        let n = rng.random_range(5..=8);
        let p = random_pd_pentadiagonal(&mut rng, n);
        let m = conjugate_by_permutation(&p, &even_odd_permutation(n)).map_err(|e| e.to_string())?;
        let (odd, even) = split_pentadiagonal(&p).map_err(|e| e.to_string())?;
        let blocks = assemble_block_diagonal(&[odd.clone(), even.clone()]);
        ensure(m == blocks, || {
            format!("sample {i}: permuted matrix is not the split block sum")
        })?;
        let ep = jacobi_eigenvalues(&p.to_dense());
        let mut halves = sym_tridiag_eigenvalues(&odd, 1e-15).map_err(|e| e.to_string())?;
        halves.extend(sym_tridiag_eigenvalues(&even, 1e-15).map_err(|e| e.to_string())?);
        let em = sorted(halves);
        for (x, y) in ep.iter().zip(&em) {
            ensure((x - y).abs() <= 1e-12, || format!("sample {i}: eigenvalue {x} vs {y}"))?;
            worst = worst.max((x - y).abs());
        }
    }
    Ok(format!(
        "5 x 500 samples, no violations, lowest eigenvalue {lowest:.3e}; split spectra agree on 100 (max diff {worst:.1e})"
    ))
}

fn pattern_strictness() -> Outcome {
    let mut lowest = f64::INFINITY;
    for i in 0..200 {
        let mut rng = sample_rng(6, i);
        let n = rng.random_range(3..=10);
        let g = if i % 2 == 0 {
            SimpleGraph::path(n)
        } else {
            SimpleGraph::penta_support(n).map_err(|e| e.to_string())?
        };
        let a = random_pd_pattern(&mut rng, &g);
        let lambda = min_eigenvalue(&a, DEFAULT_TOL).map_err(|e| e.to_string())?;
        for r in [1.0, 1.5, 2.0] {
            let p = a.hadamard_power(r).map_err(|e| e.to_string())?;
            let lam = min_eigenvalue(&p, DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure(lam > DEFAULT_TOL, || format!("sample {i} r={r}: λ_min {lam}"))?;
            lowest = lowest.min(lam);
            let b = a.shifted(-lambda);
            for k in 0..n {
                let gap = p.get(k, k) - b.get(k, k).max(0.0).powf(r);
                ensure(gap >= lambda.powf(r) - DEFAULT_TOL, || {
                    format!("sample {i} r={r}: diagonal gap {gap}")
                })?;
            }
        }
    }
    Ok(format!(
        "600 powered matrices strictly PD, lowest eigenvalue {lowest:.3e}"
    ))
}

/// Tridiagonal with the given coupling support, made PSD by diagonal dominance.
fn dominant_tridiagonal<R: Rng>(rng: &mut R, support: &[bool]) -> BandSymMatrix {
    let n = support.len() + 1;
    let e: Vec<f64> = support
        .iter()
        .map(|&s| if s { rng.random_range(0.2..2.0) } else { 0.0 })
        .collect();
    let d = (0..n)
        .map(|i| {
            let left = if i > 0 { e[i - 1] } else { 0.0 };
            let right = if i < n - 1 { e[i] } else { 0.0 };
            left + right + rng.random_range(0.0..1.0)
        })
        .collect();
    BandSymMatrix::tridiagonal(d, e).expect("valid sizes")
}

fn id_characterization() -> Outcome {
    let mut id_count = 0;
    for mask in 0u32..16 {
        let support: Vec<bool> = (0..4).map(|k| mask >> k & 1 == 1).collect();
        let criterion = support.windows(2).all(|w| !(w[0] && w[1]));
        let mut rng = sample_rng(7, mask as usize);
        let t = dominant_tridiagonal(&mut rng, &support);
        let id = is_id_tridiagonal(&t, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?;
        let probe = id_numeric_probe(&t, DEFAULT_R_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure(id == criterion && probe == criterion, || {
            format!("pattern {mask:04b}: criterion {criterion}, is_id {id}, probe {probe}")
        })?;
        id_count += usize::from(id);
    }
    let mut penta_cases = 0;
    for n in 5..=7 {
        for mask in 0u32..(1 << (n - 2)) {
            let s_support: Vec<bool> = (0..n - 2).map(|k| mask >> k & 1 == 1).collect();
            // Entries two apart on the second diagonal are consecutive
            // couplings of the same half after the split.
            let criterion = (0..n - 4).all(|k| !(s_support[k] && s_support[k + 2]));
            let mut rng = sample_rng(70 + n as u64, mask as usize);
            let (odd_support, even_support): (Vec<bool>, Vec<bool>) = {
                let odd = s_support.iter().step_by(2).copied().collect();
                let even = s_support.iter().skip(1).step_by(2).copied().collect();
                (odd, even)
            };
            let odd = dominant_tridiagonal(&mut rng, &odd_support);
            let even = dominant_tridiagonal(&mut rng, &even_support);
            let p = bandpos::bandmat::merge_pentadiagonal(&odd, &even).map_err(|e| e.to_string())?;
            let id = is_id_pentadiagonal(&p, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?;
            let (o, e) = split_pentadiagonal(&p).map_err(|e| e.to_string())?;
            let via_split = is_id_tridiagonal(&o, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?
                && is_id_tridiagonal(&e, DEFAULT_ZERO_TOL).map_err(|e| e.to_string())?;
            let probe = id_numeric_probe(&p, DEFAULT_R_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure(id == criterion && via_split == criterion && probe == criterion, || {
                format!("n={n} pattern {mask:b}: criterion {criterion}, is_id {id}, split {via_split}, probe {probe}")
            })?;
            penta_cases += 1;
        }
    }
    Ok(format!(
        "16 tridiagonal patterns ({id_count} ID) and {penta_cases} pentadiagonal patterns agree"
    ))
}

fn same_set(got: &PowerSet, threshold: f64, naturals: bool) -> bool {
    got.tail_threshold == threshold && got.naturals_visible() == naturals
}

fn critical_exponents() -> Outcome {
    for n in 3..=8 {
        let g = SimpleGraph::complete(n);
        let s = chordal_critical_exponent(&g).map_err(|e| e.to_string())?;
        let t = (n - 2) as f64;
        ensure(same_set(&s, t, t > 1.0), || format!("K_{n}: {s}"))?;
    }
    let p3 = chordal_critical_exponent(&SimpleGraph::path(3)).map_err(|e| e.to_string())?;
    ensure(same_set(&p3, 1.0, false) && p3.to_string() == "[1, ∞)", || {
        format!("P3: {p3}")
    })?;
    let mut k4e = SimpleGraph::complete(4);
    k4e = {
        let edges: Vec<(usize, usize)> = k4e.edges().into_iter().filter(|&e| e != (1, 2)).collect();
        SimpleGraph::from_edges(4, &edges).map_err(|e| e.to_string())?
    };
    let s = chordal_critical_exponent(&k4e).map_err(|e| e.to_string())?;
    ensure(same_set(&s, 2.0, true) && s.to_string() == "ℕ ∪ [2, ∞)", || {
        format!("K4 minus edge: {s}")
    })?;
    let c4 = SimpleGraph::cycle(4).map_err(|e| e.to_string())?;
    ensure(chordal_critical_exponent(&c4).is_err(), || "C4 accepted".to_string())?;
    let cert = is_chordal(&c4);
    let witness = cert.witness_cycle.ok_or("C4 has no witness")?;
    ensure(
        !cert.is_chordal && witness.len() == 4 && is_chordless_cycle(&c4, &witness),
        || format!("bad witness {witness:?}"),
    )?;
    Ok(format!(
        "K3..K8, P3, K4 minus an edge correct; C4 refused with witness {witness:?}"
    ))
}

fn comparison_theorem() -> Outcome {
    let mut powered = 0;
    for i in 0..500 {
        let mut rng = sample_rng(9, i);
        let len = rng.random_range(1..=15);
        let g: Vec<f64> = (0..=len).map(|_| rng.random_range(0.01..0.99)).collect();
        let a: Vec<f64> = g.windows(2).map(|w| (1.0 - w[0]) * w[1]).collect();
        let c: Vec<f64> = a.iter().map(|x| x * rng.random_range(0.0..=1.0)).collect();
        ensure(is_chain_sequence(&a), || {
            format!("sample {i}: constructed a is not a chain: {a:?}")
        })?;
        ensure(comparison_dominates(&c, &a).unwrap_or(false), || {
            format!("sample {i}: c not dominated")
        })?;
        ensure(is_chain_sequence(&c), || {
            format!("sample {i}: dominated c is not a chain: {c:?}")
        })?;
        if a.iter().all(|&x| x < 1.0) {
            let r = rng.random_range(1.0..6.0);
            let ar: Vec<f64> = a.iter().map(|x| x.powf(r)).collect();
            ensure(is_chain_sequence(&ar), || format!("sample {i}: a^{r} is not a chain"))?;
            powered += 1;
        }
    }
    Ok(format!(
        "500 dominated sequences are chains; {powered} powered sequences remain chains"
    ))
}

fn cauchy_vectors() -> Outcome {
    let c = DenseSymMatrix::from_fn(3, |i, j| 1.0 / (i + j + 2) as f64);
    let passes = id_numeric_probe(&c, DEFAULT_R_GRID, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure(passes, || "Cauchy matrix fails the numeric probe".to_string())?;
    let c2 = c.sym_product(&c).map_err(|e| e.to_string())?;
    let p = c2.hadamard_power(0.25).map_err(|e| e.to_string())?;
    let det = determinant(&p);
    let class = classify_positivity(&p, DEFAULT_TOL).map_err(|e| e.to_string())?.class;
    ensure(det < 0.0 && class == PositivityClass::Indefinite, || {
        format!("det {det}, class {class:?}")
    })?;
    Ok(format!("Cauchy passes the probe; square at r=1/4 has det {det:.6e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden determinant A(eps)", golden_tridiagonal_determinant),
        (
            "golden determinant boundary pentadiagonal",
            golden_pentadiagonal_determinant,
        ),
        ("chain-sequence PD test vs eigenvalue oracle", wall_wetzel_equivalence),
        ("tridiagonal power preservation probe", tridiagonal_probe),
        ("pentadiagonal power preservation probe and split", pentadiagonal_probe),
        ("strict positivity of powered pattern matrices", pattern_strictness),
        ("infinite divisibility characterization", id_characterization),
        ("chordal critical exponents", critical_exponents),
        ("comparison of chain sequences", comparison_theorem),
        ("Cauchy fixed vectors", cauchy_vectors),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
