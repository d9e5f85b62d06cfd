//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! binary exits non-zero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fredholm::infotheory::{
    covering_number_exact, ellipsoid_of, entropy_lower_bound, information_flow_comparison, packing_number_exact,
    shannon_entropy_estimate, FinitePointSet,
};
use fredholm::kernels::{plateau_count, prolate_chi_auto, shannon_number, triangular_eigenvalues, KernelSpec};
use fredholm::regularize::{
    error_norm, sub_seed, synthesize_problem, truncated_solution, truncation_k1, truncation_k2, verify_lemma6,
    verify_lemma7, weak_pairing, ConstraintSequence, FSpec, LemmaReport, NoiseMode, ProblemInstance, ProblemSpec, Rule,
};
use fredholm::spectral::spectral_system;
use fredholm::stability::{
    check_condition, classify_continuity, stability_bound, stability_sup_exact, ContinuityModel, PFunction,
};
use fredholm::SpectralSystem;

const EPS_GRID: [f64; 5] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
const LEMMA_SLACK: f64 = 1e-12;
const MODES: usize = 256;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn nystrom(spec: &str, n: usize) -> SpectralSystem {
    let k = KernelSpec::parse(spec).unwrap();
    spectral_system(&k, &k.grid(n).unwrap()).unwrap()
}

fn example2_instance(eps: f64, seed: u64) -> ProblemInstance {
    let spec = ProblemSpec {
        f: FSpec::Decay { c: 1.0, q: 2.0 },
        eps,
        e_bound: 1.0,
        noise: NoiseMode::default(),
        seed,
        tight: true,
    };
    synthesize_problem(&triangular_eigenvalues(MODES), &ConstraintSequence::Derivative, &spec).unwrap()
}

fn analytic_spectrum() -> Outcome {
    let start = Instant::now();
    let sys = nystrom("triangular", 256);
    let elapsed = start.elapsed();
    let worst = (1..=10)
        .map(|k| {
            let exact = ((k as f64) * PI).powi(-2);
            ((sys.eigenvalues()[k - 1] - exact).abs() / exact, k)
        })
        .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a });
    outcome(
        worst.0 <= 1e-3 && elapsed < Duration::from_secs(10),
        format!(
            "Nystrom n=256 max rel err {:.3e} at k={} (tol 1e-3), {:.2}s (limit 10s)",
            worst.0,
            worst.1,
            elapsed.as_secs_f64()
        ),
    )
}

fn truncation_rules() -> Outcome {
    let lam = triangular_eigenvalues(2000);
    let beta = ConstraintSequence::Derivative.values(2000).unwrap();
    let got = [
        truncation_k1(&lam, 1e-2, 1.0).unwrap(),
        truncation_k1(&lam, 1e-4, 1.0).unwrap(),
        truncation_k2(&lam, &beta, 1e-3, 1.0).unwrap(),
    ];
    let closed = [
        (PI * 1e-2f64.sqrt()).recip().floor() as usize,
        (PI * 1e-4f64.sqrt()).recip().floor() as usize,
        (PI * 1e-3f64.cbrt()).recip().floor() as usize,
    ];
    outcome(
        got == [3, 31, 3] && got == closed,
        format!("k1(1e-2), k1(1e-4), k2(1e-3) = {got:?}; closed forms {closed:?}; expected [3, 31, 3]"),
    )
}

fn entropy_bound() -> Outcome {
    let lam = triangular_eigenvalues(100);
    let r = entropy_lower_bound(&ellipsoid_of(&lam, None, 1.0).unwrap(), 0.01).unwrap();
    let oracle: f64 = (1..=100)
        .map(|k| 1.0 / (k as f64 * PI).powi(2))
        .filter(|&l| l >= 0.01)
        .map(|l| (l / 0.01).log2())
        .sum();
    outcome(
        (r.entropy_bits - 4.853).abs() <= 1e-3 && (r.entropy_bits - oracle).abs() <= 1e-12,
        format!(
            "H = {:.6} bits, oracle {:.6} (target 4.853 +/- 1e-3)",
            r.entropy_bits, oracle
        ),
    )
}

fn brute_packing(ps: &FinitePointSet, eps: f64) -> usize {
    let n = ps.len();
    (0u32..1 << n)
        .filter(|&m| {
            (0..n).all(|i| m & (1 << i) == 0 || (i + 1..n).all(|j| m & (1 << j) == 0 || ps.distance(i, j) > eps))
        })
        .map(u32::count_ones)
        .max()
        .unwrap() as usize
}

fn brute_covering(ps: &FinitePointSet, eps: f64) -> usize {
    let n = ps.len();
    (1u32..1 << n)
        .filter(|&m| (0..n).all(|i| (0..n).any(|c| m & (1 << c) != 0 && ps.distance(i, c) <= eps)))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

fn covering_chain() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = 0;
    let mut oracle_mismatch = 0;
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 + (seed % 3) as usize;
        let n = 6 + (seed % 15) as usize;
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let ps = FinitePointSet::new(pts).unwrap();
        for eps in [0.1, 0.25, 0.5, 0.8, 1.2] {
            let cover = covering_number_exact(&ps, eps).unwrap().size;
            let pack = packing_number_exact(&ps, eps).unwrap().size;
            checked += 1;
            if cover > pack {
                failures += 1;
            }
            if n <= 14 && (cover != brute_covering(&ps, eps) || pack != brute_packing(&ps, eps)) {
                oracle_mismatch += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && oracle_mismatch == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{checked} (set, eps) cases over 60 sets, {failures} with N > M, {oracle_mismatch} exhaustive-search mismatches, {:.2}s (limit 60s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn worst_ratio(r: &LemmaReport) -> f64 {
    [r.data, r.constraint, r.combined]
        .iter()
        .map(|i| i.ratio())
        .fold(0.0, f64::max)
}

fn lemma_suites() -> Outcome {
    let lam = triangular_eigenvalues(MODES);
    let (mut ok6, mut ok7, mut worst6, mut worst7) = (0, 0, 0.0f64, 0.0f64);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 1));
        let eps = 10f64.powf(rng.random_range(-6.0..-1.0));
        let q = rng.random_range(1.6..3.0);
        let spec = ProblemSpec {
            f: FSpec::Decay { c: 1.0, q },
            eps,
            e_bound: 1.0,
            noise: NoiseMode::default(),
            seed,
            tight: seed % 2 == 0,
        };
        let inst = synthesize_problem(&lam, &ConstraintSequence::Derivative, &spec).unwrap();
        let l6 = verify_lemma6(&inst, &truncated_solution(&inst, Rule::K2).unwrap()).unwrap();
        let l7 = verify_lemma7(&inst, &truncated_solution(&inst, Rule::K1).unwrap()).unwrap();
        let holds = |r: &LemmaReport| {
            [r.data, r.constraint, r.combined]
                .iter()
                .all(|i| i.lhs <= i.rhs + LEMMA_SLACK)
        };
        ok6 += holds(&l6) as usize;
        ok7 += holds(&l7) as usize;
        worst6 = worst6.max(worst_ratio(&l6));
        worst7 = worst7.max(worst_ratio(&l7));
    }
    outcome(
        ok6 == 100 && ok7 == 100,
        format!("k2 suite {ok6}/100, k1 suite {ok7}/100 (slack 1e-12); worst lhs/rhs {worst6:.4} and {worst7:.4}"),
    )
}

fn strong_convergence() -> Outcome {
    let errs: Vec<f64> = EPS_GRID
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let inst = example2_instance(eps, sub_seed(11, i as u64));
            error_norm(&inst, &truncated_solution(&inst, Rule::K2).unwrap())
        })
        .collect();
    let rows_ok = EPS_GRID.iter().zip(&errs).all(|(e, err)| *err <= SQRT_2 * e.cbrt());
    let ratio = errs[errs.len() - 1] / errs[0];
    outcome(
        rows_ok && ratio <= 0.2,
        format!(
            "errors {:?} all <= sqrt2*eps^(1/3): {rows_ok}; final/first {ratio:.4} (limit 0.2)",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()
        ),
    )
}

fn weak_convergence() -> Outcome {
    let v: Vec<f64> = (1..=MODES).map(|k| 1.0 / k as f64).collect();
    let v_norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rows: Vec<_> = EPS_GRID
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let inst = example2_instance(eps, sub_seed(11, i as u64));
            weak_pairing(&inst, &truncated_solution(&inst, Rule::K1).unwrap(), &v).unwrap()
        })
        .collect();
    let decreasing = rows.windows(2).all(|w| w[1].bound < w[0].bound);
    let final_rel = rows[rows.len() - 1].bound / v_norm;
    let pairing_ok = rows.iter().all(|w| w.pairing <= w.bound);
    outcome(
        decreasing && final_rel < 1e-2 && pairing_ok,
        format!(
            "bound strictly decreasing: {decreasing}; final bound/|v| {final_rel:.4e} (limit 1e-2); pairing <= bound on every row: {pairing_ok}"
        ),
    )
}

fn jensen_oracle() -> Outcome {
    let tri = triangular_eigenvalues(MODES);
    let tri_beta = ConstraintSequence::Derivative.values(MODES).unwrap();
    let sinc = nystrom("sinc:c=10", 400);
    let sinc_lam = sinc.eigenvalues().to_vec();
    let sinc_beta = ConstraintSequence::Prolate { c: 10.0 }.values(sinc_lam.len()).unwrap();
    let cases = [
        (
            "power:gamma=1/3",
            PFunction::Power { gamma: 1.0 / 3.0 },
            &tri,
            &tri_beta,
        ),
        ("explog", PFunction::ExpLog, &sinc_lam, &sinc_beta),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, p, lam, beta) in cases {
        let cond = check_condition(lam, beta, &p, lam.len()).unwrap();
        if !cond.ok {
            pass = false;
            parts.push(format!("{name}: condition fails at k={:?}", cond.first_violating_k));
            continue;
        }
        let mut min_gap = f64::INFINITY;
        let mut max_gap = 0.0f64;
        for eps in [1e-2, 1e-3, 1e-4] {
            for big in [0.5, 1.0, 2.0] {
                let sup = stability_sup_exact(lam, beta, eps, big, lam.len()).unwrap();
                let bound = stability_bound(eps, big, &p).unwrap();
                pass &= sup <= bound + 1e-9;
                min_gap = min_gap.min(bound - sup);
                max_gap = max_gap.max(bound - sup);
            }
        }
        parts.push(format!(
            "{name} (K={}): bound - sup in [{min_gap:.3e}, {max_gap:.3e}]",
            lam.len()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn classification() -> Outcome {
    let grid: Vec<f64> = (1..=12).map(|i| 10f64.powi(-i)).collect();
    let holder: Vec<f64> = grid.iter().map(|e| e.cbrt()).collect();
    let log: Vec<f64> = grid.iter().map(|e| (e / 2.0).ln().abs().powf(-0.5)).collect();
    let h = classify_continuity(&grid, &holder).unwrap();
    let l = classify_continuity(&grid, &log).unwrap();
    let h_ok = matches!(h.model, ContinuityModel::Holder { exponent } if (exponent - 1.0 / 3.0).abs() <= 1e-3);
    let l_ok = matches!(l.model, ContinuityModel::Logarithmic { exponent } if (exponent + 0.5).abs() <= 1e-2);
    outcome(
        h_ok && l_ok,
        format!("eps^(1/3) -> {:?}; |ln(eps/2)|^(-1/2) -> {:?}", h.model, l.model),
    )
}

fn shannon_plateau() -> Outcome {
    let sys = nystrom("sinc:c=10", 400);
    let s = shannon_number(10.0, 2.0).unwrap();
    let count = plateau_count(sys.eigenvalues(), 0.5).unwrap();
    let bits = entropy_lower_bound(&ellipsoid_of(sys.eigenvalues(), None, 1.0).unwrap(), 1e-3)
        .unwrap()
        .entropy_bits;
    let estimate = shannon_entropy_estimate(s, 1e-3).unwrap();
    let rel = (bits - estimate).abs() / estimate;
    outcome(
        (5..=7).contains(&count) && rel <= 0.2,
        format!(
            "plateau {count} (S = {s:.4}, allowed 5..=7); entropy {bits:.3} vs S*log2(1/eps) = {estimate:.3}, rel dev {rel:.4} (limit 0.2)"
        ),
    )
}

fn prolate_asymptotics() -> Outcome {
    let chi10 = prolate_chi_auto(1.0, 11).unwrap().chi[10];
    let oracle = 10.0 * 11.0 + 0.5;
    outcome(
        (chi10 - 110.5).abs() <= 0.05 && (chi10 - oracle).abs() <= 0.05,
        format!("chi_10(c=1) = {chi10:.6}, asymptote {oracle} (tol 0.05)"),
    )
}

fn information_flow() -> Outcome {
    let lam = triangular_eigenvalues(2000);
    let beta = ConstraintSequence::Derivative.values(2000).unwrap();
    let diffs: Vec<f64> = EPS_GRID
        .iter()
        .map(|&eps| information_flow_comparison(&lam, &beta, eps, 1.0).unwrap().difference)
        .collect();
    outcome(
        diffs.iter().all(|&d| d > 0.0),
        format!(
            "bits(k1) - bits(k2) = {:?}",
            diffs.iter().map(|d| format!("{d:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("analytic spectrum", analytic_spectrum),
        ("truncation rules", truncation_rules),
        ("entropy bound", entropy_bound),
        ("covering <= packing", covering_chain),
        ("truncation inequality suites", lemma_suites),
        ("strong convergence", strong_convergence),
        ("weak convergence", weak_convergence),
        ("Jensen-bound oracle", jensen_oracle),
        ("continuity classification", classification),
        ("Shannon plateau", shannon_plateau),
        ("prolate asymptotics", prolate_asymptotics),
        ("information flow", information_flow),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += !o.pass as usize;
        println!(
            "{} criterion {} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
