//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use lamopt_cli::pipeline::sequence_margins;
use lamopt_cli::schema::{DesignResult, DesignStatus, ProblemFile};
use lamopt_core::clt::{a_matrix, buckling_factor, d_matrix, xi_a, xi_d};
use lamopt_core::inner::{retrieve_branch_and_bound, retrieve_exhaustive};
use lamopt_core::outer::{buckling_margin, check_ply_constraints, compositions};
use lamopt_core::region::{cloud_size, extreme_sequences, feasible_region, support_max};
use lamopt_core::{
    AngleSet, DesignProblem, InnerRules, LoadCase, Material, PlyCounts, PlyWeighting, StackingSequence,
    StrainAllowables,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Vec4 = lamopt_core::Vec4<f64>;
type Mat3 = lamopt_core::Mat3<f64>;

const MODES: [PlyWeighting; 2] = [PlyWeighting::Midpoint, PlyWeighting::Exact];

fn quad() -> AngleSet {
    AngleSet::new(&[0.0, 45.0, -45.0, 90.0]).unwrap()
}

fn material() -> Material {
    Material {
        e1: 181000.0,
        e2: 10300.0,
        g12: 7170.0,
        nu12: 0.28,
        ply_thickness: 0.125,
        allowables: StrainAllowables { tension: 0.01, compression: 0.008, shear: 0.015 },
    }
}

/// Every count vector over four angles with 1..=8 plies.
fn small_counts() -> Vec<PlyCounts> {
    (1..=8).flat_map(|n| compositions(n, 4)).map(PlyCounts::new).collect()
}

/// All distinct orderings of a multiset, by plain recursion.
fn permutations(counts: &[usize]) -> Vec<Vec<usize>> {
    fn rec(left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for k in 0..left.len() {
            if left[k] > 0 {
                left[k] -= 1;
                cur.push(k);
                rec(left, cur, out);
                cur.pop();
                left[k] += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut counts.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Bending parameters from the through-thickness integral of `z^2`, written
/// from ply interface coordinates (unit plies, half thickness `n`).
fn xi_d_direct(plies: &[usize], degrees: &[f64], mode: PlyWeighting) -> Vec4 {
    let n = plies.len() as f64;
    let mut xi = [0.0; 4];
    for (i, &k) in plies.iter().enumerate() {
        let (z0, z1) = (i as f64, i as f64 + 1.0);
        let w = match mode {
            PlyWeighting::Midpoint => 3.0 * (0.5 * (z0 + z1)).powi(2) * (z1 - z0) / n.powi(3),
            PlyWeighting::Exact => (z1.powi(3) - z0.powi(3)) / n.powi(3),
        };
        let t = degrees[k].to_radians();
        let zeta = [(2.0 * t).cos(), (4.0 * t).cos(), (2.0 * t).sin(), (4.0 * t).sin()];
        for j in 0..4 {
            xi[j] += w * zeta[j];
        }
    }
    xi
}

fn dot(a: &Vec4, b: &Vec4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion_1() -> Outcome {
    let clock = Instant::now();
    let angles = quad();
    let degrees = angles.angles().to_vec();
    let (mut cases, mut points, mut outside) = (0, 0usize, 0usize);
    let mut worst = f64::NEG_INFINITY;
    for counts in small_counts() {
        let perms = permutations(counts.as_slice());
        for mode in MODES {
            let poly = feasible_region(&counts, &angles, mode).unwrap();
            for p in &perms {
                let x = xi_d_direct(p, &degrees, mode);
                let v = poly.violation(&x);
                worst = worst.max(v);
                if !poly.contains(&x, 1e-9) {
                    outside += 1;
                }
            }
            points += perms.len();
            cases += 1;
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    Outcome {
        passed: outside == 0,
        detail: format!(
            "{cases} count/mode cases, {points} sequences, {outside} outside, max violation {worst:.3e}, {secs:.1} s"
        ),
    }
}

fn criterion_2() -> Outcome {
    let angles = quad();
    let degrees = angles.angles().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checks, mut gaps, mut non_block) = (0usize, 0usize, 0usize);
    let mut worst: f64 = 0.0;
    for counts in small_counts() {
        let perms = permutations(counts.as_slice());
        for mode in MODES {
            let cloud: Vec<Vec4> = perms.iter().map(|p| xi_d_direct(p, &degrees, mode)).collect();
            for _ in 0..100 {
                let g: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
                let len = dot(&g, &g).sqrt();
                let lambda = g.map(|v| v / len);
                let brute = cloud.iter().map(|x| dot(&lambda, x)).fold(f64::NEG_INFINITY, f64::max);
                let s = support_max(&counts, &angles, &lambda, mode).unwrap();
                let gap = (brute - s.value).abs();
                worst = worst.max(gap);
                if gap > 1e-9 {
                    gaps += 1;
                }
                if !s.sequence.is_block_contiguous() {
                    non_block += 1;
                }
                checks += 1;
            }
        }
    }
    Outcome {
        passed: gaps == 0 && non_block == 0,
        detail: format!(
            "{checks} direction checks, {gaps} gaps > 1e-9 (max {worst:.3e}), {non_block} non-contiguous maximizers"
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for theta in [0.0, 15.0, 30.0, 45.0, -45.0, 60.0, -75.0, 90.0] {
        let angles = AngleSet::new(&[theta]).unwrap();
        let t = f64::to_radians(theta);
        let zeta = [(2.0 * t).cos(), (4.0 * t).cos(), (2.0 * t).sin(), (4.0 * t).sin()];
        for n in 1..=32usize {
            let seq = StackingSequence::new(vec![0; n]);
            let mid = xi_d(&seq, &angles, PlyWeighting::Midpoint).unwrap();
            let exact = xi_d(&seq, &angles, PlyWeighting::Exact).unwrap();
            let factor = 1.0 - 1.0 / (4.0 * (n * n) as f64);
            for j in 0..4 {
                worst = worst.max((mid[j] - factor * zeta[j]).abs());
                worst = worst.max((exact[j] - zeta[j]).abs());
            }
            cases += 1;
        }
    }
    Outcome { passed: worst <= 1e-12, detail: format!("{cases} uniform stacks, max error {worst:.3e}") }
}

/// Transformed reduced stiffness of a ply at `deg` degrees.
fn q_bar(m: &Material, deg: f64) -> Mat3 {
    let nu21 = m.nu12 * m.e2 / m.e1;
    let den = 1.0 - m.nu12 * nu21;
    let (q11, q22, q12, q66) = (m.e1 / den, m.e2 / den, m.nu12 * m.e2 / den, m.g12);
    let t = deg.to_radians();
    let (c, s) = (t.cos(), t.sin());
    let (c2, s2) = (c * c, s * s);
    let b11 = q11 * c2 * c2 + 2.0 * (q12 + 2.0 * q66) * s2 * c2 + q22 * s2 * s2;
    let b22 = q11 * s2 * s2 + 2.0 * (q12 + 2.0 * q66) * s2 * c2 + q22 * c2 * c2;
    let b12 = (q11 + q22 - 4.0 * q66) * s2 * c2 + q12 * (s2 * s2 + c2 * c2);
    let b66 = (q11 + q22 - 2.0 * q12 - 2.0 * q66) * s2 * c2 + q66 * (s2 * s2 + c2 * c2);
    let b16 = (q11 - q12 - 2.0 * q66) * s * c2 * c + (q12 - q22 + 2.0 * q66) * s2 * s * c;
    let b26 = (q11 - q12 - 2.0 * q66) * s2 * s * c + (q12 - q22 + 2.0 * q66) * s * c2 * c;
    [[b11, b12, b16], [b12, b22, b26], [b16, b26, b66]]
}

fn rel_error(a: &Mat3, b: &Mat3) -> f64 {
    let scale = b.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = a.iter().flatten().zip(b.iter().flatten()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    diff / scale
}

fn criterion_4() -> Outcome {
    let mat = material();
    let degrees = [0.0, 45.0, -45.0, 90.0, 30.0, -60.0];
    let angles = AngleSet::new(&degrees).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_a, mut worst_d): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let n = rng.random_range(1..=20);
        let plies: Vec<usize> = (0..n).map(|_| rng.random_range(0..degrees.len())).collect();
        let seq = StackingSequence::new(plies.clone());
        let t = mat.ply_thickness;
        let (mut a_ref, mut d_ref) = ([[0.0; 3]; 3], [[0.0; 3]; 3]);
        for (i, &k) in plies.iter().enumerate() {
            let q = q_bar(&mat, degrees[k]);
            let (z0, z1) = (i as f64 * t, (i + 1) as f64 * t);
            for r in 0..3 {
                for c in 0..3 {
                    // Both halves of the symmetric laminate.
                    a_ref[r][c] += 2.0 * q[r][c] * (z1 - z0);
                    d_ref[r][c] += 2.0 * q[r][c] * (z1.powi(3) - z0.powi(3)) / 3.0;
                }
            }
        }
        let xd = xi_d(&seq, &angles, PlyWeighting::Exact).unwrap();
        let xa = xi_a(&seq.counts(angles.len()), &angles).unwrap();
        worst_d = worst_d.max(rel_error(&d_matrix(&xd, n, &mat).unwrap(), &d_ref));
        worst_a = worst_a.max(rel_error(&a_matrix(&xa, n, &mat).unwrap(), &a_ref));
    }
    Outcome {
        passed: worst_a <= 1e-9 && worst_d <= 1e-9,
        detail: format!("200 random sequences, max relative error D {worst_d:.3e}, A {worst_a:.3e}"),
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn optimize(problem: &Path, threads: usize, out: &Path) -> (i32, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_lamopt"))
        .args(["--threads", &threads.to_string(), "optimize"])
        .arg(problem)
        .arg("-o")
        .arg(out)
        .status()
        .expect("lamopt runs");
    (status.code().unwrap_or(-1), std::fs::read(out).unwrap_or_default())
}

/// Fewest plies over all counts and all stacking sequences, with the same
/// ply-constraint and buckling evaluators the optimizer uses.
fn brute_force_plies(p: &DesignProblem) -> Option<usize> {
    for n in 1..=p.outer_rules.max_total_plies {
        for c in compositions(n, p.angles.len()) {
            let counts = PlyCounts::new(c);
            let ply = check_ply_constraints(&counts, &p.angles, &p.outer_rules, &p.material, &p.loads).unwrap();
            if !ply.is_feasible() {
                continue;
            }
            for plies in permutations(counts.as_slice()) {
                let xi = xi_d(&StackingSequence::new(plies), &p.angles, p.weighting).unwrap();
                let b = buckling_margin(&xi, n, &p.loads, &p.material).unwrap();
                if b.is_none_or(|(m, _)| m >= 0.0) {
                    return Some(n);
                }
            }
        }
    }
    None
}

const OPTIMALITY_FIXTURES: [&str; 3] =
    ["compression_square.json", "compression_biaxial.json", "compression_wide_exact.json"];

fn criterion_5(dir: &Path) -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;
    for name in OPTIMALITY_FIXTURES {
        let path = fixture(name);
        let text = std::fs::read_to_string(&path).unwrap();
        let problem = ProblemFile::parse(name, &text).unwrap().to_problem().unwrap();
        let (code, bytes) = optimize(&path, 1, &dir.join(name));
        let result: DesignResult = serde_json::from_slice(&bytes).unwrap();
        let brute = brute_force_plies(&problem);
        let mut ok = code == 0 && result.status == DesignStatus::Optimal && result.total_plies == brute;

        let counts = result.counts.clone().unwrap();
        let outer = result.outer.as_ref().unwrap();
        let region = feasible_region(&counts, &problem.angles, problem.weighting).unwrap();
        ok &= region.contains(&outer.xi_d, 1e-7) && outer.margins.min >= -1e-7;

        let stacking = result.stacking.as_ref().unwrap();
        let seq = StackingSequence::from_angles(&problem.angles, &stacking.mid_to_skin).unwrap();
        let recomputed = sequence_margins(&problem, &seq).unwrap();
        let stated = result.margins.as_ref().unwrap();
        ok &= recomputed.min >= -1e-7 && (recomputed.min - stated.min).abs() <= 1e-9 && result.design_feasible;

        passed &= ok;
        lines.push(format!("{name}: N={:?} brute={brute:?} min margin {:.3e}", result.total_plies, recomputed.min));
    }
    Outcome { passed, detail: lines.join("; ") }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rule_sets = [
        InnerRules::none(),
        InnerRules { max_contiguous: 2, outer_ply_angles: vec![45.0, -45.0], max_disorientation: 45.0 },
    ];
    let mut instances: Vec<(AngleSet, PlyCounts)> = small_counts().into_iter().map(|c| (quad(), c)).collect();
    for c in [vec![3, 2, 2, 2], vec![3, 3, 2, 2]] {
        instances.push((quad(), PlyCounts::new(c)));
    }
    let six = AngleSet::new(&[0.0, 45.0, -45.0, 90.0, 30.0, -60.0]).unwrap();
    instances.push((six, PlyCounts::new(vec![2, 2, 2, 1, 1, 1])));

    let (mut runs, mut mismatches) = (0usize, 0usize);
    for (angles, counts) in &instances {
        assert!(cloud_size(counts) <= 100_000);
        let points = extreme_sequences(counts, angles, PlyWeighting::Midpoint).unwrap().points;
        for t in 0..50 {
            let mode = MODES[t % 2];
            let rules = &rule_sets[(t / 2) % 2];
            // Random convex combination of the vertices, occasionally pushed outside.
            let w: Vec<f64> = points.iter().map(|_| rng.random_range(0.0..1.0f64).powi(3)).collect();
            let sum: f64 = w.iter().sum::<f64>().max(1e-300);
            let mut target = [0.0; 4];
            for (wi, p) in w.iter().zip(&points) {
                for j in 0..4 {
                    target[j] += wi / sum * p[j];
                }
            }
            if t % 5 == 0 {
                let j = *[0usize, 1, 2, 3].choose(&mut rng).unwrap();
                target[j] += rng.random_range(-0.5..0.5);
            }
            let e = retrieve_exhaustive(counts, &target, rules, angles, mode).unwrap();
            let b = retrieve_branch_and_bound(counts, &target, rules, angles, mode, u64::MAX).unwrap();
            if e.residual != b.residual || e.sequence != b.sequence || e.rules_satisfied != b.rules_satisfied {
                mismatches += 1;
            }
            runs += 1;
        }
    }
    Outcome {
        passed: mismatches == 0,
        detail: format!("{} instances x 50 targets = {runs} runs, {mismatches} mismatches", instances.len()),
    }
}

fn criterion_7() -> Outcome {
    let mat = material();
    let angles = AngleSet::new(&[0.0, 45.0, -45.0, 90.0, 30.0, -60.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let load_cases = [
        LoadCase { nx: -10.0, ny: 0.0, nxy: 0.0, plate_a: 500.0, plate_b: 250.0, max_mode: 4 },
        LoadCase { nx: -10.0, ny: -7.0, nxy: 3.0, plate_a: 300.0, plate_b: 300.0, max_mode: 4 },
        LoadCase { nx: 5.0, ny: -20.0, nxy: 0.0, plate_a: 200.0, plate_b: 600.0, max_mode: 6 },
    ];
    let (mut checks, mut failures) = (0, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=16);
        let seq = StackingSequence::new((0..n).map(|_| rng.random_range(0..angles.len())).collect());
        let mode = MODES[rng.random_range(0..2)];
        let d = d_matrix(&xi_d(&seq, &angles, mode).unwrap(), n, &mat).unwrap();
        for loads in &load_cases {
            let base = buckling_factor(&d, loads).unwrap();
            for c in [0.5, 2.0, 10.0] {
                let scaled = buckling_factor(&d.map(|r| r.map(|v| v * c)), loads).unwrap();
                let rel = (scaled.factor - c * base.factor).abs() / (c * base.factor);
                worst = worst.max(rel);
                if rel > 1e-12 || (scaled.m, scaled.p) != (base.m, base.p) {
                    failures += 1;
                }
                checks += 1;
            }
        }
    }
    Outcome {
        passed: failures == 0,
        detail: format!("{checks} scalings, {failures} failures, max relative error {worst:.3e}"),
    }
}

fn criterion_8(dir: &Path) -> Outcome {
    let mut passed = true;
    let mut names = Vec::new();
    for name in OPTIMALITY_FIXTURES.iter().chain(&["compression_rules.json", "tensile.json"]) {
        let path = fixture(name);
        let (c1, one) = optimize(&path, 1, &dir.join(format!("t1_{name}")));
        let (c8, eight) = optimize(&path, 8, &dir.join(format!("t8_{name}")));
        passed &= c1 == c8 && !one.is_empty() && one == eight;
        names.push(*name);
    }
    Outcome { passed, detail: format!("--threads 1 vs 8 on {}", names.join(", ")) }
}

fn main() {
    let dir = std::env::temp_dir().join(format!("lamopt-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: [(&str, Check); 8] = [
        ("hull theorem", Box::new(criterion_1)),
        ("support theorem", Box::new(criterion_2)),
        ("closed-form uniform stacks", Box::new(criterion_3)),
        ("CLT consistency", Box::new(criterion_4)),
        ("bi-level optimality", Box::new(|| criterion_5(&dir))),
        ("inner oracle equivalence", Box::new(criterion_6)),
        ("buckling linearity", Box::new(criterion_7)),
        ("determinism", Box::new(|| criterion_8(&dir))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("acceptance {} {name}: {tag} ({})", i + 1, out.detail);
        failed += usize::from(!out.passed);
    }
    let _ = std::fs::remove_dir_all(&dir);
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
