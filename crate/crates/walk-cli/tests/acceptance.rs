//! Acceptance suite: one test per release criterion, each printing a
//! `[PASS]` line on success (visible with `--nocapture`).
//!
//! Run with: cargo test -p walk-cli --test acceptance -- --nocapture

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use walk_core::analysis::{classical_dtrw, moments, total_variation, variance_growth_exponent};
use walk_core::ctqw::{Graph, GeneratorMatrix};
use walk_core::{
    CoinBasis, CoinOperator, Distribution, InitialStateKind, SingleParticleState, Topology,
    TwoParticleState,
};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn up_state(topology: Topology) -> SingleParticleState {
    SingleParticleState::point(topology, 0, Complex64::ONE, Complex64::ZERO).unwrap()
}

fn balanced_imaginary_state() -> SingleParticleState {
    SingleParticleState::point(
        Topology::Line,
        0,
        re(SQRT_HALF),
        Complex64::new(0.0, SQRT_HALF),
    )
    .unwrap()
}

#[test]
fn criterion_01_variance_growth_exponents() {
    let start = Instant::now();
    let coin = CoinOperator::hadamard();
    let step_counts = [20usize, 40, 60, 80, 100];

    let quantum_points: Vec<(usize, f64)> = step_counts
        .iter()
        .map(|&n| {
            let dist = balanced_imaginary_state()
                .evolve(&coin, n)
                .position_distribution();
            (n, moments(&dist).unwrap().variance)
        })
        .collect();
    let quantum_slope = variance_growth_exponent(&quantum_points).unwrap();
    assert!(
        (quantum_slope - 2.0).abs() <= 0.05,
        "quantum log-log slope {quantum_slope}, expected 2.00 +/- 0.05"
    );

    let classical_points: Vec<(usize, f64)> = step_counts
        .iter()
        .map(|&n| (n, moments(&classical_dtrw(n)).unwrap().variance))
        .collect();
    let classical_slope = variance_growth_exponent(&classical_points).unwrap();
    assert!(
        (classical_slope - 1.0).abs() <= 0.01,
        "classical log-log slope {classical_slope}, expected 1.00 +/- 0.01"
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "[PASS] criterion 1: variance exponents quantum {quantum_slope:.4} (2.00 +/- 0.05), \
         classical {classical_slope:.6} (1.00 +/- 0.01) in {elapsed:?}"
    );
}

/// Brute-force oracle: sums the contribution of all 2^N coin histories.
fn path_enumeration(
    coin: &CoinOperator,
    init_up: Complex64,
    init_down: Complex64,
    steps: usize,
) -> HashMap<(i64, CoinBasis), Complex64> {
    let mut result: HashMap<(i64, CoinBasis), Complex64> = HashMap::new();
    for (start, weight) in [(CoinBasis::Up, init_up), (CoinBasis::Down, init_down)] {
        if weight == Complex64::ZERO {
            continue;
        }
        for history in 0u64..(1u64 << steps) {
            let mut amp = weight;
            let mut pos = 0i64;
            let mut prev = start;
            for bit in 0..steps {
                let next = if (history >> bit) & 1 == 0 {
                    CoinBasis::Up
                } else {
                    CoinBasis::Down
                };
                amp *= coin.entry(next, prev);
                pos += next.drift();
                prev = next;
            }
            *result.entry((pos, prev)).or_insert(Complex64::ZERO) += amp;
        }
    }
    result
}

#[test]
fn criterion_02_path_enumeration_oracle() {
    let start = Instant::now();
    let coin = CoinOperator::hadamard();
    let inits = [
        (Complex64::ONE, Complex64::ZERO),
        (re(SQRT_HALF), Complex64::new(0.0, SQRT_HALF)),
    ];
    let mut worst = 0.0f64;
    for &(up, down) in &inits {
        for steps in 0..=8usize {
            let oracle = path_enumeration(&coin, up, down, steps);
            let state = SingleParticleState::point(Topology::Line, 0, up, down)
                .unwrap()
                .evolve(&coin, steps);
            for pos in -(steps as i64)..=steps as i64 {
                for basis in CoinBasis::BOTH {
                    let expected = oracle.get(&(pos, basis)).copied().unwrap_or(Complex64::ZERO);
                    let diff = (expected - state.amplitude(pos, basis)).norm();
                    worst = worst.max(diff);
                }
            }
        }
    }
    assert!(worst < 1e-12, "worst amplitude deviation {worst:.3e}");

    let three = up_state(Topology::Line)
        .evolve(&coin, 3)
        .position_distribution();
    assert_eq!(three.len(), 4);
    for (pos, expected) in [(3, 0.125), (1, 0.625), (-1, 0.125), (-3, 0.125)] {
        assert!(
            (three.probability(pos) - expected).abs() < 1e-12,
            "P({pos}) = {}, expected {expected}",
            three.probability(pos)
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "[PASS] criterion 2: engine matches the 2^N path oracle for N <= 8 \
         (worst deviation {worst:.2e}); N=3 gives 1/8, 5/8, 1/8, 1/8 in {elapsed:?}"
    );
}

#[test]
fn criterion_03_product_state_factorization() {
    let start = Instant::now();
    let steps = 100usize;
    let coin = CoinOperator::hadamard();
    let joint = TwoParticleState::initial(InitialStateKind::Product, Topology::Line)
        .unwrap()
        .evolve(&coin, steps);
    let first = SingleParticleState::point(Topology::Line, 0, Complex64::ZERO, Complex64::ONE)
        .unwrap()
        .evolve(&coin, steps);
    let second = up_state(Topology::Line).evolve(&coin, steps);

    let mut worst = 0.0f64;
    let reach = steps as i64;
    for i in -reach..=reach {
        let pi = first.probability(i);
        for j in -reach..=reach {
            let diff = (joint.joint_probability(i, j) - pi * second.probability(j)).abs();
            worst = worst.max(diff);
        }
    }
    assert!(worst < 1e-12, "worst factorization defect {worst:.3e}");

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "[PASS] criterion 3: N=100 product joint factorizes into one-particle \
         distributions (max defect {worst:.2e}) in {elapsed:?}"
    );
}

#[test]
fn criterion_04_bunching_and_antibunching() {
    let coin = CoinOperator::hadamard();

    let symmetric = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Line)
        .unwrap()
        .step(&coin);
    assert!((symmetric.joint_probability(1, 1) - 0.5).abs() <= 1e-15);
    assert!((symmetric.joint_probability(-1, -1) - 0.5).abs() <= 1e-15);
    assert!(symmetric.joint_probability(1, -1) == 0.0);
    assert!(symmetric.joint_probability(-1, 1) == 0.0);

    let antisymmetric = TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line)
        .unwrap()
        .step(&coin);
    assert!((antisymmetric.joint_probability(1, -1) - 0.5).abs() <= 1e-15);
    assert!((antisymmetric.joint_probability(-1, 1) - 0.5).abs() <= 1e-15);
    assert!(antisymmetric.joint_probability(1, 1) == 0.0);
    assert!(antisymmetric.joint_probability(-1, -1) == 0.0);

    let separation = |kind| {
        TwoParticleState::initial(kind, Topology::Line)
            .unwrap()
            .evolve(&coin, 20)
            .joint_distribution()
            .separation_moment()
    };
    let apart = separation(InitialStateKind::Antisymmetric);
    let together = separation(InitialStateKind::Symmetric);
    assert!(
        apart > together,
        "antisymmetric separation {apart} should exceed symmetric {together}"
    );

    println!(
        "[PASS] criterion 4: N=1 bunching/anti-bunching exact; N=20 separation \
         antisymmetric {apart:.3} > symmetric {together:.3}"
    );
}

#[test]
fn criterion_05_two_evolution_routes_agree() {
    let coin = CoinOperator::hadamard();
    let steps = 50usize;
    let kinds = [
        InitialStateKind::Product,
        InitialStateKind::Symmetric,
        InitialStateKind::Antisymmetric,
    ];
    let mut worst = 0.0f64;
    for kind in kinds {
        for topology in [Topology::Line, Topology::Cycle(8)] {
            let direct = TwoParticleState::initial(kind, topology)
                .unwrap()
                .evolve(&coin, steps);
            let built = TwoParticleState::from_superposition(kind, &coin, steps, topology).unwrap();
            for c1 in CoinBasis::BOTH {
                for c2 in CoinBasis::BOTH {
                    for m in direct.positions() {
                        for n in direct.positions() {
                            let diff = (direct.amplitude(c1, c2, m, n)
                                - built.amplitude(c1, c2, m, n))
                            .norm();
                            worst = worst.max(diff);
                            assert!(
                                diff < 1e-12,
                                "{kind:?} on {topology:?}: amplitude mismatch {diff:.3e} at \
                                 ({c1:?},{c2:?},{m},{n})"
                            );
                        }
                    }
                }
            }
        }
    }
    println!(
        "[PASS] criterion 5: rank-4 evolution and superposition construction agree \
         elementwise at N=50 on line and cycle:8 (worst {worst:.2e})"
    );
}

#[test]
fn criterion_06_cycle_folding() {
    let coin = CoinOperator::hadamard();
    let steps = 100usize;
    let line = up_state(Topology::Line).evolve(&coin, steps);
    let reach = steps as i64;
    let mut worst = 0.0f64;
    for n in [8usize, 16, 64, 100] {
        let cycle = up_state(Topology::Cycle(n)).evolve(&coin, steps);
        for site in 0..n as i64 {
            for basis in CoinBasis::BOTH {
                let mut folded = Complex64::ZERO;
                let mut image = site;
                while image > -reach {
                    image -= n as i64;
                }
                while image <= reach {
                    folded += line.amplitude(image, basis);
                    image += n as i64;
                }
                let diff = (folded - cycle.amplitude(site, basis)).norm();
                worst = worst.max(diff);
                assert!(diff < 1e-12, "n={n} site={site} {basis:?}: defect {diff:.3e}");
            }
        }
    }
    println!(
        "[PASS] criterion 6: cycle amplitudes equal mod-n folded line amplitudes for \
         n in {{8, 16, 64, 100}} at N=100 (worst {worst:.2e})"
    );
}

#[test]
fn criterion_07_continuous_time_walk() {
    let generator = GeneratorMatrix::new(&Graph::Cycle(3), 1.0).unwrap();
    let psi0 = [Complex64::ONE, Complex64::ZERO, Complex64::ZERO];

    let mut worst = 0.0f64;
    for k in 0..20 {
        let t = 0.37 * k as f64;
        let psi = generator.evolve_quantum(&psi0, t).unwrap();
        let p0 = psi[0].norm_sqr();
        let expected = (5.0 + 4.0 * (3.0 * t).cos()) / 9.0;
        let diff = (p0 - expected).abs();
        worst = worst.max(diff);
        assert!(diff < 1e-9, "t={t}: P0 {p0} vs closed form {expected}");

        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-10, "t={t}: norm^2 {norm}");
    }

    let relaxed = generator.evolve_classical(&[1.0, 0.0, 0.0], 50.0).unwrap();
    let uniform = Distribution::from_entries((0..3).map(|v| (v as i64, 1.0 / 3.0)));
    let relaxed_dist =
        Distribution::from_entries(relaxed.iter().enumerate().map(|(v, &p)| (v as i64, p)));
    let distance = total_variation(&relaxed_dist, &uniform);
    assert!(distance < 1e-6, "TV to uniform {distance}");
    let total: f64 = relaxed.iter().sum();
    assert!((total - 1.0).abs() < 1e-10);

    println!(
        "[PASS] criterion 7: triangle return probability matches (5+4cos 3t)/9 at 20 \
         times (worst {worst:.2e}); classical TV to uniform {distance:.2e} at t=50"
    );
}

#[test]
fn criterion_08_absorption_closure() {
    let topology = Topology::Absorbing {
        left: -10,
        right: 10,
    };
    let coin = CoinOperator::hadamard();
    let reports = up_state(topology).evolve_with_trace(&coin, 200);
    assert_eq!(reports.len(), 201);
    let mut worst = 0.0f64;
    for report in &reports {
        let closure = report.state.norm().powi(2) + report.state.absorbed();
        let defect = (closure - 1.0).abs();
        worst = worst.max(defect);
        assert!(
            defect < 1e-12,
            "step {}: closure defect {defect:.3e}",
            report.step_index
        );
    }
    let absorbed = reports.last().unwrap().state.absorbed();
    assert!(absorbed > 0.0, "no probability absorbed after 200 steps");
    println!(
        "[PASS] criterion 8: absorbing walk keeps surviving + absorbed = 1 at all 201 \
         steps (worst defect {worst:.2e}); absorbed {absorbed:.6} by N=200"
    );
}

#[test]
fn criterion_09_entanglement_entropy() {
    let coin = CoinOperator::hadamard();

    let mut product = TwoParticleState::initial(InitialStateKind::Product, Topology::Line).unwrap();
    let mut max_entropy = 0.0f64;
    for step in 0..=50usize {
        if step > 0 {
            product = product.step(&coin);
        }
        let entropy = product
            .reduced_density_particle1()
            .von_neumann_entropy()
            .unwrap();
        max_entropy = max_entropy.max(entropy);
        assert!(
            entropy < 1e-9,
            "product reduced state entropy {entropy:.3e} bits at N={step}"
        );
    }

    let bell = TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line)
        .unwrap()
        .reduced_density_particle1()
        .von_neumann_entropy()
        .unwrap();
    assert!(
        (bell - 1.0).abs() <= 1e-9,
        "antisymmetric N=0 entropy {bell} bits, expected 1"
    );

    println!(
        "[PASS] criterion 9: product reduced state stays pure for N <= 50 (max \
         {max_entropy:.2e} bits); antisymmetric N=0 entropy {bell:.12} bits"
    );
}

fn tmp_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_walk(args: &[&str]) {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_walk"))
        .args(args)
        .output()
        .expect("failed to spawn the walk binary");
    assert!(
        output.status.success(),
        "walk {args:?}: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn criterion_10_byte_identical_reruns() {
    let dir = tmp_dir();
    let path = |name: &str| dir.join(name).to_str().unwrap().to_string();

    // (name of produced file, argv template with OUT placeholders)
    let cases: Vec<(Vec<String>, Vec<String>)> = vec![
        (
            vec![path("single.csv"), path("single.svg")],
            vec![
                "single".into(),
                "--topology".into(),
                "line".into(),
                "--init-coin".into(),
                "plus-i".into(),
                "--steps".into(),
                "60".into(),
                "--format".into(),
                "csv".into(),
                "--out".into(),
                path("single.csv"),
                "--plot".into(),
                path("single.svg"),
            ],
        ),
        (
            vec![path("two.json"), path("two.svg")],
            vec![
                "two".into(),
                "--state".into(),
                "antisymmetric".into(),
                "--topology".into(),
                "cycle:30".into(),
                "--steps".into(),
                "40".into(),
                "--format".into(),
                "json".into(),
                "--out".into(),
                path("two.json"),
                "--plot".into(),
                path("two.svg"),
            ],
        ),
        (
            vec![path("classical.csv")],
            vec![
                "classical".into(),
                "--steps".into(),
                "80".into(),
                "--format".into(),
                "csv".into(),
                "--out".into(),
                path("classical.csv"),
            ],
        ),
        (
            vec![path("ctqw.json")],
            vec![
                "ctqw".into(),
                "--topology".into(),
                "cycle:100".into(),
                "--time".into(),
                "30".into(),
                "--format".into(),
                "json".into(),
                "--out".into(),
                path("ctqw.json"),
            ],
        ),
        (
            vec![path("absorb.csv")],
            vec![
                "single".into(),
                "--topology".into(),
                "absorbing:-10,10".into(),
                "--steps".into(),
                "50".into(),
                "--trace".into(),
                "--format".into(),
                "csv".into(),
                "--out".into(),
                path("absorb.csv"),
            ],
        ),
        (
            vec![path("sweep_T8.csv"), path("sweep_T16.csv")],
            vec![
                "sweep".into(),
                "--periods".into(),
                "8,16".into(),
                "--steps".into(),
                "30".into(),
                "--state".into(),
                "symmetric".into(),
                "--out".into(),
                path("sweep.csv"),
            ],
        ),
    ];

    let mut compared = 0usize;
    for (outputs, args) in &cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        run_walk(&argv);
        let first: Vec<Vec<u8>> = outputs.iter().map(|p| std::fs::read(p).unwrap()).collect();
        run_walk(&argv);
        for (path, before) in outputs.iter().zip(first) {
            let after = std::fs::read(path).unwrap();
            assert_eq!(before, after, "{path} differs between identical runs");
            compared += 1;
        }
    }
    println!(
        "[PASS] criterion 10: {compared} output files byte-identical across repeated \
         identical invocations (csv, json, svg, sweep, trace)"
    );
}
