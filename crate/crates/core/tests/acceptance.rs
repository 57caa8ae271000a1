//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::normalized_pair;
use ptm_core::circuits::{
    baker_diagnostic, encoder_input, ptm_encoder, ptm_qec_run, run, shor3_run,
    xx_rotation_phase_check,
};
use ptm_core::dynamics::{
    ghz_state, lindblad_evolve, population_trace, support_class, ChainConfig, Sign, SupportClass,
};
use ptm_core::fractal::{closed_series, ftm_direct, self_similarity};
use ptm_core::number_theory::{
    feiler_autocorrelation, product_family, ptm_constant, zeta_ptm, ProductFamily,
};
use ptm_core::ptm_seq::{multigrade_sums, ptm_block, ptm_digit_sum, ptm_recursive};
use ptm_core::ptm_states::{encode_logical, ptm_state};
use ptm_core::spin_ops::{
    apply_hadamard_all, verify_first_moment, verify_jz_moments, verify_power_moments,
    verify_xx_stabilizer, verify_z_products,
};
use ptm_core::{DensityMatrix, Logical, PauliAxis, StateVector, C64};

/// Self-similarity scores at N = 20, alpha = -beta = 1/sqrt(2), zoom 16,
/// snapshot from the first run.
const SIMILARITY_ZOOM: f64 = 16.0;
const SIMILARITY_BASELINE: [(f64, f64); 3] = [
    (0.2, 0.911626718943),
    (0.25, 0.902705483876),
    (0.88, 0.987690734583),
];
const HIGH_CORRELATION: f64 = 0.8;
const BASELINE_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed<F: FnOnce() -> Outcome>(limit: Option<Duration>, f: F) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{}; {:.2} s", o.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            o.pass = false;
            o.detail = format!("{} exceeds {} s", o.detail, limit.as_secs());
        }
    }
    o
}

fn sequence_identity() -> Outcome {
    let block = ptm_block(20).unwrap();
    let mismatches = (0..1u64 << 20)
        .filter(|&n| {
            let b = block.bits()[n as usize];
            ptm_digit_sum(n) != b || ptm_recursive(n) != b
        })
        .count();
    outcome(mismatches == 0, format!("{mismatches} mismatches over 2^20 terms"))
}

fn multigrade() -> Outcome {
    let sums = |n: u32, k: u32| multigrade_sums(n, k).unwrap();
    let big = |v: u32| BigUint::from(v);
    let mut ok = true;
    for (k, v) in [(0, 4u32), (1, 14), (2, 70)] {
        ok &= sums(3, k) == (big(v), big(v));
    }
    ok &= sums(3, 3) == (big(368), big(416));
    for (k, v) in [(0, 8u32), (1, 60), (2, 620), (3, 7200)] {
        ok &= sums(4, k) == (big(v), big(v));
    }
    let mut exhaustive = true;
    for n in 1..=12 {
        for k in 0..n {
            let (e, o) = sums(n, k);
            exhaustive &= e == o;
        }
        let (e, o) = sums(n, n);
        exhaustive &= e != o;
    }
    outcome(
        ok && exhaustive,
        format!("worked examples {ok}, exhaustive N<=12 (equal k<N, unequal k=N) {exhaustive}"),
    )
}

fn hadamard_relations() -> Outcome {
    let mut worst = 1.0f64;
    for n in 1..=8 {
        let mut psi = StateVector::zeros(n);
        apply_hadamard_all(&mut psi).unwrap();
        let zero = ptm_state(n, Logical::Zero).unwrap().state();
        let one = ptm_state(n, Logical::One).unwrap().state();
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let target = zero.combine(s, &one, s).unwrap();
        worst = worst.min(psi.inner(&target).unwrap().norm_sqr());
    }
    outcome(worst >= 1.0 - 1e-12, format!("min fidelity {worst:.15}"))
}

fn spin_properties() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=8u32 {
        for which in [Logical::Zero, Logical::One] {
            if !verify_first_moment(n, which).unwrap().pass {
                failures.push(format!("first moment N={n} {which}"));
            }
        }
        for mask in 1u32..(1 << n) {
            let sites: Vec<usize> = (0..n)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| b as usize + 1)
                .collect();
            if !verify_z_products(n, &sites).unwrap().pass {
                failures.push(format!("z product N={n} Z={sites:?}"));
            }
        }
        for j in 0..=n {
            if !verify_power_moments(n, PauliAxis::Z, j).unwrap().pass {
                failures.push(format!("z power N={n} j={j}"));
            }
        }
        for j in 0..n {
            if !verify_power_moments(n, PauliAxis::Y, j).unwrap().pass {
                failures.push(format!("y power N={n} j={j}"));
            }
        }
        for k in 1..=n as usize {
            for j in 1..=n as usize {
                if !verify_xx_stabilizer(n, k, j).unwrap().pass {
                    failures.push(format!("xx stabilizer N={n} k={k} j={j}"));
                }
            }
        }
    }
    let y_boundary: Vec<bool> = (2..=8)
        .map(|n| !verify_power_moments(n, PauliAxis::Y, n).unwrap().equal)
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "N=2..8, {} failures{}; z boundary j=N detected; y unequal at j=N for N=2..8: {:?}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default(),
            y_boundary
        ),
    )
}

fn qudit_moments() -> Outcome {
    let mut failures = Vec::new();
    for order in 1..=10u32 {
        let dim = 1usize << order;
        for j in 0..=order {
            let r = verify_jz_moments(dim, j).unwrap();
            if !r.pass || r.equal != (j < order) {
                failures.push(format!("d={dim} j={j}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("d=2..1024, exact; equal for j<N, unequal at j=N; failures {failures:?}"),
    )
}

fn encoder() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 20 {
        let Some((alpha, beta)) = normalized_pair(std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0))
        else {
            continue;
        };
        count += 1;
        for n in 2..=8 {
            let out = run(&ptm_encoder(n).unwrap(), &encoder_input(alpha, beta, n).unwrap(), 0)
                .unwrap()
                .output;
            let expected = encode_logical(alpha, beta, n).unwrap();
            worst = worst.max(out.max_abs_diff(&expected).unwrap());
        }
    }
    outcome(worst < 1e-12, format!("N=2..8 x 20 inputs, max amplitude error {worst:.2e}"))
}

fn qec() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let errors = [None, Some(1), Some(2), Some(3)];
    let mut worst = 1.0f64;
    let mut decoded = true;
    let mut count = 0;
    while count < 10 {
        let Some((alpha, beta)) = normalized_pair(std::array::from_fn(|_| rng.random::<f64>() * 2.0 - 1.0))
        else {
            continue;
        };
        count += 1;
        for e in errors {
            let s = shor3_run(alpha, beta, e, 0).unwrap();
            let p = ptm_qec_run(alpha, beta, e, 0).unwrap();
            worst = worst.min(s.fidelity).min(p.fidelity);
            decoded &= s.decoded_site == e && p.decoded_site == e;
        }
    }
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut syndromes: Vec<[u8; 2]> = errors.iter().map(|&e| shor3_run(a, a, e, 0).unwrap().syndrome).collect();
    syndromes.sort();
    syndromes.dedup();
    let injective = syndromes.len() == errors.len();
    outcome(
        worst >= 1.0 - 1e-10 && decoded && injective,
        format!("min fidelity {worst:.15}, decoded {decoded}, injective syndromes {injective}"),
    )
}

fn xx_rotation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let thetas: Vec<f64> = (0..10).map(|_| rng.random::<f64>() * 4.0 * PI - 2.0 * PI).collect();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 2..=6u32 {
        for k in 1..=n as usize {
            for j in (k + 1)..=n as usize {
                for &theta in &thetas {
                    let r = xx_rotation_phase_check(n, k, j, theta).unwrap();
                    pass &= r.pass;
                    worst = worst.max(r.max_deviation);
                }
            }
        }
    }
    outcome(pass && worst < 1e-12, format!("N=2..6, all pairs, 10 angles, max deviation {worst:.2e}"))
}

fn lindblad() -> Outcome {
    let evolve = |n: u32| {
        let cfg = ChainConfig::new(n);
        let rho0 = DensityMatrix::from_pure(&ghz_state(n).unwrap());
        lindblad_evolve(&cfg, &rho0).unwrap()
    };
    let t4 = evolve(4);
    let r4 = support_class(t4.last(), 4).unwrap();
    let t3 = evolve(3);
    let r3 = support_class(t3.last(), 3).unwrap();
    let t5 = evolve(5);
    let mut drift = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for t in [&t3, &t4, &t5] {
        let d = t.diagnostics();
        drift = drift.max(d.max_trace_drift).max(d.max_hermiticity_error);
        min_eig = min_eig.min(d.min_eigenvalue);
    }
    let pass = r4.class == SupportClass::EvenOnly
        && r4.odd_population < 1e-9
        && r3.even_population > 1e-3
        && r3.odd_population > 1e-3
        && drift < 1e-9
        && min_eig > -1e-8;
    outcome(
        pass,
        format!(
            "N=4 off-E population {:.2e}; N=3 E/O populations {:.4}/{:.4}; drift {drift:.2e}; min eigenvalue {min_eig:.2e}",
            r4.odd_population, r3.even_population, r3.odd_population
        ),
    )
}

fn initialization() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=6u32 {
        for (sign, label) in [(Sign::Plus, Logical::Zero), (Sign::Minus, Logical::One)] {
            let trace = population_trace(n, sign, 21).unwrap();
            let last = trace.populations.last().unwrap();
            let target = ptm_state(n, label).unwrap().state().probabilities();
            for (p, q) in last.iter().zip(&target) {
                worst = worst.max((p - q).abs());
            }
        }
    }
    outcome(worst < 1e-10, format!("N=1..6, max population error at t=1 {worst:.2e}"))
}

fn fractal() -> Outcome {
    let (a, b) = (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0));
    let mut worst = 0.0f64;
    for n in 1..=12 {
        let d = ftm_direct(n, a, b).unwrap();
        let c = closed_series(n, a, b).unwrap();
        for (x, y) in d.intensities.iter().zip(&c.intensities) {
            worst = worst.max((x - y).abs());
        }
    }
    let start = Instant::now();
    let series = closed_series(20, a, b).unwrap();
    let elapsed = start.elapsed();
    let parseval = (series.total() - 1.0).abs();
    let mut scores = Vec::new();
    let mut baseline_ok = true;
    for (center, expected) in SIMILARITY_BASELINE {
        let score = self_similarity(&series, center, SIMILARITY_ZOOM)
            .unwrap()
            .score
            .unwrap_or(f64::NAN);
        baseline_ok &= (score - expected).abs() <= BASELINE_TOL && score > HIGH_CORRELATION;
        scores.push(format!("{center}: {score:.12}"));
    }
    let pass = worst < 1e-10 && elapsed < Duration::from_secs(10) && parseval < 1e-9 && baseline_ok;
    outcome(
        pass,
        format!(
            "closed vs FFT N<=12 max {worst:.2e}; N=20 series {:.2} s; Parseval {parseval:.2e}; self-similarity (zoom {SIMILARITY_ZOOM}) {}",
            elapsed.as_secs_f64(),
            scores.join(", ")
        ),
    )
}

fn number_theory() -> Outcome {
    let p3 = product_family(ProductFamily::P3, 1_000_000).unwrap();
    let p3_err = (p3.value.to_f64() - FRAC_1_SQRT_2).abs();
    let p4 = product_family(ProductFamily::P4, 1_000_000).unwrap();
    let p4_digits = p4.value.to_decimal(4);
    let tau = ptm_constant(128).unwrap().value.to_decimal(5);
    let z = zeta_ptm(C64::new(2.0, 0.0), 1_000_000).unwrap();
    let z_err = (z.value - C64::new(PI * PI / 6.0, 0.0)).norm();
    let f1 = feiler_autocorrelation(2.0, 0.0, 100_000).unwrap();
    let f2 = feiler_autocorrelation(2.0, 1.0, 1_000_000).unwrap();
    let bitwise = f1.zeta_estimate == zeta_ptm(C64::new(2.0, 0.0), 100_000).unwrap()
        && f2.zeta_estimate == zeta_ptm(C64::new(2.0, 1.0), 1_000_000).unwrap();
    let pass = p3_err < 1e-4 && p4_digits == "1.6281" && tau == "0.41245" && z_err <= z.error_bound && bitwise;
    outcome(
        pass,
        format!(
            "p3 error {p3_err:.2e}; p4 {p4_digits}; tau {tau}; zeta(2) error {z_err:.2e} <= bound {:.2e}; feiler bitwise {bitwise}",
            z.error_bound
        ),
    )
}

fn reported_only() -> Outcome {
    let baker = baker_diagnostic(8).unwrap();
    let classes: Vec<String> = (2..=5u32)
        .map(|n| {
            let cfg = ChainConfig { t_final: 5.0, ..ChainConfig::new(n) };
            let rho0 = DensityMatrix::from_pure(&ghz_state(n).unwrap());
            let r = support_class(lindblad_evolve(&cfg, &rho0).unwrap().last(), n).unwrap();
            format!("N={n}: {:?}", r.class)
        })
        .collect();
    outcome(
        baker.unitarity_error < 1e-11,
        format!(
            "desk-scale only; baker |<psi|B(8)|psi>| = {:.6} (reported); GHZ classes {}",
            baker.abs_overlap,
            classes.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 13] = [
        ("sequence identity", Some(5), sequence_identity),
        ("multigrade", None, multigrade),
        ("Hadamard relations", None, hadamard_relations),
        ("spin-operator identities", Some(120), spin_properties),
        ("qudit J_z moments", None, qudit_moments),
        ("PTM encoder", None, encoder),
        ("phase-flip QEC", None, qec),
        ("X-X rotation phase", None, xx_rotation),
        ("Lindblad indicator", Some(60), lindblad),
        ("initialization", None, initialization),
        ("fractal spectrum", None, fractal),
        ("number theory", None, number_theory),
        ("reported-only quantities", None, reported_only),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let o = timed(limit.map(Duration::from_secs), f);
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
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
