use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};

use ptm_core::circuits::{
    ptm3_program, ptm_encoder, ptm_qec_run, qft_circuit, shor3_program, shor3_run,
};
use ptm_core::dynamics::{
    ghz_state, lindblad_evolve, population_trace, support_class, ChainConfig, Sign,
    SUPPORT_THRESHOLD,
};
use ptm_core::fractal::{closed_series, ftm_direct, self_similarity};
use ptm_core::hilbert::qubits_for_dim;
use ptm_core::number_theory::{
    feiler_autocorrelation, product_family_with_bits, ptm_constant, zeta_ptm,
};
use ptm_core::ptm_seq::{multigrade_sums, ptm_block};
use ptm_core::ptm_states::{ptm_qudit_state, ptm_state};
use ptm_core::spin_ops::{
    memory_matrix_forms, sx_reciprocity, verify_first_moment, verify_jz_moments,
    verify_power_moments, verify_xx_stabilizer, verify_z_products,
};
use ptm_core::{DensityMatrix, Logical, PauliAxis, Report, C64};

use crate::output::{emit, sibling, Csv, RunManifest};
use crate::{
    CircuitKind, CliError, Code, Command, EvolveArgs, FractalArgs, Init, Method, Property, Status,
    VerifyArgs,
};

type Outcome = Result<Status, CliError>;

/// Tolerance for the restricted spin blocks reported by `verify sx`.
const BLOCK_TOL: f64 = 1e-12;
const QEC_FIDELITY_TOL: f64 = 1e-10;
const INIT_TOL: f64 = 1e-10;

pub fn dispatch(command: Command, seed: u64) -> Outcome {
    match command {
        Command::Seq { order, format } => seq(order, format),
        Command::Multigrade { order, max_k } => multigrade(order, max_k.unwrap_or(order)),
        Command::State { n, which, qudit } => state(n, which, qudit),
        Command::Verify(args) => verify(&args),
        Command::Circuit { kind, n } => circuit(kind, n),
        Command::Qec {
            code,
            alpha,
            beta,
            error_site,
        } => qec(code, alpha, beta, error_site, seed),
        Command::Evolve(args) => evolve(&args, seed),
        Command::Initptm { n, sign, steps, out } => initptm(n, sign, steps, &out, seed),
        Command::Fractal(args) => fractal(&args, seed),
        Command::Zeta {
            sigma,
            tau,
            terms,
            feiler,
        } => zeta(sigma, tau, terms, feiler),
        Command::Products { which, terms, bits } => {
            let est = product_family_with_bits(which, terms, bits)?;
            let report = Report::new("products")
                .param("which", which.to_string())
                .param("terms", terms)
                .param("bits", bits)
                .values(json!({
                    "value": est.value,
                    "value_f64": est.value.to_f64(),
                    "terms": est.terms,
                    "limit": which.limit(),
                }))
                .error_bound(est.error_bound);
            print(&report)
        }
        Command::Constant { bits } => {
            let est = ptm_constant(bits)?;
            let report = Report::new("constant")
                .param("bits", bits)
                .values(json!({ "value": est.value, "terms": est.terms }))
                .error_bound(est.error_bound);
            print(&report)
        }
    }
}

fn print(report: &Report) -> Outcome {
    emit(None, format!("{}\n", report.to_json()).as_bytes())?;
    Ok(Status::Done)
}

fn seq(order: u32, format: crate::Format) -> Outcome {
    let block = ptm_block(order)?;
    match format {
        crate::Format::Csv => {
            let mut csv = Csv::new(&["index", "bit"]);
            for (i, b) in block.bits().iter().enumerate() {
                csv.row(&[&i, b]);
            }
            emit(None, csv.as_bytes())?;
            Ok(Status::Done)
        }
        crate::Format::Json => print(
            &Report::new("seq")
                .param("order", order)
                .values(json!({ "bits": block.bits() })),
        ),
    }
}

fn multigrade(order: u32, max_k: u32) -> Outcome {
    let mut csv = Csv::new(&["k", "sum_e", "sum_o", "equal"]);
    for k in 0..=max_k {
        let (e, o) = multigrade_sums(order, k)?;
        csv.row(&[&k, &e, &o, &(e == o)]);
    }
    emit(None, csv.as_bytes())?;
    Ok(Status::Done)
}

fn state(n: Option<u32>, which: Logical, qudit: Option<usize>) -> Outcome {
    let logical = match (n, qudit) {
        (n, Some(d)) => {
            if let Some(n) = n {
                if 1usize.checked_shl(n) != Some(d) {
                    return Err(CliError::Invalid(format!("qudit dimension {d} is not 2^{n}")));
                }
            }
            ptm_qudit_state(d, which)?
        }
        (Some(n), None) => ptm_state(n, which)?,
        (None, None) => return Err(CliError::Invalid("either --n or --qudit is required".into())),
    };
    let mut csv = Csv::new(&["index", "amplitude"]);
    for (i, a) in logical.state().amps().iter().enumerate() {
        csv.row(&[&i, &Csv::num(a.re)]);
    }
    emit(None, csv.as_bytes())?;
    Ok(Status::Done)
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn verify(args: &VerifyArgs) -> Outcome {
    let n = args.n;
    let mut values = Vec::new();
    let mut pass = true;
    let mut record = |ok: bool, v: Value| {
        pass &= ok;
        values.push(v);
    };
    match args.property {
        Property::FirstMoment => {
            for which in [Logical::Zero, Logical::One] {
                let r = verify_first_moment(n, which)?;
                record(r.pass, to_value(&r));
            }
        }
        Property::ZProducts => {
            let subsets: Vec<Vec<usize>> = match &args.sites {
                Some(s) => vec![s.clone()],
                None => {
                    let limit = 1u64.checked_shl(n).unwrap_or(0);
                    (1..limit)
                        .map(|m| (0..n).filter(|b| m >> b & 1 == 1).map(|b| b as usize + 1).collect())
                        .collect()
                }
            };
            for sites in subsets {
                let r = verify_z_products(n, &sites)?;
                record(r.pass, to_value(&r));
            }
        }
        Property::PowerMoments => {
            let axes = args.axis.map_or(vec![PauliAxis::Y, PauliAxis::Z], |a| vec![a]);
            let js: Vec<u32> = args.j.map_or((0..=n).collect(), |j| vec![j]);
            for axis in axes {
                for &j in &js {
                    let r = verify_power_moments(n, axis, j)?;
                    record(r.pass, to_value(&r));
                }
            }
        }
        Property::XxStabilizer => {
            let ks: Vec<usize> = args.k.map_or((1..=n as usize).collect(), |k| vec![k]);
            let js: Vec<usize> = args.j.map_or((1..=n as usize).collect(), |j| vec![j as usize]);
            for &k in &ks {
                for &j in &js {
                    let r = verify_xx_stabilizer(n, k, j)?;
                    record(r.pass, to_value(&r));
                }
            }
        }
        Property::Sx => {
            let r = sx_reciprocity(n)?;
            record(r.pass, to_value(&r));
            if n >= 2 {
                let forms = memory_matrix_forms(n)?;
                let ok = forms.matches_expected(BLOCK_TOL);
                record(ok, json!({ "memory_forms": forms, "pass": ok }));
            }
        }
        Property::Jz => {
            let dim = match args.dim {
                Some(d) => d,
                None => 1usize
                    .checked_shl(n)
                    .ok_or_else(|| CliError::Invalid(format!("2^{n} overflows")))?,
            };
            let order = qubits_for_dim(dim)?;
            let js: Vec<u32> = args.j.map_or((0..=order).collect(), |j| vec![j]);
            for j in js {
                let r = verify_jz_moments(dim, j)?;
                record(r.pass, to_value(&r));
            }
        }
    }
    let name = args
        .property
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut report = Report::new("verify").param("property", name).param("n", n);
    for (key, v) in [("axis", args.axis.map(|a| format!("{a:?}").to_lowercase())), ("j", args.j.map(|j| j.to_string()))] {
        if let Some(v) = v {
            report = report.param(key, v);
        }
    }
    if let Some(k) = args.k {
        report = report.param("k", k);
    }
    if let Some(s) = &args.sites {
        report = report.param("sites", s);
    }
    if let Some(d) = args.dim {
        report = report.param("dim", d);
    }
    let report = report.values(values).pass(pass);
    print(&report)?;
    Ok(if pass { Status::Done } else { Status::VerifyFailed })
}

fn circuit(kind: CircuitKind, n: u32) -> Outcome {
    let program = match kind {
        CircuitKind::Encoder => ptm_encoder(n)?,
        CircuitKind::Qft => qft_circuit(n)?,
        CircuitKind::Shor3 => shor3_program(None)?,
        CircuitKind::Ptm3 => ptm3_program(None)?,
    };
    let name = kind.to_possible_value().map(|v| v.get_name().to_string());
    let mut report = Report::new("circuit").param("kind", name);
    if matches!(kind, CircuitKind::Encoder | CircuitKind::Qft) {
        report = report.param("n", n);
    }
    print(&report.values(program))
}

fn qec(code: Code, alpha: C64, beta: C64, error_site: usize, seed: u64) -> Outcome {
    let error = (error_site != 0).then_some(error_site);
    let outcome = match code {
        Code::Shor3 => shor3_run(alpha, beta, error, seed)?,
        Code::Ptm3 => ptm_qec_run(alpha, beta, error, seed)?,
    };
    let name = code.to_possible_value().map(|v| v.get_name().to_string());
    let report = Report::new("qec")
        .param("code", name)
        .param("alpha", alpha)
        .param("beta", beta)
        .param("error_site", error_site)
        .param("seed", seed)
        .values(json!({
            "syndrome": outcome.syndrome,
            "decoded_site": outcome.decoded_site,
            "fidelity": outcome.fidelity,
            "measurements": outcome.measurements,
        }))
        .pass(outcome.fidelity >= 1.0 - QEC_FIDELITY_TOL);
    print(&report)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}

fn evolve(args: &EvolveArgs, seed: u64) -> Outcome {
    let n = args.n;
    let psi = match args.init {
        Init::Ghz => ghz_state(n)?,
        Init::Ptm0 => ptm_state(n, Logical::Zero)?.state(),
        Init::Ptm1 => ptm_state(n, Logical::One)?.state(),
    };
    let config = ChainConfig {
        n,
        g: args.g,
        gamma: vec![args.gamma; n as usize],
        dt: args.dt,
        t_final: args.tfinal,
    };
    let trajectory = lindblad_evolve(&config, &DensityMatrix::from_pure(&psi))?;

    let mut csv = Csv::new(&["t", "i", "k", "re", "im"]);
    for (t, rho) in trajectory.times.iter().zip(&trajectory.states) {
        let m = rho.matrix();
        for i in 0..m.nrows() {
            for k in 0..m.ncols() {
                let z = m[(i, k)];
                if z.norm() > SUPPORT_THRESHOLD {
                    csv.row(&[&Csv::num(*t), &i, &k, &Csv::num(z.re), &Csv::num(z.im)]);
                }
            }
        }
    }
    let init = args.init.to_possible_value().map(|v| v.get_name().to_string());
    let report = Report::new("evolve")
        .param("n", n)
        .param("g", args.g)
        .param("gamma", args.gamma)
        .param("dt", args.dt)
        .param("tfinal", args.tfinal)
        .param("init", init);
    let mut manifest = RunManifest::new("evolve", report.params.clone(), seed);
    manifest.write(&args.out, csv.as_bytes())?;
    let manifest_path = manifest.finish(&args.out)?;

    let report = report.values(json!({
        "final_support": support_class(trajectory.last(), n)?,
        "diagnostics": trajectory.diagnostics(),
        "substeps": trajectory.substeps,
        "max_local_error": trajectory.max_local_error,
        "data": file_name(&args.out),
        "manifest": file_name(&manifest_path),
    }));
    print(&report)
}

fn initptm(n: u32, sign: Sign, steps: usize, out: &Path, seed: u64) -> Outcome {
    let trace = population_trace(n, sign, steps)?;
    let mut csv = Csv::new(&["t", "k", "population"]);
    for (t, pops) in trace.times.iter().zip(&trace.populations) {
        for (k, p) in pops.iter().enumerate() {
            csv.row(&[&Csv::num(*t), &k, &Csv::num(*p)]);
        }
    }
    let label = match sign {
        Sign::Plus => Logical::Zero,
        Sign::Minus => Logical::One,
    };
    let target = ptm_state(n, label)?.state().probabilities();
    let last = trace.populations.last().map(Vec::as_slice).unwrap_or_default();
    let deviation = last
        .iter()
        .zip(&target)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);

    let sign_str = if sign == Sign::Plus { "+" } else { "-" };
    let report = Report::new("initptm")
        .param("n", n)
        .param("sign", sign_str)
        .param("steps", steps);
    let mut manifest = RunManifest::new("initptm", report.params.clone(), seed);
    manifest.write(out, csv.as_bytes())?;
    let manifest_path = manifest.finish(out)?;
    let report = report
        .values(json!({
            "target": label.to_string(),
            "max_deviation_at_t1": deviation,
            "data": file_name(out),
            "manifest": file_name(&manifest_path),
        }))
        .pass(deviation < INIT_TOL);
    print(&report)
}

fn fractal(args: &FractalArgs, seed: u64) -> Outcome {
    let series = match args.method {
        Method::Closed => closed_series(args.n, args.alpha, args.beta)?,
        Method::Fft => ftm_direct(args.n, args.alpha, args.beta)?,
    };
    let len = series.len();
    let write_rows = |range: std::ops::Range<usize>| {
        let mut csv = Csv::new(&["j", "x", "intensity"]);
        for j in range {
            csv.row(&[&j, &Csv::num(j as f64 / len as f64), &Csv::num(series.intensities[j])]);
        }
        csv
    };

    let method = args.method.to_possible_value().map(|v| v.get_name().to_string());
    let zooms: Vec<String> = args.zoom.iter().map(|(c, w)| format!("{c},{w}")).collect();
    let mut report = Report::new("fractal")
        .param("n", args.n)
        .param("alpha", args.alpha)
        .param("beta", args.beta)
        .param("method", method);
    if !zooms.is_empty() {
        report = report.param("zoom", &zooms);
    }
    let mut manifest = RunManifest::new("fractal", report.params.clone(), seed);
    manifest.write(&args.out, write_rows(0..len).as_bytes())?;

    let mut windows = Vec::new();
    for (i, &(center, width)) in args.zoom.iter().enumerate() {
        if !(width > 0.0 && width <= 1.0) {
            return Err(CliError::Invalid(format!("zoom width {width} outside (0, 1]")));
        }
        let sim = self_similarity(&series, center, 1.0 / width)?;
        let path = sibling(&args.out, &format!("zoom{i}"));
        let start = sim.window_start;
        manifest.write(&path, write_rows(start..start + sim.window_len).as_bytes())?;
        windows.push(json!({ "file": file_name(&path), "similarity": sim }));
    }
    let manifest_path = manifest.finish(&args.out)?;

    let total = series.total();
    let report = report.values(json!({
        "total_intensity": total,
        "parseval_error": (total - 1.0).abs(),
        "windows": windows,
        "data": file_name(&args.out),
        "manifest": file_name(&manifest_path),
    }));
    print(&report)
}

fn zeta(sigma: f64, tau: f64, terms: u64, feiler: bool) -> Outcome {
    let report = Report::new("zeta")
        .param("sigma", sigma)
        .param("tau", tau)
        .param("terms", terms)
        .param("feiler", feiler);
    let report = if feiler {
        let r = feiler_autocorrelation(sigma, tau, terms)?;
        let bound = r.zeta_estimate.error_bound;
        report
            .values(json!({
                "value": r.zeta_estimate.value,
                "terms": r.terms,
                "psi1_corr": r.psi1_corr,
                "psi2_corr": r.psi2_corr,
                "normalization": r.normalization,
            }))
            .error_bound(bound)
    } else {
        let est = zeta_ptm(C64::new(sigma, tau), terms)?;
        report
            .values(json!({ "value": est.value, "terms": est.terms }))
            .error_bound(est.error_bound)
    };
    print(&report)
}
