use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use permcirc_core::circuit::{parse_circuit, BasisState, Circuit};
use permcirc_core::encoder::{encode_polynomial, EncodeOptions, Encoding};
use permcirc_core::gf2::{label_circuit, parse_poly, BoundaryAssignment, GapLimits, Labeling, ParsedPoly};
use permcirc_core::permanent::{
    norm_report, per_glynn_exact_with, per_gurvits_with, per_naive, per_ryser_with, Limits, PermanentError,
    DEFAULT_MAX_DIM, NAIVE_MAX_DIM,
};
use permcirc_core::pipeline::{circuit_hash, ExactKernel, Instance, VerifyConfig, SCHEMA_VERSION};
use permcirc_core::{DyadicAmplitude, IntMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{
    emit, emit_json, BenchResult, BenchRun, CrossCheckResult, Estimate, Failure, NormResult, RunResult, Timings,
};
use crate::{AmpArgs, Backend, BenchArgs, BenchBackend, CompileArgs, Emit, InstanceArgs, NormArgs, VerifyArgs};

const FORCED_MAX_VARS: usize = 40;

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    parse_circuit(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_bits(flag: &str, bits: &str) -> Result<BasisState, Failure> {
    bits.parse().map_err(|e| Failure::input(format!("--{flag}: {e}")))
}

fn load_instance(args: &InstanceArgs) -> Result<Instance, Failure> {
    let c = load_circuit(&args.circuit)?;
    let b = BoundaryAssignment::new(parse_bits("in", &args.input)?, parse_bits("out", &args.output)?);
    Ok(Instance::new(&c, b)?)
}

fn limits(threads: usize, force: bool) -> Limits {
    let l = Limits {
        threads,
        ..Limits::default()
    };
    if force {
        l.forced()
    } else {
        l
    }
}

fn no_matrix(inst: &Instance) -> Failure {
    Failure::input(format!(
        "in={} out={} contradicts a line without hadamards: the amplitude is 0 and substitution mode has no matrix",
        inst.boundary.in_bits, inst.boundary.out_bits
    ))
}

pub fn amp(a: &AmpArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let inst = load_instance(&a.instance)?;
    let prepare_ms = ms(start);
    let reduced = inst.reduced();
    let h = inst.h();
    let mut result = RunResult {
        schema_version: SCHEMA_VERSION,
        backend: match a.backend {
            Backend::Sv => "sv",
            Backend::Count => "count",
            Backend::PermExact => "perm-exact",
            Backend::PermMc => "perm-mc",
        },
        kernel: None,
        mode: None,
        in_bits: inst.boundary.in_bits.to_string(),
        out_bits: inst.boundary.out_bits.to_string(),
        circuit_hash: circuit_hash(&inst.circuit),
        inserted_hh_pairs: inst.normalization.inserted_pairs,
        h,
        variables: reduced.free_vars.len(),
        matrix_size: None,
        amplitude: None,
        estimate: None,
        samples: None,
        seed: None,
        cross_check: None,
        notes: Vec::new(),
        timings: Timings {
            prepare_ms,
            ..Timings::default()
        },
    };
    if reduced.conflict {
        result
            .notes
            .push("boundary contradicts a line without hadamards; the amplitude is 0".into());
    }

    let encoding = |r: &mut RunResult| -> Result<Option<Encoding>, Failure> {
        r.mode = Some(a.common.mode.to_string());
        let t = Instant::now();
        let e = inst.encoding(a.common.mode)?;
        r.timings.encode_ms = Some(ms(t));
        r.matrix_size = Some(e.as_ref().map_or(0, Encoding::dim));
        if let Some(e) = &e {
            r.notes.extend(e.warnings.iter().cloned());
        }
        Ok(e)
    };

    match a.backend {
        Backend::Sv => {
            let t = Instant::now();
            result.amplitude = Some(inst.sv()?);
            result.timings.evaluate_ms = ms(t);
        }
        Backend::Count => {
            let t = Instant::now();
            let gap = inst.gap(GapLimits {
                max_vars: if a.common.force_size {
                    FORCED_MAX_VARS
                } else {
                    GapLimits::default().max_vars
                },
                threads: a.common.threads,
            })?;
            result.amplitude = Some(DyadicAmplitude::new(gap, h));
            result.timings.evaluate_ms = ms(t);
        }
        Backend::PermExact => {
            let kernel: ExactKernel = a.kernel.into();
            result.kernel = Some(match kernel {
                ExactKernel::Ryser => "ryser",
                ExactKernel::Glynn => "glynn",
            });
            let e = encoding(&mut result)?;
            let t = Instant::now();
            let p = match &e {
                Some(e) => kernel
                    .permanent(&e.matrix, limits(a.common.threads, a.common.force_size))
                    .map_err(permanent_failure)?,
                None => BigInt::from(0),
            };
            result.amplitude = Some(DyadicAmplitude::new(p, h));
            result.timings.evaluate_ms = ms(t);
        }
        Backend::PermMc => {
            let e = encoding(&mut result)?;
            let t = Instant::now();
            let (mean, stderr) = match &e {
                Some(e) => {
                    let est =
                        per_gurvits_with(&e.matrix, a.samples, a.seed, a.common.threads).map_err(permanent_failure)?;
                    (est.mean, est.stderr)
                }
                None => (0.0, 0.0),
            };
            let scale = (-(h as f64) / 2.0).exp2();
            result.estimate = Some(Estimate {
                permanent: mean,
                permanent_stderr: stderr,
                amplitude: mean * scale,
                amplitude_stderr: stderr * scale,
            });
            result.samples = Some(a.samples);
            result.seed = Some(a.seed);
            result.timings.evaluate_ms = ms(t);
        }
    }
    result.timings.total_ms = ms(start);

    let mut mismatch = None;
    if a.cross_check {
        let sv = inst.sv()?;
        let agree = match (&result.amplitude, &result.estimate) {
            (Some(amp), _) => amp.same_value(&sv),
            // a sampled estimate agrees when within six standard errors
            (None, Some(est)) => {
                let k = DyadicAmplitude::new(sv.k.clone(), 0).to_f64();
                (est.permanent - k).abs() <= 6.0 * est.permanent_stderr + 1e-9
            }
            (None, None) => false,
        };
        if !agree {
            mismatch = Some(format!("cross-check failed: state-vector k = {}", sv.k));
        }
        result.cross_check = Some(CrossCheckResult {
            k_sv: sv.k.to_string(),
            agree,
        });
    }
    emit_json(&result, a.common.output_path.as_deref())?;
    match mismatch {
        Some(m) => Err(Failure::mismatch(m)),
        None => Ok(()),
    }
}

fn permanent_failure(e: PermanentError) -> Failure {
    match e {
        PermanentError::TooLarge { .. } => Failure::size_cap(format!("{e} (use --force-size to override)")),
        other => Failure::input(other),
    }
}

fn poly_header(l: &Labeling, free: Option<&[permcirc_core::VarId]>) -> String {
    let mut out = format!("# h {}\n", l.h);
    if let Some(free) = free {
        let names: Vec<String> = free.iter().map(|&v| l.label(v)).collect();
        let _ = writeln!(out, "# free {}", names.join(" "));
    }
    out
}

fn render(e: &Encoding, emit: Emit) -> String {
    match emit {
        Emit::Matrix => e.matrix.to_matrix_market(),
        Emit::MatrixDense => e.matrix.to_dense_text(),
        Emit::Dot => e.to_dot(),
        Emit::Poly => unreachable!("polynomials are rendered before encoding"),
    }
}

pub fn compile(a: &CompileArgs) -> Result<(), Failure> {
    let out = a.common.output_path.as_deref();
    if let Some(path) = &a.poly {
        if a.input.is_some() {
            return Err(Failure::input("--in/--out apply to circuits, not to --poly"));
        }
        let ParsedPoly { poly, names } =
            parse_poly(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if a.emit == Emit::Poly {
            return emit(&poly.to_text(|v| names[v.0 as usize].clone()), out);
        }
        let free: Vec<_> = (0..names.len() as u32).map(permcirc_core::VarId).collect();
        let e = encode_polynomial(
            &poly,
            &free,
            0,
            |v| names[v.0 as usize].clone(),
            EncodeOptions::default(),
        )
        .map_err(Failure::input)?;
        return emit(&render(&e, a.emit), out);
    }

    let path = a.circuit.as_deref().expect("clap requires --circuit or --poly");
    let c = load_circuit(path)?;
    let (Some(input), Some(output)) = (&a.input, &a.output) else {
        if a.emit != Emit::Poly {
            return Err(Failure::input("--in and --out are required to build a matrix or graph"));
        }
        let (normal, _) = permcirc_core::normalize(&c);
        let l = label_circuit(&normal).map_err(Failure::input)?;
        let text = poly_header(&l, None) + &l.f_raw.to_text(|v| l.label(v));
        return emit(&text, out);
    };
    let b = BoundaryAssignment::new(parse_bits("in", input)?, parse_bits("out", output)?);
    let inst = Instance::new(&c, b)?;
    if a.emit == Emit::Poly {
        let r = inst.reduced();
        if r.conflict {
            return Err(no_matrix(&inst));
        }
        let l = &inst.labeling;
        let text = poly_header(l, Some(&r.free_vars)) + &r.poly.to_text(|v| l.label(v));
        return emit(&text, out);
    }
    let e = inst.encoding(a.common.mode)?.ok_or_else(|| no_matrix(&inst))?;
    for w in &e.warnings {
        eprintln!("warning: {w}");
    }
    emit(&render(&e, a.emit), out)
}

pub fn norm(a: &NormArgs) -> Result<(), Failure> {
    let inst = load_instance(&a.instance)?;
    let e = inst.encoding(a.common.mode)?.ok_or_else(|| no_matrix(&inst))?;
    let report = norm_report(&e.matrix, e.h, a.tol).map_err(Failure::input)?;
    let result = NormResult {
        schema_version: SCHEMA_VERSION,
        mode: a.common.mode.to_string(),
        in_bits: inst.boundary.in_bits.to_string(),
        out_bits: inst.boundary.out_bits.to_string(),
        report,
    };
    emit_json(&result, a.common.output_path.as_deref())
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    schema_version: u32,
    config: &'a VerifyConfig,
    checked: usize,
    skipped: usize,
    passed: bool,
    failures: &'a [permcirc_core::pipeline::TrialRecord],
}

pub fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    if a.qubits == 0 {
        return Err(Failure::input("--qubits must be positive"));
    }
    if !(0.0..=1.0).contains(&a.p_toffoli) {
        return Err(Failure::input("--p-toffoli must lie in [0, 1]"));
    }
    let cfg = VerifyConfig {
        qubits: a.qubits,
        gates: a.gates,
        trials: a.trials,
        seed: a.seed,
        p_toffoli: a.p_toffoli,
        exhaustive: a.exhaustive,
        max_vars: a.max_vars,
        max_matrix: a.max_matrix,
        inject_fault: a.inject_fault,
        threads: a.threads,
        kernel: a.kernel.into(),
    };
    let report = permcirc_core::pipeline::verify(&cfg);
    if let Some(path) = &a.output_path {
        emit_json(&report, Some(path))?;
    }
    let summary = VerifySummary {
        schema_version: report.schema_version,
        config: &report.config,
        checked: report.checked,
        skipped: report.skipped,
        passed: report.passed(),
        failures: &report.failures,
    };
    emit_json(&summary, None)?;
    if let Some(w) = report.failures.first() {
        return Err(Failure::disagreement(format!(
            "{} of {} trials disagree; first witness: trial {} circuit {} in={} out={} k_sv={} gap={} per_subst={} per_graphfix={}\n{}",
            report.failures.len(),
            report.records.len(),
            w.trial,
            w.circuit_hash,
            w.in_bits,
            w.out_bits,
            w.k_sv,
            w.gap.as_deref().unwrap_or("-"),
            w.per_subst.as_deref().unwrap_or("-"),
            w.per_graphfix.as_deref().unwrap_or("-"),
            w.circuit.trim_end(),
        )));
    }
    Ok(())
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
        .collect();
    IntMatrix::from_rows(&rows).expect("square by construction")
}

pub fn bench(a: &BenchArgs) -> Result<(), Failure> {
    let lim = limits(a.threads, a.force_size);
    if a.n > lim.max_dim {
        return Err(Failure::size_cap(format!(
            "n = {} exceeds the cap of {} (use --force-size to raise it to {})",
            a.n,
            DEFAULT_MAX_DIM,
            Limits::default().forced().max_dim
        )));
    }
    let backends: Vec<BenchBackend> = match a.backend {
        BenchBackend::All if a.n <= NAIVE_MAX_DIM => {
            vec![BenchBackend::Naive, BenchBackend::Ryser, BenchBackend::Glynn]
        }
        BenchBackend::All => vec![BenchBackend::Ryser, BenchBackend::Glynn],
        BenchBackend::Naive if a.n > NAIVE_MAX_DIM => {
            return Err(Failure::size_cap(format!(
                "the naive kernel is capped at n = {NAIVE_MAX_DIM}"
            )))
        }
        b => vec![b],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut runs = Vec::new();
    let mut agree = Vec::new();
    for repeat in 0..a.repeats {
        let m = random_matrix(a.n, &mut rng);
        let mut values = Vec::new();
        for &b in &backends {
            let t = Instant::now();
            let (name, value) = match b {
                BenchBackend::Naive => ("naive", per_naive(&m)),
                BenchBackend::Ryser => ("ryser", per_ryser_with(&m, lim)),
                BenchBackend::Glynn | BenchBackend::All => ("glynn", per_glynn_exact_with(&m, lim)),
            };
            let value = value.map_err(permanent_failure)?;
            runs.push(BenchRun {
                repeat,
                backend: name,
                seconds: t.elapsed().as_secs_f64(),
                permanent: value.to_string(),
            });
            values.push(value);
        }
        // a lone ryser or glynn run is checked against the other kernel
        if values.len() == 1 && a.backend != BenchBackend::Naive {
            let other = match a.backend {
                BenchBackend::Ryser => per_glynn_exact_with(&m, lim),
                _ => per_ryser_with(&m, lim),
            }
            .map_err(permanent_failure)?;
            values.push(other);
        }
        agree.push(values.windows(2).all(|w| w[0] == w[1]));
    }
    let all_agree = agree.iter().all(|&x| x);
    let result = BenchResult {
        schema_version: SCHEMA_VERSION,
        n: a.n,
        seed: a.seed,
        threads: a.threads,
        runs,
        agree,
    };
    emit_json(&result, a.output_path.as_deref())?;
    if !all_agree {
        return Err(Failure::mismatch("permanent kernels disagree"));
    }
    Ok(())
}
