use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde_json::{json, Value};

use chronolab_core::ccr::{ccr_residual, commutator_matrix_apply, dc_generators};
use chronolab_core::conditions::{hilbert_schmidt_sum, inverse_square_sum};
use chronolab_core::config::RunConfig;
use chronolab_core::kernel::{hs_identity_check, kernel_eval, EigenfunctionBasis};
use chronolab_core::mm::{fmt_g17, matrix_market_string, sidecar};
use chronolab_core::sa::{convergence_study, deficiency_probe};
use chronolab_core::scalar::{parse_rational, BigRational, Scalar};
use chronolab_core::timeop::{build as build_truncation, perturb, PerturbationSequence};
use chronolab_core::{Arithmetic, Spectrum};

use crate::report::{render_json, ReportBuilder};
use crate::AnalysisFailure;

fn load(config: &Path) -> anyhow::Result<RunConfig> {
    Ok(RunConfig::from_path(config)?)
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_alpha(text: &str) -> anyhow::Result<PerturbationSequence> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| anyhow::anyhow!("alpha spec needs the form kind:params, got {text:?}"))?;
    match kind {
        "constant" => Ok(PerturbationSequence::constant(parse_rational(rest)?)),
        "square-summable" | "sq" => {
            let (a, q) = rest
                .split_once(',')
                .ok_or_else(|| anyhow::anyhow!("square-summable needs amplitude,exponent"))?;
            Ok(PerturbationSequence::square_summable(
                parse_rational(a)?,
                parse_rational(q)?,
            )?)
        }
        "custom" => {
            let values = rest
                .split(',')
                .map(parse_rational)
                .collect::<chronolab_core::Result<Vec<_>>>()?;
            Ok(PerturbationSequence::custom(values))
        }
        other => anyhow::bail!(
            "unknown alpha kind {other:?}; expected constant, square-summable, or custom"
        ),
    }
}

pub fn check(
    config: &Path,
    horizon: usize,
    condition: &str,
    out: Option<&Path>,
    timings: bool,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let started = Instant::now();
    let report = match condition {
        "inverse-square" => inverse_square_sum(&cfg.spectrum, horizon)?,
        "hilbert-schmidt" => hilbert_schmidt_sum(&cfg.spectrum, horizon)?,
        other => {
            anyhow::bail!("unknown condition {other:?}; expected inverse-square or hilbert-schmidt")
        }
    };
    let mut builder = ReportBuilder::new(&cfg.config_hash, cfg.seed, timings);
    builder.push(
        "check",
        json!({"horizon": horizon, "condition": condition}),
        serde_json::to_value(&report)?,
        started.elapsed().as_secs_f64(),
    );
    emit(&render_json(&builder.finish()), out)
}

pub fn build(config: &Path, n: usize, alpha: Option<&str>, out: &Path) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let alpha = alpha.map(parse_alpha).transpose()?;
    let (matrix_text, sidecar_value) = match cfg.spectrum.exactness() {
        Arithmetic::ExactRational => build_export::<BigRational>(&cfg.spectrum, n, alpha.as_ref())?,
        Arithmetic::Float64 => build_export::<f64>(&cfg.spectrum, n, alpha.as_ref())?,
    };
    std::fs::write(out, matrix_text).with_context(|| format!("writing {}", out.display()))?;
    let sidecar_path = format!("{}.json", out.display());
    std::fs::write(&sidecar_path, render_json(&sidecar_value))
        .with_context(|| format!("writing {sidecar_path}"))?;
    println!("wrote {} and {sidecar_path}", out.display());
    Ok(())
}

fn build_export<S: Scalar>(
    spec: &Spectrum,
    n: usize,
    alpha: Option<&PerturbationSequence>,
) -> anyhow::Result<(String, Value)> {
    let mut t = build_truncation::<S>(spec, n)?;
    if let Some(alpha) = alpha {
        t = perturb(&t, alpha)?;
    }
    if !t.is_hermitian() {
        return Err(AnalysisFailure("build.hermiticity".into()).into());
    }
    Ok((
        matrix_market_string(&t)?,
        serde_json::to_value(sidecar(&t))?,
    ))
}

#[derive(serde::Serialize)]
struct CcrRow {
    generator: String,
    residual_norm: f64,
    defect_norm: f64,
    verdict: String,
}

fn ccr_rows<S: Scalar>(spec: &Spectrum, l: usize) -> anyhow::Result<(Vec<CcrRow>, Option<String>)> {
    let m = spec.degeneracy();
    let hbar: f64 = spec.hbar();
    let mut rows = Vec::new();
    let mut first_failure = None;
    for gen in dc_generators::<S>(l, m)? {
        let key = gen
            .coefficients()
            .next()
            .map(|((i, j, k), _)| format!("({i},{j},{k})"))
            .unwrap_or_else(|| "(0,0,0)".into());
        let phi = gen.expansion();
        let res = ccr_residual(spec, phi)?;
        let must_zero_norm = if m == 1 {
            res.residual.norm()
        } else {
            res.defect_vector.norm()
        };
        let pass = match S::ARITHMETIC {
            Arithmetic::ExactRational => {
                if m == 1 {
                    res.exact_zero
                } else {
                    res.defect_vector.is_empty()
                }
            }
            Arithmetic::Float64 => must_zero_norm <= 1e-12 * hbar * phi.norm(),
        };
        if !pass && first_failure.is_none() {
            let law = if m == 1 { "residual" } else { "defect" };
            first_failure = Some(format!("ccr.generator{key}.{law}"));
        }
        rows.push(CcrRow {
            generator: key,
            residual_norm: res.residual.norm(),
            defect_norm: res.defect_vector.norm(),
            verdict: if pass { "pass".into() } else { "fail".into() },
        });
    }
    Ok((rows, first_failure))
}

pub fn ccr(
    config: &Path,
    l: usize,
    exact: bool,
    out: Option<&Path>,
    timings: bool,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let mode = if exact {
        Arithmetic::ExactRational
    } else {
        cfg.spectrum.exactness()
    };
    let spec = cfg.spectrum.clone().with_exactness(mode)?;
    let started = Instant::now();
    let (rows, failure) = match mode {
        Arithmetic::ExactRational => ccr_rows::<BigRational>(&spec, l)?,
        Arithmetic::Float64 => ccr_rows::<f64>(&spec, l)?,
    };

    println!(
        "{:<12} {:>24} {:>24}  verdict",
        "generator", "|residual|", "|defect|"
    );
    for row in &rows {
        println!(
            "{:<12} {:>24} {:>24}  {}",
            row.generator,
            fmt_g17(row.residual_norm),
            fmt_g17(row.defect_norm),
            row.verdict
        );
    }

    if let Some(path) = out {
        let mut builder = ReportBuilder::new(&cfg.config_hash, cfg.seed, timings);
        builder.push(
            "ccr",
            json!({"L": l, "arithmetic": format!("{mode}")}),
            serde_json::to_value(&rows)?,
            started.elapsed().as_secs_f64(),
        );
        emit(&render_json(&builder.finish()), Some(path))?;
    }
    if let Some(id) = failure {
        return Err(AnalysisFailure(id).into());
    }
    Ok(())
}

pub fn spectrum_of_t(
    config: &Path,
    n_list: &[usize],
    top: usize,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let table = convergence_study(&cfg.spectrum, n_list, top)?;
    let mut csv = String::new();
    csv.push('N');
    for k in 1..=top {
        csv.push_str(&format!(",lambda_{k}"));
    }
    csv.push_str(",max_imag,extreme_abs,norm_bound\n");
    for row in &table.rows {
        if row.max_imag_part > 1e-10 * (1.0 + row.extreme_abs) {
            return Err(AnalysisFailure(format!("spectrum-of-T.reality@N={}", row.horizon)).into());
        }
        if row.extreme_abs > row.norm_bound + 1e-12 {
            return Err(
                AnalysisFailure(format!("spectrum-of-T.norm-bound@N={}", row.horizon)).into(),
            );
        }
        csv.push_str(&row.horizon.to_string());
        for k in 0..top {
            csv.push(',');
            if let Some(v) = row.leading.get(k) {
                csv.push_str(&fmt_g17(*v));
            }
        }
        csv.push_str(&format!(
            ",{},{},{}\n",
            fmt_g17(row.max_imag_part),
            fmt_g17(row.extreme_abs),
            fmt_g17(row.norm_bound)
        ));
    }
    emit(&csv, out)
}

pub fn deficiency(
    config: &Path,
    n: usize,
    r: usize,
    sign: &str,
    out: Option<&Path>,
    timings: bool,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let sign = match sign {
        "+" | "+1" | "plus" => 1i8,
        "-" | "-1" | "minus" => -1i8,
        other => anyhow::bail!("sign must be + or -, got {other:?}"),
    };
    let started = Instant::now();
    let probe = deficiency_probe(&cfg.spectrum, n, r, sign)?;
    let consistent = probe.sigma_min >= 1.0 - 1e-10;
    let mut builder = ReportBuilder::new(&cfg.config_hash, cfg.seed, timings);
    builder.push(
        "deficiency",
        json!({"N": n, "R": r, "sign": sign}),
        serde_json::to_value(&probe)?,
        started.elapsed().as_secs_f64(),
    );
    emit(&render_json(&builder.finish()), out)?;
    if !consistent {
        return Err(AnalysisFailure("deficiency.sigma-min".into()).into());
    }
    Ok(())
}

pub fn kernel_check(
    config: &Path,
    n: usize,
    nodes: usize,
    length: f64,
    dump_grid: Option<&Path>,
    out: Option<&Path>,
    timings: bool,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    let spec = &cfg.spectrum;
    let basis = EigenfunctionBasis::box_sine(length, n * spec.degeneracy())?;
    let started = Instant::now();
    let probe = hs_identity_check(&basis, spec, n, nodes)?;

    if let Some(path) = dump_grid {
        let mut csv = String::from("q,qp,re_k,im_k\n");
        for &q in &probe.grid_nodes {
            for &qp in &probe.grid_nodes {
                let k = kernel_eval(&basis, spec, n, q, qp)?;
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_g17(q),
                    fmt_g17(qp),
                    fmt_g17(k.re),
                    fmt_g17(k.im)
                ));
            }
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }

    let rel_err = probe.rel_err;
    let mut builder = ReportBuilder::new(&cfg.config_hash, cfg.seed, timings);
    builder.push(
        "kernel-check",
        json!({"N": n, "nodes": nodes, "length": length}),
        serde_json::to_value(&probe)?,
        started.elapsed().as_secs_f64(),
    );
    emit(&render_json(&builder.finish()), out)?;
    if rel_err > 1e-8 {
        return Err(AnalysisFailure("kernel.rel-err".into()).into());
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct ClassGenRow {
    alpha: String,
    hermitian: bool,
    max_commutator_drift: f64,
}

fn class_gen_rows<S: Scalar>(
    spec: &Spectrum,
    n: usize,
    l: usize,
    family: &[PerturbationSequence],
) -> anyhow::Result<(Vec<ClassGenRow>, Option<String>)> {
    let base = build_truncation::<S>(spec, n)?;
    let generators = dc_generators::<S>(l, spec.degeneracy())?;
    let baseline: Vec<_> = generators
        .iter()
        .map(|g| commutator_matrix_apply(spec, &base, g.expansion()))
        .collect::<chronolab_core::Result<_>>()?;

    let mut rows = Vec::new();
    let mut first_failure = None;
    for alpha in family {
        let perturbed = perturb(&base, alpha)?;
        let hermitian = perturbed.is_hermitian();
        let mut drift = 0.0f64;
        for (gen, base_image) in generators.iter().zip(&baseline) {
            let image = commutator_matrix_apply(spec, &perturbed, gen.expansion())?;
            drift = drift.max(image.sub(base_image).norm() / (1.0 + gen.expansion().norm()));
        }
        let pass = hermitian && drift <= 1e-13;
        if !pass && first_failure.is_none() {
            first_failure = Some(format!(
                "class-gen.{}.{}",
                alpha.describe(),
                if hermitian { "drift" } else { "hermiticity" }
            ));
        }
        rows.push(ClassGenRow {
            alpha: alpha.describe(),
            hermitian,
            max_commutator_drift: drift,
        });
    }
    Ok((rows, first_failure))
}

pub fn class_gen(
    config: &Path,
    n: usize,
    l: usize,
    count: usize,
    alpha: &str,
    out: Option<&Path>,
    timings: bool,
) -> anyhow::Result<()> {
    let cfg = load(config)?;
    if n < l {
        anyhow::bail!("truncation horizon N={n} must cover the generator horizon L={l}");
    }
    let base_alpha = parse_alpha(alpha)?;
    let family = base_alpha.sample_family(count, cfg.seed);
    let started = Instant::now();
    let (rows, failure) = match cfg.spectrum.exactness() {
        Arithmetic::ExactRational => class_gen_rows::<BigRational>(&cfg.spectrum, n, l, &family)?,
        Arithmetic::Float64 => class_gen_rows::<f64>(&cfg.spectrum, n, l, &family)?,
    };
    let mut builder = ReportBuilder::new(&cfg.config_hash, cfg.seed, timings);
    builder.push(
        "class-gen",
        json!({"N": n, "L": l, "count": count, "alpha": alpha}),
        serde_json::to_value(&rows)?,
        started.elapsed().as_secs_f64(),
    );
    emit(&render_json(&builder.finish()), out)?;
    if let Some(id) = failure {
        return Err(AnalysisFailure(id).into());
    }
    Ok(())
}
