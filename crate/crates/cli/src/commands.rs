use std::path::Path;

use bergman::{
    curvature, curvature_closed, curvature_fd, jet_gram, localization, threshold_check, BergmanError,
    CurvatureMethod, CurvatureResult, KernelKind, KernelSpec, ThresholdExample,
};
use contractivity::{
    complete_closed_diag3, complete_closed_i_e12, contractive_closed_diag3, contractive_closed_i_e12,
    contractive_general_with, tensor_norm, GeneralOptions, VTuple, BOUNDARY_TOL,
};
use counterexample::{search_with, CounterexampleError, SearchOptions, SearchOutcome};
use domains::{canonicalize_2d, dual_norm_with, DomainSpec, DualMethod, DualOptions};
use matrix_core::C64;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::report::{Done, Table};
use crate::{exit, CliError, Command, MethodArg, RunConfig};

const DEFAULT_TOL: f64 = 1e-8;

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: shown, source })
}

/// A point as a JSON list whose entries are `[re, im]` pairs or real numbers.
fn parse_point(s: &str) -> Result<Vec<C64>, CliError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Coord {
        Pair([f64; 2]),
        Real(f64),
    }
    let coords: Vec<Coord> =
        serde_json::from_str(s).map_err(|source| CliError::Json { path: "--point".into(), source })?;
    Ok(coords
        .into_iter()
        .map(|c| match c {
            Coord::Pair([re, im]) => C64::new(re, im),
            Coord::Real(re) => C64::new(re, 0.0),
        })
        .collect())
}

fn parse_kernel(tag: &str, lambda: f64) -> Result<KernelSpec, CliError> {
    let kind = match tag.parse::<ThresholdExample>()? {
        ThresholdExample::MatrixBall { r, s } => KernelKind::MatrixBall { r, s },
        ThresholdExample::Nil2 => KernelKind::Nil2,
        ThresholdExample::Reinhardt3 => KernelKind::Reinhardt3,
    };
    Ok(KernelSpec::new(kind, lambda)?)
}

fn tolerances(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub(crate) fn execute(cfg: &RunConfig) -> Result<Done, CliError> {
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    match &cfg.command {
        Command::Check { domain, tuple } => check(cfg, tol, &load(domain)?, &load(tuple)?),
        Command::CheckComplete { domain, tuple } => check_complete(tol, &load(domain)?, &load(tuple)?),
        Command::DualNorm { domain, point } => dual(cfg, &load(domain)?, &parse_point(point)?),
        Command::Canonicalize { domain } => {
            let d: DomainSpec = load(domain)?;
            Ok(Done {
                command: "canonicalize",
                code: exit::OK,
                tolerances: Map::new(),
                report: to_value(&canonicalize_2d(&d)?),
                table: None,
            })
        }
        Command::Search {
            domain,
            lambda_min,
            lambda_max,
            per_decade,
        } => search(tol, &load(domain)?, *lambda_min, *lambda_max, *per_decade),
        Command::BergmanCurvature { kernel, lambda, point } => {
            bergman_curvature(cfg, &parse_kernel(kernel, *lambda)?, &parse_point(point)?)
        }
        Command::JetGram { kernel, lambda, point } => jet(&parse_kernel(kernel, *lambda)?, &parse_point(point)?),
        Command::Thresholds {
            example,
            lambda_min,
            lambda_max,
            steps,
        } => thresholds(example, *lambda_min, *lambda_max, *steps),
    }
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        exit::OK
    } else {
        exit::NOT_CONTRACTIVE
    }
}

fn same_domain(a: &DomainSpec, b: &DomainSpec) -> bool {
    a.m() == b.m() && a.n() == b.n() && a.mats().iter().zip(b.mats()).all(|(x, y)| x.approx_eq(y, 1e-15))
}

fn rows_of<const N: usize>(v: &VTuple) -> Option<Vec<[C64; N]>> {
    if v.p() != 1 || v.q() != N {
        return None;
    }
    Some((0..v.m()).map(|i| v.row(i).try_into().expect("row length q")).collect())
}

fn check(cfg: &RunConfig, tol: f64, d: &DomainSpec, v: &VTuple) -> Result<Done, CliError> {
    if cfg.method == Some(MethodArg::Closed) {
        return check_closed(d, v);
    }
    let opts = GeneralOptions {
        tol,
        seed: cfg.seed,
        ..GeneralOptions::default()
    };
    let rep = contractive_general_with(d, v, &opts)?;
    Ok(Done {
        command: "check",
        code: verdict_code(rep.contractive),
        tolerances: tolerances(&[
            ("tol", json!(opts.tol)),
            ("lattice", json!(opts.lattice)),
            ("starts", json!(opts.starts)),
        ]),
        report: to_value(&rep),
        table: None,
    })
}

/// The closed forms cover `(I₂, E₁₂)` with row tuples and `(E₁₁, E₁₂, E₂₂)`
/// with diagonal row tuples.
fn check_closed(d: &DomainSpec, v: &VTuple) -> Result<Done, CliError> {
    let zero = C64::new(0.0, 0.0);
    let report = if let (true, Some(rows)) = (same_domain(d, &DomainSpec::i_e12()), rows_of::<2>(v)) {
        let (v1, v2) = (rows[0], rows[1]);
        let k = contractive_closed_i_e12(v1, v2);
        let t = complete_closed_i_e12(v1, v2);
        json!({
            "contractive": k.contractive,
            "completely_contractive_on_pa": t.completely_contractive,
            "linear_map_norm": k.linear_map_norm,
            "tensor_norm": t.tensor_norm,
            "attained_infimum": k.attained_infimum,
            "criterion": {"lhs": k.lhs, "rhs": k.rhs, "contractive": k.criterion_contractive},
            "complete_test": to_value(&t),
            "method": "closed_form",
        })
    } else if let (true, Some(rows)) = (same_domain(d, &DomainSpec::upper_triangular3()), rows_of::<3>(v)) {
        let diagonal = (0..3).all(|i| (0..3).all(|j| i == j || rows[i][j] == zero));
        if !diagonal {
            return Err(CliError::Input("the closed form on (E11, E12, E22) needs rows v_k e_k".into()));
        }
        let k = contractive_closed_diag3(rows[0][0], rows[1][1], rows[2][2]);
        let (cc, value) = complete_closed_diag3(rows[0][0], rows[1][1], rows[2][2]);
        json!({
            "contractive": k.contractive,
            "completely_contractive_on_pa": cc,
            "tensor_norm": value.sqrt(),
            "complete_test_value": value,
            "criterion": {"lhs": k.lhs, "rhs": k.rhs, "contractive": k.criterion_contractive},
            "method": "closed_form",
        })
    } else {
        return Err(CliError::Input(
            "no closed form for this domain and tuple; use --method numeric".into(),
        ));
    };
    Ok(Done {
        command: "check",
        code: verdict_code(report["contractive"].as_bool().expect("bool")),
        tolerances: tolerances(&[("boundary", json!(BOUNDARY_TOL))]),
        report,
        table: None,
    })
}

fn check_complete(tol: f64, d: &DomainSpec, v: &VTuple) -> Result<Done, CliError> {
    let t = tensor_norm(d, v)?;
    let ok = t <= 1.0 + tol;
    let closed = match (same_domain(d, &DomainSpec::i_e12()), rows_of::<2>(v)) {
        (true, Some(rows)) => to_value(&complete_closed_i_e12(rows[0], rows[1])),
        _ => Value::Null,
    };
    Ok(Done {
        command: "check-complete",
        code: verdict_code(ok),
        tolerances: tolerances(&[("tol", json!(tol))]),
        report: json!({
            "tensor_norm": t,
            "completely_contractive_on_pa": ok,
            "closed_form": closed,
        }),
        table: None,
    })
}

fn dual(cfg: &RunConfig, d: &DomainSpec, w: &[C64]) -> Result<Done, CliError> {
    let opts = DualOptions {
        seed: cfg.seed,
        ..DualOptions::default()
    };
    let method = match cfg.method {
        Some(MethodArg::Closed) => DualMethod::ClosedX,
        _ => DualMethod::Numeric,
    };
    let value = dual_norm_with(d, w, method, &opts)?;
    Ok(Done {
        command: "dual-norm",
        code: exit::OK,
        tolerances: tolerances(&[("samples", json!(opts.samples)), ("refine", json!(opts.refine))]),
        report: json!({"point": to_value(&w), "dual_norm": value, "method": to_value(&method)}),
        table: None,
    })
}

fn search(
    tol: f64,
    d: &DomainSpec,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    per_decade: u32,
) -> Result<Done, CliError> {
    if per_decade == 0 {
        return Err(CliError::Input("--per-decade must be at least 1".into()));
    }
    let defaults = SearchOptions::default();
    let k_of = |l: f64| (l.log10() * per_decade as f64).round() as i32;
    let scale = |k: i32| (k as i64 * per_decade as i64 / defaults.per_decade as i64) as i32;
    let opts = SearchOptions {
        k_min: lambda_min.map_or(scale(defaults.k_min), k_of),
        k_max: lambda_max.map_or(scale(defaults.k_max), k_of),
        per_decade,
        tol,
        ..defaults
    };
    if opts.k_min > opts.k_max {
        return Err(CliError::Input("--lambda-min exceeds --lambda-max".into()));
    }
    let tols = tolerances(&[
        ("tol", json!(opts.tol)),
        ("separation", json!(opts.separation)),
        ("v_tol", json!(opts.v_tol)),
        ("g_zero", json!(1e-6)),
    ]);
    let (code, report) = match search_with(d, &opts) {
        Ok(SearchOutcome::Certificate(r)) => {
            let mut rep = to_value(&SearchOutcome::Certificate(r.clone()));
            rep["tuple"] = to_value(&r.tuple());
            (exit::OK, rep)
        }
        Ok(gap @ SearchOutcome::TransposeGap(_)) => (exit::TRANSPOSE_GAP, to_value(&gap)),
        Err(CounterexampleError::NoCounterexampleExpected) => (
            exit::DIAGONALIZABLE,
            json!({
                "kind": "simultaneously_diagonalizable",
                "note": "contractivity and complete contractivity on P_A coincide; no counterexample exists",
            }),
        ),
        Err(CounterexampleError::Exhausted {
            lambda_min,
            lambda_max,
            scanned,
        }) => (
            exit::EXHAUSTED,
            json!({
                "kind": "exhausted",
                "lambda_min": lambda_min,
                "lambda_max": lambda_max,
                "scanned": scanned,
                "per_decade": opts.per_decade,
            }),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(Done {
        command: "search",
        code,
        tolerances: tols,
        report,
        table: None,
    })
}

fn bergman_curvature(cfg: &RunConfig, spec: &KernelSpec, w: &[C64]) -> Result<Done, CliError> {
    let res = match cfg.method {
        None => curvature(spec, w)?,
        Some(MethodArg::Closed) => {
            if curvature_closed(spec, w).is_none() {
                return Err(CliError::Input("no closed-form curvature for this kernel at this point".into()));
            }
            curvature(spec, w)?
        }
        Some(MethodArg::Numeric) => {
            let k = curvature_fd(spec, w)?;
            CurvatureResult {
                a0: localization(&k)?,
                k,
                w: w.to_vec(),
                method: CurvatureMethod::FiniteDifference,
            }
        }
    };
    Ok(Done {
        command: "bergman-curvature",
        code: exit::OK,
        tolerances: tolerances(&[("fd_step", json!(bergman::FD_STEP))]),
        report: json!({"kernel": to_value(spec), "curvature": to_value(&res)}),
        table: None,
    })
}

fn jet(spec: &KernelSpec, w: &[C64]) -> Result<Done, CliError> {
    let (code, report) = match jet_gram(spec, w) {
        Ok(g) => (exit::OK, json!({"kernel": to_value(spec), "positive": true, "gram": to_value(&g)})),
        Err(BergmanError::PositivityViolation(l)) => (
            exit::NOT_CONTRACTIVE,
            json!({"kernel": to_value(spec), "positive": false, "lambda_min": l}),
        ),
        Err(e) => return Err(e.into()),
    };
    Ok(Done {
        command: "jet-gram",
        code,
        tolerances: tolerances(&[("fd_step", json!(bergman::FD_STEP))]),
        report,
        table: None,
    })
}

fn lambdas(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if lo > hi {
        return Err(CliError::Input("--lambda-min exceeds --lambda-max".into()));
    }
    Ok(match steps {
        0 => vec![],
        1 => vec![lo],
        n => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    })
}

fn thresholds(tag: &str, lo: f64, hi: f64, steps: usize) -> Result<Done, CliError> {
    let example: ThresholdExample = tag.parse()?;
    let reports = lambdas(lo, hi, steps)?
        .into_iter()
        .map(|l| threshold_check(example, l))
        .collect::<Result<Vec<_>, _>>()?;
    let criticals = bergman::criticals(example);
    let name = Value::String(example.to_string());
    let mut rows = Vec::new();
    for c in &criticals {
        rows.push(vec![
            name.clone(),
            json!(c.test),
            json!(c.computed),
            c.stated.as_ref().map_or(Value::Null, |s| json!(s)),
            c.agree.map_or(Value::Null, |a| json!(a)),
            Value::Null,
            Value::Null,
        ]);
    }
    for r in &reports {
        let mut verdicts = vec![("contractive", r.contractive)];
        if let Some(c) = r.criterion_contractive {
            verdicts.push(("contractive_criterion", c));
        }
        verdicts.push(("pa_contractive", r.pa_contractive));
        for (test, v) in verdicts {
            rows.push(vec![
                name.clone(),
                json!(test),
                Value::Null,
                Value::Null,
                Value::Null,
                json!(r.lambda),
                json!(v),
            ]);
        }
    }
    Ok(Done {
        command: "thresholds",
        code: exit::OK,
        tolerances: tolerances(&[("boundary", json!(BOUNDARY_TOL))]),
        report: json!({"example": name, "criticals": to_value(&criticals), "samples": to_value(&reports)}),
        table: Some(Table {
            headers: vec![
                "example",
                "test",
                "computed_critical_lambda",
                "paper_stated_value",
                "agree_flag",
                "lambda",
                "verdict",
            ],
            rows,
        }),
    })
}
