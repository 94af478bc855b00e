use serde::{Deserialize, Serialize};

use tetrablock::boundary::{classify_gamma, classify_tetra, gamma_defect, tetra_defect};
use tetrablock::construct::{construct as build, ConstructionSpec};
use tetrablock::extremal::perturb_nonextreme;
use tetrablock::polycx::Polynomial;
use tetrablock::tetrafun::{check_conditions, invariant_report, ConditionCheck, InvariantReport, VALIDATION_SAMPLES};
use tetrablock::{Complex64, GammaPoint, TetraPoint, TetraRational, TetraRationalData};

use crate::{CliError, Format, RunConfig};

/// Rendered output, plus an error to report after it has been written.
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, CliError> {
    serde_json::from_str(input).map_err(|e| CliError::usage(format!("invalid JSON input: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn json_only(config: &RunConfig, command: &str) -> Result<(), CliError> {
    match config.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::usage(format!("{command} supports only --format json"))),
    }
}

fn load(input: &str, config: &RunConfig) -> Result<TetraRational, CliError> {
    let data: TetraRationalData = parse(input)?;
    Ok(data.validate(config.mode)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointInput {
    Tetra(TetraPoint),
    Gamma(GammaPoint),
}

#[derive(Serialize)]
struct RegionReport {
    region: String,
    defect: f64,
}

pub fn classify(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    let report = match parse::<PointInput>(input)? {
        PointInput::Tetra(x) => {
            RegionReport { region: format!("{:?}", classify_tetra(&x, config.membership_tol)), defect: tetra_defect(&x) }
        }
        PointInput::Gamma(g) => {
            RegionReport { region: format!("{:?}", classify_gamma(&g, config.membership_tol)), defect: gamma_defect(&g) }
        }
    };
    match config.format {
        Format::Json => Ok(Outcome::ok(to_json(&report)?)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(&report).map_err(|e| CliError::usage(e.to_string()))?;
            finish_csv(w)
        }
    }
}

#[derive(Serialize)]
struct NodeReport {
    location: Complex64,
    multiplicity: usize,
    raw_order: usize,
    on_circle: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum TypeReport {
    Pair([usize; 2]),
    Royal(&'static str),
}

#[derive(Serialize)]
struct Analysis {
    degree: usize,
    winding_number: Option<i64>,
    #[serde(rename = "type")]
    type_nk: TypeReport,
    royal_nodes: Vec<NodeReport>,
    superficial: bool,
}

fn analysis(x: &TetraRational, config: &RunConfig) -> Result<Analysis, CliError> {
    let degree = x.degree()?;
    let winding_number = x.winding_number(config.samples.max(VALIDATION_SAMPLES)).ok();
    let superficial = x.is_superficial(config.samples.max(64), 1e-10);
    if x.is_royal_variety() {
        return Ok(Analysis { degree, winding_number, type_nk: TypeReport::Royal("royal-variety"), royal_nodes: vec![], superficial });
    }
    let nodes = x.royal_nodes_with(config.cluster_tol, config.circle_tol)?;
    let n = nodes.iter().map(|v| v.multiplicity).sum();
    let k = nodes.iter().filter(|v| v.on_circle).map(|v| v.multiplicity).sum();
    Ok(Analysis {
        degree,
        winding_number,
        type_nk: TypeReport::Pair([n, k]),
        royal_nodes: nodes
            .iter()
            .map(|v| NodeReport { location: v.location, multiplicity: v.multiplicity, raw_order: v.raw_order, on_circle: v.on_circle })
            .collect(),
        superficial,
    })
}

#[derive(Serialize)]
struct ConstructOutput {
    #[serde(flatten)]
    function: TetraRationalData,
    analysis: Analysis,
}

pub fn construct(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    json_only(config, "construct")?;
    let spec: ConstructionSpec = parse(input)?;
    let x = build(&spec)?;
    let analysis = analysis(&x, config)?;
    Ok(Outcome::ok(to_json(&ConstructOutput { function: x.to_data(), analysis })?))
}

#[derive(Serialize)]
struct CheckLine {
    name: &'static str,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    valid: bool,
    conditions: Vec<ConditionCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants: Option<InvariantReport>,
    invariant_checks: Vec<CheckLine>,
}

pub fn verify(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    json_only(config, "verify")?;
    let data: TetraRationalData = parse(input)?;
    let conditions = check_conditions(&data.e1, &data.e2, &data.d, data.n, config.mode);
    let valid = conditions.iter().all(|c| c.passed);
    let (invariants, failure) = if valid {
        let x = data.clone().validate(config.mode)?;
        let rep = invariant_report(&x, config.seed)?;
        let failure = (!rep.all_pass()).then(|| CliError { code: 4, message: "invariant checks failed".into() });
        (Some(rep), failure)
    } else {
        (None, Some(CliError { code: 3, message: "defining conditions violated".into() }))
    };
    let invariant_checks = invariants
        .as_ref()
        .map(|r| r.checks().into_iter().map(|(name, passed)| CheckLine { name, passed }).collect())
        .unwrap_or_default();
    let text = to_json(&VerifyReport { valid, conditions, invariants, invariant_checks })?;
    Ok(Outcome { text, failure })
}

pub fn analyze(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    json_only(config, "analyze")?;
    let x = load(input, config)?;
    Ok(Outcome::ok(to_json(&analysis(&x, config)?)?))
}

#[derive(Serialize)]
struct TraceRow {
    theta: f64,
    x1_re: f64,
    x1_im: f64,
    x2_re: f64,
    x2_im: f64,
    x3_re: f64,
    x3_im: f64,
    defect: f64,
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Outcome, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(Outcome::ok(String::from_utf8(bytes).map_err(|e| CliError::usage(e.to_string()))?))
}

pub fn trace(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    let x = load(input, config)?;
    let rows: Vec<TraceRow> = x
        .circle_trace(config.samples)?
        .into_iter()
        .map(|t| TraceRow {
            theta: t.theta,
            x1_re: t.point.x1.re,
            x1_im: t.point.x1.im,
            x2_re: t.point.x2.re,
            x2_im: t.point.x2.im,
            x3_re: t.point.x3.re,
            x3_im: t.point.x3.im,
            defect: t.defect,
        })
        .collect();
    match config.format {
        Format::Json => Ok(Outcome::ok(to_json(&rows)?)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| CliError::usage(e.to_string()))?;
            }
            finish_csv(w)
        }
    }
}

#[derive(Serialize)]
struct PerturbReport {
    method: tetrablock::PerturbationMethod,
    t: f64,
    degenerate: bool,
    g: Polynomial,
    x_plus: TetraRationalData,
    x_minus: TetraRationalData,
    midpoint_max_coeff_error: f64,
}

pub fn perturb(input: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    json_only(config, "perturb")?;
    let x = load(input, config)?;
    let res = perturb_nonextreme(&x)?;
    Ok(Outcome::ok(to_json(&PerturbReport {
        method: res.method,
        t: res.t_used,
        degenerate: res.degenerate,
        g: res.g.clone(),
        midpoint_max_coeff_error: res.midpoint_error(&x),
        x_plus: res.x_plus.to_data(),
        x_minus: res.x_minus.to_data(),
    })?))
}
