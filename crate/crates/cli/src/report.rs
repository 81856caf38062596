//! The structured report emitted by every command: a single document with
//! fixed field names and field order, serialized as JSON under `--json` and
//! rendered as text otherwise.

use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputRef>,
    pub verdict: String,
    pub witness: Vec<WitnessEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub series: Vec<SeriesEntry>,
    pub timings: Timings,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct InputRef {
    pub role: String,
    pub source: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessEntry {
    pub challenge: String,
    pub certificate: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Counterexample {
    pub challenge: String,
    pub note: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesEntry {
    pub index: usize,
    pub values: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Timings {
    pub wall_ms: u128,
}

/// How the witness list reads in the text rendering: as challenge and
/// certificate points, or as labeled facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessStyle {
    Certificates,
    Labels,
}

/// Everything a command produces besides the exit code.
pub struct Outcome {
    pub verdict: String,
    pub exit: i32,
    pub style: WitnessStyle,
    pub witness: Vec<(String, String)>,
    pub counterexample: Option<(String, String)>,
    pub series: Vec<Vec<(String, String)>>,
    /// Extra free-form lines for the text rendering only (suite failure
    /// dumps); the structured fields already carry the data.
    pub text_appendix: Vec<String>,
}

impl Outcome {
    pub fn new(verdict: impl Into<String>, exit: i32) -> Outcome {
        Outcome {
            verdict: verdict.into(),
            exit,
            style: WitnessStyle::Labels,
            witness: Vec::new(),
            counterexample: None,
            series: Vec::new(),
            text_appendix: Vec::new(),
        }
    }
}

pub fn to_report(
    command: String,
    inputs: Vec<InputRef>,
    outcome: &Outcome,
    wall_ms: u128,
) -> Report {
    Report {
        command,
        inputs,
        verdict: outcome.verdict.clone(),
        witness: outcome
            .witness
            .iter()
            .map(|(c, w)| WitnessEntry {
                challenge: c.clone(),
                certificate: w.clone(),
            })
            .collect(),
        counterexample: outcome
            .counterexample
            .as_ref()
            .map(|(c, n)| Counterexample {
                challenge: c.clone(),
                note: n.clone(),
            }),
        series: outcome
            .series
            .iter()
            .enumerate()
            .map(|(index, values)| SeriesEntry {
                index,
                values: values.clone(),
            })
            .collect(),
        timings: Timings { wall_ms },
    }
}

pub fn render_text(command: &str, outcome: &Outcome) -> String {
    let mut out = String::new();
    out.push_str(&format!("{command}: {}\n", outcome.verdict));
    for (challenge, certificate) in &outcome.witness {
        match outcome.style {
            WitnessStyle::Certificates => out.push_str(&format!(
                "challenge {challenge} -> certificate {certificate}\n"
            )),
            WitnessStyle::Labels => out.push_str(&format!("{challenge}: {certificate}\n")),
        }
    }
    if let Some((challenge, note)) = &outcome.counterexample {
        out.push_str(&format!("counterexample: {challenge}\n  {note}\n"));
    }
    if outcome.series.len() == 1 {
        out.push_str("result:\n");
        for (elt, val) in &outcome.series[0] {
            out.push_str(&format!("{elt} : {val}\n"));
        }
    } else {
        for (k, stage) in outcome.series.iter().enumerate() {
            out.push_str(&format!("stage {k}:\n"));
            for (elt, val) in stage {
                out.push_str(&format!("  {elt} : {val}\n"));
            }
        }
    }
    for line in &outcome.text_appendix {
        out.push_str(line);
        out.push('\n');
    }
    out
}
