//! Result payloads and their JSON and CSV renderings.

use serde::Serialize;
use serde_json::{Map, Value};

use nonlocal_core::Estimate;

pub const CSV_HEADER: &str = "s,value,stderr,converged";

/// What a command computed, before metadata is attached.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: f64,
    pub stderr: f64,
    pub converged: bool,
    pub details: Map<String, Value>,
}

impl Outcome {
    pub fn exact(value: f64) -> Self {
        Outcome {
            value,
            stderr: 0.0,
            converged: true,
            details: Map::new(),
        }
    }

    pub fn detail<T: Serialize>(mut self, key: &str, v: T) -> Self {
        self.details
            .insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }
}

impl From<Estimate> for Outcome {
    fn from(e: Estimate) -> Self {
        Outcome {
            value: e.value,
            stderr: e.stderr,
            converged: e.converged,
            details: Map::new(),
        }
        .detail("samples_or_nodes", e.samples_or_nodes)
    }
}

#[derive(Serialize)]
pub struct Meta<'a> {
    pub command: String,
    pub inputs: &'a Value,
    pub versions: Versions,
    pub seed: u64,
}

#[derive(Serialize)]
pub struct Versions {
    pub nonlocal: &'static str,
    #[serde(rename = "nonlocal-core")]
    pub core: &'static str,
}

impl Versions {
    pub fn current() -> Self {
        Versions {
            nonlocal: env!("CARGO_PKG_VERSION"),
            core: nonlocal_core::VERSION,
        }
    }
}

#[derive(Serialize)]
struct Payload<'a> {
    value: f64,
    stderr: f64,
    converged: bool,
    meta: Meta<'a>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    details: &'a Map<String, Value>,
}

pub fn json(o: &Outcome, meta: Meta) -> String {
    let p = Payload {
        value: o.value,
        stderr: o.stderr,
        converged: o.converged,
        meta,
        details: &o.details,
    };
    serde_json::to_string_pretty(&p).expect("payload serializes")
}

/// One CSV row; non-finite numbers print as `nan`, `inf` or `-inf`.
pub fn csv_row(s: f64, o: &Outcome) -> String {
    format!("{},{},{},{}", num(s), num(o.value), num(o.stderr), o.converged)
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}
