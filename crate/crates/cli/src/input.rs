//! Reading, schema validation and typed decoding of input documents.

use std::io::ErrorKind;
use std::path::Path;
use std::sync::OnceLock;

use jsonschema::JSONSchema;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use serde_path_to_error::Segment;

use crate::fixtures;

/// Process exit statuses.
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Query,
    Homology,
    Diagram,
}

impl Kind {
    pub fn schema_id(self) -> &'static str {
        match self {
            Kind::Query => "query-1.0",
            Kind::Homology => "homology-1.0",
            Kind::Diagram => "diagram-1.0",
        }
    }

    fn schema_text(self) -> &'static str {
        match self {
            Kind::Query => include_str!("../../../schemas/query.schema.json"),
            Kind::Homology => include_str!("../../../schemas/homology.schema.json"),
            Kind::Diagram => include_str!("../../../schemas/diagram.schema.json"),
        }
    }

    /// Guess the kind from the top-level keys.
    pub fn detect(v: &Value) -> Option<Kind> {
        let obj = v.as_object()?;
        if obj.contains_key("question") {
            Some(Kind::Query)
        } else if obj.contains_key("complex") {
            Some(Kind::Homology)
        } else if obj.contains_key("diagram") {
            Some(Kind::Diagram)
        } else {
            None
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

/// A run that ends without a result document.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub issues: Vec<Issue>,
}

impl Failure {
    pub fn invalid(kind: &'static str, path: impl Into<String>, message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            kind,
            issues: vec![Issue {
                path: path.into(),
                message: message.to_string(),
            }],
        }
    }

    pub fn internal(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            kind: "internal",
            issues: vec![Issue {
                path: String::new(),
                message: message.to_string(),
            }],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "issues": self.issues } })
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::internal(format!("{e:#}"))
    }
}

/// A parsed input document and where it came from.
pub struct Document {
    pub source: String,
    pub value: Value,
}

/// Read `path`; a missing file whose stem names a bundled fixture falls
/// back to the embedded copy.
pub fn load(path: &Path) -> Result<Document, Failure> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            match fixtures::find(stem) {
                Some(f) => {
                    log::warn(&format!("{} not found, using bundled fixture {}", path.display(), f.name));
                    return parse(format!("fixture:{}", f.name), f.text);
                }
                None => return Err(Failure::invalid("io", "", format!("{}: {e}", path.display()))),
            }
        }
        Err(e) => return Err(Failure::invalid("io", "", format!("{}: {e}", path.display()))),
    };
    parse(path.display().to_string(), &text)
}

pub fn parse(source: String, text: &str) -> Result<Document, Failure> {
    let value = serde_json::from_str(text).map_err(|e| Failure::invalid("parse", "", e))?;
    Ok(Document { source, value })
}

fn compiled(kind: Kind) -> Result<&'static JSONSchema, Failure> {
    static CACHE: [OnceLock<Result<JSONSchema, String>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = &CACHE[kind as usize];
    let schema = slot.get_or_init(|| {
        let raw: Value = serde_json::from_str(kind.schema_text()).map_err(|e| e.to_string())?;
        JSONSchema::options()
            .with_draft(jsonschema::Draft::Draft7)
            .compile(&raw)
            .map_err(|e| e.to_string())
    });
    schema
        .as_ref()
        .map_err(|e| Failure::internal(format!("schema {} does not compile: {e}", kind.schema_id())))
}

/// Check `v` against the published schema for `kind`.
pub fn check_schema(kind: Kind, v: &Value) -> Result<(), Failure> {
    let schema = compiled(kind)?;
    if let Err(errors) = schema.validate(v) {
        let mut issues: Vec<Issue> = errors
            .map(|e| Issue {
                path: e.instance_path.to_string(),
                message: e.to_string(),
            })
            .collect();
        issues.sort_by(|a, b| (&a.path, &a.message).cmp(&(&b.path, &b.message)));
        return Err(Failure {
            code: EXIT_INVALID,
            kind: "schema",
            issues,
        });
    }
    Ok(())
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Schema check followed by typed decoding.
pub fn decode<T: DeserializeOwned>(kind: Kind, v: &Value) -> Result<T, Failure> {
    check_schema(kind, v)?;
    serde_path_to_error::deserialize(v).map_err(|e| Failure::invalid("validation", pointer(e.path()), e.inner()))
}

pub mod log {
    use std::sync::atomic::{AtomicBool, Ordering};

    static VERBOSE: AtomicBool = AtomicBool::new(false);

    pub fn set_verbose(on: bool) {
        VERBOSE.store(on, Ordering::Relaxed);
    }

    pub fn warn(msg: &str) {
        eprintln!("surfcob: {msg}");
    }

    pub fn note(msg: &str) {
        if VERBOSE.load(Ordering::Relaxed) {
            eprintln!("surfcob: {msg}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schemas_compile() {
        for kind in [Kind::Query, Kind::Homology, Kind::Diagram] {
            assert!(compiled(kind).is_ok(), "{}", kind.schema_id());
        }
    }

    #[test]
    fn kinds_are_detected_by_key() {
        assert_eq!(Kind::detect(&json!({"question": "x"})), Some(Kind::Query));
        assert_eq!(Kind::detect(&json!({"complex": {}})), Some(Kind::Homology));
        assert_eq!(Kind::detect(&json!({"diagram": {}})), Some(Kind::Diagram));
        assert_eq!(Kind::detect(&json!([1])), None);
    }

    #[test]
    fn decode_errors_carry_a_pointer() {
        #[derive(Debug, serde::Deserialize)]
        #[allow(dead_code)]
        struct Inner {
            n: u8,
        }
        #[derive(Debug, serde::Deserialize)]
        #[allow(dead_code)]
        struct Outer {
            items: Vec<Inner>,
        }
        let v = json!({"items": [{"n": 1}, {"n": "x"}]});
        let err = serde_path_to_error::deserialize::<_, Outer>(&v).unwrap_err();
        assert_eq!(pointer(err.path()), "/items/1/n");
    }

    #[test]
    fn every_bundled_fixture_passes_its_schema() {
        for f in crate::fixtures::FIXTURES {
            let doc = parse(f.name.to_string(), f.text).unwrap();
            assert_eq!(Kind::detect(&doc.value), Some(f.kind), "{}", f.name);
            check_schema(f.kind, &doc.value).unwrap_or_else(|e| panic!("{}: {:?}", f.name, e.issues));
        }
    }
}
