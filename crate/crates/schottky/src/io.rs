//! Group-definition files and builtin presets.
//!
//! A group document is JSON with fields `genus`, `circles` (an array of 2g
//! objects `{center_re, center_im, radius}` in marking order; circle i pairs
//! with circle i+g) and an optional `label`. Serialization round-trips the
//! document bit-exactly: numbers are carried through as the literal strings
//! found in the input.

use crate::error::{Result, SchottkyError};
use crate::moebius::{build_fuchsian_schottky, CircleSpec, SchottkyGroup};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleDoc {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub genus: usize,
    pub circles: Vec<CircleDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GroupDoc {
    /// Validates the document shape and builds the marked group.
    pub fn build(&self) -> Result<SchottkyGroup> {
        if self.genus < 2 {
            return Err(SchottkyError::GroupFileInvalid(format!(
                "genus must be at least 2, got {}",
                self.genus
            )));
        }
        if self.circles.len() != 2 * self.genus {
            return Err(SchottkyError::GroupFileInvalid(format!(
                "expected {} circles for genus {}, got {}",
                2 * self.genus,
                self.genus,
                self.circles.len()
            )));
        }
        let circles: Vec<CircleSpec> = self
            .circles
            .iter()
            .map(|c| CircleSpec {
                center: Complex64::new(c.center_re, c.center_im),
                radius: c.radius,
            })
            .collect();
        build_fuchsian_schottky(self.genus, &circles)
    }
}

/// Parses a group document from JSON text.
pub fn parse_group(text: &str) -> Result<GroupDoc> {
    serde_json::from_str(text).map_err(SchottkyError::from)
}

/// Serializes a group document; `parse_group(serialize_group(d)) == d` and
/// re-serializing is byte-identical.
pub fn serialize_group(doc: &GroupDoc) -> String {
    serde_json::to_string_pretty(doc).expect("group document serializes")
}

/// Reads and builds a group from a file path.
pub fn load_group(path: &Path) -> Result<(GroupDoc, SchottkyGroup)> {
    let text = std::fs::read_to_string(path)?;
    let doc = parse_group(&text)?;
    let group = doc.build()?;
    Ok((doc, group))
}

/// Builtin reference configurations.
pub fn preset(name: &str) -> Result<GroupDoc> {
    let (genus, centers, radius) = match name {
        "sym2" => (2usize, vec![-3.0, -1.0, 1.0, 3.0], 0.5),
        "sym3" => (3usize, vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0], 0.4),
        other => {
            return Err(SchottkyError::GroupFileInvalid(format!("unknown preset '{other}'")))
        }
    };
    Ok(GroupDoc {
        genus,
        circles: centers
            .into_iter()
            .map(|x| CircleDoc { center_re: x, center_im: 0.0, radius })
            .collect(),
        label: Some(name.to_string()),
    })
}

/// Resolves a group source: a preset name or a file path.
pub fn resolve_group(preset_name: Option<&str>, path: Option<&Path>) -> Result<(GroupDoc, SchottkyGroup)> {
    match (preset_name, path) {
        (Some(name), None) => {
            let doc = preset(name)?;
            let group = doc.build()?;
            Ok((doc, group))
        }
        (None, Some(p)) => load_group(p),
        _ => Err(SchottkyError::GroupFileInvalid(
            "exactly one of preset or file must be given".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for name in ["sym2", "sym3"] {
            let doc = preset(name).unwrap();
            let group = doc.build().unwrap();
            assert_eq!(group.genus, doc.genus);
            assert!(group.fuchsian_flag);
        }
        assert!(preset("nope").is_err());
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let doc = preset("sym2").unwrap();
        let text = serialize_group(&doc);
        let parsed = parse_group(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(serialize_group(&parsed), text);
        // arbitrary decimals survive a parse/serialize/parse cycle
        let raw = r#"{"genus":2,"circles":[
            {"center_re":-3.25,"center_im":0.0,"radius":0.515625},
            {"center_re":-1.0,"center_im":0.0,"radius":0.5},
            {"center_re":1.0,"center_im":0.0,"radius":0.5},
            {"center_re":3.25,"center_im":0.0,"radius":0.515625}]}"#;
        let d1 = parse_group(raw).unwrap();
        let s1 = serialize_group(&d1);
        let d2 = parse_group(&s1).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(serialize_group(&d2), s1);
    }

    #[test]
    fn invalid_documents_rejected() {
        let mut doc = preset("sym2").unwrap();
        doc.circles.pop();
        assert!(matches!(doc.build(), Err(SchottkyError::GroupFileInvalid(_))));
        let mut overlapping = preset("sym2").unwrap();
        overlapping.circles[0].radius = 2.5;
        assert!(matches!(overlapping.build(), Err(SchottkyError::DiscsOverlap(_, _))));
        assert!(parse_group("{not json").is_err());
    }
}
