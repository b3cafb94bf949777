//! Variety spec documents.
//!
//! ```toml
//! field = "3"
//! n = 3
//! r = 2
//! s = 0                    # or "smooth"
//! generators = ["1*X1^2 - 1*X0^1*X2^1"]
//! projection = [[1, 0, 0, 0], [0, 1, 0, 0]]   # optional
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::counting::{LinearProjection, SingularBound, VarietySpec};
use crate::error::{Error, Result};
use crate::gf::{parse_field, Field};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    field: Option<String>,
    n: usize,
    r: usize,
    s: SingularDecl,
    generators: Vec<String>,
    projection: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SingularDecl {
    Dim(usize),
    Word(String),
}

#[derive(Clone, Debug)]
pub struct ParsedSpec {
    pub variety: VarietySpec,
    pub projection: Option<LinearProjection>,
}

/// Parse a spec document; `field` overrides the document's own field.
pub fn parse_spec(text: &str, field: Option<&Field>) -> Result<ParsedSpec> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Input(format!("spec document: {}", e.message())))?;
    let field = match (field, &doc.field) {
        (Some(f), _) => f.clone(),
        (None, Some(tok)) => parse_field(tok)?,
        (None, None) => return Err(Error::invalid("field", "no field in the document or on the command line")),
    };
    let singular = match doc.s {
        SingularDecl::Dim(s) => SingularBound::AtMost(s),
        SingularDecl::Word(w) if w == "smooth" => SingularBound::Smooth,
        SingularDecl::Word(w) => {
            return Err(Error::invalid("s", format!("expected an integer or \"smooth\", got `{w}`")))
        }
    };
    let gens: Vec<&str> = doc.generators.iter().map(String::as_str).collect();
    let variety = VarietySpec::parse(&field, doc.n, doc.r, &gens, singular)?;
    let projection = match doc.projection {
        None => None,
        Some(rows) => {
            if rows.iter().any(|r| r.len() != doc.n + 1) {
                return Err(Error::invalid(
                    "projection shape",
                    format!("every row needs n + 1 = {} entries", doc.n + 1),
                ));
            }
            Some(LinearProjection::from_ints(&field, &rows)?)
        }
    };
    Ok(ParsedSpec { variety, projection })
}

pub fn load_spec(path: &Path, field: Option<&Field>) -> Result<ParsedSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_spec(&text, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONE: &str = r#"
field = "3"
n = 3
r = 2
s = 0
generators = ["1*X1^2 - 1*X0^1*X2^1"]
projection = [[1, 0, 0, 0], [0, 1, 0, 0]]
"#;

    #[test]
    fn parses_cone() {
        let p = parse_spec(CONE, None).unwrap();
        assert_eq!(p.variety.degrees(), &[2]);
        assert_eq!(p.variety.singular_bound(), SingularBound::AtMost(0));
        assert_eq!(p.projection.unwrap().s(), 0);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_poly = CONE.replace("1*X1^2", "1*X1");
        assert!(matches!(parse_spec(&bad_poly, None), Err(Error::Poly(_))));
        let bad_s = CONE.replace("s = 0", "s = \"maybe\"");
        assert!(matches!(parse_spec(&bad_s, None), Err(Error::Invalid { .. })));
        let extra = format!("{CONE}\ncolour = 1\n");
        assert!(matches!(parse_spec(&extra, None), Err(Error::Input(_))));
        let bad_field = CONE.replace("\"3\"", "\"4\"");
        assert!(matches!(parse_spec(&bad_field, None), Err(Error::Field(_))));
        let rank = CONE.replace("[0, 1, 0, 0]]", "[2, 0, 0, 0]]");
        assert!(matches!(parse_spec(&rank, None), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn field_override() {
        let f5 = parse_field("5").unwrap();
        let p = parse_spec(CONE, Some(&f5)).unwrap();
        assert_eq!(p.variety.field().size(), 5);
    }
}
