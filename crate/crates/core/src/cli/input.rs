//! Input documents `{variables, generators | parametrization, field}` and
//! builtin lookup.

use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::arith::{is_prime, Field, Rationals};
use crate::census::{projective_ring, ImplicitVariety};
use crate::chart::ambient_ring;
use crate::gallery::{self, ChartForm, GalleryEntry, ParametricVariety, Variety};
use crate::poly::{parse_poly, MultiPoly, PolyRing};

use super::CliError;

/// Coefficient field named in an input document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(v: Option<&Value>) -> Result<Self, CliError> {
        let bad = |s: &str| CliError::Input(format!("unknown field {s:?}; use \"QQ\" or \"GF(p)\""));
        let spec = match v {
            None => return Ok(FieldSpec::Rationals),
            Some(Value::Number(n)) => FieldSpec::Prime(n.as_u64().ok_or_else(|| bad(&n.to_string()))?),
            Some(Value::String(s)) => {
                let t = s.trim();
                match t {
                    "QQ" | "Q" | "rationals" => FieldSpec::Rationals,
                    _ => {
                        let inner = t
                            .strip_prefix("GF(")
                            .and_then(|r| r.strip_suffix(')'))
                            .or_else(|| t.strip_prefix("F_"))
                            .or_else(|| t.strip_prefix("GF"))
                            .ok_or_else(|| bad(t))?;
                        FieldSpec::Prime(inner.trim().parse().map_err(|_| bad(t))?)
                    }
                }
            }
            Some(other) => return Err(bad(&other.to_string())),
        };
        if let FieldSpec::Prime(p) = spec {
            if !is_prime(p) {
                return Err(CliError::Input(format!("field characteristic {p} is not prime")));
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
pub struct InputDoc {
    pub name: String,
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub generators: Option<Vec<String>>,
    pub parametrization: Option<Vec<String>>,
    pub dimension: Option<usize>,
}

fn string_list(doc: &Value, key: &str) -> Result<Option<Vec<String>>, CliError> {
    match doc.get(key) {
        None => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| CliError::Input(format!("{key}: expected strings"))))
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
        Some(_) => Err(CliError::Input(format!("{key}: expected a list of strings"))),
    }
}

impl InputDoc {
    pub fn from_text(name: &str, text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("{name}: line {}, column {}: {e}", e.line(), e.column())))?;
        let variables = string_list(&doc, "variables")?.ok_or_else(|| CliError::Input(format!("{name}: missing \"variables\"")))?;
        let generators = string_list(&doc, "generators")?;
        let parametrization = string_list(&doc, "parametrization")?;
        if generators.is_some() == parametrization.is_some() {
            return Err(CliError::Input(format!("{name}: give exactly one of \"generators\" and \"parametrization\"")));
        }
        let dimension = match doc.get("dimension") {
            None => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| CliError::Input(format!("{name}: dimension must be an integer")))? as usize),
        };
        Ok(InputDoc { name: name.to_string(), field: FieldSpec::parse(doc.get("field"))?, variables, generators, parametrization, dimension })
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
        Self::from_text(&name, &text)
    }

    /// Parses `texts` in the user's variables and renames them positionally
    /// into `target`.
    fn polys<F: Field>(&self, field: &F, texts: &[String], target: &Arc<PolyRing<F>>, what: &str) -> Result<Vec<MultiPoly<F>>, CliError> {
        if self.variables.len() != target.nvars() {
            return Err(CliError::Input(format!("expected {} variables, got {}", target.nvars(), self.variables.len())));
        }
        let user = PolyRing::from_names(field, self.variables.clone());
        let images: Vec<MultiPoly<F>> = (0..target.nvars()).map(|i| MultiPoly::var(target, i)).collect();
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let g = parse_poly(&user, t).map_err(|e| CliError::Input(format!("{} {what} {}: {e}", self.name, i + 1)))?;
                Ok(g.substitute(target, &images))
            })
            .collect()
    }

    /// Chart form: the last variable is the line coordinate.
    pub fn chart_generators<F: Field>(&self, field: &F) -> Result<(usize, Vec<MultiPoly<F>>), CliError> {
        let texts = self.generators.as_ref().ok_or_else(|| CliError::Input("chart input needs \"generators\"".into()))?;
        let n = self.variables.len();
        if n < 2 {
            return Err(CliError::Input("chart input needs at least two variables".into()));
        }
        Ok((n, self.polys(field, texts, &ambient_ring(field, n), "generator")?))
    }

    /// Projective input over the rationals (prime-field coefficients are
    /// read as integers and reduced later).
    pub fn variety(&self) -> Result<Variety, CliError> {
        let q = Rationals;
        if let Some(texts) = &self.generators {
            let n = self.variables.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| CliError::Input("too few variables".into()))?;
            let gens = self.polys(&q, texts, &projective_ring(&q, n), "generator")?;
            let x = ImplicitVariety::new(&self.name, n, gens, self.dimension).map_err(|e| CliError::Input(e.to_string()))?;
            return Ok(Variety::Implicit(x));
        }
        let texts = self.parametrization.as_ref().expect("checked on load");
        let m = self.variables.len() - 1;
        let comps = self.polys(&q, texts, &gallery::source_ring(&q, m), "component")?;
        Ok(Variety::Parametric(ParametricVariety::new(&self.name, comps).map_err(|e| CliError::Input(e.to_string()))?))
    }
}

/// `--builtin` or `--input`, as recorded in reports.
#[derive(Debug, Clone)]
pub enum Source {
    Builtin(GalleryEntry),
    File(InputDoc),
}

impl Source {
    pub fn load(builtin: Option<&str>, input: Option<&Path>) -> Result<Self, CliError> {
        match (builtin, input) {
            (Some(b), None) => Ok(Source::Builtin(gallery::builtin(b)?)),
            (None, Some(p)) => Ok(Source::File(InputDoc::from_path(p)?)),
            _ => Err(CliError::Usage("give exactly one of --builtin and --input".into())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Source::Builtin(e) => e.name.clone(),
            Source::File(d) => d.name.clone(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Source::Builtin(_) => FieldSpec::Rationals,
            Source::File(d) => d.field,
        }
    }

    pub fn log(&self) -> Vec<String> {
        match self {
            Source::Builtin(e) => e.log.clone(),
            Source::File(_) => Vec::new(),
        }
    }

    pub fn variety(&self) -> Result<Variety, CliError> {
        match self {
            Source::Builtin(e) => Ok(e.variety.clone()),
            Source::File(d) => d.variety(),
        }
    }

    pub fn chart(&self) -> Result<ChartInput, CliError> {
        match self {
            Source::Builtin(e) => e
                .chart
                .clone()
                .map(ChartInput::Builtin)
                .ok_or_else(|| CliError::Input(format!("{} has no chart-form presentation", e.name))),
            Source::File(d) => Ok(ChartInput::File(d.clone())),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ChartInput {
    Builtin(ChartForm),
    File(InputDoc),
}

impl ChartInput {
    pub fn generators<F: Field>(&self, field: &F) -> Result<(usize, Vec<MultiPoly<F>>), CliError> {
        match self {
            ChartInput::File(d) => d.chart_generators(field),
            ChartInput::Builtin(c) => {
                let ring = ambient_ring(field, c.n);
                let gens = c
                    .generators
                    .iter()
                    .map(|g| g.try_map_coeffs(&ring, |r| field.from_rational(r)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::Input(e.to_string()))?;
                Ok((c.n, gens))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names() {
        assert_eq!(FieldSpec::parse(Some(&Value::String("GF(7)".into()))).unwrap(), FieldSpec::Prime(7));
        assert_eq!(FieldSpec::parse(Some(&serde_json::json!(11))).unwrap(), FieldSpec::Prime(11));
        assert_eq!(FieldSpec::parse(None).unwrap(), FieldSpec::Rationals);
        assert!(FieldSpec::parse(Some(&Value::String("GF(8)".into()))).is_err());
    }

    #[test]
    fn parse_error_has_position() {
        let doc = InputDoc::from_text("t", r#"{"variables": ["a", "b"], "generators": ["a - b^"]}"#).unwrap();
        let err = doc.chart_generators(&Rationals).unwrap_err().to_string();
        assert!(err.contains("generator 1") && err.contains("line 1, column"), "{err}");
        let err = InputDoc::from_text("t", "{\n \"variables\": [").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn variables_are_renamed() {
        let doc = InputDoc::from_text("c", r#"{"variables": ["y", "t"], "generators": ["y - t^2"], "field": "QQ"}"#).unwrap();
        let (n, g) = doc.chart_generators(&Rationals).unwrap();
        assert_eq!((n, g[0].to_text()), (2, "-z^2 + x1".to_string()));
    }
}
