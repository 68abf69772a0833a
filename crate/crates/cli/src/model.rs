//! Model files: TOML documents describing a gauge group representation, a
//! Higgs potential and the auxiliary data used by the subcommands.
//!
//! The dialect is documented in `docs/formats.md`. Every error carries the
//! section and field it refers to and, when the parser knows it, a line.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use ssb_core::chiral::{Representation, TripleProduct};
use ssb_core::higgs::{find_vacuum, potential_registry, HiggsModel, VacuumOptions, DEFAULT_TOL_VAC};
use ssb_core::lattice::{Grid, Metric};
use ssb_core::lie::{FactorLabel, GeneratorSet, DEFAULT_TOL_ALG};
use ssb_core::linalg::{c, CMat, CVec};
use ssb_core::SsbError;

/// Name under which a Yukawa slot refers to the Higgs multiplet of `[algebra]`.
pub const HIGGS_REPRESENTATION: &str = "higgs";

const SKEW_TOL: f64 = 1e-10;

type Complex = [f64; 2];
type RawMatrix = Vec<Vec<Complex>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub section: String,
    pub field: String,
    pub line: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.section)?;
        if !self.field.is_empty() {
            write!(f, " {}", self.field)?;
        }
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("syntax error{}: {message}", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Syntax { line: Option<usize>, message: String },

    #[error("missing [{0}]")]
    MissingSection(&'static str),

    #[error("{location}: {message}")]
    Invalid { location: Location, message: String },
}

/// All errors found in one document, in the order they were detected.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ModelErrors(pub Vec<ModelError>);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    algebra: Option<RawAlgebra>,
    potential: Option<Spanned<BTreeMap<String, toml::Value>>>,
    vacuum: Option<RawVacuum>,
    #[serde(default)]
    representations: BTreeMap<String, RawRepresentation>,
    yukawa: Option<Spanned<RawYukawa>>,
    grid: Option<Spanned<RawGrid>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    n: usize,
    r: usize,
    generators: Spanned<Vec<Spanned<RawMatrix>>>,
    #[serde(default)]
    factors: Vec<Spanned<RawFactor>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    label: String,
    coupling: f64,
    generators: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVacuum {
    vector: Option<Spanned<Vec<Complex>>>,
    seed: Option<Spanned<Vec<Complex>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepresentation {
    generators: Vec<Spanned<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawYukawa {
    slots: [String; 3],
    conjugate: [bool; 3],
    shape: [usize; 3],
    tensor: Vec<Complex>,
    g_y: f64,
    higgs_slot: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    dim: usize,
    shape: Vec<usize>,
    h: f64,
    #[serde(default)]
    metric: Option<String>,
}

/// How the vacuum is chosen: pinned in the file, or found from a seed.
#[derive(Debug, Clone, PartialEq)]
pub enum VacuumSpec {
    Pinned(CVec),
    Seed(CVec),
}

#[derive(Debug, Clone)]
pub struct YukawaSpec {
    pub tensor: TripleProduct,
    pub slots: [String; 3],
    pub g_y: f64,
    pub higgs_slot: usize,
}

/// A validated model file.
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: HiggsModel,
    pub vacuum: VacuumSpec,
    pub representations: BTreeMap<String, Representation>,
    pub yukawa: Option<YukawaSpec>,
    pub grid: Option<Grid>,
}

/// Seed `(0.1, 0.3, 0.5, ...)` used when the file pins neither a vacuum nor a seed.
pub fn default_vacuum_seed(n: usize) -> CVec {
    CVec::from_fn(n, |i, _| c(0.1 + 0.2 * i as f64, 0.0))
}

impl ModelFile {
    /// The pinned vacuum, or the solver output from the file seed.
    pub fn resolve_vacuum(&self) -> ssb_core::Result<CVec> {
        match &self.vacuum {
            VacuumSpec::Pinned(v) => Ok(v.clone()),
            VacuumSpec::Seed(s) => Ok(find_vacuum(&self.model, s, VacuumOptions::default())?.vacuum),
        }
    }

    /// Representation named in a Yukawa slot.
    pub fn representation(&self, name: &str) -> Option<Representation> {
        match self.representations.get(name) {
            Some(rep) => Some(rep.clone()),
            None if name == HIGGS_REPRESENTATION => Representation::from_generator_set(&self.model.gens).ok(),
            None => None,
        }
    }
}

struct Ctx<'a> {
    text: &'a str,
    errors: Vec<ModelError>,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn push(&mut self, section: &str, field: impl Into<String>, span: Option<std::ops::Range<usize>>, message: impl Into<String>) {
        let line = span.map(|s| self.line(s.start));
        self.errors.push(ModelError::Invalid {
            location: Location {
                section: section.to_string(),
                field: field.into(),
                line,
            },
            message: message.into(),
        });
    }

    fn matrix(&mut self, section: &str, field: &str, raw: &Spanned<RawMatrix>, dim: usize) -> Option<CMat> {
        let rows = raw.get_ref();
        if rows.len() != dim {
            self.push(section, field, Some(raw.span()), format!("expected {dim} rows, found {}", rows.len()));
            return None;
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                self.push(
                    section,
                    format!("{field} row {i}"),
                    Some(raw.span()),
                    format!("expected {dim} entries, found {}", row.len()),
                );
                return None;
            }
        }
        let m = CMat::from_fn(dim, dim, |i, j| c(rows[i][j][0], rows[i][j][1]));
        let skew = (&m + m.adjoint()).norm();
        if skew > SKEW_TOL * (1.0 + m.norm()) {
            self.push(section, field, Some(raw.span()), format!("not skew-Hermitian (|X + X^H| = {skew:.3e})"));
            return None;
        }
        Some(m)
    }

    fn vector(&mut self, section: &str, field: &str, raw: &Spanned<Vec<Complex>>, n: usize) -> Option<CVec> {
        let v = raw.get_ref();
        if v.len() != n {
            self.push(section, field, Some(raw.span()), format!("expected {n} components, found {}", v.len()));
            return None;
        }
        Some(CVec::from_iterator(n, v.iter().map(|z| c(z[0], z[1]))))
    }
}

fn syntax(text: &str, err: toml::de::Error) -> ModelErrors {
    let line = err.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    ModelErrors(vec![ModelError::Syntax {
        line,
        message: err.message().to_string(),
    }])
}

/// Parses and validates a model document.
pub fn parse_model_file(text: &str) -> Result<ModelFile, ModelErrors> {
    let raw: RawModel = toml::from_str(text).map_err(|e| syntax(text, e))?;
    let mut ctx = Ctx { text, errors: Vec::new() };

    let Some(algebra) = raw.algebra else {
        return Err(ModelErrors(vec![ModelError::MissingSection("algebra")]));
    };
    let Some(potential) = raw.potential else {
        return Err(ModelErrors(vec![ModelError::MissingSection("potential")]));
    };

    let gens = parse_algebra(&mut ctx, &algebra);
    let potential_span = potential.span();
    let potential = parse_potential(&mut ctx, potential.get_ref(), potential_span);

    let (Some(gens), Some(potential)) = (gens, potential) else {
        return Err(ModelErrors(ctx.errors));
    };
    let n = gens.n();
    let r = gens.r();

    let vacuum = match &raw.vacuum {
        Some(RawVacuum { vector: Some(_), seed: Some(s) }) => {
            ctx.push("vacuum", "seed", Some(s.span()), "give either `vector` or `seed`, not both");
            None
        }
        Some(RawVacuum { vector: Some(v), .. }) => ctx.vector("vacuum", "vector", v, n).map(VacuumSpec::Pinned),
        Some(RawVacuum { seed: Some(s), .. }) => ctx.vector("vacuum", "seed", s, n).map(VacuumSpec::Seed),
        _ => Some(VacuumSpec::Seed(default_vacuum_seed(n))),
    };

    let mut model = HiggsModel::new(gens, potential);
    if let Some(VacuumSpec::Pinned(v)) = &vacuum {
        let zero = v.iter().all(|z| z.norm() == 0.0);
        if !zero {
            match model.clone().with_vacuum(v.clone(), DEFAULT_TOL_VAC) {
                Ok(m) => model = m,
                Err(e) => {
                    let span = raw.vacuum.as_ref().and_then(|s| s.vector.as_ref()).map(|v| v.span());
                    ctx.push("vacuum", "vector", span, e.to_string());
                }
            }
        }
    }

    let mut representations = BTreeMap::new();
    for (name, rep) in &raw.representations {
        let section = format!("representations.{name}");
        if rep.generators.len() != r {
            ctx.push(&section, "generators", None, format!("expected {r} generators, found {}", rep.generators.len()));
            continue;
        }
        let dim = rep.generators[0].get_ref().len();
        let mats: Option<Vec<CMat>> = rep
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| ctx.matrix(&section, &format!("generators[{i}]"), m, dim))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        if let Some(mats) = mats {
            match Representation::new(mats) {
                Ok(rep) => {
                    representations.insert(name.clone(), rep);
                }
                Err(e) => ctx.push(&section, "generators", None, e.to_string()),
            }
        }
    }

    let grid = raw.grid.as_ref().and_then(|g| parse_grid(&mut ctx, g));

    let mut file = ModelFile {
        model,
        vacuum: vacuum.unwrap_or(VacuumSpec::Seed(default_vacuum_seed(n))),
        representations,
        yukawa: None,
        grid,
    };
    if let Some(y) = &raw.yukawa {
        file.yukawa = parse_yukawa(&mut ctx, y, &file);
    }

    if ctx.errors.is_empty() {
        Ok(file)
    } else {
        Err(ModelErrors(ctx.errors))
    }
}

fn parse_algebra(ctx: &mut Ctx, a: &RawAlgebra) -> Option<GeneratorSet> {
    let list = a.generators.get_ref();
    if a.n == 0 {
        ctx.push("algebra", "n", None, "must be positive");
        return None;
    }
    if list.len() != a.r {
        ctx.push("algebra", "generators", Some(a.generators.span()), format!("expected r = {} generators, found {}", a.r, list.len()));
        return None;
    }
    let before = ctx.errors.len();
    let mats: Vec<Option<CMat>> = list
        .iter()
        .enumerate()
        .map(|(i, m)| ctx.matrix("algebra", &format!("generators[{i}]"), m, a.n))
        .collect();
    let mut factors = Vec::new();
    for (k, f) in a.factors.iter().enumerate() {
        let raw = f.get_ref();
        if !(raw.coupling > 0.0) {
            ctx.push("algebra", format!("factors[{k}].coupling"), Some(f.span()), format!("must be positive, got {}", raw.coupling));
        }
        if let Some(bad) = raw.generators.iter().find(|&&i| i >= a.r) {
            ctx.push("algebra", format!("factors[{k}].generators"), Some(f.span()), format!("index {bad} out of range"));
        }
        factors.push(FactorLabel {
            label: raw.label.clone(),
            coupling: raw.coupling,
            generators: raw.generators.clone(),
        });
    }
    if ctx.errors.len() > before {
        return None;
    }
    let gens = mats.into_iter().collect::<Option<Vec<_>>>()?;
    match GeneratorSet::new(gens, factors) {
        Ok(gs) if gs.closure_defect() > DEFAULT_TOL_ALG => {
            ctx.push("algebra", "generators", Some(a.generators.span()), SsbError::ClosureFailure { defect: gs.closure_defect() }.to_string());
            None
        }
        Ok(gs) => Some(gs),
        Err(e) => {
            ctx.push("algebra", "", None, e.to_string());
            None
        }
    }
}

fn parse_potential(
    ctx: &mut Ctx,
    table: &BTreeMap<String, toml::Value>,
    span: std::ops::Range<usize>,
) -> Option<std::sync::Arc<dyn ssb_core::higgs::Potential>> {
    let kind = match table.get("kind") {
        None => "quartic".to_string(),
        Some(toml::Value::String(s)) => s.clone(),
        Some(_) => {
            ctx.push("potential", "kind", Some(span), "must be a string");
            return None;
        }
    };
    let mut params = BTreeMap::new();
    for (key, value) in table.iter().filter(|(k, _)| k.as_str() != "kind") {
        match value {
            toml::Value::Float(x) => {
                params.insert(key.clone(), *x);
            }
            toml::Value::Integer(i) => {
                params.insert(key.clone(), *i as f64);
            }
            _ => {
                ctx.push("potential", key.as_str(), Some(span.clone()), "must be a number");
                return None;
            }
        }
    }
    let built = potential_registry().get(&kind).and_then(|k| k.build(&params));
    match built {
        Ok(p) => Some(p),
        Err(SsbError::InvalidParameter { name, reason }) => {
            ctx.push("potential", name, Some(span), reason);
            None
        }
        Err(e) => {
            ctx.push("potential", "kind", Some(span), e.to_string());
            None
        }
    }
}

fn parse_grid(ctx: &mut Ctx, raw: &Spanned<RawGrid>) -> Option<Grid> {
    let g = raw.get_ref();
    let span = Some(raw.span());
    if g.shape.len() != g.dim {
        ctx.push("grid", "shape", span, format!("expected {} extents, found {}", g.dim, g.shape.len()));
        return None;
    }
    let metric = match g.metric.as_deref().map(str::parse::<Metric>) {
        None => Metric::Euclidean,
        Some(Ok(m)) => m,
        Some(Err(e)) => {
            ctx.push("grid", "metric", span, e.to_string());
            return None;
        }
    };
    match Grid::new(g.shape.clone(), g.h, metric) {
        Ok(grid) => Some(grid),
        Err(e) => {
            ctx.push("grid", "", span, e.to_string());
            None
        }
    }
}

fn parse_yukawa(ctx: &mut Ctx, raw: &Spanned<RawYukawa>, file: &ModelFile) -> Option<YukawaSpec> {
    let y = raw.get_ref();
    let span = Some(raw.span());
    let before = ctx.errors.len();
    for (k, name) in y.slots.iter().enumerate() {
        match file.representation(name) {
            None => ctx.push("yukawa", format!("slots[{k}]"), span.clone(), format!("unknown representation `{name}`")),
            Some(rep) if rep.dim() != y.shape[k] => ctx.push(
                "yukawa",
                format!("shape[{k}]"),
                span.clone(),
                format!("representation `{name}` has dimension {}, shape says {}", rep.dim(), y.shape[k]),
            ),
            Some(_) => {}
        }
    }
    if y.higgs_slot > 2 {
        ctx.push("yukawa", "higgs_slot", span.clone(), "must be 0, 1 or 2");
    } else if y.shape[y.higgs_slot] != file.model.gens.n() {
        ctx.push("yukawa", "higgs_slot", span.clone(), "slot dimension differs from the Higgs multiplet");
    }
    if !(y.g_y > 0.0) {
        ctx.push("yukawa", "g_y", span.clone(), format!("must be positive, got {}", y.g_y));
    }
    if ctx.errors.len() > before {
        return None;
    }
    let data = y.tensor.iter().map(|z| c(z[0], z[1])).collect();
    match TripleProduct::new(y.shape, data, y.conjugate) {
        Ok(tensor) => Some(YukawaSpec {
            tensor,
            slots: y.slots.clone(),
            g_y: y.g_y,
            higgs_slot: y.higgs_slot,
        }),
        Err(e) => {
            ctx.push("yukawa", "tensor", span, e.to_string());
            None
        }
    }
}
