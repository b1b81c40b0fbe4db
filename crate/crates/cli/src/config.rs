//! Experiment configuration: JSON schema, grid expansion and validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use expanse_core::maps::{MapModel, PiecewiseLinear, ShiftMode};
use expanse_core::measures::{sample_measure, AtomicMeasure, Generator, SNAP_TOLERANCE};
use expanse_core::spaces::{Point, PointCloud, SpaceModel};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub space: SpaceModel,
    #[serde(default)]
    pub map: Option<MapSpec>,
    pub cloud: CloudSpec,
    #[serde(default)]
    pub measures: BTreeMap<String, MeasureSpec>,
    pub operation: Operation,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum Operation {
    #[serde(rename = "exponent-map")]
    ExponentMap,
    #[serde(rename = "exponent-measure")]
    ExponentMeasure,
    #[serde(rename = "capacity")]
    Capacity,
    #[serde(rename = "entropy")]
    Entropy,
    #[serde(rename = "block-entropy")]
    BlockEntropy,
    #[serde(rename = "verify-A")]
    VerifyA,
    #[serde(rename = "verify-B")]
    VerifyB,
    #[serde(rename = "verify-C")]
    VerifyC,
    #[serde(rename = "verify-laws")]
    VerifyLaws,
    #[serde(rename = "contraction-chain")]
    ContractionChain,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::ExponentMap => "exponent-map",
            Operation::ExponentMeasure => "exponent-measure",
            Operation::Capacity => "capacity",
            Operation::Entropy => "entropy",
            Operation::BlockEntropy => "block-entropy",
            Operation::VerifyA => "verify-A",
            Operation::VerifyB => "verify-B",
            Operation::VerifyC => "verify-C",
            Operation::VerifyLaws => "verify-laws",
            Operation::ContractionChain => "contraction-chain",
        }
    }

    fn needs_map(self) -> bool {
        !matches!(self, Operation::Capacity | Operation::BlockEntropy)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Real(f64),
    Word(String),
    Tuple(Vec<PointSpec>),
}

impl PointSpec {
    pub fn to_point(&self) -> Result<Point, String> {
        Ok(match self {
            PointSpec::Real(v) => Point::Real(*v),
            PointSpec::Word(s) => Point::Word(
                s.chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| format!("word {s:?} is not a digit string")))
                    .collect::<Result<_, _>>()?,
            ),
            PointSpec::Tuple(items) => Point::Tuple(items.iter().map(PointSpec::to_point).collect::<Result<_, _>>()?),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    TimesM { m: u32 },
    Rotation { alpha: f64 },
    Tent { slope: f64 },
    PiecewiseLinear { breakpoints: Vec<f64>, slopes: Vec<f64>, start: f64 },
    Contraction { factor: f64 },
    Constant { point: PointSpec },
    Shift {
        #[serde(default = "default_shift_mode")]
        mode: ShiftMode,
    },
    LookupTable { entries: Vec<(PointSpec, PointSpec)> },
}

fn default_shift_mode() -> ShiftMode {
    ShiftMode::Pad
}

impl MapSpec {
    pub fn build(&self) -> Result<MapModel, String> {
        Ok(match self {
            MapSpec::TimesM { m } => MapModel::TimesM(*m),
            MapSpec::Rotation { alpha } => MapModel::Rotation(*alpha),
            MapSpec::Tent { slope } => MapModel::Tent(*slope),
            MapSpec::PiecewiseLinear { breakpoints, slopes, start } => MapModel::PiecewiseLinear(PiecewiseLinear {
                breakpoints: breakpoints.clone(),
                slopes: slopes.clone(),
                start: *start,
            }),
            MapSpec::Contraction { factor } => MapModel::Contraction(*factor),
            MapSpec::Constant { point } => MapModel::ConstantMap(point.to_point()?),
            MapSpec::Shift { mode } => MapModel::Shift(*mode),
            MapSpec::LookupTable { entries } => MapModel::LookupTable(
                entries.iter().map(|(a, b)| Ok((a.to_point()?, b.to_point()?))).collect::<Result<_, String>>()?,
            ),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudSpec {
    #[serde(default)]
    pub generator: Option<Generator>,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Weighted points in the measure CSV format; the cloud is the listed points.
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Uniform,
    Dirac {
        #[serde(default)]
        index: Option<usize>,
        #[serde(default)]
        point: Option<PointSpec>,
    },
    Csv { path: PathBuf },
    Combine { terms: Vec<CombineTerm> },
    Restrict { measure: String, indices: Vec<usize> },
    Witness {
        #[serde(default)]
        lambda: Option<f64>,
        #[serde(default)]
        terms: Option<usize>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineTerm {
    pub weight: f64,
    pub measure: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "default_measure")]
    pub measure: String,
    #[serde(default)]
    pub other: Option<String>,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default)]
    pub family: Option<Vec<String>>,
    #[serde(default = "default_diracs")]
    pub diracs: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_centers")]
    pub centers: usize,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_floor_factor")]
    pub floor_factor: f64,
    #[serde(default = "default_true")]
    pub enforce_floors: bool,
    #[serde(default = "default_entropy_delta")]
    pub entropy_delta: f64,
    #[serde(default)]
    pub saturation_rate: Option<f64>,
    #[serde(default)]
    pub laws: Option<Vec<Law>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Convex,
    Monotone,
    Isometry,
}

fn default_measure() -> String {
    "cloud".into()
}
fn default_t() -> f64 {
    0.5
}
fn default_diracs() -> usize {
    8
}
fn default_n_max() -> usize {
    18
}
fn default_centers() -> usize {
    32
}
fn default_floor_factor() -> f64 {
    expanse_core::exponents::DEFAULT_FLOOR_FACTOR
}
fn default_true() -> bool {
    true
}
fn default_entropy_delta() -> f64 {
    expanse_core::entropy::DEFAULT_DELTA
}

impl Default for Params {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Generated(GridGenerator),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridGenerator {
    pub start: f64,
    #[serde(default)]
    pub ratio: Option<f64>,
    #[serde(default)]
    pub step: Option<f64>,
    pub count: usize,
}

impl GridSpec {
    pub fn expand(&self) -> Result<Vec<f64>, String> {
        let values = match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Generated(g) => {
                if g.count == 0 {
                    return Err("count must be >= 1".into());
                }
                match (g.ratio, g.step) {
                    (Some(r), None) => {
                        if !(r > 0.0 && r.is_finite()) {
                            return Err(format!("ratio {r} must be positive"));
                        }
                        (0..g.count).map(|i| g.start * r.powi(i as i32)).collect()
                    }
                    (None, Some(s)) => (0..g.count).map(|i| g.start + s * i as f64).collect(),
                    _ => return Err("give exactly one of ratio or step".into()),
                }
            }
        };
        if values.is_empty() {
            return Err("grid is empty".into());
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(format!("grid value {v} is not finite"));
        }
        Ok(values)
    }

    fn expand_positive(&self) -> Result<Vec<f64>, String> {
        let v = self.expand()?;
        match v.iter().find(|x| **x <= 0.0) {
            Some(x) => Err(format!("grid value {x} must be positive")),
            None => Ok(v),
        }
    }

    fn expand_counts(&self) -> Result<Vec<usize>, String> {
        self.expand()?
            .into_iter()
            .map(|x| {
                if x >= 1.0 && x.fract() == 0.0 {
                    Ok(x as usize)
                } else {
                    Err(format!("grid value {x} must be a positive integer"))
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default)]
    pub epsilon: Option<GridSpec>,
    #[serde(default)]
    pub beta: Option<GridSpec>,
    #[serde(default)]
    pub gamma: Option<GridSpec>,
    #[serde(default)]
    pub delta: Option<GridSpec>,
    #[serde(default)]
    pub n: Option<GridSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_attainment")]
    pub attainment: f64,
    #[serde(default = "default_entropy_tolerance")]
    pub entropy: f64,
    #[serde(default = "default_decay_slack")]
    pub decay_slack: f64,
}

fn default_attainment() -> f64 {
    expanse_core::verify::DEFAULT_ATTAINMENT_TOLERANCE
}
fn default_entropy_tolerance() -> f64 {
    expanse_core::verify::DEFAULT_ENTROPY_TOLERANCE
}
fn default_decay_slack() -> f64 {
    expanse_core::verify::DEFAULT_DECAY_SLACK
}

impl Default for Tolerances {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// Expanded grids.
#[derive(Clone, Debug, Default)]
pub struct ExpandedGrids {
    pub epsilon: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub n: Vec<usize>,
}

/// A validated configuration with everything built.
pub struct Plan {
    pub config: ExperimentConfig,
    pub name: String,
    pub source: PathBuf,
    pub seed: u64,
    pub map: Option<MapModel>,
    pub cloud: Arc<PointCloud>,
    pub measures: BTreeMap<String, AtomicMeasure>,
    pub grids: ExpandedGrids,
}

impl Plan {
    pub fn map(&self) -> &MapModel {
        self.map.as_ref().expect("validated")
    }

    pub fn measure(&self, name: &str) -> &AtomicMeasure {
        &self.measures[name]
    }
}

pub fn read_config(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(path, "", format!("cannot read: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(path, "", format!("invalid JSON: {e}")))
}

pub fn parse_config(path: &Path, value: serde_json::Value) -> Result<ExperimentConfig, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        CliError::config(path, if field == "." { "" } else { &field }, e.into_inner().to_string())
    })
}

fn resolve_relative(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// Builds every object the run needs and checks the operation's
/// preconditions, without running any estimator.
pub fn plan(source: &Path, config: ExperimentConfig, seed_override: Option<u64>) -> Result<Plan, CliError> {
    let cfg = |field: &str, msg: String| CliError::config(source, field, msg);
    let pre = |field: &str, msg: String| CliError::precondition(source, field, msg);
    let seed = seed_override.unwrap_or(config.seed);
    let name = match &config.name {
        Some(n) => n.clone(),
        None => source.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "experiment".into()),
    };
    if name.is_empty() || name.contains(['/', '\\']) {
        return Err(cfg("name", format!("{name:?} is not usable as a file name")));
    }
    config.space.validate().map_err(|e| cfg("space", e.to_string()))?;

    let map = match &config.map {
        Some(spec) => {
            let map = spec.build().map_err(|e| cfg("map", e))?;
            map.validate(&config.space).map_err(|e| cfg("map", e.to_string()))?;
            Some(map)
        }
        None if config.operation.needs_map() => {
            return Err(cfg("map", format!("operation {} needs a map", config.operation.as_str())))
        }
        None => None,
    };

    let (cloud, cloud_measure) = build_cloud(source, &config, seed)?;
    let mut measures = BTreeMap::new();
    measures.insert("cloud".to_string(), cloud_measure);
    if config.measures.contains_key("cloud") {
        return Err(cfg("measures.cloud", "the name \"cloud\" is reserved for the cloud's own measure".into()));
    }

    let grids = expand_grids(source, &config)?;
    let opts = expanse_core::exponents::ProfileOptions { floor_factor: config.params.floor_factor };

    // measures may refer to each other; resolve in dependency order
    let mut pending: Vec<&String> = config.measures.keys().collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut still = Vec::new();
        for key in pending {
            let field = format!("measures.{key}");
            match build_measure(source, &field, &config.measures[key], &cloud, &measures, map.as_ref(), &grids, &opts)?
            {
                Some(mu) => {
                    measures.insert(key.clone(), mu);
                }
                None => still.push(key),
            }
        }
        if still.len() == before {
            return Err(cfg(
                &format!("measures.{}", still[0]),
                "refers to an unknown measure or forms a cycle".into(),
            ));
        }
        pending = still;
    }

    let p = &config.params;
    let known = |field: &str, name: &str| {
        if measures.contains_key(name) {
            Ok(())
        } else {
            Err(cfg(field, format!("unknown measure {name:?}")))
        }
    };
    known("params.measure", &p.measure)?;
    if let Some(o) = &p.other {
        known("params.other", o)?;
    }
    if let Some(f) = &p.family {
        for (i, n) in f.iter().enumerate() {
            known(&format!("params.family[{i}]"), n)?;
        }
    }
    if p.floor_factor.is_nan() || p.floor_factor <= 0.0 {
        return Err(cfg("params.floor_factor", "must be positive".into()));
    }

    let floor = opts.floor(&cloud);
    let require = |field: &str, present: bool| {
        if present {
            Ok(())
        } else {
            Err(cfg(field, format!("operation {} needs this grid", config.operation.as_str())))
        }
    };
    use Operation::*;
    let op = config.operation;
    if matches!(op, ExponentMap | ExponentMeasure | VerifyA | VerifyB | VerifyC | VerifyLaws | ContractionChain) {
        require("grids.epsilon", !grids.epsilon.is_empty())?;
        if let Some(e) = grids.epsilon.iter().find(|&&e| e < floor) {
            return Err(pre(
                "grids.epsilon",
                format!("epsilon {e} is below the resolution floor {floor}"),
            ));
        }
    }
    if matches!(op, Capacity | VerifyC) {
        require("grids.beta", !grids.beta.is_empty())?;
        require("grids.delta", !grids.delta.is_empty())?;
        if let Some(d) = grids.delta.iter().find(|d| !(**d >= 0.0 && **d < 1.0)) {
            return Err(cfg("grids.delta", format!("delta {d} must lie in [0, 1)")));
        }
        if p.enforce_floors {
            let scale_floor = 2.0 * cloud.resolution();
            let admissible = grids.beta.iter().filter(|&&b| b >= scale_floor).count();
            if admissible < 3 {
                return Err(pre(
                    "grids.beta",
                    format!("only {admissible} scales lie above the scale floor {scale_floor}; need 3"),
                ));
            }
        }
    }
    if matches!(op, Entropy | VerifyC) {
        require("grids.gamma", !grids.gamma.is_empty())?;
        require("grids.n", !grids.n.is_empty())?;
        if !(p.entropy_delta >= 0.0 && p.entropy_delta < 1.0) {
            return Err(cfg("params.entropy_delta", format!("{} must lie in [0, 1)", p.entropy_delta)));
        }
    }
    if op == BlockEntropy {
        require("grids.n", !grids.n.is_empty())?;
        if !matches!(config.space, SpaceModel::SymbolSpace { .. }) {
            return Err(cfg("space", "block entropy needs a symbol space".into()));
        }
    }
    if op == ContractionChain {
        require("grids.n", !grids.n.is_empty())?;
        if p.gamma.is_none() {
            return Err(cfg("params.gamma", "contraction-chain needs gamma".into()));
        }
    }
    if op == VerifyB && (p.n_max == 0 || p.centers == 0) {
        return Err(cfg("params", "n_max and centers must be >= 1".into()));
    }
    if op == VerifyLaws {
        let laws = p.laws.clone().unwrap_or_else(|| vec![Law::Convex, Law::Monotone, Law::Isometry]);
        if !(p.t > 0.0 && p.t < 1.0) && laws.contains(&Law::Convex) {
            return Err(cfg("params.t", format!("t = {} must lie strictly between 0 and 1", p.t)));
        }
        if laws.contains(&Law::Monotone) {
            let other = p.other.as_deref().unwrap_or("cloud");
            let outer = measures[other].support();
            if measures[&p.measure].support().iter().any(|i| outer.binary_search(i).is_err()) {
                return Err(pre(
                    "params.other",
                    format!("support of {:?} is not contained in the support of {other:?}", p.measure),
                ));
            }
        }
    }

    Ok(Plan { config, name, source: source.to_path_buf(), seed, map, cloud, measures, grids })
}

fn build_cloud(
    source: &Path,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(Arc<PointCloud>, AtomicMeasure), CliError> {
    let c = &config.cloud;
    match (&c.generator, &c.csv) {
        (Some(g), None) => {
            if matches!(g, Generator::UniformIid | Generator::GridUniform) && c.n == 0 {
                return Err(CliError::config(source, "cloud.n", "this generator needs n >= 1"));
            }
            sample_measure(&config.space, g, c.n, c.seed.unwrap_or(seed))
                .map_err(|e| CliError::config(source, "cloud.generator", e.to_string()))
        }
        (None, Some(path)) => {
            let path = resolve_relative(source, path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::config(source, "cloud.csv", format!("cannot read {}: {e}", path.display())))?;
            let mu = AtomicMeasure::from_csv(&config.space, &text)
                .map_err(|e| CliError::config(source, "cloud.csv", e.to_string()))?;
            Ok((mu.cloud().clone(), mu))
        }
        _ => Err(CliError::config(source, "cloud", "give exactly one of generator or csv")),
    }
}

fn expand_grids(source: &Path, config: &ExperimentConfig) -> Result<ExpandedGrids, CliError> {
    let g = &config.grids;
    let real = |field: &str, spec: &Option<GridSpec>, positive: bool| -> Result<Vec<f64>, CliError> {
        match spec {
            None => Ok(Vec::new()),
            Some(s) => if positive { s.expand_positive() } else { s.expand() }
                .map_err(|e| CliError::config(source, field, e)),
        }
    };
    let epsilon = real("grids.epsilon", &g.epsilon, true)?;
    if let Some(w) = epsilon.windows(2).find(|w| w[1] <= w[0]) {
        return Err(CliError::config(
            source,
            "grids.epsilon",
            format!("grid must be strictly increasing ({} then {})", w[0], w[1]),
        ));
    }
    Ok(ExpandedGrids {
        epsilon,
        beta: real("grids.beta", &g.beta, true)?,
        gamma: real("grids.gamma", &g.gamma, true)?,
        delta: real("grids.delta", &g.delta, false)?,
        n: match &g.n {
            None => Vec::new(),
            Some(s) => s.expand_counts().map_err(|e| CliError::config(source, "grids.n", e))?,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn build_measure(
    source: &Path,
    field: &str,
    spec: &MeasureSpec,
    cloud: &Arc<PointCloud>,
    built: &BTreeMap<String, AtomicMeasure>,
    map: Option<&MapModel>,
    grids: &ExpandedGrids,
    opts: &expanse_core::exponents::ProfileOptions,
) -> Result<Option<AtomicMeasure>, CliError> {
    let err = |msg: String| CliError::config(source, field, msg);
    let mu = match spec {
        MeasureSpec::Uniform => AtomicMeasure::uniform(cloud.clone()),
        MeasureSpec::Dirac { index, point } => {
            let i = match (index, point) {
                (Some(i), None) => *i,
                (None, Some(p)) => {
                    let p = p.to_point().map_err(err)?;
                    cloud.index_of(&p, SNAP_TOLERANCE).ok_or_else(|| err(format!("{p:?} is not a cloud point")))?
                }
                _ => return Err(err("give exactly one of index or point".into())),
            };
            AtomicMeasure::dirac(cloud.clone(), i).map_err(|e| err(e.to_string()))?
        }
        MeasureSpec::Csv { path } => {
            let path = resolve_relative(source, path);
            let text = std::fs::read_to_string(&path).map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
            let parsed = AtomicMeasure::from_csv(cloud.space(), &text).map_err(|e| err(e.to_string()))?;
            let atoms = parsed
                .atoms()
                .iter()
                .map(|&(i, w)| {
                    let p = parsed.cloud().point(i);
                    cloud
                        .index_of(p, SNAP_TOLERANCE)
                        .map(|j| (j, w))
                        .ok_or_else(|| err(format!("{p:?} is not a cloud point")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            AtomicMeasure::new(cloud.clone(), atoms).map_err(|e| err(e.to_string()))?
        }
        MeasureSpec::Combine { terms } => {
            if terms.iter().any(|t| !built.contains_key(&t.measure)) {
                return Ok(None);
            }
            let refs: Vec<(f64, &AtomicMeasure)> = terms.iter().map(|t| (t.weight, &built[&t.measure])).collect();
            AtomicMeasure::convex_combine(&refs).map_err(|e| err(e.to_string()))?
        }
        MeasureSpec::Restrict { measure, indices } => {
            let Some(base) = built.get(measure) else { return Ok(None) };
            base.restrict(indices).map_err(|e| err(e.to_string()))?
        }
        MeasureSpec::Witness { lambda, terms } => {
            let map = map.ok_or_else(|| err("a witness measure needs a map".into()))?;
            if grids.epsilon.is_empty() {
                return Err(err("a witness measure needs grids.epsilon".into()));
            }
            let lambda = match lambda {
                Some(l) => *l,
                None => {
                    let e = expanse_core::exponents::map_expansion_profile(map, cloud, &grids.epsilon, opts)
                        .map_err(|e| CliError::from_core(source, field, e))?
                        .estimate();
                    if e.is_finite() {
                        e.value() + 0.01
                    } else if e.is_neg_inf() {
                        f64::MIN
                    } else {
                        return Err(err("map exponent is +inf; no pair can violate any rate".into()));
                    }
                }
            };
            let k = terms.unwrap_or(expanse_core::exponents::DEFAULT_WITNESS_TERMS);
            expanse_core::exponents::witness_measure(map, cloud, lambda, k, &grids.epsilon, opts)
                .map_err(|e| CliError::from_core(source, field, e))?
        }
    };
    Ok(Some(mu))
}
