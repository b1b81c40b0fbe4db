//! Checkers for the structural relations between the estimators.
//!
//! Every checker returns a [`TheoremReport`] whose verdict is a function of
//! its margin: `pass` iff `margin >= -tolerance`. A negative margin is the
//! size of the violation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{capacity_estimate, CapacityOptions, CapacityReport};
use crate::entropy::{katok_entropy_estimate, EntropyOptions, EntropyReport};
use crate::exponents::{
    map_expansion_profile, measure_expansion_profile, positive_exponent_certificate, witness_measure, EpsilonProfile,
    ExponentCertificate, ProfileOptions, DEFAULT_WITNESS_TERMS,
};
use crate::extended::ExtendedReal;
use crate::maps::{MapModel, OrbitTable};
use crate::measures::AtomicMeasure;
use crate::numeric::{least_squares, CompensatedSum};
use crate::seed::component_rng;
use crate::spaces::{NeighborIndex, PointCloud};
use crate::{Error, Result};

/// Allowed gap between the best measure exponent and the map exponent.
pub const DEFAULT_ATTAINMENT_TOLERANCE: f64 = 0.02;
/// Absorbs the combined bias of the entropy, capacity and exponent estimators.
pub const DEFAULT_ENTROPY_TOLERANCE: f64 = 0.1;
/// Slack on the fitted Φ-mass decay rate below `log k`.
pub const DEFAULT_DECAY_SLACK: f64 = 0.1;
/// Largest invariance defect accepted as "invariant".
pub const INVARIANCE_TOLERANCE: f64 = 1e-9;
/// Distance-preservation tolerance for the isometry law.
pub const ISOMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C")]
    C,
    #[serde(rename = "law-convex")]
    LawConvex,
    #[serde(rename = "law-monotone")]
    LawMonotone,
    #[serde(rename = "law-isometry")]
    LawIsometry,
    #[serde(rename = "contraction-chain")]
    ContractionChain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub inputs: BTreeMap<String, String>,
    pub quantities: BTreeMap<String, ExtendedReal>,
    #[serde(serialize_with = "crate::io::serialize_f64")]
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub caveats: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: TheoremId, margin: f64, tolerance: f64) -> Self {
        let verdict = if margin >= -tolerance { Verdict::Pass } else { Verdict::Fail };
        TheoremReport {
            theorem,
            inputs: BTreeMap::new(),
            quantities: BTreeMap::new(),
            margin,
            tolerance,
            verdict,
            caveats: Vec::new(),
        }
    }

    fn not_applicable(theorem: TheoremId, reason: impl Into<String>) -> Self {
        let mut r = TheoremReport::new(theorem, 0.0, 0.0);
        r.verdict = Verdict::NotApplicable;
        r.caveats.push(reason.into());
        r
    }

    fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    fn quantity(mut self, key: &str, value: impl Into<ExtendedReal>) -> Self {
        self.quantities.insert(key.to_string(), value.into());
        self
    }

    fn caveat(mut self, text: impl Into<String>) -> Self {
        self.caveats.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn describe_map(map: &MapModel) -> String {
    format!("{map:?}")
}

fn grid_text(grid: &[f64]) -> String {
    grid.iter().map(|v| crate::io::format_f64(*v)).collect::<Vec<_>>().join(" ")
}

fn require_on(cloud: &PointCloud, mu: &AtomicMeasure) -> Result<()> {
    if mu.is_on(cloud) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("measure does not live on this cloud".into()))
    }
}

/// Uniform measure, `diracs` seeded Dirac measures, and the truncated
/// witness measure at `λ = Ê(T) + 0.01`. When `Ê(T) = -inf` the witness is
/// built on the collapsing pairs; when no pair constrains the map, no witness
/// is added.
pub fn standard_family(
    map: &MapModel,
    cloud: &Arc<PointCloud>,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
    diracs: usize,
    seed: u64,
) -> Result<Vec<(String, AtomicMeasure)>> {
    let mut family = vec![("uniform".to_string(), AtomicMeasure::uniform(cloud.clone()))];
    let mut rng = component_rng(seed, "theorem_a.diracs");
    let mut picks = sample(&mut rng, cloud.len(), diracs.min(cloud.len())).into_vec();
    picks.sort_unstable();
    for i in picks {
        family.push((format!("dirac[{i}]"), AtomicMeasure::dirac(cloud.clone(), i)?));
    }
    let e_map = map_expansion_profile(map, cloud, epsilon_grid, opts)?.estimate();
    let lambda = if e_map.is_finite() {
        Some(e_map.value() + 0.01)
    } else if e_map.is_neg_inf() {
        Some(f64::MIN)
    } else {
        None
    };
    if let Some(lambda) = lambda {
        let w = witness_measure(map, cloud, lambda, DEFAULT_WITNESS_TERMS, epsilon_grid, opts)?;
        family.push(("witness".to_string(), w));
    }
    Ok(family)
}

/// The map exponent is the minimum of the measure exponents: checks
/// `0 <= min_μ Ê_μ - Ê(T) <= tolerance` over the family.
pub fn check_theorem_a(
    map: &MapModel,
    cloud: &PointCloud,
    family: &[(String, AtomicMeasure)],
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
    attainment_tolerance: f64,
) -> Result<TheoremReport> {
    if family.len() < 2 {
        return Err(Error::InvalidArgument("theorem A needs at least two measures".into()));
    }
    for (_, mu) in family {
        require_on(cloud, mu)?;
    }
    let e_map = map_expansion_profile(map, cloud, epsilon_grid, opts)?.estimate();
    let exponents: Vec<ExtendedReal> = family
        .par_iter()
        .map(|(_, mu)| measure_expansion_profile(map, cloud, mu, epsilon_grid, opts).map(|p| p.estimate()))
        .collect::<Result<_>>()?;
    let (argmin, min_mu) = exponents.iter().copied().enumerate().min_by_key(|p| p.1).unwrap();
    let lower = min_mu.gap(e_map);
    let attainment = attainment_tolerance - lower;
    let mut report = TheoremReport::new(TheoremId::A, lower.min(attainment), 0.0)
        .input("map", describe_map(map))
        .input("cloud_size", cloud.len())
        .input("epsilon_grid", grid_text(epsilon_grid))
        .input("family", family.iter().map(|f| f.0.as_str()).collect::<Vec<_>>().join(" "))
        .quantity("map_exponent", e_map)
        .quantity("min_measure_exponent", min_mu)
        .quantity("margin_lower", lower)
        .quantity("margin_attainment", attainment)
        .quantity("attainment_tolerance", attainment_tolerance)
        .quantity("resolution_floor", opts.floor(cloud))
        .input("minimizer", &family[argmin].0);
    for ((name, mu), e) in family.iter().zip(&exponents) {
        report = report
            .quantity(&format!("exponent[{name}]"), *e)
            .quantity(&format!("max_atom_weight[{name}]"), mu.max_atom_weight());
    }
    if !family.iter().any(|(_, mu)| mu.atoms().len() == cloud.len()) {
        report = report.caveat("family has no full-support measure");
    }
    Ok(report)
}

/// `lambda_hat` of `tμ + (1-t)ν` equals `min(lambda_hat_μ, lambda_hat_ν)` at
/// every scale, exactly.
pub fn check_convex_law(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    t: f64,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<TheoremReport> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must lie strictly between 0 and 1")));
    }
    require_on(cloud, mu)?;
    require_on(cloud, nu)?;
    let mix = AtomicMeasure::convex_combine(&[(t, mu), (1.0 - t, nu)])?;
    let pm = measure_expansion_profile(map, cloud, mu, epsilon_grid, opts)?;
    let pn = measure_expansion_profile(map, cloud, nu, epsilon_grid, opts)?;
    let pc = measure_expansion_profile(map, cloud, &mix, epsilon_grid, opts)?;
    let mut worst = 0.0f64;
    for ((a, b), c) in pm.entries.iter().zip(&pn.entries).zip(&pc.entries) {
        let expected = a.lambda_hat.min(b.lambda_hat);
        worst = worst.max(c.lambda_hat.gap(expected).abs());
    }
    Ok(TheoremReport::new(TheoremId::LawConvex, -worst, 0.0)
        .input("map", describe_map(map))
        .input("t", t)
        .input("epsilon_grid", grid_text(epsilon_grid))
        .quantity("exponent_mu", pm.estimate())
        .quantity("exponent_nu", pn.estimate())
        .quantity("exponent_combination", pc.estimate())
        .quantity("max_profile_gap", worst))
}

/// For `supp μ ⊆ supp ν`, `lambda_hat_μ >= lambda_hat_ν` at every scale.
pub fn check_monotone_law(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<TheoremReport> {
    require_on(cloud, mu)?;
    require_on(cloud, nu)?;
    let nu_support = nu.support();
    if mu.support().iter().any(|i| nu_support.binary_search(i).is_err()) {
        return Err(Error::Precondition("support of mu is not contained in the support of nu".into()));
    }
    let pm = measure_expansion_profile(map, cloud, mu, epsilon_grid, opts)?;
    let pn = measure_expansion_profile(map, cloud, nu, epsilon_grid, opts)?;
    let margin = pm
        .entries
        .iter()
        .zip(&pn.entries)
        .map(|(a, b)| a.lambda_hat.gap(b.lambda_hat))
        .fold(f64::INFINITY, f64::min);
    Ok(TheoremReport::new(TheoremId::LawMonotone, margin, 0.0)
        .input("map", describe_map(map))
        .input("epsilon_grid", grid_text(epsilon_grid))
        .quantity("exponent_mu", pm.estimate())
        .quantity("exponent_nu", pn.estimate()))
}

/// For a map preserving distances on the cloud, every constrained
/// `lambda_hat` is at most 0 (and in fact 0).
pub fn check_isometry_law(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    epsilon_grid: &[f64],
    opts: &ProfileOptions,
) -> Result<TheoremReport> {
    require_on(cloud, mu)?;
    let profile = measure_expansion_profile(map, cloud, mu, epsilon_grid, opts)?;
    let eps = *epsilon_grid.last().unwrap();
    let space = cloud.space();
    let images: Vec<_> = cloud.points().iter().map(|p| map.apply(p)).collect::<Result<_>>()?;
    let index = NeighborIndex::new(cloud, None);
    let distortion = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let mut worst = 0.0f64;
            index.for_each_within(cloud.point(i), eps, true, |j, d| {
                worst = worst.max((space.dist(&images[i], &images[j]) - d).abs());
            });
            worst
        })
        .reduce(|| 0.0, f64::max);
    if distortion > ISOMETRY_TOLERANCE {
        return Ok(TheoremReport::not_applicable(TheoremId::LawIsometry, "map does not preserve distances on this cloud")
            .quantity("distortion", distortion));
    }
    let constrained: Vec<ExtendedReal> =
        profile.entries.iter().filter(|e| e.pair_count > 0).map(|e| e.lambda_hat).collect();
    let max_lambda = constrained.iter().copied().max().unwrap_or(ExtendedReal::NEG_INFINITY);
    let max_abs = constrained.iter().map(|l| l.value().abs()).fold(0.0, f64::max);
    let margin = if constrained.is_empty() { 0.0 } else { -max_lambda.value() };
    Ok(TheoremReport::new(TheoremId::LawIsometry, margin, ISOMETRY_TOLERANCE)
        .input("map", describe_map(map))
        .input("epsilon_grid", grid_text(epsilon_grid))
        .quantity("max_lambda_hat", max_lambda)
        .quantity("max_abs_lambda_hat", max_abs)
        .quantity("distortion", distortion))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiMassCurve {
    pub x_index: usize,
    pub x: Vec<f64>,
    pub epsilon: f64,
    /// `(n, μ{y : d(T^i x, T^i y) <= ε for 0 <= i < n})` for `n = 1..=n_max`.
    pub entries: Vec<(usize, f64)>,
}

impl PhiMassCurve {
    /// Decay rate `-slope` of `log mass` over the entries above `floor`;
    /// `+inf` when fewer than two entries remain.
    pub fn decay_rate(&self, floor: f64) -> f64 {
        let above: Vec<(f64, f64)> =
            self.entries.iter().filter(|e| e.1 > floor).map(|e| (e.0 as f64, e.1.ln())).collect();
        let xs: Vec<f64> = above.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = above.iter().map(|p| p.1).collect();
        least_squares(&xs, &ys).map_or(f64::INFINITY, |f| -f.slope)
    }
}

fn phi_curve_with(
    cloud: &PointCloud,
    orbits: &OrbitTable<'_>,
    mu: &AtomicMeasure,
    x: usize,
    epsilon: f64,
) -> PhiMassCurve {
    let n_max = orbits.len();
    // exits[e] collects atoms whose orbit leaves the closed ε-tube at step e
    let mut exits = vec![CompensatedSum::default(); n_max + 1];
    for &(y, w) in mu.atoms() {
        let exit = (0..n_max).find(|&t| orbits.dist_at(t, x, y) > epsilon).unwrap_or(n_max);
        exits[exit].add(w);
    }
    let mut entries = Vec::with_capacity(n_max);
    let mut tail = CompensatedSum::default();
    let mut suffix = vec![0.0; n_max + 1];
    for e in (1..=n_max).rev() {
        tail.add(exits[e].value());
        suffix[e] = tail.value();
    }
    for (n, &mass) in suffix.iter().enumerate().skip(1) {
        entries.push((n, mass.clamp(0.0, 1.0)));
    }
    PhiMassCurve { x_index: x, x: cloud.space().coordinates(cloud.point(x)), epsilon, entries }
}

/// Mass of the truncated shadowing set
/// `{y : d(T^i x, T^i y) <= ε, 0 <= i < n}` for `n = 1..=n_max`.
pub fn phi_mass_curve(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    x_index: usize,
    epsilon: f64,
    n_max: usize,
) -> Result<PhiMassCurve> {
    require_on(cloud, mu)?;
    if x_index >= cloud.len() {
        return Err(Error::InvalidArgument(format!("center index {x_index} out of range")));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 1".into()));
    }
    let floor = 2.0 * cloud.resolution();
    if epsilon < floor {
        return Err(Error::Precondition(format!("epsilon {epsilon} is below the scale floor {floor}")));
    }
    let orbits = OrbitTable::new(map, cloud, n_max)?;
    Ok(phi_curve_with(cloud, &orbits, mu, x_index, epsilon))
}

fn checked_invariance(map: &MapModel, mu: &AtomicMeasure) -> Result<f64> {
    let defect = match mu.invariance_defect(map) {
        Ok(d) => d,
        Err(Error::NotRepresentable(what)) => {
            return Err(Error::Precondition(format!("invariance cannot be checked: {what}")))
        }
        Err(e) => return Err(e),
    };
    if defect >= INVARIANCE_TOLERANCE {
        return Err(Error::Precondition(format!("measure is not invariant (defect {defect})")));
    }
    Ok(defect)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansivityCheck {
    pub report: TheoremReport,
    pub certificate: Option<ExponentCertificate>,
    pub curves: Vec<PhiMassCurve>,
    #[serde(serialize_with = "crate::io::serialize_f64_slice")]
    pub decay_rates: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansivityParams {
    pub n_max: usize,
    pub centers: usize,
    pub seed: u64,
    pub decay_slack: f64,
}

/// Positive exponent implies positive expansivity: with certificate
/// `(k, ε)`, the Φ-mass at `ε/2` around sampled centers must fall below the
/// nonatomicity floor `2 * max atom weight` by `n_max`, decaying at rate at
/// least `log k - slack`.
pub fn check_theorem_b(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    epsilon_grid: &[f64],
    params: &ExpansivityParams,
    opts: &ProfileOptions,
) -> Result<ExpansivityCheck> {
    require_on(cloud, mu)?;
    let Some(cert) = positive_exponent_certificate(map, cloud, mu, epsilon_grid, opts)? else {
        let e_mu = measure_expansion_profile(map, cloud, mu, epsilon_grid, opts)?.estimate();
        let report = TheoremReport::not_applicable(TheoremId::B, "no positive-exponent certificate on this grid")
            .input("map", describe_map(map))
            .input("epsilon_grid", grid_text(epsilon_grid))
            .quantity("measure_exponent", e_mu);
        return Ok(ExpansivityCheck { report, certificate: None, curves: Vec::new(), decay_rates: Vec::new() });
    };
    let defect = checked_invariance(map, mu)?;
    let eps_half = cert.epsilon / 2.0;
    let floor = 2.0 * mu.max_atom_weight();
    let mut rng = component_rng(params.seed, "theorem_b.centers");
    let mut centers = sample(&mut rng, cloud.len(), params.centers.min(cloud.len())).into_vec();
    centers.sort_unstable();
    let scale_floor = 2.0 * cloud.resolution();
    if eps_half < scale_floor {
        return Err(Error::Precondition(format!("epsilon/2 = {eps_half} is below the scale floor {scale_floor}")));
    }
    let orbits = OrbitTable::new(map, cloud, params.n_max)?;
    let curves: Vec<PhiMassCurve> =
        centers.par_iter().map(|&x| phi_curve_with(cloud, &orbits, mu, x, eps_half)).collect();
    let rates: Vec<f64> = curves.iter().map(|c| c.decay_rate(floor)).collect();
    let clearance = curves.iter().map(|c| floor - c.entries.last().unwrap().1).fold(f64::INFINITY, f64::min);
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);
    let required = cert.k.ln() - params.decay_slack;
    let rate_margin = min_rate - required;
    let finite: Vec<f64> = rates.iter().copied().filter(|r| r.is_finite()).collect();
    let mean_rate = if finite.is_empty() { f64::INFINITY } else { finite.iter().sum::<f64>() / finite.len() as f64 };
    let report = TheoremReport::new(TheoremId::B, clearance.min(rate_margin), 0.0)
        .input("map", describe_map(map))
        .input("cloud_size", cloud.len())
        .input("centers", centers.len())
        .input("n_max", params.n_max)
        .input("seed", params.seed)
        .quantity("k", cert.k)
        .quantity("epsilon", cert.epsilon)
        .quantity("expansivity_constant", eps_half)
        .quantity("nonatomicity_floor", floor)
        .quantity("max_atom_weight", mu.max_atom_weight())
        .quantity("invariance_defect", defect)
        .quantity("floor_clearance", clearance)
        .quantity("min_decay_rate", ExtendedReal::new(min_rate))
        .quantity("mean_decay_rate", ExtendedReal::new(mean_rate))
        .quantity("required_decay_rate", required)
        .quantity("rate_margin", ExtendedReal::new(rate_margin))
        .caveat("nonatomic is approximated by the nonatomicity floor 2 x max atom weight");
    Ok(ExpansivityCheck { report, certificate: Some(cert), curves, decay_rates: rates })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyInequalityParams {
    pub epsilon_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub capacity_delta_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub n_range: Vec<usize>,
    pub entropy_delta: f64,
    pub tolerance: f64,
    pub profile: ProfileOptions,
    pub capacity: CapacityOptions,
    pub enforce_entropy_floors: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyInequalityCheck {
    pub report: TheoremReport,
    pub profile: EpsilonProfile,
    pub capacity: CapacityReport,
    pub entropy: EntropyReport,
}

/// `h_μ(T) >= dim_B(μ) · E_μ(T)` for an invariant measure of a continuous
/// map, with margin `ĥ - dim · max(Ê_μ, 0) + tolerance`.
pub fn check_theorem_c(
    map: &MapModel,
    cloud: &PointCloud,
    mu: &AtomicMeasure,
    params: &EntropyInequalityParams,
) -> Result<EntropyInequalityCheck> {
    require_on(cloud, mu)?;
    if !map.is_continuous() {
        return Err(Error::Structural(format!("{} is not a continuous map model", map.name())));
    }
    let defect = checked_invariance(map, mu)?;
    let profile = measure_expansion_profile(map, cloud, mu, &params.epsilon_grid, &params.profile)?;
    let e_mu = profile.estimate();
    if e_mu.is_pos_inf() {
        return Err(Error::Precondition("measure exponent is +inf on this grid (no constrained pairs)".into()));
    }
    let rate = e_mu.is_finite().then(|| e_mu.value()).filter(|r| *r > 0.0);
    let entropy_opts = EntropyOptions { enforce_floors: params.enforce_entropy_floors, saturation_rate: rate };
    let entropy = katok_entropy_estimate(
        map,
        cloud,
        mu,
        &params.n_range,
        &params.gamma_grid,
        params.entropy_delta,
        &entropy_opts,
    )?;
    let capacity = capacity_estimate(cloud, mu, &params.beta_grid, &params.capacity_delta_grid, &params.capacity)?;
    let h = entropy.estimate;
    let dim = capacity.estimate;
    let positive = if e_mu.is_finite() { e_mu.value().max(0.0) } else { 0.0 };
    let rhs = dim * positive;
    let margin = h - rhs + params.tolerance;
    let mut report = TheoremReport::new(TheoremId::C, margin, 0.0);
    if positive <= 0.0 {
        report.verdict = Verdict::Pass;
        report = report.caveat("right-hand side is nonpositive; holds because entropy is nonnegative");
    }
    let report = report
        .input("map", describe_map(map))
        .input("cloud_size", cloud.len())
        .input("epsilon_grid", grid_text(&params.epsilon_grid))
        .input("beta_grid", grid_text(&params.beta_grid))
        .input("gamma_grid", grid_text(&params.gamma_grid))
        .input("n_range", params.n_range.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "))
        .quantity("entropy", h)
        .quantity("capacity", dim)
        .quantity("capacity_residual", capacity.residual)
        .quantity("measure_exponent", e_mu)
        .quantity("rhs", rhs)
        .quantity("tolerance", params.tolerance)
        .quantity("max_atom_weight", mu.max_atom_weight())
        .quantity("invariance_defect", defect)
        .quantity("resolution_floor", profile.resolution_floor)
        .caveat("ergodicity is assumed, not verified");
    Ok(EntropyInequalityCheck { report, profile, capacity, entropy })
}

/// Inside a Bowen ball, points whose orbit stays in the expanding sets
/// `C(T^i x) = {y : d(T^i x, y) < ε, d(T^{i+1} x, T y) >= k d(T^i x, y)}`
/// for `0 <= i < n` lie within `k^{-(n-1)} γ` of `x`.
pub fn check_contraction_chain(
    map: &MapModel,
    cloud: &PointCloud,
    certificate: &ExponentCertificate,
    n: usize,
    gamma: f64,
) -> Result<TheoremReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(gamma > 0.0 && gamma < certificate.epsilon) {
        return Err(Error::Precondition(format!(
            "gamma {gamma} must lie in (0, {}) for the certificate",
            certificate.epsilon
        )));
    }
    let k = certificate.k;
    let bound = k.powi(-(n as i32 - 1)) * gamma;
    let orbits = OrbitTable::new(map, cloud, n + 1)?;
    let index = NeighborIndex::new(cloud, None);
    let (qualifying, violations, margin) = (0..cloud.len())
        .into_par_iter()
        .map(|x| {
            let (mut q, mut v, mut m) = (0u64, 0u64, f64::INFINITY);
            index.for_each_within(cloud.point(x), gamma, true, |y, d0| {
                if y == x || d0 == 0.0 {
                    return;
                }
                if !orbits.within_bowen(x, y, n, gamma) {
                    return;
                }
                let in_chain = (0..n).all(|i| {
                    let di = orbits.dist_at(i, x, y);
                    di < certificate.epsilon && orbits.dist_at(i + 1, x, y) >= k * di
                });
                if in_chain {
                    q += 1;
                    m = m.min(bound - d0);
                    if d0 > bound {
                        v += 1;
                    }
                }
            });
            (q, v, m)
        })
        .reduce(|| (0, 0, f64::INFINITY), |a, b| (a.0 + b.0, a.1 + b.1, a.2.min(b.2)));
    let mut report = TheoremReport::new(TheoremId::ContractionChain, margin, 0.0)
        .input("map", describe_map(map))
        .input("cloud_size", cloud.len())
        .input("n", n)
        .input("gamma", gamma)
        .quantity("k", k)
        .quantity("certificate_epsilon", certificate.epsilon)
        .quantity("bound", bound)
        .quantity("qualifying_pairs", qualifying as f64)
        .quantity("violations", violations as f64);
    if qualifying == 0 {
        report = report.caveat("no pair satisfies the expansion chain; vacuous");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{grid_cloud, SpaceModel};

    fn circle(n: usize) -> Arc<PointCloud> {
        Arc::new(grid_cloud(&SpaceModel::Circle, n).unwrap())
    }

    fn eps_grid() -> Vec<f64> {
        vec![0.01, 0.02, 0.05, 0.1, 0.2]
    }

    #[test]
    fn theorem_a_doubling_and_rotation() {
        let cloud = circle(1024);
        let opts = ProfileOptions::default();
        for map in [MapModel::TimesM(2), MapModel::Rotation(0.3)] {
            let family = standard_family(&map, &cloud, &eps_grid(), &opts, 8, 1).unwrap();
            let r = check_theorem_a(&map, &cloud, &family, &eps_grid(), &opts, 0.02).unwrap();
            assert!(r.passed(), "{}", r.to_json());
            assert!(r.quantities["margin_lower"].value() >= 0.0);
        }
    }

    #[test]
    fn theorem_a_needs_two_measures() {
        let cloud = circle(64);
        let family = vec![("u".to_string(), AtomicMeasure::uniform(cloud.clone()))];
        let r = check_theorem_a(&MapModel::TimesM(2), &cloud, &family, &[0.1], &ProfileOptions::default(), 0.02);
        assert!(r.is_err());
    }

    #[test]
    fn convex_law_examples() {
        let cloud = circle(1024);
        let opts = ProfileOptions::default();
        let map = MapModel::TimesM(2);
        let u = AtomicMeasure::uniform(cloud.clone());
        let d = AtomicMeasure::dirac(cloud.clone(), 0).unwrap();
        for (mu, nu, t) in [(&u, &u, 0.5), (&d, &u, 0.5), (&d, &u, 0.99), (&d, &u, 0.01)] {
            let r = check_convex_law(&map, &cloud, mu, nu, t, &eps_grid(), &opts).unwrap();
            assert!(r.passed());
            assert_eq!(r.margin, 0.0);
        }
        assert!(check_convex_law(&map, &cloud, &u, &d, 1.0, &eps_grid(), &opts).is_err());
    }

    #[test]
    fn monotone_law_examples() {
        let cloud = Arc::new(grid_cloud(&SpaceModel::UnitInterval, 401).unwrap());
        let opts = ProfileOptions::default();
        let map = MapModel::Tent(1.5);
        let u = AtomicMeasure::uniform(cloud.clone());
        let r = check_monotone_law(&map, &cloud, &u, &u, &eps_grid(), &opts).unwrap();
        assert_eq!(r.margin, 0.0);
        let d = AtomicMeasure::dirac(cloud.clone(), 17).unwrap();
        assert!(check_monotone_law(&map, &cloud, &d, &u, &eps_grid(), &opts).unwrap().margin >= 0.0);
        // dropping the right half removes every fold pair at small scales
        let left: Vec<usize> = (0..150).collect();
        let half = u.restrict(&left).unwrap();
        let r = check_monotone_law(&map, &cloud, &half, &u, &eps_grid(), &opts).unwrap();
        assert!(r.margin > 0.0);
        let err = check_monotone_law(&map, &cloud, &u, &half, &eps_grid(), &opts);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn isometry_law() {
        let cloud = circle(512);
        let u = AtomicMeasure::uniform(cloud.clone());
        let opts = ProfileOptions::default();
        let r = check_isometry_law(&MapModel::Rotation(0.25), &cloud, &u, &eps_grid(), &opts).unwrap();
        assert!(r.passed());
        let r = check_isometry_law(&MapModel::TimesM(2), &cloud, &u, &eps_grid(), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn phi_curve_examples() {
        let cloud = circle(1024);
        let u = AtomicMeasure::uniform(cloud.clone());
        let c = phi_mass_curve(&MapModel::Rotation(0.25), &cloud, &u, 3, 0.05, 6).unwrap();
        assert!(c.entries.iter().all(|e| e.1 == c.entries[0].1));
        // closed ball of radius 0.05 around 3/1024: 51 points each side
        assert_eq!(c.entries[0].1, 103.0 / 1024.0);
        let c = phi_mass_curve(&MapModel::TimesM(2), &cloud, &u, 0, 0.05, 8).unwrap();
        assert!(c.entries.windows(2).all(|w| w[1].1 <= w[0].1));
        assert_eq!(c.entries[1].1, 51.0 / 1024.0);
    }

    #[test]
    fn theorem_b_not_applicable_for_rotation() {
        let cloud = circle(256);
        let u = AtomicMeasure::uniform(cloud.clone());
        let params = ExpansivityParams { n_max: 10, centers: 4, seed: 0, decay_slack: 0.1 };
        let out = check_theorem_b(&MapModel::Rotation(0.25), &cloud, &u, &[0.05, 0.1], &params, &Default::default())
            .unwrap();
        assert_eq!(out.report.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn theorem_b_tripling() {
        let cloud = circle(3usize.pow(8));
        let u = AtomicMeasure::uniform(cloud.clone());
        let params = ExpansivityParams { n_max: 12, centers: 8, seed: 5, decay_slack: 0.1 };
        let out =
            check_theorem_b(&MapModel::TimesM(3), &cloud, &u, &[0.01, 0.05, 0.1], &params, &Default::default()).unwrap();
        assert!(out.report.passed(), "{}", out.report.to_json());
        for r in &out.decay_rates {
            assert!((r - 3f64.ln()).abs() < 0.1, "{r}");
        }
    }

    #[test]
    fn contraction_chain_examples() {
        let cloud = circle(1024);
        let cert = ExponentCertificate { k: 2f64.sqrt(), epsilon: 0.2, checked_points: 0, checked_pairs: 0 };
        let r = check_contraction_chain(&MapModel::TimesM(2), &cloud, &cert, 1, 0.1).unwrap();
        assert!(r.passed());
        let r = check_contraction_chain(&MapModel::TimesM(2), &cloud, &cert, 5, 0.1).unwrap();
        assert!(r.passed() && r.quantities["qualifying_pairs"].value() > 0.0);
        let r = check_contraction_chain(&MapModel::Rotation(0.1), &cloud, &cert, 5, 0.1).unwrap();
        assert!(r.passed() && r.quantities["qualifying_pairs"].value() == 0.0);
        assert!(check_contraction_chain(&MapModel::TimesM(2), &cloud, &cert, 3, 0.3).is_err());
    }
}
