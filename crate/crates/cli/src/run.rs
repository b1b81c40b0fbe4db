//! Executes a validated plan and writes its reports.

use std::path::{Path, PathBuf};

use expanse_core::capacity::{capacity_estimate, CapacityOptions};
use expanse_core::entropy::{block_entropy_report, katok_entropy_estimate, EntropyOptions};
use expanse_core::exponents::{
    map_expansion_profile, measure_expansion_profile, positive_exponent_certificate, EpsilonProfile,
    ExponentCertificate, ProfileOptions,
};
use expanse_core::io::{csv_string, format_f64};
use expanse_core::verify::{
    check_contraction_chain, check_convex_law, check_isometry_law, check_monotone_law, check_theorem_a,
    check_theorem_b, check_theorem_c, standard_family, EntropyInequalityParams, ExpansivityParams, PhiMassCurve,
    TheoremReport, Verdict,
};
use expanse_core::ExtendedReal;
use serde::Serialize;

use crate::config::{Law, Operation, Plan};
use crate::error::CliError;

/// What a run produced.
#[derive(Debug)]
pub struct Outcome {
    pub name: String,
    pub operation: Operation,
    pub json: String,
    pub csvs: Vec<(&'static str, String)>,
    pub verdict: Option<Verdict>,
    pub estimate: Option<ExtendedReal>,
    pub margin: Option<f64>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verdict == Some(Verdict::Fail) {
            1
        } else {
            0
        }
    }

    /// Writes `<name>.json` and `<name>.<kind>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let path = dir.join(format!("{}.json", self.name));
        std::fs::write(&path, &self.json)?;
        written.push(path);
        for (kind, text) in &self.csvs {
            let path = dir.join(format!("{}.{kind}.csv", self.name));
            std::fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    name: &'a str,
    operation: &'a str,
    seed: u64,
    space: &'a expanse_core::spaces::SpaceModel,
    map: Option<String>,
    cloud_size: usize,
    resolution: f64,
    result: T,
}

#[derive(Serialize)]
struct MapExponent<'a> {
    map_exponent: ExtendedReal,
    profile: &'a EpsilonProfile,
}

#[derive(Serialize)]
struct MeasureExponent<'a> {
    measure: &'a str,
    measure_exponent: ExtendedReal,
    max_atom_weight: f64,
    profile: &'a EpsilonProfile,
}

#[derive(Serialize)]
struct Laws {
    verdict: Verdict,
    reports: Vec<TheoremReport>,
}

#[derive(Serialize)]
struct Chain {
    verdict: Verdict,
    certificate: Option<ExponentCertificate>,
    reports: Vec<TheoremReport>,
}

fn overall(reports: &[TheoremReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if reports.iter().any(|r| r.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::NotApplicable
    }
}

fn phi_csv(curves: &[PhiMassCurve]) -> expanse_core::Result<String> {
    let rows = curves.iter().flat_map(|c| {
        c.entries.iter().map(move |&(n, mass)| vec![c.x_index.to_string(), n.to_string(), format_f64(mass)])
    });
    csv_string(&["x_index", "n", "mass"], rows)
}

fn chain_csv(reports: &[TheoremReport]) -> expanse_core::Result<String> {
    let rows = reports.iter().map(|r| {
        let q = |k: &str| r.quantities.get(k).map(|v| v.to_string()).unwrap_or_default();
        vec![
            r.inputs.get("n").cloned().unwrap_or_default(),
            q("bound"),
            q("qualifying_pairs"),
            q("violations"),
            format_f64(r.margin),
        ]
    });
    csv_string(&["n", "bound", "qualifying_pairs", "violations", "margin"], rows)
}

pub fn execute(plan: &Plan) -> Result<Outcome, CliError> {
    let core = |e: expanse_core::Error| CliError::from_core(&plan.source, "operation", e);
    let cfg = &plan.config;
    let p = &cfg.params;
    let g = &plan.grids;
    let cloud = &plan.cloud;
    let mu = plan.measure(&p.measure);
    let opts = ProfileOptions { floor_factor: p.floor_factor };
    let mut out = Outcome {
        name: plan.name.clone(),
        operation: cfg.operation,
        json: String::new(),
        csvs: Vec::new(),
        verdict: None,
        estimate: None,
        margin: None,
    };
    match cfg.operation {
        Operation::ExponentMap => {
            let profile = map_expansion_profile(plan.map(), cloud, &g.epsilon, &opts).map_err(core)?;
            let e = profile.estimate();
            out.json = render(plan, &MapExponent { map_exponent: e, profile: &profile });
            out.csvs.push(("profile", profile.to_csv().map_err(core)?));
            out.estimate = Some(e);
        }
        Operation::ExponentMeasure => {
            let profile = measure_expansion_profile(plan.map(), cloud, mu, &g.epsilon, &opts).map_err(core)?;
            let e = profile.estimate();
            out.json = render(plan, &MeasureExponent {
                measure: &p.measure,
                measure_exponent: e,
                max_atom_weight: mu.max_atom_weight(),
                profile: &profile,
            });
            out.csvs.push(("profile", profile.to_csv().map_err(core)?));
            out.estimate = Some(e);
        }
        Operation::Capacity => {
            let copts = CapacityOptions { enforce_scale_floor: p.enforce_floors, enforce_mass_floor: p.enforce_floors };
            let report = capacity_estimate(cloud, mu, &g.beta, &g.delta, &copts).map_err(core)?;
            out.json = render(plan, &report);
            out.csvs.push(("capacity", report.to_csv().map_err(core)?));
            out.estimate = Some(ExtendedReal::new(report.estimate));
        }
        Operation::Entropy => {
            let eopts = EntropyOptions { enforce_floors: p.enforce_floors, saturation_rate: p.saturation_rate };
            let report = katok_entropy_estimate(plan.map(), cloud, mu, &g.n, &g.gamma, p.entropy_delta, &eopts)
                .map_err(core)?;
            out.json = render(plan, &report);
            out.csvs.push(("entropy", report.to_csv().map_err(core)?));
            out.estimate = Some(ExtendedReal::new(report.estimate));
        }
        Operation::BlockEntropy => {
            let report = block_entropy_report(mu, &g.n).map_err(core)?;
            out.json = render(plan, &report);
            out.csvs.push(("block_entropy", report.to_csv().map_err(core)?));
            out.estimate = Some(ExtendedReal::new(report.limit_estimate));
        }
        Operation::VerifyA => {
            let family = match &p.family {
                Some(names) => names.iter().map(|n| (n.clone(), plan.measure(n).clone())).collect(),
                None => standard_family(plan.map(), cloud, &g.epsilon, &opts, p.diracs, plan.seed).map_err(core)?,
            };
            let report =
                check_theorem_a(plan.map(), cloud, &family, &g.epsilon, &opts, cfg.tolerances.attainment).map_err(core)?;
            out.estimate = report.quantities.get("map_exponent").copied();
            out.margin = Some(report.margin);
            out.verdict = Some(report.verdict);
            out.json = render(plan, &report);
        }
        Operation::VerifyB => {
            let params = ExpansivityParams {
                n_max: p.n_max,
                centers: p.centers,
                seed: plan.seed,
                decay_slack: cfg.tolerances.decay_slack,
            };
            let check = check_theorem_b(plan.map(), cloud, mu, &g.epsilon, &params, &opts).map_err(core)?;
            out.estimate = check.report.quantities.get("min_decay_rate").copied();
            out.margin = Some(check.report.margin);
            out.verdict = Some(check.report.verdict);
            out.csvs.push(("phi_mass", phi_csv(&check.curves).map_err(core)?));
            out.json = render(plan, &check);
        }
        Operation::VerifyC => {
            let params = EntropyInequalityParams {
                epsilon_grid: g.epsilon.clone(),
                beta_grid: g.beta.clone(),
                capacity_delta_grid: g.delta.clone(),
                gamma_grid: g.gamma.clone(),
                n_range: g.n.clone(),
                entropy_delta: p.entropy_delta,
                tolerance: cfg.tolerances.entropy,
                profile: opts,
                capacity: CapacityOptions { enforce_scale_floor: p.enforce_floors, enforce_mass_floor: p.enforce_floors },
                enforce_entropy_floors: p.enforce_floors,
            };
            let check = check_theorem_c(plan.map(), cloud, mu, &params).map_err(core)?;
            out.estimate = check.report.quantities.get("entropy").copied();
            out.margin = Some(check.report.margin);
            out.verdict = Some(check.report.verdict);
            out.csvs.push(("profile", check.profile.to_csv().map_err(core)?));
            out.csvs.push(("capacity", check.capacity.to_csv().map_err(core)?));
            out.csvs.push(("entropy", check.entropy.to_csv().map_err(core)?));
            out.json = render(plan, &check);
        }
        Operation::VerifyLaws => {
            let laws = p.laws.clone().unwrap_or_else(|| vec![Law::Convex, Law::Monotone, Law::Isometry]);
            let nu = plan.measure(p.other.as_deref().unwrap_or("cloud"));
            let mut reports = Vec::new();
            for law in laws {
                let r = match law {
                    Law::Convex => check_convex_law(plan.map(), cloud, mu, nu, p.t, &g.epsilon, &opts),
                    Law::Monotone => check_monotone_law(plan.map(), cloud, mu, nu, &g.epsilon, &opts),
                    Law::Isometry => check_isometry_law(plan.map(), cloud, mu, &g.epsilon, &opts),
                };
                reports.push(r.map_err(core)?);
            }
            let verdict = overall(&reports);
            out.margin = reports.iter().filter(|r| r.verdict != Verdict::NotApplicable).map(|r| r.margin).reduce(f64::min);
            out.verdict = Some(verdict);
            out.json = render(plan, &Laws { verdict, reports });
        }
        Operation::ContractionChain => {
            let gamma = p.gamma.expect("validated");
            let certificate = positive_exponent_certificate(plan.map(), cloud, mu, &g.epsilon, &opts).map_err(core)?;
            let mut reports = Vec::new();
            if let Some(cert) = &certificate {
                for &n in &g.n {
                    reports.push(check_contraction_chain(plan.map(), cloud, cert, n, gamma).map_err(core)?);
                }
            }
            let verdict = overall(&reports);
            out.margin = reports.iter().map(|r| r.margin).reduce(f64::min);
            out.verdict = Some(verdict);
            out.csvs.push(("chain", chain_csv(&reports).map_err(core)?));
            out.json = render(plan, &Chain { verdict, certificate, reports });
        }
    }
    Ok(out)
}

fn render<T: Serialize>(plan: &Plan, result: &T) -> String {
    let cloud = &plan.cloud;
    let env = Envelope {
        name: &plan.name,
        operation: plan.config.operation.as_str(),
        seed: plan.seed,
        space: cloud.space(),
        map: plan.map.as_ref().map(|m| format!("{m:?}")),
        cloud_size: cloud.len(),
        resolution: cloud.resolution(),
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}
