//! Subcommand implementations. Each returns a [`Report`]; the caller decides
//! the exit status from [`Report::passed`].

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use thiserror::Error;

use ssb_core::breaking::{compute_spectrum, orbit_decomposition, SpectrumOptions, SpectrumResult, PSD_TOL};
use ssb_core::chiral::{fermion_mass_after_breaking, intertwiner_basis, triple_invariance_defect, Representation};
use ssb_core::electroweak::{
    alpha_basis, boson_mass_predictions, build_model, charge_operators, closed_form_mass_form, elementary_charge,
    higgs_doublet, left_lepton_doublet, right_electron, weinberg_angle, ElectroweakParams,
};
use ssb_core::higgs::{
    check_potential_invariance, fd_gradient, fd_jacobian, potential_hessian, HiggsModel, DEFAULT_TOL_VAC,
};
use ssb_core::chiral::electroweak_yukawa_tensor;
use ssb_core::lattice::study::{constant_gauge_invariance, SmoothData, DERIVATIVE_KEY, FIELD_STRENGTH_KEY};
use ssb_core::lattice::{covariance_convergence, Grid, Metric, MultipletField};
use ssb_core::lie::{random_algebra_element, random_multiplet, realify, DEFAULT_TOL_ALG};
use ssb_core::linalg::{c, CVec};
use ssb_core::unitary::{
    apply_unitary_gauge_field, fiber_derivative, goldstone_vanish_check, solve_unitary_gauge_point,
    UnitaryGaugeOptions, DEFAULT_TOL_UG,
};
use ssb_core::SsbError;

use crate::gridio::{read_grid_file, write_grid_file, GridFile, GridIoError, GridPayload};
use crate::model::{ModelErrors, ModelFile};
use crate::report::{Check, ElectroweakReport, Report, SpectrumReport, Table};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GRID: usize = 16;
pub const DEFAULT_REFINE: usize = 2;
/// Grid dimension for `gauge-check` when the model has no `[grid]` section.
pub const DEFAULT_CHECK_DIM: usize = 2;
/// Tolerance for closed-form spectrum comparisons.
pub const SPECTRUM_TOL: f64 = 1e-9;
pub const MASS_FORM_TOL: f64 = 1e-12;
pub const INVARIANCE_TOL: f64 = 1e-10;
pub const YUKAWA_TOL: f64 = 1e-12;
pub const FD_REL_TOL: f64 = 1e-6;
pub const ORDER_RANGE: (f64, f64) = (1.9, 2.1);
const VALIDATE_SAMPLES: usize = 64;
const LEMMA_SAMPLES: usize = 200;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:\n{errors}")]
    Model { path: String, errors: ModelErrors },
    #[error("{0}")]
    Core(#[from] SsbError),
    #[error("{path}: {source}")]
    Grid { path: String, source: GridIoError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

/// Flags shared by the subcommands.
#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub refine: usize,
    pub metric: Option<Metric>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            tol: None,
            grid: None,
            refine: DEFAULT_REFINE,
            metric: None,
        }
    }
}

impl Options {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    crate::model::parse_model_file(&text).map_err(|errors| CliError::Model {
        path: path.display().to_string(),
        errors,
    })
}

fn is_zero(v: &CVec) -> bool {
    v.iter().all(|z| z.norm() == 0.0)
}

fn spectrum_summary(spec: &SpectrumResult, r: usize) -> String {
    if spec.d == 0 {
        "unbroken: H = G, d = 0".to_string()
    } else {
        format!(
            "broken: d = {} Goldstone modes, dim H = {}, {} Higgs modes",
            spec.d,
            r - spec.d,
            spec.higgs_masses.len()
        )
    }
}

fn vacuum_checks(report: &mut Report, model: &HiggsModel, v0: &CVec, spec: &SpectrumResult) {
    let chk = model.check_vacuum(v0, DEFAULT_TOL_VAC);
    report.check(Check::below("vacuum gradient norm", chk.gradient_norm, DEFAULT_TOL_VAC));
    report.check(Check::below(
        "vacuum Hessian negative part",
        (-chk.min_hessian_eigenvalue).max(0.0),
        DEFAULT_TOL_VAC,
    ));
    let hessian = potential_hessian(model.potential.as_ref(), v0);
    if let Ok(dec) = orbit_decomposition(&model.gens, v0, &hessian, ssb_core::breaking::DEFAULT_TOL_RANK) {
        let scale = hessian.amax().max(1.0);
        report.check(Check::below(
            "Hessian on orbit tangent space",
            dec.orbit_hessian_defect / scale,
            DEFAULT_TOL_VAC,
        ));
        let zeros = dec.f_eigenvalues.iter().filter(|l| l.abs() < 1e-8).count();
        report.check(Check::near("zero Hessian modes off the orbit", zeros as f64, 0.0, 0.0));
    }
    report.check(Check::below(
        "mass form negative part",
        (-spec.mass_form.min_eigenvalue()).max(0.0),
        PSD_TOL,
    ));
}

/// Spectrum of the model in the file.
pub fn spectrum(file: &ModelFile, opts: &Options) -> Result<Report, CliError> {
    let v0 = file.resolve_vacuum()?;
    let model = &file.model;
    let spec = compute_spectrum(model, &v0, SpectrumOptions::default())?;
    let r = model.gens.r();
    let mut report = Report::new("spectrum", Some(opts.seed));
    report.note(spectrum_summary(&spec, r));
    report.check(Check::near(
        "d + dim h = dim G",
        (spec.d + spec.unbroken_basis.len()) as f64,
        r as f64,
        0.0,
    ));
    if is_zero(&v0) {
        report.note("vacuum vector is zero: symmetric point, not a minimum of V");
    } else {
        vacuum_checks(&mut report, model, &v0, &spec);
    }
    report.spectrum = Some(SpectrumReport::from_result(&spec, r));
    Ok(report)
}

/// Invariance, derivative and unitary-gauge defects for the model in the file.
pub fn validate(file: &ModelFile, opts: &Options) -> Result<Report, CliError> {
    let model = &file.model;
    let gs = &model.gens;
    let mut report = Report::new("validate", Some(opts.seed));
    let alg_tol = opts.tol_or(DEFAULT_TOL_ALG);

    let val = gs.validate(alg_tol);
    report.check(Check::below("generator skew-Hermiticity defect", val.skew_defect, alg_tol));
    report.check(Check::below("bracket closure defect", val.closure_defect, alg_tol));
    for (name, rep) in &file.representations {
        report.check(Check::below(
            format!("representation `{name}` bracket defect"),
            representation_bracket_defect(gs, rep),
            alg_tol,
        ));
    }

    let inv = check_potential_invariance(model, VALIDATE_SAMPLES, opts.seed, 1.0)?;
    report.check(Check::below("potential invariance defect", inv, INVARIANCE_TOL));

    let (grad_err, hess_err) = derivative_errors(model, opts.seed);
    report.check(Check::below("gradient vs finite differences (relative)", grad_err, FD_REL_TOL));
    report.check(Check::below("Hessian vs finite differences (relative)", hess_err, FD_REL_TOL));

    let v0 = file.resolve_vacuum()?;
    let spec = compute_spectrum(model, &v0, SpectrumOptions::default())?;
    report.note(spectrum_summary(&spec, gs.r()));
    if is_zero(&v0) {
        report.note("vacuum vector is zero: vacuum and unitary-gauge checks skipped");
    } else {
        vacuum_checks(&mut report, model, &v0, &spec);
        let (mismatches, worst) = unitary_gauge_samples(model, &v0, &spec, opts.seed, opts.tol_or(DEFAULT_TOL_UG))?;
        report.check(Check::near("Goldstone/fiber-derivative disagreements", mismatches as f64, 0.0, 0.0));
        report.check(Check::below("unitary gauge Goldstone defect", worst, opts.tol_or(DEFAULT_TOL_UG)));
    }
    if let Some(y) = &file.yukawa {
        let reps = yukawa_reps(file)?;
        let defect = triple_invariance_defect(&y.tensor, &reps[0], &reps[1], &reps[2])?;
        report.check(Check::below("Yukawa invariance defect", defect, YUKAWA_TOL));
    }
    Ok(report)
}

fn representation_bracket_defect(gs: &ssb_core::lie::GeneratorSet, rep: &Representation) -> f64 {
    let r = gs.r();
    let mut worst = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            let coeffs = gs.bracket(&ssb_core::lie::AlgebraElement::basis(r, i), &ssb_core::lie::AlgebraElement::basis(r, j));
            let (a, b) = (&rep.generators()[i], &rep.generators()[j]);
            let mut m = a * b - b * a;
            for (k, x) in coeffs.coeffs().iter().enumerate() {
                m -= &rep.generators()[k] * c(*x, 0.0);
            }
            worst = worst.max(m.norm());
        }
    }
    worst
}

/// Largest relative error of the analytic gradient and Hessian against
/// central differences at random points.
pub fn derivative_errors(model: &HiggsModel, seed: u64) -> (f64, f64) {
    let p = model.potential.as_ref();
    let n = model.gens.n();
    let (mut g_worst, mut h_worst) = (0.0f64, 0.0f64);
    for k in 0..VALIDATE_SAMPLES as u64 {
        let x = realify(&random_multiplet(n, seed.wrapping_add(k)));
        let g = p.gradient(&x);
        let fd = fd_gradient(&|y| p.value(y), &x);
        g_worst = g_worst.max((&g - &fd).norm() / g.norm().max(1.0));
        let h = p.hessian(&x);
        let fdh = fd_jacobian(&|y| p.gradient(y), &x);
        h_worst = h_worst.max((&h - &fdh).norm() / h.norm().max(1.0));
    }
    (g_worst, h_worst)
}

fn unitary_gauge_samples(
    model: &HiggsModel,
    v0: &CVec,
    spec: &SpectrumResult,
    seed: u64,
    tol: f64,
) -> Result<(usize, f64), CliError> {
    let n = model.gens.n();
    let mut mismatches = 0;
    let mut worst = 0.0f64;
    let opts = UnitaryGaugeOptions {
        tol,
        ..UnitaryGaugeOptions::default()
    };
    for k in 0..LEMMA_SAMPLES as u64 {
        let mut phi = random_multiplet(n, seed.wrapping_mul(31).wrapping_add(k));
        if k % 2 == 1 {
            phi = v0 * c(phi.norm() / v0.norm(), 0.0);
        }
        let chk = goldstone_vanish_check(spec, v0, &phi, tol)?;
        let s = fiber_derivative(&model.gens, v0, &phi)?.norm();
        if chk.vanishes != (s < tol) {
            mismatches += 1;
        }
        let sol = solve_unitary_gauge_point(&model.gens, v0, spec, &phi, opts)?;
        worst = worst.max(sol.goldstone_defect);
    }
    Ok((mismatches, worst))
}

fn check_grid(file: &ModelFile, opts: &Options) -> Result<Grid, CliError> {
    if let Some(n) = opts.grid {
        let dim = file.grid.as_ref().map_or(DEFAULT_CHECK_DIM, Grid::dim);
        let metric = opts.metric.or(file.grid.as_ref().map(Grid::metric)).unwrap_or_default();
        return Ok(Grid::new(vec![n; dim], 1.0 / n as f64, metric)?);
    }
    match &file.grid {
        Some(g) => Ok(match opts.metric {
            Some(m) => Grid::new(g.shape().to_vec(), g.h(), m)?,
            None => g.clone(),
        }),
        None => {
            let n = DEFAULT_GRID;
            Ok(Grid::new(vec![n; DEFAULT_CHECK_DIM], 1.0 / n as f64, opts.metric.unwrap_or_default())?)
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Paths for the `unitary-gauge` subcommand.
#[derive(Debug, Clone, Default)]
pub struct UnitaryGaugePaths {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub sigma_output: Option<PathBuf>,
}

/// Smooth Higgs field `sigma(x) (v0 + small bump)` with nontrivial Goldstone content.
pub fn demo_higgs_field(file: &ModelFile, v0: &CVec, grid: &Grid, seed: u64) -> Result<MultipletField, CliError> {
    let gs = &file.model.gens;
    let rot = SmoothData::random(gs, grid.dim(), seed, 1.0).sigma(gs, grid)?;
    let bump = SmoothData::random(gs, grid.dim(), seed ^ 0x5eed, 0.1 * v0.norm()).higgs(gs, grid, v0)?;
    Ok(MultipletField::new(
        gs.n(),
        (0..grid.len()).map(|s| rot.at(s) * bump.at(s)).collect(),
    )?)
}

/// Rotates a Higgs grid field into unitary gauge.
pub fn unitary_gauge(file: &ModelFile, opts: &Options, paths: &UnitaryGaugePaths) -> Result<Report, CliError> {
    let model = &file.model;
    let gs = &model.gens;
    let v0 = file.resolve_vacuum()?;
    if is_zero(&v0) {
        return Err(CliError::Usage("unitary gauge needs a nonzero vacuum".into()));
    }
    let spec = compute_spectrum(model, &v0, SpectrumOptions::default())?;
    let (grid, phi) = match &paths.input {
        Some(path) => {
            let f = File::open(path).map_err(io_err(path))?;
            let gf = read_grid_file(BufReader::new(f)).map_err(|source| CliError::Grid {
                path: path.display().to_string(),
                source,
            })?;
            match gf.payload {
                GridPayload::Multiplet(phi) if phi.n() == gs.n() => (gf.grid, phi),
                _ => {
                    return Err(CliError::Usage(format!(
                        "{}: expected a multiplet field with n = {}",
                        path.display(),
                        gs.n()
                    )))
                }
            }
        }
        None => {
            let grid = check_grid(file, opts)?;
            let phi = demo_higgs_field(file, &v0, &grid, opts.seed)?;
            (grid, phi)
        }
    };
    let tol = opts.tol_or(DEFAULT_TOL_UG);
    let ug_opts = UnitaryGaugeOptions {
        tol,
        ..UnitaryGaugeOptions::default()
    };
    let solved = apply_unitary_gauge_field(gs, &v0, &spec, &grid, &phi, ug_opts)?;
    let norm_defect = phi
        .values()
        .iter()
        .zip(solved.transformed.values())
        .map(|(a, b)| (a.norm() - b.norm()).abs() / a.norm().max(1.0))
        .fold(0.0, f64::max);

    let mut report = Report::new("unitary-gauge", paths.input.is_none().then_some(opts.seed));
    report.note(format!("{} sites, shape {:?}, h = {}", grid.len(), grid.shape(), grid.h()));
    report.check(Check::below("max Goldstone defect", solved.max_goldstone, tol));
    report.check(Check::below("max norm change", norm_defect, 1e-12));

    for (path, payload) in [
        (&paths.output, GridPayload::Multiplet(solved.transformed.clone())),
        (&paths.sigma_output, GridPayload::Transform(solved.sigma.clone())),
    ] {
        if let Some(path) = path {
            let f = File::create(path).map_err(io_err(path))?;
            let gf = GridFile {
                grid: grid.clone(),
                r: gs.r(),
                payload,
            };
            write_grid_file(BufWriter::new(f), &gf).map_err(|source| CliError::Grid {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    Ok(report)
}

/// Convergence orders of the discrete gauge-covariance defects.
pub fn gauge_check(file: &ModelFile, opts: &Options) -> Result<Report, CliError> {
    let model = &file.model;
    let gs = &model.gens;
    if opts.refine == 0 {
        return Err(CliError::Usage("--refine must be at least 1".into()));
    }
    let base = opts.grid.unwrap_or(DEFAULT_GRID);
    let dim = file.grid.as_ref().map_or(DEFAULT_CHECK_DIM, Grid::dim);
    let metric = opts.metric.or(file.grid.as_ref().map(Grid::metric)).unwrap_or_default();
    let sizes: Vec<usize> = (0..=opts.refine).map(|k| base << k).collect();
    let study = covariance_convergence(gs, model.potential.as_ref(), dim, &sizes, metric, opts.seed)?;

    let mut report = Report::new("gauge-check", Some(opts.seed));
    report.note(format!("dim = {dim}, metric = {metric}, grids {sizes:?}"));

    let cols: Vec<String> = sizes.iter().map(|n| format!("N={n}")).collect();
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut errors = Table::new("max covariance defect", &col_refs);
    let names: Vec<String> = study.errors[0].all().map(|(k, _)| k).collect();
    for name in &names {
        let row = study
            .errors
            .iter()
            .map(|e| e.all().find(|(k, _)| k == name).expect("same quantities on every grid").1)
            .collect();
        errors = errors.row(name.clone(), row);
    }
    errors = errors.row("projection-defect", study.errors.iter().map(|e| e.projection_defect).collect());
    report.tables.push(errors);

    let ocols: Vec<String> = sizes.windows(2).map(|w| format!("{}->{}", w[0], w[1])).collect();
    let ocol_refs: Vec<&str> = ocols.iter().map(String::as_str).collect();
    let mut orders = Table::new("measured convergence order", &ocol_refs);
    for (name, values) in &study.orders {
        orders = orders.row(name.clone(), values.clone());
    }
    report.tables.push(orders);

    let (lo, hi) = ORDER_RANGE;
    for key in [DERIVATIVE_KEY, FIELD_STRENGTH_KEY] {
        for (w, p) in sizes.windows(2).zip(study.orders.get(key).into_iter().flatten()) {
            report.check(Check::within(format!("{key} order {}->{}", w[0], w[1]), *p, lo, hi));
        }
    }

    let grid = Grid::new(vec![base; dim], 1.0 / base as f64, metric)?;
    let x = random_algebra_element(gs.r(), opts.seed ^ 0xc0, 1.0);
    let inv = constant_gauge_invariance(gs, model.potential.as_ref(), &grid, &x, opts.seed)?;
    report.check(Check::below("constant gauge invariance of densities", inv, opts.tol_or(INVARIANCE_TOL)));
    Ok(report)
}

fn yukawa_reps(file: &ModelFile) -> Result<[Representation; 3], CliError> {
    let y = file
        .yukawa
        .as_ref()
        .ok_or_else(|| CliError::Usage("model has no [yukawa] section".into()))?;
    let get = |k: usize| {
        file.representation(&y.slots[k])
            .ok_or_else(|| CliError::Usage(format!("unknown representation `{}`", y.slots[k])))
    };
    Ok([get(0)?, get(1)?, get(2)?])
}

/// Yukawa invariance and fermion masses after breaking.
pub fn yukawa(file: &ModelFile, opts: &Options) -> Result<Report, CliError> {
    let reps = yukawa_reps(file)?;
    let y = file.yukawa.as_ref().expect("checked by yukawa_reps");
    let v0 = file.resolve_vacuum()?;
    let mut report = Report::new("yukawa", None);
    let defect = triple_invariance_defect(&y.tensor, &reps[0], &reps[1], &reps[2])?;
    report.check(Check::below("Yukawa invariance defect", defect, opts.tol_or(YUKAWA_TOL)));

    let others: Vec<usize> = (0..3).filter(|&k| k != y.higgs_slot).collect();
    let (a, b) = (others[0], others[1]);
    let bare = intertwiner_basis(&reps[a], &reps[b])?.dimension();
    report.note(format!(
        "bare mass forms between `{}` and `{}`: {}",
        y.slots[a], y.slots[b], bare
    ));
    let masses = fermion_mass_after_breaking(&y.tensor, &v0, y.g_y, y.higgs_slot)?;
    report.tables.push(
        Table::new("fermion masses after breaking", &["mass"])
            .row_iter(masses.row_masses.iter().enumerate().map(|(i, m)| (format!("{}[{i}]", y.slots[a]), vec![*m])))
            .row_iter(masses.dirac_masses.iter().enumerate().map(|(i, m)| (format!("dirac[{i}]"), vec![*m]))),
    );
    Ok(report)
}

impl Table {
    fn row_iter(mut self, rows: impl Iterator<Item = (String, Vec<f64>)>) -> Self {
        for (label, values) in rows {
            self = self.row(label, values);
        }
        self
    }
}

/// Electroweak preset: numerics against closed forms.
pub fn electroweak(p: &ElectroweakParams, opts: &Options) -> Result<Report, CliError> {
    let tol = opts.tol_or(SPECTRUM_TOL);
    let model = build_model(p)?;
    let v0 = model.vacuum().expect("build_model pins the vacuum").clone();
    let spec = compute_spectrum(&model, &v0, SpectrumOptions::default())?;
    let pred = boson_mass_predictions(p);
    let mut report = Report::new("electroweak", None);
    report.note(spectrum_summary(&spec, 4));
    report.note(format!(
        "g = {}, g' = {}, mu = {}, lambda = {}, |v0| = {}",
        p.g,
        p.gp,
        p.mu,
        p.lambda,
        p.vacuum_norm()
    ));

    report.check(Check::near("Goldstone count d", spec.d as f64, 3.0, 0.0));
    report.check(Check::near("Higgs mode count", spec.higgs_masses.len() as f64, 1.0, 0.0));
    let expected = [pred.m_z, pred.m_w, pred.m_w, pred.m_gamma];
    let names = ["m_Z", "m_W", "m_W", "m_gamma"];
    for ((name, want), got) in names.iter().zip(expected).zip(&spec.boson_masses) {
        report.check(Check::near(format!("{name} numerical vs closed form"), *got, want, tol));
    }
    if let Some(&mh) = spec.higgs_masses.first() {
        report.check(Check::near("m_H numerical vs closed form", mh, pred.m_h, tol));
    }
    let closed = closed_form_mass_form(p.g, p.gp, p.vacuum_norm());
    report.check(Check::below(
        "mass form vs closed form (max entry)",
        (spec.mass_form.matrix() - closed).amax(),
        MASS_FORM_TOL,
    ));
    let alpha4 = &alpha_basis(p)[3];
    if spec.unbroken_basis.len() == 1 {
        let u = &spec.unbroken_basis[0];
        let cos = (u.dot(alpha4) / (u.norm() * alpha4.norm())).abs().min(1.0);
        report.check(Check::below("unbroken generator angle to alpha_4", cos.acos(), 1e-8));
    } else {
        report.check(Check::near("unbroken subalgebra dimension", spec.unbroken_basis.len() as f64, 1.0, 0.0));
    }
    report.check(Check::below(
        "|alpha_4 v0|",
        model.gens.act(alpha4, &v0)?.norm(),
        MASS_FORM_TOL,
    ));

    let tau = electroweak_yukawa_tensor();
    let (left, higgs, right) = (left_lepton_doublet(p), higgs_doublet(p), right_electron(p));
    report.check(Check::below(
        "Yukawa invariance defect",
        triple_invariance_defect(&tau, &left, &higgs, &right)?,
        YUKAWA_TOL,
    ));
    report.check(Check::near(
        "bare lepton mass forms",
        intertwiner_basis(&left, &right)?.dimension() as f64,
        0.0,
        0.0,
    ));
    let g_y = 1.0;
    let fm = fermion_mass_after_breaking(&tau, &v0, g_y, 1)?;
    report.check(Check::near("neutrino mass", fm.row_masses[0], 0.0, YUKAWA_TOL));
    report.check(Check::near("electron mass / g_Y", fm.row_masses[1] / g_y, v0.norm(), YUKAWA_TOL));

    let mut charges = std::collections::BTreeMap::new();
    for (name, rep) in [("higgs", &higgs), ("lepton-doublet", &left), ("right-electron", &right)] {
        let ops = charge_operators(rep, p)?;
        charges.insert(name.to_string(), ops.eigenvalues.iter().map(|e| e.2).collect());
    }
    let q_v0 = (charge_operators(&higgs, p)?.q * &v0).norm();
    report.check(Check::below("electric charge of the vacuum", q_v0, MASS_FORM_TOL));

    report.electroweak = Some(ElectroweakReport {
        g: p.g,
        gp: p.gp,
        mu: p.mu,
        lambda: p.lambda,
        weinberg_angle: weinberg_angle(p),
        elementary_charge: elementary_charge(p),
        m_w: pred.m_w,
        m_z: pred.m_z,
        m_gamma: pred.m_gamma,
        m_h: pred.m_h,
        charges,
    });
    report.spectrum = Some(SpectrumReport::from_result(&spec, 4));
    Ok(report)
}
