//! One function per subcommand; each returns a report plus the
//! command-specific payload for JSON and a table for CSV.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context, Result};
use fuzzcyl::crossed_product::u_relations_check;
use fuzzcyl::finite_oracle::checks::identity_suite;
use fuzzcyl::finite_oracle::{orbit_grid, sample_interval_to_finite, Exact, FinitePartialBijection};
use fuzzcyl::random::{random_element, random_function};
use fuzzcyl::representation::{adjoint, build_orbit, covariance_check, frobenius, max_abs, CMatrix};
use fuzzcyl::star_product::classical_limit_check;
use fuzzcyl::subalgebra::{boundary_continuity_check, two_gen_relations, CommutatorProfile, ProfileKind, TwoGenSetup};
use fuzzcyl::{Check, CrossedProductElement, CylinderFunction, FamilyKind, Interval, MatrixRep, PoissonCoefficient, Report, SupportedFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{build_element, Command, RunConfig};

/// A CSV table: header plus rows of already formatted cells.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn checks(report: &Report) -> Self {
        let mut t = Table::new(&["relation", "residual", "tolerance", "pass"]);
        for c in &report.checks {
            t.push(vec![c.relation.clone(), c.residual.to_string(), c.tolerance.to_string(), c.pass.to_string()]);
        }
        t
    }
}

pub struct Outcome {
    pub report: Report,
    pub payload: Value,
    pub table: Table,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Rep => rep(cfg),
        Command::AlgebraCheck => algebra_check(cfg),
        Command::PoissonLimit => poisson_limit(cfg),
        Command::Subalgebra => subalgebra(cfg),
        Command::Oracle => oracle(cfg),
        Command::Orbit => orbit(cfg),
    }
}

const DEFAULT_HBAR: f64 = 0.25;

fn matrix_json(m: &CMatrix<f64>) -> Value {
    json!((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_rows(t: &mut Table, name: &str, m: &CMatrix<f64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            t.push(vec![name.to_string(), i.to_string(), j.to_string(), z.re.to_string(), z.im.to_string()]);
        }
    }
}

fn base_points(cfg: &RunConfig, carrier: Interval<f64>, hbar: f64) -> Vec<f64> {
    if !cfg.base_points.is_empty() {
        return cfg.base_points.clone();
    }
    let lo = if carrier.lo().is_finite() { carrier.lo() } else { 0.0 };
    vec![lo + hbar / 2.0]
}

fn elements(cfg: &RunConfig, cyl: &std::sync::Arc<fuzzcyl::Cylinder<f64>>) -> Result<Vec<CrossedProductElement<f64>>> {
    cfg.elements
        .iter()
        .enumerate()
        .map(|(i, e)| build_element(cyl, e).with_context(|| format!("element {i}")))
        .collect()
}

fn coefficient_functions(xs: &[CrossedProductElement<f64>]) -> Vec<SupportedFunction<f64>> {
    xs.iter().flat_map(|x| x.terms().values().cloned()).collect()
}

fn rep(cfg: &RunConfig) -> Result<Outcome> {
    let hbar = cfg.hbar_or(DEFAULT_HBAR);
    let cyl = cfg.cylinder(DEFAULT_HBAR)?;
    let bases = base_points(cfg, cyl.carrier(), hbar);
    let rep = MatrixRep::from_cylinder(&cyl, &bases, cfg.truncation)?;
    let xs = elements(cfg, &cyl)?;
    let tol = cfg.tolerances.residual;
    let mats: Vec<CMatrix<f64>> = xs.iter().map(|x| rep.represent(x)).collect();

    let mut report = Report::new();
    if !xs.is_empty() {
        let pairs: Vec<(usize, usize)> = (0..xs.len()).flat_map(|i| (0..xs.len()).map(move |j| (i, j))).collect();
        let hom = pairs
            .par_iter()
            .map(|&(i, j)| Ok(frobenius(&(rep.represent(&xs[i].multiply(&xs[j])?) - &mats[i] * &mats[j]))))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        report.push(Check::residual("rep(xy) = rep(x) rep(y)", hom, tol * rep.dim() as f64));
        let star = xs
            .iter()
            .zip(&mats)
            .map(|(x, m)| max_abs(&(rep.represent(&x.involution()) - adjoint(m))))
            .fold(0.0, f64::max);
        report.push(Check::residual("rep(x*) = rep(x)^*", star, tol));
        report.extend(covariance_check(&cyl, &rep, &coefficient_functions(&xs), 2, tol)?);
    }

    let mut table = Table::new(&["matrix", "row", "col", "re", "im"]);
    matrix_rows(&mut table, "V", rep.v());
    for (i, m) in mats.iter().enumerate() {
        matrix_rows(&mut table, &format!("x{i}"), m);
    }
    let payload = json!({
        "hbar": hbar,
        "dim": rep.dim(),
        "points": rep.points(),
        "orbits": rep.orbits(),
        "v": matrix_json(rep.v()),
        "elements": mats.iter().map(matrix_json).collect::<Vec<_>>(),
    });
    Ok(Outcome { report, payload, table })
}

fn algebra_check(cfg: &RunConfig) -> Result<Outcome> {
    let cyl = cfg.cylinder(DEFAULT_HBAR)?;
    let tol = cfg.tolerances.residual;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let given = elements(cfg, &cyl)?;
    let mut triples: Vec<[CrossedProductElement<f64>; 3]> = Vec::new();
    for a in &given {
        for b in &given {
            for c in &given {
                triples.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    for _ in 0..cfg.samples {
        triples.push([0, 1, 2].map(|_| random_element(&mut rng, &cyl, 2, 3)));
    }
    let mut report = Report::new();
    if !triples.is_empty() {
        let residuals = triples
            .par_iter()
            .map(|[x, y, z]| {
                let xy = x.multiply(y)?;
                let assoc = xy.multiply(z)?.residual(&x.multiply(&y.multiply(z)?)?);
                let anti = xy.involution().residual(&y.involution().multiply(&x.involution())?);
                Ok((assoc, anti))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let (assoc, anti) = residuals.iter().fold((0.0f64, 0.0f64), |(a, b), &(x, y)| (a.max(x), b.max(y)));
        report.push(Check::residual("(xy)z = x(yz)", assoc, tol));
        report.push(Check::residual("(xy)* = y* x*", anti, tol));
        let mut samples = coefficient_functions(&given);
        samples.extend((0..cfg.samples.min(8)).map(|_| random_function(&mut rng, cyl.carrier(), cyl.carrier())));
        report.extend(u_relations_check(&cyl, &samples, tol)?);
    }
    let table = Table::checks(&report);
    let payload = json!({ "cylinder": cyl.kind(), "hbar": cyl.hbar(), "triples": triples.len() });
    Ok(Outcome { report, payload, table })
}

/// Element descriptors read as Fourier series `Σ f_n e^{inφ}`.
fn cylinder_function(cfg: &RunConfig, i: usize, carrier: Interval<f64>) -> Result<Option<CylinderFunction<f64>>> {
    let Some(desc) = cfg.elements.get(i) else { return Ok(None) };
    let mut coeffs: BTreeMap<i64, SupportedFunction<f64>> = BTreeMap::new();
    for t in desc {
        let f = t.f.build(carrier)?;
        let merged = match coeffs.remove(&t.n) {
            Some(g) => g.add(&f),
            None => f,
        };
        coeffs.insert(t.n, merged);
    }
    Ok(Some(CylinderFunction::new(carrier, coeffs)))
}

fn poisson_limit(cfg: &RunConfig) -> Result<Outcome> {
    let fam = cfg.family.build()?;
    let carrier = fam.carrier();
    let hbars = if cfg.hbar.is_empty() { vec![1e-1, 1e-2, 1e-3] } else { cfg.hbar.clone() };
    let f = cylinder_function(cfg, 0, carrier)?.unwrap_or_else(|| CylinderFunction::fourier_mode(carrier, 1));
    let g = cylinder_function(cfg, 1, carrier)?.unwrap_or_else(|| {
        CylinderFunction::from_x(SupportedFunction::polynomial(carrier, vec![0.0.into(), 0.0.into(), 1.0.into()]))
    });
    let beta = PoissonCoefficient::of_family(&fam);
    let limit = classical_limit_check(&fam, &f, &g, &hbars, &beta)?;
    let mut report = Report::new();
    let decreasing = limit.exact || limit.rows.windows(2).all(|w| w[1].residual < w[0].residual);
    report.push(Check::flag("first-order residual decreases", decreasing));
    report.push(
        Check::flag("first-order residual converges", limit.converges())
            .with_detail(format!("order {:?}, exact {}", limit.order, limit.exact)),
    );
    if let Some(last) = limit.last() {
        report.push(Check::residual("star commutator / (-i h) vs bracket", last.commutator_error, 0.1));
    }
    let mut table = Table::new(&["hbar", "residual", "commutator_error"]);
    for r in &limit.rows {
        table.push(vec![r.hbar.to_string(), r.residual.to_string(), r.commutator_error.to_string()]);
    }
    let payload = json!({ "family": fam.kind(), "limit": limit });
    Ok(Outcome { report, payload, table })
}

fn subalgebra(cfg: &RunConfig) -> Result<Outcome> {
    let hbar = cfg.hbar_or(0.1);
    let kind = cfg.profile.unwrap_or(ProfileKind::PlanePlus);
    let setup = match kind {
        ProfileKind::PlanePlus | ProfileKind::PlaneMinus => TwoGenSetup::plane(kind, cfg.a.unwrap_or(-hbar / 2.0), hbar)?,
        ProfileKind::Poincare => TwoGenSetup::poincare(hbar)?,
        ProfileKind::Custom => {
            let expr = cfg.custom_c.as_deref().ok_or_else(|| anyhow!("custom profile needs custom_c"))?;
            let c = CommutatorProfile::custom(expr.parse().map_err(|e| anyhow!("custom_c: {e}"))?);
            TwoGenSetup::new(c, cfg.family.carrier, hbar, None)?
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let j = setup.j();
    let sample_carrier = if j.is_bounded() { j } else { Interval::closed(j.lo(), j.lo() + 2.0) };
    let samples: Vec<_> = (0..cfg.samples.max(2)).map(|_| random_function(&mut rng, sample_carrier, sample_carrier)).collect();
    let rel = two_gen_relations(&setup, &samples, cfg.tolerances.residual)?;
    let boundary = boundary_continuity_check(&setup)?;
    let mut report = rel.checks.clone();
    if !boundary.vacuous {
        report.push(Check::flag("boundary: zero at u0 iff continuous at u1", boundary.iff_pairs_hold()));
    }
    let mut table = Table::new(&["region", "intervals", "points", "commutator_residual", "anticommutator_residual"]);
    for r in &rel.regions {
        table.push(vec![
            r.region.clone(),
            r.intervals.join(" "),
            r.points.to_string(),
            r.commutator_residual.to_string(),
            r.anticommutator_residual.to_string(),
        ]);
    }
    let payload = json!({
        "profile": kind,
        "hbar": hbar,
        "j": j,
        "regions": rel.regions,
        "phi_min": rel.phi_min,
        "generator_valid": rel.generator_valid,
        "printed_corollary_holds": rel.printed_corollary_holds,
        "boundary": boundary,
    });
    Ok(Outcome { report, payload, table })
}

fn oracle(cfg: &RunConfig) -> Result<Outcome> {
    let size = cfg.size.unwrap_or(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut thetas = vec![FinitePartialBijection::shift(size)];
    thetas.extend((0..cfg.samples).map(|_| FinitePartialBijection::random(&mut rng, size)));
    let mut report = Report::new();
    let mut instances = Vec::new();
    for (i, theta) in thetas.iter().enumerate() {
        let r = identity_suite::<Exact, _>(theta, 3, &mut rng, 3);
        instances.push(json!({ "theta": theta.to_string(), "all_pass": r.all_pass() }));
        report.extend(r.prefixed(&format!("theta{i}: ")));
    }
    let mut bridge = Value::Null;
    if cfg.family.kind == FamilyKind::Shift && !cfg.elements.is_empty() {
        let cyl = cfg.cylinder(DEFAULT_HBAR)?;
        let hbar = cfg.hbar_or(DEFAULT_HBAR);
        let grid = orbit_grid(&cyl, base_points(cfg, cyl.carrier(), hbar)[0], cfg.truncation)?;
        let xs = elements(cfg, &cyl)?;
        let (inst, r) = sample_interval_to_finite(&cyl, &grid, &xs, None, cfg.tolerances.residual)?;
        bridge = json!({ "points": inst.points, "theta": inst.action.theta().to_string() });
        report.extend(r.prefixed("grid: "));
    }
    let table = Table::checks(&report);
    let payload = json!({ "size": size, "instances": instances, "bridge": bridge });
    Ok(Outcome { report, payload, table })
}

fn orbit(cfg: &RunConfig) -> Result<Outcome> {
    let hbar = cfg.hbar_or(DEFAULT_HBAR);
    let cyl = cfg.cylinder(DEFAULT_HBAR)?;
    let mut report = Report::new();
    let mut table = Table::new(&["base", "n", "x"]);
    let mut orbits = Vec::new();
    for x0 in base_points(cfg, cyl.carrier(), hbar) {
        let o = build_orbit(cyl.alpha(), x0, cfg.truncation)?;
        report.push(Check::residual(format!("orbit of {x0}: x(n+1) = alpha(x(n))"), o.step_residual(cyl.alpha()), cfg.tolerances.residual));
        for (k, x) in o.points.iter().enumerate() {
            table.push(vec![x0.to_string(), (o.n_minus + k as i64).to_string(), x.to_string()]);
        }
        orbits.push(o);
    }
    let payload = json!({ "hbar": hbar, "orbits": orbits });
    Ok(Outcome { report, payload, table })
}
