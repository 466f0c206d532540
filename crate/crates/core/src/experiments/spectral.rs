use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{decades, growth, log_periodic_times, Outcome, GROWTH_LIMIT};
use crate::error::{param, Result};
use crate::report::{Check, Table};
use crate::semigroup::{Semigroup, StableSymbol};
use crate::spectral::{
    besov_norm, holder_parts, paraproducts, sup_besov, uniform_times, Blocks, DyadicPartition, Field, FourierGrid,
    TimeField,
};
use crate::stats::loglog_slope;
use crate::synth::{besov_sample, lacunary, seeded};

fn setup(alpha: f64, n: usize) -> Result<(Semigroup, DyadicPartition)> {
    let grid = FourierGrid::one_d(n)?;
    Ok((
        Semigroup::new(StableSymbol::fractional_laplacian(alpha)?, grid)?,
        DyadicPartition::new(grid)?,
    ))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(param("alpha", format!("{alpha} outside the admissible interval (0, 2]")))
    }
}

// ---------------------------------------------------------------- Bony

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BonyConfig {
    pub sizes: Vec<usize>,
    pub pairs: usize,
    pub tol: f64,
}

impl Default for BonyConfig {
    fn default() -> Self {
        Self {
            sizes: vec![64, 256],
            pairs: 100,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BonyReport {
    /// `(N, max relative L^inf error)`.
    pub errors: Vec<(usize, f64)>,
    pub tol: f64,
}

/// `less + resonant + greater` against the padded product for random pairs
/// `u in C^0.6`, `v in C^-0.4`.
pub fn bony_check(cfg: &BonyConfig, seed: u64) -> Result<BonyReport> {
    let mut errors = Vec::new();
    for &n in &cfg.sizes {
        let grid = FourierGrid::one_d(n)?;
        let part = DyadicPartition::new(grid)?;
        let errs = (0..cfg.pairs as u64)
            .into_par_iter()
            .map(|i| {
                let mut r = seeded(seed, i);
                let u = besov_sample(grid, 0.6, &mut r);
                let v = besov_sample(grid, -0.4, &mut r);
                let prod = u.multiply(&v)?;
                let sum = paraproducts(&u, &v, &part)?.sum();
                Ok(sum.sub(&prod)?.sup_norm() / prod.sup_norm())
            })
            .collect::<Result<Vec<f64>>>()?;
        errors.push((n, errs.into_iter().fold(0.0, f64::max)));
    }
    Ok(BonyReport { errors, tol: cfg.tol })
}

impl Outcome for BonyReport {
    fn checks(&self) -> Vec<Check> {
        self.errors
            .iter()
            .map(|(n, e)| Check::at_most(&format!("bony_relative_error_n{n}"), *e, self.tol))
            .collect()
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("bony", &["n", "max_relative_error"]);
        for (n, e) in &self.errors {
            t.push(vec![(*n).into(), (*e).into()]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- paraproduct estimates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParaproductConfig {
    pub sizes: Vec<usize>,
    pub seeds: usize,
    /// Regularities of the smooth and the rough factor.
    pub smooth: f64,
    pub rough: f64,
    /// Stability index of the generator family.
    pub alpha: f64,
    /// Relative half-width allowed around the mean of the per-size resonant constants.
    pub stability_band: f64,
}

impl Default for ParaproductConfig {
    fn default() -> Self {
        Self {
            sizes: vec![64, 128, 256, 512],
            seeds: 50,
            smooth: 0.6,
            rough: -0.4,
            alpha: 1.8,
            stability_band: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub family: String,
    pub n: usize,
    /// Largest realized constant over seeds.
    pub constant: f64,
    pub median: f64,
    pub min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParaproductReport {
    pub rows: Vec<FamilyRow>,
    /// Per family: largest constant over sizes relative to the coarsest size.
    pub growth: Vec<(String, f64)>,
    /// Largest `|C_N / mean_N C_N - 1|` of the resonant family.
    pub resonant_spread: f64,
    pub stability_band: f64,
}

const FAMILIES: [&str; 4] = ["resonant", "less_bounded", "less_negative", "generator"];

fn median(x: &mut [f64]) -> f64 {
    x.sort_by(|a, b| a.total_cmp(b));
    let m = x.len() / 2;
    if x.len() % 2 == 1 {
        x[m]
    } else {
        0.5 * (x[m - 1] + x[m])
    }
}

/// Realized constants of the paraproduct and generator estimates:
/// - `||u (.) v||_{a+b} / (||u||_a ||v||_b)` with `a + b > 0`,
/// - `||u < v||_b / (||u||_inf ||v||_b)`,
/// - `||v < u||_{a+b} / (||v||_b ||u||_a)` with `b < 0`,
/// - `||L u||_{a-alpha} / ||u||_a`.
pub fn paraproduct_probe(cfg: &ParaproductConfig, seed: u64) -> Result<ParaproductReport> {
    check_alpha(cfg.alpha)?;
    if cfg.smooth + cfg.rough <= 0.0 || cfg.rough >= 0.0 {
        return Err(param("rough", "need rough < 0 < smooth + rough"));
    }
    if cfg.seeds < 2 {
        return Err(param("seeds", "at least 2"));
    }
    let (a, b) = (cfg.smooth, cfg.rough);
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let (sg, part) = setup(cfg.alpha, n)?;
        let grid = sg.grid();
        let per_seed = (0..cfg.seeds as u64)
            .into_par_iter()
            .map(|i| {
                let mut r = seeded(seed, i);
                let u = besov_sample(grid, a, &mut r);
                let v = besov_sample(grid, b, &mut r);
                let (bu, bv) = (Blocks::new(&u, &part)?, Blocks::new(&v, &part)?);
                let (nu, nv) = (besov_norm(&u, a, &part)?, besov_norm(&v, b, &part)?);
                Ok([
                    besov_norm(&bu.resonant(&bv)?, a + b, &part)? / (nu * nv),
                    besov_norm(&bu.less(&bv)?, b, &part)? / (u.sup_norm() * nv),
                    besov_norm(&bv.less(&bu)?, a + b, &part)? / (nv * nu),
                    besov_norm(&sg.apply_generator(&u)?, a - cfg.alpha, &part)? / nu,
                ])
            })
            .collect::<Result<Vec<[f64; 4]>>>()?;
        for (fi, fam) in FAMILIES.iter().enumerate() {
            let mut x: Vec<f64> = per_seed.iter().map(|r| r[fi]).collect();
            let med = median(&mut x);
            rows.push(FamilyRow {
                family: fam.to_string(),
                n,
                constant: *x.last().unwrap(),
                median: med,
                min: x[0],
            });
        }
    }
    let res: Vec<f64> = rows.iter().filter(|r| r.family == FAMILIES[0]).map(|r| r.constant).collect();
    let m = crate::stats::mean(&res);
    let spread = res.iter().fold(0.0f64, |s, c| s.max((c / m - 1.0).abs()));
    let growth = FAMILIES
        .iter()
        .map(|fam| {
            let c: Vec<f64> = rows.iter().filter(|r| r.family == *fam).map(|r| r.constant).collect();
            (fam.to_string(), growth(&c))
        })
        .collect();
    Ok(ParaproductReport {
        rows,
        growth,
        resonant_spread: spread,
        stability_band: cfg.stability_band,
    })
}

impl Outcome for ParaproductReport {
    fn checks(&self) -> Vec<Check> {
        let mut c: Vec<Check> = self
            .growth
            .iter()
            .map(|(f, g)| Check::at_most(&format!("{f}_growth_over_n"), *g, GROWTH_LIMIT))
            .collect();
        c.push(Check::at_most("resonant_constant_spread", self.resonant_spread, self.stability_band));
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("paraproduct", &["family", "n", "constant", "median", "min"]);
        for r in &self.rows {
            t.push(vec![r.family.as_str().into(), r.n.into(), r.constant.into(), r.median.into(), r.min.into()]);
        }
        vec![t]
    }
}

// ---------------------------------------------------------------- Schauder

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchauderConfig {
    pub alpha: f64,
    pub n: usize,
    /// Regularity of the lacunary test function.
    pub beta: f64,
    /// Negative regularity used for the time-Holder estimate.
    pub beta_negative: f64,
    /// Dyadic periods of `t` (each a factor `2^alpha`) and samples per period.
    pub periods: usize,
    pub per_period: usize,
    /// Time nodes on `[T - Tbar, T]`.
    pub time_nodes: usize,
    pub slope_tol: f64,
}

impl Default for SchauderConfig {
    fn default() -> Self {
        Self {
            alpha: 1.8,
            n: 512,
            beta: 0.5,
            beta_negative: -0.5,
            periods: 4,
            per_period: 8,
            time_nodes: 16,
            slope_tol: 0.05,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SlopeSeries {
    pub estimate: String,
    pub vartheta: f64,
    pub target: f64,
    pub slope: f64,
    pub decades: f64,
    pub t: Vec<f64>,
    pub norm: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchauderReport {
    pub series: Vec<SlopeSeries>,
    pub slope_tol: f64,
}

/// Log-log slopes of the smoothing estimates against time on a lacunary
/// test function whose block norms are exact:
/// - `||P_t phi||_{b+v}` against `t` (slope `-v/alpha`),
/// - `||(P_t - I) phi||_{b-v}` (slope `v/alpha`),
/// - `||J^T phi||_{C_{Tbar,T} C^{b+v}}` against `Tbar` (slope `1 - v/alpha`),
/// - `||J^T phi||_{C^{(b+v)/alpha}_{Tbar,T} L^inf}` for `b < 0` (slope `1 - v/alpha`).
///
/// Times run from where block 2 is at its own time scale down over whole
/// periods, staying inside the resolved blocks.
pub fn schauder_probe(cfg: &SchauderConfig) -> Result<SchauderReport> {
    check_alpha(cfg.alpha)?;
    if cfg.beta_negative >= 0.0 {
        return Err(param("beta_negative", "must be negative"));
    }
    if cfg.time_nodes < 2 {
        return Err(param("time_nodes", "at least 2"));
    }
    let alpha = cfg.alpha;
    let (sg, part) = setup(alpha, cfg.n)?;
    let grid = sg.grid();
    let c = sg.symbol().psi(&[1.0]);
    let top = (cfg.n / 2 - 1).ilog2() as f64;
    if top - 2.0 < cfg.periods as f64 + 1.0 {
        return Err(param("periods", format!("{} periods do not fit below N = {}", cfg.periods, cfg.n)));
    }
    let ts = log_periodic_times(1.0 / (c * 2f64.powf(2.0 * alpha)), alpha, cfg.periods, cfg.per_period);
    let phi = lacunary(grid, cfg.beta);
    let phi_neg = lacunary(grid, cfg.beta_negative);
    let horizon = 1.0;

    let jt_on = |v: &Field, tbar: f64| -> Result<TimeField> {
        let times = uniform_times(horizon - tbar, horizon, cfg.time_nodes - 1);
        sg.jt_all(&TimeField::constant(times, v, 0.0)?)
    };

    type Probe<'a> = Box<dyn Fn(f64) -> Result<f64> + Sync + 'a>;
    let half = alpha / 2.0;
    let b = cfg.beta;
    let bn = cfg.beta_negative;
    // j2 needs vartheta in (-b, alpha)
    let v2 = 0.5 * (-bn + alpha);
    let specs: Vec<(&str, f64, f64, Probe)> = vec![
        ("schauder1", half, -half / alpha, Box::new(|t| besov_norm(&sg.apply(t, &phi)?, b + half, &part))),
        ("schauder1", alpha, -1.0, Box::new(|t| besov_norm(&sg.apply(t, &phi)?, b + alpha, &part))),
        (
            "schauder2",
            half,
            half / alpha,
            Box::new(|t| besov_norm(&sg.apply(t, &phi)?.sub(&phi)?, b - half, &part)),
        ),
        ("j1", half, 1.0 - half / alpha, Box::new(|t| sup_besov(&jt_on(&phi, t)?, b + half, &part))),
        ("j1", alpha, 0.0, Box::new(|t| sup_besov(&jt_on(&phi, t)?, b + alpha, &part))),
        (
            "j2",
            v2,
            1.0 - v2 / alpha,
            Box::new(|t| Ok(holder_parts(&jt_on(&phi_neg, t)?, (bn + v2) / alpha)?.total())),
        ),
    ];
    let series = specs
        .into_iter()
        .map(|(name, v, target, probe)| {
            let norm = ts.par_iter().map(|&t| probe(t)).collect::<Result<Vec<f64>>>()?;
            Ok(SlopeSeries {
                estimate: name.to_string(),
                vartheta: v,
                target,
                slope: loglog_slope(&ts, &norm),
                decades: decades(&ts),
                t: ts.clone(),
                norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchauderReport {
        series,
        slope_tol: cfg.slope_tol,
    })
}

impl Outcome for SchauderReport {
    fn checks(&self) -> Vec<Check> {
        let mut c = Vec::new();
        for s in &self.series {
            let tag = format!("{}_vartheta_{:.3}", s.estimate, s.vartheta);
            c.push(Check::at_most(&format!("{tag}_slope_error"), (s.slope - s.target).abs(), self.slope_tol));
            c.push(Check::at_least(&format!("{tag}_decades"), s.decades, 2.0));
        }
        c
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("schauder", &["estimate", "vartheta", "t", "norm"]);
        let mut s = Table::new("schauder_slopes", &["estimate", "vartheta", "target", "slope", "decades"]);
        for r in &self.series {
            for (x, y) in r.t.iter().zip(&r.norm) {
                t.push(vec![r.estimate.as_str().into(), r.vartheta.into(), (*x).into(), (*y).into()]);
            }
            s.push(vec![
                r.estimate.as_str().into(),
                r.vartheta.into(),
                r.target.into(),
                r.slope.into(),
                r.decades.into(),
            ]);
        }
        vec![s, t]
    }
}

// ---------------------------------------------------------------- commutators

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CommutatorConfig {
    pub alpha: f64,
    pub n: usize,
    pub time_nodes: usize,
    pub seeds: usize,
    /// `(sigma, varsigma)` parameter sets of the `J^T` commutator.
    pub jt_sets: Vec<(f64, f64)>,
    pub tbars: Vec<f64>,
    /// `(gamma, beta, vartheta)` of the semigroup commutator.
    pub semigroup_set: (f64, f64, f64),
    pub ts: Vec<f64>,
}

impl Default for CommutatorConfig {
    fn default() -> Self {
        Self {
            alpha: 1.8,
            n: 256,
            time_nodes: 32,
            seeds: 20,
            jt_sets: vec![(0.7, -0.6), (0.7, 0.1)],
            tbars: vec![1.0, 0.5, 0.25, 0.125],
            semigroup_set: (0.7, -0.6, 1.0),
            // the active block `t psi(2^j) ~ 1` sweeps j = 3.5 .. 5.1 on N = 256
            ts: (11..15).map(|k| 0.5f64.powi(k)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorFamily {
    pub name: String,
    /// Prefactor exponent: `kappa` for `J^T`, `-vartheta/alpha` for `P_t`.
    pub exponent: f64,
    /// Whether the parameters satisfy the commutator estimate's hypotheses.
    pub admissible: bool,
    pub scale: Vec<f64>,
    /// `ratios[seed][k]` along `scale`.
    pub ratios: Vec<Vec<f64>>,
    /// Realized constant at each member: the largest ratio over seeds.
    pub constants: Vec<f64>,
    pub growth: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub families: Vec<CommutatorFamily>,
}

fn seed_max(ratios: &[Vec<f64>]) -> Vec<f64> {
    (0..ratios.first().map_or(0, |r| r.len()))
        .map(|k| ratios.iter().map(|r| r[k]).fold(0.0, f64::max))
        .collect()
}

fn jt_ratio(
    sg: &Semigroup,
    part: &DyadicPartition,
    g: &(Field, Field),
    h: &(Field, Field),
    (sigma, vs): (f64, f64),
    tbar: f64,
    nodes: usize,
) -> Result<f64> {
    let alpha = sg.alpha();
    let times = uniform_times(1.0 - tbar, 1.0, nodes - 1);
    let g = TimeField::from_fn(times.clone(), sigma, |t| g.0.axpy(t, &g.1).expect("same grid"))?;
    let h = TimeField::from_fn(times, vs, |t| h.0.axpy(t, &h.1).expect("same grid"))?;
    let comm = sg.commutator_jt(&g, &h, part)?;
    let kappa = 1.0 - (sigma + 1.0 - vs) / alpha;
    let gn = sup_besov(&g, sigma, part)? + holder_parts(&g, sigma / alpha)?.total();
    Ok(sup_besov(&comm, 2.0 * sigma + 1.0, part)? / (tbar.powf(kappa) * gn * sup_besov(&h, vs, part)?))
}

/// Normalized commutator ratios along `Tbar` (for `J^T`) and `t` (for `P_t`),
/// per seed, with random inputs of the stated regularities, linear in time.
pub fn commutator_probe(cfg: &CommutatorConfig, seed: u64) -> Result<CommutatorReport> {
    check_alpha(cfg.alpha)?;
    if cfg.time_nodes < 2 {
        return Err(param("time_nodes", "at least 2"));
    }
    let alpha = cfg.alpha;
    let (sg, part) = setup(alpha, cfg.n)?;
    let grid = sg.grid();
    let mut families = Vec::new();
    for (si, &(sigma, vs)) in cfg.jt_sets.iter().enumerate() {
        let ratios = (0..cfg.seeds as u64)
            .into_par_iter()
            .map(|i| {
                let mut r = seeded(seed, 1000 * si as u64 + i);
                let g = (besov_sample(grid, sigma, &mut r), besov_sample(grid, sigma, &mut r));
                let h = (besov_sample(grid, vs, &mut r), besov_sample(grid, vs, &mut r));
                cfg.tbars
                    .iter()
                    .map(|&tb| jt_ratio(&sg, &part, &g, &h, (sigma, vs), tb, cfg.time_nodes))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let admissible = sigma > 0.0 && sigma < 1.0 && sigma - vs + 1.0 >= -1.0 && sigma - vs + 1.0 < alpha;
        families.push(CommutatorFamily {
            name: format!("jt_sigma{sigma}_varsigma{vs}"),
            exponent: 1.0 - (sigma + 1.0 - vs) / alpha,
            admissible,
            scale: cfg.tbars.clone(),
            constants: seed_max(&ratios),
            growth: growth(&seed_max(&ratios)),
            ratios,
        });
    }
    let (gamma, beta, vt) = cfg.semigroup_set;
    let ratios = (0..cfg.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = seeded(seed, 100_000 + i);
            let u = besov_sample(grid, gamma, &mut r);
            let v = besov_sample(grid, beta, &mut r);
            let den = besov_norm(&u, gamma, &part)? * besov_norm(&v, beta, &part)?;
            cfg.ts
                .iter()
                .map(|&t| {
                    let c = sg.commutator_semigroup(t, &u, &v, &part)?;
                    Ok(t.powf(vt / alpha) * besov_norm(&c, gamma + beta + vt, &part)? / den)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    families.push(CommutatorFamily {
        name: format!("semigroup_gamma{gamma}_beta{beta}_vartheta{vt}"),
        exponent: -vt / alpha,
        admissible: gamma < 1.0 && vt >= -1.0,
        scale: cfg.ts.clone(),
        constants: seed_max(&ratios),
        growth: growth(&seed_max(&ratios)),
        ratios,
    });
    Ok(CommutatorReport { families })
}

impl Outcome for CommutatorReport {
    fn checks(&self) -> Vec<Check> {
        self.families
            .iter()
            .map(|f| Check::at_most(&format!("{}_growth", f.name), f.growth, GROWTH_LIMIT))
            .collect()
    }

    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("commutator", &["family", "seed", "scale", "ratio"]);
        for f in &self.families {
            for (s, row) in f.ratios.iter().enumerate() {
                for (x, y) in f.scale.iter().zip(row) {
                    t.push(vec![f.name.as_str().into(), s.into(), (*x).into(), (*y).into()]);
                }
            }
        }
        vec![t]
    }
}
