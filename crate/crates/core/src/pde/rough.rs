use super::fixed_point::{solve_by_splitting, Diagnostics, MildMap, SolverOptions};
use super::norms::d_norm;
use super::young::mild_step;
use super::{resolve_theta, rough_window, BackwardData};
use crate::enhanced_drift::{beta_floor, EnhancedDrift};
use crate::error::{Error, Result};
use crate::semigroup::Semigroup;
use crate::spectral::{besov_norm, para_less, Blocks, DyadicPartition, Field, TimeField};

/// Drift-dependent data of the rough product, precomputed once per drift:
/// block decompositions of `V1`, `J^T V1` and `J^T d_j V1`, and the products
/// `J^T(d_j V1^i) (.) V1^j`. `J^T` is anchored at the drift horizon.
pub struct RoughContext<'a> {
    drift: &'a EnhancedDrift,
    v2: &'a [Vec<TimeField>],
    jv1: Vec<TimeField>,
    v1_blocks: Vec<Vec<Blocks>>,
    jv1_blocks: Vec<Vec<Blocks>>,
    jdv1_blocks: Vec<Vec<Vec<Blocks>>>,
    jdv1_res_v1: Vec<Vec<Vec<Field>>>,
}

fn blocks_of(tf: &TimeField, part: &DyadicPartition) -> Result<Vec<Blocks>> {
    tf.values().iter().map(|f| Blocks::new(f, part)).collect()
}

impl<'a> RoughContext<'a> {
    pub fn new(drift: &'a EnhancedDrift, sg: &Semigroup, part: &DyadicPartition) -> Result<Self> {
        let v2 = drift
            .v2
            .as_deref()
            .ok_or_else(|| Error::Precondition("rough product needs V2".into()))?;
        let d = drift.d();
        let v1_blocks = drift.v1.iter().map(|c| blocks_of(c, part)).collect::<Result<Vec<_>>>()?;
        let jv1 = drift.v1.iter().map(|c| sg.jt_all(c)).collect::<Result<Vec<_>>>()?;
        let jv1_blocks = jv1.iter().map(|c| blocks_of(c, part)).collect::<Result<Vec<_>>>()?;
        let mut jdv1_blocks = Vec::with_capacity(d);
        let mut jdv1_res_v1 = Vec::with_capacity(d);
        for ji in &jv1 {
            let mut rb = Vec::with_capacity(d);
            let mut rr = Vec::with_capacity(d);
            for (j, vb) in v1_blocks.iter().enumerate() {
                let bl = blocks_of(&ji.map(|f| f.derivative(j)), part)?;
                rr.push(bl.iter().zip(vb).map(|(g, h)| g.resonant(h)).collect::<Result<Vec<_>>>()?);
                rb.push(bl);
            }
            jdv1_blocks.push(rb);
            jdv1_res_v1.push(rr);
        }
        Ok(Self {
            drift,
            v2,
            jv1,
            v1_blocks,
            jv1_blocks,
            jdv1_blocks,
            jdv1_res_v1,
        })
    }

    pub fn jv1(&self) -> &[TimeField] {
        &self.jv1
    }

    /// `sum_i u'^i < J^T V1^i` at node `k`.
    fn paracontrol(&self, k: usize, uprime: &[Field], part: &DyadicPartition) -> Result<Field> {
        let mut acc = Field::zeros(self.drift.grid());
        for (i, up) in uprime.iter().enumerate() {
            acc = acc.add(&Blocks::new(up, part)?.less(&self.jv1_blocks[i][k])?)?;
        }
        Ok(acc)
    }

    /// `grad u . V` at node `k`: paraproducts with `V1` plus the resonant part
    /// `sum_i u'^i V2^{ij} + R(u'^i, J^T d_j V1^i, V1^j) + U#^j (.) V1^j`.
    pub fn product_at(
        &self,
        k: usize,
        u: &Field,
        uprime: &[Field],
        usharp: &Field,
        part: &DyadicPartition,
    ) -> Result<Field> {
        let mut total = Field::zeros(u.grid());
        let up_blocks = uprime.iter().map(|f| Blocks::new(f, part)).collect::<Result<Vec<_>>>()?;
        for j in 0..self.drift.d() {
            let vb = &self.v1_blocks[j][k];
            let bdu = Blocks::new(&u.derivative(j), part)?;
            total = total.add(&bdu.less(vb)?)?.add(&vb.less(&bdu)?)?;
            let mut sharp = usharp.derivative(j);
            for (i, up) in uprime.iter().enumerate() {
                total = total.add(&up.multiply(self.v2[i][j].value(k))?)?;
                let para = up_blocks[i].less(&self.jdv1_blocks[i][j][k])?;
                total = total
                    .add(&Blocks::new(&para, part)?.resonant(vb)?)?
                    .sub(&up.multiply(&self.jdv1_res_v1[i][j][k])?)?;
                sharp = sharp.add(&Blocks::new(&up.derivative(j), part)?.less(&self.jv1_blocks[i][k])?)?;
            }
            total = total.add(&Blocks::new(&sharp, part)?.resonant(vb)?)?;
        }
        Ok(total)
    }
}

/// `u' = grad u - e_shift`.
fn derivative_part(u: &Field, shift: Option<usize>) -> Vec<Field> {
    let mut g = u.gradient();
    if let Some(j) = shift {
        g[j] = g[j].axpy(-1.0, &Field::constant(u.grid(), 1.0)).expect("same grid");
    }
    g
}

/// Paracontrolled triple `(u, u', u#)` with `u = u' < J^T V1 + u#`.
#[derive(Clone, Debug)]
pub struct ParacontrolledSolution {
    pub u: TimeField,
    pub uprime: Vec<TimeField>,
    pub usharp: TimeField,
    pub theta: f64,
    pub diagnostics: Diagnostics,
    /// `max_t ||u - u' < J^T V1 - u#||_inf / max_t ||u||_inf` from fresh paraproducts.
    pub reconstruction_residual: f64,
    /// Relative `D^theta` distance between `Phi(u)` on the whole interval and `u`.
    pub global_residual: f64,
}

impl ParacontrolledSolution {
    /// Builds the triple from `u` and measures the reconstruction identity.
    pub fn from_u(u: TimeField, shift: Option<usize>, theta: f64, jv1: &[TimeField], part: &DyadicPartition) -> Result<Self> {
        let d = u.grid().d();
        let mut up: Vec<Vec<Field>> = vec![Vec::with_capacity(u.len()); d];
        let mut sharp = Vec::with_capacity(u.len());
        for (k, v) in u.values().iter().enumerate() {
            let g = derivative_part(v, shift);
            let mut pc = Field::zeros(v.grid());
            for (i, gi) in g.iter().enumerate() {
                pc = pc.add(&Blocks::new(gi, part)?.less(&Blocks::new(jv1[i].value(k), part)?)?)?;
            }
            sharp.push(v.sub(&pc)?);
            for (i, gi) in g.into_iter().enumerate() {
                up[i].push(gi);
            }
        }
        let times = u.times().to_vec();
        let uprime = up
            .into_iter()
            .map(|c| TimeField::new(times.clone(), c, theta - 1.0))
            .collect::<Result<Vec<_>>>()?;
        let usharp = TimeField::new(times, sharp, 2.0 * theta - 1.0)?;
        let mut s = Self {
            u: u.with_theta(theta),
            uprime,
            usharp,
            theta,
            diagnostics: Diagnostics::default(),
            reconstruction_residual: 0.0,
            global_residual: 0.0,
        };
        s.reconstruction_residual = s.reconstruction(jv1, part)?;
        Ok(s)
    }

    fn reconstruction(&self, jv1: &[TimeField], part: &DyadicPartition) -> Result<f64> {
        let mut err = 0.0f64;
        for k in 0..self.u.len() {
            let mut r = self.u.value(k).sub(self.usharp.value(k))?;
            for (i, up) in self.uprime.iter().enumerate() {
                r = r.sub(&para_less(up.value(k), jv1[i].value(k), part)?)?;
            }
            err = err.max(r.sup_norm());
        }
        let scale = self.u.sup_norm();
        Ok(if err == 0.0 { 0.0 } else { err / scale.max(1e-300) })
    }
}

/// `grad u . V` along the whole time grid for a paracontrolled triple.
pub fn rough_product(sol: &ParacontrolledSolution, ctx: &RoughContext, part: &DyadicPartition) -> Result<TimeField> {
    let vals = (0..sol.u.len())
        .map(|k| {
            let up: Vec<Field> = sol.uprime.iter().map(|c| c.value(k).clone()).collect();
            ctx.product_at(k, sol.u.value(k), &up, sol.usharp.value(k), part)
        })
        .collect::<Result<Vec<_>>>()?;
    TimeField::new(sol.u.times().to_vec(), vals, ctx.drift.beta)
}

struct RoughMap<'a> {
    sg: &'a Semigroup,
    part: &'a DyadicPartition,
    ctx: &'a RoughContext<'a>,
    f: TimeField,
    shift: Option<usize>,
    theta: f64,
}

impl RoughMap<'_> {
    fn forcing_term(&self, a: usize, b: usize, u: &TimeField) -> Result<Vec<Field>> {
        (a..=b)
            .map(|k| {
                let v = u.value(k - a);
                let up = derivative_part(v, self.shift);
                let sharp = v.sub(&self.ctx.paracontrol(k, &up, self.part)?)?;
                self.ctx.product_at(k, v, &up, &sharp, self.part)?.sub(self.f.value(k))
            })
            .collect()
    }

    fn dnorm(&self, a: usize, w: &TimeField) -> Result<f64> {
        let grads: Vec<TimeField> = (0..w.grid().d()).map(|j| w.map(|f| f.derivative(j))).collect();
        let mut sharp = Vec::with_capacity(w.len());
        for k in 0..w.len() {
            let up: Vec<Field> = grads.iter().map(|g| g.value(k).clone()).collect();
            sharp.push(w.value(k).sub(&self.ctx.paracontrol(a + k, &up, self.part)?)?);
        }
        let sharp = TimeField::new(w.times().to_vec(), sharp, 0.0)?;
        Ok(d_norm(w, &grads, &sharp, self.theta, self.sg.alpha(), self.part)?.total())
    }
}

impl MildMap for RoughMap<'_> {
    fn times(&self) -> &[f64] {
        self.ctx.drift.times()
    }

    fn initial(&self, a: usize, b: usize, terminal: &Field) -> Result<TimeField> {
        let g = (a..=b).map(|k| self.f.value(k).scale(-1.0)).collect();
        mild_step(self.sg, self.times(), a, b, terminal, g)
    }

    fn apply(&self, a: usize, b: usize, u: &TimeField, terminal: &Field) -> Result<TimeField> {
        let g = self.forcing_term(a, b, u)?;
        mild_step(self.sg, self.times(), a, b, terminal, g)
    }

    fn residual(&self, a: usize, diff: &TimeField, new: &TimeField) -> Result<f64> {
        if diff.max_abs_coeff() == 0.0 {
            return Ok(0.0);
        }
        Ok(self.dnorm(a, diff)? / self.dnorm(a, new)?.max(1e-300))
    }

    fn handoff(&self, a: usize, value: &Field) -> Result<Option<f64>> {
        let up = derivative_part(value, self.shift);
        let sharp = value.sub(&self.ctx.paracontrol(a, &up, self.part)?)?;
        Ok(Some(besov_norm(&sharp, 2.0 * self.theta - 1.0, self.part)?))
    }
}

/// Fixed point of `u = P_{T-t} u_T + J^T(grad u . V - f)` with the rough product,
/// by Picard iteration in the paracontrolled norm with interval splitting.
pub fn solve_rough(
    drift: &EnhancedDrift,
    data: &BackwardData,
    sg: &Semigroup,
    part: &DyadicPartition,
    opts: &SolverOptions,
) -> Result<ParacontrolledSolution> {
    let alpha = sg.alpha();
    let beta = drift.beta;
    if !(beta > beta_floor(alpha)) {
        return Err(Error::Precondition(format!(
            "beta = {beta} must exceed (2 - 2 alpha)/3 = {}",
            beta_floor(alpha)
        )));
    }
    let theta = resolve_theta(data, rough_window(alpha, beta))?;
    if data.terminal_regularity < 2.0 * theta - 1.0 {
        return Err(Error::Param {
            field: "terminal_regularity".into(),
            msg: format!(
                "{} below 2 theta - 1 = {}",
                data.terminal_regularity,
                2.0 * theta - 1.0
            ),
        });
    }
    let ctx = RoughContext::new(drift, sg, part)?;
    let map = RoughMap {
        sg,
        part,
        ctx: &ctx,
        f: data.forcing_field(drift)?,
        shift: data.shift(),
        theta,
    };
    let (u, mut diag) = solve_by_splitting(&map, &data.terminal, opts)?;
    let m = u.len() - 1;
    let global = {
        let phi = map.apply(0, m, &u, &data.terminal)?;
        map.residual(0, &phi.sub(&u)?, &u)?
    };
    diag.theta = theta;
    let k1 = (beta + alpha - theta) / alpha;
    let k2 = 2.0 * (alpha + beta - theta) / alpha;
    diag.kappa1 = Some(k1);
    diag.kappa2 = Some(k2);
    diag.tbar_kappa1 = Some(diag.tbar.powf(k1));
    diag.tbar_kappa2 = Some(diag.tbar.powf(k2));
    let mut sol = ParacontrolledSolution::from_u(u, data.shift(), theta, ctx.jv1(), part)?;
    sol.diagnostics = diag;
    sol.global_residual = global;
    Ok(sol)
}
