//! The two (r+1)-sheeted algebraic curves of the hard-edge analysis.
//!
//! The zeta curve `zeta^{r+1} = (zeta - 1/(rz))^r` encodes the linear-field
//! equilibrium vector; the xi curve `c_q z = 1/((1-xi) xi^r)` is its rescaled
//! form whose soft branch point is placed at z = q by the choice of c_q.
//! Sheets are labeled by numerical continuation from a large-|z| base point
//! where the asymptotic expansions separate the roots.

use crate::precision::{Cplx, Error, PrecisionContext, Real, Result};
use crate::roots;
use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Zeta,
    Xi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Configuration shared by both curves.
///
/// `c_q` is derived from the branch-point condition `xi_0(q) = r/(r+1)`,
/// giving `c_q = (r+1)^{r+1} / (r^r q)`; the value printed in the source
/// material, `(r+1)/(2q)`, is inconsistent with that condition and is kept
/// only for the documented-discrepancy report.
#[derive(Debug, Clone)]
pub struct CurveConfig {
    pub r: u32,
    pub q: Real,
    pub c_q: Real,
}

impl CurveConfig {
    pub fn new(ctx: &PrecisionContext, r: u32, q: f64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidConfig("r must be >= 1".into()));
        }
        if !(q > 0.0) {
            return Err(Error::InvalidConfig("q must be positive".into()));
        }
        let qr = ctx.real(q);
        let c_q = Self::branch_condition_c_q(ctx, r, &qr);
        Ok(Self { r, q: qr, c_q })
    }

    /// c_q from xi_0(q) = r/(r+1): (r+1)^{r+1} / (r^r q).
    pub fn branch_condition_c_q(ctx: &PrecisionContext, r: u32, q: &Real) -> Real {
        let rp1 = ctx.real(r + 1).pow((r + 1) as i32);
        let rr = ctx.real(r).pow(r as i32);
        rp1 / (rr * q)
    }

    /// The printed value (r+1)/(2q), reported but never used in computations.
    pub fn printed_c_q(&self, ctx: &PrecisionContext) -> Real {
        ctx.real(self.r + 1) / (self.q.clone() * 2u32)
    }

    /// Soft-edge branch point of the requested curve.
    pub fn soft_edge(&self, ctx: &PrecisionContext, kind: CurveKind) -> Real {
        match kind {
            CurveKind::Zeta => {
                // z* = ((r+1)/r)^{r+1}
                (ctx.real(self.r + 1) / ctx.real(self.r)).pow((self.r + 1) as i32)
            }
            CurveKind::Xi => {
                // z* = (r+1)^{r+1} / (c_q r^r) = q by construction of c_q
                let rp1 = ctx.real(self.r + 1).pow((self.r + 1) as i32);
                let rr = ctx.real(self.r).pow(self.r as i32);
                rp1 / (rr.clone() * &self.c_q)
            }
        }
    }
}

/// The r+1 labeled branch values at a point.
#[derive(Debug, Clone)]
pub struct SheetValues {
    pub z: Cplx,
    pub values: Vec<Cplx>,
    pub kind: CurveKind,
    pub residual_max: f64,
}

/// A branch point of the curve: location, finite branch value if any, order.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub z: Real,
    pub value: Option<Real>,
    pub order: u32,
}

/// Coefficients (lowest first) of the curve polynomial in the branch variable
/// at a fixed z.
fn curve_coeffs(ctx: &PrecisionContext, cfg: &CurveConfig, kind: CurveKind, z: &Cplx) -> Vec<Cplx> {
    let bits = ctx.bits();
    let _ = bits;
    let r = cfg.r as usize;
    match kind {
        CurveKind::Zeta => {
            // zeta^{r+1} - (zeta - a)^r with a = 1/(r z):
            // coeff[r+1] = 1; coeff[r-m] -= C(r,m) (-a)^m.
            let a = (ctx.creal(&ctx.real(cfg.r)) * z).recip();
            let mut coeffs = vec![Complex::new(bits); r + 2];
            coeffs[r + 1] = ctx.cone();
            let mut binom = Float::with_val(bits, 1);
            let mut neg_a_pow = ctx.cone();
            for m in 0..=r {
                if m > 0 {
                    binom = binom * Float::with_val(bits, (r - m + 1) as u32) / Float::with_val(bits, m as u32);
                    neg_a_pow = neg_a_pow * (-a.clone());
                }
                let term = neg_a_pow.clone() * &binom;
                coeffs[r - m] -= term;
            }
            coeffs
        }
        CurveKind::Xi => {
            // xi^{r+1} - xi^r + 1/(c_q z)
            let mut coeffs = vec![Complex::new(bits); r + 2];
            coeffs[r + 1] = ctx.cone();
            coeffs[r] = -ctx.cone();
            coeffs[0] = (ctx.creal(&cfg.c_q) * z).recip();
            coeffs
        }
    }
}

/// Asymptotic seed predictions at a large-|z| base point, ordered by sheet.
fn seed_predictions(
    ctx: &PrecisionContext,
    cfg: &CurveConfig,
    kind: CurveKind,
    z: &Cplx,
) -> Vec<Cplx> {
    let r = cfg.r;
    let upper = z.imag().is_sign_positive();
    // Phase exponents c_j = (-1)^j floor(j/2) (upper) or its negation (lower).
    let phase_exp = |j: u32| -> i64 {
        let base = (j / 2) as i64;
        let s = if j % 2 == 0 { base } else { -base };
        if upper {
            s
        } else {
            -s
        }
    };
    let mut preds = Vec::with_capacity(r as usize + 1);
    match kind {
        CurveKind::Zeta => {
            // zeta_0 ~ 1 - 1/z
            preds.push(ctx.cone() - z.clone().recip());
            // zeta_j ~ 1/(rz) + Omega^{c_j} (rz)^{-(r+1)/r}
            let rz = ctx.creal(&ctx.real(r)) * z;
            let inv_rz = rz.clone().recip();
            let expo = ctx.complex(-((r as f64 + 1.0) / r as f64), 0.0);
            let delta = rz.pow(&expo);
            for j in 1..=r {
                let omega = ctx.unit_phase_rat(phase_exp(j), r as u64);
                preds.push(inv_rz.clone() + omega * &delta);
            }
        }
        CurveKind::Xi => {
            // xi_0 ~ 1 - 1/(c_q z)
            let cz = ctx.creal(&cfg.c_q) * z;
            preds.push(ctx.cone() - cz.clone().recip());
            // xi_j ~ Omega^{c_j} (c_q z)^{-1/r}
            let expo = ctx.complex(-1.0 / r as f64, 0.0);
            let delta = cz.pow(&expo);
            for j in 1..=r {
                let omega = ctx.unit_phase_rat(phase_exp(j), r as u64);
                preds.push(omega * &delta);
            }
        }
    }
    preds
}

/// Match actual roots to predictions; returns roots ordered by sheet index.
fn assign_by_prediction(preds: &[Cplx], actual: &[Cplx]) -> Result<Vec<Cplx>> {
    let n = preds.len();
    let mut taken = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for p in preds {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (i, a) in actual.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let d = (p - a).complete((53, 53)).abs().real().to_f64();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        if best == usize::MAX {
            return Err(Error::RootsNoConvergence);
        }
        taken[best] = true;
        out.push(actual[best].clone());
    }
    Ok(out)
}

fn cfg_cq(cfg: &CurveConfig) -> Real {
    cfg.c_q.clone()
}

/// Continuation engine: tracks the labeled roots from a large base point to
/// the target, staying within one open half-plane. `visit` observes every
/// accepted step in order (used to drag branch-dependent payloads along).
pub struct Tracker<'a> {
    pub ctx: &'a PrecisionContext,
    pub cfg: &'a CurveConfig,
    pub kind: CurveKind,
}

impl<'a> Tracker<'a> {
    fn roots_at(&self, z: &Cplx, warm: Option<&[Cplx]>) -> Result<Vec<Cplx>> {
        let coeffs = curve_coeffs(self.ctx, self.cfg, self.kind, z);
        let rs = roots::poly_roots_unordered(self.ctx, &coeffs, warm)?;
        Ok(rs)
    }

    /// dv/dz at a branch value v by implicit differentiation of the curve.
    fn branch_derivative(&self, z: &Cplx, v: &Cplx) -> Cplx {
        let ctx = self.ctx;
        let bits = ctx.bits();
        let r = self.cfg.r;
        match self.kind {
            CurveKind::Zeta => {
                // P = v^{r+1} - (v - a)^r, a = 1/(rz):
                // dP/dz = -(v-a)^{r-1}/z^2, dP/dv = (r+1)v^r - r(v-a)^{r-1}.
                let a = (ctx.creal(&ctx.real(r)) * z).recip();
                let vma = (v - &a).complete((bits, bits));
                let vma_rm1 = vma.clone().pow((r - 1) as i32);
                let dpdz = -(vma_rm1.clone() / z.clone().square());
                let dpdv = v.clone().pow(r as i32) * ctx.real(r + 1) - vma_rm1 * ctx.real(r);
                -(dpdz / dpdv)
            }
            CurveKind::Xi => {
                // P = v^{r+1} - v^r + 1/(c_q z):
                // dP/dz = -1/(c_q z^2), dP/dv = (r+1)v^r - r v^{r-1}.
                let dpdz = -(ctx.creal(&cfg_cq(self.cfg)) * z.clone().square()).recip();
                let vr1 = v.clone().pow((r - 1) as i32);
                let dpdv = vr1.clone() * v * ctx.real(r + 1) - vr1 * ctx.real(r);
                -(dpdz / dpdv)
            }
        }
    }

    fn min_distance_to_others(vals: &[Cplx], i: usize) -> f64 {
        let mut m = f64::INFINITY;
        for j in 0..vals.len() {
            if j != i {
                let d = (&vals[i] - &vals[j]).complete((53, 53)).abs().real().to_f64();
                m = m.min(d);
            }
        }
        m
    }

    fn step(
        &self,
        from_z: &Cplx,
        from_roots: &[Cplx],
        to_z: &Cplx,
        depth: u32,
        visit: &mut dyn FnMut(&Cplx, &[Cplx]),
    ) -> Result<Vec<Cplx>> {
        let bits = self.ctx.bits();
        let dz = (to_z - from_z).complete((bits, bits));
        // First-order prediction along the branch; the polish step then only
        // has to absorb the curvature error.
        let preds: Vec<Cplx> = from_roots
            .iter()
            .map(|v| v.clone() + self.branch_derivative(from_z, v) * &dz)
            .collect();
        let new_roots = self.roots_at(to_z, Some(&preds))?;
        let mut ok = true;
        for i in 0..preds.len() {
            let moved = (&new_roots[i] - &preds[i]).complete((53, 53)).abs().real().to_f64();
            let sep = Self::min_distance_to_others(&preds, i);
            if !(moved <= 0.3 * sep) {
                ok = false;
                break;
            }
        }
        if ok {
            visit(to_z, &new_roots);
            return Ok(new_roots);
        }
        if depth >= 48 {
            let sep = (0..from_roots.len())
                .map(|i| Self::min_distance_to_others(from_roots, i))
                .fold(f64::INFINITY, f64::min);
            return Err(Error::BranchPointProximity(sep));
        }
        let mid = (from_z + to_z).complete((bits, bits)) / 2u32;
        let half = self.step(from_z, from_roots, &mid, depth + 1, visit)?;
        self.step(&mid, &half, to_z, depth + 1, visit)
    }

    /// Track from the asymptotic base point to `z_target` (Im != 0 required
    /// unless the real target is off every cut).
    pub fn run(
        &self,
        z_target: &Cplx,
        mut visit: impl FnMut(&Cplx, &[Cplx]),
    ) -> Result<Vec<Cplx>> {
        let ctx = self.ctx;
        let r = self.cfg.r;
        if z_target.clone().abs().real().is_zero() {
            return Err(Error::InvalidConfig("z = 0 is a branch point".into()));
        }
        let im_zero = z_target.imag().is_zero();
        if im_zero && self.on_cut(z_target.real()) {
            return Err(Error::OnCutWithoutSide);
        }
        let upper = !z_target.imag().is_sign_negative();

        let scale = self
            .cfg
            .soft_edge(ctx, self.kind)
            .max(&ctx.real(1))
            .max(&(z_target.clone().abs().real().clone() * 4u32));
        // Asymptotic labels need the O(z^{-1/r}) corrections well inside the
        // angular spacing 2 pi / r of the predicted phases.
        let base_mag = 1e3f64.max((r as f64 / 0.22).powi(r as i32));
        let base_radius = scale.clone() * ctx.real(base_mag);

        let phi0 = if upper { 0.25f64 } else { -0.25f64 }; // fraction of 2pi: +-pi/2
        let base_dir = ctx.unit_phase(&ctx.real(phi0));
        let z_base = base_dir.clone() * &base_radius;

        // Seed at base point.
        let cold = self.roots_at(&z_base, None)?;
        let preds = seed_predictions(ctx, self.cfg, self.kind, &z_base);
        let mut cur = assign_by_prediction(&preds, &cold)?;
        visit(&z_base, &cur);
        let mut cur_z = z_base;

        // Radial descent at fixed angle phi0 down to |z_target|.
        let target_abs = z_target.clone().abs().real().clone();
        let mut radius = base_radius;
        loop {
            let next_radius = (radius.clone() / 4u32).max(&target_abs);
            let z_next = base_dir.clone() * &next_radius;
            cur = self.step(&cur_z, &cur, &z_next, 0, &mut visit)?;
            cur_z = z_next;
            let done = next_radius == target_abs;
            radius = next_radius;
            if done {
                break;
            }
        }

        // Angular sweep at radius |z_target| from phi0 to arg(z_target).
        let theta_t = z_target.imag().clone().atan2(z_target.real());
        let theta_0 = (ctx.pi() / 2u32) * if upper { 1i32 } else { -1i32 };
        let dtheta = theta_t.clone() - &theta_0;
        let n_steps = (dtheta.to_f64().abs() / 0.15).ceil().max(1.0) as i64;
        for k in 1..=n_steps {
            let frac = ctx.real(k) / ctx.real(n_steps);
            let ang = theta_0.clone() + dtheta.clone() * frac;
            let t = ang / (ctx.pi() * 2u32);
            let dir = ctx.unit_phase(&t);
            let z_next = if k == n_steps {
                z_target.clone()
            } else {
                dir * &target_abs
            };
            cur = self.step(&cur_z, &cur, &z_next, 0, &mut visit)?;
            cur_z = z_next;
        }
        Ok(cur)
    }

    /// Does the real abscissa lie on one of this curve's cuts?
    fn on_cut(&self, x: &Real) -> bool {
        let ctx = self.ctx;
        let r = self.cfg.r;
        let soft = self.cfg.soft_edge(ctx, self.kind);
        let xf = x.to_f64();
        if xf == 0.0 {
            return true;
        }
        if xf > 0.0 && xf <= soft.to_f64() {
            return true; // Delta_0
        }
        if xf < 0.0 && r >= 2 {
            return true; // Delta_1
        }
        if xf > 0.0 && r >= 3 {
            return true; // Delta_2 = [0, infinity)
        }
        false
    }
}

fn residual_max_at(ctx: &PrecisionContext, cfg: &CurveConfig, kind: CurveKind, z: &Cplx, vals: &[Cplx]) -> f64 {
    let coeffs = curve_coeffs(ctx, cfg, kind, z);
    let bits = ctx.bits();
    let mut scale = Float::new(bits);
    for c in &coeffs {
        let a = c.clone().abs().real().clone();
        if a > scale {
            scale = a;
        }
    }
    let mut worst = 0.0f64;
    for v in vals {
        let mut p = Complex::new(bits);
        for c in coeffs.iter().rev() {
            p = p * v + c;
        }
        let rel = (p.abs().real() / &scale).complete(bits).to_f64();
        worst = worst.max(rel);
    }
    worst
}

/// Labeled sheet values of the requested curve at a complex point.
pub fn sheets(ctx: &PrecisionContext, cfg: &CurveConfig, kind: CurveKind, z: &Cplx) -> Result<SheetValues> {
    let tracker = Tracker { ctx, cfg, kind };
    let vals = tracker.run(z, |_, _| {})?;
    let residual_max = residual_max_at(ctx, cfg, kind, z, &vals);
    Ok(SheetValues { z: z.clone(), values: vals, kind, residual_max })
}

pub fn zeta_sheets(ctx: &PrecisionContext, cfg: &CurveConfig, z: &Cplx) -> Result<SheetValues> {
    sheets(ctx, cfg, CurveKind::Zeta, z)
}

pub fn xi_sheets(ctx: &PrecisionContext, cfg: &CurveConfig, z: &Cplx) -> Result<SheetValues> {
    sheets(ctx, cfg, CurveKind::Xi, z)
}

/// One-sided boundary value at real x, offset by +-i eps with eps tied to the
/// working precision.
pub fn sheets_boundary(
    ctx: &PrecisionContext,
    cfg: &CurveConfig,
    kind: CurveKind,
    x: &Real,
    side: Side,
) -> Result<SheetValues> {
    let eps = boundary_eps(ctx, x);
    let z = match side {
        Side::Upper => ctx.complex(x, &eps),
        Side::Lower => ctx.complex(x, &(-eps)),
    };
    sheets(ctx, cfg, kind, &z)
}

pub fn boundary_eps(ctx: &PrecisionContext, x: &Real) -> Real {
    let mag = x.clone().abs().max(&ctx.real(1e-3));
    let e = Float::with_val(ctx.bits(), -((ctx.bits() / 2) as i32)).exp2();
    mag * e
}

/// Branch points with their finite branch values (None at the order-r point
/// z = 0 where all sheets blow up).
pub fn branch_points(ctx: &PrecisionContext, cfg: &CurveConfig, kind: CurveKind) -> Vec<BranchPoint> {
    let soft = cfg.soft_edge(ctx, kind);
    let value = match kind {
        CurveKind::Zeta => {
            // zeta* = (r+1)/(r z*)
            ctx.real(cfg.r + 1) / (ctx.real(cfg.r) * &soft)
        }
        CurveKind::Xi => ctx.real(cfg.r) / ctx.real(cfg.r + 1),
    };
    vec![
        BranchPoint { z: ctx.zero(), value: None, order: cfg.r },
        BranchPoint { z: soft, value: Some(value), order: 1 },
    ]
}

/// Density of the equilibrium measure encoded by the zeta curve:
/// rho(s) = Im zeta_{0,+}(s) / pi on (0, z*).
pub fn density_from_curve(ctx: &PrecisionContext, cfg: &CurveConfig, s: &Real) -> Result<Real> {
    let soft = cfg.soft_edge(ctx, CurveKind::Zeta);
    if !s.is_sign_positive() || s.is_zero() || *s >= soft {
        return Err(Error::OutsideSupport);
    }
    let sv = sheets_boundary(ctx, cfg, CurveKind::Zeta, s, Side::Upper)?;
    Ok(sv.values[0].imag().clone() / ctx.pi())
}

/// One verification record of `verify_sheet_properties`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub point: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CurveReport {
    pub kind: String,
    pub r: u32,
    pub records: Vec<CheckRecord>,
    pub residual_max: f64,
}

/// Cut gluing, Schwarz symmetry and the sign law, checked at the given
/// abscissae (gluing) and at generic complex points (symmetry, sign law).
pub fn verify_sheet_properties(
    ctx: &PrecisionContext,
    cfg: &CurveConfig,
    kind: CurveKind,
    sample_points: &[f64],
) -> Result<CurveReport> {
    let r = cfg.r;
    let bits = ctx.bits();
    let soft = cfg.soft_edge(ctx, kind).to_f64();
    let mut records = Vec::new();

    // (i) cut gluing: xi_{j,+} = xi_{j+1,-} with boundary values taken with
    // respect to contour orientation (away from the origin, so +/- swap on
    // the negative axis).
    for &x in sample_points {
        if x == 0.0 {
            continue;
        }
        let xr = ctx.real(x);
        let up = sheets_boundary(ctx, cfg, kind, &xr, Side::Upper)?;
        let dn = sheets_boundary(ctx, cfg, kind, &xr, Side::Lower)?;
        let glued: Vec<u32> = if x > 0.0 {
            let mut v = Vec::new();
            if x < soft {
                v.push(0);
            }
            let mut j = 2;
            while j + 1 <= r {
                v.push(j);
                j += 2;
            }
            v
        } else {
            let mut v = Vec::new();
            let mut j = 1;
            while j + 1 <= r {
                v.push(j);
                j += 2;
            }
            v
        };
        for j in glued {
            // Orientation away from origin: on x>0 the + side is the upper
            // half-plane, on x<0 it is the lower half-plane.
            let (plus, minus) = if x > 0.0 { (&up, &dn) } else { (&dn, &up) };
            let d = (&plus.values[j as usize] - &minus.values[j as usize + 1])
                .complete((bits, bits))
                .abs()
                .real()
                .to_f64();
            records.push(CheckRecord {
                check: format!("glue_{}_{}", j, j + 1),
                point: (x, 0.0),
                residual: d,
            });
        }
    }

    // (ii) Schwarz symmetry and (iii) sign law at generic complex points.
    for &x in sample_points {
        let z = ctx.complex(x, 0.37 * x.abs().max(0.1));
        let zb = ctx.complex(x, -0.37 * x.abs().max(0.1));
        let sv = sheets(ctx, cfg, kind, &z)?;
        let svb = sheets(ctx, cfg, kind, &zb)?;
        for j in 0..=(r as usize) {
            let d = (svb.values[j].clone().conj() - &sv.values[j])
                .abs()
                .real()
                .to_f64();
            records.push(CheckRecord {
                check: format!("schwarz_{j}"),
                point: (x, 0.37 * x.abs().max(0.1)),
                residual: d,
            });
            let im = sv.values[j].imag().to_f64();
            let expect = if j % 2 == 0 { 1.0 } else { -1.0 };
            let ok = im * expect > 0.0;
            records.push(CheckRecord {
                check: format!("sign_law_{j}"),
                point: (x, 0.37 * x.abs().max(0.1)),
                residual: if ok { 0.0 } else { 1.0 },
            });
        }
    }

    let residual_max = records.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(CurveReport {
        kind: format!("{kind:?}"),
        r,
        records,
        residual_max,
    })
}

/// Sampled images of the cuts in the branch plane, used by the geometric
/// branch bookkeeping of `eval_F`. Entry 0 is xi_{0,+}(Delta_0); entry j >= 1
/// is xi_{j,+}(Delta_j) taken with contour orientation.
pub fn cut_polylines(ctx: &PrecisionContext, cfg: &CurveConfig) -> Result<Vec<Vec<(f64, f64)>>> {
    let r = cfg.r;
    let q = cfg.q.to_f64();
    let mut cuts = Vec::new();
    // Cut 0: s in (0, q), + side = upper (oriented away from origin).
    {
        let mut pl = Vec::new();
        let n = 120;
        for k in 0..n {
            // log-spaced from q*(1 - 1e-6) down to q*1e-10
            let t = k as f64 / (n - 1) as f64;
            let s = q * (1.0 - 1e-6) * 1e-10f64.powf(t);
            let sv = sheets_boundary(ctx, cfg, CurveKind::Xi, &ctx.real(s), Side::Upper)?;
            pl.push((sv.values[0].real().to_f64(), sv.values[0].imag().to_f64()));
        }
        // Asymptotic continuation towards infinity in the limiting direction
        // omega^{1/2}.
        let last = pl.last().copied().unwrap();
        let mag = (last.0 * last.0 + last.1 * last.1).sqrt();
        let ang = std::f64::consts::PI / (r as f64 + 1.0);
        pl.push((1e6 * mag * ang.cos(), 1e6 * mag * ang.sin()));
        cuts.push(pl);
    }
    for j in 1..r {
        let side = if j % 2 == 1 { Side::Lower } else { Side::Upper };
        let sgn = if j % 2 == 1 { -1.0 } else { 1.0 };
        let mut pl = Vec::new();
        let n = 120;
        for k in 0..n {
            let t = k as f64 / (n - 1) as f64;
            // |s| from q*1e8 down to q*1e-8: xi_{j,+} runs from near 0 out to
            // large modulus.
            let s = sgn * q * 1e8f64 * 1e-16f64.powf(t);
            let sv = sheets_boundary(ctx, cfg, CurveKind::Xi, &ctx.real(s), side)?;
            pl.push((sv.values[j as usize].real().to_f64(), sv.values[j as usize].imag().to_f64()));
        }
        // Extend both ends: towards 0 along the incoming direction and to
        // infinity along the outgoing one.
        let first = pl.first().copied().unwrap();
        let fm = (first.0 * first.0 + first.1 * first.1).sqrt();
        let mut ext = vec![(first.0 / fm * 1e-12, first.1 / fm * 1e-12)];
        ext.extend(pl.iter().copied());
        let last = *ext.last().unwrap();
        let lm = (last.0 * last.0 + last.1 * last.1).sqrt();
        ext.push((last.0 / lm * 1e6 * lm, last.1 / lm * 1e6 * lm));
        cuts.push(ext);
    }
    Ok(cuts)
}
