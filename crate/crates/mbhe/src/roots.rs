//! Simultaneous polynomial root finding (Aberth-Ehrlich) at context precision.

use crate::precision::{Cplx, Error, PrecisionContext, Real, Result};
use rug::ops::CompleteRound;
use rug::{Complex, Float};

/// All roots of a polynomial, deterministically ordered by (Re, Im).
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Cplx>,
    /// max over roots of |p(root)| / (sum_k |c_k| |root|^k)
    pub residual_max: f64,
    /// Set when two roots are closer than the clustering threshold; such
    /// near-multiple roots are returned but their accuracy is degraded.
    pub condition_warning: bool,
}

/// Horner evaluation of p and p' with coefficients lowest-first.
fn horner2(coeffs: &[Cplx], z: &Cplx, bits: u32) -> (Cplx, Cplx) {
    let mut p = Complex::new(bits);
    let mut dp = Complex::new(bits);
    for c in coeffs.iter().rev() {
        dp = dp * z + &p;
        p = p * z + c;
    }
    (p, dp)
}

/// Backward-error scale: sum_k |c_k| |z|^k.
fn scale_at(coeffs: &[Cplx], z: &Cplx, bits: u32) -> Real {
    let az = z.clone().abs().real().clone();
    let mut s = Float::new(bits);
    let mut pw = Float::with_val(bits, 1);
    for c in coeffs {
        s += c.clone().abs().real() * &pw;
        pw *= &az;
    }
    s
}

/// Find all roots of `sum_k coeffs[k] z^k` with the Aberth-Ehrlich iteration.
///
/// `warm_start`, when given, must contain exactly `deg` approximations and is
/// used as the initial configuration (root tracking along paths relies on
/// this). Roots are returned sorted by (Re, Im); multiplicities appear as
/// clusters and set `condition_warning`.
pub fn poly_roots(
    ctx: &PrecisionContext,
    coeffs: &[Cplx],
    warm_start: Option<&[Cplx]>,
) -> Result<RootSet> {
    let (mut z, residual_max, condition_warning) = poly_roots_core(ctx, coeffs, warm_start)?;
    z.sort_by(|a, b| {
        a.real()
            .partial_cmp(b.real())
            .unwrap()
            .then_with(|| a.imag().partial_cmp(b.imag()).unwrap())
    });
    Ok(RootSet { roots: z, residual_max, condition_warning })
}

fn poly_roots_core(
    ctx: &PrecisionContext,
    coeffs: &[Cplx],
    warm_start: Option<&[Cplx]>,
) -> Result<(Vec<Cplx>, f64, bool)> {
    let bits = ctx.bits();
    let mut c: Vec<Cplx> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().clone().abs().real().is_zero() {
        c.pop();
    }
    if c.len() <= 1 {
        if coeffs.is_empty() || c.last().map(|l| l.clone().abs().real().is_zero()).unwrap_or(true) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        return Ok((vec![], 0.0, false));
    }
    let deg = c.len() - 1;
    let lead = c[deg].clone();
    let monic: Vec<Cplx> = c.iter().map(|ck| (ck / &lead).complete((bits, bits))).collect();

    // Initial guesses: warm start, or points on a Cauchy-bound circle with a
    // deterministic angular offset that is not a root-of-unity symmetry.
    let mut z: Vec<Cplx> = match warm_start {
        Some(ws) if ws.len() == deg => ws.to_vec(),
        _ => {
            let mut radius = Float::new(bits);
            for k in 0..deg {
                let m = monic[k].clone().abs().real().clone();
                if m > radius {
                    radius = m;
                }
            }
            radius += 1u32;
            (0..deg)
                .map(|k| {
                    let t = (ctx.real(k as u32) + ctx.real(0.3770123)) / ctx.real(deg as u32);
                    let ph = ctx.unit_phase(&t);
                    ph * &radius
                })
                .collect()
        }
    };

    let tol = {
        // Aim for the full working precision; the caller's ctx.tol is often
        // much looser than what the iteration can cheaply deliver.
        let e = -(bits as i32) + 8;
        Float::with_val(bits, e).exp2()
    };

    let max_iter = 220;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut max_step = Float::new(bits);
        for i in 0..deg {
            let (p, dp) = horner2(&monic, &z[i], bits);
            if p.clone().abs().real().is_zero() {
                continue;
            }
            let newton = if dp.clone().abs().real().is_zero() {
                // Perturb out of a critical point deterministically.
                ctx.complex(1e-20, 1e-20)
            } else {
                p / &dp
            };
            let mut sum_inv = Complex::new(bits);
            for j in 0..deg {
                if j != i {
                    let d = (&z[i] - &z[j]).complete((bits, bits));
                    if d.clone().abs().real().is_zero() {
                        continue;
                    }
                    sum_inv += d.recip();
                }
            }
            let denom = ctx.cone() - newton.clone() * &sum_inv;
            let w = if denom.clone().abs().real().is_zero() {
                newton
            } else {
                newton / denom
            };
            let step = w.clone().abs().real().clone();
            let local = z[i].clone().abs().real().clone() + 1u32;
            let rel = step / local;
            if rel > max_step {
                max_step = rel;
            }
            z[i] -= &w;
        }
        if max_step < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootsNoConvergence);
    }

    // Residuals and clustering.
    let mut residual_max = 0.0f64;
    for zi in &z {
        let (p, _) = horner2(&c, zi, bits);
        let s = scale_at(&c, zi, bits);
        let r = if s.is_zero() { 0.0 } else { (p.abs().real() / &s).complete(bits).to_f64() };
        residual_max = residual_max.max(r);
    }
    let cluster_tol = Float::with_val(bits, -(bits as i32) / 3).exp2();
    let mut condition_warning = false;
    'outer: for i in 0..deg {
        for j in (i + 1)..deg {
            let d = (&z[i] - &z[j]).complete((bits, bits)).abs().real().clone();
            let scale = z[i].clone().abs().real().clone() + 1u32;
            if d < (cluster_tol.clone() * scale) {
                condition_warning = true;
                break 'outer;
            }
        }
    }

    Ok((z, residual_max, condition_warning))
}

/// Roots in warm-start order (no sorting), for continuation tracking where
/// index identity encodes the sheet label. Falls back to the deterministic
/// cold start when no warm start is given.
pub fn poly_roots_unordered(
    ctx: &PrecisionContext,
    coeffs: &[Cplx],
    warm_start: Option<&[Cplx]>,
) -> Result<Vec<Cplx>> {
    let rs = poly_roots_core(ctx, coeffs, warm_start)?;
    Ok(rs.0)
}

/// Roots of a polynomial with real f64 coefficients (test convenience).
pub fn poly_roots_f64(ctx: &PrecisionContext, coeffs: &[f64]) -> Result<RootSet> {
    let c: Vec<Cplx> = coeffs.iter().map(|&x| ctx.complex(x, 0.0)).collect();
    poly_roots(ctx, &c, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_tol(192, 1e-40).unwrap()
    }

    #[test]
    fn quadratic_pm_i() {
        let c = ctx();
        let rs = poly_roots_f64(&c, &[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(rs.roots.len(), 2);
        // sorted by (Re, Im): -i then +i
        assert!((rs.roots[0].imag().to_f64() + 1.0).abs() < 1e-40);
        assert!((rs.roots[1].imag().to_f64() - 1.0).abs() < 1e-40);
        assert!(rs.residual_max < 1e-40);
    }

    #[test]
    fn cube_roots_of_unity() {
        let c = ctx();
        let rs = poly_roots_f64(&c, &[-1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(rs.roots.len(), 3);
        let one = rs
            .roots
            .iter()
            .find(|z| (z.real().to_f64() - 1.0).abs() < 1e-30)
            .expect("root 1 present");
        assert!(one.imag().to_f64().abs() < 1e-30);
        for z in &rs.roots {
            let m = z.clone().abs().real().to_f64();
            assert!((m - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn double_root_flagged() {
        // zeta^2 - zeta + 1/z at z = 4: discriminant vanishes, double root 1/2.
        let c = ctx();
        let rs = poly_roots_f64(&c, &[0.25, -1.0, 1.0]).unwrap();
        assert!(rs.condition_warning, "near-multiple roots must be flagged");
        for z in &rs.roots {
            assert!((z.real().to_f64() - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn vieta_identities() {
        // Sum of roots = -c_{d-1}/c_d, product = (-1)^d c_0/c_d.
        let c = ctx();
        let coeffs = [3.5, -2.0, 0.75, 1.25, 2.0];
        let rs = poly_roots_f64(&c, &coeffs).unwrap();
        let mut sum = c.czero();
        let mut prod = c.cone();
        for z in &rs.roots {
            sum += z;
            prod = prod * z;
        }
        assert!((sum + c.complex(1.25 / 2.0, 0.0)).abs().real().to_f64() < 1e-38);
        let expect = 3.5 / 2.0; // (-1)^4 c0/c4
        assert!((prod - c.complex(expect, 0.0)).abs().real().to_f64() < 1e-37);
    }

    #[test]
    fn zero_leading_coefficient_errors() {
        let c = ctx();
        assert!(matches!(poly_roots_f64(&c, &[0.0, 0.0]), Err(Error::ZeroLeadingCoefficient)));
        // A nonzero constant has no roots but a valid leading coefficient.
        let rs = poly_roots_f64(&c, &[1.0]).unwrap();
        assert!(rs.roots.is_empty());
    }
}
