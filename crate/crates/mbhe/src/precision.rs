//! Working-precision context and the shared numeric engines.
//!
//! Everything downstream computes with MPFR/MPC reals and complexes at a
//! precision carried by [`PrecisionContext`]. Composite operations report an
//! error estimate and escalate precision geometrically when they detect
//! cancellation, up to a configurable cap.

use rug::float::Special;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Arbitrary-precision real, backed by MPFR.
pub type Real = Float;
/// Arbitrary-precision complex, backed by MPC.
pub type Cplx = Complex;

pub const MIN_BITS: u32 = 64;
pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_CAP_BITS: u32 = 8192;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer argument {0}")]
    GammaPole(f64),
    #[error("precision exhausted at {reached} bits (cap {cap}): {what}")]
    PrecisionExhausted {
        what: String,
        reached: u32,
        cap: u32,
    },
    #[error("quadrature did not converge: estimated error {est:e} > tol {tol:e}")]
    QuadNoConvergence { est: f64, tol: f64 },
    #[error("series terms did not decay after {0} terms")]
    SeriesNoDecay(usize),
    #[error("leading polynomial coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("polynomial root iteration did not converge")]
    RootsNoConvergence,
    #[error("branch point within tolerance of requested point: root separation {0:e}")]
    BranchPointProximity(f64),
    #[error("point outside the support of the measure")]
    OutsideSupport,
    #[error("evaluation on a cut requires a side (use +/- epsilon offsets)")]
    OnCutWithoutSide,
    #[error("confluent Frobenius exponents: r*alpha is an integer (alpha = {0}); log-case is unsupported")]
    ConfluentExponents(f64),
    #[error("index {index} out of range {limit}")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("equilibrium solver did not converge: {0}")]
    NoConvergence(String),
    #[error("equilibrium support touches the domain cap M = {0}; raise M")]
    SupportAtCap(f64),
    #[error("singular linear system at column {0}")]
    SingularSystem(usize),
    #[error("divergent integral for the given weight")]
    DivergentIntegral,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Immutable working-precision handle threaded through all numeric operations.
///
/// `bits` is the binary mantissa precision; `target_tol` the absolute/relative
/// tolerance that composite operations (quadrature, series, factorizations)
/// aim for. Escalating operations double `bits` until the target is met or
/// `cap_bits` aborts.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    bits: u32,
    target_tol: Real,
    cap_bits: u32,
}

impl PrecisionContext {
    /// Context with `bits` working precision and tolerance `2^(16 - bits/2)`.
    pub fn new(bits: u32) -> Result<Self> {
        let bits = bits.max(MIN_BITS);
        let tol = Float::with_val(64, 16i32 - (bits / 2) as i32).exp2();
        Self::with_tol_real(bits, tol)
    }

    pub fn with_tol(bits: u32, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
        }
        Self::with_tol_real(bits, Float::with_val(64, tol))
    }

    fn with_tol_real(bits: u32, tol: Real) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidConfig(format!("bits must be >= {MIN_BITS}, got {bits}")));
        }
        Ok(Self {
            bits,
            target_tol: tol,
            cap_bits: DEFAULT_CAP_BITS.max(bits),
        })
    }

    pub fn with_cap(mut self, cap_bits: u32) -> Self {
        self.cap_bits = cap_bits.max(self.bits);
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn cap_bits(&self) -> u32 {
        self.cap_bits
    }

    pub fn tol(&self) -> &Real {
        &self.target_tol
    }

    pub fn tol_f64(&self) -> f64 {
        self.target_tol.to_f64()
    }

    /// Same tolerance, twice the working precision. Errors at the cap.
    pub fn escalate(&self, what: &str) -> Result<Self> {
        let next = self.bits.saturating_mul(2);
        if next > self.cap_bits {
            return Err(Error::PrecisionExhausted {
                what: what.to_string(),
                reached: self.bits,
                cap: self.cap_bits,
            });
        }
        Ok(Self {
            bits: next,
            target_tol: self.target_tol.clone(),
            cap_bits: self.cap_bits,
        })
    }

    /// Same tolerance at an explicitly chosen precision (used when the needed
    /// head-room is known in advance, e.g. series with a predictable peak term).
    pub fn at_bits(&self, bits: u32) -> Self {
        Self {
            bits: bits.clamp(MIN_BITS, self.cap_bits.max(bits)),
            target_tol: self.target_tol.clone(),
            cap_bits: self.cap_bits.max(bits),
        }
    }

    // -- constructors for scalars at this precision --

    pub fn real<T>(&self, v: T) -> Real
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Real {
        Float::with_val(self.bits, 1)
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    pub fn complex<T, U>(&self, re: T, im: U) -> Cplx
    where
        Float: rug::Assign<T> + rug::Assign<U>,
    {
        Complex::with_val(self.bits, (Float::with_val(self.bits, re), Float::with_val(self.bits, im)))
    }

    pub fn czero(&self) -> Cplx {
        Complex::new(self.bits)
    }

    pub fn cone(&self) -> Cplx {
        Complex::with_val(self.bits, (1, 0))
    }

    pub fn i(&self) -> Cplx {
        Complex::with_val(self.bits, (0, 1))
    }

    pub fn creal(&self, v: &Real) -> Cplx {
        Complex::with_val(self.bits, (v, &Float::new(self.bits)))
    }

    /// exp(2 pi i t) at context precision.
    pub fn unit_phase(&self, t: &Real) -> Cplx {
        let two_pi = self.pi() * 2u32;
        let angle = t.clone() * &two_pi;
        let (sin, cos) = angle.sin_cos(Float::new(self.bits));
        Complex::with_val(self.bits, (cos, sin))
    }

    /// exp(2 pi i p/q) for rational phase p/q.
    pub fn unit_phase_rat(&self, p: i64, q: u64) -> Cplx {
        let t = self.real(p) / self.real(q);
        self.unit_phase(&t)
    }
}

/// Gamma function for real arguments at context precision.
///
/// MPFR computes the value with correct rounding; negative non-integer
/// arguments go through the reflection formula internally. Poles at
/// non-positive integers are reported as errors.
pub fn eval_gamma(ctx: &PrecisionContext, x: &Real) -> Result<Real> {
    if x.is_integer() && !x.is_sign_positive() || (x.is_zero()) {
        return Err(Error::GammaPole(x.to_f64()));
    }
    if x.is_integer() && x.to_f64() <= 0.0 {
        return Err(Error::GammaPole(x.to_f64()));
    }
    let mut v = Float::with_val(ctx.bits(), x);
    v.gamma_mut();
    if v.is_nan() || v.is_infinite() {
        return Err(Error::GammaPole(x.to_f64()));
    }
    Ok(v)
}

/// Convenience wrapper taking an f64 argument.
pub fn eval_gamma_f64(ctx: &PrecisionContext, x: f64) -> Result<Real> {
    eval_gamma(ctx, &ctx.real(x))
}

/// ln Gamma(z) for complex z via Stirling's series with argument shifting.
///
/// Used by the Mellin-Barnes oracle; the branch is the standard one obtained
/// from the recurrence lnGamma(z) = lnGamma(z+1) - ln(z), analytic off the
/// negative real axis.
pub fn ln_gamma_complex(ctx: &PrecisionContext, z: &Cplx) -> Cplx {
    let bits = ctx.bits();
    // Stirling's series converges once Re(z) is a modest multiple of the digit
    // count; shift up by recurrence first.
    let sigma0 = 10.0 + 0.30 * bits as f64;
    let mut shift_log = Complex::new(bits);
    let mut w = Complex::with_val(bits, z);
    while w.real().to_f64() < sigma0 {
        shift_log += w.clone().ln();
        w += 1u32;
    }
    // lnGamma(w) = (w - 1/2) ln w - w + ln(2 pi)/2 + sum B_{2n} / (2n(2n-1) w^{2n-1})
    let ln_w = w.clone().ln();
    let half = Float::with_val(bits, 0.5);
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let mut acc = (w.clone() - &half) * &ln_w - &w + two_pi.ln() / 2u32;
    let w2 = w.clone().square();
    let mut w_pow = w.clone(); // w^{2n-1}
    let mut prev_mag = f64::INFINITY;
    for n in 1..=(8 + bits / 8) {
        let b2n = bernoulli_2n(ctx, n);
        let denom = Float::with_val(bits, 2 * n as u32) * Float::with_val(bits, (2 * n - 1) as u32);
        let term = (w_pow.clone() * denom).recip() * &b2n;
        let mag = term_mag(&term);
        acc += &term;
        // Asymptotic series: stop at the smallest term.
        if mag >= prev_mag || mag < 1e-300 * acc_mag(&acc).max(1.0) {
            break;
        }
        prev_mag = mag;
        w_pow *= &w2;
    }
    acc - shift_log
}

fn term_mag(c: &Cplx) -> f64 {
    let r = c.real().to_f64().abs();
    let i = c.imag().to_f64().abs();
    r.max(i)
}

fn acc_mag(c: &Cplx) -> f64 {
    term_mag(c)
}

/// Bernoulli number B_{2n} via the zeta function: B_{2n} = (-1)^{n+1} 2 (2n)! zeta(2n) / (2 pi)^{2n}.
fn bernoulli_2n(ctx: &PrecisionContext, n: u32) -> Real {
    let bits = ctx.bits();
    let zeta = Float::with_val(bits, Float::zeta_u(2 * n));
    let mut fact = Float::with_val(bits, 1);
    for k in 2..=(2 * n) {
        fact *= k;
    }
    let two_pi = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    let pow = two_pi.pow(2 * n as i32);
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Float::with_val(bits, sign) * 2u32 * fact * zeta / pow
}

/// Sum of `term(k)` for k = 0.. with a rigorous geometric tail majorant.
///
/// Terms must eventually decay superlinearly (factorial-type denominators).
/// Summation stops once |term| < tol and the running ratio |t_k/t_{k-1}| has
/// stayed below 1/2 for two consecutive terms, bounding the tail by twice the
/// first omitted term.
pub fn sum_series<F>(ctx: &PrecisionContext, mut term: F, tol: &Real) -> Result<(Cplx, Real)>
where
    F: FnMut(usize) -> Cplx,
{
    const HARD_CAP: usize = 200_000;
    let bits = ctx.bits();
    let mut acc = Complex::new(bits);
    let mut prev_mag = Float::with_val(bits, Special::Infinity);
    let mut small_ratio_streak = 0usize;
    for k in 0..HARD_CAP {
        let t = term(k);
        let mag = t.clone().abs().real().clone();
        acc += &t;
        if mag < *tol {
            if mag <= (prev_mag.clone() / 2u32) {
                small_ratio_streak += 1;
            } else {
                small_ratio_streak = 0;
            }
            if small_ratio_streak >= 2 {
                let tail = mag.clone() * 2u32;
                return Ok((acc, tail));
            }
        } else {
            small_ratio_streak = 0;
        }
        prev_mag = mag;
    }
    Err(Error::SeriesNoDecay(HARD_CAP))
}

/// max |entry| of a complex matrix stored row-major.
pub fn mat_max_norm(m: &[Vec<Cplx>]) -> f64 {
    m.iter()
        .flat_map(|row| row.iter())
        .map(term_mag)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_tol(256, 1e-40).unwrap()
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        let c = ctx();
        let g = eval_gamma_f64(&c, 0.5).unwrap();
        let sqrt_pi = c.pi().sqrt();
        let diff = (g - sqrt_pi).abs();
        assert!(diff.to_f64() < 1e-70);
    }

    #[test]
    fn gamma_five_is_24() {
        let c = ctx();
        let g = eval_gamma_f64(&c, 5.0).unwrap();
        assert!((g - 24u32).abs().to_f64() < 1e-70);
    }

    #[test]
    fn gamma_negative_half_reflection() {
        let c = ctx();
        // Derived oracle: product recursion Gamma(x+1) = x Gamma(x) applied to
        // x = -1/2 gives Gamma(-1/2) = Gamma(1/2)/(-1/2) = -2 sqrt(pi).
        let g = eval_gamma_f64(&c, -0.5).unwrap();
        let oracle = eval_gamma_f64(&c, 0.5).unwrap() / c.real(-0.5);
        assert!((g - oracle).abs().to_f64() < 1e-70);
    }

    #[test]
    fn gamma_pole_errors() {
        let c = ctx();
        assert!(matches!(eval_gamma_f64(&c, 0.0), Err(Error::GammaPole(_))));
        assert!(matches!(eval_gamma_f64(&c, -3.0), Err(Error::GammaPole(_))));
    }

    #[test]
    fn gamma_recursion_property() {
        // Gamma(x+1) = x Gamma(x) for a deterministic pseudo-random sample.
        let c = ctx();
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..1000 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let x = 1e-3 + (state >> 11) as f64 / (1u64 << 53) as f64 * 50.0;
            let xr = c.real(x);
            let lhs = eval_gamma(&c, &(xr.clone() + 1u32)).unwrap();
            let rhs = xr.clone() * eval_gamma(&c, &xr).unwrap();
            let rel = ((lhs - &rhs) / &rhs).abs().to_f64();
            assert!(rel < 1e-70, "x = {x}, rel = {rel:e}");
        }
    }

    #[test]
    fn series_exp_minus_one() {
        let c = ctx();
        // sum (-1)^k / k! = 1/e
        let mut fact = c.one();
        let mut terms: Vec<Cplx> = Vec::new();
        for k in 0..200 {
            if k > 0 {
                fact *= k as u32;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            terms.push(c.complex(sign, 0.0) / c.creal(&fact));
        }
        let (s, tail) = sum_series(&c, |k| terms[k].clone(), &c.real(1e-60)).unwrap();
        let e_inv = c.one() / c.real(1.0).exp();
        let err = (s.real().clone() - e_inv).abs().to_f64();
        assert!(err < 1e-55, "err {err:e}");
        assert!(tail.to_f64() < 1e-55);
    }

    #[test]
    fn series_bessel_i0_oracle() {
        let c = ctx();
        // sum x^k/(k!)^2 at x=1 equals I_0(2), cross-checked against MPFR's i0.
        let mut fact = c.one();
        let mut terms = Vec::new();
        for k in 0..200 {
            if k > 0 {
                fact *= k as u32;
            }
            let f2 = fact.clone().square();
            terms.push(c.cone() / c.creal(&f2));
        }
        let (s, _) = sum_series(&c, |k| terms[k].clone(), &c.real(1e-60)).unwrap();
        // Classical value of I_0(2), frozen from the Bessel series at 40 digits.
        let oracle = Float::parse("2.279585302336067267437204440811533353286")
            .map(|v| Float::with_val(c.bits(), v))
            .unwrap();
        assert!((s.real().clone() - oracle).abs().to_f64() < 1e-38);
    }

    #[test]
    fn series_zero() {
        let c = ctx();
        let (s, tail) = sum_series(&c, |_| c.czero(), &c.real(1e-60)).unwrap();
        assert!(s.clone().abs().real().to_f64() == 0.0);
        assert!(tail.to_f64() < 1e-55);
    }

    #[test]
    fn complex_lngamma_matches_real_gamma() {
        let c = ctx();
        for &x in &[0.31f64, 1.7, 5.25, 12.0] {
            let lg = ln_gamma_complex(&c, &c.complex(x, 0.0));
            let g = eval_gamma_f64(&c, x).unwrap().ln();
            assert!((lg.real().clone() - g).abs().to_f64() < 1e-65, "x={x}");
            assert!(lg.imag().to_f64().abs() < 1e-65);
        }
    }

    #[test]
    fn complex_lngamma_reflection() {
        let c = ctx();
        // Gamma(z) Gamma(1-z) = pi / sin(pi z) at a complex point.
        let z = c.complex(0.3, 0.7);
        let one_minus_z = c.cone() - &z;
        let lhs = (ln_gamma_complex(&c, &z) + ln_gamma_complex(&c, &one_minus_z)).exp();
        let pi = c.pi();
        let rhs = c.creal(&pi) / (c.creal(&pi) * &z).sin();
        let diff = (lhs - rhs).abs().real().to_f64();
        assert!(diff < 1e-65, "diff {diff:e}");
    }
}
