//! Smooth test functions with evaluable transforms.
//!
//! Two kinds only.  Gaussians have the closed-form transform
//! `w sqrt(2 pi) exp(-izc - w^2 z^2 / 2)` at any complex argument, and
//! their half-line integrals against exponentials reduce to the scaled
//! complex error function.  Bumps are compactly supported, so atom sums
//! against them are exactly finite; their transforms are entire and
//! computed by spectrally convergent quadrature.
//!
//! The transform convention throughout is
//! `phi_hat(z) = integral phi(t) exp(-izt) dt`.

use num_complex::Complex64;
use thiserror::Error;

use crate::faddeeva::faddeeva;
use crate::quad::{self, QuadratureStall};

/// Relative level below which a gaussian is treated as zero; the
/// effective support radius is the matching multiple of the width.
pub const GAUSSIAN_SUPPORT_LEVEL: f64 = 1e-18;
/// `sqrt(-2 ln GAUSSIAN_SUPPORT_LEVEL)`.
pub const GAUSSIAN_SUPPORT_RADIUS: f64 = 9.104595869359033;

const SQRT_TWO_PI: f64 = 2.5066282746310005024157652848110;

#[derive(Debug, Error)]
pub enum TestFunctionError {
    #[error("unparseable test-function spec {spec:?}: {reason}")]
    Parse { spec: String, reason: String },
    #[error("width must be positive, got {0}")]
    NonPositiveWidth(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunctionKind {
    Gaussian,
    Bump,
}

/// A smooth test function, `gaussian` or `bump`, described by center and
/// width.  The bump profile is `exp(1 - 1/(1-u^2))` with `u = (t-c)/w`,
/// normalized to peak value 1 and supported on `[c-w, c+w]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    kind: TestFunctionKind,
    center: f64,
    width: f64,
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64) -> Result<Self, TestFunctionError> {
        if !(width > 0.0) {
            return Err(TestFunctionError::NonPositiveWidth(width));
        }
        Ok(Self { kind: TestFunctionKind::Gaussian, center, width })
    }

    pub fn bump(center: f64, width: f64) -> Result<Self, TestFunctionError> {
        if !(width > 0.0) {
            return Err(TestFunctionError::NonPositiveWidth(width));
        }
        Ok(Self { kind: TestFunctionKind::Bump, center, width })
    }

    /// Parses the CLI spec syntax `gaussian:center=C,width=W` or
    /// `bump:center=C,width=W`.
    pub fn parse(spec: &str) -> Result<Self, TestFunctionError> {
        let err = |reason: &str| TestFunctionError::Parse {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (kind_str, rest) = spec.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let mut center = None;
        let mut width = None;
        for part in rest.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| err("expected key=value pairs"))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(&format!("bad number for {key}")))?;
            match key.trim() {
                "center" => center = Some(value),
                "width" => width = Some(value),
                other => return Err(err(&format!("unknown key {other:?}"))),
            }
        }
        let center = center.ok_or_else(|| err("missing center"))?;
        let width = width.ok_or_else(|| err("missing width"))?;
        match kind_str.trim() {
            "gaussian" => Self::gaussian(center, width),
            "bump" => Self::bump(center, width),
            other => Err(err(&format!("unknown kind {other:?}"))),
        }
    }

    pub fn kind(&self) -> TestFunctionKind {
        self.kind
    }

    /// The `kind:center=C,width=W` form accepted by `parse`.
    pub fn spec_string(&self) -> String {
        let kind = match self.kind {
            TestFunctionKind::Gaussian => "gaussian",
            TestFunctionKind::Bump => "bump",
        };
        format!("{kind}:center={},width={}", self.center, self.width)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// The interval outside which the function is zero (bump) or below
    /// the `GAUSSIAN_SUPPORT_LEVEL` relative threshold (gaussian).
    pub fn support(&self) -> (f64, f64) {
        let r = match self.kind {
            TestFunctionKind::Gaussian => GAUSSIAN_SUPPORT_RADIUS * self.width,
            TestFunctionKind::Bump => self.width,
        };
        (self.center - r, self.center + r)
    }

    /// `phi(-t)` is again a test function of the same kind.
    pub fn reflected(&self) -> Self {
        Self { center: -self.center, ..*self }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.width;
        match self.kind {
            TestFunctionKind::Gaussian => (-0.5 * u * u).exp(),
            TestFunctionKind::Bump => {
                if u.abs() < 1.0 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// `phi_hat(z) = integral phi(t) exp(-izt) dt` for complex `z`.
    ///
    /// The gaussian value is the closed form; the bump transform is
    /// entire by compact support and integrated numerically.
    pub fn fourier_hat(&self, z: Complex64) -> Result<Complex64, QuadratureStall> {
        match self.kind {
            TestFunctionKind::Gaussian => {
                let w = self.width;
                let exponent =
                    -Complex64::i() * z * self.center - 0.5 * w * w * z * z;
                Ok(w * SQRT_TWO_PI * exponent.exp())
            }
            TestFunctionKind::Bump => {
                let (a, b) = self.support();
                // the integrand can reach exp(|Im z| max|t|) in modulus;
                // the absolute floor for the stop rule scales with it
                let reach = (z.im.abs() * a.abs().max(b.abs())).exp();
                let floor = 1e-16 * self.width * reach;
                let (value, _) = quad::trapezoid_doubling(
                    |t| self.eval(t) * (-Complex64::i() * z * t).exp(),
                    a,
                    b,
                    1e-13,
                    floor,
                    26,
                )?;
                Ok(value)
            }
        }
    }

    /// `integral_0^inf phi(t) exp(zt) dt`.
    ///
    /// For gaussians this is `sqrt(pi/2) w exp(-c^2/2w^2) w_F(zeta)` with
    /// `zeta = -i (c + w^2 z) / (sqrt2 w)`; when `Im zeta < 0` the
    /// reflection of `w_F` is folded into the exponent before
    /// exponentiating, so the value never overflows even for centers far
    /// from the axis.
    pub fn half_line_transform(&self, z: Complex64) -> Result<Complex64, QuadratureStall> {
        match self.kind {
            TestFunctionKind::Gaussian => {
                let w = self.width;
                let c = self.center;
                let pref = (std::f64::consts::PI / 2.0).sqrt() * w;
                let zeta = -Complex64::i() * (c + w * w * z) / (std::f64::consts::SQRT_2 * w);
                let base = Complex64::new(-c * c / (2.0 * w * w), 0.0);
                if zeta.im >= 0.0 {
                    Ok(pref * base.exp() * faddeeva(zeta))
                } else {
                    // w_F(zeta) = 2 exp(-zeta^2) - w_F(-zeta)
                    let grown = (base - zeta * zeta).exp();
                    Ok(pref * (2.0 * grown - base.exp() * faddeeva(-zeta)))
                }
            }
            TestFunctionKind::Bump => {
                let (a, b) = self.support();
                let lo = a.max(0.0);
                if b <= 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                // tolerance measured against the integrand scale, not the
                // (possibly cancelled-to-nothing) oscillatory integral
                let envelope = (b - lo) * (z.re * lo).max(z.re * b).exp();
                let (value, _) = quad::adaptive_scaled(
                    |t| self.eval(t) * (z * t).exp(),
                    lo,
                    b,
                    1e-13,
                    envelope,
                    40_000,
                )?;
                Ok(value)
            }
        }
    }

    /// `integral_R phi(t) exp(z |t|) dt`.
    pub fn symmetric_transform(&self, z: Complex64) -> Result<Complex64, QuadratureStall> {
        Ok(self.half_line_transform(z)? + self.reflected().half_line_transform(z)?)
    }

    /// `phi^(n)(0)`.  Gaussian derivatives come from the Hermite
    /// recurrence; bump derivatives from Richardson-extrapolated central
    /// differences on a halving step cascade, accepted when two
    /// successive extrapolations agree to 1e-9.
    pub fn derivative_at_zero(&self, order: u32) -> f64 {
        if order == 0 {
            return self.eval(0.0);
        }
        match self.kind {
            TestFunctionKind::Gaussian => {
                // d^n/du^n e^{-u^2/2} = (-1)^n He_n(u) e^{-u^2/2}
                let u = -self.center / self.width;
                let mut he_prev = 1.0;
                let mut he = u;
                for n in 1..order {
                    let next = u * he - n as f64 * he_prev;
                    he_prev = he;
                    he = next;
                }
                let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
                sign * he * (-0.5 * u * u).exp() / self.width.powi(order as i32)
            }
            TestFunctionKind::Bump => central_difference_derivative(self, order),
        }
    }
}

/// Richardson table over central differences with steps 1e-2, 5e-3, ...
///
/// The n-th order stencil divides by h^n, so its roundoff floor is
/// eps/h^n; orders above 3 start from a larger step to keep that floor
/// below the 1e-9 agreement target.
fn central_difference_derivative(phi: &TestFunction, order: u32) -> f64 {
    let n = order as i64;
    // central stencil for the n-th derivative: sum (-1)^j C(n,j) phi(x + (n/2 - j) h) / h^n
    let stencil = |h: f64| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0f64;
        for j in 0..=n {
            let offset = (n as f64 / 2.0) - j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * phi.eval(offset * h);
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        acc / h.powi(order as i32)
    };
    let mut prev_row: Vec<f64> = Vec::new();
    let mut h = if order <= 3 { 1e-2 } else { 8e-2 };
    let mut last_best = f64::INFINITY;
    let mut floor_diff = f64::INFINITY;
    let mut floor_value = f64::NAN;
    for step in 0..16 {
        let mut row = vec![stencil(h)];
        // even-power error expansion: Richardson factors 4^k, depth capped
        // before roundoff in the stencil starts to amplify
        for k in 1..=prev_row.len().min(8) {
            let factor = 4.0f64.powi(k as i32);
            let refined = (factor * row[k - 1] - prev_row[k - 1]) / (factor - 1.0);
            row.push(refined);
        }
        let best = *row.last().unwrap();
        if step > 0 {
            let diff = (best - last_best).abs();
            if diff <= 1e-9 * best.abs().max(1.0) {
                return best;
            }
            // past the roundoff floor further halving only adds noise
            if diff < floor_diff {
                floor_diff = diff;
                floor_value = best;
            } else if diff > 100.0 * floor_diff {
                return floor_value;
            }
        }
        last_best = best;
        prev_row = row;
        h *= 0.5;
    }
    floor_value
}
