//! Atom–surface interaction: the Morse core joined to a retarded van der
//! Waals (Casimir) tail, the Fourier couplings of a strip grating and the
//! Woods–Saxon absorber.
//!
//! The perpendicular potential is
//!
//! ```text
//! V(z) = D [exp(-2χz) - 2 exp(-χz)]     z <  z̄
//! V(z) = -C4 / ((l + z) z³)             z >= z̄,   C4 = C3 l
//! ```
//!
//! with the well depth `D` and matching point `z̄` fixed by continuity of `V`
//! and `V'`. The Morse minimum sits at `z = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Search bracket for the matching point, Å.
pub const MATCHING_BRACKET: (f64, f64) = (0.1, 50.0);
/// Number of scan points used to bracket sign changes of the matching residual.
pub const MATCHING_SCAN_POINTS: usize = 10_000;
const BISECTION_TOL: f64 = 1e-12;

/// Exponent clamp for the Woods–Saxon profile.
const WS_EXPONENT_CLAMP: f64 = 700.0;

/// The perpendicular interaction `V(z)` after matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePotential {
    /// Morse stiffness χ, Å⁻¹.
    pub chi: f64,
    /// van der Waals coefficient C3, meV·Å³.
    pub c3: f64,
    /// van der Waals → Casimir crossover length, Å.
    pub l: f64,
    /// C4 = C3·l, meV·Å⁴.
    pub c4: f64,
    /// Morse well depth, meV.
    pub d_well: f64,
    /// Matching point, Å.
    pub z_bar: f64,
}

/// Solution of the matching problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matching {
    pub d_well: f64,
    pub z_bar: f64,
}

/// Ratio V/V' of the Morse branch, independent of D.
fn morse_log_ratio(z: f64, chi: f64) -> f64 {
    let u = (-chi * z).exp();
    // (u² - 2u) / (2χ(u - u²)) with one factor of u cancelled
    (u - 2.0) / (2.0 * chi * (1.0 - u))
}

/// Ratio V/V' of the Casimir branch, independent of C4.
fn casimir_log_ratio(z: f64, l: f64) -> f64 {
    -z * (l + z) / (4.0 * z + 3.0 * l)
}

/// Matching residual whose roots are the candidate `z̄`. Both branches have
/// V/V' independent of their amplitude, so `z̄` depends on (χ, l) only and
/// `D` follows from value continuity.
pub fn matching_residual(z: f64, chi: f64, l: f64) -> f64 {
    morse_log_ratio(z, chi) - casimir_log_ratio(z, l)
}

fn morse(z: f64, chi: f64, d: f64) -> f64 {
    let u = (-chi * z).exp();
    d * (u * u - 2.0 * u)
}

fn morse_derivative(z: f64, chi: f64, d: f64) -> f64 {
    let u = (-chi * z).exp();
    2.0 * chi * d * (u - u * u)
}

fn casimir(z: f64, c4: f64, l: f64) -> f64 {
    -c4 / ((l + z) * z * z * z)
}

fn casimir_derivative(z: f64, c4: f64, l: f64) -> f64 {
    let lz = l + z;
    c4 * (4.0 * z + 3.0 * l) / (lz * lz * z.powi(4))
}

/// Solves value and slope continuity between the Morse and Casimir branches
/// for `(D, z̄)`.
///
/// The residual is scanned on [`MATCHING_SCAN_POINTS`] points across
/// [`MATCHING_BRACKET`]; every sign change is refined by bisection. Exactly
/// one root must exist.
pub fn solve_matching(chi: f64, c3: f64, l: f64) -> Result<Matching> {
    for (name, v) in [("chi", chi), ("c3", c3), ("l", l)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let (lo, hi) = MATCHING_BRACKET;
    let f = |z: f64| matching_residual(z, chi, l);
    let step = (hi - lo) / (MATCHING_SCAN_POINTS - 1) as f64;

    let mut roots = Vec::new();
    let mut z_prev = lo;
    let mut f_prev = f(lo);
    for i in 1..MATCHING_SCAN_POINTS {
        let z = lo + step * i as f64;
        let fz = f(z);
        if f_prev == 0.0 {
            roots.push(z_prev);
        } else if f_prev.signum() != fz.signum() && fz != 0.0 {
            roots.push(bisect(&f, z_prev, z, f_prev));
        }
        z_prev = z;
        f_prev = fz;
    }
    if f_prev == 0.0 {
        roots.push(z_prev);
    }

    match roots.as_slice() {
        [] => Err(Error::NoMatchingRoot { lo, hi }),
        [z_bar] => {
            let z_bar = *z_bar;
            let u = (-chi * z_bar).exp();
            let d_well = casimir(z_bar, c3 * l, l) / (u * u - 2.0 * u);
            Ok(Matching { d_well, z_bar })
        }
        _ => Err(Error::MultipleMatchingRoots { candidates: roots }),
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECTION_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl SurfacePotential {
    /// Builds the potential from (χ, C3 in meV·Å³, l), solving the matching.
    pub fn new(chi: f64, c3: f64, l: f64) -> Result<Self> {
        let Matching { d_well, z_bar } = solve_matching(chi, c3, l)?;
        Ok(Self {
            chi,
            c3,
            l,
            c4: c3 * l,
            d_well,
            z_bar,
        })
    }

    /// Builds the potential with C3 given in J·m³.
    pub fn from_si(chi: f64, c3_si: f64, l: f64) -> Result<Self> {
        Self::new(chi, crate::units::c3_to_internal(c3_si)?, l)
    }

    /// `V(z)` in meV.
    pub fn value(&self, z: f64) -> f64 {
        if z < self.z_bar {
            morse(z, self.chi, self.d_well)
        } else {
            casimir(z, self.c4, self.l)
        }
    }

    /// `V'(z)` in meV/Å.
    pub fn derivative(&self, z: f64) -> f64 {
        if z < self.z_bar {
            morse_derivative(z, self.chi, self.d_well)
        } else {
            casimir_derivative(z, self.c4, self.l)
        }
    }

    /// Value and slope mismatch between the two branches at `z̄`.
    pub fn matching_residuals(&self) -> (f64, f64) {
        let z = self.z_bar;
        (
            morse(z, self.chi, self.d_well) - casimir(z, self.c4, self.l),
            morse_derivative(z, self.chi, self.d_well) - casimir_derivative(z, self.c4, self.l),
        )
    }

    /// Zero crossing of the Morse branch, `-ln 2 / χ`.
    pub fn morse_zero(&self) -> f64 {
        -std::f64::consts::LN_2 / self.chi
    }
}

/// Perpendicular potential `V(z)`, meV.
pub fn v_perp(z: f64, p: &SurfacePotential) -> f64 {
    p.value(z)
}

/// How the Fourier coefficients of the strip function enter the off-diagonal
/// couplings `V_n(z) = λ_n V(z)`. `λ_0 = 1` under every convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingConvention {
    /// λ_n = c_n.
    Fourier,
    /// λ_n = c_n / c_0 = sinc(n a/d).
    #[default]
    Normalized,
    /// λ_n = 2 sinc(n a/d).
    DoubledSinc,
}

/// A periodic array of strips of width `a` and period `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grating {
    pub a: f64,
    pub d: f64,
    pub n_max: usize,
    pub coupling_convention: CouplingConvention,
}

impl Grating {
    pub fn new(
        a: f64,
        d: f64,
        n_max: usize,
        coupling_convention: CouplingConvention,
    ) -> Result<Self> {
        if !(a > 0.0 && a < d && d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grating needs 0 < a < d, got a = {a}, d = {d}"
            )));
        }
        Ok(Self {
            a,
            d,
            n_max,
            coupling_convention,
        })
    }

    pub fn duty_cycle(&self) -> f64 {
        self.a / self.d
    }
}

/// sin(πx) with exact zeros at integer `x`.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        (std::f64::consts::PI * r).sin()
    }
}

/// Normalized sinc, sin(πx)/(πx).
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        sin_pi(x) / (std::f64::consts::PI * x)
    }
}

/// Fourier coefficient `c_n = (a/d) sinc(n a/d)` of the strip function.
pub fn fourier_coefficient(n: i32, g: &Grating) -> f64 {
    let ratio = g.duty_cycle();
    ratio * sinc(n as f64 * ratio)
}

/// Multiplier λ_n with `V_n(z) = λ_n V(z)`.
pub fn coupling_strength(n: i32, g: &Grating) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ratio = g.duty_cycle();
    match g.coupling_convention {
        CouplingConvention::Fourier => fourier_coefficient(n, g),
        CouplingConvention::Normalized => sinc(n as f64 * ratio),
        CouplingConvention::DoubledSinc => 2.0 * sinc(n as f64 * ratio),
    }
}

/// Woods–Saxon absorber `A / (1 + exp(αχ(z - z_i)))`, added as an imaginary
/// part to every channel potential. `amplitude < 0` absorbs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorberParams {
    /// A, meV.
    pub amplitude: f64,
    /// α, dimensionless.
    pub alpha: f64,
    /// Onset position z_i, Å.
    pub z_i: f64,
    pub enabled: bool,
}

impl Default for AbsorberParams {
    fn default() -> Self {
        Self {
            amplitude: -8.0,
            alpha: 2.0,
            z_i: 0.0,
            enabled: true,
        }
    }
}

impl AbsorberParams {
    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.enabled && !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "absorber alpha must be positive, got {}",
                self.alpha
            )));
        }
        if !self.amplitude.is_finite() || !self.z_i.is_finite() {
            return Err(Error::InvalidParameter(
                "absorber parameters must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Copy with the amplitude scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            amplitude: self.amplitude * factor,
            ..*self
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }
}

/// Evaluates the absorber at `z` for Morse stiffness `chi`. Returns 0 when the
/// absorber is disabled.
pub fn woods_saxon(z: f64, w: &AbsorberParams, chi: f64) -> f64 {
    if !w.enabled {
        return 0.0;
    }
    let x = (w.alpha * chi * (z - w.z_i)).clamp(-WS_EXPONENT_CLAMP, WS_EXPONENT_CLAMP);
    w.amplitude / (1.0 + x.exp())
}
