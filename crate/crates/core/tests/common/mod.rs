//! Brute-force reference integrator for single-channel scattering.
//!
//! Integrates `ψ'' = [(V(z) + i V_WS(z))/c - k²] ψ` outward from the hard wall
//! with classical fixed-step RK4, rescaling ψ whenever it grows large, then
//! reads the reflection amplitude from the plane-wave decomposition at z_max.
//! Shares no propagation or matching code with the library.

#![allow(dead_code)]

use num_complex::Complex64;
use qreflect::potential::SurfacePotential;
use qreflect::units::kinetic_prefactor;

#[derive(Debug, Clone, Copy)]
pub struct OracleAbsorber {
    pub amplitude: f64,
    pub alpha: f64,
    pub z_i: f64,
}

fn v_ref(z: f64, p: &SurfacePotential) -> f64 {
    if z < p.z_bar {
        let e = (-p.chi * z).exp();
        p.d_well * (e * e - 2.0 * e)
    } else {
        -p.c3 * p.l / ((p.l + z) * z * z * z)
    }
}

fn ws_ref(z: f64, w: Option<OracleAbsorber>, chi: f64) -> f64 {
    match w {
        Some(w) => w.amplitude / (1.0 + (w.alpha * chi * (z - w.z_i)).exp()),
        None => 0.0,
    }
}

/// |S|² for perpendicular wave number `k` (Å⁻¹) on `[z_min, z_max]` with step `h`.
pub fn reflection_probability(
    p: &SurfacePotential,
    absorber: Option<OracleAbsorber>,
    k: f64,
    z_min: f64,
    z_max: f64,
    h: f64,
) -> f64 {
    let c = kinetic_prefactor();
    let w = |z: f64| Complex64::new(v_ref(z, p) / c - k * k, ws_ref(z, absorber, p.chi) / c);
    let n = ((z_max - z_min) / h).round() as usize;
    let h = (z_max - z_min) / n as f64;
    let mut psi = Complex64::new(0.0, 0.0);
    let mut dpsi = Complex64::new(1.0, 0.0);
    for i in 0..n {
        let z = z_min + i as f64 * h;
        let wa = w(z);
        let wm = w(z + 0.5 * h);
        let wb = w(z + h);
        let k1 = (dpsi, wa * psi);
        let k2 = (dpsi + k1.1 * (0.5 * h), wm * (psi + k1.0 * (0.5 * h)));
        let k3 = (dpsi + k2.1 * (0.5 * h), wm * (psi + k2.0 * (0.5 * h)));
        let k4 = (dpsi + k3.1 * h, wb * (psi + k3.0 * h));
        psi += (k1.0 + k2.0 * 2.0 + k3.0 * 2.0 + k4.0) * (h / 6.0);
        dpsi += (k1.1 + k2.1 * 2.0 + k3.1 * 2.0 + k4.1) * (h / 6.0);
        let scale = psi.norm().max(dpsi.norm());
        if scale > 1e100 {
            psi /= scale;
            dpsi /= scale;
        }
    }
    let ik = Complex64::new(0.0, k);
    let incoming = psi - dpsi / ik;
    let outgoing = psi + dpsi / ik;
    outgoing.norm_sqr() / incoming.norm_sqr()
}
