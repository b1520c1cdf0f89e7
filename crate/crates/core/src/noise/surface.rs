use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Surfaces extend to this multiple of their characteristic length. The
/// dipole-layer integrand falls as `rho^-5`, so the neglected tail is of
/// relative order `CUTOFF^-4`.
pub const CUTOFF: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceKind {
    /// Infinite plane `z = 0`; the reference point sits at height `distance`.
    Plane { distance: f64 },
    /// Cone with its apex at the origin opening towards `-z` with full
    /// opening angle `alpha` (rad); reference point on the axis at `r0`.
    Cone { r0: f64, alpha: f64 },
    /// Ring electrode centred on the origin with axis `z`: inner diameter
    /// `diameter`, axial thickness `thickness`.
    Ring { diameter: f64, thickness: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DipoleOrientation {
    #[default]
    Normal,
    /// Averaged over the two in-surface directions.
    Tangential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGeometry {
    pub kind: SurfaceKind,
    /// Sensitive axis, unit vector.
    pub axis: [f64; 3],
    pub dipoles: DipoleOrientation,
}

impl SurfaceGeometry {
    fn with_kind(kind: SurfaceKind) -> Self {
        Self {
            kind,
            axis: [0.0, 0.0, 1.0],
            dipoles: DipoleOrientation::Normal,
        }
    }

    pub fn plane(distance: f64) -> Self {
        Self::with_kind(SurfaceKind::Plane { distance })
    }

    pub fn cone(r0: f64, alpha: f64) -> Self {
        Self::with_kind(SurfaceKind::Cone { r0, alpha })
    }

    pub fn ring(diameter: f64, thickness: f64) -> Self {
        Self::with_kind(SurfaceKind::Ring { diameter, thickness })
    }

    /// Sensitive axis; normalized here.
    pub fn with_axis(mut self, axis: [f64; 3]) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        self.axis = axis.map(|x| x / n);
        self
    }

    pub fn with_dipoles(mut self, dipoles: DipoleOrientation) -> Self {
        self.dipoles = dipoles;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n2: f64 = self.axis.iter().map(|x| x * x).sum();
        if !((n2 - 1.0).abs() < 1e-9) {
            return Err(Error::param("axis", "must be a unit vector"));
        }
        match self.kind {
            SurfaceKind::Plane { distance } if !(distance > 0.0) => Err(Error::param("d", "must be > 0")),
            SurfaceKind::Cone { r0, .. } if !(r0 > 0.0) => Err(Error::param("R0", "must be > 0")),
            SurfaceKind::Cone { alpha, .. } if !(alpha > 0.0 && alpha <= PI) => {
                Err(Error::param("alpha", "must be in (0, pi]"))
            }
            SurfaceKind::Ring { diameter, .. } if !(diameter > 0.0) => Err(Error::param("D", "must be > 0")),
            SurfaceKind::Ring { thickness, .. } if !(thickness >= 0.0) => {
                Err(Error::param("a", "must be >= 0"))
            }
            _ => Ok(()),
        }
    }

    /// Natural observation point: above the plane, on the cone axis, or at
    /// the ring centre.
    pub fn reference_point(&self) -> [f64; 3] {
        match self.kind {
            SurfaceKind::Plane { distance } => [0.0, 0.0, distance],
            SurfaceKind::Cone { r0, .. } => [0.0, 0.0, r0],
            SurfaceKind::Ring { .. } => [0.0; 3],
        }
    }

    fn length_scale(&self) -> f64 {
        match self.kind {
            SurfaceKind::Plane { distance } => distance,
            SurfaceKind::Cone { r0, .. } => r0,
            SurfaceKind::Ring { diameter, .. } => diameter / 2.0,
        }
    }

    /// Distance from `p` to the surface.
    fn clearance(&self, p: &[f64; 3]) -> f64 {
        let rho = p[0].hypot(p[1]);
        match self.kind {
            SurfaceKind::Plane { .. } => p[2].abs(),
            SurfaceKind::Cone { alpha, .. } => {
                // angle between the meridian direction of p and the surface
                let half = alpha / 2.0;
                let r = rho.hypot(p[2]);
                let theta = rho.atan2(-p[2]);
                r * (theta - half).abs().min(PI / 2.0).sin()
            }
            SurfaceKind::Ring { diameter, thickness } => {
                let (c, h) = (diameter / 2.0, thickness / 2.0);
                let face = if rho >= c { (p[2].abs() - h).abs() } else { (c - rho).hypot(p[2].abs() - h) };
                let bore = if p[2].abs() <= h { (rho - c).abs() } else { f64::INFINITY };
                face.min(bore)
            }
        }
    }

    /// Meridian pieces of this surface of revolution about `z`.
    fn meridians(&self) -> Vec<Meridian> {
        let l = CUTOFF * self.length_scale();
        match self.kind {
            SurfaceKind::Plane { .. } => vec![Meridian::line((0.0, 0.0), (1.0, 0.0), 0.0, l)],
            SurfaceKind::Cone { alpha, .. } => {
                let half = alpha / 2.0;
                vec![Meridian::line((0.0, 0.0), (half.sin(), -half.cos()), 0.0, l)]
            }
            SurfaceKind::Ring { diameter, thickness } => {
                let (c, h) = (diameter / 2.0, thickness / 2.0);
                let mut m = vec![
                    Meridian::line((c, h), (1.0, 0.0), 0.0, l),
                    Meridian::line((c, -h), (1.0, 0.0), 0.0, l),
                ];
                if thickness > 0.0 {
                    m.push(Meridian::line((c, -h), (0.0, 1.0), 0.0, thickness));
                }
                m
            }
        }
    }
}

/// Straight meridian `(rho, z) = origin + u * dir`, `u` in `[u0, u1]`.
#[derive(Clone, Copy, Debug)]
struct Meridian {
    origin: (f64, f64),
    dir: (f64, f64),
    u0: f64,
    u1: f64,
}

impl Meridian {
    fn line(origin: (f64, f64), dir: (f64, f64), u0: f64, u1: f64) -> Self {
        Self { origin, dir, u0, u1 }
    }

    /// Panel edges, graded towards `u0` on the scale `s`.
    fn panels(&self, s: f64) -> Vec<(f64, f64)> {
        let mut edges = vec![self.u0];
        let mut w = s / 8.0;
        let mut u = self.u0;
        while u < self.u1 {
            u = (u + w).min(self.u1);
            edges.push(u);
            if u - self.u0 >= s / 2.0 {
                w *= 2.0;
            }
        }
        edges.windows(2).map(|e| (e[0], e[1])).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationOptions {
    /// Relative change between successive refinements that ends the loop.
    pub tolerance: f64,
    /// Refinement levels tried before giving up.
    pub max_level: u32,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-3,
            max_level: 6,
        }
    }
}

/// Incoherent sum of `(axis . E_dipole)^2` over a uniform layer of unit
/// dipoles on the surface, seen from `point`, in m^-4.
///
/// Mesh: Gauss–Legendre on graded panels along each meridian and the
/// trapezoid rule in azimuth, doubled until two levels agree to
/// `opts.tolerance`.
pub fn dipole_field_noise(exec: Exec, surface: &SurfaceGeometry, point: [f64; 3], opts: &IntegrationOptions) -> Result<f64> {
    surface.validate()?;
    let s = surface.length_scale();
    if !(surface.clearance(&point) > 1e-9 * s) {
        return Err(Error::param("observation point", "lies on the surface"));
    }
    let scale = s.min(surface.clearance(&point));
    let pieces: Vec<(Meridian, (f64, f64))> = surface
        .meridians()
        .into_iter()
        .flat_map(|m| m.panels(scale).into_iter().map(move |p| (m, p)))
        .collect();
    let mut previous = f64::NAN;
    for level in 0..=opts.max_level {
        let degree = 6usize << level;
        let azimuth = 32usize << level;
        let rule = GaussLegendre::new(NonZeroUsize::new(degree).expect("non-zero"));
        let parts = par::map(exec, &pieces, |(m, (a, b))| panel(surface, m, *a, *b, &rule, azimuth, &point));
        let total: f64 = parts.iter().sum();
        if !total.is_finite() {
            return Err(Error::IntegrationFailure("non-finite surface integral".into()));
        }
        if level > 0 && (total - previous).abs() <= opts.tolerance * total.abs() {
            return Ok(total);
        }
        previous = total;
    }
    Err(Error::IntegrationFailure(format!(
        "no {:.1e} convergence after {} refinements",
        opts.tolerance, opts.max_level
    )))
}

fn panel(surface: &SurfaceGeometry, m: &Meridian, a: f64, b: f64, rule: &GaussLegendre, azimuth: usize, p: &[f64; 3]) -> f64 {
    let (tr, tz) = m.dir;
    let (nr, nz) = (tz, -tr);
    let dphi = 2.0 * PI / azimuth as f64;
    let ax = surface.axis;
    rule.integrate(a, b, |u| {
        let rho = m.origin.0 + u * tr;
        let z = m.origin.1 + u * tz;
        let mut acc = 0.0;
        for k in 0..azimuth {
            let (sn, cs) = (k as f64 * dphi).sin_cos();
            let pos = [rho * cs, rho * sn, z];
            let d = [p[0] - pos[0], p[1] - pos[1], p[2] - pos[2]];
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            let r = r2.sqrt();
            let rhat = d.map(|x| x / r);
            let rax = dot(&rhat, &ax);
            let r3 = r2 * r;
            // axis . (3 (p . rhat) rhat - p) / r^3
            let proj = |dip: [f64; 3]| (3.0 * dot(&dip, &rhat) * rax - dot(&dip, &ax)) / r3;
            acc += match surface.dipoles {
                DipoleOrientation::Normal => proj([nr * cs, nr * sn, nz]).powi(2),
                DipoleOrientation::Tangential => {
                    0.5 * (proj([tr * cs, tr * sn, tz]).powi(2) + proj([-sn, cs, 0.0]).powi(2))
                }
            };
        }
        acc * dphi * rho.abs()
    })
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `S_E^tip / S_E^plane` at equal distance, closed form `alpha / 10`.
pub fn tip_noise_factor(alpha: f64) -> f64 {
    alpha / 10.0
}

/// `S_E^ring(D, a) / S_E^plane(D/2)`, closed form `2 (1 + 2a/D)`.
pub fn ring_noise_factor(diameter: f64, thickness: f64) -> Result<f64> {
    if !(diameter > 0.0 && thickness >= 0.0) {
        return Err(Error::param("D, a", "need D > 0 and a >= 0"));
    }
    Ok(2.0 * (1.0 + 2.0 * thickness / diameter))
}

/// Numerical counterpart of [`tip_noise_factor`].
pub fn cone_noise_factor_numeric(exec: Exec, r0: f64, alpha: f64, opts: &IntegrationOptions) -> Result<f64> {
    let cone = SurfaceGeometry::cone(r0, alpha);
    let plane = SurfaceGeometry::plane(r0);
    Ok(dipole_field_noise(exec, &cone, cone.reference_point(), opts)?
        / dipole_field_noise(exec, &plane, plane.reference_point(), opts)?)
}

/// Numerical counterpart of [`ring_noise_factor`].
pub fn ring_noise_factor_numeric(exec: Exec, diameter: f64, thickness: f64, opts: &IntegrationOptions) -> Result<f64> {
    let ring = SurfaceGeometry::ring(diameter, thickness);
    let plane = SurfaceGeometry::plane(diameter / 2.0);
    Ok(dipole_field_noise(exec, &ring, ring.reference_point(), opts)?
        / dipole_field_noise(exec, &plane, plane.reference_point(), opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_matches_closed_form() {
        let d = 40e-6;
        let g = SurfaceGeometry::plane(d);
        let s = dipole_field_noise(Exec::Sequential, &g, g.reference_point(), &IntegrationOptions::default()).unwrap();
        let exact = 3.0 * PI / (4.0 * d.powi(4));
        assert!((s / exact - 1.0).abs() < 2e-3, "{}", s / exact);
    }

    #[test]
    fn bad_inputs() {
        let opts = IntegrationOptions::default();
        assert!(dipole_field_noise(Exec::Sequential, &SurfaceGeometry::plane(-1.0), [0.0; 3], &opts).is_err());
        let g = SurfaceGeometry::plane(1.0);
        assert!(dipole_field_noise(Exec::Sequential, &g, [0.3, 0.2, 0.0], &opts).is_err());
        assert!(SurfaceGeometry::cone(1.0, 4.0).validate().is_err());
        assert!((ring_noise_factor(1.0, 0.5).unwrap() - 4.0).abs() < 1e-15);
        assert!((ring_noise_factor(1.0, 0.0).unwrap() - 2.0).abs() < 1e-15);
    }
}
