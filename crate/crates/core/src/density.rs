//! Densities integrated against oscillatory phases: indicators, grid samples
//! and sums of dilated bumps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lorentz::GridFunction;

/// Smooth cutoff equal to 1 on `[-0.1, 0.1]` and 0 outside `(-0.125, 0.125)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bump;

impl Bump {
    pub const PLATEAU: f64 = 0.1;
    pub const SUPPORT: f64 = 0.125;
    const RAMP: f64 = Self::SUPPORT - Self::PLATEAU;

    // 1 at u <= 0, 0 at u >= 1, smooth ratio of exp(-1/x) profiles in between
    fn psi(u: f64) -> f64 {
        if u <= 0.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            1.0 / (1.0 + (1.0 / (1.0 - u) - 1.0 / u).exp())
        }
    }

    fn dpsi(u: f64) -> f64 {
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            let p = Self::psi(u);
            -p * (1.0 - p) * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)))
        }
    }

    pub fn eval(x: f64) -> f64 {
        Self::psi((x.abs() - Self::PLATEAU) / Self::RAMP)
    }

    pub fn derivative(x: f64) -> f64 {
        x.signum() * Self::dpsi((x.abs() - Self::PLATEAU) / Self::RAMP) / Self::RAMP
    }

    /// `int chi = 2 (0.1 + 0.025 / 2)`, since `psi(u) + psi(1 - u) = 1`.
    pub fn l1_norm() -> f64 {
        2.0 * Self::PLATEAU + Self::RAMP
    }
}

/// `amplitude * chi((t - center) / scale) * (1 + tilt * (t - center) / scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBump {
    pub center: f64,
    pub scale: f64,
    pub amplitude: f64,
    pub tilt: f64,
}

impl ScaledBump {
    pub fn new(center: f64, scale: f64, amplitude: f64) -> Self {
        ScaledBump { center, scale, amplitude, tilt: 0.0 }
    }

    pub fn support(&self) -> (f64, f64) {
        let r = Bump::SUPPORT * self.scale;
        (self.center - r, self.center + r)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.scale;
        if u.abs() >= Bump::SUPPORT {
            return 0.0;
        }
        self.amplitude * Bump::eval(u) * (1.0 + self.tilt * u)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let u = (t - self.center) / self.scale;
        if u.abs() >= Bump::SUPPORT {
            return 0.0;
        }
        self.amplitude * (Bump::derivative(u) * (1.0 + self.tilt * u) + Bump::eval(u) * self.tilt)
            / self.scale
    }

    // ramp, plateau, ramp
    fn pieces(&self, out: &mut Vec<(f64, f64, f64)>) {
        let s = self.scale;
        let c = self.center;
        let ramp_w = Bump::RAMP * s / 16.0;
        let (lo, hi) = self.support();
        out.push((lo, c - Bump::PLATEAU * s, ramp_w));
        out.push((c - Bump::PLATEAU * s, c + Bump::PLATEAU * s, Bump::PLATEAU * s / 4.0));
        out.push((c + Bump::PLATEAU * s, hi, ramp_w));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    /// `amplitude` on `[a, b]`.
    Indicator { a: f64, b: f64, amplitude: f64 },
    Grid(GridFunction),
    /// Sum of bumps with pairwise disjoint supports.
    Bumps(Vec<ScaledBump>),
}

impl Density {
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::arg(format!("bad indicator interval [{a}, {b}]")));
        }
        Ok(Density::Indicator { a, b, amplitude: 1.0 })
    }

    pub fn bump(center: f64, scale: f64) -> Result<Self> {
        Density::bumps(vec![ScaledBump::new(center, scale, 1.0)])
    }

    pub fn bumps(mut bumps: Vec<ScaledBump>) -> Result<Self> {
        if bumps.is_empty() {
            return Err(Error::arg("empty bump list"));
        }
        if bumps.iter().any(|b| !(b.scale > 0.0) || !b.center.is_finite() || !b.amplitude.is_finite()) {
            return Err(Error::arg("bumps need finite centers and amplitudes and positive scales"));
        }
        bumps.sort_by(|x, y| x.center.total_cmp(&y.center));
        for w in bumps.windows(2) {
            if w[0].support().1 > w[1].support().0 {
                return Err(Error::InternalConsistency(format!(
                    "bump supports overlap: {:?} and {:?}",
                    w[0].support(),
                    w[1].support()
                )));
            }
        }
        Ok(Density::Bumps(bumps))
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Density::Indicator { a, b, amplitude } => {
                if t >= *a && t <= *b {
                    Complex64::new(*amplitude, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Density::Grid(g) => g.eval(t),
            Density::Bumps(bs) => {
                // supports are disjoint and sorted
                let i = bs.partition_point(|b| b.support().1 <= t);
                Complex64::new(bs.get(i).map_or(0.0, |b| b.eval(t)), 0.0)
            }
        }
    }

    /// Closed support hull `[lo, hi]`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Density::Indicator { a, b, .. } => (*a, *b),
            Density::Grid(g) => (g.origin(), g.origin() + g.total_measure()),
            Density::Bumps(bs) => (bs[0].support().0, bs[bs.len() - 1].support().1),
        }
    }

    /// Smooth pieces `(a, b, max panel width)` covering the support.
    pub fn pieces(&self) -> Vec<(f64, f64, f64)> {
        match self {
            Density::Indicator { a, b, .. } => vec![(*a, *b, f64::INFINITY)],
            Density::Grid(g) => (0..g.len())
                .map(|i| {
                    let (a, b) = g.cell(i);
                    (a, b, f64::INFINITY)
                })
                .collect(),
            Density::Bumps(bs) => {
                let mut out = Vec::with_capacity(3 * bs.len());
                for b in bs {
                    b.pieces(&mut out);
                }
                out
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match self {
            Density::Indicator { a, b, amplitude } => Density::Indicator { a: *a, b: *b, amplitude: amplitude * c },
            Density::Grid(g) => Density::Grid(g.scaled(Complex64::new(c, 0.0))),
            Density::Bumps(bs) => Density::Bumps(
                bs.iter().map(|b| ScaledBump { amplitude: b.amplitude * c, ..*b }).collect(),
            ),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Density::Grid(g) => Density::Grid(g.conj()),
            other => other.clone(),
        }
    }

    /// `int |f|`.
    pub fn l1_norm(&self) -> f64 {
        match self {
            Density::Indicator { a, b, amplitude } => amplitude.abs() * (b - a),
            Density::Grid(g) => g.values().iter().map(|v| v.norm()).sum::<f64>() * g.spacing(),
            Density::Bumps(bs) => bs
                .iter()
                .map(|b| {
                    if b.tilt.abs() * Bump::SUPPORT < 1.0 {
                        // the tilt is odd about the centre and keeps the sign
                        b.amplitude.abs() * b.scale * Bump::l1_norm()
                    } else {
                        crate::quadrature::integrate_real(b.support().0, b.support().1, 256, |t| b.eval(t).abs())
                    }
                })
                .sum(),
        }
    }

    /// `(A0, A1) = (|eta|_inf + |eta'|_1, |eta'|_inf)` for smooth bump densities.
    pub fn eta_bounds(&self) -> Option<(f64, f64)> {
        let bs = match self {
            Density::Bumps(bs) => bs,
            _ => return None,
        };
        let mut sup = 0.0f64;
        let mut dsup = 0.0f64;
        let mut dl1 = 0.0;
        for b in bs {
            let (lo, hi) = b.support();
            let n = 4096;
            for i in 0..=n {
                let t = lo + (hi - lo) * i as f64 / n as f64;
                sup = sup.max(b.eval(t).abs());
                dsup = dsup.max(b.derivative(t).abs());
            }
            dl1 += crate::quadrature::integrate_real(lo, hi, 256, |t| b.derivative(t).abs());
        }
        Some((sup + dl1, dsup))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert_eq!(Bump::eval(0.0), 1.0);
        assert_eq!(Bump::eval(0.1), 1.0);
        assert_eq!(Bump::eval(-0.099), 1.0);
        assert_eq!(Bump::eval(0.125), 0.0);
        assert_eq!(Bump::eval(-0.2), 0.0);
        assert!((Bump::eval(0.1125) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let x = 0.1 + 0.025 * i as f64 / 1000.0;
            let v = Bump::eval(x);
            assert!((0.0..=1.0).contains(&v) && v <= prev);
            prev = v;
        }
    }

    #[test]
    fn bump_derivatives_match_differences() {
        for &x in &[-0.12, -0.11, 0.101, 0.105, 0.1125, 0.12, 0.124] {
            let h = 1e-7;
            let fd = (Bump::eval(x + h) - Bump::eval(x - h)) / (2.0 * h);
            assert!((fd - Bump::derivative(x)).abs() < 1e-5 * (1.0 + fd.abs()), "x={x}");
        }
        // derivatives of every order vanish at the plateau edge
        assert!(Bump::derivative(0.1 + 1e-4).abs() < 1e-10);
        assert!(Bump::derivative(0.125 - 1e-4).abs() < 1e-10);
    }

    #[test]
    fn bump_mass() {
        let q = crate::quadrature::integrate_real(-0.125, 0.125, 4096, Bump::eval);
        assert!((q - Bump::l1_norm()).abs() < 1e-13);
        assert!((Bump::l1_norm() - 0.225).abs() < 1e-16);
    }

    #[test]
    fn overlapping_bumps_rejected() {
        let r = Density::bumps(vec![ScaledBump::new(0.5, 1.0, 1.0), ScaledBump::new(0.6, 1.0, 1.0)]);
        assert!(matches!(r, Err(Error::InternalConsistency(_))));
    }

    #[test]
    fn sum_of_bumps_evaluates_each() {
        let d = Density::bumps(vec![ScaledBump::new(0.5, 1.0, 2.0), ScaledBump::new(0.25, 0.5, 3.0)]).unwrap();
        assert_eq!(d.eval(0.5).re, 2.0);
        assert_eq!(d.eval(0.25).re, 3.0);
        assert_eq!(d.eval(0.35).re, 0.0);
        assert!((d.l1_norm() - (2.0 + 1.5) * 0.225).abs() < 1e-15);
        let pieces = d.pieces();
        assert_eq!(pieces.len(), 6);
        assert!(pieces.windows(2).all(|w| w[0].1 <= w[1].0));
    }

    #[test]
    fn eta_bounds_of_standard_bump() {
        let (a0, a1) = Density::bump(0.0, 1.0).unwrap().eta_bounds().unwrap();
        // |eta'|_1 = 2 for a bump rising 0 -> 1 -> 0
        assert!((a0 - 3.0).abs() < 1e-9);
        assert!(a1 > 40.0 && a1 < 200.0);
    }
}
