use std::f64::consts::PI;

use num_complex::Complex64;

use super::density::{Piece, SimpleDensity};
use crate::disc::{CirclePoint, DiscPoint, MobiusAut};
use crate::error::Result;
use crate::function::FunctionSpec;
use crate::quadrature::PanelRule;

/// The density `u(θ) = s(L_c(e^{iθ}))·|L_c'(e^{iθ})|` of the measure `s dm`
/// pulled back through `L_c`.
#[derive(Debug, Clone)]
pub struct PushforwardDensity {
    density: SimpleDensity,
    map: MobiusAut,
}

pub fn pushforward_density(s: &SimpleDensity, c: DiscPoint) -> PushforwardDensity {
    PushforwardDensity {
        density: s.clone(),
        map: MobiusAut::new(c),
    }
}

impl PushforwardDensity {
    pub fn map(&self) -> &MobiusAut {
        &self.map
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let image = self
            .map
            .apply_circle(CirclePoint::new(theta))
            .expect("circle points stay on the circle");
        self.density.eval(image.theta()) * self.map.boundary_jacobian(theta)
    }

    /// Angles `L_c⁻¹(e^{ia})`, `L_c⁻¹(e^{ib})` of every piece endpoint, sorted,
    /// with `±π` appended.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .density
            .breakpoints()
            .into_iter()
            .filter_map(|t| self.map.inverse_apply_circle(CirclePoint::new(t)).ok())
            .map(|p| p.theta())
            .collect();
        v.push(-PI);
        v.push(PI);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    fn rule(&self, nodes: usize) -> PanelRule {
        PanelRule::new(&self.breakpoints(), nodes)
    }

    /// `∫ u dm`.
    pub fn mass(&self, nodes: usize) -> f64 {
        self.rule(nodes).integrate_real(|t| self.eval(t))
    }

    /// `∫ (f ∘ L_c) u dm`.
    pub fn integrate_composed(&self, f: &FunctionSpec, nodes: usize) -> Result<Complex64> {
        let rule = self.rule(nodes);
        Ok(rule.integrate(|t| {
            let u = self.eval(t);
            if u == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let w = self.map.apply(Complex64::from_polar(1.0, t)).expect("circle maps to circle");
            f.eval(w) * u
        }))
    }

    /// `∫ u dm` over the preimage arc `L_c⁻¹([a, b))`.
    pub fn preimage_mass(&self, piece: &Piece, nodes: usize) -> Result<f64> {
        let lo = self.map.inverse_apply_circle(CirclePoint::new(piece.a))?.theta();
        let mut hi = self.map.inverse_apply_circle(CirclePoint::new(piece.b))?.theta();
        if hi <= lo {
            hi += 2.0 * PI;
        }
        let rule = PanelRule::new(&[lo, hi], nodes);
        Ok(rule.integrate_real(|t| {
            let image = self.map.apply_circle(CirclePoint::new(t)).expect("circle maps to circle");
            if piece.a <= image.theta() && image.theta() < piece.b {
                piece.coeff * self.map.boundary_jacobian(t)
            } else {
                0.0
            }
        }))
    }
}

impl SimpleDensity {
    /// `∫ f s dm` by Gauss–Legendre panels on each piece.
    pub fn integrate(&self, f: &FunctionSpec, nodes: usize) -> Complex64 {
        let rule = PanelRule::new(&self.breakpoints(), nodes);
        rule.integrate(|t| {
            let s = self.eval(t);
            if s == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f.eval(Complex64::from_polar(1.0, t)) * s
            }
        })
    }
}
