use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::disc::canonical_angle;
use crate::error::{Error, Result};

const MASS_TOL: f64 = 1e-12;

/// One step `coeff·χ_[a, b)` of a simple density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub coeff: f64,
}

impl From<[f64; 3]> for Piece {
    fn from(v: [f64; 3]) -> Self {
        Piece {
            a: v[0],
            b: v[1],
            coeff: v[2],
        }
    }
}

impl From<Piece> for [f64; 3] {
    fn from(p: Piece) -> Self {
        [p.a, p.b, p.coeff]
    }
}

impl Piece {
    /// `coeff·(b − a)/2π`.
    pub fn mass(&self) -> f64 {
        self.coeff * (self.b - self.a) / (2.0 * PI)
    }

    /// Mass of the piece inside `[lo, hi)`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let a = self.a.max(lo);
        let b = self.b.min(hi);
        if b > a {
            self.coeff * (b - a) / (2.0 * PI)
        } else {
            0.0
        }
    }
}

/// A nonnegative step function on the circle with unit `dm`-mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Piece>", into = "Vec<Piece>")]
pub struct SimpleDensity {
    pieces: Vec<Piece>,
}

impl TryFrom<Vec<Piece>> for SimpleDensity {
    type Error = Error;

    fn try_from(pieces: Vec<Piece>) -> Result<Self> {
        SimpleDensity::new(pieces)
    }
}

impl From<SimpleDensity> for Vec<Piece> {
    fn from(s: SimpleDensity) -> Self {
        s.pieces
    }
}

fn check_pieces(pieces: &mut [Piece]) -> Result<()> {
    for p in pieces.iter() {
        if !(p.a >= -PI && p.b <= PI && p.a < p.b) {
            return Err(Error::Domain(format!(
                "piece [{}, {}) is not a nonempty interval inside [-π, π)",
                p.a, p.b
            )));
        }
        if !(p.coeff >= 0.0 && p.coeff.is_finite()) {
            return Err(Error::Domain(format!("piece coefficient {} must be nonnegative", p.coeff)));
        }
    }
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    if let Some(w) = pieces.windows(2).find(|w| w[0].b > w[1].a) {
        return Err(Error::Domain(format!(
            "pieces [{}, {}) and [{}, {}) overlap",
            w[0].a, w[0].b, w[1].a, w[1].b
        )));
    }
    Ok(())
}

impl SimpleDensity {
    /// Validates pieces that already carry unit mass.
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self> {
        check_pieces(&mut pieces)?;
        let mass: f64 = pieces.iter().map(Piece::mass).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Domain(format!("total mass {mass} differs from 1")));
        }
        Ok(SimpleDensity { pieces })
    }

    /// Rescales the pieces to unit mass.
    pub fn normalized(mut pieces: Vec<Piece>) -> Result<Self> {
        check_pieces(&mut pieces)?;
        let mass: f64 = pieces.iter().map(Piece::mass).sum();
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::Infeasible {
                reason: "density has no mass".into(),
                best_residuals: vec![],
            });
        }
        for p in &mut pieces {
            p.coeff /= mass;
        }
        Ok(SimpleDensity { pieces })
    }

    /// Uniform density on `[a, b)`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::normalized(vec![Piece { a, b, coeff: 1.0 }])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn total_mass(&self) -> f64 {
        self.pieces.iter().map(Piece::mass).sum()
    }

    /// Density value at angle `θ` (any representative).
    pub fn eval(&self, theta: f64) -> f64 {
        let t = canonical_angle(theta);
        let i = self.pieces.partition_point(|p| p.a <= t);
        match i.checked_sub(1).map(|i| &self.pieces[i]) {
            Some(p) if t < p.b => p.coeff,
            _ => 0.0,
        }
    }

    /// Mass of `[lo, hi)` with `-π ≤ lo ≤ hi ≤ π`.
    pub fn mass_on(&self, lo: f64, hi: f64) -> f64 {
        self.pieces.iter().map(|p| p.mass_in(lo, hi)).sum()
    }

    /// `∫_{−π}^{t} s dm`.
    pub fn cdf(&self, t: f64) -> f64 {
        self.mass_on(-PI, t)
    }

    /// Piece endpoints in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().flat_map(|p| [p.a, p.b]).collect();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SimpleDensity::uniform(-0.2, 0.2).is_ok());
        let overlap = vec![Piece { a: -0.2, b: 0.1, coeff: 1.0 }, Piece { a: 0.0, b: 0.3, coeff: 1.0 }];
        assert!(SimpleDensity::normalized(overlap).is_err());
        let neg = vec![Piece { a: -0.2, b: 0.1, coeff: -1.0 }];
        assert!(SimpleDensity::normalized(neg).is_err());
        let heavy = vec![Piece { a: -0.2, b: 0.1, coeff: 1.0 }];
        assert!(SimpleDensity::new(heavy).is_err());
    }

    #[test]
    fn evaluation_and_mass() {
        let s = SimpleDensity::normalized(vec![
            Piece { a: 0.0, b: 0.1, coeff: 3.0 },
            Piece { a: -0.4, b: -0.2, coeff: 1.0 },
        ])
        .unwrap();
        assert_eq!(s.pieces()[0].a, -0.4);
        assert!((s.total_mass() - 1.0).abs() < 1e-15);
        assert_eq!(s.eval(0.1), 0.0);
        assert!(s.eval(0.0) > 0.0);
        assert_eq!(s.eval(-0.1), 0.0);
        assert!((s.cdf(-0.1) - 0.4).abs() < 1e-14);
    }
}
