//! Sector-ladder construction of auxiliary Blaschke products.
//!
//! Starting from a zero set inside `S[ℓ, 1)` and a candidate sequence tending
//! to 1, each rung `j` fixes `r_j = (2s_j + 1)/3`, picks a candidate `c_{n_j}`
//! that pushes the zeros of `S[ℓ, r_j)` close to the circle, then picks
//! `s_{j+1}` so the zeros of `S[s_{j+1}, 1)` are pushed there too. The product
//! over both groups then stays above `1 − ε_j` on `|ζ| ≤ η_j` after composing
//! with `L_{n_j}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{
    carleson_diagnostics, defect_factor, transported_defect, BlaschkeProduct, DiscSequence,
};
use crate::disc::{DiscPoint, MobiusAut};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderConfig {
    pub ell: f64,
    pub eps: Vec<f64>,
    pub eta: Vec<f64>,
    /// Separation product the chosen centers must exceed at their last index
    /// before they are used as the zeros of the thin factor.
    #[serde(default = "default_thin_threshold")]
    pub thin_threshold: f64,
    #[serde(default = "default_grid_radial")]
    pub grid_radial: usize,
    #[serde(default = "default_grid_angular")]
    pub grid_angular: usize,
}

fn default_thin_threshold() -> f64 {
    0.9
}

fn default_grid_radial() -> usize {
    64
}

fn default_grid_angular() -> usize {
    256
}

impl LadderConfig {
    pub fn new(ell: f64, eps: Vec<f64>, eta: Vec<f64>) -> Self {
        LadderConfig {
            ell,
            eps,
            eta,
            thin_threshold: default_thin_threshold(),
            grid_radial: default_grid_radial(),
            grid_angular: default_grid_angular(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.ell > 0.0 && self.ell < 1.0) {
            return Err(Error::Precondition(format!("ℓ = {} must lie in (0, 1)", self.ell)));
        }
        if self.eps.len() != self.eta.len() {
            return Err(Error::Precondition(format!(
                "eps and eta lengths differ ({} vs {})",
                self.eps.len(),
                self.eta.len()
            )));
        }
        if self.eps.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::Precondition("every eps_j must lie in (0, 1)".into()));
        }
        if self.eta.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return Err(Error::Precondition("every eta_j must lie in (0, 1)".into()));
        }
        if self.eps.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Precondition("eps must be non-increasing".into()));
        }
        if self.eta.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Precondition("eta must be non-decreasing".into()));
        }
        if self.grid_radial < 2 || self.grid_angular < 8 {
            return Err(Error::Precondition("check grid too coarse".into()));
        }
        Ok(())
    }
}

/// Per-rung record of the modulus check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RungCheck {
    pub rung: usize,
    pub eta: f64,
    pub eps: f64,
    /// Admissible total defect `δ_j = ε_j(1 − η_j)/(1 + η_j)`.
    pub delta: f64,
    /// Defect of the `S[ℓ, r_j)` zeros under `L_{n_j}⁻¹`.
    pub inner_defect: f64,
    /// Defect of the `S[s_{j+1}, 1)` zeros under `L_{n_j}⁻¹`.
    pub tail_defect: f64,
    /// `1 − M(η_j)·(inner + tail)`, a rigorous lower bound for the modulus.
    pub certified_min: f64,
    /// Grid minimum of `|B^{(j)} ∘ L_{n_j}|` over `|ζ| ≤ η_j`.
    pub measured_min: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderConstruction {
    /// `s_1 = ℓ, s_2, …, s_{J+1}`.
    pub s: Vec<f64>,
    /// `r_j = (2s_j + 1)/3`.
    pub r: Vec<f64>,
    /// Indices `n_j` into the candidate sequence.
    pub indices: Vec<usize>,
    pub centers: Vec<DiscPoint>,
    /// Zeros in `∪ S[s_j, r_j)`.
    pub b1: Vec<DiscPoint>,
    /// Zeros in `∪ S[r_{2j−1}, s_{2j})`.
    pub b2: Vec<DiscPoint>,
    /// Zeros in `∪ S[r_{2j}, s_{2j+1})`.
    pub b3: Vec<DiscPoint>,
    /// Zeros beyond the last rung, `S[s_{J+1}, 1)`.
    pub uncovered: Vec<DiscPoint>,
    pub verification: Vec<RungCheck>,
    /// `B_1B_2` and `B_1B_3`; which one vanishes at the target functional is
    /// not decidable here, so both are returned.
    pub candidate_products: [BlaschkeProduct; 2],
    /// Separation product of the chosen centers at their last index.
    pub thin_tail: f64,
    /// The chosen centers as a zero set, present when `thin_tail` clears the threshold.
    pub thin_factor: Option<BlaschkeProduct>,
}

impl LadderConstruction {
    pub fn all_passed(&self) -> bool {
        self.verification.iter().all(|v| v.passed)
    }
}

fn in_window(z: DiscPoint, half_angle: f64) -> bool {
    z.arg().abs() <= half_angle
}

fn radial_band(zeros: &[DiscPoint], lo: f64, hi: f64) -> Vec<DiscPoint> {
    zeros
        .iter()
        .copied()
        .filter(|z| {
            let r = z.norm();
            r >= lo && r < hi
        })
        .collect()
}

fn total_defect(c: DiscPoint, zeros: &[DiscPoint]) -> f64 {
    zeros.iter().map(|z| transported_defect(c.z(), z.z())).sum()
}

/// Grid minimum of `|B(L_c(ζ))|` over `|ζ| ≤ η`, evaluated directly.
fn measured_minimum(b: &BlaschkeProduct, c: DiscPoint, eta: f64, radial: usize, angular: usize) -> Result<f64> {
    let m = MobiusAut::new(c);
    let mut min = f64::INFINITY;
    let mut visit = |zeta: Complex64| -> Result<()> {
        let v = b.evaluate(m.apply(zeta)?)?.norm();
        if v < min {
            min = v;
        }
        Ok(())
    };
    visit(Complex64::new(0.0, 0.0))?;
    for i in 1..=radial {
        let rho = eta * i as f64 / radial as f64;
        for k in 0..angular {
            visit(Complex64::from_polar(rho, 2.0 * PI * k as f64 / angular as f64))?;
        }
    }
    // the minimum of a zero-free modulus sits on the outer circle, so sample it densely
    let fine = 4 * angular;
    for k in 0..fine {
        visit(Complex64::from_polar(eta, 2.0 * PI * (k as f64 + 0.5) / fine as f64))?;
    }
    Ok(min)
}

/// Builds the sector ladder for `zeros ⊂ S[ℓ, 1)` along `candidates`.
pub fn ladder_construct(
    zeros: &[DiscPoint],
    candidates: &DiscSequence,
    config: &LadderConfig,
) -> Result<LadderConstruction> {
    config.validate()?;
    let ell = config.ell;
    let half_angle = (1.0 - ell) / 2.0;
    if let Some(z) = zeros.iter().find(|&&z| z.norm() < ell || !in_window(z, half_angle)) {
        return Err(Error::Precondition(format!(
            "zero {:?} lies outside the sector S[{ell}, 1)",
            z.z()
        )));
    }

    let mut s = vec![ell];
    let mut r = Vec::new();
    let mut indices = Vec::new();
    let mut centers = Vec::new();
    let mut verification = Vec::new();
    let mut next = 0usize;

    for (j, (&eps, &eta)) in config.eps.iter().zip(&config.eta).enumerate() {
        let rung = j + 1;
        let s_j = s[j];
        let r_j = (2.0 * s_j + 1.0) / 3.0;
        let delta = eps * (1.0 - eta) / (1.0 + eta);
        let inner = radial_band(zeros, ell, r_j);

        if next >= candidates.len() {
            return Err(Error::Construction {
                rung,
                reason: format!("candidate sequence exhausted after {} points", candidates.len()),
            });
        }
        let mut best = f64::INFINITY;
        let mut chosen = None;
        for (n, &c) in candidates.points().iter().enumerate().skip(next) {
            let d = total_defect(c, &inner);
            best = best.min(d);
            if d < delta / 2.0 {
                chosen = Some((n, c, d));
                break;
            }
        }
        let (n, c, inner_defect) = chosen.ok_or_else(|| Error::Infeasible {
            reason: format!(
                "rung {rung}: no remaining candidate brings the defect of {} zeros below δ/2 = {:e} (best {:e})",
                inner.len(),
                delta / 2.0,
                best
            ),
            best_residuals: vec![best, delta / 2.0],
        })?;

        // s_{j+1} from the ladder 1 − (1 − r_j)2^{-m}
        let mut next_s = None;
        for m in 1..=64 {
            let t = 1.0 - (1.0 - r_j) * 0.5f64.powi(m);
            if t >= 1.0 {
                break;
            }
            let tail = radial_band(zeros, t, 1.0);
            let d = total_defect(c, &tail);
            if d < delta / 2.0 {
                next_s = Some((t, d));
                break;
            }
        }
        let (s_next, tail_defect) = next_s.ok_or_else(|| Error::Infeasible {
            reason: format!(
                "rung {rung}: zeros accumulate too fast at the boundary for δ/2 = {:e}",
                delta / 2.0
            ),
            best_residuals: vec![delta / 2.0],
        })?;

        let mut rung_zeros = inner.clone();
        rung_zeros.extend(radial_band(zeros, s_next, 1.0));
        let rung_product = BlaschkeProduct::new(rung_zeros);
        let measured_min = measured_minimum(&rung_product, c, eta, config.grid_radial, config.grid_angular)?;
        let certified_min = 1.0 - defect_factor(eta) * (inner_defect + tail_defect);

        verification.push(RungCheck {
            rung,
            eta,
            eps,
            delta,
            inner_defect,
            tail_defect,
            certified_min,
            measured_min,
            passed: measured_min > 1.0 - eps,
        });
        r.push(r_j);
        s.push(s_next);
        indices.push(n);
        centers.push(c);
        next = n + 1;
    }

    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    let mut b3 = Vec::new();
    for j in 0..r.len() {
        b1.extend(radial_band(zeros, s[j], r[j]));
        let gap = radial_band(zeros, r[j], s[j + 1]);
        // rung j+1 is odd for j even: S[r_{2i−1}, s_{2i}) feeds B_2
        if j % 2 == 0 {
            b2.extend(gap);
        } else {
            b3.extend(gap);
        }
    }
    let uncovered = match s.last() {
        Some(&last) if !r.is_empty() => radial_band(zeros, last, 1.0),
        _ => zeros.to_vec(),
    };

    let b1_product = BlaschkeProduct::new(b1.clone());
    let candidate_products = [
        b1_product.multiply(&BlaschkeProduct::new(b2.clone())),
        b1_product.multiply(&BlaschkeProduct::new(b3.clone())),
    ];
    let diag = carleson_diagnostics(&centers);
    let thin_tail = diag.tail.last().copied().unwrap_or(1.0);
    let thin_factor = (!centers.is_empty() && diag.is_thin(config.thin_threshold))
        .then(|| BlaschkeProduct::new(centers.clone()));

    Ok(LadderConstruction {
        s,
        r,
        indices,
        centers,
        b1,
        b2,
        b3,
        uncovered,
        verification,
        candidate_products,
        thin_tail,
        thin_factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(base: f64, n: i32) -> Vec<DiscPoint> {
        (1..=n).map(|k| DiscPoint::real(1.0 - base.powi(-k))).collect()
    }

    fn config(rungs: i32) -> LadderConfig {
        LadderConfig::new(
            0.5,
            (1..=rungs).map(|j| 0.5f64.powi(j)).collect(),
            (1..=rungs).map(|j| 1.0 - 0.5f64.powi(j)).collect(),
        )
    }

    #[test]
    fn empty_zero_set_gives_trivial_ladder() {
        let cands = DiscSequence::new(geometric(3.0, 10));
        let lad = ladder_construct(&[], &cands, &config(3)).unwrap();
        assert_eq!(lad.indices, vec![0, 1, 2]);
        for v in &lad.verification {
            assert_eq!(v.measured_min, 1.0);
            assert!(v.passed);
        }
        assert!(lad.b1.is_empty() && lad.b2.is_empty() && lad.b3.is_empty());
    }

    #[test]
    fn rungs_interleave() {
        let zeros = geometric(2.0, 30);
        let cands = DiscSequence::new(geometric(3.0, 30));
        let lad = ladder_construct(&zeros, &cands, &config(3)).unwrap();
        for j in 0..lad.r.len() {
            assert_eq!(lad.r[j], (2.0 * lad.s[j] + 1.0) / 3.0);
            assert!(lad.s[j] < lad.r[j] && lad.r[j] < lad.s[j + 1]);
        }
        assert!(lad.indices.windows(2).all(|w| w[0] < w[1]));
        assert!(lad.all_passed());
        for v in &lad.verification {
            assert!(v.certified_min > 1.0 - v.eps);
            assert!(v.measured_min >= v.certified_min);
        }
    }

    #[test]
    fn tiny_eps_with_few_candidates_is_infeasible() {
        let zeros = geometric(2.0, 30);
        let cands = DiscSequence::new(geometric(3.0, 5));
        let mut cfg = config(1);
        cfg.eps = vec![1e-9];
        assert!(matches!(
            ladder_construct(&zeros, &cands, &cfg),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn running_out_of_candidates_names_the_rung() {
        let cands = DiscSequence::new(geometric(3.0, 2));
        match ladder_construct(&[], &cands, &config(4)) {
            Err(Error::Construction { rung, .. }) => assert_eq!(rung, 3),
            other => panic!("expected construction error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_zeros_outside_sector() {
        let cands = DiscSequence::new(geometric(3.0, 5));
        let zeros = vec![DiscPoint::from_polar(0.8, 0.5).unwrap()];
        assert!(matches!(
            ladder_construct(&zeros, &cands, &config(1)),
            Err(Error::Precondition(_))
        ));
    }
}
