use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::density::{Piece, SimpleDensity};
use crate::disc::{arc_partner_endpoint, orthogonal_arc_midpoint, OrthogonalArc};
use crate::error::{Error, Result};

/// Position of the quartile pair relative to 0, by the mass on the right half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// Right mass ≤ 1/4: `α < β ≤ 0`.
    Left,
    /// Right mass in (1/4, 3/4]: `α ≤ 0 < β`.
    Straddle,
    /// Right mass > 3/4: `0 < α < β`.
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuartilePair {
    pub alpha: f64,
    pub beta: f64,
    pub case_tag: CaseTag,
}

/// Points `α`, `β` with `∫_{−π}^{α} s dm = 1/4 = ∫_{β}^{π} s dm`.
///
/// On flat stretches of the distribution function the leftmost `α` and the
/// rightmost `β` are taken. The case tag uses the mass on `[0, π)`, which for
/// densities supported in `(−ε₀, ε₀)` is the mass on `[0, ε₀)`.
pub fn quartiles(s: &SimpleDensity) -> QuartilePair {
    let total = s.total_mass();
    let quarter = 0.25 * total;
    let pieces = s.pieces();

    // mirrored arithmetic keeps β = −α exact for symmetric densities
    let mut alpha = pieces.last().map_or(0.0, |p| p.b);
    let mut acc = 0.0;
    for p in pieces.iter().filter(|p| p.coeff > 0.0) {
        let m = p.mass();
        if acc + m >= quarter - FLAT_TOL {
            alpha = (p.a + (quarter - acc) / (p.coeff / (2.0 * PI))).min(p.b);
            break;
        }
        acc += m;
    }
    let mut beta = pieces.first().map_or(0.0, |p| p.a);
    let mut acc = 0.0;
    for p in pieces.iter().rev().filter(|p| p.coeff > 0.0) {
        let m = p.mass();
        if acc + m >= quarter - FLAT_TOL {
            beta = (p.b - (quarter - acc) / (p.coeff / (2.0 * PI))).max(p.a);
            break;
        }
        acc += m;
    }

    let right = s.mass_on(0.0, PI) / total;
    let case_tag = if right <= 0.25 {
        CaseTag::Left
    } else if right <= 0.75 {
        CaseTag::Straddle
    } else {
        CaseTag::Right
    };
    QuartilePair { alpha, beta, case_tag }
}

/// Ordering hypothesis relating the quartiles `(α♯, β♯)` of the density to
/// the target arc `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignCase {
    /// `α♯ ≤ α ≤ 0 ≤ β ≤ β♯`
    A,
    /// `0 ≤ α, α♯` and `β ≤ β♯`
    B,
    /// `0 ≥ β, β♯` and `α ≥ α♯`
    C,
}

impl std::str::FromStr for AlignCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(AlignCase::A),
            "b" | "B" => Ok(AlignCase::B),
            "c" | "C" => Ok(AlignCase::C),
            _ => Err(Error::Domain(format!("unknown alignment case {s:?}"))),
        }
    }
}

const ALIGN_TOL: f64 = 1e-8;
// masses this close to a quarter count as reaching it
const FLAT_TOL: f64 = 1e-14;

fn holds(case: AlignCase, sharp: &QuartilePair, alpha: f64, beta: f64) -> bool {
    let (a_s, b_s) = (sharp.alpha, sharp.beta);
    match case {
        AlignCase::A => a_s <= alpha && alpha <= 0.0 && 0.0 <= beta && beta <= b_s,
        AlignCase::B => alpha >= 0.0 && a_s >= 0.0 && beta <= b_s,
        AlignCase::C => beta <= 0.0 && b_s <= 0.0 && alpha >= a_s,
    }
}

// Support touches t from the left: some positive piece has a < t ≤ b.
fn supported_left_of(pieces: &[Piece], t: f64) -> bool {
    pieces.iter().any(|p| p.coeff > 0.0 && p.a < t && t <= p.b)
}

// Support touches t from the right: some positive piece has a ≤ t < b.
fn supported_right_of(pieces: &[Piece], t: f64) -> bool {
    pieces.iter().any(|p| p.coeff > 0.0 && p.a <= t && t < p.b)
}

/// Splits the density at `lo < hi` and rescales the three parts to masses
/// 1/4, 1/2, 1/4, which puts the quartiles exactly at `lo` and `hi`.
fn reweight(s: &SimpleDensity, lo: f64, hi: f64) -> Option<Vec<Piece>> {
    let mut groups: [Vec<Piece>; 3] = Default::default();
    for p in s.pieces().iter().filter(|p| p.coeff > 0.0) {
        for (g, (x, y)) in [(-PI, lo), (lo, hi), (hi, PI)].into_iter().enumerate() {
            let a = p.a.max(x);
            let b = p.b.min(y);
            if b > a {
                groups[g].push(Piece { a, b, coeff: p.coeff });
            }
        }
    }
    let mut out = Vec::new();
    for (g, want) in groups.iter_mut().zip([0.25, 0.5, 0.25]) {
        let mass: f64 = g.iter().map(Piece::mass).sum();
        if mass.is_nan() || mass <= 0.0 {
            return None;
        }
        out.extend(g.iter().map(|p| Piece {
            coeff: p.coeff * want / mass,
            ..*p
        }));
    }
    Some(out)
}

/// Modifies `s_sharp` so its quartile arc passes through the mid-point of `target`.
///
/// The density is cut at a new quartile pair `(α*, β*)` lying on an
/// orthogonal arc through the target mid-point `c`, and each side is
/// rescaled. Case (a) aims for `(α*, β*) = (α, β)`; case (b) keeps `α♯`
/// when `α♯ < α`, and case (c) keeps `β♯` when `β♯ > β`. When the support
/// does not reach the preferred endpoints, the nearest admissible pair on
/// the family of arcs through `c` is used instead.
pub fn align_arcs(s_sharp: &SimpleDensity, target: &OrthogonalArc, case: AlignCase) -> Result<SimpleDensity> {
    let sharp = quartiles(s_sharp);
    let (alpha, beta) = (target.alpha(), target.beta());
    if !holds(case, &sharp, alpha, beta) {
        return Err(Error::Domain(format!(
            "case {case:?} ordering fails for α♯ = {}, β♯ = {}, α = {alpha}, β = {beta}",
            sharp.alpha, sharp.beta
        )));
    }
    if (sharp.alpha - alpha).abs() <= 1e-12 && (sharp.beta - beta).abs() <= 1e-12 {
        return Ok(s_sharp.clone());
    }

    let c = target.midpoint();
    let partner = |t: f64| arc_partner_endpoint(c, t);
    let natural = match case {
        AlignCase::A => alpha,
        AlignCase::B if sharp.alpha < alpha => sharp.alpha,
        AlignCase::C if sharp.beta > beta => partner(sharp.beta)?,
        _ => alpha,
    };
    let pieces = s_sharp.pieces();
    let admissible = |lo: f64| -> Option<(f64, f64)> {
        let hi = if lo == alpha { beta } else { partner(lo).ok()? };
        let ok = lo < hi
            && hi - lo < PI
            && supported_left_of(pieces, lo)
            && supported_right_of(pieces, hi)
            && s_sharp.mass_on(lo, hi) > 0.0;
        ok.then_some((lo, hi))
    };

    let chosen = admissible(natural).or_else(|| {
        // feasibility is constant between consecutive breakpoints of the
        // support and of its image under the arc partner map
        let mut marks: Vec<f64> = Vec::new();
        for p in pieces.iter().filter(|p| p.coeff > 0.0) {
            for t in [p.a, p.b] {
                marks.push(t);
                if let Ok(u) = partner(t) {
                    marks.push(u);
                }
            }
        }
        marks.retain(|t| t.is_finite() && *t > -PI && *t < PI);
        marks.sort_by(f64::total_cmp);
        marks.dedup();
        let mut probes = marks.clone();
        probes.extend(marks.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        probes
            .into_iter()
            .filter_map(|t| admissible(t).map(|pair| ((t - natural).abs(), t, pair)))
            .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)))
            .map(|(_, _, pair)| pair)
    });
    let (lo, hi) = chosen.ok_or_else(|| Error::Infeasible {
        reason: "no quartile pair on an arc through the target mid-point is supported by the density".into(),
        best_residuals: vec![],
    })?;
    let pieces = reweight(s_sharp, lo, hi).ok_or_else(|| Error::Infeasible {
        reason: "trimming would empty part of the support".into(),
        best_residuals: vec![],
    })?;
    let out = SimpleDensity::normalized(pieces)?;

    let q = quartiles(&out);
    let arc = OrthogonalArc::new(q.alpha, q.beta)?;
    let miss = arc.distance_to(c.z());
    if miss > ALIGN_TOL {
        return Err(Error::Infeasible {
            reason: format!("aligned quartile arc misses the mid-point by {miss:e}"),
            best_residuals: vec![miss],
        });
    }
    // the recomputed mid-point stays well defined
    orthogonal_arc_midpoint(q.alpha, q.beta)?;
    Ok(out)
}
