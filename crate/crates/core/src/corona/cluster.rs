//! Cluster values of bounded functions along sequences tending to the circle.
//!
//! A finite stand-in for Bolzano–Weierstrass: the box of value vectors is
//! bisected along its widest coordinate, keeping the more populated half,
//! until every coordinate fits in a box small enough to be Cauchy within
//! `eps`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::DiscSequence;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailHit {
    pub j: usize,
    pub point: Complex64,
    /// `max_k |f_k(ζ_j) − limit_k|`.
    pub deviation: f64,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    /// Extracted subsequence, increasing.
    pub indices: Vec<usize>,
    /// Value vector at the last extracted index.
    pub limit: Vec<Complex64>,
    pub tail: Vec<TailHit>,
    /// Every tail index lies in the `eps`-neighborhood of the limit.
    pub all_hit: bool,
    pub eps: f64,
}

fn coords(v: &[Complex64]) -> impl Iterator<Item = f64> + '_ {
    v.iter().flat_map(|z| [z.re, z.im])
}

/// Extracts a subsequence along which all `f_k(c_j)` are Cauchy within `eps`.
///
/// Ties between halves go to the one holding the later index, so the
/// extraction leans toward the tail of the sequence.
pub fn cluster_scenario(functions: &[FunctionSpec], seq: &DiscSequence, eps: f64) -> Result<ClusterReport> {
    if functions.is_empty() || seq.is_empty() {
        return Err(Error::Domain("cluster_scenario needs functions and a nonempty sequence".into()));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    let pts = seq.points();
    if let Some(j) = pts
        .windows(2)
        .position(|w| (1.0 - w[1].z()).norm() >= (1.0 - w[0].z()).norm())
    {
        return Err(Error::Precondition(format!(
            "sequence does not approach 1 monotonically at index {}",
            j + 1
        )));
    }
    let values: Vec<Vec<Complex64>> = pts
        .iter()
        .map(|c| functions.iter().map(|f| f.eval(c.z())).collect())
        .collect();
    let flat: Vec<Vec<f64>> = values.iter().map(|v| coords(v).collect()).collect();
    if flat.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Domain("function values must be finite".into()));
    }

    let dim = flat[0].len();
    let mut lo: Vec<f64> = (0..dim).map(|d| flat.iter().map(|v| v[d]).fold(f64::INFINITY, f64::min)).collect();
    let mut hi: Vec<f64> = (0..dim).map(|d| flat.iter().map(|v| v[d]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut active: Vec<usize> = (0..flat.len()).collect();
    let side = eps / 2.0;
    loop {
        let (d, width) = (0..dim)
            .map(|d| (d, hi[d] - lo[d]))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        if width <= side {
            break;
        }
        let mid = lo[d] + width / 2.0;
        let (lower, upper): (Vec<usize>, Vec<usize>) = active.iter().partition(|&&j| flat[j][d] <= mid);
        let take_upper = match upper.len().cmp(&lower.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => upper.last() > lower.last(),
        };
        if take_upper {
            lo[d] = mid;
            active = upper;
        } else {
            hi[d] = mid;
            active = lower;
        }
    }
    if active.len() < 2 {
        return Err(Error::Extraction(format!(
            "no Cauchy subsequence at eps = {eps} among {} terms; lengthen the sequence",
            pts.len()
        )));
    }

    let limit = values[*active.last().unwrap()].clone();
    let tail: Vec<TailHit> = active
        .iter()
        .map(|&j| {
            let deviation = values[j]
                .iter()
                .zip(&limit)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            TailHit {
                j,
                point: pts[j].z(),
                deviation,
                hit: deviation < eps,
            }
        })
        .collect();
    Ok(ClusterReport {
        all_hit: tail.iter().all(|t| t.hit),
        indices: active,
        limit,
        tail,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::disc::DiscPoint;

    fn dyadic(n: i32) -> DiscSequence {
        DiscSequence::new((1..=n).map(|j| DiscPoint::real(1.0 - 0.5f64.powi(j))).collect())
    }

    #[test]
    fn identity_tends_to_one() {
        let r = cluster_scenario(&[FunctionSpec::identity()], &dyadic(40), 1e-6).unwrap();
        assert!((r.limit[0] - 1.0).norm() < 1e-6);
        assert!(r.all_hit);
        assert!(r.indices.len() >= 2);
    }

    #[test]
    fn blaschke_triple() {
        let s = dyadic(40);
        let b = s.blaschke_product();
        let f = [
            FunctionSpec::identity(),
            FunctionSpec::FiniteBlaschke(b.clone()),
            FunctionSpec::FiniteBlaschke(b.multiply(&b)),
        ];
        let r = cluster_scenario(&f, &s, 1e-6).unwrap();
        assert!((r.limit[0] - 1.0).norm() < 1e-6);
        assert_eq!(r.limit[1], Complex64::new(0.0, 0.0));
        assert_eq!(r.limit[2], Complex64::new(0.0, 0.0));
        assert!(r.all_hit);
    }

    #[test]
    fn short_sequence_fails_to_extract() {
        let err = cluster_scenario(&[FunctionSpec::identity()], &dyadic(6), 1e-6).unwrap_err();
        assert!(matches!(err, Error::Extraction(_)));
    }

    #[test]
    fn rejects_sequences_not_tending_to_one() {
        let s = DiscSequence::new(vec![DiscPoint::real(0.9), DiscPoint::real(0.5)]);
        assert!(matches!(
            cluster_scenario(&[FunctionSpec::identity()], &s, 1e-3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn oscillating_values_pick_a_cluster() {
        // B(z) with zeros on the sequence's even terms alternates between 0 and
        // values bounded away from 0 on the odd terms
        let s = dyadic(40);
        let evens: Vec<DiscPoint> = s.points().iter().step_by(2).copied().collect();
        let f = [FunctionSpec::FiniteBlaschke(BlaschkeProduct::new(evens))];
        let r = cluster_scenario(&f, &s, 1e-3).unwrap();
        assert!(r.all_hit);
        let again = cluster_scenario(
            &f,
            &DiscSequence::new(r.indices.iter().map(|&j| s.points()[j]).collect()),
            1e-3,
        )
        .unwrap();
        assert!(again.limit.iter().zip(&r.limit).all(|(a, b)| (a - b).norm() < 1e-3));
    }
}
