//! Numeric Legendre transform of the log-moment generating function.
//!
//! `Λ*(t) = sup_s { st − Λ(s) }` is evaluated by a derivative-free search:
//! the objective is concave in `s`, so a doubling bracket followed by
//! ternary search converges without ever needing `Λ'`. Closed forms are used
//! by [`RateFunction::legendre`] where the law admits one; the numeric
//! engine stays available as [`RateFunction::legendre_numeric`] and the two
//! are cross-checked in tests.

use std::collections::HashMap;
use std::f64::consts::LN_2;
use std::sync::Mutex;

use crate::dist::{DistSpec, Distribution};
use crate::{Error, ExtReal, Result};

const TERNARY_ITERS: usize = 200;
const BISECT_ITERS: usize = 200;
/// Distance kept from the boundary of `Λ`'s finiteness interval.
const RADIUS_MARGIN: f64 = 1e-12;

/// The rate function `Λ*` of a law, with optional memoization.
#[derive(Debug)]
pub struct RateFunction {
    dist: Distribution,
    tol: f64,
    memo: Option<Mutex<HashMap<u64, ExtReal>>>,
}

impl Clone for RateFunction {
    fn clone(&self) -> Self {
        RateFunction {
            dist: self.dist.clone(),
            tol: self.tol,
            memo: self.memo.as_ref().map(|_| Mutex::new(HashMap::new())),
        }
    }
}

impl RateFunction {
    pub fn new(dist: Distribution) -> Self {
        RateFunction {
            dist,
            tol: 1e-10,
            memo: None,
        }
    }

    /// Cache evaluated points. Results are identical to the unmemoized path.
    pub fn with_memo(mut self) -> Self {
        self.memo = Some(Mutex::new(HashMap::new()));
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tol = tol;
        self
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    /// Upper end of the domain where `Λ*` can be finite.
    pub fn domain_cap(&self) -> ExtReal {
        self.dist.ess_sup()
    }

    /// `Λ*(t)`; even in `t`.
    pub fn legendre(&self, t: f64) -> ExtReal {
        let t = t.abs();
        if let Some(memo) = &self.memo {
            if let Some(&v) = memo.lock().expect("memo poisoned").get(&t.to_bits()) {
                return v;
            }
        }
        let v = self
            .closed_form(t)
            .unwrap_or_else(|| self.legendre_numeric(t));
        if let Some(memo) = &self.memo {
            memo.lock().expect("memo poisoned").insert(t.to_bits(), v);
        }
        v
    }

    /// Closed form of `Λ*` where the law has one.
    pub fn closed_form(&self, t: f64) -> Option<ExtReal> {
        let t = t.abs();
        match *self.dist.spec() {
            DistSpec::Gaussian { sigma } => Some(ExtReal::Finite(0.5 * (t / sigma).powi(2))),
            DistSpec::Laplace { scale } => {
                let u = t / scale;
                let r = (1.0 + u * u).sqrt();
                // √(1+u²) − 1 − log((1 + √(1+u²))/2)
                let a = u * u / (r + 1.0);
                Some(ExtReal::Finite(a - (0.5 * a).ln_1p()))
            }
            DistSpec::Rademacher => Some(if t < 1.0 {
                ExtReal::Finite(
                    0.5 * (1.0 + t) * t.ln_1p() + 0.5 * (1.0 - t) * (-t).ln_1p(),
                )
            } else if t == 1.0 {
                ExtReal::Finite(LN_2)
            } else {
                ExtReal::PosInf
            }),
            DistSpec::PointMass => Some(if t == 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }),
            DistSpec::Uniform { .. } | DistSpec::StepTail(_) => None,
        }
    }

    /// The generic conjugation engine, used for every law.
    pub fn legendre_numeric(&self, t: f64) -> ExtReal {
        let t = t.abs();
        if t == 0.0 {
            return ExtReal::ZERO;
        }
        match self.dist.ess_sup() {
            ExtReal::Finite(cap) if t > cap => return ExtReal::PosInf,
            ExtReal::Finite(cap) if t == cap => {
                // sup is approached as s → ∞: −log P(X = ess sup)
                return match self.dist.log_top_atom() {
                    Some(lm) => ExtReal::Finite(-lm),
                    None => ExtReal::PosInf,
                };
            }
            _ => {}
        }

        let objective = |s: f64| match self.dist.log_mgf(s) {
            ExtReal::Finite(l) => s * t - l,
            ExtReal::PosInf => f64::NEG_INFINITY,
        };
        let s_max = match self.dist.mgf_radius() {
            ExtReal::Finite(r) => r * (1.0 - RADIUS_MARGIN),
            ExtReal::PosInf => f64::MAX,
        };

        // Expand until the concave objective stops increasing.
        let mut hi = s_max.min(1.0);
        let mut f_hi = objective(hi);
        while hi < s_max {
            let next = (2.0 * hi).min(s_max);
            let f_next = objective(next);
            hi = next;
            if !(f_next > f_hi) {
                break;
            }
            f_hi = f_next;
        }

        let mut lo = 0.0;
        for _ in 0..TERNARY_ITERS {
            if hi - lo <= self.tol * (1.0 + hi) * 1e-6 {
                break;
            }
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if objective(m1) < objective(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let best = objective(lo).max(objective(hi)).max(objective(0.5 * (lo + hi)));
        ExtReal::Finite(best.max(0.0))
    }

    /// Generalised inverse `inf { s ≥ 0 : Λ*(s) ≥ y }`, capped at the
    /// essential supremum.
    pub fn rate_inverse(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        let cap = self.domain_cap();
        let mut hi = match cap {
            ExtReal::Finite(c) => {
                if !self.legendre(c).ge(y) {
                    // Λ* < y on [0, c] and +∞ beyond
                    return c;
                }
                c
            }
            ExtReal::PosInf => {
                let mut h = 1.0;
                while !self.legendre(h).ge(y) {
                    h *= 2.0;
                }
                h
            }
        };
        let mut lo = 0.0;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.legendre(mid).ge(y) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        match cap {
            ExtReal::Finite(c) => hi.min(c),
            ExtReal::PosInf => hi,
        }
    }

    /// Chernoff's bound `P(X > t) ≤ exp(−Λ*(t))`.
    pub fn chernoff_bound(&self, t: f64) -> f64 {
        self.legendre(t).exp_neg()
    }

    /// `P(X_1 + … + X_k > kt) ≤ exp(−k Λ*(t))`.
    pub fn sum_bound(&self, k: u32, t: f64) -> f64 {
        assert!(k >= 1, "k must be positive");
        self.legendre(t).scale(k as f64).exp_neg()
    }
}

/// `x_n = inf { t > 0 : P(X > t) ≤ ω n^{−α} }`.
///
/// Discrete laws return the exact atom location where the tail first drops
/// below the level; continuous laws are bisected on `−log P(X > t)`.
pub fn threshold_xn(dist: &Distribution, alpha: f64, omega: f64, n: u64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(omega >= 1.0) {
        return Err(Error::invalid(format!("omega must be at least 1, got {omega}")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    let ln_n = (n as f64).ln();
    let p = omega * (-alpha * ln_n).exp();
    if p >= 0.5 {
        return Err(Error::DegenerateProbability { p });
    }
    // P(X > t) ≤ p  ⇔  −log P(X > t) ≥ target
    let target = alpha * ln_n - omega.ln();
    let below = |t: f64| dist.neg_log_tail(t).ge(target);

    if dist.is_degenerate() {
        return Ok(0.0);
    }
    if let Some(locs) = dist.atom_locations() {
        let x = locs
            .iter()
            .copied()
            .find(|&x| below(x))
            .expect("tail vanishes at the top atom");
        return Ok(x);
    }

    let mut hi = match dist.ess_sup() {
        ExtReal::Finite(c) => c,
        ExtReal::PosInf => {
            let mut h = 1.0;
            while !below(h) {
                h *= 2.0;
            }
            h
        }
    };
    let mut lo = 0.0;
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!({
        let inv = RateFunction::new(dist.clone()).rate_inverse(alpha * ln_n);
        hi <= inv * (1.0 + 1e-9) + 1e-12
    });
    Ok(hi)
}
