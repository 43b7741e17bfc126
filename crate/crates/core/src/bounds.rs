//! Closed-form tail bounds, regime targets and the inequalities they rest on.
//!
//! Every probability bound is evaluated in log space and exposed as a [`TailBound`]; the
//! clamped [`TailBound::value`] is what gets compared against empirical frequencies, while
//! [`TailBound::ln`] keeps the unclamped magnitude (several of these bounds are vacuous,
//! i.e. far above one, at desk-scale parameters).

// negated comparisons below also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::urns::{classical_histogram, classical_urn_exact};

/// Ceiling that ignores floating-point noise just above an integer.
pub fn ceil_int(x: f64) -> usize {
    let nudged = x - 1e-9 * x.abs().max(1.0);
    nudged.ceil().max(0.0) as usize
}

/// A probability bound stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    ln_value: f64,
}

impl TailBound {
    pub fn from_ln(ln_value: f64) -> Self {
        TailBound { ln_value }
    }

    pub fn ln(&self) -> f64 {
        self.ln_value
    }

    /// `exp(ln)`, possibly above one or infinite.
    pub fn raw(&self) -> f64 {
        self.ln_value.exp()
    }

    /// The bound as a probability, clamped to `[0, 1]`.
    pub fn value(&self) -> f64 {
        if self.ln_value >= 0.0 {
            1.0
        } else {
            self.ln_value.exp()
        }
    }
}

/// `lambda = E[Y] = k (1 - 1/k)^s`.
pub fn lambda_empty(k: usize, s: usize) -> f64 {
    let k = k as f64;
    k * (1.0 - 1.0 / k).powf(s as f64)
}

/// Bernstein-type upper tail for the classical model:
/// `P(Y >= lambda + a) <= exp(-a^2 / (2(kpq + a/3)))` with `p = lambda/k`, `q = 1 - p`.
pub fn bernstein_tail(k: usize, s: usize, a: f64) -> Result<TailBound> {
    if !(a >= 0.0) {
        return Err(Error::invalid(format!("deviation a={a} must be nonnegative")));
    }
    if a == 0.0 {
        return Ok(TailBound::from_ln(0.0));
    }
    let p = lambda_empty(k, s) / k as f64;
    let q = 1.0 - p;
    let denom = 2.0 * (k as f64 * p * q + a / 3.0);
    Ok(TailBound::from_ln(-(a * a) / denom))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouponTail {
    /// `ceil((1 + xi) k ln k)` balls.
    pub s: usize,
    /// `k^{-xi}`, a bound on `P(Y != 0)`.
    pub bound: f64,
}

/// Coupon-collector tail: with `s = (1 + xi) k ln k` balls, `P(Y != 0) <= k^{-xi}`.
pub fn coupon_tail(k: usize, xi: f64) -> Result<CouponTail> {
    if k < 2 {
        return Err(Error::invalid("coupon tail needs k >= 2"));
    }
    if !(xi >= 0.0) {
        return Err(Error::invalid(format!("xi={xi} must be nonnegative")));
    }
    let kf = k as f64;
    Ok(CouponTail {
        s: ceil_int((1.0 + xi) * kf * kf.ln()),
        bound: kf.powf(-xi).min(1.0),
    })
}

/// Few-collisions bound: `P(k - Y <= s - a) <= (e s^2 / (k a))^a`.
pub fn occupancy_tail(k: usize, s: usize, a: f64) -> Result<TailBound> {
    if !(a > 0.0) {
        return Err(Error::invalid(format!("deviation a={a} must be positive")));
    }
    if s == 0 {
        return Ok(TailBound::from_ln(f64::NEG_INFINITY));
    }
    let ln_base = 1.0 + 2.0 * (s as f64).ln() - (k as f64).ln() - a.ln();
    Ok(TailBound::from_ln(a * ln_base))
}

/// Bookkeeping for the block-decomposition bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub k: usize,
    pub n: usize,
    pub n_tilde: usize,
    pub b: usize,
    pub delta: f64,
    pub rho: f64,
    pub xi: f64,
    pub t: f64,
    pub a: f64,
    pub r: f64,
    pub s: usize,
}

impl BoundParams {
    /// Parameters with `b = floor(n / n_tilde)` and every deviation set to zero.
    pub fn new(k: usize, n: usize, n_tilde: usize, delta: f64) -> Result<Self> {
        if n_tilde == 0 {
            return Err(Error::invalid("block size must be positive"));
        }
        let p = BoundParams {
            k,
            n,
            n_tilde,
            b: n / n_tilde,
            delta,
            rho: 0.0,
            xi: 0.0,
            t: 0.0,
            a: 0.0,
            r: 0.0,
            s: 0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n == 0 || self.n_tilde == 0 || self.b == 0 {
            return Err(Error::invalid("k, n, n_tilde and b must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta={} must lie in (0, 1)", self.delta)));
        }
        if self.b.saturating_mul(self.n_tilde) > self.n {
            return Err(Error::invalid("b * n_tilde exceeds n"));
        }
        let nonneg = [self.rho, self.xi, self.t, self.a, self.r];
        if nonneg.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::invalid("rho, xi, t, a and r must be nonnegative"));
        }
        Ok(())
    }

    /// `m_l = (1 - delta) 2 n_tilde / sqrt(k)`.
    pub fn m_l(&self) -> f64 {
        (1.0 - self.delta) * 2.0 * self.n_tilde as f64 / (self.k as f64).sqrt()
    }

    /// `m_u = (1 + delta) 2 n_tilde / sqrt(k)`.
    pub fn m_u(&self) -> f64 {
        (1.0 + self.delta) * 2.0 * self.n_tilde as f64 / (self.k as f64).sqrt()
    }
}

/// Probability that some block falls short:
/// `(2e(m_l + 1))^b * exp(-t^2 / (16 (1 + delta) n / sqrt(k)))`.
pub fn p1_bound(params: &BoundParams) -> Result<TailBound> {
    params.validate()?;
    let growth = params.b as f64 * (2.0 * std::f64::consts::E * (params.m_l() + 1.0)).ln();
    let decay = params.t * params.t / (16.0 * (1.0 + params.delta) * params.n as f64 / (params.k as f64).sqrt());
    Ok(TailBound::from_ln(growth - decay))
}

/// The classical occupancy event `P(k - Y^{(k,s)} <= threshold)` that bounds the
/// symbol-overlap term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupancyQuery {
    pub k: usize,
    pub s: usize,
    pub threshold: f64,
}

impl OccupancyQuery {
    /// Exact value through the inclusion-exclusion distribution.
    pub fn exact(&self) -> Result<f64> {
        let pmf = classical_urn_exact(self.k, self.s)?;
        Ok(pmf
            .iter()
            .enumerate()
            .filter(|&(empty, _)| (self.k - empty) as f64 <= self.threshold)
            .map(|(_, p)| p)
            .sum())
    }

    /// Monte Carlo estimate from `trials` classical draws.
    pub fn monte_carlo(&self, trials: usize, master_seed: u64) -> Result<f64> {
        let hist = classical_histogram(self.k, self.s, trials, master_seed)?;
        let hits: u64 = hist
            .iter()
            .enumerate()
            .filter(|&(empty, _)| (self.k - empty) as f64 <= self.threshold)
            .map(|(_, c)| c)
            .sum();
        Ok(hits as f64 / trials.max(1) as f64)
    }
}

/// Reduces the overlap term to a classical occupancy query with `s = ceil(r - t)` balls and
/// threshold `r - a`.
pub fn p2_bound_reduction(params: &BoundParams) -> Result<OccupancyQuery> {
    if !(params.r >= params.t && params.t >= 0.0) {
        return Err(Error::invalid(format!("need r >= t >= 0, got r={} t={}", params.r, params.t)));
    }
    Ok(OccupancyQuery {
        k: params.k,
        s: ceil_int(params.r - params.t),
        threshold: params.r - params.a,
    })
}

/// `e^{-rho(1-x)} - e^{-rho} - x(1 - e^{-rho})`, nonpositive on the whole domain.
pub fn claim_inequality_gap(x: f64, rho: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(rho >= 0.0) {
        return Err(Error::invalid(format!("need 0 <= x <= 1 and rho >= 0, got x={x} rho={rho}")));
    }
    let e = (-rho).exp();
    Ok((-rho * (1.0 - x)).exp() - e - x * (1.0 - e))
}

/// `E[X] >= x (1 - P(X <= x))` for nonnegative `X`.
pub fn expectation_lower_bound(x: f64, p_below: f64) -> Result<f64> {
    if !(x > 0.0) || !(0.0..=1.0).contains(&p_below) {
        return Err(Error::invalid(format!("need x > 0 and p_below in [0, 1], got x={x} p={p_below}")));
    }
    Ok(x * (1.0 - p_below))
}

/// The three growth regimes of `n` against `k sqrt(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `n = o(k sqrt k)`: `E[R] ~ 2n / sqrt k`.
    Small,
    /// `n = rho k sqrt(k) / 2`: `E[R] / k >= 1 - e^{-rho}` asymptotically.
    Middle,
    /// `n = (1/2 + xi) k sqrt(k) ln k`: `R = k` with high probability.
    Large,
}

impl Regime {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Regime::Small),
            2 => Ok(Regime::Middle),
            3 => Ok(Regime::Large),
            other => Err(Error::invalid(format!("regime must be 1, 2 or 3, got {other}"))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Regime::Small => 1,
            Regime::Middle => 2,
            Regime::Large => 3,
        }
    }
}

/// Sequence length, asymptotic target for `E[R]` and lower-tail bound for one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeTarget {
    pub regime: Regime,
    pub k: usize,
    pub n: usize,
    pub target: f64,
    pub rho: f64,
    pub xi: f64,
    /// False when a small-regime `n` exceeds `k sqrt(k) / 10`.
    pub within_regime: bool,
}

impl RegimeTarget {
    /// Lower-tail bound at relative deviation `dev`, clamped to `[0, 1]`:
    /// regime 1 bounds `P(R <= (1 - dev) 2n/sqrt k)`, regime 2 bounds
    /// `P(R <= (1 - dev) k (1 - e^{-rho}))`, regime 3 bounds `P(R != k)` with `dev = xi`.
    pub fn tail(&self, dev: f64) -> f64 {
        let k = self.k as f64;
        let ln = match self.regime {
            Regime::Small => 2f64.ln() - dev * dev * 2.0 * self.n as f64 / (10.0 * k.sqrt()),
            Regime::Middle => 2f64.ln() - dev * dev * k * (1.0 - (-self.rho).exp()) / 35.0,
            Regime::Large => 2f64.ln() - dev * k.ln(),
        };
        TailBound::from_ln(ln).value()
    }
}

/// Regime parameterisation. `n` is required for the small regime and overrides the derived
/// length in the other two.
pub fn regime_target(regime: Regime, k: usize, rho: f64, xi: f64, n: Option<usize>) -> Result<RegimeTarget> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let kf = k as f64;
    let scale = kf * kf.sqrt();
    let (n, target) = match regime {
        Regime::Small => {
            let n = n.ok_or_else(|| Error::invalid("the small regime needs an explicit n"))?;
            (n, 2.0 * n as f64 / kf.sqrt())
        }
        Regime::Middle => {
            if !(rho > 0.0) {
                return Err(Error::invalid(format!("rho={rho} must be positive")));
            }
            (n.unwrap_or_else(|| ceil_int(rho * scale / 2.0)), kf * (1.0 - (-rho).exp()))
        }
        Regime::Large => {
            if !(xi > 0.0) {
                return Err(Error::invalid(format!("xi={xi} must be positive")));
            }
            (n.unwrap_or_else(|| ceil_int((0.5 + xi) * scale * kf.ln())), kf)
        }
    };
    let within_regime = regime != Regime::Small || n as f64 <= scale / 10.0;
    if !within_regime {
        log::warn!("n={n} exceeds k*sqrt(k)/10={:.1}; small-regime target is only indicative", scale / 10.0);
    }
    Ok(RegimeTarget {
        regime,
        k,
        n,
        target,
        rho,
        xi,
        within_regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_empty(7, 0), 7.0);
        assert_eq!(lambda_empty(1, 3), 0.0);
        assert!((lambda_empty(10, 10) - 3.486784401).abs() < 1e-12);
    }

    #[test]
    fn bernstein_values() {
        assert_eq!(bernstein_tail(50, 50, 0.0).unwrap().value(), 1.0);
        let p = 0.98f64.powi(50);
        let expected = (-36.0 / (2.0 * (50.0 * p * (1.0 - p) + 2.0))).exp();
        assert!((bernstein_tail(50, 50, 6.0).unwrap().value() - expected).abs() < 1e-14);
        // k = 1: p = 0, q = 1, kpq = 0 but a/3 keeps the denominator positive
        assert!(bernstein_tail(1, 4, 1.0).unwrap().value() < 1.0);
        assert!(bernstein_tail(5, 5, -1.0).is_err());
    }

    #[test]
    fn coupon_values() {
        let c = coupon_tail(100, 1.0).unwrap();
        assert_eq!(c.s, 922);
        assert!((c.bound - 0.01).abs() < 1e-15);
        assert_eq!(coupon_tail(100, 0.0).unwrap().bound, 1.0);
        assert!(coupon_tail(1, 1.0).is_err());
    }

    #[test]
    fn occupancy_values() {
        let b = occupancy_tail(10_000, 50, 10.0).unwrap();
        let base: f64 = std::f64::consts::E * 2500.0 / 100_000.0;
        assert!((b.value() / base.powi(10) - 1.0).abs() < 1e-12);
        assert_eq!(occupancy_tail(10, 50, 1.0).unwrap().value(), 1.0);
        assert!(occupancy_tail(10, 5, 0.0).is_err());
    }

    #[test]
    fn p1_at_zero_deviation() {
        let p = BoundParams::new(100, 1000, 32, 0.2).unwrap();
        let v = p1_bound(&p).unwrap();
        let expected = p.b as f64 * (2.0 * std::f64::consts::E * (p.m_l() + 1.0)).ln();
        assert!((v.ln() - expected).abs() < 1e-9);
        assert_eq!(v.value(), 1.0);
    }

    #[test]
    fn p2_reduction() {
        let mut p = BoundParams::new(6, 12, 2, 0.5).unwrap();
        p.r = 5.0;
        p.t = 2.0;
        p.a = 1.0;
        let q = p2_bound_reduction(&p).unwrap();
        assert_eq!((q.k, q.s, q.threshold), (6, 3, 4.0));
        p.t = 6.0;
        assert!(p2_bound_reduction(&p).is_err());
    }

    #[test]
    fn claim_domain() {
        assert_eq!(claim_inequality_gap(0.0, 2.0).unwrap(), 0.0);
        assert!(claim_inequality_gap(1.0, 2.0).unwrap().abs() < 1e-15);
        assert!(claim_inequality_gap(1.5, 2.0).is_err());
        assert!(claim_inequality_gap(0.5, -1.0).is_err());
    }

    #[test]
    fn expectation_bound() {
        assert_eq!(expectation_lower_bound(3.0, 1.0).unwrap(), 0.0);
        assert_eq!(expectation_lower_bound(3.0, 0.0).unwrap(), 3.0);
        assert!(expectation_lower_bound(0.0, 0.5).is_err());
    }

    #[test]
    fn regimes() {
        let r2 = regime_target(Regime::Middle, 100, 1.0, 0.1, None).unwrap();
        assert_eq!(r2.n, 500);
        assert!((r2.target - 100.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        let r3 = regime_target(Regime::Large, 12, 0.0, 1.0, None).unwrap();
        assert_eq!(r3.n, 155);
        assert_eq!(r3.target, 12.0);
        assert!((r3.tail(1.0) - 2.0 / 12.0).abs() < 1e-15);
        let r1 = regime_target(Regime::Small, 400, 0.0, 0.5, Some(800)).unwrap();
        assert_eq!(r1.target, 80.0);
        assert!(r1.within_regime);
        assert!((r1.tail(0.5) - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!(regime_target(Regime::Small, 400, 0.0, 0.5, None).is_err());
        assert!(regime_target(Regime::Middle, 100, 0.0, 0.5, None).is_err());
        assert!(Regime::from_index(4).is_err());
        assert!(!regime_target(Regime::Small, 16, 0.0, 0.5, Some(100)).unwrap().within_regime);
    }
}
