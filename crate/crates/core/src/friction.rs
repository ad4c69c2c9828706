//! Tire–road friction coefficient as a function of longitudinal slip.
//!
//! The slip domain is the closed interval `[0, 1]`. Every model caches its
//! extrema over that interval at construction time, since the attack gain
//! bounds need `mu_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid resolution used when a model caches its own extrema.
pub const DEFAULT_EXTREMA_GRID: usize = 10_001;

/// Three-parameter Burckhardt curve `c1 (1 - exp(-c2 λ)) - c3 λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurckhardtParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BurckhardtParams {
    pub const DRY_ASPHALT: Self = Self {
        c1: 1.28,
        c2: 23.99,
        c3: 0.52,
    };

    pub const WET_ASPHALT: Self = Self {
        c1: 0.86,
        c2: 33.82,
        c3: 0.35,
    };

    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let params = Self { c1, c2, c3 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1.is_finite() && self.c1 > 0.0) {
            return Err(Error::config(
                "road.c1",
                format!("must be > 0, got {}", self.c1),
            ));
        }
        if !(self.c2.is_finite() && self.c2 > 0.0) {
            return Err(Error::config(
                "road.c2",
                format!("must be > 0, got {}", self.c2),
            ));
        }
        if !(self.c3.is_finite() && self.c3 >= 0.0) {
            return Err(Error::config(
                "road.c3",
                format!("must be >= 0, got {}", self.c3),
            ));
        }
        Ok(())
    }

    #[inline]
    pub fn eval(&self, lambda: f64) -> f64 {
        // -expm1(-x) keeps full relative precision near λ = 0.
        -self.c1 * (-self.c2 * lambda).exp_m1() - self.c3 * lambda
    }

    #[inline]
    pub fn derivative(&self, lambda: f64) -> f64 {
        self.c1 * self.c2 * (-self.c2 * lambda).exp() - self.c3
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FrictionKind {
    Burckhardt(BurckhardtParams),
    /// Identically zero; the adversary's "no knowledge" estimate.
    Zero,
    /// Piecewise-linear through `(λ, μ)` knots, constant beyond the end knots.
    Tabulated(Vec<(f64, f64)>),
}

/// Extrema of `μ` over the slip domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuExtrema {
    pub mu_min: f64,
    pub mu_max: f64,
    pub lambda_argmax: f64,
}

/// A friction curve on `[0, 1]` with cached extrema. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct FrictionModel {
    kind: FrictionKind,
    extrema: MuExtrema,
}

impl FrictionModel {
    pub fn new(kind: FrictionKind) -> Result<Self> {
        match &kind {
            FrictionKind::Burckhardt(p) => p.validate()?,
            FrictionKind::Zero => {}
            FrictionKind::Tabulated(knots) => validate_knots(knots)?,
        }
        let mut model = Self {
            kind,
            extrema: MuExtrema {
                mu_min: 0.0,
                mu_max: 0.0,
                lambda_argmax: 0.0,
            },
        };
        model.extrema = model.mu_extrema(DEFAULT_EXTREMA_GRID)?;
        Ok(model)
    }

    pub fn burckhardt(params: BurckhardtParams) -> Result<Self> {
        Self::new(FrictionKind::Burckhardt(params))
    }

    pub fn dry_asphalt() -> Self {
        Self::burckhardt(BurckhardtParams::DRY_ASPHALT).expect("preset is valid")
    }

    pub fn wet_asphalt() -> Self {
        Self::burckhardt(BurckhardtParams::WET_ASPHALT).expect("preset is valid")
    }

    pub fn zero() -> Self {
        Self {
            kind: FrictionKind::Zero,
            extrema: MuExtrema {
                mu_min: 0.0,
                mu_max: 0.0,
                lambda_argmax: 0.0,
            },
        }
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(FrictionKind::Tabulated(knots))
    }

    pub fn kind(&self) -> &FrictionKind {
        &self.kind
    }

    pub fn extrema(&self) -> MuExtrema {
        self.extrema
    }

    pub fn mu_max(&self) -> f64 {
        self.extrema.mu_max
    }

    pub fn mu_min(&self) -> f64 {
        self.extrema.mu_min
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, FrictionKind::Zero)
    }

    /// Friction coefficient at slip `lambda`.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::domain("lambda", lambda, "[0, 1]"));
        }
        Ok(self.eval_unchecked(lambda))
    }

    /// Evaluation without the domain check. Callers guarantee `lambda ∈ [0, 1]`.
    #[inline]
    pub(crate) fn eval_unchecked(&self, lambda: f64) -> f64 {
        match &self.kind {
            FrictionKind::Burckhardt(p) => p.eval(lambda),
            FrictionKind::Zero => 0.0,
            FrictionKind::Tabulated(knots) => interpolate(knots, lambda),
        }
    }

    /// Extrema over `[0, 1]` by a uniform scan of `grid_points` samples.
    ///
    /// For Burckhardt curves the best interior sample is refined by bisection
    /// on the closed-form derivative. Tabulated curves attain their extrema at
    /// knots, which are always included.
    pub fn mu_extrema(&self, grid_points: usize) -> Result<MuExtrema> {
        if grid_points < 100 {
            return Err(Error::config(
                "grid_points",
                format!("must be >= 100, got {grid_points}"),
            ));
        }
        let step = 1.0 / (grid_points - 1) as f64;
        let mut best = MuExtrema {
            mu_min: f64::INFINITY,
            mu_max: f64::NEG_INFINITY,
            lambda_argmax: 0.0,
        };
        let mut argmax_index = 0;
        let mut consider = |lambda: f64, mu: f64| -> bool {
            best.mu_min = best.mu_min.min(mu);
            if mu > best.mu_max {
                best.mu_max = mu;
                best.lambda_argmax = lambda;
                return true;
            }
            false
        };
        for i in 0..grid_points {
            let lambda = (i as f64 * step).min(1.0);
            if consider(lambda, self.eval_unchecked(lambda)) {
                argmax_index = i;
            }
        }
        match &self.kind {
            FrictionKind::Tabulated(knots) => {
                for &(lambda, mu) in knots {
                    consider(lambda, mu);
                }
            }
            FrictionKind::Burckhardt(p) => {
                let lo = argmax_index.saturating_sub(1) as f64 * step;
                let hi = ((argmax_index + 1).min(grid_points - 1) as f64 * step).min(1.0);
                if let Some(lambda) = bisect_root(|x| p.derivative(x), lo, hi) {
                    consider(lambda, p.eval(lambda));
                }
            }
            FrictionKind::Zero => {}
        }
        Ok(best)
    }
}

fn validate_knots(knots: &[(f64, f64)]) -> Result<()> {
    if knots.is_empty() {
        return Err(Error::config("road.table", "needs at least one knot"));
    }
    for (i, &(lambda, mu)) in knots.iter().enumerate() {
        if !(0.0..=1.0).contains(&lambda) || !mu.is_finite() {
            return Err(Error::config(
                "road.table",
                format!("knot {i} = ({lambda}, {mu}) must have λ in [0, 1] and finite μ"),
            ));
        }
        if i > 0 && knots[i - 1].0 >= lambda {
            return Err(Error::config(
                "road.table",
                "knot slips must be strictly increasing",
            ));
        }
    }
    Ok(())
}

fn interpolate(knots: &[(f64, f64)], lambda: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if lambda <= first.0 {
        return first.1;
    }
    if lambda >= last.0 {
        return last.1;
    }
    // First knot strictly to the right of lambda.
    let hi = knots.partition_point(|&(x, _)| x <= lambda);
    let (x0, y0) = knots[hi - 1];
    let (x1, y1) = knots[hi];
    if lambda == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (lambda - x0) / (x1 - x0)
}

/// Root of `f` on `[lo, hi]` when the endpoints bracket a sign change.
fn bisect_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    // Closed-form oracle: μ'(λ*) = 0 ⇒ λ* = ln(c1 c2 / c3) / c2.
    fn analytic_peak(p: &BurckhardtParams) -> (f64, f64) {
        let lambda = (p.c1 * p.c2 / p.c3).ln() / p.c2;
        let mu = p.c1 * (1.0 - (-p.c2 * lambda).exp()) - p.c3 * lambda;
        (lambda, mu)
    }

    fn brute_force_max(model: &FrictionModel, n: usize) -> (f64, f64) {
        (0..n)
            .map(|i| {
                let l = i as f64 / (n - 1) as f64;
                (l, model.eval(l).unwrap())
            })
            .fold(
                (0.0, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            )
    }

    #[test]
    fn burckhardt_vanishes_at_zero_slip() {
        assert_eq!(FrictionModel::dry_asphalt().eval(0.0).unwrap(), 0.0);
        assert_eq!(FrictionModel::wet_asphalt().eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn dry_locked_wheel_value() {
        // 1.28 (1 - e^{-23.99}) - 0.52, evaluated to 40 digits.
        let mu = FrictionModel::dry_asphalt().eval(1.0).unwrap();
        assert_relative_eq!(mu, 0.759_999_999_951_192_6, max_relative = 1e-14);
    }

    #[test]
    fn zero_kind_is_identically_zero() {
        let m = FrictionModel::zero();
        for l in [0.0, 0.3, 1.0] {
            assert_eq!(m.eval(l).unwrap(), 0.0);
        }
        let e = m.mu_extrema(100).unwrap();
        assert_eq!((e.mu_min, e.mu_max, e.lambda_argmax), (0.0, 0.0, 0.0));
    }

    #[test]
    fn out_of_domain_slip_is_rejected() {
        let m = FrictionModel::dry_asphalt();
        assert!(matches!(m.eval(-1e-9), Err(Error::Domain { .. })));
        assert!(matches!(m.eval(1.0 + 1e-9), Err(Error::Domain { .. })));
        assert!(m.eval(f64::NAN).is_err());
    }

    #[test]
    fn dry_peak_matches_stationarity_and_grid() {
        let m = FrictionModel::dry_asphalt();
        let e = m.extrema();
        let (l_star, mu_star) = analytic_peak(&BurckhardtParams::DRY_ASPHALT);
        let (l_grid, mu_grid) = brute_force_max(&m, 100_001);
        assert_relative_eq!(e.lambda_argmax, l_star, epsilon = 1e-9);
        assert_relative_eq!(e.mu_max, mu_star, max_relative = 1e-12);
        assert!((e.lambda_argmax - l_grid).abs() <= 1e-5);
        assert!(e.mu_max >= mu_grid);
        assert_relative_eq!(e.mu_max, 1.169_921_622_195_136, max_relative = 1e-12);
        assert!((e.lambda_argmax - 0.170).abs() < 1e-3);
        assert_eq!(e.mu_min, 0.0);
    }

    #[test]
    fn wet_peak_is_below_dry_peak() {
        let wet = FrictionModel::wet_asphalt().extrema();
        let (_, mu_grid) = brute_force_max(&FrictionModel::wet_asphalt(), 100_001);
        assert_relative_eq!(wet.mu_max, 0.803_908_395_849_140, max_relative = 1e-12);
        assert!((wet.mu_max - mu_grid).abs() < 1e-9);
        assert!(wet.mu_max < FrictionModel::dry_asphalt().mu_max());
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(FrictionModel::dry_asphalt().mu_extrema(99).is_err());
    }

    #[test]
    fn no_linear_decay_peaks_at_full_slip() {
        let m = FrictionModel::burckhardt(BurckhardtParams::new(1.0, 10.0, 0.0).unwrap()).unwrap();
        assert_eq!(m.extrema().lambda_argmax, 1.0);
    }

    #[test]
    fn invalid_coefficients_are_rejected() {
        assert!(BurckhardtParams::new(0.0, 1.0, 0.0).is_err());
        assert!(BurckhardtParams::new(1.0, -1.0, 0.0).is_err());
        assert!(BurckhardtParams::new(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn table_reproduces_knots_and_interpolates() {
        let knots = vec![(0.0, 0.0), (0.2, 1.0), (0.6, 0.4), (1.0, 0.5)];
        let m = FrictionModel::tabulated(knots.clone()).unwrap();
        for (l, mu) in knots {
            assert_eq!(m.eval(l).unwrap(), mu);
        }
        assert_relative_eq!(m.eval(0.1).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(m.eval(0.4).unwrap(), 0.7, epsilon = 1e-15);
        let e = m.extrema();
        assert_eq!((e.mu_min, e.mu_max, e.lambda_argmax), (0.0, 1.0, 0.2));
    }

    #[test]
    fn table_clamps_beyond_end_knots() {
        let m = FrictionModel::tabulated(vec![(0.2, 0.3), (0.8, 0.9)]).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 0.3);
        assert_eq!(m.eval(1.0).unwrap(), 0.9);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(FrictionModel::tabulated(vec![]).is_err());
        assert!(FrictionModel::tabulated(vec![(0.5, 0.1), (0.5, 0.2)]).is_err());
        assert!(FrictionModel::tabulated(vec![(0.0, 0.1), (1.5, 0.2)]).is_err());
        assert!(FrictionModel::tabulated(vec![(0.0, f64::NAN)]).is_err());
    }

    #[test]
    fn closed_form_agrees_with_naive_evaluation() {
        // exp_m1 vs the textbook 1 - exp form; the latter loses digits only
        // where μ is tiny, so compare on a grid that avoids λ ≈ 0.
        for p in [BurckhardtParams::DRY_ASPHALT, BurckhardtParams::WET_ASPHALT] {
            for i in 1..=1000 {
                let l = i as f64 / 1000.0;
                let naive = p.c1 * (1.0 - (-p.c2 * l).exp()) - p.c3 * l;
                assert_relative_eq!(p.eval(l), naive, max_relative = 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn extrema_bound_every_sample(
            c1 in 0.1f64..2.0, c2 in 1.0f64..60.0, c3 in 0.0f64..1.0,
            lambdas in proptest::collection::vec(0.0f64..=1.0, 64),
        ) {
            let m = FrictionModel::burckhardt(BurckhardtParams::new(c1, c2, c3).unwrap()).unwrap();
            let e = m.extrema();
            for l in lambdas {
                let mu = m.eval(l).unwrap();
                prop_assert!(mu <= e.mu_max + 1e-9);
                prop_assert!(mu >= e.mu_min - 1e-9);
            }
        }

        #[test]
        fn table_extrema_bound_interpolants(
            ys in proptest::collection::vec(-1.0f64..2.0, 2..8),
            l in 0.0f64..=1.0,
        ) {
            let n = ys.len();
            let knots: Vec<_> = ys.iter().enumerate()
                .map(|(i, &y)| (i as f64 / (n - 1) as f64, y)).collect();
            let m = FrictionModel::tabulated(knots).unwrap();
            let mu = m.eval(l).unwrap();
            prop_assert!(mu <= m.mu_max() + 1e-12 && mu >= m.mu_min() - 1e-12);
        }
    }
}
