//! Classical fixed-step Runge–Kutta.

use crate::error::{Error, Result};

/// One RK4 step of `ẏ = f(t, y)` from `(t, y)`.
///
/// `f` may fail (for instance when a stage leaves the model's domain); its
/// error is returned unchanged. A non-finite stage derivative is reported as
/// [`Error::Integration`] carrying the offending state.
pub fn rk4_step<const N: usize, F>(t: f64, y: &[f64; N], dt: f64, mut f: F) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut stage = |t: f64, y: &[f64; N], label: &str| -> Result<[f64; N]> {
        let k = f(t, y)?;
        if k.iter().any(|x| !x.is_finite()) {
            return Err(Error::Integration {
                t,
                reason: format!("non-finite derivative in stage {label}: {k:?}"),
                state: y.to_vec(),
            });
        }
        Ok(k)
    };
    let offset = |k: &[f64; N], h: f64| -> [f64; N] { std::array::from_fn(|i| y[i] + h * k[i]) };

    let k1 = stage(t, y, "1")?;
    let k2 = stage(t + 0.5 * dt, &offset(&k1, 0.5 * dt), "2")?;
    let k3 = stage(t + 0.5 * dt, &offset(&k2, 0.5 * dt), "3")?;
    let k4 = stage(t + dt, &offset(&k3, dt), "4")?;
    Ok(std::array::from_fn(|i| {
        y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(_: f64, y: &[f64; 1]) -> Result<[f64; 1]> {
        Ok([-y[0]])
    }

    #[test]
    fn constant_state_is_unchanged() {
        let y = rk4_step(0.0, &[1.5, -2.0], 0.1, |_, _| Ok([0.0, 0.0])).unwrap();
        assert_eq!(y, [1.5, -2.0]);
    }

    #[test]
    fn exponential_decay_single_step() {
        let y = rk4_step(0.0, &[1.0], 0.1, decay).unwrap();
        assert!((y[0] - (-0.1f64).exp()).abs() < 1e-7);
        assert!((y[0] - 0.904_837_5).abs() < 1e-7);
    }

    #[test]
    fn fourth_order_global_convergence() {
        // Reference: exact solution of ÿ = -y, y(0) = 1, ẏ(0) = 0 at t = 2.
        let run = |dt: f64| {
            let n = (2.0 / dt).round() as usize;
            let mut y = [1.0, 0.0];
            for i in 0..n {
                y = rk4_step(i as f64 * dt, &y, dt, |_, y| Ok([y[1], -y[0]])).unwrap();
            }
            (y[0] - 2.0f64.cos()).abs()
        };
        let ratio = run(0.02) / run(0.01);
        assert!((14.0..=18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn non_finite_stage_reports_state() {
        let err = rk4_step(0.0, &[1.0], 0.1, |_, y| Ok([1.0 / (y[0] - 1.0)])).unwrap_err();
        match err {
            Error::Integration { state, .. } => assert_eq!(state, vec![1.0]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stage_errors_propagate() {
        let err = rk4_step(0.0, &[1.0], 0.1, |_, _| -> Result<[f64; 1]> {
            Err(Error::SpeedFloor {
                v: 0.1,
                v_floor: 0.5,
            })
        })
        .unwrap_err();
        assert!(matches!(err, Error::SpeedFloor { .. }));
    }
}
