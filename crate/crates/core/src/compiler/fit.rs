use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::traffic::{CostShape, Link};

pub const FIT_SAMPLES: usize = 201;

/// `γ1 f² + γ2 f + γ3` approximating the integrated cost per unit `t0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticFit {
    pub link: String,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub interval: (f64, f64),
    /// Over samples where the target is positive.
    pub max_rel_error: f64,
    pub max_abs_error: f64,
}

impl QuadraticFit {
    pub fn eval(&self, f: f64) -> f64 {
        (self.gamma1 * f + self.gamma2) * f + self.gamma3
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let tol = 1e-9 * hi.abs().max(1.0);
        self.interval.0 <= lo + tol && self.interval.1 >= hi - tol
    }

    /// Errors of these coefficients against `shape` on `[lo, hi]`.
    pub fn errors_on(&self, shape: &CostShape, lo: f64, hi: f64) -> (f64, f64) {
        sample_errors(shape, lo, hi, |f| self.eval(f))
    }
}

fn samples(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (FIT_SAMPLES - 1) as f64;
    (0..FIT_SAMPLES).map(move |k| {
        if k + 1 == FIT_SAMPLES {
            hi
        } else {
            lo + step * k as f64
        }
    })
}

fn sample_errors(shape: &CostShape, lo: f64, hi: f64, q: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut rel, mut abs) = (0.0f64, 0.0f64);
    for f in samples(lo, hi) {
        let target = shape.eval(f);
        let err = (q(f) - target).abs();
        abs = abs.max(err);
        if target > 0.0 {
            rel = rel.max(err / target);
        }
    }
    (rel, abs)
}

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::input(format!(
            "fit interval [{lo}, {hi}] needs 0 <= lo < hi"
        )));
    }
    Ok(())
}

/// Least squares over 201 samples per shape, solved in the centred variable
/// `u = (f − mid)/half` for conditioning.
fn least_squares(shapes: &[CostShape], lo: f64, hi: f64) -> (f64, f64, f64) {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let rows = shapes.len() * FIT_SAMPLES;
    let mut a = DMatrix::<f64>::zeros(rows, 3);
    let mut b = DVector::<f64>::zeros(rows);
    for (s, shape) in shapes.iter().enumerate() {
        for (k, f) in samples(lo, hi).enumerate() {
            let u = (f - mid) / half;
            let r = s * FIT_SAMPLES + k;
            a[(r, 0)] = u * u;
            a[(r, 1)] = u;
            a[(r, 2)] = 1.0;
            b[r] = shape.eval(f);
        }
    }
    let coef = a.svd(true, true).solve(&b, 1e-14).expect("SVD with both factors");
    let (p, q, c) = (coef[0], coef[1], coef[2]);
    let h2 = half * half;
    (
        p / h2,
        q / half - 2.0 * p * mid / h2,
        p * mid * mid / h2 - q * mid / half + c,
    )
}

/// Fits the integrated cost of one shape on `[lo, hi]`.
pub fn fit_shape(id: &str, shape: &CostShape, lo: f64, hi: f64) -> Result<QuadraticFit> {
    check_interval(lo, hi)?;
    let (gamma1, gamma2, gamma3) = least_squares(std::slice::from_ref(shape), lo, hi);
    let mut fit = QuadraticFit {
        link: id.to_string(),
        gamma1,
        gamma2,
        gamma3,
        interval: (lo, hi),
        max_rel_error: 0.0,
        max_abs_error: 0.0,
    };
    (fit.max_rel_error, fit.max_abs_error) = fit.errors_on(shape, lo, hi);
    Ok(fit)
}

/// Fits `f + α/((β+1) cap^β) f^(β+1)` for `link` on `[lo, hi]`.
pub fn fit_quadratic(link: &Link, lo: f64, hi: f64) -> Result<QuadraticFit> {
    fit_shape(&link.id, &link.shape(), lo, hi)
}

/// One quadratic for several links, pooling samples over their distinct
/// shapes. The returned fits share coefficients; errors are per link.
pub fn fit_shared(links: &[&Link], lo: f64, hi: f64) -> Result<Vec<QuadraticFit>> {
    check_interval(lo, hi)?;
    let mut shapes: Vec<CostShape> = Vec::new();
    for l in links {
        if !shapes.contains(&l.shape()) {
            shapes.push(l.shape());
        }
    }
    if shapes.is_empty() {
        return Ok(Vec::new());
    }
    let (gamma1, gamma2, gamma3) = least_squares(&shapes, lo, hi);
    Ok(links
        .iter()
        .map(|l| {
            let mut fit = QuadraticFit {
                link: l.id.clone(),
                gamma1,
                gamma2,
                gamma3,
                interval: (lo, hi),
                max_rel_error: 0.0,
                max_abs_error: 0.0,
            };
            (fit.max_rel_error, fit.max_abs_error) = fit.errors_on(&l.shape(), lo, hi);
            fit
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traffic::tests::link;

    fn grid_link() -> Link {
        link("a", 0, 1, 1.0, 25.0)
    }

    /// Normal equations in the monomials of `f − lo`, solved by Cramer's
    /// rule.
    fn oracle(shape: &CostShape, lo: f64, hi: f64) -> (f64, f64, f64) {
        let mut s = [0.0f64; 5];
        let mut t = [0.0f64; 3];
        for k in 0..FIT_SAMPLES {
            let x = (hi - lo) * k as f64 / (FIT_SAMPLES - 1) as f64;
            let y = shape.eval(lo + x);
            let f = x;
            for (p, sp) in s.iter_mut().enumerate() {
                *sp += f.powi(p as i32);
            }
            for (p, tp) in t.iter_mut().enumerate() {
                *tp += y * f.powi(p as i32);
            }
        }
        let m = [[s[4], s[3], s[2]], [s[3], s[2], s[1]], [s[2], s[1], s[0]]];
        let rhs = [t[2], t[1], t[0]];
        let det = |m: &[[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det(&m);
        let col = |c: usize| {
            let mut mc = m;
            for r in 0..3 {
                mc[r][c] = rhs[r];
            }
            det(&mc) / d
        };
        let (a, b, c) = (col(0), col(1), col(2));
        (a, b - 2.0 * a * lo, a * lo * lo - b * lo + c)
    }

    #[test]
    fn worked_example_interval() {
        let fit = fit_quadratic(&grid_link(), 8.0, 10.0).unwrap();
        assert!(fit.max_rel_error <= 0.005, "{}", fit.max_rel_error);
        let published: f64 = 0.001899 * 81.0 + 0.969102 * 9.0 + 0.128399;
        assert!((published - 9.004136).abs() < 1e-6);
        assert!(((fit.eval(9.0) - published) / published).abs() < 5e-4);
        assert!(fit.gamma1 >= 0.0);
    }

    #[test]
    fn matches_normal_equation_oracle() {
        let shape = grid_link().shape();
        for (lo, hi) in [(8.0, 10.0), (0.0, 20.0), (3.0, 7.5)] {
            let fit = fit_quadratic(&grid_link(), lo, hi).unwrap();
            let (g1, g2, g3) = oracle(&shape, lo, hi);
            assert!(
                (fit.gamma1 - g1).abs() < 1e-8 * g1.abs().max(1e-3),
                "{lo} {hi}: {} {g1}",
                fit.gamma1
            );
            assert!((fit.gamma2 - g2).abs() < 1e-7);
            assert!((fit.gamma3 - g3).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_regime_near_zero() {
        for cap in [1.0, 25.0, 1600.0] {
            let fit = fit_quadratic(&link("a", 0, 1, 3.0, cap), 0.0, 0.01).unwrap();
            assert!((fit.gamma2 - 1.0).abs() < 1e-3);
            assert!(fit.gamma1.abs() < 1e-3 && fit.gamma3.abs() < 1e-3);
        }
    }

    #[test]
    fn narrower_interval_fits_better() {
        let wide = fit_quadratic(&grid_link(), 8.0, 10.0).unwrap();
        let narrow = fit_quadratic(&grid_link(), 8.9, 9.1).unwrap();
        assert!(wide.max_rel_error >= narrow.max_rel_error);
    }

    #[test]
    fn degenerate_intervals_rejected() {
        assert!(fit_quadratic(&grid_link(), 2.0, 2.0).is_err());
        assert!(fit_quadratic(&grid_link(), -1.0, 2.0).is_err());
        assert!(fit_quadratic(&grid_link(), 3.0, 2.0).is_err());
    }

    #[test]
    fn shared_fit_of_one_shape_equals_single_fit() {
        let (a, b) = (grid_link(), link("b", 1, 0, 2.0, 25.0));
        let shared = fit_shared(&[&a, &b], 0.0, 30.0).unwrap();
        let single = fit_quadratic(&a, 0.0, 30.0).unwrap();
        assert_eq!(shared[0], single);
        assert_eq!(shared[1].link, "b");
        assert_eq!(shared[1].gamma1, single.gamma1);
    }

    #[test]
    fn pooled_fit_sits_between_shapes() {
        let (a, b) = (link("a", 0, 1, 1.0, 10.0), link("b", 0, 1, 1.0, 40.0));
        let shared = fit_shared(&[&a, &b], 0.0, 20.0).unwrap();
        let fa = fit_quadratic(&a, 0.0, 20.0).unwrap();
        let fb = fit_quadratic(&b, 0.0, 20.0).unwrap();
        assert!(shared[0].gamma1 < fa.gamma1 && shared[0].gamma1 > fb.gamma1);
        assert!(shared[0].max_abs_error > fa.max_abs_error);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn convex_target_gives_nonnegative_curvature(
                lo in 0.0f64..100.0,
                width in 0.01f64..100.0,
                cap in 1.0f64..2000.0,
                beta in 1u32..6,
            ) {
                let l = Link { beta, ..link("a", 0, 1, 1.0, cap) };
                let fit = fit_quadratic(&l, lo, lo + width).unwrap();
                prop_assert!(fit.gamma1 >= -1e-9 * fit.gamma2.abs().max(1.0));
            }

            #[test]
            fn shrinking_never_hurts(centre in 1.0f64..50.0, width in 0.5f64..10.0) {
                let l = grid_link();
                let lo = (centre - width).max(0.0);
                let wide = fit_quadratic(&l, lo, centre + width).unwrap();
                let narrow = fit_quadratic(&l, (centre - 0.25 * width).max(0.0), centre + 0.25 * width).unwrap();
                prop_assert!(narrow.max_abs_error <= wide.max_abs_error * (1.0 + 1e-9));
            }
        }
    }
}
