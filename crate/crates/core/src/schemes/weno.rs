//! One-dimensional reconstruction kernels shared by the tube operators and
//! the periodic reference solver.

pub const DEFAULT_EPS: f64 = 1e-6;

/// Third-order WENO value at the right face of `v0`, upwind-biased to the
/// left: stencil `(vm, v0, vp)`.
#[inline]
pub fn weno3_reconstruct(vm: f64, v0: f64, vp: f64, eps: f64) -> f64 {
    let q0 = -0.5 * vm + 1.5 * v0;
    let q1 = 0.5 * v0 + 0.5 * vp;
    let b0 = (v0 - vm) * (v0 - vm);
    let b1 = (vp - v0) * (vp - v0);
    let a0 = (1.0 / 3.0) / ((eps + b0) * (eps + b0));
    let a1 = (2.0 / 3.0) / ((eps + b1) * (eps + b1));
    (a0 * q0 + a1 * q1) / (a0 + a1)
}

/// Numerical flux at face `i+1/2` from split fluxes: `fp = f⁺` on
/// `i−1, i, i+1` and `fm = f⁻` on `i, i+1, i+2`.
#[inline]
pub fn weno3_face(fp: [f64; 3], fm: [f64; 3], eps: f64) -> f64 {
    weno3_reconstruct(fp[0], fp[1], fp[2], eps) + weno3_reconstruct(fm[2], fm[1], fm[0], eps)
}

/// Lax–Friedrichs face flux `½[f_l + f_r − c(u_r − u_l)]` with dissipation
/// coefficient `c = Δx/(dΔt)`.
#[inline]
pub fn lxf_face(fl: f64, fr: f64, ul: f64, ur: f64, c: f64) -> f64 {
    0.5 * (fl + fr - c * (ur - ul))
}

/// One-sided HJ-WENO3 derivatives `(u_x⁻, u_x⁺)` at the centre of the
/// five-point window `u = [u_{i−2}, …, u_{i+2}]`.
#[inline]
pub fn hj_weno3_derivatives(u: [f64; 5], dx: f64, eps: f64) -> (f64, f64) {
    let d = [
        (u[1] - u[0]) / dx,
        (u[2] - u[1]) / dx,
        (u[3] - u[2]) / dx,
        (u[4] - u[3]) / dx,
    ];
    let s_m = u[2] - 2.0 * u[1] + u[0];
    let s_0 = u[3] - 2.0 * u[2] + u[1];
    let s_p = u[4] - 2.0 * u[3] + u[2];
    let centred = 0.5 * (d[1] + d[2]);

    let r_minus = (eps + s_m * s_m) / (eps + s_0 * s_0);
    let w_minus = 1.0 / (1.0 + 2.0 * r_minus * r_minus);
    let minus = centred - 0.5 * w_minus * (d[0] - 2.0 * d[1] + d[2]);

    let r_plus = (eps + s_p * s_p) / (eps + s_0 * s_0);
    let w_plus = 1.0 / (1.0 + 2.0 * r_plus * r_plus);
    let plus = centred - 0.5 * w_plus * (d[3] - 2.0 * d[2] + d[1]);
    (minus, plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reconstruction_is_exact_on_constants() {
        assert_eq!(weno3_reconstruct(2.0, 2.0, 2.0, DEFAULT_EPS), 2.0);
        assert_eq!(weno3_face([1.0; 3], [0.0; 3], DEFAULT_EPS), 1.0);
    }

    #[test]
    fn reconstruction_reproduces_linear_face_value() {
        // both candidates are exact for linear data
        let v = |x: f64| 3.0 * x - 1.0;
        let r = weno3_reconstruct(v(-1.0), v(0.0), v(1.0), DEFAULT_EPS);
        assert!((r - v(0.5)).abs() < 1e-13);
    }

    #[test]
    fn smooth_weights_approach_linear_combination() {
        // optimal weights give ⅓q0 + ⅔q1 = (−vm + 5v0 + 2vp)/6
        let (vm, v0, vp) = (1.0, 1.0 + 1e-5, 1.0 + 2e-5 + 1e-9);
        let linear = (-vm + 5.0 * v0 + 2.0 * vp) / 6.0;
        assert!((weno3_reconstruct(vm, v0, vp, DEFAULT_EPS) - linear).abs() < 1e-12);
    }

    #[test]
    fn conservative_derivative_is_third_order() {
        // −(f̂_{i+1/2} − f̂_{i−1/2})/Δx for f(u) = u, u = sin x (all flux is f⁺)
        let mut errs = Vec::new();
        for k in 0..3 {
            let h = 0.1 / (1 << k) as f64;
            let x0 = 0.3;
            let f = |j: i32| (x0 + j as f64 * h).sin();
            let face = |j: i32| weno3_reconstruct(f(j - 1), f(j), f(j + 1), DEFAULT_EPS);
            let d = (face(0) - face(-1)) / h;
            errs.push((d - x0.cos()).abs());
        }
        assert!(errs[0] / errs[1] > 6.0 && errs[1] / errs[2] > 6.0, "{errs:?}");
    }

    #[test]
    fn hj_derivatives_exact_on_linear() {
        let u = [0.0, 0.5, 1.0, 1.5, 2.0];
        let (m, p) = hj_weno3_derivatives(u, 0.5, DEFAULT_EPS);
        assert!((m - 1.0).abs() < 1e-14 && (p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hj_derivatives_third_order_on_smooth_data() {
        let mut errs = Vec::new();
        for k in 0..3 {
            let h = 0.05 / (1 << k) as f64;
            let x0 = 0.7;
            let u = std::array::from_fn(|j| (x0 + (j as f64 - 2.0) * h).sin());
            let (m, p) = hj_weno3_derivatives(u, h, DEFAULT_EPS);
            errs.push((m - x0.cos()).abs().max((p - x0.cos()).abs()));
        }
        assert!(errs[0] / errs[1] > 5.0 && errs[1] / errs[2] > 5.0, "{errs:?}");
    }

    #[test]
    fn lxf_face_formula() {
        assert_eq!(lxf_face(1.0, 3.0, 0.0, 2.0, 0.5), 1.5);
    }

    proptest! {
        #[test]
        fn reconstruction_is_a_convex_combination(vm in -5.0..5.0f64, v0 in -5.0..5.0f64, vp in -5.0..5.0f64) {
            let q0 = -0.5 * vm + 1.5 * v0;
            let q1 = 0.5 * v0 + 0.5 * vp;
            let r = weno3_reconstruct(vm, v0, vp, DEFAULT_EPS);
            prop_assert!(r >= q0.min(q1) - 1e-12 && r <= q0.max(q1) + 1e-12);
        }

        #[test]
        fn hj_derivatives_are_convex_combinations(u in prop::array::uniform5(-3.0..3.0f64)) {
            let (m, p) = hj_weno3_derivatives(u, 1.0, DEFAULT_EPS);
            let d: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
            let centred = 0.5 * (d[1] + d[2]);
            let left = 0.5 * (3.0 * d[1] - d[0]);
            let right = 0.5 * (3.0 * d[2] - d[3]);
            prop_assert!(m >= centred.min(left) - 1e-12 && m <= centred.max(left) + 1e-12);
            prop_assert!(p >= centred.min(right) - 1e-12 && p <= centred.max(right) + 1e-12);
        }
    }
}
