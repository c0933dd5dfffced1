use coulomb_core::greens::{friedrichs_kernel, krein_resolvent_radial};
use coulomb_core::radial::{boundary_trace_fit, fundamental_system, phi, sample_near_origin, ShiftFrame};
use coulomb_core::specfun::{digamma, gamma, whittaker};
use coulomb_core::spectra::{
    assemble_spectrum, f_nu_kappa, f_nu_kappa_raw, friedrichs_level, solve_interval, spectral_function,
};
use coulomb_core::{CoulombParams, ExtendedReal, SampledFunction};
use proptest::prelude::*;

fn kappa_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-3.0..-0.05f64, 0.05..0.95f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn whittaker_wronskian(kappa in kappa_strategy(), lr in (1e-2f64).ln()..(50f64).ln()) {
        let rho = lr.exp();
        let p = whittaker(kappa, rho).unwrap();
        let want = 1.0 / gamma(1.0 - kappa).unwrap();
        prop_assert!((p.wronskian() - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn whittaker_ode(kappa in kappa_strategy(), rho in 0.3..30.0f64) {
        let h = 1e-4 * rho;
        let lo = whittaker(kappa, rho - h).unwrap();
        let hi = whittaker(kappa, rho + h).unwrap();
        let mid = whittaker(kappa, rho).unwrap();
        let q = 0.25 - kappa / rho;
        for (d2, u) in [((hi.w_prime - lo.w_prime) / (2.0 * h), mid.w), ((hi.m_prime - lo.m_prime) / (2.0 * h), mid.m)] {
            prop_assert!((d2 - q * u).abs() <= 1e-6 * (q * u).abs().max(u.abs()));
        }
    }

    #[test]
    fn whittaker_kappa_zero(z in 0.1..20.0f64) {
        let p = whittaker(0.0, z).unwrap();
        prop_assert!((p.w / (-0.5 * z).exp() - 1.0).abs() <= 1e-12);
        prop_assert!((p.m / (2.0 * (0.5 * z).sinh()) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn digamma_recurrence(x in prop_oneof![0.01..80.0f64, -30.0..-0.01f64]) {
        prop_assume!((x - x.round()).abs() > 1e-3);
        let r = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        prop_assert!(r.abs() <= 1e-12 * (1.0 + (1.0 / x).abs()));
    }

    #[test]
    fn frame_wronskian_is_r_independent(nu in prop_oneof![-3.0..-0.1f64, 0.1..3.0f64], k in 0.05..0.95f64) {
        let kappa = if nu < 0.0 { k } else { -3.0 * k };
        let f = ShiftFrame::new(nu, kappa).unwrap();
        let ws: Vec<f64> = [0.05, 0.5, 5.0, 20.0]
            .iter()
            .map(|&r| fundamental_system(&f, r).unwrap().wronskian())
            .collect();
        let spread = ws.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - ws.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(spread <= 1e-8 * f.wronskian().abs());
    }

    #[test]
    fn trace_is_linear(a in -5.0..5.0f64, b in -5.0..5.0f64, nu in -2.0..-0.2f64) {
        let f = ShiftFrame::new(nu, 0.4).unwrap();
        let g = |r: f64| phi(&f, r);
        let h = |r: f64| Ok(1.0 + nu * r * r.ln() + 0.7 * r);
        let tg = boundary_trace_fit(&sample_near_origin(g).unwrap(), nu).unwrap().trace;
        let th = boundary_trace_fit(&sample_near_origin(h).unwrap(), nu).unwrap().trace;
        let comb = |r: f64| Ok(a * g(r)? + b * h(r)?);
        let t = boundary_trace_fit(&sample_near_origin(comb).unwrap(), nu).unwrap().trace;
        let want = a * tg + b * th;
        let scale = 1.0 + want.g0.abs() + want.g1.abs();
        prop_assert!((t.g0 - want.g0).abs() <= 1e-8 * scale);
        prop_assert!((t.g1 - want.g1).abs() <= 1e-8 * scale);
    }

    #[test]
    fn friedrichs_diagonal_positive(nu in -3.0..-0.1f64, kappa in 0.05..0.95f64, r in 1e-4..30.0f64) {
        let f = ShiftFrame::new(nu, kappa).unwrap();
        prop_assert!(friedrichs_kernel(&f, r, r).unwrap() > 0.0);
    }

    #[test]
    fn kernel_symmetric(kappa in kappa_strategy(), r in 0.01..10.0f64, rho in 0.01..10.0f64, alpha in -3.0..3.0f64) {
        let nu = if kappa < 0.0 { 1.0 } else { -1.0 };
        let f = ShiftFrame::new(nu, kappa).unwrap();
        let p = CoulombParams::new(nu, alpha).unwrap();
        prop_assume!((alpha - f_nu_kappa(&f).unwrap()).abs() > 1e-6);
        let a = krein_resolvent_radial(&p, &f, r, rho).unwrap();
        let b = krein_resolvent_radial(&p, &f, rho, r).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300));
    }

    #[test]
    fn positive_coupling_monotone(nu in 0.1..3.0f64, la in -8.0..3.0f64, gap in 1e-3..3.0f64) {
        let ea = -(la + gap).exp();
        let eb = -la.exp();
        prop_assert!(spectral_function(nu, ea).unwrap() < spectral_function(nu, eb).unwrap());
    }

    #[test]
    fn roots_certified(nu in -3.0..-0.2f64, alpha in -5.0..5.0f64, n in 1usize..7) {
        let tol = 1e-10;
        let p = solve_interval(nu, ExtendedReal::Finite(alpha), n, tol).unwrap();
        prop_assert!(p.residual <= tol);
        let (lo, hi) = p.bracket;
        let flo = spectral_function(nu, lo).unwrap() - alpha;
        let fhi = spectral_function(nu, hi).unwrap() - alpha;
        prop_assert!(flo * fhi <= 0.0, "bracket ({lo}, {hi}) does not straddle alpha");
        let kappa = -nu / (2.0 * (-p.e).sqrt());
        prop_assert!((f_nu_kappa_raw(nu, kappa).unwrap() - alpha).abs() <= 10.0 * tol);
    }

    #[test]
    fn interlacing(nu in -3.0..-0.2f64, alpha in -5.0..5.0f64) {
        let rep = assemble_spectrum(&CoulombParams::new(nu, alpha).unwrap(), 8, 1e-10).unwrap();
        for n in 1..8 {
            let en = friedrichs_level(nu, n);
            prop_assert!(rep.points[n - 1].e <= en && en <= rep.points[n].e);
        }
    }
}

#[test]
fn asymptotics_at_large_rho() {
    for kappa in [-2.0, -0.5, 0.25, 0.75] {
        let rho: f64 = 200.0;
        let p = whittaker(kappa, rho).unwrap();
        let w = p.w * (0.5 * rho).exp() * rho.powf(-kappa);
        let m = p.m * gamma(1.0 - kappa).unwrap() * (-0.5 * rho).exp() * rho.powf(kappa);
        assert!((w - 1.0).abs() < 5e-2, "{kappa}: {w}");
        assert!((m - 1.0).abs() < 5e-2, "{kappa}: {m}");
    }
}

#[test]
fn rank_one_pole_slope() {
    let f = ShiftFrame::new(-1.0, 0.5).unwrap();
    let a0 = f_nu_kappa(&f).unwrap();
    let (r, rho) = (0.7, 1.9);
    let pts: Vec<(f64, f64)> = [1e-3, 1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&d| {
            let p = CoulombParams::new(-1.0, a0 + d).unwrap();
            (d.ln(), krein_resolvent_radial(&p, &f, r, rho).unwrap().abs().ln())
        })
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let slope = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    assert!((slope + 1.0).abs() < 0.02, "{slope}");
}

#[test]
fn sampled_function_validation() {
    assert!(SampledFunction::new(vec![1.0, 0.5], vec![0.0, 0.0]).is_err());
    assert!(SampledFunction::new(vec![1.0], vec![0.0, 0.0]).is_err());
}

#[test]
fn poles_of_the_spectral_function() {
    let nu: f64 = -1.0;
    for n in 1..6 {
        let e = |s: f64| -nu * nu / (4.0 * s * s);
        let nf = n as f64;
        // E increases with s; E ↓ E_n means s ↓ n
        let above = spectral_function(nu, e(nf + 1e-6)).unwrap();
        let below = spectral_function(nu, e(nf - 1e-6)).unwrap();
        assert!(above < -1e3 && below > 1e3, "n = {n}: {above} {below}");
    }
}
