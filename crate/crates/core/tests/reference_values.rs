//! Values frozen from 50-digit computations (mpmath quadrature, digamma and
//! bisection), plus the closed-form hydrogenoid levels.

use approx::assert_relative_eq;
use coulomb_core::greens::{friedrichs_kernel, phi_norm_sq};
use coulomb_core::radial::{beta_from_alpha, ShiftFrame};
use coulomb_core::spectra::{alpha_threshold, assemble_spectrum, solve_positive_nu, spectral_function};
use coulomb_core::{CoulombParams, ExtendedReal};

#[test]
fn friedrichs_kernel_values() {
    let f = ShiftFrame::new(-1.0, 0.5).unwrap();
    assert_relative_eq!(friedrichs_kernel(&f, 1.0, 1.0).unwrap(), 0.716_979_735_501_284_9, max_relative = 1e-12);
    assert_relative_eq!(friedrichs_kernel(&f, 1.0, 2.0).unwrap(), 0.355_723_861_765_805_36, max_relative = 1e-12);
}

#[test]
fn phi_norms() {
    let cases = [
        (-1.0, 0.5, 0.711_008_967_882_514_8),
        (-1.0, 0.25, 0.302_623_727_787_462_95),
        (-1.0, 0.75, 1.246_495_825_887_365_3),
        (-1.0, 0.3, 0.375_702_269_286_141_1),
        (-1.0, 0.6, 0.907_061_753_060_746_5),
        (1.0, -0.5, 0.297_556_782_059_733_9),
        (1.0, -0.7, 0.319_949_045_232_432),
        (-2.0, 0.5, 0.355_504_483_941_257_4),
    ];
    for (nu, kappa, want) in cases {
        let f = ShiftFrame::new(nu, kappa).unwrap();
        assert_relative_eq!(phi_norm_sq(&f).unwrap(), want, max_relative = 1e-10);
    }
}

#[test]
fn spectral_function_values() {
    assert_relative_eq!(spectral_function(-1.0, -0.09).unwrap(), 0.134_360_837_014_819_6, max_relative = 1e-12);
    assert_relative_eq!(spectral_function(1.0, -1.0).unwrap(), -0.009_225_536_888_585_903, max_relative = 1e-11);
    assert_relative_eq!(spectral_function(-2.0, -3.0).unwrap(), 0.022_524_575_668_880_17, max_relative = 1e-11);
    assert_relative_eq!(alpha_threshold(2.0).unwrap(), 0.134_896_309_582_738_44, max_relative = 1e-14);
}

fn check_roots(nu: f64, alpha: f64, want: &[f64]) {
    let rep = assemble_spectrum(&CoulombParams::new(nu, alpha).unwrap(), want.len(), 1e-12).unwrap();
    for (p, w) in rep.points.iter().zip(want) {
        assert_relative_eq!(p.e, *w, max_relative = 1e-10);
    }
}

#[test]
fn roots_nu_minus_one_alpha_three() {
    check_roots(
        -1.0,
        3.0,
        &[
            -0.263_749_112_918_904_3,
            -0.064_181_413_667_594_15,
            -0.028_272_505_624_696_52,
            -0.015_832_997_904_310_287,
            -0.010_106_277_800_123_655,
        ],
    );
}

#[test]
fn roots_nu_minus_two_alpha_minus_one() {
    check_roots(
        -2.0,
        -1.0,
        &[
            -67.982_321_653_270_5,
            -0.736_345_007_752_879_9,
            -0.213_075_540_153_709_65,
            -0.099_726_883_185_195_66,
            -0.057_599_286_768_217_97,
        ],
    );
}

#[test]
fn roots_nu_minus_one_alpha_minus_two() {
    check_roots(
        -1.0,
        -2.0,
        &[
            -476.024_474_385_157_5,
            -0.231_266_808_686_959_62,
            -0.060_085_140_287_500_86,
            -0.027_054_947_195_915_568,
            -0.015_318_508_895_945_718,
        ],
    );
}

#[test]
fn positive_coupling_root() {
    let a = alpha_threshold(1.0).unwrap() - 0.01;
    let p = solve_positive_nu(1.0, ExtendedReal::Finite(a), 1e-12).unwrap().unwrap();
    assert_relative_eq!(p.e, -0.422_837_656_740_823_1, max_relative = 1e-10);
}

#[test]
fn hydrogenoid_levels() {
    for nu in [-1.0, -2.0, -0.3] {
        let rep = assemble_spectrum(&CoulombParams::friedrichs(nu).unwrap(), 12, 1e-12).unwrap();
        for (i, p) in rep.points.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((p.e + nu * nu / (4.0 * n * n)).abs() <= 1e-14 * nu * nu);
        }
    }
}

#[test]
fn beta_of_alpha_zero() {
    let f = ShiftFrame::new(-1.0, 0.5).unwrap();
    let n2 = phi_norm_sq(&f).unwrap();
    let b = beta_from_alpha(ExtendedReal::Finite(0.0), &f, n2).unwrap().finite().unwrap();
    assert_relative_eq!(b, -0.051_901_100_016_000_39, max_relative = 1e-9);
}
