//! Gamma function.
//!
//! Every closed form in this crate funnels through `gamma`, so a single
//! audited implementation is used throughout instead of per-module
//! approximations.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments (Lanczos, g = 7, n = 9).
///
/// Relative accuracy is better than 1e-13 on (0, 10], which covers every
/// argument produced by the formulas in this crate.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection keeps the series argument in its accurate range
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}
