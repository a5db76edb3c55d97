//! Scalar special functions: gamma, Legendre polynomials, real spherical
//! harmonics, modified Bessel K0/K1.
//!
//! All classical approximations with known accuracy: Lanczos (g = 7) for
//! gamma (~15 digits), upward recurrences for Legendre, and the familiar
//! small/large-argument polynomial fits for K0 and K1 (7-8 digits, which is
//! plenty for the kernel cross-checks they back).

use crate::geom::Vec3;
#[allow(unused_imports)]
use num_traits::Float;

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

/// Gamma function on the real line (poles at 0, -1, -2, ... return inf/nan).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        return core::f64::consts::PI / ((core::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * core::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Legendre polynomial P_l(x) by the three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    legendre_p_assoc(l, 0, x)
}

/// Associated Legendre P_l^m(x) = (1-x^2)^{m/2} d^m/dx^m P_l(x),
/// without the Condon-Shortley phase (P_1^1 >= 0 on [-1, 1]).
pub fn legendre_p_assoc(l: usize, m: usize, x: f64) -> f64 {
    assert!(m <= l, "order m must not exceed degree l");
    // P_m^m = (2m-1)!! (1-x^2)^{m/2}
    let mut pmm = 1.0;
    if m > 0 {
        let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
        let mut dfact = 1.0;
        for _ in 0..m {
            pmm *= dfact * s;
            dfact += 2.0;
        }
    }
    if l == m {
        return pmm;
    }
    // P_{m+1}^m = x (2m+1) P_m^m, then raise degree:
    // (k-m) P_k^m = x (2k-1) P_{k-1}^m - (k+m-1) P_{k-2}^m
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for k in (m + 2)..=l {
        let p_next =
            (x * (2 * k - 1) as f64 * p - (k + m - 1) as f64 * p_prev) / (k - m) as f64;
        p_prev = p;
        p = p_next;
    }
    p
}

/// Real spherical harmonic in Racah normalization, evaluated on a direction.
///
/// Indexing: m > 0 is the cos(m phi) component, m < 0 the sin(|m| phi)
/// component, m = 0 is P_l(cos theta). Normalized so that C_00 = 1 and the
/// addition theorem reads P_l(a.b) = sum_m C_lm(a) C_lm(b) over unit a, b.
/// In particular (C_1,-1, C_10, C_11) = (y, z, x) / r.
pub fn real_harmonic(l: usize, m: i32, dir: Vec3) -> f64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "order |m| must not exceed degree l");
    let r = dir.norm();
    assert!(r > 0.0, "direction must be nonzero");
    let ct = dir.z / r;
    let p = legendre_p_assoc(l, am, ct);
    if m == 0 {
        return p;
    }
    // sqrt(2 (l-m)! / (l+m)!) turns the addition theorem's cross terms into
    // plain products of components.
    let mut ratio = 1.0;
    for k in (l - am + 1)..=(l + am) {
        ratio /= k as f64;
    }
    let phi = dir.y.atan2(dir.x);
    let trig = if m > 0 {
        (am as f64 * phi).cos()
    } else {
        (am as f64 * phi).sin()
    };
    (2.0 * ratio).sqrt() * p * trig
}

/// Modified Bessel function K0. Polynomial fits, absolute error ~ 1e-7.
pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 2.0 {
        let t = x * x / 14.0625; // (x/3.75)^2
        let i0 = 1.0
            + t * (3.515_622_9
                + t * (3.089_942_4
                    + t * (1.206_749_2 + t * (0.265_973_2 + t * (0.036_076_8 + t * 0.004_581_3)))));
        let u = x * x / 4.0;
        -(x / 2.0).ln() * i0 - 0.577_215_66
            + u * (0.422_784_2
                + u * (0.230_697_56
                    + u * (0.034_885_9
                        + u * (0.002_626_98 + u * (0.000_107_5 + u * 0.000_007_4)))))
    } else {
        let u = 2.0 / x;
        let poly = 1.253_314_14
            + u * (-0.078_323_58
                + u * (0.021_895_68
                    + u * (-0.010_624_46
                        + u * (0.005_878_72 + u * (-0.002_515_4 + u * 0.000_532_08)))));
        (-x).exp() / x.sqrt() * poly
    }
}

/// Modified Bessel function K1. Polynomial fits, absolute error ~ 1e-7.
pub fn bessel_k1(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 2.0 {
        let t = x * x / 14.0625;
        let i1 = x
            * (0.5
                + t * (0.878_905_94
                    + t * (0.514_988_69
                        + t * (0.150_849_34
                            + t * (0.026_587_33 + t * (0.003_015_32 + t * 0.000_324_11))))));
        let u = x * x / 4.0;
        let series = 1.0
            + u * (0.154_431_44
                + u * (-0.672_785_79
                    + u * (-0.181_568_97
                        + u * (-0.019_194_02 + u * (-0.001_104_04 - u * 0.000_046_86)))));
        (x / 2.0).ln() * i1 + series / x
    } else {
        let u = 2.0 / x;
        let poly = 1.253_314_14
            + u * (0.234_986_19
                + u * (-0.036_556_2
                    + u * (0.015_042_68
                        + u * (-0.007_803_53 + u * (0.003_256_14 - u * 0.000_682_45)))));
        (-x).exp() / x.sqrt() * poly
    }
}
