use std::f64::consts::PI;

use serde::Serialize;

use crate::dynamics::potential::PotentialSpec;
use crate::manifold::GroupElement;

/// The modulation coefficients A, B, C of the soliton frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CoefficientTriple {
    pub const ZERO: CoefficientTriple = CoefficientTriple { a: 0.0, b: 0.0, c: 0.0 };
}

/// A = (ε/π)∫b(a+x/μ)|η|²dx, B = (ε/π)∫b′(a+x/μ)(x/μ)|η|²dx,
/// C = (ε/π)∫b′(a+x/μ)|η|²dx/μ.
///
/// After y = a + x/μ the weight becomes the Lorentzian μ/(1+μ²(y−a)²);
/// b′ is integrated over the potential's window only and the constant tails
/// of b contribute closed-form arctangents.
pub fn abc_coefficients(g: &GroupElement, b: &PotentialSpec, eps: f64) -> CoefficientTriple {
    if eps == 0.0 {
        return CoefficientTriple::ZERO;
    }
    let (a, mu) = (g.a, g.mu);
    let (yl, yr) = b.window();
    let (bl, br) = b.limits();
    let left_tail = (mu * (yl - a)).atan() + 0.5 * PI;
    let right_tail = 0.5 * PI - (mu * (yr - a)).atan();
    let panel = 0.5 / mu;
    let lorentz = |y: f64| {
        let z = mu * (y - a);
        1.0 / (1.0 + z * z)
    };
    let inner_a = b.integrate_window(|y| b.b(y) * mu * lorentz(y), panel);
    let inner_b = b.integrate_window(|y| b.db(y) * mu * (y - a) * lorentz(y), panel);
    let inner_c = b.integrate_window(|y| b.db(y) * lorentz(y), panel);
    let k = eps / PI;
    CoefficientTriple {
        a: k * (inner_a + bl * left_tail + br * right_tail),
        b: k * inner_b,
        c: k * inner_c,
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn g(a: f64, mu: f64) -> GroupElement {
        GroupElement::new(a, 1.0, 0.0, mu).unwrap()
    }

    #[test]
    fn constant_potential() {
        let b = PotentialSpec::constant(3.0);
        let t = abc_coefficients(&g(0.7, 2.0), &b, 0.01);
        assert_relative_eq!(t.a, 0.03, max_relative = 1e-14);
        assert_eq!((t.b, t.c), (0.0, 0.0));
        assert_eq!(abc_coefficients(&g(0.0, 1.0), &b, 0.0), CoefficientTriple::ZERO);
    }

    // Reference values from an independent adaptive quadrature of the
    // defining integrals in the x variable.
    #[test]
    fn gaussian_matches_adaptive_quadrature() {
        let b = PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap();
        let cases = [
            ((0.0, 1.0), (4.27583576155807048e-03, -2.73212014783898605e-03, 0.0)),
            ((0.3, 1.7), (5.46355552965500750e-03, -2.39266393093838341e-03, -1.01879745276122098e-03)),
            ((-1.2, 0.6), (2.24472335667472676e-03, -1.02238416336623990e-03, 1.59937957480162617e-03)),
            ((2.5, 1.0), (9.37507434050780853e-04, 5.06579041995551625e-04, -7.21394832314256888e-04)),
        ];
        for ((a, mu), (ea, eb, ec)) in cases {
            let t = abc_coefficients(&g(a, mu), &b, 0.01);
            assert_relative_eq!(t.a, ea, max_relative = 1e-10);
            assert_relative_eq!(t.b, eb, max_relative = 1e-10);
            if ec == 0.0 {
                assert!(t.c.abs() < 1e-17);
            } else {
                assert_relative_eq!(t.c, ec, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn gaussian_closed_forms_at_identity() {
        // A = ε·e·erfc(1), B = −(2ε/π)(√π − π·e·erfc(1))
        let erfc1 = 0.157_299_207_050_285_13_f64;
        let eps = 0.01;
        let e = std::f64::consts::E;
        let t = abc_coefficients(&g(0.0, 1.0), &PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap(), eps);
        assert_relative_eq!(t.a, eps * e * erfc1, max_relative = 1e-12);
        assert_relative_eq!(t.b, -(2.0 * eps / PI) * (PI.sqrt() - PI * e * erfc1), max_relative = 1e-12);
    }

    #[test]
    fn sech2_matches_adaptive_quadrature() {
        let b = PotentialSpec::sech2(0.5, 1.0, 2.0).unwrap();
        let t = abc_coefficients(&g(0.4, 1.3), &b, 0.02);
        assert_relative_eq!(t.a, 6.57372478519373856e-03, max_relative = 1e-10);
        assert_relative_eq!(t.b, -1.94927851652178480e-03, max_relative = 1e-10);
        assert_relative_eq!(t.c, 9.01033964992515994e-04, max_relative = 1e-10);
    }

    #[test]
    fn linear_in_eps_and_bounded() {
        let b = PotentialSpec::gaussian(1.0, 0.0, 1.0).unwrap();
        let n = b.norms();
        for eps in [0.04, 0.02, 0.01] {
            let t = abc_coefficients(&g(0.3, 1.2), &b, eps);
            assert!(t.a.abs() <= eps * n.sup_b);
            assert!(t.b.abs() <= eps * n.l1_db / PI * 0.5);
            assert!(t.c.abs() <= eps * n.l1_db / PI);
        }
    }
}
