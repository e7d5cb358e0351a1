use num_complex::Complex64;

/// All complex roots of `sum coeffs[k] z^k` by simultaneous
/// (Weierstrass / Durand-Kerner) iteration. Leading zeros are stripped.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let lead = *c.last().unwrap();
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let deg = monic.len() - 1;
    let bound = 1.0 + monic[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * bound * 0.5).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        // z^2 - 2
        let r = polynomial_roots(&[Complex64::new(-2.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2f64.sqrt()).abs() < 1e-12);
        assert!((re[1] - 2f64.sqrt()).abs() < 1e-12);
    }
}
