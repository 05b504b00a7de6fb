//! Ridders' extrapolated central differences.

/// Derivative estimate with its error estimate and the final step used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
    pub step: f64,
}

const CON: f64 = 1.4;
const CON2: f64 = CON * CON;
const NTAB: usize = 10;
const SAFE: f64 = 2.0;

/// f'(x) from central differences with steps h, h/1.4, h/1.4², … combined
/// by Neville extrapolation; stops once the tableau diverges.
pub fn ridders<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> Derivative {
    let mut a = [[0.0_f64; NTAB]; NTAB];
    let mut hh = h;
    a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    let mut best = Derivative {
        value: a[0][0],
        error: f64::INFINITY,
        step: hh,
    };
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i])
                .abs()
                .max((a[j][i] - a[j - 1][i - 1]).abs());
            if errt <= best.error {
                best = Derivative {
                    value: a[j][i],
                    error: errt,
                    step: hh,
                };
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_smooth_functions() {
        let d = ridders(f64::exp, 0.7, 0.3);
        assert!((d.value - 0.7_f64.exp()).abs() < 1e-12);
        assert!(d.error < 1e-10 && d.step > 0.0);
        let d = ridders(|x| 1.0 / x, 0.5, 0.1);
        assert!((d.value + 4.0).abs() < 1e-11);
    }
}
