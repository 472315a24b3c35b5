use crate::real::Real;

/// Quintic Hermite interpolation on [t0, t1] from values and first and
/// second derivatives at both ends. Returns the value and first derivative.
pub fn quintic_hermite<T: Real>(t0: T, t1: T, a: [T; 3], b: [T; 3], t: T) -> (T, T) {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let l = |x: f64| T::lit(x);
    let h0 = T::one() - l(10.0) * s3 + l(15.0) * s4 - l(6.0) * s5;
    let h1 = s - l(6.0) * s3 + l(8.0) * s4 - l(3.0) * s5;
    let h2 = (s2 - l(3.0) * s3 + l(3.0) * s4 - s5) / l(2.0);
    let h3 = l(10.0) * s3 - l(15.0) * s4 + l(6.0) * s5;
    let h4 = -l(4.0) * s3 + l(7.0) * s4 - l(3.0) * s5;
    let h5 = (s3 - l(2.0) * s4 + s5) / l(2.0);
    let d0 = -l(30.0) * s2 + l(60.0) * s3 - l(30.0) * s4;
    let d1 = T::one() - l(18.0) * s2 + l(32.0) * s3 - l(15.0) * s4;
    let d2 = (l(2.0) * s - l(9.0) * s2 + l(12.0) * s3 - l(5.0) * s4) / l(2.0);
    let d3 = -d0;
    let d4 = -l(12.0) * s2 + l(28.0) * s3 - l(15.0) * s4;
    let d5 = (l(3.0) * s2 - l(8.0) * s3 + l(5.0) * s4) / l(2.0);
    let hh = h * h;
    let value = a[0] * h0 + h * a[1] * h1 + hh * a[2] * h2 + b[0] * h3 + h * b[1] * h4 + hh * b[2] * h5;
    let slope = (a[0] * d0 + h * a[1] * d1 + hh * a[2] * d2 + b[0] * d3 + h * b[1] * d4 + hh * b[2] * d5) / h;
    (value, slope)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_quintics() {
        let f = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) + 0.25 * t.powi(5);
        let df = |t: f64| -2.0 + 1.5 * t * t + 1.25 * t.powi(4);
        let ddf = |t: f64| 3.0 * t + 5.0 * t.powi(3);
        let (t0, t1) = (-0.3, 0.9);
        for i in 0..=10 {
            let t = t0 + (t1 - t0) * i as f64 / 10.0;
            let (v, d) = quintic_hermite(t0, t1, [f(t0), df(t0), ddf(t0)], [f(t1), df(t1), ddf(t1)], t);
            assert!((v - f(t)).abs() < 1e-14);
            assert!((d - df(t)).abs() < 1e-13);
        }
    }
}
