use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Not-a-knot cubic spline through vector samples on a uniform grid.
///
/// Not-a-knot end conditions reproduce cubic polynomials exactly.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    t0: f64,
    h: f64,
    values: Vec<Vec<Complex64>>,
    /// Second derivatives at the knots.
    moments: Vec<Vec<Complex64>>,
}

impl CubicSpline {
    /// Needs at least four samples.
    pub fn uniform(t0: f64, t1: f64, samples: &[Vec<Complex64>]) -> CubicSpline {
        let n = samples.len();
        assert!(n >= 4, "not-a-knot spline needs four samples");
        let h = (t1 - t0) / (n - 1) as f64;
        let mut a = DMatrix::<f64>::zeros(n, n);
        a[(0, 0)] = 1.0;
        a[(0, 1)] = -2.0;
        a[(0, 2)] = 1.0;
        a[(n - 1, n - 3)] = 1.0;
        a[(n - 1, n - 2)] = -2.0;
        a[(n - 1, n - 1)] = 1.0;
        for i in 1..n - 1 {
            a[(i, i - 1)] = 1.0;
            a[(i, i)] = 4.0;
            a[(i, i + 1)] = 1.0;
        }
        let lu = a.lu();
        let dim = samples[0].len();
        let mut moments = vec![vec![Complex64::new(0.0, 0.0); dim]; n];
        for c in 0..dim {
            for part in 0..2 {
                let y = |i: usize| if part == 0 { samples[i][c].re } else { samples[i][c].im };
                let mut rhs = DVector::<f64>::zeros(n);
                for i in 1..n - 1 {
                    rhs[i] = 6.0 / (h * h) * (y(i - 1) - 2.0 * y(i) + y(i + 1));
                }
                let sol = lu.solve(&rhs).expect("spline system is nonsingular");
                for i in 0..n {
                    if part == 0 {
                        moments[i][c].re = sol[i];
                    } else {
                        moments[i][c].im = sol[i];
                    }
                }
            }
        }
        CubicSpline {
            t0,
            h,
            values: samples.to_vec(),
            moments,
        }
    }

    /// Value, first and second derivative at t.
    pub fn eval(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let h = self.h;
        let last = self.values.len() - 2;
        let i = (((t - self.t0) / h).floor().max(0.0) as usize).min(last);
        let a = self.t0 + (i + 1) as f64 * h - t;
        let b = t - (self.t0 + i as f64 * h);
        let (y0, y1) = (&self.values[i], &self.values[i + 1]);
        let (m0, m1) = (&self.moments[i], &self.moments[i + 1]);
        let dim = y0.len();
        let mut v = Vec::with_capacity(dim);
        let mut d = Vec::with_capacity(dim);
        let mut dd = Vec::with_capacity(dim);
        for c in 0..dim {
            let c0 = y0[c] / h - m0[c] * h / 6.0;
            let c1 = y1[c] / h - m1[c] * h / 6.0;
            v.push(m0[c] * a.powi(3) / (6.0 * h) + m1[c] * b.powi(3) / (6.0 * h) + c0 * a + c1 * b);
            d.push(-m0[c] * a * a / (2.0 * h) + m1[c] * b * b / (2.0 * h) - c0 + c1);
            dd.push(m0[c] * a / h + m1[c] * b / h);
        }
        (v, d, dd)
    }
}
