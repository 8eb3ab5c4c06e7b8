//! Small numerical kernels shared by the rest of the crate: adaptive
//! Gauss–Kronrod quadrature, Gauss–Legendre cell rules, scrambled Halton
//! sampling, dense linear solves and least-squares line fits.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Central-difference step used for every Jacobian and compatibility check.
pub const FD_STEP: f64 = 1e-5;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`. The interval with the largest error estimate is bisected
/// until the summed estimate meets `tol` or falls to round-off level.
/// Reversed limits give the negated integral.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    const MAX_INTERVALS: usize = 4000;
    let mut parts: Vec<(f64, f64, f64, f64)> = Vec::new();
    let eval = |f: &mut F, lo: f64, hi: f64| -> Result<(f64, f64, f64, f64)> {
        let (val, err) = gk15(f, lo, hi);
        if !val.is_finite() {
            return Err(Error::Accuracy(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        Ok((lo, hi, val, err))
    };
    parts.push(eval(&mut f, a, b)?);
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        let floor = 50.0 * f64::EPSILON * parts.iter().map(|p| p.2.abs()).sum::<f64>();
        if err <= tol || err <= floor {
            return Ok(total);
        }
        let (k, worst) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(k, p)| (k, *p))
            .expect("nonempty");
        let (lo, hi) = (worst.0, worst.1);
        let mid = 0.5 * (lo + hi);
        if parts.len() >= MAX_INTERVALS || !(mid > lo && mid < hi) {
            return Err(Error::Accuracy(format!(
                "quadrature did not converge on [{a}, {b}] (error estimate {err:e})"
            )));
        }
        parts[k] = eval(&mut f, lo, mid)?;
        parts.push(eval(&mut f, mid, hi)?);
    }
}

/// Five-point Gauss–Legendre rule on `[-1, 1]`: (node, weight) pairs.
pub const GAUSS_LEGENDRE_5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Average of `f` over `[a, b]` by the five-point Gauss–Legendre rule.
pub fn cell_average<F: Fn(f64) -> T, T>(f: F, a: f64, b: f64) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc: Option<T> = None;
    for (node, w) in GAUSS_LEGENDRE_5 {
        let term = f(c + h * node) * (0.5 * w);
        acc = Some(match acc {
            None => term,
            Some(prev) => prev + term,
        });
    }
    acc.expect("rule has nodes")
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    out
}

/// Halton sequence with a seeded Cranley–Patterson rotation.
#[derive(Debug, Clone)]
pub struct QuasiRandom {
    shift: Vec<f64>,
}

impl QuasiRandom {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.gen::<f64>()).collect();
        Self { shift }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Point `i` of the rotated sequence in `[0, 1)^dim`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        self.shift
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let v = radical_inverse(i as u64 + 1, PRIMES[k]) + s;
                v - v.floor()
            })
            .collect()
    }
}

/// Offsets inside the closed unit ball of dimension `dim`: the `2 dim` axis
/// poles, `n / 4` quasi-random points on the sphere and `n` quasi-random
/// interior points, in that order.
pub fn unit_ball_offsets(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n + n / 4 + 2 * dim);
    for k in 0..dim {
        for sign in [-1.0, 1.0] {
            let mut p = vec![0.0; dim];
            p[k] = sign;
            out.push(p);
        }
    }
    let qr = QuasiRandom::new(dim, seed);
    let mut i = 0;
    let mut shell = 0;
    while shell < n / 4 && dim > 1 {
        let p: Vec<f64> = qr.point(i).iter().map(|v| 2.0 * v - 1.0).collect();
        i += 1;
        let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 0.1 && r <= 1.0 {
            out.push(p.iter().map(|v| v / r).collect());
            shell += 1;
        }
    }
    let mut inner = 0;
    while inner < n {
        let p: Vec<f64> = qr.point(i).iter().map(|v| 2.0 * v - 1.0).collect();
        i += 1;
        if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            out.push(p);
            inner += 1;
        }
    }
    out
}

/// Solve the dense system `m x = b` by LU with partial pivoting.
pub fn solve_dense(m: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    m.lu().solve(&b).filter(|x| x.iter().all(|v| v.is_finite()))
}

/// Least-squares line `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_polynomials_and_smooth() {
        let v = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - (64.0 / 6.0 - 6.0)).abs() < 1e-12);
        let v = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-11);
        let rev = integrate(|x| x * x, 1.0, 0.0, 1e-13).unwrap();
        assert!((rev + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_cell_average_exact_for_degree_nine() {
        let avg: f64 = cell_average(|x: f64| x.powi(9) + x.powi(4), 0.0, 1.0);
        assert!((avg - (0.1 + 0.2)).abs() < 1e-14);
    }

    #[test]
    fn halton_points_are_in_unit_cube_and_deterministic() {
        let a = QuasiRandom::new(3, 7);
        let b = QuasiRandom::new(3, 7);
        for i in 0..100 {
            let p = a.point(i);
            assert_eq!(p, b.point(i));
            assert!(p.iter().all(|v| (0.0..1.0).contains(v)));
        }
        assert_ne!(QuasiRandom::new(3, 8).point(0), a.point(0));
    }

    #[test]
    fn ball_offsets_stay_in_ball_and_include_poles() {
        let pts = unit_ball_offsets(3, 200, 1);
        assert_eq!(pts.len(), 6 + 50 + 200);
        for p in &pts {
            assert!(p.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12);
        }
        assert_eq!(pts[0], vec![-1.0, 0.0, 0.0]);
        let one_d = unit_ball_offsets(1, 10, 1);
        assert_eq!(one_d.len(), 12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.4 * x - 2.0).collect();
        let (m, c) = linear_fit(&xs, &ys).unwrap();
        assert!((m - 0.4).abs() < 1e-14 && (c + 2.0).abs() < 1e-13);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }
}
