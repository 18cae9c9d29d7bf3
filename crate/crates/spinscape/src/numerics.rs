//! Small numerical toolkit: special functions in log space, bracketing root
//! finders, derivative-free minimizers and adaptive Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

pub const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub const LN_PI: f64 = 1.144_729_885_849_400_2;

/// log Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// log Φ(z), Φ the standard normal CDF; accurate far into the lower tail.
pub fn log_ndtr(z: f64) -> f64 {
    if z > 5.0 {
        // Φ(z) = 1 − Φ(−z) with Φ(−z) < 3e-7
        return (-0.5 * libm::erfc(z / std::f64::consts::SQRT_2)).ln_1p();
    }
    if z > -20.0 {
        return (0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)).ln();
    }
    // Mills-ratio series: Φ(z) = φ(z)/|z| · Σ (−1)^k (2k−1)!! / z^{2k}
    let z2 = z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) / z2;
        sum += term;
    }
    -0.5 * z2 - (-z).ln() - 0.5 * LN_2PI + sum.ln()
}

/// log(Φ(hi) − Φ(lo)) for lo < hi, without cancellation in either tail.
pub fn log_ndtr_diff(lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return f64::NEG_INFINITY;
    }
    if lo > 0.0 {
        // mirror into the lower tail: Φ(hi) − Φ(lo) = Φ(−lo) − Φ(−hi)
        return log_ndtr_diff(-hi, -lo);
    }
    let a = log_ndtr(hi);
    if lo == f64::NEG_INFINITY {
        return a;
    }
    let b = log_ndtr(lo);
    a + (-(b - a).exp()).ln_1p()
}

/// log Σ exp(x_i); −∞ for an empty or all −∞ slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Bisection for a sign change of `f` on [lo, hi] down to `tol` in the argument.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::BracketFailure(format!(
            "no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the minimum of a unimodal `f` on [a, b].
/// Returns (argmin, min).
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}

/// Nelder–Mead simplex minimization in two dimensions.
pub fn nelder_mead_2d<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: f64,
    ftol: f64,
    max_iter: usize,
) -> ([f64; 2], f64) {
    let mut pts = [
        start,
        [start[0] + step, start[1]],
        [start[0], start[1] + step],
    ];
    let mut vals = pts.map(&mut f);
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = idx.map(|i| pts[i]);
        vals = idx.map(|i| vals[i]);
        let spread = (pts[1][0] - pts[0][0])
            .abs()
            .max((pts[2][0] - pts[0][0]).abs())
            + (pts[1][1] - pts[0][1])
                .abs()
                .max((pts[2][1] - pts[0][1]).abs());
        if (vals[2] - vals[0]).abs() <= ftol && spread < 1e-12 {
            break;
        }
        let cen = [0.5 * (pts[0][0] + pts[1][0]), 0.5 * (pts[0][1] + pts[1][1])];
        let along = |t: f64| {
            [
                cen[0] + t * (pts[2][0] - cen[0]),
                cen[1] + t * (pts[2][1] - cen[1]),
            ]
        };
        let xr = along(-1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let t = if fr < vals[2] { -0.5 } else { 0.5 };
            let xc = along(t);
            let fc = f(xc);
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for i in 1..3 {
                    pts[i] = [0.5 * (pts[0][0] + pts[i][0]), 0.5 * (pts[0][1] + pts[i][1])];
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    (pts[best], vals[best])
}

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
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Adaptive Gauss–Kronrod (7/15) quadrature over the consecutive panels
/// given by `breaks` (sorted). Panels with the largest error estimate are
/// bisected until the total error is below max(abs_tol, rel_tol·|value|).
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Quadrature {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (val, err) = gk15(&mut f, w[0], w[1]);
            heap.push(Panel {
                a: w[0],
                b: w[1],
                val,
                err,
            });
        }
    }
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.val, e + p.err));
        let done = error <= abs_tol.max(rel_tol * value.abs());
        if done || heap.len() >= max_panels {
            return Quadrature { value, error };
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // cannot split further; keep the panel and give up refining
            heap.push(Panel { err: 0.0, ..p });
            continue;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        heap.push(Panel {
            a: p.a,
            b: m,
            val: v1,
            err: e1,
        });
        heap.push(Panel {
            a: m,
            b: p.b,
            val: v2,
            err: e2,
        });
    }
}

/// Evenly spaced breakpoints covering [a, b] with spacing at most `h`.
pub fn panel_breaks(a: f64, b: f64, h: f64) -> Vec<f64> {
    let n = (((b - a) / h).ceil() as usize).max(1);
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// SplitMix64 finalizer; used to derive independent stream seeds.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable seed for chunk `chunk` of a run with base seed `seed`.
pub fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(chunk.wrapping_add(0x5851_F42D_4C95_7F2D)))
}
