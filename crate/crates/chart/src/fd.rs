//! Metric jets: `G`, `∂G`, `∂²G` at a point, analytic when the metric
//! supplies them and central differences otherwise.

use gkforge_core::linalg::Matrix;
use serde::Serialize;

use crate::metric::ChartMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    FiniteDifference,
}

/// `d1[k] = ∂_k G`, `d2[k][l] = ∂_k ∂_l G`.
#[derive(Clone, Debug)]
pub struct Jet {
    pub g: Matrix<f64>,
    pub d1: Vec<Matrix<f64>>,
    pub d2: Option<Vec<Vec<Matrix<f64>>>>,
    pub source: DerivativeSource,
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(k, h) in moves {
        y[k] += h;
    }
    y
}

pub fn fd_first(m: &dyn ChartMetric, x: &[f64]) -> Vec<Matrix<f64>> {
    (0..m.dim())
        .map(|k| {
            let h = m.fd_step(x[k]);
            let plus = m.eval(&shifted(x, &[(k, h)]));
            let minus = m.eval(&shifted(x, &[(k, -h)]));
            plus.sub(&minus).scale(&(0.5 / h))
        })
        .collect()
}

pub fn fd_second(m: &dyn ChartMetric, x: &[f64]) -> Vec<Vec<Matrix<f64>>> {
    let n = m.dim();
    let g0 = m.eval(x);
    let mut out = vec![vec![Matrix::zeros(n, n); n]; n];
    for k in 0..n {
        let hk = m.fd_step(x[k]);
        let plus = m.eval(&shifted(x, &[(k, hk)]));
        let minus = m.eval(&shifted(x, &[(k, -hk)]));
        out[k][k] = plus.add(&minus).sub(&g0.scale(&2.0)).scale(&(1.0 / (hk * hk)));
        for l in k + 1..n {
            let hl = m.fd_step(x[l]);
            let pp = m.eval(&shifted(x, &[(k, hk), (l, hl)]));
            let pm = m.eval(&shifted(x, &[(k, hk), (l, -hl)]));
            let mp = m.eval(&shifted(x, &[(k, -hk), (l, hl)]));
            let mm = m.eval(&shifted(x, &[(k, -hk), (l, -hl)]));
            let mixed = pp.sub(&pm).sub(&mp).add(&mm).scale(&(0.25 / (hk * hl)));
            out[l][k] = mixed.clone();
            out[k][l] = mixed;
        }
    }
    out
}

/// Builds the jet, computing `∂²G` only when `second` is set. The source is
/// analytic only when every requested derivative is.
pub fn jet(m: &dyn ChartMetric, x: &[f64], second: bool) -> Jet {
    let g = m.eval(x);
    match m.deriv1(x) {
        Some(d1) => {
            let analytic2 = if second { m.deriv2(x) } else { None };
            let source = if second && analytic2.is_none() {
                DerivativeSource::FiniteDifference
            } else {
                DerivativeSource::Analytic
            };
            let d2 = if second { Some(analytic2.unwrap_or_else(|| fd_second(m, x))) } else { None };
            Jet { g, d1, d2, source }
        }
        None => {
            let d2 = second.then(|| fd_second(m, x));
            Jet { g, d1: fd_first(m, x), d2, source: DerivativeSource::FiniteDifference }
        }
    }
}
