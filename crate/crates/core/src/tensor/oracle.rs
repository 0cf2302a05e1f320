//! Finite-difference curvature, written independently of the symbolic path.
//!
//! Only point values of the metric components are used. Christoffel symbols
//! come from central differences of `g`, and their derivatives from central
//! differences of Christoffel symbols at the neighbouring points, so mixed
//! second partials of `g` enter through nested stencils. The Weyl tensor is
//! formed from the Schouten tensor rather than the Ricci display.

use super::curvature::{PointCurvature, WeylWarning};
use super::metric::MetricChart;
use super::{Tensor, TensorError};
use crate::sym::Point;

/// Step of every central difference in the oracle.
pub const FD_STEP: f64 = 1e-4;

struct Probe<'a> {
    m: &'a MetricChart,
    d: usize,
}

impl Probe<'_> {
    fn metric(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, TensorError> {
        let p = Point::on_chart(self.m.coords(), x)?;
        let mut g = vec![vec![0.0; self.d]; self.d];
        for a in 0..self.d {
            for b in a..self.d {
                let v = self.m.component(a, b).evaluate(&p)?;
                g[a][b] = v;
                g[b][a] = v;
            }
        }
        Ok(g)
    }

    fn shifted(x: &[f64], k: usize, by: f64) -> Vec<f64> {
        let mut y = x.to_vec();
        y[k] += by;
        y
    }

    /// `Γ^C_AB` as nested vectors, with `g^-1` returned alongside.
    fn christoffel(&self, x: &[f64]) -> Result<(Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>), TensorError> {
        let d = self.d;
        let h = FD_STEP;
        let g = self.metric(x)?;
        let ginv = invert(&g).ok_or_else(|| TensorError::SingularMetric { at: Some(x.to_vec()) })?;
        let mut dg = Vec::with_capacity(d);
        for e in 0..d {
            let plus = self.metric(&Self::shifted(x, e, h))?;
            let minus = self.metric(&Self::shifted(x, e, -h))?;
            dg.push(
                (0..d)
                    .map(|a| (0..d).map(|b| (plus[a][b] - minus[a][b]) / (2.0 * h)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            );
        }
        let mut gamma = vec![vec![vec![0.0; d]; d]; d];
        for (c, gc) in gamma.iter_mut().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    gc[a][b] =
                        0.5 * (0..d).map(|k| ginv[c][k] * (dg[a][k][b] + dg[b][k][a] - dg[k][a][b])).sum::<f64>();
                }
            }
        }
        Ok((gamma, ginv))
    }
}

fn invert(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = g.len();
    let mut a: Vec<Vec<f64>> = g
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        let p = a[col][col];
        a[col].iter_mut().for_each(|v| *v /= p);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && row[col] != 0.0 {
                let f = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Curvature at `p` from finite differences of the metric components only.
pub fn fd_curvature_oracle(m: &MetricChart, p: &Point<f64>) -> Result<PointCurvature<f64>, TensorError> {
    let d = m.dim();
    let x = p.values_for(m.coords())?;
    let probe = Probe { m, d };
    let h = FD_STEP;
    let g = probe.metric(&x)?;
    let (gamma, ginv) = probe.christoffel(&x)?;

    // dgamma[e][c][a][b] = ∂_e Γ^c_ab
    let mut dgamma = Vec::with_capacity(d);
    for e in 0..d {
        let (gp, _) = probe.christoffel(&Probe::shifted(&x, e, h))?;
        let (gm, _) = probe.christoffel(&Probe::shifted(&x, e, -h))?;
        let mut slab = vec![vec![vec![0.0; d]; d]; d];
        for c in 0..d {
            for a in 0..d {
                for b in 0..d {
                    slab[c][a][b] = (gp[c][a][b] - gm[c][a][b]) / (2.0 * h);
                }
            }
        }
        dgamma.push(slab);
    }

    let rup = Tensor::from_fn(d, 4, |i| {
        let (r, a, b, c) = (i[0], i[1], i[2], i[3]);
        let quad: f64 = (0..d).map(|e| gamma[r][a][e] * gamma[e][b][c] - gamma[r][b][e] * gamma[e][a][c]).sum();
        dgamma[a][r][b][c] - dgamma[b][r][a][c] + quad
    });
    let rlow = Tensor::from_fn(d, 4, |i| (0..d).map(|e| g[i[3]][e] * rup[[e, i[0], i[1], i[2]]]).sum());
    let ric = Tensor::from_fn(d, 2, |i| (0..d).map(|a| rup[[a, a, i[0], i[1]]]).sum());
    let scalar: f64 = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).map(|(a, b)| ginv[a][b] * ric[[a, b]]).sum();

    let (weyl, weyl_warning) = if d >= 4 {
        let df = d as f64;
        // Schouten tensor P = (Ric − S g / (2(d−1))) / (d−2)
        let sch: Vec<Vec<f64>> = (0..d)
            .map(|a| (0..d).map(|b| (ric[[a, b]] - scalar * g[a][b] / (2.0 * (df - 1.0))) / (df - 2.0)).collect())
            .collect();
        let w = Tensor::from_fn(d, 4, |i| {
            let (a, b, c, e) = (i[0], i[1], i[2], i[3]);
            let kn = sch[b][c] * g[a][e] + sch[a][e] * g[b][c] - sch[a][c] * g[b][e] - sch[b][e] * g[a][c];
            rlow[[a, b, c, e]] - kn
        });
        (w, None)
    } else {
        let warn = if d == 3 { WeylWarning::DimensionThree } else { WeylWarning::Undefined };
        (Tensor::filled(d, 4, 0.0), Some(warn))
    };

    Ok(PointCurvature {
        metric: Tensor::from_fn(d, 2, |i| g[i[0]][i[1]]),
        inverse: Tensor::from_fn(d, 2, |i| ginv[i[0]][i[1]]),
        christoffel: Tensor::from_fn(d, 3, |i| gamma[i[0]][i[1]][i[2]]),
        riemann_up: rup,
        riemann_low: rlow,
        ricci: ric,
        scalar,
        weyl,
        weyl_warning,
    })
}
