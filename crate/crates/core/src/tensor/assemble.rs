//! Curvature assembly shared by the symbolic and the exact-derivative
//! numeric paths. Inputs are the metric, its inverse and derivatives.

use super::{Component, Tensor};

/// Collects products, skipping those with a factor known to be zero.
struct Acc<F>(Vec<F>);

impl<F: Component> Acc<F> {
    fn new() -> Self {
        Acc(Vec::new())
    }

    fn push(&mut self, v: &F) {
        if !v.is_nil() {
            self.0.push(v.clone());
        }
    }

    fn neg(&mut self, v: &F) {
        if !v.is_nil() {
            self.0.push(-v.clone());
        }
    }

    fn mul(&mut self, a: &F, b: &F) {
        if !a.is_nil() && !b.is_nil() {
            self.0.push(a.clone() * b.clone());
        }
    }

    fn mul_neg(&mut self, a: &F, b: &F) {
        if !a.is_nil() && !b.is_nil() {
            self.0.push(-(a.clone() * b.clone()));
        }
    }

    fn done(self) -> F {
        F::sum(self.0).tidy()
    }
}

/// `Γ^C_AB = ½ g^CD (∂_A g_DB + ∂_B g_DA − ∂_D g_AB)` from `dg[E, A, B] = ∂_E g_AB`.
pub(crate) fn christoffel<F: Component>(ginv: &Tensor<F>, dg: &Tensor<F>) -> Tensor<F> {
    let d = ginv.dim();
    let half = F::ratio(1, 2);
    let first = Tensor::from_fn(d, 3, |i| {
        let (dd, a, b) = (i[0], i[1], i[2]);
        let mut acc = Acc::new();
        acc.push(&dg[[a, dd, b]]);
        acc.push(&dg[[b, dd, a]]);
        acc.neg(&dg[[dd, a, b]]);
        let s = acc.done();
        if s.is_nil() {
            s
        } else {
            (half.clone() * s).tidy()
        }
    });
    let mut out = Tensor::filled(d, 3, F::zero());
    for c in 0..d {
        for a in 0..d {
            for b in a..d {
                let mut acc = Acc::new();
                for dd in 0..d {
                    acc.mul(&ginv[[c, dd]], &first[[dd, a, b]]);
                }
                let v = acc.done();
                out.set(&[c, a, b], v.clone());
                out.set(&[c, b, a], v);
            }
        }
    }
    out
}

/// `R^D_ABC` at `[D, A, B, C]` from `dgamma[E, C, A, B] = ∂_E Γ^C_AB`.
pub(crate) fn riemann_up<F: Component>(gamma: &Tensor<F>, dgamma: &Tensor<F>) -> Tensor<F> {
    let d = gamma.dim();
    let mut out = Tensor::filled(d, 4, F::zero());
    for dd in 0..d {
        for a in 0..d {
            for b in a + 1..d {
                for c in 0..d {
                    let mut acc = Acc::new();
                    acc.push(&dgamma[[a, dd, b, c]]);
                    acc.neg(&dgamma[[b, dd, a, c]]);
                    for e in 0..d {
                        acc.mul(&gamma[[dd, a, e]], &gamma[[e, b, c]]);
                        acc.mul_neg(&gamma[[dd, b, e]], &gamma[[e, a, c]]);
                    }
                    let v = acc.done();
                    out.set(&[dd, b, a, c], (-v.clone()).tidy());
                    out.set(&[dd, a, b, c], v);
                }
            }
        }
    }
    out
}

/// `R_ABCD = g_DE R^E_ABC`.
pub(crate) fn lower_last<F: Component>(g: &Tensor<F>, up: &Tensor<F>) -> Tensor<F> {
    let d = g.dim();
    let mut out = Tensor::filled(d, 4, F::zero());
    for a in 0..d {
        for b in a + 1..d {
            for c in 0..d {
                for dd in 0..d {
                    let mut acc = Acc::new();
                    for e in 0..d {
                        acc.mul(&g[[dd, e]], &up[[e, a, b, c]]);
                    }
                    let v = acc.done();
                    out.set(&[b, a, c, dd], (-v.clone()).tidy());
                    out.set(&[a, b, c, dd], v);
                }
            }
        }
    }
    out
}

/// `Ric_BC = R^A_ABC`.
pub(crate) fn ricci<F: Component>(up: &Tensor<F>) -> Tensor<F> {
    let d = up.dim();
    Tensor::from_fn(d, 2, |i| {
        let mut acc = Acc::new();
        for a in 0..d {
            acc.push(&up[[a, a, i[0], i[1]]]);
        }
        acc.done()
    })
}

pub(crate) fn trace<F: Component>(ginv: &Tensor<F>, t: &Tensor<F>) -> F {
    let d = ginv.dim();
    let mut acc = Acc::new();
    for a in 0..d {
        for b in 0..d {
            acc.mul(&ginv[[a, b]], &t[[a, b]]);
        }
    }
    acc.done()
}

/// `t[[a, b, c, d]] = x_ab y_cd`.
fn outer<F: Component>(x: &Tensor<F>, y: &Tensor<F>) -> Tensor<F> {
    Tensor::from_fn(x.dim(), 4, |i| {
        let mut acc = Acc::new();
        acc.mul(&x[[i[0], i[1]]], &y[[i[2], i[3]]]);
        acc.done()
    })
}

/// Weyl tensor in dimension `d ≥ 4` from the lowered Riemann tensor, the
/// Ricci tensor `Ric_BC = R^A_ABC` and the scalar `S = g^BC Ric_BC`.
///
/// With `R_AB` and `S` taken as the first–third contraction `g^AC R_ABCD`
/// (which is `−Ric`) and its trace, this is
/// `W_ABCD = R_ABCD + (R_BC g_AD − R_BD g_AC − R_AC g_BD + R_AD g_BC)/(d−2)
///          + S (g_BD g_AC − g_BC g_AD)/((d−2)(d−1))`.
pub(crate) fn weyl<F: Component>(g: &Tensor<F>, low: &Tensor<F>, ric: &Tensor<F>, s: &F) -> Tensor<F> {
    let d = g.dim();
    let di = d as i64;
    // the contraction used in the display is minus the Ricci tensor stored here
    let c1 = F::ratio(-1, di - 2);
    let pg = outer(&ric.map(|x| (c1.clone() * x.clone()).tidy()), g);
    let c2 = if s.is_nil() { s.clone() } else { (F::ratio(-1, (di - 2) * (di - 1)) * s.clone()).tidy() };
    let gg = outer(&g.map(|x| (c2.clone() * x.clone()).tidy()), g);
    let mut out = Tensor::filled(d, 4, F::zero());
    for a in 0..d {
        for b in a + 1..d {
            for c in 0..d {
                for dd in c + 1..d {
                    let mut acc = Acc::new();
                    acc.push(&low[[a, b, c, dd]]);
                    acc.push(&pg[[b, c, a, dd]]);
                    acc.neg(&pg[[b, dd, a, c]]);
                    acc.neg(&pg[[a, c, b, dd]]);
                    acc.push(&pg[[a, dd, b, c]]);
                    acc.push(&gg[[b, dd, a, c]]);
                    acc.neg(&gg[[b, c, a, dd]]);
                    let v = acc.done();
                    let m = (-v.clone()).tidy();
                    out.set(&[b, a, c, dd], m.clone());
                    out.set(&[a, b, dd, c], m);
                    out.set(&[b, a, dd, c], v.clone());
                    out.set(&[a, b, c, dd], v);
                }
            }
        }
    }
    out
}
