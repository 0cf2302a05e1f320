//! Best-effort canonicalisation.
//!
//! Every expression is rewritten as a sum of monomials with exact rational
//! coefficients. A monomial is a product of atoms raised to nonzero integer
//! powers, plus at most one merged `exp(..)` factor. Atoms are variables,
//! `sin`/`cos` nodes, and multi-term sums that only occur with negative
//! exponents (positive powers of sums are always expanded).

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::expr::{Expr, Node, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
struct Monomial {
    atoms: BTreeMap<Expr, i32>,
    exp_arg: Option<Expr>,
}

type Terms = BTreeMap<Monomial, Rational>;

const MAX_PASSES: usize = 8;

impl Expr {
    /// Semantically equal expression with literal zeros/ones collapsed,
    /// rational constants merged, like terms and like factors collected, and
    /// products of sums expanded.
    ///
    /// The result is a fixpoint: `e.simplify().simplify() == e.simplify()`.
    pub fn simplify(&self) -> Expr {
        let terms = to_terms(self);
        let mut cur = from_terms(&terms);
        if is_polynomial(&terms) {
            return cur;
        }
        for _ in 0..MAX_PASSES {
            let next = simplify_once(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
        cur
    }
}

fn simplify_once(e: &Expr) -> Expr {
    from_terms(&to_terms(e))
}

fn constant_terms(c: Rational) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(Monomial::default(), c);
    }
    t
}

fn atom_terms(atom: Expr, power: i32) -> Terms {
    let mut m = Monomial::default();
    m.atoms.insert(atom, power);
    let mut t = Terms::new();
    t.insert(m, Rational::one());
    t
}

/// Adds `other` into `acc`; zero coefficients are left for the caller to prune.
fn add_into(acc: &mut Terms, other: Terms) {
    for (m, c) in other {
        match acc.get_mut(&m) {
            Some(slot) => *slot += c,
            None => {
                acc.insert(m, c);
            }
        }
    }
}

fn prune(mut t: Terms) -> Terms {
    t.retain(|_, c| !c.is_zero());
    t
}

/// Polynomials in plain variables are already canonical after one pass.
fn is_polynomial(t: &Terms) -> bool {
    t.keys().all(|m| m.exp_arg.is_none() && m.atoms.iter().all(|(a, p)| *p > 0 && matches!(a.node(), Node::Var(_))))
}

fn merge_exp(a: &Option<Expr>, b: &Option<Expr>) -> Option<Expr> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            let s = simplify_once(&Expr::sum(vec![x.clone(), y.clone()]));
            (!s.is_zero()).then_some(s)
        }
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut atoms = a.atoms.clone();
    for (k, p) in &b.atoms {
        let slot = atoms.entry(k.clone()).or_insert(0);
        *slot += p;
    }
    atoms.retain(|_, p| *p != 0);
    Monomial { atoms, exp_arg: merge_exp(&a.exp_arg, &b.exp_arg) }
}

fn mul_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = mul_monomials(ma, mb);
            let c = ca * cb;
            match out.get_mut(&m) {
                Some(slot) => *slot += c,
                None => {
                    out.insert(m, c);
                }
            }
        }
    }
    expand_sum_atoms(prune(out))
}

/// Multiplies out any sum atom that ended up with a positive exponent.
fn expand_sum_atoms(terms: Terms) -> Terms {
    let needs = terms.keys().any(|m| m.atoms.iter().any(|(a, p)| *p > 0 && matches!(a.node(), Node::Sum(_))));
    if !needs {
        return terms;
    }
    let mut out = Terms::new();
    for (mut m, c) in terms {
        let positive: Vec<(Expr, i32)> = m
            .atoms
            .iter()
            .filter(|(a, p)| **p > 0 && matches!(a.node(), Node::Sum(_)))
            .map(|(a, p)| (a.clone(), *p))
            .collect();
        for (a, _) in &positive {
            m.atoms.remove(a);
        }
        let mut acc = Terms::new();
        acc.insert(m, c);
        for (a, p) in positive {
            let base = to_terms(&a);
            for _ in 0..p {
                acc = mul_terms(&acc, &base);
            }
        }
        add_into(&mut out, acc);
    }
    prune(out)
}

fn pow_terms(base: &Terms, k: u32) -> Terms {
    let mut acc = constant_terms(Rational::one());
    for _ in 0..k {
        acc = mul_terms(&acc, base);
    }
    acc
}

fn scale_exp(arg: &Expr, k: i32) -> Option<Expr> {
    let s = simplify_once(&Expr::product(vec![Expr::int(k as i64), arg.clone()]));
    (!s.is_zero()).then_some(s)
}

fn to_terms(e: &Expr) -> Terms {
    match e.node() {
        Node::Const(c) => constant_terms(c.clone()),
        Node::Var(_) => atom_terms(e.clone(), 1),
        Node::Sum(xs) => {
            let mut acc = Terms::new();
            for x in xs {
                add_into(&mut acc, to_terms(x));
            }
            prune(acc)
        }
        Node::Product(xs) => {
            let mut acc = constant_terms(Rational::one());
            for x in xs {
                if acc.is_empty() {
                    break;
                }
                acc = mul_terms(&acc, &to_terms(x));
            }
            acc
        }
        Node::Neg(a) => {
            let mut t = to_terms(a);
            for c in t.values_mut() {
                *c = -c.clone();
            }
            t
        }
        Node::Quotient(n, d) => {
            let num = to_terms(n);
            if num.is_empty() {
                return num;
            }
            mul_terms(&num, &inverse_power(d, 1))
        }
        Node::Pow(b, k) => {
            if *k >= 0 {
                pow_terms(&to_terms(b), *k as u32)
            } else {
                inverse_power(b, (-*k) as u32)
            }
        }
        Node::Exp(a) => {
            let arg = simplify_once(a);
            if arg.is_zero() {
                return constant_terms(Rational::one());
            }
            let m = Monomial { exp_arg: Some(arg), ..Monomial::default() };
            let mut t = Terms::new();
            t.insert(m, Rational::one());
            t
        }
        Node::Sin(a) => {
            let arg = simplify_once(a);
            if arg.is_zero() {
                return Terms::new();
            }
            atom_terms(arg.sin(), 1)
        }
        Node::Cos(a) => {
            let arg = simplify_once(a);
            if arg.is_zero() {
                return constant_terms(Rational::one());
            }
            atom_terms(arg.cos(), 1)
        }
    }
}

/// Terms of `base^(-k)` for `k > 0`.
fn inverse_power(base: &Expr, k: u32) -> Terms {
    let tb = to_terms(base);
    let ki = k as i32;
    if tb.is_empty() {
        // the base is identically zero: keep the pole as an opaque atom
        return atom_terms(Expr::zero(), -ki);
    }
    if tb.len() == 1 {
        let (m, c) = tb.into_iter().next().unwrap();
        let mut coeff = Rational::one();
        let inv = c.recip();
        for _ in 0..k {
            coeff *= &inv;
        }
        let atoms = m.atoms.into_iter().map(|(a, p)| (a, -p * ki)).collect();
        let exp_arg = m.exp_arg.as_ref().and_then(|a| scale_exp(a, -ki));
        let mut t = Terms::new();
        t.insert(Monomial { atoms, exp_arg }, coeff);
        return expand_sum_atoms(t);
    }
    // pull a common rational content out so that e.g. (2x + 2y)^-1 -> (1/2)(x + y)^-1
    let content = leading_coefficient(&tb);
    let normalized: Terms = tb.into_iter().map(|(m, c)| (m, c / &content)).collect();
    let atom = from_terms(&normalized);
    let mut coeff = Rational::one();
    let inv = content.recip();
    for _ in 0..k {
        coeff *= &inv;
    }
    let mut t = atom_terms(atom, -ki);
    for c in t.values_mut() {
        *c = coeff.clone();
    }
    t
}

fn leading_coefficient(t: &Terms) -> Rational {
    t.values().next().cloned().unwrap_or_else(Rational::one)
}

fn monomial_expr(m: &Monomial, c: &Rational) -> Expr {
    let mut factors = Vec::with_capacity(m.atoms.len() + 2);
    let bare = m.atoms.is_empty() && m.exp_arg.is_none();
    if bare || !c.is_one() {
        factors.push(Expr::constant(c.clone()));
    }
    for (a, p) in &m.atoms {
        factors.push(if *p == 1 { a.clone() } else { Expr::from_node(Node::Pow(a.clone(), *p)) });
    }
    if let Some(arg) = &m.exp_arg {
        factors.push(arg.exp());
    }
    Expr::product(factors)
}

fn from_terms(t: &Terms) -> Expr {
    if t.is_empty() {
        return Expr::zero();
    }
    let terms: Vec<Expr> = t.iter().map(|(m, c)| monomial_expr(m, c)).collect();
    Expr::sum(terms)
}
