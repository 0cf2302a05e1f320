use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational constant carried by [`Expr::Const`] nodes.
pub type Rational = BigRational;

/// Immutable symbolic scalar field over named chart coordinates.
///
/// Nodes are reference counted, so cloning is cheap and expressions can be
/// shared across threads.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

/// One node of an expression tree.
///
/// The variant order doubles as the canonical sort order used by
/// [`Expr::simplify`], which puts constants first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Const(Rational),
    Var(Arc<str>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Quotient(Expr, Expr),
    Pow(Expr, i32),
    Exp(Expr),
    Sin(Expr),
    Cos(Expr),
    Neg(Expr),
}

pub(crate) fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl Expr {
    pub(crate) fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn zero() -> Self {
        Self::from_node(Node::Const(Rational::zero()))
    }

    pub fn one() -> Self {
        Self::from_node(Node::Const(Rational::one()))
    }

    pub fn int(v: i64) -> Self {
        Self::from_node(Node::Const(Rational::from_integer(BigInt::from(v))))
    }

    /// The rational constant `p/q`.
    ///
    /// # Panics
    /// Panics when `q == 0`.
    pub fn rational(p: i64, q: i64) -> Self {
        assert!(q != 0, "rational constant with zero denominator");
        Self::from_node(Node::Const(rational(p, q)))
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_node(Node::Const(r))
    }

    pub fn var(name: &str) -> Self {
        Self::from_node(Node::Var(Arc::from(name)))
    }

    pub fn sum(terms: Vec<Expr>) -> Self {
        match terms.len() {
            0 => Self::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Sum(terms)),
        }
    }

    pub fn product(factors: Vec<Expr>) -> Self {
        match factors.len() {
            0 => Self::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Self::from_node(Node::Product(factors)),
        }
    }

    /// `num / den`, refusing a denominator that is literally zero.
    pub fn quotient(num: Expr, den: Expr) -> Result<Self, super::SymError> {
        if den.is_zero() {
            return Err(super::SymError::ZeroDenominator);
        }
        Ok(Self::from_node(Node::Quotient(num, den)))
    }

    pub fn pow(&self, k: i32) -> Self {
        match k {
            1 => self.clone(),
            _ => Self::from_node(Node::Pow(self.clone(), k)),
        }
    }

    pub fn exp(&self) -> Self {
        Self::from_node(Node::Exp(self.clone()))
    }

    pub fn sin(&self) -> Self {
        Self::from_node(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        Self::from_node(Node::Cos(self.clone()))
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    /// True only for the literal constant zero (no simplification is attempted).
    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_one())
    }

    /// Whether `name` occurs anywhere in the tree.
    pub fn depends_on(&self, name: &str) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Var(v) => &**v == name,
            Node::Sum(xs) | Node::Product(xs) => xs.iter().any(|x| x.depends_on(name)),
            Node::Quotient(a, b) => a.depends_on(name) || b.depends_on(name),
            Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) | Node::Neg(a) => a.depends_on(name),
        }
    }

    /// Names of all variables in the tree, sorted and deduplicated.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self.node() {
            Node::Const(_) => {}
            Node::Var(v) => out.push(v.to_string()),
            Node::Sum(xs) | Node::Product(xs) => xs.iter().for_each(|x| x.collect_vars(out)),
            Node::Quotient(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) | Node::Neg(a) => a.collect_vars(out),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + match self.node() {
            Node::Const(_) | Node::Var(_) => 0,
            Node::Sum(xs) | Node::Product(xs) => xs.iter().map(Expr::size).sum(),
            Node::Quotient(a, b) => a.size() + b.size(),
            Node::Pow(a, _) | Node::Exp(a) | Node::Sin(a) | Node::Cos(a) | Node::Neg(a) => a.size(),
        }
    }

    /// Replaces every occurrence of variable `name` by `value`.
    pub fn substitute(&self, name: &str, value: &Expr) -> Expr {
        if !self.depends_on(name) {
            return self.clone();
        }
        let sub = |e: &Expr| e.substitute(name, value);
        match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(_) => value.clone(),
            Node::Sum(xs) => Expr::from_node(Node::Sum(xs.iter().map(sub).collect())),
            Node::Product(xs) => Expr::from_node(Node::Product(xs.iter().map(sub).collect())),
            Node::Quotient(a, b) => Expr::from_node(Node::Quotient(sub(a), sub(b))),
            Node::Pow(a, k) => Expr::from_node(Node::Pow(sub(a), *k)),
            Node::Exp(a) => sub(a).exp(),
            Node::Sin(a) => sub(a).sin(),
            Node::Cos(a) => sub(a).cos(),
            Node::Neg(a) => Expr::from_node(Node::Neg(sub(a))),
        }
    }
}

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::constant(r)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::from_node(Node::Sum(vec![self, rhs]))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::from_node(Node::Sum(vec![self, -rhs]))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::from_node(Node::Product(vec![self, rhs]))
    }
}

/// # Panics
/// Panics when the denominator is the literal zero; use [`Expr::quotient`]
/// for a fallible version.
impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::quotient(self, rhs).expect("division by the literal zero expression")
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_node(Node::Neg(self))
    }
}

macro_rules! ref_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                $tr::$f(self.clone(), rhs.clone())
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                $tr::$f(self, rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                $tr::$f(self.clone(), rhs)
            }
        }
    };
}

ref_binop!(Add, add);
ref_binop!(Sub, sub);
ref_binop!(Mul, mul);
ref_binop!(Div, div);

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl Expr {
    /// Binding strength used to decide where parentheses are needed.
    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Sum(_) => 1,
            Node::Neg(_) => 2,
            Node::Product(_) | Node::Quotient(..) => 3,
            Node::Const(c) if !c.is_integer() || c.is_negative() => 3,
            Node::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Renders in the same infix syntax accepted by [`super::parse`].
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => fmt_rational(c, f),
            Node::Var(v) => write!(f, "{v}"),
            Node::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    x.fmt_child(f, 2)?;
                }
                Ok(())
            }
            Node::Product(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    x.fmt_child(f, 4)?;
                }
                Ok(())
            }
            Node::Quotient(a, b) => {
                a.fmt_child(f, 3)?;
                write!(f, "/")?;
                b.fmt_child(f, 4)
            }
            Node::Pow(a, k) => {
                a.fmt_child(f, 5)?;
                if *k < 0 {
                    write!(f, "^({k})")
                } else {
                    write!(f, "^{k}")
                }
            }
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::Sin(a) => write!(f, "sin({a})"),
            Node::Cos(a) => write!(f, "cos({a})"),
            Node::Neg(a) => {
                write!(f, "-")?;
                a.fmt_child(f, 3)
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range; fall back to a ratio of floats
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
