use super::expr::{rational_to_f64, Expr, Node};
use super::{Point, SymError};
use crate::Scalar;

impl Expr {
    /// Value of the expression at `p`.
    pub fn evaluate<T: Scalar>(&self, p: &Point<T>) -> Result<T, SymError> {
        match self.node() {
            Node::Const(c) => Ok(from_f64(rational_to_f64(c))),
            Node::Var(v) => p.get(v).ok_or_else(|| SymError::MissingCoordinate(v.to_string())),
            Node::Sum(xs) => xs.iter().try_fold(T::zero(), |acc, x| Ok(acc + x.evaluate(p)?)),
            Node::Product(xs) => xs.iter().try_fold(T::one(), |acc, x| Ok(acc * x.evaluate(p)?)),
            Node::Quotient(a, b) => {
                let den = b.evaluate(p)?;
                if den == T::zero() {
                    return Err(SymError::DivisionByZero);
                }
                Ok(a.evaluate(p)? / den)
            }
            Node::Pow(b, k) => powi(b.evaluate(p)?, *k),
            Node::Exp(a) => Ok(a.evaluate(p)?.exp()),
            Node::Sin(a) => Ok(a.evaluate(p)?.sin()),
            Node::Cos(a) => Ok(a.evaluate(p)?.cos()),
            Node::Neg(a) => Ok(-a.evaluate(p)?),
        }
    }

    /// Resolves variable names against `coords` once, for repeated evaluation.
    pub fn compile<T: Scalar>(&self, coords: &[String]) -> Result<Compiled<T>, SymError> {
        Ok(Compiled { root: lower(self, coords)?, arity: coords.len() })
    }
}

fn from_f64<T: Scalar>(v: f64) -> T {
    T::from_f64(v).unwrap_or_else(T::nan)
}

fn powi<T: Scalar>(b: T, k: i32) -> Result<T, SymError> {
    if k < 0 && b == T::zero() {
        return Err(SymError::DivisionByZero);
    }
    Ok(b.powi(k))
}

#[derive(Clone, Debug)]
enum Op<T> {
    Const(T),
    Var(usize),
    Sum(Vec<Op<T>>),
    Product(Vec<Op<T>>),
    Quotient(Box<Op<T>>, Box<Op<T>>),
    Pow(Box<Op<T>>, i32),
    Exp(Box<Op<T>>),
    Sin(Box<Op<T>>),
    Cos(Box<Op<T>>),
    Neg(Box<Op<T>>),
}

fn lower<T: Scalar>(e: &Expr, coords: &[String]) -> Result<Op<T>, SymError> {
    let sub = |x: &Expr| lower(x, coords).map(Box::new);
    Ok(match e.node() {
        Node::Const(c) => Op::Const(from_f64(rational_to_f64(c))),
        Node::Var(v) => {
            Op::Var(coords.iter().position(|c| **c == **v).ok_or_else(|| SymError::MissingCoordinate(v.to_string()))?)
        }
        Node::Sum(xs) => Op::Sum(xs.iter().map(|x| lower(x, coords)).collect::<Result<_, _>>()?),
        Node::Product(xs) => Op::Product(xs.iter().map(|x| lower(x, coords)).collect::<Result<_, _>>()?),
        Node::Quotient(a, b) => Op::Quotient(sub(a)?, sub(b)?),
        Node::Pow(b, k) => Op::Pow(sub(b)?, *k),
        Node::Exp(a) => Op::Exp(sub(a)?),
        Node::Sin(a) => Op::Sin(sub(a)?),
        Node::Cos(a) => Op::Cos(sub(a)?),
        Node::Neg(a) => Op::Neg(sub(a)?),
    })
}

/// An expression with variables bound to positions of a coordinate slice.
#[derive(Clone, Debug)]
pub struct Compiled<T> {
    root: Op<T>,
    arity: usize,
}

impl<T: Scalar> Compiled<T> {
    /// Evaluates at coordinate values given in the order used by [`Expr::compile`].
    pub fn eval(&self, x: &[T]) -> Result<T, SymError> {
        if x.len() != self.arity {
            return Err(SymError::ArityMismatch { expected: self.arity, got: x.len() });
        }
        run(&self.root, x)
    }
}

fn run<T: Scalar>(op: &Op<T>, x: &[T]) -> Result<T, SymError> {
    match op {
        Op::Const(c) => Ok(*c),
        Op::Var(i) => Ok(x[*i]),
        Op::Sum(xs) => xs.iter().try_fold(T::zero(), |acc, o| Ok(acc + run(o, x)?)),
        Op::Product(xs) => xs.iter().try_fold(T::one(), |acc, o| Ok(acc * run(o, x)?)),
        Op::Quotient(a, b) => {
            let den = run(b, x)?;
            if den == T::zero() {
                return Err(SymError::DivisionByZero);
            }
            Ok(run(a, x)? / den)
        }
        Op::Pow(b, k) => powi(run(b, x)?, *k),
        Op::Exp(a) => Ok(run(a, x)?.exp()),
        Op::Sin(a) => Ok(run(a, x)?.sin()),
        Op::Cos(a) => Ok(run(a, x)?.cos()),
        Op::Neg(a) => Ok(-run(a, x)?),
    }
}
