use super::expr::{Expr, Node};

impl Expr {
    /// Exact partial derivative with respect to `var`, simplified.
    ///
    /// Variables other than `var` are treated as constants.
    pub fn differentiate(&self, var: &str) -> Expr {
        self.derive_raw(var).simplify()
    }

    fn derive_raw(&self, var: &str) -> Expr {
        if !self.depends_on(var) {
            return Expr::zero();
        }
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Var(_) => Expr::one(),
            Node::Sum(xs) => Expr::sum(xs.iter().filter(|x| x.depends_on(var)).map(|x| x.derive_raw(var)).collect()),
            Node::Product(xs) => {
                let mut terms = Vec::new();
                for (i, x) in xs.iter().enumerate() {
                    if !x.depends_on(var) {
                        continue;
                    }
                    let mut factors = Vec::with_capacity(xs.len());
                    for (j, y) in xs.iter().enumerate() {
                        factors.push(if i == j { x.derive_raw(var) } else { y.clone() });
                    }
                    terms.push(Expr::product(factors));
                }
                Expr::sum(terms)
            }
            Node::Quotient(n, d) => {
                // (n' d - n d') / d^2; d is never the literal zero, so neither is d^2
                let num = n.derive_raw(var) * d - n * d.derive_raw(var);
                Expr::from_node(Node::Quotient(num, d.pow(2)))
            }
            Node::Pow(b, k) => Expr::product(vec![Expr::int(*k as i64), b.pow(k - 1), b.derive_raw(var)]),
            Node::Exp(a) => self * a.derive_raw(var),
            Node::Sin(a) => a.cos() * a.derive_raw(var),
            Node::Cos(a) => -(a.sin() * a.derive_raw(var)),
            Node::Neg(a) => -a.derive_raw(var),
        }
    }

    /// Directional derivative `v^A ∂_A self` over the given coordinates.
    pub fn directional(&self, coords: &[String], v: &[Expr]) -> Expr {
        let terms = coords
            .iter()
            .zip(v)
            .filter(|(c, vc)| !vc.is_zero() && self.depends_on(c))
            .map(|(c, vc)| vc * self.derive_raw(c))
            .collect();
        Expr::sum(terms).simplify()
    }
}
