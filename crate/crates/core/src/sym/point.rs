use std::fmt;

use super::SymError;

/// Assignment of real values to named chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    names: Vec<String>,
    values: Vec<T>,
}

impl<T: Copy> Point<T> {
    /// Builds a point, rejecting duplicate coordinate names.
    pub fn new<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, T)>) -> Result<Self, SymError> {
        let mut names: Vec<String> = Vec::new();
        let mut values = Vec::new();
        for (n, v) in pairs {
            let n = n.as_ref();
            if names.iter().any(|m| m == n) {
                return Err(SymError::DuplicateCoordinate(n.to_string()));
            }
            names.push(n.to_string());
            values.push(v);
        }
        Ok(Point { names, values })
    }

    /// Zips chart coordinate names with values given in chart order.
    pub fn on_chart(coords: &[String], values: &[T]) -> Result<Self, SymError> {
        if coords.len() != values.len() {
            return Err(SymError::ArityMismatch { expected: coords.len(), got: values.len() });
        }
        Self::new(coords.iter().map(String::as_str).zip(values.iter().copied()))
    }

    pub fn get(&self, name: &str) -> Option<T> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Values reordered to follow `coords`; every chart coordinate must be present.
    pub fn values_for(&self, coords: &[String]) -> Result<Vec<T>, SymError> {
        coords.iter().map(|c| self.get(c).ok_or_else(|| SymError::MissingCoordinate(c.clone()))).collect()
    }

    /// Copy with a single coordinate replaced.
    pub fn with(&self, name: &str, value: T) -> Result<Self, SymError> {
        let i =
            self.names.iter().position(|n| n == name).ok_or_else(|| SymError::MissingCoordinate(name.to_string()))?;
        let mut p = self.clone();
        p.values[i] = value;
        Ok(p)
    }
}

impl<T: fmt::Display> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}: {v}")?;
        }
        write!(f, "}}")
    }
}
