use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, QuadraticExtension};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Polynomial,
    /// Negative exponents allowed.
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

/// Ordered variable table. Exponent vectors, the term order and the
/// serialization order all follow this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarTable {
    vars: Vec<Variable>,
}

impl VarTable {
    pub fn new(vars: Vec<Variable>) -> Result<Self, AlgebraError> {
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(&v.name) {
                return Err(AlgebraError::BadVariableName(v.name.clone()));
            }
            if vars[..i].iter().any(|u| u.name == v.name) {
                return Err(AlgebraError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Self { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn get(&self, idx: usize) -> &Variable {
        &self.vars[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A coefficient domain plus a variable table. Polynomials hold an
/// `Arc<Ring>`; two polynomials can be combined only when their rings agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: VarTable,
    ext: Option<QuadraticExtension>,
}

impl Ring {
    pub fn new(vars: VarTable, ext: Option<QuadraticExtension>) -> Arc<Self> {
        Arc::new(Self { vars, ext })
    }

    /// Convenience constructor: `laurent` lists the names that admit
    /// negative exponents.
    pub fn with_names(
        names: &[&str],
        laurent: &[&str],
        ext: Option<QuadraticExtension>,
    ) -> Result<Arc<Self>, AlgebraError> {
        let vars = names
            .iter()
            .map(|n| Variable {
                name: (*n).to_string(),
                kind: if laurent.contains(n) { VarKind::Laurent } else { VarKind::Polynomial },
            })
            .collect();
        Ok(Self::new(VarTable::new(vars)?, ext))
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn ext(&self) -> Option<&QuadraticExtension> {
        self.ext.as_ref()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vars.index_of(name).ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        if let Some(e) = &self.ext {
            write!(f, "(√{})", e.d())?;
        }
        write!(f, "[")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v.name)?;
            if v.kind == VarKind::Laurent {
                write!(f, "^±1")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(Ring::with_names(&["x", "x"], &[], None).is_err());
        assert!(Ring::with_names(&["1x"], &[], None).is_err());
    }

    #[test]
    fn display_marks_laurent() {
        let r = Ring::with_names(&["u1", "v1"], &["u1"], None).unwrap();
        assert_eq!(r.to_string(), "Q[u1^±1, v1]");
    }
}
