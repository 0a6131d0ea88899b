use std::fmt;
use std::sync::Arc;

/// An ordered, named variable set. Values built over different sets never mix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

pub type Vars = Arc<VarSet>;

impl VarSet {
    pub fn new<I, S>(names: I) -> Vars
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Arc::new(VarSet {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    /// `prefix1..prefixN` followed by `other1..otherM`.
    pub fn indexed(prefix: &str, n: usize, other: &str, m: usize) -> Vars {
        let names = (1..=n)
            .map(|i| format!("{prefix}{i}"))
            .chain((1..=m).map(|i| format!("{other}{i}")));
        VarSet::new(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(","))
    }
}

pub(crate) fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
