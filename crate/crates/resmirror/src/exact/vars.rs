use crate::error::{Error, Result};

/// Index into a [`VarSet`].
pub type VarId = usize;

/// Ordered list of unique variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut set = VarSet::default();
        for n in names {
            set.push(n)?;
        }
        Ok(set)
    }

    /// Appends a name and returns its id.
    pub fn push(&mut self, name: impl Into<String>) -> Result<VarId> {
        let name = name.into();
        if self.names.contains(&name) {
            return Err(Error::InvalidArgument(format!("duplicate variable {name}")));
        }
        self.names.push(name);
        Ok(self.names.len() - 1)
    }

    pub fn id(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}
