/// A random variable of a network section: its value is drawn from
/// `mfunc` applied to the values of its parents.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkVar {
    pub name: String,
    pub sort: String,
    pub parents: Vec<String>,
    pub mfunc: String,
    /// Whether `mfunc` was installed from inline rows.
    pub synthetic: bool,
}

/// Variables in declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Network {
    pub vars: Vec<NetworkVar>,
}

impl Network {
    pub fn var(&self, name: &str) -> Option<&NetworkVar> {
        self.vars.iter().find(|v| v.name == name)
    }
}
