use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Result, SsbError};

/// Anything that can be looked up by a stable name.
pub trait Named {
    fn name(&self) -> &str;
}

/// Name-keyed collection of interchangeable strategies.
///
/// Backed by a `BTreeMap` so that listing order is stable across runs.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `item` under its own name, returning any entry it replaced.
    pub fn register(&mut self, item: Arc<T>) -> Option<Arc<T>> {
        self.entries.insert(item.name().to_string(), item)
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| SsbError::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<T>> {
        self.entries.values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dummy(&'static str);
    impl Named for Dummy {
        fn name(&self) -> &str {
            self.0
        }
    }

    #[test]
    fn lookup_and_listing() {
        let mut reg: Registry<Dummy> = Registry::new("dummy");
        assert!(reg.register(Arc::new(Dummy("b"))).is_none());
        reg.register(Arc::new(Dummy("a")));
        assert!(reg.register(Arc::new(Dummy("a"))).is_some());
        assert_eq!(reg.names(), vec!["a", "b"]);
        assert_eq!(reg.get("b").unwrap().name(), "b");
        let err = reg.get("zzz").err().unwrap().to_string();
        assert!(err.contains("unknown dummy `zzz`"), "{err}");
        assert!(err.contains("a, b"), "{err}");
    }
}
