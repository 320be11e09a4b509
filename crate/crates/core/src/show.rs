//! Compact human-readable rendering for nested values in law witnesses.

use std::collections::BTreeSet;

pub trait Show {
    fn show(&self) -> String;
}

impl Show for String {
    fn show(&self) -> String {
        self.clone()
    }
}

impl Show for &str {
    fn show(&self) -> String {
        (*self).to_string()
    }
}

impl Show for usize {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for u8 {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl Show for () {
    fn show(&self) -> String {
        "*".into()
    }
}

/// `None` renders as `⊥`.
impl<A: Show> Show for Option<A> {
    fn show(&self) -> String {
        match self {
            None => "⊥".into(),
            Some(a) => a.show(),
        }
    }
}

impl<A: Show, B: Show> Show for (A, B) {
    fn show(&self) -> String {
        format!("({},{})", self.0.show(), self.1.show())
    }
}

impl<A: Show> Show for BTreeSet<A> {
    fn show(&self) -> String {
        let parts: Vec<String> = self.iter().map(Show::show).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl<A: Show> Show for Vec<A> {
    fn show(&self) -> String {
        let parts: Vec<String> = self.iter().map(Show::show).collect();
        format!("[{}]", parts.join(", "))
    }
}
