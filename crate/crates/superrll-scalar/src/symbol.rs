//! Commuting symbols and the registry that names them.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::ScalarError;

/// Maximum number of symbols a registry can hold; monomials store one exponent per slot.
pub const MAX_SYMBOLS: usize = 16;

/// Index of a registered symbol. Index order is the lexicographic tie-break of the monomial order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub(crate) u8);

impl Symbol {
    pub const P: Symbol = Symbol(0);
    pub const Q: Symbol = Symbol(1);
    pub const GAMMA: Symbol = Symbol(2);
    pub const GAMMA1: Symbol = Symbol(3);
    pub const GAMMA2: Symbol = Symbol(4);
    pub const GAMMA3: Symbol = Symbol(5);
    pub const Z: Symbol = Symbol(6);
    pub const W: Symbol = Symbol(7);
    pub const X: Symbol = Symbol(8);
    pub const U: Symbol = Symbol(9);
    pub const X1: Symbol = Symbol(10);
    pub const X2: Symbol = Symbol(11);
    pub const X3: Symbol = Symbol(12);
    pub const X4: Symbol = Symbol(13);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<Symbol> {
        if i < registry().len() {
            Some(Symbol(i as u8))
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        registry().name(self)
    }

    pub fn by_name(name: &str) -> Option<Symbol> {
        registry().lookup(name)
    }

    /// Inhomogeneity symbol `x_k` for `k` in `1..=4`.
    pub fn site(k: usize) -> Option<Symbol> {
        match k {
            1 => Some(Symbol::X1),
            2 => Some(Symbol::X2),
            3 => Some(Symbol::X3),
            4 => Some(Symbol::X4),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered alphabet of distinct symbol names.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    names: Vec<&'static str>,
    index: HashMap<&'static str, u8>,
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    pub fn register(&mut self, name: &str) -> Result<Symbol, ScalarError> {
        if !is_identifier(name) {
            return Err(ScalarError::BadSymbol(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(ScalarError::DuplicateSymbol(name.to_string()));
        }
        if self.names.len() >= MAX_SYMBOLS {
            return Err(ScalarError::RegistryFull);
        }
        let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
        let id = self.names.len() as u8;
        self.names.push(leaked);
        self.index.insert(leaked, id);
        Ok(Symbol(id))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Symbol) -> &'static str {
        self.names[s.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).map(|&i| Symbol(i))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u8))
    }
}

/// Names of the process-wide alphabet, in index order.
pub const ALPHABET: [&str; 14] = [
    "p", "q", "gamma", "gamma1", "gamma2", "gamma3", "z", "w", "x", "u", "x1", "x2", "x3", "x4",
];

/// The process-wide registry. Built once, read-only afterwards.
pub fn registry() -> &'static Registry {
    static GLOBAL: OnceLock<Registry> = OnceLock::new();
    GLOBAL.get_or_init(|| {
        let mut r = Registry::new();
        for n in ALPHABET {
            r.register(n).expect("static alphabet is duplicate-free");
        }
        r
    })
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
