//! Finite ℚ-linear combinations over an ordered key set.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::vec::Vec;
use core::fmt;

use crate::rat::Rat;

/// A formal sum `Σ c_k · k` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin<K: Ord>(BTreeMap<K, Rat>);

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin(BTreeMap::new())
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn new() -> Self {
        Lin(BTreeMap::new())
    }

    pub fn single(k: K, c: Rat) -> Self {
        let mut l = Lin::new();
        l.add_term(k, c);
        l
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, k: K, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(k) {
            btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<K>, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_lin(&mut self, other: &Lin<K>) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub_lin(&mut self, other: &Lin<K>) {
        for (k, v) in other.iter() {
            self.add_term(k.clone(), -v);
        }
    }

    pub fn scaled(&self, c: &Rat) -> Lin<K> {
        if c.is_zero() {
            return Lin::new();
        }
        Lin(self.0.iter().map(|(k, v)| (k.clone(), v * c)).collect())
    }

    pub fn neg(&self) -> Lin<K> {
        Lin(self.0.iter().map(|(k, v)| (k.clone(), -v)).collect())
    }

    pub fn coeff(&self, k: &K) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rat> {
        self.0.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rat> {
        self.0.keys()
    }

    pub fn into_vec(self) -> Vec<(K, Rat)> {
        self.0.into_iter().collect()
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Lin<L>) -> Lin<L> {
        let mut out = Lin::new();
        for (k, c) in self.iter() {
            out.add_scaled(&f(k), c);
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Lin<K> {
        Lin(self.0.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), v.clone())).collect())
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Lin<K>>) -> Lin<K>
    where
        K: 'a,
    {
        let mut out = Lin::new();
        for l in items {
            out.add_lin(l);
        }
        out
    }

    pub fn difference(&self, other: &Lin<K>) -> Lin<K> {
        let mut d = self.clone();
        d.sub_lin(other);
        d
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rat)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rat)>>(iter: I) -> Self {
        let mut l = Lin::new();
        for (k, c) in iter {
            l.add_term(k, c);
        }
        l
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Lin<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·{:?}", c, k)?;
        }
        Ok(())
    }
}

impl<'a, K: Ord> IntoIterator for &'a Lin<K> {
    type Item = (&'a K, &'a Rat);
    type IntoIter = btree_map::Iter<'a, K, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
