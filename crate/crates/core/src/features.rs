//! Feature algebra: attributes, values, consistent feature sets, complete
//! object specifications and the `clash` function.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// The reserved token for the unknown value.
pub const UNKNOWN: &str = "?";

const RESERVED_CHARS: [char; 5] = ['=', '{', '}', ':', '#'];

/// Whether `s` is a legal bare token (attribute, value or class name).
pub fn is_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || RESERVED_CHARS.contains(&c))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("invalid token {0:?}")]
    InvalidToken(String),
    #[error("\"?\" is reserved for the unknown value and cannot be a known value")]
    ReservedValue,
    #[error("attribute {attribute} has conflicting values {first} and {second}")]
    Conflict {
        attribute: Attribute,
        first: Value,
        second: Value,
    },
    #[error("attribute {0} is outside the attribute universe")]
    OutsideUniverse(Attribute),
}

/// An attribute name. A `/` inside the name is mnemonic only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attribute(String);

impl Attribute {
    pub fn new(name: impl Into<String>) -> Result<Self, FeatureError> {
        let name = name.into();
        if is_token(&name) {
            Ok(Attribute(name))
        } else {
            Err(FeatureError::InvalidToken(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Known(String),
    Unknown,
}

impl Value {
    pub fn known(symbol: impl Into<String>) -> Result<Self, FeatureError> {
        let symbol = symbol.into();
        if symbol == UNKNOWN {
            Err(FeatureError::ReservedValue)
        } else if is_token(&symbol) {
            Ok(Value::Known(symbol))
        } else {
            Err(FeatureError::InvalidToken(symbol))
        }
    }

    /// Parses a value token, mapping `?` to [`Value::Unknown`].
    pub fn parse(token: &str) -> Result<Self, FeatureError> {
        if token == UNKNOWN {
            Ok(Value::Unknown)
        } else {
            Value::known(token)
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, Value::Known(_))
    }

    pub fn as_str(&self) -> &str {
        match self {
            Value::Known(s) => s,
            Value::Unknown => UNKNOWN,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Feature {
    pub attribute: Attribute,
    pub value: Value,
}

impl Feature {
    pub fn new(attribute: Attribute, value: Value) -> Self {
        Feature { attribute, value }
    }

    /// Convenience constructor from raw tokens (`"?"` is the unknown value).
    pub fn parse(attribute: &str, value: &str) -> Result<Self, FeatureError> {
        Ok(Feature::new(
            Attribute::new(attribute)?,
            Value::parse(value)?,
        ))
    }

    pub fn clashes_with(&self, other: &Feature) -> bool {
        self.attribute == other.attribute && self.value != other.value
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.attribute, self.value)
    }
}

/// An internally consistent feature set: at most one value per attribute.
/// Iteration order is attribute order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FeatureSet {
    entries: BTreeMap<Attribute, Value>,
}

impl FeatureSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, attribute: &Attribute) -> Option<&Value> {
        self.entries.get(attribute)
    }

    pub fn contains(&self, attribute: &Attribute, value: &Value) -> bool {
        self.entries.get(attribute) == Some(value)
    }

    pub fn contains_feature(&self, feature: &Feature) -> bool {
        self.contains(&feature.attribute, &feature.value)
    }

    pub fn contains_attribute(&self, attribute: &Attribute) -> bool {
        self.entries.contains_key(attribute)
    }

    /// Adds a feature. Re-adding an identical feature is a no-op; adding a
    /// different value for a present attribute is an error.
    pub fn insert(&mut self, feature: Feature) -> Result<(), FeatureError> {
        match self.entries.get(&feature.attribute) {
            Some(existing) if *existing != feature.value => Err(FeatureError::Conflict {
                first: existing.clone(),
                second: feature.value,
                attribute: feature.attribute,
            }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(feature.attribute, feature.value);
                Ok(())
            }
        }
    }

    /// Removes whatever value `attribute` has.
    pub fn remove(&mut self, attribute: &Attribute) -> Option<Value> {
        self.entries.remove(attribute)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Attribute, &Value)> + '_ {
        self.entries.iter()
    }

    pub fn attributes(&self) -> impl Iterator<Item = &Attribute> + '_ {
        self.entries.keys()
    }

    pub fn features(&self) -> impl Iterator<Item = Feature> + '_ {
        self.entries
            .iter()
            .map(|(a, v)| Feature::new(a.clone(), v.clone()))
    }

    /// Features of `self` not present (with the same value) in `other`.
    pub fn difference(&self, other: &FeatureSet) -> FeatureSet {
        self.entries
            .iter()
            .filter(|(a, v)| !other.contains(a, v))
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect()
    }

    /// Adds every feature of `other`; both sets must agree where they overlap.
    pub fn extend_consistent(&mut self, other: &FeatureSet) -> Result<(), FeatureError> {
        for f in other.features() {
            self.insert(f)?;
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.entries.iter().all(|(a, v)| other.contains(a, v))
    }
}

/// Builds from `(attribute, value)` pairs, last write wins. Only for pairs
/// already known to be consistent; use [`validate_consistent`] otherwise.
impl FromIterator<(Attribute, Value)> for FeatureSet {
    fn from_iter<I: IntoIterator<Item = (Attribute, Value)>>(iter: I) -> Self {
        FeatureSet {
            entries: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (a, v) in &self.entries {
            write!(f, "[{a},{v}]")?;
        }
        f.write_str("}")
    }
}

/// Builds a consistent set, deduplicating identical pairs.
pub fn validate_consistent<I>(entries: I) -> Result<FeatureSet, FeatureError>
where
    I: IntoIterator<Item = Feature>,
{
    let mut set = FeatureSet::new();
    for f in entries {
        set.insert(f)?;
    }
    Ok(set)
}

/// The complete feature set F of an object: explicit features plus an
/// implicit `?` for every other attribute of the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectSpec {
    name: String,
    explicit: FeatureSet,
    universe: BTreeSet<Attribute>,
}

impl ObjectSpec {
    /// Completes `explicit` over `universe`. Fails if an explicit attribute
    /// lies outside the universe.
    pub fn complete(
        name: impl Into<String>,
        explicit: FeatureSet,
        universe: BTreeSet<Attribute>,
    ) -> Result<Self, FeatureError> {
        if let Some(a) = explicit.attributes().find(|a| !universe.contains(*a)) {
            return Err(FeatureError::OutsideUniverse(a.clone()));
        }
        Ok(ObjectSpec {
            name: name.into(),
            explicit,
            universe,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn explicit(&self) -> &FeatureSet {
        &self.explicit
    }

    pub fn universe(&self) -> &BTreeSet<Attribute> {
        &self.universe
    }

    /// F's value for `attribute`. Attributes outside the universe are
    /// unknown as well.
    pub fn value_of(&self, attribute: &Attribute) -> &Value {
        self.explicit.get(attribute).unwrap_or(&Value::Unknown)
    }

    /// F_non-?: the known features.
    pub fn known(&self) -> FeatureSet {
        self.explicit
            .iter()
            .filter(|(_, v)| v.is_known())
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect()
    }

    pub fn known_count(&self) -> usize {
        self.explicit.iter().filter(|(_, v)| v.is_known()).count()
    }

    /// The completed F, materialised over the universe.
    pub fn completed(&self) -> FeatureSet {
        self.universe
            .iter()
            .map(|a| (a.clone(), self.value_of(a).clone()))
            .collect()
    }
}

/// Anything that can sit on the left of `clash`: a plain set, or an
/// object whose missing attributes are implicitly unknown.
pub trait FeatureLookup {
    /// The value for `attribute`, or `None` when there is no feature for it.
    fn lookup(&self, attribute: &Attribute) -> Option<&Value>;
}

impl FeatureLookup for FeatureSet {
    fn lookup(&self, attribute: &Attribute) -> Option<&Value> {
        self.get(attribute)
    }
}

impl FeatureLookup for ObjectSpec {
    fn lookup(&self, attribute: &Attribute) -> Option<&Value> {
        Some(self.value_of(attribute))
    }
}

/// The features of `a` that conflict with a feature of `b`: same attribute,
/// different value.
pub fn clash<A: FeatureLookup + ?Sized>(a: &A, b: &FeatureSet) -> FeatureSet {
    b.iter()
        .filter_map(|(attr, bv)| match a.lookup(attr) {
            Some(av) if av != bv => Some((attr.clone(), av.clone())),
            _ => None,
        })
        .collect()
}

/// `clash(a, ∪sets)` where the union may itself be inconsistent: a feature
/// of `a` clashes if any of the sets offers a different value for it.
pub fn clash_union<'s, A, I>(a: &A, sets: I) -> FeatureSet
where
    A: FeatureLookup + ?Sized,
    I: IntoIterator<Item = &'s FeatureSet>,
{
    let mut out = FeatureSet::new();
    for set in sets {
        for (attr, value) in clash(a, set).iter() {
            out.entries.insert(attr.clone(), value.clone());
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn fs(pairs: &[(&str, &str)]) -> FeatureSet {
        validate_consistent(pairs.iter().map(|(a, v)| Feature::parse(a, v).unwrap())).unwrap()
    }

    fn attrs(names: &[&str]) -> BTreeSet<Attribute> {
        names.iter().map(|n| Attribute::new(*n).unwrap()).collect()
    }

    #[test]
    fn clash_on_worked_example() {
        let a = fs(&[("a1", "v1"), ("a2", "v2"), ("a3", "v3"), ("a4", "v4")]);
        let b = fs(&[
            ("a1", "v5"),
            ("a2", "v2"),
            ("a3", "v20"),
            ("a7", "v7"),
            ("a9", "v12"),
        ]);
        assert_eq!(clash(&a, &b), fs(&[("a1", "v1"), ("a3", "v3")]));
    }

    #[test]
    fn clash_with_empty_is_empty() {
        let a = fs(&[("a", "1"), ("b", "?")]);
        assert!(clash(&a, &FeatureSet::new()).is_empty());
    }

    #[test]
    fn object_implicit_unknown_clashes() {
        let f = ObjectSpec::complete("o", fs(&[("a1", "v1")]), attrs(&["a1", "a2"])).unwrap();
        assert_eq!(clash(&f, &fs(&[("a2", "v9")])), fs(&[("a2", "?")]));
    }

    #[test]
    fn complete_examples() {
        let f = ObjectSpec::complete("o", fs(&[("a", "v")]), attrs(&["a"])).unwrap();
        assert_eq!(f.completed(), fs(&[("a", "v")]));
        let f = ObjectSpec::complete("o", FeatureSet::new(), attrs(&["a", "b"])).unwrap();
        assert_eq!(f.completed(), fs(&[("a", "?"), ("b", "?")]));
        assert_eq!(f.known_count(), 0);
    }

    #[test]
    fn complete_rejects_attribute_outside_universe() {
        let err = ObjectSpec::complete("o", fs(&[("z", "v")]), attrs(&["a"])).unwrap_err();
        assert_eq!(
            err,
            FeatureError::OutsideUniverse(Attribute::new("z").unwrap())
        );
        assert!(err.to_string().contains('z'));
    }

    #[test]
    fn validate_consistent_cases() {
        assert_eq!(
            validate_consistent(vec![Feature::parse("a", "v").unwrap(); 2]).unwrap(),
            fs(&[("a", "v")])
        );
        let err = validate_consistent(vec![
            Feature::parse("a", "v1").unwrap(),
            Feature::parse("a", "v2").unwrap(),
        ])
        .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains('a') && msg.contains("v1") && msg.contains("v2"),
            "{msg}"
        );
        let s = validate_consistent(vec![
            Feature::parse("a", "v").unwrap(),
            Feature::parse("b", "?").unwrap(),
        ])
        .unwrap();
        assert_eq!(s.get(&Attribute::new("b").unwrap()), Some(&Value::Unknown));
    }

    #[test]
    fn token_rules() {
        assert!(Attribute::new("subj/cat").is_ok());
        for bad in ["", "a b", "a=b", "a{", "}", "a:b", "#x"] {
            assert!(Attribute::new(bad).is_err(), "{bad:?}");
        }
        assert_eq!(Value::known("?"), Err(FeatureError::ReservedValue));
        assert_eq!(Value::parse("?"), Ok(Value::Unknown));
        assert_ne!(
            Attribute::new("subj/cat").unwrap(),
            Attribute::new("subj").unwrap()
        );
    }

    fn arb_set() -> impl Strategy<Value = FeatureSet> {
        proptest::collection::btree_map(0..12u8, 0..4u8, 0..=20).prop_map(|m| {
            m.into_iter()
                .map(|(a, v)| {
                    let value = if v == 0 {
                        Value::Unknown
                    } else {
                        Value::Known(format!("v{v}"))
                    };
                    (Attribute(format!("a{a}")), value)
                })
                .collect()
        })
    }

    /// Literal all-pairs definition.
    fn clash_all_pairs(a: &FeatureSet, b: &FeatureSet) -> FeatureSet {
        let mut out = FeatureSet::new();
        for fa in a.features() {
            for fb in b.features() {
                if fa.clashes_with(&fb) {
                    out.insert(fa.clone()).unwrap();
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn clash_matches_all_pairs(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(clash(&a, &b), clash_all_pairs(&a, &b));
        }

        #[test]
        fn clash_is_subset_and_exact(a in arb_set(), b in arb_set()) {
            let c = clash(&a, &b);
            prop_assert!(c.is_subset(&a));
            for (attr, v) in a.iter() {
                let in_clash = c.contains(attr, v);
                let differs = b.get(attr).is_some_and(|bv| bv != v);
                prop_assert_eq!(in_clash, differs);
            }
        }

        #[test]
        fn clash_support_is_symmetric(a in arb_set(), b in arb_set()) {
            let ab = clash(&a, &b);
            let ba = clash(&b, &a);
            for (attr, _) in ab.iter() {
                prop_assert!(ba.contains(attr, b.get(attr).unwrap()));
            }
            prop_assert_eq!(ab.len(), ba.len());
        }
    }
}
