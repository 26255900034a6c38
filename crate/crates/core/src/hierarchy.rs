//! Hierarchy model and compilation.
//!
//! A [`Hierarchy`] is a list of class declarations with local features and
//! ordered default-inheritance parent links. Compiling it pushes every
//! feature down the links until each class explicitly lists everything
//! that can be inherited from it; the result, a [`CompiledSet`], is the
//! set of candidate superclasses that insertion works on.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::features::{is_token, Attribute, Feature, FeatureSet, ObjectSpec, Value};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub parents: Vec<String>,
    pub local: FeatureSet,
}

impl ClassDecl {
    pub fn new(name: impl Into<String>, parents: &[&str], local: FeatureSet) -> Self {
        ClassDecl {
            name: name.into(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
            local,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("duplicate class name {0}")]
    DuplicateClass(String),
    #[error("invalid class name {0:?}")]
    InvalidName(String),
    #[error("class {class} declares an unknown value for {attribute}; only objects may contain ?-features")]
    UnknownInClass { class: String, attribute: Attribute },
}

/// Classes in declaration order. Names are unique and no class carries a
/// `?` feature; links may still dangle or form cycles (see [`validate`]).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hierarchy {
    classes: Vec<ClassDecl>,
    index: HashMap<String, usize>,
}

impl Hierarchy {
    pub fn new(classes: Vec<ClassDecl>) -> Result<Self, HierarchyError> {
        let mut index = HashMap::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            if !is_token(&c.name) {
                return Err(HierarchyError::InvalidName(c.name.clone()));
            }
            if let Some((a, _)) = c.local.iter().find(|(_, v)| !v.is_known()) {
                return Err(HierarchyError::UnknownInClass {
                    class: c.name.clone(),
                    attribute: a.clone(),
                });
            }
            if index.insert(c.name.clone(), i).is_some() {
                return Err(HierarchyError::DuplicateClass(c.name.clone()));
            }
        }
        Ok(Hierarchy { classes, index })
    }

    pub fn classes(&self) -> &[ClassDecl] {
        &self.classes
    }

    pub fn get(&self, name: &str) -> Option<&ClassDecl> {
        self.index.get(name).map(|&i| &self.classes[i])
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Every attribute mentioned by some class.
    pub fn attributes(&self) -> impl Iterator<Item = &Attribute> + '_ {
        self.classes.iter().flat_map(|c| c.local.attributes())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnresolvedParent {
    pub class: String,
    pub parent: String,
}

/// A class inheriting conflicting values for an attribute it does not
/// override itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambiguity {
    pub class: String,
    pub attribute: Attribute,
    /// `(parent, value)` for every parent offering the attribute.
    pub offers: Vec<(String, Value)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub cycles: Vec<Vec<String>>,
    pub unresolved: Vec<UnresolvedParent>,
    pub ambiguities: Vec<Ambiguity>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty() && self.unresolved.is_empty() && self.ambiguities.is_empty()
    }

    /// One diagnostic per line.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.cycles {
            let mut path = c.clone();
            path.push(c[0].clone());
            out.push(format!("cycle: {}", path.join(" -> ")));
        }
        for u in &self.unresolved {
            out.push(format!(
                "unresolved parent: class {} names undeclared parent {}",
                u.class, u.parent
            ));
        }
        for a in &self.ambiguities {
            let offers: Vec<String> = a.offers.iter().map(|(p, v)| format!("{p}={v}")).collect();
            out.push(format!(
                "ambiguity: class {} inherits conflicting values for {} ({})",
                a.class,
                a.attribute,
                offers.join(", ")
            ));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.diagnostics() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Regular,
    Singleton,
}

/// A class reduced to the features inheritable from it.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledClass<W = Ratio<i64>> {
    pub name: String,
    pub features: FeatureSet,
    /// Per-attribute weights, present only in weighted compilations.
    pub weights: Option<BTreeMap<Attribute, W>>,
    pub origin: Origin,
}

impl<W: Scalar> CompiledClass<W> {
    pub fn weight(&self, attribute: &Attribute) -> W {
        self.weights
            .as_ref()
            .and_then(|w| w.get(attribute).cloned())
            .unwrap_or_else(W::one)
    }

    pub fn is_singleton(&self) -> bool {
        self.origin == Origin::Singleton
    }
}

/// The candidate superclasses N: regular classes in declaration order,
/// then singletons in attribute order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledSet<W = Ratio<i64>> {
    classes: Vec<CompiledClass<W>>,
    weighted: bool,
}

impl<W: Scalar> CompiledSet<W> {
    /// Builds N from arbitrary classes, restoring the canonical order
    /// (regular classes keep their relative order).
    pub fn from_classes(classes: Vec<CompiledClass<W>>, weighted: bool) -> Self {
        let (mut regular, mut singles): (Vec<_>, Vec<_>) = classes
            .into_iter()
            .partition(|c| c.origin == Origin::Regular);
        singles.sort_by(|a, b| a.features.iter().cmp(b.features.iter()));
        regular.append(&mut singles);
        CompiledSet {
            classes: regular,
            weighted,
        }
    }

    pub fn classes(&self) -> &[CompiledClass<W>] {
        &self.classes
    }

    pub fn get(&self, name: &str) -> Option<&CompiledClass<W>> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn regular_count(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| c.origin == Origin::Regular)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error("hierarchy is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error(
        "epsilon {epsilon} too large for inheritance depth {max_depth}: need epsilon < {bound}"
    )]
    EpsilonTooLarge {
        epsilon: String,
        max_depth: usize,
        bound: String,
    },
}

struct Analysis {
    report: ValidationReport,
    /// Per class (declaration index): attribute -> (value, links traversed).
    /// `None` for classes on or below a cycle.
    compiled: Vec<Option<BTreeMap<Attribute, (Value, usize)>>>,
    depth: Vec<usize>,
}

fn analyze(h: &Hierarchy) -> Analysis {
    let n = h.classes.len();
    let mut report = ValidationReport::default();

    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(n);
    for c in &h.classes {
        let mut resolved = Vec::new();
        for p in &c.parents {
            match h.index.get(p) {
                Some(&i) => resolved.push(i),
                None => report.unresolved.push(UnresolvedParent {
                    class: c.name.clone(),
                    parent: p.clone(),
                }),
            }
        }
        edges.push(resolved);
    }

    report.cycles = find_cycles(h, &edges);

    // Compile in dependency order; a class is compiled once all resolved
    // parents are. Whatever never becomes ready sits on or below a cycle.
    let mut compiled: Vec<Option<BTreeMap<Attribute, (Value, usize)>>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut pending: Vec<usize> = (0..n).collect();
    loop {
        let before = pending.len();
        let mut still = Vec::new();
        for &i in &pending {
            if edges[i].iter().all(|&p| compiled[p].is_some()) {
                let (map, ambiguities) = compile_one(h, i, &edges[i], &compiled);
                report.ambiguities.extend(ambiguities);
                depth[i] = edges[i].iter().map(|&p| depth[p] + 1).max().unwrap_or(0);
                compiled[i] = Some(map);
            } else {
                still.push(i);
            }
        }
        pending = still;
        if pending.is_empty() || pending.len() == before {
            break;
        }
    }
    report
        .ambiguities
        .sort_by_key(|a| (h.index[&a.class], a.attribute.clone()));

    Analysis {
        report,
        compiled,
        depth,
    }
}

fn compile_one(
    h: &Hierarchy,
    i: usize,
    parents: &[usize],
    compiled: &[Option<BTreeMap<Attribute, (Value, usize)>>],
) -> (BTreeMap<Attribute, (Value, usize)>, Vec<Ambiguity>) {
    let class = &h.classes[i];
    let mut map: BTreeMap<Attribute, (Value, usize)> = BTreeMap::new();
    let mut offers: BTreeMap<Attribute, Vec<(String, Value)>> = BTreeMap::new();
    for &p in parents {
        let parent = compiled[p].as_ref().expect("parent compiled first");
        for (attr, (value, links)) in parent {
            if class.local.contains_attribute(attr) {
                continue;
            }
            offers
                .entry(attr.clone())
                .or_default()
                .push((h.classes[p].name.clone(), value.clone()));
            match map.get_mut(attr) {
                None => {
                    map.insert(attr.clone(), (value.clone(), links + 1));
                }
                // Same value along several paths: keep the shortest path.
                Some((v, l)) if v == value => *l = (*l).min(links + 1),
                // Conflict: reported below, first parent's value kept.
                Some(_) => {}
            }
        }
    }
    let ambiguities = offers
        .into_iter()
        .filter(|(_, o)| o.iter().any(|(_, v)| *v != o[0].1))
        .map(|(attribute, offers)| Ambiguity {
            class: class.name.clone(),
            attribute,
            offers,
        })
        .collect();
    for (attr, value) in class.local.iter() {
        map.insert(attr.clone(), (value.clone(), 0));
    }
    (map, ambiguities)
}

fn find_cycles(h: &Hierarchy, edges: &[Vec<usize>]) -> Vec<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    fn visit(
        i: usize,
        edges: &[Vec<usize>],
        marks: &mut [Mark],
        stack: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        marks[i] = Mark::Grey;
        stack.push(i);
        for &p in &edges[i] {
            match marks[p] {
                Mark::White => visit(p, edges, marks, stack, found),
                Mark::Grey => {
                    let start = stack
                        .iter()
                        .rposition(|&s| s == p)
                        .expect("grey node on stack");
                    found.push(stack[start..].to_vec());
                }
                Mark::Black => {}
            }
        }
        stack.pop();
        marks[i] = Mark::Black;
    }

    let mut marks = vec![Mark::White; edges.len()];
    let mut found = Vec::new();
    for i in 0..edges.len() {
        if marks[i] == Mark::White {
            visit(i, edges, &mut marks, &mut Vec::new(), &mut found);
        }
    }
    found
        .into_iter()
        .map(|c| c.into_iter().map(|i| h.classes[i].name.clone()).collect())
        .collect()
}

/// Lists cycles, dangling parent names and inheritance ambiguities. An
/// empty report means the hierarchy can be compiled.
pub fn validate(h: &Hierarchy) -> ValidationReport {
    analyze(h).report
}

/// Longest chain of inheritance links. Only meaningful for valid hierarchies.
pub fn max_depth(h: &Hierarchy) -> usize {
    analyze(h).depth.into_iter().max().unwrap_or(0)
}

fn compiled_or_err(h: &Hierarchy) -> Result<Analysis, CompileError> {
    let analysis = analyze(h);
    if analysis.report.is_empty() {
        Ok(analysis)
    } else {
        Err(CompileError::Invalid(analysis.report))
    }
}

fn build<W: Scalar>(h: &Hierarchy, analysis: Analysis, epsilon: Option<&W>) -> CompiledSet<W> {
    let classes = h
        .classes
        .iter()
        .zip(analysis.compiled)
        .map(|(decl, map)| {
            let map = map.expect("valid hierarchy compiles every class");
            let weights = epsilon.map(|eps| {
                map.iter()
                    .map(|(a, (_, links))| {
                        (a.clone(), W::one() + eps.clone() * W::from_count(*links))
                    })
                    .collect()
            });
            CompiledClass {
                name: decl.name.clone(),
                features: map.into_iter().map(|(a, (v, _))| (a, v)).collect(),
                weights,
                origin: Origin::Regular,
            }
        })
        .collect();
    CompiledSet {
        classes,
        weighted: epsilon.is_some(),
    }
}

/// Compiles every class down to its inheritable feature set.
pub fn compile_out<W: Scalar>(h: &Hierarchy) -> Result<CompiledSet<W>, CompileError> {
    let analysis = compiled_or_err(h)?;
    Ok(build(h, analysis, None))
}

/// Like [`compile_out`], additionally weighting each feature by
/// `1 + epsilon * links` where `links` counts the inheritance links between
/// the declaring class and the compiled class. `epsilon * max_depth` must
/// stay below 1.
pub fn compile_out_weighted<W: Scalar>(
    h: &Hierarchy,
    epsilon: W,
) -> Result<CompiledSet<W>, CompileError> {
    if epsilon <= W::zero() {
        return Err(CompileError::NonPositiveEpsilon);
    }
    let analysis = compiled_or_err(h)?;
    let depth = analysis.depth.iter().copied().max().unwrap_or(0);
    if depth > 0 && epsilon.clone() * W::from_count(depth) >= W::one() {
        return Err(CompileError::EpsilonTooLarge {
            epsilon: epsilon.to_string(),
            max_depth: depth,
            bound: (W::one() / W::from_count(depth)).to_string(),
        });
    }
    Ok(build(h, analysis, Some(&epsilon)))
}

/// `1 / (16 * (1 + max depth) * (1 + largest compiled class))`: the total
/// weight bonus of any candidate stays below 1/16, so weights can only
/// break exact ties between unweighted payoffs.
pub fn default_epsilon<W: Scalar>(h: &Hierarchy) -> Result<W, CompileError> {
    let analysis = compiled_or_err(h)?;
    let depth = analysis.depth.iter().copied().max().unwrap_or(0);
    let widest = analysis
        .compiled
        .iter()
        .map(|m| m.as_ref().map_or(0, |m| m.len()))
        .max()
        .unwrap_or(0);
    Ok(W::one() / W::from_count(16 * (1 + depth) * (1 + widest)))
}

/// Name of the synthetic singleton class offering `attribute`.
pub fn singleton_name(attribute: &Attribute) -> String {
    format!("$single({attribute})")
}

/// Adds a singleton class for every known feature of `object` that does not
/// have one yet.
pub fn augment_singletons<W: Scalar>(n: &CompiledSet<W>, object: &ObjectSpec) -> CompiledSet<W> {
    let mut classes = n.classes.clone();
    for (attr, value) in object.explicit().iter().filter(|(_, v)| v.is_known()) {
        let exists = n
            .classes
            .iter()
            .any(|c| c.is_singleton() && c.features.len() == 1 && c.features.contains(attr, value));
        if exists {
            continue;
        }
        let mut features = FeatureSet::new();
        features
            .insert(Feature::new(attr.clone(), value.clone()))
            .expect("fresh set");
        classes.push(CompiledClass {
            name: singleton_name(attr),
            features,
            weights: n
                .weighted
                .then(|| BTreeMap::from([(attr.clone(), W::one())])),
            origin: Origin::Singleton,
        });
    }
    CompiledSet::from_classes(classes, n.weighted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::tests::fs;
    use crate::Rational;
    use std::collections::BTreeSet;

    fn class(name: &str, parents: &[&str], local: &[(&str, &str)]) -> ClassDecl {
        ClassDecl::new(name, parents, fs(local))
    }

    fn compiled(h: &Hierarchy) -> CompiledSet {
        compile_out(h).unwrap()
    }

    #[test]
    fn single_root_is_valid() {
        let h = Hierarchy::new(vec![class("A", &[], &[("x", "1")])]).unwrap();
        assert!(validate(&h).is_empty());
        assert_eq!(compiled(&h).classes()[0].features, fs(&[("x", "1")]));
    }

    #[test]
    fn diamond_ambiguity_reported() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("x", "1")]),
            class("B", &[], &[("x", "2")]),
            class("C", &["A", "B"], &[]),
        ])
        .unwrap();
        let report = validate(&h);
        assert_eq!(report.ambiguities.len(), 1);
        assert_eq!(report.ambiguities[0].class, "C");
        assert_eq!(report.ambiguities[0].attribute.as_str(), "x");
        assert!(matches!(
            compile_out::<Rational>(&h),
            Err(CompileError::Invalid(_))
        ));
    }

    #[test]
    fn local_override_resolves_ambiguity() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("x", "1")]),
            class("B", &[], &[("x", "2")]),
            class("C", &["A", "B"], &[("x", "3")]),
        ])
        .unwrap();
        assert!(validate(&h).is_empty());
        assert_eq!(compiled(&h).get("C").unwrap().features, fs(&[("x", "3")]));
    }

    #[test]
    fn agreeing_parents_are_not_ambiguous() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("x", "1")]),
            class("B", &[], &[("x", "1"), ("y", "2")]),
            class("C", &["A", "B"], &[]),
        ])
        .unwrap();
        assert!(validate(&h).is_empty());
        assert_eq!(
            compiled(&h).get("C").unwrap().features,
            fs(&[("x", "1"), ("y", "2")])
        );
    }

    #[test]
    fn default_override_chain() {
        let h = Hierarchy::new(vec![
            class("X", &[], &[("a", "1"), ("b", "1")]),
            class("Y", &["X"], &[("a", "2")]),
        ])
        .unwrap();
        let n = compiled(&h);
        let y = &n.get("Y").unwrap().features;
        assert_eq!(*y, fs(&[("a", "2"), ("b", "1")]));
        // Default inheritance: the child is not a superset of its parent.
        assert!(!n.get("X").unwrap().features.is_subset(y));
    }

    #[test]
    fn strict_chain_grows_monotonically() {
        let h = Hierarchy::new(vec![
            class("X", &[], &[("a", "1")]),
            class("Y", &["X"], &[("b", "1")]),
            class("Z", &["Y"], &[("c", "1")]),
        ])
        .unwrap();
        let n = compiled(&h);
        assert!(n
            .get("X")
            .unwrap()
            .features
            .is_subset(&n.get("Y").unwrap().features));
        assert!(n
            .get("Y")
            .unwrap()
            .features
            .is_subset(&n.get("Z").unwrap().features));
    }

    #[test]
    fn cycles_and_dangling_parents() {
        let h = Hierarchy::new(vec![
            class("A", &["C"], &[]),
            class("B", &["A"], &[]),
            class("C", &["B"], &[]),
            class("D", &["Nope"], &[]),
            class("E", &["E"], &[]),
        ])
        .unwrap();
        let r = validate(&h);
        assert_eq!(r.cycles.len(), 2);
        assert_eq!(r.cycles[0].len(), 3);
        assert_eq!(r.cycles[1], vec!["E".to_string()]);
        assert_eq!(
            r.unresolved,
            vec![UnresolvedParent {
                class: "D".into(),
                parent: "Nope".into()
            }]
        );
        assert!(r.diagnostics().iter().any(|d| d.starts_with("cycle:")));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Hierarchy::new(vec![class("A", &[], &[]), class("A", &[], &[])]),
            Err(HierarchyError::DuplicateClass("A".into()))
        );
        assert!(matches!(
            Hierarchy::new(vec![class("A", &[], &[("x", "?")])]),
            Err(HierarchyError::UnknownInClass { .. })
        ));
    }

    #[test]
    fn weights_count_links() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("a", "1")]),
            class("B", &["A"], &[("b", "1")]),
            class("C", &["B"], &[]),
        ])
        .unwrap();
        let eps = Rational::new(1, 10);
        let n = compile_out_weighted(&h, eps).unwrap();
        let a = Attribute::new("a").unwrap();
        let b = Attribute::new("b").unwrap();
        assert_eq!(n.get("A").unwrap().weight(&a), Rational::from_integer(1));
        assert_eq!(n.get("B").unwrap().weight(&a), Rational::new(11, 10));
        assert_eq!(n.get("B").unwrap().weight(&b), Rational::from_integer(1));
        assert_eq!(n.get("C").unwrap().weight(&a), Rational::new(12, 10));
        // Same content as the unweighted compilation.
        let plain = compiled(&h);
        for (w, p) in n.classes().iter().zip(plain.classes()) {
            assert_eq!(w.features, p.features);
            let weighted: BTreeSet<_> = w.weights.as_ref().unwrap().keys().collect();
            assert_eq!(weighted, w.features.attributes().collect());
        }
    }

    #[test]
    fn weights_also_work_in_floats() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("a", "1")]),
            class("B", &["A"], &[]),
        ])
        .unwrap();
        let n: CompiledSet<f64> = compile_out_weighted(&h, 0.25).unwrap();
        assert_eq!(
            n.get("B").unwrap().weight(&Attribute::new("a").unwrap()),
            1.25
        );
    }

    #[test]
    fn epsilon_bounds() {
        let h = Hierarchy::new(vec![
            class("A", &[], &[("a", "1")]),
            class("B", &["A"], &[]),
            class("C", &["B"], &[]),
        ])
        .unwrap();
        let err = compile_out_weighted(&h, Rational::new(1, 2)).unwrap_err();
        assert!(matches!(
            err,
            CompileError::EpsilonTooLarge { max_depth: 2, .. }
        ));
        assert!(err.to_string().contains("1/2"));
        assert_eq!(
            compile_out_weighted(&h, Rational::from_integer(0)).unwrap_err(),
            CompileError::NonPositiveEpsilon
        );
        let eps: Rational = default_epsilon(&h).unwrap();
        assert_eq!(eps, Rational::new(1, 16 * 3 * 2));
        assert!(compile_out_weighted(&h, eps).is_ok());
    }

    fn object(pairs: &[(&str, &str)], n_attrs: &[&str]) -> ObjectSpec {
        let universe = n_attrs
            .iter()
            .map(|a| Attribute::new(*a).unwrap())
            .collect();
        ObjectSpec::complete("o", fs(pairs), universe).unwrap()
    }

    #[test]
    fn singleton_augmentation() {
        let h = Hierarchy::new(vec![class("A", &[], &[("a", "1")])]).unwrap();
        let n = compiled(&h);
        let f = object(
            &[("c", "1"), ("b", "1"), ("a", "1"), ("d", "?")],
            &["a", "b", "c", "d"],
        );
        let aug = augment_singletons(&n, &f);
        assert_eq!(aug.len(), 4);
        let names: Vec<_> = aug.classes().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["A", "$single(a)", "$single(b)", "$single(c)"]);
        // Idempotent.
        assert_eq!(augment_singletons(&aug, &f), aug);
        let unknown = object(&[], &["a"]);
        assert_eq!(augment_singletons(&n, &unknown), n);
    }

    #[test]
    fn weighted_singletons_have_unit_weight() {
        let h = Hierarchy::new(vec![class("A", &[], &[("a", "1")])]).unwrap();
        let n = compile_out_weighted(&h, Rational::new(1, 8)).unwrap();
        let aug = augment_singletons(&n, &object(&[("b", "1")], &["a", "b"]));
        let s = aug.get("$single(b)").unwrap();
        assert_eq!(s.weights.as_ref().unwrap().len(), 1);
        assert_eq!(
            s.weight(&Attribute::new("b").unwrap()),
            Rational::from_integer(1)
        );
    }
}
