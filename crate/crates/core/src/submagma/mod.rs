//! Finitely generated submagmas and their lattice operations.

mod longitudinal;
mod truncated;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

pub use longitudinal::{longitudinal_contains, LongitudinalSpec};
pub use truncated::{TruncatedSet, Truncation};

use crate::arithmetic::{divides, gcd};
use crate::element::{enumerate_level, pow2, reverse, Elem};
use crate::error::{MagmaError, Result};
use crate::limits::Limits;
use crate::primeset::PrimeSet;
use crate::report::CheckRecord;

/// `⟨provenance⟩`, stored through its minimal generating set.
#[derive(Clone)]
pub struct Submagma {
    generators: Vec<Elem>,
    provenance: Vec<Elem>,
    gen_set: Arc<FxHashSet<Elem>>,
    memo: Arc<Mutex<FxHashMap<Elem, bool>>>,
}

/// Reduces `raw` to the minimal generating set of the submagma it generates.
pub fn submagma(raw: &[Elem]) -> Submagma {
    let candidates: FxHashSet<Elem> = raw.iter().copied().collect();
    let mut memo = FxHashMap::default();
    let mut generators: Vec<Elem> = candidates
        .iter()
        .copied()
        .filter(|&x| match x.split() {
            None => true,
            Some((u, v)) => {
                !(member(&candidates, &mut memo, u) && member(&candidates, &mut memo, v))
            }
        })
        .collect();
    generators.sort();
    let gen_set = Arc::new(generators.iter().copied().collect());
    Submagma {
        generators,
        provenance: raw.to_vec(),
        gen_set,
        memo: Arc::new(Mutex::new(FxHashMap::default())),
    }
}

impl Submagma {
    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn provenance(&self) -> &[Elem] {
        &self.provenance
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        let mut memo = self.memo.lock().expect("membership memo poisoned");
        member(&self.gen_set, &mut memo, x)
    }
}

impl PartialEq for Submagma {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for Submagma {}

impl fmt::Debug for Submagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Submagma{self}")
    }
}

impl fmt::Display for Submagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(Elem::to_string).collect();
        write!(f, "⟨{}⟩", gens.join(", "))
    }
}

impl Serialize for Submagma {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Submagma", 2)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("rank", &self.rank())?;
        st.end()
    }
}

/// `x ∈ ⟨gens⟩`: either a generator, or both summands are members.
/// Explicit stack, left summand first, right only if the left is in.
fn member(gens: &FxHashSet<Elem>, memo: &mut FxHashMap<Elem, bool>, x: Elem) -> bool {
    if gens.is_empty() {
        return false;
    }
    let mut stack = vec![(x, 0u8)];
    while let Some((e, state)) = stack.pop() {
        if state == 0 {
            if memo.contains_key(&e) {
                continue;
            }
            if gens.contains(&e) {
                memo.insert(e, true);
                continue;
            }
        }
        let Some((l, r)) = e.split() else {
            memo.insert(e, false);
            continue;
        };
        match state {
            0 => {
                stack.push((e, 1));
                stack.push((l, 0));
            }
            1 => {
                if memo[&l] {
                    stack.push((e, 2));
                    stack.push((r, 0));
                } else {
                    memo.insert(e, false);
                }
            }
            _ => {
                let v = memo[&r];
                memo.insert(e, v);
            }
        }
    }
    memo[&x]
}

pub fn contains(n: &Submagma, x: Elem) -> bool {
    n.contains(x)
}

pub fn rank(n: &Submagma) -> usize {
    n.rank()
}

/// `N ∨ M = ⟨N ∪ M⟩`.
pub fn join(n: &Submagma, m: &Submagma) -> Submagma {
    let gens: Vec<Elem> = n.generators.iter().chain(&m.generators).copied().collect();
    submagma(&gens)
}

/// Members of both submagmas up to length `bound`.
pub fn intersect_truncated(
    n: &Submagma,
    m: &Submagma,
    bound: usize,
    limits: &Limits,
) -> Result<TruncatedSet> {
    let t = Truncation::new(bound, limits)?;
    let mut bits = t.closure(&n.generators);
    bits.intersect_with(&t.closure(&m.generators));
    Ok(t.collect(&bits))
}

/// `a𝕄 ⊆ b𝕄`.
pub fn principal_subset(a: Elem, b: Elem) -> bool {
    divides(b, a)
}

/// Generator of `a𝕄 ∩ b𝕄`, or `None` when the intersection is empty.
pub fn principal_intersect(a: Elem, b: Elem) -> Option<Elem> {
    if divides(a, b) {
        Some(b)
    } else if divides(b, a) {
        Some(a)
    } else {
        None
    }
}

/// Generator of the least principal ideal containing `a𝕄 ∨ b𝕄`.
pub fn principal_join_hull(a: Elem, b: Elem) -> Elem {
    gcd(a, b)
}

/// Least longitudinal submagma containing `n`.
pub fn longitudinal_hull(n: &Submagma) -> Result<LongitudinalSpec> {
    if n.is_empty() {
        return Err(MagmaError::domain("the empty submagma has no longitudinal hull"));
    }
    let lengths = n
        .generators
        .iter()
        .map(|g| {
            g.len_u64()
                .ok_or_else(|| MagmaError::resource(format!("generator length {}", g.length()), u64::MAX))
        })
        .collect::<Result<Vec<u64>>>()?;
    LongitudinalSpec::new(lengths)
}

/// Minimal generators of length `n` of the complement of a prime set.
pub fn cofinite_generators_level(p: &PrimeSet, n: usize, limits: &Limits) -> Result<BTreeSet<Elem>> {
    let level = enumerate_level(n, limits)?;
    Ok(level
        .iter()
        .copied()
        .filter(|&x| !p.contains(x))
        .filter(|&x| match x.split() {
            None => true,
            Some((u, v)) => p.contains(u) || p.contains(v),
        })
        .collect())
}

/// How the generators of a submagma behave under [`reverse`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub is_symmetric: bool,
    /// Mirror pairs `(a, ā)` with `a < ā`.
    pub pairs: Vec<(Elem, Elem)>,
    pub pow2_gens: Vec<Elem>,
    /// Generators equal to their reverse that are not powers of 2.
    pub self_symmetric_others: Vec<Elem>,
    /// Generators whose reverse is not a generator.
    pub unpaired: Vec<Elem>,
}

pub fn symmetric_analyze(n: &Submagma) -> SymmetryReport {
    let mut report = SymmetryReport {
        is_symmetric: true,
        pairs: Vec::new(),
        pow2_gens: Vec::new(),
        self_symmetric_others: Vec::new(),
        unpaired: Vec::new(),
    };
    for &g in &n.generators {
        let r = reverse(g);
        if r == g {
            if g.pow2_exponent().is_some() {
                report.pow2_gens.push(g);
            } else {
                report.self_symmetric_others.push(g);
            }
        } else if n.gen_set.contains(&r) {
            if g < r {
                report.pairs.push((g, r));
            }
        } else {
            report.unpaired.push(g);
        }
    }
    report.is_symmetric = report.unpaired.is_empty();
    report
}

/// The four relations exhibiting `2𝕄`, `3₊𝕄` and `(2+3₊)𝕄` as a pentagon,
/// checked up to length `bound`.
pub fn pentagon_witness(bound: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    let two = pow2(1);
    let three = crate::element::plus(3);
    let mixed = two + three;
    let t = Truncation::new(bound, limits)?;
    let b = bound as u64;
    let mut records = Vec::new();

    let twos = t.closure(&[two]);
    let threes = t.closure(&[three]);
    let common = twos.intersection(&threes).next();
    let mut rec = CheckRecord::new(
        "2M meet 3_+M is empty",
        b,
        principal_intersect(two, three).is_none() && common.is_none(),
    );
    if let Some(i) = common {
        rec = rec.with_witness(t.elements()[i]);
    }
    records.push(rec);

    let right = t.closure(&[three, mixed]);
    let multiple = right.ones().map(|i| t.elements()[i]).find(|&x| divides(two, x));
    let mut rec = CheckRecord::new("3_+M join (2+3_+)M has no multiple of 2", b, multiple.is_none());
    if let Some(x) = multiple {
        rec = rec.with_witness(x);
    }
    records.push(rec);

    let top_three = t.closure(&[two, three, mixed]);
    let top_two = t.closure(&[two, three]);
    let diff = top_three.symmetric_difference(&top_two).next();
    let mut rec = CheckRecord::new(
        "2M join (3_+M join (2+3_+)M) equals 2M join 3_+M",
        b,
        diff.is_none() && submagma(&[two, three]).contains(mixed),
    );
    if let Some(i) = diff {
        rec = rec.with_witness(t.elements()[i]);
    }
    records.push(rec);

    let included = threes.is_subset(&right);
    let extra = right.difference(&threes).next().map(|i| t.elements()[i]);
    let strict = match extra {
        Some(_) => true,
        None => !submagma(&[three]).contains(mixed),
    };
    let witness = extra.unwrap_or(mixed);
    records.push(
        CheckRecord::new("3_+M strictly inside 3_+M join (2+3_+)M", b, included && strict)
            .with_witness(witness),
    );
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::multiply;
    use crate::element::{minus, plus};

    fn two() -> Elem {
        pow2(1)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(submagma(&[two(), pow2(2)]).generators(), &[two()]);
        let a = minus(3) + two();
        let ax = multiply(a, plus(4)).unwrap();
        assert_eq!(submagma(&[a, ax]).generators(), &[a]);
        assert_eq!(submagma(&[two(), plus(3)]).rank(), 2);
        assert_eq!(submagma(&[]).rank(), 0);
        assert_eq!(submagma(&[two(), pow2(2), pow2(3)]).rank(), 1);
        let nn: Vec<Elem> = std::iter::once(two()).chain((3..=8).map(plus)).collect();
        assert_eq!(submagma(&nn).rank(), 7);
    }

    #[test]
    fn reduction_is_idempotent() {
        let n = submagma(&[two(), plus(3), two() + plus(3), pow2(3), minus(5)]);
        assert_eq!(submagma(n.generators()), n);
        assert_eq!(n.provenance().len(), 5);
    }

    #[test]
    fn membership_examples() {
        let n = submagma(&[two(), plus(3)]);
        assert!(n.contains(two() + plus(3)));
        assert!(!n.contains(Elem::ONE));
        assert!(submagma(&[Elem::ONE]).contains(pow2(100)));
        assert!(!submagma(&[]).contains(Elem::ONE));
        let m = submagma(&[plus(3), two() + plus(3)]);
        let t = Truncation::new(12, &Limits::DEFAULT).unwrap();
        for &x in t.elements() {
            if divides(two(), x) {
                assert!(!m.contains(x), "{x}");
            }
        }
    }

    #[test]
    fn membership_on_deep_elements() {
        let n = submagma(&[two()]);
        assert!(n.contains(pow2(5000)));
        assert!(!n.contains(minus(100_000)));
    }

    #[test]
    fn joins() {
        let j = join(&submagma(&[two()]), &submagma(&[plus(3)]));
        assert!(j.contains(two() + plus(3)));
        let n = submagma(&[minus(4), plus(3)]);
        assert_eq!(join(&n, &n), n);
        assert_eq!(join(&submagma(&[two()]), &submagma(&[pow2(2)])), submagma(&[two()]));
    }

    #[test]
    fn truncated_intersections() {
        let l = Limits::DEFAULT;
        let (n2, n3) = (submagma(&[two()]), submagma(&[plus(3)]));
        assert!(intersect_truncated(&n2, &n3, 12, &l).unwrap().elements.is_empty());
        let got = intersect_truncated(&n2, &submagma(&[pow2(2)]), 8, &l).unwrap();
        assert_eq!(got.bound, 8);
        assert_eq!(got.elements, BTreeSet::from([pow2(2), pow2(3)]));
        let same = intersect_truncated(&n3, &n3, 9, &l).unwrap();
        let t = Truncation::new(9, &l).unwrap();
        let direct: BTreeSet<Elem> = t.elements().iter().copied().filter(|&x| n3.contains(x)).collect();
        assert_eq!(same.elements, direct);
    }

    #[test]
    fn principal_examples() {
        assert!(principal_subset(pow2(2), two()));
        assert!(!principal_subset(two(), plus(3)));
        assert!(principal_subset(minus(7), Elem::ONE));
        assert_eq!(principal_intersect(two(), plus(3)), None);
        assert_eq!(principal_intersect(two(), pow2(3)), Some(pow2(3)));
        assert_eq!(principal_intersect(minus(5), minus(5)), Some(minus(5)));
        assert_eq!(principal_join_hull(two(), plus(3)), Elem::ONE);
        let (a, b) = (multiply(two(), minus(3)).unwrap(), multiply(two(), plus(3)).unwrap());
        assert_eq!(principal_join_hull(a, b), two());
    }

    #[test]
    fn longitudinal_hulls() {
        let a = minus(3) + two();
        assert_eq!(
            longitudinal_hull(&submagma(&[a])).unwrap().numeric_generators(),
            &BTreeSet::from([5])
        );
        assert_eq!(
            longitudinal_hull(&submagma(&[two(), plus(3)])).unwrap().numeric_generators(),
            &BTreeSet::from([2, 3])
        );
        let all = longitudinal_hull(&submagma(&[Elem::ONE])).unwrap();
        assert!(longitudinal_contains(&all, minus(17)));
        assert!(matches!(longitudinal_hull(&submagma(&[])), Err(MagmaError::Domain(_))));
    }

    #[test]
    fn cofinite_generators() {
        let l = Limits::DEFAULT;
        let one = PrimeSet::new([Elem::ONE]).unwrap();
        assert_eq!(
            cofinite_generators_level(&one, 3, &l).unwrap(),
            BTreeSet::from([Elem::ONE + two(), two() + Elem::ONE])
        );
        assert_eq!(cofinite_generators_level(&one, 4, &l).unwrap().len(), 4);
        let empty = PrimeSet::new([]).unwrap();
        assert!(cofinite_generators_level(&empty, 2, &l).unwrap().is_empty());
        assert_eq!(cofinite_generators_level(&empty, 1, &l).unwrap(), BTreeSet::from([Elem::ONE]));
    }

    #[test]
    fn symmetry() {
        let r = symmetric_analyze(&submagma(&[minus(3), plus(3)]));
        assert!(r.is_symmetric);
        assert_eq!(r.pairs, vec![(plus(3), minus(3))]);
        let r = symmetric_analyze(&submagma(&[two(), pow2(2)]));
        assert!(r.is_symmetric);
        assert_eq!(r.pow2_gens, vec![two()]);
        let r = symmetric_analyze(&submagma(&[plus(3)]));
        assert!(!r.is_symmetric);
        assert!(!submagma(&[plus(3)]).contains(reverse(plus(3))));
        let r = symmetric_analyze(&submagma(&[minus(3) + plus(3)]));
        assert!(r.is_symmetric);
        assert_eq!(r.self_symmetric_others, vec![minus(3) + plus(3)]);
    }

    #[test]
    fn pentagon() {
        let l = Limits::DEFAULT;
        for bound in [2, 5, 12] {
            let recs = pentagon_witness(bound, &l).unwrap();
            assert_eq!(recs.len(), 4);
            assert!(recs.iter().all(|r| r.passed && r.bound == bound as u64), "{recs:?}");
        }
        let recs = pentagon_witness(5, &l).unwrap();
        assert_eq!(recs[3].witness.as_deref(), Some("(2+3_+)"));
    }
}
