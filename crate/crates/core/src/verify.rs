//! Bounded replays of the structural laws, one [`CheckRecord`] per law.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::str::FromStr;

use rayon::prelude::*;

use crate::arithmetic::{divides, divisor_chain, factorize, is_prime, left_divide, multiply, pair_embed};
use crate::counting::{prime_count_closed, prime_count_oracle, prime_count_recursive};
use crate::element::{elements_up_to, pow2, segment, Elem};
use crate::error::{MagmaError, Result};
use crate::limits::Limits;
use crate::primeset::{
    arborescence, enumerate_closed_sets, enumerate_prime_sets, enumerate_rooted_trees, family_instances,
    is_closed_set, is_prime_set, kmax_level, spectrum, PrimeSet,
};
use crate::report::CheckRecord;
use crate::submagma::{pentagon_witness, principal_intersect, principal_join_hull, principal_subset, submagma, Truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Arithmetic,
    Ideals,
    Spectra,
    Families,
    All,
}

impl FromStr for Suite {
    type Err = MagmaError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "arithmetic" => Suite::Arithmetic,
            "ideals" => Suite::Ideals,
            "spectra" => Suite::Spectra,
            "families" => Suite::Families,
            "all" => Suite::All,
            other => return Err(MagmaError::domain(format!("unknown suite {other:?}"))),
        })
    }
}

/// Runs a suite with truncation length `max_len`. Each suite also applies
/// its own smaller bounds where exhaustive checks would blow up.
pub fn run(suite: Suite, max_len: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    if max_len == 0 {
        return Err(MagmaError::domain("truncation length must be positive"));
    }
    match suite {
        Suite::Arithmetic => arithmetic(max_len, limits),
        Suite::Ideals => ideals(max_len, limits),
        Suite::Spectra => spectra(max_len, limits),
        Suite::Families => families(max_len, limits),
        Suite::All => {
            let mut all = arithmetic(max_len, limits)?;
            all.extend(ideals(max_len, limits)?);
            all.extend(spectra(max_len, limits)?);
            all.extend(families(max_len, limits)?);
            Ok(all)
        }
    }
}

fn record<W: Display>(check: &str, bound: usize, counterexample: Option<W>) -> CheckRecord {
    let rec = CheckRecord::new(check, bound as u64, counterexample.is_none());
    match counterexample {
        Some(w) => rec.with_witness(w),
        None => rec,
    }
}

fn set_text(s: &BTreeSet<Elem>) -> String {
    let items: Vec<String> = s.iter().map(Elem::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn arithmetic(max_len: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let small_len = max_len.min(4);
    let small = elements_up_to(small_len, limits)?;
    let mul = |x, y| multiply(x, y).expect("small product");

    let bad = small.par_iter().find_map_first(|&a| {
        small.iter().find_map(|&b| {
            small
                .iter()
                .find(|&&c| mul(mul(a, b), c) != mul(a, mul(b, c)))
                .map(|&c| format!("{a}, {b}, {c}"))
        })
    });
    out.push(record("multiply is associative", small_len, bad));

    let bad = small.par_iter().find_map_first(|&a| {
        small.iter().find_map(|&x| {
            small
                .iter()
                .find(|&&y| x != y && (mul(a, x) == mul(a, y) || mul(x, a) == mul(y, a)))
                .map(|&y| format!("{a}, {x}, {y}"))
        })
    });
    out.push(record("multiply is cancellative", small_len, bad));

    let sum_len = max_len.min(8);
    let upto = elements_up_to(sum_len, limits)?;
    let bad = upto.par_iter().find_map_first(|&z| {
        let (x, y) = z.split()?;
        upto.iter()
            .take_while(|a| a.len() <= z.len())
            .find(|&&a| divides(a, z) != (a == z || (divides(a, x) && divides(a, y))))
            .map(|&a| format!("{a} | {z}"))
    });
    out.push(record("divisors of a sum divide both summands", sum_len, bad));

    let fact_len = max_len.min(10);
    let upto = elements_up_to(fact_len, limits)?;
    let bad = upto.par_iter().find_first(|&&x| is_prime(x) != (divisor_chain(x).len() == 2));
    out.push(record("prime iff two divisors", fact_len, bad));

    let bad = upto.par_iter().find_first(|&&x| {
        let f = factorize(x);
        if f.product() != x || !f.factors.iter().all(|&p| is_prime(p)) {
            return true;
        }
        // Every prime left divisor of a quotient must be the peeled factor.
        let mut rest = x;
        for &p in &f.factors {
            let primes = divisor_chain(rest).into_iter().filter(|&d| is_prime(d)).count();
            if primes != 1 {
                return true;
            }
            rest = left_divide(p, rest).expect("factor divides");
        }
        !rest.is_one()
    });
    out.push(record("factorization is sound and unique", fact_len, bad));

    let count_len = max_len.min(13) as u64;
    let bad = (1..=count_len).find(|&n| {
        let r = prime_count_recursive(n);
        let closed_ok = n < 2 || prime_count_closed(n).ok().as_ref() == Some(&r);
        let oracle_ok = match prime_count_oracle(n, limits) {
            Ok(o) => o == r,
            Err(MagmaError::Resource { .. }) => true,
            Err(_) => false,
        };
        !(closed_ok && oracle_ok)
    });
    out.push(record("prime counts agree across methods", count_len as usize, bad.map(|n| format!("n={n}"))));

    let bad = small.par_iter().find_map_first(|&x1| {
        small.iter().find_map(|&y1| {
            let f1 = pair_embed(x1, y1);
            small.iter().find_map(|&x2| {
                small.iter().find_map(|&y2| {
                    let injective = (f1 == pair_embed(x2, y2)) == (x1 == x2 && y1 == y2);
                    let hom = pair_embed(x1 + x2, y1 + y2) == f1 + pair_embed(x2, y2);
                    (!injective || !hom || f1.is_one()).then(|| format!("({x1}, {y1}), ({x2}, {y2})"))
                })
            })
        })
    });
    out.push(record("pair embedding is an injective homomorphism", small_len, bad));
    Ok(out)
}

fn ideals(max_len: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    let mut out = pentagon_witness(max_len, limits)?;
    let t = Truncation::new(max_len, limits)?;

    let gen_len = (max_len / 2).clamp(1, 6);
    let gens = elements_up_to(gen_len, limits)?;
    let principal: Vec<_> = gens.iter().map(|&a| t.closure(&[a])).collect();
    let bad = (0..gens.len()).into_par_iter().find_map_first(|i| {
        (0..gens.len()).find_map(|j| {
            let (a, b) = (gens[i], gens[j]);
            let (na, nb) = (&principal[i], &principal[j]);
            let subset_ok = principal_subset(a, b) == na.is_subset(nb);
            let meet = na.intersection(nb).collect::<Vec<_>>();
            let meet_ok = match principal_intersect(a, b) {
                Some(c) => meet == t.closure(&[c]).ones().collect::<Vec<_>>(),
                None => meet.is_empty(),
            };
            let join = t.closure(&[a, b]);
            let d = principal_join_hull(a, b);
            let hull = t.closure(&[d]);
            // d𝕄 contains the join and lies inside every listed c𝕄 that does.
            let hull_ok = join.is_subset(&hull)
                && principal.iter().all(|c| !join.is_subset(c) || hull.is_subset(c));
            (!(subset_ok && meet_ok && hull_ok)).then(|| format!("{a}, {b}"))
        })
    });
    out.push(record("principal ideal laws", max_len, bad));

    let small = elements_up_to(4, limits)?;
    let triples: Vec<[Elem; 3]> = small
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| {
            let small = &small;
            small[i + 1..].iter().enumerate().flat_map(move |(j, &b)| {
                small[i + j + 2..].iter().map(move |&c| [a, b, c])
            })
        })
        .collect();
    let sum_len = max_len.min(8);
    let sums = elements_up_to(sum_len, limits)?;
    let bad = triples.par_iter().find_map_first(|raw| {
        let n = submagma(raw);
        let gens: BTreeSet<Elem> = n.generators().iter().copied().collect();
        if submagma(n.generators()) != n {
            return Some(format!("reduction of {}", set_text(&raw.iter().copied().collect())));
        }
        sums.iter().find_map(|&z| {
            let (x, y) = z.split()?;
            let expected = (n.contains(x) && n.contains(y)) || gens.contains(&z);
            (n.contains(z) != expected).then(|| format!("{z} in {n}"))
        })
    });
    out.push(record("sum membership criterion", sum_len, bad));

    let bad = triples.par_iter().find_map_first(|raw| {
        let n = submagma(raw);
        n.generators().iter().find_map(|&g| {
            small
                .iter()
                .find(|&&x| !n.contains(multiply(g, x).expect("small product")))
                .map(|&x| format!("{g}·{x} outside {n}"))
        })
    });
    out.push(record("submagmas are right ideals", 4, bad));
    Ok(out)
}

fn spectra(max_len: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let len = max_len.min(5);
    let mut corpus = Vec::new();
    for k in 0..=6 {
        corpus.extend(enumerate_prime_sets(k, len, limits)?);
    }

    let bad = corpus.par_iter().find_map_first(|p| match spectrum(p, limits) {
        Ok(s) if s.length() == p.len() => None,
        _ => Some(p.to_string()),
    });
    out.push(record("spectrum length equals size", len, bad));

    let bad = corpus.iter().find(|p| !p.is_empty() && !p.contains(Elem::ONE)).map(PrimeSet::to_string);
    out.push(record("nonempty prime sets contain 1", len, bad));

    let outside = elements_up_to(len, limits)?;
    let bad = corpus.par_iter().find_map_first(|p| {
        outside.iter().filter(|x| !p.contains(**x)).find_map(|&x| {
            outside
                .iter()
                .filter(|y| !p.contains(**y) && x.len() + y.len() <= len)
                .find(|&&y| p.contains(x + y))
                .map(|&y| format!("{x} + {y} in {p}"))
        })
    });
    out.push(record("complement is closed under +", len, bad));

    let mut small = Vec::new();
    for k in 0..=3 {
        small.extend(enumerate_prime_sets(k, len.min(4), limits)?);
    }
    let bad = small.par_iter().find_map_first(|p| {
        small.iter().find_map(|q| {
            let mut union: BTreeSet<Elem> = p.elements() | q.elements();
            let union_ok = is_prime_set(&union);
            for &x in p.elements() {
                for &y in q.elements() {
                    union.insert(x + y);
                }
            }
            (!(union_ok && is_prime_set(&union))).then(|| format!("{p}, {q}"))
        })
    });
    out.push(record("unions and sum-extensions stay prime", len.min(4), bad));

    let mut bad = None;
    for k in 1..=4 {
        let below = enumerate_prime_sets(k - 1, len, limits)?;
        for node in kmax_level(k, len, limits)? {
            if node.parents.iter().any(|&i| node.set.elements().difference(below[i].elements()).count() != 1) {
                bad = Some(node.set.to_string());
                break;
            }
        }
    }
    out.push(record("Hasse covers add one element", len, bad));

    let figures = [
        (vec![Elem::ONE, crate::element::minus(3), crate::element::plus(5)], 5, 3, 2),
        (vec![Elem::ONE, pow2(1), pow2(2), crate::element::minus(3)], 7, 4, 2),
        ((0..5).map(pow2).collect(), 6, 5, 1),
    ];
    let mut bad = None;
    for (items, nodes, length, width) in figures {
        let p = PrimeSet::new(items)?;
        let s = spectrum(&p, limits)?;
        if (s.len(), s.length(), s.width()) != (nodes, length, width) {
            bad = Some(p.to_string());
        }
    }
    out.push(record("reference spectra", 32, bad));

    let bad = (1..=6).find_map(|k| {
        enumerate_closed_sets(k, limits)
            .ok()?
            .into_iter()
            .find(|s| !is_closed_set(s) || !is_prime_set(s))
            .map(|s| set_text(&s))
    });
    out.push(record("closed sets are prime", 32, bad));
    Ok(out)
}

fn families(max_len: usize, limits: &Limits) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let len = max_len.min(5);

    let counts: Vec<usize> = (1..=7)
        .map(|k| enumerate_rooted_trees(k, limits).map(|t| t.len()))
        .collect::<Result<_>>()?;
    let bad = (counts != [1, 1, 2, 4, 9, 20, 48]).then(|| format!("{counts:?}"));
    out.push(record("rooted tree counts", 7, bad));

    let mut cover_bad = None;
    let mut arb_bad = None;
    for k in 1..=4 {
        let sets: BTreeSet<PrimeSet> = enumerate_prime_sets(k, len, limits)?.into_iter().collect();
        let mut union = BTreeSet::new();
        for t in enumerate_rooted_trees(k, limits)? {
            union.extend(family_instances(&t, len, limits)?);
        }
        if cover_bad.is_none() {
            cover_bad = sets.symmetric_difference(&union).next().map(PrimeSet::to_string);
        }
        if arb_bad.is_none() {
            arb_bad = sets
                .par_iter()
                .find_first(|p| match arborescence(p.elements()) {
                    Ok(t) => t.size() != k || !family_instances(&t, len, limits).is_ok_and(|f| f.contains(p)),
                    Err(_) => true,
                })
                .map(PrimeSet::to_string);
        }
    }
    out.push(record("families cover the prime sets", len, cover_bad));
    out.push(record("arborescence family contains its set", len, arb_bad));

    let mut bad = None;
    for k in 1..=5 {
        for t in enumerate_rooted_trees(k, limits)? {
            let leaves = t.leaves();
            let found = family_instances(&t, len, limits)?.into_par_iter().find_first(|p| {
                spectrum(p, limits).map_or(true, |s| s.width() < leaves)
            });
            if let Some(p) = found {
                bad = Some(format!("{p} in family {t}"));
            }
        }
    }
    out.push(record("width at least leaf count", len, bad));

    let mut bad = None;
    for k in 1..=6 {
        let segment_of_pow2 = segment(pow2(k as u64 - 1));
        for s in enumerate_closed_sets(k, limits)? {
            let slim = spectrum(&PrimeSet::new(s.clone())?, limits)?.width() == 1;
            if slim != (s == segment_of_pow2) {
                bad = Some(set_text(&s));
            }
        }
    }
    out.push(record("slim closed sets are segments of powers of 2", 32, bad));

    let mut bad = None;
    for k in 1..=5 {
        for p in enumerate_prime_sets(k, len, limits)? {
            if spectrum(&p, limits)?.width() == 1 && !arborescence(p.elements())?.is_path() {
                bad = Some(p.to_string());
            }
        }
    }
    out.push(record("slim prime sets have path arborescences", len, bad));
    Ok(out)
}
