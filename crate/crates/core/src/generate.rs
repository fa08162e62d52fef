//! Test-corpus generators: exhaustive size-ordered enumeration of a
//! fragment, and deterministic seeded sampling for spaces too large to
//! enumerate.

use crate::formula::{Formula, OperatorSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::rc::Rc;

/// Bounds describing a corpus: which operators may appear, how many
/// distinct variables, the maximum modal depth, and the maximum number of
/// children of a conjunction or disjunction.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    pub fragment: OperatorSet,
    pub max_vars: usize,
    pub max_depth: usize,
    pub max_width: usize,
}

const VAR_POOL: [&str; 6] = ["p", "q", "r", "s", "u", "v"];

/// Exhaustively enumerate the fragment in ascending AST-size order.
///
/// The stream is infinite whenever the fragment can grow formulas without
/// bound (any unary operator, or conjunction and disjunction together);
/// callers bound it with `take
/// `/`take_while`. Within one size the order is fixed: atoms before unary
/// operators before conjunctions before disjunctions.
pub fn enumerate_formulas(spec: &GeneratorSpec) -> impl Iterator<Item = Formula> {
    Enumerator::new(spec.clone())
}

struct Enumerator {
    spec: GeneratorSpec,
    memo: BTreeMap<(usize, usize), Rc<Vec<Formula>>>,
    buffer: std::vec::IntoIter<Formula>,
    size: usize,
    size_limit: Option<usize>,
}

impl Enumerator {
    fn new(spec: GeneratorSpec) -> Enumerator {
        assert!(
            spec.max_vars <= VAR_POOL.len(),
            "variable pool supports at most {} variables",
            VAR_POOL.len()
        );
        let frag = spec.fragment;
        let has_unary = frag.contains(OperatorSet::NEG)
            || frag.contains(OperatorSet::BOX)
            || frag.contains(OperatorSet::DIA);
        let has_and = frag.contains(OperatorSet::AND);
        let has_or = frag.contains(OperatorSet::OR);
        // Without a unary operator, conjunction and disjunction can only
        // alternate; with just one of them, children must be atoms, so
        // formula size is capped and the stream must end.
        let size_limit = if has_unary || (has_and && has_or) {
            None
        } else if has_and || has_or {
            Some(1 + spec.max_width)
        } else {
            Some(1)
        };
        Enumerator {
            spec,
            memo: BTreeMap::new(),
            buffer: Vec::new().into_iter(),
            size: 0,
            size_limit,
        }
    }

    fn formulas_of(&mut self, size: usize, depth: usize) -> Rc<Vec<Formula>> {
        if let Some(v) = self.memo.get(&(size, depth)) {
            return Rc::clone(v);
        }
        let frag = self.spec.fragment;
        let mut out = Vec::new();
        if size == 1 {
            for name in &VAR_POOL[..self.spec.max_vars] {
                out.push(Formula::var(*name));
            }
            if frag.contains(OperatorSet::ATNEG) {
                for name in &VAR_POOL[..self.spec.max_vars] {
                    out.push(Formula::neg_var(*name));
                }
            }
            if frag.contains(OperatorSet::TRUE) {
                out.push(Formula::ConstTrue);
            }
            if frag.contains(OperatorSet::FALSE) {
                out.push(Formula::ConstFalse);
            }
        } else {
            if frag.contains(OperatorSet::NEG) {
                for c in self.formulas_of(size - 1, depth).iter() {
                    out.push(Formula::not(c.clone()));
                }
            }
            if depth > 0 {
                if frag.contains(OperatorSet::BOX) {
                    for c in self.formulas_of(size - 1, depth - 1).iter() {
                        out.push(Formula::boxed(c.clone()));
                    }
                }
                if frag.contains(OperatorSet::DIA) {
                    for c in self.formulas_of(size - 1, depth - 1).iter() {
                        out.push(Formula::dia(c.clone()));
                    }
                }
            }
            if frag.contains(OperatorSet::AND) && size >= 3 {
                let mut acc = Vec::new();
                self.nary_combos(size - 1, depth, true, None, &mut acc, &mut out);
            }
            if frag.contains(OperatorSet::OR) && size >= 3 {
                let mut acc = Vec::new();
                self.nary_combos(size - 1, depth, false, None, &mut acc, &mut out);
            }
        }
        let rc = Rc::new(out);
        self.memo.insert((size, depth), Rc::clone(&rc));
        rc
    }

    /// Children of an `And` (`conjunction = true`) or `Or`: strictly
    /// increasing by formula order, never of the same connective (the
    /// constructors keep formulas flattened), totalling `remaining` nodes.
    fn nary_combos(
        &mut self,
        remaining: usize,
        depth: usize,
        conjunction: bool,
        last: Option<&Formula>,
        acc: &mut Vec<Formula>,
        out: &mut Vec<Formula>,
    ) {
        if acc.len() >= 2 && remaining == 0 {
            out.push(if conjunction {
                Formula::And(acc.clone())
            } else {
                Formula::Or(acc.clone())
            });
            return;
        }
        if acc.len() == self.spec.max_width || remaining == 0 {
            return;
        }
        // The first child must leave at least one node for a sibling.
        let reserve = if acc.is_empty() { 1 } else { 0 };
        for s in 1..=(remaining - reserve) {
            let candidates = self.formulas_of(s, depth);
            for c in candidates.iter() {
                let same_op = matches!(
                    (conjunction, c),
                    (true, Formula::And(_)) | (false, Formula::Or(_))
                );
                if same_op {
                    continue;
                }
                if let Some(prev) = last {
                    if c <= prev {
                        continue;
                    }
                }
                acc.push(c.clone());
                self.nary_combos(remaining - s, depth, conjunction, Some(c), acc, out);
                acc.pop();
            }
        }
    }
}

impl Iterator for Enumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if let Some(f) = self.buffer.next() {
                return Some(f);
            }
            self.size += 1;
            if self.size_limit.is_some_and(|lim| self.size > lim) {
                return None;
            }
            let batch = self.formulas_of(self.size, self.spec.max_depth);
            self.buffer = batch.as_ref().clone().into_iter();
        }
    }
}

/// Draw `count` formulas from the fragment with a seeded deterministic
/// generator. Node budgets vary per draw, so sizes are diverse; every
/// emitted formula respects the generator's fragment, variable, depth,
/// and width bounds.
pub fn sample_formulas(spec: &GeneratorSpec, seed: u64, count: usize) -> Vec<Formula> {
    assert!(
        spec.max_vars >= 1 && spec.max_vars <= VAR_POOL.len(),
        "variable pool supports 1..={} variables",
        VAR_POOL.len()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_budget = 5 * (spec.max_depth + 1);
    (0..count)
        .map(|_| {
            let budget = rng.gen_range(1..=max_budget);
            sample_one(&mut rng, spec, spec.max_depth, budget, None)
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Atom,
    Neg,
    Box,
    Dia,
    And,
    Or,
}

fn sample_one(
    rng: &mut ChaCha8Rng,
    spec: &GeneratorSpec,
    depth: usize,
    budget: usize,
    forbid: Option<Kind>,
) -> Formula {
    let frag = spec.fragment;
    let mut kinds = vec![Kind::Atom];
    if budget >= 2 {
        if frag.contains(OperatorSet::NEG) {
            kinds.push(Kind::Neg);
        }
        if depth >= 1 && frag.contains(OperatorSet::BOX) {
            kinds.push(Kind::Box);
        }
        if depth >= 1 && frag.contains(OperatorSet::DIA) {
            kinds.push(Kind::Dia);
        }
    }
    if budget >= 3 && spec.max_width >= 2 {
        if frag.contains(OperatorSet::AND) {
            kinds.push(Kind::And);
        }
        if frag.contains(OperatorSet::OR) {
            kinds.push(Kind::Or);
        }
    }
    kinds.retain(|k| Some(*k) != forbid);
    let kind = kinds[rng.gen_range(0..kinds.len())];
    match kind {
        Kind::Atom => sample_atom(rng, spec),
        Kind::Neg => Formula::not(sample_one(rng, spec, depth, budget - 1, None)),
        Kind::Box => Formula::boxed(sample_one(rng, spec, depth - 1, budget - 1, None)),
        Kind::Dia => Formula::dia(sample_one(rng, spec, depth - 1, budget - 1, None)),
        Kind::And | Kind::Or => {
            let conjunction = kind == Kind::And;
            let max_w = spec.max_width.min(budget - 1);
            let width = rng.gen_range(2..=max_w.max(2));
            // Split the remaining node budget into `width` parts, each >= 1.
            let mut parts = vec![1usize; width];
            for _ in 0..(budget - 1).saturating_sub(width) {
                let i = rng.gen_range(0..width);
                parts[i] += 1;
            }
            let children: Vec<Formula> = parts
                .iter()
                .map(|&b| sample_one(rng, spec, depth, b, Some(kind)))
                .collect();
            if conjunction {
                Formula::and(children)
            } else {
                Formula::or(children)
            }
        }
    }
}

fn sample_atom(rng: &mut ChaCha8Rng, spec: &GeneratorSpec) -> Formula {
    let frag = spec.fragment;
    let mut picks: Vec<u8> = vec![0];
    if frag.contains(OperatorSet::ATNEG) {
        picks.push(1);
    }
    if frag.contains(OperatorSet::TRUE) {
        picks.push(2);
    }
    if frag.contains(OperatorSet::FALSE) {
        picks.push(3);
    }
    match picks[rng.gen_range(0..picks.len())] {
        0 => Formula::var(VAR_POOL[rng.gen_range(0..spec.max_vars)]),
        1 => Formula::neg_var(VAR_POOL[rng.gen_range(0..spec.max_vars)]),
        2 => Formula::ConstTrue,
        _ => Formula::ConstFalse,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poor_mans_spec() -> GeneratorSpec {
        GeneratorSpec {
            fragment: OperatorSet::ATNEG | OperatorSet::AND | OperatorSet::BOX | OperatorSet::DIA,
            max_vars: 1,
            max_depth: 1,
            max_width: 2,
        }
    }

    #[test]
    fn enumeration_is_sorted_by_size_and_exhaustive() {
        let spec = GeneratorSpec {
            fragment: OperatorSet::ATNEG | OperatorSet::AND,
            max_vars: 1,
            max_depth: 0,
            max_width: 2,
        };
        let all: Vec<Formula> = enumerate_formulas(&spec).collect();
        // p, ~p, and the single unordered pair p & ~p.
        assert_eq!(
            all,
            vec![
                Formula::var("p"),
                Formula::neg_var("p"),
                Formula::and(vec![Formula::var("p"), Formula::neg_var("p")]),
            ]
        );
    }

    #[test]
    fn enumeration_covers_small_modal_formulas() {
        let all: Vec<Formula> = enumerate_formulas(&poor_mans_spec())
            .take_while(|f| f.size() <= 3)
            .collect();
        let must_have = ["p", "~p", "[]p", "<>~p", "p & ~p", "[]~p", "<>p"];
        for text in must_have {
            let f = crate::formula::parse(text).unwrap();
            assert!(all.contains(&f), "missing {text}");
        }
        // Sizes never decrease.
        let sizes: Vec<usize> = all.iter().map(Formula::size).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn enumeration_emits_no_duplicates() {
        let all: Vec<Formula> = enumerate_formulas(&poor_mans_spec())
            .take_while(|f| f.size() <= 5)
            .collect();
        let dedup: std::collections::BTreeSet<&Formula> = all.iter().collect();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn enumeration_respects_the_fragment() {
        let spec = GeneratorSpec {
            fragment: OperatorSet::AND | OperatorSet::OR | OperatorSet::BOX | OperatorSet::TRUE,
            max_vars: 2,
            max_depth: 1,
            max_width: 2,
        };
        for f in enumerate_formulas(&spec).take(200) {
            assert!(f.operator_set().is_subset_of(spec.fragment), "{f}");
            assert!(f.modal_depth() <= 1, "{f}");
        }
    }

    #[test]
    fn atom_only_fragments_terminate() {
        let spec = GeneratorSpec {
            fragment: OperatorSet::EMPTY,
            max_vars: 2,
            max_depth: 2,
            max_width: 3,
        };
        let all: Vec<Formula> = enumerate_formulas(&spec).collect();
        assert_eq!(all, vec![Formula::var("p"), Formula::var("q")]);
    }

    #[test]
    fn sampling_is_deterministic_and_in_fragment() {
        let spec = GeneratorSpec {
            fragment: OperatorSet::ATNEG | OperatorSet::AND | OperatorSet::BOX | OperatorSet::DIA,
            max_vars: 3,
            max_depth: 4,
            max_width: 3,
        };
        let a = sample_formulas(&spec, 42, 100);
        let b = sample_formulas(&spec, 42, 100);
        assert_eq!(a, b);
        let c = sample_formulas(&spec, 43, 100);
        assert_ne!(a, c, "different seeds should differ somewhere");
        for f in &a {
            assert!(f.operator_set().is_subset_of(spec.fragment), "{f}");
            assert!(f.modal_depth() <= 4, "{f}");
            assert!(f.vars().len() <= 3);
        }
        // The sample should exercise depth, not just atoms.
        assert!(a.iter().any(|f| f.modal_depth() >= 2));
    }
}
