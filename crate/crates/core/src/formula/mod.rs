//! Modal formulas and syntactic operations: construction, rendering,
//! negation normal form, modal depth, and operator-set inspection.

mod parse;

pub use parse::{parse, ParseError};

use std::collections::BTreeSet;
use std::fmt;

/// A modal formula.
///
/// Conjunctions and disjunctions are kept flattened: an `And` never has an
/// `And` child, an `Or` never has an `Or` child, and both carry at least two
/// children. Atomic negation (`NegVar`, written `~p`) is distinct from
/// general negation (`Not`, written `!`): the former applies to variables
/// only and `~~p` collapses to `p` at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    NegVar(String),
    ConstTrue,
    ConstFalse,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
}

impl Formula {
    /// Variable constructor. Panics on names that the grammar would reject:
    /// empty, starting with a digit, containing characters outside
    /// `[a-zA-Z0-9_]`, or the reserved words `true`/`false`.
    pub fn var(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_valid_var_name(&name), "invalid variable name: {name:?}");
        Formula::Var(name)
    }

    /// Atomically negated variable (`~p`). Same name rules as [`Formula::var`].
    pub fn neg_var(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_valid_var_name(&name), "invalid variable name: {name:?}");
        Formula::NegVar(name)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }

    /// `f` under `n` nested boxes.
    pub fn boxed_n(n: usize, f: Formula) -> Formula {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// `f` under `n` nested diamonds.
    pub fn dia_n(n: usize, f: Formula) -> Formula {
        (0..n).fold(f, |acc, _| Formula::dia(acc))
    }

    /// Conjunction. Splices nested `And` children so the result stays
    /// flattened; a single conjunct is returned as-is. Panics on an empty
    /// list — the empty conjunction is not representable, use `ConstTrue`.
    pub fn and(children: Vec<Formula>) -> Formula {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Formula::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("empty conjunction is not representable"),
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    /// Disjunction, the dual of [`Formula::and`].
    pub fn or(children: Vec<Formula>) -> Formula {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Formula::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("empty disjunction is not representable"),
            1 => flat.pop().unwrap(),
            _ => Formula::Or(flat),
        }
    }

    /// Top-level conjuncts: the children of an `And`, or the formula itself.
    pub fn conjuncts(&self) -> &[Formula] {
        match self {
            Formula::And(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }

    /// Total number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::NegVar(_) | Formula::ConstTrue | Formula::ConstFalse => 1,
            Formula::Not(c) | Formula::Box(c) | Formula::Dia(c) => 1 + c.size(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Maximum nesting depth of `[]`/`<>` operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::NegVar(_) | Formula::ConstTrue | Formula::ConstFalse => 0,
            Formula::Not(c) => c.modal_depth(),
            Formula::Box(c) | Formula::Dia(c) => 1 + c.modal_depth(),
            Formula::And(cs) | Formula::Or(cs) => {
                cs.iter().map(Formula::modal_depth).max().unwrap_or(0)
            }
        }
    }

    /// The set of variable names occurring in the formula.
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Var(n) | Formula::NegVar(n) => {
                out.insert(n.as_str());
            }
            Formula::ConstTrue | Formula::ConstFalse => {}
            Formula::Not(c) | Formula::Box(c) | Formula::Dia(c) => c.collect_vars(out),
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.collect_vars(out);
                }
            }
        }
    }

    /// The minimal set of operators the formula is built from. Bare
    /// variables contribute nothing.
    pub fn operator_set(&self) -> OperatorSet {
        match self {
            Formula::Var(_) => OperatorSet::EMPTY,
            Formula::NegVar(_) => OperatorSet::ATNEG,
            Formula::ConstTrue => OperatorSet::TRUE,
            Formula::ConstFalse => OperatorSet::FALSE,
            Formula::Not(c) => OperatorSet::NEG | c.operator_set(),
            Formula::Box(c) => OperatorSet::BOX | c.operator_set(),
            Formula::Dia(c) => OperatorSet::DIA | c.operator_set(),
            Formula::And(cs) => cs
                .iter()
                .fold(OperatorSet::AND, |acc, c| acc | c.operator_set()),
            Formula::Or(cs) => cs
                .iter()
                .fold(OperatorSet::OR, |acc, c| acc | c.operator_set()),
        }
    }

    /// Whether the formula uses only atomic negation, conjunction, and the
    /// modal operators — no disjunction, no general negation, no constants.
    pub fn is_poor_mans(&self) -> bool {
        self.operator_set()
            .is_subset_of(OperatorSet::ATNEG | OperatorSet::AND | OperatorSet::BOX | OperatorSet::DIA)
    }

    /// Negation normal form: pushes `!` down to variables (where it becomes
    /// `~`) and constants. The result contains no `Not` node, is idempotent,
    /// and preserves modal depth.
    pub fn to_nnf(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::NegVar(_) | Formula::ConstTrue | Formula::ConstFalse => {
                self.clone()
            }
            Formula::Not(c) => c.nnf_negated(),
            Formula::Box(c) => Formula::boxed(c.to_nnf()),
            Formula::Dia(c) => Formula::dia(c.to_nnf()),
            Formula::And(cs) => Formula::and(cs.iter().map(Formula::to_nnf).collect()),
            Formula::Or(cs) => Formula::or(cs.iter().map(Formula::to_nnf).collect()),
        }
    }

    /// Negation normal form of the negation of `self`.
    fn nnf_negated(&self) -> Formula {
        match self {
            Formula::Var(n) => Formula::NegVar(n.clone()),
            Formula::NegVar(n) => Formula::Var(n.clone()),
            Formula::ConstTrue => Formula::ConstFalse,
            Formula::ConstFalse => Formula::ConstTrue,
            Formula::Not(c) => c.to_nnf(),
            Formula::Box(c) => Formula::dia(c.nnf_negated()),
            Formula::Dia(c) => Formula::boxed(c.nnf_negated()),
            Formula::And(cs) => Formula::or(cs.iter().map(Formula::nnf_negated).collect()),
            Formula::Or(cs) => Formula::and(cs.iter().map(Formula::nnf_negated).collect()),
        }
    }

    /// Replace every occurrence of a constant by a literal.
    ///
    /// `target` must be `ConstTrue` or `ConstFalse`; `replacement` must be a
    /// `Var` or `NegVar`.
    pub fn substitute(&self, target: &Formula, replacement: &Formula) -> Formula {
        assert!(
            matches!(target, Formula::ConstTrue | Formula::ConstFalse),
            "substitution target must be a constant"
        );
        assert!(
            matches!(replacement, Formula::Var(_) | Formula::NegVar(_)),
            "substitution replacement must be a literal"
        );
        self.substitute_inner(target, replacement)
    }

    fn substitute_inner(&self, target: &Formula, replacement: &Formula) -> Formula {
        if self == target {
            return replacement.clone();
        }
        match self {
            Formula::Var(_) | Formula::NegVar(_) | Formula::ConstTrue | Formula::ConstFalse => {
                self.clone()
            }
            Formula::Not(c) => Formula::not(c.substitute_inner(target, replacement)),
            Formula::Box(c) => Formula::boxed(c.substitute_inner(target, replacement)),
            Formula::Dia(c) => Formula::dia(c.substitute_inner(target, replacement)),
            Formula::And(cs) => Formula::And(
                cs.iter()
                    .map(|c| c.substitute_inner(target, replacement))
                    .collect(),
            ),
            Formula::Or(cs) => Formula::Or(
                cs.iter()
                    .map(|c| c.substitute_inner(target, replacement))
                    .collect(),
            ),
        }
    }

    /// Concrete-syntax rendering; inverse of [`parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn is_valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "true"
        && name != "false"
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precedence: unary operators bind tightest, then `&`, then `|`.
        fn unary_operand(f: &mut fmt::Formatter<'_>, c: &Formula) -> fmt::Result {
            match c {
                Formula::And(_) | Formula::Or(_) => write!(f, "({c})"),
                _ => write!(f, "{c}"),
            }
        }
        match self {
            Formula::Var(n) => write!(f, "{n}"),
            Formula::NegVar(n) => write!(f, "~{n}"),
            Formula::ConstTrue => write!(f, "true"),
            Formula::ConstFalse => write!(f, "false"),
            Formula::Not(c) => {
                write!(f, "!")?;
                unary_operand(f, c)
            }
            Formula::Box(c) => {
                write!(f, "[]")?;
                unary_operand(f, c)
            }
            Formula::Dia(c) => {
                write!(f, "<>")?;
                unary_operand(f, c)
            }
            Formula::And(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    match c {
                        Formula::Or(_) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
            Formula::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// A set of logical operators, used to carve out language fragments.
///
/// The eight members: general negation `!`, atomic negation `~`,
/// conjunction, disjunction, box, diamond, and the two constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OperatorSet(u8);

impl OperatorSet {
    pub const EMPTY: OperatorSet = OperatorSet(0);
    pub const NEG: OperatorSet = OperatorSet(1);
    pub const ATNEG: OperatorSet = OperatorSet(1 << 1);
    pub const AND: OperatorSet = OperatorSet(1 << 2);
    pub const OR: OperatorSet = OperatorSet(1 << 3);
    pub const BOX: OperatorSet = OperatorSet(1 << 4);
    pub const DIA: OperatorSet = OperatorSet(1 << 5);
    pub const TRUE: OperatorSet = OperatorSet(1 << 6);
    pub const FALSE: OperatorSet = OperatorSet(1 << 7);
    pub const ALL: OperatorSet = OperatorSet(0xff);

    const TOKENS: [(&'static str, OperatorSet); 8] = [
        ("neg", OperatorSet::NEG),
        ("atneg", OperatorSet::ATNEG),
        ("and", OperatorSet::AND),
        ("or", OperatorSet::OR),
        ("box", OperatorSet::BOX),
        ("dia", OperatorSet::DIA),
        ("true", OperatorSet::TRUE),
        ("false", OperatorSet::FALSE),
    ];

    pub fn contains(self, other: OperatorSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn is_subset_of(self, other: OperatorSet) -> bool {
        other.contains(self)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Raw bit pattern; `0..=255` enumerates every operator set.
    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_bits(bits: u8) -> OperatorSet {
        OperatorSet(bits)
    }

    /// Parse the comma-separated token encoding, e.g. `"atneg,and,box,dia"`.
    /// The empty string denotes the empty set.
    pub fn parse_tokens(text: &str) -> Result<OperatorSet, UnknownOperatorToken> {
        let mut set = OperatorSet::EMPTY;
        for raw in text.split(',') {
            let tok = raw.trim();
            if tok.is_empty() {
                continue;
            }
            let found = Self::TOKENS.iter().find(|(name, _)| *name == tok);
            match found {
                Some((_, op)) => set = set | *op,
                None => return Err(UnknownOperatorToken(tok.to_string())),
            }
        }
        Ok(set)
    }
}

impl std::ops::BitOr for OperatorSet {
    type Output = OperatorSet;
    fn bitor(self, rhs: OperatorSet) -> OperatorSet {
        OperatorSet(self.0 | rhs.0)
    }
}

impl fmt::Display for OperatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, op) in Self::TOKENS {
            if self.contains(op) {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{name}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for OperatorSet {
    type Err = UnknownOperatorToken;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorSet::parse_tokens(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown operator token: {0:?}")]
pub struct UnknownOperatorToken(pub String);
