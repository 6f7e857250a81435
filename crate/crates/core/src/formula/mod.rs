//! Classical propositional language over a fixed, finite signature.
//!
//! Entailment and equivalence are decided by sweeping every valuation of the
//! signature. Formulas keep atom names, so a formula can be printed without
//! its signature, but evaluation always happens relative to one.

mod parser;

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parser::parse;

/// Largest signature for which valuations may be enumerated.
pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("signature must contain at least one atom")]
    EmptySignature,
    #[error("duplicate atom `{0}` in signature")]
    DuplicateAtom(String),
    #[error("`{0}` is not a valid atom name")]
    InvalidAtom(String),
    #[error("signature has {atoms} atoms, enumeration bound is {bound}")]
    SignatureTooLarge { atoms: usize, bound: usize },
}

/// Ordered set of atom names. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    atoms: Arc<[String]>,
}

impl Signature {
    pub fn new<I, S>(atoms: I) -> Result<Self, FormulaError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(FormulaError::EmptySignature);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(FormulaError::SignatureTooLarge {
                atoms: atoms.len(),
                bound: MAX_ATOMS,
            });
        }
        for (i, a) in atoms.iter().enumerate() {
            if !parser::is_atom_name(a) {
                return Err(FormulaError::InvalidAtom(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(FormulaError::DuplicateAtom(a.clone()));
            }
        }
        Ok(Signature {
            atoms: atoms.into(),
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, atom: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// Number of valuations, `2^len`.
    pub fn valuation_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    /// All valuations in canonical order: the first atom is the most
    /// significant position and all-true comes first. For `p q` this yields
    /// `pq, p, q, ∅`.
    pub fn valuations(&self) -> impl Iterator<Item = Valuation> + '_ {
        let n = self.len();
        (0..self.valuation_count()).rev().map(move |k| {
            let mut bits = 0u32;
            for i in 0..n {
                if k & (1 << (n - 1 - i)) != 0 {
                    bits |= 1 << i;
                }
            }
            Valuation(bits)
        })
    }

    /// Fails with the first atom of `f` that is not declared here.
    pub fn check(&self, f: &Formula) -> Result<(), FormulaError> {
        let mut missing = None;
        f.visit_atoms(&mut |a| {
            if missing.is_none() && self.index_of(a).is_none() {
                missing = Some(a.to_string());
            }
        });
        match missing {
            Some(a) => Err(FormulaError::UnknownAtom(a)),
            None => Ok(()),
        }
    }

    /// Conjunction of literals describing exactly one valuation, atoms in
    /// signature order.
    pub fn minterm(&self, v: Valuation) -> Formula {
        Formula::conjunction(self.atoms.iter().enumerate().map(|(i, a)| {
            let atom = Formula::atom(a.as_str());
            if v.get(i) {
                atom
            } else {
                Formula::not(atom)
            }
        }))
    }

    /// Disjunction of minterms, in canonical valuation order. Empty input
    /// gives `F`.
    pub fn characteristic(&self, vals: &[Valuation]) -> Formula {
        let mut sorted: Vec<Valuation> = self.valuations().filter(|v| vals.contains(v)).collect();
        sorted.dedup();
        Formula::disjunction(sorted.into_iter().map(|v| self.minterm(v)))
    }

    /// World name in the `w_pq` / `w_0` style used by canonical models.
    pub fn world_name(&self, v: Valuation) -> String {
        let single = self.atoms.iter().all(|a| a.chars().count() == 1);
        let trues: Vec<&str> = self
            .atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| v.get(*i))
            .map(|(_, a)| a.as_str())
            .collect();
        if trues.is_empty() {
            "w_0".to_string()
        } else if single {
            format!("w_{}", trues.concat())
        } else {
            format!("w_{}", trues.join("."))
        }
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.atoms.iter()).finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atoms.join(" "))
    }
}

/// Truth assignment over a signature; bit `i` is atom `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(u32);

impl Valuation {
    pub fn from_bits(bits: u32) -> Self {
        Valuation(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn get(self, atom: usize) -> bool {
        self.0 & (1 << atom) != 0
    }

    pub fn with(self, atom: usize, value: bool) -> Self {
        if value {
            Valuation(self.0 | (1 << atom))
        } else {
            Valuation(self.0 & !(1 << atom))
        }
    }

    /// Valuation making exactly the named atoms true.
    pub fn from_true_atoms(sig: &Signature, atoms: &[&str]) -> Result<Self, FormulaError> {
        atoms.iter().try_fold(Valuation(0), |v, a| {
            sig.index_of(a)
                .map(|i| v.with(i, true))
                .ok_or_else(|| FormulaError::UnknownAtom(a.to_string()))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `T` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `F` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bottom)
    }

    pub fn visit_atoms<'a>(&'a self, visit: &mut impl FnMut(&'a str)) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => visit(a),
            Formula::Not(f) => f.visit_atoms(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
        }
    }

    /// Truth value under `lookup`.
    pub fn eval_with(&self, lookup: &impl Fn(&str) -> bool) -> bool {
        match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(a) => lookup(a),
            Formula::Not(f) => !f.eval_with(lookup),
            Formula::And(a, b) => a.eval_with(lookup) && b.eval_with(lookup),
            Formula::Or(a, b) => a.eval_with(lookup) || b.eval_with(lookup),
            Formula::Implies(a, b) => !a.eval_with(lookup) || b.eval_with(lookup),
            Formula::Iff(a, b) => a.eval_with(lookup) == b.eval_with(lookup),
        }
    }

    /// Truth value under `v`.
    ///
    /// Panics if the formula mentions an atom outside `sig`; use
    /// [`Signature::check`] first on untrusted input.
    pub fn eval(&self, sig: &Signature, v: Valuation) -> bool {
        self.eval_with(&|a| {
            let i = sig
                .index_of(a)
                .unwrap_or_else(|| panic!("atom `{a}` is not in signature {sig}"));
            v.get(i)
        })
    }

    /// Full truth table of the formula over `sig`.
    pub fn truth_table(&self, sig: &Signature) -> Result<TruthTable, FormulaError> {
        sig.check(self)?;
        Ok(self.table_unchecked(sig))
    }

    fn table_unchecked(&self, sig: &Signature) -> TruthTable {
        match self {
            Formula::Top => TruthTable::constant(sig, true),
            Formula::Bottom => TruthTable::constant(sig, false),
            Formula::Atom(a) => TruthTable::atom(sig, sig.index_of(a).expect("checked")),
            Formula::Not(f) => f.table_unchecked(sig).not(),
            Formula::And(a, b) => a.table_unchecked(sig).and(&b.table_unchecked(sig)),
            Formula::Or(a, b) => a.table_unchecked(sig).or(&b.table_unchecked(sig)),
            Formula::Implies(a, b) => a.table_unchecked(sig).not().or(&b.table_unchecked(sig)),
            Formula::Iff(a, b) => {
                let (ta, tb) = (a.table_unchecked(sig), b.table_unchecked(sig));
                ta.and(&tb).or(&ta.not().and(&tb.not()))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) | Formula::Iff(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Not(..) => 4,
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 5,
        }
    }
}

/// `f ⊢ g` over `sig`: every valuation satisfying `f` satisfies `g`.
pub fn entails(f: &Formula, g: &Formula, sig: &Signature) -> Result<bool, FormulaError> {
    Ok(f.truth_table(sig)?.entails(&g.truth_table(sig)?))
}

/// Mutual entailment over `sig`.
pub fn equivalent(f: &Formula, g: &Formula, sig: &Signature) -> Result<bool, FormulaError> {
    Ok(f.truth_table(sig)? == g.truth_table(sig)?)
}

/// Set of satisfying valuations, one bit per valuation index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    words: Vec<u64>,
    len: usize,
}

impl TruthTable {
    fn word_count(len: usize) -> usize {
        len.div_ceil(64)
    }

    fn mask_tail(mut self) -> Self {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        self
    }

    pub fn constant(sig: &Signature, value: bool) -> Self {
        let len = sig.valuation_count();
        let word = if value { u64::MAX } else { 0 };
        TruthTable {
            words: vec![word; Self::word_count(len)],
            len,
        }
        .mask_tail()
    }

    pub fn atom(sig: &Signature, atom: usize) -> Self {
        let len = sig.valuation_count();
        let mut t = TruthTable::constant(sig, false);
        for k in 0..len {
            if k & (1 << atom) != 0 {
                t.words[k / 64] |= 1 << (k % 64);
            }
        }
        t
    }

    pub fn contains(&self, v: Valuation) -> bool {
        let k = v.bits() as usize;
        self.words[k / 64] & (1 << (k % 64)) != 0
    }

    pub fn not(&self) -> Self {
        TruthTable {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        }
        .mask_tail()
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(
            self.len, other.len,
            "truth tables over different signatures"
        );
        TruthTable {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| op(*a, *b))
                .collect(),
            len: self.len,
        }
    }

    pub fn entails(&self, other: &Self) -> bool {
        assert_eq!(
            self.len, other.len,
            "truth tables over different signatures"
        );
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.not().is_empty()
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn valuations(&self) -> impl Iterator<Item = Valuation> + '_ {
        (0..self.len)
            .filter(|k| self.words[k / 64] & (1 << (k % 64)) != 0)
            .map(|k| Valuation(k as u32))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let child = |f: &mut fmt::Formatter<'_>, c: &Formula, paren: bool| {
            if paren {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            Formula::Top => write!(f, "T"),
            Formula::Bottom => write!(f, "F"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(inner) => {
                write!(f, "~")?;
                child(f, inner, inner.precedence() < prec)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let op = if matches!(self, Formula::And(..)) {
                    "&"
                } else {
                    "|"
                };
                child(f, a, a.precedence() < prec)?;
                write!(f, " {op} ")?;
                child(f, b, b.precedence() <= prec)
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let op = if matches!(self, Formula::Implies(..)) {
                    "->"
                } else {
                    "<->"
                };
                child(f, a, a.precedence() <= prec)?;
                write!(f, " {op} ")?;
                child(f, b, b.precedence() <= prec)
            }
        }
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq() -> Signature {
        Signature::new(["p", "q"]).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s, &pq()).unwrap()
    }

    #[test]
    fn signature_rejects_bad_input() {
        assert_eq!(
            Signature::new(Vec::<String>::new()),
            Err(FormulaError::EmptySignature)
        );
        assert_eq!(
            Signature::new(["p", "p"]),
            Err(FormulaError::DuplicateAtom("p".into()))
        );
        assert!(matches!(
            Signature::new((0..21).map(|i| format!("a{i}"))),
            Err(FormulaError::SignatureTooLarge { atoms: 21, .. })
        ));
        assert!(matches!(
            Signature::new(["T"]),
            Err(FormulaError::InvalidAtom(_))
        ));
        assert!(Signature::new((0..20).map(|i| format!("a{i}"))).is_ok());
    }

    #[test]
    fn canonical_valuation_order() {
        let sig = pq();
        let names: Vec<String> = sig.valuations().map(|v| sig.world_name(v)).collect();
        assert_eq!(names, ["w_pq", "w_p", "w_q", "w_0"]);
    }

    #[test]
    fn eval_examples() {
        let sig = pq();
        let p_only = Valuation::from_true_atoms(&sig, &["p"]).unwrap();
        let both = Valuation::from_true_atoms(&sig, &["p", "q"]).unwrap();
        assert!(!f("p & q").eval(&sig, p_only));
        for v in sig.valuations() {
            assert!(Formula::Top.eval(&sig, v));
        }
        assert!(f("~p | q").eval(&sig, both));
    }

    #[test]
    fn entailment_examples() {
        let sig = pq();
        assert!(entails(&f("p & q"), &f("p"), &sig).unwrap());
        assert!(!entails(&f("p"), &f("p & q"), &sig).unwrap());
        assert!(entails(&Formula::Bottom, &f("q -> ~p"), &sig).unwrap());
        assert!(equivalent(&f("p | ~p"), &Formula::Top, &sig).unwrap());
        assert!(!equivalent(&f("p"), &f("q"), &sig).unwrap());
        assert!(equivalent(&f("~(p & q)"), &f("~p | ~q"), &sig).unwrap());
    }

    #[test]
    fn entailment_rejects_foreign_atoms() {
        let sig = pq();
        let r = Formula::atom("r");
        assert_eq!(
            entails(&r, &Formula::Top, &sig),
            Err(FormulaError::UnknownAtom("r".into()))
        );
    }

    #[test]
    fn characteristic_formula_selects_exactly_its_valuations() {
        let sig = pq();
        let vals: Vec<Valuation> = sig.valuations().take(2).collect();
        let c = sig.characteristic(&vals);
        for v in sig.valuations() {
            assert_eq!(c.eval(&sig, v), vals.contains(&v));
        }
        assert_eq!(sig.characteristic(&[]), Formula::Bottom);
    }

    #[test]
    fn truth_table_on_wide_signature() {
        let sig = Signature::new((0..8).map(|i| format!("a{i}"))).unwrap();
        let t = parse("a0 & a7", &sig).unwrap().truth_table(&sig).unwrap();
        assert_eq!(t.count(), 64);
        assert!(t.not().not() == t);
        assert!(TruthTable::constant(&sig, true).is_full());
    }

    #[test]
    fn display_minimal_parentheses() {
        assert_eq!(f("p & ~q").to_string(), "p & ~q");
        assert_eq!(f("(p | q) & p").to_string(), "(p | q) & p");
        assert_eq!(f("p -> (q <-> p)").to_string(), "p -> (q <-> p)");
        assert_eq!(f("~(p & q)").to_string(), "~(p & q)");
        assert_eq!(f("p & (q & p)").to_string(), "p & (q & p)");
    }
}
