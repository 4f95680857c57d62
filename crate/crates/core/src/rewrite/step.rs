use std::fmt;

use serde::Serialize;

use super::{Calculus, GrammarError, Rule};
use crate::term::{ClassSet, ContextClass, Dir, Position, Term};

/// One reduction instance `C⟨r⟩ → C⟨r'⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub source: Term,
    pub rule: Rule,
    pub pos: Position,
    pub target: Term,
    pub classes: ClassSet,
}

impl Step {
    pub fn is_root(&self) -> bool {
        self.pos.is_root()
    }

    pub fn in_class(&self, c: ContextClass) -> bool {
        self.classes.contains(c)
    }

    /// Same rule at the same position, with α-equal results.
    pub fn same_as(&self, other: &Step) -> bool {
        self.rule == other.rule && self.pos == other.pos && self.target.alpha_eq(&other.target)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} →{}@{} {}",
            self.source, self.rule, self.pos, self.target
        )
    }
}

/// Which steps to keep, by the class of their context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepFilter {
    Any,
    In(ContextClass),
    NotIn(ContextClass),
    /// Empty context only.
    Root,
}

impl StepFilter {
    pub fn admits(self, classes: ClassSet, pos: &Position) -> bool {
        match self {
            StepFilter::Any => true,
            StepFilter::In(c) => classes.contains(c),
            StepFilter::NotIn(c) => !classes.contains(c),
            StepFilter::Root => pos.is_root(),
        }
    }

    /// Whether positions below one with `classes` can still be admitted.
    /// Every class other than `Full` is prefix-closed, so once lost it stays lost.
    fn may_descend(self, classes: ClassSet) -> bool {
        match self {
            StepFilter::In(c) => classes.contains(c),
            StepFilter::Root => false,
            _ => true,
        }
    }
}

/// Steps of the contextual closure of `rules` (sorted by name) on `t`, in
/// leftmost-outermost position order, then rule order, then result order.
pub fn steps_of(rules: &[Rule], t: &Term, filter: StepFilter) -> Vec<Step> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(
        rules,
        t,
        t,
        &mut path,
        ClassSet::ROOT,
        false,
        filter,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    rules: &[Rule],
    root: &Term,
    here: &Term,
    path: &mut Vec<Dir>,
    classes: ClassSet,
    head_fun: bool,
    filter: StepFilter,
    out: &mut Vec<Step>,
) {
    let pos = Position(path.clone());
    if filter.admits(classes, &pos) {
        for &rule in rules {
            for result in rule.apply(here) {
                let target = pos
                    .replace(root, result)
                    .expect("position comes from the walk");
                out.push(Step {
                    source: root.clone(),
                    rule,
                    pos: pos.clone(),
                    target,
                    classes,
                });
            }
        }
    }
    let children: &[(Dir, &Term)] = match here {
        Term::Var(_) | Term::Const(_) => &[],
        Term::Abs { body, .. } => &[(Dir::AbsBody, body)],
        Term::App { fun, arg } => &[(Dir::AppFun, fun), (Dir::AppArg, arg)],
        Term::Choice { left, right } => &[(Dir::ChoiceLeft, left), (Dir::ChoiceRight, right)],
    };
    for &(d, child) in children {
        let (cs, hf) = classes.descend(head_fun, here, d);
        if !filter.may_descend(cs) {
            continue;
        }
        path.push(d);
        walk(rules, root, child, path, cs, hf, filter, out);
        path.pop();
    }
}

/// Steps of `cal` on `t` whose context passes `filter`.
pub fn enumerate_steps(
    cal: &Calculus,
    t: &Term,
    filter: StepFilter,
) -> Result<Vec<Step>, GrammarError> {
    cal.check_grammar(t)?;
    Ok(steps_of(&cal.rules, t, filter))
}

/// Steps in the calculus' essential class.
pub fn essential_steps(cal: &Calculus, t: &Term) -> Result<Vec<Step>, GrammarError> {
    enumerate_steps(cal, t, StepFilter::In(cal.essential))
}

/// Steps outside the calculus' essential class.
pub fn inessential_steps(cal: &Calculus, t: &Term) -> Result<Vec<Step>, GrammarError> {
    enumerate_steps(cal, t, StepFilter::NotIn(cal.essential))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{classify, parse};

    fn beta() -> Calculus {
        Calculus::new("beta", &[Rule::Beta], ContextClass::Head)
    }

    #[test]
    fn head_step_of_example() {
        let t = parse("(λx.x x x) ((λz.z) z)").unwrap();
        let head = enumerate_steps(&beta(), &t, StepFilter::In(ContextClass::Head)).unwrap();
        assert_eq!(head.len(), 1);
        assert_eq!(
            head[0].target,
            parse("(λz.z) z ((λz.z) z) ((λz.z) z)").unwrap()
        );
        let other = enumerate_steps(&beta(), &t, StepFilter::NotIn(ContextClass::Head)).unwrap();
        assert_eq!(other.len(), 1);
        assert_eq!(other[0].target, parse("(λx.x x x) z").unwrap());
    }

    #[test]
    fn normal_form_has_no_steps() {
        assert!(
            enumerate_steps(&beta(), &parse("z").unwrap(), StepFilter::Any)
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn order_is_leftmost_outermost() {
        let t = parse("(λx.(λy.y) x) ((λz.z) w)").unwrap();
        let steps = enumerate_steps(&beta(), &t, StepFilter::Any).unwrap();
        let pos: Vec<String> = steps.iter().map(|s| s.pos.to_string()).collect();
        assert_eq!(pos, ["ε", "fun.body", "arg"]);
    }

    #[test]
    fn classes_agree_with_classify() {
        let t = parse("λx.(λy.y) ((λz.z) x) ((λw.w) x)").unwrap();
        for s in enumerate_steps(&beta(), &t, StepFilter::Any).unwrap() {
            assert_eq!(s.classes, classify(&t, &s.pos).unwrap());
        }
    }

    #[test]
    fn root_filter() {
        let t = parse("(λx.x) ((λy.y) z)").unwrap();
        let steps = steps_of(&[Rule::Beta], &t, StepFilter::Root);
        assert_eq!(steps.len(), 1);
        assert!(steps[0].is_root());
    }

    #[test]
    fn grammar_violation() {
        let t = parse("x (+) y").unwrap();
        assert!(enumerate_steps(&beta(), &t, StepFilter::Any).is_err());
    }
}
