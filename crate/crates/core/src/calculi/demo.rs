use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::factor::{
    check_swap, factorization_oracle, reachable, reorder_sequence, Ars, Reordered, Side, SwapCheck,
    TermView, Verdict,
};
use crate::prob::{lift, LiftRel, MultiDist, Prob};
use crate::rewrite::{steps_of, Calculus, Rule, Step, StepFilter};
use crate::term::{parse, ContextClass, Term};

pub const DEMOS: [&str; 6] = [
    "nd-duplication",
    "sigma-overlap",
    "beta-eta-counterexample",
    "head-factorize-example",
    "oplus-factorize-example",
    "prob-lift",
];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown demo `{0}`")]
pub struct UnknownDemo(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoCheck {
    pub label: String,
    pub ok: bool,
}

/// A replayed fixture: narrative lines and the expectations checked on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub name: String,
    pub lines: Vec<String>,
    pub checks: Vec<DemoCheck>,
}

impl Transcript {
    fn new(name: &str) -> Transcript {
        Transcript {
            name: name.to_string(),
            lines: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, label: &str, ok: bool) {
        self.checks.push(DemoCheck {
            label: label.to_string(),
            ok,
        });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for l in &self.lines {
            writeln!(f, "  {l}")?;
        }
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {}",
                if c.ok { "ok" } else { "MISMATCH" },
                c.label
            )?;
        }
        Ok(())
    }
}

pub fn demo(name: &str) -> Result<Transcript, UnknownDemo> {
    Ok(match name {
        "nd-duplication" => nd_duplication_demo(),
        "sigma-overlap" => sigma_overlap_demo(),
        "beta-eta-counterexample" => beta_eta_counterexample_demo(),
        "head-factorize-example" => head_factorize_demo(),
        "oplus-factorize-example" => oplus_factorize_demo(),
        "prob-lift" => prob_lift_demo(),
        other => return Err(UnknownDemo(other.to_string())),
    })
}

fn p(s: &str) -> Term {
    parse(s).expect("demo fixture parses")
}

fn show_chain(v: &TermView, start: &Term, chain: &[Step]) -> String {
    let mut s = start.to_string();
    for st in chain {
        let side = if v.side(st) == Side::Essential {
            ""
        } else {
            "¬"
        };
        let class = v.calculus.essential.name().chars().next().unwrap_or('e');
        s.push_str(&format!(" →{side}{class}:{} {}", st.rule, st.target));
    }
    s
}

fn reaches(v: &TermView, from: &Term, goal: &Term, depth: usize) -> bool {
    from.alpha_eq(goal)
        || reachable(v, from, depth)
            .iter()
            .any(|(s, _)| s.alpha_eq(goal))
}

/// Duplicating a choice before flipping it reaches `q p`; flipping first cannot.
pub fn nd_duplication_demo() -> Transcript {
    let mut tr = Transcript::new("nd-duplication");
    let v = TermView::new(Calculus::new(
        "lambda-oplus",
        &[Rule::Beta, Rule::Oplus],
        ContextClass::Head,
    ));
    let t = p("(λx.x x) (oplus p q)");
    let qp = p("q p");
    tr.line(format!("term {t}"));
    let steps = v.all_steps(&t);
    let dup: Vec<&Step> = steps.iter().filter(|s| s.rule == Rule::Beta).collect();
    let flips: Vec<&Step> = steps.iter().filter(|s| s.rule == Rule::Oplus).collect();
    for s in &steps {
        tr.line(format!("  →{} at {} gives {}", s.rule, s.pos, s.target));
    }
    let dup_reach = dup.iter().any(|s| reaches(&v, &s.target, &qp, 3));
    let flip_reach = flips.iter().any(|s| reaches(&v, &s.target, &qp, 3));
    let flip_ends: Vec<String> = flips
        .iter()
        .flat_map(|s| {
            let mut all = vec![s.target.clone()];
            all.extend(reachable(&v, &s.target, 3).into_iter().map(|(x, _)| x));
            all.into_iter()
                .filter(|x| v.all_steps(x).is_empty())
                .map(|x| x.to_string())
        })
        .collect();
    tr.line(format!("flip-first normal forms: {}", flip_ends.join(", ")));
    tr.check("duplicate-first reaches q p", dup.len() == 1 && dup_reach);
    tr.check(
        "flip-first reaches only p p and q q",
        flips.len() == 2 && !flip_reach && flip_ends == ["p p", "q q"],
    );
    let pp = p("p p");
    tr.check(
        "two distinct normal forms are reachable, so confluence fails here",
        reaches(&v, &t, &pp, 3) && reaches(&v, &t, &qp, 3),
    );
    let c = p("oplus (λx.x) y z");
    let s1 = v
        .all_steps(&c)
        .into_iter()
        .find(|s| s.rule == Rule::Oplus && s.target.alpha_eq(&p("(λx.x) z")));
    let s2 = s1.as_ref().and_then(|s| {
        v.all_steps(&s.target)
            .into_iter()
            .find(|s| s.rule == Rule::Beta)
    });
    if let (Some(a), Some(b)) = (&s1, &s2) {
        tr.line(format!("{c} →⊕ {} →β {}", a.target, b.target));
    }
    tr.check(
        "⊕ creates a β-redex",
        s2.is_some_and(|s| s.target == p("z")),
    );
    tr
}

fn has(steps: &[Step], rule: Rule, at: &str) -> bool {
    steps
        .iter()
        .any(|s| s.rule == rule && s.pos.to_string() == at)
}

/// Nested σ and βv redexes in the shuffling calculus.
pub fn sigma_overlap_demo() -> Transcript {
    let mut tr = Transcript::new("sigma-overlap");
    let rules = [Rule::BetaV, Rule::Sigma1, Rule::Sigma3];
    let a = p("(λx.x x) (λz.z) (λx.x x)");
    let sa = steps_of(&rules, &a, StepFilter::Any);
    for s in &sa {
        tr.line(format!("δIδ: {} at {} gives {}", s.rule, s.pos, s.target));
    }
    tr.check("δIδ is a σ1-redex", has(&sa, Rule::Sigma1, "ε"));
    tr.check("δIδ contains the βv-redex δI", has(&sa, Rule::BetaV, "fun"));
    let b = p("(λx.x x) ((λz.z) (λx.x x)) (x (λz.z))");
    let sb = steps_of(&rules, &b, StepFilter::Any);
    for s in &sb {
        tr.line(format!(
            "δ(Iδ)(xI): {} at {} gives {}",
            s.rule, s.pos, s.target
        ));
    }
    tr.check("δ(Iδ)(xI) is a σ1-redex", has(&sb, Rule::Sigma1, "ε"));
    tr.check(
        "it contains the σ3-redex δ(Iδ)",
        has(&sb, Rule::Sigma3, "fun"),
    );
    tr.check(
        "which contains the βv-redex Iδ",
        has(&sb, Rule::BetaV, "fun.arg"),
    );
    let c = p("(λz.z) z");
    let sc = steps_of(&rules, &c, StepFilter::Any);
    tr.check(
        "I z has only its βv step",
        sc.len() == 1 && sc[0].rule == Rule::BetaV,
    );
    tr
}

/// λx.(II)(Ix) reaches II only through a non-head step.
pub fn beta_eta_counterexample_demo() -> Transcript {
    let mut tr = Transcript::new("beta-eta-counterexample");
    let v = TermView::new(Calculus::new(
        "beta-eta",
        &[Rule::Beta, Rule::Eta],
        ContextClass::Head,
    ));
    let t = p("λx.(λz.z) (λz.z) ((λz.z) x)");
    let ii = p("(λz.z) (λz.z)");
    let first = v
        .steps(&t, Side::Inessential)
        .into_iter()
        .find(|s| s.rule == Rule::Beta && s.target.alpha_eq(&p("λx.(λz.z) (λz.z) x")));
    let second = first.as_ref().and_then(|s| {
        v.steps(&s.target, Side::Essential)
            .into_iter()
            .find(|s| s.rule == Rule::Eta && s.is_root())
    });
    if let (Some(a), Some(b)) = (&first, &second) {
        tr.line(show_chain(&v, &t, &[a.clone(), b.clone()]));
    }
    tr.check(
        "λx.(II)(Ix) →¬hβ λx.(II)x ↦η II",
        second.as_ref().is_some_and(|s| s.target.alpha_eq(&ii)),
    );
    let head_eta = v
        .steps(&t, Side::Essential)
        .iter()
        .any(|s| s.rule == Rule::Eta);
    tr.check("no head η step from λx.(II)(Ix)", !head_eta);
    let run = factorization_oracle(&v, &t, 2, 10_000);
    tr.line(format!(
        "head-first search closed after {} states",
        run.explored
    ));
    tr.check("search space is finite and closed", run.closed);
    tr.check(
        "oracle refutes the endpoint II",
        run.verdict_for(&v, &ii).is_some_and(|vd| vd.is_refuted()),
    );
    tr
}

/// (λx.xxx)(Iz) →¬h (λx.xxx)z →h zzz against the head-first four steps.
pub fn head_factorize_demo() -> Transcript {
    let mut tr = Transcript::new("head-factorize-example");
    let v = TermView::new(Calculus::new("beta", &[Rule::Beta], ContextClass::Head));
    let t = p("(λx.x x x) ((λz.z) z)");
    let zzz = p("z z z");
    let i = v.steps(&t, Side::Inessential);
    let e = i
        .first()
        .map(|s| v.steps(&s.target, Side::Essential))
        .unwrap_or_default();
    let seq: Vec<Step> = i.into_iter().take(1).chain(e.into_iter().take(1)).collect();
    tr.line(format!("mixed: {}", show_chain(&v, &t, &seq)));
    let expected = [
        "(λz.z) z ((λz.z) z) ((λz.z) z)",
        "z ((λz.z) z) ((λz.z) z)",
        "z z ((λz.z) z)",
        "z z z",
    ];
    let sides = [
        Side::Essential,
        Side::Essential,
        Side::Inessential,
        Side::Inessential,
    ];
    let matches = |w: &[Step]| {
        w.len() == 4
            && w.iter()
                .zip(expected)
                .all(|(s, x)| s.target.to_string() == x)
            && w.iter().zip(sides).all(|(s, sd)| v.side(s) == sd)
    };
    match reorder_sequence(&v, &t, &seq, 10_000) {
        Ok(Reordered::Factorized(w)) => {
            tr.line(format!("reordered: {}", show_chain(&v, &t, &w)));
            tr.check("reordering gives →h·→h·→¬h·→¬h ending z z z", matches(&w));
        }
        _ => tr.check("reordering gives →h·→h·→¬h·→¬h ending z z z", false),
    }
    let run = factorization_oracle(&v, &t, 2, 10_000);
    let ok =
        matches!(run.verdict_for(&v, &zzz), Some(Verdict::Holds { witness }) if matches(witness));
    tr.check("oracle witness is the same four steps", ok);
    let sp = check_swap(
        &SwapCheck::strong_postponement(&v.calculus, 6),
        &[t],
        10_000,
        4,
    );
    tr.check(
        "strong postponement fails on this peak",
        sp.counts.failed >= 1,
    );
    tr
}

/// (λx.xxx)(⊕pq) to p p p factorizes as →hβ·→h⊕·→¬h⊕·→¬h⊕.
pub fn oplus_factorize_demo() -> Transcript {
    let mut tr = Transcript::new("oplus-factorize-example");
    let v = TermView::new(Calculus::new(
        "lambda-oplus",
        &[Rule::Beta, Rule::Oplus],
        ContextClass::Head,
    ));
    let t = p("(λx.x x x) (oplus p q)");
    let ppp = p("p p p");
    let run = factorization_oracle(&v, &t, 2, 10_000);
    let shape = [
        (Rule::Beta, Side::Essential),
        (Rule::Oplus, Side::Essential),
        (Rule::Oplus, Side::Inessential),
        (Rule::Oplus, Side::Inessential),
    ];
    let ok = match run.verdict_for(&v, &ppp) {
        Some(Verdict::Holds { witness }) => {
            tr.line(format!("witness: {}", show_chain(&v, &t, witness)));
            witness.len() == 4
                && witness
                    .iter()
                    .zip(shape)
                    .all(|(s, (r, sd))| s.rule == r && v.side(s) == sd)
                && witness[3].target.alpha_eq(&ppp)
        }
        _ => false,
    };
    tr.check("oracle witness is →hβ·→h⊕·→¬h⊕·→¬h⊕ ending p p p", ok);
    tr
}

/// ⟦½(λx.x)z, ½(M⊕N)⟧ ⇛ ⟦½z, ¼M, ¼N⟧
pub fn prob_lift_demo() -> Transcript {
    let mut tr = Transcript::new("prob-lift");
    let half = Prob::new(1, 2);
    let quarter = Prob::new(1, 4);
    let m = MultiDist::new(vec![(half, p("(λx.x) z")), (half, p("m (+) n"))]).expect("mass 1");
    let expected =
        MultiDist::new(vec![(half, p("z")), (quarter, p("m")), (quarter, p("n"))]).expect("mass 1");
    let lifts = lift(LiftRel::Any, &m);
    for l in &lifts {
        tr.line(format!("{l}"));
    }
    tr.check(
        "the both-entries lift is exactly ⟦1/2·z, 1/4·m, 1/4·n⟧",
        lifts.iter().any(|l| l.target == expected),
    );
    tr.check(
        "every lift keeps mass 1",
        lifts
            .iter()
            .all(|l| l.target.mass() == Prob::from_integer(1)),
    );
    tr.check(
        "the pure-identity lift is not enumerated",
        lifts.iter().all(|l| l.moves.iter().any(Option::is_some)),
    );
    tr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_demos_match() {
        for name in DEMOS {
            let t = demo(name).unwrap();
            assert!(t.ok(), "{t}");
        }
        assert!(demo("nope").is_err());
    }
}
