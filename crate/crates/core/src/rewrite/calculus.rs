use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Rule;
use crate::term::{ContextClass, Term};

/// A calculus is data: a set of root rules closed under all contexts, and
/// the context class that makes a step essential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calculus {
    pub name: String,
    pub rules: Vec<Rule>,
    pub essential: ContextClass,
    #[serde(default)]
    pub allows_choice: bool,
    /// Constant alphabet available to corpora for this calculus.
    #[serde(default)]
    pub constants: Vec<String>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("calculus `{calculus}` does not allow choice nodes, found one in {term}")]
    ChoiceNotAllowed { calculus: String, term: String },
}

#[derive(Debug, Error)]
pub enum CalculusFileError {
    #[error("cannot read calculus file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed calculus file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("calculus `{0}` has no rules")]
    NoRules(String),
}

impl Calculus {
    pub fn new(name: &str, rules: &[Rule], essential: ContextClass) -> Calculus {
        let mut rules = rules.to_vec();
        rules.sort_by_key(|r| r.name());
        rules.dedup();
        Calculus {
            name: name.to_string(),
            rules,
            essential,
            allows_choice: false,
            constants: Vec::new(),
        }
    }

    pub fn with_choice(mut self) -> Calculus {
        self.allows_choice = true;
        self
    }

    pub fn with_constants(mut self, constants: &[&str]) -> Calculus {
        self.constants = constants.iter().map(|c| c.to_string()).collect();
        self
    }

    /// Same rules, different essential class.
    pub fn with_essential(&self, essential: ContextClass) -> Calculus {
        Calculus {
            essential,
            ..self.clone()
        }
    }

    /// Restriction to a subset of the rules.
    pub fn restrict(&self, name: &str, rules: &[Rule]) -> Calculus {
        let mut c = Calculus::new(name, rules, self.essential);
        c.allows_choice = self.allows_choice;
        c.constants = self.constants.clone();
        c
    }

    pub fn check_grammar(&self, t: &Term) -> Result<(), GrammarError> {
        if !self.allows_choice && t.contains_choice() {
            return Err(GrammarError::ChoiceNotAllowed {
                calculus: self.name.clone(),
                term: t.to_string(),
            });
        }
        Ok(())
    }

    pub fn from_json(src: &str) -> Result<Calculus, CalculusFileError> {
        let raw: Calculus = serde_json::from_str(src)?;
        if raw.rules.is_empty() {
            return Err(CalculusFileError::NoRules(raw.name));
        }
        let mut c = Calculus::new(&raw.name, &raw.rules, raw.essential);
        c.allows_choice = raw.allows_choice;
        c.constants = raw.constants;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Calculus, CalculusFileError> {
        Calculus::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_are_sorted_by_name() {
        let c = Calculus::new(
            "x",
            &[Rule::Sigma3, Rule::BetaV, Rule::Sigma1, Rule::Z],
            ContextClass::Weak,
        );
        let names: Vec<_> = c.rules.iter().map(|r| r.name()).collect();
        assert_eq!(names, ["Z", "betav", "sigma1", "sigma3"]);
    }

    #[test]
    fn json_file_interface() {
        let c = Calculus::from_json(
            r#"{"name":"beta-eta","rules":["eta","beta"],"essential":"head","constants":[]}"#,
        )
        .unwrap();
        assert_eq!(c.rules, vec![Rule::Beta, Rule::Eta]);
        assert_eq!(c.essential, ContextClass::Head);
        assert!(
            Calculus::from_json(r#"{"name":"n","rules":["gamma"],"essential":"head"}"#).is_err()
        );
        assert!(matches!(
            Calculus::from_json(r#"{"name":"n","rules":[],"essential":"head"}"#),
            Err(CalculusFileError::NoRules(_))
        ));
    }

    #[test]
    fn choice_is_rejected_unless_allowed() {
        let t = crate::term::parse("x (+) y").unwrap();
        let c = Calculus::new("beta", &[Rule::Beta], ContextClass::Head);
        assert!(c.check_grammar(&t).is_err());
        assert!(c.with_choice().check_grammar(&t).is_ok());
    }
}
