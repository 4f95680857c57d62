use serde::{Deserialize, Serialize};

use crate::gen::CorpusSpec;
use crate::rewrite::{Calculus, Rule};
use crate::term::{ContextClass, FIX_Y, FIX_Z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Pass,
    Fail,
}

/// What a suite runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SuiteKind {
    ShapePreservation,
    /// The bounded oracle on the whole calculus.
    FactorizationOracle,
    StrongPostponement,
    /// →i·→e ⊆ →e·→= on the sub-calculus of `rules`.
    LinearPostponement {
        rules: Vec<Rule>,
    },
    /// Three-part head test; `sharp` closes the root swap with at most one β step.
    HeadTest {
        gamma: Rule,
        sharp: bool,
    },
    LeftWeakTest {
        gammas: Vec<Rule>,
    },
    /// ¬eγ·↦σi ⊆ ↦σi·→γ for γ ∈ {βv, σ} and i ∈ {1, 3}.
    SigmaRootSwaps,
    SigmaTermination,
    /// Composed peaks →iα^k·→eγ against single-peak closings.
    Composition {
        alpha: Vec<Rule>,
        gamma: Vec<Rule>,
        max_chain: usize,
    },
    Demo {
        name: String,
    },
    ProbSurfaceSwap,
    ProbFactorization,
    MassConservation,
    Embedding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suite {
    pub id: String,
    pub essential: ContextClass,
    pub kind: SuiteKind,
    pub expected: Expected,
    /// For an expected failure inside a three-part test, the sub-check that fails.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fails_at: Option<usize>,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub calculus: Calculus,
    pub anchor: String,
    pub corpus: CorpusSpec,
    /// Terms added to the generated corpus.
    pub fixtures: Vec<String>,
    pub suites: Vec<Suite>,
    pub confluence: String,
}

impl CatalogEntry {
    pub fn suite(&self, id: &str, essential: Option<ContextClass>) -> Vec<&Suite> {
        self.suites
            .iter()
            .filter(|s| s.id == id && essential.is_none_or(|e| s.essential == e))
            .collect()
    }

    pub fn essentials(&self) -> Vec<ContextClass> {
        let mut v: Vec<ContextClass> = self.suites.iter().map(|s| s.essential).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn suite(
    id: &str,
    essential: ContextClass,
    kind: SuiteKind,
    expected: Expected,
    anchor: &str,
) -> Suite {
    Suite {
        id: id.to_string(),
        essential,
        kind,
        expected,
        fails_at: None,
        anchor: anchor.to_string(),
    }
}

fn pass(id: &str, e: ContextClass, kind: SuiteKind, anchor: &str) -> Suite {
    suite(id, e, kind, Expected::Pass, anchor)
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

const HEAD: ContextClass = ContextClass::Head;
const LEFT: ContextClass = ContextClass::Left;
const WEAK: ContextClass = ContextClass::Weak;

fn beta() -> CatalogEntry {
    let calculus = Calculus::new("beta", &[Rule::Beta], HEAD);
    CatalogEntry {
        name: "beta".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["y", "z"]),
        calculus,
        anchor: "call-by-name λ-calculus, head factorization".into(),
        fixtures: strs(&["(λx.x x x) ((λz.z) z)"]),
        suites: vec![
            pass(
                "shape-preservation",
                HEAD,
                SuiteKind::ShapePreservation,
                "shape preservation for head contexts",
            ),
            pass(
                "factorization-oracle",
                HEAD,
                SuiteKind::FactorizationOracle,
                "head factorization of β",
            ),
            suite(
                "strong-postponement",
                HEAD,
                SuiteKind::StrongPostponement,
                Expected::Fail,
                "duplication example: strong postponement fails for head β",
            ),
            pass(
                "duplication-example",
                HEAD,
                SuiteKind::Demo {
                    name: "head-factorize-example".into(),
                },
                "duplication example: four-step head-first sequence",
            ),
        ],
        confluence: "confluent (background, not checked)".into(),
    }
}

fn lambda_oplus() -> CatalogEntry {
    let calculus = Calculus::new("lambda-oplus", &[Rule::Beta, Rule::Oplus], HEAD);
    CatalogEntry {
        name: "lambda-oplus".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["p", "q"]),
        calculus,
        anchor: "non-deterministic λ-calculus, head factorization by the modular test".into(),
        fixtures: strs(&[
            "(λx.x x x) (oplus p q)",
            "(λx.x x) (oplus p q)",
            // ⊕ terms with an inner redex start at size 8.
            "oplus ((λx.x) p) q",
            "oplus p ((λx.x) q)",
            "oplus (oplus p q) q",
            "oplus p q (oplus p q)",
            "oplus ((λx.x x) ((λy.y) p)) q",
            "oplus (λx.(λy.y) x) ((λz.z) q)",
        ]),
        suites: vec![
            pass(
                "head-test",
                HEAD,
                SuiteKind::HeadTest {
                    gamma: Rule::Oplus,
                    sharp: true,
                },
                "testing head factorization of β ∪ ⊕",
            ),
            pass(
                "oplus-postponement",
                HEAD,
                SuiteKind::LinearPostponement {
                    rules: vec![Rule::Oplus],
                },
                "non-head ⊕ linearly postpones after head ⊕",
            ),
            pass(
                "composition",
                HEAD,
                SuiteKind::Composition {
                    alpha: vec![Rule::Beta],
                    gamma: vec![Rule::Oplus],
                    max_chain: 3,
                },
                "single linear swaps compose along non-essential chains",
            ),
            pass(
                "shape-preservation",
                HEAD,
                SuiteKind::ShapePreservation,
                "shape preservation for head contexts",
            ),
            pass(
                "factorization-oracle",
                HEAD,
                SuiteKind::FactorizationOracle,
                "head factorization of β ∪ ⊕",
            ),
            pass(
                "oplus-example",
                HEAD,
                SuiteKind::Demo {
                    name: "oplus-factorize-example".into(),
                },
                "choice example: →hβ·→h⊕·→¬h⊕·→¬h⊕",
            ),
            pass(
                "nd-duplication",
                HEAD,
                SuiteKind::Demo {
                    name: "nd-duplication".into(),
                },
                "choice duplication breaks confluence",
            ),
        ],
        confluence: "not confluent (witnessed by the nd-duplication demo)".into(),
    }
}

fn shuffling() -> CatalogEntry {
    let calculus = Calculus::new(
        "shuffling",
        &[Rule::BetaV, Rule::Sigma1, Rule::Sigma3],
        LEFT,
    );
    let sigma = vec![Rule::Sigma1, Rule::Sigma3];
    let mut suites = Vec::new();
    for e in [LEFT, WEAK] {
        suites.push(pass(
            &format!("{e}-test"),
            e,
            SuiteKind::LeftWeakTest {
                gammas: sigma.clone(),
            },
            "testing left and weak factorization of the shuffling calculus",
        ));
        suites.push(pass(
            "sigma-root-swaps",
            e,
            SuiteKind::SigmaRootSwaps,
            "root linear swaps of σ1 and σ3 against βv and σ",
        ));
        suites.push(pass(
            "sigma-postponement",
            e,
            SuiteKind::LinearPostponement {
                rules: sigma.clone(),
            },
            "non-essential σ linearly postpones after essential σ",
        ));
        suites.push(pass(
            "shape-preservation",
            e,
            SuiteKind::ShapePreservation,
            "shape preservation for CbV contexts",
        ));
        suites.push(pass(
            "factorization-oracle",
            e,
            SuiteKind::FactorizationOracle,
            "left and weak factorization of βv ∪ σ",
        ));
    }
    suites.push(pass(
        "sigma-termination",
        LEFT,
        SuiteKind::SigmaTermination,
        "σ reduction terminates",
    ));
    suites.push(pass(
        "sigma-overlap",
        LEFT,
        SuiteKind::Demo {
            name: "sigma-overlap".into(),
        },
        "overlaps between σ and βv redexes",
    ));
    CatalogEntry {
        name: "shuffling".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["y", "z"]),
        calculus,
        anchor: "shuffling calculus (βv with σ1 and σ3), left and weak factorization".into(),
        fixtures: strs(&[
            "(λx.x x) (λz.z) (λx.x x)",
            "(λx.x x) ((λz.z) (λx.x x)) (y (λz.z))",
            // Root σ redexes created by an inner step start at size 9.
            "(λx.(λy.y) x) z w",
            "(λx.x) z ((λy.y) w)",
            "z ((λx.(λy.y) x) w)",
            "(λx.(λy.y) z w) u v",
            "z ((λx.(λy.y) z w) u)",
        ]),
        suites,
        confluence: "not checked".into(),
    }
}

fn beta_y() -> CatalogEntry {
    let calculus = Calculus::new("beta-Y", &[Rule::Beta, Rule::Y], HEAD).with_constants(&[FIX_Y]);
    CatalogEntry {
        name: "beta-Y".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["y", "z"]),
        calculus,
        anchor: "call-by-name fixpoint, head factorization of β ∪ Y".into(),
        fixtures: strs(&["Y ((λx.x) y)", "(λx.x x) (Y y)"]),
        suites: vec![
            pass(
                "head-test",
                HEAD,
                SuiteKind::HeadTest {
                    gamma: Rule::Y,
                    sharp: false,
                },
                "testing head factorization for βY",
            ),
            pass(
                "shape-preservation",
                HEAD,
                SuiteKind::ShapePreservation,
                "shape preservation for head contexts",
            ),
            pass(
                "factorization-oracle",
                HEAD,
                SuiteKind::FactorizationOracle,
                "head factorization of β ∪ Y",
            ),
        ],
        confluence: "not checked".into(),
    }
}

fn betav_z() -> CatalogEntry {
    let calculus = Calculus::new("betav-Z", &[Rule::BetaV, Rule::Z], WEAK).with_constants(&[FIX_Z]);
    CatalogEntry {
        name: "betav-Z".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["y", "z"]),
        calculus,
        anchor: "call-by-value fixpoint, weak factorization of βv ∪ Z".into(),
        fixtures: strs(&["Z (λx.(λw.w) x)", "(λx.x) (Z y)"]),
        suites: vec![
            pass(
                "weak-test",
                WEAK,
                SuiteKind::LeftWeakTest {
                    gammas: vec![Rule::Z],
                },
                "testing weak factorization for βv Z",
            ),
            pass(
                "shape-preservation",
                WEAK,
                SuiteKind::ShapePreservation,
                "shape preservation for weak contexts",
            ),
            pass(
                "factorization-oracle",
                WEAK,
                SuiteKind::FactorizationOracle,
                "weak factorization of βv ∪ Z",
            ),
        ],
        confluence: "not checked".into(),
    }
}

fn beta_eta() -> CatalogEntry {
    let calculus = Calculus::new("beta-eta", &[Rule::Beta, Rule::Eta], HEAD);
    let mut head = suite(
        "head-test",
        HEAD,
        SuiteKind::HeadTest {
            gamma: Rule::Eta,
            sharp: false,
        },
        Expected::Fail,
        "finding counter-examples: η breaks the root swap",
    );
    head.fails_at = Some(2);
    CatalogEntry {
        name: "beta-eta".into(),
        corpus: CorpusSpec::for_calculus(&calculus, 7, &["y", "z"]),
        calculus,
        anchor: "βη has neither head nor leftmost factorization".into(),
        fixtures: strs(&["λx.(λz.z) (λz.z) ((λz.z) x)"]),
        suites: vec![
            head,
            suite(
                "factorization-oracle",
                HEAD,
                SuiteKind::FactorizationOracle,
                Expected::Fail,
                "λx.(II)(Ix) has no head-first path to II",
            ),
            pass(
                "counterexample",
                HEAD,
                SuiteKind::Demo {
                    name: "beta-eta-counterexample".into(),
                },
                "λx.(II)(Ix) →¬hβ λx.(II)x ↦η II",
            ),
            pass(
                "shape-preservation",
                HEAD,
                SuiteKind::ShapePreservation,
                "shape preservation for head contexts",
            ),
        ],
        confluence: "confluent (background, not checked)".into(),
    }
}

fn prob_cbv() -> CatalogEntry {
    let calculus = Calculus::new("prob-cbv", &[Rule::BetaV], WEAK).with_choice();
    let corpus = CorpusSpec::for_calculus(&calculus, 6, &["y", "z"]);
    CatalogEntry {
        name: "prob-cbv".into(),
        corpus,
        calculus,
        anchor: "probabilistic call-by-value calculus, surface factorization".into(),
        fixtures: strs(&["((λx.x) z (+) y) z", "(λy.(λx.x) y) ((λz.z) (+) y)"]),
        suites: vec![
            pass(
                "surface-swap",
                WEAK,
                SuiteKind::ProbSurfaceSwap,
                "surface swap of deep βv with ⊕",
            ),
            pass(
                "factorization-oracle",
                WEAK,
                SuiteKind::ProbFactorization,
                "surface factorization of ⇛",
            ),
            pass(
                "mass-conservation",
                WEAK,
                SuiteKind::MassConservation,
                "lifting preserves mass",
            ),
            pass(
                "embedding",
                WEAK,
                SuiteKind::Embedding,
                "⊕-free distributions embed plain βv",
            ),
            pass(
                "shape-preservation",
                WEAK,
                SuiteKind::ShapePreservation,
                "shape preservation for weak contexts",
            ),
            pass(
                "worked-lift",
                WEAK,
                SuiteKind::Demo {
                    name: "prob-lift".into(),
                },
                "⟦½(λx.x)z, ½(M⊕N)⟧ ⇛ ⟦½z, ¼M, ¼N⟧",
            ),
        ],
        confluence: "not checked".into(),
    }
}

/// Every built-in calculus with its suites and expected outcomes.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        beta(),
        lambda_oplus(),
        shuffling(),
        beta_y(),
        betav_z(),
        beta_eta(),
        prob_cbv(),
    ]
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}
