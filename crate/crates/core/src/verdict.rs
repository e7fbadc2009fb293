use serde::Serialize;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub check: String,
    pub pass: bool,
    /// Number of instances examined.
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckVerdict {
    pub fn new(check: impl Into<String>) -> Self {
        CheckVerdict {
            check: check.into(),
            pass: true,
            checked: 0,
            counterexample: None,
        }
    }

    /// Counts one instance; the first failure is kept as the counterexample.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.counterexample = Some(witness());
        }
    }
}

/// Both sides of a lemma equivalence at a failing formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub formula: String,
    pub side_left: String,
    pub side_right: String,
}

/// Outcome of certifying a lemma over a formula suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaVerdict {
    pub lemma: String,
    pub formulas_checked: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl LemmaVerdict {
    pub fn new(lemma: impl Into<String>) -> Self {
        LemmaVerdict {
            lemma: lemma.into(),
            formulas_checked: 0,
            pass: true,
            witness: None,
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Witness) {
        self.formulas_checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }
}

/// A suite that was not run, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub skipped: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Verdict {
    Check(CheckVerdict),
    Lemma(LemmaVerdict),
    Skipped(Skipped),
}

impl Verdict {
    /// Skipped suites count as passing.
    pub fn pass(&self) -> bool {
        match self {
            Verdict::Check(c) => c.pass,
            Verdict::Lemma(l) => l.pass,
            Verdict::Skipped(_) => true,
        }
    }
}

impl From<CheckVerdict> for Verdict {
    fn from(v: CheckVerdict) -> Self {
        Verdict::Check(v)
    }
}

impl From<LemmaVerdict> for Verdict {
    fn from(v: LemmaVerdict) -> Self {
        Verdict::Lemma(v)
    }
}
