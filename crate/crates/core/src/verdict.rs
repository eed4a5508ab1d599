/// Outcome of a check. `Inconclusive` means a bounded search ran out of room
/// before deciding; it is never reported as a failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Pass,
    Fail(W),
    Inconclusive(W),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) | Verdict::Inconclusive(w) => Some(w),
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Pass => Verdict::Pass,
            Verdict::Fail(w) => Verdict::Fail(f(w)),
            Verdict::Inconclusive(w) => Verdict::Inconclusive(f(w)),
        }
    }
}
