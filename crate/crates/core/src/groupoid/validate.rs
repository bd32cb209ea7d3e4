use std::fmt;

use super::FiniteGroupoid;

/// Reports stop collecting after this many violations.
const MAX_VIOLATIONS: usize = 64;

/// The axiom a [`Violation`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    IdentityEndpoints,
    Unit,
    CompositionTotality,
    CompositionDomain,
    CompositionEndpoints,
    Associativity,
    Inverse,
    LeftActionDomain,
    RightActionDomain,
    LeftActionAnchors,
    RightActionAnchors,
    LeftActionUnit,
    RightActionUnit,
    LeftActionAssociativity,
    RightActionAssociativity,
    ActionsCommute,
    LeftActionNotFree,
    RightActionNotFree,
    LeftActionNotTransitive,
    RightActionNotTransitive,
    LeftAnchorNotSurjective,
    RightAnchorNotSurjective,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::IdentityEndpoints => "identity axiom",
            Axiom::Unit => "unit axiom",
            Axiom::CompositionTotality => "composition totality",
            Axiom::CompositionDomain => "composition domain",
            Axiom::CompositionEndpoints => "composition endpoints",
            Axiom::Associativity => "associativity",
            Axiom::Inverse => "inverse axiom",
            Axiom::LeftActionDomain => "left action domain",
            Axiom::RightActionDomain => "right action domain",
            Axiom::LeftActionAnchors => "left action anchors",
            Axiom::RightActionAnchors => "right action anchors",
            Axiom::LeftActionUnit => "left action unit",
            Axiom::RightActionUnit => "right action unit",
            Axiom::LeftActionAssociativity => "left action associativity",
            Axiom::RightActionAssociativity => "right action associativity",
            Axiom::ActionsCommute => "actions commute",
            Axiom::LeftActionNotFree => "left action not free",
            Axiom::RightActionNotFree => "right action not free",
            Axiom::LeftActionNotTransitive => "left action not transitive",
            Axiom::RightActionNotTransitive => "right action not transitive",
            Axiom::LeftAnchorNotSurjective => "left anchor not surjective",
            Axiom::RightAnchorNotSurjective => "right anchor not surjective",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Ids of the objects, arrows or bibundle elements involved.
    pub witnesses: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [witness {}]", self.axiom, self.detail, self.witnesses.join(", "))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// More violations exist than were recorded.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// Record a violation; returns false once the report is full.
    pub(crate) fn push(&mut self, axiom: Axiom, witnesses: Vec<String>, detail: String) -> bool {
        if self.violations.len() >= MAX_VIOLATIONS {
            self.truncated = true;
            return false;
        }
        self.violations.push(Violation {
            axiom,
            witnesses,
            detail,
        });
        true
    }

    pub(crate) fn full(&self) -> bool {
        self.violations.len() >= MAX_VIOLATIONS
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let shown: Vec<String> = self.violations.iter().take(3).map(|v| v.to_string()).collect();
        write!(f, "{}", shown.join("; "))?;
        let rest = self.violations.len().saturating_sub(3);
        if rest > 0 || self.truncated {
            write!(f, " (+{rest}{} more)", if self.truncated { "+" } else { "" })?;
        }
        Ok(())
    }
}

impl FiniteGroupoid {
    /// Exhaustively check the groupoid axioms.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let a = |g: usize| self.arrow_id(g).to_string();
        let o = |x: usize| self.object_id(x).to_string();

        for x in 0..self.object_count() {
            let e = self.identity(x);
            if self.source(e) != x || self.target(e) != x {
                report.push(
                    Axiom::IdentityEndpoints,
                    vec![o(x), a(e)],
                    format!("identity of {} is not a loop at it", o(x)),
                );
            }
        }

        for &(g, h, gh) in self.stray_entries() {
            report.push(
                Axiom::CompositionDomain,
                vec![a(g), a(h), a(gh)],
                format!("product given for non-composable pair ({}, {})", a(g), a(h)),
            );
        }

        for g in 0..self.arrow_count() {
            if report.full() {
                report.truncated = true;
                return report;
            }
            for &h in self.outgoing(self.target(g)) {
                match self.compose(g, h) {
                    None => {
                        report.push(
                            Axiom::CompositionTotality,
                            vec![a(g), a(h)],
                            format!("no product for composable pair ({}, {})", a(g), a(h)),
                        );
                    }
                    Some(gh) => {
                        if self.source(gh) != self.source(g) || self.target(gh) != self.target(h) {
                            report.push(
                                Axiom::CompositionEndpoints,
                                vec![a(g), a(h), a(gh)],
                                format!("anchors of {} do not match l({}) and r({})", a(gh), a(g), a(h)),
                            );
                        }
                    }
                }
            }

            let left_unit = self.identity(self.source(g));
            let right_unit = self.identity(self.target(g));
            if self.compose(left_unit, g) != Some(g) || self.compose(g, right_unit) != Some(g) {
                report.push(Axiom::Unit, vec![a(g)], format!("identities do not fix {}", a(g)));
            }

            let gi = self.inverse(g);
            let anchors_ok = self.source(gi) == self.target(g) && self.target(gi) == self.source(g);
            if !anchors_ok
                || self.compose(g, gi) != Some(left_unit)
                || self.compose(gi, g) != Some(right_unit)
            {
                report.push(
                    Axiom::Inverse,
                    vec![a(g), a(gi)],
                    format!("{} is not an inverse of {}", a(gi), a(g)),
                );
            }
        }

        for g in 0..self.arrow_count() {
            for &h in self.outgoing(self.target(g)) {
                let Some(gh) = self.compose(g, h) else { continue };
                for &k in self.outgoing(self.target(h)) {
                    let Some(hk) = self.compose(h, k) else { continue };
                    let (left, right) = (self.compose(gh, k), self.compose(g, hk));
                    if left.is_some() && right.is_some() && left != right {
                        let pushed = report.push(
                            Axiom::Associativity,
                            vec![a(g), a(h), a(k)],
                            format!("(gh)k != g(hk) for ({}, {}, {})", a(g), a(h), a(k)),
                        );
                        if !pushed {
                            return report;
                        }
                    }
                }
            }
        }
        report
    }
}
