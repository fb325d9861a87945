//! Cross-checks between deciders on a single instance.

use serde::Serialize;

use super::{
    decide_cobordant, decide_cobordant_rel_boundary, decide_concordant, decide_oriented_cobordant, reduce,
    surface_class, DecideError, GroupKind, Query,
};
use crate::homology::classes_equal;
use crate::surfaces::{Answer, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Holds,
    /// The premise is not `yes`.
    Vacuous,
    /// Some side could not be evaluated on this instance.
    Skipped,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditCheck {
    pub implication: &'static str,
    pub status: AuditStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn violations(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| c.status == AuditStatus::Violated)
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

fn implication(
    name: &'static str,
    premise: &Result<Verdict, DecideError>,
    conclusion: &Result<Verdict, DecideError>,
) -> AuditCheck {
    let (status, detail) = match (premise, conclusion) {
        (Err(e), _) => (AuditStatus::Skipped, Some(format!("premise: {e}"))),
        (Ok(p), _) if !p.is_yes() => (AuditStatus::Vacuous, None),
        (_, Err(e)) => (AuditStatus::Skipped, Some(format!("conclusion: {e}"))),
        (_, Ok(c)) if c.answer == Answer::NotApplicable => (
            AuditStatus::Skipped,
            Some("conclusion not applicable".to_string()),
        ),
        (_, Ok(c)) if c.is_yes() => (AuditStatus::Holds, None),
        (_, Ok(c)) => (
            AuditStatus::Violated,
            Some(format!(
                "conclusion failed on {:?}",
                c.obstructions.iter().map(|o| o.name()).collect::<Vec<_>>()
            )),
        ),
    };
    AuditCheck {
        implication: name,
        status,
        detail,
    }
}

/// Check the implications between deciders on the query's ambient manifold
/// and first two surfaces. Fewer than two surfaces give an empty report.
pub fn consistency_audit(q: &Query) -> AuditReport {
    let [a, b] = match q.surfaces.as_slice() {
        [a, b, ..] => [a, b],
        _ => return AuditReport::default(),
    };
    let x = &q.ambient;
    let union = q.union_class.as_ref();
    let conc = decide_concordant(x, a, b, None, union);
    let rel = decide_cobordant_rel_boundary(x, a, b, union);
    let cob = decide_cobordant(x, a, b);
    let ori = decide_oriented_cobordant(x, a, b);

    let mut checks = vec![
        implication("concordant => cobordant_rel_boundary", &conc, &rel),
        implication("cobordant_rel_boundary => cobordant", &rel, &cob),
        implication("concordant => cobordant", &conc, &cob),
    ];

    let reduced = || -> Result<bool, DecideError> {
        let ca = reduce(x, &surface_class(x, a, GroupKind::RelZ)?, true)?;
        let cb = reduce(x, &surface_class(x, b, GroupKind::RelZ)?, true)?;
        Ok(classes_equal(&ca, &cb)?)
    };
    let name = "oriented_cobordant => mod-2 classes equal";
    checks.push(match &ori {
        Err(e) => AuditCheck {
            implication: name,
            status: AuditStatus::Skipped,
            detail: Some(format!("premise: {e}")),
        },
        Ok(v) if !v.is_yes() => AuditCheck {
            implication: name,
            status: AuditStatus::Vacuous,
            detail: None,
        },
        Ok(_) => match reduced() {
            Ok(true) => AuditCheck {
                implication: name,
                status: AuditStatus::Holds,
                detail: None,
            },
            Ok(false) => AuditCheck {
                implication: name,
                status: AuditStatus::Violated,
                detail: Some("reductions differ".into()),
            },
            Err(e) => AuditCheck {
                implication: name,
                status: AuditStatus::Skipped,
                detail: Some(format!("reduction: {e}")),
            },
        },
    });
    AuditReport { checks }
}
