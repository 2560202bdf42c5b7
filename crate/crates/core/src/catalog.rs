//! Built-in reference triples with known membership, and premise-satisfying
//! pairs for the composition theorems.

use serde::Serialize;

use crate::classes::ConvexityClass;
use crate::error::Result;
use crate::funcmodel::{Interval, PhiMap, RealFunction};
use crate::theorems::TheoremId;

/// How φ relates to the composition hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    /// φ affine.
    AffinePhi,
    /// φ convex and `f` increasing.
    ConvexPhiIncreasingF,
    /// Neither.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub f: &'static str,
    pub phi: &'static str,
    pub interval: (f64, f64),
    pub class: ConvexityClass,
    pub member: bool,
    pub setting: Setting,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<(RealFunction, PhiMap)> {
        let i = Interval::new(self.interval.0, self.interval.1)?;
        Ok((RealFunction::parse(self.f, i)?, PhiMap::parse(self.phi, i)?))
    }
}

const UNIT: (f64, f64) = (0.0, 1.0);
const HALF: ConvexityClass = ConvexityClass::PhiH {
    h: crate::classes::HSpec::Power { s: 0.5 },
};

fn entry(
    f: &'static str,
    phi: &'static str,
    interval: (f64, f64),
    class: ConvexityClass,
    member: bool,
    setting: Setting,
) -> CatalogEntry {
    CatalogEntry {
        f,
        phi,
        interval,
        class,
        member,
        setting,
    }
}

pub fn members() -> Vec<CatalogEntry> {
    use ConvexityClass::*;
    use Setting::*;
    vec![
        entry("x^2", "x", UNIT, ConvexityClass::PHI_CONVEX, true, AffinePhi),
        entry("exp(x)", "x^2", UNIT, ConvexityClass::PHI_CONVEX, true, ConvexPhiIncreasingF),
        entry("x^2", "0.5*x+0.25", UNIT, HALF, true, AffinePhi),
        entry("exp(x)", "x^2", UNIT, HALF, true, ConvexPhiIncreasingF),
        entry("sqrt(x)", "x", UNIT, ConvexityClass::GODUNOVA_LEVIN, true, AffinePhi),
        entry("1+x^2", "x^2", UNIT, ConvexityClass::GODUNOVA_LEVIN, true, ConvexPhiIncreasingF),
        entry("sqrt(x)", "0.5*x+0.5", UNIT, ConvexityClass::PHI_P, true, AffinePhi),
        entry("1", "x^2", UNIT, ConvexityClass::PHI_P, true, ConvexPhiIncreasingF),
        entry("exp(x)", "x", UNIT, LogPhi, true, AffinePhi),
        entry("exp(x^2)", "x^2", UNIT, LogPhi, true, ConvexPhiIncreasingF),
        entry("1/x", "0.5*x+1", (1.0, 2.0), LogPhi, true, AffinePhi),
        entry("sqrt(x)", "x", UNIT, QuasiPhi, true, AffinePhi),
        entry("exp(-x)", "0.5*x+0.25", UNIT, QuasiPhi, true, AffinePhi),
        entry("sqrt(x)", "x^2", UNIT, QuasiPhi, true, ConvexPhiIncreasingF),
        entry("abs(x-0.5)+0.1", "x^2", UNIT, QuasiPhi, true, General),
    ]
}

pub fn non_members() -> Vec<CatalogEntry> {
    use ConvexityClass::*;
    use Setting::*;
    vec![
        entry("sqrt(x)", "x", UNIT, ConvexityClass::PHI_CONVEX, false, AffinePhi),
        entry("sqrt(x)", "x^2", UNIT, ConvexityClass::PHI_CONVEX, false, ConvexPhiIncreasingF),
        entry("0.25-(x-0.5)^2", "x", UNIT, HALF, false, AffinePhi),
        entry("0.25-(x-0.5)^2", "x", UNIT, ConvexityClass::GODUNOVA_LEVIN, false, AffinePhi),
        entry("0.25-(x-0.5)^2", "x", UNIT, ConvexityClass::PHI_P, false, AffinePhi),
        entry("1+sqrt(x)", "x", UNIT, LogPhi, false, AffinePhi),
        entry("1.25-(x-0.5)^2", "x", UNIT, QuasiPhi, false, AffinePhi),
    ]
}

pub fn all() -> Vec<CatalogEntry> {
    let mut out = members();
    out.extend(non_members());
    out
}

/// A premise-satisfying `(f, φ)` pair for a composition theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionCase {
    pub theorem: TheoremId,
    pub f: &'static str,
    pub phi: &'static str,
    pub interval: (f64, f64),
    pub setting: Setting,
}

impl CompositionCase {
    pub fn build(&self) -> Result<(RealFunction, PhiMap)> {
        let i = Interval::new(self.interval.0, self.interval.1)?;
        Ok((RealFunction::parse(self.f, i)?, PhiMap::parse(self.phi, i)?))
    }
}

pub fn composition_cases() -> Vec<CompositionCase> {
    use Setting::*;
    use TheoremId::*;
    let case = |theorem, f, phi, setting| CompositionCase {
        theorem,
        f,
        phi,
        interval: UNIT,
        setting,
    };
    vec![
        case(SConvexComposition { s: 0.5 }, "exp(x)", "0.5*x+0.25", AffinePhi),
        case(SConvexComposition { s: 0.5 }, "exp(x)", "x^2", ConvexPhiIncreasingF),
        case(GodunovaLevinComposition, "1+x^2", "0.5*x+0.25", AffinePhi),
        case(GodunovaLevinComposition, "sqrt(x)", "x^2", ConvexPhiIncreasingF),
        case(PClassComposition, "sqrt(x)", "0.5*x+0.5", AffinePhi),
        case(PClassComposition, "1", "x^2", ConvexPhiIncreasingF),
        case(LogConvexComposition, "exp(x)", "0.5*x+0.2", AffinePhi),
        case(LogConvexComposition, "exp(x)", "x^2", ConvexPhiIncreasingF),
        case(QuasiConvexComposition, "exp(-x)", "0.5*x+0.25", AffinePhi),
        case(QuasiConvexComposition, "sqrt(x)", "x^2", ConvexPhiIncreasingF),
    ]
}

/// Fixed-width listing of the catalog.
pub fn render_table() -> String {
    let mut out = format!(
        "{:<18} {:<12} {:<10} {:<22} {:<11} {}\n",
        "f", "phi", "interval", "class", "membership", "setting"
    );
    for e in all() {
        let setting = match e.setting {
            Setting::AffinePhi => "affine phi",
            Setting::ConvexPhiIncreasingF => "convex phi, increasing f",
            Setting::General => "general",
        };
        out.push_str(&format!(
            "{:<18} {:<12} {:<10} {:<22} {:<11} {}\n",
            e.f,
            e.phi,
            format!("[{}, {}]", e.interval.0, e.interval.1),
            e.class.to_string(),
            if e.member { "member" } else { "non-member" },
            setting
        ));
    }
    out
}
