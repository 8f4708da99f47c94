//! Named constructions: one entry point per design family, driven by a flat set
//! of optional parameters so that a command line or a config file can describe
//! any of them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::design::{AbstractDesign, DesignError, DivisibleDesign, Provenance};
use crate::document::{parse_matrix, DesignDocument, DocumentError};
use crate::field::{Field, FieldError, FieldSpec};
use crate::generators::{
    code_point_set, elliptic_quadric, trivial_design, veronese_variety, witt12_embedding, witt24_embedding,
    witt24_report, EmbeddedDesign, GeneratorError,
};
use crate::limits::{GuardExceeded, Limits};
use crate::lifting::{
    affine_polynomial_dd, build_lifted_design, build_section_design, predict_affine_polynomial_dd,
    predict_product_lift, predicted_params, product_lift, LiftError, LiftingContext, PredictedParams,
    ProductLiftingSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    NrcLift,
    VeroneseLift,
    Witt12,
    Witt12Lift,
    Witt24,
    TrivialLift,
    Quadric,
    Product,
    Code,
    AffinePoly,
    Sections,
}

impl Construction {
    pub const ALL: [Construction; 11] = [
        Construction::NrcLift,
        Construction::VeroneseLift,
        Construction::Witt12,
        Construction::Witt12Lift,
        Construction::Witt24,
        Construction::TrivialLift,
        Construction::Quadric,
        Construction::Product,
        Construction::Code,
        Construction::AffinePoly,
        Construction::Sections,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Construction::NrcLift => "nrc-lift",
            Construction::VeroneseLift => "veronese-lift",
            Construction::Witt12 => "witt12",
            Construction::Witt12Lift => "witt12-lift",
            Construction::Witt24 => "witt24",
            Construction::TrivialLift => "trivial-lift",
            Construction::Quadric => "quadric",
            Construction::Product => "product",
            Construction::Code => "code",
            Construction::AffinePoly => "affine-poly",
            Construction::Sections => "sections",
        }
    }

    /// Flags this construction reads; anything else is a usage error.
    fn accepted(self) -> &'static [&'static str] {
        match self {
            Construction::NrcLift => &["q", "p", "e", "modulus", "t", "c", "k"],
            Construction::VeroneseLift => &["q", "p", "e", "modulus", "m", "t", "c", "k"],
            Construction::Witt12 => &[],
            Construction::Witt12Lift => &["c"],
            Construction::Witt24 => &["c"],
            Construction::TrivialLift | Construction::Sections => {
                &["q", "p", "e", "modulus", "m", "t", "c", "k", "base", "input"]
            }
            Construction::Quadric => &["q", "p", "e", "modulus", "c"],
            Construction::Product => &["q", "p", "e", "modulus", "w", "base", "input"],
            Construction::Code => &["q", "p", "e", "modulus", "t", "c", "k", "input"],
            Construction::AffinePoly => &["q", "p", "e", "modulus", "m", "t", "c"],
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Construction {
    type Err = ConstructError;

    fn from_str(s: &str) -> Result<Self, ConstructError> {
        Construction::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Construction::ALL.iter().map(|c| c.as_str()).collect();
            ConstructError::Usage(format!("unknown construction '{s}'; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

impl ConstructError {
    pub fn guard(&self) -> Option<&GuardExceeded> {
        match self {
            ConstructError::Generator(e) => e.guard(),
            ConstructError::Lift(e) => e.guard(),
            _ => None,
        }
    }
}

fn usage(msg: impl Into<String>) -> ConstructError {
    ConstructError::Usage(msg.into())
}

/// A construction name plus every parameter a construction might read.
/// `input` holds the text of a matrix file (`code`, `--base code`) or a design
/// document (`product`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub q: Option<u64>,
    pub p: Option<u32>,
    pub e: Option<u32>,
    pub modulus: Option<Vec<u32>>,
    pub m: Option<usize>,
    pub t: Option<u64>,
    pub c: Option<usize>,
    pub w: Option<u64>,
    pub k: Option<usize>,
    pub base: Option<String>,
    pub input: Option<String>,
}

impl ConstructionSpec {
    fn given(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let flags: [(&'static str, bool); 11] = [
            ("q", self.q.is_some()),
            ("p", self.p.is_some()),
            ("e", self.e.is_some()),
            ("modulus", self.modulus.is_some()),
            ("m", self.m.is_some()),
            ("t", self.t.is_some()),
            ("c", self.c.is_some()),
            ("w", self.w.is_some()),
            ("k", self.k.is_some()),
            ("base", self.base.is_some()),
            ("input", self.input.is_some()),
        ];
        for (name, present) in flags {
            if present {
                out.push(name);
            }
        }
        out
    }

    fn field(&self) -> Result<Field, ConstructError> {
        let spec = match (self.q, self.p, self.e, &self.modulus) {
            (None, None, None, None) => return Err(usage("a field is required: give --q, or --p with optional --e")),
            (Some(q), None, None, None) => FieldSpec::for_order(q)?,
            (q, Some(p), e, modulus) => {
                let e = e.unwrap_or(1);
                let spec = match modulus {
                    Some(m) => FieldSpec::new(p, e, m.clone())?,
                    None => FieldSpec::default_for(p, e)?,
                };
                if let Some(q) = q {
                    if u64::from(p).checked_pow(e) != Some(q) {
                        return Err(usage(format!("--q {q} does not equal p^e = {p}^{e}")));
                    }
                }
                spec
            }
            _ => return Err(usage("--e and --modulus need --p")),
        };
        Ok(Field::new(spec))
    }

    fn require_t(&self) -> Result<u64, ConstructError> {
        self.t.ok_or_else(|| usage("--t is required"))
    }
}

/// A built design with human-readable remarks (e.g. a count that disagrees with a quoted value).
#[derive(Debug, Clone)]
pub struct Built {
    pub design: DivisibleDesign,
    pub notes: Vec<String>,
}

/// Base point sets that can carry a one-block design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointSource {
    Nrc,
    Veronese,
    Witt12,
    Witt24,
    Quadric,
    Code,
}

impl PointSource {
    fn parse(name: &str) -> Result<Self, ConstructError> {
        Ok(match name {
            "nrc" => PointSource::Nrc,
            "veronese" => PointSource::Veronese,
            "witt12" => PointSource::Witt12,
            "witt24" => PointSource::Witt24,
            "quadric" => PointSource::Quadric,
            "code" => PointSource::Code,
            other => {
                return Err(usage(format!(
                    "unknown base point set '{other}'; expected nrc, veronese, witt12, witt24, quadric or code"
                )))
            }
        })
    }

    /// Largest t for which every t-subset of the point set is independent, when fixed.
    fn default_t(self) -> Option<u64> {
        match self {
            PointSource::Witt12 | PointSource::Witt24 => Some(5),
            PointSource::Quadric => Some(3),
            _ => None,
        }
    }
}

/// The one-block design on (the first `k` points of) a point set.
fn trivial_base(source: PointSource, spec: &ConstructionSpec, limits: &Limits) -> Result<EmbeddedDesign, ConstructError> {
    let t = match (spec.t, source.default_t()) {
        (Some(t), _) | (None, Some(t)) => t,
        (None, None) => return Err(usage("--t is required for this base")),
    };
    let (field, points, prov) = match source {
        PointSource::Nrc | PointSource::Veronese => {
            let field = spec.field()?;
            let m = if source == PointSource::Nrc {
                if spec.m.is_some() {
                    return Err(usage("--m does not apply to the normal rational curve"));
                }
                1
            } else {
                spec.m.unwrap_or(1)
            };
            if t == 0 {
                return Err(usage("--t must be at least 1"));
            }
            let pts = veronese_variety(&field, m, (t - 1) as u32, limits)?;
            let q = u64::from(field.q());
            let prov = if source == PointSource::Nrc {
                Provenance::generator("nrc", &[("q", q), ("t", t)], Some(&field))
            } else {
                Provenance::generator("veronese", &[("m", m as u64), ("q", q), ("t", t)], Some(&field))
            };
            (field, pts, prov)
        }
        PointSource::Witt12 | PointSource::Witt24 => {
            if spec.q.is_some() || spec.p.is_some() {
                return Err(usage("the Witt point sets fix their own field"));
            }
            let (d, name) = if source == PointSource::Witt12 {
                (witt12_embedding(limits)?, "witt12_points")
            } else {
                (witt24_embedding(limits)?, "witt24_points")
            };
            let field = d.field().clone();
            let prov = Provenance::generator(name, &[], Some(&field));
            (field, d.points().to_vec(), prov)
        }
        PointSource::Quadric => {
            let field = spec.field()?;
            let d = elliptic_quadric(&field, limits)?;
            let prov = Provenance::generator("quadric_points", &[("q", u64::from(field.q()))], Some(&field));
            (field, d.points().to_vec(), prov)
        }
        PointSource::Code => {
            let field = spec.field()?;
            let text = spec.input.as_deref().ok_or_else(|| usage("--input <parity-check matrix file> is required"))?;
            let h = parse_matrix(&field, text)?;
            let pts = code_point_set(&field, &h, t as usize)?;
            let prov = Provenance::generator(
                "code",
                &[("n", h.cols() as u64), ("r", h.rows() as u64), ("t", t)],
                Some(&field),
            );
            (field, pts, prov)
        }
    };
    let points = match spec.k {
        Some(k) if k > points.len() => {
            return Err(usage(format!("--k {k} exceeds the {} available points", points.len())))
        }
        Some(k) => points[..k].to_vec(),
        None => points,
    };
    Ok(trivial_design(&field, points, t, prov, limits)?)
}

fn base_source(c: Construction, spec: &ConstructionSpec) -> Result<PointSource, ConstructError> {
    match c {
        Construction::NrcLift => Ok(PointSource::Nrc),
        Construction::VeroneseLift => Ok(PointSource::Veronese),
        Construction::Code => Ok(PointSource::Code),
        Construction::TrivialLift => {
            PointSource::parse(spec.base.as_deref().ok_or_else(|| usage("--base is required for trivial-lift"))?)
        }
        Construction::Sections => PointSource::parse(spec.base.as_deref().unwrap_or("nrc")),
        _ => unreachable!("not a point-set construction"),
    }
}

/// The embedded base and the lift count of a matrix-lifting construction.
fn lifting_base(
    c: Construction,
    spec: &ConstructionSpec,
    limits: &Limits,
) -> Result<(EmbeddedDesign, usize), ConstructError> {
    Ok(match c {
        Construction::Witt12 => (witt12_embedding(limits)?, 0),
        Construction::Witt12Lift => (witt12_embedding(limits)?, spec.c.unwrap_or(1)),
        Construction::Witt24 => (witt24_embedding(limits)?, spec.c.unwrap_or(0)),
        Construction::Quadric => (elliptic_quadric(&spec.field()?, limits)?, spec.c.unwrap_or(0)),
        Construction::Code => (trivial_base(PointSource::Code, spec, limits)?, spec.c.unwrap_or(0)),
        other => {
            if other == Construction::Sections && spec.c == Some(0) {
                return Err(usage("sections need --c >= 1"));
            }
            (trivial_base(base_source(other, spec)?, spec, limits)?, spec.c.unwrap_or(1))
        }
    })
}

fn product_spec(spec: &ConstructionSpec, limits: &Limits) -> Result<ProductLiftingSpec, ConstructError> {
    let w = spec.w.ok_or_else(|| usage("--w is required"))?;
    let base = match (&spec.input, spec.base.as_deref()) {
        (Some(_), Some(_)) => return Err(usage("give either --base or --input, not both")),
        (Some(text), None) => {
            let d = DesignDocument::parse(text)?.to_design()?;
            AbstractDesign::try_from(&d)?
        }
        (None, name) => {
            let name = name.unwrap_or("fano");
            if name != "quadric" && (spec.q.is_some() || spec.p.is_some()) {
                return Err(usage(format!("base '{name}' takes no field")));
            }
            let d = match name {
                "fano" => return Ok(ProductLiftingSpec { base: AbstractDesign::fano(), w }),
                "witt12" => witt12_embedding(limits)?.to_divisible(),
                "witt24" => witt24_embedding(limits)?.to_divisible(),
                "quadric" => elliptic_quadric(&spec.field()?, limits)?.to_divisible(),
                other => {
                    return Err(usage(format!("unknown product base '{other}'; expected fano, witt12, witt24 or quadric")))
                }
            };
            let abs = AbstractDesign::try_from(&d)?;
            AbstractDesign::new(abs.v(), abs.classes().to_vec(), abs.blocks().to_vec(), abs.params(), name)?
        }
    };
    Ok(ProductLiftingSpec { base, w })
}

fn check_flags(c: Construction, spec: &ConstructionSpec) -> Result<(), ConstructError> {
    let accepted: BTreeSet<&str> = c.accepted().iter().copied().collect();
    let rejected: Vec<String> = spec.given().into_iter().filter(|f| !accepted.contains(f)).map(|f| format!("--{f}")).collect();
    if !rejected.is_empty() {
        return Err(usage(format!("{c} does not accept {}", rejected.join(", "))));
    }
    if c == Construction::Witt12Lift && spec.c == Some(0) {
        return Err(usage("witt12-lift needs --c >= 1; use witt12 for the base design"));
    }
    if matches!(c, Construction::TrivialLift | Construction::Sections) {
        let base = spec.base.as_deref().unwrap_or("nrc");
        if spec.input.is_some() && base != "code" {
            return Err(usage("--input applies only to --base code"));
        }
    }
    Ok(())
}

/// Materializes the design named by `c`.
pub fn build(c: Construction, spec: &ConstructionSpec, limits: &Limits) -> Result<Built, ConstructError> {
    check_flags(c, spec)?;
    let mut notes = Vec::new();
    let design = match c {
        Construction::Product => product_lift(&product_spec(spec, limits)?, limits)?,
        Construction::AffinePoly => {
            affine_polynomial_dd(spec.m.unwrap_or(1), spec.c.unwrap_or(1), spec.require_t()?, &spec.field()?, limits)?
        }
        _ => {
            let (base, lift) = lifting_base(c, spec, limits)?;
            if c == Construction::Witt24 {
                notes.push(witt24_report(&base).to_string());
            }
            let ctx = LiftingContext::new(base, lift, *limits)?;
            if c == Construction::Sections {
                build_section_design(&ctx)?
            } else {
                build_lifted_design(&ctx)?
            }
        }
    };
    Ok(Built { design, notes })
}

/// Parameters of the design named by `c`, computed from the base alone.
pub fn predict(c: Construction, spec: &ConstructionSpec, limits: &Limits) -> Result<PredictedParams, ConstructError> {
    check_flags(c, spec)?;
    Ok(match c {
        Construction::Product => {
            let ps = product_spec(spec, limits)?;
            predict_product_lift(&ps.base, ps.w)?
        }
        Construction::AffinePoly => {
            predict_affine_polynomial_dd(spec.m.unwrap_or(1), spec.c.unwrap_or(1), spec.require_t()?, &spec.field()?)?
        }
        _ => {
            let (base, lift) = lifting_base(c, spec, limits)?;
            predicted_params(&LiftingContext::new(base, lift, *limits)?)?
        }
    })
}
