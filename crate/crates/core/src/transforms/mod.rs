//! Catalog of solution maps between generalised Chazy systems.
//!
//! Each [`TransformEntry`] sends a solution triple of the system with
//! parameter `source` to a solution of the system with parameter `target`.
//! Most maps depend on a root of a defining polynomial whose coefficients
//! are polynomial (or rational) in `Q` and `R`; every root is a separate
//! branch. Some entries also use an auxiliary value computed from the root.
//!
//! Where two sign conventions for a map are in circulation, the entry
//! carries several named [`Variant`]s and the audit decides which one
//! actually solves the target system.
//!
//! All maps are evaluated on [`Jet`]s, so the x-derivative of the mapped
//! triple comes out exactly once the root's derivative is known from
//! implicit differentiation.

mod catalog;
mod compose;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::field::Jet;
use crate::param::Parameter;
use crate::roots::{select_nearest, BranchState, PolySpec};
use crate::system::Triple;
use crate::{Error, Result, C64};

pub use catalog::t8_closed_form_roots;
pub use compose::{compose, Composite, CompositeMapper, Stage};

/// Denominators below this modulus make a map refuse to evaluate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;
/// Relative tolerance for `|F(root)|` accepted by [`apply`].
pub const ROOT_TOLERANCE: f64 = 1e-8;
/// Relative tolerance for a caller-supplied auxiliary value.
pub const AUX_TOLERANCE: f64 = 1e-10;

/// Stable names `T1`..`T19`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransformId(u8);

impl TransformId {
    pub fn new(n: u8) -> Result<Self> {
        if (1..=19).contains(&n) {
            Ok(TransformId(n))
        } else {
            Err(Error::InvalidInput(format!("no transform T{n}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = TransformId> {
        (1..=19).map(TransformId)
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

impl FromStr for TransformId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t
            .strip_prefix('T')
            .or_else(|| t.strip_prefix('t'))
            .ok_or_else(|| Error::InvalidInput(format!("bad transform id {s:?}")))?;
        let n: u8 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad transform id {s:?}")))?;
        TransformId::new(n)
    }
}

impl Serialize for TransformId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Inputs of a triple map: the source triple, the branch root and the
/// auxiliary value (zero where unused).
#[derive(Debug, Clone, Copy)]
pub struct MapArgs {
    pub p: Jet,
    pub q: Jet,
    pub r: Jet,
    pub root: Jet,
    pub aux: Jet,
}

pub type MapFn = fn(&MapArgs) -> [Jet; 3];
/// Non-leading coefficients of the monic defining polynomial, descending.
pub type PolyFn = fn(Jet, Jet) -> Vec<Jet>;
pub type AuxFn = fn(Jet, Jet, Jet) -> Jet;
/// Monic polynomial (non-leading coefficients) satisfied by the auxiliary.
pub type AuxPolyFn = fn(C64, C64) -> Vec<C64>;

/// A named version of an entry's triple map.
#[derive(Clone, Copy)]
pub struct Variant {
    pub name: &'static str,
    pub map: MapFn,
}

impl fmt::Debug for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

/// A quantity a map divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    Q,
    R,
    Root,
}

impl Denominator {
    fn name(self) -> &'static str {
        match self {
            Denominator::Q => "Q",
            Denominator::R => "R",
            Denominator::Root => "root",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransformEntry {
    pub id: TransformId,
    pub source: Parameter,
    pub target: Parameter,
    pub root_symbol: Option<&'static str>,
    pub poly: Option<PolyFn>,
    pub aux: Option<AuxFn>,
    pub aux_symbol: Option<&'static str>,
    pub aux_poly: Option<AuxPolyFn>,
    pub variants: Vec<Variant>,
    pub denominators: &'static [Denominator],
    pub summary: &'static str,
}

impl TransformEntry {
    /// Number of root choices: the polynomial degree, or 1 for closed forms.
    pub fn branch_count(&self) -> usize {
        match self.poly {
            Some(f) => {
                let z = Jet::default();
                f(z, z).len()
            }
            None => 1,
        }
    }

    pub fn variant(&self, name: &str) -> Result<&Variant> {
        self.variants
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{} has no variant {name:?} (have {})",
                    self.id,
                    self.variant_names().join(", ")
                ))
            })
    }

    pub fn variant_names(&self) -> Vec<&'static str> {
        self.variants.iter().map(|v| v.name).collect()
    }

    pub fn is_closed_form(&self) -> bool {
        self.poly.is_none()
    }

    /// The defining polynomial at `(Q, R)`, if the entry has one.
    pub fn defining_poly(&self, q: C64, r: C64) -> Option<Result<PolySpec>> {
        self.poly.map(|f| {
            let coeffs = f(Jet::constant(q), Jet::constant(r))
                .into_iter()
                .map(|c| c.v)
                .collect();
            PolySpec::new(coeffs)
        })
    }

    /// The auxiliary value for `root`, if the entry uses one.
    pub fn aux_value(&self, root: C64, q: C64, r: C64) -> Option<C64> {
        self.aux
            .map(|f| f(Jet::constant(root), Jet::constant(q), Jet::constant(r)).v)
    }

    fn check_denominators(&self, t: &Triple, root: C64) -> Result<()> {
        for &d in self.denominators {
            let m = match d {
                Denominator::Q => t.q.norm(),
                Denominator::R => t.r.norm(),
                Denominator::Root => root.norm(),
            };
            if m.is_nan() || m < DEGENERACY_THRESHOLD {
                return Err(Error::DegenerateInput {
                    denominator: d.name(),
                    modulus: m,
                });
            }
        }
        Ok(())
    }
}

/// All nineteen entries, in id order.
pub fn catalog() -> &'static [TransformEntry] {
    static CATALOG: OnceLock<Vec<TransformEntry>> = OnceLock::new();
    CATALOG.get_or_init(catalog::build)
}

pub fn entry(id: TransformId) -> &'static TransformEntry {
    &catalog()[id.0 as usize - 1]
}

/// Look an entry up by its textual id (`"T9"`).
pub fn lookup(id: &str) -> Result<&'static TransformEntry> {
    Ok(entry(id.parse()?))
}

fn jet_triple(t: &Triple, dt: &Triple) -> [Jet; 3] {
    [
        Jet::new(t.p, dt.p),
        Jet::new(t.q, dt.q),
        Jet::new(t.r, dt.r),
    ]
}

fn poly_jets(entry: &TransformEntry, q: Jet, r: Jet) -> Option<Vec<Jet>> {
    entry.poly.map(|f| f(q, r))
}

/// `dF/droot` and `dF/dx` (root held fixed) for coefficient jets `c`.
fn implicit_parts(c: &[Jet], root: C64) -> (C64, C64) {
    let mut f = C64::new(1.0, 0.0);
    let mut df = C64::new(0.0, 0.0);
    let mut fx = C64::new(0.0, 0.0);
    for cj in c {
        df = df * root + f;
        f = f * root + cj.v;
        fx = fx * root + cj.d;
    }
    (df, fx)
}

fn implicit_from_coeffs(c: &[Jet], root: C64) -> Result<C64> {
    let (df, fx) = implicit_parts(c, root);
    if df.norm() < DEGENERACY_THRESHOLD {
        return Err(Error::MultipleRoot(df.norm()));
    }
    Ok(-fx / df)
}

/// x-derivative of a root of the entry's defining polynomial along a flow
/// with state `t` and derivative `dt`. Zero for closed-form entries.
pub fn implicit_root_derivative(
    entry: &TransformEntry,
    t: &Triple,
    dt: &Triple,
    root: C64,
) -> Result<C64> {
    let [_, q, r] = jet_triple(t, dt);
    match poly_jets(entry, q, r) {
        Some(c) => implicit_from_coeffs(&c, root),
        None => Ok(C64::new(0.0, 0.0)),
    }
}

/// Map a triple and its derivative through `variant`, given a root of the
/// defining polynomial and its derivative.
pub fn map_jet(
    entry: &TransformEntry,
    variant: &Variant,
    t: &Triple,
    dt: &Triple,
    root: Jet,
) -> Result<(Triple, Triple)> {
    entry.check_denominators(t, root.v)?;
    let [p, q, r] = jet_triple(t, dt);
    let aux = match entry.aux {
        Some(f) => f(root, q, r),
        None => Jet::default(),
    };
    let out = (variant.map)(&MapArgs { p, q, r, root, aux });
    let image = Triple::new(out[0].v, out[1].v, out[2].v);
    let deriv = Triple::new(out[0].d, out[1].d, out[2].d);
    if !image.is_finite() || !deriv.is_finite() {
        return Err(Error::DegenerateInput {
            denominator: "image",
            modulus: f64::INFINITY,
        });
    }
    Ok((image, deriv))
}

/// Evaluate the map on a single triple.
///
/// `root` must be a root of the defining polynomial (ignored for closed
/// forms) and `aux` the matching auxiliary value (ignored when the entry has
/// none).
pub fn apply(
    entry: &TransformEntry,
    variant: &Variant,
    t: &Triple,
    root: C64,
    aux: C64,
) -> Result<Triple> {
    if let Some(poly) = entry.defining_poly(t.q, t.r) {
        let poly = poly?;
        let resid = poly.eval(root).norm();
        if resid > ROOT_TOLERANCE * poly.eval_scale(root) {
            return Err(Error::InconsistentRoot(resid));
        }
    }
    if let Some(expected) = entry.aux_value(root, t.q, t.r) {
        if (expected - aux).norm() > AUX_TOLERANCE * (1.0 + expected.norm()) {
            return Err(Error::InconsistentRoot((expected - aux).norm()));
        }
    }
    let zero = Triple::zero();
    Ok(map_jet(entry, variant, t, &zero, Jet::constant(root))?.0)
}

/// Evaluate the map on branch `branch` (index into the sorted roots).
pub fn apply_branch(
    entry: &TransformEntry,
    variant: &Variant,
    t: &Triple,
    branch: usize,
) -> Result<Triple> {
    let root = match entry.defining_poly(t.q, t.r) {
        Some(poly) => {
            entry.check_denominators(t, C64::new(1.0, 0.0))?;
            let roots = poly?.roots();
            *roots.get(branch).ok_or_else(|| {
                Error::InvalidInput(format!("{} has {} branches", entry.id, roots.len()))
            })?
        }
        None => C64::new(0.0, 0.0),
    };
    let zero = Triple::zero();
    Ok(map_jet(entry, variant, t, &zero, Jet::constant(root))?.0)
}

/// Maps successive points of one source trajectory, following a single root
/// branch by continuity.
#[derive(Debug, Clone)]
pub struct BranchMapper {
    entry: &'static TransformEntry,
    variant: Variant,
    branch: usize,
    state: Option<BranchState>,
    last_rate: f64,
}

impl BranchMapper {
    pub fn new(entry: &'static TransformEntry, variant: &str, branch: usize) -> Result<Self> {
        let variant = *entry.variant(variant)?;
        if branch >= entry.branch_count() {
            return Err(Error::InvalidInput(format!(
                "{} has {} branches, asked for {branch}",
                entry.id,
                entry.branch_count()
            )));
        }
        Ok(BranchMapper {
            entry,
            variant,
            branch,
            state: None,
            last_rate: 0.0,
        })
    }

    pub fn entry(&self) -> &'static TransformEntry {
        self.entry
    }

    /// The root currently followed, once the first point has been mapped.
    pub fn current_root(&self) -> Option<C64> {
        self.state.map(|s| s.current_root)
    }

    /// Map `t` (with source derivative `dt`) at `x`. Points must be fed in
    /// increasing `x`.
    pub fn map(&mut self, x: f64, t: &Triple, dt: &Triple) -> Result<(Triple, Triple)> {
        self.map_inner(x, t, dt, true)
    }

    /// Image of `t` only. No root derivative is needed, so multiple roots
    /// are fine and jumps are limited only by the collision rule.
    pub fn map_value(&mut self, x: f64, t: &Triple) -> Result<Triple> {
        Ok(self.map_inner(x, t, &Triple::zero(), false)?.0)
    }

    fn map_inner(
        &mut self,
        x: f64,
        t: &Triple,
        dt: &Triple,
        derivative: bool,
    ) -> Result<(Triple, Triple)> {
        let [_, q, r] = jet_triple(t, dt);
        let root = match poly_jets(self.entry, q, r) {
            None => Jet::default(),
            Some(coeffs) => {
                // the coefficients themselves may divide by Q or R
                self.entry.check_denominators(t, C64::new(1.0, 0.0))?;
                let poly = PolySpec::new(coeffs.iter().map(|c| c.v).collect())?;
                let next = match &self.state {
                    None => BranchState::start(&poly, self.branch, x)?,
                    Some(s) => {
                        let mut s = *s;
                        s.rate_bound = derivative.then_some(self.last_rate);
                        select_nearest(&s, &poly.roots(), x)?
                    }
                };
                let d = if derivative {
                    implicit_from_coeffs(&coeffs, next.current_root)?
                } else {
                    C64::new(0.0, 0.0)
                };
                self.last_rate = d.norm();
                self.state = Some(next);
                Jet::new(next.current_root, d)
            }
        };
        map_jet(self.entry, &self.variant, t, dt, root)
    }
}
