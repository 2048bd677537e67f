//! Named verification checks, selectable at run time.
//!
//! Checks share one [`Context`] that computes the expensive stages (star
//! data, theta, `phi(T_w0)`) once. A stage that fails halts every check that
//! depends on it; those checks report the reason instead of running.

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::Analysis;
use crate::coxeter::Elem;
use crate::hecke::{Basis, HeckeElement};
use crate::jring::{j_multiply, j_unit, phi, JElement};
use crate::laurent::Laurent;
use crate::report::Findings;
use crate::theorems::{self, StarData, TheoremsError, ThetaData};

pub const DEFAULT_SEED: u64 = 0x5eed_ce11;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown check `{0}`; run `verify --check list` for the available names")]
pub struct UnknownCheck(pub String);

/// Why a stage could not be completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halt {
    pub reason: String,
    pub internal: bool,
}

impl Halt {
    fn from_error(stage: &str, e: &TheoremsError) -> Self {
        Halt { reason: format!("{stage}: {e}"), internal: e.is_internal() }
    }
}

pub struct Context<'a> {
    pub analysis: &'a Analysis,
    pub seed: u64,
    p: OnceLock<Findings>,
    stars: OnceLock<Result<Vec<StarData>, Halt>>,
    thetas: OnceLock<Result<Vec<ThetaData>, Halt>>,
    phi: OnceLock<Result<(JElement, JElement), Halt>>,
}

impl<'a> Context<'a> {
    pub fn new(analysis: &'a Analysis) -> Self {
        Self::with_seed(analysis, DEFAULT_SEED)
    }

    pub fn with_seed(analysis: &'a Analysis, seed: u64) -> Self {
        Self {
            analysis,
            seed,
            p: OnceLock::new(),
            stars: OnceLock::new(),
            thetas: OnceLock::new(),
            phi: OnceLock::new(),
        }
    }

    /// Consequences of P1-P15, the J unit and the cell invariants.
    pub fn p_findings(&self) -> &Findings {
        self.p.get_or_init(|| {
            let an = self.analysis;
            let mut f = Findings::new("p-consequences");
            for part in crate::cells::check_p_consequences(&an.tables) {
                f.merge(part);
            }
            f.merge(an.cells.check_invariants(&an.group));
            let mut unit = Findings::new("J unit");
            if let Err(e) = j_unit(&an.tables) {
                unit.fail(e.to_string());
            } else {
                unit.check(true, String::new);
            }
            f.merge(unit);
            f
        })
    }

    fn require_p(&self) -> Result<(), Halt> {
        if self.p_findings().passed() {
            Ok(())
        } else {
            Err(Halt { reason: "the P-consequence checks failed".into(), internal: false })
        }
    }

    /// Star data for every two-sided cell, in cell order.
    pub fn stars(&self) -> Result<&[StarData], Halt> {
        self.stars
            .get_or_init(|| {
                self.require_p()?;
                let an = self.analysis;
                let cells: Vec<_> = an.cells.two_sided.cells().collect();
                cells
                    .par_iter()
                    .map(|&c| theorems::star_data(an, c))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Halt::from_error("star", &e))
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    pub fn thetas(&self) -> Result<&[ThetaData], Halt> {
        self.thetas
            .get_or_init(|| {
                let stars = self.stars()?;
                stars
                    .par_iter()
                    .map(|s| theorems::theta_data(self.analysis, s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Halt::from_error("theta", &e))
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// `phi(T_w0)` and `phi(T_w0^2)`.
    pub fn phi_w0(&self) -> Result<(&JElement, &JElement), Halt> {
        self.phi
            .get_or_init(|| {
                self.require_p()?;
                let an = self.analysis;
                let w0 = an.group.w0();
                let t = HeckeElement::basis_element(Basis::T, w0);
                let sq = an.hecke.t_left_multiply(w0, &t).map_err(|e| Halt::from_error("phi", &e.into()))?;
                let p1 = theorems::phi_w0(an).map_err(|e| Halt::from_error("phi", &e))?;
                let p2 = phi(&an.tables, &sq).map_err(|e| Halt::from_error("phi", &e.into()))?;
                Ok((p1, p2))
            })
            .as_ref()
            .map(|(a, b)| (a, b))
            .map_err(Clone::clone)
    }

    /// Whether any stage halted on an error that indicates a bug.
    pub fn internal_error(&self) -> Option<String> {
        let halts = [
            self.stars.get().and_then(|r| r.as_ref().err()),
            self.thetas.get().and_then(|r| r.as_ref().err()),
            self.phi.get().and_then(|r| r.as_ref().err()),
        ];
        halts.into_iter().flatten().find(|h| h.internal).map(|h| h.reason.clone())
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn aliases(&self) -> &'static [&'static str] {
        &[]
    }
    fn description(&self) -> &'static str;
    fn run(&self, ctx: &Context) -> Findings;
}

fn halted(name: &str, h: Halt) -> Findings {
    Findings::halted(name, h.reason)
}

struct PConsequences;
impl Check for PConsequences {
    fn name(&self) -> &'static str {
        "p-consequences"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["P"]
    }
    fn description(&self) -> &'static str {
        "a-function bounds, P1-P15 consequences, J unit and cell consistency"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let mut f = ctx.p_findings().clone();
        f.name = self.name().into();
        f
    }
}

struct SigmaCells;
impl Check for SigmaCells {
    fn name(&self) -> &'static str {
        "sigma-cells"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["1.2"]
    }
    fn description(&self) -> &'static str {
        "w -> w0 w w0 preserves two-sided cells"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let mut f = Findings::new(self.name());
        f.merge(theorems::verify_sigma_cells(ctx.analysis));
        f
    }
}

struct LeadingPairing;
impl Check for LeadingPairing {
    fn name(&self) -> &'static str {
        "leading-pairing"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.2"]
    }
    fn description(&self) -> &'static str {
        "top coefficient of theta(c#_{x^-1} c#_{x'}) is n_d delta_{x,x'}"
    }
    fn run(&self, ctx: &Context) -> Findings {
        if let Err(h) = ctx.require_p() {
            return halted(self.name(), h);
        }
        let an = ctx.analysis;
        let cells: Vec<_> = an.cells.two_sided.cells().collect();
        let parts: Vec<Findings> = cells.par_iter().map(|&c| theorems::leading_pairing_check(an, c)).collect();
        let mut f = Findings::new(self.name());
        parts.into_iter().for_each(|p| f.merge(p));
        f
    }
}

struct Star;
impl Check for Star {
    fn name(&self) -> &'static str {
        "star"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.3"]
    }
    fn description(&self) -> &'static str {
        "T_w0 acts on each cell module by a signed permutation u -> u* with the stated symmetries"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let stars = match ctx.stars() {
            Ok(s) => s,
            Err(h) => return halted(self.name(), h),
        };
        let parts: Vec<Findings> = stars.iter().map(|s| theorems::check_star(ctx.analysis, s)).collect();
        let mut f = Findings::new(self.name());
        parts.into_iter().for_each(|p| f.merge(p));
        f
    }
}

struct JAction;
impl Check for JAction {
    fn name(&self) -> &'static str {
        "j-action"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["1.12", "1.13"]
    }
    fn description(&self) -> &'static str {
        "phi(T_w0) acts on J^c by the same matrix as T_w0 on the cell module"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let (stars, (p1, p2)) = match ctx.stars().and_then(|s| Ok((s, ctx.phi_w0()?))) {
            Ok(x) => x,
            Err(h) => return halted(self.name(), h),
        };
        let mut f = Findings::new(self.name());
        for s in stars {
            f.merge(theorems::verify_j_action(ctx.analysis, s, p1, p2));
        }
        f
    }
}

struct StarCells;
impl Check for StarCells {
    fn name(&self) -> &'static str {
        "star-cells"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.4"]
    }
    fn description(&self) -> &'static str {
        "u ~L u*, sigma(u) ~R u*, and the left-right intersection rule where it applies"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let stars = match ctx.stars() {
            Ok(s) => s,
            Err(h) => return halted(self.name(), h),
        };
        let mut f = Findings::new(self.name());
        for s in stars {
            f.merge(theorems::verify_star_cells(ctx.analysis, s).0);
        }
        f
    }
}

struct Theta;
impl Check for Theta {
    fn name(&self) -> &'static str {
        "theta"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.5"]
    }
    fn description(&self) -> &'static str {
        "gamma_{w0 d, x, y} selects y = (x*)^-1 and a unique d; eps_u = (-1)^l(w0 d) n_d theta(u)"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let (stars, thetas) = match ctx.stars().and_then(|s| Ok((s, ctx.thetas()?))) {
            Ok(x) => x,
            Err(h) => return halted(self.name(), h),
        };
        let parts: Vec<Findings> =
            stars.par_iter().zip(thetas).map(|(s, th)| theorems::verify_theta(ctx.analysis, s, th)).collect();
        let mut f = Findings::new(self.name());
        parts.into_iter().for_each(|p| f.merge(p));
        f
    }
}

struct SignRule;
impl Check for SignRule {
    fn name(&self) -> &'static str {
        "sign-rule"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.6"]
    }
    fn description(&self) -> &'static str {
        "equal-parameter signs and theta = 1; star images of D match w0 D"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let (stars, thetas) = match ctx.stars().and_then(|s| Ok((s, ctx.thetas()?))) {
            Ok(x) => x,
            Err(h) => return halted(self.name(), h),
        };
        let mut f = Findings::new(self.name());
        f.merge(theorems::verify_sign_rule(ctx.analysis, stars, thetas));
        f
    }
}

struct PhiW0;
impl Check for PhiW0 {
    fn name(&self) -> &'static str {
        "phi-w0"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.7", "2.8"]
    }
    fn description(&self) -> &'static str {
        "phi(T_w0) equals the closed formula in theta, eps and star"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let (stars, thetas, (p1, _)) = match ctx.stars().and_then(|s| Ok((s, ctx.thetas()?, ctx.phi_w0()?))) {
            Ok(x) => x,
            Err(h) => return halted(self.name(), h),
        };
        let mut f = Findings::new(self.name());
        f.merge(theorems::verify_phi_w0(ctx.analysis, stars, thetas, p1));
        f
    }
}

struct TFrak;
impl Check for TFrak {
    fn name(&self) -> &'static str {
        "t-frak"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.9"]
    }
    fn description(&self) -> &'static str {
        "T_c^2 is the unit of J^c and t_x T_c = T_c t_sigma(x)"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let (stars, thetas) = match ctx.stars().and_then(|s| Ok((s, ctx.thetas()?))) {
            Ok(x) => x,
            Err(h) => return halted(self.name(), h),
        };
        let mut f = Findings::new(self.name());
        f.merge(theorems::verify_t_frak(ctx.analysis, stars, thetas));
        f
    }
}

struct LeftCellTrace;
impl Check for LeftCellTrace {
    fn name(&self) -> &'static str {
        "left-cell-trace"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["2.10"]
    }
    fn description(&self) -> &'static str {
        "left cell modules satisfy the Coxeter relations and |tr(w0)| counts fixed points of star"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let stars = match ctx.stars() {
            Ok(s) => s,
            Err(h) => return halted(self.name(), h),
        };
        let an = ctx.analysis;
        let mut f = Findings::new(self.name());
        for gamma in an.cells.left.cells() {
            let rep = an.cells.left.representative(gamma);
            let s = &stars[an.cells.two_sided.cell_of(rep).index()];
            match theorems::left_cell_module(an, gamma, s) {
                Ok(_) => f.check(true, String::new),
                Err(e) => f.check(false, || e.to_string()),
            };
        }
        f
    }
}

struct Structural;
impl Check for Structural {
    fn name(&self) -> &'static str {
        "structural"
    }
    fn aliases(&self) -> &'static [&'static str] {
        &["S"]
    }
    fn description(&self) -> &'static str {
        "bar involution, canonical basis, J associativity and unit, phi multiplicativity on random samples"
    }
    fn run(&self, ctx: &Context) -> Findings {
        let mut f = Findings::new(self.name());
        f.merge(structural_hecke(ctx));
        f.merge(structural_j(ctx));
        f
    }
}

fn random_t_element(rng: &mut StdRng, n: u32) -> HeckeElement {
    HeckeElement::from_terms(
        Basis::T,
        (0..2).map(|_| {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            (Elem(rng.gen_range(0..n)), Laurent::monomial(sign, rng.gen_range(-2..=2)))
        }),
    )
}

fn structural_hecke(ctx: &Context) -> Findings {
    let an = ctx.analysis;
    let g = &an.group;
    let h = &an.hecke;
    let mut f = Findings::new("Hecke");
    let mut rng = StdRng::seed_from_u64(ctx.seed);
    for _ in 0..100 {
        let x = random_t_element(&mut rng, g.size() as u32);
        let back = h.bar_involution(&h.bar_involution(&x).unwrap()).unwrap();
        f.check(back == x, || "bar is not an involution".into());
    }
    for x in g.elements() {
        let c = h.kl_element(x);
        f.check(h.bar_involution(&c).unwrap() == c, || format!("c[{}] is not bar invariant", g.name(x)));
        let ok = c.coeff(x).is_one() && c.terms().all(|(y, p)| y == x || (p.in_negative_ideal() && g.bruhat_leq(y, x)));
        f.check(ok, || format!("c[{}] is not unitriangular", g.name(x)));
    }
    f
}

fn structural_j(ctx: &Context) -> Findings {
    let an = ctx.analysis;
    let g = &an.group;
    let t = &an.tables;
    let ts = &an.cells.two_sided;
    let mut f = Findings::new("J");
    if let Err(h) = ctx.require_p() {
        f.halted = Some(h.reason);
        return f;
    }
    let mut rng = StdRng::seed_from_u64(ctx.seed ^ 0x1);
    let n = g.size() as u32;
    let cells: Vec<_> = ts.cells().collect();
    let triples: Vec<[Elem; 3]> = (0..200)
        .map(|i| {
            if i % 2 == 0 {
                [(); 3].map(|_| Elem(rng.gen_range(0..n)))
            } else {
                let members = ts.members(cells[rng.gen_range(0..cells.len())]);
                [(); 3].map(|_| members[rng.gen_range(0..members.len())])
            }
        })
        .collect();
    let assoc: Vec<_> = triples
        .par_iter()
        .map(|&[x, y, z]| {
            let (tx, ty, tz) = (JElement::basis(x), JElement::basis(y), JElement::basis(z));
            let lhs = j_multiply(t, &j_multiply(t, &tx, &ty), &tz);
            let rhs = j_multiply(t, &tx, &j_multiply(t, &ty, &tz));
            (x, y, z, lhs == rhs)
        })
        .collect();
    for (x, y, z, ok) in assoc {
        f.check(ok, || format!("(t[{}] t[{}]) t[{}] is not associative", g.name(x), g.name(y), g.name(z)));
    }
    let pairs: Vec<_> = (0..100).map(|_| (random_t_element(&mut rng, n), random_t_element(&mut rng, n))).collect();
    let mult: Vec<_> = pairs
        .par_iter()
        .map(|(a, b)| {
            let ab = an.hecke.t_multiply(a, b).unwrap();
            let lhs = phi(t, &ab);
            let rhs = phi(t, a).and_then(|pa| Ok(j_multiply(t, &pa, &phi(t, b)?)));
            matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
        })
        .collect();
    for ok in mult {
        f.check(ok, || "phi(h h') != phi(h) phi(h') on a random pair".into());
    }
    f
}

static REGISTRY: &[&dyn Check] = &[
    &PConsequences,
    &SigmaCells,
    &LeadingPairing,
    &Star,
    &JAction,
    &StarCells,
    &Theta,
    &SignRule,
    &PhiW0,
    &TFrak,
    &LeftCellTrace,
    &Structural,
];

/// Every check, in the order they are run.
pub fn checks() -> &'static [&'static dyn Check] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static dyn Check> {
    REGISTRY.iter().copied().find(|c| c.name() == name || c.aliases().contains(&name))
}

/// Resolves names or aliases; `all` selects everything. The result follows
/// registry order and has no duplicates.
pub fn select<S: AsRef<str>>(names: &[S]) -> Result<Vec<&'static dyn Check>, UnknownCheck> {
    let mut keep = vec![false; REGISTRY.len()];
    for name in names {
        let name = name.as_ref().trim();
        if name == "all" {
            keep.iter_mut().for_each(|k| *k = true);
            continue;
        }
        let i = REGISTRY
            .iter()
            .position(|c| c.name() == name || c.aliases().contains(&name))
            .ok_or_else(|| UnknownCheck(name.to_string()))?;
        keep[i] = true;
    }
    Ok(REGISTRY.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| *c).collect())
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub results: Vec<Findings>,
    pub internal_error: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(Findings::passed)
    }
}

pub fn run(ctx: &Context, checks: &[&dyn Check]) -> VerifyReport {
    let results = checks.iter().map(|c| c.run(ctx)).collect();
    VerifyReport { results, internal_error: ctx.internal_error() }
}
