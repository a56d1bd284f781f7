//! Individual checks, each run on one model over one prime.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{rank_with, RankOptions, SparseMatrix};
use crate::curves::{
    build_graded_module, h0_of, normalize_divisor, riemann_roch_space, CurveModel, CurveModule, Divisor,
    DivisorExpr, Model, PlaceKey,
};
use crate::error::{Error, Result};
use crate::experiments::report::{Expected, Outcome};
use crate::koszul::{
    betti_table_with, binomial, check_d_squared, duality_gap, euler_strand, DualityHypotheses, GradedModule,
    KoszulComplex,
};

pub mod provenance {
    pub const GONALITY_VANISHING: &str = "gonality conjecture: K_{h0-d,1}(C,L) = 0 for L of large degree";
    pub const NONVANISHING: &str = "Green-Lazarsfeld nonvanishing: K_{h0-d-1,1}(C,L) != 0";
    pub const STRAND_MONOTONE: &str = "K_{n,1} = 0 forces K_{n+1,1} = 0, so the vanishing index is the syzygy-gonality";
    pub const ODD_GENUS: &str = "generic curve of genus 2k+1, L of degree 2g+1: K_{k+1,1}(C,L) = 0";
    pub const EVEN_GENUS: &str = "generic curve of genus 2k, L of degree 2g: K_{k,1}(C,L) = 0";
    pub const PROPAGATION: &str = "K_{n,1}(C,L) = 0 implies K_{n+e,1}(C,L+E) = 0 for E effective of degree e";
    pub const TWO_POINTS: &str = "dim K_{k,1}(C,K_C+x+y) = C(2k+1,k+2) for generic x, y on a generic curve of genus 2k+1";
    pub const SAME_DIMENSION: &str = "K_{k,1}(C,K_C+x+y) and K_{k-1,2}(C,K_C+x+y) have the same dimension";
    pub const OUTER_STRANDS: &str = "K_{k-j+1,j}(C,K_C+x+y) = 0 for j != 1, 2";
    pub const LEMMA_SEQUENCE: &str = "exact sequence 0 -> wedge^{p+1} H0(L-D) -> K_{p,1}(C,-D,L) -> K_{p,1}(C,L)";
    pub const WEDGE_ISOMORPHISM: &str = "wedge^{k+2} H0(K_C) = K_{k+1,1}(C,-x-y,K_C+x+y) once K_{k+1,1}(C,K_C+x+y) = 0";
    pub const EULER: &str = "Euler characteristic of the strand starting at wedge^{k+1} H0(K_C+x+y) is zero";
    pub const H0_FORMULA: &str = "h0(C, q(K_C+x+y)) = 4qk+2q-2k for q >= 1";
    pub const DUALITY: &str = "Green's duality: dim K_{p,q}(C,L) = dim K_{r-1-p,2-q}(C;K_C,L), r = h0(L)-1";
    pub const TWIST_SHIFT: &str = "K_C + qL = (q+1)L - x - y for L = K_C+x+y";
    pub const GREEN: &str = "Green's conjecture for a generic curve of genus 2k+1: K_{k,1}(C,K_C) = 0";
    pub const DEGREE_BOUND: &str = "vanishing holds for every line bundle of degree at least 3g+1";
    pub const RIEMANN_ROCH: &str = "Riemann-Roch: h0(D) - h0(K_C-D) = deg D - g + 1";
    pub const STRUCTURE: &str = "module law of the multiplication maps and d o d = 0";
    pub const IDENTITY: &str = "E = 0 is the hypothesis itself";
}

use provenance as prov;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunContext {
    pub seed: u64,
    pub parallel: bool,
    pub precision_cap: Option<usize>,
}

impl RunContext {
    pub fn new(seed: u64) -> Self {
        RunContext {
            seed,
            parallel: cfg!(feature = "parallel"),
            precision_cap: None,
        }
    }

    fn opts(&self) -> RankOptions {
        RankOptions {
            parallel: self.parallel,
            ..RankOptions::default()
        }
    }

    fn rng(&self, prime: u64, stream: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ prime.rotate_left(21) ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Structure,
    VanishingBoundary { gonality: Option<i64> },
    MainTheoremOdd,
    EvenGenus,
    DivisorPropagation { max_degree: usize },
    TwoPoints,
    LemmaMultiplication,
    Euler,
    Duality,
    CanonicalGreen,
    DegreeBoundScan,
    RiemannRoch { samples: usize },
}

pub const CHECK_NAMES: &[&str] = &[
    "structure",
    "vanishing-boundary",
    "main-theorem-odd",
    "even-genus",
    "divisor-propagation",
    "two-points",
    "lemma-multiplication",
    "euler",
    "duality",
    "canonical-green",
    "degree-bound-scan",
    "riemann-roch",
];

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Structure => "structure",
            Check::VanishingBoundary { .. } => "vanishing-boundary",
            Check::MainTheoremOdd => "main-theorem-odd",
            Check::EvenGenus => "even-genus",
            Check::DivisorPropagation { .. } => "divisor-propagation",
            Check::TwoPoints => "two-points",
            Check::LemmaMultiplication => "lemma-multiplication",
            Check::Euler => "euler",
            Check::Duality => "duality",
            Check::CanonicalGreen => "canonical-green",
            Check::DegreeBoundScan => "degree-bound-scan",
            Check::RiemannRoch { .. } => "riemann-roch",
        }
    }

    pub fn run(&self, model: &Model, ctx: &RunContext) -> Result<Outcome> {
        match *self {
            Check::Structure => structure(model, ctx),
            Check::VanishingBoundary { gonality } => vanishing_boundary(model, gonality, ctx),
            _ => {
                let Some(m) = model.as_curve() else {
                    return Ok(Outcome::inapplicable("needs a plane curve model"));
                };
                match *self {
                    Check::MainTheoremOdd => main_theorem_odd(m, ctx),
                    Check::EvenGenus => even_genus(m, ctx),
                    Check::DivisorPropagation { max_degree } => divisor_propagation(m, max_degree, ctx),
                    Check::TwoPoints => two_points(m, ctx),
                    Check::LemmaMultiplication => lemma_multiplication(m, ctx),
                    Check::Euler => euler(m, ctx),
                    Check::Duality => duality(m, ctx),
                    Check::CanonicalGreen => canonical_green(m, ctx),
                    Check::DegreeBoundScan => degree_bound_scan(m, ctx),
                    Check::RiemannRoch { samples } => riemann_roch(m, samples, ctx),
                    Check::Structure | Check::VanishingBoundary { .. } => unreachable!(),
                }
            }
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "structure" => Check::Structure,
            "vanishing-boundary" => Check::VanishingBoundary { gonality: None },
            "main-theorem-odd" => Check::MainTheoremOdd,
            "even-genus" => Check::EvenGenus,
            "divisor-propagation" => Check::DivisorPropagation { max_degree: 3 },
            "two-points" => Check::TwoPoints,
            "lemma-multiplication" => Check::LemmaMultiplication,
            "euler" => Check::Euler,
            "duality" => Check::Duality,
            "canonical-green" => Check::CanonicalGreen,
            "degree-bound-scan" => Check::DegreeBoundScan,
            "riemann-roch" => Check::RiemannRoch { samples: 50 },
            _ => return Err(Error::Parse(format!("unknown check {s:?}"))),
        })
    }
}

/// Gonality of a generic curve of genus g.
pub fn generic_gonality(g: i64) -> i64 {
    if g <= 0 {
        1
    } else {
        (g + 1) / 2 + 1
    }
}

/// The gonality the model is expected to have: the generic value, lowered
/// to the degree of projection from a node (or a point) when that is smaller.
pub fn claimed_gonality(m: &CurveModel) -> i64 {
    generic_gonality(m.curve.genus()).min(m.curve.gonality_hint())
}

/// `K_{p,1}` for `p = 1..=n`.
fn linear_strand(module: &GradedModule, ctx: &RunContext) -> Result<Vec<usize>> {
    let n = module.n() as i64;
    Ok(betti_table_with(module, 1..=n, 1..=1, ctx.opts())?.row(1))
}

/// `h0 - min{n >= 1 : K_{n,1} = 0}` from a strand starting at `p = 1`.
pub fn syzygy_gonality(strand: &[usize], h0: usize) -> i64 {
    let first = strand.iter().position(|&d| d == 0).map_or(strand.len() + 1, |i| i + 1);
    h0 as i64 - first as i64
}

fn label(p: i64, q: i64, what: &str) -> String {
    format!("K_{{{p},{q}}}({what})")
}

/// Strand values, observed and compared against the predicted boundary.
fn observe_strand(out: &mut Outcome, strand: &[usize], what: &str) {
    for (i, &d) in strand.iter().enumerate() {
        out.observe(label(i as i64 + 1, 1, what), d as i64);
    }
}

struct Bundle {
    divisor: Divisor,
    degree: i64,
    h0: usize,
    h1: usize,
}

fn bundle(m: &CurveModel, name: &str) -> Result<Bundle> {
    let divisor = m.divisor(name)?;
    let sys = riemann_roch_space(&m.curve, &divisor)?;
    Ok(Bundle {
        degree: divisor.degree(&m.curve),
        divisor,
        h0: sys.h0,
        h1: sys.h1,
    })
}

fn module(m: &CurveModel, d: &Divisor, twist: Option<&Divisor>, q_max: usize, ctx: &RunContext) -> Result<CurveModule> {
    build_graded_module(&m.curve, d, twist, q_max, ctx.parallel)
}

fn structure(model: &Model, ctx: &RunContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let mut modules: Vec<(String, GradedModule)> = Vec::new();
    match model {
        Model::Synthetic { field, synthetic, .. } => modules.push(("B".into(), synthetic.module(*field))),
        Model::Curve(m) => {
            let l = m.divisor("L")?;
            modules.push(("L".into(), module(m, &l, None, 3, ctx)?.module));
            if m.curve.genus() >= 2 {
                let k = m.divisor("K")?;
                modules.push(("K_C".into(), module(m, &k, None, 2, ctx)?.module));
            }
            if let Some((x, y)) = pairs(m).into_iter().next() {
                let pair = normalized_pair(m, &x, &y, ctx)?;
                let twist = minus_pair(m, &x, &y)?;
                modules.push((format!("K_C+{x}+{y}"), module(m, &pair, None, 3, ctx)?.module));
                modules.push((
                    format!("-{x}-{y}, K_C+{x}+{y}"),
                    module(m, &pair, Some(&twist), 2, ctx)?.module,
                ));
            }
        }
    }
    for (name, b) in &modules {
        let law = match b.verify() {
            Ok(()) => 0,
            Err(Error::NotAModule { .. }) => 1,
            Err(e) => return Err(e),
        };
        out.check(format!("{name}: module law violations"), law, Expected::Equals(0), prov::STRUCTURE);
        let (bad, checked) = match check_d_squared(b, ctx.parallel) {
            Ok(c) => (0, c as i64),
            Err(Error::InvalidMatrix(msg)) => {
                out.notes.push(format!("{name}: {msg}"));
                (1, 0)
            }
            Err(e) => return Err(e),
        };
        out.check(format!("{name}: nonzero d o d"), bad, Expected::Equals(0), prov::STRUCTURE);
        out.observe(format!("{name}: compositions checked"), checked);
    }
    Ok(out)
}

fn vanishing_boundary(model: &Model, gonality: Option<i64>, ctx: &RunContext) -> Result<Outcome> {
    let (b, h0, deg, genus, h1, d) = match model {
        Model::Synthetic { field, synthetic, .. } => {
            let b = synthetic.module(*field);
            let n = b.n();
            // the rational normal curve of degree n - 1
            (b, n, n as i64 - 1, 0, 0, gonality.unwrap_or(1))
        }
        Model::Curve(m) => {
            let l = bundle(m, "L")?;
            let d = gonality.unwrap_or_else(|| claimed_gonality(m));
            let g = m.curve.genus();
            if l.degree < 2 * g + 1 || l.h1 != 0 {
                return Ok(Outcome::inapplicable(format!(
                    "L has degree {} and h1 = {}; needs nonspecial of degree >= 2g+1 = {}",
                    l.degree,
                    l.h1,
                    2 * g + 1
                )));
            }
            let b = module(m, &l.divisor, None, 2, ctx)?;
            (b.module, l.h0, l.degree, g, l.h1, d)
        }
    };
    let mut out = Outcome::default();
    out.observe("genus", genus);
    out.observe("deg L", deg);
    out.observe("h1(L)", h1 as i64);
    out.observe("h0(L)", h0 as i64);
    out.observe("claimed gonality d", d);
    let strand = linear_strand(&b, ctx)?;
    observe_strand(&mut out, &strand, "C,L");
    let n = h0 as i64 - d;
    out.expect(label(n, 1, "C,L"), Expected::Equals(0), prov::GONALITY_VANISHING);
    if n - 1 >= 1 {
        out.expect(label(n - 1, 1, "C,L"), Expected::NonZero, prov::NONVANISHING);
    } else {
        out.notes.push(format!("K_{{{},1}} lies outside p >= 1; nonvanishing not tested", n - 1));
    }
    out.check("syzygy-gonality", syzygy_gonality(&strand, h0), Expected::Equals(d), prov::STRAND_MONOTONE);
    Ok(out)
}

fn main_theorem_odd(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let g = m.curve.genus();
    if g < 1 || g % 2 == 0 {
        return Ok(Outcome::inapplicable(format!("genus {g} is not odd")));
    }
    let k = (g - 1) / 2;
    let hint = m.curve.gonality_hint();
    if hint < k + 2 {
        return Ok(Outcome::inapplicable(format!(
            "the model has a pencil of degree {hint} < k+2 = {}, so it is not of maximal gonality",
            k + 2
        )));
    }
    let l = bundle(m, "L")?;
    if l.degree != 2 * g + 1 {
        return Ok(Outcome::inapplicable(format!("deg L = {} but 2g+1 = {}", l.degree, 2 * g + 1)));
    }
    let b = module(m, &l.divisor, None, 2, ctx)?;
    let strand = linear_strand(&b.module, ctx)?;
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.observe("h0(L)", l.h0 as i64);
    out.check("h1(L)", l.h1 as i64, Expected::Equals(0), prov::RIEMANN_ROCH);
    observe_strand(&mut out, &strand, "C,L");
    out.expect(label(k + 1, 1, "C,L"), Expected::Equals(0), prov::ODD_GENUS);
    out.observe("syzygy-gonality", syzygy_gonality(&strand, l.h0));
    Ok(out)
}

fn even_genus(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let g = m.curve.genus();
    if g < 2 || g % 2 == 1 {
        return Ok(Outcome::inapplicable(format!("genus {g} is not even and positive")));
    }
    let k = g / 2;
    let hint = m.curve.gonality_hint();
    if hint < k + 1 {
        return Ok(Outcome::inapplicable(format!(
            "the model has a pencil of degree {hint} < k+1 = {}",
            k + 1
        )));
    }
    let l = bundle(m, "L")?;
    if l.degree != 2 * g {
        return Ok(Outcome::inapplicable(format!("deg L = {} but 2g = {}", l.degree, 2 * g)));
    }
    let b = module(m, &l.divisor, None, 2, ctx)?;
    let strand = linear_strand(&b.module, ctx)?;
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.check("h0(L)", l.h0 as i64, Expected::Equals(g + 1), prov::RIEMANN_ROCH);
    observe_strand(&mut out, &strand, "C,L");
    out.expect(label(k, 1, "C,L"), Expected::Equals(0), prov::EVEN_GENUS);
    Ok(out)
}

/// Points removed by the named divisor, in name order.
fn removed_points(expr: &DivisorExpr) -> Vec<String> {
    expr.places.iter().filter(|&(_, &c)| c < 0).map(|(n, _)| n.clone()).collect()
}

fn divisor_propagation(m: &CurveModel, max_degree: usize, ctx: &RunContext) -> Result<Outcome> {
    let l = bundle(m, "L")?;
    let g = m.curve.genus();
    if l.h1 != 0 {
        return Ok(Outcome::inapplicable("L is special"));
    }
    let d = claimed_gonality(m);
    let n = l.h0 as i64 - d;
    let b = module(m, &l.divisor, None, 2, ctx)?;
    let cx = KoszulComplex::with_options(&b.module, ctx.opts());
    let base = cx.dimension(n, 1)? as i64;
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.observe("n", n);
    out.observe(label(n, 1, "C,L"), base);
    if base != 0 {
        return Ok(Outcome {
            inapplicable: Some(format!("hypothesis K_{{{n},1}}(C,L) = 0 fails (dim {base})")),
            ..out
        });
    }
    out.expect(label(n, 1, "C,L"), Expected::Equals(0), prov::IDENTITY);
    let expr = &m.divisors["L"];
    let mut pool = removed_points(expr);
    pool.reverse();
    let extra: Vec<String> = m.points.keys().filter(|k| k.starts_with('z')).cloned().collect();
    pool.extend(extra);
    for e in 1..=max_degree {
        let Some(chosen) = pool.get(..e) else {
            out.notes.push(format!("not enough marked points for deg E = {e}"));
            break;
        };
        let mut le = l.divisor.clone();
        for name in chosen {
            le.add_place(PlaceKey::Point(m.point(name)?), 1);
        }
        let le = if le.places_nonpositive() {
            le
        } else {
            normalize_divisor(&m.curve, &le, &mut ctx.rng(m.field().modulus(), 100 + e as u64))?.divisor
        };
        let what = format!("C,L+{}", chosen.join("+"));
        let b = module(m, &le, None, 2, ctx)?;
        let cx = KoszulComplex::with_options(&b.module, ctx.opts());
        out.observe(format!("h0(L+E), deg E = {e}"), b.h0() as i64);
        out.check(label(n + e as i64, 1, &what), cx.dimension(n + e as i64, 1)? as i64, Expected::Equals(0), prov::PROPAGATION);
    }
    Ok(out)
}

/// Marked point pairs `(x_i, y_i)`.
pub fn pairs(m: &CurveModel) -> Vec<(String, String)> {
    (1..)
        .map(|i| (format!("x{i}"), format!("y{i}")))
        .take_while(|(x, y)| m.points.contains_key(x) && m.points.contains_key(y))
        .collect()
}

fn normalized_pair(m: &CurveModel, x: &str, y: &str, ctx: &RunContext) -> Result<Divisor> {
    let mut d = Divisor::canonical(&m.curve);
    d.add_place(PlaceKey::Point(m.point(x)?), 1);
    d.add_place(PlaceKey::Point(m.point(y)?), 1);
    let stream = x.bytes().chain(y.bytes()).fold(7u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    Ok(normalize_divisor(&m.curve, &d, &mut ctx.rng(m.field().modulus(), stream))?.divisor)
}

fn minus_pair(m: &CurveModel, x: &str, y: &str) -> Result<Divisor> {
    let mut d = Divisor::zero();
    d.add_place(PlaceKey::Point(m.point(x)?), -1);
    d.add_place(PlaceKey::Point(m.point(y)?), -1);
    Ok(d)
}

/// Guard shared by the checks on `K_C + x + y`: odd genus `2k+1`, `k >= 1`,
/// and syzygy-gonality `k+2` measured on `L`.
fn odd_genus_guard(m: &CurveModel, ctx: &RunContext, out: &mut Outcome) -> Result<std::result::Result<i64, String>> {
    let g = m.curve.genus();
    if g % 2 == 0 {
        return Ok(Err(format!("genus {g} is not odd")));
    }
    let k = (g - 1) / 2;
    if k < 1 {
        return Ok(Err("k = 0: genus 1 is excluded".into()));
    }
    let l = bundle(m, "L")?;
    if l.degree < 2 * g + 1 || l.h1 != 0 {
        return Ok(Err(format!("L of degree {} cannot measure the gonality", l.degree)));
    }
    let b = module(m, &l.divisor, None, 2, ctx)?;
    let sg = syzygy_gonality(&linear_strand(&b.module, ctx)?, l.h0);
    out.observe("syzygy-gonality of L", sg);
    if sg != k + 2 {
        return Ok(Err(format!("syzygy-gonality {sg} differs from the maximal value k+2 = {}", k + 2)));
    }
    if pairs(m).is_empty() {
        return Ok(Err("model has no point pairs x1, y1".into()));
    }
    Ok(Ok(k))
}

macro_rules! guard {
    ($m:expr, $ctx:expr, $out:ident) => {
        match odd_genus_guard($m, $ctx, &mut $out)? {
            Ok(k) => k,
            Err(reason) => {
                $out.inapplicable = Some(reason);
                return Ok($out);
            }
        }
    };
}

fn two_points(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = guard!(m, ctx, out);
    let target = binomial(2 * k + 1, k + 2) as i64;
    for (x, y) in pairs(m) {
        let what = format!("C,K_C+{x}+{y}");
        let l = normalized_pair(m, &x, &y, ctx)?;
        let q_max = if k >= 2 { 4 } else { 3 };
        let b = module(m, &l, None, q_max, ctx)?;
        out.check(format!("h0(K_C+{x}+{y})"), b.h0() as i64, Expected::Equals(2 * k + 2), prov::RIEMANN_ROCH);
        let cx = KoszulComplex::with_options(&b.module, ctx.opts());
        let k1 = cx.dimension(k, 1)? as i64;
        out.check(label(k, 1, &what), k1, Expected::Equals(target), prov::TWO_POINTS);
        out.check(label(k - 1, 2, &what), cx.dimension(k - 1, 2)? as i64, Expected::Equals(target), prov::SAME_DIMENSION);
        for j in [0, 3] {
            let p = k - j + 1;
            if p >= 0 {
                out.check(label(p, j, &what), cx.dimension(p, j)? as i64, Expected::Equals(0), prov::OUTER_STRANDS);
            }
        }
    }
    Ok(out)
}

fn lemma_multiplication(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = guard!(m, ctx, out);
    let p = k + 1;
    for (x, y) in pairs(m) {
        let what = format!("C,K_C+{x}+{y}");
        let twisted_what = format!("C,-{x}-{y},K_C+{x}+{y}");
        let l = normalized_pair(m, &x, &y, ctx)?;
        let minus = minus_pair(m, &x, &y)?;
        let h = riemann_roch_space(&m.curve, &(&l + &minus))?.h0 as i64;
        out.check(format!("h0(K_C+{x}+{y}-{x}-{y})"), h, Expected::Equals(2 * k + 1), prov::RIEMANN_ROCH);
        let plain = module(m, &l, None, 2, ctx)?;
        let twisted = module(m, &l, Some(&minus), 2, ctx)?;
        let untw = KoszulComplex::with_options(&plain.module, ctx.opts()).dimension(p, 1)? as i64;
        let tw = KoszulComplex::with_options(&twisted.module, ctx.opts()).dimension(p, 1)? as i64;
        let lower = binomial(h, p + 1) as i64;
        out.check(label(p, 1, &what), untw, Expected::Equals(0), prov::ODD_GENUS);
        out.observe(label(p, 1, &twisted_what), tw);
        out.expect(label(p, 1, &twisted_what), Expected::Equals(binomial(2 * k + 1, k + 2) as i64), prov::WEDGE_ISOMORPHISM);
        out.check(format!("lower bound slack ({x},{y})"), tw - lower, Expected::AtLeast(0), prov::LEMMA_SEQUENCE);
        out.check(format!("upper bound slack ({x},{y})"), lower + untw - tw, Expected::AtLeast(0), prov::LEMMA_SEQUENCE);
    }
    Ok(out)
}

fn euler(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = guard!(m, ctx, out);
    let (x, y) = pairs(m).swap_remove(0);
    let l = normalized_pair(m, &x, &y, ctx)?;
    let b = module(m, &l, None, k as usize + 1, ctx)?;
    for q in 1..=k + 1 {
        out.check(
            format!("h0({q}(K_C+{x}+{y}))"),
            b.module.dim(q)? as i64,
            Expected::Equals(4 * q * k + 2 * q - 2 * k),
            prov::H0_FORMULA,
        );
    }
    out.check("euler characteristic", euler_strand(&b.module, k + 1)?, Expected::Equals(0), prov::EULER);
    Ok(out)
}

fn duality(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let mut out = Outcome::default();
    let k = guard!(m, ctx, out);
    let target = binomial(2 * k + 1, k + 2) as i64;
    let canonical = Divisor::canonical(&m.curve);
    for (x, y) in pairs(m) {
        let l = normalized_pair(m, &x, &y, ctx)?;
        let plain = module(m, &l, None, 3, ctx)?;
        let dual = module(m, &l, Some(&canonical), 1, ctx)?;
        let minus = minus_pair(m, &x, &y)?;
        let shifted = module(m, &l, Some(&minus), 2, ctx)?;
        let r = plain.h0() as i64 - 1;
        let (p, q) = (k - 1, 2);
        let (pd, qd) = (r - 1 - p, 2 - q);
        let untwisted = betti_table_with(&plain.module, p..=p, q..=q, ctx.opts())?;
        let twisted = betti_table_with(&dual.module, pd..=pd, qd..=qd, ctx.opts())?;
        let hyp = DualityHypotheses {
            h1_prev: plain.systems[1].h1,
            h1_cur: plain.systems[2].h1,
        };
        out.observe(format!("h1 hypotheses ({x},{y})"), (hyp.h1_prev + hyp.h1_cur) as i64);
        let gap = duality_gap(&untwisted, &twisted, r, p, q, hyp)?;
        out.check(format!("duality gap at ({p},{q}) for ({x},{y})"), gap, Expected::Equals(0), prov::DUALITY);
        let tw = twisted.get(pd, qd).unwrap_or(0) as i64;
        out.check(label(pd, qd, &format!("C;K_C,K_C+{x}+{y}")), tw, Expected::Equals(target), prov::WEDGE_ISOMORPHISM);
        let sh = KoszulComplex::with_options(&shifted.module, ctx.opts()).dimension(pd, qd + 1)? as i64;
        out.check(
            label(pd, qd + 1, &format!("C,-{x}-{y},K_C+{x}+{y}")),
            sh,
            Expected::Equals(tw),
            prov::TWIST_SHIFT,
        );
    }
    Ok(out)
}

fn canonical_green(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let g = m.curve.genus();
    if g < 3 || g % 2 == 0 {
        return Ok(Outcome::inapplicable(format!("genus {g} is not odd and at least 3")));
    }
    let k = (g - 1) / 2;
    let kc = m.divisor("K")?;
    let b = module(m, &kc, None, 2, ctx)?;
    // the curve is hyperelliptic iff V ⊗ H0(K_C) -> H0(2K_C) is not onto
    let mut image: Option<SparseMatrix> = None;
    for i in 0..b.module.n() {
        let mu = b.module.mult(1, i)?;
        image = Some(match image {
            None => mu.clone(),
            Some(acc) => acc.hcat(mu)?,
        });
    }
    let rank = image.map_or(0, |a| rank_with(&a, &ctx.opts())) as i64;
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.observe("rank of H0(K_C) x H0(K_C) -> H0(2K_C)", rank);
    if rank < 3 * g - 3 {
        out.inapplicable = Some("the model is hyperelliptic".into());
        return Ok(out);
    }
    let strand = linear_strand(&b.module, ctx)?;
    observe_strand(&mut out, &strand, "C,K_C");
    out.expect(label(k, 1, "C,K_C"), Expected::Equals(0), prov::GREEN);
    Ok(out)
}

fn degree_bound_scan(m: &CurveModel, ctx: &RunContext) -> Result<Outcome> {
    let g = m.curve.genus();
    if g % 2 == 0 {
        return Ok(Outcome::inapplicable(format!("genus {g} is not odd")));
    }
    let d = claimed_gonality(m);
    let l = m.divisor("L")?;
    let expr = &m.divisors["L"];
    let mut removed = removed_points(expr);
    removed.reverse();
    let mut scan: Vec<(String, Divisor)> = Vec::new();
    let mut cur = l.clone();
    scan.push(("L".into(), cur.clone()));
    let mut name = String::from("L");
    for p in &removed {
        cur.add_place(PlaceKey::Point(m.point(p)?), 1);
        name = format!("{name}+{p}");
        scan.push((name.clone(), cur.clone()));
    }
    if let Some(z) = m.points.keys().find(|k| k.starts_with('z')) {
        let mut below = l.clone();
        below.add_place(PlaceKey::Point(m.point(z)?), -1);
        scan.push((format!("L-{z}"), below));
    }
    scan.sort_by_key(|(_, d)| d.degree(&m.curve));
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.observe("claimed gonality d", d);
    let mut all_vanish = true;
    for (name, div) in &scan {
        let delta = div.degree(&m.curve);
        let b = module(m, div, None, 2, ctx)?;
        let n = b.h0() as i64 - d;
        let v = KoszulComplex::with_options(&b.module, ctx.opts()).dimension(n, 1)? as i64;
        out.observe(format!("deg {name}"), delta);
        let lbl = label(n, 1, &format!("C,{name}"));
        if delta >= 3 * g + 1 {
            out.check(lbl, v, Expected::Equals(0), prov::DEGREE_BOUND);
        } else {
            out.observe(lbl, v);
        }
        if delta >= 2 * g + 1 {
            all_vanish &= v == 0;
        }
    }
    if all_vanish {
        out.notes.push(format!("vanishing observed for every scanned degree >= 2g+1 = {}", 2 * g + 1));
    }
    Ok(out)
}

fn riemann_roch(m: &CurveModel, samples: usize, ctx: &RunContext) -> Result<Outcome> {
    let c = &m.curve;
    let g = c.genus();
    let canonical = Divisor::canonical(c);
    // same names on every prime, so the sampled divisors correspond
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x0052_5200);
    let mut keys: Vec<PlaceKey> = m.points.values().map(|&p| PlaceKey::Point(p)).collect();
    for node in c.nodes() {
        for branch in 0..2 {
            keys.push(PlaceKey::Branch { node: node.point, branch });
        }
    }
    let mut violations = 0;
    let mut first_failure = None;
    for s in 0..samples {
        let mut d = Divisor::hyperplane(rng.gen_range(-1..=3));
        for _ in 0..rng.gen_range(1..=4) {
            let key = keys[rng.gen_range(0..keys.len())];
            d.add_place(key, rng.gen_range(-2..=2));
        }
        let d = d.canonicalized(c)?;
        let h0 = h0_of(c, &d)? as i64;
        let h1 = h0_of(c, &(&canonical - &d))? as i64;
        if h0 - h1 != d.degree(c) - g + 1 {
            violations += 1;
            first_failure.get_or_insert(format!("sample {s}: {d}: h0 = {h0}, h1 = {h1}"));
        }
    }
    let mut out = Outcome::default();
    out.observe("genus", g);
    out.observe("divisors sampled", samples as i64);
    out.check("Riemann-Roch violations", violations, Expected::Equals(0), prov::RIEMANN_ROCH);
    out.notes.extend(first_failure);
    Ok(out)
}
