//! Mechanical checks of the identities linking the polynomials, plus a
//! counterexample search with greedy shrinking.
//!
//! Some identities are *claims under test*: they are checked like the rest
//! but a failure is the expected, documented outcome
//! ([`Identity::expected_to_hold`] is false for them).

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::corpus::{self, RandomSpec};
use crate::digraph::{Digraph, Graph};
use crate::engine::{multiarc_reduce, random_arc_order, xi_general_rec, Engine, PolyKind};
use crate::oracle::{self, XiStatistic};
use crate::polynomial::{MultiPoly, Point, RatPoly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// Recurrence equals enumeration for every polynomial with an oracle.
    Agreement,
    Projections,
    GeoCoverTransform,
    CoverFromGeo,
    /// Both co-reduction substitutions, prefactor as derived in the proof.
    Coreduction,
    /// Forward co-reduction with the prefactor on the other side.
    CoreductionStatement,
    Undirected,
    MultiArc,
    VertexDecomposition,
    XiCorrected,
    XiLiteral,
    /// Arc elimination at `t = 1` is order independent, and at `y = z = 0`
    /// collapses to `t^|E| x^|V|`.
    Confluence,
    /// Arc elimination is order independent for the configured `t`.
    WellDefinedness,
}

impl Identity {
    pub const ALL: [Identity; 13] = [
        Identity::Agreement,
        Identity::Projections,
        Identity::GeoCoverTransform,
        Identity::CoverFromGeo,
        Identity::Coreduction,
        Identity::CoreductionStatement,
        Identity::Undirected,
        Identity::MultiArc,
        Identity::VertexDecomposition,
        Identity::XiCorrected,
        Identity::XiLiteral,
        Identity::Confluence,
        Identity::WellDefinedness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Agreement => "agreement",
            Identity::Projections => "projections",
            Identity::GeoCoverTransform => "geo-cover-transform",
            Identity::CoverFromGeo => "cover-from-geo",
            Identity::Coreduction => "coreduction",
            Identity::CoreductionStatement => "coreduction-statement",
            Identity::Undirected => "undirected",
            Identity::MultiArc => "multi-arc",
            Identity::VertexDecomposition => "vertex-decomposition",
            Identity::XiCorrected => "xi-corrected",
            Identity::XiLiteral => "xi-literal",
            Identity::Confluence => "confluence",
            Identity::WellDefinedness => "well-definedness",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Identity::Agreement => "recurrence equals enumeration for sigma, pi, sigma-hat, pi-hat, sigma-pi, geo-cover, cover",
            Identity::Projections => "sigma = [y^1] sigma-hat, pi = [y^1] pi-hat, sigma-hat = sigma-pi(z=0), pi-hat = sigma-pi(y=0)",
            Identity::GeoCoverTransform => "geo-cover(x, y) = x^n sigma-pi(1/x, y, 1)",
            Identity::CoverFromGeo => "cover = sum c_ij x^(i falling) y^j where geo-cover = sum c_ij x^i y^j",
            Identity::Coreduction => "xi(q, xq, x(y-1)q) = q^n sigma-pi(x, y, z) with q = (y-1)/(z-1), and xi(x, y, z) = x^n sigma-pi(y/x, (y+z)/y, z/(xy)+1)",
            Identity::CoreductionStatement => "sigma-pi(x, y, z) = q^n xi(q, xq, x(y-1)q) with q = (y-1)/(z-1)",
            Identity::Undirected => "sigma(D(G)) = 2 sigma(G) + |E| x^2 and pi(D(G)) = 2 pi(G)",
            Identity::MultiArc => "P(D) = n P(D1) + m P(D2) - (n+m-1) P(D3), plus n m x^2 for sigma",
            Identity::VertexDecomposition => "sigma(D) = (1-x) sigma(D-v) + x sigma(D/v), and the matching path formula",
            Identity::XiCorrected => "explicit xi formula counting cycle components equals the recurrence",
            Identity::XiLiteral => "explicit xi formula counting loops equals the recurrence",
            Identity::Confluence => "arc elimination at t = 1 is order independent; at y = z = 0 it is t^|E| x^|V|",
            Identity::WellDefinedness => "arc elimination with deletion weight t is order independent",
        }
    }

    /// False for the claims under test, whose documented outcome is a
    /// counterexample.
    pub fn expected_to_hold(self) -> bool {
        !matches!(
            self,
            Identity::CoreductionStatement
                | Identity::VertexDecomposition
                | Identity::XiLiteral
                | Identity::WellDefinedness
        )
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Identity::ALL.iter().map(|i| i.name()).collect();
                format!("unknown identity {:?}; expected one of {}", s, names.join(", "))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One side of a compared identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Poly(MultiPoly),
    RatPoly(RatPoly),
    Rational(BigRational),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Poly(p) => write!(f, "{}", p),
            Value::RatPoly(p) => write!(f, "{}", p),
            Value::Rational(r) => write!(f, "{}", r),
        }
    }
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Poly(p) => p.to_json(),
            Value::RatPoly(p) => Json::Array(
                p.graded_terms()
                    .into_iter()
                    .map(|(e, c)| json!({"t": e[0], "x": e[1], "y": e[2], "z": e[3], "c": c.to_string()}))
                    .collect(),
            ),
            Value::Rational(r) => Json::String(r.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub identity: String,
    pub status: Status,
    pub witness: Option<Digraph>,
    pub lhs: Option<Value>,
    pub rhs: Option<Value>,
    pub graphs_tested: u64,
    /// Two arc orders (ids as in [`crate::engine::arc_instances`]) for
    /// order-dependence witnesses.
    pub orders: Option<(Vec<usize>, Vec<usize>)>,
    pub note: String,
}

impl CheckReport {
    pub fn pass(identity: impl Into<String>) -> Self {
        CheckReport {
            identity: identity.into(),
            status: Status::Pass,
            witness: None,
            lhs: None,
            rhs: None,
            graphs_tested: 1,
            orders: None,
            note: String::new(),
        }
    }

    pub fn fail(identity: impl Into<String>, witness: &Digraph, lhs: Value, rhs: Value, note: impl Into<String>) -> Self {
        CheckReport {
            status: Status::Fail,
            witness: Some(witness.clone()),
            lhs: Some(lhs),
            rhs: Some(rhs),
            note: note.into(),
            ..Self::pass(identity)
        }
    }

    pub fn skipped(identity: impl Into<String>, note: impl Into<String>) -> Self {
        CheckReport {
            status: Status::Skipped,
            graphs_tested: 0,
            note: note.into(),
            ..Self::pass(identity)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<7} {}  graphs={}",
            self.status.name().to_uppercase(),
            self.identity,
            self.graphs_tested
        );
        if let Some(w) = &self.witness {
            out.push_str(&format!("\n  witness: {}", w.to_json_string()));
        }
        if let Some((a, b)) = &self.orders {
            out.push_str(&format!("\n  orders: {:?} vs {:?}", a, b));
        }
        if let Some(l) = &self.lhs {
            out.push_str(&format!("\n  lhs: {}", l));
        }
        if let Some(r) = &self.rhs {
            out.push_str(&format!("\n  rhs: {}", r));
        }
        if !self.note.is_empty() {
            out.push_str(&format!("\n  note: {}", self.note));
        }
        out
    }

    pub fn to_json(&self) -> Json {
        json!({
            "identity": self.identity,
            "status": self.status.name(),
            "graphs_tested": self.graphs_tested,
            "witness": self.witness.as_ref().map(Digraph::to_json),
            "orders": self.orders.as_ref().map(|(a, b)| json!([a, b])),
            "lhs": self.lhs.as_ref().map(Value::to_json),
            "rhs": self.rhs.as_ref().map(Value::to_json),
            "note": self.note,
        })
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Enumeration value of a polynomial. The arc elimination polynomial uses
/// its explicit formula with the cycle-component statistic.
pub fn oracle_value(kind: PolyKind, d: &Digraph) -> MultiPoly {
    match kind {
        PolyKind::Sigma => oracle::sigma_enum(d),
        PolyKind::Pi => oracle::pi_enum(d),
        PolyKind::SigmaHat => oracle::sigma_hat_enum(d),
        PolyKind::PiHat => oracle::pi_hat_enum(d),
        PolyKind::SigmaPi => oracle::sigma_pi_enum(d),
        PolyKind::GeoCover => oracle::geo_cover_enum(d),
        PolyKind::Cover => oracle::cover_enum(d),
        PolyKind::Xi => oracle::xi_explicit(d, XiStatistic::Corrected),
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Forward direction needs `y != 1` and `z != 1`, backward needs `x != 0`
/// and `y != 0`.
pub fn forward_admissible(p: &Point) -> bool {
    !p[2].is_one() && !p[3].is_one() && !p[1].is_zero()
}

pub fn backward_admissible(p: &Point) -> bool {
    !p[1].is_zero() && !p[2].is_zero()
}

/// `count` distinct rational points admissible in both directions, with
/// small numerators and denominators. `t` is always 0.
pub fn admissible_points(count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Point> = Vec::with_capacity(count);
    while out.len() < count {
        let mut coord = || rat(rng.gen_range(-7..=7), rng.gen_range(1..=4));
        let p: Point = [BigRational::zero(), coord(), coord(), coord()];
        if forward_admissible(&p) && backward_admissible(&p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn fnv(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Symmetric support of `d` as a simple graph (loops ignored).
pub fn underlying_graph(d: &Digraph) -> Graph {
    let edges: Vec<(usize, usize)> = (0..d.n())
        .flat_map(|a| (a + 1..d.n()).map(move |b| (a, b)))
        .filter(|&(a, b)| d.mult(a, b) + d.mult(b, a) > 0)
        .collect();
    Graph::new(d.n(), &edges).expect("pairs are distinct non-loops")
}

/// Which variable, besides `t - 1`, divides an order-dependence difference:
/// `Some(Z)` or `Some(Y)` when the difference vanishes at `t = 1` and every
/// term carries that variable.
pub fn dichotomy_factor(diff: &MultiPoly) -> Option<Var> {
    if diff.is_zero() || !diff.substitute(Var::T, &BigInt::one()).is_zero() {
        return None;
    }
    [Var::Z, Var::Y].into_iter().find(|&v| diff.divisible_by_var(v))
}

/// Runs checks with a shared engine and fixed evaluation points.
pub struct Checker {
    engine: Engine,
    seed: u64,
    points: Vec<Point>,
    /// Arc orders tried per digraph by the order-dependence checks.
    pub orders: usize,
    /// Deletion weight for [`Identity::WellDefinedness`]; `None` keeps `t`
    /// symbolic.
    pub t: Option<BigRational>,
}

impl Checker {
    pub fn new(seed: u64) -> Self {
        Checker {
            engine: Engine::new(),
            seed,
            points: admissible_points(5, seed),
            orders: 10,
            t: None,
        }
    }

    pub fn without_cache(mut self) -> Self {
        self.engine = Engine::new().without_cache();
        self
    }

    pub fn with_points(mut self, points: Vec<Point>) -> Self {
        self.points = points;
        self
    }

    pub fn with_point_count(mut self, count: usize) -> Self {
        self.points = admissible_points(count, self.seed);
        self
    }

    pub fn with_orders(mut self, orders: usize) -> Self {
        self.orders = orders.max(2);
        self
    }

    pub fn with_t(mut self, t: Option<BigRational>) -> Self {
        self.t = t;
        self
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn engine(&mut self) -> &mut Engine {
        &mut self.engine
    }

    /// Same settings, fresh engine without a cache.
    fn cache_free(&self) -> Checker {
        Checker {
            engine: Engine::new().without_cache(),
            seed: self.seed,
            points: self.points.clone(),
            orders: self.orders,
            t: self.t.clone(),
        }
    }

    pub fn check(&mut self, identity: Identity, d: &Digraph) -> CheckReport {
        match identity {
            Identity::Agreement => self.check_agreement(d),
            Identity::Projections => self.check_projections(d),
            Identity::GeoCoverTransform => self.check_geo_cover_transform(d),
            Identity::CoverFromGeo => self.check_cover_from_geo(d),
            Identity::Coreduction => {
                let points = self.points.clone();
                self.check_coreduction(d, &points)
            }
            Identity::CoreductionStatement => {
                let points = self.points.clone();
                self.check_coreduction_statement(d, &points)
            }
            Identity::Undirected => {
                let mut r = check_undirected(&underlying_graph(d));
                if r.failed() {
                    r.note = format!("underlying simple graph of {}; {}", d.to_json_string(), r.note);
                }
                r
            }
            Identity::MultiArc => self.check_multiarc(d),
            Identity::VertexDecomposition => self.check_vertex_decomposition(d),
            Identity::XiCorrected => self.check_xi_explicit(d, XiStatistic::Corrected),
            Identity::XiLiteral => self.check_xi_explicit(d, XiStatistic::Literal),
            Identity::Confluence => self.probe_well_definedness(d, Some(BigRational::one())),
            Identity::WellDefinedness => {
                let t = self.t.clone();
                self.probe_well_definedness(d, t)
            }
        }
    }

    /// Checks every digraph, stopping at the first failure. Skipped graphs
    /// are not counted; if all are skipped so is the report.
    pub fn run_corpus(&mut self, identity: Identity, corpus: impl IntoIterator<Item = Digraph>) -> CheckReport {
        let mut tested = 0;
        let mut skipped = 0;
        for d in corpus {
            let r = self.check(identity, &d);
            match r.status {
                Status::Pass => tested += 1,
                Status::Skipped => skipped += 1,
                Status::Fail => {
                    return CheckReport { graphs_tested: tested + 1, ..r };
                }
            }
        }
        if tested == 0 {
            return CheckReport::skipped(identity.name(), format!("all {} digraphs skipped", skipped));
        }
        let mut r = CheckReport::pass(identity.name());
        r.graphs_tested = tested;
        if skipped > 0 {
            r.note = format!("{} digraphs skipped", skipped);
        }
        r
    }

    pub fn check_agreement(&mut self, d: &Digraph) -> CheckReport {
        for kind in PolyKind::WITH_ORACLE {
            let rec = self.engine.compute(kind, d);
            let en = oracle_value(kind, d);
            if rec != en {
                return CheckReport::fail(
                    Identity::Agreement.name(),
                    d,
                    Value::Poly(rec),
                    Value::Poly(en),
                    format!("{}: recurrence (lhs) vs enumeration (rhs)", kind),
                );
            }
        }
        CheckReport::pass(Identity::Agreement.name())
    }

    pub fn check_projections(&mut self, d: &Digraph) -> CheckReport {
        let e = &mut self.engine;
        let sigma = e.sigma_rec(d);
        let pi = e.pi_rec(d);
        let sigma_hat = e.sigma_hat_rec(d);
        let pi_hat = e.pi_hat_rec(d);
        let sigma_pi = e.sigma_pi_rec(d);
        let zero = BigInt::zero();
        let sides = [
            ("sigma = [y^1] sigma-hat", sigma, sigma_hat.coeff_of(Var::Y, 1)),
            ("pi = [y^1] pi-hat", pi, pi_hat.coeff_of(Var::Y, 1)),
            ("sigma-hat = sigma-pi at z=0", sigma_hat, sigma_pi.substitute(Var::Z, &zero)),
            (
                "pi-hat = sigma-pi at y=0, z renamed y",
                pi_hat,
                sigma_pi.substitute(Var::Y, &zero).swap_vars(Var::Y, Var::Z),
            ),
        ];
        for (what, l, r) in sides {
            if l != r {
                return CheckReport::fail(Identity::Projections.name(), d, Value::Poly(l), Value::Poly(r), what);
            }
        }
        CheckReport::pass(Identity::Projections.name())
    }

    pub fn check_geo_cover_transform(&mut self, d: &Digraph) -> CheckReport {
        let name = Identity::GeoCoverTransform.name();
        let geo = self.engine.geo_cover_rec(d);
        let reflected = match self
            .engine
            .sigma_pi_rec(d)
            .substitute(Var::Z, &BigInt::one())
            .reverse_in_x(d.n() as u32)
        {
            Ok(p) => p,
            Err(err) => return CheckReport::fail(name, d, Value::Poly(geo), Value::Poly(MultiPoly::zero()), err.to_string()),
        };
        if geo != reflected {
            return CheckReport::fail(name, d, Value::Poly(geo), Value::Poly(reflected), "geo-cover (lhs) vs reflected sigma-pi at z=1 (rhs)");
        }
        CheckReport::pass(name)
    }

    pub fn check_cover_from_geo(&mut self, d: &Digraph) -> CheckReport {
        let name = Identity::CoverFromGeo.name();
        let geo = self.engine.geo_cover_rec(d);
        let mut rebuilt = MultiPoly::zero();
        for (e, c) in geo.terms() {
            let y_part = MultiPoly::monomial([0, 0, e[2], 0], c.clone());
            rebuilt += &(&MultiPoly::falling_factorial(e[1]) * &y_part);
        }
        let cover = self.engine.cover_rec(d);
        if cover != rebuilt {
            return CheckReport::fail(name, d, Value::Poly(cover), Value::Poly(rebuilt), "cover (lhs) vs falling-factorial rebuild of geo-cover (rhs)");
        }
        CheckReport::pass(name)
    }

    /// Both substitutions at every point; points excluded for a direction
    /// are skipped for that direction only.
    pub fn check_coreduction(&mut self, d: &Digraph, points: &[Point]) -> CheckReport {
        let name = Identity::Coreduction.name();
        let xi = self.engine.xi_rec(d);
        let sp = self.engine.sigma_pi_rec(d);
        let n = d.n() as i32;
        let mut checked = 0;
        let mut excluded = 0;
        for p in points {
            let [_, x, y, z] = p;
            let one = BigRational::one();
            if forward_admissible(p) {
                let q = (y - &one) / (z - &one);
                let v = x * &q;
                let w = x * (y - &one) * &q;
                let lhs = xi.eval_rational(&[BigRational::zero(), q.clone(), v, w]);
                let rhs = q.pow(n) * sp.eval_rational(p);
                if lhs != rhs {
                    return CheckReport::fail(name, d, Value::Rational(lhs), Value::Rational(rhs), format!("forward at (x,y,z) = ({}, {}, {})", x, y, z));
                }
                checked += 1;
            } else {
                excluded += 1;
            }
            if backward_admissible(p) {
                let at = [
                    BigRational::zero(),
                    y / x,
                    (y + z) / y,
                    z / (x * y) + &one,
                ];
                let lhs = xi.eval_rational(p);
                let rhs = x.pow(n) * sp.eval_rational(&at);
                if lhs != rhs {
                    return CheckReport::fail(name, d, Value::Rational(lhs), Value::Rational(rhs), format!("backward at (x,y,z) = ({}, {}, {})", x, y, z));
                }
                checked += 1;
            } else {
                excluded += 1;
            }
        }
        if checked == 0 {
            return CheckReport::skipped(name, "no admissible point");
        }
        let mut r = CheckReport::pass(name);
        if excluded > 0 {
            r.note = format!("{} point-directions excluded", excluded);
        }
        r
    }

    /// `sigma-pi(x,y,z) = q^n xi(q, v, w)`, the prefactor placed as in the
    /// statement rather than the derivation.
    pub fn check_coreduction_statement(&mut self, d: &Digraph, points: &[Point]) -> CheckReport {
        let name = Identity::CoreductionStatement.name();
        let xi = self.engine.xi_rec(d);
        let sp = self.engine.sigma_pi_rec(d);
        let n = d.n() as i32;
        let mut checked = 0;
        for p in points.iter().filter(|p| forward_admissible(p)) {
            let [_, x, y, z] = p;
            let one = BigRational::one();
            let q = (y - &one) / (z - &one);
            let v = x * &q;
            let w = x * (y - &one) * &q;
            let lhs = sp.eval_rational(p);
            let rhs = q.pow(n) * xi.eval_rational(&[BigRational::zero(), q.clone(), v, w]);
            if lhs != rhs {
                return CheckReport::fail(
                    name,
                    d,
                    Value::Rational(lhs),
                    Value::Rational(rhs),
                    format!("at (x,y,z) = ({}, {}, {}), q = {}; the derivation's orientation xi(q,v,w) = q^n sigma-pi holds instead", x, y, z, q),
                );
            }
            checked += 1;
        }
        if checked == 0 {
            return CheckReport::skipped(name, "no admissible point");
        }
        CheckReport::pass(name)
    }

    /// Every pair of vertices joined by at least one arc.
    pub fn check_multiarc(&mut self, d: &Digraph) -> CheckReport {
        let name = Identity::MultiArc.name();
        let sigma = oracle::sigma_enum(d);
        let pi = oracle::pi_enum(d);
        for u in 0..d.n() {
            for v in u + 1..d.n() {
                if d.mult(u, v) + d.mult(v, u) == 0 {
                    continue;
                }
                let r = multiarc_reduce(d, u, v).expect("pair carries arcs");
                let e = &mut self.engine;
                let s = r.combine_sigma(&e.sigma_rec(&r.d1), &e.sigma_rec(&r.d2), &e.sigma_rec(&r.d3));
                if s != sigma {
                    return CheckReport::fail(name, d, Value::Poly(sigma), Value::Poly(s), format!("sigma at pair ({}, {})", u, v));
                }
                let p = r.combine(&e.pi_rec(&r.d1), &e.pi_rec(&r.d2), &e.pi_rec(&r.d3));
                if p != pi {
                    return CheckReport::fail(name, d, Value::Poly(pi), Value::Poly(p), format!("pi at pair ({}, {})", u, v));
                }
            }
        }
        CheckReport::pass(name)
    }

    /// Every loop-free vertex; the left side is brute-force enumeration.
    pub fn check_vertex_decomposition(&mut self, d: &Digraph) -> CheckReport {
        let name = Identity::VertexDecomposition.name();
        let candidates: Vec<usize> = (0..d.n()).filter(|&v| !d.has_loop_at(v)).collect();
        if candidates.is_empty() {
            return CheckReport::skipped(name, "every vertex carries a loop");
        }
        let sigma = oracle::sigma_enum(d);
        let pi = oracle::pi_enum(d);
        for v in candidates {
            let s = self.engine.sigma_vertex_rec(d, v).expect("loop-free vertex");
            if s != sigma {
                return CheckReport::fail(name, d, Value::Poly(sigma), Value::Poly(s), format!("cycle formula at vertex {}", v));
            }
            let p = self.engine.pi_vertex_rec(d, v).expect("loop-free vertex");
            if p != pi {
                return CheckReport::fail(name, d, Value::Poly(pi), Value::Poly(p), format!("path formula at vertex {}", v));
            }
        }
        CheckReport::pass(name)
    }

    pub fn check_xi_explicit(&mut self, d: &Digraph, statistic: XiStatistic) -> CheckReport {
        let name = match statistic {
            XiStatistic::Literal => Identity::XiLiteral.name(),
            XiStatistic::Corrected => Identity::XiCorrected.name(),
        };
        let explicit = oracle::xi_explicit(d, statistic);
        let rec = self.engine.xi_rec(d);
        if explicit != rec {
            return CheckReport::fail(name, d, Value::Poly(explicit), Value::Poly(rec), format!("explicit formula counting {} (lhs) vs recurrence (rhs)", statistic.name()));
        }
        CheckReport::pass(name)
    }

    /// Evaluates the weighted arc elimination recurrence under several arc
    /// orders: the row-major order plus random ones drawn from a generator
    /// seeded by the checker seed and the digraph, so a digraph always gets
    /// the same orders.
    ///
    /// With `t = Some(1)` this is the confluence check, which also compares
    /// against the memoized engine and checks the `y = z = 0` collapse with
    /// symbolic `t`. Otherwise it passes iff all orders agree (after
    /// substituting `t` when given) and reports the first disagreeing pair.
    pub fn probe_well_definedness(&mut self, d: &Digraph, t: Option<BigRational>) -> CheckReport {
        let confluence = t.as_ref().is_some_and(One::is_one);
        let name = if confluence { Identity::Confluence.name() } else { Identity::WellDefinedness.name() };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv(d.to_json_string().as_bytes()));
        let m = d.arc_count() as usize;
        let mut orders: Vec<Vec<usize>> = vec![(0..m).collect()];
        while orders.len() < self.orders {
            orders.push(random_arc_order(d, &mut rng));
        }
        let values: Vec<MultiPoly> = orders.iter().map(|o| xi_general_rec(d, o)).collect();
        let fix_t = |p: &MultiPoly| -> RatPoly {
            match &t {
                Some(t) => p.substitute_const(Var::T, t),
                None => p.to_rational(),
            }
        };

        if confluence {
            let zero = BigRational::zero();
            let collapsed = MultiPoly::monomial([m as u32, d.n() as u32, 0, 0], BigInt::one()).to_rational();
            for (o, p) in orders.iter().zip(&values) {
                let at_zero = p.substitute_const(Var::Y, &zero).substitute(Var::Z, &zero);
                if at_zero != collapsed {
                    let mut r = CheckReport::fail(name, d, Value::RatPoly(at_zero), Value::RatPoly(collapsed), "value at y = z = 0 (lhs) vs t^|E| x^|V| (rhs)");
                    r.orders = Some((o.clone(), o.clone()));
                    return r;
                }
            }
        }

        let first = fix_t(&values[0]);
        for (o, p) in orders.iter().zip(&values).skip(1) {
            let other = fix_t(p);
            if other != first {
                let mut note = String::from("values under two arc orders differ");
                if t.is_none() {
                    match dichotomy_factor(&(&values[0] - p)) {
                        Some(v) => note.push_str(&format!("; difference divisible by (t-1){}", v.name())),
                        None => note.push_str("; difference not divisible by (t-1)z or (t-1)y"),
                    }
                }
                let mut r = CheckReport::fail(name, d, Value::RatPoly(first), Value::RatPoly(other), note);
                r.orders = Some((orders[0].clone(), o.clone()));
                return r;
            }
        }

        if confluence {
            let memo = self.engine.xi_rec(d).to_rational();
            if memo != first {
                let mut r = CheckReport::fail(name, d, Value::RatPoly(first), Value::RatPoly(memo), "order-following value at t = 1 (lhs) vs memoized recurrence (rhs)");
                r.orders = Some((orders[0].clone(), orders[0].clone()));
                return r;
            }
        }
        CheckReport::pass(name)
    }

    /// Searches for a counterexample: every digraph with at most
    /// `min(3, max_n)` vertices and multiplicities up to `max_mult`, then
    /// random digraphs up to `max_n` vertices until `random_trials` or the
    /// budget runs out. A witness is shrunk greedily (vertices first, then
    /// single arcs) and re-verified with a cache-free engine.
    pub fn falsify(&mut self, identity: Identity, limits: &SearchLimits) -> CheckReport {
        let started = Instant::now();
        let exhaustive_n = limits.max_n.min(3);
        let spec = RandomSpec {
            min_n: 1,
            max_n: limits.max_n.max(1),
            max_mult: limits.max_mult,
            ..RandomSpec::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let exhaustive = corpus::exhaustive(exhaustive_n, limits.max_mult);
        let random = (0..limits.random_trials).map(move |_| spec.sample(&mut rng));

        let mut tested = 0;
        let mut out_of_time = false;
        for d in exhaustive.chain(random) {
            if started.elapsed() > limits.budget {
                out_of_time = true;
                break;
            }
            let r = self.check(identity, &d);
            if r.failed() {
                let small = self.shrink(identity, d);
                let mut r = self.cache_free().check(identity, &small);
                if !r.failed() {
                    r.status = Status::Skipped;
                    r.note = format!("witness {} did not re-verify without the cache", small.to_json_string());
                    return r;
                }
                r.graphs_tested = tested + 1;
                r.note = format!("{}; shrunk to {} vertices, re-verified without cache", r.note, small.n());
                return r;
            }
            if r.passed() {
                tested += 1;
            }
        }
        let mut r = CheckReport::pass(identity.name());
        r.graphs_tested = tested;
        r.note = if out_of_time {
            format!("no counterexample; budget of {:?} exhausted", limits.budget)
        } else {
            "no counterexample".into()
        };
        r
    }

    fn shrink(&mut self, identity: Identity, mut d: Digraph) -> Digraph {
        'outer: loop {
            for v in 0..d.n() {
                let smaller = d.delete_vertex(v).expect("vertex in range");
                if self.check(identity, &smaller).failed() {
                    d = smaller;
                    continue 'outer;
                }
            }
            let slots: Vec<_> = d.arcs().map(|(e, _)| e).collect();
            for e in slots {
                let smaller = d.delete_arc(e).expect("slot is occupied");
                if self.check(identity, &smaller).failed() {
                    d = smaller;
                    continue 'outer;
                }
            }
            return d;
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchLimits {
    pub max_n: usize,
    pub max_mult: u32,
    pub random_trials: usize,
    pub budget: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_n: 5,
            max_mult: 2,
            random_trials: 500,
            budget: Duration::from_secs(60),
        }
    }
}

/// Both relations between a simple graph and its symmetric orientation,
/// every side by enumeration.
pub fn check_undirected(g: &Graph) -> CheckReport {
    let name = Identity::Undirected.name();
    let d = g.orient();
    let (sigma_g, pi_g) = oracle::undirected_enum(g);
    let two = BigInt::from(2);
    let sigma_d = oracle::sigma_enum(&d);
    let expected = &sigma_g.scale(&two) + &MultiPoly::monomial([0, 2, 0, 0], BigInt::from(g.edge_count()));
    if sigma_d != expected {
        return CheckReport::fail(name, &d, Value::Poly(sigma_d), Value::Poly(expected), "sigma(D(G)) (lhs) vs 2 sigma(G) + |E| x^2 (rhs)");
    }
    let pi_d = oracle::pi_enum(&d);
    let expected = pi_g.scale(&two);
    if pi_d != expected {
        return CheckReport::fail(name, &d, Value::Poly(pi_d), Value::Poly(expected), "pi(D(G)) (lhs) vs 2 pi(G) (rhs)");
    }
    CheckReport::pass(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::{point, poly};

    fn w() -> Digraph {
        Digraph::from_arcs(5, &[(0, 2), (1, 2), (2, 3), (2, 4), (3, 1), (4, 0)]).unwrap()
    }

    #[test]
    fn projection_examples() {
        let mut c = Checker::new(1);
        for d in [Digraph::cycle(2), Digraph::cycle(1), Digraph::empty(3)] {
            assert!(c.check_projections(&d).passed());
        }
    }

    #[test]
    fn cover_transform_examples() {
        let mut c = Checker::new(1);
        for d in [Digraph::cycle(2), Digraph::empty(4), Digraph::cycle(1)] {
            assert!(c.check_geo_cover_transform(&d).passed());
            assert!(c.check_cover_from_geo(&d).passed());
        }
        let reflected = poly("1+2x+x^2y").reverse_in_x(2).unwrap();
        assert_eq!(reflected, poly("x^2+2x+y"));
    }

    #[test]
    fn coreduction_examples() {
        let mut c = Checker::new(1);
        let at = point((0, 1), (2, 1), (3, 1), (5, 1));
        let l1 = Digraph::cycle(1);
        let r = c.check_coreduction(&l1, std::slice::from_ref(&at));
        assert!(r.passed(), "{}", r);
        // forward by hand: q = 1/2, xi(1/2, 1, 2) = 7/2 = q * 7
        let q = rat(1, 2);
        let xi = poly("x+y+z").eval_rational(&[rat(0, 1), q.clone(), rat(1, 1), rat(2, 1)]);
        assert_eq!(xi, rat(7, 2));
        // backward by hand: 2 * sigma-pi(3/2, 8/3, 11/6) = 2 (1 + 4) = 10
        let sp = poly("1+xy").eval_rational(&[rat(0, 1), rat(3, 2), rat(8, 3), rat(11, 6)]);
        assert_eq!(rat(2, 1) * sp, rat(10, 1));

        assert!(c.check_coreduction(&Digraph::empty(2), std::slice::from_ref(&at)).passed());
        let r = c.check_coreduction_statement(&Digraph::empty(1), std::slice::from_ref(&at));
        assert!(r.failed());
        assert_eq!(r.lhs, Some(Value::Rational(rat(1, 1))));
        assert_eq!(r.rhs, Some(Value::Rational(rat(1, 4))));

        let excluded = point((0, 1), (0, 1), (1, 1), (1, 1));
        assert_eq!(c.check_coreduction(&l1, &[excluded]).status, Status::Skipped);
    }

    #[test]
    fn admissible_points_are_admissible() {
        let pts = admissible_points(8, 3);
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|p| forward_admissible(p) && backward_admissible(p)));
        assert_eq!(pts, admissible_points(8, 3));
    }

    #[test]
    fn undirected_examples() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(check_undirected(&k3).passed());
        assert_eq!(oracle::sigma_enum(&k3.orient()), poly("2x^3+3x^2"));
        let edge = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(check_undirected(&edge).passed());
        assert!(check_undirected(&Graph::new(3, &[]).unwrap()).passed());
    }

    #[test]
    fn vertex_decomposition_examples() {
        let mut c = Checker::new(1);
        assert!(c.check_vertex_decomposition(&Digraph::cycle(2)).passed());
        assert!(c.check_vertex_decomposition(&Digraph::cycle(3)).passed());
        let r = c.check_vertex_decomposition(&w());
        assert!(r.failed());
        assert_eq!(r.lhs, Some(Value::Poly(poly("2x^3"))));
        assert_eq!(r.rhs, Some(Value::Poly(poly("2x^3+x^5"))));
    }

    #[test]
    fn xi_modes() {
        let mut c = Checker::new(1);
        for d in [Digraph::empty(3), Digraph::cycle(1), Digraph::path(2)] {
            assert!(c.check_xi_explicit(&d, XiStatistic::Literal).passed());
            assert!(c.check_xi_explicit(&d, XiStatistic::Corrected).passed());
        }
        assert!(c.check_xi_explicit(&Digraph::cycle(2), XiStatistic::Corrected).passed());
        assert!(c.check_xi_explicit(&Digraph::cycle(2), XiStatistic::Literal).failed());
    }

    #[test]
    fn multiarc_check() {
        let mut c = Checker::new(1);
        let d = Digraph::from_matrix(&[vec![1, 2, 0], vec![3, 0, 1], vec![1, 0, 0]]).unwrap();
        assert!(c.check_multiarc(&d).passed());
    }

    #[test]
    fn order_dependence() {
        let mut c = Checker::new(1);
        for d in [Digraph::empty(3), Digraph::path(3), Digraph::cycle(3)] {
            assert!(c.probe_well_definedness(&d, Some(BigRational::one())).passed());
        }
        assert!(c.probe_well_definedness(&Digraph::empty(2), None).passed());
        let r = c.probe_well_definedness(&Digraph::path(4), None);
        assert!(r.failed(), "{}", r);
        assert!(r.note.contains("(t-1)z"), "{}", r);
        let (a, b) = r.orders.clone().unwrap();
        assert_ne!(xi_general_rec(&Digraph::path(4), &a), xi_general_rec(&Digraph::path(4), &b));
    }

    #[test]
    fn dichotomy() {
        assert_eq!(dichotomy_factor(&poly("tz-z")), Some(Var::Z));
        assert_eq!(dichotomy_factor(&poly("txy-xy")), Some(Var::Y));
        assert_eq!(dichotomy_factor(&poly("t-1")), None);
        assert_eq!(dichotomy_factor(&poly("tz")), None);
    }

    #[test]
    fn falsify_finds_small_witnesses() {
        let limits = SearchLimits {
            max_n: 3,
            max_mult: 1,
            random_trials: 0,
            budget: Duration::from_secs(60),
        };
        let r = Checker::new(7).falsify(Identity::XiLiteral, &limits);
        assert!(r.failed());
        assert!(r.witness.as_ref().unwrap().n() <= 2, "{}", r);

        let r = Checker::new(7).falsify(Identity::Projections, &limits);
        assert!(r.passed(), "{}", r);
        assert_eq!(r.graphs_tested, 2 + 16 + 512);
    }

    #[test]
    fn identity_names_round_trip() {
        for i in Identity::ALL {
            assert_eq!(i.name().parse::<Identity>().unwrap(), i);
        }
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn report_rendering() {
        let r = Checker::new(1).check_vertex_decomposition(&w());
        let text = r.to_text();
        assert!(text.starts_with("FAIL"));
        assert!(text.contains("witness: {\"n\":5"));
        let j = r.to_json();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["witness"]["n"], 5);
        assert_eq!(MultiPoly::from_json(&j["rhs"].to_string()).unwrap(), poly("2x^3+x^5"));
    }
}
