//! Command parsing and dispatch against a loaded workspace.

use std::fmt;

use purederive_core::dim::{pext_table, pgldim_probe, pid_with_samples, ppd_with_samples, Evidence, Samples};
use purederive_core::resolve::RoofCertificate;
use purederive_core::tower::{self, CoboundaryWitness, CocycleVerdict, Direction, TailRule};
use purederive_core::{
    criteria_report, pure_injective_resolution, pure_projective_resolution, purity_profile, roof_normalize, BaseRing, BoundedComplex,
    ChainMap, DimReport, ExtendedInt, PextRoute, Resolution, Side, TestFamily,
};
use num_integer::Integer;
use serde_json::{json, Value};

use crate::encode;
use crate::harness::{self, Suite};
use crate::report::{Check, Report};
use crate::workspace::{HarnessConfig, Workspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Profile(String),
    Resolve { complex: String, side: Option<Side> },
    Pext { x: String, y: String, degree: i64, route: Option<PextRoute> },
    Ppd(String),
    Pid(String),
    Criteria { complex: String, n: i64, side: Side },
    Roof(String),
    Tower(String),
    Cocycle(String),
    Probe(i64),
    Verify(Suite),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    UnknownCommand(String),
    Input(String),
    Unsupported(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::UnknownCommand(_) | CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::UnknownCommand(c) => write!(f, "unknown command: {c}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported operation: {m}"),
            CliError::Failed(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<purederive_core::Error> for CliError {
    fn from(e: purederive_core::Error) -> Self {
        use purederive_core::Error as E;
        match e {
            E::UnsupportedInjectiveBase(_) | E::Unsupported(_) => CliError::Unsupported(e.to_string()),
            E::InconsistentVerdicts(_) | E::LiftSearchFailed(_) | E::NotExact(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn usage(msg: &str) -> CliError {
    CliError::Input(msg.to_string())
}

fn parse_side(s: &str) -> Result<Side, CliError> {
    match s {
        "projective" => Ok(Side::Projective),
        "injective" => Ok(Side::Injective),
        _ => Err(usage(&format!("side must be `projective` or `injective`, got `{s}`"))),
    }
}

fn parse_int(s: &str, what: &str) -> Result<i64, CliError> {
    s.parse().map_err(|_| usage(&format!("{what} must be an integer, got `{s}`")))
}

impl Command {
    pub fn parse(args: &[String]) -> Result<Self, CliError> {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let cmd = match a.as_slice() {
            ["profile", x] => Command::Profile(x.to_string()),
            ["resolve", x] => Command::Resolve { complex: x.to_string(), side: None },
            ["resolve", x, side] => Command::Resolve { complex: x.to_string(), side: Some(parse_side(side)?) },
            ["pext", x, y, i] => Command::Pext { x: x.to_string(), y: y.to_string(), degree: parse_int(i, "degree")?, route: None },
            ["pext", x, y, i, route] => {
                let route = match *route {
                    "projective" => PextRoute::ViaProjective,
                    "injective" => PextRoute::ViaInjective,
                    "both" => PextRoute::Both,
                    other => return Err(usage(&format!("route must be projective, injective or both, got `{other}`"))),
                };
                Command::Pext { x: x.to_string(), y: y.to_string(), degree: parse_int(i, "degree")?, route: Some(route) }
            }
            ["ppd", x] => Command::Ppd(x.to_string()),
            ["pid", x] => Command::Pid(x.to_string()),
            ["criteria", x, n, side] => Command::Criteria { complex: x.to_string(), n: parse_int(n, "n")?, side: parse_side(side)? },
            ["roof", r] => Command::Roof(r.to_string()),
            ["tower", t] => Command::Tower(t.to_string()),
            ["cocycle", c] => Command::Cocycle(c.to_string()),
            ["probe", n] => Command::Probe(parse_int(n, "n")?),
            ["verify", s] => Command::Verify(s.parse().map_err(|_| CliError::UnknownCommand(format!("verify {s}")))?),
            [] => return Err(CliError::UnknownCommand(String::new())),
            _ => return Err(CliError::UnknownCommand(args.join(" "))),
        };
        Ok(cmd)
    }

    /// Commands that need no workspace.
    pub fn is_standalone(&self) -> bool {
        matches!(self, Command::Verify(_))
    }
}

fn get<'a, T>(table: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, CliError> {
    table.get(name).ok_or_else(|| CliError::Input(format!("unknown {kind} `{name}`")))
}

fn tests_for(ring: &BaseRing, cfg: &HarnessConfig) -> TestFamily {
    TestFamily::base(ring, cfg.family_cap)
}

fn resolution_json(r: &Resolution, tests: &TestFamily) -> Result<(Value, Vec<Check>), CliError> {
    let side = match r.side {
        Side::Projective => "projective",
        Side::Injective => "injective",
    };
    let inf = purity_profile(&r.resolvent, tests)?.inf_p;
    let checks = vec![
        Check::new(format!("{side}: terms in class"), r.terms_in_class(), "every resolvent term has the required purity class"),
        Check::new(format!("{side}: pure quasi-isomorphism"), r.certificate.is_yes(), "the cone of the comparison map has no failing degree"),
        Check::new(format!("{side}: finite inf_p"), !matches!(inf, ExtendedInt::NegInf), format!("inf_p of the resolvent is {inf}")),
    ];
    let v = json!({
        "certificate": encode::qiso(&r.certificate),
        "map": encode::chain_map(&r.map),
        "resolvent": encode::complex(&r.resolvent),
    });
    Ok((v, checks))
}

fn evidence(e: &Evidence) -> Value {
    match e {
        Evidence::Proven => json!("proven"),
        Evidence::Consistent { checked } => json!({ "consistent": checked }),
        Evidence::Refuted => json!("refuted"),
    }
}

fn dim_json(rep: &DimReport) -> Value {
    let per_n: Vec<Value> = rep
        .per_n
        .iter()
        .map(|c| {
            json!({
                "n": c.n,
                "verdict": c.verdict(),
                "criteria": c.outcomes.iter().map(|o| json!({
                    "criterion": o.criterion,
                    "holds": o.holds,
                    "evidence": evidence(&o.evidence),
                    "detail": o.detail,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "value": encode::ext(rep.value), "inf_p": encode::ext(rep.inf_p), "sup_p": encode::ext(rep.sup_p), "per_n": per_n })
}

fn negate(v: ExtendedInt) -> ExtendedInt {
    match v {
        ExtendedInt::Finite(n) => ExtendedInt::Finite(-n),
        ExtendedInt::PosInf => ExtendedInt::NegInf,
        ExtendedInt::NegInf => ExtendedInt::PosInf,
    }
}

fn samples_from(ws: &Workspace, skip: &str) -> Samples {
    Samples { complexes: ws.complexes.iter().filter(|(k, _)| k.as_str() != skip).map(|(_, x)| x.clone()).collect() }
}

fn witness_json(w: &CoboundaryWitness) -> Value {
    let rows = |v: &[Vec<purederive_core::Int>]| Value::Array(v.iter().map(|r| encode::ints(r)).collect());
    match w {
        CoboundaryWitness::EventuallyZero { prefix } => json!({ "kind": "eventually_zero", "prefix": rows(prefix) }),
        CoboundaryWitness::EventuallyLinear { prefix, step } => {
            json!({ "kind": "eventually_linear", "prefix": rows(prefix), "step": encode::ints(step) })
        }
        CoboundaryWitness::EventuallyPeriodic { prefix, period } => {
            json!({ "kind": "eventually_periodic", "prefix": rows(prefix), "period": rows(period) })
        }
    }
}

/// Decide one cocycle and re-check whatever certificate comes back.
fn cocycle_json(ws: &Workspace, name: &str, depth: usize) -> Result<(Value, Vec<Check>), CliError> {
    let c = get(&ws.cocycles, "cocycle", name)?;
    let t = get(&ws.towers, "tower", &c.tower)?;
    let mut lim = tower::pext1_colim(t, &c.target)?;
    let verdict = tower::cocycle_decide(&mut lim, &c.cocycle, depth)?;
    let mut checks = Vec::new();
    let v = match &verdict {
        CocycleVerdict::Coboundary(w) => {
            let ok = tower::verify_witness(&mut lim, &c.cocycle, w, depth.max(8) * 2);
            checks.push(Check::new(format!("{name}: witness substitution"), ok, "c_i = a_i - rho_i(a_{i+1}) on the checked range"));
            json!({ "verdict": "coboundary", "witness": witness_json(w) })
        }
        CocycleVerdict::NotCoboundary(g) => {
            // r_{k+1} reduces to r_k, and past the start the residues keep
            // distance M_{k-1} from both ends of [0, M_k)
            let chain = g.residues.windows(2).all(|w| w[1].2.mod_floor(&w[0].1) == w[0].2);
            let apart = g.residues.windows(2).filter(|w| w[1].0 >= g.start + 2).all(|w| {
                let (m_prev, (m, r)) = (&w[0].1, (&w[1].1, &w[1].2));
                r >= m_prev && &(m - r) >= m_prev
            });
            let ok = chain && apart;
            checks.push(Check::new(format!("{name}: residue chain"), ok, format!("{} residues checked", g.residues.len())));
            json!({
                "verdict": "not_coboundary",
                "start": g.start,
                "constant": encode::int(&g.constant),
                "residues": g.residues.iter().map(|(k, m, r)| json!([k, encode::int(m), encode::int(r)])).collect::<Vec<_>>(),
            })
        }
        CocycleVerdict::Undecided { depth } => json!({ "verdict": "undecided", "depth": depth }),
    };
    Ok((json!({ "cocycle": name, "tower": c.tower, "decision": v }), checks))
}

pub fn run(ws: Option<&Workspace>, cfg: &HarnessConfig, command: &Command, argv: &[String]) -> Result<Report, CliError> {
    let mut checks = Vec::new();
    let need = || ws.ok_or_else(|| usage("this command needs --workspace"));
    let results = match command {
        Command::Verify(suite) => {
            let out = harness::run_suite(*suite, cfg);
            checks = out.checks;
            out.results
        }
        Command::Profile(name) => {
            let ws = need()?;
            let x = get(&ws.complexes, "complex", name)?;
            let p = purity_profile(x, &tests_for(&ws.ring, cfg))?;
            checks.push(Check::new("range cross-check", true, "per-degree profile agrees with the tensor and Hom range criteria"));
            json!({ "complex": name, "profile": encode::profile(&p) })
        }
        Command::Resolve { complex, side } => {
            let ws = need()?;
            let x = get(&ws.complexes, "complex", complex)?;
            let tests = tests_for(&ws.ring, cfg);
            let mut out = serde_json::Map::new();
            out.insert("complex".into(), json!(complex));
            if side.is_none_or(|s| s == Side::Projective) {
                let (v, c) = resolution_json(&pure_projective_resolution(x, &tests)?, &tests)?;
                out.insert("projective".into(), v);
                checks.extend(c);
            }
            if side.is_none_or(|s| s == Side::Injective) {
                match pure_injective_resolution(x, &tests) {
                    Ok(r) => {
                        let (v, c) = resolution_json(&r, &tests)?;
                        out.insert("injective".into(), v);
                        checks.extend(c);
                    }
                    Err(e @ purederive_core::Error::UnsupportedInjectiveBase(_)) if side.is_none() => {
                        out.insert("injective".into(), json!({ "unsupported": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Value::Object(out)
        }
        Command::Pext { x, y, degree, route } => {
            let ws = need()?;
            let (cx, cy) = (get(&ws.complexes, "complex", x)?, get(&ws.complexes, "complex", y)?);
            let route = route.unwrap_or(if ws.ring.is_finite() { PextRoute::Both } else { PextRoute::ViaProjective });
            let table = pext_table(cx, cy, route, &tests_for(&ws.ring, cfg))?;
            let value = table.get(degree).map_or_else(|| "0".to_string(), |m| m.canonical_form().to_string());
            if route == PextRoute::Both {
                checks.push(Check::new("routes agree", true, "projective and injective routes give equal canonical forms"));
            }
            let nonzero: serde_json::Map<String, Value> =
                table.iter().map(|(i, m)| (i.to_string(), json!(m.canonical_form().to_string()))).collect();
            json!({
                "x": x, "y": y, "degree": degree,
                "route": format!("{route:?}"),
                "value": value,
                "nonzero_degrees": nonzero,
            })
        }
        Command::Ppd(name) | Command::Pid(name) => {
            let ws = need()?;
            let x = get(&ws.complexes, "complex", name)?;
            let tests = tests_for(&ws.ring, cfg);
            let samples = samples_from(ws, name);
            let (rep, expected, what) = match command {
                Command::Ppd(_) => {
                    let rep = ppd_with_samples(x, &tests, &samples)?;
                    let e = negate(rep.inf_p);
                    (rep, e, "ppd = -inf_p")
                }
                _ => {
                    let rep = pid_with_samples(x, &tests, &samples)?;
                    let e = rep.sup_p;
                    (rep, e, "pid = sup_p")
                }
            };
            checks.push(Check::new("criteria agree", true, format!("criteria (1), (2), (3), (5) agree at {} candidate bounds", rep.per_n.len())));
            checks.push(Check::new(what, rep.value == expected, format!("value {}, expected {expected}", rep.value)));
            json!({ "complex": name, "report": dim_json(&rep) })
        }
        Command::Criteria { complex, n, side } => {
            let ws = need()?;
            let x = get(&ws.complexes, "complex", complex)?;
            let samples = samples_from(ws, complex);
            let rep = criteria_report(x, *n, *side, &tests_for(&ws.ring, cfg), &samples)?;
            let verdict = rep.verdict();
            let four_ok = verdict != Some(true) || rep.outcome(4).is_none_or(|o| o.holds);
            checks.push(Check::new("decidable criteria agree", verdict.is_some(), "criteria (1), (2), (3), (5)"));
            checks.push(Check::new("sampled criterion consistent", four_ok, "criterion (4) does not contradict"));
            json!({
                "complex": complex,
                "n": n,
                "side": format!("{side:?}").to_lowercase(),
                "verdict": verdict,
                "criteria": rep.outcomes.iter().map(|o| json!({
                    "criterion": o.criterion, "holds": o.holds, "evidence": evidence(&o.evidence), "detail": o.detail,
                })).collect::<Vec<_>>(),
            })
        }
        Command::Roof(name) => {
            let ws = need()?;
            let r = get(&ws.roofs, "roof", name)?;
            let n = roof_normalize(r, &tests_for(&ws.ring, cfg))?;
            let cert = match &n.certificate {
                RoofCertificate::HomotopyInverse { t, homotopy } => {
                    let ok = homotopy.verify(&t.then(&r.s)?, &ChainMap::identity(r.s.target()));
                    checks.push(Check::new("homotopy inverse", ok, "s o t is homotopic to the identity via the given homotopy"));
                    json!({ "kind": "homotopy_inverse", "t": encode::chain_map(t), "homotopy": encode::homotopy(homotopy) })
                }
                RoofCertificate::StalkHomology { degree, q, .. } => {
                    checks.push(Check::new("apex homology factorization", true, "both legs factor through the apex homology"));
                    json!({ "kind": "stalk_homology", "degree": degree, "q": encode::map(q) })
                }
            };
            json!({ "roof": name, "g": encode::chain_map(&n.g), "certificate": cert })
        }
        Command::Tower(name) => {
            let ws = need()?;
            let t = get(&ws.towers, "tower", name)?;
            let tests = tests_for(&ws.ring, cfg);
            let depth = cfg.depth;
            let stages: Vec<Value> = (0..=depth).map(|i| json!(t.stage(i).canonical_form().to_string())).collect();
            let mut out = serde_json::Map::new();
            out.insert("tower".into(), json!(name));
            out.insert("direction".into(), json!(format!("{:?}", t.direction()).to_lowercase()));
            out.insert("tail".into(), json!(tail_name(t.tail())));
            out.insert("stages".into(), Value::Array(stages));
            match t.direction() {
                Direction::Direct => {
                    let mut trunc = Vec::new();
                    for d in 1..=depth {
                        let p = tower::colim_presentation(t, d)?;
                        checks.push(Check::new(
                            format!("depth {d}: truncated sequence"),
                            p.exact && p.monic && p.truncation_pure,
                            format!("exact {}, monic {}, pure {}", p.exact, p.monic, p.truncation_pure),
                        ));
                        trunc.push(json!({ "depth": d, "exact": p.exact, "monic": p.monic, "pure": p.truncation_pure }));
                    }
                    out.insert("truncations".into(), Value::Array(trunc));
                    let h = tower::hocolim_resolution(t, depth, &tests)?;
                    checks.push(Check::new("hocolim comparison", h.resolution.certificate.is_yes(), "two-term resolution is a pure quasi-isomorphism"));
                    out.insert("ppd_bound".into(), json!(h.ppd_bound));
                    out.insert("hocolim".into(), encode::complex(&h.resolution.resolvent));
                }
                Direction::Inverse => match tower::holim_injective_resolution(t, depth, &tests) {
                    Ok(h) => {
                        checks.push(Check::new("holim comparison", h.resolution.certificate.is_yes(), "two-term resolution is a pure quasi-isomorphism"));
                        out.insert("pid_bound".into(), json!(h.pid_bound));
                        out.insert("holim".into(), encode::complex(&h.resolution.resolvent));
                    }
                    Err(e @ purederive_core::Error::UnsupportedInjectiveBase(_)) => {
                        out.insert("holim".into(), json!({ "unsupported": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                },
            }
            let mut cocycles = Vec::new();
            for (cname, c) in &ws.cocycles {
                if c.tower == *name {
                    let (v, cs) = cocycle_json(ws, cname, depth)?;
                    cocycles.push(v);
                    checks.extend(cs);
                }
            }
            out.insert("cocycles".into(), Value::Array(cocycles));
            Value::Object(out)
        }
        Command::Cocycle(name) => {
            let ws = need()?;
            let (v, cs) = cocycle_json(ws, name, cfg.depth)?;
            checks.extend(cs);
            v
        }
        Command::Probe(n) => {
            let ws = need()?;
            let samples: Vec<BoundedComplex> = ws.complexes.values().cloned().collect();
            let witness = ws.ring == BaseRing::Integers;
            let rep = pgldim_probe(&ws.ring, &samples, *n, witness, &tests_for(&ws.ring, cfg))?;
            let names: Vec<&String> = ws.complexes.keys().collect();
            for c in &rep.checks {
                checks.push(Check::new(format!("{}: {}", names[c.sample], c.statement), c.holds, ""));
            }
            json!({
                "candidate": n,
                "samples": rep.samples,
                "observed_bound": encode::ext(rep.observed_bound),
                "reported_bound": encode::ext(rep.reported_bound()),
                "nonzero_higher_pext": rep.nonzero_higher_pext,
                "tower_lower_bound": rep.tower_lower_bound,
                "fg_blind": rep.fg_blind,
            })
        }
    };
    Ok(Report { command: argv.to_vec(), seed: cfg.seed, results, checks })
}

fn tail_name(t: TailRule) -> String {
    match t {
        TailRule::EventuallyIso => "eventually_iso".into(),
        TailRule::MultiplicationBy { slope, offset } => format!("multiplication_by {slope}*i+{offset}"),
        TailRule::PowerQuotient { p } => format!("power_quotient {p}"),
    }
}
