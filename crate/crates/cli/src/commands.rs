use serde::Deserialize;
use serde_json::{json, Value};

use conecalc::diophantine::{
    approximate_anchored, approximate_simplex, closure_structure, pushforward_subspace, RawPoint, SymbolicPoint,
};
use conecalc::exact::{fmt_rat, hermite_basis_in, IntLattice, Rat, RatMat};
use conecalc::polyhedral::{
    hilbert_basis, monoid_preimage, verify_fan, AffineMonoid, Fan, RationalCone, RationalPolytope, Truncation,
};
use conecalc::pwl::{check_additivity_up_to_truncation, straighten, verify_pwl, PwlMap, PwlVerdict, TruncationVerdict};
use conecalc::toric::{
    asymptotic_ord, base_locus, chamber_decomposition, chamber_truncations, divisor_polytope, fix_mob,
    multigraded_generators, not_in_b_region, ord_vector, restrict_to_ray, sections, DivisorFamily, LocusMode, TDivisor,
    ToricVariety,
};

use crate::input::{common_dim, guard, parse, rat_rows, rats, Q};
use crate::oracle::{Built, OracleSpec};
use crate::{CliError, Response, Settings, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_OK};

type Out = Result<Response, CliError>;

pub fn dispatch(command: &str, input: &str, s: &Settings) -> Out {
    match command {
        "hilbert" => hilbert(input, s),
        "saturate" => saturate(input, s),
        "truncate" => truncate(input, s),
        "preimage" => preimage(input, s),
        "fan-verify" => fan_verify(input, s),
        "dioph subspace" => dioph_subspace(input, s),
        "dioph closure" => dioph_closure(input, s),
        "dioph simplex" => dioph_simplex(input, s),
        "dioph anchored" => dioph_anchored(input, s),
        "pwl straighten" => pwl_straighten(input, s),
        "pwl trunc-check" => pwl_trunc_check(input, s),
        "pwl verify" => pwl_verify(input, s),
        "toric polytope" => toric_polytope(input),
        "toric h0" => toric_h0(input),
        "toric fixmob" => toric_fixmob(input),
        "toric ord" => toric_ord(input),
        "toric bsl" => toric_bsl(input),
        "toric region" => toric_region(input),
        "toric chambers" => toric_chambers(input),
        "toric coxgen" => toric_coxgen(input),
        "toric restrict" => toric_restrict(input),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

fn q(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn qv(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn qm(m: &RatMat) -> Value {
    Value::Array(m.rows().iter().map(|r| qv(r)).collect())
}

fn ser<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn cone_from_rays(rays: &[Vec<i64>], path: &str, s: &Settings) -> Result<RationalCone, CliError> {
    let d = common_dim(rays, path)?;
    guard(d, s.max_dim, path)?;
    Ok(RationalCone::new(d, rays)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HilbertIn {
    #[serde(default)]
    rays: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    inequalities: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    equations: Vec<Vec<i64>>,
    #[serde(default)]
    dim: Option<usize>,
}

fn hilbert(input: &str, s: &Settings) -> Out {
    let i: HilbertIn = parse(input)?;
    let cone = match (&i.rays, &i.inequalities) {
        (Some(r), None) => cone_from_rays(r, "/rays", s)?,
        (None, Some(h)) => {
            let d = match i.dim {
                Some(d) => d,
                None => common_dim(h, "/inequalities")?,
            };
            guard(d, s.max_dim, "/dim")?;
            RationalCone::from_int_inequalities(d, h, &i.equations)?
        }
        _ => {
            return Err(CliError::Schema {
                path: String::new(),
                message: "exactly one of \"rays\" and \"inequalities\" is required".into(),
            })
        }
    };
    let hb = hilbert_basis(&cone)?;
    Ok(Response::ok(json!({
        "dim": cone.ambient_dim(),
        "rays": cone.rays(),
        "hilbert_basis": hb,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidIn {
    gens: Vec<Vec<i64>>,
}

fn monoid(gens: &[Vec<i64>], path: &str, s: &Settings) -> Result<AffineMonoid, CliError> {
    let d = common_dim(gens, path)?;
    guard(d, s.max_dim, path)?;
    Ok(AffineMonoid::new(d, gens)?)
}

fn saturate(input: &str, s: &Settings) -> Out {
    let i: MonoidIn = parse(input)?;
    let m = monoid(&i.gens, "/gens", s)?;
    let sat = m.saturate();
    Ok(Response::ok(json!({
        "input_saturated": m.is_saturated(),
        "gens": sat.generators(),
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncateIn {
    gens: Vec<Vec<i64>>,
    #[serde(default)]
    kappa: Option<u64>,
    #[serde(default)]
    kappas: Option<Vec<u64>>,
}

fn truncate(input: &str, s: &Settings) -> Out {
    let i: TruncateIn = parse(input)?;
    let m = monoid(&i.gens, "/gens", s)?;
    let t = match (i.kappa, i.kappas) {
        (Some(k), None) => Truncation::Uniform(k),
        (None, Some(ks)) => Truncation::PerGenerator(ks),
        _ => {
            return Err(CliError::Schema {
                path: String::new(),
                message: "exactly one of \"kappa\" and \"kappas\" is required".into(),
            })
        }
    };
    let mut gens = m.truncate(&t)?.generators().to_vec();
    gens.sort();
    Ok(Response::ok(json!({"gens": gens})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PreimageIn {
    lambda: Vec<Vec<i64>>,
    target: Vec<Vec<i64>>,
    monoid: Vec<Vec<i64>>,
}

fn preimage(input: &str, s: &Settings) -> Out {
    let i: PreimageIn = parse(input)?;
    let target = cone_from_rays(&i.target, "/target", s)?;
    let m = monoid(&i.monoid, "/monoid", s)?;
    let out = monoid_preimage(&i.lambda, &target, &m)?;
    Ok(Response::ok(json!({
        "gens": out.generators(),
        "saturated": out.is_saturated(),
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanIn {
    cones: Vec<Vec<Vec<i64>>>,
    support: Vec<Vec<i64>>,
}

fn build_fan(cones: &[Vec<Vec<i64>>], support: &[Vec<i64>], prefix: &str, s: &Settings) -> Result<Fan, CliError> {
    let support = cone_from_rays(support, &format!("{prefix}/support"), s)?;
    let cones = cones
        .iter()
        .enumerate()
        .map(|(k, c)| cone_from_rays(c, &format!("{prefix}/cones/{k}"), s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Fan::new(cones, support)?)
}

fn fan_verify(input: &str, s: &Settings) -> Out {
    let i: FanIn = parse(input)?;
    let fan = build_fan(&i.cones, &i.support, "", s)?;
    let v = verify_fan(&fan)?;
    Ok(Response {
        code: if v.is_some() { EXIT_COUNTEREXAMPLE } else { EXIT_OK },
        value: json!({"valid": v.is_none(), "violation": v}),
    })
}

fn point(raw: RawPoint, s: &Settings) -> Result<SymbolicPoint, CliError> {
    guard(raw.coords.len(), s.max_dim, "/point/coords")?;
    Ok(raw.resolve()?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceIn {
    point: RawPoint,
    #[serde(default)]
    lambda: Option<Vec<Vec<Q>>>,
}

fn dioph_subspace(input: &str, s: &Settings) -> Out {
    let i: SubspaceIn = parse(input)?;
    let x = point(i.point, s)?;
    let w = match &i.lambda {
        Some(l) => pushforward_subspace(&RatMat::from_rows(x.dim(), &rat_rows(l))?, &x)?,
        None => x.hull().clone(),
    };
    Ok(Response::ok(json!({"dim": w.dim(), "subspace": w})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosureIn {
    point: RawPoint,
    #[serde(default)]
    lattice: Option<Vec<Vec<i64>>>,
}

fn dioph_closure(input: &str, s: &Settings) -> Out {
    let i: ClosureIn = parse(input)?;
    let x = point(i.point, s)?;
    let lattice = match &i.lattice {
        Some(b) => hermite_basis_in(x.dim(), b),
        None => IntLattice::standard(x.dim()),
    };
    let c = closure_structure(&x, &lattice)?;
    Ok(Response::ok(json!({
        "order": c.order(),
        "symmetric": c.is_symmetric(&lattice),
        "closure": c,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexIn {
    point: RawPoint,
    k: i64,
    epsilon: Q,
}

fn dioph_simplex(input: &str, s: &Settings) -> Out {
    let i: SimplexIn = parse(input)?;
    let x = point(i.point, s)?;
    let cert = approximate_simplex(&x, i.k, &i.epsilon.0)?;
    cert.verify()?;
    Ok(Response::ok(json!({"verified": true, "certificate": cert})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnchoredIn {
    point: RawPoint,
    epsilon: Q,
    eta: Q,
    w1: Vec<Q>,
    k1: i64,
}

fn dioph_anchored(input: &str, s: &Settings) -> Out {
    let i: AnchoredIn = parse(input)?;
    let x = point(i.point, s)?;
    let cert = approximate_anchored(&x, &i.epsilon.0, &i.eta.0, &rats(&i.w1), i.k1)?;
    cert.verify()?;
    Ok(Response::ok(json!({"verified": true, "certificate": cert})))
}

fn oracle(desc: &OracleSpec, s: &Settings) -> Result<Built, CliError> {
    let b = Built::build(desc)?;
    guard(b.dim(), s.max_dim, "/oracle")?;
    Ok(b)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StraightenIn {
    oracle: OracleSpec,
    rays: Vec<Vec<i64>>,
}

fn pwl_straighten(input: &str, s: &Settings) -> Out {
    let i: StraightenIn = parse(input)?;
    let b = oracle(&i.oracle, s)?;
    let out = b.with(|f| Ok(straighten(f, &i.rays)?))?;
    Ok(Response::ok(json!({"rays": out})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncCheckIn {
    oracle: OracleSpec,
    cone: Vec<Vec<i64>>,
    p_max: u64,
    #[serde(default = "six")]
    samples: u64,
}

fn six() -> u64 {
    6
}

fn truncation_code(v: &TruncationVerdict) -> i32 {
    match v {
        TruncationVerdict::Additive { .. } => EXIT_OK,
        TruncationVerdict::Counterexample { .. } => EXIT_COUNTEREXAMPLE,
        TruncationVerdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

fn pwl_trunc_check(input: &str, s: &Settings) -> Out {
    let i: TruncCheckIn = parse(input)?;
    let b = oracle(&i.oracle, s)?;
    let cone = cone_from_rays(&i.cone, "/cone", s)?;
    let v = b.with(|f| Ok(check_additivity_up_to_truncation(f, &cone, i.p_max, i.samples)?))?;
    Ok(Response {
        code: truncation_code(&v),
        value: ser(&v),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimIn {
    cones: Vec<Vec<Vec<i64>>>,
    support: Vec<Vec<i64>>,
    pieces: Vec<Vec<Vec<Q>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyIn {
    oracle: OracleSpec,
    claim: ClaimIn,
    #[serde(default = "budget")]
    budget: usize,
}

fn budget() -> usize {
    16
}

fn pwl_verify(input: &str, s: &Settings) -> Out {
    let i: VerifyIn = parse(input)?;
    let b = oracle(&i.oracle, s)?;
    let fan = build_fan(&i.claim.cones, &i.claim.support, "/claim", s)?;
    let d = fan.support.ambient_dim();
    let pieces = i
        .claim
        .pieces
        .iter()
        .map(|p| RatMat::from_rows(d, &rat_rows(p)))
        .collect::<conecalc::Result<Vec<_>>>()?;
    let claim = PwlMap::new(fan, pieces)?;
    let v = b.with(|f| Ok(verify_pwl(f, &claim, i.budget, s.seed)?))?;
    Ok(Response {
        code: match v {
            PwlVerdict::Verified { .. } => EXIT_OK,
            PwlVerdict::Disagreement { .. } => EXIT_COUNTEREXAMPLE,
        },
        value: json!({"seed": s.seed, "result": v}),
    })
}

fn variety(rays: &[Vec<i64>], max_cones: &[Vec<usize>]) -> Result<ToricVariety, CliError> {
    Ok(ToricVariety::new(rays.to_vec(), max_cones.to_vec())?)
}

fn divisor(x: &ToricVariety, coeffs: &[Q], path: &str) -> Result<TDivisor, CliError> {
    if coeffs.len() != x.n_rays() {
        return Err(CliError::Schema {
            path: path.to_string(),
            message: format!("expected {} coefficients, found {}", x.n_rays(), coeffs.len()),
        });
    }
    Ok(TDivisor::new(rats(coeffs)))
}

fn ray_index(x: &ToricVariety, ray: usize) -> Result<usize, CliError> {
    if ray >= x.n_rays() {
        return Err(CliError::Schema {
            path: "/ray".into(),
            message: format!("ray index {ray} out of range"),
        });
    }
    Ok(ray)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    coeffs: Vec<Q>,
}

fn polytope_json(p: &RationalPolytope) -> Value {
    json!({
        "empty": p.is_empty(),
        "dim": p.polytope_dim(),
        "vertices": p.vertices().iter().map(|v| qv(v)).collect::<Vec<_>>(),
    })
}

fn toric_polytope(input: &str) -> Out {
    let i: DivisorIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    Ok(Response::ok(polytope_json(&divisor_polytope(&x, &d)?)))
}

fn toric_h0(input: &str) -> Out {
    let i: DivisorIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    let pts = sections(&x, &d)?;
    Ok(Response::ok(json!({"h0": pts.len(), "sections": pts})))
}

fn toric_fixmob(input: &str) -> Out {
    let i: DivisorIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    Ok(Response::ok(ser(&fix_mob(&x, &d)?)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RayDivisorIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    coeffs: Vec<Q>,
    ray: usize,
}

fn toric_ord(input: &str) -> Out {
    let i: RayDivisorIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    Ok(Response::ok(ser(&asymptotic_ord(&x, ray_index(&x, i.ray)?, &d)?)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BslIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    coeffs: Vec<Q>,
    mode: ModeIn,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModeIn {
    Stable,
    Diminished,
}

fn toric_bsl(input: &str) -> Out {
    let i: BslIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    let mode = match i.mode {
        ModeIn::Stable => LocusMode::Stable,
        ModeIn::Diminished => LocusMode::Diminished,
    };
    let b = base_locus(&x, &d, mode)?;
    let ords = ord_vector(&x, &d)?;
    Ok(Response::ok(json!({
        "mode": mode,
        "rays": b.rays,
        "everything": b.everything,
        "ample": (mode == LocusMode::Diminished).then(|| x.ample_divisor()).transpose()?,
        "ords": ords.as_deref().map(qv),
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    base: Vec<Q>,
    directions: Vec<Vec<Q>>,
    parameters: Vec<Vec<Q>>,
    ray: usize,
}

fn toric_region(input: &str) -> Out {
    let i: RegionIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let base = divisor(&x, &i.base, "/base")?;
    let dirs = i
        .directions
        .iter()
        .enumerate()
        .map(|(k, d)| divisor(&x, d, &format!("/directions/{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let params = RationalPolytope::from_points(dirs.len(), &rat_rows(&i.parameters))?;
    let fam = DivisorFamily::new(base, dirs, params)?;
    Ok(Response::ok(polytope_json(&not_in_b_region(
        &x,
        &fam,
        ray_index(&x, i.ray)?,
    )?)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChambersIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    directions: Vec<Vec<Q>>,
    #[serde(default = "six")]
    p_max: u64,
}

fn toric_chambers(input: &str) -> Out {
    let i: ChambersIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let dirs = i
        .directions
        .iter()
        .enumerate()
        .map(|(k, d)| divisor(&x, d, &format!("/directions/{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let c = chamber_decomposition(&x, &dirs)?;
    let truncations: Vec<Value> = if dirs.iter().all(TDivisor::is_integral) {
        chamber_truncations(&x, &dirs, &c.fan.cones, i.p_max, 6)?
            .iter()
            .map(ser)
            .collect()
    } else {
        vec![Value::Null; c.fan.cones.len()]
    };
    let chambers: Vec<Value> = c
        .fan
        .cones
        .iter()
        .enumerate()
        .map(|(k, cone)| {
            json!({
                "rays": cone.rays(),
                "ord": qm(&c.ord_pieces[k]),
                "mob": qm(&c.mob_pieces[k]),
                "truncation": truncations[k],
            })
        })
        .collect();
    Ok(Response::ok(json!({"chambers": chambers})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoxIn {
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    divisors: Vec<Vec<Q>>,
}

fn toric_coxgen(input: &str) -> Out {
    let i: CoxIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let divs = i
        .divisors
        .iter()
        .enumerate()
        .map(|(k, d)| divisor(&x, d, &format!("/divisors/{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let g = multigraded_generators(&x, &divs)?;
    Ok(Response::ok(json!({"count": g.len(), "generators": g})))
}

fn toric_restrict(input: &str) -> Out {
    let i: RayDivisorIn = parse(input)?;
    let x = variety(&i.rays, &i.max_cones)?;
    let d = divisor(&x, &i.coeffs, "/coeffs")?;
    Ok(Response::ok(ser(&restrict_to_ray(&x, ray_index(&x, i.ray)?, &d)?)))
}
