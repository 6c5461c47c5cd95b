use conecalc::exact::{Rat, RatVec};
use conecalc::polyhedral::{verify_fan, AffineMonoid, RationalPolytope};
use conecalc::pwl::{
    check_additivity_up_to_truncation, straighten_one, verify_pwl, FnOracle, PwlMap, PwlVerdict, TruncationVerdict,
};
use conecalc::toric::{
    asymptotic_ord, base_locus, chamber_decomposition, h0, multigraded_generators, not_in_b_region, ord_vector,
    restrict_to_ray, DivisorFamily, LocusMode, MobOracle, TDivisor, ToricVariety,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{box_points, positive_support, q, qf, DivisorPolytope};
use crate::{ensure, Outcome};

fn polytope(x: &ToricVariety, d: &[Rat]) -> DivisorPolytope {
    DivisorPolytope::new(x.rays(), d)
}

fn coeffs(d: &TDivisor) -> Vec<Rat> {
    d.coeffs.clone()
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scaled(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * c).collect()
}

fn leq(a: &[Rat], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort();
    u.dedup();
    u
}

fn f2() -> ToricVariety {
    ToricVariety::hirzebruch(2)
}

fn varieties() -> Vec<(&'static str, ToricVariety)> {
    vec![
        ("F1", ToricVariety::hirzebruch(1)),
        ("F2", f2()),
        ("P2", ToricVariety::p2()),
        ("random 3-fold", ToricVariety::random_threefold(7, 3)),
    ]
}

/// Per-divisor checks against the vertex oracle; returns `(ord, B, B_-)`.
fn invariants(x: &ToricVariety, a: &[Rat], d: &[Rat]) -> Result<(Vec<Rat>, Vec<usize>, Vec<usize>), String> {
    let div = TDivisor::new(d.to_vec());
    let ord = polytope(x, d).ord().ok_or("test divisor has no sections")?;
    let lib = ord_vector(x, &div).map_err(|e| e.to_string())?;
    ensure(
        lib.as_ref() == Some(&ord),
        format!("ord of {d:?}: library {lib:?}, oracle {ord:?}"),
    )?;
    let b = positive_support(&ord);
    let stable = base_locus(x, &div, LocusMode::Stable).map_err(|e| e.to_string())?;
    ensure(
        !stable.everything && stable.rays == b,
        format!("B({d:?}) = {stable:?}, oracle {b:?}"),
    )?;
    let tiny = polytope(x, &add(d, &scaled(a, &qf(1, 1_000_000))))
        .ord()
        .ok_or("perturbation has no sections")?;
    let bminus = positive_support(&tiny);
    let dim = base_locus(x, &div, LocusMode::Diminished).map_err(|e| e.to_string())?;
    ensure(
        !dim.everything && dim.rays == bminus,
        format!("B_-({d:?}) = {dim:?}, oracle {bminus:?}"),
    )?;
    Ok((ord, b, bminus))
}

pub fn invariant_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut summary = Vec::new();
    for (name, x) in varieties() {
        let n = x.n_rays();
        let a = coeffs(&x.ample_divisor().map_err(|e| e.to_string())?);
        ensure(
            x.is_ample(&TDivisor::new(a.clone())),
            format!("{name}: ample divisor is not ample"),
        )?;
        let mut pairs = 0;
        while pairs < 100 {
            let d1: Vec<Rat> = (0..n).map(|_| q(rng.gen_range(0..=3))).collect();
            let d2: Vec<Rat> = (0..n).map(|_| q(rng.gen_range(0..=3))).collect();
            let ctx = format!("{name}, D1 = {d1:?}, D2 = {d2:?}");
            let (o1, b1, m1) = invariants(&x, &a, &d1).map_err(|e| format!("{ctx}: {e}"))?;
            let (o2, b2, _) = invariants(&x, &a, &d2).map_err(|e| format!("{ctx}: {e}"))?;
            let sum = add(&d1, &d2);
            let (o12, b12, _) = invariants(&x, &a, &sum).map_err(|e| format!("{ctx}: {e}"))?;
            ensure(
                subset(&b12, &union(&b1, &b2)),
                format!("{ctx}: B(D1+D2) not in B(D1) u B(D2)"),
            )?;
            ensure(leq(&o12, &add(&o1, &o2)), format!("{ctx}: ord not sublinear"))?;
            ensure(subset(&m1, &b1), format!("{ctx}: B_- not in B"))?;
            let oa = polytope(&x, &add(&d1, &a)).ord().ok_or("D + A has no sections")?;
            let lib_oa = ord_vector(&x, &TDivisor::new(add(&d1, &a))).map_err(|e| e.to_string())?;
            ensure(lib_oa.as_ref() == Some(&oa), format!("{ctx}: ord(D + A) disagrees"))?;
            ensure(leq(&oa, &o1), format!("{ctx}: ord(D + A) > ord(D)"))?;
            let rho = rng.gen_range(0..n);
            let lp = asymptotic_ord(&x, rho, &TDivisor::new(d1.clone())).map_err(|e| e.to_string())?;
            ensure(
                lp.value == o1[rho],
                format!("{ctx}: LP ord along ray {rho} is {}", lp.value),
            )?;
            pairs += 1;
        }
        summary.push(format!("{name} {pairs}"));
    }
    Ok(format!("pairs per variety: {}", summary.join(", ")))
}

fn family_divisor(s: &[i64]) -> Vec<Rat> {
    vec![q(s[0]), q(s[1]), q(0), q(0)]
}

pub fn f2_chambers() -> Outcome {
    let x = f2();
    let dirs = vec![TDivisor::prime(4, 0), TDivisor::prime(4, 1)];
    let cd = chamber_decomposition(&x, &dirs).map_err(|e| e.to_string())?;
    let v = verify_fan(&cd.fan).map_err(|e| e.to_string())?;
    ensure(v.is_none(), format!("chamber fan fails verification: {v:?}"))?;
    let rays: Vec<Vec<Vec<i64>>> = cd.fan.cones.iter().map(|c| c.rays().to_vec()).collect();

    for s in box_points(&[0, 0], &[12, 12]) {
        let Some(i) = cd.fan.locate(&s) else {
            return Err(format!("{s:?} lies in no chamber"));
        };
        let ord = polytope(&x, &family_divisor(&s)).ord().ok_or("no sections")?;
        let piece = cd.ord_pieces[i]
            .mul_vec(&s.iter().map(|&v| q(v)).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        ensure(
            piece == ord,
            format!("ord at {s:?}: chamber piece {piece:?}, oracle {ord:?}"),
        )?;
    }

    let oracle = FnOracle::new(
        AffineMonoid::orthant(2),
        |s: &[i64]| polytope(&f2(), &family_divisor(s)).ord().expect("sections"),
        |_: &[i64]| Some(1),
    );
    let claim = PwlMap::new(cd.fan.clone(), cd.ord_pieces.clone()).map_err(|e| e.to_string())?;
    let verdict = verify_pwl(&oracle, &claim, 32, 7).map_err(|e| e.to_string())?;
    ensure(
        matches!(verdict, PwlVerdict::Verified { .. }),
        format!("ord claim: {verdict:?}"),
    )?;

    let mob = MobOracle::new(&x, dirs.clone()).map_err(|e| e.to_string())?;
    let t = check_additivity_up_to_truncation(
        &mob,
        &conecalc::polyhedral::RationalCone::new(2, &[vec![1, 1]]).unwrap(),
        6,
        6,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        matches!(t, TruncationVerdict::Additive { p: 2, .. }),
        format!("truncation on the D1+D2 ray: {t:?}"),
    )?;
    let mob_at = |k: i64| -> Result<Vec<Rat>, String> {
        let d = family_divisor(&[k, k]);
        let fix = polytope(&x, &d).fix().ok_or("no sections")?;
        Ok(d.iter().zip(&fix).map(|(a, b)| a - b).collect())
    };
    let base = mob_at(2)?;
    for i in 1..=6 {
        ensure(
            mob_at(2 * i)? == scaled(&base, &q(i)),
            format!("Mob({}(D1+D2)) is not {i} Mob(2(D1+D2))", 2 * i),
        )?;
    }
    ensure(
        scaled(&mob_at(1)?, &q(2)) != base,
        "Mob is already additive without truncation",
    )?;
    Ok(format!(
        "chambers {rays:?}; ord pieces verified; p = 2 with homogeneity for i <= 6"
    ))
}

pub fn straightening() -> Outcome {
    let x = f2();
    let mob = MobOracle::new(&x, vec![TDivisor::prime(4, 0), TDivisor::prime(4, 1)]).map_err(|e| e.to_string())?;
    let r = straighten_one(&mob, &[1, 1], 6).map_err(|e| e.to_string())?;
    let mu = family_divisor(&[1, 1]);
    let hand = vec![q(1), qf(1, 2), q(0), q(0)];
    ensure(r.value == hand, format!("f#(1,1) = {:?}", r.value))?;
    let lp: Vec<Rat> = (0..4)
        .map(|rho| asymptotic_ord(&x, rho, &TDivisor::new(mu.clone())).map(|o| o.value))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let via_lp: RatVec = mu.iter().zip(&lp).map(|(a, o)| a - o).collect();
    ensure(r.value == via_lp, format!("mu - sum ord D_rho = {via_lp:?}"))?;
    let ord = polytope(&x, &mu).ord().ok_or("no sections")?;
    let via_vertices: Vec<Rat> = mu.iter().zip(&ord).map(|(a, o)| a - o).collect();
    ensure(r.value == via_vertices, format!("vertex oracle gives {via_vertices:?}"))?;
    Ok("f#(1,1) = D1 + 1/2 D2 = (D1+D2) - 1/2 D2".into())
}

pub fn property_l() -> Outcome {
    let x = f2();
    let params = RationalPolytope::from_points(1, &[vec![q(0)], vec![q(1)]]).map_err(|e| e.to_string())?;
    let fam =
        DivisorFamily::new(TDivisor::prime(4, 0), vec![TDivisor::prime(4, 1)], params).map_err(|e| e.to_string())?;
    let region = not_in_b_region(&x, &fam, 1).map_err(|e| e.to_string())?;
    ensure(
        region.vertices() == [vec![q(0)], vec![qf(1, 2)]],
        format!("region vertices {:?}", region.vertices()),
    )?;
    let mut checked = 0;
    for den in 1..=12 {
        for num in 0..=den {
            let t = qf(num, den);
            let ord = polytope(&x, &[q(1), t.clone(), q(0), q(0)])
                .ord()
                .ok_or("no sections")?;
            ensure(
                region.contains(std::slice::from_ref(&t)) == ord[1].is_zero(),
                format!("t = {t}: region membership disagrees with ord = {}", ord[1]),
            )?;
            checked += 1;
        }
    }
    Ok(format!("t in [0, 1/2]; {checked} rational parameters cross-checked"))
}

pub fn sections() -> Outcome {
    let p1 = ToricVariety::p1();
    let gens = multigraded_generators(&p1, &[TDivisor::from_i64(&[1, 0])]).map_err(|e| e.to_string())?;
    let got: Vec<(Vec<i64>, Vec<i64>)> = gens.iter().map(|g| (g.degree.clone(), g.point.clone())).collect();
    let member = |e: &[i64]| {
        e[0] >= 0
            && polytope(&p1, &[q(e[0]), q(0)])
                .lattice_points()
                .contains(&e[1..].to_vec())
    };
    let elems: Vec<Vec<i64>> = box_points(&[0, -8], &[8, 8])
        .into_iter()
        .filter(|e| member(e))
        .collect();
    let brute = crate::oracle::irreducibles(elems, |e| e[0], member);
    let brute: Vec<(Vec<i64>, Vec<i64>)> = brute.iter().map(|e| (vec![e[0]], e[1..].to_vec())).collect();
    ensure(
        got.len() == 2 && got == brute,
        format!("P1 generators {got:?}, brute force {brute:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let vs = varieties();
    for i in 0..100 {
        let (name, x) = &vs[i % vs.len()];
        let n = x.n_rays();
        let d: Vec<Rat> = (0..n).map(|_| q(rng.gen_range(-1..=3))).collect();
        let gamma = rng.gen_range(0..n);
        let mut dg = d.clone();
        dg[gamma] -= q(1);
        let lhs = polytope(x, &d).lattice_points().len() as u64;
        let rhs = polytope(x, &dg).lattice_points().len() as u64;
        let div = TDivisor::new(d.clone());
        let lib_h0 = h0(x, &div).map_err(|e| e.to_string())?;
        ensure(lib_h0 == lhs, format!("{name} {d:?}: h0 {lib_h0}, oracle {lhs}"))?;
        let r = restrict_to_ray(x, gamma, &div).map_err(|e| e.to_string())?;
        ensure(
            r.dimension == lhs - rhs,
            format!(
                "{name} D = {d:?}, ray {gamma}: restricted dimension {}, h0(D) - h0(D - G) = {}",
                r.dimension,
                lhs - rhs
            ),
        )?;
        ensure(
            r.dimension == r.facet_points.len() as u64,
            "dimension differs from listed facet points",
        )?;
    }
    Ok("P1: 2 generators (matches brute force); restriction identity on 100 instances".into())
}
