use conecalc::polyhedral::{hilbert_basis, AffineMonoid, RationalCone};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, Cone};
use crate::{ensure, Outcome};

fn compare(rays: &[Vec<i64>]) -> Result<(), String> {
    let cone = Cone::new(rays).ok_or_else(|| format!("test cone {rays:?} is degenerate"))?;
    let expected = oracle::hilbert_basis(&cone);
    let lib = RationalCone::new(rays[0].len(), rays).map_err(|e| format!("{rays:?}: {e}"))?;
    let got = hilbert_basis(&lib).map_err(|e| format!("{rays:?}: {e}"))?;
    ensure(
        got == expected,
        format!("cone {rays:?}: got {got:?}, brute force gives {expected:?}"),
    )
}

fn random_cone(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Vec<i64>> {
    loop {
        let rays: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-12..=12)).collect())
            .collect();
        if Cone::new(&rays).is_some() {
            return rays;
        }
    }
}

pub fn hilbert_bases() -> Outcome {
    let mut count = 0;
    for q in 1..=10 {
        for p in 1..=q {
            compare(&[vec![1, 0], vec![p, q]])?;
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        compare(&random_cone(&mut rng, 2, 2))?;
        count += 1;
    }
    for i in 0..50 {
        compare(&random_cone(&mut rng, 3, 3 + i % 2))?;
        count += 1;
    }
    Ok(format!("{count} cones agree with brute-force enumeration"))
}

fn random_monoid(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
    loop {
        let n = rng.gen_range(1..=d + 2);
        let gens: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..=5)).collect()).collect();
        if gens.iter().all(|g| g.iter().any(|&x| x != 0)) {
            return gens;
        }
    }
}

/// Integer points `Σ c_i g_i / m` of the real cone.
fn cone_samples(rng: &mut ChaCha8Rng, gens: &[Vec<i64>], count: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 50 * count {
        tries += 1;
        let m = rng.gen_range(1..=6);
        let mut x = vec![0i64; gens[0].len()];
        for g in gens {
            let c = rng.gen_range(0..=6);
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += c * gi;
            }
        }
        if x.iter().all(|v| v % m == 0) {
            out.push(x.iter().map(|v| v / m).collect());
        }
    }
    out
}

pub fn saturation_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sampled = 0;
    for i in 0..100 {
        let d = 2 + i % 2;
        let gens = random_monoid(&mut rng, d);
        let s = AffineMonoid::new(d, &gens).map_err(|e| e.to_string())?;
        let sat = s.saturate();
        ensure(
            sat.saturate().generators() == sat.generators(),
            format!("{gens:?}: saturation not idempotent"),
        )?;
        ensure(
            gens.iter().all(|g| sat.contains(g)),
            format!("{gens:?}: saturation not extensive"),
        )?;
        ensure(sat.is_saturated(), format!("{gens:?}: saturation reports unsaturated"))?;
        for x in cone_samples(&mut rng, &gens, 20) {
            ensure(
                sat.contains(&x),
                format!("{gens:?}: {x:?} lies in the cone but not the saturation"),
            )?;
            sampled += 1;
        }
        for h in sat.generators() {
            let lambda = oracle::cone_coefficients(&gens, h)
                .ok_or_else(|| format!("{gens:?}: generator {h:?} lies outside the real cone"))?;
            let m = lambda.iter().fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
            let m: i64 = m.try_into().map_err(|_| "denominator overflow".to_string())?;
            let mh: Vec<i64> = h.iter().map(|x| x * m).collect();
            ensure(s.contains(&mh), format!("{gens:?}: {m}·{h:?} is not in the monoid"))?;
        }
    }
    let n = AffineMonoid::new(1, &[vec![2], vec![3]])
        .map_err(|e| e.to_string())?
        .saturate();
    ensure(
        n.generators() == [vec![1]],
        format!("<2,3> saturates to {:?}", n.generators()),
    )?;
    Ok(format!("100 monoids, {sampled} sampled cone points; <2,3> -> N"))
}
