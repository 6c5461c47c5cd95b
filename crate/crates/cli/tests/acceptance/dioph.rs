use conecalc::diophantine::{
    approximate_anchored, approximate_simplex, closure_structure, ApproxCertificate, SymbolicNumber, SymbolicPoint,
};
use conecalc::exact::{hermite_basis_in, IntLattice, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, form, form_axpy, in_hull, norm_below, positive, q, qf, qv, rational_hull, Form};
use crate::{ensure, Outcome};

fn random_number(rng: &mut ChaCha8Rng, irrational: bool) -> SymbolicNumber {
    let mut x = SymbolicNumber::from_rat(qf(rng.gen_range(-9..=9), rng.gen_range(1..=6)));
    if irrational {
        for n in [2u64, 3, 5] {
            let c = rng.gen_range(-2..=2);
            if c != 0 {
                x = x.add(&SymbolicNumber::sqrt(n).scale(&qf(c, rng.gen_range(1..=3))));
            }
        }
    }
    x
}

/// Points of dimension `1..=max_dim` with a mix of rational and irrational
/// coordinates, some of them lying on rational lines.
fn random_point(rng: &mut ChaCha8Rng, max_dim: usize) -> SymbolicPoint {
    let n = rng.gen_range(1..=max_dim);
    let mut coords: Vec<SymbolicNumber> = (0..n)
        .map(|_| {
            let irrational = rng.gen_bool(0.7);
            random_number(rng, irrational)
        })
        .collect();
    if n >= 2 && rng.gen_bool(0.3) {
        let c = qf(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        coords[1] = coords[0].scale(&c).add_rat(&qf(rng.gen_range(-4..=4), 3));
    }
    SymbolicPoint::new(coords)
}

fn diff(x: &SymbolicPoint, w: &[Rat]) -> Vec<SymbolicNumber> {
    x.coords().iter().zip(w).map(|(c, wi)| c.add_rat(&-wi)).collect()
}

/// Checks the postconditions shared by simplex and anchored certificates.
/// Anchors may lie off the rational hull, so `in_hull_from` names the first
/// point required to lie on it.
fn check_common(x: &SymbolicPoint, c: &ApproxCertificate, eps: &Rat, in_hull_from: usize) -> Result<(), String> {
    ensure(!c.points.is_empty(), "no points")?;
    let hull = rational_hull(x.coords());
    let mut total = Form::new();
    let mut combo: Vec<Form> = vec![Form::new(); x.dim()];
    for (i, p) in c.points.iter().enumerate() {
        let r = form(&p.weight);
        form_axpy(&mut total, &q(1), &r);
        for (acc, wj) in combo.iter_mut().zip(&p.w) {
            form_axpy(acc, wj, &r);
        }
        ensure(positive(&p.weight), format!("weight {:?} is not positive", p.weight))?;
        ensure(p.k >= 1, "nonpositive k_i")?;
        let kw_integral = p.w.iter().all(|wi| (wi * q(p.k)).is_integer());
        ensure(
            kw_integral,
            format!("k_i w_i is not integral for w = {:?}, k = {}", p.w, p.k),
        )?;
        ensure(
            i < in_hull_from || in_hull(&p.w, &hull),
            format!("w = {:?} is outside the rational hull", p.w),
        )?;
        let bound = eps / q(p.k);
        ensure(
            norm_below(&diff(x, &p.w), &bound),
            format!("|x - w| < eps/k fails for w = {:?}", p.w),
        )?;
    }
    let one: Form = [(None, q(1))].into_iter().collect();
    ensure(total == one, "weights do not sum to 1")?;
    for (j, acc) in combo.iter().enumerate() {
        ensure(
            *acc == form(&x.coords()[j]),
            format!("coordinate {j} of x is not the weighted sum"),
        )?;
    }
    c.verify().map_err(|e| format!("library verification: {e}"))
}

pub fn simplex() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut runs = 0;
    for i in 0..100 {
        let x = random_point(&mut rng, 4);
        let eps = [qf(1, 10), qf(1, 100)][i % 2].clone();
        let k = [1, 6][(i / 2) % 2];
        let c = approximate_simplex(&x, k, &eps).map_err(|e| format!("{x:?}: {e}"))?;
        check_common(&x, &c, &eps, 0).map_err(|e| format!("x = {x:?}, k = {k}, eps = {eps}: {e}"))?;
        ensure(
            c.points.iter().all(|p| p.k % k == 0),
            format!("x = {x:?}: k does not divide every k_i"),
        )?;
        runs += 1;
    }
    let s2 = SymbolicPoint::new(vec![SymbolicNumber::sqrt(2)]);
    let c = approximate_simplex(&s2, 1, &qf(1, 2)).map_err(|e| e.to_string())?;
    let mut got: Vec<(Rat, i64)> = c.points.iter().map(|p| (p.w[0].clone(), p.k)).collect();
    got.sort();
    ensure(got == [(qf(7, 5), 5), (qf(3, 2), 2)], format!("sqrt 2 gives {got:?}"))?;
    let convergents = oracle::sqrt_convergents(2, 6);
    for (w, k) in &got {
        ensure(
            convergents.iter().any(|&(p, d)| qf(p, d) == *w && d == *k),
            format!("{w} is not a convergent"),
        )?;
    }
    Ok(format!("{runs} points; sqrt 2 -> 3/2 (k=2), 7/5 (k=5)"))
}

pub fn anchored() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    let mut deep = 0;
    while done < 60 {
        let x = random_point(&mut rng, 3);
        if x.is_rational() {
            continue;
        }
        let eps = qf(1, 2);
        let eta = [qf(1, 10), qf(1, 100)][done % 2].clone();
        let k1 = rng.gen_range(2..=30);
        let w1: Vec<Rat> = x
            .coords()
            .iter()
            .map(|c| {
                let (lo, _) = oracle::enclose(&c.scale(&q(k1)), 30);
                (lo + qf(1, 2)).floor() / q(k1)
            })
            .collect();
        if !norm_below(&diff(&x, &w1), &(&eps / q(k1))) {
            continue;
        }
        let c = approximate_anchored(&x, &eps, &eta, &w1, k1).map_err(|e| format!("{x:?}, k1 = {k1}: {e}"))?;
        let ctx = format!("x = {x:?}, w1 = {w1:?}, k1 = {k1}, eta = {eta}");
        check_common(&x, &c, &eps, 2).map_err(|e| format!("{ctx}: {e}"))?;
        ensure(
            c.points[0].w == w1 && c.points[0].k == k1,
            format!("{ctx}: first point is not the anchor"),
        )?;
        let a = c.anchor.as_ref().ok_or_else(|| format!("{ctx}: no anchor identity"))?;
        ensure(
            a.k1 == k1 && a.k2 == c.points[1].k,
            format!("{ctx}: anchor multipliers"),
        )?;
        let w2 = &c.points[1].w;
        let s = q(a.k1 + a.k2);
        let hull = rational_hull(x.coords());
        for j in 0..x.dim() {
            let mean = (q(a.k1) * &w1[j] + q(a.k2) * &w2[j]) / &s;
            let mut xi = form(&x.coords()[j]);
            form_axpy(&mut xi, &q(-1), &[(None, mean)].into_iter().collect());
            ensure(xi == form(&a.xi[j]), format!("{ctx}: xi mismatch in coordinate {j}"))?;
        }
        let scaled: Vec<SymbolicNumber> = a.xi.iter().map(|v| v.scale(&s)).collect();
        ensure(norm_below(&scaled, &eta), format!("{ctx}: |xi| (k1 + k2) < eta fails"))?;
        for p in &c.points[2..] {
            ensure(
                in_hull(&p.w, &hull),
                format!("{ctx}: {:?} is outside the minimal subspace", p.w),
            )?;
        }
        let y = rational_hull(&a.y_over_k2);
        ensure(in_hull(&y.0, &hull), format!("{ctx}: y/k2 has rational part outside W"))?;
        ensure(
            y.1.iter().all(|d| oracle::in_span(d, &hull.1)),
            format!("{ctx}: y/k2 has irrational part outside W"),
        )?;
        if c.points.len() > 2 {
            deep += 1;
        }
        done += 1;
    }
    Ok(format!(
        "{done} anchored certificates, {deep} with points beyond the two anchors"
    ))
}

fn same_class(y: &[Rat], c: &[Rat], v0: &[Vec<Rat>], lattice: &[Vec<i64>]) -> bool {
    let d: Vec<Rat> = y.iter().zip(c).map(|(a, b)| a - b).collect();
    oracle::in_subspace_plus_lattice(&d, v0, lattice)
}

fn symmetric(cosets: &[Vec<Rat>], v0: &[Vec<Rat>], lattice: &[Vec<i64>]) -> bool {
    cosets.iter().all(|c| {
        let neg: Vec<Rat> = c.iter().map(|x| -x).collect();
        cosets.iter().any(|d| same_class(&neg, d, v0, lattice))
    })
}

fn lattice_rows(l: &IntLattice) -> Vec<Vec<i64>> {
    serde_json::from_value(serde_json::to_value(l).unwrap()["basis"].clone()).unwrap()
}

pub fn closure() -> Outcome {
    ensure(
        !same_class(&[qf(1, 2)], &[q(0)], &[], &[vec![1]]),
        "membership oracle accepts 1/2 in Z",
    )?;
    ensure(
        same_class(
            &[q(0), q(-1), q(0)],
            &qv(&[0, 0, 0]),
            &[qv(&[1, 3, 0])],
            &[vec![3, 0, 0], vec![0, 2, 1], vec![0, 0, 2]],
        ),
        "membership oracle misses a distant witness",
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let x = random_point(&mut rng, 3);
        let n = x.dim();
        let gens: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            rng.gen_range(1..=3)
                        } else if j > i {
                            rng.gen_range(0..=1)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let lattice = hermite_basis_in(n, &gens);
        let c = closure_structure(&x, &lattice).map_err(|e| format!("{x:?}: {e}"))?;
        let v0: Vec<Vec<Rat>> = serde_json::from_value(serde_json::to_value(&c.v0).unwrap()["directions"].clone())
            .map(|rows: Vec<Vec<String>>| {
                rows.iter()
                    .map(|r| r.iter().map(|s| conecalc::exact::parse_rat(s).unwrap()).collect())
                    .collect()
            })
            .unwrap();
        ensure(
            symmetric(&c.cosets, &v0, &lattice_rows(&lattice)),
            format!("{x:?}: cosets {:?} not symmetric", c.cosets),
        )?;
        let full = rational_hull(x.coords()).1;
        ensure(
            c.dense == (oracle::rank(full) == n),
            format!("{x:?}: density flag disagrees with the rational hull"),
        )?;
    }

    let s2 = SymbolicNumber::sqrt(2);
    let c = closure_structure(&SymbolicPoint::new(vec![s2.clone()]), &IntLattice::standard(1))
        .map_err(|e| e.to_string())?;
    ensure(c.dense && c.order() == 1, "sqrt 2 is not reported dense")?;

    let v = SymbolicPoint::new(vec![s2.clone(), SymbolicNumber::from_rat(qf(1, 2))]);
    let c = closure_structure(&v, &IntLattice::standard(2)).map_err(|e| e.to_string())?;
    ensure(!c.dense && c.v0.dim() == 1, "V0 is not a line")?;
    ensure(c.v0.contains_direction(&[q(1), q(0)]), "V0 is not R x {0}")?;
    ensure(c.order() == 2, format!("{} cosets", c.order()))?;
    ensure(
        c.cosets == [vec![q(0), q(0)], vec![q(0), qf(1, 2)]],
        format!("cosets {:?}", c.cosets),
    )?;

    // Numeric sampling: every multiple sits near a claimed coset, and each
    // coset fills out its line.
    let x0 = oracle::to_f64(&s2);
    let mut hits = [[false; 100]; 2];
    for k in 1..=10_000u32 {
        let y = ((k as f64 * x0).fract(), (k as f64 * 0.5).fract());
        let coset = c
            .cosets
            .iter()
            .position(|cs| {
                let t = conecalc::exact::to_f64(&cs[1]);
                let d = (y.1 - t).rem_euclid(1.0);
                d.min(1.0 - d) < 1e-3
            })
            .ok_or_else(|| format!("multiple {k} is far from every coset"))?;
        hits[coset][(y.0 * 100.0) as usize] = true;
    }
    ensure(
        hits.iter().all(|h| h.iter().all(|&b| b)),
        "sampled multiples leave gaps on a coset line",
    )?;
    Ok("40 random instances symmetric; sqrt 2 dense; (sqrt 2, 1/2) -> R x {0}, 2 cosets, sampled to k = 10^4".into())
}
