//! Hilbert bases of pointed rational cones.
//!
//! The cone is triangulated by pulling its first extreme ray; for every
//! simplicial piece the lattice points of the half-open fundamental
//! parallelepiped are enumerated exactly as coset representatives of the
//! generator lattice inside the saturated lattice of the span. The union of
//! those points (plus the rays) contains the Hilbert basis, which is then
//! extracted by reducing in order of degree.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::cone::RationalCone;
use crate::error::{Error, Result};
use crate::exact::{dot_i64, hermite_basis_in, saturated_basis, solve_affine, RatMat};

/// Triangulation of a pointed cone into simplicial cones spanned by its
/// extreme rays. Each simplex is a list of indices into `cone.rays()`.
pub fn triangulate(cone: &RationalCone) -> Result<Vec<Vec<usize>>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let rays = cone.rays();
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    if rays.len() == cone.cone_dim() {
        return Ok(vec![(0..rays.len()).collect()]);
    }
    let apex = &rays[0];
    let mut out = Vec::new();
    for u in cone.facets() {
        if dot_i64(u, apex) == 0 {
            continue;
        }
        let facet_rays: Vec<Vec<i64>> = rays.iter().filter(|r| dot_i64(u, r) == 0).cloned().collect();
        let facet = RationalCone::new(cone.ambient_dim(), &facet_rays)?;
        for simplex in triangulate(&facet)? {
            let mut s: Vec<usize> = simplex
                .iter()
                .map(|&i| {
                    let r = &facet.rays()[i];
                    rays.iter().position(|x| x == r).expect("facet ray is a cone ray")
                })
                .collect();
            s.push(0);
            s.sort_unstable();
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Nonzero lattice points of `{sum λ_i g_i : 0 <= λ_i < 1}` for linearly
/// independent primitive generators.
pub fn parallelepiped_points(dim: usize, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = gens.len();
    if r == 0 {
        return Vec::new();
    }
    let basis = saturated_basis(dim, gens);
    debug_assert_eq!(basis.len(), r);
    // coordinates of each generator in the lattice basis
    let bt = RatMat::from_i64_rows(
        r,
        &(0..dim)
            .map(|j| basis.iter().map(|b| b[j]).collect())
            .collect::<Vec<_>>(),
    )
    .expect("dims");
    let t: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| {
            let sol = solve_affine(&bt, &crate::exact::rvec(g)).expect("generator lies in its span");
            sol.particular
                .iter()
                .map(|x| x.to_integer().to_i64().expect("integral coordinates"))
                .collect()
        })
        .collect();
    let t128: Vec<Vec<i128>> = t.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let det = det_i128(&t128);
    let big_d = det.abs();
    if big_d == 1 {
        return Vec::new();
    }
    // adj(T) = det * T^{-1}
    let inv = RatMat::from_i64_rows(r, &t)
        .expect("dims")
        .inverse()
        .expect("independent generators");
    let adj: Vec<Vec<i128>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v = &inv[(i, j)] * crate::exact::Rat::from_integer(det.into());
                    v.to_integer().to_i128().expect("adjugate fits")
                })
                .collect()
        })
        .collect();
    let hnf = hermite_basis_in(r, &t);
    let diag: Vec<i64> = hnf
        .basis()
        .iter()
        .map(|row| *row.iter().find(|&&x| x != 0).expect("full rank"))
        .collect();
    let sgn = det.signum();
    let mut out = Vec::new();
    let mut y = vec![0i64; r];
    loop {
        // λ = y T^{-1} = (y adj) / det
        let mut p = vec![0i128; dim];
        let mut nonzero = false;
        for j in 0..r {
            let num: i128 = (0..r).map(|i| y[i] as i128 * adj[i][j]).sum::<i128>() * sgn;
            let rem = num.rem_euclid(big_d);
            if rem != 0 {
                nonzero = true;
                for (x, &g) in p.iter_mut().zip(&gens[j]) {
                    *x += rem * g as i128;
                }
            }
        }
        if nonzero {
            out.push(p.iter().map(|&x| (x / big_d) as i64).collect());
        }
        let mut i = 0;
        loop {
            if i == r {
                out.sort();
                out.dedup();
                return out;
            }
            y[i] += 1;
            if y[i] >= diag[i] {
                y[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Unique minimal generating set of `cone ∩ Z^n`, sorted lexicographically.
pub fn hilbert_basis(cone: &RationalCone) -> Result<Vec<Vec<i64>>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let dim = cone.ambient_dim();
    let mut candidates: BTreeSet<Vec<i64>> = cone.rays().iter().cloned().collect();
    for simplex in triangulate(cone)? {
        let gens: Vec<Vec<i64>> = simplex.iter().map(|&i| cone.rays()[i].clone()).collect();
        candidates.extend(parallelepiped_points(dim, &gens));
    }
    Ok(reduce_to_irreducibles(cone, candidates))
}

/// Keeps the candidates that are not `y + z` with `y` an earlier irreducible
/// and `z` a nonzero lattice point of the cone.
pub(crate) fn reduce_to_irreducibles(cone: &RationalCone, candidates: BTreeSet<Vec<i64>>) -> Vec<Vec<i64>> {
    let h = cone.grading();
    let mut by_degree: Vec<(i128, Vec<i64>)> = candidates.into_iter().map(|c| (dot_i64(&h, &c), c)).collect();
    by_degree.sort();
    let mut irreducible: Vec<(i128, Vec<i64>)> = Vec::new();
    let mut diff = vec![0i64; cone.ambient_dim()];
    for (deg, x) in by_degree {
        let reducible = irreducible.iter().any(|(dy, y)| {
            if *dy >= deg {
                return false;
            }
            for ((d, a), b) in diff.iter_mut().zip(&x).zip(y) {
                *d = a - b;
            }
            cone.contains_i64(&diff)
        });
        if !reducible {
            irreducible.push((deg, x));
        }
    }
    let mut out: Vec<Vec<i64>> = irreducible.into_iter().map(|(_, x)| x).collect();
    out.sort();
    out
}
