//! Structural identities of the staggered mesh on random data: exact mimetic
//! compositions, adjoint pairings, and the boundary flux identity, across a
//! ladder of cube sizes plus one anisotropic offset box.

use curl_homog_core::field::{EdgeField, FaceField, NodeField};
use curl_homog_core::grid::{cyclic, StaggeredGrid};
use curl_homog_core::ops;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fill_random(data: &mut [f64], rng: &mut ChaCha8Rng) {
    for v in data.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }
}

fn grids() -> Vec<StaggeredGrid> {
    let mut out: Vec<StaggeredGrid> = [8usize, 16, 32]
        .iter()
        .map(|&n| StaggeredGrid::unit_cube(n))
        .collect();
    out.push(
        StaggeredGrid::new([-0.5, 0.0, 0.25], [1.5, 1.0, 0.75], [12, 8, 24]).unwrap(),
    );
    out
}

/// Floating-point headroom for a twice-differenced random field of unit
/// amplitude: a few ulps amplified by 1/(h_min)².
fn second_difference_tol(g: &StaggeredGrid) -> f64 {
    let hmin = g.h().iter().cloned().fold(f64::INFINITY, f64::min);
    64.0 * f64::EPSILON / (hmin * hmin)
}

#[test]
fn counting_identities_match_closed_forms() {
    let g4 = StaggeredGrid::unit_cube(4);
    assert_eq!(g4.num_cells(), 64);
    assert_eq!(g4.num_faces(), 240); // 3·n²·(n+1)
    let g2 = StaggeredGrid::unit_cube(2);
    assert_eq!(g2.num_edges(), 54); // 3·n·(n+1)²
}

#[test]
fn curl_of_grad_vanishes_on_random_node_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in grids() {
        let mut p = NodeField::zeros(&g);
        fill_random(p.data_mut(), &mut rng);
        let w = ops::discrete_curl(&ops::discrete_grad(&p));
        let sup = w.data().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tol = second_difference_tol(&g);
        assert!(
            sup <= tol,
            "cells {:?}: sup |curl grad p| = {sup:e} > {tol:e}",
            g.cells()
        );
    }
}

#[test]
fn div_of_curl_vanishes_on_random_edge_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for g in grids() {
        let mut u = EdgeField::zeros(&g);
        fill_random(u.data_mut(), &mut rng);
        let d = ops::discrete_div(&ops::discrete_curl(&u));
        let sup = d.data().iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tol = second_difference_tol(&g);
        assert!(
            sup <= tol,
            "cells {:?}: sup |div curl u| = {sup:e} > {tol:e}",
            g.cells()
        );
    }
}

#[test]
fn curl_and_its_dual_are_exact_adjoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for g in grids() {
        let mut u = EdgeField::zeros(&g);
        let mut w = FaceField::zeros(&g);
        fill_random(u.data_mut(), &mut rng);
        fill_random(w.data_mut(), &mut rng);
        let cu = ops::discrete_curl(&u);
        let ctw = ops::dual_curl(&w);
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        let mut scale = 0.0;
        for (a, b) in cu.data().iter().zip(w.data()) {
            lhs += a * b;
            scale += (a * b).abs();
        }
        for (a, b) in u.data().iter().zip(ctw.data()) {
            rhs += a * b;
            scale += (a * b).abs();
        }
        assert!(
            (lhs - rhs).abs() <= 1e-13 * (scale + 1.0),
            "cells {:?}: <Cu,w> = {lhs} vs <u,Ctw> = {rhs}",
            g.cells()
        );
    }
}

#[test]
fn weighted_gradient_and_weak_divergence_are_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for g in grids() {
        let mut p = NodeField::zeros(&g);
        let mut u = EdgeField::zeros(&g);
        fill_random(p.data_mut(), &mut rng);
        fill_random(u.data_mut(), &mut rng);
        let gp = ops::discrete_grad(&p);
        let div = ops::nodal_div_weak(&u);
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        let mut scale = 0.0;
        for a in 0..3 {
            let dims = g.edge_dims(a);
            for k in 0..dims[2] {
                for j in 0..dims[1] {
                    for i in 0..dims[0] {
                        let q = [i, j, k];
                        let t = gp.at(a, q) * g.edge_volume(a, q) * u.at(a, q);
                        lhs += t;
                        scale += t.abs();
                    }
                }
            }
        }
        let nd = g.node_dims();
        for k in 0..nd[2] {
            for j in 0..nd[1] {
                for i in 0..nd[0] {
                    let q = [i, j, k];
                    let t = p.at(q) * g.node_volume(q) * div.at(q);
                    rhs -= t;
                    scale += t.abs();
                }
            }
        }
        assert!(
            (lhs - rhs).abs() <= 1e-13 * (scale + 1.0),
            "cells {:?}: <grad p, u>_w = {lhs} vs -<p, div_w u> = {rhs}",
            g.cells()
        );
    }
}

#[test]
fn normal_curl_balances_the_surface_divergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for g in grids() {
        let mut u = EdgeField::zeros(&g);
        fill_random(u.data_mut(), &mut rng);
        let nt = ops::normal_trace(&ops::discrete_curl(&u));
        let sd = ops::surface_divergence(&ops::tangential_trace(&u));
        assert_eq!(nt.face_ids(), sd.face_ids());
        let tol = second_difference_tol(&g);
        for (s, &id) in nt.face_ids().iter().enumerate() {
            let total = nt.face_vals()[s] + sd.face_vals()[s];
            assert!(
                total.abs() <= tol,
                "cells {:?}, face {id}: n·curl + Div = {total:e}",
                g.cells()
            );
        }
    }
}

#[test]
fn total_surface_divergence_telescopes_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for g in grids() {
        let mut u = EdgeField::zeros(&g);
        fill_random(u.data_mut(), &mut rng);
        let sd = ops::surface_divergence(&ops::tangential_trace(&u));
        let h = g.h();
        let mut total = 0.0;
        let mut scale = 0.0;
        for (s, &id) in sd.face_ids().iter().enumerate() {
            let (a, _) = g.face_decode(id);
            let (b, c) = cyclic(a);
            let area = h[b] * h[c];
            total += sd.face_vals()[s] * area;
            scale += (sd.face_vals()[s] * area).abs();
        }
        assert!(
            total.abs() <= 1e-12 * (scale + 1.0),
            "cells {:?}: boundary integral of Div = {total:e}",
            g.cells()
        );
    }
}

#[test]
fn surface_divergence_of_rotated_plane_gradient_is_the_five_point_laplacian() {
    // On the plane x₀ = 0 (outward normal −e₀, faces (0,[0,j,k])), load the
    // rim edges with rotated one-sided differences of a face-centered
    // potential q. The compact flux stencil then reproduces the classical
    // five-point Laplacian of q at every interior face of the plane.
    let g = StaggeredGrid::new([0.0, 0.0, 0.0], [1.0, 1.25, 0.75], [10, 12, 8]).unwrap();
    let n = g.cells();
    let h = g.h();
    let q = |j: i64, k: i64| -> f64 {
        if j < 0 || k < 0 || j >= n[1] as i64 || k >= n[2] as i64 {
            return 0.0; // zero extension beyond the plane rim
        }
        let y = (j as f64 + 0.5) * h[1];
        let z = (k as f64 + 0.5) * h[2];
        (1.7 * y + 0.3).sin() * (1.3 * z).cos() + 0.25 * y * z
    };

    let mut f = curl_homog_core::BoundaryTrace::zeros(&g);
    for s in 0..f.edge_ids().len() {
        let id = f.edge_ids()[s];
        let (axis, p) = g.edge_decode(id);
        if p[0] != 0 {
            continue;
        }
        let (j, k) = (p[1] as i64, p[2] as i64);
        f.edge_vals_mut()[s] = match axis {
            // z-edges separate faces (j−1,k) and (j,k) along y
            2 => (q(j, k) - q(j - 1, k)) / h[1],
            // y-edges separate faces (j,k−1) and (j,k) along z
            1 => -(q(j, k) - q(j, k - 1)) / h[2],
            _ => continue,
        };
    }

    let sd = ops::surface_divergence(&f);
    let mut checked = 0;
    for (s, &id) in sd.face_ids().iter().enumerate() {
        let (a, p) = g.face_decode(id);
        if a != 0 || p[0] != 0 {
            continue;
        }
        let (j, k) = (p[1] as i64, p[2] as i64);
        if j == 0 || k == 0 || j + 1 == n[1] as i64 || k + 1 == n[2] as i64 {
            continue; // rim faces see the one-sided closure, skip
        }
        let lap = (q(j + 1, k) - 2.0 * q(j, k) + q(j - 1, k)) / (h[1] * h[1])
            + (q(j, k + 1) - 2.0 * q(j, k) + q(j, k - 1)) / (h[2] * h[2]);
        let got = sd.face_vals()[s];
        assert!(
            (got - lap).abs() <= 1e-11 * (lap.abs() + 1.0),
            "face ({j},{k}): Div = {got} vs 2-D Laplacian {lap}"
        );
        checked += 1;
    }
    assert!(checked > 50, "only {checked} interior plane faces checked");
}
