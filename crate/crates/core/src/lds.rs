//! Deterministic low-discrepancy point sequences (additive Kronecker
//! recurrences with the plastic-constant generators). Used wherever a
//! reproducible, equidistributed sample set is needed: ellipticity sampling,
//! Hölder pair sets, far-pair selection in norms.
//!
//! The sequences are prefix-stable: the first `n` points never change as more
//! are requested, so sampled maxima are monotone in the sample count.

/// d=3 generator: inverse powers of the plastic constant (real root of
/// x^3 = x + 1), the standard R3 sequence.
const G3: [f64; 3] = [
    0.819_172_513_396_164_4,
    0.671_043_606_703_789_2,
    0.549_700_477_901_960_2,
];

/// Alternative phase offsets so independent streams decorrelate.
const PHASE_A: f64 = 0.5;
const PHASE_B: f64 = 0.25;

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// i-th point of the primary R3 stream, in `[0,1)^3`.
pub fn point3(i: usize) -> [f64; 3] {
    let n = (i + 1) as f64;
    [
        frac(PHASE_A + n * G3[0]),
        frac(PHASE_A + n * G3[1]),
        frac(PHASE_A + n * G3[2]),
    ]
}

/// i-th point of a second, phase-shifted stream (for directions, partners).
pub fn point3_alt(i: usize) -> [f64; 3] {
    let n = (i + 1) as f64;
    [
        frac(PHASE_B + n * G3[1]),
        frac(PHASE_B + n * G3[2]),
        frac(PHASE_B + n * G3[0]),
    ]
}

/// i-th quasi-random direction on the unit sphere (never degenerate).
pub fn direction3(i: usize) -> [f64; 3] {
    let u = point3_alt(i);
    // map the cube to the sphere via inverse-CDF-free trick: center, then
    // reject near-zero by nudging with a fixed offset
    let mut d = [u[0] - 0.5, u[1] - 0.5, u[2] - 0.5];
    let n2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    if n2 < 1e-4 {
        d = [0.267, 0.534, 0.801];
    }
    let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    [d[0] / n, d[1] / n, d[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_live_in_unit_cube_and_are_prefix_stable() {
        for i in 0..1000 {
            let p = point3(i);
            for a in 0..3 {
                assert!((0.0..1.0).contains(&p[a]));
            }
            assert_eq!(p, point3(i));
        }
    }

    #[test]
    fn directions_are_unit() {
        for i in 0..200 {
            let d = direction3(i);
            let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equidistribution_rough_check() {
        // mean of each coordinate over many points approaches 1/2
        let n = 4096;
        let mut s = [0.0; 3];
        for i in 0..n {
            let p = point3(i);
            for a in 0..3 {
                s[a] += p[a];
            }
        }
        for a in 0..3 {
            assert!((s[a] / n as f64 - 0.5).abs() < 0.01);
        }
    }
}
