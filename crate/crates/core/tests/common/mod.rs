#![allow(dead_code)]

use feflab::linalg::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn box_points(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| (0..d).map(|_| r.gen_range(-1.0..1.0)).collect()).collect()
}

pub fn cgauss(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Gram–Schmidt on the columns of a random complex matrix.
pub fn random_unitary(r: &mut ChaCha8Rng, n: usize) -> Mat<Complex64> {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| cgauss(r)).collect();
        for c in &cols {
            let p: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

pub fn random_orthogonal(r: &mut ChaCha8Rng, n: usize) -> Mat<f64> {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        for c in &cols {
            let p: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.iter().map(|x| x / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

pub fn cvec(r: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| cgauss(r)).collect()
}

/// Signs `(positive, negative, zero)` seen for the twisted torus length at
/// random cone points with some `z_i ≠ 0`, `i < a.len()`.
pub fn d_sign_sampling(r: &mut ChaCha8Rng, a: &[f64], n: usize) -> (bool, bool, bool) {
    use feflab::causality::{cone_inner, OrbitCase};
    use feflab::fefferman::cone_point;
    let k = a.len();
    let (mut pos, mut neg, mut zero) = (false, false, false);
    for i in 0..400 {
        let mut z = cvec(r, n + 1);
        // sparse supports reach the strata where only some weights matter
        if i % 2 == 1 {
            let keep = r.gen_range(0..k);
            for (j, c) in z.iter_mut().enumerate() {
                if j != keep && r.gen_bool(0.7) {
                    *c = Complex64::new(0.0, 0.0);
                }
            }
        }
        if z[..k].iter().all(|c| c.norm() == 0.0) {
            continue;
        }
        let v = cone_point(&z, Complex64::new(1.0, 0.0));
        let q = cone_inner(OrbitCase::TorusD, a, &v).unwrap();
        if q > 1e-12 {
            pos = true;
        } else if q < -1e-12 {
            neg = true;
        } else {
            zero = true;
        }
    }
    (pos, neg, zero)
}

/// The verdict implied by sampled signs; `−2` weights are counted as ℓ.
pub fn sampled_verdict(a: &[f64], signs: (bool, bool, bool)) -> feflab::causality::DVerdict {
    use feflab::causality::DVerdict;
    let l = a.iter().filter(|&&x| x == -2.0).count();
    match signs {
        (true, false, false) => DVerdict::SpacelikeOffSphere,
        (false, _, _) => DVerdict::TimelikeOffSphere(l),
        (true, false, true) => DVerdict::SemidefiniteOffSphere(l),
        (true, true, _) => DVerdict::Mixed,
    }
}
