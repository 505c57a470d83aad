use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rifscope::construct::{embed, embed_with_samples, random_symmetric};
use rifscope::levelcurves::{smoothness_converges, trace_level};
use rifscope::rif::singularities;
use rifscope::BiPoly;

fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// `(1 - z1 z2)(3 - z1 - z2 + 3 z1 z2)`. On the torus the first factor
/// vanishes on the antidiagonal, the second on the graph of a disk
/// automorphism.
fn antidiagonal_r() -> BiPoly {
    BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)])
        .mul(&BiPoly::from_real_terms(&[(0, 0, 3.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 3.0)]))
}

#[test]
fn embedded_zero_set_is_the_value_level_curve() {
    let r = antidiagonal_r();
    let f = embed(&r).unwrap();
    let lambda = f.eval(unit(0.4), unit(-0.4));
    for t in [-2.9, -1.1, 0.05, 1.7, 2.6] {
        assert!((f.eval(unit(t), unit(-t)) - lambda).norm() < 1e-12, "t = {t}");
    }
    let sing = singularities(&f).unwrap();
    assert!(sing.is_empty());
    let curve = trace_level(&f, lambda, 2048, &sing).unwrap();
    let mut on_antidiagonal = 0;
    for b in &curve.branches {
        for (t, z1) in b.thetas.iter().zip(&b.values) {
            assert!(r.eval(*z1, unit(*t)).norm() < 1e-9 * r.norm1(), "point off the zero set");
            if (z1 * unit(*t) - 1.0).norm() < 1e-9 {
                on_antidiagonal += 1;
            }
        }
    }
    assert!(on_antidiagonal >= 2048);
    assert!(smoothness_converges(&f, lambda, &sing, 512, 8192).unwrap().is_some());
}

#[test]
fn random_embed_value_curves_settle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 3 {
        let r = random_symmetric(&mut rng, (2, 2));
        let f = embed_with_samples(&r, 64).unwrap();
        let sing = singularities(&f).unwrap();
        for s in sing.iter().take(1) {
            let g = smoothness_converges(&f, s.lambda0, &sing, 2048, 65536).unwrap();
            assert!(g.is_some(), "value curve at {:?} did not settle", s.tau);
            checked += 1;
        }
        if sing.is_empty() {
            let lambda = f.eval(unit(0.3), unit(1.9)).unscale(f.eval(unit(0.3), unit(1.9)).norm());
            assert!(smoothness_converges(&f, lambda, &sing, 512, 8192).unwrap().is_some());
        }
    }
}
