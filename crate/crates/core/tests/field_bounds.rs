//! Norm bounds for the interacting field: the smeared field changes the
//! particle number by at most one, so its action on sector `n` is
//! controlled by `(|f_plus| + |f_minus|) sqrt(n+1)`.

use nalgebra::DVector;
use num_complex::Complex;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wedgelab::fock::{FockSpace, FockVector, SectorTensor, Smearing};
use wedgelab::quadrature::{norm, RapidityGrid};
use wedgelab::scattering::ScatteringFunction;

fn models() -> Vec<ScatteringFunction<f64>> {
    vec![
        ScatteringFunction::FreeBose,
        ScatteringFunction::FreeFermi,
        ScatteringFunction::Sinh {
            b: std::f64::consts::FRAC_PI_4,
        },
    ]
}

fn random_smearing(rng: &mut ChaCha8Rng, dim: usize) -> Smearing<f64> {
    let u = Uniform::new(-1.0, 1.0);
    DVector::from_fn(dim, |_, _| Complex::new(u.sample(rng), u.sample(rng)))
}

/// Random state supported purely in sector `n`, symmetrized so it lies
/// in the physical subspace.
fn random_sector_state(
    rng: &mut ChaCha8Rng,
    space: &FockSpace<f64>,
    n: usize,
) -> FockVector<f64> {
    let dim = space.grid().len();
    if n == 0 {
        let u = Uniform::new(-1.0, 1.0);
        return space
            .vacuum()
            .scaled(Complex::new(u.sample(rng), u.sample(rng)));
    }
    let u = Uniform::new(-1.0, 1.0);
    let data: Vec<Complex<f64>> = (0..dim.pow(n as u32))
        .map(|_| Complex::new(u.sample(rng), u.sample(rng)))
        .collect();
    let sym = space
        .symmetrize(&SectorTensor::from_data(n, dim, data))
        .unwrap();
    let mut sectors: Vec<SectorTensor<f64>> =
        (0..n).map(|k| SectorTensor::zeros(k, dim)).collect();
    sectors.push(sym);
    FockVector::from_sectors(dim, sectors)
}

#[test]
fn field_bound_on_random_sector_states() {
    let grid = RapidityGrid::build(4.0, 3, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for scattering in models() {
        let space = FockSpace::new(grid.clone(), scattering.clone(), 1.0, 4).unwrap();
        for n in 0..=3usize {
            for _ in 0..50 {
                let psi = random_sector_state(&mut rng, &space, n);
                let f_plus = random_smearing(&mut rng, grid.len());
                let f_minus = random_smearing(&mut rng, grid.len());
                let out = space.field_apply(&f_plus, &f_minus, &psi).unwrap();
                let bound =
                    (norm(&f_plus) + norm(&f_minus)) * ((n + 1) as f64).sqrt() * psi.norm();
                assert!(
                    out.norm() <= bound * (1.0 + 1e-12) + 1e-12,
                    "{}: sector {n}: {} > {}",
                    scattering.name(),
                    out.norm(),
                    bound
                );
            }
        }
    }
}

#[test]
fn creation_and_annihilation_bounds() {
    let grid = RapidityGrid::build(4.0, 3, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for scattering in models() {
        let space = FockSpace::new(grid.clone(), scattering, 1.0, 4).unwrap();
        for n in 1..=3usize {
            for _ in 0..20 {
                let psi = random_sector_state(&mut rng, &space, n);
                let f = random_smearing(&mut rng, grid.len());
                let raised = space.create(&f, &psi).unwrap();
                assert!(
                    raised.norm() <= norm(&f) * ((n + 1) as f64).sqrt() * psi.norm() * (1.0 + 1e-12)
                );
                let lowered = space.annihilate(&f, &psi);
                assert!(
                    lowered.norm() <= norm(&f) * (n as f64).sqrt() * psi.norm() * (1.0 + 1e-12)
                );
            }
        }
    }
}

#[test]
fn symmetrization_never_increases_two_particle_norms() {
    let grid = RapidityGrid::build(4.0, 3, 6).unwrap();
    let dim = grid.len();
    let space = FockSpace::new(grid, ScatteringFunction::FreeBose, 1.0, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let u = Uniform::new(-1.0, 1.0);
    for _ in 0..50 {
        let data: Vec<Complex<f64>> = (0..dim * dim)
            .map(|_| Complex::new(u.sample(&mut rng), u.sample(&mut rng)))
            .collect();
        let t = SectorTensor::from_data(2, dim, data);
        let sym = space.symmetrize(&t).unwrap();
        assert!(sym.norm_sqr() <= t.norm_sqr() * (1.0 + 1e-12));
    }
}
