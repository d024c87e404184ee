//! `selftest`: seeded randomized checks of the numerical core against
//! brute-force oracles written here, independent of the library paths.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use desprox_core::description::{
    descriptive_distance, descriptively_near, DescribedSet, Element, ProbeSuite,
};
use desprox_core::dynamics::{
    extension, set_map, set_map_n, CompactFamily, DescriptiveSystem, MapSpec, ProbeSpec, SpaceSpec,
    StateId,
};
use desprox_core::energy::{
    hilbert_envelope, segment_lobes, waveform_energy, EnvelopeMode, Integrand, Waveform,
};
use desprox_core::hausdorff::{descriptive_hausdorff_distance, hausdorff_distance, PointSet};

use crate::args::SelftestArgs;
use crate::{Failure, RunResult};

pub fn run(args: &SelftestArgs) -> RunResult<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    check(&mut rng, "hausdorff sup-min oracle", 1000, hausdorff_oracle)?;
    check(&mut rng, "descriptive metric axioms", 1000, metric_axioms)?;
    check(
        &mut rng,
        "inf-distance bound and self-proximity",
        1000,
        inf_bound,
    )?;
    check(&mut rng, "extension identities", 200, extension_identities)?;
    check(
        &mut rng,
        "lobe partition of frame energy",
        50,
        lobe_partition,
    )?;
    println!("selftest: all checks passed (seed {})", args.seed);
    Ok(())
}

fn check(
    rng: &mut ChaCha8Rng,
    name: &str,
    cases: usize,
    body: impl Fn(&mut ChaCha8Rng) -> Result<(), String>,
) -> RunResult<()> {
    for case in 0..cases {
        body(rng).map_err(|msg| {
            Failure::Computation(format!("selftest `{name}` failed at case {case}: {msg}"))
        })?;
    }
    println!("check `{name}`: ok ({cases} cases)");
    Ok(())
}

fn random_tuples(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> Vec<Vec<f64>> {
    let len = rng.random_range(1..=max_len);
    (0..len)
        .map(|_| {
            (0..dim)
                .map(|_| f64::from(rng.random_range(-4i32..=4)))
                .collect()
        })
        .collect()
}

fn set_from_tuples(id: &str, tuples: &[Vec<f64>]) -> DescribedSet {
    let dim = tuples[0].len();
    let suite = ProbeSuite::from_names((0..dim).map(|i| format!("phi{i}")).collect()).unwrap();
    let elements = tuples
        .iter()
        .enumerate()
        .map(|(k, t)| Element {
            handle: format!("{id}{k}"),
            features: t
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("phi{i}"), *v))
                .collect::<BTreeMap<String, f64>>(),
        })
        .collect();
    DescribedSet::new(id, elements, suite).unwrap()
}

fn euclid(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn hausdorff_oracle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let dim = rng.random_range(1..=3);
    let q_raw = random_tuples(rng, dim, 8);
    let s_raw = random_tuples(rng, dim, 8);
    let directed = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
        from.iter()
            .map(|q| {
                to.iter()
                    .map(|s| euclid(q, s))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let oracle = directed(&q_raw, &s_raw).max(directed(&s_raw, &q_raw));
    let q = PointSet::new(q_raw).map_err(|e| e.to_string())?;
    let s = PointSet::new(s_raw).map_err(|e| e.to_string())?;
    let got = hausdorff_distance(&q, &s).map_err(|e| e.to_string())?;
    if got != oracle {
        return Err(format!("{got} != oracle {oracle}"));
    }
    Ok(())
}

fn metric_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let dim = rng.random_range(1..=3);
    let a = set_from_tuples("A", &random_tuples(rng, dim, 6));
    let b = set_from_tuples("B", &random_tuples(rng, dim, 6));
    let c = set_from_tuples("C", &random_tuples(rng, dim, 6));
    let d = |x: &DescribedSet, y: &DescribedSet| -> Result<f64, String> {
        descriptive_hausdorff_distance(x, y).map_err(|e| e.to_string())
    };
    if d(&a, &b)? != d(&b, &a)? {
        return Err("asymmetric".into());
    }
    if (d(&a, &b)? == 0.0) != (a.description() == b.description()) {
        return Err("zero without equal descriptions".into());
    }
    if d(&a, &c)? > d(&a, &b)? + d(&b, &c)? + 1e-12 {
        return Err("triangle inequality violated".into());
    }
    Ok(())
}

fn inf_bound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let dim = rng.random_range(1..=3);
    let a = set_from_tuples("A", &random_tuples(rng, dim, 8));
    let b = set_from_tuples("B", &random_tuples(rng, dim, 8));
    let d_phi = descriptive_distance(&a, &b).map_err(|e| e.to_string())?;
    let d_h = descriptive_hausdorff_distance(&a, &b).map_err(|e| e.to_string())?;
    if d_phi > d_h + 1e-12 {
        return Err(format!("pairwise minimum {d_phi} exceeds Hausdorff {d_h}"));
    }
    if !descriptively_near(&a, &a, 0.0).map_err(|e| e.to_string())? {
        return Err("set not near itself".into());
    }
    Ok(())
}

fn extension_identities(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.random_range(2..=12);
    let states: Vec<f64> = (0..n).map(|i| i as f64 - (n / 2) as f64).collect();
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (states[i], states[rng.random_range(0..n)]))
        .collect();
    let sys = DescriptiveSystem::new(
        SpaceSpec::Finite { states },
        MapSpec::Table { pairs },
        vec![ProbeSpec::Identity],
    )
    .map_err(|e| e.to_string())?;
    let mut extra = Vec::new();
    for _ in 0..rng.random_range(0..=3usize) {
        let size = rng.random_range(1..=n);
        let subset: BTreeSet<StateId> =
            (0..size).map(|_| StateId(rng.random_range(0..n))).collect();
        extra.push(subset);
    }
    let family = CompactFamily::singletons_plus(&sys, extra).map_err(|e| e.to_string())?;
    let subset = |rng: &mut ChaCha8Rng| -> BTreeSet<StateId> {
        (0..n)
            .filter(|_| rng.random_bool(0.5))
            .map(StateId)
            .collect()
    };
    let a = subset(rng);
    let b = subset(rng);

    if extension(&family, &a).is_empty() != a.is_empty() {
        return Err("extension empty iff input empty".into());
    }
    let a_and_b: BTreeSet<StateId> = a.intersection(&b).cloned().collect();
    let ra = extension(&family, &a);
    let rb = extension(&family, &b);
    let rhs: Vec<usize> = ra.iter().filter(|i| rb.contains(i)).cloned().collect();
    if extension(&family, &a_and_b) != rhs {
        return Err("extension does not distribute over intersection".into());
    }
    if !a.is_empty() {
        let img_a = set_map(&sys, &a).map_err(|e| e.to_string())?;
        for &i in &ra {
            let img_k = set_map(&sys, &family.members()[i]).map_err(|e| e.to_string())?;
            if !img_k.is_subset(&img_a) {
                return Err("image of a contained member escapes the image".into());
            }
        }
        let steps = rng.random_range(1..=4);
        let iterated = set_map_n(&sys, &a, steps).map_err(|e| e.to_string())?;
        let pointwise: BTreeSet<StateId> = a.iter().map(|&s| sys.step_n(s, steps)).collect();
        if iterated != pointwise {
            return Err("iterated set map differs from pointwise image".into());
        }
    }
    Ok(())
}

fn lobe_partition(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use std::f64::consts::PI;
    let k = rng.random_range(1..=4);
    let components: Vec<(f64, f64, f64)> = (0..k)
        .map(|_| {
            (
                f64::from(rng.random_range(1u32..=20)),
                rng.random_range(0.2..2.0),
                rng.random_range(0.0..(2.0 * PI)),
            )
        })
        .collect();
    let w = Waveform::from_fn("fixture", 0.001, 1000, |t| {
        components
            .iter()
            .map(|(f, a, p)| a * (2.0 * PI * f * t + p).sin())
            .sum()
    })
    .map_err(|e| e.to_string())?;
    let env = hilbert_envelope(&w, EnvelopeMode::Analytic);
    let seg = segment_lobes(&w, &env, Integrand::Squared).map_err(|e| e.to_string())?;
    let total: f64 = seg.lobes.iter().map(|l| l.area).sum();
    let whole = waveform_energy(&w, w.t_start(), w.t_end()).map_err(|e| e.to_string())?;
    let rel = (total - whole).abs() / whole.abs().max(1e-12);
    if rel >= 1e-6 {
        return Err(format!("partition defect {rel}"));
    }
    Ok(())
}
