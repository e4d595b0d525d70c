//! Deterministic fixture corpus.

use std::fs;
use std::path::Path;

use clforms::blocks::canonical_pair_gram;
use clforms::sample::{form_space, Sampler};
use clforms::verify::instance_rng;
use clforms::{classify, BlockVariant, Error, Field, FormSpace, GroupKind, Matrix, Poly, Result};

use crate::schema::{poly_dto, ProblemInstance};

fn spaces() -> Vec<(GroupKind, u32, Vec<usize>)> {
    let mut out = Vec::new();
    for q in [3, 5, 7] {
        out.push((GroupKind::O, q, (1..=6).collect()));
        out.push((GroupKind::SO, q, (1..=6).collect()));
        out.push((GroupKind::Sp, q, vec![2, 4, 6]));
    }
    for q in [9, 25] {
        out.push((GroupKind::U, q, (1..=4).collect()));
    }
    out
}

/// Shift operator `A^i e ↦ A^{i+1} e`, `A^i f ↦ A^{i+1} f` on the pair basis.
fn pair_shift(k: Field, d: usize) -> Matrix {
    Matrix::from_fn(k, 2 * d, 2 * d, |i, j| {
        let same_half = (i < d) == (j < d);
        if same_half && i == j + 1 { k.one() } else { k.zero() }
    })
}

fn conjugate_randomly(space: &FormSpace, a: &Matrix, seed: u64, stream: u64) -> Result<Matrix> {
    let mut rng = instance_rng(seed, stream);
    let g = Sampler::new(space)?.group(&mut rng);
    Ok(&(&g * a) * &g.try_inverse()?)
}

struct Canonical {
    instance: ProblemInstance,
    expect: (BlockVariant, usize),
}

fn canonical(seed: u64) -> Result<Vec<Canonical>> {
    let f3 = Field::prime(3)?;
    let mut out = Vec::new();

    let sp2 = FormSpace::standard(GroupKind::Sp, f3, 2)?;
    out.push(Canonical {
        instance: ProblemInstance::new("sp2_nilp", &sp2, &Matrix::from_ints(f3, &[&[0, 1], &[0, 0]])),
        expect: (BlockVariant::NonSplit, 2),
    });
    out.push(Canonical {
        instance: ProblemInstance::new("sp2_zero", &sp2, &Matrix::zeros(f3, 2, 2)),
        expect: (BlockVariant::OddNilpotentSp, 1),
    });

    let hyperbolic = FormSpace::new(GroupKind::O, Matrix::from_ints(f3, &[&[0, 1], &[1, 0]]))?;
    let a = conjugate_randomly(&hyperbolic, &Matrix::from_ints(f3, &[&[1, 0], &[0, -1]]), seed, 1)?;
    out.push(Canonical { instance: ProblemInstance::new("o2_split", &hyperbolic, &a), expect: (BlockVariant::Split, 1) });

    for (name, group, d, variant, stream) in [
        ("o4_even_nilpotent_d2", GroupKind::O, 2, BlockVariant::EvenNilpotentO, 2),
        ("sp6_odd_nilpotent_d3", GroupKind::Sp, 3, BlockVariant::OddNilpotentSp, 3),
    ] {
        let kind = FormSpace::standard(group, f3, 2 * d)?;
        let space = FormSpace::new(group, canonical_pair_gram(&kind, d))?;
        let a = conjugate_randomly(&space, &pair_shift(f3, d), seed, stream)?;
        out.push(Canonical { instance: ProblemInstance::new(name, &space, &a), expect: (variant, d) });
    }

    let mut descent = ProblemInstance::new("sp2_descent", &sp2, &Matrix::from_ints(f3, &[&[0, 1], &[-1, 0]]));
    descent.poly = Some(poly_dto(&Poly::from_ints(f3, &[1, 0, 1])));
    out.push(Canonical { instance: descent, expect: (BlockVariant::NonSplit, 1) });
    Ok(out)
}

/// Builds the corpus; `per_space` random operators for every
/// (kind, field, dimension), each on a randomly congruent form.
pub fn generate(seed: u64, per_space: usize) -> Result<Vec<ProblemInstance>> {
    let mut out = Vec::new();
    for c in canonical(seed)? {
        let loaded = c.instance.load()?;
        let dec = classify(&loaded.space, &loaded.operator)?;
        let (variant, d) = c.expect;
        if dec.blocks.len() != 1 || dec.blocks[0].variant != variant || dec.blocks[0].d != d {
            return Err(Error::Internal(format!("fixture {} does not have the intended block", c.instance.name)));
        }
        out.push(c.instance);
    }
    let mut stream = 1000;
    for (group, q, dims) in spaces() {
        let k = Field::from_order(q)?;
        for n in dims {
            for i in 0..per_space {
                stream += 1;
                let mut rng = instance_rng(seed, stream);
                let space = form_space(group, k, n, &mut rng)?;
                let a = Sampler::new(&space)?.lie(&mut rng);
                let name = format!("{}{n}_q{q}_{i:02}", group.algebra_name());
                let inst = ProblemInstance::new(&name, &space, &a);
                let loaded = inst.load()?;
                classify(&loaded.space, &loaded.operator)?;
                out.push(inst);
            }
        }
    }
    Ok(out)
}

pub fn write(dir: &Path, corpus: &[ProblemInstance]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for inst in corpus {
        let mut text = serde_json::to_string_pretty(inst).expect("serializable");
        text.push('\n');
        fs::write(dir.join(format!("{}.json", inst.name)), text)?;
    }
    Ok(())
}
