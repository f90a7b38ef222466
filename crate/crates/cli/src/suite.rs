//! Seeded randomized checks of the blow-up laws on finite chains.

use porosity_core::blowup::{blow_up_chain, cc1_components, check_inclusion_lemma, component_count_violation};
use porosity_core::rational::{int, rat};
use porosity_core::{Block, Chain, TailFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct LawCount {
    pub law: &'static str,
    pub checked: usize,
    pub violations: usize,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub laws: Vec<LawCount>,
}

impl SuiteReport {
    pub fn violations(&self) -> usize {
        self.laws.iter().map(|l| l.violations).sum()
    }
}

const LAWS: [&str; 7] = [
    "set inside its blow-up",
    "monotone in the set",
    "monotone in q",
    "blow-ups compose",
    "component ratio at least q^2",
    "component count below 1",
    "blown inclusion on (0, t/q)",
];

fn random_chain(rng: &mut ChaCha8Rng) -> Chain {
    let mut x = int(1);
    let mut blocks = Vec::new();
    for _ in 0..rng.gen_range(1..12) {
        if rng.gen_bool(0.3) {
            let lo = &x * rat(rng.gen_range(1..8), 8);
            blocks.push(Block::interval(lo.clone(), x.clone()).expect("lo < hi"));
            x = lo;
        } else {
            blocks.push(Block::point(x.clone()).expect("positive"));
        }
        x = &x * rat(1, rng.gen_range(2..40));
    }
    Chain::from_unordered(blocks, int(1), int(0)).expect("valid chain")
}

pub fn run(seed: u64, trials: usize) -> porosity_core::Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = [0usize; LAWS.len()];
    let zero = int(0);
    let factors = [rat(3, 2), int(2), int(5), rat(11, 10), rat(7, 3)];
    for _ in 0..trials {
        let c = random_chain(&mut rng);
        let q = factors[rng.gen_range(0..factors.len())].clone();
        let cq = blow_up_chain(&c, &q)?;
        let top = cq.upper().clone();
        let sub_blocks: Vec<Block> = c.blocks().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        let sub = Chain::new(sub_blocks, c.upper().clone(), zero.clone())?;
        let q2 = &q * rat(rng.gen_range(10..30), 10);
        let cq2 = blow_up_chain(&c, &q2)?;
        let comps = cc1_components(&cq);
        let t = c.blocks()[0].hi() * rat(rng.gen_range(1..10), 10);
        let inclusion = check_inclusion_lemma(
            &TailFamily::ExplicitChain { chain: c.clone() },
            &TailFamily::ExplicitChain { chain: sub.clone() },
            &t,
            &q,
            64,
            None,
        )?;
        let results = [
            c.subset_within(&cq, &zero, &top),
            blow_up_chain(&sub, &q)?.subset_within(&cq, &zero, &top),
            cq.subset_within(&cq2, &zero, cq2.upper()),
            blow_up_chain(&cq, &q)? == blow_up_chain(&c, &(&q * &q))?,
            comps.iter().all(|i| i.ratio() >= &q * &q),
            component_count_violation(&comps, &q).is_none(),
            inclusion.holds,
        ];
        for (slot, ok) in bad.iter_mut().zip(results) {
            if !ok {
                *slot += 1;
            }
        }
    }
    let laws = LAWS
        .iter()
        .zip(bad)
        .map(|(law, violations)| LawCount { law, checked: trials, violations })
        .collect();
    Ok(SuiteReport { seed, trials, laws })
}
