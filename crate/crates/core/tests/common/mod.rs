#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};

use nilcons_core::scalar::Q;

/// Bareiss elimination on an integer matrix obtained by clearing row denominators.
pub fn bareiss_rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let (nr, nc) = (m.len(), m.first().map_or(0, |r| r.len()));
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..nc {
        let Some(p) = (rank..nr).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..nr {
            for k in col + 1..nc {
                m[i][k] = (&m[rank][col] * &m[i][k] - &m[i][col] * &m[rank][k]) / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}


use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nilcons_core::liealg::{build_model, LieAlgebraModel, Preset};
use nilcons_core::linalg::Subspace;
use nilcons_core::scalar::q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn cached(p: Preset) -> Arc<LieAlgebraModel> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<LieAlgebraModel>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = format!("{p}");
    if let Some(m) = cache.lock().unwrap().get(&key) {
        return m.clone();
    }
    let m = Arc::new(build_model(p).unwrap());
    cache.lock().unwrap().insert(key, m.clone());
    m
}

/// A seeded random subspace of `s` of dimension at most `max_dim`.
pub fn random_subspace(s: &Subspace, max_dim: usize, seed: u64) -> Subspace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=max_dim.min(s.dim()));
    let vs: Vec<Vec<Q>> = (0..k)
        .map(|_| s.combine(&(0..s.dim()).map(|_| q(rng.gen_range(-3..=3))).collect::<Vec<_>>()))
        .collect();
    Subspace::span(s.ambient(), &vs)
}
