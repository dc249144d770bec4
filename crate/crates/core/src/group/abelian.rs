use std::collections::HashMap;

use num::integer::lcm;

use crate::error::{Error, Result};
use crate::exactlin::CycloNumber;

/// A finite abelian group with an explicit decomposition
/// `∏ Z_{d_i}`, found by greedily extracting elements of maximal order
/// from successive quotients. Elements are arbitrary `usize` labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    carrier: Vec<usize>,
    generators: Vec<usize>,
    orders: Vec<u32>,
    coords: HashMap<usize, Vec<u32>>,
    exponent: u32,
}

impl AbelianStructure {
    /// `mul` must be a commutative group law on `carrier` with identity
    /// `identity`; the decomposition is checked against it.
    pub fn new(carrier: Vec<usize>, identity: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let n = carrier.len();
        let pos: HashMap<usize, usize> = carrier.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        if !pos.contains_key(&identity) {
            return Err(Error::Inconsistent("identity is not in the carrier".into()));
        }
        let mut in_k = vec![false; n];
        in_k[pos[&identity]] = true;
        let mut k_elems = vec![identity];
        let mut generators = Vec::new();
        let mut orders = Vec::new();

        let order_mod = |g: usize, in_k: &[bool]| -> u32 {
            let mut acc = g;
            let mut k = 1;
            while !in_k[pos[&acc]] {
                acc = mul(acc, g);
                k += 1;
            }
            k
        };

        let mut only_id = vec![false; n];
        only_id[pos[&identity]] = true;
        while k_elems.len() < n {
            let (mut best, mut best_order) = (identity, 0);
            for &g in &carrier {
                let d = order_mod(g, &in_k);
                if d > best_order {
                    best = g;
                    best_order = d;
                }
            }
            // lowest-position lift in the coset best·K of the same order
            let lift = carrier
                .iter()
                .copied()
                .filter(|&c| k_elems.iter().any(|&k| mul(best, k) == c))
                .find(|&c| order_mod(c, &only_id) == best_order)
                .ok_or_else(|| Error::Inconsistent("no lift of maximal order".into()))?;
            let mut new_k = Vec::with_capacity(k_elems.len() * best_order as usize);
            let mut power = identity;
            for _ in 0..best_order {
                for &k in &k_elems {
                    new_k.push(mul(power, k));
                }
                power = mul(power, lift);
            }
            for &g in &new_k {
                in_k[pos[&g]] = true;
            }
            k_elems = new_k;
            generators.push(lift);
            orders.push(best_order);
        }

        let mut coords: HashMap<usize, Vec<u32>> = HashMap::with_capacity(n);
        let mut tuple = vec![0u32; orders.len()];
        loop {
            let mut g = identity;
            for (i, &a) in tuple.iter().enumerate() {
                for _ in 0..a {
                    g = mul(g, generators[i]);
                }
            }
            if coords.insert(g, tuple.clone()).is_some() {
                return Err(Error::Inconsistent("decomposition is not injective".into()));
            }
            let mut i = 0;
            while i < tuple.len() {
                tuple[i] += 1;
                if tuple[i] < orders[i] {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if i == tuple.len() {
                break;
            }
        }
        if coords.len() != n {
            return Err(Error::Inconsistent("decomposition does not cover the group".into()));
        }
        if n <= 512 {
            for &a in &carrier {
                for &b in &carrier {
                    let (ca, cb, cab) = (&coords[&a], &coords[&b], &coords[&mul(a, b)]);
                    let ok = (0..orders.len()).all(|i| (ca[i] + cb[i]) % orders[i] == cab[i]);
                    if !ok {
                        return Err(Error::Inconsistent("coordinates are not a homomorphism".into()));
                    }
                }
            }
        }
        let exponent = orders.iter().fold(1u32, |acc, &d| lcm(acc, d));
        Ok(AbelianStructure {
            carrier,
            generators,
            orders,
            coords,
            exponent,
        })
    }

    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// `lcm(d_i)`; every character value is a power of `ζ_exponent`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn coordinates(&self, g: usize) -> Option<&[u32]> {
        self.coords.get(&g).map(|v| v.as_slice())
    }
}

/// `θ(g) = ∏ ζ_{d_i}^{a_i · c_i(g)}` for exponents `a_i ∈ Z_{d_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearCharacter {
    pub exponents: Vec<u32>,
}

impl LinearCharacter {
    /// `k` with `θ(g) = ζ_D^k`, `D = s.exponent()`; `None` off the carrier.
    pub fn exponent_at(&self, s: &AbelianStructure, g: usize) -> Option<u64> {
        let c = s.coordinates(g)?;
        let d = s.exponent() as u64;
        let k = self
            .exponents
            .iter()
            .zip(c)
            .zip(s.orders())
            .map(|((&a, &ci), &di)| a as u64 * ci as u64 * (d / di as u64))
            .sum::<u64>();
        Some(k % d)
    }

    pub fn value(&self, s: &AbelianStructure, g: usize) -> Option<CycloNumber> {
        self.exponent_at(s, g)
            .map(|k| CycloNumber::root_of_unity(s.exponent(), k))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }
}

/// All `|S|` characters, in lexicographic order of their exponent tuples.
pub fn characters_of(s: &AbelianStructure) -> Vec<LinearCharacter> {
    let mut out = vec![LinearCharacter { exponents: Vec::new() }];
    for &d in s.orders() {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0..d).map(move |a| {
                    let mut e = c.exponents.clone();
                    e.push(a);
                    LinearCharacter { exponents: e }
                })
            })
            .collect();
    }
    out
}
