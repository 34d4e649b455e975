//! Cost profiles: for each pole occupancy pair (σ,τ), the cheapest cost of an
//! orthogonal representation as a function of the rotation of π(s,t).
//!
//! Profiles are piecewise constant over rotations. Bends follow from the
//! rotation r by β = max(−r, σ+τ−2+r), the second term being −rot(π(t,s)).

use serde::Serialize;
use std::collections::BTreeMap;

/// Index of (σ,τ) in the profile tables.
pub fn slot(sigma: u8, tau: u8) -> usize {
    debug_assert!((1..=4).contains(&sigma) && (1..=4).contains(&tau));
    (sigma as usize - 1) * 4 + tau as usize - 1
}

pub fn unslot(i: usize) -> (u8, u8) {
    ((i / 4 + 1) as u8, (i % 4 + 1) as u8)
}

/// β for rotation `r` of π(s,t).
pub fn bends_of(sigma: u8, tau: u8, r: i32) -> i32 {
    (-r).max(sigma as i32 + tau as i32 - 2 + r)
}

/// Smallest possible β for (σ,τ).
pub fn beta_low(sigma: u8, tau: u8) -> i32 {
    (sigma as i32 + tau as i32 + 1) / 2 - 1
}

/// Rotations of π(s,t) with at most `cap` bends.
pub fn rotation_window(sigma: u8, tau: u8, cap: i32) -> (i32, i32) {
    (2 - sigma as i32 - tau as i32 - cap, cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Piece {
    pub lo: i32,
    pub hi: i32,
    pub cost: f64,
    /// Composition choice that produced this piece; meaning depends on the producer.
    pub origin: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    pub cap: i32,
    /// Indexed by `slot(σ,τ)`; pieces sorted and disjoint.
    pub parts: Vec<Vec<Piece>>,
}

impl Profile {
    pub fn empty(cap: i32) -> Profile {
        Profile { cap, parts: vec![Vec::new(); 16] }
    }

    pub fn pieces(&self, sigma: u8, tau: u8) -> &[Piece] {
        &self.parts[slot(sigma, tau)]
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    /// Occupancy pairs with at least one finite entry.
    pub fn pairs(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        (0..16).filter(|&i| !self.parts[i].is_empty()).map(unslot)
    }

    pub fn cost_at(&self, sigma: u8, tau: u8, r: i32) -> f64 {
        self.piece_at(sigma, tau, r).map_or(f64::INFINITY, |p| p.cost)
    }

    pub fn piece_at(&self, sigma: u8, tau: u8, r: i32) -> Option<&Piece> {
        let ps = self.pieces(sigma, tau);
        let i = ps.partition_point(|p| p.hi < r);
        ps.get(i).filter(|p| p.lo <= r)
    }

    /// Minimum cost with exactly β bends.
    pub fn cost_bends(&self, sigma: u8, tau: u8, beta: i32) -> f64 {
        let a = self.cost_at(sigma, tau, -beta);
        let b = self.cost_at(sigma, tau, beta + 2 - sigma as i32 - tau as i32);
        a.min(b)
    }

    /// Finite entries β → cost for one pair.
    pub fn bend_costs(&self, sigma: u8, tau: u8) -> BTreeMap<i32, f64> {
        let mut out = BTreeMap::new();
        for p in self.pieces(sigma, tau) {
            for r in p.lo..=p.hi {
                let b = bends_of(sigma, tau, r);
                let e = out.entry(b).or_insert(f64::INFINITY);
                if p.cost < *e {
                    *e = p.cost;
                }
            }
        }
        out
    }

    pub fn bend_set(&self, sigma: u8, tau: u8) -> Vec<i32> {
        self.bend_costs(sigma, tau).into_keys().collect()
    }

    pub fn beta_max(&self, sigma: u8, tau: u8) -> Option<i32> {
        self.bend_costs(sigma, tau).keys().next_back().copied()
    }

    /// Cheapest entry over all pairs and rotations.
    pub fn min_cost(&self) -> f64 {
        self.parts.iter().flatten().map(|p| p.cost).fold(f64::INFINITY, f64::min)
    }

    /// β − β_low for the least β such that every bend count from β to β_max
    /// is present.
    pub fn gap(&self, sigma: u8, tau: u8) -> Option<i32> {
        let set = self.bend_set(sigma, tau);
        let mut b = *set.last()?;
        while set.binary_search(&(b - 1)).is_ok() {
            b -= 1;
        }
        Some(b - beta_low(sigma, tau))
    }

    /// Achievable rotations of π(s,t) as maximal intervals.
    pub fn rotation_intervals(&self, sigma: u8, tau: u8) -> Vec<(i32, i32)> {
        let mut out: Vec<(i32, i32)> = Vec::new();
        for p in self.pieces(sigma, tau) {
            match out.last_mut() {
                Some(last) if last.1 + 1 >= p.lo => last.1 = last.1.max(p.hi),
                _ => out.push((p.lo, p.hi)),
            }
        }
        out
    }

    /// Maximal intervals of constant cost, ignoring origins.
    pub fn runs(&self, sigma: u8, tau: u8) -> Vec<(i32, i32, f64)> {
        let mut out: Vec<(i32, i32, f64)> = Vec::new();
        for p in self.pieces(sigma, tau) {
            match out.last_mut() {
                Some(last) if last.1 + 1 == p.lo && last.2 == p.cost => last.1 = p.hi,
                _ => out.push((p.lo, p.hi, p.cost)),
            }
        }
        out
    }

    /// The profile with s and t exchanged: π(s,t) and π(t,s) trade places.
    pub fn flipped(&self) -> Profile {
        let mut out = Profile::empty(self.cap);
        for i in 0..16 {
            let (s, t) = unslot(i);
            let c = 2 - s as i32 - t as i32;
            let mut ps: Vec<Piece> = self.parts[i]
                .iter()
                .map(|p| Piece { lo: c - p.hi, hi: c - p.lo, cost: p.cost, origin: p.origin })
                .collect();
            ps.reverse();
            out.parts[slot(t, s)] = ps;
        }
        out
    }

    /// Serializes as `{ "cap": .., "pairs": { "σ,τ": { "β": cost } } }`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut pairs = serde_json::Map::new();
        for (s, t) in self.pairs() {
            let m: serde_json::Map<String, serde_json::Value> =
                self.bend_costs(s, t).into_iter().map(|(b, c)| (b.to_string(), serde_json::json!(c))).collect();
            pairs.insert(format!("{s},{t}"), serde_json::Value::Object(m));
        }
        serde_json::json!({ "cap": self.cap, "pairs": pairs })
    }
}

/// Collects candidate pieces and keeps their lower envelope. Each candidate
/// carries a payload; surviving pieces point at their payload through `origin`.
#[derive(Clone, Debug)]
pub struct Envelope<T> {
    cands: Vec<Vec<Piece>>,
    payload: Vec<T>,
}

impl<T> Default for Envelope<T> {
    fn default() -> Self {
        Envelope { cands: vec![Vec::new(); 16], payload: Vec::new() }
    }
}

impl<T> Envelope<T> {
    pub fn new() -> Envelope<T> {
        Self::default()
    }

    pub fn push(&mut self, sigma: u8, tau: u8, lo: i32, hi: i32, cost: f64, payload: T) {
        if lo <= hi && cost.is_finite() {
            let origin = self.payload.len() as u32;
            self.payload.push(payload);
            self.cands[slot(sigma, tau)].push(Piece { lo, hi, cost, origin });
        }
    }

    pub fn finish(self, cap: i32) -> (Profile, Vec<T>) {
        let mut out = Profile::empty(cap);
        let mut keep: Vec<Option<u32>> = vec![None; self.payload.len()];
        let mut kept = 0u32;
        for (i, mut cs) in self.cands.into_iter().enumerate() {
            let (s, t) = unslot(i);
            let (wlo, whi) = rotation_window(s, t, cap);
            // Cheapest first; ties prefer the earlier candidate.
            let mut order: Vec<usize> = (0..cs.len()).collect();
            order.sort_by(|&a, &b| cs[a].cost.total_cmp(&cs[b].cost).then(a.cmp(&b)));
            let mut taken: BTreeMap<i32, i32> = BTreeMap::new();
            let mut got = Vec::new();
            for k in order {
                let p = &mut cs[k];
                p.lo = p.lo.max(wlo);
                p.hi = p.hi.min(whi);
                if p.lo > p.hi {
                    continue;
                }
                let free = uncovered(&taken, p.lo, p.hi);
                if free.is_empty() {
                    continue;
                }
                let o = p.origin as usize;
                let id = *keep[o].get_or_insert_with(|| {
                    kept += 1;
                    kept - 1
                });
                for (lo, hi) in free {
                    got.push(Piece { lo, hi, cost: p.cost, origin: id });
                    taken.insert(lo, hi);
                }
                merge_adjacent(&mut taken);
            }
            got.sort_by_key(|p| p.lo);
            out.parts[i] = got;
        }
        let mut payload: Vec<Option<T>> = self.payload.into_iter().map(Some).collect();
        let mut order: Vec<(u32, usize)> = keep.iter().enumerate().filter_map(|(i, k)| k.map(|k| (k, i))).collect();
        order.sort_unstable();
        let kept_payload = order.into_iter().map(|(_, i)| payload[i].take().unwrap()).collect();
        (out, kept_payload)
    }
}

/// Parts of [lo, hi] not covered by the disjoint intervals in `taken`.
fn uncovered(taken: &BTreeMap<i32, i32>, lo: i32, hi: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    let mut cur = lo;
    let start = taken.range(..=lo).next_back().map_or(lo, |(&a, _)| a);
    for (&a, &b) in taken.range(start..) {
        if a > hi {
            break;
        }
        if b < cur {
            continue;
        }
        if a > cur {
            out.push((cur, a - 1));
        }
        cur = cur.max(b + 1);
        if cur > hi {
            break;
        }
    }
    if cur <= hi {
        out.push((cur, hi));
    }
    out
}

fn merge_adjacent(taken: &mut BTreeMap<i32, i32>) {
    if taken.len() < 2 {
        return;
    }
    let mut merged: BTreeMap<i32, i32> = BTreeMap::new();
    let mut cur: Option<(i32, i32)> = None;
    for (&a, &b) in taken.iter() {
        cur = match cur {
            Some((x, y)) if y + 1 >= a => Some((x, y.max(b))),
            Some(c) => {
                merged.insert(c.0, c.1);
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some(c) = cur {
        merged.insert(c.0, c.1);
    }
    *taken = merged;
}
