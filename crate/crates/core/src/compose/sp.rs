//! Profiles of single edges and of series and parallel compositions.

use super::profile::{slot, unslot, Envelope, Profile};
use crate::model::EdgeCost;

/// A piece of a child profile: `(slot, index)`.
pub type PieceRef = (u8, u32);

pub fn edge_profile(c: &EdgeCost, cap: i32) -> Profile {
    let b = c.max_bends().map_or(cap, |b| (b as i32).min(cap));
    let mut env = Envelope::new();
    let mut r = -b;
    while r <= b {
        let cost = c.cost(r.unsigned_abs());
        let mut hi = r;
        while hi < b && c.cost((hi + 1).unsigned_abs()) == cost {
            hi += 1;
        }
        env.push(1, 1, r, hi, cost, ());
        r = hi + 1;
    }
    env.finish(cap).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesChoice {
    pub a: PieceRef,
    pub b: PieceRef,
    /// Corner at the middle vertex on the π(s,t) side.
    pub c1: i32,
    /// Corner on the π(t,s) side.
    pub c2: i32,
}

impl SeriesChoice {
    /// Rotations of the two halves realizing `r`.
    pub fn split(&self, p1: &Profile, p2: &Profile, r: i32) -> (i32, i32) {
        let pa = &p1.parts[self.a.0 as usize][self.a.1 as usize];
        let pb = &p2.parts[self.b.0 as usize][self.b.1 as usize];
        let r1 = pa.lo.max(r - self.c1 - pb.hi);
        let r2 = r - self.c1 - r1;
        debug_assert!(r1 <= pa.hi && (pb.lo..=pb.hi).contains(&r2));
        (r1, r2)
    }
}

/// Series composition: the t-pole of `p1` glued to the s-pole of `p2`.
/// `restricted` forces a 90° angle at the shared vertex.
pub fn series(p1: &Profile, p2: &Profile, restricted: bool, cap: i32) -> (Profile, Vec<SeriesChoice>) {
    let mut env = Envelope::new();
    for (s1, t1) in p1.pairs() {
        for (s2, t2) in p2.pairs() {
            if t1 + s2 > 4 {
                continue;
            }
            let total = t1 as i32 + s2 as i32 - 2;
            for c1 in -2..=1 {
                let c2 = total - c1;
                if !(-2..=1).contains(&c2) || (restricted && c1.abs() != 1) {
                    continue;
                }
                for (i, pa) in p1.pieces(s1, t1).iter().enumerate() {
                    for (j, pb) in p2.pieces(s2, t2).iter().enumerate() {
                        let choice = SeriesChoice {
                            a: (slot(s1, t1) as u8, i as u32),
                            b: (slot(s2, t2) as u8, j as u32),
                            c1,
                            c2,
                        };
                        env.push(s1, t2, pa.lo + pb.lo + c1, pa.hi + pb.hi + c1, pa.cost + pb.cost, choice);
                    }
                }
            }
        }
    }
    env.finish(cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelChoice {
    /// Child on the π(s,t) side.
    pub a: PieceRef,
    pub b: PieceRef,
    /// Corners of the middle face at s and at t.
    pub cs: i32,
    pub ct: i32,
}

impl ParallelChoice {
    pub fn offset(&self) -> i32 {
        let (sa, ta) = unslot(self.a.0 as usize);
        2 - self.cs - self.ct + sa as i32 + ta as i32
    }

    /// Rotations of π(s,t) in the two children realizing `r`.
    pub fn split(&self, r: i32) -> (i32, i32) {
        (r, r + self.offset())
    }
}

/// Parallel composition with `pa` on the π(s,t) side of `pb`.
pub fn parallel(pa: &Profile, pb: &Profile, cap: i32) -> (Profile, Vec<ParallelChoice>) {
    let mut env = Envelope::new();
    for (sa, ta) in pa.pairs() {
        for (sb, tb) in pb.pairs() {
            for sigma in (sa + sb)..=4 {
                for tau in (ta + tb)..=4 {
                    let cs = sa as i32 + sb as i32 + 1 - sigma as i32;
                    let ct = ta as i32 + tb as i32 + 1 - tau as i32;
                    let k = 2 - cs - ct + sa as i32 + ta as i32;
                    for (i, a) in pa.pieces(sa, ta).iter().enumerate() {
                        for (j, b) in pb.pieces(sb, tb).iter().enumerate() {
                            let lo = a.lo.max(b.lo - k);
                            let hi = a.hi.min(b.hi - k);
                            let choice = ParallelChoice {
                                a: (slot(sa, ta) as u8, i as u32),
                                b: (slot(sb, tb) as u8, j as u32),
                                cs,
                                ct,
                            };
                            env.push(sigma, tau, lo, hi, a.cost + b.cost, choice);
                        }
                    }
                }
            }
        }
    }
    env.finish(cap)
}

/// Pointwise minimum of profiles; the payload names the source.
pub fn choice(profiles: &[&Profile], cap: i32) -> (Profile, Vec<(usize, u32)>) {
    let mut env = Envelope::new();
    for (k, p) in profiles.iter().enumerate() {
        for i in 0..16 {
            let (s, t) = unslot(i);
            for (j, pc) in p.parts[i].iter().enumerate() {
                env.push(s, t, pc.lo, pc.hi, pc.cost, (k, j as u32));
            }
        }
    }
    env.finish(cap)
}
