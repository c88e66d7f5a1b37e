//! Buchberger core on an internal packed representation.
//!
//! Variables are renumbered so that the monomial order is plain
//! degree-reverse-lexicographic on internal indices. Coefficients live either in
//! a prime field or in ℤ; over ℤ polynomials are kept primitive and reduction is
//! fraction-free, which is how ℚ is handled.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) const MAX_VARS: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Mono {
    pub deg: u32,
    pub mask: u16,
    pub e: [u16; MAX_VARS],
}

/// Grading weights of the internal variables.
#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub nvars: usize,
    pub weights: [u32; MAX_VARS],
}

impl Ctx {
    pub fn mono(&self, e: [u16; MAX_VARS]) -> Mono {
        let mut deg = 0u32;
        let mut mask = 0u16;
        for (k, (&x, &w)) in e.iter().zip(&self.weights).take(self.nvars).enumerate() {
            deg += x as u32 * w;
            if x > 0 {
                mask |= 1 << k;
            }
        }
        Mono { deg, mask, e }
    }

    pub fn lcm(&self, a: &Mono, b: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for (k, x) in e.iter_mut().enumerate().take(self.nvars) {
            *x = a.e[k].max(b.e[k]);
        }
        self.mono(e)
    }
}

impl Mono {
    pub fn one() -> Mono {
        Mono {
            deg: 0,
            mask: 0,
            e: [0; MAX_VARS],
        }
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(&o.e) {
            *x += *y;
        }
        Mono {
            deg: self.deg + o.deg,
            mask: self.mask | o.mask,
            e,
        }
    }

    #[inline]
    pub fn divides(&self, o: &Mono) -> bool {
        self.mask & !o.mask == 0 && self.deg <= o.deg && self.e.iter().zip(&o.e).all(|(a, b)| a <= b)
    }

    /// `o / self`; caller guarantees divisibility.
    #[inline]
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut e = o.e;
        let mut mask = 0u16;
        for (k, (x, y)) in e.iter_mut().zip(&self.e).enumerate() {
            *x -= *y;
            if *x > 0 {
                mask |= 1 << k;
            }
        }
        Mono {
            deg: o.deg - self.deg,
            mask,
            e,
        }
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.mask & o.mask == 0
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0
    }
}

impl Ord for Mono {
    #[inline]
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| {
            for k in (0..MAX_VARS).rev() {
                if self.e[k] != o.e[k] {
                    return o.e[k].cmp(&self.e[k]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub(crate) type Term<C> = (Mono, C);

/// A remainder together with the multipliers applied to the input.
pub(crate) type Reduction<C> = (Vec<Term<C>>, Vec<C>);

/// Coefficient domain operations used by the engine.
pub(crate) trait Arith {
    type C: Clone + Debug + PartialEq;

    fn is_zero(&self, c: &Self::C) -> bool;
    fn is_one(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    /// `a·x − b·y`.
    fn lin(&self, a: &Self::C, x: &Self::C, b: &Self::C, y: &Self::C) -> Self::C;
    fn neg_mul(&self, b: &Self::C, y: &Self::C) -> Self::C;
    /// `(a, b)` with `a·lc_f = b·lc_g`, used as `a·f − b·m·g`.
    fn cancel_factors(&self, lc_f: &Self::C, lc_g: &Self::C) -> (Self::C, Self::C);
    /// Makes a polynomial monic (field) or primitive with positive leading coefficient (ℤ).
    fn normalize(&self, p: &mut [Term<Self::C>]);
    /// Divides `f` and `done` by their common content when that is worthwhile.
    fn shrink(&self, _f: &mut [Term<Self::C>], _done: &mut [Term<Self::C>]) {}
}

/// `a·F − b·G` for two ascending term streams.
fn lincomb<'x, A: Arith>(
    ar: &A,
    a: &A::C,
    f: impl Iterator<Item = (Mono, &'x A::C)>,
    b: &A::C,
    g: impl Iterator<Item = (Mono, &'x A::C)>,
    cap: usize,
) -> Vec<Term<A::C>>
where
    A::C: 'x,
{
    let a_one = ar.is_one(a);
    let mut out = Vec::with_capacity(cap);
    let mut f = f.peekable();
    let mut g = g.peekable();
    loop {
        let ord = match (f.peek(), g.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (Some((mf, _)), Some((mg, _))) => mf.cmp(mg),
        };
        match ord {
            Ordering::Less => {
                let (m, c) = f.next().unwrap();
                out.push((m, if a_one { c.clone() } else { ar.mul(a, c) }));
            }
            Ordering::Greater => {
                let (m, c) = g.next().unwrap();
                out.push((m, ar.neg_mul(b, c)));
            }
            Ordering::Equal => {
                let (m, x) = f.next().unwrap();
                let (_, y) = g.next().unwrap();
                let c = ar.lin(a, x, b, y);
                if !ar.is_zero(&c) {
                    out.push((m, c));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Coefficient domains

#[derive(Clone, Debug)]
pub(crate) struct ModP {
    pub p: u32,
}

impl ModP {
    pub fn inv(&self, a: u32) -> u32 {
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut a: u32, mut e: u32) -> u32 {
        let p = self.p as u64;
        let mut r = 1u64;
        let mut b = a as u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        a = r as u32;
        a
    }
}

impl Arith for ModP {
    type C = u32;

    fn is_zero(&self, c: &u32) -> bool {
        *c == 0
    }
    fn is_one(&self, c: &u32) -> bool {
        *c == 1
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn lin(&self, a: &u32, x: &u32, b: &u32, y: &u32) -> u32 {
        let p = self.p as u64;
        let ax = *a as u64 * *x as u64 % p;
        let by = *b as u64 * *y as u64 % p;
        ((ax + p - by) % p) as u32
    }
    fn neg_mul(&self, b: &u32, y: &u32) -> u32 {
        let p = self.p as u64;
        ((p - *b as u64 * *y as u64 % p) % p) as u32
    }
    fn cancel_factors(&self, lc_f: &u32, lc_g: &u32) -> (u32, u32) {
        if *lc_g == 1 {
            (1, *lc_f)
        } else {
            (1, self.mul(lc_f, &self.inv(*lc_g)))
        }
    }
    fn normalize(&self, p: &mut [Term<u32>]) {
        if let Some((_, lc)) = p.first() {
            if *lc != 1 {
                let inv = self.inv(*lc);
                for (_, c) in p.iter_mut() {
                    *c = self.mul(c, &inv);
                }
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct IntZ;

fn content(terms: &[Term<BigInt>]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in terms {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn max_bits(terms: &[Term<BigInt>]) -> u64 {
    terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
}

impl Arith for IntZ {
    type C = BigInt;

    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }
    fn is_one(&self, c: &BigInt) -> bool {
        c.is_one()
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn lin(&self, a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> BigInt {
        if a.is_one() {
            x - b * y
        } else {
            a * x - b * y
        }
    }
    fn neg_mul(&self, b: &BigInt, y: &BigInt) -> BigInt {
        -(b * y)
    }
    fn cancel_factors(&self, lc_f: &BigInt, lc_g: &BigInt) -> (BigInt, BigInt) {
        let d = lc_f.gcd(lc_g);
        let (a, b) = (lc_g / &d, lc_f / &d);
        if a.is_negative() {
            (-a, -b)
        } else {
            (a, b)
        }
    }
    fn normalize(&self, p: &mut [Term<BigInt>]) {
        let g = content(p);
        if g.is_zero() {
            return;
        }
        let flip = p[0].1.is_negative();
        if !g.is_one() {
            for (_, c) in p.iter_mut() {
                *c /= &g;
            }
        }
        if flip {
            for (_, c) in p.iter_mut() {
                *c = -&*c;
            }
        }
    }
    fn shrink(&self, f: &mut [Term<BigInt>], done: &mut [Term<BigInt>]) {
        if max_bits(f).max(max_bits(done)) < 256 {
            return;
        }
        let g = content(f).gcd(&content(done));
        if g.is_zero() || g.is_one() {
            return;
        }
        for (_, c) in f.iter_mut().chain(done.iter_mut()) {
            *c /= &g;
        }
    }
}

// ---------------------------------------------------------------------------
// Buchberger

#[derive(Clone, Debug)]
struct Pair {
    sugar: u32,
    lcm: Mono,
    kind: PairKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PairKind {
    Input(usize),
    S(usize, usize),
}

impl Pair {
    fn key(&self) -> (u32, Mono, usize, usize) {
        match self.kind {
            PairKind::Input(i) => (self.sugar, self.lcm, 0, i),
            PairKind::S(i, j) => (self.sugar, self.lcm, i + 1, j),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EngineStats {
    pub pairs_reduced: usize,
    pub zero_reductions: usize,
    pub basis_size: usize,
    /// Primes used by a modular computation over ℚ.
    pub primes_used: usize,
}

pub(crate) struct Engine<'a, A: Arith> {
    ar: &'a A,
    ctx: Ctx,
    polys: Vec<Vec<Term<A::C>>>,
    sugar: Vec<u32>,
    /// Indices of non-redundant basis elements and their leading monomials.
    active: Vec<usize>,
    active_lm: Vec<Mono>,
    deadline: Option<Instant>,
    started: Instant,
    pub stats: EngineStats,
}

impl<'a, A: Arith> Engine<'a, A> {
    pub fn new(ar: &'a A, ctx: Ctx, deadline: Option<Instant>) -> Self {
        Engine {
            ar,
            ctx,
            polys: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
            active_lm: Vec::new(),
            deadline,
            started: Instant::now(),
            stats: EngineStats::default(),
        }
    }

    fn check_time(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                return Err(Error::Timeout {
                    elapsed_ms: self.started.elapsed().as_millis() as u64,
                });
            }
        }
        Ok(())
    }

    fn find_reducer(&self, m: &Mono) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (slot, lm) in self.active_lm.iter().enumerate() {
            if lm.divides(m) {
                let k = self.active[slot];
                match best {
                    Some(b) if self.polys[b].len() <= self.polys[k].len() => {}
                    _ => best = Some(k),
                }
            }
        }
        best
    }

    /// Full reduction of an ascending polynomial against the active set.
    ///
    /// Returns the descending remainder. When `track` is given, content removal is
    /// disabled and the multipliers applied to `f` are recorded, so that
    /// `(Π a)·f − remainder` lies in the ideal.
    fn reduce(
        &mut self,
        mut f: Vec<Term<A::C>>,
        sugar: &mut u32,
        top_only: bool,
        mut track: Option<&mut Vec<A::C>>,
    ) -> Result<Vec<Term<A::C>>> {
        let mut done: Vec<Term<A::C>> = Vec::new();
        let mut steps = 0usize;
        while let Some((m, lc_f)) = f.last() {
            let Some(k) = self.find_reducer(m) else {
                if top_only {
                    done.extend(f.drain(..).rev());
                    break;
                }
                done.push(f.pop().unwrap());
                continue;
            };
            steps += 1;
            if steps.is_multiple_of(64) {
                self.check_time()?;
            }
            let g = &self.polys[k];
            let shift = g[0].0.quotient_of(m);
            *sugar = (*sugar).max(self.sugar[k] + shift.deg);
            let (a, b) = self.ar.cancel_factors(lc_f, &g[0].1);
            let n = f.len() - 1;
            let fi = f[..n].iter().map(|(m, c)| (*m, c));
            let gi = g[1..].iter().rev().map(|(m, c)| (m.mul(&shift), c));
            let new_f = lincomb(self.ar, &a, fi, &b, gi, n + g.len());
            if !self.ar.is_one(&a) {
                for (_, c) in done.iter_mut() {
                    *c = self.ar.mul(&a, c);
                }
                if let Some(t) = track.as_deref_mut() {
                    t.push(a.clone());
                }
            }
            f = new_f;
            // Content removal would change the multiplier bookkeeping.
            if track.is_none() {
                self.ar.shrink(&mut f, &mut done);
            }
        }
        Ok(done)
    }

    fn spoly(&self, i: usize, j: usize, lcm: &Mono) -> Vec<Term<A::C>> {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let u = f[0].0.quotient_of(lcm);
        let v = g[0].0.quotient_of(lcm);
        let (a, b) = self.ar.cancel_factors(&f[0].1, &g[0].1);
        let fi = f[1..].iter().rev().map(|(m, c)| (m.mul(&u), c));
        let gi = g[1..].iter().rev().map(|(m, c)| (m.mul(&v), c));
        lincomb(self.ar, &a, fi, &b, gi, f.len() + g.len())
    }

    fn push_poly(&mut self, p: Vec<Term<A::C>>, sugar: u32) -> usize {
        self.polys.push(p);
        self.sugar.push(sugar);
        self.polys.len() - 1
    }

    /// Gebauer–Möller update after adding basis element `h`.
    fn update(&mut self, h: usize, pairs: &mut Vec<Pair>) {
        let lm_h = self.polys[h][0].0;
        let sugar_h = self.sugar[h];
        let mut cand: Vec<(usize, Mono, bool)> = self
            .active
            .iter()
            .map(|&g| {
                let lm_g = self.polys[g][0].0;
                (g, self.ctx.lcm(&lm_h, &lm_g), lm_h.coprime(&lm_g))
            })
            .collect();
        // Chain criterion among the new pairs.
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if cand[a].2 {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].1.divides(&cand[a].1) && (cand[b].1 != cand[a].1 || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // Product criterion: coprime leading monomials need no pair.
        let mut fresh = Vec::new();
        for (idx, (g, lcm, coprime)) in cand.drain(..).enumerate() {
            if !keep[idx] || coprime {
                continue;
            }
            let lm_g = self.polys[g][0].0;
            let s = (sugar_h + lm_h.quotient_of(&lcm).deg)
                .max(self.sugar[g] + lm_g.quotient_of(&lcm).deg);
            fresh.push(Pair {
                sugar: s,
                lcm,
                kind: PairKind::S(g, h),
            });
        }
        // Old pairs made superfluous by h.
        let polys = &self.polys;
        let ctx = &self.ctx;
        pairs.retain(|p| match p.kind {
            PairKind::Input(_) => true,
            PairKind::S(i, j) => {
                if !lm_h.divides(&p.lcm) {
                    return true;
                }
                let li = ctx.lcm(&polys[i][0].0, &lm_h);
                let lj = ctx.lcm(&polys[j][0].0, &lm_h);
                li == p.lcm || lj == p.lcm
            }
        });
        pairs.extend(fresh);
        // Drop basis elements whose leading monomial h divides.
        let mut a = 0;
        while a < self.active.len() {
            if lm_h.divides(&self.active_lm[a]) {
                self.active.remove(a);
                self.active_lm.remove(a);
            } else {
                a += 1;
            }
        }
        self.active.push(h);
        self.active_lm.push(lm_h);
    }

    /// Runs Buchberger's algorithm; returns the reduced basis, ascending by leading monomial.
    pub fn run(&mut self, inputs: Vec<Vec<Term<A::C>>>) -> Result<Vec<Vec<Term<A::C>>>> {
        let mut pairs: Vec<Pair> = Vec::new();
        let mut input_store = Vec::new();
        for (i, mut p) in inputs.into_iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            self.ar.normalize(&mut p);
            let sugar = p.iter().map(|(m, _)| m.deg).max().unwrap();
            pairs.push(Pair {
                sugar,
                lcm: p[0].0,
                kind: PairKind::Input(i),
            });
            input_store.push((i, p));
        }
        while !pairs.is_empty() {
            self.check_time()?;
            let best = (0..pairs.len())
                .min_by(|&a, &b| pairs[a].key().cmp(&pairs[b].key()))
                .unwrap();
            let pair = pairs.swap_remove(best);
            let (asc, mut sugar) = match pair.kind {
                PairKind::Input(i) => {
                    let pos = input_store.iter().position(|(k, _)| *k == i).unwrap();
                    let (_, p) = input_store.swap_remove(pos);
                    (p.into_iter().rev().collect::<Vec<_>>(), pair.sugar)
                }
                PairKind::S(i, j) => (self.spoly(i, j, &pair.lcm), pair.sugar),
            };
            self.stats.pairs_reduced += 1;
            let mut h = self.reduce(asc, &mut sugar, false, None)?;
            if h.is_empty() {
                self.stats.zero_reductions += 1;
                continue;
            }
            self.ar.normalize(&mut h);
            if h[0].0.is_one() {
                let idx = self.push_poly(h, sugar);
                self.active = vec![idx];
                self.active_lm = vec![Mono::one()];
                break;
            }
            let idx = self.push_poly(h, sugar);
            self.update(idx, &mut pairs);
        }
        self.interreduce()
    }

    fn interreduce(&mut self) -> Result<Vec<Vec<Term<A::C>>>> {
        let mut order: Vec<usize> = self.active.clone();
        order.sort_by(|&a, &b| self.polys[a][0].0.cmp(&self.polys[b][0].0));
        let mut out = Vec::with_capacity(order.len());
        // Tail terms of an element only have reducers with smaller leading
        // monomials, which are already reduced when processed in ascending order.
        for &k in &order {
            let slot = self.active.iter().position(|&a| a == k).unwrap();
            let saved = (self.active.remove(slot), self.active_lm.remove(slot));
            let asc: Vec<_> = self.polys[k].iter().rev().cloned().collect();
            let mut sugar = 0;
            let mut done = self.reduce(asc, &mut sugar, false, None)?;
            self.active.insert(slot, saved.0);
            self.active_lm.insert(slot, saved.1);
            self.ar.normalize(&mut done);
            self.polys[k] = done.clone();
            out.push(done);
        }
        self.stats.basis_size = out.len();
        Ok(out)
    }

    /// Installs an already-known basis (e.g. for normal forms).
    pub fn load_basis(&mut self, basis: Vec<Vec<Term<A::C>>>) {
        for mut p in basis {
            if p.is_empty() {
                continue;
            }
            self.ar.normalize(&mut p);
            let lm = p[0].0;
            let idx = self.push_poly(p, lm.deg);
            self.active.push(idx);
            self.active_lm.push(lm);
        }
    }

    /// Checks that `basis` is a Gröbner basis: inserts the elements with the same
    /// pair criteria as [`Engine::run`] and reduces every surviving S-polynomial.
    /// The elements are then installed as the active set.
    pub fn verify_basis(&mut self, basis: Vec<Vec<Term<A::C>>>) -> Result<bool> {
        let mut pairs = Vec::new();
        for mut p in basis {
            if p.is_empty() {
                continue;
            }
            self.ar.normalize(&mut p);
            let lm = p[0].0;
            let idx = self.push_poly(p, lm.deg);
            self.update(idx, &mut pairs);
        }
        pairs.sort_by_key(Pair::key);
        for pair in pairs {
            let PairKind::S(i, j) = pair.kind else { continue };
            let mut sugar = pair.sugar;
            let s = self.spoly(i, j, &pair.lcm);
            self.stats.pairs_reduced += 1;
            if !self.reduce(s, &mut sugar, true, None)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Full normal form of a descending polynomial; returns the remainder and the
    /// list of multipliers applied to the input.
    pub fn normal_form(&mut self, p: Vec<Term<A::C>>) -> Result<Reduction<A::C>> {
        let asc: Vec<_> = p.into_iter().rev().collect();
        let mut sugar = 0;
        let mut track = Vec::new();
        let rem = self.reduce(asc, &mut sugar, false, Some(&mut track))?;
        Ok((rem, track))
    }
}
