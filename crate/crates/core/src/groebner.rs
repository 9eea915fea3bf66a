//! Buchberger's algorithm with the Gebauer-Moeller pair criteria.
//!
//! Bases are reduced and monic, so two generating sets of the same ideal
//! produce identical output under the same order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::{ArithError, Field};
use crate::poly::{Mono, Poly, MAX_VARS};

/// Monomial orders supported by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonomialOrder {
    GRevLex,
    Lex,
    /// Elimination order: the first `k` variables in grevlex dominate the rest in grevlex.
    Block(usize),
}

type Key = [i32; MAX_VARS + 2];

impl MonomialOrder {
    fn key(&self, m: &Mono, n: usize) -> Key {
        let mut k = [0i32; MAX_VARS + 2];
        match *self {
            MonomialOrder::Lex => {
                for i in 0..n {
                    k[i] = m.get(i) as i32;
                }
            }
            MonomialOrder::GRevLex => {
                k[0] = (0..n).map(|i| m.get(i) as i32).sum();
                for i in 0..n {
                    k[1 + i] = -(m.get(n - 1 - i) as i32);
                }
            }
            MonomialOrder::Block(b) => {
                let b = b.min(n);
                k[0] = (0..b).map(|i| m.get(i) as i32).sum();
                for i in 0..b {
                    k[1 + i] = -(m.get(b - 1 - i) as i32);
                }
                k[1 + b] = (b..n).map(|i| m.get(i) as i32).sum();
                for i in 0..(n - b) {
                    k[2 + b + i] = -(m.get(n - 1 - i) as i32);
                }
            }
        }
        k
    }

    /// Compares two monomials in `n` variables.
    pub fn cmp(&self, a: &Mono, b: &Mono, n: usize) -> Ordering {
        self.key(a, n).cmp(&self.key(b, n))
    }
}

/// Terms sorted by decreasing monomial, leading coefficient one.
#[derive(Clone, Debug)]
struct SPoly<F> {
    terms: Vec<(Mono, F)>,
}

impl<F: Field> SPoly<F> {
    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }
}

struct Engine {
    order: MonomialOrder,
    nvars: usize,
    trunc: Option<u32>,
}

impl Engine {
    fn to_sorted<F: Field>(&self, p: &Poly<F>) -> Result<Option<SPoly<F>>, ArithError> {
        let mut v: Vec<(Key, Mono, F)> = p
            .terms()
            .filter(|(m, _)| self.keep(m))
            .map(|(m, c)| (self.order.key(m, self.nvars), *m, c.clone()))
            .collect();
        if v.is_empty() {
            return Ok(None);
        }
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let inv = v[0].2.inverse()?;
        Ok(Some(SPoly {
            terms: v.into_iter().map(|(_, m, c)| (m, c.times(&inv))).collect(),
        }))
    }

    fn keep(&self, m: &Mono) -> bool {
        self.trunc.map_or(true, |n| m.deg() < n)
    }

    /// Full reduction of `work` modulo `basis`; returns a monic remainder.
    fn reduce<F: Field>(
        &self,
        work: BTreeMap<Key, (Mono, F)>,
        basis: &[&SPoly<F>],
    ) -> Result<Option<SPoly<F>>, ArithError> {
        let mut out = reduce_raw(self, work, basis)?;
        if out.is_empty() {
            return Ok(None);
        }
        let inv = out[0].1.inverse()?;
        for t in out.iter_mut() {
            t.1 = t.1.times(&inv);
        }
        Ok(Some(SPoly { terms: out }))
    }

    fn map_of<F: Field>(&self, p: &SPoly<F>, mult: &Mono, scale: &F) -> BTreeMap<Key, (Mono, F)> {
        let mut w = BTreeMap::new();
        for (m, c) in &p.terms {
            let mm = m.mul(mult);
            if self.keep(&mm) {
                w.insert(self.order.key(&mm, self.nvars), (mm, c.times(scale)));
            }
        }
        w
    }

    fn spoly<F: Field>(&self, a: &SPoly<F>, b: &SPoly<F>) -> BTreeMap<Key, (Mono, F)> {
        let l = a.lm().lcm(b.lm());
        let mut w = self.map_of(a, &a.lm().quotient_of(&l), &F::one());
        for (m, c) in &b.terms {
            let mm = m.mul(&b.lm().quotient_of(&l));
            if !self.keep(&mm) {
                continue;
            }
            let k = self.order.key(&mm, self.nvars);
            let delta = c.negate();
            match w.get_mut(&k) {
                Some(e) => {
                    e.1 = e.1.plus(&delta);
                    if e.1.is_zero() {
                        w.remove(&k);
                    }
                }
                None => {
                    w.insert(k, (mm, delta));
                }
            }
        }
        w
    }

    fn run<F: Field>(&self, gens: &[Poly<F>]) -> Result<Vec<SPoly<F>>, ArithError> {
        // all polynomials ever added; `live` indexes the current basis
        let mut all: Vec<SPoly<F>> = Vec::new();
        let mut live: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize, Mono)> = Vec::new();

        // the generators of m^n go in first, so dropping terms of degree >= n
        // during reduction is reduction by basis elements
        if let Some(n) = self.trunc {
            for m in monomials_of_degree(self.nvars, n) {
                let h = SPoly {
                    terms: vec![(m, F::one())],
                };
                self.update(&mut all, &mut live, &mut pairs, h);
            }
        }
        let mut input: Vec<SPoly<F>> = Vec::new();
        for g in gens {
            if let Some(s) = self.to_sorted(g)? {
                input.push(s);
            }
        }
        input.sort_by(|a, b| self.order.cmp(a.lm(), b.lm(), self.nvars));

        for s in input {
            let cur: Vec<&SPoly<F>> = live.iter().map(|&i| &all[i]).collect();
            let w = self.map_of(&s, &Mono::one(), &F::one());
            if let Some(h) = self.reduce(w, &cur)? {
                self.update(&mut all, &mut live, &mut pairs, h);
            }
        }

        while !pairs.is_empty() {
            // normal strategy: smallest lcm first
            let (pos, _) = pairs
                .iter()
                .enumerate()
                .min_by(|a, b| self.order.cmp(&a.1 .2, &b.1 .2, self.nvars))
                .unwrap();
            let (i, j, _) = pairs.swap_remove(pos);
            let w = self.spoly(&all[i], &all[j]);
            let cur: Vec<&SPoly<F>> = live.iter().map(|&k| &all[k]).collect();
            if let Some(h) = self.reduce(w, &cur)? {
                if h.lm().deg() == 0 {
                    return Ok(vec![h]);
                }
                self.update(&mut all, &mut live, &mut pairs, h);
            }
        }

        // reduced basis
        let mut basis: Vec<SPoly<F>> = live.iter().map(|&i| all[i].clone()).collect();
        basis.sort_by(|a, b| self.order.cmp(a.lm(), b.lm(), self.nvars));
        let mut minimal: Vec<SPoly<F>> = Vec::new();
        for g in basis {
            if !minimal.iter().any(|h| h.lm().divides(g.lm())) {
                minimal.push(g);
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<&SPoly<F>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g)
                .collect();
            let g = &minimal[i];
            let mut w = BTreeMap::new();
            for (m, c) in g.terms.iter().skip(1) {
                w.insert(self.order.key(m, self.nvars), (*m, c.clone()));
            }
            let tail = reduce_raw(self, w, &others)?;
            let mut terms = vec![g.terms[0].clone()];
            terms.extend(tail);
            reduced.push(SPoly { terms });
        }
        Ok(reduced)
    }

    fn update<F: Field>(
        &self,
        all: &mut Vec<SPoly<F>>,
        live: &mut Vec<usize>,
        pairs: &mut Vec<(usize, usize, Mono)>,
        h: SPoly<F>,
    ) {
        let hi = all.len();
        let hl = *h.lm();
        all.push(h);

        let mut c: Vec<(usize, Mono)> = live.iter().map(|&g| (g, hl.lcm(all[g].lm()))).collect();
        let mut d: Vec<(usize, Mono)> = Vec::new();
        while let Some((g1, l1)) = c.pop() {
            let coprime = hl.coprime(all[g1].lm());
            let dominated = c.iter().chain(d.iter()).any(|(_, l2)| l2.divides(&l1));
            if coprime || !dominated {
                d.push((g1, l1));
            }
        }
        let h_mono = all[hi].terms.len() == 1;
        let e: Vec<(usize, usize, Mono)> = d
            .into_iter()
            .filter(|(g, _)| !hl.coprime(all[*g].lm()))
            .filter(|(g, _)| !(h_mono && all[*g].terms.len() == 1))
            .map(|(g, l)| (g, hi, l))
            .collect();
        pairs.retain(|(g1, g2, l)| {
            !(hl.divides(l) && hl.lcm(all[*g1].lm()) != *l && hl.lcm(all[*g2].lm()) != *l)
        });
        pairs.extend(e);
        live.retain(|&g| !hl.divides(all[g].lm()));
        live.push(hi);
    }
}

/// All monomials of total degree `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = [0u16; MAX_VARS];
    fn rec(i: usize, n: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(Mono(*cur));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, n, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if n == 0 {
        if d == 0 {
            out.push(Mono::one());
        }
        return out;
    }
    rec(0, n, d, &mut cur, &mut out);
    out
}

/// A reduced Groebner basis together with its order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F> {
    pub order: MonomialOrder,
    pub nvars: usize,
    trunc: Option<u32>,
    elems: Vec<SPoly<F>>,
}

/// Dimension of a quotient ring as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn polys(&self) -> Vec<Poly<F>> {
        self.elems
            .iter()
            .map(|s| Poly::from_terms(self.nvars, s.terms.iter().cloned()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.elems.iter().map(|s| *s.lm()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.elems.len() == 1 && self.elems[0].lm().deg() == 0
    }

    /// Normal form of `p` (not normalized).
    pub fn reduce(&self, p: &Poly<F>) -> Result<Poly<F>, ArithError> {
        let eng = Engine {
            order: self.order,
            nvars: self.nvars,
            trunc: self.trunc,
        };
        let mut w = BTreeMap::new();
        for (m, c) in p.terms() {
            if eng.keep(m) {
                w.insert(self.order.key(m, self.nvars), (*m, c.clone()));
            }
        }
        let refs: Vec<&SPoly<F>> = self.elems.iter().collect();
        let r = reduce_raw(&eng, w, &refs)?;
        Ok(Poly::from_terms(self.nvars, r))
    }

    pub fn contains(&self, p: &Poly<F>) -> Result<bool, ArithError> {
        Ok(self.reduce(p)?.is_zero())
    }

    /// Counts standard monomials; infinite when the ideal is not zero-dimensional.
    pub fn quotient_dim(&self) -> QuotientDim {
        if self.is_unit() {
            return QuotientDim::Finite(0);
        }
        let lms = self.leading_monomials();
        let mut bounds = vec![0u16; self.nvars];
        for i in 0..self.nvars {
            let pure = lms
                .iter()
                .filter(|m| (0..self.nvars).all(|j| j == i || m.get(j) == 0))
                .map(|m| m.get(i))
                .min();
            match pure {
                Some(e) if e > 0 => bounds[i] = e,
                _ => return QuotientDim::Infinite,
            }
        }
        let mut count = 0usize;
        let mut cur = [0u16; MAX_VARS];
        fn rec(
            i: usize,
            n: usize,
            bounds: &[u16],
            cur: &mut [u16; MAX_VARS],
            lms: &[Mono],
            count: &mut usize,
        ) {
            if i == n {
                let m = Mono(*cur);
                if !lms.iter().any(|l| l.divides(&m)) {
                    *count += 1;
                }
                return;
            }
            for e in 0..bounds[i] {
                cur[i] = e;
                // prune: if already divisible, larger exponents stay divisible
                let m = Mono(*cur);
                if lms.iter().any(|l| l.divides(&m)) {
                    break;
                }
                rec(i + 1, n, bounds, cur, lms, count);
            }
            cur[i] = 0;
        }
        rec(0, self.nvars, &bounds, &mut cur, &lms, &mut count);
        QuotientDim::Finite(count)
    }
}

/// Reduction without normalizing; terms come out in decreasing order.
fn reduce_raw<F: Field>(
    eng: &Engine,
    mut work: BTreeMap<Key, (Mono, F)>,
    basis: &[&SPoly<F>],
) -> Result<Vec<(Mono, F)>, ArithError> {
    let mut out = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        if !eng.keep(&m) {
            continue;
        }
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = g.lm().quotient_of(&m);
                for (mg, cg) in g.terms.iter().skip(1) {
                    let mm = q.mul(mg);
                    if !eng.keep(&mm) {
                        continue;
                    }
                    let k = eng.order.key(&mm, eng.nvars);
                    let delta = c.times(cg).negate();
                    match work.get_mut(&k) {
                        Some(e) => {
                            e.1 = e.1.plus(&delta);
                            if e.1.is_zero() {
                                work.remove(&k);
                            }
                        }
                        None => {
                            work.insert(k, (mm, delta));
                        }
                    }
                }
            }
            None => out.push((m, c)),
        }
    }
    Ok(out)
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn groebner<F: Field>(
    gens: &[Poly<F>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<F>, ArithError> {
    groebner_impl(gens, order, None)
}

/// Reduced Groebner basis of `gens + m^n`, where `m` is the maximal ideal at the origin.
pub fn groebner_truncated<F: Field>(
    gens: &[Poly<F>],
    order: MonomialOrder,
    n: u32,
) -> Result<GroebnerBasis<F>, ArithError> {
    assert!(n >= 1);
    groebner_impl(gens, order, Some(n))
}

fn groebner_impl<F: Field>(
    gens: &[Poly<F>],
    order: MonomialOrder,
    trunc: Option<u32>,
) -> Result<GroebnerBasis<F>, ArithError> {
    let nvars = gens.iter().map(|g| g.nvars()).max().unwrap_or(0);
    let eng = Engine {
        order,
        nvars,
        trunc,
    };
    let elems = eng.run(gens)?;
    Ok(GroebnerBasis {
        order,
        nvars,
        trunc,
        elems,
    })
}

/// Vector space dimension of `Q[x]/I`.
pub fn quotient_dim<F: Field>(gens: &[Poly<F>]) -> Result<QuotientDim, ArithError> {
    Ok(groebner(gens, MonomialOrder::GRevLex)?.quotient_dim())
}

/// Generators of the elimination ideal `I ∩ Q[x_k, ..., x_{n-1}]`.
pub fn eliminate<F: Field>(gens: &[Poly<F>], k: usize) -> Result<Vec<Poly<F>>, ArithError> {
    let gb = groebner(gens, MonomialOrder::Block(k))?;
    Ok(gb
        .polys()
        .into_iter()
        .filter(|p| p.terms().all(|(m, _)| (0..k).all(|i| m.get(i) == 0)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn v(n: usize, i: usize) -> Poly<Rat> {
        Poly::var(n, i)
    }

    fn c(n: usize, k: i64) -> Poly<Rat> {
        Poly::constant(n, Rat::from_int(k))
    }

    #[test]
    fn grevlex_ordering() {
        let o = MonomialOrder::GRevLex;
        let a = Mono::from_exps(&[1, 0, 1]);
        let b = Mono::from_exps(&[0, 2, 0]);
        // x0 x2 < x1^2 in grevlex
        assert_eq!(o.cmp(&a, &b, 3), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&a, &b, 3), Ordering::Greater);
    }

    #[test]
    fn two_point_ideal() {
        // x^2 - 1, y - x: two points
        let g = [v(2, 0).pow(2).minus(&c(2, 1)), v(2, 1).minus(&v(2, 0))];
        assert_eq!(quotient_dim(&g).unwrap(), QuotientDim::Finite(2));
    }

    #[test]
    fn elimination_keeps_suffix() {
        // <x - t, y - t^2> eliminate x: y - t^2 with variables (x, y, t)
        let x = v(3, 0);
        let y = v(3, 1);
        let t = v(3, 2);
        let e = eliminate(&[x.minus(&t), y.minus(&t.pow(2))], 1).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e[0] == y.minus(&t.pow(2)) || e[0] == t.pow(2).minus(&y));
    }

    #[test]
    fn unit_ideal() {
        let g = [v(2, 0), v(2, 0).plus(&c(2, 1))];
        let gb = groebner(&g, MonomialOrder::GRevLex).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.quotient_dim(), QuotientDim::Finite(0));
    }

    #[test]
    fn truncated_local_algebra() {
        // x^2 + y^3: Jacobian (2x, 3y^2) has local dimension 2
        let f = v(2, 0).pow(2).plus(&v(2, 1).pow(3));
        let gb = groebner_truncated(&f.gradient(), MonomialOrder::GRevLex, 6).unwrap();
        assert_eq!(gb.quotient_dim(), QuotientDim::Finite(2));
    }

    #[test]
    fn infinite_quotient() {
        let g = [v(3, 0).times(&v(3, 1))];
        assert_eq!(quotient_dim(&g).unwrap(), QuotientDim::Infinite);
    }
}
