use crate::error::{Error, Result};
use crate::geometry::LatticeVector;

use super::rule::LocalRule;

/// Finite-support symbol assignment on ℤᵈ, stored row-major over the bounding
/// box of its support with a membership mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    dim: usize,
    lo: [i64; 3],
    extent: [usize; 3],
    mask: Vec<bool>,
    symbols: Vec<u8>,
}

impl Pattern {
    pub fn empty(dim: usize) -> Self {
        Pattern {
            dim,
            lo: [0; 3],
            extent: [0; 3],
            mask: Vec::new(),
            symbols: Vec::new(),
        }
    }

    /// Pattern on `support` with symbol `f(v)` at `v`.
    pub fn from_fn(dim: usize, support: &[LatticeVector], mut f: impl FnMut(LatticeVector) -> u8) -> Self {
        if support.is_empty() {
            return Self::empty(dim);
        }
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for i in 0..dim {
            lo[i] = support.iter().map(|v| v[i]).min().expect("nonempty");
            hi[i] = support.iter().map(|v| v[i]).max().expect("nonempty");
        }
        let mut extent = [1usize; 3];
        for i in 0..dim {
            extent[i] = (hi[i] - lo[i] + 1) as usize;
        }
        let size = extent.iter().product();
        let mut p = Pattern {
            dim,
            lo,
            extent,
            mask: vec![false; size],
            symbols: vec![0; size],
        };
        for &v in support {
            let k = p.offset(v).expect("inside bounding box");
            p.mask[k] = true;
            p.symbols[k] = f(v);
        }
        p
    }

    /// Pattern from explicit `(position, symbol)` pairs.
    pub fn from_cells(dim: usize, cells: &[(LatticeVector, u8)]) -> Self {
        let support: Vec<LatticeVector> = cells.iter().map(|c| c.0).collect();
        let mut it = cells.iter().map(|c| c.1);
        Self::from_fn(dim, &support, |_| it.next().expect("one symbol per cell"))
    }

    fn offset(&self, v: LatticeVector) -> Option<usize> {
        let mut k = 0usize;
        for i in 0..3 {
            let d = v.coords().get(i).copied().unwrap_or(0) - self.lo[i];
            if d < 0 || d as usize >= self.extent[i] {
                return None;
            }
            k = k * self.extent[i] + d as usize;
        }
        Some(k)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, v: LatticeVector) -> Option<u8> {
        let k = self.offset(v)?;
        self.mask[k].then(|| self.symbols[k])
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Support in lexicographic order.
    pub fn support(&self) -> Vec<LatticeVector> {
        self.cells().map(|c| c.0).collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = (LatticeVector, u8)> + '_ {
        let [_, e1, e2] = self.extent;
        (0..self.mask.len()).filter(|&k| self.mask[k]).map(move |k| {
            let c = [
                self.lo[0] + (k / (e1 * e2)) as i64,
                self.lo[1] + ((k / e2) % e1) as i64,
                self.lo[2] + (k % e2) as i64,
            ];
            (LatticeVector::new(&c[..self.dim]), self.symbols[k])
        })
    }

    pub fn translate(&self, v: LatticeVector) -> Pattern {
        let mut p = self.clone();
        for i in 0..self.dim {
            p.lo[i] += v[i];
        }
        p
    }

    /// Bounding box `(lo, hi)` of the support, `None` when empty.
    pub fn bounds(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let s = self.support();
        if s.is_empty() {
            return None;
        }
        let lo = (0..self.dim).map(|i| s.iter().map(|v| v[i]).min().unwrap()).collect();
        let hi = (0..self.dim).map(|i| s.iter().map(|v| v[i]).max().unwrap()).collect();
        Some((lo, hi))
    }
}

/// Lattice points of the box `[lo, hi]`, lexicographic.
pub(crate) fn box_points(lo: &[i64], hi: &[i64]) -> Vec<LatticeVector> {
    let d = lo.len();
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    if (0..d).any(|i| lo[i] > hi[i]) {
        return out;
    }
    loop {
        out.push(LatticeVector::new(&cur));
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for (k, c) in cur.iter_mut().enumerate().skip(i + 1) {
                    *c = lo[k];
                }
                break;
            }
        }
    }
}

/// Positions `j` whose window `j + I` meets the support box, i.e. the box
/// `[lo − max I, hi − min I]`.
pub(crate) fn candidate_box(rule: &LocalRule, x: &Pattern) -> Option<(Vec<i64>, Vec<i64>)> {
    let (lo, hi) = x.bounds()?;
    let d = rule.dim();
    let dom = rule.domain();
    if dom.is_empty() {
        return Some((lo, hi));
    }
    let min: Vec<i64> = (0..d).map(|i| dom.iter().map(|v| v[i]).min().unwrap()).collect();
    let max: Vec<i64> = (0..d).map(|i| dom.iter().map(|v| v[i]).max().unwrap()).collect();
    Some((
        (0..d).map(|i| lo[i] - max[i]).collect(),
        (0..d).map(|i| hi[i] - min[i]).collect(),
    ))
}

/// One step `(fx)_j = F(x|_{j+I})` on every `j` with `j + I ⊆ supp(x)`. A rule
/// with empty domain keeps the support and writes its constant.
pub fn local_apply(rule: &LocalRule, x: &Pattern) -> Pattern {
    let Some((lo, hi)) = candidate_box(rule, x) else {
        return Pattern::empty(rule.dim());
    };
    let dom = rule.domain();
    let mut window = vec![0u8; dom.len()];
    let mut cells = Vec::new();
    let candidates = if dom.is_empty() { x.support() } else { box_points(&lo, &hi) };
    'outer: for j in candidates {
        for (t, &i) in dom.iter().enumerate() {
            match x.get(j + i) {
                Some(s) => window[t] = s,
                None => continue 'outer,
            }
        }
        cells.push((j, rule.eval(&window)));
    }
    Pattern::from_cells(rule.dim(), &cells)
}

/// `(x, fx, …, f^k x)`; fails when a step leaves an empty pattern.
pub fn iterate(rule: &LocalRule, x: &Pattern, k: usize) -> Result<Vec<Pattern>> {
    let mut out = vec![x.clone()];
    for step in 1..=k {
        let next = local_apply(rule, out.last().expect("nonempty"));
        if next.is_empty() {
            return Err(Error::WindowExhausted { steps: step - 1 });
        }
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c)
    }

    fn line(bits: &[u8]) -> Pattern {
        let cells: Vec<_> = bits.iter().enumerate().map(|(i, &b)| (lv(&[i as i64]), b)).collect();
        Pattern::from_cells(1, &cells)
    }

    #[test]
    fn xor_step() {
        let xor = LocalRule::algebraic(1, 2, &[(lv(&[0]), 1), (lv(&[1]), 1)]).unwrap();
        let out = local_apply(&xor, &line(&[0, 1, 1, 0]));
        let got: Vec<_> = out.cells().collect();
        assert_eq!(got, vec![(lv(&[0]), 1), (lv(&[1]), 0), (lv(&[2]), 1)]);
    }

    #[test]
    fn iterate_supports() {
        let xor = LocalRule::algebraic(1, 2, &[(lv(&[0]), 1), (lv(&[1]), 1)]).unwrap();
        let orbit = iterate(&xor, &line(&[1; 11]), 3).unwrap();
        let lens: Vec<usize> = orbit.iter().map(|p| p.len()).collect();
        assert_eq!(lens, vec![11, 10, 9, 8]);
        assert_eq!(iterate(&xor, &line(&[1; 2]), 0).unwrap().len(), 1);
        assert!(matches!(iterate(&xor, &line(&[1; 2]), 3), Err(Error::WindowExhausted { steps: 1 })));
    }

    #[test]
    fn shift_relabels() {
        let shift = LocalRule::shift(lv(&[1]), 2);
        let out = local_apply(&shift, &line(&[1, 0, 1]));
        let got: Vec<_> = out.cells().collect();
        assert_eq!(got, vec![(lv(&[-1]), 1), (lv(&[0]), 0), (lv(&[1]), 1)]);
    }

    #[test]
    fn box_enumeration() {
        let pts = box_points(&[0, -1], &[1, 0]);
        assert_eq!(pts, vec![lv(&[0, -1]), lv(&[0, 0]), lv(&[1, -1]), lv(&[1, 0])]);
    }
}
