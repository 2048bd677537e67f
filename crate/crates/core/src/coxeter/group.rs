use std::collections::{HashMap, VecDeque};

use super::field::CosineRing;
use super::{CoxeterDatum, CoxeterError, CoxeterType, Elem};

/// Groups up to this order get a full multiplication table and a stored Bruhat table.
pub const TABLE_LIMIT: usize = 1200;
/// Refuse to enumerate anything larger.
pub const ENUMERATION_LIMIT: u64 = 100_000;

/// An enumerated finite Coxeter group with a weight function. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    datum: CoxeterDatum,
    types: Vec<CoxeterType>,
    rank: usize,
    size: usize,
    length: Vec<u32>,
    weight: Vec<u32>,
    /// `left[w * rank + s] = s w`
    left: Vec<Elem>,
    /// `right[w * rank + s] = w s`
    right: Vec<Elem>,
    left_desc: Vec<u64>,
    right_desc: Vec<u64>,
    inverse: Vec<Elem>,
    words: Vec<Vec<u8>>,
    generators: Vec<Elem>,
    w0: Elem,
    sigma: Vec<Elem>,
    sigma_gen: Vec<usize>,
    products: Option<Vec<Elem>>,
    bruhat: Option<Vec<Vec<u64>>>,
}

type Matrix = Vec<i64>;

struct Geometric {
    ring: CosineRing,
    rank: usize,
    deg: usize,
}

impl Geometric {
    fn entry<'a>(&self, m: &'a [i64], i: usize, j: usize) -> &'a [i64] {
        let k = (i * self.rank + j) * self.deg;
        &m[k..k + self.deg]
    }

    fn identity(&self) -> Matrix {
        let mut m = vec![0; self.rank * self.rank * self.deg];
        let one = self.ring.from_int(1);
        for i in 0..self.rank {
            let k = (i * self.rank + i) * self.deg;
            m[k..k + self.deg].copy_from_slice(&one);
        }
        m
    }

    /// Reflection `s(a_t) = a_t + 2cos(pi/m_st) a_s` in the basis of simple roots.
    fn reflection(&self, matrix: &[Vec<usize>], s: usize) -> Matrix {
        let mut m = self.identity();
        for (t, &m_st) in matrix[s].iter().enumerate() {
            let val = if t == s { self.ring.from_int(-1) } else { self.ring.two_cos_pi_over(m_st) };
            let k = (s * self.rank + t) * self.deg;
            m[k..k + self.deg].copy_from_slice(&val);
        }
        m
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Matrix {
        let mut out = vec![0; self.rank * self.rank * self.deg];
        for i in 0..self.rank {
            for k in 0..self.rank {
                let mut acc = self.ring.zero();
                for j in 0..self.rank {
                    let x = self.entry(a, i, j);
                    if x.iter().all(|&c| c == 0) {
                        continue;
                    }
                    let prod = self.ring.mul(x, self.entry(b, j, k));
                    acc = self.ring.add(&acc, &prod);
                }
                let o = (i * self.rank + k) * self.deg;
                out[o..o + self.deg].copy_from_slice(&acc);
            }
        }
        out
    }
}

impl CoxeterGroup {
    pub fn new(datum: CoxeterDatum) -> Result<Self, CoxeterError> {
        let types = datum.validate()?;
        let order: u64 = types.iter().map(CoxeterType::order).product();
        if order > ENUMERATION_LIMIT {
            return Err(CoxeterError::TooLarge(order));
        }
        let rank = datum.rank();
        let orders = datum.matrix.iter().flatten().copied().filter(|&m| m >= 2);
        let ring = CosineRing::for_orders(orders);
        let geo = Geometric { deg: ring.degree(), ring, rank };
        let gens: Vec<Matrix> = (0..rank).map(|s| geo.reflection(&datum.matrix, s)).collect();

        // breadth-first enumeration by left multiplication; BFS depth is the length
        let mut mats: Vec<Matrix> = vec![geo.identity()];
        let mut index: HashMap<Matrix, usize> = HashMap::new();
        index.insert(mats[0].clone(), 0);
        let mut bfs_len = vec![0u32];
        let mut bfs_left: Vec<Vec<usize>> = vec![vec![usize::MAX; rank]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for s in 0..rank {
                let prod = geo.mul(&gens[s], &mats[w]);
                let id = match index.get(&prod) {
                    Some(&id) => id,
                    None => {
                        let id = mats.len();
                        if id as u64 >= order {
                            return Err(CoxeterError::InfiniteGroup("enumeration exceeded the expected order".into()));
                        }
                        index.insert(prod.clone(), id);
                        mats.push(prod);
                        bfs_len.push(bfs_len[w] + 1);
                        bfs_left.push(vec![usize::MAX; rank]);
                        queue.push_back(id);
                        id
                    }
                };
                bfs_left[w][s] = id;
            }
        }
        let size = mats.len();
        if size as u64 != order {
            return Err(CoxeterError::InfiniteGroup(format!("enumerated {size} elements, expected {order}")));
        }
        let bfs_right: Vec<Vec<usize>> =
            mats.iter().map(|m| (0..rank).map(|s| index[&geo.mul(m, &gens[s])]).collect()).collect();

        // canonical words: least left descent followed by the word of the remainder
        let mut bfs_words: Vec<Vec<u8>> = vec![Vec::new(); size];
        for w in 0..size {
            if bfs_len[w] == 0 {
                continue;
            }
            let s = (0..rank).find(|&s| bfs_len[bfs_left[w][s]] < bfs_len[w]).unwrap();
            let mut word = vec![s as u8];
            word.extend_from_slice(&bfs_words[bfs_left[w][s]]);
            bfs_words[w] = word;
        }
        let mut order_ids: Vec<usize> = (0..size).collect();
        order_ids.sort_by(|&a, &b| (bfs_len[a], &bfs_words[a]).cmp(&(bfs_len[b], &bfs_words[b])));
        let mut new_id = vec![0usize; size];
        for (pos, &old) in order_ids.iter().enumerate() {
            new_id[old] = pos;
        }
        let remap = |old: usize| Elem(new_id[old] as u32);

        let mut left = vec![Elem(0); size * rank];
        let mut right = vec![Elem(0); size * rank];
        let mut length = vec![0; size];
        let mut words = vec![Vec::new(); size];
        for old in 0..size {
            let w = new_id[old];
            length[w] = bfs_len[old];
            words[w] = std::mem::take(&mut bfs_words[old]);
            for s in 0..rank {
                left[w * rank + s] = remap(bfs_left[old][s]);
                right[w * rank + s] = remap(bfs_right[old][s]);
            }
        }
        let weight: Vec<u32> = words.iter().map(|w| w.iter().map(|&s| datum.weights[s as usize]).sum()).collect();
        let mut left_desc = vec![0u64; size];
        let mut right_desc = vec![0u64; size];
        for w in 0..size {
            for s in 0..rank {
                if length[left[w * rank + s].index()] < length[w] {
                    left_desc[w] |= 1 << s;
                }
                if length[right[w * rank + s].index()] < length[w] {
                    right_desc[w] |= 1 << s;
                }
            }
        }
        let generators: Vec<Elem> = (0..rank).map(|s| left[s]).collect();
        let mut group = CoxeterGroup {
            datum,
            types,
            rank,
            size,
            length,
            weight,
            left,
            right,
            left_desc,
            right_desc,
            inverse: Vec::new(),
            words,
            generators,
            w0: Elem(size as u32 - 1),
            sigma: Vec::new(),
            sigma_gen: Vec::new(),
            products: None,
            bruhat: None,
        };
        group.inverse = (0..size)
            .map(|w| group.words[w].iter().fold(Elem::IDENTITY, |g, &s| group.left_mul(s as usize, g)))
            .collect();
        if size <= TABLE_LIMIT {
            group.products = Some(group.build_product_table());
            group.bruhat = Some(group.build_bruhat_table());
        }
        let top = group.length[size - 1];
        debug_assert_eq!(group.length.iter().filter(|&&l| l == top).count(), 1);
        let w0 = group.w0;
        group.sigma = (0..size).map(|w| group.product(group.product(w0, Elem(w as u32)), w0)).collect();
        group.sigma_gen = (0..rank)
            .map(|s| {
                let img = group.sigma[group.generators[s].index()];
                group.generators.iter().position(|&g| g == img).expect("sigma preserves S")
            })
            .collect();
        Ok(group)
    }

    fn build_product_table(&self) -> Vec<Elem> {
        let n = self.size;
        let mut table = vec![Elem(0); n * n];
        for x in 0..n {
            table[x * n] = Elem(x as u32);
            for y in 1..n {
                let word = &self.words[y];
                let last = *word.last().unwrap() as usize;
                let prefix = self.right_mul(Elem(y as u32), last);
                let xp = table[x * n + prefix.index()];
                table[x * n + y] = self.right_mul(xp, last);
            }
        }
        table
    }

    /// Row `w` holds `{x : x <= w}`, built from: if `sw < w` then
    /// `x <= w` iff `min(x, sx) <= sw`.
    fn build_bruhat_table(&self) -> Vec<Vec<u64>> {
        let n = self.size;
        let blocks = n.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
        for w in 0..n {
            let mut row = vec![0u64; blocks];
            if w == 0 {
                row[0] = 1;
            } else {
                let s = self.words[w][0] as usize;
                let sw = self.left_mul(s, Elem(w as u32)).index();
                for x in 0..n {
                    let sx = self.left_mul(s, Elem(x as u32)).index();
                    let m = x.min(sx);
                    if rows[sw][m / 64] >> (m % 64) & 1 == 1 {
                        row[x / 64] |= 1 << (x % 64);
                    }
                }
            }
            rows.push(row);
        }
        rows
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn types(&self) -> &[CoxeterType] {
        &self.types
    }

    pub fn type_name(&self) -> String {
        self.types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("x")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator {
        (0..self.size as u32).map(Elem)
    }

    pub fn generator(&self, s: usize) -> Elem {
        self.generators[s]
    }

    pub fn length(&self, w: Elem) -> u32 {
        self.length[w.index()]
    }

    /// The weight function `L(w)`.
    pub fn weight(&self, w: Elem) -> u32 {
        self.weight[w.index()]
    }

    pub fn generator_weight(&self, s: usize) -> u32 {
        self.datum.weights[s]
    }

    #[inline]
    pub fn left_mul(&self, s: usize, w: Elem) -> Elem {
        self.left[w.index() * self.rank + s]
    }

    #[inline]
    pub fn right_mul(&self, w: Elem, s: usize) -> Elem {
        self.right[w.index() * self.rank + s]
    }

    pub fn left_descents(&self, w: Elem) -> u64 {
        self.left_desc[w.index()]
    }

    pub fn right_descents(&self, w: Elem) -> u64 {
        self.right_desc[w.index()]
    }

    #[inline]
    pub fn is_left_descent(&self, s: usize, w: Elem) -> bool {
        self.left_desc[w.index()] >> s & 1 == 1
    }

    #[inline]
    pub fn is_right_descent(&self, w: Elem, s: usize) -> bool {
        self.right_desc[w.index()] >> s & 1 == 1
    }

    pub fn inverse(&self, w: Elem) -> Elem {
        self.inverse[w.index()]
    }

    pub fn is_involution(&self, w: Elem) -> bool {
        self.inverse(w) == w
    }

    pub fn product(&self, x: Elem, y: Elem) -> Elem {
        match &self.products {
            Some(t) => t[x.index() * self.size + y.index()],
            None => self.words[y.index()].iter().fold(x, |g, &s| self.right_mul(g, s as usize)),
        }
    }

    pub fn w0(&self) -> Elem {
        self.w0
    }

    /// `w0 w w0`.
    pub fn sigma(&self, w: Elem) -> Elem {
        self.sigma[w.index()]
    }

    pub fn sigma_generator(&self, s: usize) -> usize {
        self.sigma_gen[s]
    }

    /// Lexicographically least reduced word, 0-based generator indices.
    pub fn word(&self, w: Elem) -> &[u8] {
        &self.words[w.index()]
    }

    /// Dotted 1-based word, `""` for the identity.
    pub fn name(&self, w: Elem) -> String {
        self.words[w.index()].iter().map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(".")
    }

    /// Product of an arbitrary (not necessarily reduced) word of 0-based generators.
    pub fn element_from_word(&self, word: &[usize]) -> Result<Elem, CoxeterError> {
        word.iter().try_fold(Elem::IDENTITY, |g, &s| {
            if s >= self.rank {
                Err(CoxeterError::InvalidElement(format!("generator {} out of range", s + 1)))
            } else {
                Ok(self.right_mul(g, s))
            }
        })
    }

    /// Parses a dotted 1-based word such as `"1.2.1"`; `""` or `"e"` is the identity.
    pub fn parse_name(&self, name: &str) -> Result<Elem, CoxeterError> {
        let name = name.trim();
        if name.is_empty() || name == "e" {
            return Ok(Elem::IDENTITY);
        }
        let word: Vec<usize> = name
            .split('.')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(s) if s >= 1 => Ok(s - 1),
                _ => Err(CoxeterError::InvalidElement(format!("bad word {name:?}"))),
            })
            .collect::<Result<_, _>>()?;
        self.element_from_word(&word)
    }

    pub fn bruhat_leq(&self, x: Elem, w: Elem) -> bool {
        if let Some(rows) = &self.bruhat {
            let xi = x.index();
            return rows[w.index()][xi / 64] >> (xi % 64) & 1 == 1;
        }
        let (mut x, mut w) = (x, w);
        loop {
            if x == w {
                return true;
            }
            if self.length(x) >= self.length(w) {
                return false;
            }
            let s = self.words[w.index()][0] as usize;
            let sx = self.left_mul(s, x);
            x = if self.length(sx) < self.length(x) { sx } else { x };
            w = self.left_mul(s, w);
        }
    }

    /// `{y : y <= x}` in increasing element order.
    pub fn lower_interval(&self, x: Elem) -> Vec<Elem> {
        match &self.bruhat {
            Some(rows) => {
                let row = &rows[x.index()];
                (0..=x.index()).filter(|&y| row[y / 64] >> (y % 64) & 1 == 1).map(|y| Elem(y as u32)).collect()
            }
            None => (0..=x.0).map(Elem).filter(|&y| self.bruhat_leq(y, x)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> CoxeterGroup {
        CoxeterGroup::new(CoxeterDatum::equal_parameters(name).unwrap()).unwrap()
    }

    /// Independent word-problem oracle for type A: permutations of {0..n}.
    fn perm_of_word(n: usize, word: &[u8]) -> Vec<usize> {
        let mut p: Vec<usize> = (0..=n).collect();
        for &s in word {
            p.swap(s as usize, s as usize + 1);
        }
        p
    }

    #[test]
    fn a1() {
        let g = group("A1");
        assert_eq!(g.size(), 2);
        assert_eq!(g.w0(), g.generator(0));
        assert_eq!(g.sigma(g.w0()), g.w0());
        assert_eq!(g.sigma_generator(0), 0);
    }

    #[test]
    fn a2_basics() {
        let g = group("A2");
        assert_eq!(g.size(), 6);
        assert_eq!(g.length(g.w0()), 3);
        assert_eq!(g.sigma_generator(0), 1);
        let s1 = g.parse_name("1").unwrap();
        let s2s1 = g.parse_name("2.1").unwrap();
        assert_eq!(g.product(s1, s2s1), g.w0());
        assert_eq!(g.name(g.w0()), "1.2.1");
        assert_eq!(g.name(Elem::IDENTITY), "");
        assert!(g.bruhat_leq(s1, g.parse_name("1.2").unwrap()));
        assert!(!g.bruhat_leq(s1, g.generator(1)));
        // elements sorted by length then word
        let names: Vec<String> = g.elements().map(|w| g.name(w)).collect();
        assert_eq!(names, ["", "1", "2", "1.2", "2.1", "1.2.1"]);
    }

    #[test]
    fn b2_basics() {
        let g = group("B2");
        assert_eq!(g.size(), 8);
        assert_eq!(g.length(g.w0()), 4);
        assert!(g.elements().all(|w| g.sigma(w) == w));
    }

    #[test]
    fn orders_of_named_types() {
        for (name, order) in
            [("A3", 24), ("B3", 48), ("D4", 192), ("H3", 120), ("G2", 12), ("I2(7)", 14), ("F4", 1152), ("A1xA2", 12)]
        {
            let g = group(name);
            assert_eq!(g.size(), order, "{name}");
            let top = g.length(g.w0()) as usize;
            // symmetric length generating function
            let mut counts = vec![0usize; top + 1];
            g.elements().for_each(|w| counts[g.length(w) as usize] += 1);
            let mut rev = counts.clone();
            rev.reverse();
            assert_eq!(counts, rev, "{name}");
            assert_eq!(counts[top], 1);
        }
    }

    #[test]
    fn group_laws() {
        for name in ["A3", "B3", "H3", "I2(5)"] {
            let g = group(name);
            let w0 = g.w0();
            assert_eq!(g.product(w0, w0), Elem::IDENTITY);
            for x in g.elements() {
                assert_eq!(g.product(Elem::IDENTITY, x), x);
                assert_eq!(g.product(x, g.inverse(x)), Elem::IDENTITY);
                assert_eq!(g.sigma(g.sigma(x)), x);
                assert_eq!(g.length(g.sigma(x)), g.length(x));
                assert_eq!(g.weight(g.sigma(x)), g.weight(x));
                assert_eq!(g.length(g.inverse(x)), g.length(x));
                for s in 0..g.rank() {
                    let sx = g.left_mul(s, x);
                    assert_eq!(g.length(sx).abs_diff(g.length(x)), 1);
                }
                for y in g.elements().step_by(7) {
                    assert_eq!(g.sigma(g.product(x, y)), g.product(g.sigma(x), g.sigma(y)));
                    for z in g.elements().step_by(11) {
                        assert_eq!(g.product(g.product(x, y), z), g.product(x, g.product(y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn type_a_matches_permutations() {
        let g = group("A3");
        let mut seen = std::collections::HashSet::new();
        for w in g.elements() {
            let p = perm_of_word(3, g.word(w));
            // inversion count equals length
            let inv = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(inv as u32, g.length(w));
            assert!(seen.insert(p));
        }
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.product(x, y);
                let mut word = g.word(x).to_vec();
                word.extend_from_slice(g.word(y));
                assert_eq!(perm_of_word(3, g.word(xy)), perm_of_word(3, &word));
            }
        }
    }

    /// Subword criterion oracle for the Bruhat order.
    fn subword_leq(g: &CoxeterGroup, x: Elem, w: Elem) -> bool {
        let word = g.word(w);
        let k = word.len();
        (0u32..1 << k).any(|mask| {
            let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| word[i] as usize).collect();
            g.element_from_word(&sub).unwrap() == x
        })
    }

    #[test]
    fn bruhat_matches_subword_criterion() {
        for name in ["A3", "B2", "I2(5)", "A1xA2"] {
            let g = group(name);
            for x in g.elements() {
                for w in g.elements() {
                    assert_eq!(g.bruhat_leq(x, w), subword_leq(&g, x, w), "{name} {} {}", g.name(x), g.name(w));
                }
            }
        }
    }

    #[test]
    fn weights_follow_words() {
        let g = CoxeterGroup::new(CoxeterDatum::from_type("B2", vec![2, 1]).unwrap()).unwrap();
        assert_eq!(g.weight(g.w0()), 6);
        assert_eq!(g.weight(g.parse_name("1.2").unwrap()), 3);
    }

    #[test]
    fn too_large_rejected() {
        let d = CoxeterDatum::equal_parameters("E8").unwrap();
        assert!(matches!(CoxeterGroup::new(d), Err(CoxeterError::TooLarge(_))));
    }
}
