//! Finite Coxeter types, their Coxeter matrices (Bourbaki labelling), and
//! classification of an arbitrary Coxeter matrix against the finite list.

use std::fmt;
use std::str::FromStr;

use super::CoxeterError;

/// An irreducible finite Coxeter type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    H(usize),
    /// Dihedral group of order `2m`.
    I2(usize),
}

impl CoxeterType {
    pub fn rank(&self) -> usize {
        match *self {
            CoxeterType::A(n) | CoxeterType::B(n) | CoxeterType::D(n) | CoxeterType::E(n) | CoxeterType::H(n) => n,
            CoxeterType::F4 => 4,
            CoxeterType::G2 | CoxeterType::I2(_) => 2,
        }
    }

    /// Group order.
    pub fn order(&self) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match *self {
            CoxeterType::A(n) => fact(n + 1),
            CoxeterType::B(n) => (1u64 << n) * fact(n),
            CoxeterType::D(n) => (1u64 << (n - 1)) * fact(n),
            CoxeterType::E(6) => 51_840,
            CoxeterType::E(7) => 2_903_040,
            CoxeterType::E(_) => 696_729_600,
            CoxeterType::F4 => 1152,
            CoxeterType::G2 => 12,
            CoxeterType::H(3) => 120,
            CoxeterType::H(_) => 14_400,
            CoxeterType::I2(m) => 2 * m as u64,
        }
    }

    fn validate(self) -> Result<Self, CoxeterError> {
        let ok = match self {
            CoxeterType::A(n) => n >= 1,
            CoxeterType::B(n) => n >= 2,
            CoxeterType::D(n) => n >= 4,
            CoxeterType::E(n) => (6..=8).contains(&n),
            CoxeterType::H(n) => n == 3 || n == 4,
            CoxeterType::I2(m) => m >= 2,
            CoxeterType::F4 | CoxeterType::G2 => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(CoxeterError::UnknownType(self.to_string()))
        }
    }

    /// Coxeter matrix with Bourbaki node numbering.
    pub fn matrix(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut m = vec![vec![2; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut bond = |i: usize, j: usize, v: usize| {
            m[i][j] = v;
            m[j][i] = v;
        };
        match *self {
            CoxeterType::A(n) => (1..n).for_each(|i| bond(i - 1, i, 3)),
            CoxeterType::B(n) => {
                (1..n - 1).for_each(|i| bond(i - 1, i, 3));
                bond(n - 2, n - 1, 4);
            }
            CoxeterType::D(n) => {
                (1..n - 1).for_each(|i| bond(i - 1, i, 3));
                bond(n - 3, n - 1, 3);
            }
            CoxeterType::E(n) => {
                bond(0, 2, 3);
                bond(1, 3, 3);
                (3..n).for_each(|i| bond(i - 1, i, 3));
            }
            CoxeterType::F4 => {
                bond(0, 1, 3);
                bond(1, 2, 4);
                bond(2, 3, 3);
            }
            CoxeterType::G2 => bond(0, 1, 6),
            CoxeterType::H(n) => {
                bond(0, 1, 5);
                (2..n).for_each(|i| bond(i - 1, i, 3));
            }
            CoxeterType::I2(m) => bond(0, 1, m),
        }
        m
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CoxeterType::A(n) => write!(f, "A{n}"),
            CoxeterType::B(n) => write!(f, "B{n}"),
            CoxeterType::D(n) => write!(f, "D{n}"),
            CoxeterType::E(n) => write!(f, "E{n}"),
            CoxeterType::F4 => write!(f, "F4"),
            CoxeterType::G2 => write!(f, "G2"),
            CoxeterType::H(n) => write!(f, "H{n}"),
            CoxeterType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = CoxeterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || CoxeterError::UnknownType(s.to_string());
        let upper = s.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("I2(") {
            let m = rest.strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            return CoxeterType::I2(m).validate();
        }
        let (letter, digits) = upper.split_at(upper.chars().next().ok_or_else(bad)?.len_utf8());
        let n: usize = digits.parse().map_err(|_| bad())?;
        let ty = match (letter, n) {
            ("A", n) => CoxeterType::A(n),
            ("B" | "C", n) => CoxeterType::B(n),
            ("D", n) => CoxeterType::D(n),
            ("E", n) => CoxeterType::E(n),
            ("F", 4) => CoxeterType::F4,
            ("G", 2) => CoxeterType::G2,
            ("H", n) => CoxeterType::H(n),
            _ => return Err(bad()),
        };
        ty.validate()
    }
}

/// Parses a possibly reducible type such as `A2` or `A1xB2` into a Coxeter matrix.
pub fn matrix_for_type_name(name: &str) -> Result<Vec<Vec<usize>>, CoxeterError> {
    let parts: Vec<CoxeterType> = name.split(['x', 'X', '*']).map(str::parse).collect::<Result<_, _>>()?;
    let rank: usize = parts.iter().map(CoxeterType::rank).sum();
    let mut m = vec![vec![2; rank]; rank];
    let mut offset = 0;
    for ty in parts {
        let block = ty.matrix();
        for (i, row) in block.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[offset + i][offset + j] = v;
            }
        }
        offset += ty.rank();
    }
    Ok(m)
}

/// Identifies the irreducible components of a validated Coxeter matrix, failing
/// with `InfiniteGroup` when some component is not of finite type.
pub fn classify(matrix: &[Vec<usize>]) -> Result<Vec<CoxeterType>, CoxeterError> {
    let n = matrix.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let s = comp[i];
            for t in 0..n {
                if !seen[t] && matrix[s][t] >= 3 {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(classify_component(matrix, &comp)?);
    }
    Ok(out)
}

fn classify_component(matrix: &[Vec<usize>], comp: &[usize]) -> Result<CoxeterType, CoxeterError> {
    let k = comp.len();
    let infinite = |why: &str| {
        CoxeterError::InfiniteGroup(format!("component {:?}: {why}", comp.iter().map(|s| s + 1).collect::<Vec<_>>()))
    };
    if k == 1 {
        return Ok(CoxeterType::A(1));
    }
    if k == 2 {
        return Ok(match matrix[comp[0]][comp[1]] {
            3 => CoxeterType::A(2),
            4 => CoxeterType::B(2),
            6 => CoxeterType::G2,
            m => CoxeterType::I2(m),
        });
    }
    let mut edges = Vec::new();
    for (a, &s) in comp.iter().enumerate() {
        for &t in &comp[a + 1..] {
            if matrix[s][t] >= 3 {
                edges.push((s, t, matrix[s][t]));
            }
        }
    }
    if edges.len() != k - 1 {
        return Err(infinite("Coxeter graph contains a cycle"));
    }
    if edges.iter().any(|e| e.2 >= 6) {
        return Err(infinite("edge label >= 6 in rank >= 3"));
    }
    let degree = |s: usize| edges.iter().filter(|e| e.0 == s || e.1 == s).count();
    if comp.iter().any(|&s| degree(s) >= 4) {
        return Err(infinite("vertex of degree >= 4"));
    }
    let branches: Vec<usize> = comp.iter().copied().filter(|&s| degree(s) == 3).collect();
    let heavy: Vec<&(usize, usize, usize)> = edges.iter().filter(|e| e.2 >= 4).collect();
    match branches.len() {
        0 => {}
        1 => {
            if !heavy.is_empty() {
                return Err(infinite("branched graph with a label > 3"));
            }
            let b = branches[0];
            let mut arms: Vec<usize> = edges
                .iter()
                .filter(|e| e.0 == b || e.1 == b)
                .map(|e| {
                    let first = if e.0 == b { e.1 } else { e.0 };
                    arm_length(&edges, b, first)
                })
                .collect();
            arms.sort_unstable();
            return match arms.as_slice() {
                [1, 1, _] => Ok(CoxeterType::D(k)),
                [1, 2, 2] => Ok(CoxeterType::E(6)),
                [1, 2, 3] => Ok(CoxeterType::E(7)),
                [1, 2, 4] => Ok(CoxeterType::E(8)),
                _ => Err(infinite("branch arms not of type D or E")),
            };
        }
        _ => return Err(infinite("more than one branch vertex")),
    }
    // a path
    if heavy.is_empty() {
        return Ok(CoxeterType::A(k));
    }
    if heavy.len() > 1 {
        return Err(infinite("more than one label > 3 on a path"));
    }
    let (s, t, m) = *heavy[0];
    let at_end = degree(s) == 1 || degree(t) == 1;
    match (m, at_end, k) {
        (4, true, _) => Ok(CoxeterType::B(k)),
        (4, false, 4) => Ok(CoxeterType::F4),
        (5, true, 3 | 4) => Ok(CoxeterType::H(k)),
        _ => Err(infinite("path with labels outside B, F, H")),
    }
}

fn arm_length(edges: &[(usize, usize, usize)], from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        let next = edges
            .iter()
            .filter_map(|e| {
                if e.0 == cur && e.1 != prev {
                    Some(e.1)
                } else if e.1 == cur && e.0 != prev {
                    Some(e.0)
                } else {
                    None
                }
            })
            .next();
        match next {
            Some(nx) => {
                prev = cur;
                cur = nx;
                len += 1;
            }
            None => return len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_types_round_trip_through_classification() {
        for name in
            ["A1", "A4", "B2", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2", "H3", "H4", "I2(5)", "I2(8)"]
        {
            let ty: CoxeterType = name.parse().unwrap();
            let got = classify(&ty.matrix()).unwrap();
            assert_eq!(got.len(), 1, "{name}");
            let expected = match ty {
                CoxeterType::I2(3) => CoxeterType::A(2),
                CoxeterType::I2(4) => CoxeterType::B(2),
                CoxeterType::I2(6) => CoxeterType::G2,
                t => t,
            };
            assert_eq!(got[0], expected, "{name}");
        }
    }

    #[test]
    fn reducible_names() {
        let m = matrix_for_type_name("A1xA2").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(classify(&m).unwrap(), vec![CoxeterType::A(1), CoxeterType::A(2)]);
    }

    #[test]
    fn affine_and_hyperbolic_rejected() {
        // affine A2: triangle
        let tri = vec![vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]];
        assert!(matches!(classify(&tri), Err(CoxeterError::InfiniteGroup(_))));
        // affine C2: path with labels 4, 4
        let c2 = vec![vec![1, 4, 2], vec![4, 1, 4], vec![2, 4, 1]];
        assert!(classify(&c2).is_err());
        // H3 with 5 in the middle of a path of length 4 is not finite
        let bad = vec![vec![1, 3, 2, 2], vec![3, 1, 5, 2], vec![2, 5, 1, 3], vec![2, 2, 3, 1]];
        assert!(classify(&bad).is_err());
        // affine D4
        let d: Vec<Vec<usize>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| {
                        if i == j {
                            1
                        } else if i == 0 || j == 0 {
                            3
                        } else {
                            2
                        }
                    })
                    .collect()
            })
            .collect();
        assert!(classify(&d).is_err());
    }

    #[test]
    fn unknown_names() {
        assert!("Q3".parse::<CoxeterType>().is_err());
        assert!("E9".parse::<CoxeterType>().is_err());
        assert!("D3".parse::<CoxeterType>().is_err());
        assert_eq!("i2(7)".parse::<CoxeterType>().unwrap(), CoxeterType::I2(7));
    }
}
