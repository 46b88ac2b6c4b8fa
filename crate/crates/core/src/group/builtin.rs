use super::{FiniteGroup, Permutation};
use crate::error::{Error, Result};

fn cycle_on(points: usize, offset: usize, len: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..points).collect();
    for i in 0..len {
        p[offset + i] = offset + (i + 1) % len;
    }
    p
}

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::from_images(images).expect("builtin permutations are valid")
}

fn cyclic_product(factors: &[usize]) -> Result<FiniteGroup> {
    let points: usize = factors.iter().sum::<usize>().max(1);
    let mut gens = Vec::new();
    let mut offset = 0;
    for &n in factors {
        if n == 0 {
            return Err(Error::Parse("cyclic factor of order 0".into()));
        }
        if n > 1 {
            gens.push(perm(cycle_on(points, offset, n)));
        }
        offset += n;
    }
    FiniteGroup::from_permutations(None, points, &gens)
}

fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return cyclic_product(&[2, 2][..(n.max(1))]);
    }
    let rot = perm(cycle_on(n, 0, n));
    let refl = perm((0..n).map(|i| (n - i) % n).collect());
    FiniteGroup::from_permutations(None, n, &[rot, refl])
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n > 5 {
        return Err(Error::GroupTooLarge { order: (1..=n).product(), cap: 120 });
    }
    if n <= 1 {
        return FiniteGroup::from_permutations(None, 1, &[]);
    }
    let mut t: Vec<usize> = (0..n).collect();
    t.swap(0, 1);
    let gens = if n == 2 { vec![perm(t)] } else { vec![perm(t), perm(cycle_on(n, 0, n))] };
    FiniteGroup::from_permutations(None, n, &gens)
}

fn alternating4() -> Result<FiniteGroup> {
    let a = perm(vec![1, 2, 0, 3]);
    let b = perm(vec![0, 2, 3, 1]);
    FiniteGroup::from_permutations(None, 4, &[a, b])
}

fn quaternion8() -> Result<FiniteGroup> {
    // units 1, i, j, k with a sign; index = 4*negative + unit
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let left = |q: usize| -> Permutation {
        perm(
            (0..8)
                .map(|x| {
                    let (neg, u) = unit_mul(q % 4, x % 4);
                    let sign = (q / 4 == 1) ^ (x / 4 == 1) ^ neg;
                    4 * sign as usize + u
                })
                .collect(),
        )
    };
    FiniteGroup::from_permutations(None, 8, &[left(1), left(2)])
}

/// Named groups: `1`, `C<n>`, products such as `C2xC4`, `D<2n>`, `S<n>`
/// (n ≤ 5), `A4`, `Q8`, `V4`, and the prime-power aliases `Cp`, `Cp2`, `Cp3`
/// which instantiate p = 2.
pub fn builtin(name: &str) -> Result<FiniteGroup> {
    let key = name.trim();
    let group = match key {
        "1" | "C1" | "trivial" | "e" => cyclic_product(&[1])?,
        "Cp" => cyclic_product(&[2])?,
        "Cp2" => cyclic_product(&[4])?,
        "Cp3" => cyclic_product(&[8])?,
        "V4" | "K4" => cyclic_product(&[2, 2])?,
        "A4" => alternating4()?,
        "Q8" => quaternion8()?,
        _ => {
            let parse_num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("unknown group {name:?}")));
            if let Some(rest) = key.strip_prefix('D') {
                let order = parse_num(rest)?;
                if order % 2 != 0 || order < 4 {
                    return Err(Error::Parse(format!("dihedral group order must be even and ≥ 4, got {order}")));
                }
                dihedral(order / 2)?
            } else if let Some(rest) = key.strip_prefix('S') {
                symmetric(parse_num(rest)?)?
            } else if key.starts_with('C') {
                let factors = key
                    .split(['x', '×'])
                    .map(|f| f.strip_prefix('C').ok_or_else(|| Error::Parse(format!("unknown group {name:?}"))).and_then(parse_num))
                    .collect::<Result<Vec<_>>>()?;
                cyclic_product(&factors)?
            } else {
                return Err(Error::Parse(format!("unknown group {name:?}")));
            }
        }
    };
    Ok(group.with_name(key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (name, order) in [
            ("1", 1),
            ("C2", 2),
            ("C6", 6),
            ("C2xC2", 4),
            ("C2xC4", 8),
            ("C2xC2xC2", 8),
            ("D6", 6),
            ("D8", 8),
            ("D10", 10),
            ("S1", 1),
            ("S2", 2),
            ("S3", 6),
            ("S4", 24),
            ("S5", 120),
            ("A4", 12),
            ("Q8", 8),
            ("Cp2", 4),
            ("Cp3", 8),
        ] {
            assert_eq!(builtin(name).unwrap().order(), order, "{name}");
        }
    }

    #[test]
    fn q8_has_unique_involution() {
        let q = builtin("Q8").unwrap();
        let involutions = (1..8).filter(|&g| q.mul(g, g) == 0).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn unknown_names_fail() {
        assert!(builtin("X7").is_err());
        assert!(builtin("D7").is_err());
        assert!(builtin("S6").is_err());
    }
}
