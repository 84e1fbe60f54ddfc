use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::character::{Character, CharacterEvaluator, Place};
use super::factored::FactoredInt;
use super::frac::Frac;
use super::snf::dual_of_quotient;
use crate::arithmetic::{dlog_in_cyclic, factorize, gcd, is_prime, lcm, mul_mod, pow_mod, unit_group, LocalKind};
use crate::{Caps, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittingData {
    pub prime: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

impl SplittingData {
    pub fn is_totally_split(&self) -> bool {
        self.e == 1 && self.f == 1
    }
}

/// An abelian extension of Q, held as its group of Dirichlet characters
/// X ≤ Hom(Ẑ^*, Q/Z). The field is the fixed field of the common kernel of
/// X inside the cyclotomic field of level conductor(X); its degree is |X|.
///
/// The group is materialised (bounded by `Caps::group`), and a canonical
/// generating set is kept: the greedy basis of the sorted element list.
#[derive(Clone)]
pub struct AbelianField {
    elements: Vec<Character>,
    generators: Vec<Character>,
    conductor: FactoredInt,
    evaluators: OnceLock<Vec<CharacterEvaluator>>,
}

impl PartialEq for AbelianField {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for AbelianField {}

impl fmt::Debug for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianField")
            .field("degree", &self.degree())
            .field("conductor", &self.conductor.to_string())
            .field("generators", &self.generators.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

/// Subgroup generated by `gens`, sorted, with size check against `cap`.
fn closure(gens: &[Character], cap: u64) -> Result<Vec<Character>> {
    let mut set: HashSet<Character> = HashSet::from([Character::trivial()]);
    let mut list = vec![Character::trivial()];
    for g in gens {
        if set.contains(g) {
            continue;
        }
        let base = list.clone();
        let mut mult = g.clone();
        while !set.contains(&mult) {
            for b in &base {
                let x = b.add(&mult);
                set.insert(x.clone());
                list.push(x);
            }
            if list.len() as u64 > cap {
                return Err(Error::limit("character group size", cap));
            }
            mult = mult.add(g);
        }
    }
    list.sort();
    Ok(list)
}

/// Greedy generating set of a sorted subgroup listing.
fn greedy_basis(elements: &[Character]) -> Vec<Character> {
    let n = elements.len();
    let mut span: HashSet<Character> = HashSet::from([Character::trivial()]);
    let mut basis = Vec::new();
    for x in elements {
        if span.len() == n {
            break;
        }
        if span.contains(x) {
            continue;
        }
        basis.push(x.clone());
        let base: Vec<Character> = span.iter().cloned().collect();
        let mut mult = x.clone();
        while !span.contains(&mult) {
            for b in &base {
                span.insert(b.add(&mult));
            }
            mult = mult.add(x);
        }
    }
    basis
}

impl AbelianField {
    pub fn rational() -> Self {
        Self::from_sorted_elements(vec![Character::trivial()])
    }

    fn from_sorted_elements(elements: Vec<Character>) -> Self {
        let generators = greedy_basis(&elements);
        let conductor = generators.iter().fold(FactoredInt::one(), |acc, c| acc.lcm(&c.conductor()));
        AbelianField { elements, generators, conductor, evaluators: OnceLock::new() }
    }

    /// The field cut out by the group generated by `gens`.
    pub fn from_characters(gens: &[Character], caps: &Caps) -> Result<Self> {
        Ok(Self::from_sorted_elements(closure(gens, caps.group)?))
    }

    /// Q(ζ_m).
    pub fn cyclotomic(m: u64, caps: &Caps) -> Result<Self> {
        if m == 0 {
            return Err(Error::pre("modulus must be positive"));
        }
        let mut gens = Vec::new();
        for (p, a) in factorize(m).factors {
            if p == 2 {
                if a == 2 {
                    gens.push(Character::from_parts([
                        (Place::TwoMinus, Frac::new(1, 2)),
                        (Place::TwoThree, Frac::new(1, 2)),
                    ])?);
                } else if a >= 3 {
                    gens.push(Character::local(Place::TwoMinus, Frac::new(1, 2))?);
                    gens.push(Character::local(Place::TwoThree, Frac::new(1, 1 << (a - 2)))?);
                }
            } else {
                let phi = (p - 1) * p.pow(a - 1);
                gens.push(Character::local(Place::Odd(p), Frac::new(1, phi))?);
            }
        }
        Self::from_characters(&gens, caps)
    }

    /// The field presented as (m, H) with H generated by `residues`.
    pub fn from_subgroup(m: u64, residues: &[u64], caps: &Caps) -> Result<Self> {
        if m == 0 {
            return Err(Error::pre("modulus must be positive"));
        }
        if let Some(&r) = residues.iter().find(|&&r| gcd(r, m) != 1) {
            return Err(Error::pre(format!("residue {r} is not coprime to {m}")));
        }
        let ug = unit_group(m);
        let orders = ug.factor_orders.clone();
        let mut relations = Vec::new();
        for &h in residues {
            let mut v = Vec::with_capacity(ug.factors.len());
            for lf in &ug.factors {
                let pa = lf.prime.pow(lf.exponent);
                let x = match lf.kind {
                    LocalKind::Odd => {
                        let fac = factorize(lf.order).factors;
                        dlog_in_cyclic(lf.local_generator, h % pa, lf.order, &fac, pa).expect("primitive root")
                    }
                    LocalKind::TwoMinus => {
                        if lf.exponent == 2 {
                            u64::from(h % 4 == 3)
                        } else {
                            u64::from(matches!(h % 8, 5 | 7))
                        }
                    }
                    LocalKind::TwoThree => {
                        let u = if matches!(h % 8, 5 | 7) { pa - h % pa } else { h % pa };
                        dlog_in_cyclic(3, u, lf.order, &[(2, lf.exponent - 2)], pa)
                            .expect("3 generates the 1,3 mod 8 classes")
                    }
                };
                v.push(x);
            }
            relations.push(v);
        }
        let duals = dual_of_quotient(&orders, &relations);
        let mut gens = Vec::new();
        for vals in duals {
            let mut parts = Vec::new();
            for (lf, x) in ug.factors.iter().zip(vals) {
                match lf.kind {
                    LocalKind::Odd => parts.push((Place::Odd(lf.prime), x)),
                    LocalKind::TwoMinus if lf.exponent == 2 => {
                        // modulo 4 the generator −1 is also 3
                        parts.push((Place::TwoMinus, x));
                        parts.push((Place::TwoThree, x));
                    }
                    LocalKind::TwoMinus => parts.push((Place::TwoMinus, x)),
                    LocalKind::TwoThree => parts.push((Place::TwoThree, x)),
                }
            }
            gens.push(Character::from_parts(parts)?);
        }
        Self::from_characters(&gens, caps)
    }

    /// The degree-q subfield of Q(ζ_ℓ).
    pub fn cyclic_prime_power_subfield(l: u64, q: u64, caps: &Caps) -> Result<Self> {
        if !is_prime(l) || l == 2 {
            return Err(Error::pre(format!("{l} must be an odd prime")));
        }
        let fq = factorize(q).factors;
        if q < 2 || fq.len() != 1 {
            return Err(Error::pre(format!("{q} is not a prime power")));
        }
        if (l - 1) % q != 0 {
            return Err(Error::pre(format!("{l} is not 1 mod {q}")));
        }
        Self::from_characters(&[Character::local(Place::Odd(l), Frac::new(1, q))?], caps)
    }

    /// Q(√d) for a squarefree integer d ≠ 0, 1.
    pub fn quadratic(d: i64, caps: &Caps) -> Result<Self> {
        Self::from_characters(&[quadratic_character(d)?], caps)
    }

    pub fn degree(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn conductor(&self) -> &FactoredInt {
        &self.conductor
    }

    pub fn elements(&self) -> &[Character] {
        &self.elements
    }

    pub fn generators(&self) -> &[Character] {
        &self.generators
    }

    pub fn is_rational(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains_character(&self, chi: &Character) -> bool {
        self.elements.binary_search(chi).is_ok()
    }

    /// K ⊆ self.
    pub fn contains_field(&self, k: &AbelianField) -> bool {
        k.generators.iter().all(|c| self.contains_character(c))
    }

    fn evaluators(&self) -> &[CharacterEvaluator] {
        self.evaluators.get_or_init(|| self.generators.iter().map(|c| c.evaluator()).collect())
    }

    /// (e, f, g) of p. Panics if p is not prime.
    pub fn splitting_data(&self, p: u64) -> SplittingData {
        assert!(is_prime(p), "{p} is not prime");
        self.splitting_data_unchecked(p)
    }

    /// [`splitting_data`](Self::splitting_data) for a p already known to be
    /// prime (e.g. taken from the sieve); primality is not rechecked.
    pub fn splitting_data_unchecked(&self, p: u64) -> SplittingData {
        let n = self.degree();
        if !self.conductor.divides_prime(p) {
            let f = self.evaluators().iter().fold(1u64, |acc, ev| lcm(acc, ev.eval(p).order()));
            return SplittingData { prime: p, e: 1, f, g: n / f };
        }
        // Inertia: the restriction of X to the p-component has size e; the
        // Frobenius acts on the characters unramified at p.
        let restricted: HashSet<Character> = self.elements.iter().map(|c| c.restrict_to(p)).collect();
        let e = restricted.len() as u64;
        let unramified: Vec<Character> = self.elements.iter().filter(|c| c.is_trivial_at(p)).cloned().collect();
        let f =
            greedy_basis(&unramified).iter().fold(1u64, |acc, c| lcm(acc, c.evaluator().eval_away_from(p, p).order()));
        SplittingData { prime: p, e, f, g: n / (e * f) }
    }

    pub fn is_totally_split(&self, p: u64) -> bool {
        self.splitting_data_unchecked(p).is_totally_split()
    }

    /// Values of the canonical generators at an integer coprime to the
    /// conductor.
    pub fn frobenius_values(&self, u: u64) -> Vec<Frac> {
        self.evaluators().iter().map(|ev| ev.eval(u)).collect()
    }

    /// |Δ| by the conductor–discriminant formula.
    pub fn discriminant(&self) -> FactoredInt {
        let mut acc: HashMap<u64, u64> = HashMap::new();
        for chi in &self.elements {
            for p in chi.support() {
                *acc.entry(p).or_insert(0) += chi.local_conductor_exponent(p);
            }
        }
        FactoredInt::from_pairs(acc)
    }

    pub fn compositum(&self, other: &AbelianField, caps: &Caps) -> Result<AbelianField> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Self::from_characters(&gens, caps)
    }

    pub fn intersection(&self, other: &AbelianField) -> AbelianField {
        let (small, big) = if self.degree() <= other.degree() { (self, other) } else { (other, self) };
        let common: Vec<Character> = small.elements.iter().filter(|c| big.contains_character(c)).cloned().collect();
        Self::from_sorted_elements(common)
    }

    pub fn is_linearly_disjoint(&self, other: &AbelianField) -> bool {
        self.intersection(other).is_rational()
    }

    /// The subfield fixed by the Frobenius classes of `residues` (integers
    /// coprime to the conductor): the characters trivial on all of them.
    pub fn fixed_field(&self, residues: &[u64]) -> Result<AbelianField> {
        for &r in residues {
            if self.conductor.primes().any(|p| r % p == 0) {
                return Err(Error::pre(format!("residue {r} is not coprime to the conductor")));
            }
        }
        let evs: Vec<CharacterEvaluator> = self.elements.iter().map(|c| c.evaluator()).collect();
        let kept: Vec<Character> = self
            .elements
            .iter()
            .zip(&evs)
            .filter(|(_, ev)| residues.iter().all(|&r| ev.eval(r).is_zero()))
            .map(|(c, _)| c.clone())
            .collect();
        Ok(Self::from_sorted_elements(kept))
    }

    pub fn is_totally_real(&self) -> bool {
        self.generators.iter().all(|c| c.at_minus_one().is_zero())
    }

    /// All M with K ⊊ M ⊆ self, as subgroups of X between X_K and X_self,
    /// ordered by degree and then by element list.
    pub fn intermediate_fields(&self, k: &AbelianField, caps: &Caps) -> Result<Vec<AbelianField>> {
        if !self.contains_field(k) {
            return Err(Error::pre("K is not contained in F"));
        }
        let n = self.elements.len();
        if n > 4096 {
            return Err(Error::limit("subgroup lattice walk over a large group", 4096));
        }
        let index: HashMap<&Character, usize> = self.elements.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let add = |i: usize, j: usize| index[&self.elements[i].add(&self.elements[j])];
        let start: Vec<bool> = self.elements.iter().map(|c| k.contains_character(c)).collect();

        let extend = |sub: &Vec<bool>, x: usize| -> Vec<bool> {
            let mut s = sub.clone();
            let members: Vec<usize> = (0..n).filter(|&i| sub[i]).collect();
            let mut m = x;
            while !s[m] {
                for &b in &members {
                    s[add(b, m)] = true;
                }
                m = add(m, x);
            }
            s
        };

        let mut seen: HashSet<Vec<bool>> = HashSet::from([start.clone()]);
        let mut frontier = vec![start];
        let mut found: Vec<Vec<bool>> = Vec::new();
        while let Some(sub) = frontier.pop() {
            for x in 0..n {
                if sub[x] {
                    continue;
                }
                let s = extend(&sub, x);
                if seen.insert(s.clone()) {
                    if seen.len() as u64 > caps.lattice {
                        return Err(Error::limit("intermediate subgroups", caps.lattice));
                    }
                    found.push(s.clone());
                    frontier.push(s);
                }
            }
        }
        let mut fields: Vec<AbelianField> = found
            .into_iter()
            .map(|s| Self::from_sorted_elements((0..n).filter(|&i| s[i]).map(|i| self.elements[i].clone()).collect()))
            .collect();
        fields.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(fields)
    }

    /// Generators of H ≤ (Z/cZ)^* at the conductor level c, sorted; None if
    /// c does not fit in 64 bits.
    pub fn subgroup_generators(&self) -> Option<Vec<u64>> {
        let c = self.conductor.to_u64()?;
        let ug = unit_group(c);
        // image of each unit-group generator in Hom(X, Q/Z), as its values
        // on the canonical generators of X
        let images: Vec<Vec<Frac>> = ug
            .factors
            .iter()
            .map(|lf| {
                self.generators
                    .iter()
                    .map(|chi| match lf.kind {
                        LocalKind::Odd => chi.value_at(Place::Odd(lf.prime)),
                        LocalKind::TwoMinus => chi.value_at(Place::TwoMinus),
                        LocalKind::TwoThree => chi.value_at(Place::TwoThree),
                    })
                    .collect()
            })
            .collect();
        let r = ug.factors.len();
        let add = |a: &[Frac], b: &[Frac]| -> Vec<Frac> { a.iter().zip(b).map(|(x, y)| x.add(*y)).collect() };
        let zero = vec![Frac::ZERO; self.generators.len()];
        let mut reached: HashMap<Vec<Frac>, Vec<u64>> = HashMap::from([(zero, vec![0u64; r])]);
        let mut relations: Vec<Vec<u64>> = Vec::new();
        for (k, v) in images.iter().enumerate() {
            let d = ug.factor_orders[k];
            let mut cur = v.clone();
            let mut t = 1u64;
            while !reached.contains_key(&cur) {
                cur = add(&cur, v);
                t += 1;
            }
            let word = &reached[&cur];
            let rel: Vec<u64> = (0..r)
                .map(|i| {
                    let di = ug.factor_orders[i];
                    let base = (di - word[i] % di) % di;
                    if i == k {
                        (base + t) % d
                    } else {
                        base
                    }
                })
                .collect();
            relations.push(rel);
            if t > 1 {
                let old: Vec<(Vec<Frac>, Vec<u64>)> = reached.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
                let mut mult = v.clone();
                for c in 1..t {
                    for (x, w) in &old {
                        let mut w2 = w.clone();
                        w2[k] = c;
                        reached.insert(add(x, &mult), w2);
                    }
                    mult = add(&mult, v);
                }
            }
        }
        let mut residues: Vec<u64> = relations
            .iter()
            .map(|rel| rel.iter().zip(&ug.generators).fold(1 % c, |acc, (&e, &g)| mul_mod(acc, pow_mod(g, e, c), c)))
            .filter(|&x| x != 1 % c)
            .collect();
        residues.sort_unstable();
        residues.dedup();
        Some(residues)
    }

    pub fn presentation(&self) -> FieldPresentation {
        FieldPresentation {
            conductor: self.conductor.to_biguint().to_string(),
            degree: self.degree().to_string(),
            characters: self
                .generators
                .iter()
                .map(|c| c.parts().iter().map(|(p, x)| [p.to_string(), x.to_string()]).collect())
                .collect(),
            subgroup: self.subgroup_generators().map(|v| v.into_iter().map(|x| x.to_string()).collect()),
        }
    }

    /// Rebuilds a field from the character list of a presentation; the
    /// derived fields (conductor, degree, subgroup) are not trusted here,
    /// see `FieldPresentation::check`.
    pub fn from_presentation(p: &FieldPresentation, caps: &Caps) -> Result<AbelianField> {
        let mut gens = Vec::new();
        for c in &p.characters {
            let mut parts = Vec::new();
            for [pl, x] in c {
                let place = Place::parse(pl).ok_or_else(|| Error::pre(format!("bad place {pl}")))?;
                let val = Frac::parse(x).ok_or_else(|| Error::pre(format!("bad value {x}")))?;
                parts.push((place, val));
            }
            gens.push(Character::from_parts(parts)?);
        }
        Self::from_characters(&gens, caps)
    }
}

/// The quadratic character of Q(√d), d squarefree.
pub fn quadratic_character(d: i64) -> Result<Character> {
    if d == 0 || d == 1 {
        return Err(Error::pre("d must be a squarefree integer other than 0 and 1"));
    }
    let a = d.unsigned_abs();
    let fac = factorize(a).factors;
    if fac.iter().any(|&(_, e)| e > 1) {
        return Err(Error::pre(format!("{d} is not squarefree")));
    }
    let half = Frac::new(1, 2);
    let mut parts: Vec<(Place, Frac)> =
        fac.iter().filter(|&&(p, _)| p != 2).map(|&(p, _)| (Place::Odd(p), half)).collect();
    let odd = Character::from_parts(parts.clone())?;
    let want_odd = d < 0; // χ(−1) = sign(d)
    match d.rem_euclid(4) {
        1 => {}
        3 => {
            parts.push((Place::TwoMinus, half));
            parts.push((Place::TwoThree, half));
        }
        _ => {
            // conductor-8 factor: χ_8 is even, χ_{−8} is odd
            let odd_part_is_odd = !odd.at_minus_one().is_zero();
            if odd_part_is_odd == want_odd {
                parts.push((Place::TwoThree, half));
            } else {
                parts.push((Place::TwoMinus, half));
            }
        }
    }
    Character::from_parts(parts)
}

/// |Δ_M| / |Δ_K|^[M:K], which must be an exact integer for K ⊆ M.
pub fn norm_relative_discriminant(k: &AbelianField, m: &AbelianField) -> Result<FactoredInt> {
    if !m.contains_field(k) {
        return Err(Error::pre("K is not contained in M"));
    }
    let rel = m.degree() / k.degree();
    m.discriminant()
        .div_exact(&k.discriminant().pow(rel))
        .ok_or_else(|| Error::inconsistent("relative discriminant norm is not an integer"))
}

/// Canonical serialised form of a field: its canonical character
/// generators plus the derived conductor, degree and (when the conductor
/// fits in 64 bits) the subgroup H at the conductor level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FieldPresentation {
    pub conductor: String,
    pub degree: String,
    pub characters: Vec<Vec<[String; 2]>>,
    pub subgroup: Option<Vec<String>>,
}

impl FieldPresentation {
    /// Rebuilds the field and checks every derived entry; returns the field.
    pub fn check(&self, caps: &Caps) -> Result<AbelianField> {
        let f = AbelianField::from_presentation(self, caps)?;
        let expect = f.presentation();
        if expect.characters != self.characters {
            return Err(Error::inconsistent("characters are not in canonical form"));
        }
        if expect.conductor != self.conductor {
            return Err(Error::inconsistent("conductor mismatch"));
        }
        if expect.degree != self.degree {
            return Err(Error::inconsistent("degree mismatch"));
        }
        if expect.subgroup != self.subgroup {
            return Err(Error::inconsistent("subgroup generators mismatch"));
        }
        if let Some(h) = &self.subgroup {
            let c: u64 = self.conductor.parse().map_err(|_| Error::inconsistent("conductor"))?;
            let hs: Vec<u64> = h.iter().map(|s| s.parse().unwrap_or(0)).collect();
            let g = AbelianField::from_subgroup(c, &hs, caps)?;
            if g != f {
                return Err(Error::inconsistent("subgroup presentation does not match characters"));
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }

    fn cubic7() -> AbelianField {
        AbelianField::from_subgroup(7, &[6], &caps()).unwrap()
    }

    fn cubic13() -> AbelianField {
        AbelianField::cyclic_prime_power_subfield(13, 3, &caps()).unwrap()
    }

    fn sd(f: &AbelianField, p: u64) -> (u64, u64, u64) {
        let s = f.splitting_data(p);
        (s.e, s.f, s.g)
    }

    #[test]
    fn cyclotomic_degrees() {
        assert_eq!(AbelianField::cyclotomic(1, &caps()).unwrap().degree(), 1);
        assert_eq!(AbelianField::cyclotomic(7, &caps()).unwrap().degree(), 6);
        let c12 = AbelianField::cyclotomic(12, &caps()).unwrap();
        assert_eq!(c12.degree(), 4);
        assert_eq!(c12.conductor().to_u64(), Some(12));
        let c8 = AbelianField::cyclotomic(8, &caps()).unwrap();
        assert_eq!((c8.degree(), c8.conductor().to_u64()), (4, Some(8)));
        // Q(ζ_4) = Q(i): discriminant 4
        assert_eq!(AbelianField::cyclotomic(4, &caps()).unwrap().discriminant().to_u64(), Some(4));
    }

    #[test]
    fn conductors() {
        assert_eq!(AbelianField::cyclotomic(7, &caps()).unwrap().conductor().to_u64(), Some(7));
        let q12 = AbelianField::from_subgroup(12, &[5, 7], &caps()).unwrap();
        assert!(q12.is_rational());
        assert_eq!(q12.conductor().to_u64(), Some(1));
        assert_eq!(cubic7().conductor().to_u64(), Some(7));
        assert_eq!(cubic7().degree(), 3);
    }

    #[test]
    fn splitting_examples() {
        let f = cubic7();
        assert_eq!(sd(&f, 13), (1, 1, 3));
        assert_eq!(sd(&f, 2), (1, 3, 1));
        assert_eq!(sd(&f, 7), (3, 1, 1));
        assert!(f.is_totally_split(13));
        assert!(!f.is_totally_split(2));
        // Q(ζ_12) at 2 and 3
        let c12 = AbelianField::cyclotomic(12, &caps()).unwrap();
        assert_eq!(sd(&c12, 2), (2, 2, 1));
        assert_eq!(sd(&c12, 3), (2, 2, 1)); // ramified in Q(√−3), inert in Q(i)
        assert_eq!(sd(&c12, 13), (1, 1, 4));
        assert_eq!(sd(&c12, 5), (1, 2, 2));
        // Q(i): 2 ramified
        let qi = AbelianField::quadratic(-1, &caps()).unwrap();
        assert_eq!(sd(&qi, 2), (2, 1, 1));
        assert_eq!(sd(&qi, 5), (1, 1, 2));
        assert_eq!(sd(&qi, 3), (1, 2, 1));
    }

    #[test]
    fn discriminants() {
        assert!(AbelianField::rational().discriminant().is_one());
        assert_eq!(AbelianField::cyclotomic(7, &caps()).unwrap().discriminant().to_u64(), Some(16807));
        assert_eq!(cubic7().discriminant().to_u64(), Some(49));
        for (d, disc) in [(-1i64, 4u64), (2, 8), (-2, 8), (3, 12), (5, 5), (-3, 3), (6, 24), (-6, 24), (-7, 7)] {
            let q = AbelianField::quadratic(d, &caps()).unwrap();
            assert_eq!(q.discriminant().to_u64(), Some(disc), "d={d}");
        }
    }

    #[test]
    fn quadratic_signs() {
        for d in [-1i64, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15] {
            let q = AbelianField::quadratic(d, &caps()).unwrap();
            assert_eq!(q.is_totally_real(), d > 0, "d={d}");
            // p splits iff d is a nonzero square mod p, for odd p ∤ d
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
                if d.rem_euclid(p as i64) == 0 {
                    continue;
                }
                let r = d.rem_euclid(p as i64) as u64;
                let square = (1..p).any(|x| x * x % p == r);
                assert_eq!(q.is_totally_split(p), square, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn composita_and_intersections() {
        let (a, b) = (cubic7(), cubic13());
        let q = AbelianField::rational();
        assert_eq!(a.compositum(&q, &caps()).unwrap(), a);
        assert_eq!(a.compositum(&a, &caps()).unwrap(), a);
        let ab = a.compositum(&b, &caps()).unwrap();
        assert_eq!((ab.degree(), ab.conductor().to_u64()), (9, Some(91)));
        assert!(a.intersection(&q).is_rational());
        assert!(a.intersection(&b).is_rational());
        assert_eq!(a.intersection(&a), a);
        assert!(a.is_linearly_disjoint(&b));
        assert!(!a.is_linearly_disjoint(&a));
        assert!(a.is_linearly_disjoint(&q));
    }

    #[test]
    fn fixed_fields() {
        let (a, b) = (cubic7(), cubic13());
        let ab = a.compositum(&b, &caps()).unwrap();
        assert_eq!(ab.fixed_field(&[]).unwrap(), ab);
        let c7 = AbelianField::cyclotomic(7, &caps()).unwrap();
        assert!(c7.fixed_field(&[3]).unwrap().is_rational());
        let f = ab.fixed_field(&[2]).unwrap();
        assert_eq!((f.degree(), f.conductor().to_u64()), (3, Some(91)));
        assert!(f.is_totally_split(2));
    }

    #[test]
    fn intermediate() {
        let q = AbelianField::rational();
        let a = cubic7();
        assert_eq!(a.intermediate_fields(&q, &caps()).unwrap(), vec![a.clone()]);
        assert!(a.intermediate_fields(&a, &caps()).unwrap().is_empty());
        let ab = a.compositum(&cubic13(), &caps()).unwrap();
        let ms = ab.intermediate_fields(&q, &caps()).unwrap();
        // four cubic subfields and the compositum itself
        assert_eq!(ms.len(), 5);
        assert_eq!(ms.iter().filter(|m| m.degree() == 3).count(), 4);
        assert_eq!(ms.last().unwrap(), &ab);
    }

    #[test]
    fn cyclic_subfields() {
        let c = AbelianField::cyclic_prime_power_subfield(7, 3, &caps()).unwrap();
        assert_eq!(c, cubic7());
        assert_eq!(c.subgroup_generators(), Some(vec![6]));
        let q = AbelianField::cyclic_prime_power_subfield(7, 2, &caps()).unwrap();
        assert_eq!(q, AbelianField::from_subgroup(7, &[2, 4], &caps()).unwrap());
        assert_eq!(q, AbelianField::quadratic(-7, &caps()).unwrap());
        assert_eq!(cubic13().conductor().to_u64(), Some(13));
        assert!(matches!(
            AbelianField::cyclic_prime_power_subfield(11, 3, &caps()),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn reality() {
        assert!(AbelianField::rational().is_totally_real());
        assert!(cubic7().is_totally_real());
        assert!(!AbelianField::cyclotomic(7, &caps()).unwrap().is_totally_real());
    }

    #[test]
    fn relative_discriminants() {
        let q = AbelianField::rational();
        let a = cubic7();
        let m = a.compositum(&cubic13(), &caps()).unwrap();
        assert_eq!(norm_relative_discriminant(&q, &m).unwrap(), m.discriminant());
        assert_eq!(norm_relative_discriminant(&a, &m).unwrap().to_u64(), Some(13u64.pow(6)));
        assert!(norm_relative_discriminant(&m, &m).unwrap().is_one());
    }

    #[test]
    fn presentations_round_trip() {
        for f in [AbelianField::rational(), cubic7(), AbelianField::cyclotomic(24, &caps()).unwrap()] {
            let p = f.presentation();
            assert_eq!(p.check(&caps()).unwrap(), f);
            let h: Vec<u64> = p.subgroup.unwrap().iter().map(|s| s.parse().unwrap()).collect();
            let c = f.conductor().to_u64().unwrap();
            assert_eq!(AbelianField::from_subgroup(c, &h, &caps()).unwrap(), f);
        }
    }
}
