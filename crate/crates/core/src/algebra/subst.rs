//! Ring homomorphisms given by assigning values to variables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{AlgebraError, Coefficient, Exponent, Localized, Monomial, Polynomial, Ring, VarKind};

/// An assignment `variable name → Localized` into a target ring with a fixed
/// pivot. Variables of the source polynomial that are not assigned are mapped
/// to the target variable of the same name.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: Arc<Ring>,
    pivot: Polynomial,
    values: BTreeMap<String, Localized>,
}

impl Substitution {
    pub fn new(target: &Arc<Ring>, pivot: Polynomial) -> Result<Self, AlgebraError> {
        if !Ring::same(target, pivot.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(Self { target: target.clone(), pivot, values: BTreeMap::new() })
    }

    /// Substitution with trivial pivot, for polynomial-to-polynomial maps.
    pub fn polynomial(target: &Arc<Ring>) -> Self {
        Self { target: target.clone(), pivot: Polynomial::one(target), values: BTreeMap::new() }
    }

    pub fn assign(mut self, name: &str, value: Localized) -> Result<Self, AlgebraError> {
        if !Ring::same(value.ring(), &self.target) {
            return Err(AlgebraError::RingMismatch);
        }
        if value.pivot() != &self.pivot {
            return Err(AlgebraError::PivotMismatch);
        }
        self.values.insert(name.to_string(), value);
        Ok(self)
    }

    pub fn assign_poly(self, name: &str, value: Polynomial) -> Result<Self, AlgebraError> {
        let pivot = self.pivot.clone();
        self.assign(name, Localized::from_poly(value, &pivot))
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }
}

enum Slot {
    Assigned(usize),
    Kept(usize),
    /// Variable absent from the target; fine as long as it never occurs.
    Missing,
}

impl Polynomial {
    /// Image under the substitution. Terms are grouped by their exponents in
    /// the assigned variables, so each distinct pattern costs one product of
    /// value powers regardless of how many terms share it.
    pub fn substitute(&self, sub: &Substitution) -> Result<Localized, AlgebraError> {
        let src = self.ring();
        let target = &sub.target;
        let mut assigned: Vec<&Localized> = Vec::new();
        let mut assigned_names: Vec<&str> = Vec::new();
        let slots: Vec<Slot> = src
            .vars()
            .iter()
            .map(|v| {
                if let Some(val) = sub.values.get(&v.name) {
                    assigned.push(val);
                    assigned_names.push(&v.name);
                    Slot::Assigned(assigned.len() - 1)
                } else {
                    match target.vars().index_of(&v.name) {
                        Some(j) => Slot::Kept(j),
                        None => Slot::Missing,
                    }
                }
            })
            .collect();

        // pattern of assigned exponents → polynomial of kept parts
        let mut groups: BTreeMap<Vec<Exponent>, Vec<(Monomial, Coefficient)>> = BTreeMap::new();
        for (m, c) in self.terms() {
            let mut pattern = vec![0; assigned.len()];
            let mut kept = vec![0; target.nvars()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match slots[i] {
                    Slot::Assigned(k) => pattern[k] = e,
                    Slot::Kept(j) => {
                        if e < 0 && target.vars().get(j).kind != VarKind::Laurent {
                            return Err(AlgebraError::NegativeExponent(
                                target.vars().get(j).name.clone(),
                            ));
                        }
                        kept[j] = e;
                    }
                    Slot::Missing => {
                        return Err(AlgebraError::UnknownVariable(src.vars().get(i).name.clone()))
                    }
                }
            }
            let c = if src.ext() == target.ext() || c.is_rational() {
                c.clone()
            } else {
                return Err(AlgebraError::RadicalWithoutExtension);
            };
            groups.entry(pattern).or_default().push((Monomial::from_exponents(kept), c));
        }

        let mut inverses: HashMap<usize, Localized> = HashMap::new();
        let mut powers: HashMap<(usize, Exponent), Localized> = HashMap::new();
        let mut by_power: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (pattern, terms) in groups {
            let mut value = Localized::from_poly(Polynomial::from_terms(target, terms)?, &sub.pivot);
            for (k, &e) in pattern.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && !inverses.contains_key(&k) {
                    let inv = assigned[k].inverse().map_err(|_| {
                        AlgebraError::NotInvertibleValue(assigned_names[k].to_string())
                    })?;
                    inverses.insert(k, inv);
                }
                let factor = powers.entry((k, e)).or_insert_with(|| {
                    if e > 0 {
                        assigned[k].pow(e as u32)
                    } else {
                        inverses[&k].pow((-e) as u32)
                    }
                });
                value = value.try_mul(factor)?;
            }
            let slot = by_power.entry(value.power()).or_insert_with(|| Polynomial::zero(target));
            *slot = &*slot + value.numerator();
        }
        let top = by_power.keys().next_back().copied().unwrap_or(0);
        let mut numerator = Polynomial::zero(target);
        for (k, p) in by_power {
            numerator = &numerator + &(&p * &sub.pivot.pow(top - k));
        }
        Localized::new(numerator, sub.pivot.clone(), top)
    }

    /// Polynomial-valued substitution into `target`.
    pub fn substitute_poly(
        &self,
        target: &Arc<Ring>,
        values: &[(&str, Polynomial)],
    ) -> Result<Polynomial, AlgebraError> {
        let mut sub = Substitution::polynomial(target);
        for (name, v) in values {
            sub = sub.assign_poly(name, v.clone())?;
        }
        let out = self.substitute(&sub)?;
        debug_assert_eq!(out.power(), 0);
        Ok(out.numerator().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_squares_away() {
        let src = Ring::with_names(&["x2", "y2", "w"], &[], None).unwrap();
        let dst = Ring::with_names(&["u1", "u2", "v1", "v2"], &["u1", "u2"], None).unwrap();
        let v = |n: &str| Polynomial::var(&dst, n).unwrap();
        let p = &Polynomial::var(&src, "x2").unwrap() * &Polynomial::var(&src, "y2").unwrap();
        for r in 1..=4 {
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let out = p
                .substitute_poly(
                    &dst,
                    &[("x2", (&v("u1") * &v("u2")).scale_int(sign)), ("y2", (&v("v1") * &v("v2")).scale_int(sign))],
                )
                .unwrap();
            assert_eq!(out, &(&v("u1") * &v("u2")) * &(&v("v1") * &v("v2")));
        }
    }

    #[test]
    fn identity_on_shared_names() {
        let src = Ring::with_names(&["w"], &[], None).unwrap();
        let dst = Ring::with_names(&["u1", "v1", "u2", "v2"], &[], None).unwrap();
        let v = |n: &str| Polynomial::var(&dst, n).unwrap();
        let w_val = &(&v("u1") * &v("v1")) + &(&v("u2") * &v("v2"));
        let out = Polynomial::var(&src, "w").unwrap().substitute_poly(&dst, &[("w", w_val.clone())]).unwrap();
        assert_eq!(out, w_val);
        let kept = Ring::with_names(&["w", "z"], &[], None).unwrap();
        let p = Polynomial::parse(&kept, "w*z + z^2").unwrap();
        let tgt = Ring::with_names(&["a", "z"], &[], None).unwrap();
        let out = p.substitute_poly(&tgt, &[("w", Polynomial::var(&tgt, "a").unwrap())]).unwrap();
        assert_eq!(out.to_string(), "a*z + z^2");
    }

    #[test]
    fn non_invertible_negative_exponent() {
        let src = Ring::with_names(&["a"], &["a"], None).unwrap();
        let dst = Ring::with_names(&["x", "t"], &["t"], None).unwrap();
        let p = Polynomial::var_pow(&src, "a", -1).unwrap();
        let err = p.substitute_poly(&dst, &[("a", Polynomial::parse(&dst, "x + 1").unwrap())]);
        assert!(matches!(err, Err(AlgebraError::NotInvertibleValue(_))));
        let ok = p.substitute_poly(&dst, &[("a", Polynomial::parse(&dst, "2*t^3").unwrap())]).unwrap();
        assert_eq!(ok.to_string(), "1/2*t^-3");
    }
}
