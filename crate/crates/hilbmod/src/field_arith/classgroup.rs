use num_integer::Roots;
use num_traits::Zero;

use super::ideal::QuadIdeal;
use super::quadnum::{q, QuadNum, Q};

/// Indefinite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Form {
    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Reduced in the sense `0 < b < sqrt(D)`, `sqrt(D) - b < 2|a| < sqrt(D) + b`.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let s = d.sqrt();
        let a2 = 2 * self.a.abs();
        self.b > 0 && self.b <= s && (a2 + self.b) * (a2 + self.b) > d && a2 - self.b <= s
    }

    /// One step of the reduction operator.
    pub fn rho(&self) -> Form {
        let d = self.disc();
        let s = d.sqrt();
        let c = self.c;
        let m = 2 * c.abs();
        let nb = if c.abs() <= s {
            // largest b' <= s with b' = -b mod 2|c|
            s - (s + self.b).rem_euclid(m)
        } else {
            // -|c| < b' <= |c|
            let r = (-self.b).rem_euclid(m);
            if r > c.abs() {
                r - m
            } else {
                r
            }
        };
        Form { a: c, b: nb, c: (nb * nb - d) / (4 * c) }
    }

    pub fn reduce(&self) -> Form {
        let mut f = *self;
        let mut guard = 0;
        while !f.is_reduced() {
            f = f.rho();
            guard += 1;
            assert!(guard < 10_000, "form reduction did not terminate");
        }
        f
    }

    /// The full rho-cycle of a reduced form.
    pub fn cycle(&self) -> Vec<Form> {
        let start = self.reduce();
        let mut out = vec![start];
        let mut f = start.rho();
        while f != start {
            out.push(f);
            f = f.rho();
            assert!(out.len() < 10_000, "cycle did not close");
        }
        out
    }

    /// Does the form primitively represent +1 or -1?
    pub fn represents_unit(&self) -> bool {
        self.cycle().iter().any(|f| f.a.abs() == 1)
    }

    pub fn content(&self) -> i128 {
        use num_integer::Integer;
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn primitive(&self) -> Form {
        let g = self.content();
        Form { a: self.a / g, b: self.b / g, c: self.c / g }
    }
}

/// Form attached to an ideal with an oriented Z-basis:
/// `N(x w1 + y w2) / N(ideal)`.
pub fn ideal_form(id: &QuadIdeal) -> Form {
    let [w1, w2] = id.oriented_basis();
    let n = id.norm();
    let a = w1.norm() / n;
    let c = w2.norm() / n;
    let b = (&w1 * &w2.conj()).trace() / n;
    let to_int = |x: Q| {
        assert!(x.is_integer(), "ideal form is not integral");
        x.to_integer()
    };
    Form { a: to_int(a), b: to_int(b), c: to_int(c) }
}

/// Whether the fractional ideal is principal (wide sense).
pub fn is_principal(id: &QuadIdeal) -> bool {
    ideal_form(id).represents_unit()
}

/// A generator of a principal ideal, searched through the reduced cycle.
pub fn principal_generator(id: &QuadIdeal) -> Option<QuadNum> {
    // walk the cycle while tracking the basis change
    let [w1, w2] = id.oriented_basis();
    let f0 = ideal_form(id);
    if !f0.represents_unit() {
        return None;
    }
    let mut f = f0;
    let (mut x1, mut x2) = (w1, w2);
    // the basis grows by a unit per period, so stop after reduction plus one period
    let steps = 2 * f0.reduce().cycle().len() + 200;
    for _ in 0..steps {
        if f.a.abs() == 1 {
            return Some(x1);
        }
        // rho: (x1, x2) -> (x2, -x1 + t x2) with t = (b + b')/(2c)
        let g = f.rho();
        let t = (f.b + g.b) / (2 * f.c);
        let nx1 = x2.clone();
        let nx2 = &(-&x1) + &x2.scale(q(t));
        x1 = nx1;
        x2 = nx2;
        f = g;
    }
    None
}

/// Ideal classes of the maximal order (wide sense), with representatives of
/// minimal norm.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub m: i128,
    pub disc: i128,
    pub reps: Vec<QuadIdeal>,
}

impl ClassGroup {
    pub fn compute(disc: i128, m: i128) -> ClassGroup {
        // Minkowski bound sqrt(D)/2 suffices for generators
        let bound = (disc as f64).sqrt() / 2.0;
        let mut reps: Vec<QuadIdeal> = vec![QuadIdeal::unit(m)];
        let mut n = 2;
        while (n as f64) <= bound.max(2.0) {
            for id in QuadIdeal::integral_of_norm(n, m) {
                if !reps.iter().any(|r| equivalent(r, &id)) {
                    reps.push(id);
                }
            }
            n += 1;
        }
        // close under multiplication in case the bound missed products
        loop {
            let mut added = false;
            let snapshot = reps.clone();
            for x in &snapshot {
                for y in &snapshot {
                    let p = x.mul(y);
                    if !reps.iter().any(|r| equivalent(r, &p)) {
                        reps.push(p.primitive_part());
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        ClassGroup { m, disc, reps }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Index of the class of `id` among the representatives.
    pub fn class_of(&self, id: &QuadIdeal) -> usize {
        self.reps
            .iter()
            .position(|r| equivalent(r, id))
            .expect("ideal class not found among representatives")
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.class_of(&self.reps[i].mul(&self.reps[j]))
    }

    pub fn inv(&self, i: usize) -> usize {
        self.class_of(&self.reps[i].inv())
    }
}

pub fn equivalent(x: &QuadIdeal, y: &QuadIdeal) -> bool {
    is_principal(&x.mul(&y.inv()))
}

/// Narrow class number via proper equivalence classes of primitive forms.
pub fn narrow_class_number(disc: i128) -> usize {
    let s = disc.sqrt();
    let mut cycles: Vec<Vec<Form>> = Vec::new();
    for a in 1..=s {
        for sign in [1, -1] {
            for b in 1..=s {
                let aa = sign * a;
                if (b * b - disc) % (4 * aa) != 0 {
                    continue;
                }
                let f = Form { a: aa, b, c: (b * b - disc) / (4 * aa) };
                if f.content() != 1 || !f.is_reduced() {
                    continue;
                }
                if !cycles.iter().any(|c| c.contains(&f)) {
                    cycles.push(f.cycle());
                }
            }
        }
    }
    cycles.len()
}

/// `(-a, b, -c)`.
pub fn negate(f: &Form) -> Form {
    Form { a: -f.a, b: f.b, c: -f.c }
}

pub fn is_zero_form(f: &Form) -> bool {
    f.a.is_zero() && f.b.is_zero() && f.c.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers_of_small_fields() {
        assert_eq!(ClassGroup::compute(29, 29).order(), 1);
        assert_eq!(ClassGroup::compute(40, 10).order(), 2);
        assert_eq!(ClassGroup::compute(105, 105).order(), 2);
        assert_eq!(ClassGroup::compute(21, 21).order(), 1);
    }

    #[test]
    fn narrow_class_numbers() {
        assert_eq!(narrow_class_number(105), 4);
        assert_eq!(narrow_class_number(21), 2);
        assert_eq!(narrow_class_number(29), 1);
    }

    #[test]
    fn generator_found_for_principal_ideal() {
        let m = 21;
        let x = QuadNum::frac(3, 1, 2, m);
        let id = QuadIdeal::principal(&x);
        let g = principal_generator(&id).unwrap();
        use num_traits::Signed;
        assert_eq!(g.norm().abs(), id.norm());
        assert!(id.contains(&g));
    }
}
