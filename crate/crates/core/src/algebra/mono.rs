use std::cmp::Ordering;

/// Maximum number of ring variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector. The derived order on the array is lexicographic with
/// the first declared variable most significant; [`Ord`] refines it by
/// total degree first, giving degree-lex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn var(i: usize) -> Mono {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn pure_power(i: usize, k: u16) -> Mono {
        let mut e = [0; MAX_VARS];
        e[i] = k;
        Mono(e)
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.0[i] + o.0[i];
        }
        Mono(e)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self` when `self` divides `o`.
    pub fn quotient(&self, o: &Mono) -> Option<Mono> {
        if !self.divides(o) {
            return None;
        }
        let mut e = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = o.0[i] - self.0[i];
        }
        Some(Mono(e))
    }

    /// Single variable index when the monomial is one of the variables.
    pub fn as_var(&self) -> Option<usize> {
        if self.deg() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    /// Key for the basis order: ascending degree, and within a degree the
    /// first declared variable comes first (1, x, y, x^2, xy, y^2, ...).
    pub fn basis_cmp(&self, o: &Mono) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| o.0.cmp(&self.0))
    }

    pub fn format(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| self.0.cmp(&o.0))
    }
}
