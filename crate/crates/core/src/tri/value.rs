use std::fmt;

/// One of the three Kleene truth values.
///
/// The derived order `True < Undec < False` is fixed for canonical
/// serialization only; it carries no logical meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriValue {
    True,
    Undec,
    False,
}

impl TriValue {
    pub const ALL: [TriValue; 3] = [TriValue::True, TriValue::Undec, TriValue::False];

    pub fn negate(self) -> TriValue {
        match self {
            TriValue::True => TriValue::False,
            TriValue::Undec => TriValue::Undec,
            TriValue::False => TriValue::True,
        }
    }

    pub fn and(self, other: TriValue) -> TriValue {
        match (self, other) {
            (TriValue::False, _) | (_, TriValue::False) => TriValue::False,
            (TriValue::Undec, _) | (_, TriValue::Undec) => TriValue::Undec,
            (TriValue::True, TriValue::True) => TriValue::True,
        }
    }

    pub fn or(self, other: TriValue) -> TriValue {
        match (self, other) {
            (TriValue::True, _) | (_, TriValue::True) => TriValue::True,
            (TriValue::Undec, _) | (_, TriValue::Undec) => TriValue::Undec,
            (TriValue::False, TriValue::False) => TriValue::False,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TriValue::True => "T",
            TriValue::Undec => "U",
            TriValue::False => "F",
        }
    }
}

impl fmt::Display for TriValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::TriValue::{self, False as F, True as T, Undec as U};

    #[test]
    fn conjunction_table() {
        let expected = [
            ((T, T), T),
            ((T, U), U),
            ((T, F), F),
            ((U, T), U),
            ((U, U), U),
            ((U, F), F),
            ((F, T), F),
            ((F, U), F),
            ((F, F), F),
        ];
        for ((a, b), r) in expected {
            assert_eq!(a.and(b), r, "{a} & {b}");
        }
    }

    #[test]
    fn disjunction_table() {
        let expected = [
            ((T, T), T),
            ((T, U), T),
            ((T, F), T),
            ((U, T), T),
            ((U, U), U),
            ((U, F), U),
            ((F, T), T),
            ((F, U), U),
            ((F, F), F),
        ];
        for ((a, b), r) in expected {
            assert_eq!(a.or(b), r, "{a} | {b}");
        }
    }

    #[test]
    fn negation_table() {
        assert_eq!(T.negate(), F);
        assert_eq!(U.negate(), U);
        assert_eq!(F.negate(), T);
    }

    #[test]
    fn serialization_order() {
        let mut vals = vec![F, T, U];
        vals.sort();
        assert_eq!(vals, vec![T, U, F]);
    }

    #[test]
    fn connectives_are_commutative_and_associative() {
        for a in TriValue::ALL {
            for b in TriValue::ALL {
                assert_eq!(a.and(b), b.and(a));
                assert_eq!(a.or(b), b.or(a));
                for c in TriValue::ALL {
                    assert_eq!(a.and(b.and(c)), a.and(b).and(c));
                    assert_eq!(a.or(b.or(c)), a.or(b).or(c));
                }
            }
        }
    }
}
