//! Model families and the registry that selects them by name.
//!
//! A family describes the blending part of a model (everything except the
//! PWO, interaction and block columns) as a list of polynomial [`Term`]s.
//! [`crate::modelmat`] adds the remaining columns around it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::design::DesignKind;
use crate::error::{Error, Result};

/// Whether a family's model has a constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intercept {
    /// Mixture models: the linear terms already sum to one.
    Forbidden,
    Required,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monomial {
    Linear(usize),
    Square(usize),
    Cross(usize, usize),
}

/// A monomial in the component values, optionally multiplied by `A^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub monomial: Monomial,
    pub amount_power: u8,
}

impl Term {
    pub fn plain(monomial: Monomial) -> Self {
        Term {
            monomial,
            amount_power: 0,
        }
    }

    pub fn name(&self, symbol: char) -> String {
        let base = match self.monomial {
            Monomial::Linear(i) => format!("{symbol}{}", i + 1),
            Monomial::Square(i) => format!("{symbol}{}^2", i + 1),
            Monomial::Cross(i, j) => format!("{symbol}{}*{symbol}{}", i + 1, j + 1),
        };
        match self.amount_power {
            0 => base,
            1 => format!("{base}*A"),
            p => format!("{base}*A^{p}"),
        }
    }

    pub fn eval(&self, v: &[f64], amount: f64) -> f64 {
        let base = match self.monomial {
            Monomial::Linear(i) => v[i],
            Monomial::Square(i) => v[i] * v[i],
            Monomial::Cross(i, j) => v[i] * v[j],
        };
        base * amount.powi(self.amount_power as i32)
    }
}

fn linear(m: usize) -> impl Iterator<Item = Term> {
    (0..m).map(|i| Term::plain(Monomial::Linear(i)))
}

fn squares(m: usize) -> impl Iterator<Item = Term> {
    (0..m).map(|i| Term::plain(Monomial::Square(i)))
}

fn crosses(m: usize) -> impl Iterator<Item = Term> {
    crate::design::pairs(m).map(|(i, j)| Term::plain(Monomial::Cross(i, j)))
}

/// A model family for the blending part of the model.
pub trait ModelFamily: Send + Sync {
    /// Short name used on the command line (`scheffe-q`, `ca-q`, ...).
    fn name(&self) -> &'static str;

    /// Long identifier (`scheffe_quadratic`, ...); also accepted by lookup.
    fn id(&self) -> &'static str;

    fn kind(&self) -> DesignKind;

    fn intercept(&self) -> Intercept;

    /// Whether the terms multiply by powers of the total amount `A`.
    fn uses_amount(&self) -> bool {
        false
    }

    /// Blending terms in canonical order: linear, pure quadratic, cross
    /// products, then amount-multiplied groups by increasing power.
    fn terms(&self, m: usize) -> Vec<Term>;

    /// Prefix for component columns: `x` for proportions, `a` for amounts.
    fn symbol(&self) -> char {
        match self.kind() {
            DesignKind::Proportion => 'x',
            DesignKind::Amount => 'a',
        }
    }
}

impl fmt::Debug for dyn ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelFamily({})", self.name())
    }
}

macro_rules! family {
    ($ty:ident, $name:literal, $id:literal, $kind:ident, $icpt:ident, $amount:literal, |$m:ident| $terms:expr) => {
        #[derive(Debug, Clone, Copy, Default)]
        pub struct $ty;

        impl ModelFamily for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn id(&self) -> &'static str {
                $id
            }
            fn kind(&self) -> DesignKind {
                DesignKind::$kind
            }
            fn intercept(&self) -> Intercept {
                Intercept::$icpt
            }
            fn uses_amount(&self) -> bool {
                $amount
            }
            fn terms(&self, $m: usize) -> Vec<Term> {
                $terms
            }
        }
    };
}

family!(ScheffeLinear, "scheffe-l", "scheffe_linear", Proportion, Forbidden, false,
    |m| linear(m).collect());

family!(ScheffeQuadratic, "scheffe-q", "scheffe_quadratic", Proportion, Forbidden, false,
    |m| linear(m).chain(crosses(m)).collect());

family!(KQuadratic, "k-q", "k_quadratic", Proportion, Forbidden, false,
    |m| squares(m).chain(crosses(m)).collect());

family!(MixtureAmountLinear, "ma-l", "mixture_amount_linear", Proportion, Forbidden, true,
    |m| (0..2u8)
        .flat_map(|p| linear(m).map(move |t| Term { amount_power: p, ..t }))
        .collect());

family!(MixtureAmountQuadratic, "ma-q", "mixture_amount_quadratic", Proportion, Forbidden, true,
    |m| (0..3u8)
        .flat_map(|p| linear(m).chain(crosses(m)).map(move |t| Term { amount_power: p, ..t }))
        .collect());

family!(ComponentAmountLinear, "ca-l", "component_amount_linear", Amount, Required, false,
    |m| linear(m).collect());

family!(ComponentAmountQuadratic, "ca-q", "component_amount_quadratic", Amount, Required, false,
    |m| linear(m).chain(squares(m)).chain(crosses(m)).collect());

/// Families addressable by short name or long id.
#[derive(Clone, Default)]
pub struct FamilyRegistry {
    by_name: BTreeMap<&'static str, Arc<dyn ModelFamily>>,
    order: Vec<Arc<dyn ModelFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(ScheffeLinear));
        r.register(Arc::new(ScheffeQuadratic));
        r.register(Arc::new(KQuadratic));
        r.register(Arc::new(MixtureAmountLinear));
        r.register(Arc::new(MixtureAmountQuadratic));
        r.register(Arc::new(ComponentAmountLinear));
        r.register(Arc::new(ComponentAmountQuadratic));
        r
    }

    /// Shared registry of the built-in families.
    pub fn builtin() -> &'static FamilyRegistry {
        static REGISTRY: OnceLock<FamilyRegistry> = OnceLock::new();
        REGISTRY.get_or_init(FamilyRegistry::with_builtins)
    }

    /// Later registrations under the same name replace earlier ones.
    pub fn register(&mut self, family: Arc<dyn ModelFamily>) {
        self.order.retain(|f| f.name() != family.name());
        self.by_name.insert(family.name(), family.clone());
        self.by_name.insert(family.id(), family.clone());
        self.order.push(family);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ModelFamily>> {
        self.by_name.get(name).cloned().ok_or_else(|| Error::UnknownName {
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.order.iter().map(|f| f.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn ModelFamily>> {
        self.order.iter()
    }
}

/// Look up a built-in family.
pub fn family(name: &str) -> Result<Arc<dyn ModelFamily>> {
    FamilyRegistry::builtin().get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(f: &dyn ModelFamily, m: usize) -> Vec<String> {
        f.terms(m).iter().map(|t| t.name(f.symbol())).collect()
    }

    #[test]
    fn scheffe_and_k_terms() {
        assert_eq!(
            names(&ScheffeQuadratic, 3),
            ["x1", "x2", "x3", "x1*x2", "x1*x3", "x2*x3"]
        );
        assert_eq!(
            names(&KQuadratic, 3),
            ["x1^2", "x2^2", "x3^2", "x1*x2", "x1*x3", "x2*x3"]
        );
    }

    #[test]
    fn mixture_amount_quadratic_has_three_groups() {
        for m in 2..6 {
            assert_eq!(MixtureAmountQuadratic.terms(m).len(), 3 * (m + m * (m - 1) / 2));
        }
        let n = names(&MixtureAmountQuadratic, 2);
        assert_eq!(n, ["x1", "x2", "x1*x2", "x1*A", "x2*A", "x1*x2*A", "x1*A^2", "x2*A^2", "x1*x2*A^2"]);
    }

    #[test]
    fn component_amount_terms() {
        assert_eq!(
            names(&ComponentAmountQuadratic, 3),
            ["a1", "a2", "a3", "a1^2", "a2^2", "a3^2", "a1*a2", "a1*a3", "a2*a3"]
        );
        assert_eq!(ComponentAmountQuadratic.intercept(), Intercept::Required);
    }

    #[test]
    fn registry_lookup() {
        let r = FamilyRegistry::builtin();
        assert_eq!(r.get("ca-q").unwrap().id(), "component_amount_quadratic");
        assert_eq!(r.get("k_quadratic").unwrap().name(), "k-q");
        assert!(r.get("cox").is_err());
        assert_eq!(r.names().len(), 7);
    }

    #[test]
    fn term_eval() {
        let t = Term {
            monomial: Monomial::Cross(0, 2),
            amount_power: 2,
        };
        assert_eq!(t.eval(&[2.0, 5.0, 3.0], 2.0), 24.0);
    }
}
