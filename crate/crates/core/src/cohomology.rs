//! First cohomology `H^1(H, M)` of finite groups acting on lattices, and the
//! coflabby (coflasque) test built on it.
//!
//! "Coflabby" and "coflasque" are synonyms: `C` is coflabby when `H^1(H, C) = 0`
//! for every subgroup `H`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::group::{GLattice, Subgroup};
use crate::linalg::{kernel_basis, smith_normal_form, solve_columns, Integer, IntegerMatrix};

/// A finite abelian group `Z/d_1 × … × Z/d_k` with `d_1 | d_2 | …` and every `d_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    #[serde(with = "crate::serde_int::vec")]
    invariant_factors: Vec<Integer>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Builds the group from Smith diagonal entries, dropping units. Panics on a
    /// zero entry, which would mean an infinite group.
    pub fn from_elementary_divisors(divisors: impl IntoIterator<Item = Integer>) -> Self {
        let invariant_factors: Vec<Integer> = divisors.into_iter().filter(|d| !d.is_one()).collect();
        assert!(
            invariant_factors.iter().all(|d| !d.is_zero()),
            "quotient has a free part"
        );
        debug_assert!(invariant_factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        FiniteAbelianGroup { invariant_factors }
    }

    pub fn invariant_factors(&self) -> &[Integer] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Integer {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// `span(K) / span(B)` for a saturated basis `K` (columns) and `span(B) ⊆ span(K)`.
fn quotient(k: &IntegerMatrix, b: &IntegerMatrix) -> FiniteAbelianGroup {
    if k.cols() == 0 {
        return FiniteAbelianGroup::trivial();
    }
    let coords = solve_columns(k, b).expect("coboundaries lie in the cocycle lattice");
    let snf = smith_normal_form(&coords);
    let mut diag = snf.diagonal();
    diag.resize(k.cols(), Integer::zero());
    FiniteAbelianGroup::from_elementary_divisors(diag)
}

/// `H^1(H, M)` by the generator-cocycle method.
///
/// A cocycle is determined by its values on the generators `g_1..g_k` of `H`.
/// Walking `H` breadth-first by left multiplication expresses every `c_x` as a
/// linear function of those values through `c_{g x} = c_g + g·c_x`; each edge of
/// the Cayley graph not used by the walk yields a relation. Those relations cut
/// out `Z^1`, the coboundaries `(g_i m - m)_i` span `B^1`, and the quotient is
/// read off a Smith normal form.
pub fn h1(m: &GLattice, h: &Subgroup) -> FiniteAbelianGroup {
    let gens = h.generators();
    let (n, k) = (m.rank(), gens.len());
    if k == 0 || n == 0 {
        return FiniteAbelianGroup::trivial();
    }
    let group = m.group();
    let width = n * k;

    // phi[x]: n × width matrix with c_x = phi[x] · (c_{g_1}, …, c_{g_k})
    let mut phi: Vec<Option<IntegerMatrix>> = vec![None; group.order()];
    phi[0] = Some(IntegerMatrix::zeros(n, width));
    let mut queue = vec![0usize];
    let mut relations: Vec<Vec<Integer>> = Vec::new();
    let mut seen_rows: HashSet<Vec<Integer>> = HashSet::new();
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (i, &g) in gens.iter().enumerate() {
            let mut predicted = m.action(g) * phi[x].as_ref().expect("visited");
            for r in 0..n {
                *predicted.get_mut(r, i * n + r) += 1;
            }
            let y = group.mul(g, x);
            match &phi[y] {
                None => {
                    phi[y] = Some(predicted);
                    queue.push(y);
                }
                Some(existing) => {
                    let diff = existing - &predicted;
                    for r in 0..n {
                        let row = diff.row_vec(r);
                        if row.iter().all(Zero::is_zero) {
                            continue;
                        }
                        if seen_rows.insert(row.clone()) {
                            relations.push(row);
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(queue.len(), h.order());

    let system = IntegerMatrix::from_rows(relations, width).expect("uniform rows");
    let cocycles = kernel_basis(&system);
    let id = IntegerMatrix::identity(n);
    let mut coboundaries = IntegerMatrix::zeros(0, n);
    for &g in gens {
        coboundaries = coboundaries.vstack(&(m.action(g) - &id)).expect("shape");
    }
    quotient(&cocycles, &coboundaries)
}

/// `H^1(<g>, M) = ker(N) / (g - 1)M` with the norm `N = Σ_{i < ord g} g^i`.
///
/// Independent of [`h1`]; used to cross-check it on cyclic subgroups.
pub fn h1_cyclic_oracle(m: &GLattice, g: usize) -> FiniteAbelianGroup {
    let n = m.rank();
    let a = m.action(g);
    let order = m.group().element_order(g);
    let mut norm = IntegerMatrix::zeros(n, n);
    let mut power = IntegerMatrix::identity(n);
    for _ in 0..order {
        norm = &norm + &power;
        power = &power * a;
    }
    let kernel = kernel_basis(&norm);
    let image = a - &IntegerMatrix::identity(n);
    quotient(&kernel, &image)
}

/// Result of the coflabby test: failing subgroup classes with their `H^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoflabbyReport {
    pub coflabby: bool,
    /// `(class index, H^1)` for every class with nonzero `H^1`.
    pub failing: Vec<(usize, FiniteAbelianGroup)>,
}

/// Tests `H^1(H, M) = 0` for one representative of each conjugacy class of
/// subgroups of `M`'s group (conjugate subgroups have isomorphic `H^1`).
pub fn is_coflabby(m: &GLattice) -> CoflabbyReport {
    let failing: Vec<(usize, FiniteAbelianGroup)> = m
        .group()
        .catalog()
        .classes()
        .iter()
        .enumerate()
        .map(|(i, h)| (i, h1(m, h)))
        .filter(|(_, c)| !c.is_trivial())
        .collect();
    CoflabbyReport {
        coflabby: failing.is_empty(),
        failing,
    }
}
