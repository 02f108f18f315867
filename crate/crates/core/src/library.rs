//! Built-in corpus of small categories and query shapes.
//!
//! The category library: discrete categories on 1–3 objects, the posets
//! `[n]` for `n ≤ 3`, free categories of every DAG quiver on at most three
//! vertices (up to isomorphism), the monoid ℤ/2, the walking idempotent and
//! the walking isomorphism. Every entry has at most 4 objects and 12
//! morphisms.

use std::sync::Arc;

use crate::fincat::{free_category, FinCategory, Morphism, Quiver};

#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: String,
    pub category: Arc<FinCategory>,
}

fn entry(name: impl Into<String>, category: FinCategory) -> LibraryEntry {
    LibraryEntry {
        name: name.into(),
        category: Arc::new(category),
    }
}

/// `k` objects and only identities.
pub fn discrete(k: usize) -> FinCategory {
    let objects = (0..k).map(|i| format!("x{i}")).collect();
    let morphisms = (0..k).map(|i| Morphism::new(format!("id_x{i}"), i, i)).collect();
    FinCategory::new(objects, morphisms, (0..k).collect(), (0..k).map(|i| (i, i, i)))
        .expect("discrete category is valid")
}

/// The ordinal `[n] = {0 < 1 < … < n}` as a category. Identities come first
/// (morphism `i` is `1_i`), then the pairs `i < j` in lexicographic order.
pub fn poset(n: usize) -> FinCategory {
    let mut pairs: Vec<(usize, usize)> = (0..=n).map(|i| (i, i)).collect();
    for i in 0..=n {
        for j in i + 1..=n {
            pairs.push((i, j));
        }
    }
    let morphisms = pairs
        .iter()
        .map(|&(i, j)| {
            let label = if i == j {
                format!("id_{i}")
            } else {
                format!("{i}≤{j}")
            };
            Morphism::new(label, i, j)
        })
        .collect();
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
    FinCategory::from_composition_fn(
        (0..=n).map(|i| i.to_string()).collect(),
        morphisms,
        (0..=n).collect(),
        |g, f| index(pairs[f].0, pairs[g].1),
    )
    .expect("poset category is valid")
}

/// One object with morphisms `{1, s}` and `s ∘ s = 1`.
pub fn z2() -> FinCategory {
    FinCategory::from_composition_fn(
        vec!["*".into()],
        vec![Morphism::new("id", 0, 0), Morphism::new("s", 0, 0)],
        vec![0],
        |g, f| g ^ f,
    )
    .expect("Z/2 is a category")
}

/// One object with morphisms `{1, e}` and `e ∘ e = e`.
pub fn walking_idempotent() -> FinCategory {
    FinCategory::from_composition_fn(
        vec!["*".into()],
        vec![Morphism::new("id", 0, 0), Morphism::new("e", 0, 0)],
        vec![0],
        |g, f| g | f,
    )
    .expect("walking idempotent is a category")
}

/// Two objects `A`, `B` with inverse morphisms `f: A -> B`, `g: B -> A`.
pub fn walking_isomorphism() -> FinCategory {
    // ids: 0 = 1_A, 1 = 1_B, 2 = f, 3 = g
    let morphisms = vec![
        Morphism::new("id_A", 0, 0),
        Morphism::new("id_B", 1, 1),
        Morphism::new("f", 0, 1),
        Morphism::new("g", 1, 0),
    ];
    FinCategory::from_composition_fn(
        vec!["A".into(), "B".into()],
        morphisms,
        vec![0, 1],
        |g, f| match (g, f) {
            (0, x) | (1, x) => x,
            (x, 0) | (x, 1) => x,
            (3, 2) => 0,
            (2, 3) => 1,
            _ => unreachable!(),
        },
    )
    .expect("walking isomorphism is a category")
}

/// Objects `A`, `B` with `i: A -> B`, `r: B -> A`, `r ∘ i = 1_A` and the
/// split idempotent `e = i ∘ r` on `B`.
pub fn split_idempotent() -> FinCategory {
    // ids: 0 = 1_A, 1 = 1_B, 2 = i, 3 = r, 4 = e
    let morphisms = vec![
        Morphism::new("id_A", 0, 0),
        Morphism::new("id_B", 1, 1),
        Morphism::new("i", 0, 1),
        Morphism::new("r", 1, 0),
        Morphism::new("e", 1, 1),
    ];
    FinCategory::from_composition_fn(
        vec!["A".into(), "B".into()],
        morphisms,
        vec![0, 1],
        |g, f| match (g, f) {
            (0, x) | (1, x) => x,
            (x, 0) | (x, 1) => x,
            (3, 2) => 0, // r∘i
            (2, 3) => 4, // i∘r
            (4, 4) => 4,
            (4, 2) => 2, // e∘i = i∘r∘i
            (3, 4) => 3, // r∘e
            _ => unreachable!("({g}, {f})"),
        },
    )
    .expect("split idempotent is a category")
}

/// Quivers of the DAGs on at most three vertices, one per isomorphism class.
pub fn small_dag_quivers() -> Vec<(String, Quiver)> {
    let abc = ["a", "b", "c"];
    let shapes: [(&str, usize, &[(usize, usize)]); 9] = [
        ("point", 1, &[]),
        ("two-points", 2, &[]),
        ("arrow", 2, &[(0, 1)]),
        ("three-points", 3, &[]),
        ("arrow+point", 3, &[(0, 1)]),
        ("chain", 3, &[(0, 1), (1, 2)]),
        ("fork", 3, &[(1, 0), (1, 2)]),
        ("collider", 3, &[(0, 2), (1, 2)]),
        ("triangle", 3, &[(0, 1), (0, 2), (1, 2)]),
    ];
    shapes
        .iter()
        .map(|&(name, n, pairs)| {
            (
                name.to_string(),
                Quiver::from_pairs(&abc[..n], pairs).expect("valid quiver"),
            )
        })
        .collect()
}

/// The full category library used by the property suites.
pub fn categories() -> Vec<LibraryEntry> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(entry(format!("discrete-{k}"), discrete(k)));
    }
    for n in 0..=3 {
        out.push(entry(format!("poset-[{n}]"), poset(n)));
    }
    for (name, q) in small_dag_quivers() {
        out.push(entry(
            format!("free-{name}"),
            free_category(&q).expect("DAG quivers are acyclic"),
        ));
    }
    out.push(entry("z2", z2()));
    out.push(entry("walking-idempotent", walking_idempotent()));
    out.push(entry("walking-isomorphism", walking_isomorphism()));
    out
}

/// Library entries with at most three objects, used as instance schemas.
pub fn small_schemas() -> Vec<LibraryEntry> {
    categories()
        .into_iter()
        .filter(|e| e.category.num_objects() <= 3)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_respects_size_bounds() {
        for e in categories() {
            assert!(e.category.num_objects() <= 4, "{}", e.name);
            assert!(e.category.num_morphisms() <= 12, "{}", e.name);
        }
    }

    #[test]
    fn poset_morphism_counts() {
        for n in 0..=3 {
            assert_eq!(poset(n).num_morphisms(), (n + 1) * (n + 2) / 2);
        }
    }

    #[test]
    fn split_idempotent_retraction() {
        let c = split_idempotent();
        assert_eq!(c.compose(3, 2), Some(0));
        assert_eq!(c.compose(2, 3), Some(4));
    }
}
