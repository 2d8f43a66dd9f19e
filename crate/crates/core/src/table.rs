//! The supercharacter table: rows are supercharacters, columns are
//! superclasses, both indexed by the basic pairs in enumeration order.
//! Frobenius inner products, the two orthogonality relations, and the
//! decomposition of the regular character all reduce to exact identities
//! between the table entries.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cyclotomic::CycNumber;
use crate::group::Model;
use crate::roots::BasicPair;
use crate::superclass::superclass_of;
use crate::supercharacter::{degree, supercharacter_value};
use crate::Error;

/// The square table of supercharacter values with the column weights,
/// row degrees and row norms needed by every identity downstream.
pub struct SuperTable {
    pub pairs: Vec<BasicPair>,
    /// values[row][col] = value of supercharacter `row` on superclass `col`
    pub values: Vec<Vec<CycNumber>>,
    /// |K| per column
    pub weights: Vec<u64>,
    pub degrees: Vec<BigUint>,
    /// Frobenius norm <xi, xi> per row, a positive rational
    pub norms: Vec<BigRational>,
    pub group_order: u64,
}

impl SuperTable {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair_index(&self, pair: &BasicPair) -> Option<usize> {
        self.pairs.iter().position(|p| p == pair)
    }

    /// Exact Frobenius inner product of two rows, class-weighted.
    pub fn inner_product(&self, r1: usize, r2: usize) -> CycNumber {
        inner_product_weighted(
            &self.values[r1],
            &self.values[r2],
            &self.weights,
            self.group_order,
        )
    }
}

/// (1/|U|) sum over classes of |K| f(K) conj(g(K)).
pub fn inner_product_weighted(
    f: &[CycNumber],
    g: &[CycNumber],
    weights: &[u64],
    group_order: u64,
) -> CycNumber {
    let p = f[0].prime();
    let mut acc = CycNumber::zero(p);
    for ((a, b), &w) in f.iter().zip(g).zip(weights) {
        let term = a
            .checked_mul(&b.conjugate())
            .expect("same prime")
            .scale(&BigRational::from_integer(BigInt::from(w)));
        acc = acc.checked_add(&term).expect("same prime");
    }
    acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(group_order)))
}

/// Builds the full table from the closed forms: values cell by cell,
/// weights by classifying every group element, norms from the rows.
pub fn build_table(model: &Model, enumeration_bound: u64) -> Result<SuperTable, Error> {
    let pairs = model.rs.basic_pairs(&model.fq);
    let group_order =
        model
            .group_order_bounded(enumeration_bound)
            .ok_or(Error::BoundExceeded {
                what: "group order (needed for superclass sizes)".into(),
                bound: enumeration_bound,
            })?;

    let mut weights = vec![0u64; pairs.len()];
    for z in model.enumerate_group(enumeration_bound)? {
        let class = superclass_of(model, &z);
        let idx = pairs
            .iter()
            .position(|p| *p == class)
            .ok_or_else(|| Error::Internal("classified into an unlisted pair".into()))?;
        weights[idx] += 1;
    }
    build_table_from_parts(model, pairs, weights, group_order)
}

/// Assembles the table when the pair list and class sizes are already
/// known, e.g. from a brute-force context.
pub fn build_table_from_parts(
    model: &Model,
    pairs: Vec<BasicPair>,
    weights: Vec<u64>,
    group_order: u64,
) -> Result<SuperTable, Error> {
    debug_assert_eq!(weights.iter().sum::<u64>(), group_order);
    let mut values = Vec::with_capacity(pairs.len());
    for ch in &pairs {
        let mut row = Vec::with_capacity(pairs.len());
        for cl in &pairs {
            row.push(supercharacter_value(model, ch, cl)?);
        }
        values.push(row);
    }

    let degrees: Vec<BigUint> = pairs.iter().map(|p| degree(model, p)).collect();

    let mut norms = Vec::with_capacity(pairs.len());
    for r in 0..pairs.len() {
        let ip = inner_product_weighted(&values[r], &values[r], &weights, group_order);
        let norm = ip
            .as_rational()
            .ok_or_else(|| Error::Internal("row norm is not rational".into()))?;
        if !norm.is_positive() {
            return Err(Error::Internal("row norm is not positive".into()));
        }
        norms.push(norm);
    }

    Ok(SuperTable {
        pairs,
        values,
        weights,
        degrees,
        norms,
        group_order,
    })
}

/// Outcome of one family of identity checks over the table.
pub struct IdentityReport {
    pub instances: u64,
    pub failure: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Row orthogonality: the weighted inner product of two rows is delta times
/// the row norm.
pub fn check_row_orthogonality(table: &SuperTable) -> IdentityReport {
    let k = table.size();
    let mut instances = 0;
    for r1 in 0..k {
        for r2 in 0..k {
            instances += 1;
            let ip = table.inner_product(r1, r2);
            let ok = if r1 == r2 {
                ip.as_rational().as_ref() == Some(&table.norms[r1])
            } else {
                ip.is_zero()
            };
            if !ok {
                return IdentityReport {
                    instances,
                    failure: Some(format!(
                        "row pair ({}, {}): got {}",
                        table.pairs[r1].id(),
                        table.pairs[r2].id(),
                        ip
                    )),
                };
            }
        }
    }
    IdentityReport {
        instances,
        failure: None,
    }
}

/// Column orthogonality: summing value products over rows, each scaled by
/// the inverse row norm, gives delta times |U| / |K|.
pub fn check_column_orthogonality(table: &SuperTable) -> IdentityReport {
    let k = table.size();
    let p = model_prime(table);
    let mut instances = 0;
    for c1 in 0..k {
        for c2 in 0..k {
            instances += 1;
            let mut acc = CycNumber::zero(p);
            for r in 0..k {
                let term = table.values[r][c1]
                    .checked_mul(&table.values[r][c2].conjugate())
                    .expect("same prime")
                    .scale(&table.norms[r].recip());
                acc = acc.checked_add(&term).expect("same prime");
            }
            let expected = if c1 == c2 {
                CycNumber::from_rational(
                    p,
                    BigRational::new(
                        BigInt::from(table.group_order),
                        BigInt::from(table.weights[c1]),
                    ),
                )
            } else {
                CycNumber::zero(p)
            };
            if acc != expected {
                return IdentityReport {
                    instances,
                    failure: Some(format!(
                        "column pair ({}, {}): got {}",
                        table.pairs[c1].id(),
                        table.pairs[c2].id(),
                        acc
                    )),
                };
            }
        }
    }
    IdentityReport {
        instances,
        failure: None,
    }
}

fn model_prime(table: &SuperTable) -> u64 {
    table.values[0][0].prime()
}

/// The multiplicities of the supercharacters inside the regular character:
/// degree over norm, a positive integer for every row; the combination
/// takes the value |U| on the identity class and 0 elsewhere.
pub fn regular_decomposition(table: &SuperTable) -> Result<Vec<BigUint>, Error> {
    let k = table.size();
    let p = model_prime(table);
    let mut coeffs = Vec::with_capacity(k);
    for r in 0..k {
        let m = BigRational::from_integer(BigInt::from(table.degrees[r].clone()))
            / table.norms[r].clone();
        if !m.is_integer() || !m.is_positive() {
            return Err(Error::Internal(format!(
                "regular multiplicity of {} is {}, not a positive integer",
                table.pairs[r].id(),
                m
            )));
        }
        coeffs.push(m.to_integer().to_biguint().expect("positive"));
    }
    // identity column is the empty pair, listed first
    for c in 0..k {
        let mut acc = CycNumber::zero(p);
        for r in 0..k {
            let m = BigRational::from_integer(BigInt::from(coeffs[r].clone()));
            acc = acc
                .checked_add(&table.values[r][c].scale(&m))
                .expect("same prime");
        }
        let expected = if table.pairs[c].is_empty() {
            CycNumber::from_integer(p, 0)
                .checked_add(&CycNumber::from_rational(
                    p,
                    BigRational::from_integer(BigInt::from(table.group_order)),
                ))
                .expect("same prime")
        } else {
            CycNumber::zero(p)
        };
        if acc != expected {
            return Err(Error::Internal(format!(
                "regular character is {} on class {}",
                acc,
                table.pairs[c].id()
            )));
        }
    }
    Ok(coeffs)
}

/// The table as CSV: a header row with the class ids, a weight row with
/// |K|, then one row per supercharacter with id, degree, norm and the
/// values as cyclotomic literals.
pub fn table_to_csv(table: &SuperTable) -> String {
    fn field(s: String) -> String {
        if s.contains(',') || s.contains('"') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s
        }
    }
    let mut out = String::new();
    let mut header = vec!["id".to_string(), "degree".to_string(), "norm".to_string()];
    header.extend(table.pairs.iter().map(|p| field(p.id())));
    out.push_str(&header.join(","));
    out.push('\n');
    let mut wrow = vec!["|K|".to_string(), String::new(), String::new()];
    wrow.extend(table.weights.iter().map(|w| w.to_string()));
    out.push_str(&wrow.join(","));
    out.push('\n');
    for r in 0..table.size() {
        let mut row = vec![
            field(table.pairs[r].id()),
            table.degrees[r].to_string(),
            format!("{}/{}", table.norms[r].numer(), table.norms[r].denom()),
        ];
        row.extend(table.values[r].iter().map(|v| field(v.to_literal())));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// The table as JSON, with values as arrays of exact coefficient strings.
pub fn table_to_json(model: &Model, table: &SuperTable) -> serde_json::Value {
    serde_json::json!({
        "family": model.family().to_string(),
        "n": model.rs.n,
        "p": model.fq.p(),
        "e": model.fq.e(),
        "modulus": model.fq.modulus(),
        "group_order": table.group_order,
        "basic_pairs": table.pairs.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "sizes": table.weights,
        "degrees": table.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "norms": table
            .norms
            .iter()
            .map(|n| format!("{}/{}", n.numer(), n.denom()))
            .collect::<Vec<_>>(),
        "values": table
            .values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_string_coeffs())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::roots::Family;
    use num_traits::One;

    fn table(family: Family, n: u32, p: u64) -> SuperTable {
        let m = Model::new(family, n, FieldCtx::new(p, 1).unwrap()).unwrap();
        build_table(&m, 10_000).unwrap()
    }

    #[test]
    fn table_shape_and_weights() {
        let t = table(Family::D, 2, 3);
        assert_eq!(t.size(), 5);
        assert_eq!(t.weights.iter().sum::<u64>(), 9);
        let t = table(Family::C, 2, 3);
        assert_eq!(t.size(), 17);
        assert_eq!(t.weights.iter().sum::<u64>(), 81);
        // identity class has weight 1 and carries the degree column
        let id_col = t.pairs.iter().position(|p| p.is_empty()).unwrap();
        assert_eq!(t.weights[id_col], 1);
        for r in 0..t.size() {
            assert_eq!(
                t.values[r][id_col].as_rational().unwrap(),
                BigRational::from_integer(BigInt::from(t.degrees[r].clone()))
            );
        }
    }

    #[test]
    fn trivial_row_is_all_ones() {
        let t = table(Family::C, 2, 3);
        let trivial = t.pairs.iter().position(|p| p.is_empty()).unwrap();
        for c in 0..t.size() {
            assert_eq!(
                t.values[trivial][c].as_rational().unwrap(),
                BigRational::one()
            );
        }
        assert_eq!(t.norms[trivial], BigRational::one());
    }

    #[test]
    fn orthogonality_small() {
        for (family, n) in [(Family::D, 2), (Family::C, 2)] {
            let t = table(family, n, 3);
            let rows = check_row_orthogonality(&t);
            assert!(rows.passed(), "{:?}", rows.failure);
            let cols = check_column_orthogonality(&t);
            assert!(cols.passed(), "{:?}", cols.failure);
        }
    }

    #[test]
    fn regular_character_decomposition() {
        let t = table(Family::C, 2, 3);
        let coeffs = regular_decomposition(&t).unwrap();
        // trivial character appears once
        let trivial = t.pairs.iter().position(|p| p.is_empty()).unwrap();
        assert_eq!(coeffs[trivial], BigUint::from(1u32));
        // sum of m * degree = |U|
        let total: BigUint = coeffs
            .iter()
            .zip(&t.degrees)
            .map(|(m, d)| m * d)
            .sum();
        assert_eq!(total, BigUint::from(81u32));
    }

    #[test]
    fn csv_is_deterministic_and_square() {
        let t1 = table(Family::D, 2, 3);
        let t2 = table(Family::D, 2, 3);
        let c1 = table_to_csv(&t1);
        let c2 = table_to_csv(&t2);
        assert_eq!(c1, c2);
        assert_eq!(c1.lines().count(), 2 + t1.size());
    }
}
