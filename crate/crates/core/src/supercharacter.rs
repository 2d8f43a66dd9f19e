//! Closed-form supercharacter values: elementary character values on every
//! superclass, the general product formula, degrees, the reference values
//! on the ambient unitriangular group, and the coadjoint-orbit evaluation
//! for the long roots of the symplectic family.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::cyclotomic::CycNumber;
use crate::field::Fq;
use crate::group::{GroupElement, Model};
use crate::roots::{BasicPair, Entry, Family, Root};
use crate::superclass::{box_entries, is_singular};
use crate::Error;

/// q^k as an exact rational, k possibly negative.
fn q_power(model: &Model, k: i64) -> BigRational {
    let q = BigInt::from(model.fq.q());
    if k >= 0 {
        BigRational::from_integer(q.pow(k as u32))
    } else {
        BigRational::new(BigInt::one(), q.pow((-k) as u32))
    }
}

/// The degree of the supercharacter attached to a basic pair: the index of
/// the pattern subgroup the product character lives on.
pub fn degree(model: &Model, pair: &BasicPair) -> BigUint {
    BigUint::from(model.fq.q()).pow(model.degree_exponent(pair) as u32)
}

/// True when every entry of E(alpha) is regular for the class. The two
/// formulations (all entries regular / some entry regular) agree because
/// regularity is mirror-closed; this is asserted.
pub fn root_is_regular(model: &Model, dset: &[Entry], root: Root) -> bool {
    let all = root.entries().iter().all(|&e| !is_singular(model, dset, e));
    debug_assert_eq!(
        all,
        root.entries().iter().any(|&e| !is_singular(model, dset, e)),
        "regularity must be mirror-closed"
    );
    all
}

/// The count t(alpha, D') of decorated entries inside the open box of the
/// representative of alpha.
pub fn box_count(model: &Model, dset: &[Entry], root: Root) -> usize {
    box_entries(model, dset, root.rep()).len()
}

/// The long roots of the class pair strictly below a given long root.
fn long_roots_below(class: &BasicPair, i: u32) -> Vec<(u32, Fq)> {
    class
        .parts()
        .iter()
        .filter_map(|&(r, v)| match r {
            Root::TwoEps(k) if k > i => Some((k, v)),
            _ => None,
        })
        .collect()
}

/// The value of the elementary character attached to (alpha, r) on the
/// superclass of the given basic pair.
pub fn elementary_value(
    model: &Model,
    root: Root,
    r: Fq,
    class: &BasicPair,
) -> Result<CycNumber, Error> {
    if r.is_zero() {
        return Err(Error::InvalidParameter(
            "elementary character labels must be nonzero".into(),
        ));
    }
    if !model.rs.contains_root(root) {
        return Err(Error::InvalidRoot(root.text()));
    }
    let p = model.fq.p();
    let labeled = class.entry_labels(&model.rs, &model.fq);
    let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
    if !root_is_regular(model, &dset, root) {
        return Ok(CycNumber::zero(p));
    }
    let t = box_count(model, &dset, root) as i64;
    let deg = model.root_constraints(root).len() as i64;
    let mut scalar_exp = deg - t;
    let mut value = CycNumber::from_integer(p, 1);

    if let (Family::C, Root::TwoEps(i)) = (model.family(), root) {
        let below = long_roots_below(class, i);
        let t0 = below.len() as i64;
        assert!(
            (t - t0) % 2 == 0,
            "box count parity broken: t = {t}, t0 = {t0}"
        );
        scalar_exp += (t - t0) / 2;
        if t0 > 0 {
            value = value.checked_mul(&model.fq.gauss_sum().pow(t0 as u32))?;
        }
        let rinv = model.fq.inv(r)?;
        for (_, s) in below {
            if model.fq.eta(model.fq.mul(rinv, s))? < 0 {
                value = -&value;
            }
        }
    }
    if let Some(phi) = class.phi(root) {
        value = value.checked_mul(&model.fq.theta(model.fq.mul(r, phi)))?;
    }
    Ok(value.scale(&q_power(model, scalar_exp)))
}

/// The constant value of the supercharacter of one basic pair on the
/// superclass of another, as a single closed form.
pub fn supercharacter_value(
    model: &Model,
    ch: &BasicPair,
    class: &BasicPair,
) -> Result<CycNumber, Error> {
    let p = model.fq.p();
    let f = &model.fq;
    let labeled = class.entry_labels(&model.rs, f);
    let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
    if !ch
        .roots()
        .all(|root| root_is_regular(model, &dset, root))
    {
        return Ok(CycNumber::zero(p));
    }
    let t: i64 = ch
        .roots()
        .map(|root| box_count(model, &dset, root) as i64)
        .sum();
    let deg = model.degree_exponent(ch) as i64;
    let mut scalar_exp = deg - t;
    let mut value = CycNumber::from_integer(p, 1);

    if model.family() == Family::C {
        let mut t0 = 0i64;
        for &(root, phi) in ch.parts() {
            let Root::TwoEps(i) = root else { continue };
            let below = long_roots_below(class, i);
            t0 += below.len() as i64;
            let phi_inv = f.inv(phi)?;
            for (_, s) in below {
                if f.eta(f.mul(phi_inv, s))? < 0 {
                    value = -&value;
                }
            }
        }
        assert!((t - t0) % 2 == 0, "box count parity broken");
        scalar_exp += (t - t0) / 2;
        if t0 > 0 {
            value = value.checked_mul(&f.gauss_sum().pow(t0 as u32))?;
        }
    }
    for &(root, phi) in ch.parts() {
        if let Some(phi2) = class.phi(root) {
            value = value.checked_mul(&f.theta(f.mul(phi, phi2)))?;
        }
    }
    Ok(value.scale(&q_power(model, scalar_exp)))
}

/// The canonical superclass representative z_{D,phi}.
pub fn representative(model: &Model, pair: &BasicPair) -> GroupElement {
    model.group_from_lie(&model.lie_from_pair(pair))
}

/// The value of an elementary character of the ambient unitriangular group
/// on the superclass decorated by an arbitrary basic entry set: q^(-t)
/// times the degree, twisted by theta on decorated entries, zero on
/// singular ones.
pub fn unitriangular_elementary_value(
    model: &Model,
    e: Entry,
    r: Fq,
    labeled: &[(Entry, Fq)],
) -> Result<CycNumber, Error> {
    if r.is_zero() {
        return Err(Error::InvalidParameter(
            "elementary character labels must be nonzero".into(),
        ));
    }
    let p = model.fq.p();
    let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
    if is_singular(model, &dset, e) {
        return Ok(CycNumber::zero(p));
    }
    let gap = (model.rs.pos(e.col) - model.rs.pos(e.row) - 1) as i64;
    let t = box_entries(model, &dset, e).len() as i64;
    let mut value = CycNumber::from_integer(p, 1);
    if let Some(&(_, phi)) = labeled.iter().find(|(d, _)| *d == e) {
        value = model.fq.theta(model.fq.mul(r, phi));
    }
    Ok(value.scale(&q_power(model, gap - t)))
}

/// Evaluates the elementary character of a symplectic long root at an
/// arbitrary group element by summing the additive character over the
/// coadjoint orbit: q^(2(n-i)) functionals, each evaluated entrywise
/// against a_z through the trace pairing.
pub fn long_root_kirillov_value(
    model: &Model,
    i: u32,
    r: Fq,
    z: &GroupElement,
    bound: u64,
) -> Result<CycNumber, Error> {
    if model.family() != Family::C {
        return Err(Error::InvalidParameter(
            "long roots exist in the symplectic family only".into(),
        ));
    }
    if r.is_zero() {
        return Err(Error::InvalidParameter("label must be nonzero".into()));
    }
    let n = model.rank() as u32;
    if i < 1 || i > n {
        return Err(Error::InvalidRoot(format!("2e{i}")));
    }
    let f = &model.fq;
    let q = f.q();
    let width = 2 * (n - i) as usize;
    let mut orbit_size: u64 = 1;
    for _ in 0..width {
        orbit_size = orbit_size
            .checked_mul(q)
            .filter(|&v| v <= bound)
            .ok_or(Error::BoundExceeded {
                what: "coadjoint orbit enumeration".into(),
                bound,
            })?;
    }

    // indices strictly between i and -i in mirror order
    let mut between: Vec<i32> = (i as i32 + 1..=n as i32).collect();
    between.extend((i as i32 + 1..=n as i32).rev().map(|k| -k));
    debug_assert_eq!(between.len(), width);
    let slot = |a: i32| -> usize {
        between
            .iter()
            .position(|&b| b == a)
            .expect("index inside the box")
    };

    let az = model.lie_from_group(z);
    let az_at = |row: i32, col: i32| model.entry(&az.0, Entry::new(row, col));

    let p = f.p();
    let mut counts = vec![0i64; p as usize];
    let rinv = f.inv(r)?;
    let mut c = vec![Fq::ZERO; width];
    loop {
        // f_c paired against a_z over every ambient entry of the box:
        // row i, column -i, and the interior rank-one block
        let mut acc = f.mul(r, az_at(i as i32, -(i as i32)));
        for (bi, &b) in between.iter().enumerate() {
            acc = f.add(acc, f.mul(c[bi], az_at(i as i32, b)));
        }
        for &a in &between {
            // the column -i value of the functional at row a
            let v = c[slot(-a)];
            let ua = if a > 0 { v } else { f.neg(v) };
            acc = f.add(acc, f.mul(ua, az_at(a, -(i as i32))));
        }
        for (ai, &a) in between.iter().enumerate() {
            let va = c[slot(-a)];
            let ua = if a > 0 { va } else { f.neg(va) };
            for &b in &between[ai + 1..] {
                let uab = f.mul(rinv, f.mul(c[slot(b)], ua));
                acc = f.add(acc, f.mul(uab, az_at(a, b)));
            }
        }
        counts[f.trace(acc) as usize] += 1;

        // odometer over the functional parameters
        let mut pos = 0;
        loop {
            if pos == width {
                break;
            }
            c[pos].0 += 1;
            if c[pos].0 < q {
                break;
            }
            c[pos] = Fq::ZERO;
            pos += 1;
        }
        if pos == width {
            break;
        }
    }

    let sum = CycNumber::from_root_counts(p, &counts);
    Ok(sum.scale(&q_power(model, -((n - i) as i64))))
}
