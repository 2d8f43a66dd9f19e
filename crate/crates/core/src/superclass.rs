//! Superclasses: the bordered minors cutting out each orbit, the partition
//! of entries into regular and singular ones, orbit membership, and the
//! classification of arbitrary elements into basic pairs.

use crate::field::Fq;
use crate::group::{GroupElement, LieElement, Mat, Model};
use crate::roots::{BasicPair, Entry};
use crate::Error;

/// The bordering data of one minor: box entries sorted by column, plus the
/// sign (-1)^t sgn(sigma) from sorting their rows.
pub struct MinorFrame {
    /// Entries of the decorated set strictly below the row and strictly
    /// left of the column of the query entry, sorted by column.
    pub box_entries: Vec<Entry>,
    /// Combined sign (-1)^t sgn(sigma), where sigma sorts the rows.
    pub sign: i8,
}

/// Entries of `dset` lying in the open box of `e`: rows after `e.row`,
/// columns before `e.col`.
pub fn box_entries(model: &Model, dset: &[Entry], e: Entry) -> Vec<Entry> {
    let rs = &model.rs;
    let (pr, pc) = (rs.pos(e.row), rs.pos(e.col));
    let mut v: Vec<Entry> = dset
        .iter()
        .copied()
        .filter(|d| rs.pos(d.row) > pr && rs.pos(d.col) < pc)
        .collect();
    v.sort_by_key(|d| rs.pos(d.col));
    v
}

pub fn minor_frame(model: &Model, dset: &[Entry], e: Entry) -> MinorFrame {
    let rs = &model.rs;
    let box_entries = box_entries(model, dset, e);
    let t = box_entries.len();
    // sgn(sigma) by counting inversions of the row sequence in column order
    let rows: Vec<usize> = box_entries.iter().map(|d| rs.pos(d.row)).collect();
    let mut inversions = 0usize;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if rows[a] > rows[b] {
                inversions += 1;
            }
        }
    }
    let sign = if (t + inversions) % 2 == 0 { 1 } else { -1 };
    MinorFrame { box_entries, sign }
}

/// The bordered determinant of `u` at entry `e` with respect to the entry
/// set `dset`: rows are `e.row` then the box rows sorted, columns are the
/// box columns sorted then `e.col`.
pub fn delta_minor(model: &Model, dset: &[Entry], e: Entry, u: &Mat) -> Fq {
    let rs = &model.rs;
    let bx = box_entries(model, dset, e);
    let t = bx.len();
    if t == 0 {
        return model.entry(u, e);
    }
    let mut rows: Vec<usize> = Vec::with_capacity(t + 1);
    rows.push(rs.pos(e.row));
    let mut box_rows: Vec<usize> = bx.iter().map(|d| rs.pos(d.row)).collect();
    box_rows.sort_unstable();
    rows.extend(box_rows);
    let mut cols: Vec<usize> = bx.iter().map(|d| rs.pos(d.col)).collect();
    cols.push(rs.pos(e.col));

    let k = t + 1;
    let mut m: Vec<Fq> = Vec::with_capacity(k * k);
    for &r in &rows {
        for &c in &cols {
            m.push(u.at(r, c));
        }
    }
    determinant(model, k, &mut m)
}

/// Exact determinant over F_q by Gaussian elimination.
fn determinant(model: &Model, k: usize, m: &mut [Fq]) -> Fq {
    let f = &model.fq;
    let mut det = Fq::ONE;
    for col in 0..k {
        let pivot = (col..k).find(|&r| !m[r * k + col].is_zero());
        let Some(pr) = pivot else {
            return Fq::ZERO;
        };
        if pr != col {
            for c in 0..k {
                m.swap(pr * k + c, col * k + c);
            }
            det = f.neg(det);
        }
        let pv = m[col * k + col];
        det = f.mul(det, pv);
        let pinv = f.inv(pv).expect("nonzero pivot");
        for r in col + 1..k {
            let factor = f.mul(m[r * k + col], pinv);
            if factor.is_zero() {
                continue;
            }
            for c in col..k {
                let sub = f.mul(factor, m[col * k + c]);
                m[r * k + c] = f.sub(m[r * k + c], sub);
            }
        }
    }
    det
}

/// True when `e` is singular with respect to `dset`: some decorated entry
/// shares its row and sits in an earlier column, or shares its column and
/// sits in a later row.
pub fn is_singular(model: &Model, dset: &[Entry], e: Entry) -> bool {
    let rs = &model.rs;
    dset.iter().any(|d| {
        (d.row == e.row && rs.pos(d.col) < rs.pos(e.col))
            || (d.col == e.col && rs.pos(d.row) > rs.pos(e.row))
    })
}

/// Partition of the entry set E into regular and singular entries.
pub fn regular_entries(model: &Model, dset: &[Entry]) -> (Vec<Entry>, Vec<Entry>) {
    let mut regular = Vec::new();
    let mut singular = Vec::new();
    for &e in model.rs.entries() {
        if is_singular(model, dset, e) {
            singular.push(e);
        } else {
            regular.push(e);
        }
    }
    (regular, singular)
}

/// The closed-form minor value of the decorated representative matrix at a
/// regular entry: (-1)^t sgn(sigma) times the product of the labels in the
/// bordered frame, zero off the decorated set.
pub fn decorated_minor_value(model: &Model, labeled: &[(Entry, Fq)], e: Entry) -> Fq {
    let Some(&(_, own)) = labeled.iter().find(|(d, _)| *d == e) else {
        return Fq::ZERO;
    };
    let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
    let frame = minor_frame(model, &dset, e);
    let f = &model.fq;
    let mut acc = own;
    for b in &frame.box_entries {
        let (_, v) = labeled.iter().find(|(d, _)| d == b).expect("box is labeled");
        acc = f.mul(acc, *v);
    }
    if frame.sign < 0 {
        acc = f.neg(acc);
    }
    acc
}

/// Orbit membership: every regular minor of `a` matches the corresponding
/// minor of the decorated representative e_{D,phi}. Both sides are computed
/// as honest determinants.
pub fn membership(model: &Model, pair: &BasicPair, a: &LieElement) -> bool {
    let labeled = pair.entry_labels(&model.rs, &model.fq);
    let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
    let target = model.lie_from_pair(pair);
    for &e in model.rs.entries() {
        if is_singular(model, &dset, e) {
            continue;
        }
        if delta_minor(model, &dset, e, &a.0) != delta_minor(model, &dset, e, &target.0) {
            return false;
        }
    }
    true
}

/// Classifies a Lie element into its unique basic pair by a greedy scan of
/// the representative entries in entry order, mirroring each addition.
pub fn classify(model: &Model, a: &LieElement) -> BasicPair {
    let rs = &model.rs;
    let f = &model.fq;
    let mut labeled: Vec<(Entry, Fq)> = Vec::new();
    let mut dset: Vec<Entry> = Vec::new();
    let mut parts: Vec<(crate::roots::Root, Fq)> = Vec::new();
    for &root in rs.roots() {
        let e = root.rep();
        if is_singular(model, &dset, e) {
            continue;
        }
        let dm = delta_minor(model, &dset, e, &a.0);
        if dm.is_zero() {
            continue;
        }
        // solve the decorated-minor closed form for the new label
        let frame = minor_frame(model, &dset, e);
        let mut others = Fq::ONE;
        for b in &frame.box_entries {
            let (_, v) = labeled.iter().find(|(d, _)| d == b).expect("labeled");
            others = f.mul(others, *v);
        }
        let mut phi = f.div(dm, others).expect("labels are nonzero");
        if frame.sign < 0 {
            phi = f.neg(phi);
        }
        parts.push((root, phi));
        labeled.push((e, phi));
        dset.push(e);
        if let Some(sign) = root.mirror_sign(model.family()) {
            let me = e.mirror();
            let mv = if sign < 0 { f.neg(phi) } else { phi };
            labeled.push((me, mv));
            dset.push(me);
        }
    }
    let pair = BasicPair::new(rs, parts).expect("classification produced a basic pair");
    debug_assert!(
        membership(model, &pair, a),
        "classification inconsistent with orbit membership"
    );
    pair
}

/// The superclass of a group element, through the coordinate bijection.
pub fn superclass_of(model: &Model, z: &GroupElement) -> BasicPair {
    classify(model, &model.lie_from_group(z))
}

/// Greedy classification of an arbitrary strictly upper triangular matrix
/// over the full ambient entry universe of the unitriangular group. Returns
/// the decorated entry set. Used to cross-check the restricted classifier.
pub fn classify_ambient(model: &Model, u: &Mat) -> Vec<(Entry, Fq)> {
    let f = &model.fq;
    let mut labeled: Vec<(Entry, Fq)> = Vec::new();
    let mut dset: Vec<Entry> = Vec::new();
    for e in model.rs.ambient_entries() {
        if is_singular(model, &dset, e) {
            continue;
        }
        let dm = delta_minor(model, &dset, e, u);
        if dm.is_zero() {
            continue;
        }
        let frame = minor_frame(model, &dset, e);
        let mut others = Fq::ONE;
        for b in &frame.box_entries {
            let (_, v) = labeled.iter().find(|(d, _)| d == b).expect("labeled");
            others = f.mul(others, *v);
        }
        let mut phi = f.div(dm, others).expect("labels are nonzero");
        if frame.sign < 0 {
            phi = f.neg(phi);
        }
        labeled.push((e, phi));
        dset.push(e);
    }
    labeled.sort_by_key(|&(d, _)| model.rs.entry_rank(d));
    labeled
}

/// z - 1 as an ambient strictly upper triangular matrix.
pub fn group_minus_one(model: &Model, z: &GroupElement) -> Mat {
    let m = model.matrix_size();
    let mut out = z.0.clone();
    for k in 0..m {
        out.set(k, k, Fq::ZERO);
    }
    out
}

/// The sign exponent in the mirror law for minors,
/// `Delta_{i,j} = (-1)^(r+1) Delta_{-j,-i}`, derived from the column and
/// row sign pattern of the box. May be -1.
pub fn mirror_law_exponent(model: &Model, dset: &[Entry], e: Entry) -> i64 {
    let bx = box_entries(model, dset, e);
    let t = bx.len() as i64;
    match model.family() {
        crate::roots::Family::B | crate::roots::Family::D => t,
        crate::roots::Family::C => {
            if e.col > 0 {
                t
            } else {
                // entries whose row and column signs agree survive the
                // reflection with a sign flip each
                let same_sign = bx
                    .iter()
                    .filter(|d| (d.row > 0) == (d.col > 0))
                    .count() as i64;
                same_sign - 1
            }
        }
    }
}

/// Checks the mirror law for one element and one representative entry.
pub fn mirror_law_holds(model: &Model, dset: &[Entry], e: Entry, u: &LieElement) -> bool {
    let lhs = delta_minor(model, dset, e, &u.0);
    let rhs = delta_minor(model, dset, e.mirror(), &u.0);
    let r = mirror_law_exponent(model, dset, e);
    let rhs = if (r + 1).rem_euclid(2) == 1 {
        model.fq.neg(rhs)
    } else {
        rhs
    };
    lhs == rhs
}

/// Exhaustive classification oracle: scans every basic pair and returns the
/// unique one whose orbit contains `a`. Quadratic and independent of the
/// greedy classifier.
pub fn classify_by_membership(
    model: &Model,
    pairs: &[BasicPair],
    a: &LieElement,
) -> Result<BasicPair, Error> {
    let mut hit: Option<BasicPair> = None;
    for pair in pairs {
        if membership(model, pair, a) {
            if let Some(prev) = &hit {
                return Err(Error::Internal(format!(
                    "element lies in two orbits: {} and {}",
                    prev.id(),
                    pair.id()
                )));
            }
            hit = Some(pair.clone());
        }
    }
    hit.ok_or_else(|| Error::Internal("element lies in no orbit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::roots::{Family, Root};

    fn model(family: Family, n: u32, p: u64, e: u32) -> Model {
        Model::new(family, n, FieldCtx::new(p, e).unwrap()).unwrap()
    }

    #[test]
    fn minor_with_empty_box_is_the_entry() {
        let m = model(Family::C, 2, 3, 1);
        let a = m.lie_from_coords(&[(Root::EpsPlus(1, 2), Fq(2))]);
        assert_eq!(delta_minor(&m, &[], Entry::new(1, -2), &a.0), Fq(2));
        assert_eq!(delta_minor(&m, &[], Entry::new(1, 2), &a.0), Fq(0));
    }

    #[test]
    fn decorated_minor_matches_direct_determinant() {
        for (family, n) in [(Family::C, 2), (Family::C, 3), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            for pair in m.rs.basic_pairs(&m.fq) {
                let labeled = pair.entry_labels(&m.rs, &m.fq);
                let dset: Vec<Entry> = labeled.iter().map(|&(d, _)| d).collect();
                let target = m.lie_from_pair(&pair);
                for &e in m.rs.entries() {
                    if is_singular(&m, &dset, e) {
                        continue;
                    }
                    assert_eq!(
                        delta_minor(&m, &dset, e, &target.0),
                        decorated_minor_value(&m, &labeled, e),
                        "{family:?}{n} pair {} entry {e}",
                        pair.id()
                    );
                }
            }
        }
    }

    #[test]
    fn regular_singular_partition() {
        let m = model(Family::C, 2, 3, 1);
        // empty set: everything regular
        let (r, s) = regular_entries(&m, &[]);
        assert_eq!(r.len(), m.rs.entries().len());
        assert!(s.is_empty());

        // D = E(eps1 - eps2) = {(1,2), (-2,-1)}
        let dset = vec![Entry::new(1, 2), Entry::new(-2, -1)];
        let (r, s) = regular_entries(&m, &dset);
        assert!(s.contains(&Entry::new(1, -2)));
        assert!(s.contains(&Entry::new(1, -1)));
        assert!(s.contains(&Entry::new(2, -1)));
        assert_eq!(r.len() + s.len(), m.rs.entries().len());

        // mirror closure of regularity
        for (family, n) in [(Family::C, 3), (Family::B, 3), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            for pair in m.rs.basic_pairs(&m.fq) {
                let dset: Vec<Entry> = pair
                    .entry_labels(&m.rs, &m.fq)
                    .iter()
                    .map(|&(d, _)| d)
                    .collect();
                for &e in m.rs.entries() {
                    assert_eq!(
                        is_singular(&m, &dset, e),
                        is_singular(&m, &dset, e.mirror()),
                    );
                }
            }
        }
    }

    #[test]
    fn membership_basics() {
        let m = model(Family::C, 2, 3, 1);
        let pairs = m.rs.basic_pairs(&m.fq);
        for pair in &pairs {
            let rep = m.lie_from_pair(pair);
            assert!(membership(&m, pair, &rep), "representative of {}", pair.id());
            if !pair.is_empty() {
                let zero = m.lie_from_coords(&[]);
                assert!(!membership(&m, pair, &zero));
            }
        }
        // the zero element belongs to the empty pair only
        let zero = m.lie_from_coords(&[]);
        assert!(membership(&m, &BasicPair::empty(), &zero));
    }

    #[test]
    fn classify_simple_elements() {
        let m = model(Family::C, 2, 3, 1);
        assert!(classify(&m, &m.lie_from_coords(&[])).is_empty());
        for &root in m.rs.roots() {
            for s in m.fq.units() {
                let a = m.lie_from_coords(&[(root, s)]);
                let pair = classify(&m, &a);
                assert_eq!(pair.parts(), &[(root, s)]);
            }
        }
    }

    #[test]
    fn classify_agrees_with_membership_oracle() {
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 2)] {
            let m = model(family, n, 3, 1);
            let pairs = m.rs.basic_pairs(&m.fq);
            for a in m.enumerate_lie(100).unwrap() {
                let fast = classify(&m, &a);
                let slow = classify_by_membership(&m, &pairs, &a).unwrap();
                assert_eq!(fast, slow, "{family:?}{n}");
            }
        }
    }

    #[test]
    fn superclass_of_representatives() {
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            for pair in m.rs.basic_pairs(&m.fq) {
                let z = m.group_from_lie(&m.lie_from_pair(&pair));
                assert_eq!(superclass_of(&m, &z), pair);
            }
            assert!(superclass_of(&m, &m.identity()).is_empty());
        }
    }

    #[test]
    fn ambient_classification_of_shifted_elements() {
        // z - 1 and a_z carry the same decorated entry set with the same
        // labels, and the labels obey the mirrored-label law
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            for z in m.enumerate_group(1000).unwrap() {
                let shifted = group_minus_one(&m, &z);
                let ambient = classify_ambient(&m, &shifted);
                let pair = superclass_of(&m, &z);
                let mut expected = pair.entry_labels(&m.rs, &m.fq);
                expected.sort_by_key(|&(d, _)| m.rs.entry_rank(d));
                assert_eq!(ambient, expected, "{family:?}{n}");
            }
        }
    }

    #[test]
    fn mirror_law_on_random_elements() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for family in [Family::C, Family::B, Family::D] {
            let m = model(family, 3, 3, 1);
            let pairs = m.rs.basic_pairs(&m.fq);
            for _ in 0..200 {
                let coords: Vec<(Root, Fq)> = m
                    .rs
                    .roots()
                    .iter()
                    .map(|&r| (r, Fq(rng.gen_range(0..m.fq.q()))))
                    .collect();
                let u = m.lie_from_coords(&coords);
                let pair = &pairs[rng.gen_range(0..pairs.len())];
                let dset: Vec<Entry> = pair
                    .entry_labels(&m.rs, &m.fq)
                    .iter()
                    .map(|&(d, _)| d)
                    .collect();
                for &root in m.rs.roots() {
                    assert!(
                        mirror_law_holds(&m, &dset, root.rep(), &u),
                        "{family:?} pair {} entry {}",
                        pair.id(),
                        root.rep()
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonal_families_never_use_diagonal_entries() {
        for family in [Family::B, Family::D] {
            let m = model(family, 2, 3, 1);
            for z in m.enumerate_group(100).unwrap() {
                let ambient = classify_ambient(&m, &group_minus_one(&m, &z));
                for (e, _) in ambient {
                    assert!(e.row != -e.col, "diagonal entry {e} selected");
                }
            }
        }
    }
}
