//! The unipotent group U and its Lie algebra as m x m matrices over F_q,
//! the root basis, the bijection between the two, and the pattern subgroups
//! carrying the linear characters that induce to elementary characters.

use num_bigint::BigUint;

use crate::cyclotomic::CycNumber;
use crate::field::{FieldCtx, Fq};
use crate::roots::{BasicPair, Entry, Family, Root, RootSystem};
use crate::Error;

/// A dense m x m matrix of field codes, rows and columns in mirror order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    pub m: usize,
    data: Vec<Fq>,
}

impl Mat {
    pub fn zero(m: usize) -> Self {
        Mat {
            m,
            data: vec![Fq::ZERO; m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut a = Mat::zero(m);
        for k in 0..m {
            a.data[k * m + k] = Fq::ONE;
        }
        a
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.m + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        self.data[r * self.m + c] = v;
    }

    pub fn codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.data.iter().map(|f| f.0)
    }
}

/// An element of U.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement(pub Mat);

/// An element of the Lie algebra, i.e. of the span of the root basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LieElement(pub Mat);

/// One family at one rank over one field: everything downstream hangs off
/// this context.
pub struct Model {
    pub rs: RootSystem,
    pub fq: FieldCtx,
}

impl Model {
    pub fn new(family: Family, n: u32, fq: FieldCtx) -> Result<Self, Error> {
        Ok(Model {
            rs: RootSystem::new(family, n)?,
            fq,
        })
    }

    pub fn family(&self) -> Family {
        self.rs.family
    }

    pub fn rank(&self) -> usize {
        self.rs.n as usize
    }

    pub fn matrix_size(&self) -> usize {
        self.rs.matrix_size()
    }

    /// |U| = q^|Phi| as a big integer.
    pub fn group_order(&self) -> BigUint {
        BigUint::from(self.fq.q()).pow(self.rs.root_count() as u32)
    }

    /// |U| when it fits the given bound.
    pub fn group_order_bounded(&self, bound: u64) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.rs.root_count() {
            acc = acc.checked_mul(self.fq.q())?;
            if acc > bound {
                return None;
            }
        }
        Some(acc)
    }

    #[inline]
    pub fn entry(&self, a: &Mat, e: Entry) -> Fq {
        a.at(self.rs.pos(e.row), self.rs.pos(e.col))
    }

    #[inline]
    pub fn set_entry(&self, a: &mut Mat, e: Entry, v: Fq) {
        a.set(self.rs.pos(e.row), self.rs.pos(e.col), v);
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(Mat::identity(self.matrix_size()))
    }

    pub fn mat_mul(&self, a: &Mat, b: &Mat) -> Mat {
        let m = a.m;
        let mut out = Mat::zero(m);
        for r in 0..m {
            for k in 0..m {
                let ark = a.at(r, k);
                if ark.is_zero() {
                    continue;
                }
                for c in 0..m {
                    let v = self.fq.mul(ark, b.at(k, c));
                    if !v.is_zero() {
                        out.set(r, c, self.fq.add(out.at(r, c), v));
                    }
                }
            }
        }
        out
    }

    /// Inverse of an upper unitriangular matrix via the nilpotent series.
    pub fn mat_inv_unitriangular(&self, a: &Mat) -> Mat {
        let m = a.m;
        let mut nil = a.clone();
        for k in 0..m {
            nil.set(k, k, Fq::ZERO);
        }
        let mut inv = Mat::identity(m);
        let mut term = Mat::identity(m);
        for step in 1..m {
            term = self.mat_mul(&term, &nil);
            let sign_neg = step % 2 == 1;
            for r in 0..m {
                for c in 0..m {
                    let t = term.at(r, c);
                    if t.is_zero() {
                        continue;
                    }
                    let t = if sign_neg { self.fq.neg(t) } else { t };
                    inv.set(r, c, self.fq.add(inv.at(r, c), t));
                }
            }
        }
        inv
    }

    // ---- root basis and the Lie algebra ----

    /// The basis element e_alpha.
    pub fn lie_basis(&self, r: Root) -> Result<LieElement, Error> {
        if !self.rs.contains_root(r) {
            return Err(Error::InvalidRoot(r.text()));
        }
        Ok(self.lie_from_coords(&[(r, Fq::ONE)]))
    }

    /// The linear combination sum coords(alpha) e_alpha.
    pub fn lie_from_coords(&self, coords: &[(Root, Fq)]) -> LieElement {
        let mut a = Mat::zero(self.matrix_size());
        for &(r, v) in coords {
            debug_assert!(self.rs.contains_root(r));
            let rep = r.rep();
            let cur = self.entry(&a, rep);
            self.set_entry(&mut a, rep, self.fq.add(cur, v));
            if let Some(sign) = r.mirror_sign(self.family()) {
                let mv = if sign < 0 { self.fq.neg(v) } else { v };
                let me = rep.mirror();
                let cur = self.entry(&a, me);
                self.set_entry(&mut a, me, self.fq.add(cur, mv));
            }
        }
        LieElement(a)
    }

    /// e_{D,phi} for a basic pair.
    pub fn lie_from_pair(&self, pair: &BasicPair) -> LieElement {
        self.lie_from_coords(pair.parts())
    }

    /// Reads the coordinates of a Lie element off its representative entries.
    pub fn coords_of_lie(&self, a: &LieElement) -> Vec<(Root, Fq)> {
        self.rs
            .roots()
            .iter()
            .map(|&r| (r, self.entry(&a.0, r.rep())))
            .filter(|&(_, v)| !v.is_zero())
            .collect()
    }

    fn half(&self) -> Fq {
        let two = self.fq.add(Fq::ONE, Fq::ONE);
        self.fq.inv(two).expect("p is odd")
    }

    /// The group element z with a_z equal to the given Lie element.
    pub fn group_from_lie(&self, a: &LieElement) -> GroupElement {
        let n = self.rank();
        let m = self.matrix_size();
        let f = &self.fq;
        let a = &a.0;
        debug_assert!(self.validate_lie(a).is_ok());

        // x = 1 + u on the upper-left block
        let mut x = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                let v = a.at(r, c);
                x[r * n + c] = if r == c { f.add(v, Fq::ONE) } else { v };
            }
        }
        // the stored w is the symmetrized block; the group carries
        // w - (1/2) v v^T J in family B
        let off = m - n;
        let mut w = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                w[r * n + c] = a.at(r, off + c);
            }
        }
        let mut v_col = vec![Fq::ZERO; n];
        if self.family() == Family::B {
            for r in 0..n {
                v_col[r] = a.at(r, n);
            }
            let half = self.half();
            for r in 0..n {
                for c in 0..n {
                    let corr = f.mul(half, f.mul(v_col[r], v_col[n - 1 - c]));
                    w[r * n + c] = f.sub(w[r * n + c], corr);
                }
            }
        }

        let xw = small_mul(f, n, &x, &w);
        let xinv = small_inv_unitriangular(f, n, &x);

        let mut z = Mat::identity(m);
        for r in 0..n {
            for c in 0..n {
                z.set(r, c, x[r * n + c]);
                z.set(r, off + c, xw[r * n + c]);
                // lower right block J x^{-T} J
                z.set(off + r, off + c, xinv[(n - 1 - c) * n + (n - 1 - r)]);
            }
        }
        if self.family() == Family::B {
            let xv = small_mul_vec(f, n, &x, &v_col);
            for r in 0..n {
                z.set(r, n, xv[r]);
                // middle row is -v^T J
                z.set(n, off + r, f.neg(v_col[n - 1 - r]));
            }
        }
        debug_assert!(self.validate_group(&z).is_ok());
        GroupElement(z)
    }

    /// The inverse bijection: a_z from z.
    pub fn lie_from_group(&self, z: &GroupElement) -> LieElement {
        let n = self.rank();
        let m = self.matrix_size();
        let f = &self.fq;
        let z = &z.0;
        debug_assert!(self.validate_group(z).is_ok());

        let mut x = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                x[r * n + c] = z.at(r, c);
            }
        }
        let xinv = small_inv_unitriangular(f, n, &x);
        let off = m - n;
        let mut tr = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                tr[r * n + c] = z.at(r, off + c);
            }
        }
        let mut w = small_mul(f, n, &xinv, &tr);

        let mut a = Mat::zero(m);
        let mut v_col = vec![Fq::ZERO; n];
        if self.family() == Family::B {
            let mut mid = vec![Fq::ZERO; n];
            for r in 0..n {
                mid[r] = z.at(r, n);
            }
            v_col = small_mul_vec(f, n, &xinv, &mid);
            let half = self.half();
            for r in 0..n {
                for c in 0..n {
                    let corr = f.mul(half, f.mul(v_col[r], v_col[n - 1 - c]));
                    w[r * n + c] = f.add(w[r * n + c], corr);
                }
            }
            for r in 0..n {
                a.set(r, n, v_col[r]);
                a.set(n, off + r, f.neg(v_col[n - 1 - r]));
            }
        }
        for r in 0..n {
            for c in 0..n {
                let u = if r == c {
                    f.sub(x[r * n + c], Fq::ONE)
                } else {
                    x[r * n + c]
                };
                a.set(r, c, u);
                a.set(r, off + c, w[r * n + c]);
                // lower right block -J u^T J
                a.set(off + (n - 1 - c), off + (n - 1 - r), f.neg(u));
            }
        }
        debug_assert!(self.validate_lie(&a).is_ok());
        LieElement(a)
    }

    pub fn group_mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let z = self.mat_mul(&a.0, &b.0);
        debug_assert!(self.validate_group(&z).is_ok(), "product left U");
        GroupElement(z)
    }

    pub fn group_inv(&self, a: &GroupElement) -> GroupElement {
        let z = self.mat_inv_unitriangular(&a.0);
        debug_assert!(self.validate_group(&z).is_ok(), "inverse left U");
        GroupElement(z)
    }

    pub fn conjugate(&self, x: &GroupElement, z: &GroupElement) -> GroupElement {
        let xi = self.group_inv(x);
        self.group_mul(&self.group_mul(x, z), &xi)
    }

    // ---- membership ----

    /// Checks the block description of U, naming the violated condition.
    pub fn validate_group(&self, z: &Mat) -> Result<(), Error> {
        let m = self.matrix_size();
        if z.m != m {
            return Err(Error::NotInGroup(format!(
                "matrix size {} but the group needs {m}",
                z.m
            )));
        }
        let f = &self.fq;
        for r in 0..m {
            if z.at(r, r) != Fq::ONE {
                return Err(Error::NotInGroup(format!(
                    "diagonal entry at position {r} is not 1"
                )));
            }
            for c in 0..r {
                if !z.at(r, c).is_zero() {
                    return Err(Error::NotInGroup(format!(
                        "entry below the diagonal at ({},{}) is nonzero",
                        self.rs.index_at(r),
                        self.rs.index_at(c)
                    )));
                }
            }
        }
        let n = self.rank();
        let off = m - n;
        let mut x = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                x[r * n + c] = z.at(r, c);
            }
        }
        let xinv = small_inv_unitriangular(f, n, &x);
        for r in 0..n {
            for c in 0..n {
                if z.at(off + r, off + c) != xinv[(n - 1 - c) * n + (n - 1 - r)] {
                    return Err(Error::NotInGroup(
                        "lower-right block is not J x^-T J".into(),
                    ));
                }
            }
        }
        let mut tr = vec![Fq::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                tr[r * n + c] = z.at(r, off + c);
            }
        }
        let w = small_mul(f, n, &xinv, &tr);
        let mut v_col = vec![Fq::ZERO; n];
        if self.family() == Family::B {
            let mut mid = vec![Fq::ZERO; n];
            for r in 0..n {
                mid[r] = z.at(r, n);
            }
            v_col = small_mul_vec(f, n, &xinv, &mid);
            for c in 0..n {
                if z.at(n, off + c) != f.neg(v_col[n - 1 - c]) {
                    return Err(Error::NotInGroup(
                        "middle row is not -v^T J".into(),
                    ));
                }
            }
        }
        // family condition on the w block: J w^T -/+ w J = 0 (or -v v^T)
        for r in 0..n {
            for c in 0..n {
                // (J w^T)[r][c] = w[c][n-1-r], (w J)[r][c] = w[r][n-1-c]
                let lhs_a = w[c * n + (n - 1 - r)];
                let lhs_b = w[r * n + (n - 1 - c)];
                let ok = match self.family() {
                    Family::C => lhs_a == lhs_b,
                    Family::D => f.add(lhs_a, lhs_b).is_zero(),
                    Family::B => {
                        f.add(lhs_a, lhs_b) == f.neg(f.mul(v_col[r], v_col[c]))
                    }
                };
                if !ok {
                    return Err(Error::NotInGroup(format!(
                        "symmetry condition on the upper-right block fails at ({},{})",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks membership in the span of the root basis.
    pub fn validate_lie(&self, a: &Mat) -> Result<(), Error> {
        let m = self.matrix_size();
        if a.m != m {
            return Err(Error::NotInGroup(format!(
                "matrix size {} but the algebra needs {m}",
                a.m
            )));
        }
        let f = &self.fq;
        for r in 0..m {
            for c in 0..=r {
                if !a.at(r, c).is_zero() {
                    return Err(Error::NotInGroup(
                        "not strictly upper triangular".into(),
                    ));
                }
            }
        }
        let n = self.rank();
        let off = m - n;
        for r in 0..n {
            for c in 0..n {
                let lower = a.at(off + (n - 1 - c), off + (n - 1 - r));
                if lower != f.neg(a.at(r, c)) {
                    return Err(Error::NotInGroup(
                        "lower-right block is not -J u^T J".into(),
                    ));
                }
                let wa = a.at(c, off + (n - 1 - r));
                let wb = a.at(r, off + (n - 1 - c));
                let ok = match self.family() {
                    Family::C => wa == wb,
                    Family::B | Family::D => f.add(wa, wb).is_zero(),
                };
                if !ok {
                    return Err(Error::NotInGroup(
                        "symmetry condition on the w block fails".into(),
                    ));
                }
            }
        }
        if self.family() == Family::B {
            for r in 0..n {
                if a.at(n, off + (n - 1 - r)) != f.neg(a.at(r, n)) {
                    return Err(Error::NotInGroup(
                        "middle row is not -v^T J".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    // ---- enumeration ----

    /// Streams every element of U exactly once, through the coordinate
    /// bijection with the Lie algebra.
    pub fn enumerate_group(
        &self,
        bound: u64,
    ) -> Result<impl Iterator<Item = GroupElement> + '_, Error> {
        let order = self
            .group_order_bounded(bound)
            .ok_or(Error::BoundExceeded {
                what: "group order".into(),
                bound,
            })?;
        let roots: Vec<Root> = self.rs.roots().to_vec();
        let q = self.fq.q();
        Ok((0..order).map(move |mut k| {
            let coords: Vec<(Root, Fq)> = roots
                .iter()
                .map(|&r| {
                    let c = Fq(k % q);
                    k /= q;
                    (r, c)
                })
                .collect();
            self.group_from_lie(&self.lie_from_coords(&coords))
        }))
    }

    /// Streams the Lie algebra the same way.
    pub fn enumerate_lie(
        &self,
        bound: u64,
    ) -> Result<impl Iterator<Item = LieElement> + '_, Error> {
        let order = self
            .group_order_bounded(bound)
            .ok_or(Error::BoundExceeded {
                what: "algebra order".into(),
                bound,
            })?;
        let roots: Vec<Root> = self.rs.roots().to_vec();
        let q = self.fq.q();
        Ok((0..order).map(move |mut k| {
            let coords: Vec<(Root, Fq)> = roots
                .iter()
                .map(|&r| {
                    let c = Fq(k % q);
                    k /= q;
                    (r, c)
                })
                .collect();
            self.lie_from_coords(&coords)
        }))
    }

    // ---- pattern subgroups and their linear characters ----

    /// The entries forced to vanish in the subgroup attached to a root.
    pub fn root_constraints(&self, r: Root) -> Vec<Entry> {
        let n = self.rs.n as i32;
        let mut out = Vec::new();
        match r {
            Root::EpsMinus(i, j) => {
                for k in i as i32 + 1..j as i32 {
                    out.push(Entry::new(i as i32, k));
                }
            }
            Root::EpsPlus(i, j) => {
                for k in i as i32 + 1..=n {
                    out.push(Entry::new(i as i32, k));
                }
                for l in j as i32 + 1..=n {
                    out.push(Entry::new(j as i32, l));
                }
                if self.family() == Family::B {
                    out.push(Entry::new(j as i32, 0));
                }
            }
            Root::TwoEps(i) | Root::Eps(i) => {
                for k in i as i32 + 1..=n {
                    out.push(Entry::new(i as i32, k));
                }
            }
        }
        out
    }

    pub fn in_u_alpha(&self, r: Root, z: &GroupElement) -> bool {
        self.root_constraints(r)
            .iter()
            .all(|&e| self.entry(&z.0, e).is_zero())
    }

    pub fn in_u_d(&self, pair: &BasicPair, z: &GroupElement) -> bool {
        pair.roots().all(|r| self.in_u_alpha(r, z))
    }

    /// log_q of the index [U : U_D]; constraint sets of distinct roots in a
    /// basic subset are disjoint, so they just add up.
    pub fn degree_exponent(&self, pair: &BasicPair) -> u64 {
        pair.roots()
            .map(|r| self.root_constraints(r).len() as u64)
            .sum()
    }

    /// The exponent k with lambda_{D,phi}(z) = zeta_p^k, or None when z is
    /// outside U_D.
    pub fn lambda_exponent(&self, pair: &BasicPair, z: &GroupElement) -> Option<u64> {
        if !self.in_u_d(pair, z) {
            return None;
        }
        let mut acc = 0u64;
        for &(r, v) in pair.parts() {
            let x = self.entry(&z.0, r.rep());
            acc = (acc + self.fq.trace(self.fq.mul(v, x))) % self.fq.p();
        }
        Some(acc)
    }

    /// lambda_{D,phi}(z) as an exact root of unity.
    pub fn lambda_value(&self, pair: &BasicPair, z: &GroupElement) -> Result<CycNumber, Error> {
        let k = self
            .lambda_exponent(pair, z)
            .ok_or_else(|| Error::NotInGroup("element is outside U_D".into()))?;
        Ok(CycNumber::root_of_unity(self.fq.p(), k as i64).expect("odd prime"))
    }

    // ---- serialization ----

    pub fn matrix_to_json(&self, a: &Mat) -> serde_json::Value {
        let m = self.matrix_size();
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|r| (0..m).map(|c| a.at(r, c).0).collect())
            .collect();
        serde_json::json!({
            "indices": self.rs.indices(),
            "rows": rows,
        })
    }

    pub fn matrix_from_rows(&self, rows: &[Vec<u64>]) -> Result<Mat, Error> {
        let m = self.matrix_size();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter(format!(
                "expected a {m} x {m} matrix"
            )));
        }
        let mut a = Mat::zero(m);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v >= self.fq.q() {
                    return Err(Error::InvalidParameter(format!(
                        "entry {v} is not a canonical code below q = {}",
                        self.fq.q()
                    )));
                }
                a.set(r, c, Fq(v));
            }
        }
        Ok(a)
    }
}

fn small_mul(f: &FieldCtx, n: usize, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; n * n];
    for r in 0..n {
        for k in 0..n {
            let ark = a[r * n + k];
            if ark.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = f.mul(ark, b[k * n + c]);
                if !v.is_zero() {
                    out[r * n + c] = f.add(out[r * n + c], v);
                }
            }
        }
    }
    out
}

fn small_mul_vec(f: &FieldCtx, n: usize, a: &[Fq], v: &[Fq]) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; n];
    for r in 0..n {
        for k in 0..n {
            out[r] = f.add(out[r], f.mul(a[r * n + k], v[k]));
        }
    }
    out
}

fn small_inv_unitriangular(f: &FieldCtx, n: usize, a: &[Fq]) -> Vec<Fq> {
    let mut nil = a.to_vec();
    for k in 0..n {
        nil[k * n + k] = Fq::ZERO;
    }
    let mut inv = vec![Fq::ZERO; n * n];
    for k in 0..n {
        inv[k * n + k] = Fq::ONE;
    }
    let mut term: Vec<Fq> = inv.clone();
    for step in 1..n {
        term = small_mul(f, n, &term, &nil);
        for (o, &t) in inv.iter_mut().zip(&term) {
            let t = if step % 2 == 1 { f.neg(t) } else { t };
            *o = f.add(*o, t);
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(family: Family, n: u32, p: u64, e: u32) -> Model {
        Model::new(family, n, FieldCtx::new(p, e).unwrap()).unwrap()
    }

    #[test]
    fn lie_basis_matrices() {
        let c2 = model(Family::C, 2, 3, 1);
        // eps1 + eps2 in the symplectic family: e_{1,-2} + e_{2,-1}
        let a = c2.lie_basis(Root::EpsPlus(1, 2)).unwrap();
        assert_eq!(c2.entry(&a.0, Entry::new(1, -2)), Fq(1));
        assert_eq!(c2.entry(&a.0, Entry::new(2, -1)), Fq(1));

        let d2 = model(Family::D, 2, 3, 1);
        let a = d2.lie_basis(Root::EpsPlus(1, 2)).unwrap();
        assert_eq!(d2.entry(&a.0, Entry::new(1, -2)), Fq(1));
        assert_eq!(d2.entry(&a.0, Entry::new(2, -1)), Fq(2)); // -1 mod 3

        let b2 = model(Family::B, 2, 3, 1);
        let a = b2.lie_basis(Root::Eps(1)).unwrap();
        assert_eq!(b2.entry(&a.0, Entry::new(1, 0)), Fq(1));
        assert_eq!(b2.entry(&a.0, Entry::new(0, -1)), Fq(2));

        // eps1 - eps2: e_{1,2} - e_{-2,-1} in every family
        for m in [&c2, &d2, &b2] {
            let a = m.lie_basis(Root::EpsMinus(1, 2)).unwrap();
            assert_eq!(m.entry(&a.0, Entry::new(1, 2)), Fq(1));
            assert_eq!(m.entry(&a.0, Entry::new(-2, -1)), Fq(2));
            m.validate_lie(&a.0).unwrap();
        }
    }

    #[test]
    fn lie_coords_round_trip() {
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            for a in m.enumerate_lie(1_000_000).unwrap() {
                m.validate_lie(&a.0).unwrap();
                let coords = m.coords_of_lie(&a);
                assert_eq!(m.lie_from_coords(&coords), a);
            }
        }
    }

    #[test]
    fn group_lie_bijection() {
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            let mut seen = std::collections::HashSet::new();
            let mut count = 0u64;
            for a in m.enumerate_lie(1_000_000).unwrap() {
                let z = m.group_from_lie(&a);
                m.validate_group(&z.0).unwrap();
                assert_eq!(m.lie_from_group(&z), a, "round trip failed");
                seen.insert(z.0.clone());
                count += 1;
            }
            assert_eq!(seen.len() as u64, count, "enumeration repeated an element");
            assert_eq!(count, m.group_order_bounded(1_000_000).unwrap());
        }
    }

    #[test]
    fn zero_maps_to_identity() {
        let m = model(Family::B, 2, 3, 1);
        let z = m.group_from_lie(&m.lie_from_coords(&[]));
        assert_eq!(z, m.identity());
        assert_eq!(m.lie_from_group(&m.identity()).0, Mat::zero(5));
    }

    #[test]
    fn single_root_elements() {
        // 1 + s e_beta for a long root: blocks compose trivially
        let m = model(Family::C, 2, 3, 1);
        let beta = Root::TwoEps(1);
        let a = m.lie_from_coords(&[(beta, Fq(2))]);
        let z = m.group_from_lie(&a);
        let mut expected = Mat::identity(4);
        m.set_entry(&mut expected, Entry::new(1, -1), Fq(2));
        assert_eq!(z.0, expected);

        // (1 + s e_beta)(1 + t e_beta) = 1 + (s+t) e_beta since e_beta^2 = 0
        let zs = m.group_from_lie(&m.lie_from_coords(&[(beta, Fq(1))]));
        let zt = m.group_from_lie(&m.lie_from_coords(&[(beta, Fq(2))]));
        let prod = m.group_mul(&zs, &zt);
        assert_eq!(prod, m.identity());
    }

    #[test]
    fn group_axioms_exhaustive_small() {
        let m = model(Family::D, 2, 3, 1);
        let elems: Vec<GroupElement> = m.enumerate_group(100).unwrap().collect();
        for a in &elems {
            assert_eq!(m.group_mul(a, &m.group_inv(a)), m.identity());
            for b in &elems {
                let ab = m.group_mul(a, b);
                m.validate_group(&ab.0).unwrap();
                for c in &elems {
                    assert_eq!(
                        m.group_mul(&ab, c),
                        m.group_mul(a, &m.group_mul(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_bound() {
        let m = model(Family::C, 2, 3, 1);
        assert!(m.enumerate_group(80).is_err());
        assert_eq!(m.enumerate_group(81).unwrap().count(), 81);
    }

    #[test]
    fn subgroup_membership_patterns() {
        let c2 = model(Family::C, 2, 3, 1);
        // adjacent eps_i - eps_j imposes nothing
        assert!(c2.root_constraints(Root::EpsMinus(1, 2)).is_empty());
        // long root 2 eps_1 at n = 2 forces the (1,2) entry to vanish
        assert_eq!(
            c2.root_constraints(Root::TwoEps(1)),
            vec![Entry::new(1, 2)]
        );
        for z in c2.enumerate_group(100).unwrap() {
            let in_alpha = c2.in_u_alpha(Root::TwoEps(1), &z);
            assert_eq!(in_alpha, c2.entry(&z.0, Entry::new(1, 2)).is_zero());
        }
        // identity is in every U_alpha
        for &r in c2.rs.roots() {
            assert!(c2.in_u_alpha(r, &c2.identity()));
        }
    }

    #[test]
    fn u_alpha_subgroup_closure() {
        for (family, n) in [(Family::C, 2), (Family::B, 2), (Family::D, 3)] {
            let m = model(family, n, 3, 1);
            let elems: Vec<GroupElement> = m.enumerate_group(1000).unwrap().collect();
            for &r in m.rs.roots() {
                let members: Vec<&GroupElement> =
                    elems.iter().filter(|z| m.in_u_alpha(r, z)).collect();
                // index is a power of q
                let idx = elems.len() / members.len();
                assert_eq!(
                    idx as u64,
                    m.fq.q().pow(m.root_constraints(r).len() as u32)
                );
                for a in &members {
                    assert!(m.in_u_alpha(r, &m.group_inv(a)));
                    for b in &members {
                        assert!(m.in_u_alpha(r, &m.group_mul(a, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_is_multiplicative_on_u_d() {
        let fq = FieldCtx::new(3, 1).unwrap();
        for family in [Family::C, Family::B] {
            let m = Model::new(family, 2, FieldCtx::new(3, 1).unwrap()).unwrap();
            let _ = &fq;
            let elems: Vec<GroupElement> = m.enumerate_group(100).unwrap().collect();
            for pair in m.rs.basic_pairs(&m.fq) {
                let members: Vec<&GroupElement> =
                    elems.iter().filter(|z| m.in_u_d(&pair, z)).collect();
                assert_eq!(
                    members.len() as u64 * m.fq.q().pow(m.degree_exponent(&pair) as u32),
                    elems.len() as u64,
                    "index of U_D is q^(constraint count)"
                );
                for a in &members {
                    for b in &members {
                        let ab = m.group_mul(a, b);
                        let la = m.lambda_value(&pair, a).unwrap();
                        let lb = m.lambda_value(&pair, b).unwrap();
                        let lab = m.lambda_value(&pair, &ab).unwrap();
                        assert_eq!(lab, la.checked_mul(&lb).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_outside_u_d_is_an_error() {
        let m = model(Family::C, 2, 3, 1);
        let pair = BasicPair::new(&m.rs, vec![(Root::TwoEps(1), Fq(1))]).unwrap();
        // an element with z_{1,2} != 0 is outside U_{2 eps_1}
        let z = m.group_from_lie(&m.lie_from_coords(&[(Root::EpsMinus(1, 2), Fq(1))]));
        assert!(m.lambda_value(&pair, &z).is_err());
        assert_eq!(
            m.lambda_value(&pair, &m.identity()).unwrap(),
            CycNumber::from_integer(3, 1)
        );
    }

    #[test]
    fn b_family_block_conditions_hold() {
        let m = model(Family::B, 2, 3, 1);
        // every enumerated group element satisfies the quadratic block
        // condition J w^T + w J = -v v^T on its own blocks
        for z in m.enumerate_group(100).unwrap() {
            m.validate_group(&z.0).unwrap();
        }
        // and every Lie element the linear one
        for a in m.enumerate_lie(100).unwrap() {
            m.validate_lie(&a.0).unwrap();
        }
    }

    #[test]
    fn rejects_malformed_matrices() {
        let m = model(Family::C, 2, 3, 1);
        let mut bad = Mat::identity(4);
        bad.set(2, 0, Fq(1));
        assert!(m.validate_group(&bad).is_err());
        // break the symplectic symmetry: w block must be symmetric about
        // the antidiagonal
        let mut bad = Mat::identity(4);
        m.set_entry(&mut bad, Entry::new(1, -2), Fq(1));
        assert!(m.validate_group(&bad).is_err());
        m.set_entry(&mut bad, Entry::new(2, -1), Fq(1));
        assert!(m.validate_group(&bad).is_ok());
    }
}
