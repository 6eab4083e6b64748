//! Evaluators for every YB map in the catalog.
//!
//! A map acts on a pair of points `(p, q)` with parameters `(a, b)`. Points of
//! the 6-dimensional maps carry their aux coordinate last: `p = [x1, x2, X]`.
//! Vector maps use `p = [x1 block, x2 block]`. Non-parametric maps ignore
//! `(a, b)`.

use std::sync::OnceLock;

use crate::algebra::{Expr, Field};
use crate::error::{Error, Result};

/// Records the smallest guard magnitude seen during an evaluation.
#[derive(Clone, Debug, Default)]
pub struct GuardLog {
    enabled: bool,
    pub nearest: Option<(&'static str, f64)>,
}

impl GuardLog {
    /// A log that only reports exact zeros (no float conversion cost).
    pub fn silent() -> Self {
        GuardLog::default()
    }

    pub fn recording() -> Self {
        GuardLog {
            enabled: true,
            nearest: None,
        }
    }

    fn note<T: Field>(&mut self, name: &'static str, value: &T) {
        if !self.enabled {
            return;
        }
        let mag = value.approx().abs();
        if self.nearest.is_none_or(|(_, m)| mag < m) {
            self.nearest = Some((name, mag));
        }
    }

    /// `1/value`, failing with a singular-locus error naming `name` at zero.
    pub fn inv<T: Field>(&mut self, value: T, name: &'static str) -> Result<T> {
        if value.is_zero() {
            return Err(Error::SingularLocus { guard: name.into() });
        }
        self.note(name, &value);
        Ok(value.recip())
    }
}

/// Sign convention of the vector NLS map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NlsSign {
    /// `u1 = y1 + (b-a)/(1+z) x1`; reduces to the Adler–Yamilov map at N=1.
    AdlerYamilov,
    /// `u1 = y1 + (a-b)/(1+z) x1`.
    Reversed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Adler,
    Nls6,
    AdlerYamilov,
    Dnls6Orig,
    Dnls6Reparam,
    Dnls4,
    Dihedral6,
    DihedralLinear,
    VectorNls {
        n: usize,
        sign: NlsSign,
    },
    VectorZ2 {
        n: usize,
    },
    /// `(p, q) -> (q, p)` on points of the given length.
    Permutation {
        point_len: usize,
    },
    /// The wrapped map with the first output coordinate shifted by one.
    Mutated(Box<MapKind>),
}

impl MapKind {
    /// Length of one point, aux coordinate included.
    pub fn point_len(&self) -> usize {
        match self {
            MapKind::Adler => 1,
            MapKind::AdlerYamilov | MapKind::Dnls4 | MapKind::DihedralLinear => 2,
            MapKind::Nls6 | MapKind::Dnls6Orig | MapKind::Dnls6Reparam | MapKind::Dihedral6 => 3,
            MapKind::VectorNls { n, .. } | MapKind::VectorZ2 { n } => 2 * n,
            MapKind::Permutation { point_len } => *point_len,
            MapKind::Mutated(inner) => inner.point_len(),
        }
    }

    pub fn has_aux(&self) -> bool {
        match self {
            MapKind::Nls6 | MapKind::Dnls6Orig | MapKind::Dnls6Reparam | MapKind::Dihedral6 => true,
            MapKind::Mutated(inner) => inner.has_aux(),
            _ => false,
        }
    }

    pub fn is_parametric(&self) -> bool {
        match self {
            MapKind::Nls6
            | MapKind::Dnls6Orig
            | MapKind::Dnls6Reparam
            | MapKind::Permutation { .. } => false,
            MapKind::Mutated(inner) => inner.is_parametric(),
            _ => true,
        }
    }

    /// Y_{a,b}(p, q).
    pub fn apply<T: Field>(
        &self,
        p: &[T],
        q: &[T],
        a: &T,
        b: &T,
        log: &mut GuardLog,
    ) -> Result<(Vec<T>, Vec<T>)> {
        let len = self.point_len();
        if p.len() != len || q.len() != len {
            return Err(Error::SizeMismatch {
                left: len,
                right: if p.len() != len { p.len() } else { q.len() },
            });
        }
        match self {
            MapKind::Adler => adler(p, q, a, b, log),
            MapKind::Nls6 => nls6(p, q, log),
            MapKind::AdlerYamilov => adler_yamilov(p, q, a, b, log),
            MapKind::Dnls6Orig => dnls6_orig(p, q, log),
            MapKind::Dnls6Reparam => dnls6_reparam(p, q, log),
            MapKind::Dnls4 => dnls4(p, q, a, b, log),
            MapKind::Dihedral6 => dihedral6(p, q, a, b, log),
            MapKind::DihedralLinear => dihedral_linear(p, q, a, b),
            MapKind::VectorNls { n, sign } => vector_nls(*n, *sign, p, q, a, b, log),
            MapKind::VectorZ2 { n } => vector_z2(*n, p, q, a, b, log),
            MapKind::Permutation { .. } => Ok((q.to_vec(), p.to_vec())),
            MapKind::Mutated(inner) => {
                let (mut u, v) = inner.apply(p, q, a, b, log)?;
                u[0] = u[0].clone() + T::one();
                Ok((u, v))
            }
        }
    }
}

fn c<T: Field>(n: i64) -> T {
    T::from_i64(n)
}

fn adler<T: Field>(p: &[T], q: &[T], a: &T, b: &T, log: &mut GuardLog) -> Result<(Vec<T>, Vec<T>)> {
    let (x, y) = (&p[0], &q[0]);
    let r = (a.clone() - b.clone()) * log.inv(x.clone() + y.clone(), "x+y")?;
    Ok((vec![y.clone() - r.clone()], vec![x.clone() + r]))
}

fn adler_yamilov<T: Field>(
    p: &[T],
    q: &[T],
    a: &T,
    b: &T,
    log: &mut GuardLog,
) -> Result<(Vec<T>, Vec<T>)> {
    let (x1, x2, y1, y2) = (&p[0], &p[1], &q[0], &q[1]);
    let k = (a.clone() - b.clone()) * log.inv(T::one() + x1.clone() * y2.clone(), "1+x1*y2")?;
    Ok((
        vec![y1.clone() - k.clone() * x1.clone(), y2.clone()],
        vec![x1.clone(), x2.clone() + k * y2.clone()],
    ))
}

fn nls6<T: Field>(p: &[T], q: &[T], log: &mut GuardLog) -> Result<(Vec<T>, Vec<T>)> {
    let (x1, x2, big_x) = (p[0].clone(), p[1].clone(), p[2].clone());
    let (y1, y2, big_y) = (q[0].clone(), q[1].clone(), q[2].clone());
    let d = log.inv(T::one() + x1.clone() * y2.clone(), "1+x1*y2")?;
    let u1 = (y1.clone() + x1.square() * x2.clone() - x1.clone() * big_x.clone()
        + x1.clone() * big_y.clone())
        * d.clone();
    let v2 = (x2.clone() + y1.clone() * y2.square() + y2.clone() * big_x.clone()
        - y2.clone() * big_y.clone())
        * d.clone();
    let big_u = (y1.clone() * y2.clone() - x1.clone() * x2.clone()
        + big_x.clone()
        + x1.clone() * y2.clone() * big_y.clone())
        * d.clone();
    let big_v = (x1.clone() * x2 - y1 * y2.clone() + x1.clone() * y2.clone() * big_x + big_y) * d;
    Ok((vec![u1, y2, big_u], vec![x1, v2, big_v]))
}

struct Guards {
    first: &'static str,
    second: &'static str,
    third: &'static str,
}

/// `(f1, f2, f3)` of the original DNLS parametrisation at `(x, y, X, Y)`.
fn dnls6_orig_f<T: Field>(
    p: &[T],
    q: &[T],
    names: &Guards,
    log: &mut GuardLog,
) -> Result<(T, T, T)> {
    let (x1, x2, big_x) = (p[0].clone(), p[1].clone(), p[2].clone());
    let (y1, y2, big_y) = (q[0].clone(), q[1].clone(), q[2].clone());
    let num3 = x1.clone() * x2.clone() * big_x.clone() + x1.clone() * y2.clone() * big_y.clone()
        - T::one();
    let den3 = x1.clone() * y2.clone() * big_x.clone() + y1.clone() * y2.clone() * big_y.clone()
        - T::one();
    let inv_num3 = log.inv(num3.clone(), names.first)?;
    let f3 = num3 * log.inv(den3, names.second)? * big_x.clone();
    let inv_f3 = log.inv(f3.clone(), names.third)?;
    let inner = x1.clone() * big_x.clone() + (y1.clone() - x1.clone()) * big_y.clone()
        - x1.clone() * x2.clone() * y1 * big_x.clone() * big_y
        - x1.square() * x2 * big_x.square();
    let f1 = -(inv_f3 * inner * inv_num3);
    Ok((f1, y2, f3))
}

/// `(πy, πx, Y, X)`: the argument order that produces the v-side.
fn mirror<T: Field>(p: &[T], q: &[T]) -> (Vec<T>, Vec<T>) {
    (
        vec![q[1].clone(), q[0].clone(), q[2].clone()],
        vec![p[1].clone(), p[0].clone(), p[2].clone()],
    )
}

fn dnls6_orig<T: Field>(p: &[T], q: &[T], log: &mut GuardLog) -> Result<(Vec<T>, Vec<T>)> {
    let (f1, f2, f3) = dnls6_orig_f(
        p,
        q,
        &Guards {
            first: "x1*x2*X+x1*y2*Y-1",
            second: "x1*y2*X+y1*y2*Y-1",
            third: "X",
        },
        log,
    )?;
    let (mp, mq) = mirror(p, q);
    let (g1, g2, g3) = dnls6_orig_f(
        &mp,
        &mq,
        &Guards {
            first: "y1*y2*Y+x1*y2*X-1",
            second: "x1*y2*Y+x1*x2*X-1",
            third: "Y",
        },
        log,
    )?;
    Ok((vec![f1, f2, f3], vec![g2, g1, g3]))
}

fn dnls6_reparam_f<T: Field>(p: &[T], q: &[T], log: &mut GuardLog) -> Result<(T, T, T)> {
    let (x1, x2, big_x) = (p[0].clone(), p[1].clone(), p[2].clone());
    let (y1, y2, big_y) = (q[0].clone(), q[1].clone(), q[2].clone());
    // both guards map onto each other under the mirror, so names are shared
    let dx = big_x.clone() - x1.clone() * (x2.clone() + y2.clone());
    let dy = big_y.clone() - y2.clone() * (x1.clone() + y1.clone());
    let f1 = ((x1.clone() + y1.clone()) * big_x
        - x1.clone() * big_y.clone()
        - x1.clone() * x2 * (x1 + y1))
        * log.inv(dx.clone(), "X-x1*(x2+y2)")?;
    let ratio = dx * log.inv(dy, "Y-y2*(x1+y1)")?;
    Ok((f1, ratio.clone() * y2, ratio * big_y))
}

fn dnls6_reparam<T: Field>(p: &[T], q: &[T], log: &mut GuardLog) -> Result<(Vec<T>, Vec<T>)> {
    let (f1, f2, f3) = dnls6_reparam_f(p, q, log)?;
    let (mp, mq) = mirror(p, q);
    let (g1, g2, g3) = dnls6_reparam_f(&mp, &mq, log)?;
    Ok((vec![f1, f2, f3], vec![g2, g1, g3]))
}

fn dnls4<T: Field>(p: &[T], q: &[T], a: &T, b: &T, log: &mut GuardLog) -> Result<(Vec<T>, Vec<T>)> {
    let (x1, x2, y1, y2) = (&p[0], &p[1], &q[0], &q[1]);
    let z = x1.clone() * y2.clone();
    let az = a.clone() - z.clone();
    let bz = b.clone() - z;
    let inv_az = log.inv(az.clone(), "a-x1*y2")?;
    let inv_bz = log.inv(bz.clone(), "b-x1*y2")?;
    let ab = a.clone() - b.clone();
    Ok((
        vec![
            y1.clone() + ab.clone() * inv_az.clone() * x1.clone(),
            az * inv_bz.clone() * y2.clone(),
        ],
        vec![
            bz * inv_az * x1.clone(),
            x2.clone() - ab * inv_bz * y2.clone(),
        ],
    ))
}

/// The dihedral `f`, `g`, `h` polynomials over vars `[x1, x2, y1, y2, X, Y]`
/// and params `[a, b]`, transcribed once and shared by both sides.
pub(crate) fn dihedral_polys() -> &'static [Expr; 3] {
    static POLYS: OnceLock<[Expr; 3]> = OnceLock::new();
    POLYS.get_or_init(|| {
        let v = Expr::var;
        let (x1, x2, y1, y2, bx, by) = (|| v(0), || v(1), || v(2), || v(3), || v(4), || v(5));
        let a = || Expr::param(0);
        let b = || Expr::param(1);
        let n = Expr::int;
        let sq = |e: Expr| e.clone() * e;
        let m1 = |e: Expr| sq(e) - n(1);
        let prod = |es: Vec<Expr>| es.into_iter().reduce(|l, r| l * r).expect("non-empty");

        let f = Expr::sum([
            prod(vec![sq(a()), sq(b()), x1(), bx()]),
            prod(vec![
                sq(a()),
                b(),
                x2() - y2() + n(2) * x1() * x2() * y1() + sq(x1()) * (y2() - n(3) * x2()),
                bx(),
                by(),
            ]),
            prod(vec![
                sq(a()),
                m1(y2()),
                y1() * (n(1) + sq(x1())) - x1() * (n(1) + sq(y1())),
                bx(),
                sq(by()),
            ]),
            -prod(vec![a(), sq(b()), m1(x1()), y2() - x2(), sq(bx())]),
            -prod(vec![
                a(),
                b(),
                m1(x1()),
                sq(x2()) * (n(3) * x1() - y1()) - x1() - y1()
                    + n(2) * y2() * (y1() * y2() - x1() * x2()),
                sq(bx()),
                by(),
            ]),
            -prod(vec![
                a(),
                m1(x1()),
                m1(y2()),
                y2() * m1(y1()) + x2() * (sq(y1()) - n(2) * x1() * y1() + n(1)),
                sq(bx()),
                sq(by()),
            ]),
            prod(vec![
                y1(),
                sq(m1(x1())),
                m1(x2()),
                m1(y2()),
                bx() * bx() * bx(),
                sq(by()),
            ]),
            prod(vec![
                b(),
                sq(m1(x1())),
                m1(x2()),
                y2() - x2(),
                bx() * bx() * bx(),
                by(),
            ]),
            prod(vec![a() * a() * a(), b(), y1() - x1(), by()]),
        ]);
        let g = Expr::sum([
            prod(vec![sq(a()), sq(b()), bx()]),
            prod(vec![n(2), sq(a()), b(), y2(), y1() - x1(), bx(), by()]),
            prod(vec![sq(a()), m1(y2()), sq(x1() - y1()), bx(), sq(by())]),
            prod(vec![
                n(2),
                a(),
                b(),
                m1(x1()),
                n(1) - x2() * y2(),
                sq(bx()),
                by(),
            ]),
            prod(vec![
                n(2),
                a(),
                x2(),
                m1(x1()),
                m1(y2()),
                x1() - y1(),
                sq(bx()),
                sq(by()),
            ]),
            prod(vec![
                sq(m1(x1())),
                m1(x2()),
                m1(y2()),
                bx() * bx() * bx(),
                sq(by()),
            ]),
        ]);
        let h = Expr::sum([
            sq(a()) * sq(b()),
            -prod(vec![n(2), a(), sq(b()), x1(), y2() - x2(), bx()]),
            -prod(vec![
                n(2),
                a(),
                b(),
                x1() * y1() - n(1),
                m1(y2()),
                bx(),
                by(),
            ]),
            prod(vec![sq(b()), m1(x1()), sq(x2() - y2()), sq(bx())]),
            -prod(vec![
                n(2),
                b(),
                y1(),
                x2() - y2(),
                m1(x1()),
                m1(y2()),
                sq(bx()),
                by(),
            ]),
            prod(vec![m1(x1()), m1(y1()), sq(m1(y2())), sq(bx()), sq(by())]),
        ]);
        [f, g, h]
    })
}

/// `(f/g, g/h)` at the given arguments, guarding `h` before `g`.
fn dihedral_side<T: Field>(
    vars: &[T],
    params: &[T],
    names: [&'static str; 2],
    log: &mut GuardLog,
) -> Result<(T, T)> {
    let [f, g, h] = dihedral_polys();
    let hv = h.eval(vars, params)?;
    let inv_h = log.inv(hv, names[0])?;
    let gv = g.eval(vars, params)?;
    let inv_g = log.inv(gv.clone(), names[1])?;
    let fv = f.eval(vars, params)?;
    Ok((fv * inv_g, gv * inv_h))
}

fn dihedral6<T: Field>(
    p: &[T],
    q: &[T],
    a: &T,
    b: &T,
    log: &mut GuardLog,
) -> Result<(Vec<T>, Vec<T>)> {
    let vars = [
        p[0].clone(),
        p[1].clone(),
        q[0].clone(),
        q[1].clone(),
        p[2].clone(),
        q[2].clone(),
    ];
    let (u1, big_u) = dihedral_side(
        &vars,
        &[a.clone(), b.clone()],
        ["h(x,y,X,Y;a,b)", "g(x,y,X,Y;a,b)"],
        log,
    )?;
    let mirrored = [
        q[1].clone(),
        q[0].clone(),
        p[1].clone(),
        p[0].clone(),
        q[2].clone(),
        p[2].clone(),
    ];
    let (v2, big_v) = dihedral_side(
        &mirrored,
        &[b.clone(), a.clone()],
        ["h(πy,πx,Y,X;b,a)", "g(πy,πx,Y,X;b,a)"],
        log,
    )?;
    Ok((vec![u1, q[1].clone(), big_u], vec![p[0].clone(), v2, big_v]))
}

/// The 4×4 matrix of the linearised dihedral map, acting on `(x1, x2, y1, y2)`.
pub fn dihedral_linear_matrix<T: Field>(a: &T, b: &T) -> Result<[[T; 4]; 4]> {
    let check = |v: T, name: &str| -> Result<T> {
        if v.is_zero() {
            Err(Error::SingularParameter { guard: name.into() })
        } else {
            Ok(v.recip())
        }
    };
    let a1 = a.clone() + T::one();
    let b1 = b.clone() + T::one();
    let inv_a1 = check(a1.clone(), "a+1")?;
    let inv_b1 = check(b1.clone(), "b+1")?;
    let inv_ab = check(a.clone() + b.clone(), "a+b")?;
    let amb = a.clone() - b.clone();
    let z = T::zero;
    Ok([
        [
            (a.clone() - T::one()) * amb.clone() * inv_a1.clone() * inv_ab.clone(),
            amb.clone() * inv_ab.clone(),
            c::<T>(2) * a.clone() * inv_ab.clone(),
            -(a1.clone() * amb.clone() * inv_b1.clone() * inv_ab.clone()),
        ],
        [z(), z(), z(), a1.clone() * inv_b1.clone()],
        [b1.clone() * inv_a1.clone(), z(), z(), z()],
        [
            amb.clone() * b1 * inv_a1 * inv_ab.clone(),
            c::<T>(2) * b.clone() * inv_ab.clone(),
            -(amb.clone() * inv_ab.clone()),
            -((b.clone() - T::one()) * amb * inv_b1 * inv_ab),
        ],
    ])
}

fn dihedral_linear<T: Field>(p: &[T], q: &[T], a: &T, b: &T) -> Result<(Vec<T>, Vec<T>)> {
    let m = dihedral_linear_matrix(a, b)?;
    let s = [p[0].clone(), p[1].clone(), q[0].clone(), q[1].clone()];
    let out: Vec<T> = m
        .iter()
        .map(|row| {
            row.iter()
                .zip(&s)
                .map(|(r, v)| r.clone() * v.clone())
                .reduce(|l, r| l + r)
                .expect("four terms")
        })
        .collect();
    Ok((out[..2].to_vec(), out[2..].to_vec()))
}

fn dot<T: Field>(l: &[T], r: &[T]) -> T {
    l.iter()
        .zip(r)
        .fold(T::zero(), |acc, (p, q)| acc + p.clone() * q.clone())
}

fn axpy<T: Field>(y: &[T], k: &T, x: &[T]) -> Vec<T> {
    y.iter()
        .zip(x)
        .map(|(yi, xi)| yi.clone() + k.clone() * xi.clone())
        .collect()
}

fn scaled<T: Field>(k: &T, x: &[T]) -> Vec<T> {
    x.iter().map(|xi| k.clone() * xi.clone()).collect()
}

fn vector_nls<T: Field>(
    n: usize,
    sign: NlsSign,
    p: &[T],
    q: &[T],
    a: &T,
    b: &T,
    log: &mut GuardLog,
) -> Result<(Vec<T>, Vec<T>)> {
    let (x1, x2) = p.split_at(n);
    let (y1, y2) = q.split_at(n);
    let inv = log.inv(T::one() + dot(x1, y2), "1+<x1,y2>")?;
    let k = match sign {
        NlsSign::AdlerYamilov => (b.clone() - a.clone()) * inv,
        NlsSign::Reversed => (a.clone() - b.clone()) * inv,
    };
    let mut u = axpy(y1, &k, x1);
    u.extend_from_slice(y2);
    let mut v = x1.to_vec();
    v.extend(axpy(x2, &(-k), y2));
    Ok((u, v))
}

fn vector_z2<T: Field>(
    n: usize,
    p: &[T],
    q: &[T],
    a: &T,
    b: &T,
    log: &mut GuardLog,
) -> Result<(Vec<T>, Vec<T>)> {
    let (x1, x2) = p.split_at(n);
    let (y1, y2) = q.split_at(n);
    let z = dot(x1, y2);
    let az = a.clone() - z.clone();
    let bz = b.clone() - z;
    let inv_az = log.inv(az.clone(), "a-<x1,y2>")?;
    let inv_bz = log.inv(bz.clone(), "b-<x1,y2>")?;
    let amb = a.clone() - b.clone();
    let mut u = axpy(y1, &(amb.clone() * inv_az.clone()), x1);
    u.extend(scaled(&(az * inv_bz.clone()), y2));
    let mut v = scaled(&(bz * inv_az), x1);
    v.extend(axpy(x2, &(-(amb * inv_bz)), y2));
    Ok((u, v))
}
