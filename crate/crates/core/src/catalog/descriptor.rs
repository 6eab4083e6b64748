use crate::algebra::{Expr, Field, Rational};
use crate::error::{Error, Result};
use crate::lax::LaxKind;

use super::maps::{GuardLog, MapKind, NlsSign};
use super::state::PairState;

#[derive(Clone, Debug)]
pub struct NamedExpr {
    pub name: String,
    pub expr: Expr,
}

fn named(name: &str, expr: Expr) -> NamedExpr {
    NamedExpr {
        name: name.into(),
        expr,
    }
}

/// Ties a coefficient of `Tr(L(y;b)L(x;a))` to a declared invariant:
/// `coeff(power) = invariant + offset`, where `offset` involves only
/// parameters and constants.
#[derive(Clone, Debug)]
pub struct TraceMatch {
    pub power: i32,
    pub invariant: String,
    pub offset: Expr,
}

#[derive(Clone, Debug)]
pub struct PoissonStructure {
    /// Entries over the flattened state; antisymmetric.
    pub matrix: Vec<Vec<Expr>>,
    pub rank: usize,
    /// Pairs of functions whose bracket must vanish.
    pub commuting: Vec<(NamedExpr, NamedExpr)>,
}

impl PoissonStructure {
    pub fn eval(&self, point: &[Rational], params: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|e| e.eval(point, params)).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct MapDescriptor {
    pub name: String,
    pub kind: MapKind,
    pub lax: Option<LaxKind>,
    pub invariants: Vec<NamedExpr>,
    pub trace_matches: Vec<TraceMatch>,
    pub poisson: Option<PoissonStructure>,
    pub casimirs: Vec<NamedExpr>,
    /// Expected value of `Y∘Y = Id`.
    pub involutive: bool,
    /// Printed denominators that must not vanish.
    pub guards: Vec<&'static str>,
}

impl MapDescriptor {
    pub fn dim(&self) -> usize {
        2 * self.kind.point_len()
    }

    pub fn param_arity(&self) -> usize {
        if self.kind.is_parametric() {
            2
        } else {
            0
        }
    }

    pub fn has_aux(&self) -> bool {
        self.kind.has_aux()
    }

    /// Half-length of the `x` block (aux excluded).
    pub fn coords_per_point(&self) -> usize {
        self.kind.point_len() - usize::from(self.has_aux())
    }

    pub fn evaluate<T: Field>(&self, state: &PairState<T>) -> Result<PairState<T>> {
        self.evaluate_logged(state, &mut GuardLog::silent())
    }

    pub fn evaluate_logged<T: Field>(
        &self,
        state: &PairState<T>,
        log: &mut GuardLog,
    ) -> Result<PairState<T>> {
        self.validate(state)?;
        let (p, q) = state.points();
        let (a, b) = state
            .params
            .clone()
            .unwrap_or_else(|| (T::zero(), T::zero()));
        let (u, v) = self.kind.apply(&p, &q, &a, &b, log)?;
        Ok(PairState::from_points(
            u,
            v,
            self.has_aux(),
            state.params.clone(),
        ))
    }

    pub fn validate<T: Field>(&self, state: &PairState<T>) -> Result<()> {
        let n = self.coords_per_point();
        if state.x.len() != n || state.y.len() != n {
            return Err(Error::InvalidState {
                map: self.name.clone(),
                reason: format!(
                    "expected {n} coordinates per point, got {} and {}",
                    state.x.len(),
                    state.y.len()
                ),
            });
        }
        if state.aux.is_some() != self.has_aux() {
            return Err(Error::InvalidState {
                map: self.name.clone(),
                reason: if self.has_aux() {
                    "aux coordinates X, Y are required".into()
                } else {
                    "map takes no aux coordinates".into()
                },
            });
        }
        if state.params.is_some() != self.kind.is_parametric() {
            return Err(Error::InvalidState {
                map: self.name.clone(),
                reason: if self.kind.is_parametric() {
                    "parameters a, b are required".into()
                } else {
                    "map takes no parameters".into()
                },
            });
        }
        Ok(())
    }

    pub fn invariant(&self, name: &str) -> Result<&NamedExpr> {
        self.invariants
            .iter()
            .find(|i| i.name == name)
            .ok_or_else(|| Error::UnknownInvariant {
                map: self.name.clone(),
                name: name.into(),
            })
    }

    pub fn eval_invariant<T: Field>(&self, name: &str, state: &PairState<T>) -> Result<T> {
        self.invariant(name)?
            .expr
            .eval(&state.flatten(), &state.param_vec())
    }

    /// The same map with its first output coordinate shifted by one.
    pub fn mutated(&self) -> MapDescriptor {
        MapDescriptor {
            name: format!("{}+mutation", self.name),
            kind: MapKind::Mutated(Box::new(self.kind.clone())),
            ..self.clone()
        }
    }

    pub fn from_kind(kind: MapKind) -> MapDescriptor {
        match kind {
            MapKind::Adler => adler(),
            MapKind::Nls6 => nls6(),
            MapKind::AdlerYamilov => adler_yamilov(),
            MapKind::Dnls6Orig => dnls6_orig(),
            MapKind::Dnls6Reparam => dnls6_reparam(),
            MapKind::Dnls4 => dnls4(),
            MapKind::Dihedral6 => dihedral6(),
            MapKind::DihedralLinear => dihedral_linear(),
            MapKind::VectorNls { n, sign } => vector_nls(n, sign),
            MapKind::VectorZ2 { n } => vector_z2(n),
            MapKind::Permutation { point_len } => permutation(point_len),
            MapKind::Mutated(inner) => MapDescriptor::from_kind(*inner).mutated(),
        }
    }
}

fn base(name: &str, kind: MapKind) -> MapDescriptor {
    MapDescriptor {
        name: name.into(),
        kind,
        lax: None,
        invariants: Vec::new(),
        trace_matches: Vec::new(),
        poisson: None,
        casimirs: Vec::new(),
        involutive: false,
        guards: Vec::new(),
    }
}

fn v(i: usize) -> Expr {
    Expr::var(i)
}

fn a() -> Expr {
    Expr::param(0)
}

fn b() -> Expr {
    Expr::param(1)
}

fn tm(power: i32, invariant: &str, offset: Expr) -> TraceMatch {
    TraceMatch {
        power,
        invariant: invariant.into(),
        offset,
    }
}

fn constant_matrix(rows: &[[i64; 4]; 4]) -> Vec<Vec<Expr>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Expr::int(x)).collect())
        .collect()
}

fn adler() -> MapDescriptor {
    // state order: x, y
    MapDescriptor {
        lax: Some(LaxKind::Adler),
        invariants: vec![named("I1", v(0) + v(1))],
        involutive: true,
        guards: vec!["x+y"],
        ..base("adler", MapKind::Adler)
    }
}

fn adler_yamilov() -> MapDescriptor {
    // state order: x1, x2, y1, y2
    let i1 = v(0) * v(1) + v(2) * v(3) + a() + b();
    let i2 = (a() + v(0) * v(1)) * (b() + v(2) * v(3)) + v(0) * v(3) + v(1) * v(2) + Expr::int(1);
    MapDescriptor {
        lax: Some(LaxKind::Nls),
        invariants: vec![named("I1", i1.clone()), named("I2", i2.clone())],
        trace_matches: vec![tm(1, "I1", Expr::int(0)), tm(0, "I2", Expr::int(0))],
        poisson: Some(PoissonStructure {
            matrix: constant_matrix(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
            rank: 4,
            commuting: vec![(named("I1", i1), named("I2", i2))],
        }),
        guards: vec!["1+x1*y2"],
        ..base("adler-yamilov", MapKind::AdlerYamilov)
    }
}

// 6D state order: x1, x2, X, y1, y2, Y
const X1: usize = 0;
const X2: usize = 1;
const BX: usize = 2;
const Y1: usize = 3;
const Y2: usize = 4;
const BY: usize = 5;

fn nls6() -> MapDescriptor {
    MapDescriptor {
        lax: Some(LaxKind::Nls3d),
        invariants: vec![
            named("I1", v(BX) + v(BY)),
            named("I2", v(X2) * v(Y1) + v(X1) * v(Y2) + v(BX) * v(BY)),
        ],
        trace_matches: vec![tm(1, "I1", Expr::int(0)), tm(0, "I2", Expr::int(1))],
        guards: vec!["1+x1*y2"],
        ..base("nls6", MapKind::Nls6)
    }
}

/// `x·πy = x1*y2 + x2*y1`
fn x_dot_pi_y() -> Expr {
    v(X1) * v(Y2) + v(X2) * v(Y1)
}

fn dnls6_orig() -> MapDescriptor {
    MapDescriptor {
        lax: Some(LaxKind::Dnls3d),
        invariants: vec![
            named("I1", v(BX) * v(BY)),
            named("I2", x_dot_pi_y() * v(BX) * v(BY) + v(BX) + v(BY)),
        ],
        trace_matches: vec![tm(4, "I1", Expr::int(0)), tm(2, "I2", Expr::int(0))],
        guards: vec![
            "x1*x2*X+x1*y2*Y-1",
            "x1*y2*X+y1*y2*Y-1",
            "X",
            "y1*y2*Y+x1*y2*X-1",
            "x1*y2*Y+x1*x2*X-1",
            "Y",
        ],
        ..base("dnls6-orig", MapKind::Dnls6Orig)
    }
}

fn dnls6_reparam() -> MapDescriptor {
    MapDescriptor {
        lax: Some(LaxKind::Dnls3dReparam),
        invariants: vec![
            named("I1", v(BX) * v(BY)),
            named("I2", x_dot_pi_y() + v(BX) + v(BY)),
            named("I3", v(X1) + v(Y1)),
            named("I4", v(X2) + v(Y2)),
        ],
        trace_matches: vec![tm(4, "I1", Expr::int(0)), tm(2, "I2", Expr::int(0))],
        guards: vec!["X-x1*(x2+y2)", "Y-y2*(x1+y1)"],
        ..base("dnls6-reparam", MapKind::Dnls6Reparam)
    }
}

fn dnls4() -> MapDescriptor {
    let i1 = (a() + v(0) * v(1)) * (b() + v(2) * v(3));
    let c1 = v(0) + v(2);
    let c2 = v(1) + v(3);
    MapDescriptor {
        lax: Some(LaxKind::Dnls),
        invariants: vec![
            named("I1", i1.clone()),
            named("I2", c1.clone() * c2.clone() + a() + b()),
        ],
        trace_matches: vec![tm(4, "I1", Expr::int(0)), tm(2, "I2", Expr::int(0))],
        poisson: Some(PoissonStructure {
            matrix: constant_matrix(&[[0, 1, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1], [1, 0, -1, 0]]),
            rank: 2,
            commuting: vec![(named("I1", i1), named("C1*C2", c1.clone() * c2.clone()))],
        }),
        casimirs: vec![named("C1", c1), named("C2", c2)],
        guards: vec!["a-x1*y2", "b-x1*y2"],
        ..base("dnls4", MapKind::Dnls4)
    }
}

fn dihedral6() -> MapDescriptor {
    let two = || Expr::int(2);
    let i3 = Expr::sum([
        two() * b() * v(X1) * v(X2) * v(BX),
        two() * a() * v(Y1) * v(Y2) * v(BY),
        two() * (v(X1) * v(Y1) + v(X2) * v(Y2) + v(X1) * v(X2) * v(Y1) * v(Y2)) * v(BX) * v(BY),
        two() * a() * b(),
    ]);
    MapDescriptor {
        lax: Some(LaxKind::Dihedral3d),
        invariants: vec![
            named("I1", v(BX) * v(BY)),
            named(
                "I2",
                b() * v(BX) + a() * v(BY) + (v(X1) + v(Y1)) * (v(X2) + v(Y2)) * v(BX) * v(BY),
            ),
            named("I3", i3),
        ],
        trace_matches: vec![
            tm(4, "I1", Expr::int(0)),
            tm(-4, "I1", Expr::int(0)),
            tm(2, "I2", Expr::int(0)),
            tm(-2, "I2", Expr::int(0)),
            tm(0, "I3", Expr::int(0)),
        ],
        guards: vec![
            "h(x,y,X,Y;a,b)",
            "g(x,y,X,Y;a,b)",
            "h(πy,πx,Y,X;b,a)",
            "g(πy,πx,Y,X;b,a)",
        ],
        ..base("dihedral6", MapKind::Dihedral6)
    }
}

fn dihedral_linear() -> MapDescriptor {
    MapDescriptor {
        guards: vec!["a+1", "b+1", "a+b"],
        ..base("dihedral-linear", MapKind::DihedralLinear)
    }
}

/// `<block i, block j>` over the flattened vector state `[x1, x2, y1, y2]`.
fn block_dot(n: usize, i: usize, j: usize) -> Expr {
    let l: Vec<usize> = (i * n..(i + 1) * n).collect();
    let r: Vec<usize> = (j * n..(j + 1) * n).collect();
    Expr::dot(&l, &r)
}

fn vector_nls(n: usize, sign: NlsSign) -> MapDescriptor {
    let (x1, x2, y1, y2) = (0, 1, 2, 3);
    let xx = block_dot(n, x1, x2);
    let yy = block_dot(n, y1, y2);
    let name = match sign {
        NlsSign::AdlerYamilov => format!("vector-nls:{n}"),
        NlsSign::Reversed => format!("vector-nls-reversed:{n}"),
    };
    let i1 = xx.clone() + yy.clone();
    let i2 = Expr::sum([
        b() * xx.clone(),
        a() * yy.clone(),
        block_dot(n, x1, y2),
        block_dot(n, x2, y1),
        xx * yy,
    ]);
    MapDescriptor {
        lax: Some(LaxKind::VectorNls { n }),
        invariants: vec![named("I1", i1), named("I2", i2)],
        trace_matches: vec![
            tm(1, "I1", a() + b()),
            tm(0, "I2", a() * b() + Expr::int(n as i64)),
        ],
        guards: vec!["1+<x1,y2>"],
        ..base(&name, MapKind::VectorNls { n, sign })
    }
}

fn vector_z2(n: usize) -> MapDescriptor {
    let s1: Vec<Expr> = (0..n).map(|i| v(i) + v(2 * n + i)).collect();
    let s2: Vec<Expr> = (0..n).map(|i| v(n + i) + v(3 * n + i)).collect();
    let i1 = Expr::sum(s1.into_iter().zip(s2).map(|(p, q)| p * q));
    let xx = block_dot(n, 0, 1);
    let yy = block_dot(n, 2, 3);
    let i2 = b() * xx.clone() + a() * yy.clone() + xx * yy;
    MapDescriptor {
        lax: Some(LaxKind::VectorAffine { n }),
        invariants: vec![named("I1", i1), named("I2", i2)],
        trace_matches: vec![tm(2, "I1", a() + b()), tm(4, "I2", a() * b())],
        guards: vec!["a-<x1,y2>", "b-<x1,y2>"],
        ..base(&format!("vector-z2:{n}"), MapKind::VectorZ2 { n })
    }
}

fn permutation(point_len: usize) -> MapDescriptor {
    MapDescriptor {
        // any parameter-free builder works; both sides coincide literally
        lax: (point_len == 3).then_some(LaxKind::Nls3d),
        involutive: true,
        ..base("permutation", MapKind::Permutation { point_len })
    }
}
