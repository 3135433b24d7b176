//! Symbolic realization of `A`, `A†`, `N`, `I` as weighted shifts in the
//! rational gauge, with commutator identities and the Lie closure.
//!
//! The gauge is conjugation by `diag(c_n)` with `c_0 = 1`,
//! `c_{n+1} = √2·b_n·c_n`. It turns `A†` into the unit raising shift and
//! `A` into the lowering shift with weight `2·b_{n-1}²`, so only `b²`
//! appears and every coefficient stays rational. Conjugation preserves
//! brackets, so identities and closure dimensions carry over unchanged.

mod closure;
mod op;

pub use closure::{lie_closure, LieBasis, DEFAULT_MAX_DEPTH, DEFAULT_MAX_DIM};
pub use op::ShiftOp;

use num_traits::One;
use serde_json::{json, Value};

use crate::classifier::diff_table;
use crate::coeffseq::CoeffSeq;
use crate::scalar::rat_int;
use crate::{Error, QRatFun, QShiftOp, Rat, Result};

/// The four generators in the rational gauge.
#[derive(Clone, Debug)]
pub struct Generators {
    pub a: QShiftOp,
    pub adag: QShiftOp,
    pub n: QShiftOp,
    pub id: QShiftOp,
    /// `b_n²` as a rational function, valid from `n = head_len`.
    pub bsq: QRatFun,
    pub head_len: i64,
}

impl Generators {
    pub fn as_vec(&self) -> Vec<QShiftOp> {
        vec![self.a.clone(), self.adag.clone(), self.n.clone(), self.id.clone()]
    }

    /// `B(N)`: eigenvalue `b_{n-1}²` on `e_n`.
    pub fn b_of_n(&self) -> QShiftOp {
        QShiftOp::diag(self.bsq.shift(&-Rat::one()), self.head_len + 1)
    }

    /// `B(N+I)`: eigenvalue `b_n²` on `e_n`.
    pub fn b_of_n_plus_one(&self) -> QShiftOp {
        QShiftOp::diag(self.bsq.clone(), self.head_len)
    }
}

pub fn gauge_generators(seq: &CoeffSeq) -> Result<Generators> {
    let (bsq, head) = seq.rational().ok_or(Error::TableRejected)?;
    let head_len = head.len() as i64;
    let lower = bsq.shift(&-Rat::one()).scale(&rat_int(2));
    Ok(Generators {
        a: QShiftOp::single(-1, lower, head_len + 1),
        adag: QShiftOp::raise(),
        n: QShiftOp::number(),
        id: QShiftOp::identity(),
        bsq,
        head_len,
    })
}

pub fn commutator(t: &QShiftOp, u: &QShiftOp) -> QShiftOp {
    t.commutator(u)
}

/// One operator identity `lhs = rhs`, checked symbolically.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    /// `lhs - rhs` when the identity fails.
    pub residual: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str, lhs: &QShiftOp, rhs: &QShiftOp) -> Self {
        let holds = lhs.same_action(rhs);
        IdentityCheck {
            name: name.to_string(),
            holds,
            lhs: lhs.dump(),
            rhs: rhs.dump(),
            residual: (!holds).then(|| (lhs - rhs).dump()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"identity": self.name, "holds": self.holds, "lhs": self.lhs, "rhs": self.rhs});
        if let Some(r) = &self.residual {
            v["residual"] = json!(r);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    /// Extra data attached to the report, e.g. `C(n)`.
    pub extra: Option<(String, String)>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| !c.holds)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "pass": self.passed(),
            "checks": self.checks.iter().map(IdentityCheck::to_json).collect::<Vec<_>>(),
        });
        if let Some((k, val)) = &self.extra {
            v[k.as_str()] = json!(val);
        }
        v
    }
}

/// `[A, A†] = 2(B(N+I) - B(N))`, `[N, A†] = A†`, `[N, A] = -A`.
pub fn check_ccr(seq: &CoeffSeq) -> Result<IdentityReport> {
    let g = gauge_generators(seq)?;
    let two = rat_int(2);
    let jump = (&g.b_of_n_plus_one() - &g.b_of_n()).scale(&two);
    Ok(IdentityReport {
        checks: vec![
            IdentityCheck::new("[A,Adag] = 2(B(N+I) - B(N))", &g.a.commutator(&g.adag), &jump),
            IdentityCheck::new("[N,Adag] = Adag", &g.n.commutator(&g.adag), &g.adag),
            IdentityCheck::new("[N,A] = -A", &g.n.commutator(&g.a), &-&g.a),
        ],
        extra: None,
    })
}

/// `A A† - G A† A = 2 C(N)` with `C(n) = b_n² - G b_{n-1}²`.
pub fn check_gdeformed(seq: &CoeffSeq, big_g: &Rat) -> Result<IdentityReport> {
    let g = gauge_generators(seq)?;
    let c = &g.bsq - &g.bsq.shift(&-Rat::one()).scale(big_g);
    let lhs = &g.a.compose(&g.adag) - &g.adag.compose(&g.a).scale(big_g);
    let rhs = QShiftOp::diag(c.scale(&rat_int(2)), g.head_len + 1);
    Ok(IdentityReport {
        checks: vec![IdentityCheck::new("A Adag - G Adag A = 2C(N)", &lhs, &rhs)],
        extra: Some(("C".to_string(), c.to_string())),
    })
}

/// `M_0 = [A, A†]`, `M_j = [M_{j-1}, A†]`, together with the check that the
/// only component of `M_j` sits at shift `j` with coefficient `2·𝔙_n^{(j)}`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub ops: Vec<QShiftOp>,
    /// First `(j, n)` where the coefficient disagrees with the difference
    /// table, if any.
    pub mismatch: Option<(usize, i64)>,
    pub checked_upto: i64,
}

impl Ladder {
    pub fn matches(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub const LADDER_CHECK_UPTO: i64 = 16;

pub fn mj_ladder(seq: &CoeffSeq, jmax: usize) -> Result<Ladder> {
    let g = gauge_generators(seq)?;
    let mut ops = vec![g.a.commutator(&g.adag)];
    for _ in 0..jmax {
        let next = ops.last().unwrap().commutator(&g.adag);
        ops.push(next);
    }
    let upto = LADDER_CHECK_UPTO;
    let table = diff_table(seq, jmax, (upto + 1) as usize + jmax.max(1), 0)?;
    let mut mismatch = None;
    'outer: for (j, op) in ops.iter().enumerate() {
        if op.components().keys().any(|&d| d != j as i64) {
            mismatch = Some((j, op.interior_from()));
            break;
        }
        for n in op.interior_from().max(1)..=upto {
            let got = match op.component(j as i64) {
                Some(c) => c.eval(&rat_int(n))?,
                None => Rat::from_integer(0.into()),
            };
            let want = rat_int(2) * table.get(j, n).expect("table covers 0..=upto");
            if got != want {
                mismatch = Some((j, n));
                break 'outer;
            }
        }
    }
    Ok(Ladder {
        ops,
        mismatch,
        checked_upto: upto,
    })
}
