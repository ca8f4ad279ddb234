//! Shipped presentations, maps and fields for SL₂.
//!
//! Naming: the one-sided reduction uses `wa wb wc wd wf` so that its letters
//! do not collide with the generators `a b c d` of chiral differential
//! operators or with `C D F` of the two-sided reduction. Free-field names are
//! `eta lamp lamm` (η, λ₊, λ₋) and `bx gx by gy` (β, γ of the two βγ copies).

use std::sync::LazyLock;

use crate::classical::{PoissonMap, PoissonPresentation};
use crate::expr::{parse_expr, FieldExpr};

use super::format::parse;
use super::{AlgebraPresentation, Definitions, HomAssignment, NamedField, PresentationError};

pub const BUILTIN_DEFINITIONS: &str = r#"
algebra EL
generators: eta lamp lamm
bracket eta eta : 2=2*(k+2)
bracket eta lamp : 1=lamp
bracket eta lamm : 1=-lamm
relation: :(lamp lamm): - 1

algebra BetaGamma
generators: bx gx
bracket bx gx : 1=1

algebra DchU
generators: bx gx eta lamp lamm by gy
bracket bx gx : 1=1
bracket eta eta : 2=2*(k+2)
bracket eta lamp : 1=lamp
bracket eta lamm : 1=-lamm
bracket by gy : 1=1
relation: :(lamp lamm): - 1
conformal: :(eta d(lamp) lamm): + :(bx d(gx)): + :(by d(gy)): + (k+1)*:(d(lamp) d(lamm)): - :(d^2(lamp) lamm):

algebra DchG
generators: e h f a b c d
bracket e h : 1=-2*e
bracket e f : 2=k ; 1=h
bracket h h : 2=2*k
bracket h f : 1=-2*f
bracket e b : 1=a
bracket e d : 1=c
bracket h a : 1=a
bracket h b : 1=-b
bracket h c : 1=c
bracket h d : 1=-d
bracket f a : 1=b
bracket f c : 1=d
relation: :(a d): - :(b c): - 1

algebra Wtilde
generators: wa wb wc wd wf
bracket wa wb : 1=1/2*:(wa wa):
bracket wa wd : 1=1/2*:(wa wc):
bracket wb wc : 1=-1/2*:(wa wc):
bracket wc wd : 1=1/2*:(wc wc):
bracket wb wb : 2=(2*k+3)/4*:(wa wa): ; 1=(2*k+3)/4*:(d(wa) wa):
bracket wd wd : 2=(2*k+3)/4*:(wc wc): ; 1=(2*k+3)/4*:(d(wc) wc):
bracket wb wd : 2=(2*k+3)/4*:(wa wc): ; 1=1/2 + (2*k+3)/4*:(d(wa) wc):
bracket wf wa : 2=(2*k+1)/4*wa ; 1=wb
bracket wf wc : 2=(2*k+1)/4*wc ; 1=wd
bracket wf wb : 3=-(k+2)*(2*k+1)/2*wa ; 2=-(2*k+7)/4*wb ; 1=-:(wf wa):
bracket wf wd : 3=-(k+2)*(2*k+1)/2*wc ; 2=-(2*k+7)/4*wd ; 1=-:(wf wc):
bracket wf wf : 4=-(k+2)*(2*k+1)*(3*k+4)/2 ; 2=-2*(k+2)*wf ; 1=-(k+2)*d(wf)
relation: :(wa wd): - :(wb wc): - :(d(wa) wc): - 1

algebra Itilde
generators: C D F
bracket C D : 1=1/2*:(C C):
bracket D D : 2=(2*k+3)/4*:(C C): ; 1=(2*k+3)/4*:(d(C) C):
bracket F C : 2=(2*k+1)/4*C ; 1=D
bracket F D : 3=-(k+2)*(2*k+1)/2*C ; 2=-(2*k+7)/4*D ; 1=-:(F C):
bracket F F : 4=-(k+2)*(2*k+1)*(3*k+4)/2 ; 2=-2*(k+2)*F ; 1=-(k+2)*d(F)
relation: :(F C C): + :(D D): - (2*k+7)/2*(:(C d(D)): - :(d(C) D):) + (2*k+7)/4*:(d(C) d(C)): - (2*k+3)/8*:(d^2(C) C): + 1
conformal: -1/(k+2)*F

map map_r from DchG to DchU
image e : by
image h : eta - 2*:(gy by):
image f : -:(lamm lamm bx): - :(gy gy by): + :(gy eta): + k*d(gy)
image a : :(lamp gx):
image b : :(lamp gx gy): - lamm
image c : lamp
image d : :(lamp gy):

map map_ds1 from Wtilde to BgEL
image wa : :(lamp gx):
image wb : -1/2*:(gx eta lamp): - lamm
image wc : lamp
image wd : -1/2*:(eta lamp):
image wf : -1/4*:(eta eta): - :(bx lamm lamm): - (k+1)/2*d(eta)

map map_nu from Itilde to EL
image C : lamp
image D : -1/2*:(eta lamp):
image F : -1/4*:(eta eta): - :(lamm lamm): - (k+1)/2*d(eta)

map identity_EL from EL to EL
image eta : eta
image lamp : lamp
image lamm : lamm

field omega_U in DchU : :(eta d(lamp) lamm): + :(bx d(gx)): + :(by d(gy)): + (k+1)*:(d(lamp) d(lamm)): - :(d^2(lamp) lamm):
field omega_I in EL : :(eta d(lamp) lamm): - :(d(lamp) d(lamm)): - (k+3)*:(d^2(lamp) lamm): + d(eta)

poisson ZG
generators: X Y S
pbracket S X : Y
pbracket S Y : S*X
pbracket X Y : -1/2*X^2
relation: S*X^2 - Y^2 + 1

poisson KT
generators: b g
laurent: g
pbracket b g : 1/2*g

pmap chart from ZG to KT
image X : g^-1
image Y : -b*g^-1
image S : b^2 + g^2

pmap identity_ZG from ZG to ZG
image X : X
image Y : Y
image S : S
"#;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "DchG",
    "Wtilde",
    "Itilde",
    "EL",
    "BetaGamma",
    "DchU",
    "map_r",
    "map_ds1",
    "map_nu",
    "identity_EL",
    "omega_U",
    "omega_I",
    "piR_data",
    "ZG",
    "KT",
    "chart",
    "identity_ZG",
];

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Algebra(AlgebraPresentation),
    Map(HomAssignment),
    Field(NamedField),
    PiR(PiRData),
    Poisson(PoissonPresentation),
    PoissonMap(PoissonMap),
}

static DEFINITIONS: LazyLock<Definitions> =
    LazyLock::new(|| parse(BUILTIN_DEFINITIONS, false).expect("built-in definitions parse"));

pub fn builtin_definitions() -> &'static Definitions {
    &DEFINITIONS
}

pub fn builtin(name: &str) -> Result<Builtin, PresentationError> {
    let d = builtin_definitions();
    if name == "piR_data" {
        return Ok(Builtin::PiR(pi_r_data()));
    }
    if let Some(a) = d.algebra(name) {
        return Ok(Builtin::Algebra(a.clone()));
    }
    if let Some(m) = d.map(name) {
        return Ok(Builtin::Map(m.clone()));
    }
    if let Some(f) = d.field(name) {
        return Ok(Builtin::Field(f.clone()));
    }
    if let Some(p) = d.poisson(name) {
        return Ok(Builtin::Poisson(p.clone()));
    }
    if let Some(m) = d.poisson_map(name) {
        return Ok(Builtin::PoissonMap(m.clone()));
    }
    Err(PresentationError::UnknownBuiltin(name.to_string()))
}

/// Right-action data on chiral differential operators of SL₂.
///
/// `matrix[i][j]` is the function coefficient `f^{ij}` in
/// `x_R^i = Σⱼ f^{ij}·x_L^j`, and `forms[i]` is the one-form `ω_{xⁱ}` written
/// as a field in the functions `a b c d` and their derivatives. Rows and
/// columns follow `basis = [e, h, f]`; `pairing` is the invariant form with
/// `(e,f) = 1`, `(h,h) = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRData {
    pub basis: [String; 3],
    pub matrix: [[FieldExpr; 3]; 3],
    pub forms: [FieldExpr; 3],
    pub pairing: [[i64; 3]; 3],
}

pub fn pi_r_data() -> PiRData {
    let p = |s: &str| parse_expr(s).expect("built-in expression parses");
    PiRData {
        basis: ["e".into(), "h".into(), "f".into()],
        matrix: [
            [p("-:(d d):"), p("-:(c d):"), p(":(c c):")],
            [p("-2*:(b d):"), p("-:(a d): - :(b c):"), p("2*:(a c):")],
            [p(":(b b):"), p(":(a b):"), p("-:(a a):")],
        ],
        forms: [
            p(":(d d(b)): - :(b d(d)):"),
            p("1/2*(:(d d(a)): + :(c d(b)): - :(b d(c)): - :(a d(d)):)"),
            p("-:(c d(a)): + :(a d(c)):"),
        ],
        pairing: [[0, 0, 1], [0, 2, 0], [1, 0, 0]],
    }
}
