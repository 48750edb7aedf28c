//! The polynomials `Q₁ … Q₇` from rows 1–3 of 𝒮, their covariant
//! derivatives, and the coefficients of `φ`, `ψ¹`, `ψ²`.
//!
//! With `s₁ = A/D` and `s₂ = B/D`, second derivatives are
//! `D³·s_{ki} = D²∇_iX + D·X′·Y_i − D·X·∇_iD − X·D′·Y_i`, where `X ∈ {A, B}`
//! is the numerator of `s_k`, `Y₁ = A`, `Y₂ = B` and `′ = d/ds`.

use crate::spoly::{Coeff, SPoly};

/// `3×3` determinant with polynomial entries.
pub fn det3<T: Coeff>(m: [[&SPoly<T>; 3]; 3]) -> SPoly<T> {
    let t0 = m[0][0].mul(&m[1][1].mul(m[2][2]).sub(&m[1][2].mul(m[2][1])));
    let t1 = m[0][1].mul(&m[1][0].mul(m[2][2]).sub(&m[1][2].mul(m[2][0])));
    let t2 = m[0][2].mul(&m[1][0].mul(m[2][1]).sub(&m[1][1].mul(m[2][0])));
    t0.sub(&t1).add(&t2)
}

/// `Q₁ = AB − CD` and
/// `Q₂ = D∇₁B − B∇₁D − D∇₂A + A∇₂D + AB′ − BA′ − ℛsD²`.
pub fn q1_q2<T: Coeff>(
    r: &T,
    d: &SPoly<T>,
    a: &SPoly<T>,
    b: &SPoly<T>,
    c: &SPoly<T>,
    nabla: &[[SPoly<T>; 3]; 2],
) -> [SPoly<T>; 2] {
    let q1 = a.mul(b).sub(&c.mul(d));
    let q2 = d
        .mul(&nabla[0][2])
        .sub(&b.mul(&nabla[0][0]))
        .sub(&d.mul(&nabla[1][1]))
        .add(&a.mul(&nabla[1][0]))
        .add(&a.mul(&b.ds()))
        .sub(&b.mul(&a.ds()))
        .sub(&SPoly::monomial(r.clone(), 1).mul(&d.mul(d)));
    [q1, q2]
}

/// Determinant of the 4×4 system `[a b c d]`, expanded along the `c` column.
pub fn det4<T: Coeff>(rows: [&RowParts<T>; 4]) -> SPoly<T> {
    let mut out = SPoly::zero();
    for k in 0..4 {
        let rs: Vec<usize> = (0..4).filter(|&j| j != k).collect();
        let minor = det3([0, 1, 2].map(|i| [0, 1, 3].map(|c| &rows[rs[i]][c])));
        let term = rows[k][2].mul(&minor);
        out = if k % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// `a s₁ + b s₂ + c s₁s₂ + d` as the array `[a, b, c, d]`.
pub type RowParts<T> = [SPoly<T>; 4];

/// Everything needed to form the `Q` polynomials.
#[derive(Clone, Debug)]
pub struct QInputs<T> {
    /// Rows 1–3 of the system.
    pub rows: [RowParts<T>; 3],
    /// `∇₁` and `∇₂` of rows 1–3, coefficientwise.
    pub nabla_rows: [[RowParts<T>; 3]; 2],
    /// `φ = φ₂₁ s₂₁ + φ₁ s₁ + φ₂ s₂ + φ₀`.
    pub phi: [SPoly<T>; 4],
    /// `ψ = ψ₁₁ s₁² + ψ₁₂ s₁s₂ + ψ₂₂ s₂² + ψ₁ s₁ + ψ₂ s₂ + ψ₀`, for `ψ¹` and `ψ²`.
    pub psi: [[SPoly<T>; 6]; 2],
    /// `(ℛ, ℛ₁, ℛ₂)`.
    pub r: [T; 3],
}

/// The intermediate and final polynomials of the `Q` system.
#[derive(Clone, Debug)]
pub struct QSystem<T> {
    pub d: SPoly<T>,
    pub a: SPoly<T>,
    pub b: SPoly<T>,
    pub c: SPoly<T>,
    /// `∇_i` of `(D, A, B)`, indexed `[i − 1][0..3]`.
    pub nabla: [[SPoly<T>; 3]; 2],
    /// `D³` times the second derivatives `s₁₁, s₂₁, s₁₂, s₂₂`.
    pub second: [SPoly<T>; 4],
    /// `Q₁ … Q₇` before content removal.
    pub q: [SPoly<T>; 7],
}

fn dets<T: Coeff>(rows: [[&SPoly<T>; 4]; 3]) -> [SPoly<T>; 4] {
    let nd: Vec<SPoly<T>> = rows.iter().map(|r| r[3].neg()).collect();
    let col = |r: usize, k: usize| -> &SPoly<T> {
        if k == 3 {
            &nd[r]
        } else {
            rows[r][k]
        }
    };
    let pick = |cols: [usize; 3]| det3([0, 1, 2].map(|r| cols.map(|k| col(r, k))));
    [pick([0, 1, 2]), pick([3, 1, 2]), pick([0, 3, 2]), pick([0, 1, 3])]
}

impl<T: Coeff> QSystem<T> {
    pub fn new(inp: &QInputs<T>) -> QSystem<T> {
        let base: [[&SPoly<T>; 4]; 3] = [0, 1, 2].map(|r| [0, 1, 2, 3].map(|k| &inp.rows[r][k]));
        let [d, a, b, c] = dets(base);
        // Leibniz over rows: ∇det = Σ_r det(rows with row r differentiated).
        let nabla = [0, 1].map(|i| {
            let mut acc = [SPoly::zero(), SPoly::zero(), SPoly::zero()];
            for r in 0..3 {
                let mut m = base;
                m[r] = [0, 1, 2, 3].map(|k| &inp.nabla_rows[i][r][k]);
                let [dd, da, db, _] = dets(m);
                acc = [acc[0].add(&dd), acc[1].add(&da), acc[2].add(&db)];
            }
            acc
        });
        Self::assemble(inp, d, a, b, c, nabla)
    }

    /// Builds the system from given determinants and their derivatives.
    pub fn assemble(
        inp: &QInputs<T>,
        d: SPoly<T>,
        a: SPoly<T>,
        b: SPoly<T>,
        c: SPoly<T>,
        nabla: [[SPoly<T>; 3]; 2],
    ) -> QSystem<T> {
        let s = SPoly::<T>::s();
        let [r, r1, r2] = inp.r.clone().map(SPoly::constant);
        let (da, db, dd) = (a.ds(), b.ds(), d.ds());
        let d2 = d.mul(&d);
        let d3 = d2.mul(&d);
        // D³·D_i(X/D) with X′ = xp and the slope numerator y_i.
        // `slot` is 1 for A and 2 for B in `nabla`.
        let second = |x: &SPoly<T>, xp: &SPoly<T>, slot: usize, i: usize, y: &SPoly<T>| {
            let nx = &nabla[i][slot];
            d2.mul(nx).add(&d.mul(xp).mul(y)).sub(&d.mul(x).mul(&nabla[i][0])).sub(&x.mul(&dd).mul(y))
        };
        let s11 = second(&a, &da, 1, 0, &a);
        let s21 = second(&a, &da, 1, 1, &b);
        let s12 = second(&b, &db, 2, 0, &a);
        let s22 = second(&b, &db, 2, 1, &b);

        let [q1, q2] = q1_q2(&inp.r[0], &d, &a, &b, &c, &nabla);
        let two = SPoly::constant(T::from_int(2));
        let rs = r.mul(&s);
        let q3 = s22
            .sub(&two.mul(&s21))
            .add(&s.mul(&b).mul(&d2))
            .sub(&two.mul(&s).mul(&a).mul(&d2))
            .sub(&rs.add(&r2).mul(&d3));
        let q4 = s11
            .sub(&two.mul(&s21))
            .add(&two.mul(&s).mul(&b).mul(&d2))
            .sub(&s.mul(&a).mul(&d2))
            .sub(&rs.add(&r1).mul(&d3));
        let [p21, p1, p2, p0] = &inp.phi;
        let q5 = p21.mul(&s21).add(&p1.mul(&a).mul(&d2)).add(&p2.mul(&b).mul(&d2)).add(&p0.mul(&d3));
        let psi_q = |c: &[SPoly<T>; 6]| {
            c[0].mul(&a)
                .mul(&a)
                .add(&c[1].mul(&a).mul(&b))
                .add(&c[2].mul(&b).mul(&b))
                .add(&c[3].mul(&a).mul(&d))
                .add(&c[4].mul(&b).mul(&d))
                .add(&c[5].mul(&d2))
        };
        let q6 = psi_q(&inp.psi[0]);
        let q7 = psi_q(&inp.psi[1]);
        QSystem { d, a, b, c, nabla, second: [s11, s21, s12, s22], q: [q1, q2, q3, q4, q5, q6, q7] }
    }
}
