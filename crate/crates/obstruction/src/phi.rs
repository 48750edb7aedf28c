//! The first obstruction `φ`, linear in `s₂₁` with leading term `−24ℛs₂₁`.

use jetalg::{free_derive, p2_residuals, parse_jet, JetPoly, JetRing};

/// The reference transcription of `φ`, kept verbatim for comparison.
pub const PHI_AS_PRINTED: &str = "-24*R*s21 - (24*R*s + 12*R1 - 6*R2)*s1 + (24*R*s + 6*R1 - 8*R2)*s2 + 3*R*s^3 \
    + (-4*R2 - 3*R22 + R21 + 2*R12 - 13*R^2 - 3*R11)*s \
    + 2*R122 - R221 - R112 - 5*R*R1 - 2*R121 - 11*R*R2";

/// Monomials added to the transcription to obtain the derived `φ`.
///
/// Each entry is `(correction, reason)`.
pub const PHI_CORRECTIONS: [(&str, &str); 4] = [
    ("-4*R2*s2", "coefficient of s2 reads -8*R2; the derivation gives -12*R2"),
    ("4*R2*s", "term -4*R2*s has weight 4 in a weight-5 polynomial and is absent from the derivation"),
    ("-14*R*R2", "constant term: R*R2 coefficient"),
    ("2*R122", "constant term: R122 coefficient"),
];

/// `φ` exactly as transcribed, canonicalized but otherwise unmodified.
pub fn build_phi_as_printed() -> JetPoly {
    parse_jet(PHI_AS_PRINTED).expect("transcription parses")
}

/// `φ`: the transcription with the [`PHI_CORRECTIONS`] applied.
pub fn build_phi() -> JetPoly {
    PHI_CORRECTIONS.iter().fold(build_phi_as_printed(), |acc, (c, _)| acc + parse_jet(c).expect("correction parses"))
}

/// `D_a D_b e` in free mode.
fn dd(e: &JetPoly, a: u8, b: u8) -> JetPoly {
    free_derive(&free_derive(e, b), a)
}

/// Derives `φ` from the second-order system.
///
/// With `A₁ = −P₂₁` and `A₂ = −P₂₂`, the combination
/// `D₁₁A₁ − 2D₁₂A₁ + 2D₁₂A₂ − D₂₂A₂` is free of fourth-order jets; reducing its
/// third-order jets with the prolonged system leaves a multiple of `φ`.
pub fn derive_phi_from_p2() -> JetPoly {
    let (p21, p22) = p2_residuals();
    let (a1, a2) = (-p21, -p22);
    let comb = dd(&a1, 1, 1) - dd(&a1, 1, 2).times_int(2) + dd(&a2, 1, 2).times_int(2) - dd(&a2, 2, 2);
    assert!(comb.max_order() <= 3, "fourth-order jets survive in the combination");
    JetRing::p2().normalize(&comb)
}
