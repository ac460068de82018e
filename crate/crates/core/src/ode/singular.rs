use serde::Serialize;

use super::OdeError;
use crate::algebra::{Algebra, AnyAlgebra};
use crate::classify::{barycentric_of, AlgebraReport};
use crate::poly::quadratic_roots;
use crate::scalar::Complex64;
use crate::solver::BOUNDARY_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularLabel {
    Saddle,
    StableNode,
    UnstableNode,
    StableFocus,
    UnstableFocus,
    /// Purely imaginary eigenvalues of the linearization; nonlinear terms may still make it a focus.
    Center,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPointClass {
    pub point: Vec<f64>,
    /// Eigenvalues of `2 L_c - I`.
    pub eigenvalues: [(f64, f64); 2],
    pub label: SingularLabel,
    pub antisaddle: bool,
    /// Sign of the determinant of the central-difference Jacobian of `x^2 - x`.
    pub fd_det_sign: i8,
    /// Largest entrywise gap between the analytic and finite-difference Jacobians.
    pub fd_max_error: f64,
}

/// Linearizes `x^2 - x` at each point of a 2D algebra.
pub fn classify_singular_points(alg: &Algebra<f64>, points: &[Vec<f64>]) -> Result<Vec<SingularPointClass>, OdeError> {
    if alg.dim() != 2 {
        return Err(OdeError::NotApplicable(format!("singular points are classified in dimension 2, not {}", alg.dim())));
    }
    points.iter().map(|c| classify_point(alg, c)).collect()
}

fn classify_point(alg: &Algebra<f64>, c: &[f64]) -> Result<SingularPointClass, OdeError> {
    let j = alg.psi_jacobian(c).map_err(|e| OdeError::Invalid(e.to_string()))?;
    let (tr, det) = (j.trace(), j.det());
    let [a, b] = quadratic_roots(Complex64::new(1.0, 0.0), Complex64::new(-tr, 0.0), Complex64::new(det, 0.0));
    let (mut e1, mut e2) = (a, b);
    let scale = j.max_abs().max(1.0);
    let tol = BOUNDARY_TOL * scale;
    if e1.im.abs() <= tol && e2.im.abs() <= tol {
        e1.im = 0.0;
        e2.im = 0.0;
        if e1.re > e2.re {
            std::mem::swap(&mut e1, &mut e2);
        }
    } else if e1.im > e2.im {
        std::mem::swap(&mut e1, &mut e2);
    }
    let label = if e1.norm() <= tol || e2.norm() <= tol {
        SingularLabel::Degenerate
    } else if e1.im == 0.0 {
        match (e1.re > 0.0, e2.re > 0.0) {
            (true, true) => SingularLabel::UnstableNode,
            (false, false) => SingularLabel::StableNode,
            _ => SingularLabel::Saddle,
        }
    } else if e1.re.abs() <= tol {
        SingularLabel::Center
    } else if e1.re < 0.0 {
        SingularLabel::StableFocus
    } else {
        SingularLabel::UnstableFocus
    };
    let h = 1e-5 * c.iter().map(|x| x.abs()).fold(1.0, f64::max);
    let mut fd_max_error: f64 = 0.0;
    let mut fd = [[0.0; 2]; 2];
    for k in 0..2 {
        let mut plus = c.to_vec();
        let mut minus = c.to_vec();
        plus[k] += h;
        minus[k] -= h;
        let (fp, fm) = (alg.psi(&plus).expect("2D"), alg.psi(&minus).expect("2D"));
        for i in 0..2 {
            fd[i][k] = (fp[i] - fm[i]) / (2.0 * h);
            fd_max_error = fd_max_error.max((fd[i][k] - j[(i, k)]).abs());
        }
    }
    let fd_det = fd[0][0] * fd[1][1] - fd[0][1] * fd[1][0];
    Ok(SingularPointClass {
        point: c.to_vec(),
        eigenvalues: [(e1.re, e1.im), (e2.re, e2.im)],
        label,
        antisaddle: !matches!(label, SingularLabel::Saddle | SingularLabel::Degenerate),
        fd_det_sign: crate::scalar::sign_of(fd_det, tol),
        fd_max_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BerlinskiiShape {
    TriangleWithInterior,
    ConvexQuadrilateral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructuralLabel {
    InnerSaddleOuterAntisaddles,
    InnerAntisaddleOuterSaddles,
    QuadrilateralAlternating,
    /// A saddle pattern outside the three structural cases.
    Unrecognized,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BerlinskiiConfig {
    pub shape: BerlinskiiShape,
    pub interior_point: Option<usize>,
    pub structural_label: StructuralLabel,
    pub saddles: Vec<usize>,
    /// For a quadrilateral, the vertex opposite to each vertex.
    pub opposite: Option<Vec<usize>>,
}

/// Places four singular points: one inside the triangle of the others, or in convex position.
pub fn berlinskii_configuration(classes: &[SingularPointClass]) -> Result<BerlinskiiConfig, OdeError> {
    if classes.len() != 4 || classes.iter().any(|c| c.point.len() != 2) {
        return Err(OdeError::NotApplicable("need four singular points in the plane".into()));
    }
    let mut interior = None;
    let mut opposite = Vec::with_capacity(4);
    for i in 0..4 {
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        let verts: Vec<Vec<f64>> = others.iter().map(|&j| classes[j].point.clone()).collect();
        let b = barycentric_of(&classes[i].point, &verts)
            .ok_or_else(|| OdeError::Degenerate("three singular points are collinear".into()))?;
        if b.iter().any(|x| x.abs() <= BOUNDARY_TOL) {
            return Err(OdeError::Degenerate("a singular point lies on a line through two others".into()));
        }
        let negatives: Vec<usize> = (0..3).filter(|&k| b[k] < 0.0).collect();
        match negatives.len() {
            0 => interior = Some(i),
            1 => opposite.push(others[negatives[0]]),
            _ => opposite.push(usize::MAX),
        }
    }
    let saddles: Vec<usize> = (0..4).filter(|&i| classes[i].label == SingularLabel::Saddle).collect();
    if classes.iter().any(|c| c.label == SingularLabel::Degenerate) {
        return Err(OdeError::Degenerate("a singular point has a zero eigenvalue".into()));
    }
    Ok(match interior {
        Some(k) => {
            let outer_saddles = saddles.iter().filter(|&&s| s != k).count();
            let inner_saddle = saddles.contains(&k);
            let label = match (inner_saddle, outer_saddles) {
                (true, 0) => StructuralLabel::InnerSaddleOuterAntisaddles,
                (false, 3) => StructuralLabel::InnerAntisaddleOuterSaddles,
                _ => StructuralLabel::Unrecognized,
            };
            BerlinskiiConfig { shape: BerlinskiiShape::TriangleWithInterior, interior_point: Some(k), structural_label: label, saddles, opposite: None }
        }
        None => {
            let alternating = saddles.len() == 2 && opposite[saddles[0]] == saddles[1];
            BerlinskiiConfig {
                shape: BerlinskiiShape::ConvexQuadrilateral,
                interior_point: None,
                structural_label: if alternating { StructuralLabel::QuadrilateralAlternating } else { StructuralLabel::Unrecognized },
                saddles,
                opposite: Some(opposite),
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseAnalysis {
    pub classes: Vec<SingularPointClass>,
    pub berlinskii: BerlinskiiConfig,
}

/// Singular-point classes and the Berlinskii configuration of a classified 2D algebra.
pub fn phase_analysis(alg: &AnyAlgebra, report: &AlgebraReport) -> Result<PhaseAnalysis, OdeError> {
    if !report.is_classifiable() {
        return Err(OdeError::NotApplicable("needs a two-dimensional real generic algebra".into()));
    }
    let classes = classify_singular_points(&alg.to_f64(), &report.real_points())?;
    let berlinskii = berlinskii_configuration(&classes)?;
    Ok(PhaseAnalysis { classes, berlinskii })
}
