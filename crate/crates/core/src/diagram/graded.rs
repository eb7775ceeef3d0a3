use num::Zero;

use crate::linalg::{FieldSpec, Matrix, Rational};
use crate::persistence::{ModuleMorphism, PersistenceModule};
use crate::poset::FinitePoset;

use super::DiagramError;

/// A vertex of a graded diagram carrying its assigned module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVertex {
    pub label: String,
    pub degree: usize,
    pub shift: Rational,
    pub module: PersistenceModule,
}

impl GradedVertex {
    /// Degree mod 2.
    pub fn parity(&self) -> u8 {
        (self.degree % 2) as u8
    }
}

/// Degree 0, shift 0, carrying the constant rank-one module.
pub fn unit_vertex(index: FinitePoset, field: FieldSpec) -> GradedVertex {
    GradedVertex {
        label: "unit".into(),
        degree: 0,
        shift: Rational::zero(),
        module: PersistenceModule::constant(index, 1, field),
    }
}

/// Degrees and shifts add; the module is the pointwise tensor product.
pub fn graded_product(v: &GradedVertex, w: &GradedVertex) -> Result<GradedVertex, DiagramError> {
    Ok(GradedVertex {
        label: format!("({})x({})", v.label, w.label),
        degree: v.degree + w.degree,
        shift: &v.shift + &w.shift,
        module: v.module.tensor_product(&w.module)?,
    })
}

/// The signed swap `v ⊗ w -> w ⊗ v`, `a ⊗ b ↦ (-1)^{deg v · deg w} b ⊗ a`.
pub fn swap_map(v: &GradedVertex, w: &GradedVertex) -> ModuleMorphism {
    let field = v.module.field();
    let sign = field.from_i64(if (v.degree * w.degree).is_multiple_of(2) { 1 } else { -1 });
    let components = v
        .module
        .dims()
        .iter()
        .zip(w.module.dims())
        .map(|(&a, &b)| {
            let mut m = Matrix::zeros(field, a * b, a * b);
            for i in 0..a {
                for j in 0..b {
                    m.set(j * a + i, i * b + j, sign.clone());
                }
            }
            m
        })
        .collect();
    ModuleMorphism { components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_rational;
    use crate::persistence::find_isomorphism;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn chain() -> FinitePoset {
        FinitePoset::labeled_chain(["0", "1", "2"].iter().map(|s| parse_rational(s).unwrap()).collect()).unwrap()
    }

    fn vertex(degree: usize, intervals: &[(usize, Option<usize>)]) -> GradedVertex {
        GradedVertex {
            label: format!("v{degree}"),
            degree,
            shift: parse_rational("1/2").unwrap(),
            module: PersistenceModule::from_intervals(chain(), intervals, Q).unwrap(),
        }
    }

    #[test]
    fn unit_law() {
        let v = vertex(1, &[(0, Some(2)), (1, None)]);
        let p = graded_product(&v, &unit_vertex(chain(), Q)).unwrap();
        assert_eq!((p.degree, p.shift.clone()), (1, v.shift.clone()));
        assert!(find_isomorphism(&p.module, &v.module).is_some());
    }

    #[test]
    fn degrees_and_dims() {
        let (v, w) = (vertex(1, &[(0, None)]), vertex(1, &[(1, Some(2)), (0, None)]));
        let p = graded_product(&v, &w).unwrap();
        assert_eq!(p.parity(), 0);
        assert_eq!(p.shift, parse_rational("1").unwrap());
        let expected: Vec<usize> = v.module.dims().iter().zip(w.module.dims()).map(|(a, b)| a * b).collect();
        assert_eq!(p.module.dims(), &expected[..]);
    }

    #[test]
    fn swap_signs() {
        let odd = vertex(1, &[(0, None)]);
        let even = vertex(2, &[(0, None)]);
        let minus = swap_map(&odd, &odd);
        assert!(minus.components.iter().all(|c| c == &Matrix::from_i64(Q, &[&[-1]])));
        assert!(swap_map(&odd, &even).components.iter().all(Matrix::is_identity));

        let (v, w) = (vertex(1, &[(0, None), (1, None)]), vertex(3, &[(0, Some(2)), (0, None), (2, None)]));
        let there = swap_map(&v, &w);
        let back = swap_map(&w, &v);
        there.check(&graded_product(&v, &w).unwrap().module, &graded_product(&w, &v).unwrap().module).unwrap();
        assert!(there.then(&back).components.iter().all(Matrix::is_identity));
    }
}
