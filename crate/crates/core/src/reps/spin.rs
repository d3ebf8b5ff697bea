//! SL(2,C) representations and the two ways of making them real: the spin
//! homomorphism onto SO(3,1) and the realification τ2 into SL(4,R).

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{Provenance, RepError, RepSpec};
use crate::linalg::SquareMatrix;
use crate::words::{Alphabet, Word};

pub type C2 = Matrix2<Complex64>;

const DET_TOL: f64 = 1e-8;

fn check_det(g: &C2) -> Result<(), RepError> {
    let det = g.determinant();
    if (det - 1.0).norm() > DET_TOL {
        return Err(RepError::NotUnimodular { gen: "2x2 complex input".into(), det: det.norm(), tol: DET_TOL });
    }
    Ok(())
}

/// Inverse of a determinant-one 2x2 matrix.
pub fn adjugate(g: &C2) -> C2 {
    C2::new(g[(1, 1)], -g[(0, 1)], -g[(1, 0)], g[(0, 0)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRep2 {
    alphabet: Alphabet,
    images: Vec<C2>,
}

impl ComplexRep2 {
    pub fn new(alphabet: Alphabet, images: Vec<C2>) -> Result<Self, RepError> {
        if images.len() != alphabet.rank() {
            return Err(RepError::Shape { expected: alphabet.rank(), dim: 2, found: format!("{} images", images.len()) });
        }
        for (k, g) in images.iter().enumerate() {
            let det = g.determinant();
            if (det - 1.0).norm() > DET_TOL {
                return Err(RepError::NotUnimodular { gen: alphabet.label(k).to_string(), det: det.norm(), tol: DET_TOL });
            }
        }
        Ok(ComplexRep2 { alphabet, images })
    }

    /// A real 2x2 representation viewed in SL(2,C).
    pub fn from_real(r: &RepSpec) -> Result<Self, RepError> {
        if r.dim() != 2 {
            return Err(RepError::Construction("complexification needs a 2x2 representation".into()));
        }
        let c = |m: &SquareMatrix| C2::new(m.get(0, 0).into(), m.get(0, 1).into(), m.get(1, 0).into(), m.get(1, 1).into());
        Self::new(r.alphabet().clone(), r.images().iter().map(c).collect())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, gen: usize) -> &C2 {
        &self.images[gen]
    }

    pub fn eval(&self, w: &Word) -> C2 {
        w.letters().iter().fold(C2::identity(), |acc, l| {
            let g = &self.images[l.gen];
            acc * if l.inv { adjugate(g) } else { *g }
        })
    }

    /// Real representation `f(image)` for each generator, with inverses
    /// `f(adjugate)`.
    pub fn realify(
        &self,
        f: impl Fn(&C2) -> Result<SquareMatrix, RepError>,
        provenance: Provenance,
    ) -> Result<RepSpec, RepError> {
        let images = self.images.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
        let inverses = self.images.iter().map(|g| f(&adjugate(g))).collect::<Result<Vec<_>, _>>()?;
        RepSpec::with_inverses(self.alphabet.clone(), images, inverses, provenance)
    }
}

/// Hermitian basis `I, σ1, σ2, σ3`; the determinant is the Lorentz form
/// `x0² - x1² - x2² - x3²` in these coordinates.
fn pauli() -> [C2; 4] {
    let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
    [C2::new(o, z, z, o), C2::new(z, o, o, z), C2::new(z, -i, i, z), C2::new(o, z, z, -o)]
}

/// `S(g)_{μν} = tr(σ_μ g σ_ν g*) / 2`, the matrix of `H -> g H g*`.
/// `S(diag(a, 1/a))` is `diag(a², 1, 1, a⁻²)` after a change of basis.
pub fn spin_so31(g: &C2) -> Result<SquareMatrix, RepError> {
    check_det(g)?;
    let s = pauli();
    let gs = g.adjoint();
    let mut rows = vec![vec![0.0; 4]; 4];
    for (mu, row) in rows.iter_mut().enumerate() {
        for (nu, e) in row.iter_mut().enumerate() {
            *e = (s[mu] * g * s[nu] * gs).trace().re / 2.0;
        }
    }
    Ok(SquareMatrix::from_rows(&rows)?)
}

/// `[[Re g, -Im g], [Im g, Re g]]`.
pub fn tau2_realify(g: &C2) -> Result<SquareMatrix, RepError> {
    check_det(g)?;
    let mut rows = vec![vec![0.0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let z = g[(i, j)];
            rows[i][j] = z.re;
            rows[i][j + 2] = -z.im;
            rows[i + 2][j] = z.im;
            rows[i + 2][j + 2] = z.re;
        }
    }
    Ok(SquareMatrix::from_rows(&rows)?)
}

/// The Lorentz form `diag(1, -1, -1, -1)`.
pub fn lorentz_form() -> SquareMatrix {
    SquareMatrix::diag(&[1.0, -1.0, -1.0, -1.0])
}
