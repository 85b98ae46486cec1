//! Small named matrices shared by the corpus and the tests.

use crate::field::Field;
use crate::matrix::Matrix;

/// Companion matrix of `x^2 + x + 1` over `F_2`; `F_2[A]` is the field with 4 elements.
pub fn f4_generator() -> Matrix {
    let f = Field::prime(2).expect("2 is prime");
    Matrix::from_ints(&f, &[&[0, 1], &[1, 1]])
}

/// Companion matrix of `x^2 + x + 2` over `F_3`, an element of order 8.
pub fn singer_f3() -> Matrix {
    let f = Field::prime(3).expect("3 is prime");
    Matrix::from_ints(&f, &[&[0, 1], &[1, 2]])
}

/// Left multiplication by `i` and `j` on the quaternions with basis `1, i, j, k`.
pub fn quaternion_left(q: &Field) -> (Matrix, Matrix) {
    let li = Matrix::from_ints(q, &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
    let lj = Matrix::from_ints(q, &[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
    (li, lj)
}

/// Right multiplication by `i` and `j` on the same basis.
pub fn quaternion_right(q: &Field) -> (Matrix, Matrix) {
    let ri = Matrix::from_ints(q, &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
    let rj = Matrix::from_ints(q, &[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    (ri, rj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_relations() {
        let q = Field::rational();
        let (li, lj) = quaternion_left(&q);
        let (ri, rj) = quaternion_right(&q);
        let minus_one = -&Matrix::identity(&q, 4);
        for m in [&li, &lj, &ri, &rj] {
            assert_eq!(m * m, minus_one);
        }
        assert_eq!(&li * &lj, -&(&lj * &li));
        for l in [&li, &lj] {
            for r in [&ri, &rj] {
                assert!(l.commutes_with(r));
            }
        }
        // Left action on the vector for 1 reproduces the products.
        let one = crate::linalg::unit_vector(&q, 4, 0);
        assert_eq!(li.apply(&one), crate::linalg::unit_vector(&q, 4, 1));
        assert_eq!(lj.apply(&one), crate::linalg::unit_vector(&q, 4, 2));
        assert_eq!((&li * &lj).apply(&one), crate::linalg::unit_vector(&q, 4, 3));
    }
}
