use num_complex::Complex64;

use super::ComplexMatrix;

/// Spin axis of a Pauli matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl core::str::FromStr for Axis {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(crate::error::invalid!("unknown Pauli axis {other:?}")),
        }
    }
}

/// The 2x2 Pauli matrix for `axis`.
pub fn sigma(axis: Axis) -> ComplexMatrix {
    let (o, l, i) = (
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
    );
    let entries = match axis {
        Axis::X => [o, l, l, o],
        Axis::Y => [o, -i, i, o],
        Axis::Z => [l, o, o, -l],
    };
    ComplexMatrix::from_vec(2, 2, entries.to_vec()).expect("2x2")
}
