//! Published reference values, stored exactly as printed.
//!
//! Nothing in the library reads these to compute anything; they exist so
//! tests and `verify` can compare computed results against them.

use crate::moduli::PrintedRow;

/// Lower halves (degrees `0..=3g-2`) of the mod-2 framed tables, `g = 1..=6`.
pub const REFERENCE_F2_HALVES: [&[u64]; 6] = [
    &[1, 1],
    &[1, 0, 1, 5, 5],
    &[1, 0, 1, 6, 1, 7, 22, 22],
    &[1, 0, 1, 8, 1, 8, 29, 9, 37, 93, 93],
    &[1, 0, 1, 10, 1, 10, 46, 10, 46, 131, 56, 176, 386, 386],
    &[1, 0, 1, 12, 1, 12, 67, 12, 67, 232, 67, 233, 574, 299, 794, 1586, 1586],
];

/// Lower halves of the rational framed tables, `g = 1..=6`.
pub const REFERENCE_Q_HALVES: [&[u64]; 6] = [
    &[1, 0],
    &[1, 0, 1, 4, 0],
    &[1, 0, 1, 6, 1, 6, 15, 0],
    &[1, 0, 1, 8, 1, 8, 29, 8, 28, 56, 0],
    &[1, 0, 1, 10, 1, 10, 46, 10, 46, 130, 45, 120, 210, 0],
    &[1, 0, 1, 12, 1, 12, 67, 12, 67, 232, 67, 232, 561, 220, 495, 792, 0],
];

const fn row(
    r: i64,
    h: u64,
    nplus: u64,
    mu: (u64, u64, u64),
    rho: (u64, u64, u64),
    nu: (u64, u64, u64),
) -> PrintedRow {
    PrintedRow {
        r,
        h,
        nplus,
        mu,
        rho,
        nu,
    }
}

/// Genus-1 boundary data as printed, including `ň_5 = 1`.
pub const GENUS1_ROWS: &[PrintedRow] = &[
    row(0, 1, 1, (1, 1, 1), (0, 0, 1), (1, 1, 1)),
    row(1, 1, 0, (0, 1, 0), (0, 0, 0), (0, 1, 0)),
    row(2, 1, 1, (1, 2, 1), (1, 1, 1), (1, 1, 1)),
    row(3, 1, 3, (1, 2, 3), (1, 1, 3), (1, 1, 3)),
    row(4, 0, 1, (1, 1, 1), (1, 1, 1), (0, 0, 1)),
    row(5, 0, 1, (0, 1, 0), (0, 1, 0), (0, 0, 0)),
];

/// Genus-2 boundary data as printed.
pub const GENUS2_ROWS: &[PrintedRow] = &[
    row(0, 1, 1, (1, 1, 1), (0, 0, 1), (1, 1, 1)),
    row(1, 0, 0, (0, 0, 0), (0, 0, 0), (0, 0, 0)),
    row(2, 1, 1, (1, 2, 1), (1, 1, 1), (1, 1, 1)),
    row(3, 5, 4, (4, 5, 4), (0, 0, 4), (4, 5, 4)),
    row(4, 5, 1, (1, 6, 1), (1, 1, 1), (1, 5, 1)),
    row(5, 5, 5, (5, 10, 5), (5, 5, 5), (5, 5, 5)),
    row(6, 5, 11, (5, 10, 11), (5, 5, 11), (5, 5, 11)),
    row(7, 1, 5, (5, 6, 5), (5, 5, 5), (1, 1, 5)),
    row(8, 0, 1, (1, 5, 1), (1, 5, 1), (0, 0, 1)),
    row(9, 1, 1, (1, 2, 1), (1, 1, 1), (1, 1, 1)),
    row(10, 0, 0, (0, 0, 0), (0, 0, 0), (0, 0, 0)),
    row(11, 0, 0, (0, 1, 0), (0, 1, 0), (0, 0, 0)),
];

/// Genus-4 framed table and the ker/coker of the 2+2 connecting maps, `r = 0..=21`.
pub const LAMBDA22_H4: [u64; 22] = [
    1, 0, 1, 8, 1, 8, 29, 9, 37, 93, 93, 93, 93, 37, 9, 29, 8, 1, 8, 1, 0, 1,
];
pub const LAMBDA22_COKER: [u64; 22] = [
    1, 0, 1, 8, 1, 8, 29, 8, 29, 68, 85, 68, 85, 20, 1, 12, 0, 0, 0, 0, 0, 0,
];
pub const LAMBDA22_KER: [u64; 22] = [
    0, 0, 0, 0, 0, 0, 1, 8, 25, 8, 25, 8, 17, 8, 17, 8, 1, 8, 1, 0, 1, 0,
];

/// `(coker, ker)` of the 1+1 connecting maps at `r = 0..=4`; `None` where not stated.
pub const LAMBDA11_LOW: [(u64, Option<u64>); 5] =
    [(1, Some(0)), (0, Some(0)), (1, Some(1)), (4, Some(0)), (5, None)];

/// Mod-2 Betti numbers of the unframed genus-2 moduli space.
pub const GENUS2_BASE_DIMS: [u64; 7] = [1, 0, 1, 4, 1, 0, 1];
