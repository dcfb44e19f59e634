//! Published reference values the release checklist compares against.

/// Printed `(q, a, l, e)` cells of the odd-order tables for `7 <= q <= 32`.
pub const ORDER_TABLE_CELLS: &[(u64, u64, u64, u64)] = &[
    (7, 2, 3, 9),
    (9, 2, 5, 11),
    (11, 3, 3, 14),
    (13, 5, 3, 18),
    (13, 10, 11, 23),
    (16, 3, 9, 19),
    (16, 5, 3, 21),
    (16, 7, 11, 23),
    (16, 9, 5, 25),
    (16, 13, 7, 29),
    (19, 4, 11, 23),
    (19, 8, 3, 27),
    (23, 6, 7, 29),
    (25, 2, 9, 27),
    (25, 3, 3, 28),
    (25, 4, 7, 29),
    (25, 8, 5, 33),
    (25, 22, 23, 47),
    (27, 19, 11, 46),
    (27, 20, 23, 47),
    (29, 17, 11, 46),
    (29, 20, 7, 49),
    (29, 23, 3, 52),
    (31, 2, 5, 33),
    (31, 12, 21, 43),
    (31, 14, 3, 45),
    (31, 15, 11, 46),
    (32, 15, 23, 47),
    (32, 17, 21, 49),
];

/// Printed `(q, q+1, 2q-1)` bound rows of the same tables.
pub const ORDER_TABLE_BOUNDS: &[(u64, u64, u64)] = &[
    (7, 8, 13),
    (9, 10, 17),
    (11, 12, 21),
    (13, 14, 25),
    (16, 17, 31),
    (19, 20, 37),
    (23, 24, 45),
    (25, 26, 49),
    (27, 28, 53),
    (29, 30, 57),
    (31, 32, 61),
    (32, 33, 63),
];

pub const R_3_4_2: &[u128] = &[1, 2, 4, 5, 7, 8, 10, 11, 20];
pub const M_3_4_2: &[u128] = &[7, 8, 11, 20];
pub const M_3_6_2: &[u128] = &[8, 11, 20, 28, 58];

/// Whether a printed table contains this cell.
pub fn is_printed_cell(q: u64, a: u64, l: u64, e: u64) -> bool {
    ORDER_TABLE_CELLS.contains(&(q, a, l, e))
}
