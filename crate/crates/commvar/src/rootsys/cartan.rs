//! The Cartan matrix catalogue, Bourbaki numbering.
//!
//! Convention: `cartan[i][j] = <alpha_i, alpha_j^v> = 2(alpha_i, alpha_j) / (alpha_j, alpha_j)`
//! with 0-based storage for 1-based Bourbaki node labels. The node layout per
//! family is:
//!
//! | family | diagram (1-based nodes)                                   |
//! |--------|-----------------------------------------------------------|
//! | A_l    | chain 1 - 2 - ... - l                                     |
//! | B_l    | chain 1 - ... - (l-1) => l, alpha_l short                 |
//! | C_l    | chain 1 - ... - (l-1) <= l, alpha_l long                  |
//! | D_l    | chain 1 - ... - (l-2), with (l-1) and l joined to (l-2)   |
//! | E_l    | chain 1 - 3 - 4 - ... - l, with 2 joined to 4             |
//! | F_4    | 1 - 2 => 3 - 4, alpha_1, alpha_2 long                     |
//! | G_2    | 1 <= 2 (triple bond), alpha_1 short                       |
//!
//! A double bond `i => j` (arrow towards the short root `j`) is stored as
//! `cartan[i][j] = -2`, `cartan[j][i] = -1`; the G2 triple bond analogously
//! with -3.

use super::{Family, SimpleType};

/// Cartan matrix of a simple type in Bourbaki numbering.
pub fn cartan_matrix(t: SimpleType) -> Vec<Vec<i32>> {
    let r = t.rank() as usize;
    let mut m = vec![vec![0i32; r]; r];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    let single = |m: &mut Vec<Vec<i32>>, i: usize, j: usize| {
        m[i][j] = -1;
        m[j][i] = -1;
    };
    match t.family() {
        Family::A => {
            for i in 0..r - 1 {
                single(&mut m, i, i + 1);
            }
        }
        Family::B => {
            for i in 0..r.saturating_sub(2) {
                single(&mut m, i, i + 1);
            }
            m[r - 2][r - 1] = -2;
            m[r - 1][r - 2] = -1;
        }
        Family::C => {
            for i in 0..r.saturating_sub(2) {
                single(&mut m, i, i + 1);
            }
            m[r - 2][r - 1] = -1;
            m[r - 1][r - 2] = -2;
        }
        Family::D => {
            for i in 0..r - 2 {
                single(&mut m, i, i + 1);
            }
            single(&mut m, r - 3, r - 1);
        }
        Family::E => {
            single(&mut m, 0, 2);
            single(&mut m, 1, 3);
            for i in 2..r - 1 {
                single(&mut m, i, i + 1);
            }
        }
        Family::F => {
            single(&mut m, 0, 1);
            m[1][2] = -2;
            m[2][1] = -1;
            single(&mut m, 2, 3);
        }
        Family::G => {
            m[0][1] = -1;
            m[1][0] = -3;
        }
    }
    m
}
