//! Construction and minimum-distance analysis of the cyclic codes
//! `Ω(q,m,h)` and `Ω̄(q,m,h)` over F_q, a generalization of the punctured
//! binary Reed-Muller codes.
//!
//! `Ω(q,m,h)` has length `n = q^m - 1` and zeros `alpha^a` for every
//! `1 <= a <= n-1` whose base-q expansion has at most `h` non-zero digits.
//! `Ω̄(q,m,h)` additionally vanishes at `1` and at the inverses of those zeros.
//!
//! Modules, bottom up:
//! - [`nt`]: factorization, totient, multiplicative orders.
//! - [`gf`]: finite fields, subfield embedding, polynomials.
//! - [`cyclotomy`]: q-adic weights, zero sets, cyclotomic classes.
//! - [`code`]: generator polynomials, encoding, membership, quotient codewords.
//! - [`bounds`]: distance bounds and their certificates, sphere packing, order search.
//! - [`distance`]: exact minimum distance for small instances.
//! - [`verify`]: the release checklist run by `rmcodes verify-paper`.

pub mod bounds;
pub mod code;
pub mod cyclotomy;
pub mod distance;
pub mod gf;
pub mod golden;
pub mod nt;
pub mod verify;
