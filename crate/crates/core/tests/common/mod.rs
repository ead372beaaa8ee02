#![allow(dead_code)]

use tritower::artin::Ati2;
use tritower::classify::{complex_pattern, screen_ipad, Length, TypeFamily};
use tritower::families::{GroupDescriptor, Tree, Variant};
use tritower::ingest::{parse_records, FieldRecord};
use tritower::invariants::ti;

pub const IPAD_TABLES: [(&str, &str); 4] = [
    ("ipad16", include_str!("../../fixtures/ipad16.txt")),
    ("ipad17", include_str!("../../fixtures/ipad17.txt")),
    ("ipad55", include_str!("../../fixtures/ipad55.txt")),
    ("ipad59", include_str!("../../fixtures/ipad59.txt")),
];

pub const LEAST_DISCRIMINANTS: &str = include_str!("../../fixtures/least_discriminants.txt");
const COMPLEX_GROUND: &str = include_str!("../../fixtures/complex_ground.txt");

pub fn records(name: &str) -> Vec<FieldRecord> {
    let (_, text) = IPAD_TABLES.iter().find(|(n, _)| *n == name).expect("bundled table");
    parse_records(text).expect("fixture parses")
}

/// Row of the complex ground-state tables.
pub struct ComplexRow {
    pub tree: Tree,
    pub lo: u32,
    pub id: String,
    pub ati2: Ati2,
}

pub fn complex_rows() -> Vec<ComplexRow> {
    let alpha0 = ti("321");
    COMPLEX_GROUND
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (head, cells) = l.split_once(" : ").expect("row has cells");
            let mut it = head.split_whitespace();
            let tree = match it.next() {
                Some("Q") => Tree::Q,
                Some("U") => Tree::U,
                other => panic!("bad tree {other:?}"),
            };
            let lo = it.next().unwrap().parse().unwrap();
            let id = it.next().unwrap().to_string();
            let cells: Vec<&str> = cells.split(" | ").collect();
            let ati2 = Ati2::from_cells(&alpha0, &cells).expect("cells parse");
            ComplexRow { tree, lo, id, ati2 }
        })
        .collect()
}

/// State and tree of a record, read from its IPAD and type.
pub fn state_of(r: &FieldRecord) -> (Tree, u32) {
    let screen = screen_ipad(&r.ipad).expect("five components");
    let n = screen.state().and_then(|s| s.n).expect("state is read");
    let tree = match TypeFamily::of(r.tkt.as_ref().expect("typed row")).expect("known type") {
        TypeFamily::Simple(t) | TypeFamily::Complex(t) => t,
    };
    (tree, n)
}

/// Group whose second-order invariants stand for a simple-type row with the given length.
pub fn simple_carrier(type_name: &str, n: u32, length: Length) -> GroupDescriptor {
    let c = 2 * n + 5;
    match (length, type_name) {
        (Length::Exactly2, "E.6") => GroupDescriptor::metabelian(Tree::Q, c, Variant::Primary),
        (Length::Exactly2, "E.14") => GroupDescriptor::metabelian(Tree::Q, c, Variant::SecondA),
        (Length::Exactly2, "E.8") => GroupDescriptor::metabelian(Tree::U, c, Variant::Primary),
        (Length::Exactly2, "E.9") => GroupDescriptor::metabelian(Tree::U, c, Variant::SecondA),
        (Length::Exactly3, "E.6") => GroupDescriptor::cover(0, 0, c),
        (Length::Exactly3, "E.14") => GroupDescriptor::cover(0, -1, c),
        (Length::Exactly3, "E.8") => GroupDescriptor::cover(1, 0, c),
        (Length::Exactly3, "E.9") => GroupDescriptor::cover(1, -1, c),
        other => panic!("no carrier for {other:?}"),
    }
}

/// Pattern standing for a complex-type row: the ground-state table rows for
/// `n = 0`, the criterion shapes otherwise.
pub fn complex_carrier(tree: Tree, n: u32, claim: Length) -> Ati2 {
    let wild = match claim {
        Length::TwoOrThree => false,
        Length::Exactly3 | Length::AtLeast3 => true,
        other => panic!("no complex carrier for {other:?}"),
    };
    if n == 0 {
        let rows = complex_rows();
        let row = rows
            .iter()
            .find(|r| r.tree == tree && (r.lo == 9) == wild && (!wild || r.id.contains("#1;1")))
            .expect("table row");
        row.ati2.clone()
    } else {
        complex_pattern(tree, n, wild, false)
    }
}
