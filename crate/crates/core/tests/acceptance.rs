//! One line per acceptance criterion; exits nonzero when any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tritower::artin::{ati1, ati2, tkt, Tkt, Transfer};
use tritower::classify::{
    babu_soluble_length, classify, simple_pattern, Length, Stages, TypeFamily,
};
use tritower::families::{build, build_uncached, GroupDescriptor, Tree, Variant};
use tritower::pq::rank_report;
use tritower::sigma::{
    find_sigma, find_sigma_with, schur_status, shafarevich_admissible, FieldSignature, SchurClass,
    SigmaError, SigmaOptions,
};
use tritower::{NormalWord, PcPresentation};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(d: &GroupDescriptor) -> Result<std::sync::Arc<PcPresentation>, String> {
    build(d).map_err(|e| e.to_string())
}

const TREES: [Tree; 2] = [Tree::Q, Tree::U];
const SIMPLE: [Variant; 3] = [Variant::Primary, Variant::SecondA, Variant::SecondB];

/// Cover parameters with a metabelian counterpart, and that counterpart.
const CORRESPONDENCES: [(u8, i8, Variant); 5] = [
    (0, 0, Variant::Primary),
    (0, -1, Variant::SecondA),
    (1, 0, Variant::Primary),
    (1, -1, Variant::SecondA),
    (1, 1, Variant::SecondB),
];

fn family_construction() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for tree in TREES {
        for c in [5, 7, 9, 11] {
            for v in Variant::ALL {
                let d = GroupDescriptor::metabelian(tree, c, v);
                let g = build_uncached(&d).map_err(|e| e.to_string())?;
                let s = g.series_and_sizes();
                ensure(s.log_order == c as usize + 2, || format!("{d}: log order {}", s.log_order))?;
                ensure(s.class == c as usize, || format!("{d}: class {}", s.class))?;
                ensure(s.coclass == 2, || format!("{d}: coclass {}", s.coclass))?;
                let v = g.consistency_check();
                ensure(v.is_empty(), || format!("{d}: {} consistency violations", v.len()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} groups, built and checked in {:.2?}", start.elapsed()))
}

fn tkt_table() -> Check {
    let expect = |tree: Tree, v: Variant| match (tree, v) {
        (Tree::Q, Variant::Mainline) => "0122",
        (Tree::Q, Variant::Primary) => "1122",
        (Tree::Q, Variant::SecondA | Variant::SecondB) => "3122",
        (Tree::Q, _) => "2122",
        (Tree::U, Variant::Mainline) => "0231",
        (Tree::U, Variant::Primary) => "1231",
        (Tree::U, Variant::SecondA | Variant::SecondB) => "2231",
        (Tree::U, _) => "4231",
    };
    for tree in TREES {
        for v in Variant::ALL {
            let d = GroupDescriptor::metabelian(tree, 5, v);
            let k = tkt(&*group(&d)?).map_err(|e| e.to_string())?;
            let want: Tkt = expect(tree, v).parse().unwrap();
            ensure(k.equivalent(&want), || format!("{d}: {k} not in the orbit of {want}"))?;
        }
        let want: Tkt = expect(tree, Variant::Mainline).parse().unwrap();
        for c in 4..=8 {
            let d = GroupDescriptor::mainline(tree, c, 2);
            let k = tkt(&*group(&d)?).map_err(|e| e.to_string())?;
            ensure(k.equivalent(&want), || format!("{d}: {k} not in the orbit of {want}"))?;
        }
    }
    Ok("12 variants at c=5 and mainline X_4^2..X_8^2 on both trees".into())
}

fn ati_table() -> Check {
    let cases = [
        (Tree::Q, 5, "[32,111,21,21]"),
        (Tree::U, 5, "[32,21,21,21]"),
        (Tree::Q, 7, "[43,111,21,21]"),
        (Tree::U, 7, "[43,21,21,21]"),
    ];
    for (tree, c, want) in cases {
        for v in Variant::ALL {
            let d = GroupDescriptor::metabelian(tree, c, v);
            let a = ati1(&*group(&d)?).map_err(|e| e.to_string())?;
            ensure(a.matches(want), || format!("{d}: {a}, expected {want}"))?;
        }
    }
    Ok("ground and first excited state, all variants, both trees".into())
}

fn ati2_criteria() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 0..=2u32 {
        let c = 2 * n + 5;
        for tree in TREES {
            let two = simple_pattern(tree, n, Stages::Two);
            let three = simple_pattern(tree, n, Stages::Three);
            for v in SIMPLE {
                let d = GroupDescriptor::metabelian(tree, c, v);
                let a = ati2(&*group(&d)?).map_err(|e| e.to_string())?;
                ensure(a == two, || format!("{d}: {a} differs from {two}"))?;
                count += 1;
            }
            for ell in [-1, 0, 1] {
                let d = GroupDescriptor::cover(tree.e(), ell, c);
                let a = ati2(&*group(&d)?).map_err(|e| e.to_string())?;
                ensure(a == three, || format!("{d}: {a} differs from {three}"))?;
                count += 1;
            }
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:.2?}"))?;
    Ok(format!("{count} groups for n=0,1,2 in {t:.2?}"))
}

fn rank_invariants() -> Check {
    let mut notes = Vec::new();
    for tree in TREES {
        for v in SIMPLE {
            let d = GroupDescriptor::metabelian(tree, 5, v);
            let r = rank_report(&*group(&d)?).map_err(|e| e.to_string())?;
            ensure(r.d2 == 3, || format!("{d}: d2 = {}", r.d2))?;
            notes.push(format!("nu(M)={}", r.nu));
        }
        for &(e, ell, _) in CORRESPONDENCES.iter().filter(|c| c.0 == tree.e()) {
            let d = GroupDescriptor::cover(e, ell, 5);
            let r = rank_report(&*group(&d)?).map_err(|e| e.to_string())?;
            ensure(r.d2 == 2 && r.d1 == 2, || format!("{d}: d1 = {}, d2 = {}", r.d1, r.d2))?;
        }
        let fork = GroupDescriptor::mainline(tree, 4, 2);
        let r = rank_report(&*group(&fork)?).map_err(|e| e.to_string())?;
        ensure(r.nu == 2, || format!("{fork}: nu = {}", r.nu))?;
    }
    notes.dedup();
    Ok(format!("d2(M)=3 ({}), d2(S)=d1=2, nu(X_4^2)=2 on both trees", notes.join(",")))
}

fn sigma_parity() -> Check {
    for tree in TREES {
        for c in [5, 6, 7, 8] {
            for v in Variant::ALL {
                let d = GroupDescriptor::metabelian(tree, c, v);
                let found = find_sigma(&*group(&d)?, false).map_err(|e| e.to_string())?.is_some();
                let want = c % 2 == 1 || v == Variant::Mainline;
                ensure(found == want, || format!("{d}: sigma {found}, expected {want}"))?;
            }
        }
    }
    Ok("odd c=5,7: all 6 variants; even c=6,8: mainline only".into())
}

fn schur_classification() -> Check {
    let opts = SigmaOptions {
        check_h2: true,
        max_log_order: 40,
    };
    let im = FieldSignature::imaginary_quadratic();
    let re = FieldSignature::real_quadratic();
    let mut outside = Vec::new();
    for c in [5, 7, 9] {
        for &(e, ell, _) in &CORRESPONDENCES {
            let d = GroupDescriptor::cover(e, ell, c);
            let s = schur_status(&*group(&d)?, &opts).map_err(|e| e.to_string())?;
            ensure(s.class == SchurClass::Schur, || format!("{d}: {s:?}"))?;
            ensure(shafarevich_admissible(s.d1, s.d2, im).admissible, || format!("{d}: imaginary rejects"))?;
        }
        for tree in TREES {
            for v in Variant::ALL {
                let d = GroupDescriptor::metabelian(tree, c, v);
                let g = group(&d)?;
                if !SIMPLE.contains(&v) {
                    let r = rank_report(&g).map_err(|e| e.to_string())?;
                    outside.push(format!("{d} d2={}", r.d2));
                    continue;
                }
                let s = schur_status(&g, &opts).map_err(|e| e.to_string())?;
                ensure(s.class == SchurClass::SchurPlusOne, || format!("{d}: {s:?}"))?;
                ensure(!shafarevich_admissible(s.d1, s.d2, im).admissible, || format!("{d}: imaginary admits"))?;
                let v = shafarevich_admissible(s.d1, s.d2, re);
                ensure(v.admissible && v.slack == 0, || format!("{d}: real verdict {v:?}"))?;
            }
        }
    }
    let balanced = shafarevich_admissible(2, 2, im).admissible && shafarevich_admissible(2, 2, re).slack == 1;
    ensure(balanced, || "Shafarevich bounds for d1=d2=2".into())?;
    let four: Vec<_> = outside.iter().filter(|s| s.ends_with("d2=4")).collect();
    Ok(format!(
        "covers (5 parameter pairs) Schur, simple metabelian variants Schur+1 for c=5,7,9; {} mainline/complex variants have d2=4 and are outside the Schur+1 claim",
        four.len()
    ))
}

fn metabelianization_bridge() -> Check {
    for n in 0..=2u32 {
        let c = 2 * n + 5;
        for &(e, ell, v) in &CORRESPONDENCES {
            let cover = GroupDescriptor::cover(e, ell, c);
            let m = group(&cover)?.metabelianization();
            let d = GroupDescriptor::metabelian(Tree::from_e(e).unwrap(), c, v);
            let g = group(&d)?;
            let (km, kg) = (tkt(&m).map_err(|e| e.to_string())?, tkt(&g).map_err(|e| e.to_string())?);
            ensure(km.equivalent(&kg), || format!("{cover}: tkt {km} vs {d}: {kg}"))?;
            let (am, ag) = (ati1(&m).map_err(|e| e.to_string())?, ati1(&g).map_err(|e| e.to_string())?);
            ensure(am.sorted() == ag.sorted() && am.alpha0 == ag.alpha0, || {
                format!("{cover}: ati {am} vs {d}: {ag}")
            })?;
            ensure(m.ngens() == g.ngens(), || format!("{cover}: metabelianization order 3^{}", m.ngens()))?;
        }
    }
    Ok("5 correspondences for n=0,1,2".into())
}

fn classifier_fixtures() -> Check {
    let (mut simple, mut complex) = (0, 0);
    for (name, _) in common::IPAD_TABLES {
        for r in common::records(name) {
            let (Some(k), Some(claim)) = (r.tkt, r.length) else { continue };
            let (tree, n) = common::state_of(&r);
            let sig = r.disc.signature();
            match TypeFamily::of(&k) {
                Some(TypeFamily::Simple(_)) if matches!(claim, Length::Exactly2 | Length::Exactly3) => {
                    let d = common::simple_carrier(k.type_name().unwrap(), n, claim);
                    let a = ati2(&*group(&d)?).map_err(|e| e.to_string())?;
                    let v = classify(&k, sig, Some(&a)).map_err(|e| e.to_string())?;
                    ensure(v.length == claim, || {
                        format!("{name} d={}: {} via {d}, table says {}", r.disc.get(), v.length.token(), claim.token())
                    })?;
                    simple += 1;
                }
                Some(TypeFamily::Complex(_)) => {
                    let a = common::complex_carrier(tree, n, claim);
                    let v = classify(&k, sig, Some(&a)).map_err(|e| e.to_string())?;
                    let want = match claim {
                        Length::TwoOrThree => Length::TwoOrThree,
                        _ => Length::AtLeast3,
                    };
                    ensure(v.length == want && v.length.admits(claim), || {
                        format!("{name} d={}: {}, table says {}", r.disc.get(), v.length.token(), claim.token())
                    })?;
                    complex += 1;
                }
                _ => return Err(format!("{name} d={}: unexpected row", r.disc.get())),
            }
        }
    }
    Ok(format!("{simple} simple and {complex} complex rows"))
}

fn soluble_length() -> Check {
    // sporadic column for lo = 8, 11, ..., 65
    const SPORADIC: [u32; 20] = [3, 3, 3, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 6];
    for (k, &sl) in SPORADIC.iter().enumerate() {
        let lo = 8 + 3 * k as u64;
        let m = (lo - 2) / 3;
        let got = babu_soluble_length(m).map_err(|e| e.to_string())?;
        ensure(got == sl, || format!("lo {lo}: sl {got}, table {sl}"))?;
    }
    ensure(babu_soluble_length(1).is_err(), || "m=1 accepted".into())?;
    Ok("20 rows lo=8..65".into())
}

fn oracle_properties() -> Check {
    const CASES: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x3_3_3);
    let ds = [
        GroupDescriptor::metabelian(Tree::Q, 7, Variant::Primary),
        GroupDescriptor::metabelian(Tree::U, 7, Variant::ComplexA),
        GroupDescriptor::cover(0, 0, 5),
        GroupDescriptor::cover(1, -1, 7),
    ];
    let gs: Vec<_> = ds.iter().map(group).collect::<Result<_, _>>()?;
    let random = |rng: &mut ChaCha8Rng, g: &PcPresentation| {
        NormalWord::from_exponents((0..g.ngens()).map(|_| rng.gen_range(0..3)).collect())
    };

    for (d, g) in ds.iter().zip(&gs) {
        for _ in 0..CASES {
            let (a, b, c) = (random(&mut rng, g), random(&mut rng, g), random(&mut rng, g));
            let l = g.multiply(&g.multiply(&a, &b), &c);
            let r = g.multiply(&a, &g.multiply(&b, &c));
            ensure(l == r, || format!("{d}: associativity fails"))?;
        }
    }

    for _ in 0..CASES {
        let g = &gs[rng.gen_range(0..gs.len())];
        let maximals = g.maximal_subgroups();
        let h = &maximals[rng.gen_range(0..4)];
        let base = Transfer::new(g, h).map_err(|e| e.to_string())?;
        let moved = base
            .transversal()
            .iter()
            .map(|t| {
                let s = h.generators().iter().fold(g.identity(), |acc, x| {
                    g.multiply(&acc, &g.pow(x, rng.gen_range(0..3)))
                });
                g.multiply(&s, t)
            })
            .collect();
        let other = Transfer::with_transversal(g, h, moved).map_err(|e| e.to_string())?;
        let x = random(&mut rng, g);
        ensure(base.apply(&x) == other.apply(&x), || "transfer depends on transversal".into())?;
    }

    let mut sections = 0;
    for _ in 0..CASES {
        let g = &gs[rng.gen_range(0..gs.len())];
        let words: Vec<_> = (0..rng.gen_range(1..3)).map(|_| random(&mut rng, g)).collect();
        let h = g.subgroup(&words);
        let mut below = g.derived_of(&h).generators().to_vec();
        let mut n = g.subgroup(&below);
        for t in h.generators().iter().rev() {
            if h.log_order() - n.log_order() <= 5 {
                break;
            }
            below.push(t.clone());
            n = g.subgroup(&below);
        }
        let depths = n.depths();
        let top: Vec<_> = h.generators().iter().filter(|t| !depths.contains(&t.depth().unwrap())).collect();
        let mut orders = Vec::new();
        let mut digits = vec![0u64; top.len()];
        loop {
            let x = top.iter().zip(&digits).fold(g.identity(), |acc, (t, &a)| g.multiply(&acc, &g.pow(t, a)));
            let (mut y, mut k) = (x, 0u32);
            while !n.contains(g, &y) {
                y = g.pow(&y, 3);
                k += 1;
            }
            orders.push(k);
            let Some(pos) = digits.iter().position(|&d| d < 2) else { break };
            digits[pos] += 1;
            digits[..pos].iter_mut().for_each(|d| *d = 0);
        }
        let top_order = orders.iter().copied().max().unwrap_or(0);
        let logs: Vec<u32> = (0..=top_order).map(|k| orders.iter().filter(|&&o| o <= k).count().ilog(3)).collect();
        let mut parts = Vec::new();
        for k in 1..=top_order as usize {
            let next = logs.get(k + 1).map_or(0, |l| l - logs[k]);
            parts.extend(std::iter::repeat(k as u32).take((logs[k] - logs[k - 1] - next) as usize));
        }
        let got = g.section_invariants(&h, &n);
        ensure(got == tritower::TypeInvariants::new(parts), || format!("section invariants {got}"))?;
        sections += 1;
    }

    let kernels: Vec<Tkt> = gs.iter().map(|g| tkt(g)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    for _ in 0..CASES {
        let mut pi = [0usize, 1, 2, 3];
        for i in (1..4).rev() {
            pi.swap(i, rng.gen_range(0..=i));
        }
        let k = if rng.gen_bool(0.5) {
            kernels[rng.gen_range(0..kernels.len())]
        } else {
            Tkt([(); 4].map(|_| rng.gen_range(0..5)))
        };
        ensure(k.relabel(pi).canonical() == k.canonical(), || format!("{k} under {pi:?}"))?;
    }
    Ok(format!("{CASES} cases each; {sections} sections of order <= 3^5"))
}

fn performance_gate() -> Check {
    let start = Instant::now();
    let d = GroupDescriptor::metabelian(Tree::Q, 13, Variant::Primary);
    let g = build_uncached(&d).map_err(|e| e.to_string())?;
    let k = tkt(&g).map_err(|e| e.to_string())?;
    let a1 = ati1(&g).map_err(|e| e.to_string())?;
    let a2 = ati2(&g).map_err(|e| e.to_string())?;
    let r = rank_report(&g).map_err(|e| e.to_string())?;
    let sigma = match find_sigma_with(&g, &SigmaOptions::default()) {
        Ok(w) => format!("sigma {}", w.is_some()),
        Err(SigmaError::Capacity { log_order, .. }) => format!("sigma skipped at log order {log_order}"),
        Err(e) => return Err(e.to_string()),
    };
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:.2?}"))?;
    ensure(g.ngens() == 15, || format!("order 3^{}", g.ngens()))?;
    Ok(format!(
        "{d}: tkt {} ati {a1} ati2 of {} entries d1={} d2={} {sigma} in {t:.2?}",
        k.canonical(),
        a2.entries.len(),
        r.d1,
        r.d2
    ))
}

fn main() {
    let checks: [(&str, fn() -> Check); 12] = [
        ("family construction", family_construction),
        ("TKT table", tkt_table),
        ("ATI", ati_table),
        ("ATI2 criteria", ati2_criteria),
        ("rank invariants", rank_invariants),
        ("sigma parity", sigma_parity),
        ("Schur classification", schur_classification),
        ("metabelianization bridge", metabelianization_bridge),
        ("classifier fixtures", classifier_fixtures),
        ("soluble length formula", soluble_length),
        ("oracle properties", oracle_properties),
        ("performance gate", performance_gate),
    ];
    let mut failed = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{:.2?}]", k + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} [{:.2?}]", k + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
