//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status on
//! any failure. Runs without the libtest harness so the report stays readable.

use std::sync::Arc;
use std::time::{Duration, Instant};

use galmod::delpezzo::{
    explicit_kernel_generator, explicit_resolution_dp5, explicit_retraction, intersection, picard_preset,
    reflection_matrix, roots, simple_reflections_dp5, weyl_group, PicardLattice,
};
use galmod::fixtures::{random_descriptor, random_lattice, random_matrix, restricted_natural_lattices, small_groups};
use galmod::linalg::lattice_basis;
use galmod::{
    coflasque_resolution, complement_summand, enumerate_group, h1, h1_cyclic_oracle, is_coflabby, is_invertible,
    is_permutation, is_unimodular, kernel_basis, permutation_lattice, smith_normal_form, FiniteAbelianGroup, GLattice,
    Integer, IntegerMatrix, Invertibility, PermutationVerdict, Subgroup, DEFAULT_ELEMENT_CAP, DEFAULT_ISO_BOUND,
};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: galmod::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn dp5() -> Result<(PicardLattice, Arc<galmod::FiniteMatrixGroup>), String> {
    let p = lib(picard_preset(5))?;
    let g = lib(weyl_group(&p, DEFAULT_ELEMENT_CAP))?;
    Ok((p, Arc::new(g)))
}

fn preserves(p: &PicardLattice, g: &IntegerMatrix) -> bool {
    &(&g.transpose() * &p.pairing) * g == p.pairing && g.mul_vec(&p.canonical).ok().as_ref() == Some(&p.canonical)
}

fn weyl_group_dp5() -> Outcome {
    let p = lib(picard_preset(5))?;
    let group = lib(enumerate_group(5, &simple_reflections_dp5(), DEFAULT_ELEMENT_CAP))?;
    ensure(group.order() == 120, || format!("order {}", group.order()))?;
    ensure(group.elements().iter().all(|g| preserves(&p, g)), || {
        "an element moves the canonical class or the pairing".into()
    })?;
    let rs = roots(&p);
    ensure(rs.len() == 20, || format!("{} roots", rs.len()))?;
    for r in &rs {
        ensure(lib(intersection(&p, r, r))? == Integer::from(-2), || {
            "root of wrong square".into()
        })?;
        ensure(lib(intersection(&p, r, &p.canonical))?.is_zero(), || {
            "root not orthogonal to the canonical class".into()
        })?;
    }
    for g in group.elements() {
        for r in &rs {
            ensure(rs.contains(&lib(g.mul_vec(r))?), || {
                "roots not closed under the action".into()
            })?;
        }
    }
    Ok("|W| = 120, 20 roots closed under W".into())
}

fn explicit_resolution_check() -> Outcome {
    let (_, w) = dp5()?;
    let res = lib(explicit_resolution_dp5(&w, &Subgroup::full(&w)))?;
    let f = res.surjection().matrix();
    let diag = smith_normal_form(f).diagonal();
    ensure(diag.len() == 5 && diag.iter().all(|d| *d == Integer::from(1)), || {
        format!("Smith divisors of f: {diag:?}")
    })?;
    let k = kernel_basis(f);
    ensure(k.cols() == 1, || format!("kernel rank {}", k.cols()))?;
    let x = explicit_kernel_generator();
    let col = k.column(0);
    let neg: Vec<Integer> = col.iter().map(|v| -v).collect();
    ensure(col == x || neg == x, || format!("kernel generator {col:?}"))?;
    ensure(x == [2, 1, 1, 1, 1, 1].map(Integer::from), || format!("x = {x:?}"))?;
    let r = explicit_retraction();
    ensure(r == [-2, 1, 1, 1, 1, 1].map(Integer::from), || format!("r = {r:?}"))?;
    let rx: Integer = r.iter().zip(&x).map(|(a, b)| a * b).sum();
    ensure(rx == Integer::from(1), || format!("r(x) = {rx}"))?;
    ensure(res.verify().all_green(), || format!("{:?}", res.verify()))?;
    ensure(is_coflabby(res.c()).coflabby, || "C is not coflabby".into())?;
    Ok("f surjective, ker f = Z(2,1,1,1,1,1), r∘ι = id, C coflabby".into())
}

fn invertible_all_classes(witnesses: &mut Vec<Invertibility>) -> Outcome {
    let (_, w) = dp5()?;
    let lattices = lib(restricted_natural_lattices(&w))?;
    ensure(lattices.len() == 19, || format!("{} subgroup classes", lattices.len()))?;
    for (i, m) in lattices {
        let inv = lib(is_invertible(&m))?;
        ensure(inv.invertible, || {
            format!("class {i} (order {}) not invertible", m.group().order())
        })?;
        witnesses.push(inv);
    }
    Ok("19/19 classes invertible".into())
}

fn etale_degrees(expr: &Value) -> Vec<Vec<u64>> {
    expr["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|t| t["kind"]["type"] == "etale")
        .map(|t| {
            t["kind"]["algebra"]["degrees"]
                .as_array()
                .map(|d| d.iter().filter_map(Value::as_u64).collect())
                .unwrap_or_default()
        })
        .collect()
}

fn tate_one(expr: &Value) -> usize {
    expr["terms"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|t| t["kind"]["type"] == "tate_unit" && t["twist"] == 1)
        .count()
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["galmod"];
    argv.extend_from_slice(args);
    argv.extend(["--format", "json"]);
    let code = galmod_cli::run(argv, &mut out, &mut err);
    ensure(code == 0, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn motive_theorem() -> Outcome {
    let full = cli_json(&["dp5", "motive", "--assume-zero-cycle"])?;
    let r = &full["result"];
    ensure(r["verdict"] == "zero_dimensional", || {
        format!("verdict {}", r["verdict"])
    })?;
    let degrees = etale_degrees(&r["theorem"]["right"]);
    ensure(degrees == [vec![5]], || format!("full image: E degrees {degrees:?}"))?;

    let trivial = cli_json(&["dp5", "motive", "--assume-zero-cycle", "--subgroup", "1"])?;
    let r = &trivial["result"];
    ensure(trivial["source"]["group_order"] == 1, || {
        "subgroup is not trivial".into()
    })?;
    ensure(r["verdict"] == "zero_dimensional", || {
        format!("verdict {}", r["verdict"])
    })?;
    let degrees = etale_degrees(&r["theorem"]["right"]);
    ensure(degrees == [vec![1, 1, 1, 1, 1]], || {
        format!("trivial image: E degrees {degrees:?}")
    })?;
    let (left, right) = (tate_one(&r["theorem"]["left"]), tate_one(&r["theorem"]["right"]));
    ensure(left == 1 && right == 1, || {
        format!("Z(1) terms: {left} left, {right} right")
    })?;
    Ok("full image E = {5}; trivial image E = {1,1,1,1,1} with Z(1) on both sides".into())
}

fn sign_control() -> Outcome {
    let m = galmod::fixtures::sign_lattice();
    let g = m.group();
    let z2 = FiniteAbelianGroup::from_elementary_divisors([Integer::from(2)]);
    let t = g.generator_by_name("t").ok_or("no generator t")?;
    let cocycle = h1(&m, &Subgroup::full(g));
    let oracle = h1_cyclic_oracle(&m, t);
    ensure(cocycle == z2 && oracle == z2, || {
        format!("cocycle {cocycle}, oracle {oracle}")
    })?;
    let inv = lib(is_invertible(&m))?;
    ensure(!inv.invertible, || "sign lattice reported invertible".into())?;
    let obstruction = inv.obstruction.ok_or("no obstruction certificate")?;
    let verdict = lib(is_permutation(&m, DEFAULT_ISO_BOUND))?;
    ensure(matches!(verdict, PermutationVerdict::NoCertain(_)), || {
        format!("permutation verdict {verdict:?}")
    })?;
    Ok(format!("H^1 = Z/2 twice, obstruction: {obstruction}, permutation: no"))
}

/// The randomized lattices of the oracle suite.
fn oracle_lattices() -> Vec<GLattice> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..60).map(|_| random_lattice(&mut rng, 4, 12, 2)).collect()
}

fn oracle_equivalence(lattices: &[GLattice], witnesses: &mut Vec<Invertibility>) -> Outcome {
    let mut cyclic = 0;
    for (k, m) in lattices.iter().enumerate() {
        let g = m.group();
        for x in 0..g.order() {
            let h = Subgroup::generated_by(g, &[x]);
            let (a, b) = (h1(m, &h), h1_cyclic_oracle(m, x));
            ensure(a == b, || {
                format!("lattice {k}, element {}: {a} vs {b}", g.word_string(x))
            })?;
            cyclic += 1;
        }
        let inv = lib(is_invertible(m))?;
        if inv.invertible {
            witnesses.push(inv);
        }
    }
    Ok(format!("{} lattices, {cyclic} cyclic subgroups agree", lattices.len()))
}

fn shapiro_vanishing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut count = 0;
    for (name, g) in small_groups() {
        for _ in 0..3 {
            let d = random_descriptor(&mut rng, &g, 3);
            let p = lib(permutation_lattice(&g, &d))?;
            for (i, h) in g.catalog().classes().iter().enumerate() {
                let a = h1(&p, h);
                ensure(a.is_trivial(), || {
                    format!("{name}, {}, class {i}: H^1 = {a}", d.describe())
                })?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} descriptors over 8 groups of order <= 24"))
}

fn complement_roundtrip(witnesses: &[Invertibility]) -> Outcome {
    for (k, inv) in witnesses.iter().enumerate() {
        let res = &inv.resolution;
        let s = res
            .splitting()
            .ok_or_else(|| format!("witness {k} has no splitting"))?
            .section()
            .matrix();
        let e = s * res.surjection().matrix();
        ensure(&e * &e == e, || format!("witness {k}: e∘e != e"))?;
        let basis = lattice_basis(&(&IntegerMatrix::identity(res.p().rank()) - &e));
        let block = lib(s.hstack(&basis))?;
        ensure(block.is_square() && lib(is_unimodular(&block))?, || {
            format!("witness {k}: (s | N) not unimodular")
        })?;
        let n = lib(complement_summand(res))?;
        ensure(n.idempotent() == &e && n.witness() == &block, || {
            format!("witness {k}: library complement differs")
        })?;
    }
    Ok(format!("{} witnesses give M + N = P", witnesses.len()))
}

fn dp6_preset() -> Outcome {
    let p = lib(picard_preset(6))?;
    ensure(p.rank() == 4, || format!("rank {}", p.rank()))?;
    let rs = roots(&p);
    ensure(rs.len() == 8, || format!("{} roots", rs.len()))?;
    for r in &rs {
        let s = lib(reflection_matrix(&p, r))?;
        ensure(preserves(&p, &s), || {
            "reflection does not preserve the structure".into()
        })?;
    }
    let w = Arc::new(lib(weyl_group(&p, DEFAULT_ELEMENT_CAP))?);
    ensure(w.order() == 12, || format!("order {}", w.order()))?;
    let m = GLattice::natural(w);
    let res = lib(coflasque_resolution(&m))?;
    let inv = lib(galmod::resolution::split_resolution(res))?;
    ensure(inv.invertible, || "dP6 lattice not invertible".into())?;
    ensure(inv.resolution.verify().all_green(), || {
        "resolution checks failed".into()
    })?;
    Ok(format!(
        "rank 4, 8 roots, |W| = 12, invertible via P = {}",
        inv.resolution.descriptor().describe()
    ))
}

fn smith_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let total = 250;
    for k in 0..total {
        let rows = rand::Rng::gen_range(&mut rng, 1..=6);
        let cols = rand::Rng::gen_range(&mut rng, 1..=6);
        let a = random_matrix(&mut rng, rows, cols, -9, 9);
        let snf = smith_normal_form(&a);
        ensure(&(&snf.u * &a) * &snf.v == snf.s, || format!("matrix {k}: U A V != S"))?;
        ensure(lib(is_unimodular(&snf.u))? && lib(is_unimodular(&snf.v))?, || {
            format!("matrix {k}: U or V not unimodular")
        })?;
        for i in 0..rows {
            for j in 0..cols {
                ensure(i == j || snf.s.get(i, j).is_zero(), || {
                    format!("matrix {k}: S not diagonal")
                })?;
            }
        }
        let d = snf.diagonal();
        for pair in d.windows(2) {
            let divides = if pair[0].is_zero() {
                pair[1].is_zero()
            } else {
                (&pair[1] % &pair[0]).is_zero()
            };
            ensure(pair[0] >= Integer::zero() && divides, || {
                format!("matrix {k}: divisibility fails in {d:?}")
            })?;
        }
    }
    Ok(format!("{total} matrices"))
}

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Option<Duration>,
}

fn report(c: &Criterion, outcome: Outcome, elapsed: Duration) -> bool {
    let secs = elapsed.as_secs_f64();
    let outcome = match (outcome, c.limit) {
        (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {secs:.2} s, limit {} s", limit.as_secs())),
        (o, _) => o,
    };
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {:>2}: {} ({detail}; {secs:.2} s)", c.number, c.title);
            true
        }
        Err(reason) => {
            println!("FAIL criterion {:>2}: {} ({reason}; {secs:.2} s)", c.number, c.title);
            false
        }
    }
}

fn main() {
    let mut dp5_witnesses = Vec::new();
    let mut random_witnesses = Vec::new();
    let lattices = oracle_lattices();
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;
    let mut check = |number, title, limit, f: &mut dyn FnMut() -> Outcome| {
        let c = Criterion { number, title, limit };
        let start = Instant::now();
        let outcome = f();
        all &= report(&c, outcome, start.elapsed());
    };
    check(1, "dP5 Weyl group and roots", secs(5), &mut weyl_group_dp5);
    check(2, "explicit dP5 resolution", secs(1), &mut explicit_resolution_check);
    check(3, "invertibility over all subgroup classes", secs(60), &mut || {
        invertible_all_classes(&mut dp5_witnesses)
    });
    check(4, "dP5 motive theorem", None, &mut motive_theorem);
    check(5, "sign-action negative control", None, &mut sign_control);
    check(6, "cocycle method matches cyclic oracle", None, &mut || {
        oracle_equivalence(&lattices, &mut random_witnesses)
    });
    check(
        7,
        "Shapiro vanishing on permutation lattices",
        None,
        &mut shapiro_vanishing,
    );
    let witnesses: Vec<Invertibility> = dp5_witnesses.drain(..).chain(random_witnesses.drain(..)).collect();
    check(8, "complement roundtrip", None, &mut || {
        complement_roundtrip(&witnesses)
    });
    check(9, "dP6 preset", secs(10), &mut dp6_preset);
    check(10, "Smith normal form properties", None, &mut smith_suite);
    if !all {
        std::process::exit(1);
    }
}
