//! Hot paths of the engine: reduction, multiplication, Koszul intersections,
//! degreewise rank, and the full resolution loop.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use dorex::presentation::{build_double_extension, family_k, X1, X2, Y1, Y2};
use dorex::{
    golden_resolution_k, koszul_space, make_rewrite_system, minimal_resolution, quadratic_data,
    DegreeBases, Field, NcPolynomial, RewriteSystem, Word,
};

fn family_system(alpha_num: i64, alpha_den: i64) -> RewriteSystem {
    let alpha = Field::Rational.ratio(alpha_num, alpha_den).unwrap();
    let data = family_k(&alpha).unwrap();
    make_rewrite_system(&build_double_extension(&data)).unwrap()
}

fn bench_normal_form(c: &mut Criterion) {
    let rs = family_system(3, 5);
    // fully reversed degree-8 word: every letter pair needs a rewrite
    let word = Word::from_letters(&[Y2, Y1, X2, X1, Y2, Y1, X2, X1]);
    let p = NcPolynomial::monomial(word, Field::Rational.one());
    c.bench_function("normal_form reversed degree-8 word", |b| {
        b.iter(|| rs.normal_form(black_box(&p)))
    });
}

fn bench_multiply(c: &mut Criterion) {
    let rs = family_system(3, 5);
    let left = rs.normal_form(&NcPolynomial::from_terms([
        (Word::from_letters(&[Y2, X2, Y1, X1]), Field::Rational.from_i64(2)),
        (Word::from_letters(&[X2, X2, Y2, Y2]), Field::Rational.ratio(1, 3).unwrap()),
        (Word::from_letters(&[Y1, Y1, X1, X1]), Field::Rational.from_i64(-1)),
    ]));
    let right = rs.normal_form(&NcPolynomial::from_terms([
        (Word::from_letters(&[Y2, Y1, X2, X1]), Field::Rational.from_i64(1)),
        (Word::from_letters(&[X1, X2, Y1, Y2]), Field::Rational.ratio(-2, 7).unwrap()),
    ]));
    c.bench_function("multiply two degree-4 polynomials", |b| {
        b.iter(|| rs.multiply(black_box(&left), black_box(&right)))
    });
}

fn bench_koszul_spaces(c: &mut Criterion) {
    let alpha = Field::Rational.ratio(3, 5).unwrap();
    let data = family_k(&alpha).unwrap();
    let qd = quadratic_data(&build_double_extension(&data)).unwrap();
    c.bench_function("koszul_space n=4", |b| {
        b.iter(|| koszul_space(black_box(&qd), 4).unwrap())
    });
    c.bench_function("koszul_space n=5", |b| {
        b.iter(|| koszul_space(black_box(&qd), 5).unwrap())
    });
}

fn bench_rank_degree_8(c: &mut Criterion) {
    let alpha = Field::Rational.from_i64(2);
    let rs = family_system(2, 1);
    let complex = golden_resolution_k(&alpha).unwrap();
    let d2 = &complex.maps()[1];
    let mut bases = DegreeBases::new(&rs);
    bases.ensure(8);
    c.bench_function("rank of instantiated d2 in degree 8", |b| {
        b.iter(|| d2.instantiate(&rs, 8, black_box(&bases)).rank())
    });
}

fn bench_minimal_resolution(c: &mut Criterion) {
    let rs = family_system(2, 1);
    let generators: Vec<NcPolynomial> = [X1, X2, Y1, Y2]
        .iter()
        .map(|&g| NcPolynomial::generator(g, Field::Rational))
        .collect();
    let mut group = c.benchmark_group("resolution");
    group.sample_size(10);
    group.bench_function("minimal_resolution trivial module to degree 5", |b| {
        b.iter(|| minimal_resolution(&rs, black_box(&generators), 6, 5).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_normal_form,
    bench_multiply,
    bench_koszul_spaces,
    bench_rank_degree_8,
    bench_minimal_resolution
);
criterion_main!(benches);
