use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ro2ss_core::les::{check_main_theorem, check_rotated_exactness};
use ro2ss_core::{e_infinity, er_graded_basis, smith_normal_form, Degree, Grading, IntMatrix, LesWindow, Window};

/// A dense 24×24 matrix with mixed 2-adic valuations, deterministic.
fn test_matrix() -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..24)
        .map(|i| (0..24).map(|j| ((i * 7 + j * 13 + i * j) % 17 - 8) * (1 << ((i + j) % 3))).collect())
        .collect();
    IntMatrix::from_rows(&rows, 24)
}

fn snf(c: &mut Criterion) {
    let m = test_matrix();
    c.bench_function("smith_normal_form 24x24", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn spectral_sequence(c: &mut Criterion) {
    let mut group = c.benchmark_group("e_infinity");
    group.sample_size(10);
    for n in 1..=2u32 {
        let w = Window::new(-12..=12, -12..=12, -4..=4, 1 << (n + 1));
        group.bench_function(format!("n={n} |m|,|p|<=12"), |b| b.iter(|| e_infinity(n, black_box(&w)).unwrap()));
    }
    group.finish();
}

fn presentation(c: &mut Criterion) {
    c.bench_function("er basis n=3, 64 degrees", |b| {
        b.iter(|| {
            (-32..32)
                .map(|m| er_graded_basis(3, Degree::new(m, 0), Grading::VLength(black_box(2))).len())
                .sum::<usize>()
        })
    });
}

fn checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("les");
    group.sample_size(10);
    let w = LesWindow::new(-24..=24, LesWindow::standard_shifts(), -8..=8);
    group.bench_function("rotated exactness n=2", |b| b.iter(|| check_rotated_exactness(2, black_box(&w)).unwrap()));
    group.bench_function("main theorem n=2", |b| b.iter(|| check_main_theorem(2, black_box(&w)).unwrap()));
    group.finish();
}

criterion_group!(benches, snf, spectral_sequence, presentation, checks);
criterion_main!(benches);
