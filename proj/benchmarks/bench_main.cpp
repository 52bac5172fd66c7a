#include "hermite/constants.hpp"
#include "hermite/minima.hpp"
#include "hermite/reduction.hpp"
#include "hermite/sos.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

using namespace hermite;

namespace {

const Field& field(const std::string& name) {
    static std::map<std::string, std::shared_ptr<const Field>> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, load_field_file(std::string(HERMITE_FIELD_DIR) + "/" + name + ".field")).first;
    return *it->second;
}

const char* field_name(int64_t index) {
    static const char* names[] = {"Q", "Q-sqrt2", "Q-sqrt5"};
    return names[index];
}

void BM_HkzReduce(benchmark::State& state) {
    const Field& f = field(field_name(state.range(0)));
    GramForm q = random_pd_form(f, static_cast<std::size_t>(state.range(1)), 17);
    for (auto _ : state) benchmark::DoNotOptimize(hkz_reduce(q));
}
BENCHMARK(BM_HkzReduce)->ArgsProduct({{0, 1, 2}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_BalancedReduce(benchmark::State& state) {
    const Field& f = field(field_name(state.range(0)));
    GramForm q = random_pd_form(f, 3, 17);
    for (auto _ : state) benchmark::DoNotOptimize(balanced_hkz_reduce(q));
}
BENCHMARK(BM_BalancedReduce)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Minimum(benchmark::State& state) {
    const Field& f = field(field_name(state.range(0)));
    GramForm q = random_pd_form(f, 3, 23);
    for (auto _ : state) benchmark::DoNotOptimize(minimum(q));
}
BENCHMARK(BM_Minimum)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_DeriveConstants(benchmark::State& state) {
    const Field& f = field(field_name(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ConstantsTable::derive(f, default_prime(f), 1, 1, 16));
}
BENCHMARK(BM_DeriveConstants)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_FourSquares(benchmark::State& state) {
    Integer n("1000000000000000000000000000057");
    for (auto _ : state) benchmark::DoNotOptimize(four_squares(n));
}
BENCHMARK(BM_FourSquares);

void BM_RepresentElement(benchmark::State& state) {
    const Field& f = field("Q-sqrt5");
    FieldElement a = parse_element(f, "17 + 6*phi");
    for (auto _ : state) benchmark::DoNotOptimize(represent_element(a, 5));
}
BENCHMARK(BM_RepresentElement)->Unit(benchmark::kMillisecond);

void BM_Backbone(benchmark::State& state) {
    const Field& f = field("Q");
    ConstantsTable table(f, read_constants_file(std::string(HERMITE_FIELD_DIR) + "/Q.constants"));
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    Rational scaled = table.thresholds(static_cast<int>(n)).max.upper() * 2;
    Integer c = scaled.get_num() / scaled.get_den();
    FieldMatrix e(n, n, f.zero());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) e(i, j) = f.from_rational(i == j ? Rational(c) : Rational(static_cast<long>(i + j) - 1));
    GramForm q(e);
    for (auto _ : state) benchmark::DoNotOptimize(backbone(q, table));
}
BENCHMARK(BM_Backbone)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
