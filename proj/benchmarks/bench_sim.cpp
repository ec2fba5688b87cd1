#include <numbers>

#include <benchmark/benchmark.h>

#include "wban/engine.hpp"
#include "wban/oracle.hpp"

namespace {

using namespace wban;

constexpr double kPi = std::numbers::pi;

void BM_DrawGain(benchmark::State& state) {
  const ChannelParams p{47.14, 50.0, 4.26, 7.85};
  const LinkGeometry geo{LinkKind::InBodyToOnBody, 120.0};
  RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(draw_gain(p, geo, rng).power_gain);
}
BENCHMARK(BM_DrawGain);

void BM_ModulateDemodulate(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto theta = order == 4 ? std::vector<double>{kPi / 4.0}
                                : std::vector<double>{kPi / 4.0, kPi / 15.0};
  const Constellation c = build_constellation(order, theta);
  const NoiseModel noise{-117.73};
  const ChannelGain gain{db_to_linear(-60.0), -60.0};
  const double amp = received_amplitude(-20.0, gain);
  RngStream rng(2);
  std::vector<std::uint8_t> bits(c.bits_per_symbol * 64), out;
  for (auto& b : bits) b = rng.coin();
  const auto symbols = modulate(bits, c);
  for (auto _ : state) {
    out.clear();
    for (const auto& s : symbols)
      demodulate_bits(transmit_symbol(s, -20.0, gain, noise, rng), c, amp, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(symbols.size()));
}
BENCHMARK(BM_ModulateDemodulate)->Arg(4)->Arg(8);

void BM_SlotLoop(benchmark::State& state) {
  SimConfig cfg;
  cfg.topology.relays = {RelayGeometry{}};
  cfg.packets = state.range(0);
  cfg.symbols_per_packet = 1;
  for (auto _ : state) {
    const MetricsReport rep = run_trial(cfg, 3);
    benchmark::DoNotOptimize(rep.total_slots);
  }
  state.SetItemsProcessed(state.iterations() * cfg.packets);
}
BENCHMARK(BM_SlotLoop)->Arg(1000)->Arg(10000);

void BM_ChainDelay(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ChainStats st = chain_delay(build_chain(ProtocolKind::Protocol1, L, 0.5));
    benchmark::DoNotOptimize(st.avg_system_delay);
  }
}
BENCHMARK(BM_ChainDelay)->Arg(10)->Arg(100);

void BM_ConditionalBer(benchmark::State& state) {
  const Constellation c = build_constellation(8, {kPi / 4.0, kPi / 15.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(conditional_ber(c, db_to_linear(14.0), BitClass::Hp));
}
BENCHMARK(BM_ConditionalBer);

}  // namespace

BENCHMARK_MAIN();
